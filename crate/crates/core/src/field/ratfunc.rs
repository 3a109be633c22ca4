//! Rational functions in `t` over `Q`, with the `t`-adic valuation.
//!
//! The value group is `Z` and the residue field is `Q`. Elements are kept
//! reduced (coprime numerator/denominator, monic denominator), so structural
//! equality is field equality.

use std::fmt;

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::rational::{GammaVal, Rat};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RatFunc {
                num: Poly::zero(),
                den: Poly::one(),
            });
        }
        if den.degree() == Some(0) {
            let inv = den.coeff(0).recip().expect("nonzero constant");
            return Ok(RatFunc {
                num: num.scale(&inv),
                den: Poly::one(),
            });
        }
        let g = num.gcd(&den);
        let (num, _) = num.divmod(&g);
        let (den, _) = den.divmod(&g);
        let lead = den.leading().expect("nonzero denominator").clone();
        let inv = lead.recip().expect("nonzero leading coefficient");
        Ok(RatFunc {
            num: num.scale(&inv),
            den: den.scale(&inv),
        })
    }

    pub fn zero() -> Self {
        RatFunc {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        RatFunc {
            num: Poly::one(),
            den: Poly::one(),
        }
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFunc {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn from_rat(q: Rat) -> Self {
        RatFunc::from_poly(Poly::constant(q))
    }

    /// `t^k`, for any integer `k` (negative exponents go to the denominator).
    pub fn t_pow(k: i64) -> Self {
        if k >= 0 {
            RatFunc::from_poly(Poly::monomial(Rat::one(), k as usize))
        } else {
            RatFunc {
                num: Poly::one(),
                den: Poly::monomial(Rat::one(), (-k) as usize),
            }
        }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn val(&self) -> GammaVal {
        match self.num.ord() {
            None => GammaVal::Infinity,
            Some(on) => {
                let od = self.den.ord().expect("nonzero denominator");
                GammaVal::finite(on as i64 - od as i64)
            }
        }
    }

    /// Residue at valuation 0: ratio of the lowest coefficients.
    pub fn residue(&self) -> Result<Rat> {
        match self.val() {
            GammaVal::Finite(v) if v.is_zero() => {
                let on = self.num.ord().unwrap();
                let od = self.den.ord().unwrap();
                Ok(&self.num.coeff(on) / &self.den.coeff(od))
            }
            v => Err(Error::ValNonzero(v.to_string())),
        }
    }

    pub fn add(&self, rhs: &RatFunc) -> RatFunc {
        let num = self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den));
        let den = self.den.mul(&rhs.den);
        RatFunc::new(num, den).expect("nonzero denominator")
    }

    pub fn sub(&self, rhs: &RatFunc) -> RatFunc {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, rhs: &RatFunc) -> RatFunc {
        RatFunc::new(self.num.mul(&rhs.num), self.den.mul(&rhs.den)).expect("nonzero denominator")
    }

    pub fn inv(&self) -> Result<RatFunc> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, rhs: &RatFunc) -> Result<RatFunc> {
        Ok(self.mul(&rhs.inv()?))
    }

    pub fn scale(&self, c: &Rat) -> RatFunc {
        RatFunc::new(self.num.scale(c), self.den.clone()).expect("nonzero denominator")
    }

    /// Laurent-expansion truncation: the sum of all terms of the `t`-adic
    /// expansion with exponent `< cutoff`. The remainder has valuation
    /// `≥ cutoff`, and truncation is idempotent.
    pub fn section(&self, cutoff: i64) -> RatFunc {
        let v = match self.val() {
            GammaVal::Infinity => return RatFunc::zero(),
            GammaVal::Finite(v) => v.to_i64().expect("integral valuation"),
        };
        if cutoff <= v {
            return RatFunc::zero();
        }
        let terms = (cutoff - v) as usize;
        let on = self.num.ord().unwrap();
        let od = self.den.ord().unwrap();
        let n1 = self.num.shift_down(on);
        let d1 = self.den.shift_down(od);
        let series = series_div(&n1, &d1, terms);
        laurent(series, v)
    }

    /// Like [`section`](Self::section) but keeps exponents `≤ cutoff`.
    pub fn section_closed(&self, cutoff: i64) -> RatFunc {
        self.section(cutoff + 1)
    }
}

/// `series · t^shift` as a reduced rational function.
fn laurent(series: Poly, shift: i64) -> RatFunc {
    if series.is_zero() {
        return RatFunc::zero();
    }
    if shift >= 0 {
        RatFunc::from_poly(series.shift_up(shift as usize))
    } else {
        RatFunc::new(series, Poly::monomial(Rat::one(), (-shift) as usize))
            .expect("nonzero denominator")
    }
}

/// First `terms` coefficients of the power series `n/d`; requires `d(0) ≠ 0`.
fn series_div(n: &Poly, d: &Poly, terms: usize) -> Poly {
    let d0 = d.coeff(0);
    assert!(!d0.is_zero(), "series division needs a unit constant term");
    let d0_inv = d0.recip().unwrap();
    let mut out = Vec::with_capacity(terms);
    for k in 0..terms {
        let mut acc = n.coeff(k);
        for (j, c) in out.iter().enumerate().take(k) {
            acc = acc - &d.coeff(k - j) * c;
        }
        out.push(&acc * &d0_inv);
    }
    Poly::from_coeffs(out)
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == Poly::one() {
            return write!(f, "{}", self.num);
        }
        // Pure t-power denominators render as Laurent polynomials.
        if self.den.ord() == self.den.degree() {
            let k = self.den.ord().unwrap();
            let mut first = true;
            for (i, c) in self.num.coeffs().iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let e = i as i64 - k as i64;
                let mut cs = c.to_string();
                if first {
                    first = false;
                } else if let Some(mag) = cs.strip_prefix('-') {
                    write!(f, " - ")?;
                    cs = mag.to_string();
                } else {
                    write!(f, " + ")?;
                }
                match (cs.as_str(), e) {
                    (_, 0) => write!(f, "{cs}")?,
                    ("1", 1) => write!(f, "t")?,
                    ("-1", 1) => write!(f, "-t")?,
                    ("1", _) => write!(f, "t^{e}")?,
                    ("-1", _) => write!(f, "-t^{e}")?,
                    (_, 1) => write!(f, "{cs}*t")?,
                    _ => write!(f, "{cs}*t^{e}")?,
                }
            }
            if first {
                write!(f, "0")?;
            }
            return Ok(());
        }
        write!(f, "({})/({})", self.num, self.den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t() -> RatFunc {
        RatFunc::t_pow(1)
    }

    #[test]
    fn val_of_quotient() {
        // t^2 / (1 + t) has valuation 2.
        let x = RatFunc::t_pow(2)
            .div(&RatFunc::one().add(&t()))
            .unwrap();
        assert_eq!(x.val(), GammaVal::finite(2));
        assert_eq!(RatFunc::zero().val(), GammaVal::Infinity);
    }

    #[test]
    fn residue_examples() {
        // (2 + t)/(1 + t) -> 2
        let x = RatFunc::from_rat(Rat::from_int(2))
            .add(&t())
            .div(&RatFunc::one().add(&t()))
            .unwrap();
        assert_eq!(x.residue().unwrap(), Rat::from_int(2));
        assert_eq!(RatFunc::one().residue().unwrap(), Rat::one());
        // (1 + t)/(2 - t) -> 1/2
        let y = RatFunc::one()
            .add(&t())
            .div(&RatFunc::from_rat(Rat::from_int(2)).sub(&t()))
            .unwrap();
        assert_eq!(y.residue().unwrap(), Rat::new(1, 2));
        assert!(t().residue().is_err());
    }

    #[test]
    fn section_geometric_series() {
        // Expansion of 1/(1-t) truncated below t^3 is 1 + t + t^2.
        // Oracle: solve (1-t)·s ≡ 1 mod t^3 by the coefficient recurrence.
        let x = RatFunc::one().div(&RatFunc::one().sub(&t())).unwrap();
        let s = x.section(3);
        let mut oracle = vec![Rat::zero(); 3];
        oracle[0] = Rat::one();
        for k in 1..3 {
            oracle[k] = oracle[k - 1].clone(); // c_k = c_{k-1} for 1/(1-t)
        }
        assert_eq!(s, RatFunc::from_poly(Poly::from_coeffs(oracle)));
        // Remainder valuation and idempotence.
        assert!(x.sub(&s).val() >= GammaVal::finite(3));
        assert_eq!(s.section(3), s);
    }

    #[test]
    fn section_edge_cases() {
        assert_eq!(RatFunc::t_pow(2).section(1), RatFunc::zero());
        // t^-1 + 5 truncated below t^0 is t^-1.
        let x = RatFunc::t_pow(-1).add(&RatFunc::from_rat(Rat::from_int(5)));
        assert_eq!(x.section(0), RatFunc::t_pow(-1));
    }
}
