//! Truncated Puiseux series over `Q`: finite sums of rational powers of `t`
//! together with a precision bound.
//!
//! The value group is `Q`. An element is either exact (the term list is the
//! whole element; this includes the literal zero) or a jet known modulo
//! `t^prec`. Precision propagates pessimistically through arithmetic, and
//! operations whose result would depend on unknown tail terms fail with
//! `PRECISION_EXHAUSTED` instead of guessing.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::rational::{GammaVal, Rat};

/// Precision marker: `Exact` means the stored terms are the entire element.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Prec {
    Exact,
    Bound(Rat),
}

impl Prec {
    fn min(&self, other: &Prec) -> Prec {
        match (self, other) {
            (Prec::Exact, p) => p.clone(),
            (p, Prec::Exact) => p.clone(),
            (Prec::Bound(a), Prec::Bound(b)) => Prec::Bound(a.min(b).clone()),
        }
    }

    fn admits(&self, exp: &Rat) -> bool {
        match self {
            Prec::Exact => true,
            Prec::Bound(b) => exp < b,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Puiseux {
    /// `(coefficient, exponent)` pairs, exponents strictly increasing,
    /// no zero coefficients, every exponent below the precision bound.
    terms: Vec<(Rat, Rat)>,
    prec: Prec,
}

impl Puiseux {
    pub fn new(terms: Vec<(Rat, Rat)>, prec: Prec) -> Self {
        let mut terms = terms;
        terms.sort_by(|a, b| a.1.cmp(&b.1));
        let mut merged: Vec<(Rat, Rat)> = Vec::with_capacity(terms.len());
        for (c, e) in terms {
            if !prec.admits(&e) {
                continue;
            }
            match merged.last_mut() {
                Some(last) if last.1 == e => last.0 = &last.0 + &c,
                _ => merged.push((c, e)),
            }
        }
        merged.retain(|(c, _)| !c.is_zero());
        Puiseux {
            terms: merged,
            prec,
        }
    }

    /// The literal zero (known exactly).
    pub fn zero() -> Self {
        Puiseux {
            terms: Vec::new(),
            prec: Prec::Exact,
        }
    }

    /// Zero up to `t^bound`: an element indistinguishable from 0 at this precision.
    pub fn zero_to(bound: Rat) -> Self {
        Puiseux {
            terms: Vec::new(),
            prec: Prec::Bound(bound),
        }
    }

    pub fn one() -> Self {
        Puiseux::from_rat(Rat::one())
    }

    pub fn from_rat(q: Rat) -> Self {
        Puiseux::new(vec![(q, Rat::zero())], Prec::Exact)
    }

    pub fn t_pow(e: Rat) -> Self {
        Puiseux::new(vec![(Rat::one(), e)], Prec::Exact)
    }

    pub fn terms(&self) -> &[(Rat, Rat)] {
        &self.terms
    }

    pub fn prec(&self) -> &Prec {
        &self.prec
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.prec, Prec::Exact)
    }

    pub fn is_literal_zero(&self) -> bool {
        self.terms.is_empty() && self.is_exact()
    }

    /// Decides whether the element is zero; fails when only "zero so far at
    /// this precision" is known.
    pub fn is_zero(&self) -> Result<bool> {
        if !self.terms.is_empty() {
            return Ok(false);
        }
        if self.is_exact() {
            return Ok(true);
        }
        Err(Error::PrecisionExhausted(
            "element is zero up to precision; cannot decide literal zero".into(),
        ))
    }

    pub fn val(&self) -> Result<GammaVal> {
        match self.terms.first() {
            Some((_, e)) => Ok(GammaVal::Finite(e.clone())),
            None if self.is_exact() => Ok(GammaVal::Infinity),
            None => Err(Error::PrecisionExhausted(
                "all terms above the precision bound".into(),
            )),
        }
    }

    pub fn residue(&self) -> Result<Rat> {
        match self.val()? {
            GammaVal::Finite(v) if v.is_zero() => Ok(self.terms[0].0.clone()),
            v => Err(Error::ValNonzero(v.to_string())),
        }
    }

    /// Least known exponent: the valuation when a term exists, otherwise the
    /// precision bound (a lower bound for the true valuation).
    fn low(&self) -> Option<Rat> {
        match self.terms.first() {
            Some((_, e)) => Some(e.clone()),
            None => match &self.prec {
                Prec::Exact => None,
                Prec::Bound(b) => Some(b.clone()),
            },
        }
    }

    pub fn add(&self, rhs: &Puiseux) -> Puiseux {
        let prec = self.prec.min(&rhs.prec);
        let mut terms = self.terms.clone();
        terms.extend(rhs.terms.iter().cloned());
        Puiseux::new(terms, prec)
    }

    pub fn neg(&self) -> Puiseux {
        Puiseux {
            terms: self.terms.iter().map(|(c, e)| (-c, e.clone())).collect(),
            prec: self.prec.clone(),
        }
    }

    pub fn sub(&self, rhs: &Puiseux) -> Puiseux {
        self.add(&rhs.neg())
    }

    pub fn scale(&self, q: &Rat) -> Puiseux {
        if q.is_zero() {
            // Scaling by an exact 0 kills the tail too.
            return Puiseux::zero();
        }
        Puiseux {
            terms: self.terms.iter().map(|(c, e)| (c * q, e.clone())).collect(),
            prec: self.prec.clone(),
        }
    }

    pub fn mul(&self, rhs: &Puiseux) -> Puiseux {
        if self.is_literal_zero() || rhs.is_literal_zero() {
            return Puiseux::zero();
        }
        let mut prec = Prec::Exact;
        if let Prec::Bound(a) = &self.prec {
            let lb = rhs.low().expect("nonzero rhs");
            prec = prec.min(&Prec::Bound(a + &lb));
        }
        if let Prec::Bound(b) = &rhs.prec {
            let lb = self.low().expect("nonzero lhs");
            prec = prec.min(&Prec::Bound(b + &lb));
        }
        let mut terms = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for (ca, ea) in &self.terms {
            for (cb, eb) in &rhs.terms {
                terms.push((ca * cb, ea + eb));
            }
        }
        Puiseux::new(terms, prec)
    }

    pub fn inv(&self) -> Result<Puiseux> {
        Puiseux::one().div(self)
    }

    pub fn div(&self, rhs: &Puiseux) -> Result<Puiseux> {
        if rhs.is_literal_zero() {
            return Err(Error::DivisionByZero);
        }
        let (lead_c, lead_e) = match rhs.terms.first() {
            Some(t) => t.clone(),
            None => {
                return Err(Error::PrecisionExhausted(
                    "divisor is zero up to precision".into(),
                ))
            }
        };
        if self.is_literal_zero() {
            return Ok(Puiseux::zero());
        }
        if self.is_exact() && rhs.is_exact() {
            return exact_div(self, rhs);
        }
        // Target bound of the quotient, propagated pessimistically.
        let mut target: Option<Rat> = None;
        let mut push = |b: Rat| {
            target = Some(match target.take() {
                Some(t) => t.min(b),
                None => b,
            });
        };
        if let Prec::Bound(a) = &self.prec {
            push(a - &lead_e);
        }
        if let Prec::Bound(b) = &rhs.prec {
            // 1/rhs is known modulo t^(b - 2·lead_e).
            let inv_bound = b - &lead_e - &lead_e;
            let lhs_low = self.low().expect("nonzero lhs");
            push(&lhs_low + &inv_bound);
        }
        let target = target.expect("at least one inexact operand");
        if self.terms.is_empty() {
            return Ok(Puiseux::zero_to(target));
        }
        let mut rem = self.clone();
        rem.prec = Prec::Exact; // tail handled by the target bound
        let mut quot: Vec<(Rat, Rat)> = Vec::new();
        let lead_inv = lead_c.recip()?;
        while let Some((c, e)) = rem.terms.first().cloned() {
            let qe = &e - &lead_e;
            if qe >= target {
                break;
            }
            let qc = &c * &lead_inv;
            let mut step = Puiseux::new(vec![(qc.clone(), qe.clone())], Prec::Exact);
            quot.push((qc, qe));
            step = step.mul(&exact_terms(rhs));
            rem = rem.sub(&step);
        }
        Ok(Puiseux::new(quot, Prec::Bound(target)))
    }

    /// Sum of the known terms with exponent `< cutoff`; exact output.
    /// Fails when the precision bound lies below the cutoff.
    pub fn section(&self, cutoff: &Rat) -> Result<Puiseux> {
        match &self.prec {
            Prec::Bound(b) if b < cutoff => Err(Error::PrecisionExhausted(format!(
                "expansion known below t^{b}, cutoff t^{cutoff}"
            ))),
            _ => Ok(Puiseux::new(
                self.terms.iter().filter(|(_, e)| e < cutoff).cloned().collect(),
                Prec::Exact,
            )),
        }
    }

    /// Sum of the known terms with exponent `≤ cutoff`.
    pub fn section_closed(&self, cutoff: &Rat) -> Result<Puiseux> {
        match &self.prec {
            Prec::Bound(b) if b <= cutoff => Err(Error::PrecisionExhausted(format!(
                "expansion known below t^{b}, closed cutoff t^{cutoff}"
            ))),
            _ => Ok(Puiseux::new(
                self.terms.iter().filter(|(_, e)| e <= cutoff).cloned().collect(),
                Prec::Exact,
            )),
        }
    }
}

fn exact_terms(x: &Puiseux) -> Puiseux {
    Puiseux {
        terms: x.terms.clone(),
        prec: Prec::Exact,
    }
}

/// Exact division of exact elements. Rational-exponent Laurent polynomials
/// divide exactly iff the corresponding polynomials in `s = t^(1/N)` do; a
/// nonzero remainder would need infinitely many quotient terms, so it raises
/// `PRECISION_EXHAUSTED`.
fn exact_div(lhs: &Puiseux, rhs: &Puiseux) -> Result<Puiseux> {
    let mut denom_lcm = BigInt::one();
    for (_, e) in lhs.terms.iter().chain(rhs.terms.iter()) {
        denom_lcm = denom_lcm.lcm(e.denom());
    }
    let scaled = |x: &Puiseux| -> (Vec<(Rat, BigInt)>, BigInt) {
        let entries: Vec<(Rat, BigInt)> = x
            .terms
            .iter()
            .map(|(c, e)| (c.clone(), e.numer() * &denom_lcm / e.denom()))
            .collect();
        let min = entries.iter().map(|(_, k)| k.clone()).min().unwrap();
        (entries, min)
    };
    let (le, lmin) = scaled(lhs);
    let (re, rmin) = scaled(rhs);
    let to_poly = |entries: &[(Rat, BigInt)], min: &BigInt| -> Poly {
        let mut coeffs =
            vec![Rat::zero(); entries.iter().map(|(_, k)| (k - min).to_usize().unwrap()).max().unwrap() + 1];
        for (c, k) in entries {
            coeffs[(k - min).to_usize().unwrap()] = c.clone();
        }
        Poly::from_coeffs(coeffs)
    };
    let lp = to_poly(&le, &lmin);
    let rp = to_poly(&re, &rmin);
    let (q, r) = lp.divmod(&rp);
    if !r.is_zero() {
        return Err(Error::PrecisionExhausted(
            "exact quotient has infinitely many terms; give the operands a finite precision".into(),
        ));
    }
    let shift = &lmin - &rmin;
    let terms = q
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| {
            let num = BigInt::from(k) + &shift;
            (
                c.clone(),
                Rat::from_bigint(num) * Rat::from_bigint(denom_lcm.clone()).recip().unwrap(),
            )
        })
        .collect();
    Ok(Puiseux::new(terms, Prec::Exact))
}

impl fmt::Display for Puiseux {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (c, e) in &self.terms {
            let mut cs = c.to_string();
            if first {
                first = false;
            } else if let Some(mag) = cs.strip_prefix('-') {
                write!(f, " - ")?;
                cs = mag.to_string();
            } else {
                write!(f, " + ")?;
            }
            if e.is_zero() {
                write!(f, "{cs}")?;
            } else {
                match cs.as_str() {
                    "1" => {}
                    "-1" => write!(f, "-")?,
                    _ => write!(f, "{cs}*")?,
                }
                if e.is_one() {
                    write!(f, "t")?;
                } else if e.is_integer() && !e.is_negative() {
                    write!(f, "t^{e}")?;
                } else {
                    write!(f, "t^({e})")?;
                }
            }
        }
        match &self.prec {
            Prec::Bound(b) => {
                if !first {
                    write!(f, " + ")?;
                }
                write!(f, "O(t^{b})")?;
            }
            Prec::Exact => {
                if first {
                    write!(f, "0")?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rat {
        Rat::new(n, d)
    }

    #[test]
    fn val_least_exponent() {
        // 3 t^(1/2) + t has valuation 1/2.
        let x = Puiseux::new(
            vec![(r(3, 1), r(1, 2)), (Rat::one(), Rat::one())],
            Prec::Exact,
        );
        assert_eq!(x.val().unwrap(), GammaVal::Finite(r(1, 2)));
        assert_eq!(Puiseux::zero().val().unwrap(), GammaVal::Infinity);
        assert!(Puiseux::zero_to(r(5, 1)).val().is_err());
    }

    #[test]
    fn precision_propagates_through_products() {
        // (1 + O(t^3)) · (t^2 exact) is known modulo t^5.
        let x = Puiseux::new(vec![(Rat::one(), Rat::zero())], Prec::Bound(r(3, 1)));
        let y = Puiseux::t_pow(r(2, 1));
        let p = x.mul(&y);
        assert_eq!(p.prec, Prec::Bound(r(5, 1)));
        assert_eq!(p.terms, vec![(Rat::one(), r(2, 1))]);
    }

    #[test]
    fn division_of_jets() {
        // (1 + O(t^4)) / (1 - t + O(t^4)): quotient 1 + t + t^2 + t^3 + O(t^4).
        let one = Puiseux::new(vec![(Rat::one(), Rat::zero())], Prec::Bound(r(4, 1)));
        let den = Puiseux::new(
            vec![(Rat::one(), Rat::zero()), (r(-1, 1), Rat::one())],
            Prec::Bound(r(4, 1)),
        );
        let q = one.div(&den).unwrap();
        assert_eq!(q.prec, Prec::Bound(r(4, 1)));
        assert_eq!(
            q.terms,
            (0..4).map(|k| (Rat::one(), r(k, 1))).collect::<Vec<_>>()
        );
    }

    #[test]
    fn exact_division_decides_divisibility() {
        // (t - t^2) / t^(1/2) terminates; 1 / (1 - t) does not.
        let num = Puiseux::new(
            vec![(Rat::one(), Rat::one()), (r(-1, 1), r(2, 1))],
            Prec::Exact,
        );
        let q = num.div(&Puiseux::t_pow(r(1, 2))).unwrap();
        assert_eq!(
            q.terms,
            vec![(Rat::one(), r(1, 2)), (r(-1, 1), r(3, 2))]
        );
        assert!(q.is_exact());
        let den = Puiseux::new(
            vec![(Rat::one(), Rat::zero()), (r(-1, 1), Rat::one())],
            Prec::Exact,
        );
        assert!(matches!(
            Puiseux::one().div(&den),
            Err(Error::PrecisionExhausted(_))
        ));
    }

    #[test]
    fn sections_are_exact_and_idempotent() {
        let x = Puiseux::new(
            vec![(r(2, 1), r(-1, 1)), (r(5, 1), Rat::zero()), (Rat::one(), r(3, 2))],
            Prec::Bound(r(2, 1)),
        );
        let s = x.section(&Rat::one()).unwrap();
        assert!(s.is_exact());
        assert_eq!(s.terms, vec![(r(2, 1), r(-1, 1)), (r(5, 1), Rat::zero())]);
        assert_eq!(s.section(&Rat::one()).unwrap(), s);
        assert!(x.section(&r(3, 1)).is_err());
        let closed = x.section_closed(&r(3, 2)).unwrap();
        assert_eq!(closed.terms.len(), 3);
    }
}
