//! Dense univariate polynomials over the rationals, used as the substrate
//! of the rational-function field backend.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::Rat;

/// Polynomial in one variable `t` with `Rat` coefficients.
/// `coeffs[k]` is the coefficient of `t^k`; trailing zeros are trimmed, so
/// the zero polynomial has an empty coefficient vector.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Poly {
    coeffs: Vec<Rat>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        Poly::from_coeffs(vec![c])
    }

    /// The monomial `c · t^k`.
    pub fn monomial(c: Rat, k: usize) -> Self {
        let mut coeffs = vec![Rat::zero(); k + 1];
        coeffs[k] = c;
        Poly::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(Rat::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rat {
        self.coeffs.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Order of vanishing at `t = 0`: index of the lowest nonzero coefficient.
    pub fn ord(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn leading(&self) -> Option<&Rat> {
        self.coeffs.last()
    }

    pub fn add(&self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect();
        Poly::from_coeffs(coeffs)
    }

    pub fn sub(&self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect();
        Poly::from_coeffs(coeffs)
    }

    pub fn neg(&self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Rat::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] = &coeffs[i + j] + &(a * b);
            }
        }
        Poly::from_coeffs(coeffs)
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Multiply by `t^k`.
    pub fn shift_up(&self, k: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Rat::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { coeffs }
    }

    /// Divide by `t^k`; requires `ord ≥ k`.
    pub fn shift_down(&self, k: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        assert!(self.ord().unwrap() >= k, "shift_down below t^0");
        Poly {
            coeffs: self.coeffs[k..].to_vec(),
        }
    }

    /// Exact Euclidean division: returns `(q, r)` with `self = q·rhs + r`
    /// and `deg r < deg rhs`.
    pub fn divmod(&self, rhs: &Poly) -> (Poly, Poly) {
        assert!(!rhs.is_zero(), "division by the zero polynomial");
        let d = rhs.degree().unwrap();
        let lead = rhs.leading().unwrap();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rat::zero(); self.coeffs.len().saturating_sub(d)];
        while rem.len() > d {
            let k = rem.len() - 1 - d;
            let c = &rem[rem.len() - 1] / lead;
            if !c.is_zero() {
                for (j, b) in rhs.coeffs.iter().enumerate() {
                    rem[k + j] = &rem[k + j] - &(&c * b);
                }
                quot[k] = c;
            }
            rem.pop();
        }
        (Poly::from_coeffs(quot), Poly::from_coeffs(rem))
    }

    /// Monic gcd; gcd(0, 0) = 0.
    ///
    /// Runs a primitive pseudo-remainder sequence over the integers —
    /// plain rational Euclid blows up its coefficients exponentially, which
    /// dominates every elimination algorithm downstream.
    pub fn gcd(&self, rhs: &Poly) -> Poly {
        if self.is_zero() {
            return rhs.monic();
        }
        if rhs.is_zero() {
            return self.monic();
        }
        if self.degree() == Some(0) || rhs.degree() == Some(0) {
            return Poly::one();
        }
        // Pure powers of t are frequent; handle them without a remainder
        // sequence.
        if let (Some(oa), Some(ob)) = (self.ord(), rhs.ord()) {
            let shared = oa.min(ob);
            if self.degree() == Some(oa) || rhs.degree() == Some(ob) {
                let mut g = vec![Rat::zero(); shared + 1];
                g[shared] = Rat::one();
                return Poly::from_coeffs(g);
            }
        }
        let mut a = int_primitive(self);
        let mut b = int_primitive(rhs);
        if a.len() < b.len() {
            std::mem::swap(&mut a, &mut b);
        }
        // Modular pre-check: when a prime divides neither leading
        // coefficient, the gcd of the mod-p images bounds the true gcd from
        // above, so a constant modular gcd proves coprimality. Random data
        // is almost always coprime, and this skips the remainder sequence.
        for &p in &[1_000_000_007u64, 998_244_353] {
            let pm = BigInt::from(p);
            let la = a.last().expect("nonzero");
            let lb = b.last().expect("nonzero");
            if (la % &pm).is_zero() || (lb % &pm).is_zero() {
                continue;
            }
            match modular_gcd_degree(&a, &b, p) {
                Some(0) => return Poly::one(),
                _ => break,
            }
        }
        // Euclid over Z, one cross-scaled reduction step at a time with the
        // content stripped immediately: coefficients never build up the
        // lc^k factors of block pseudo-division.
        loop {
            if b.is_empty() {
                break;
            }
            if a.len() < b.len() {
                std::mem::swap(&mut a, &mut b);
                continue;
            }
            let da = a.len() - 1;
            let db = b.len() - 1;
            let la = a[da].clone();
            let lb = b[db].clone();
            let g = la.gcd(&lb);
            let fa = &lb / &g;
            let fb = &la / &g;
            for c in a.iter_mut() {
                *c = &*c * &fa;
            }
            for (i, bc) in b.iter().enumerate() {
                a[da - db + i] = &a[da - db + i] - &(bc * &fb);
            }
            a = int_primitive_part(a);
            if a.len() < b.len() {
                std::mem::swap(&mut a, &mut b);
            }
        }
        Poly::from_coeffs(a.into_iter().map(Rat::from_bigint).collect()).monic()
    }

    /// Scale so the top-degree coefficient is 1 (zero stays zero).
    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some(l) => self.scale(&l.recip().expect("nonzero leading coefficient")),
        }
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }
}

/// Integer coefficient vector of the primitive part (denominators cleared,
/// content stripped, positive leading coefficient).
fn int_primitive(p: &Poly) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    for c in p.coeffs() {
        lcm = lcm.lcm(c.denom());
    }
    let ints: Vec<BigInt> = p
        .coeffs()
        .iter()
        .map(|c| c.numer() * &lcm / c.denom())
        .collect();
    int_primitive_part(ints)
}

fn int_primitive_part(mut v: Vec<BigInt>) -> Vec<BigInt> {
    while v.last().is_some_and(BigInt::is_zero) {
        v.pop();
    }
    if v.is_empty() {
        return v;
    }
    let mut content = BigInt::zero();
    for c in &v {
        content = content.gcd(c);
    }
    if v.last().expect("nonempty").is_negative() {
        content = -content;
    }
    for c in v.iter_mut() {
        *c = &*c / &content;
    }
    v
}

/// Degree of `gcd(a mod p, b mod p)` over the prime field, or `None` when a
/// degenerate image makes the bound useless.
fn modular_gcd_degree(a: &[BigInt], b: &[BigInt], p: u64) -> Option<usize> {
    let reduce = |v: &[BigInt]| -> Vec<u64> {
        let pm = BigInt::from(p);
        let mut out: Vec<u64> = v
            .iter()
            .map(|c| {
                let r = ((c % &pm) + &pm) % &pm;
                u64::try_from(r).expect("reduced representative")
            })
            .collect();
        while out.last() == Some(&0) {
            out.pop();
        }
        out
    };
    let mut x = reduce(a);
    let mut y = reduce(b);
    if x.is_empty() || y.is_empty() {
        return None;
    }
    if x.len() < y.len() {
        std::mem::swap(&mut x, &mut y);
    }
    while !y.is_empty() {
        let r = mod_rem(&x, &y, p);
        x = std::mem::replace(&mut y, r);
    }
    Some(x.len().saturating_sub(1))
}

fn mod_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let inv = mod_inv(b[db], p);
    while r.len() > db {
        let dr = r.len() - 1;
        let lead = r[dr];
        if lead != 0 {
            let f = mulmod(lead, inv, p);
            for (i, &bc) in b.iter().enumerate() {
                let idx = dr - db + i;
                let sub = mulmod(f, bc, p);
                r[idx] = (r[idx] + p - sub) % p;
            }
        }
        while r.last() == Some(&0) {
            r.pop();
        }
    }
    r
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn mod_inv(a: u64, p: u64) -> u64 {
    // Fermat inverse; p is prime.
    let mut base = a % p;
    let mut exp = p - 2;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, base, p);
        }
        base = mulmod(base, base, p);
        exp >>= 1;
    }
    acc
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut cs = c.to_string();
            if first {
                first = false;
            } else if let Some(mag) = cs.strip_prefix('-') {
                write!(f, " - ")?;
                cs = mag.to_string();
            } else {
                write!(f, " + ")?;
            }
            if k == 0 {
                write!(f, "{cs}")?;
            } else {
                match cs.as_str() {
                    "1" => {}
                    "-1" => write!(f, "-")?,
                    _ => write!(f, "{cs}*")?,
                }
                if k == 1 {
                    write!(f, "t")?;
                } else {
                    write!(f, "t^{k}")?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(coeffs: &[i64]) -> Poly {
        Poly::from_coeffs(coeffs.iter().map(|&c| Rat::from_int(c)).collect())
    }

    #[test]
    fn divmod_is_exact() {
        let a = p(&[2, 0, -3, 1]);
        let b = p(&[-1, 1]);
        let (q, r) = a.divmod(&b);
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(r.degree() < b.degree());
    }

    #[test]
    fn gcd_of_common_factor() {
        let f = p(&[-1, 1]); // t - 1
        let a = f.mul(&p(&[1, 1]));
        let b = f.mul(&p(&[3, 0, 1]));
        assert_eq!(a.gcd(&b), f.monic());
    }

    #[test]
    fn ord_and_degree() {
        let a = p(&[0, 0, 5, 1]);
        assert_eq!(a.ord(), Some(2));
        assert_eq!(a.degree(), Some(3));
        assert_eq!(Poly::zero().ord(), None);
    }
}
