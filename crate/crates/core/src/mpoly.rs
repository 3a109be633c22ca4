//! Multivariate polynomials over a field backend, with a graded
//! lexicographic monomial basis.
//!
//! Monomials are compared by total degree first, then lexicographically with
//! the earlier variable weighing more, so the degree-2 basis in two
//! variables reads `1, x1, x2, x1^2, x1·x2, x2^2`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::de::Error as _;
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::field::{Backend, FieldElem};
use crate::rational::Rat;

/// Exponent vector of a monomial.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(num_vars: usize) -> Self {
        Monomial(vec![0; num_vars])
    }

    pub fn var(num_vars: usize, i: usize) -> Self {
        let mut e = vec![0; num_vars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, rhs: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }

    /// Graded-lex key string, e.g. `"2,0,1"`.
    pub fn key(&self) -> String {
        self.0
            .iter()
            .map(u32::to_string)
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn parse_key(s: &str, num_vars: usize) -> Result<Monomial> {
        let parts: Vec<u32> = s
            .split(',')
            .map(|p| p.trim().parse().map_err(|_| Error::Malformed(format!("monomial key {s:?}"))))
            .collect::<Result<_>>()?;
        if parts.len() != num_vars {
            return Err(Error::Malformed(format!(
                "monomial key {s:?} has {} variables, expected {num_vars}",
                parts.len()
            )));
        }
        Ok(Monomial(parts))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            // Within a degree, the earlier variable's higher power comes first.
            .then_with(|| {
                for (a, b) in self.0.iter().zip(&other.0) {
                    match a.cmp(b) {
                        Ordering::Equal => continue,
                        ord => return ord.reverse(),
                    }
                }
                Ordering::Equal
            })
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.total_degree() == 0 {
            return write!(f, "1");
        }
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "x{}", i + 1)?;
            } else {
                write!(f, "x{}^{e}", i + 1)?;
            }
        }
        Ok(())
    }
}

/// The space of polynomials in `num_vars` variables of total degree at most
/// `degree`, with its graded-lex ordered monomial basis.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct PolySpace {
    pub num_vars: usize,
    pub degree: u32,
}

impl PolySpace {
    pub fn new(num_vars: usize, degree: u32) -> Self {
        PolySpace { num_vars, degree }
    }

    /// Basis monomials in graded-lex order.
    pub fn monomials(&self) -> Vec<Monomial> {
        let mut out = Vec::with_capacity(self.dim());
        let mut stack = vec![Vec::with_capacity(self.num_vars)];
        // Enumerate all exponent vectors and sort; dimensions stay tiny.
        let mut all = Vec::new();
        while let Some(prefix) = stack.pop() {
            if prefix.len() == self.num_vars {
                all.push(Monomial(prefix));
                continue;
            }
            let used: u32 = prefix.iter().sum();
            for e in 0..=(self.degree - used) {
                let mut next = prefix.clone();
                next.push(e);
                stack.push(next);
            }
        }
        all.sort();
        out.extend(all);
        out
    }

    pub fn dim(&self) -> usize {
        // C(num_vars + degree, degree)
        let mut num = 1usize;
        let mut den = 1usize;
        for k in 1..=self.num_vars {
            num *= self.degree as usize + k;
            den *= k;
        }
        num / den
    }

    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        if m.0.len() != self.num_vars || m.total_degree() > self.degree {
            return None;
        }
        self.monomials().iter().position(|x| x == m)
    }
}

/// Sparse multivariate polynomial with `FieldElem` coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MPoly {
    num_vars: usize,
    backend: Backend,
    terms: BTreeMap<Monomial, FieldElem>,
}

impl MPoly {
    pub fn zero(backend: Backend, num_vars: usize) -> Self {
        MPoly {
            num_vars,
            backend,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(backend: Backend, num_vars: usize, c: FieldElem) -> Result<Self> {
        let mut p = MPoly::zero(backend, num_vars);
        p.add_term(Monomial::one(num_vars), c)?;
        Ok(p)
    }

    pub fn var(backend: Backend, num_vars: usize, i: usize) -> Self {
        let mut p = MPoly::zero(backend, num_vars);
        p.add_term(Monomial::var(num_vars, i), FieldElem::one(backend))
            .expect("consistent backend");
        p
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &FieldElem)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::total_degree).max().unwrap_or(0)
    }

    pub fn coeff(&self, m: &Monomial) -> FieldElem {
        self.terms
            .get(m)
            .cloned()
            .unwrap_or_else(|| FieldElem::zero(self.backend))
    }

    /// The graded-lex largest monomial with a (structurally) nonzero
    /// coefficient.
    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.keys().next_back()
    }

    pub fn add_term(&mut self, m: Monomial, c: FieldElem) -> Result<()> {
        if m.0.len() != self.num_vars {
            return Err(Error::DimensionMismatch("monomial arity".into()));
        }
        if c.backend() != self.backend {
            return Err(Error::BackendMismatch("polynomial coefficient".into()));
        }
        let entry = match self.terms.remove(&m) {
            Some(old) => old.add(&c)?,
            None => c,
        };
        if !entry.is_zero().unwrap_or(false) {
            self.terms.insert(m, entry);
        }
        Ok(())
    }

    pub fn add(&self, rhs: &MPoly) -> Result<MPoly> {
        let mut out = self.clone();
        for (m, c) in rhs.terms() {
            out.add_term(m.clone(), c.clone())?;
        }
        Ok(out)
    }

    pub fn mul(&self, rhs: &MPoly) -> Result<MPoly> {
        let mut out = MPoly::zero(self.backend, self.num_vars);
        for (ma, ca) in self.terms() {
            for (mb, cb) in rhs.terms() {
                out.add_term(ma.mul(mb), ca.mul(cb)?)?;
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &FieldElem) -> Result<MPoly> {
        let mut out = MPoly::zero(self.backend, self.num_vars);
        for (m, a) in self.terms() {
            out.add_term(m.clone(), a.mul(c)?)?;
        }
        Ok(out)
    }

    pub fn eval(&self, point: &[FieldElem]) -> Result<FieldElem> {
        if point.len() != self.num_vars {
            return Err(Error::DimensionMismatch("evaluation point arity".into()));
        }
        let mut acc = FieldElem::zero(self.backend);
        for (m, c) in self.terms() {
            let mut term = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                for _ in 0..e {
                    term = term.mul(x)?;
                }
            }
            acc = acc.add(&term)?;
        }
        Ok(acc)
    }

    /// Substitute `x_i ↦ x_i + a_i`: the coefficients of the result are the
    /// coefficients of `self` in the shifted-power basis `(x - (-a))^α`.
    pub fn shift(&self, a: &[FieldElem]) -> Result<MPoly> {
        if a.len() != self.num_vars {
            return Err(Error::DimensionMismatch("shift arity".into()));
        }
        let mut cur = self.clone();
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero()? {
                continue;
            }
            let mut next = MPoly::zero(self.backend, self.num_vars);
            for (m, c) in cur.terms() {
                let e = m.0[i];
                // (x_i + a_i)^e expanded binomially.
                let mut binom = Rat::one();
                let mut power = FieldElem::one(self.backend);
                for k in (0..=e).rev() {
                    // coefficient of x_i^k: C(e, k) a_i^(e-k)
                    let mut mk = m.clone();
                    mk.0[i] = k;
                    next.add_term(mk, c.mul(&power)?.scale(&binom))?;
                    if k > 0 {
                        binom = &binom * &Rat::new(k as i64, (e - k + 1) as i64);
                        power = power.mul(ai)?;
                    }
                }
            }
            cur = next;
        }
        Ok(cur)
    }

    /// Coefficient vector in the graded-lex basis of `space`.
    pub fn coeff_vector(&self, space: &PolySpace) -> Result<Vec<FieldElem>> {
        if space.num_vars != self.num_vars {
            return Err(Error::DimensionMismatch("polynomial space arity".into()));
        }
        if self.total_degree() > space.degree {
            return Err(Error::DimensionMismatch(format!(
                "degree {} exceeds the space bound {}",
                self.total_degree(),
                space.degree
            )));
        }
        let mut out = vec![FieldElem::zero(self.backend); space.dim()];
        for (i, m) in space.monomials().iter().enumerate() {
            out[i] = self.coeff(m);
        }
        Ok(out)
    }

    pub fn from_coeff_vector(
        backend: Backend,
        space: &PolySpace,
        coeffs: &[FieldElem],
    ) -> Result<MPoly> {
        if coeffs.len() != space.dim() {
            return Err(Error::DimensionMismatch("coefficient vector length".into()));
        }
        let mut p = MPoly::zero(backend, space.num_vars);
        for (m, c) in space.monomials().into_iter().zip(coeffs) {
            p.add_term(m, c.clone())?;
        }
        Ok(p)
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if m.total_degree() == 0 {
                write!(f, "({c})")?;
            } else {
                write!(f, "({c})·{m}")?;
            }
        }
        Ok(())
    }
}

impl Serialize for MPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        // Map keyed by exponent strings, emitted in graded-lex order.
        let mut map = s.serialize_map(Some(self.terms.len()))?;
        for (m, c) in self.terms() {
            map.serialize_entry(&m.key(), c)?;
        }
        map.end()
    }
}

/// `MPoly` deserializes through this wrapper because the arity and backend
/// are not part of the map itself.
#[derive(Deserialize)]
pub struct MPolyRepr(pub BTreeMap<String, FieldElem>);

impl MPolyRepr {
    pub fn into_mpoly(self, backend: Backend, num_vars: usize) -> Result<MPoly> {
        let mut p = MPoly::zero(backend, num_vars);
        for (k, c) in self.0 {
            p.add_term(Monomial::parse_key(&k, num_vars)?, c)?;
        }
        Ok(p)
    }

    pub fn infer(self, num_vars_hint: Option<usize>) -> Result<MPoly> {
        let num_vars = match num_vars_hint {
            Some(n) => n,
            None => self
                .0
                .keys()
                .next()
                .map(|k| k.split(',').count())
                .ok_or_else(|| Error::Malformed("empty polynomial needs an arity hint".into()))?,
        };
        let backend = self
            .0
            .values()
            .next()
            .map(FieldElem::backend)
            .unwrap_or(Backend::RatFunc);
        self.into_mpoly(backend, num_vars)
    }
}

impl<'de> Deserialize<'de> for MPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = MPolyRepr::deserialize(d)?;
        repr.infer(None).map_err(|e| D::Error::custom(e.to_string()))
    }
}
