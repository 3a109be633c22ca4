//! Congruence subgroups of the unipotent group, canonical coset
//! representatives, and the decision procedure for germ equivalence of
//! `Γ`-parameterized lattice families.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::FieldElem;
use crate::fmatrix::FMat;
use crate::gammatype::{self, GammaType};
use crate::rational::{GammaVal, Rat};

/// A valuation threshold in `Q ∪ {±∞}`. `+∞` forces the entry to vanish,
/// `-∞` is no constraint.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Thresh {
    NegInf,
    Finite(Rat),
    PosInf,
}

impl Thresh {
    fn sum(a: &(Thresh, bool), b: &(Thresh, bool)) -> (Thresh, bool) {
        use Thresh::*;
        let strict = a.1 || b.1;
        match (&a.0, &b.0) {
            // A vanishing factor makes the product vanish.
            (PosInf, _) | (_, PosInf) => (PosInf, false),
            (NegInf, _) | (_, NegInf) => (NegInf, false),
            (Finite(x), Finite(y)) => (Finite(x + y), strict),
        }
    }

    /// Does `val ⋄_a A` for all valuations imply `val ⋄_b B`?
    fn implies(bound: &(Thresh, bool), target: &(Thresh, bool)) -> bool {
        use Thresh::*;
        match (&bound.0, &target.0) {
            // Valuations live in Γ ∪ {∞}, so a -∞ target never binds.
            (_, NegInf) => true,
            // Only the zero entry satisfies a +∞ bound; it satisfies anything.
            (PosInf, _) => true,
            (_, PosInf) => false,
            (NegInf, Finite(_)) => false,
            (Finite(a), Finite(b)) => match a.cmp(b) {
                std::cmp::Ordering::Greater => true,
                std::cmp::Ordering::Less => false,
                std::cmp::Ordering::Equal => bound.1 || !target.1,
            },
        }
    }

    fn satisfied_by(&self, strict: bool, val: &GammaVal) -> bool {
        match self {
            Thresh::NegInf => true,
            Thresh::PosInf => val.is_infinite(),
            Thresh::Finite(a) => {
                if strict {
                    val > &GammaVal::Finite(a.clone())
                } else {
                    val >= &GammaVal::Finite(a.clone())
                }
            }
        }
    }
}

impl std::fmt::Display for Thresh {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Thresh::NegInf => write!(f, "-inf"),
            Thresh::PosInf => write!(f, "+inf"),
            Thresh::Finite(q) => write!(f, "{q}"),
        }
    }
}

/// A subgroup candidate `{a unipotent : val(a_ij) ⋄_ij α_ij}` of the
/// unipotent upper triangular group.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CongruenceSubgroup {
    n: usize,
    /// Constraint per pair `i < j`, row-major.
    thresholds: Vec<(Thresh, bool)>,
}

impl CongruenceSubgroup {
    pub fn unconstrained(n: usize) -> Self {
        let count = n * n.saturating_sub(1) / 2;
        CongruenceSubgroup {
            n,
            thresholds: vec![(Thresh::NegInf, false); count],
        }
    }

    /// The integral subgroup: every entry in `O`.
    pub fn integral(n: usize) -> Self {
        let count = n * n.saturating_sub(1) / 2;
        CongruenceSubgroup {
            n,
            thresholds: vec![(Thresh::Finite(Rat::zero()), false); count],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn slot(&self, i: usize, j: usize) -> usize {
        assert!(i < j && j < self.n, "above-diagonal entry expected");
        // entries (i, i+1..n) laid out row by row
        let before: usize = (0..i).map(|r| self.n - 1 - r).sum();
        before + (j - i - 1)
    }

    pub fn get(&self, i: usize, j: usize) -> &(Thresh, bool) {
        &self.thresholds[self.slot(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, alpha: Thresh, strict: bool) {
        let strict = if matches!(alpha, Thresh::PosInf | Thresh::NegInf) {
            false
        } else {
            strict
        };
        let s = self.slot(i, j);
        self.thresholds[s] = (alpha, strict);
    }

    /// Group criterion: closure of the defining module under products, i.e.
    /// for every `i < j < k` the bound obtained by summing the `(i,j)` and
    /// `(j,k)` constraints must imply the `(i,k)` constraint.
    pub fn is_group(&self) -> bool {
        for i in 0..self.n {
            for j in i + 1..self.n {
                for k in j + 1..self.n {
                    let prod = Thresh::sum(self.get(i, j), self.get(j, k));
                    if !Thresh::implies(&prod, self.get(i, k)) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Entry-wise membership of a unipotent matrix.
    pub fn member(&self, m: &FMat) -> Result<bool> {
        check_unipotent(m, self.n)?;
        for i in 0..self.n {
            for j in i + 1..self.n {
                let (alpha, strict) = self.get(i, j);
                if !alpha.satisfied_by(*strict, &m[(i, j)].val()?) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

fn check_unipotent(m: &FMat, n: usize) -> Result<()> {
    if m.rows() != n || m.cols() != n || !m.is_unipotent_upper()? {
        return Err(Error::NotTriangular);
    }
    Ok(())
}

/// Exact inverse of a unipotent upper triangular matrix.
fn unipotent_inverse(m: &FMat) -> Result<FMat> {
    let n = m.rows();
    let backend = m.backend();
    let mut inv = FMat::identity(backend, n);
    // Solve M·inv = I column by column, back substitution.
    for col in 0..n {
        for i in (0..n).rev() {
            let mut acc = if i == col {
                FieldElem::one(backend)
            } else {
                FieldElem::zero(backend)
            };
            for j in i + 1..n {
                acc = acc.sub(&m[(i, j)].mul(&inv[(j, col)])?)?;
            }
            inv[(i, col)] = acc;
        }
    }
    Ok(inv)
}

/// Same coset test: `a·H = b·H` iff `b⁻¹a - 1` satisfies the thresholds.
pub fn coset_equal(a: &FMat, b: &FMat, h: &CongruenceSubgroup) -> Result<bool> {
    if !h.is_group() {
        return Err(Error::NotAGroup);
    }
    check_unipotent(a, h.n())?;
    check_unipotent(b, h.n())?;
    let m = unipotent_inverse(b)?.mul(a)?;
    h.member(&m)
}

/// Canonical representative of the coset `a·H`.
///
/// Entries are processed by ascending distance to the diagonal and replaced
/// by their truncation at the threshold cutoff, each correction being a
/// right multiplication by an elementary member of `H`; corrections at
/// distance `d` only disturb entries at larger distance, and two
/// all-truncated representatives of one coset agree by a triangular
/// induction, so the result is a coset invariant.
pub fn coset_code(a: &FMat, h: &CongruenceSubgroup) -> Result<FMat> {
    if !h.is_group() {
        return Err(Error::NotAGroup);
    }
    let n = h.n();
    check_unipotent(a, n)?;
    for i in 0..n {
        for j in i + 1..n {
            if !matches!(h.get(i, j).0, Thresh::Finite(_)) {
                return Err(Error::NonFiniteThreshold);
            }
        }
    }
    let mut m = a.clone();
    for dist in 1..n {
        for i in 0..n - dist {
            let j = i + dist;
            let (alpha, strict) = h.get(i, j);
            let Thresh::Finite(alpha) = alpha else { unreachable!() };
            let entry = m[(i, j)].clone();
            let sec = if *strict {
                entry.section_strict(alpha)?
            } else {
                entry.section_in_field(alpha)?
            };
            let corr = sec.sub(&entry)?;
            if corr.is_zero()? {
                continue;
            }
            // Right-multiply by 1 + corr·E_ij: adds corr·col_i to col_j.
            m.col_add(j, &corr, i)?;
        }
    }
    Ok(m)
}

/// The congruence subgroup of unipotent matrices generically conjugated into
/// the integral unipotent group by the diagonal flow of `r`: entry `(i, j)`
/// is constrained by the generic value of `t_i - t_j`.
///
/// An unbounded-above difference forces the entry to vanish, an
/// unbounded-below one frees it, and otherwise the rational threshold is the
/// standard part, strict exactly when the infinitesimal tail is positive.
pub fn dnu(r: &GammaType) -> CongruenceSubgroup {
    let n = r.n();
    let point = r.point();
    let s = point.scales();
    let mut h = CongruenceSubgroup::unconstrained(n);
    for i in 0..n {
        for j in i + 1..n {
            let diff: Vec<Rat> = point
                .row(i)
                .iter()
                .zip(point.row(j))
                .map(|(a, b)| a - b)
                .collect();
            let omega_lead = diff[..s.inf].iter().find(|c| !c.is_zero());
            let (alpha, strict) = match omega_lead {
                Some(c) if c.is_positive() => (Thresh::PosInf, false),
                Some(_) => (Thresh::NegInf, false),
                None => {
                    let std = diff[s.inf].clone();
                    let tail_positive = diff[s.inf + 1..]
                        .iter()
                        .find(|c| !c.is_zero())
                        .is_some_and(Rat::is_positive);
                    (Thresh::Finite(std), tail_positive)
                }
            };
            h.set(i, j, alpha, strict);
        }
    }
    h
}

/// A `Γ^n`-parameterized family of diagonal lattices: the germ, along `r`,
/// of `t ↦ b·diag(t^{t_1}, …, t^{t_n})·O^n` for an invertible upper
/// triangular `b`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GermPair {
    pub r: GammaType,
    pub b: FMat,
}

impl GermPair {
    pub fn new(r: GammaType, b: FMat) -> Result<Self> {
        if b.rows() != r.n() || !b.is_upper_triangular()? {
            return Err(Error::NotTriangular);
        }
        Ok(GermPair { r, b })
    }
}

/// Decide whether two germ pairs present the same germ of lattice families
/// up to generic reparameterization.
///
/// Both pairs are first normalized by the translation killing the standard
/// part of `r` (scaling the basis columns by the matching `t`-powers); the
/// normalized types must agree, and the change of basis `N = b₁⁻¹·b₂ = D·U`
/// must have its diagonal valuation vector in the stabilizer of `r` and its
/// unipotent part inside the congruence subgroup of the diagonal flow.
pub fn germ_equiv(p1: &GermPair, p2: &GermPair) -> Result<bool> {
    let (r1, b1) = normalize(p1)?;
    let (r2, b2) = normalize(p2)?;
    if r1 != r2 {
        return Ok(false);
    }
    let n = r1.n();
    let change = b1.inverse()?.mul(&b2)?;
    if !change.is_upper_triangular()? {
        return Err(Error::NotTriangular);
    }
    // Split N = D·U with D diagonal and U unipotent.
    let backend = change.backend();
    let mut d_vals = Vec::with_capacity(n);
    let mut unip = FMat::identity(backend, n);
    for i in 0..n {
        let di = change[(i, i)].clone();
        match di.val()? {
            GammaVal::Finite(v) => d_vals.push(v),
            GammaVal::Infinity => return Err(Error::NotTriangular),
        }
        let inv = di.inv()?;
        for j in i + 1..n {
            unip[(i, j)] = change[(i, j)].mul(&inv)?;
        }
    }
    // Diagonal part: valuation vector in the stabilizer of r (unit parts are
    // absorbed by the integral diagonal).
    if !gammatype::stab_member(&r1, &d_vals)? {
        return Ok(false);
    }
    dnu(&r1).member(&unip)
}

fn normalize(p: &GermPair) -> Result<(GammaType, FMat)> {
    let (c, r0) = gammatype::translate_to_zero(p.r.point())?;
    let backend = p.b.backend();
    let scale: Vec<Rat> = c.iter().map(|ci| -ci).collect();
    for s in &scale {
        backend.check_gamma(s)?;
    }
    let b0 = p.b.scale_cols_t_pow(&scale)?;
    Ok((r0, b0))
}

// --- JSON -------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct ThreshEntry {
    i: usize,
    j: usize,
    alpha: String,
    strict: bool,
}

impl Serialize for CongruenceSubgroup {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut entries = Vec::new();
        for i in 0..self.n {
            for j in i + 1..self.n {
                let (alpha, strict) = self.get(i, j);
                entries.push(ThreshEntry {
                    i,
                    j,
                    alpha: alpha.to_string(),
                    strict: *strict,
                });
            }
        }
        let mut map = s.serialize_map(Some(2))?;
        map.serialize_entry("n", &self.n)?;
        map.serialize_entry("thresholds", &entries)?;
        map.end()
    }
}

impl<'de> Deserialize<'de> for CongruenceSubgroup {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            n: usize,
            thresholds: Vec<ThreshEntry>,
        }
        let r = Repr::deserialize(d)?;
        let mut h = CongruenceSubgroup::unconstrained(r.n);
        for e in r.thresholds {
            if e.i >= e.j || e.j >= r.n {
                return Err(serde::de::Error::custom("threshold indices out of range"));
            }
            let alpha = match e.alpha.as_str() {
                "+inf" | "inf" => Thresh::PosInf,
                "-inf" => Thresh::NegInf,
                s => Thresh::Finite(
                    s.parse()
                        .map_err(|err: Error| serde::de::Error::custom(err.to_string()))?,
                ),
            };
            h.set(e.i, e.j, alpha, e.strict);
        }
        Ok(h)
    }
}

impl Serialize for GermPair {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = s.serialize_map(Some(2))?;
        map.serialize_entry("r", &self.r)?;
        map.serialize_entry("b", &self.b)?;
        map.end()
    }
}

impl<'de> Deserialize<'de> for GermPair {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            r: GammaType,
            b: FMat,
        }
        let r = Repr::deserialize(d)?;
        GermPair::new(r.r, r.b).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Backend;
    use crate::gammatype::{GammaPoint, ScaleStructure};
    use crate::ratlin::RatMat;

    fn b() -> Backend {
        Backend::RatFunc
    }

    fn fe(n: i64) -> FieldElem {
        FieldElem::from_rat(b(), Rat::from_int(n))
    }

    fn t_pow(k: i64) -> FieldElem {
        FieldElem::t_pow(b(), &Rat::from_int(k)).unwrap()
    }

    fn cs(n: usize, entries: &[(usize, usize, i64, bool)]) -> CongruenceSubgroup {
        let mut h = CongruenceSubgroup::unconstrained(n);
        for &(i, j, a, strict) in entries {
            h.set(i, j, Thresh::Finite(Rat::from_int(a)), strict);
        }
        h
    }

    #[test]
    fn group_check_examples() {
        assert!(CongruenceSubgroup::integral(3).is_group());
        // α12 = α23 = 1, α13 = 3: products only reach valuation 2.
        assert!(!cs(3, &[(0, 1, 1, false), (0, 2, 3, false), (1, 2, 1, false)]).is_group());
        assert!(cs(3, &[(0, 1, 1, false), (0, 2, 2, false), (1, 2, 1, false)]).is_group());
        // Strictness: (≥1) + (≥1) gives ≥2, which implies > 1 but not > 2.
        assert!(cs(3, &[(0, 1, 1, false), (0, 2, 1, true), (1, 2, 1, false)]).is_group());
        assert!(!cs(3, &[(0, 1, 1, false), (0, 2, 2, true), (1, 2, 1, false)]).is_group());
    }

    #[test]
    fn group_check_against_product_oracle() {
        // Multiply explicit members and test membership directly.
        let h = cs(3, &[(0, 1, 1, false), (0, 2, 2, false), (1, 2, 1, false)]);
        assert!(h.is_group());
        let g1 = FMat::from_rows(vec![
            vec![fe(1), t_pow(1), t_pow(2)],
            vec![fe(0), fe(1), t_pow(1)],
            vec![fe(0), fe(0), fe(1)],
        ])
        .unwrap();
        let prod = g1.mul(&g1).unwrap();
        assert!(h.member(&prod).unwrap());
        let bad = cs(3, &[(0, 1, 1, false), (0, 2, 3, false), (1, 2, 1, false)]);
        assert!(!bad.member(&prod).unwrap());
    }

    #[test]
    fn coset_equality() {
        let h = cs(2, &[(0, 1, 2, false)]);
        let a = FMat::from_rows(vec![vec![fe(1), t_pow(1)], vec![fe(0), fe(1)]]).unwrap();
        let b2 = FMat::from_rows(vec![
            vec![fe(1), t_pow(1).add(&t_pow(3)).unwrap()],
            vec![fe(0), fe(1)],
        ])
        .unwrap();
        assert!(coset_equal(&a, &b2, &h).unwrap());
        let h4 = cs(2, &[(0, 1, 4, false)]);
        assert!(!coset_equal(&a, &b2, &h4).unwrap());
        assert!(coset_equal(&a, &a, &h).unwrap());
    }

    #[test]
    fn coset_code_examples() {
        let h = cs(2, &[(0, 1, 2, false)]);
        let a = FMat::from_rows(vec![
            vec![fe(1), t_pow(1).add(&t_pow(3)).unwrap()],
            vec![fe(0), fe(1)],
        ])
        .unwrap();
        let code = coset_code(&a, &h).unwrap();
        assert_eq!(code[(0, 1)], t_pow(1));
        assert!(coset_equal(&code, &a, &h).unwrap());
        // Members code to the identity.
        let member = FMat::from_rows(vec![vec![fe(1), t_pow(2)], vec![fe(0), fe(1)]]).unwrap();
        assert_eq!(
            coset_code(&member, &h).unwrap(),
            FMat::identity(b(), 2)
        );
        // Idempotent.
        assert_eq!(coset_code(&code, &h).unwrap(), code);
    }

    #[test]
    fn coset_code_is_coset_invariant() {
        let h = cs(3, &[(0, 1, 1, false), (0, 2, 2, false), (1, 2, 1, false)]);
        let a = FMat::from_rows(vec![
            vec![fe(1), t_pow(-1), t_pow(0)],
            vec![fe(0), fe(1), t_pow(-2)],
            vec![fe(0), fe(0), fe(1)],
        ])
        .unwrap();
        let member = FMat::from_rows(vec![
            vec![fe(1), t_pow(1).scale(&Rat::from_int(3)), t_pow(2)],
            vec![fe(0), fe(1), t_pow(1).neg()],
            vec![fe(0), fe(0), fe(1)],
        ])
        .unwrap();
        assert!(h.member(&member).unwrap());
        let code1 = coset_code(&a, &h).unwrap();
        let code2 = coset_code(&a.mul(&member).unwrap(), &h).unwrap();
        assert_eq!(code1, code2);
    }

    fn gtype(rows: Vec<Vec<Rat>>, inf: usize, eps: usize) -> GammaType {
        let n = rows.len();
        GammaType::from_point(
            &GammaPoint::new(n, ScaleStructure { inf, eps }, RatMat::from_rows(rows)).unwrap(),
        )
    }

    fn r(v: i64) -> Rat {
        Rat::from_int(v)
    }

    #[test]
    fn dnu_examples() {
        // r = (ω1, 0): no rational exceeds ω1, the entry must vanish.
        let top = gtype(vec![vec![r(1), r(0)], vec![r(0), r(0)]], 1, 0);
        let h = dnu(&top);
        assert_eq!(h.get(0, 1), &(Thresh::PosInf, false));
        // r = (ε1, 0): q ≥ ε1 iff q > 0.
        let eps = gtype(vec![vec![r(0), r(1)], vec![r(0), r(0)]], 0, 1);
        let h = dnu(&eps);
        assert_eq!(h.get(0, 1), &(Thresh::Finite(r(0)), true));
        // Constant (5, 2): plain threshold 3.
        let c = gtype(vec![vec![r(5)], vec![r(2)]], 0, 0);
        let h = dnu(&c);
        assert_eq!(h.get(0, 1), &(Thresh::Finite(r(3)), false));
        assert!(h.is_group());
    }

    #[test]
    fn germ_equiv_examples() {
        let eps = gtype(vec![vec![r(0), r(1)], vec![r(0), r(0)]], 0, 1);
        let p1 = GermPair::new(eps.clone(), FMat::identity(b(), 2)).unwrap();
        // Reflexive.
        assert!(germ_equiv(&p1, &p1).unwrap());
        // A unit off-diagonal entry violates the strict threshold at (0,1).
        let b2 = FMat::from_rows(vec![vec![fe(1), fe(1)], vec![fe(0), fe(1)]]).unwrap();
        let p2 = GermPair::new(eps.clone(), b2).unwrap();
        assert!(!germ_equiv(&p1, &p2).unwrap());
        // An entry of positive valuation respects it.
        let b3 = FMat::from_rows(vec![vec![fe(1), t_pow(1)], vec![fe(0), fe(1)]]).unwrap();
        let p3 = GermPair::new(eps.clone(), b3).unwrap();
        assert!(germ_equiv(&p1, &p3).unwrap());
    }

    #[test]
    fn germ_equiv_normalizes_translations() {
        // Translating r by any c and scaling b by diag(t^-c) is invisible.
        let base = gtype(vec![vec![r(2), r(1)], vec![r(-1), r(0)]], 0, 1);
        let bmat = FMat::from_rows(vec![vec![fe(2), fe(1)], vec![fe(0), fe(1)]]).unwrap();
        let p1 = GermPair::new(base.clone(), bmat.clone()).unwrap();
        let shift = vec![r(3), r(1)];
        let translated = gammatype::translate(&base, &shift).unwrap();
        let scale: Vec<Rat> = shift.iter().map(|c| -c).collect();
        let b2 = bmat.scale_cols_t_pow(&scale).unwrap();
        let p2 = GermPair::new(translated, b2).unwrap();
        assert!(germ_equiv(&p1, &p2).unwrap());
    }

    #[test]
    fn germ_equiv_stabilizer_diagonal() {
        // r = (ω1, 0): the stabilizer contains (q, 0) for every rational q,
        // so diag(t^q, 1) changes of basis are invisible; diag(1, t) is not.
        let top = gtype(vec![vec![r(1), r(0)], vec![r(0), r(0)]], 1, 0);
        let p1 = GermPair::new(top.clone(), FMat::identity(b(), 2)).unwrap();
        let d = FMat::diagonal(vec![t_pow(5), fe(1)]).unwrap();
        let p2 = GermPair::new(top.clone(), d).unwrap();
        assert!(germ_equiv(&p1, &p2).unwrap());
        let d2 = FMat::diagonal(vec![fe(1), t_pow(1)]).unwrap();
        let p3 = GermPair::new(top, d2).unwrap();
        assert!(!germ_equiv(&p1, &p3).unwrap());
    }
}
