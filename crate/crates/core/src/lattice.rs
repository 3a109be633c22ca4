//! Lattices in `K^n` as canonical cosets of triangular matrices.
//!
//! A full lattice `A·O^n` is encoded as `U·diag(t^γ)·O^n` with `U` upper
//! triangular and unipotent. The code is canonical once every
//! above-diagonal entry of `U·diag(t^γ)` is its own truncation below the
//! pivot exponent of its row; canonical codes are equal iff the lattices
//! are. `γ` itself is a lattice invariant.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Backend, FieldElem, RatFunc};
use crate::fmatrix::FMat;
use crate::poly::Poly;
use crate::omodule::{DualMode, ModuleDesc, SigTag};
use crate::rational::{GammaVal, Rat};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LatticeCode {
    n: usize,
    u: FMat,
    gamma: Vec<Rat>,
    canonical: bool,
}

impl LatticeCode {
    /// Wrap an explicit `(U, γ)` presentation; `U` must be unipotent upper
    /// triangular and `γ` must lie in the backend value group.
    pub fn new(u: FMat, gamma: Vec<Rat>) -> Result<Self> {
        let n = u.rows();
        if u.cols() != n || gamma.len() != n {
            return Err(Error::DimensionMismatch("triangular code shape".into()));
        }
        if n == 0 {
            return Err(Error::EmptyInput);
        }
        if !u.is_unipotent_upper()? {
            return Err(Error::NotTriangular);
        }
        for g in &gamma {
            u.backend().check_gamma(g)?;
        }
        Ok(LatticeCode {
            n,
            u,
            gamma,
            canonical: false,
        })
    }

    pub fn standard(backend: Backend, n: usize) -> Self {
        LatticeCode {
            n,
            u: FMat::identity(backend, n),
            gamma: vec![Rat::zero(); n],
            canonical: true,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn u(&self) -> &FMat {
        &self.u
    }

    pub fn backend(&self) -> Backend {
        self.u.backend()
    }

    /// The `Γ^n`-valued invariant of the diagonal part.
    pub fn g_invariant(&self) -> &[Rat] {
        &self.gamma
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical
    }

    /// The generator matrix `U·diag(t^γ)`.
    pub fn generator_matrix(&self) -> Result<FMat> {
        self.u.scale_cols_t_pow(&self.gamma)
    }

    /// Reduce the triangular presentation of an invertible matrix to the
    /// canonical lattice code.
    ///
    /// Works bottom-up: in the last unprocessed row, the column of minimal
    /// valuation (leftmost on ties) becomes the pivot, is scaled by a unit to
    /// the pure power `t^γ`, and clears the rest of the row with `O`-column
    /// operations; then the leading block is processed the same way, and
    /// finally the above-diagonal entries are truncation-reduced.
    ///
    /// Over `Q(t)` the column operations run fraction-free (each column over
    /// one polynomial denominator); reductions happen once at the end.
    pub fn diagonalize(a: &FMat) -> Result<LatticeCode> {
        let n = a.rows();
        if a.cols() != n {
            return Err(Error::DimensionMismatch("diagonalize a non-square matrix".into()));
        }
        if n == 0 {
            return Err(Error::EmptyInput);
        }
        if a.backend() == Backend::RatFunc {
            return Self::diagonalize_fraction_free(a);
        }
        Self::diagonalize_generic(a)
    }

    fn diagonalize_generic(a: &FMat) -> Result<LatticeCode> {
        let n = a.rows();
        // Singularity surfaces as a pivotless row below: column operations
        // preserve rank, and a completed run exhibits an invertible
        // triangular form.
        let backend = a.backend();
        let mut m = a.clone();
        let mut gamma = vec![Rat::zero(); n];
        for i in (0..n).rev() {
            // Pivot: minimal valuation in row i among columns 0..=i, leftmost on ties.
            let mut best: Option<(GammaVal, usize)> = None;
            for j in 0..=i {
                let v = m[(i, j)].val()?;
                if v.is_infinite() {
                    continue;
                }
                match &best {
                    Some((bv, _)) if bv <= &v => {}
                    _ => best = Some((v, j)),
                }
            }
            let Some((v, j)) = best else {
                return Err(Error::SingularMatrix);
            };
            m.swap_cols(j, i);
            let g = v.as_finite().expect("finite pivot valuation").clone();
            let unit = FieldElem::t_pow(backend, &g)?.div(&m[(i, i)])?;
            m.col_scale(i, &unit)?;
            let pivot_inv = FieldElem::t_pow(backend, &-&g)?;
            for j in 0..i {
                if m[(i, j)].is_zero()? {
                    continue;
                }
                let f = m[(i, j)].mul(&pivot_inv)?.neg();
                m.col_add(j, &f, i)?;
            }
            gamma[i] = g;
        }
        reduce_entries(&mut m, &gamma)?;
        let u = strip_gamma(&m, &gamma)?;
        Ok(LatticeCode {
            n,
            u,
            gamma,
            canonical: true,
        })
    }

    fn diagonalize_fraction_free(a: &FMat) -> Result<LatticeCode> {
        let n = a.rows();
        // Clear all denominators with one global scalar D: the matrix D·A is
        // polynomial and every entry valuation is shifted by val(D)
        // uniformly, tracked in per-column offsets.
        let mut d = Poly::one();
        for i in 0..n {
            for j in 0..n {
                let FieldElem::RatFunc(x) = &a[(i, j)] else { unreachable!("ratfunc backend") };
                let (_, rem) = d.divmod(x.den());
                if !rem.is_zero() {
                    d = d.mul(x.den());
                }
            }
        }
        let d_ord = d.ord().expect("nonzero") as i64;
        let mut cols: Vec<BareissCol> = (0..n)
            .map(|j| {
                let col = (0..n)
                    .map(|i| {
                        let FieldElem::RatFunc(x) = &a[(i, j)] else { unreachable!() };
                        let (q, rem) = d.divmod(x.den());
                        debug_assert!(rem.is_zero());
                        x.num().mul(&q)
                    })
                    .collect();
                BareissCol { col, off: d_ord }
            })
            .collect();

        // Bottom-up fraction-free column elimination: subtract the minimal-
        // valuation pivot column from the others with the two-term update
        // divided exactly by the previous pivot. Representation scalings on
        // the columns are value-invisible; only the offsets move.
        let mut gamma_int = vec![0i64; n];
        let mut prev = Poly::one();
        for i in (0..n).rev() {
            let mut best: Option<(i64, usize)> = None;
            for (j, col) in cols.iter().enumerate().take(i + 1) {
                let Some(o) = col.col[i].ord() else { continue };
                let v = o as i64 - col.off;
                match &best {
                    Some((bv, _)) if *bv <= v => {}
                    _ => best = Some((v, j)),
                }
            }
            let Some((v, j)) = best else {
                return Err(Error::SingularMatrix);
            };
            cols.swap(j, i);
            gamma_int[i] = v;
            let (pivot, rest) = {
                let (left, right) = cols.split_at_mut(i);
                (&right[0], left)
            };
            let pn = pivot.col[i].clone();
            let scale_val = pn.ord().expect("pivot nonzero") as i64 - prev.ord().expect("nonzero") as i64;
            for cj in rest.iter_mut() {
                let fi = cj.col[i].clone();
                for (r, p) in cj.col.iter_mut().enumerate() {
                    let num = pn.mul(p).sub(&fi.mul(&pivot.col[r]));
                    let (q, rem) = num.divmod(&prev);
                    if !rem.is_zero() {
                        // The exact-division structure failed; fall back to
                        // the reduction-per-operation path.
                        if std::env::var("DIAG_PROF").is_ok() { eprintln!("FALLBACK"); }
                        return Self::diagonalize_generic(a);
                    }
                    *p = q;
                }
                debug_assert!(cj.col[i].is_zero());
                cj.off += scale_val;
            }
            prev = pn;
        }

        // Canonical truncation-reduction on value-level columns: column j's
        // value is col_j · t^(γ_j) / pivot entry, materialized lazily.
        let mut finals: Vec<PolyCol> = Vec::with_capacity(n);
        for (j, bc) in cols.into_iter().enumerate() {
            let pivot_entry = bc.col[j].clone();
            let mut col = PolyCol {
                nums: bc.col,
                den: pivot_entry,
                shift: gamma_int[j],
            };
            col.normalize();
            for i in (0..j).rev() {
                col.reduce_row_at(i, gamma_int[i], &finals[i]);
            }
            finals.push(col.into_laurent()?);
        }
        let gamma: Vec<Rat> = gamma_int.iter().map(|&v| Rat::from_int(v)).collect();
        let rows: Vec<Vec<FieldElem>> = (0..n)
            .map(|r| {
                finals
                    .iter()
                    .map(|c| c.to_field_elem(r))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        let m = FMat::from_rows(rows)?;
        let u = strip_gamma(&m, &gamma)?;
        Ok(LatticeCode {
            n,
            u,
            gamma,
            canonical: true,
        })
    }

    /// The canonical representative of this code's coset.
    pub fn canonicalize(&self) -> Result<LatticeCode> {
        if self.canonical {
            return Ok(self.clone());
        }
        let mut m = self.generator_matrix()?;
        reduce_entries(&mut m, &self.gamma)?;
        let u = strip_gamma(&m, &self.gamma)?;
        Ok(LatticeCode {
            n: self.n,
            u,
            gamma: self.gamma.clone(),
            canonical: true,
        })
    }

    /// Membership of `x` in the lattice: every coordinate of `U⁻¹x` must
    /// have valuation at least the matching `γ`.
    pub fn member(&self, x: &[FieldElem]) -> Result<bool> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch("vector length".into()));
        }
        let z = self.solve_unipotent(x)?;
        for (zi, g) in z.iter().zip(&self.gamma) {
            if zi.val()? < GammaVal::Finite(g.clone()) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Coordinates in the triangular basis: solves `U·z = x` by back
    /// substitution.
    pub fn solve_unipotent(&self, x: &[FieldElem]) -> Result<Vec<FieldElem>> {
        let n = self.n;
        let mut z = vec![FieldElem::zero(self.backend()); n];
        for i in (0..n).rev() {
            let mut acc = x[i].clone();
            for j in i + 1..n {
                acc = acc.sub(&self.u[(i, j)].mul(&z[j])?)?;
            }
            z[i] = acc;
        }
        Ok(z)
    }

    pub fn equal(&self, other: &LatticeCode) -> Result<bool> {
        if self.n != other.n || self.backend() != other.backend() {
            return Ok(false);
        }
        let a = self.canonicalize()?;
        let b = other.canonicalize()?;
        Ok(a.gamma == b.gamma && a.u == b.u)
    }

    /// Dual of the lattice under the standard pairing, as a classified
    /// module over the dual basis `(Uᵀ)⁻¹`.
    ///
    /// Pairing into `O` gives the lattice with shifts `-γ`. Pairing into `M`
    /// gives the same basis with strict components shifted by `-γ`; over
    /// `Q(t)` the discreteness of `Z` identifies `t^(-γ)M = t^(1-γ)O`, so the
    /// result is re-expressed as a lattice.
    pub fn dual(&self, mode: DualMode) -> Result<ModuleDesc> {
        let basis = self.u.transpose().inverse()?;
        let sig = self
            .gamma
            .iter()
            .map(|g| match (mode, self.backend()) {
                (DualMode::O, _) => SigTag::OShift { gamma: -g },
                (DualMode::M, Backend::RatFunc) => SigTag::OShift {
                    gamma: Rat::one() - g,
                },
                (DualMode::M, Backend::Puiseux) => SigTag::MShift { gamma: -g },
            })
            .collect();
        ModuleDesc::new_trusted(basis, sig)
    }

    /// View the lattice as a classified module (all `O`-components).
    pub fn to_module(&self) -> Result<ModuleDesc> {
        let sig = self
            .gamma
            .iter()
            .map(|g| SigTag::OShift { gamma: g.clone() })
            .collect();
        ModuleDesc::new_trusted(self.u.clone(), sig)
    }

    /// Recover a lattice code from an all-`O` classified module.
    pub fn from_module(md: &ModuleDesc) -> Result<LatticeCode> {
        if !md.predicates().lattice {
            return Err(Error::NotSemilattice);
        }
        let gamma: Vec<Rat> = md
            .signature()
            .iter()
            .map(|t| match t {
                SigTag::OShift { gamma } => gamma.clone(),
                _ => unreachable!("all-O signature"),
            })
            .collect();
        let a = md.basis().scale_cols_t_pow(&gamma)?;
        LatticeCode::diagonalize(&a)
    }
}

/// A polynomial column with a valuation offset: entry values are the
/// polynomial entries shifted down by `off`.
struct BareissCol {
    col: Vec<Poly>,
    off: i64,
}

/// A matrix column over `Q(t)`: entries `nums[r]·t^shift / den`, with `den`
/// anchored at order 0 and the numerators sharing no `t`-power. The
/// representation of columns during canonical truncation-reduction.
struct PolyCol {
    nums: Vec<Poly>,
    den: Poly,
    shift: i64,
}

impl PolyCol {
    /// Restore the anchoring invariants by moving `t`-powers into `shift`.
    fn normalize(&mut self) {
        let dord = self.den.ord().expect("nonzero denominator");
        if dord > 0 {
            self.den = self.den.shift_down(dord);
            self.shift -= dord as i64;
        }
        let mut m: Option<usize> = None;
        for p in &self.nums {
            if let Some(o) = p.ord() {
                m = Some(m.map_or(o, |cur: usize| cur.min(o)));
            }
        }
        if let Some(m) = m {
            if m > 0 {
                self.nums = self
                    .nums
                    .iter()
                    .map(|p| if p.is_zero() { Poly::zero() } else { p.shift_down(m) })
                    .collect();
                self.shift += m as i64;
            }
        }
    }

    /// Truncation-reduce row `i` against a finished Laurent column whose
    /// row-`i` entry is exactly `t^cutoff`: afterwards the row-`i` entry of
    /// this column equals its own expansion below `t^cutoff`.
    fn reduce_row_at(&mut self, i: usize, cutoff: i64, reduced: &PolyCol) {
        let Some(o) = self.nums[i].ord() else { return };
        let entry_val = o as i64 + self.shift;
        let terms = cutoff - entry_val;
        // The section: expansion coefficients of nums_i/den from t^o up to
        // (but not including) exponent cutoff - shift.
        let sec = if terms <= 0 {
            Poly::zero()
        } else {
            series_quot(&self.nums[i], &self.den, o, terms as usize)
        };
        // diff = (nums_i - sec·den)·t^shift / den has valuation ≥ cutoff.
        let diff = self.nums[i].sub(&sec.mul(&self.den));
        if diff.is_zero() {
            return;
        }
        // q = diff·t^(shift - cutoff) / den;  self -= q · reduced.
        // reduced has den = 1:
        //   value_r - q·rn_r·t^rsh
        //     = t^sh [ nums_r - diff·rn_r·t^(rsh - cutoff) ] / den
        debug_assert!(reduced.den.degree() == Some(0));
        let e = reduced.shift - cutoff;
        let (up_left, up_right) = (e.min(0).unsigned_abs() as usize, e.max(0) as usize);
        let mut new_nums = Vec::with_capacity(self.nums.len());
        for (r, p) in self.nums.iter().enumerate() {
            let left = p.shift_up(up_left);
            let right = diff.mul(&reduced.nums[r]).shift_up(up_right);
            new_nums.push(left.sub(&right));
        }
        self.nums = new_nums;
        self.shift -= up_left as i64;
        self.normalize();
    }

    /// A finished column is a vector of Laurent polynomials: the denominator
    /// must divide every numerator exactly.
    fn into_laurent(mut self) -> Result<PolyCol> {
        if self.den.degree() != Some(0) {
            let den = std::mem::replace(&mut self.den, Poly::one());
            for p in self.nums.iter_mut() {
                if p.is_zero() {
                    continue;
                }
                let (q, rem) = p.divmod(&den);
                debug_assert!(rem.is_zero(), "canonical entries are Laurent polynomials");
                if !rem.is_zero() {
                    return Err(Error::Malformed("non-Laurent canonical entry".into()));
                }
                *p = q;
            }
        } else {
            let c = self.den.coeff(0).recip().expect("nonzero constant");
            for p in self.nums.iter_mut() {
                *p = p.scale(&c);
            }
            self.den = Poly::one();
        }
        self.normalize();
        Ok(self)
    }

    fn to_field_elem(&self, r: usize) -> Result<FieldElem> {
        let up = self.shift.max(0) as usize;
        let down = (-self.shift).max(0) as usize;
        Ok(FieldElem::RatFunc(RatFunc::new(
            self.nums[r].mul(&self.den_recip_guard()).shift_up(up),
            Poly::one().shift_up(down),
        )?))
    }

    fn den_recip_guard(&self) -> Poly {
        debug_assert!(self.den.degree() == Some(0) && self.den.coeff(0).is_one());
        Poly::one()
    }
}

/// First `terms` expansion coefficients of `num/den` starting at `t^o`,
/// as a polynomial anchored at `t^o` (requires `ord(num) = o`, `ord(den) = 0`).
fn series_quot(num: &Poly, den: &Poly, o: usize, terms: usize) -> Poly {
    let n1 = num.shift_down(o);
    let d0 = den.coeff(0);
    let d0_inv = d0.recip().expect("unit constant term");
    let mut out = Vec::with_capacity(terms);
    for k in 0..terms {
        let mut acc = n1.coeff(k);
        for (j, c) in out.iter().enumerate().take(k) {
            acc = acc - &den.coeff(k - j) * c;
        }
        out.push(&acc * &d0_inv);
    }
    Poly::from_coeffs(out).shift_up(o)
}

/// Truncation-reduce the above-diagonal entries of a triangular generator/// Truncation-reduce the above-diagonal entries of a triangular generator
/// matrix `m` with diagonal `t^γ`, by `O`-column operations.
fn reduce_entries(m: &mut FMat, gamma: &[Rat]) -> Result<()> {
    let n = m.rows();
    let backend = m.backend();
    for j in 0..n {
        for i in (0..j).rev() {
            let sec = m[(i, j)].section(&gamma[i])?;
            let diff = m[(i, j)].sub(&sec)?;
            if diff.is_zero()? {
                continue;
            }
            let f = diff.div(&FieldElem::t_pow(backend, &gamma[i])?)?.neg();
            m.col_add(j, &f, i)?;
        }
    }
    Ok(())
}

/// Divide column `j` of a triangular generator matrix by `t^{γ_j}`.
fn strip_gamma(m: &FMat, gamma: &[Rat]) -> Result<FMat> {
    let neg: Vec<Rat> = gamma.iter().map(|g| -g).collect();
    m.scale_cols_t_pow(&neg)
}

impl Serialize for LatticeCode {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = s.serialize_map(Some(4))?;
        map.serialize_entry("n", &self.n)?;
        map.serialize_entry("U", &self.u)?;
        map.serialize_entry("gamma", &self.gamma)?;
        map.serialize_entry("canonical", &self.canonical)?;
        map.end()
    }
}

impl<'de> Deserialize<'de> for LatticeCode {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            n: usize,
            #[serde(rename = "U")]
            u: FMat,
            gamma: Vec<Rat>,
            #[serde(default)]
            canonical: bool,
        }
        let r = Repr::deserialize(d)?;
        if r.u.rows() != r.n {
            return Err(serde::de::Error::custom("U size does not match n"));
        }
        let mut code = LatticeCode::new(r.u, r.gamma).map_err(serde::de::Error::custom)?;
        // Trust the flag only after revalidation by the caller; parsing keeps it.
        code.canonical = r.canonical;
        Ok(code)
    }
}

/// A lattice code together with a nonzero residue point of `Λ/MΛ` in the
/// diagonal basis.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TnCode {
    pub lattice: LatticeCode,
    pub residue_vector: Vec<Rat>,
}

impl TnCode {
    pub fn new(lattice: LatticeCode, residue_vector: Vec<Rat>) -> Result<Self> {
        if residue_vector.len() != lattice.n() {
            return Err(Error::DimensionMismatch("residue vector length".into()));
        }
        if residue_vector.iter().all(Rat::is_zero) {
            return Err(Error::ZeroResidueVector);
        }
        Ok(TnCode {
            lattice,
            residue_vector,
        })
    }

    pub fn equal(&self, other: &TnCode) -> Result<bool> {
        Ok(self.lattice.equal(&other.lattice)? && self.residue_vector == other.residue_vector)
    }
}

impl Serialize for TnCode {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = s.serialize_map(Some(2))?;
        map.serialize_entry("lattice", &self.lattice)?;
        map.serialize_entry("residue_vector", &self.residue_vector)?;
        map.end()
    }
}

impl<'de> Deserialize<'de> for TnCode {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            lattice: LatticeCode,
            residue_vector: Vec<Rat>,
        }
        let r = Repr::deserialize(d)?;
        TnCode::new(r.lattice, r.residue_vector).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fe(n: i64) -> FieldElem {
        FieldElem::from_rat(Backend::RatFunc, Rat::from_int(n))
    }

    fn t_pow(k: i64) -> FieldElem {
        FieldElem::t_pow(Backend::RatFunc, &Rat::from_int(k)).unwrap()
    }

    fn mat(rows: Vec<Vec<FieldElem>>) -> FMat {
        FMat::from_rows(rows).unwrap()
    }

    /// Independent membership oracle: solve `A·y = x` and check `y ∈ O^n`.
    fn oracle_member(a: &FMat, x: &[FieldElem]) -> bool {
        let y = a.solve(x).unwrap().unwrap();
        y.iter()
            .all(|c| c.val().unwrap() >= GammaVal::finite(0))
    }

    #[test]
    fn diagonalize_mixed_matrix_is_standard_lattice() {
        // Rows (t, 1), (1, 1): the column lattice is O^2.
        let a = mat(vec![vec![t_pow(1), fe(1)], vec![fe(1), fe(1)]]);
        let code = LatticeCode::diagonalize(&a).unwrap();
        assert_eq!(code.g_invariant(), &[Rat::zero(), Rat::zero()]);
        assert_eq!(code.u(), &FMat::identity(Backend::RatFunc, 2));
        // Membership probes against the solve-based oracle.
        let probes = vec![
            vec![fe(1), fe(0)],
            vec![fe(0), fe(1)],
            vec![t_pow(-1), fe(0)],
            vec![t_pow(2), fe(3)],
        ];
        for x in probes {
            assert_eq!(code.member(&x).unwrap(), oracle_member(&a, &x));
        }
    }

    #[test]
    fn diagonalize_diagonal_matrix() {
        let a = FMat::diagonal(vec![t_pow(2), t_pow(-1)]).unwrap();
        let code = LatticeCode::diagonalize(&a).unwrap();
        assert_eq!(code.u(), &FMat::identity(Backend::RatFunc, 2));
        assert_eq!(code.g_invariant(), &[Rat::from_int(2), Rat::from_int(-1)]);
    }

    #[test]
    fn diagonalize_keeps_principal_tail() {
        // [[1, t^-1], [0, 1]]: the off-diagonal entry is its own truncation
        // below t^0, so the code keeps it.
        let a = mat(vec![vec![fe(1), t_pow(-1)], vec![fe(0), fe(1)]]);
        let code = LatticeCode::diagonalize(&a).unwrap();
        assert_eq!(code.g_invariant(), &[Rat::zero(), Rat::zero()]);
        assert_eq!(code.u()[(0, 1)], t_pow(-1));
        for x in [vec![fe(1), fe(0)], vec![t_pow(-1), fe(1)], vec![t_pow(-1), fe(0)]] {
            assert_eq!(code.member(&x).unwrap(), oracle_member(&a, &x));
        }
    }

    #[test]
    fn membership_examples() {
        let o2 = LatticeCode::standard(Backend::RatFunc, 2);
        assert!(o2.member(&[fe(1), fe(1)]).unwrap());
        assert!(!o2.member(&[t_pow(-1), fe(0)]).unwrap());
        let a = mat(vec![vec![t_pow(1), fe(1)], vec![fe(1), fe(1)]]);
        let code = LatticeCode::diagonalize(&a).unwrap();
        assert!(code.member(&[fe(1), fe(0)]).unwrap());
    }

    #[test]
    fn equality_collapses_o_congruent_entries() {
        // U12 = t^-1 and U12 = t^-1 + 5 with γ = 0 describe the same lattice.
        let c1 = LatticeCode::new(
            mat(vec![vec![fe(1), t_pow(-1)], vec![fe(0), fe(1)]]),
            vec![Rat::zero(), Rat::zero()],
        )
        .unwrap();
        let c2 = LatticeCode::new(
            mat(vec![vec![fe(1), t_pow(-1).add(&fe(5)).unwrap()], vec![fe(0), fe(1)]]),
            vec![Rat::zero(), Rat::zero()],
        )
        .unwrap();
        assert!(c1.equal(&c2).unwrap());
        // Different Γ-invariants are never equal.
        let c3 = LatticeCode::new(
            FMat::identity(Backend::RatFunc, 2),
            vec![Rat::one(), Rat::zero()],
        )
        .unwrap();
        assert!(!c1.equal(&c3).unwrap());
        assert_eq!(c3.g_invariant(), &[Rat::one(), Rat::zero()]);
    }

    #[test]
    fn unimodular_right_factor_is_invisible() {
        let a = mat(vec![vec![fe(1), fe(1)], vec![fe(0), fe(1)]]);
        let code = LatticeCode::diagonalize(&a).unwrap();
        assert!(code
            .equal(&LatticeCode::standard(Backend::RatFunc, 2))
            .unwrap());
    }

    #[test]
    fn duals_in_dimension_one() {
        let o = LatticeCode::standard(Backend::RatFunc, 1);
        let od = o.dual(DualMode::O).unwrap();
        assert_eq!(od.signature(), &[SigTag::OShift { gamma: Rat::zero() }]);
        // Over Q(t) the M-dual of O is tO.
        let md = o.dual(DualMode::M).unwrap();
        assert_eq!(md.signature(), &[SigTag::OShift { gamma: Rat::one() }]);
        // Over Puiseux series it stays a strict component.
        let op = LatticeCode::standard(Backend::Puiseux, 1);
        let mdp = op.dual(DualMode::M).unwrap();
        assert_eq!(mdp.signature(), &[SigTag::MShift { gamma: Rat::zero() }]);
        // t^2·O dualizes to t^(-2)·O.
        let t2 = LatticeCode::new(FMat::identity(Backend::RatFunc, 1), vec![Rat::from_int(2)])
            .unwrap();
        let t2d = t2.dual(DualMode::O).unwrap();
        assert_eq!(t2d.signature(), &[SigTag::OShift { gamma: Rat::from_int(-2) }]);
    }

    #[test]
    fn double_o_dual_returns_the_lattice() {
        let a = mat(vec![vec![t_pow(1), fe(1)], vec![fe(1), fe(1)]]);
        let code = LatticeCode::diagonalize(&a).unwrap();
        let dd = LatticeCode::from_module(&code.dual(DualMode::O).unwrap())
            .unwrap()
            .dual(DualMode::O)
            .unwrap();
        let back = LatticeCode::from_module(&dd).unwrap();
        assert!(back.equal(&code).unwrap());
    }

    #[test]
    fn tn_codes() {
        let o2 = LatticeCode::standard(Backend::RatFunc, 2);
        assert!(TnCode::new(o2.clone(), vec![Rat::zero(), Rat::zero()]).is_err());
        let a = TnCode::new(o2.clone(), vec![Rat::one(), Rat::zero()]).unwrap();
        let b = TnCode::new(o2, vec![Rat::one(), Rat::zero()]).unwrap();
        assert!(a.equal(&b).unwrap());
    }
}
