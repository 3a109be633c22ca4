//! Definable types on `Γ^n` over `Q`, represented by generic points of
//! lexicographically ordered `Q`-vector spaces.
//!
//! A point assigns each coordinate a `Q`-linear combination of positive
//! scales `ω_1 ≫ ω_2 ≫ … ≫ (rationals) ≫ … ≫ ε_2, ε_1`: finitely many
//! infinite scales above every rational and infinitesimal scales below every
//! positive rational, compared lexicographically block by block. Such a point
//! determines a complete definable type; two points give the same type iff
//! all their one-dimensional rational images agree, and the canonical form
//! below captures exactly that.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rat;
use crate::ratlin::RatMat;

/// Numbers of infinite (`ω`) and infinitesimal (`ε`) scales.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ScaleStructure {
    pub inf: usize,
    pub eps: usize,
}

impl ScaleStructure {
    pub fn width(&self) -> usize {
        self.inf + 1 + self.eps
    }
}

/// A generic point of `Γ^n`: an `n × (inf + 1 + eps)` rational coefficient
/// matrix whose columns are ordered `ω_1, …, ω_inf, 1, ε_1, …, ε_eps`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GammaPoint {
    n: usize,
    scales: ScaleStructure,
    coeffs: RatMat,
}

impl GammaPoint {
    pub fn new(n: usize, scales: ScaleStructure, coeffs: RatMat) -> Result<Self> {
        if coeffs.rows() != n || coeffs.cols() != scales.width() {
            return Err(Error::DimensionMismatch(format!(
                "coefficient matrix must be {n} x {}",
                scales.width()
            )));
        }
        Ok(GammaPoint { n, scales, coeffs })
    }

    /// A point with no scales: an honest rational tuple.
    pub fn constant(values: Vec<Rat>) -> Self {
        let n = values.len();
        GammaPoint {
            n,
            scales: ScaleStructure { inf: 0, eps: 0 },
            coeffs: RatMat::from_rows(values.into_iter().map(|v| vec![v]).collect()),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn scales(&self) -> ScaleStructure {
        self.scales
    }

    pub fn coeffs(&self) -> &RatMat {
        &self.coeffs
    }

    pub fn std_column(&self) -> Vec<Rat> {
        self.coeffs.col(self.scales.inf)
    }

    /// The scale-space row of coordinate `i`.
    pub fn row(&self, i: usize) -> &[Rat] {
        self.coeffs.row(i)
    }
}

/// A definable type on `Γ^n`: a generic point held in canonical form.
///
/// Canonicalization deletes unused scale columns, column-reduces each scale
/// block to an echelon form with `±1` pivots under the order-preserving
/// re-bases (upper triangular with positive diagonal), and reduces the
/// standard and `ε`-columns modulo the `ω`-column space (translating an
/// `ω`-scale by a rational or by an infinitesimal is order-preserving, so
/// those components carry no type information).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GammaType {
    point: GammaPoint,
}

impl GammaType {
    pub fn from_point(point: &GammaPoint) -> GammaType {
        GammaType {
            point: canonicalize(point),
        }
    }

    pub fn constant(values: Vec<Rat>) -> GammaType {
        GammaType::from_point(&GammaPoint::constant(values))
    }

    pub fn point(&self) -> &GammaPoint {
        &self.point
    }

    pub fn n(&self) -> usize {
        self.point.n
    }

    pub fn scales(&self) -> ScaleStructure {
        self.point.scales
    }

    /// Basis of the rational stabilizer `{c : the translate by c equals
    /// self}`: exactly the `ω`-column space.
    pub fn stab_basis(&self) -> Vec<Vec<Rat>> {
        (0..self.point.scales.inf)
            .map(|j| self.point.coeffs.col(j))
            .collect()
    }

    /// Directions in which the generic point is non-rational: the span of
    /// all `ω`- and `ε`-columns.
    pub fn variation_basis(&self) -> Vec<Vec<Rat>> {
        let s = self.point.scales;
        (0..s.inf)
            .chain(s.inf + 1..s.width())
            .map(|j| self.point.coeffs.col(j))
            .collect()
    }
}

/// Canonical form of a generic point (see [`GammaType`]).
fn canonicalize(point: &GammaPoint) -> GammaPoint {
    let n = point.n;
    let s = point.scales;
    let omega_cols: Vec<Vec<Rat>> = (0..s.inf).map(|j| point.coeffs.col(j)).collect();
    let std_col = point.coeffs.col(s.inf);
    let eps_cols: Vec<Vec<Rat>> = (s.inf + 1..s.width()).map(|j| point.coeffs.col(j)).collect();

    // 1. ω-block: echelon under "add earlier columns, scale positively".
    let mut omega: Vec<(Vec<Rat>, usize)> = Vec::new(); // (column, pivot row)
    for col in omega_cols {
        if let Some(c) = reduce_and_normalize(col, &omega) {
            omega.push(c);
        }
    }

    // 2. Standard column: reduce modulo the ω-columns.
    let std_col = reduce_against(std_col, &omega);

    // 3. ε-block: reduce modulo ω-columns and echelonize.
    let mut eps: Vec<(Vec<Rat>, usize)> = Vec::new();
    for col in eps_cols {
        let col = reduce_against(col, &omega);
        if let Some(c) = reduce_and_normalize(col, &eps) {
            eps.push(c);
        }
    }

    let scales = ScaleStructure {
        inf: omega.len(),
        eps: eps.len(),
    };
    let mut rows: Vec<Vec<Rat>> = vec![Vec::with_capacity(scales.width()); n];
    for (col, _) in &omega {
        for (i, row) in rows.iter_mut().enumerate() {
            row.push(col[i].clone());
        }
    }
    for (i, row) in rows.iter_mut().enumerate() {
        row.push(std_col[i].clone());
    }
    for (col, _) in &eps {
        for (i, row) in rows.iter_mut().enumerate() {
            row.push(col[i].clone());
        }
    }
    GammaPoint {
        n,
        scales,
        coeffs: RatMat::from_rows(rows),
    }
}

/// Zero the entries of `col` at the pivot rows of the processed columns.
fn reduce_against(mut col: Vec<Rat>, processed: &[(Vec<Rat>, usize)]) -> Vec<Rat> {
    for (p, pivot_row) in processed {
        if col[*pivot_row].is_zero() {
            continue;
        }
        let f = &col[*pivot_row] / &p[*pivot_row];
        for (a, b) in col.iter_mut().zip(p) {
            *a = &*a - &(&f * b);
        }
    }
    col
}

/// Reduce, drop when zero, and normalize the pivot to `±1` (only positive
/// scalings preserve the order type, so the pivot sign is an invariant).
fn reduce_and_normalize(
    col: Vec<Rat>,
    processed: &[(Vec<Rat>, usize)],
) -> Option<(Vec<Rat>, usize)> {
    let col = reduce_against(col, processed);
    let pivot_row = col.iter().position(|c| !c.is_zero())?;
    let scale = col[pivot_row].abs().recip().unwrap();
    let col = col.iter().map(|c| c * &scale).collect();
    Some((col, pivot_row))
}

/// Pushforward under the affine map `x ↦ A·x + c`.
pub fn push(p: &GammaPoint, a: &RatMat, c: &[Rat]) -> Result<GammaType> {
    if a.cols() != p.n || c.len() != a.rows() {
        return Err(Error::DimensionMismatch("pushforward shape".into()));
    }
    let mut coeffs = a.mul(&p.coeffs);
    let std = p.scales.inf;
    for (i, ci) in c.iter().enumerate() {
        coeffs[(i, std)] = &coeffs[(i, std)] + ci;
    }
    Ok(GammaType::from_point(&GammaPoint {
        n: a.rows(),
        scales: p.scales,
        coeffs,
    }))
}

/// Pushforward of a type (already canonical input).
pub fn push_type(p: &GammaType, a: &RatMat, c: &[Rat]) -> Result<GammaType> {
    push(&p.point, a, c)
}

/// Translation pushforward `x ↦ x + c`.
pub fn translate(p: &GammaType, c: &[Rat]) -> Result<GammaType> {
    push(&p.point, &RatMat::identity(p.n()), c)
}

/// Product type of `p` and `q`: the type of a tuple `(x, y)` where `y`
/// realizes `q` and `x` realizes `p` generically over the base extended by
/// `y`. Freshness forces the merge: `p`'s infinite scales dominate `q`'s and
/// `p`'s infinitesimal scales sit below `q`'s.
pub fn product(p: &GammaType, q: &GammaType) -> GammaType {
    let (pp, qq) = (&p.point, &q.point);
    let n = pp.n + qq.n;
    let scales = ScaleStructure {
        inf: pp.scales.inf + qq.scales.inf,
        eps: pp.scales.eps + qq.scales.eps,
    };
    let mut rows: Vec<Vec<Rat>> = Vec::with_capacity(n);
    for i in 0..pp.n {
        let mut row = Vec::with_capacity(scales.width());
        // ω: p-block above q-block.
        row.extend((0..pp.scales.inf).map(|j| pp.coeffs[(i, j)].clone()));
        row.extend(std::iter::repeat_with(Rat::zero).take(qq.scales.inf));
        row.push(pp.coeffs[(i, pp.scales.inf)].clone());
        // ε: q-block above p-block (p's fresh infinitesimals are smaller).
        row.extend(std::iter::repeat_with(Rat::zero).take(qq.scales.eps));
        row.extend((0..pp.scales.eps).map(|j| pp.coeffs[(i, pp.scales.inf + 1 + j)].clone()));
        rows.push(row);
    }
    for i in 0..qq.n {
        let mut row = Vec::with_capacity(scales.width());
        row.extend(std::iter::repeat_with(Rat::zero).take(pp.scales.inf));
        row.extend((0..qq.scales.inf).map(|j| qq.coeffs[(i, j)].clone()));
        row.push(qq.coeffs[(i, qq.scales.inf)].clone());
        row.extend((0..qq.scales.eps).map(|j| qq.coeffs[(i, qq.scales.inf + 1 + j)].clone()));
        row.extend(std::iter::repeat_with(Rat::zero).take(pp.scales.eps));
        rows.push(row);
    }
    GammaType::from_point(&GammaPoint {
        n,
        scales,
        coeffs: RatMat::from_rows(rows),
    })
}

/// The limit of the type in `Γ^n`, when all `ω`-columns vanish.
pub fn limit(p: &GammaType) -> Option<Vec<Rat>> {
    if p.point.scales.inf == 0 {
        Some(p.point.std_column())
    } else {
        None
    }
}

/// Decomposition into a finite-limit part and a purely infinite part.
///
/// Returns `(T, k)` with `T` invertible over `Q`: the first `k` rows of
/// `T·g` span every direction with a finite limit (the rational left kernel
/// of the ω-block), and every nonzero combination of the remaining rows has
/// a nonzero leading ω-coefficient; those rows are sign-normalized so the
/// leading coefficient is positive.
pub fn decompose(p: &GammaType) -> (RatMat, usize) {
    let pt = &p.point;
    let omega = RatMat::from_rows(
        (0..pt.n)
            .map(|i| (0..pt.scales.inf).map(|j| pt.coeffs[(i, j)].clone()).collect())
            .collect::<Vec<_>>(),
    );
    let mut kernel = omega.left_kernel_basis();
    for row in &mut kernel {
        if row.iter().find(|c| !c.is_zero()).is_some_and(Rat::is_negative) {
            for c in row.iter_mut() {
                *c = -&*c;
            }
        }
    }
    let k = kernel.len();
    let mut rows = kernel;
    // Complement: coordinate rows at independent ω-rows, sign-fixed.
    let mut mt = omega.transpose();
    let pivots = mt.rref();
    for &r in &pivots {
        let mut row = vec![Rat::zero(); pt.n];
        row[r] = Rat::one();
        let image: Vec<Rat> = (0..pt.scales.inf).map(|j| omega[(r, j)].clone()).collect();
        let lead = image.iter().find(|c| !c.is_zero());
        if let Some(lead) = lead {
            if lead.is_negative() {
                row[r] = -Rat::one();
            }
        }
        rows.push(row);
    }
    (RatMat::from_rows(rows), k)
}

/// Translate the type so that its standard part vanishes: returns `(c, p0)`
/// with `p0` the translate of `p` by `c` and `c` the negated standard column
/// of the given point.
pub fn translate_to_zero(p: &GammaPoint) -> Result<(Vec<Rat>, GammaType)> {
    let c: Vec<Rat> = p.std_column().iter().map(|v| -v).collect();
    let p0 = push(p, &RatMat::identity(p.n), &c)?;
    Ok((c, p0))
}

/// Membership of a rational vector in the stabilizer `S(p)` under
/// translation.
pub fn stab_member(p: &GammaType, c: &[Rat]) -> Result<bool> {
    Ok(&translate(p, c)? == p)
}

// --- JSON ------------------------------------------------------------------

impl Serialize for GammaPoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = s.serialize_map(Some(4))?;
        map.serialize_entry("n", &self.n)?;
        map.serialize_entry("inf", &self.scales.inf)?;
        map.serialize_entry("eps", &self.scales.eps)?;
        map.serialize_entry("coeffs", &self.coeffs.to_rows())?;
        map.end()
    }
}

impl<'de> Deserialize<'de> for GammaPoint {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            n: usize,
            inf: usize,
            eps: usize,
            coeffs: Vec<Vec<Rat>>,
        }
        let r = Repr::deserialize(d)?;
        let coeffs = RatMat::from_rows(r.coeffs);
        GammaPoint::new(r.n, ScaleStructure { inf: r.inf, eps: r.eps }, coeffs)
            .map_err(serde::de::Error::custom)
    }
}

impl Serialize for GammaType {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.point.serialize(s)
    }
}

impl<'de> Deserialize<'de> for GammaType {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let p = GammaPoint::deserialize(d)?;
        Ok(GammaType::from_point(&p))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rat {
        Rat::from_int(n)
    }

    /// Point with one ω and one ε scale available: coeff rows (ω, std, ε).
    fn pt(rows: Vec<[i64; 3]>) -> GammaPoint {
        let n = rows.len();
        GammaPoint::new(
            n,
            ScaleStructure { inf: 1, eps: 1 },
            RatMat::from_rows(
                rows.into_iter()
                    .map(|[a, b, c]| vec![r(a), r(b), r(c)])
                    .collect(),
            ),
        )
        .unwrap()
    }

    #[test]
    fn rational_translate_of_infinite_type_is_absorbed() {
        // ω1 - 3 and ω1 are the same type over Q.
        let a = GammaType::from_point(&pt(vec![[1, -3, 0]]));
        let b = GammaType::from_point(&pt(vec![[1, 0, 0]]));
        assert_eq!(a, b);
        // but 3 + ε and 4 + ε differ.
        let c = GammaType::from_point(&pt(vec![[0, 3, 1]]));
        let d = GammaType::from_point(&pt(vec![[0, 4, 1]]));
        assert_ne!(c, d);
    }

    #[test]
    fn push_linear_image() {
        // (3+ε, 5) under [[1,0],[1,1]] -> (3+ε, 8+ε).
        let p = GammaType::from_point(&pt(vec![[0, 3, 1], [0, 5, 0]]));
        let a = RatMat::from_rows(vec![vec![r(1), r(0)], vec![r(1), r(1)]]);
        let out = push_type(&p, &a, &[r(0), r(0)]).unwrap();
        let expect = GammaType::from_point(&pt(vec![[0, 3, 1], [0, 8, 1]]));
        assert_eq!(out, expect);
    }

    #[test]
    fn push_functoriality() {
        let p = GammaType::from_point(&pt(vec![[1, 2, 0], [0, -1, 1]]));
        let a = RatMat::from_rows(vec![vec![r(1), r(2)], vec![r(0), r(1)]]);
        let b = RatMat::from_rows(vec![vec![r(1), r(-1)], vec![r(3), r(1)]]);
        let lhs = push_type(&push_type(&p, &a, &[r(0), r(0)]).unwrap(), &b, &[r(0), r(0)]).unwrap();
        let rhs = push_type(&p, &b.mul(&a), &[r(0), r(0)]).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn product_is_ordered() {
        // p = q = type of ω: p⊗q realizes x ≫ y, q⊗p the reverse; they differ.
        let p = GammaType::from_point(&pt(vec![[1, 0, 0]]));
        let pq = product(&p, &p);
        let qp_rows = pq.point().coeffs().to_rows();
        assert_eq!(
            qp_rows,
            vec![vec![r(1), r(0), r(0)], vec![r(0), r(1), r(0)]]
        );
        // Swapping coordinates gives a genuinely different type.
        let swap = RatMat::from_rows(vec![vec![r(0), r(1)], vec![r(1), r(0)]]);
        let swapped = push_type(&pq, &swap, &[r(0), r(0)]).unwrap();
        assert_ne!(pq, swapped);
        // Product with a constant type commutes.
        let c = GammaType::constant(vec![r(7)]);
        let left = product(&p, &c);
        let right = product(&c, &p);
        let swap2 = RatMat::from_rows(vec![vec![r(0), r(1)], vec![r(1), r(0)]]);
        assert_eq!(push_type(&left, &swap2, &[r(0), r(0)]).unwrap(), right);
    }

    #[test]
    fn limits() {
        assert_eq!(
            limit(&GammaType::from_point(&pt(vec![[0, 3, 1], [0, 5, 0]]))),
            Some(vec![r(3), r(5)])
        );
        assert_eq!(limit(&GammaType::from_point(&pt(vec![[1, 0, 0]]))), None);
        assert_eq!(
            limit(&GammaType::from_point(&pt(vec![[0, 0, 1], [0, 0, 2]]))),
            Some(vec![r(0), r(0)])
        );
    }

    #[test]
    fn decompose_splits_finite_and_infinite() {
        // (ω1, ω1 + ε1): finite part spanned by (1,-1), infinite by e1.
        let p = GammaType::from_point(&pt(vec![[1, 0, 0], [1, 0, 1]]));
        let (t, k) = decompose(&p);
        assert_eq!(k, 1);
        assert_eq!(t.to_rows(), vec![vec![r(1), r(-1)], vec![r(1), r(0)]]);
        assert!(t.inverse().is_some());
        // (3+ε, 5) is all finite.
        let p = GammaType::from_point(&pt(vec![[0, 3, 1], [0, 5, 0]]));
        let (t, k) = decompose(&p);
        assert_eq!(k, 2);
        assert!(t.inverse().is_some());
        // (ω1, ω2) is all infinite.
        let p2 = GammaType::from_point(&GammaPoint::new(
            2,
            ScaleStructure { inf: 2, eps: 0 },
            RatMat::from_rows(vec![vec![r(1), r(0), r(0)], vec![r(0), r(1), r(0)]]),
        )
        .unwrap());
        let (t, k) = decompose(&p2);
        assert_eq!(k, 0);
        assert_eq!(t, RatMat::identity(2));
    }

    #[test]
    fn translate_to_zero_uses_raw_standard_part() {
        // Raw point (ω1+7, 2): c = (-7,-2).
        let p = pt(vec![[1, 7, 0], [0, 2, 0]]);
        let (c, p0) = translate_to_zero(&p).unwrap();
        assert_eq!(c, vec![r(-7), r(-2)]);
        assert!(p0.point().std_column().iter().all(Rat::is_zero));
        // (3+ε) -> c = (-3), p0 = type of ε.
        let p = pt(vec![[0, 3, 1]]);
        let (c, p0) = translate_to_zero(&p).unwrap();
        assert_eq!(c, vec![r(-3)]);
        assert_eq!(p0, GammaType::from_point(&pt(vec![[0, 0, 1]])));
        // Constant (4) -> the constant type at 0.
        let p = GammaPoint::constant(vec![r(4)]);
        let (c, p0) = translate_to_zero(&p).unwrap();
        assert_eq!(c, vec![r(-4)]);
        assert_eq!(p0, GammaType::constant(vec![r(0)]));
    }

    #[test]
    fn stabilizer_membership() {
        // Translating the +∞ type by any rational fixes it.
        let top = GammaType::from_point(&pt(vec![[1, 0, 0]]));
        assert!(stab_member(&top, &[r(5)]).unwrap());
        // Translating the just-above-0 type moves its limit.
        let eps = GammaType::from_point(&pt(vec![[0, 0, 1]]));
        assert!(!stab_member(&eps, &[r(1)]).unwrap());
        assert!(stab_member(&eps, &[r(0)]).unwrap());
    }

    #[test]
    fn canonical_form_is_rebase_invariant() {
        // Apply an order-preserving scale re-base and a scale translation;
        // the canonical form must not move.
        let p = GammaPoint::new(
            2,
            ScaleStructure { inf: 2, eps: 1 },
            RatMat::from_rows(vec![
                vec![r(2), r(1), r(3), r(1)],
                vec![r(0), r(1), r(-1), r(2)],
            ]),
        )
        .unwrap();
        let base = GammaType::from_point(&p);
        // ω1' = 2ω1, ω2' = -ω1 + 3ω2 (upper triangular, positive diagonal),
        // std += 5·ω2-column, ε1 += ω1-column.
        let mut coeffs = p.coeffs().clone();
        for i in 0..2 {
            let w1 = coeffs[(i, 0)].clone();
            let w2 = coeffs[(i, 1)].clone();
            coeffs[(i, 0)] = &w1 * &r(2);
            coeffs[(i, 1)] = &(&w1 * &r(-1)) + &(&w2 * &r(3));
            coeffs[(i, 2)] = &coeffs[(i, 2)] + &(&w2 * &r(5));
            coeffs[(i, 3)] = &coeffs[(i, 3)] + &w1;
        }
        let q = GammaPoint::new(2, p.scales(), coeffs).unwrap();
        assert_eq!(GammaType::from_point(&q), base);
    }
}
