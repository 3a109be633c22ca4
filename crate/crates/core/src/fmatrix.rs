//! Dense matrices over a valued-field backend, with exact Gaussian
//! elimination. All entries of a matrix share one backend.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Backend, FieldElem, RatFunc};
use crate::poly::Poly;
use crate::rational::Rat;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FMat {
    rows: usize,
    cols: usize,
    data: Vec<FieldElem>,
}

impl FMat {
    pub fn from_rows(rows: Vec<Vec<FieldElem>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged matrix rows".into()));
        }
        let data: Vec<FieldElem> = rows.into_iter().flatten().collect();
        if let Some(first) = data.first() {
            let b = first.backend();
            if data.iter().any(|e| e.backend() != b) {
                return Err(Error::BackendMismatch("matrix entries".into()));
            }
        }
        Ok(FMat { rows: r, cols: c, data })
    }

    pub fn zero(backend: Backend, rows: usize, cols: usize) -> Self {
        FMat {
            rows,
            cols,
            data: vec![FieldElem::zero(backend); rows * cols],
        }
    }

    pub fn identity(backend: Backend, n: usize) -> Self {
        let mut m = FMat::zero(backend, n, n);
        for i in 0..n {
            m[(i, i)] = FieldElem::one(backend);
        }
        m
    }

    pub fn diagonal(entries: Vec<FieldElem>) -> Result<Self> {
        let n = entries.len();
        if n == 0 {
            return Err(Error::EmptyInput);
        }
        let backend = entries[0].backend();
        let mut m = FMat::zero(backend, n, n);
        for (i, e) in entries.into_iter().enumerate() {
            if e.backend() != backend {
                return Err(Error::BackendMismatch("diagonal entries".into()));
            }
            m[(i, i)] = e;
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn backend(&self) -> Backend {
        self.data.first().map_or(Backend::RatFunc, FieldElem::backend)
    }

    pub fn row(&self, i: usize) -> &[FieldElem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<FieldElem> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<FieldElem>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> FMat {
        let mut out = FMat::zero(self.backend(), self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].clone();
            }
        }
        out
    }

    pub fn mul(&self, rhs: &FMat) -> Result<FMat> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} · {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = FMat::zero(self.backend(), self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                for j in 0..rhs.cols {
                    let prod = a.mul(&rhs[(k, j)])?;
                    out[(i, j)] = out[(i, j)].add(&prod)?;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[FieldElem]) -> Result<Vec<FieldElem>> {
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch("matrix · vector".into()));
        }
        let mut out = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut acc = FieldElem::zero(self.backend());
            for (a, b) in self.row(i).iter().zip(v) {
                acc = acc.add(&a.mul(b)?)?;
            }
            out.push(acc);
        }
        Ok(out)
    }

    /// Exact determinant. Over `Q(t)` this clears denominators row by row
    /// and runs fraction-free elimination on polynomials (exact divisions
    /// only); the generic path reduces fractions at every pivot and is kept
    /// for the Puiseux backend.
    pub fn det(&self) -> Result<FieldElem> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch("determinant of non-square matrix".into()));
        }
        if self.backend() == Backend::RatFunc && self.rows > 0 {
            let (mut p, scale) = self.to_poly_matrix();
            let det_poly = bareiss_det(&mut p);
            let num = RatFunc::from_poly(det_poly);
            let den = RatFunc::from_poly(scale);
            return Ok(FieldElem::RatFunc(num.div(&den)?));
        }
        self.det_generic()
    }

    fn det_generic(&self) -> Result<FieldElem> {
        let n = self.rows;
        let backend = self.backend();
        let mut m = self.clone();
        let mut det = FieldElem::one(backend);
        for c in 0..n {
            let mut pivot = None;
            for r in c..n {
                if !m[(r, c)].is_zero()? {
                    pivot = Some(r);
                    break;
                }
            }
            let Some(p) = pivot else {
                return Ok(FieldElem::zero(backend));
            };
            if p != c {
                m.swap_rows(p, c);
                det = det.neg();
            }
            det = det.mul(&m[(c, c)])?;
            let inv = m[(c, c)].inv()?;
            for r in c + 1..n {
                if m[(r, c)].is_zero()? {
                    continue;
                }
                let f = m[(r, c)].mul(&inv)?;
                for j in c..n {
                    let sub = f.mul(&m[(c, j)])?;
                    m[(r, j)] = m[(r, j)].sub(&sub)?;
                }
            }
        }
        Ok(det)
    }

    /// Clear denominators: returns a polynomial matrix `P` and the product
    /// of the rowwise scales, so `det(A) = det(P)/scale`.
    fn to_poly_matrix(&self) -> (Vec<Vec<Poly>>, Poly) {
        let (rows, scales) = self.to_poly_matrix_rows();
        let scale = scales.iter().fold(Poly::one(), |acc, s| acc.mul(s));
        (rows, scale)
    }

    /// Exact inverse; `SINGULAR_MATRIX` when not invertible.
    pub fn inverse(&self) -> Result<FMat> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch("inverse of non-square matrix".into()));
        }
        // Triangular matrices invert by substitution, with divisions only by
        // the diagonal.
        if self.is_upper_triangular()? {
            return self.inverse_upper_triangular();
        }
        if self.transpose().is_upper_triangular()? {
            return Ok(self.transpose().inverse_upper_triangular()?.transpose());
        }
        if self.backend() == Backend::RatFunc {
            if let Some(inv) = self.inverse_bareiss()? {
                return Ok(inv);
            }
            return Err(Error::SingularMatrix);
        }
        self.inverse_generic()
    }

    fn inverse_upper_triangular(&self) -> Result<FMat> {
        let n = self.rows;
        let backend = self.backend();
        let mut inv = FMat::zero(backend, n, n);
        for col in 0..n {
            for i in (0..=col).rev() {
                let mut acc = if i == col {
                    FieldElem::one(backend)
                } else {
                    FieldElem::zero(backend)
                };
                for j in i + 1..=col {
                    acc = acc.sub(&self[(i, j)].mul(&inv[(j, col)])?)?;
                }
                inv[(i, col)] = acc.div(&self[(i, i)])?;
            }
        }
        Ok(inv)
    }

    /// Fraction-free Gauss-Jordan with a multi-column right side; `None`
    /// when a pivot column dies (singular). All entries come out over the
    /// single denominator `det(P)`, so only one reduction per entry is
    /// needed.
    fn inverse_bareiss(&self) -> Result<Option<FMat>> {
        let n = self.rows;
        let (p, scale_rows) = self.to_poly_matrix_rows();
        let mut aug: Vec<Vec<Poly>> = (0..n)
            .map(|i| {
                let mut row = p[i].clone();
                for j in 0..n {
                    row.push(if i == j { scale_rows[i].clone() } else { Poly::zero() });
                }
                row
            })
            .collect();
        let Some(det) = bareiss_jordan(&mut aug, n) else {
            return Ok(None);
        };
        let den = RatFunc::from_poly(det);
        let mut inv = FMat::zero(Backend::RatFunc, n, n);
        for i in 0..n {
            for col in 0..n {
                let num = RatFunc::from_poly(aug[i][n + col].clone());
                inv[(i, col)] = FieldElem::RatFunc(num.div(&den)?);
            }
        }
        Ok(Some(inv))
    }

    fn to_poly_matrix_rows(&self) -> (Vec<Vec<Poly>>, Vec<Poly>) {
        let mut scales = Vec::with_capacity(self.rows);
        let rows = (0..self.rows)
            .map(|i| {
                let mut row_scale = Poly::one();
                for e in self.row(i) {
                    let FieldElem::RatFunc(x) = e else { unreachable!("ratfunc backend") };
                    let den = x.den();
                    let (_, r) = row_scale.divmod(den);
                    if !r.is_zero() {
                        row_scale = row_scale.mul(den);
                    }
                }
                let out: Vec<Poly> = self
                    .row(i)
                    .iter()
                    .map(|e| {
                        let FieldElem::RatFunc(x) = e else { unreachable!() };
                        let (q, r) = row_scale.divmod(x.den());
                        debug_assert!(r.is_zero());
                        x.num().mul(&q)
                    })
                    .collect();
                scales.push(row_scale);
                out
            })
            .collect();
        (rows, scales)
    }

    fn inverse_generic(&self) -> Result<FMat> {
        let n = self.rows;
        let backend = self.backend();
        let mut m = self.clone();
        let mut inv = FMat::identity(backend, n);
        for c in 0..n {
            let mut pivot = None;
            for r in c..n {
                if !m[(r, c)].is_zero()? {
                    pivot = Some(r);
                    break;
                }
            }
            let Some(p) = pivot else {
                return Err(Error::SingularMatrix);
            };
            m.swap_rows(p, c);
            inv.swap_rows(p, c);
            let pinv = m[(c, c)].inv()?;
            for j in 0..n {
                m[(c, j)] = m[(c, j)].mul(&pinv)?;
                inv[(c, j)] = inv[(c, j)].mul(&pinv)?;
            }
            for r in 0..n {
                if r == c || m[(r, c)].is_zero()? {
                    continue;
                }
                let f = m[(r, c)].clone();
                for j in 0..n {
                    let a = f.mul(&m[(c, j)])?;
                    m[(r, j)] = m[(r, j)].sub(&a)?;
                    let b = f.mul(&inv[(c, j)])?;
                    inv[(r, j)] = inv[(r, j)].sub(&b)?;
                }
            }
        }
        Ok(inv)
    }

    /// One exact solution of `A·x = b`, or `None` when inconsistent.
    pub fn solve(&self, b: &[FieldElem]) -> Result<Option<Vec<FieldElem>>> {
        if self.rows != b.len() {
            return Err(Error::DimensionMismatch("solve: rhs length".into()));
        }
        if self.rows == self.cols && self.rows > 0 && self.backend() == Backend::RatFunc {
            if let Some(x) = self.solve_bareiss(b)? {
                return Ok(Some(x));
            }
            // Singular square system: fall through to the generic
            // elimination for the consistency verdict.
        }
        self.solve_generic(b)
    }

    /// Fraction-free elimination for a square system; `None` means singular.
    fn solve_bareiss(&self, b: &[FieldElem]) -> Result<Option<Vec<FieldElem>>> {
        let n = self.rows;
        // Row scales must clear the right side too.
        let mut aug_field = FMat::zero(Backend::RatFunc, n, n + 1);
        for i in 0..n {
            for j in 0..n {
                aug_field[(i, j)] = self[(i, j)].clone();
            }
            aug_field[(i, n)] = b[i].clone();
        }
        let (mut aug, _) = aug_field.to_poly_matrix_rows();
        let Some(det) = bareiss_jordan(&mut aug, n) else {
            return Ok(None);
        };
        let den = RatFunc::from_poly(det);
        let mut x = Vec::with_capacity(n);
        for row in aug.iter().take(n) {
            let num = RatFunc::from_poly(row[n].clone());
            x.push(FieldElem::RatFunc(num.div(&den)?));
        }
        Ok(Some(x))
    }

    fn solve_generic(&self, b: &[FieldElem]) -> Result<Option<Vec<FieldElem>>> {
        let backend = self.backend();
        let mut aug = FMat::zero(backend, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, self.cols)] = b[i].clone();
        }
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let mut pivot = None;
            for i in r..self.rows {
                if !aug[(i, c)].is_zero()? {
                    pivot = Some(i);
                    break;
                }
            }
            let Some(p) = pivot else { continue };
            aug.swap_rows(p, r);
            let pinv = aug[(r, c)].inv()?;
            for j in c..=self.cols {
                aug[(r, j)] = aug[(r, j)].mul(&pinv)?;
            }
            for i in 0..self.rows {
                if i == r || aug[(i, c)].is_zero()? {
                    continue;
                }
                let f = aug[(i, c)].clone();
                for j in c..=self.cols {
                    let s = f.mul(&aug[(r, j)])?;
                    aug[(i, j)] = aug[(i, j)].sub(&s)?;
                }
            }
            pivots.push(c);
            r += 1;
        }
        // Inconsistent iff a row reduces to (0 … 0 | nonzero).
        for i in r..self.rows {
            if !aug[(i, self.cols)].is_zero()? {
                return Ok(None);
            }
        }
        let mut x = vec![FieldElem::zero(backend); self.cols];
        for (row, &p) in pivots.iter().enumerate() {
            x[p] = aug[(row, self.cols)].clone();
        }
        Ok(Some(x))
    }

    /// Whether the matrix is upper triangular with invertible diagonal.
    pub fn is_upper_triangular(&self) -> Result<bool> {
        if self.rows != self.cols {
            return Ok(false);
        }
        for i in 0..self.rows {
            if self[(i, i)].is_zero()? {
                return Ok(false);
            }
            for j in 0..i {
                if !self[(i, j)].is_zero()? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Whether the matrix is upper triangular with unit (exactly 1) diagonal.
    pub fn is_unipotent_upper(&self) -> Result<bool> {
        if !self.is_upper_triangular()? {
            return Ok(false);
        }
        let one = FieldElem::one(self.backend());
        Ok((0..self.rows).all(|i| self[(i, i)] == one))
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// Column operation `col_j += f · col_i`.
    pub fn col_add(&mut self, j: usize, f: &FieldElem, i: usize) -> Result<()> {
        for r in 0..self.rows {
            let add = f.mul(&self[(r, i)])?;
            self[(r, j)] = self[(r, j)].add(&add)?;
        }
        Ok(())
    }

    /// Scale column `j` by `f`.
    pub fn col_scale(&mut self, j: usize, f: &FieldElem) -> Result<()> {
        for r in 0..self.rows {
            self[(r, j)] = self[(r, j)].mul(f)?;
        }
        Ok(())
    }

    /// Right-multiply by `diag(t^γ)`.
    pub fn scale_cols_t_pow(&self, gamma: &[Rat]) -> Result<FMat> {
        if gamma.len() != self.cols {
            return Err(Error::DimensionMismatch("column scaling".into()));
        }
        let mut out = self.clone();
        for (j, g) in gamma.iter().enumerate() {
            let f = FieldElem::t_pow(self.backend(), g)?;
            out.col_scale(j, &f)?;
        }
        Ok(out)
    }
}

/// One-pass fraction-free Gauss-Jordan elimination on the leading `n`
/// columns of an `n`-row augmented polynomial matrix: at step `k` every row
/// other than the pivot row is updated by the two-by-two determinant formula
/// and divided exactly by the previous pivot. Entries stay bordered minors
/// of the input; afterwards the leading block is `det·I` up to the row
/// permutation, and the function returns `det` of the (permuted) square part
/// as the common denominator of the augmented columns. `None` means the
/// square part is singular.
fn bareiss_jordan(m: &mut [Vec<Poly>], n: usize) -> Option<Poly> {
    let total = m.first().map_or(0, Vec::len);
    let mut prev = Poly::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            let p = (k + 1..n).find(|&i| !m[i][k].is_zero())?;
            m.swap(k, p);
        }
        for i in 0..n {
            if i == k {
                continue;
            }
            for j in k + 1..total {
                let a = m[k][k].mul(&m[i][j]);
                let b = m[i][k].mul(&m[k][j]);
                let (q, r) = a.sub(&b).divmod(&prev);
                debug_assert!(r.is_zero(), "fraction-free division must be exact");
                m[i][j] = q;
            }
            m[i][k] = Poly::zero();
        }
        prev = m[k][k].clone();
    }
    Some(prev)
}

/// Determinant of a polynomial matrix by fraction-free elimination.
fn bareiss_det(m: &mut [Vec<Poly>]) -> Poly {
    let n = m.len();
    let mut sign = false;
    let mut prev = Poly::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return Poly::zero();
            };
            m.swap(k, p);
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let a = m[k][k].mul(&m[i][j]);
                let b = m[i][k].mul(&m[k][j]);
                let (q, r) = a.sub(&b).divmod(&prev);
                debug_assert!(r.is_zero(), "fraction-free division must be exact");
                m[i][j] = q;
            }
            m[i][k] = Poly::zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign {
        det.neg()
    } else {
        det
    }
}

impl std::ops::Index<(usize, usize)> for FMat {
    type Output = FieldElem;
    fn index(&self, (i, j): (usize, usize)) -> &FieldElem {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for FMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut FieldElem {
        &mut self.data[i * self.cols + j]
    }
}

impl Serialize for FMat {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for FMat {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<FieldElem>>::deserialize(d)?;
        FMat::from_rows(rows).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::Rat;

    fn fe(n: i64) -> FieldElem {
        FieldElem::from_rat(Backend::RatFunc, Rat::from_int(n))
    }

    fn t_pow(k: i64) -> FieldElem {
        FieldElem::t_pow(Backend::RatFunc, &Rat::from_int(k)).unwrap()
    }

    #[test]
    fn inverse_and_det() {
        let a = FMat::from_rows(vec![vec![t_pow(1), fe(1)], vec![fe(1), fe(1)]]).unwrap();
        let det = a.det().unwrap();
        // det = t - 1
        assert_eq!(det, t_pow(1).sub(&fe(1)).unwrap());
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv).unwrap(), FMat::identity(Backend::RatFunc, 2));
    }

    #[test]
    fn singular_matrix_rejected() {
        let a = FMat::from_rows(vec![vec![fe(1), fe(2)], vec![fe(2), fe(4)]]).unwrap();
        assert!(a.det().unwrap().is_zero().unwrap());
        assert!(matches!(a.inverse(), Err(Error::SingularMatrix)));
    }

    #[test]
    fn solve_in_span() {
        let a = FMat::from_rows(vec![vec![fe(1), fe(0)], vec![fe(1), t_pow(1)]]).unwrap();
        let x = a.solve(&[fe(1), fe(1)]).unwrap().unwrap();
        assert_eq!(a.mul_vec(&x).unwrap(), vec![fe(1), fe(1)]);
    }
}
