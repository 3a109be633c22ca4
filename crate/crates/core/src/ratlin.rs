//! Exact linear algebra over `Q`: reduced row echelon form, kernels, rank,
//! solving. Used wherever residue vectors or `Γ`-coefficients are reduced.

use crate::rational::Rat;

/// Dense matrix over `Q`, row-major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatMat {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl RatMat {
    pub fn new(rows: usize, cols: usize) -> Self {
        RatMat {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = RatMat::new(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        RatMat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<Rat> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Rat>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> RatMat {
        let mut out = RatMat::new(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].clone();
            }
        }
        out
    }

    pub fn mul(&self, rhs: &RatMat) -> RatMat {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out = RatMat::new(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] = &out[(i, j)] + &(a * &rhs[(k, j)]);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(Rat::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self[(i, c)].is_zero()) else {
                continue;
            };
            self.swap_rows(r, p);
            let inv = self[(r, c)].recip().unwrap();
            for j in c..self.cols {
                self[(r, j)] = &self[(r, j)] * &inv;
            }
            for i in 0..self.rows {
                if i != r && !self[(i, c)].is_zero() {
                    let f = self[(i, c)].clone();
                    for j in c..self.cols {
                        self[(i, j)] = &self[(i, j)] - &(&f * &self[(r, j)]);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Basis of the right kernel `{x : A·x = 0}`, one vector per free column
    /// of the RREF, in ascending free-column order.
    pub fn kernel_basis(&self) -> Vec<Vec<Rat>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivots.contains(&free) {
                continue;
            }
            let mut v = vec![Rat::zero(); self.cols];
            v[free] = Rat::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -&m[(r, free)];
            }
            basis.push(v);
        }
        basis
    }

    /// Basis of the left kernel `{a : a·A = 0}`.
    pub fn left_kernel_basis(&self) -> Vec<Vec<Rat>> {
        self.transpose().kernel_basis()
    }

    /// Exact inverse; `None` when singular.
    pub fn inverse(&self) -> Option<RatMat> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        let n = self.rows;
        let mut aug = RatMat::new(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = Rat::one();
        }
        let pivots = aug.rref();
        if pivots != (0..n).collect::<Vec<_>>() {
            return None;
        }
        let mut out = RatMat::new(n, n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = aug[(i, n + j)].clone();
            }
        }
        Some(out)
    }

    /// One solution of `A·x = b`, if any.
    pub fn solve(&self, b: &[Rat]) -> Option<Vec<Rat>> {
        assert_eq!(self.rows, b.len(), "dimension mismatch");
        let mut aug = RatMat::new(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, self.cols)] = b[i].clone();
        }
        let pivots = aug.rref();
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![Rat::zero(); self.cols];
        for (r, &p) in pivots.iter().enumerate() {
            x[p] = aug[(r, self.cols)].clone();
        }
        Some(x)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Rat::is_zero)
    }
}

impl std::ops::Index<(usize, usize)> for RatMat {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RatMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        &mut self.data[i * self.cols + j]
    }
}

/// Incremental rank tracker over `Q`; rows are fed one at a time.
pub struct RankTracker {
    cols: usize,
    echelon: Vec<Vec<Rat>>,
}

impl RankTracker {
    pub fn new(cols: usize) -> Self {
        RankTracker {
            cols,
            echelon: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.echelon.len()
    }

    /// Returns true when the row increased the rank.
    pub fn offer(&mut self, row: &[Rat]) -> bool {
        assert_eq!(row.len(), self.cols);
        let mut v = row.to_vec();
        for e in &self.echelon {
            let lead = e.iter().position(|c| !c.is_zero()).unwrap();
            if !v[lead].is_zero() {
                let f = &v[lead] / &e[lead];
                for (a, b) in v.iter_mut().zip(e) {
                    *a = &*a - &(&f * b);
                }
            }
        }
        if v.iter().all(Rat::is_zero) {
            return false;
        }
        self.echelon.push(v);
        self.echelon.sort_by_key(|e| e.iter().position(|c| !c.is_zero()));
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> RatMat {
        RatMat::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Rat::from_int(x)).collect())
                .collect(),
        )
    }

    #[test]
    fn kernel_and_rank() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6]]);
        assert_eq!(a.rank(), 1);
        let ker = a.kernel_basis();
        assert_eq!(ker.len(), 2);
        for v in &ker {
            assert!(a.mul_vec(v).iter().all(Rat::is_zero));
        }
    }

    #[test]
    fn inverse_round_trip() {
        let a = m(&[&[2, 1], &[1, 1]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), RatMat::identity(2));
        assert!(m(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn solve_consistent_system() {
        let a = m(&[&[1, 1], &[0, 1]]);
        let x = a.solve(&[Rat::from_int(3), Rat::from_int(1)]).unwrap();
        assert_eq!(a.mul_vec(&x), vec![Rat::from_int(3), Rat::from_int(1)]);
        assert!(m(&[&[1, 0], &[1, 0]]).solve(&[Rat::one(), Rat::zero()]).is_none());
    }
}
