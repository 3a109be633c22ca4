//! Valued vector spaces over a field backend: separated families and
//! valuations of tensors.
//!
//! A family `a_1, …, a_m` is separated when `v(Σ c_i a_i) = min_i
//! (v(c_i) + v(a_i))` for all scalars. The reduction below turns any finite
//! family into a separated one spanning the same subspace, by tropical row
//! reduction on residue vectors.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Backend, FieldElem};
use crate::fmatrix::FMat;
use crate::lattice::LatticeCode;
use crate::rational::{GammaVal, Rat};
use crate::ratlin::RatMat;

/// How a vector's valuation is computed.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ValRule {
    /// `v(x) = min_i v(x_i)`.
    Standard,
    /// The valuation induced by a lattice: minimal coordinate valuation in
    /// the lattice basis, shifted by the lattice exponents.
    ByLattice(LatticeCode),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VVector {
    entries: Vec<FieldElem>,
    rule: ValRule,
}

impl VVector {
    pub fn standard(entries: Vec<FieldElem>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyInput);
        }
        let b = entries[0].backend();
        if entries.iter().any(|e| e.backend() != b) {
            return Err(Error::BackendMismatch("vector entries".into()));
        }
        Ok(VVector {
            entries,
            rule: ValRule::Standard,
        })
    }

    pub fn by_lattice(entries: Vec<FieldElem>, lattice: LatticeCode) -> Result<Self> {
        let mut v = VVector::standard(entries)?;
        if v.entries.len() != lattice.n() {
            return Err(Error::DimensionMismatch("lattice dimension".into()));
        }
        v.rule = ValRule::ByLattice(lattice);
        Ok(v)
    }

    pub fn entries(&self) -> &[FieldElem] {
        &self.entries
    }

    pub fn rule(&self) -> &ValRule {
        &self.rule
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn backend(&self) -> Backend {
        self.entries[0].backend()
    }

    pub fn vval(&self) -> Result<GammaVal> {
        match &self.rule {
            ValRule::Standard => min_entry_val(&self.entries),
            ValRule::ByLattice(code) => {
                let z = code.solve_unipotent(&self.entries)?;
                let mut best = GammaVal::Infinity;
                for (zi, g) in z.iter().zip(code.g_invariant()) {
                    let v = match zi.val()? {
                        GammaVal::Infinity => continue,
                        GammaVal::Finite(v) => GammaVal::Finite(&v - g),
                    };
                    if v < best {
                        best = v;
                    }
                }
                Ok(best)
            }
        }
    }

    pub fn is_zero(&self) -> Result<bool> {
        for e in &self.entries {
            if !e.is_zero()? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn min_entry_val(entries: &[FieldElem]) -> Result<GammaVal> {
    let mut best = GammaVal::Infinity;
    for e in entries {
        let v = e.val()?;
        if v < best {
            best = v;
        }
    }
    Ok(best)
}

/// Output of [`separate`]: a separated family spanning the input span.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SeparatedFamily {
    /// The separated vectors, in retained-input order.
    pub vectors: Vec<Vec<FieldElem>>,
    /// Row `i` expresses `vectors[i]` as a combination of the input family.
    pub transform: FMat,
    /// Indices of input vectors found linearly dependent on earlier ones.
    pub dropped: Vec<usize>,
}

/// Residue class of a valuation modulo the backend value group; values in
/// the same class can be scaled to a common valuation by a field element.
fn gamma_class(backend: Backend, v: &Rat) -> Rat {
    match backend {
        Backend::RatFunc => v.fract(),
        Backend::Puiseux => Rat::zero(),
    }
}

/// Reduce a family of standard-valued vectors to a separated family with the
/// same span.
///
/// Field-linear dependencies are first removed exactly (a dependent vector
/// can approach zero without reaching it under rational-coefficient
/// reduction, so rank elimination has to be exact). The retained family is
/// then repeatedly tested for separatedness: vectors are grouped into
/// valuation classes modulo the value group, scaled to valuation 0, and their
/// residue vectors checked for linear independence over `Q`. A failing
/// residue relation strictly increases the valuation of its highest-index
/// vector; the increments live in a fixed discrete subgroup and the total
/// valuation is bounded by the minor valuations of the input, so the loop
/// terminates.
pub fn separate(vectors: &[VVector]) -> Result<SeparatedFamily> {
    if vectors.is_empty() {
        return Err(Error::EmptyInput);
    }
    let dim = vectors[0].len();
    let backend = vectors[0].backend();
    for v in vectors {
        if v.rule() != &ValRule::Standard {
            return Err(Error::ValuationRule);
        }
        if v.len() != dim {
            return Err(Error::DimensionMismatch("vector lengths".into()));
        }
        if v.backend() != backend {
            return Err(Error::BackendMismatch("vector family".into()));
        }
    }

    // Exact rank elimination.
    let m = vectors.len();
    let mut retained: Vec<usize> = Vec::new();
    let mut dropped: Vec<usize> = Vec::new();
    for j in 0..m {
        if vectors[j].is_zero()? || in_span(vectors, &retained, j)? {
            dropped.push(j);
        } else {
            retained.push(j);
        }
    }
    if retained.is_empty() {
        return Ok(SeparatedFamily {
            vectors: Vec::new(),
            transform: FMat::zero(backend, 0, m),
            dropped,
        });
    }

    let mut current: Vec<Vec<FieldElem>> = retained
        .iter()
        .map(|&j| vectors[j].entries().to_vec())
        .collect();
    let mut transform = FMat::zero(backend, retained.len(), m);
    for (row, &j) in retained.iter().enumerate() {
        transform[(row, j)] = FieldElem::one(backend);
    }

    loop {
        let vals: Vec<Rat> = current
            .iter()
            .map(|v| {
                min_entry_val(v).and_then(|g| match g {
                    GammaVal::Finite(q) => Ok(q),
                    GammaVal::Infinity => Err(Error::Malformed(
                        "zero vector in an independent family".into(),
                    )),
                })
            })
            .collect::<Result<_>>()?;

        // Scale to valuation 0 and collect residue vectors per class.
        let mut scaled: Vec<Vec<FieldElem>> = Vec::with_capacity(current.len());
        for (v, val) in current.iter().zip(&vals) {
            let f = FieldElem::t_pow(backend, &-val)?;
            scaled.push(v.iter().map(|e| e.mul(&f)).collect::<Result<_>>()?);
        }
        let mut classes: Vec<(Rat, Vec<usize>)> = Vec::new();
        for (i, val) in vals.iter().enumerate() {
            let key = gamma_class(backend, val);
            match classes.iter_mut().find(|(k, _)| k == &key) {
                Some((_, ids)) => ids.push(i),
                None => classes.push((key, vec![i])),
            }
        }

        let mut relation: Option<(Vec<usize>, Vec<Rat>)> = None;
        for (_, ids) in &classes {
            let rows: Vec<Vec<Rat>> = ids
                .iter()
                .map(|&i| residue_vector(&scaled[i]))
                .collect::<Result<_>>()?;
            let kernel = RatMat::from_rows(rows).left_kernel_basis();
            if let Some(rel) = kernel.last() {
                // The kernel vector of the highest free index reduces the
                // highest-index vector of the relation.
                relation = Some((ids.clone(), rel.clone()));
                break;
            }
        }

        let Some((ids, rel)) = relation else {
            break;
        };
        let target_pos = rel
            .iter()
            .rposition(|c| !c.is_zero())
            .expect("nonzero kernel vector");
        let target = ids[target_pos];
        let pivot_coeff = rel[target_pos].clone();
        // new a_target = Σ_i (c_i / c_target) · t^(v_target - v_i) · a_i
        let mut new_vec = vec![FieldElem::zero(backend); dim];
        let mut new_row = vec![FieldElem::zero(backend); m];
        for (pos, &i) in ids.iter().enumerate() {
            let c = &rel[pos];
            if c.is_zero() {
                continue;
            }
            let coeff = FieldElem::t_pow(backend, &(&vals[target] - &vals[i]))?
                .scale(&(c / &pivot_coeff));
            for (acc, e) in new_vec.iter_mut().zip(&current[i]) {
                *acc = acc.add(&e.mul(&coeff)?)?;
            }
            for (acc, e) in new_row.iter_mut().zip(transform.row(i)) {
                *acc = acc.add(&e.mul(&coeff)?)?;
            }
        }
        current[target] = new_vec;
        for (k, e) in new_row.into_iter().enumerate() {
            transform[(target, k)] = e;
        }
    }

    Ok(SeparatedFamily {
        vectors: current,
        transform,
        dropped,
    })
}

/// Residues of a valuation-`≥ 0` scaled vector: entries of valuation 0 map
/// to their residue, entries of positive valuation to 0.
fn residue_vector(v: &[FieldElem]) -> Result<Vec<Rat>> {
    v.iter()
        .map(|e| match e.val()? {
            GammaVal::Finite(q) if q.is_zero() => e.residue(),
            _ => Ok(Rat::zero()),
        })
        .collect()
}

/// Is `vectors[j]` in the field span of the retained vectors?
fn in_span(vectors: &[VVector], retained: &[usize], j: usize) -> Result<bool> {
    if retained.is_empty() {
        return Ok(false);
    }
    Ok(span_coordinates(vectors, retained, j)?.is_some())
}

fn span_coordinates(
    vectors: &[VVector],
    retained: &[usize],
    j: usize,
) -> Result<Option<Vec<FieldElem>>> {
    let dim = vectors[j].len();
    let cols: Vec<Vec<FieldElem>> = (0..dim)
        .map(|r| retained.iter().map(|&i| vectors[i].entries()[r].clone()).collect())
        .collect();
    let a = FMat::from_rows(cols)?;
    a.solve(vectors[j].entries())
}

/// Valuation of a tensor `Σ a_i ⊗ b_i` of standard-valued vectors: rewrite
/// over a separated family of left factors and take the minimum of
/// `v(a'_j) + v(b'_j)`; `∞` exactly when the tensor is zero.
pub fn tensor_val(pairs: &[(VVector, VVector)]) -> Result<GammaVal> {
    if pairs.is_empty() {
        return Err(Error::EmptyInput);
    }
    for (_, b) in pairs {
        if b.rule() != &ValRule::Standard {
            return Err(Error::ValuationRule);
        }
    }
    let left: Vec<VVector> = pairs.iter().map(|(a, _)| a.clone()).collect();
    let sep = separate(&left)?;
    let backend = left[0].backend();

    // Express every input left factor over the separated family.
    let sep_vvecs: Vec<VVector> = sep
        .vectors
        .iter()
        .map(|v| VVector::standard(v.clone()))
        .collect::<Result<_>>()?;
    let all: Vec<usize> = (0..sep_vvecs.len()).collect();
    let mut right_combined: Vec<Vec<FieldElem>> =
        vec![vec![FieldElem::zero(backend); pairs[0].1.len()]; sep.vectors.len()];
    for (a, b) in pairs {
        if a.is_zero()? {
            continue;
        }
        let coords = span_coordinates_vv(&sep_vvecs, &all, a)?
            .ok_or_else(|| Error::Malformed("left factor outside the separated span".into()))?;
        for (jj, c) in coords.iter().enumerate() {
            if c.is_zero()? {
                continue;
            }
            for (acc, e) in right_combined[jj].iter_mut().zip(b.entries()) {
                *acc = acc.add(&e.mul(c)?)?;
            }
        }
    }

    let mut best = GammaVal::Infinity;
    for (a, b) in sep.vectors.iter().zip(&right_combined) {
        let vb = min_entry_val(b)?;
        if vb.is_infinite() {
            continue;
        }
        let va = min_entry_val(a)?;
        let v = &va + &vb;
        if v < best {
            best = v;
        }
    }
    Ok(best)
}

fn span_coordinates_vv(
    basis: &[VVector],
    retained: &[usize],
    target: &VVector,
) -> Result<Option<Vec<FieldElem>>> {
    let dim = target.len();
    let cols: Vec<Vec<FieldElem>> = (0..dim)
        .map(|r| retained.iter().map(|&i| basis[i].entries()[r].clone()).collect())
        .collect();
    let a = FMat::from_rows(cols)?;
    a.solve(target.entries())
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

    fn vv(entries: Vec<FieldElem>) -> VVector {
        VVector::standard(entries).unwrap()
    }

    /// Check the separation identity on a grid of rational coefficients.
    fn passes_min_formula(family: &[Vec<FieldElem>]) -> bool {
        let coeff_grid: Vec<Vec<Rat>> = min_formula_grid(family.len());
        for coeffs in coeff_grid {
            let mut sum = vec![FieldElem::zero(Backend::RatFunc); family[0].len()];
            let mut expect = GammaVal::Infinity;
            for (c, v) in coeffs.iter().zip(family) {
                if c.is_zero() {
                    continue;
                }
                for (acc, e) in sum.iter_mut().zip(v) {
                    *acc = acc.add(&e.scale(c)).unwrap();
                }
                let term = min_entry_val(v).unwrap();
                if term < expect {
                    expect = term;
                }
            }
            let got = min_entry_val(&sum).unwrap();
            if got != expect && !coeffs.iter().all(Rat::is_zero) {
                return false;
            }
        }
        true
    }

    fn min_formula_grid(m: usize) -> Vec<Vec<Rat>> {
        let vals = [-2i64, -1, 1, 3];
        let mut out = Vec::new();
        let count = vals.len().pow(m as u32);
        for mut k in 0..count {
            let mut c = Vec::with_capacity(m);
            for _ in 0..m {
                c.push(Rat::from_int(vals[k % vals.len()]));
                k /= vals.len();
            }
            out.push(c);
        }
        out
    }

    #[test]
    fn separate_reduces_residue_collision() {
        // {(1,0),(1,t)} fails the identity at coefficients (1,-1); reduction
        // returns {(1,0),(0,t)}.
        let input = vec![vv(vec![fe(1), fe(0)]), vv(vec![fe(1), t_pow(1)])];
        assert!(!passes_min_formula(&[
            input[0].entries().to_vec(),
            input[1].entries().to_vec()
        ]));
        let sep = separate(&input).unwrap();
        assert!(sep.dropped.is_empty());
        assert_eq!(sep.vectors[0], vec![fe(1), fe(0)]);
        assert_eq!(sep.vectors[1], vec![fe(0), t_pow(1)]);
        assert!(passes_min_formula(&sep.vectors));
        // Transform rows reproduce the output from the input.
        for (row, out) in sep.vectors.iter().enumerate() {
            let mut acc = vec![FieldElem::zero(Backend::RatFunc); 2];
            for (k, c) in sep.transform.row(row).iter().enumerate() {
                for (a, e) in acc.iter_mut().zip(input[k].entries()) {
                    *a = a.add(&e.mul(c).unwrap()).unwrap();
                }
            }
            assert_eq!(&acc, out);
        }
    }

    #[test]
    fn separate_identity_on_separated_input() {
        let input = vec![vv(vec![fe(1), fe(0)]), vv(vec![fe(0), fe(1)])];
        let sep = separate(&input).unwrap();
        assert!(sep.dropped.is_empty());
        assert_eq!(sep.vectors[0], vec![fe(1), fe(0)]);
        assert_eq!(sep.vectors[1], vec![fe(0), fe(1)]);
    }

    #[test]
    fn separate_drops_dependent_vector() {
        let input = vec![vv(vec![fe(1), fe(0)]), vv(vec![fe(2), fe(0)])];
        let sep = separate(&input).unwrap();
        assert_eq!(sep.dropped, vec![1]);
        assert_eq!(sep.vectors.len(), 1);
        assert_eq!(sep.vectors[0], vec![fe(1), fe(0)]);
    }

    #[test]
    fn separate_handles_deep_dependence() {
        // (1) and (1/(1-t)): proportional over the field, caught exactly.
        let g = fe(1).div(&fe(1).sub(&t_pow(1)).unwrap()).unwrap();
        let input = vec![vv(vec![fe(1)]), vv(vec![g])];
        let sep = separate(&input).unwrap();
        assert_eq!(sep.dropped, vec![1]);
    }

    #[test]
    fn tensor_val_examples() {
        // Single term: v = 0 + 0.
        let x = vec![(vv(vec![fe(1), fe(0)]), vv(vec![fe(1), fe(1)]))];
        assert_eq!(tensor_val(&x).unwrap(), GammaVal::finite(0));
        // Rewriting over separated left factors: still 0.
        let x = vec![
            (vv(vec![fe(1), fe(0)]), vv(vec![fe(1), fe(0)])),
            (vv(vec![fe(1), t_pow(1)]), vv(vec![fe(0), fe(1)])),
        ];
        assert_eq!(tensor_val(&x).unwrap(), GammaVal::finite(0));
        // Valuations add: v = 1 + 2.
        let x = vec![(vv(vec![t_pow(1), fe(0)]), vv(vec![t_pow(2), fe(0)]))];
        assert_eq!(tensor_val(&x).unwrap(), GammaVal::finite(3));
    }

    #[test]
    fn tensor_val_of_zero_tensor() {
        // a⊗b - a⊗b = 0.
        let a = vv(vec![fe(1), fe(2)]);
        let b = vv(vec![fe(3), fe(1)]);
        let x = vec![
            (a.clone(), b.clone()),
            (a.scale_for_test(-1), b),
        ];
        assert_eq!(tensor_val(&x).unwrap(), GammaVal::Infinity);
    }

    impl VVector {
        fn scale_for_test(&self, k: i64) -> VVector {
            VVector::standard(
                self.entries
                    .iter()
                    .map(|e| e.scale(&Rat::from_int(k)))
                    .collect(),
            )
            .unwrap()
        }
    }

    #[test]
    fn by_lattice_valuation() {
        let code = LatticeCode::new(
            FMat::identity(Backend::RatFunc, 2),
            vec![Rat::one(), Rat::zero()],
        )
        .unwrap();
        // v_Λ((1,1)) for Λ = tO ⊕ O is -1.
        let v = VVector::by_lattice(vec![fe(1), fe(1)], code).unwrap();
        assert_eq!(v.vval().unwrap(), GammaVal::finite(-1));
    }
}
