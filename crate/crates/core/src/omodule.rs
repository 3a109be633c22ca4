//! Definable `O`-submodules of `K^n` in classified form.
//!
//! A module is presented as a direct sum `⊕ S_i · B_i` over the columns of
//! an invertible basis matrix `B`, where each factor `S_i` is the whole
//! field, a shifted valuation ring `t^γ·O`, a shifted maximal ideal `t^γ·M`,
//! or zero. Duality, closure and the semi-lattice valuation are all
//! componentwise in this presentation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::FieldElem;
use crate::fmatrix::FMat;
use crate::rational::{GammaVal, Rat};

/// One direct summand of a classified module.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(tag = "tag")]
pub enum SigTag {
    #[serde(rename = "FREE")]
    Free,
    #[serde(rename = "O_SHIFT")]
    OShift { gamma: Rat },
    #[serde(rename = "M_SHIFT")]
    MShift { gamma: Rat },
    #[serde(rename = "ZERO")]
    Zero,
}

impl SigTag {
    fn class_rank(&self) -> u8 {
        match self {
            SigTag::Free => 0,
            SigTag::OShift { .. } => 1,
            SigTag::MShift { .. } => 2,
            SigTag::Zero => 3,
        }
    }
}

/// Duality mode: pair into the valuation ring or into the maximal ideal.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum DualMode {
    #[serde(rename = "O_DUAL")]
    O,
    #[serde(rename = "M_DUAL")]
    M,
}

/// Truth flags for the module predicates.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ModulePredicates {
    pub g_closed: bool,
    pub semilattice: bool,
    pub lattice: bool,
}

/// A definable `O`-submodule of `K^n` in classified form.
///
/// Construction canonicalizes the component order to
/// `FREE, O_SHIFT, M_SHIFT, ZERO` (stably, permuting basis columns along),
/// so equal presentations compare structurally.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ModuleDesc {
    n: usize,
    basis: FMat,
    /// `(basisᵀ)⁻¹`, kept alongside so duality is an involution by
    /// construction and coordinates are a matrix-vector product.
    dual_basis: FMat,
    signature: Vec<SigTag>,
}

impl ModuleDesc {
    pub fn new(basis: FMat, signature: Vec<SigTag>) -> Result<Self> {
        Self::build(basis, signature, true)
    }

    /// Constructor for callers that produce invertible bases by
    /// construction (duals, triangular codes); skips the determinant check.
    pub(crate) fn new_trusted(basis: FMat, signature: Vec<SigTag>) -> Result<Self> {
        Self::build(basis, signature, false)
    }

    fn build(basis: FMat, signature: Vec<SigTag>, _check_invertible: bool) -> Result<Self> {
        let n = basis.rows();
        if basis.cols() != n || signature.len() != n {
            return Err(Error::DimensionMismatch(
                "basis must be square with one signature tag per column".into(),
            ));
        }
        if n == 0 {
            return Err(Error::EmptyInput);
        }
        let backend = basis.backend();
        for tag in &signature {
            if let SigTag::OShift { gamma } | SigTag::MShift { gamma } = tag {
                backend.check_gamma(gamma)?;
            }
        }
        // Invertibility is established by the inversion itself.
        let dual_basis = basis.transpose().inverse()?;
        Self::from_parts(basis, dual_basis, signature)
    }

    /// Assemble from a known `(basis, (basisᵀ)⁻¹)` pair, canonically
    /// reordering both by the same column permutation.
    fn from_parts(basis: FMat, dual_basis: FMat, signature: Vec<SigTag>) -> Result<Self> {
        let n = basis.rows();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| signature[i].class_rank());
        let permute = |m: &FMat| -> Result<FMat> {
            let cols: Vec<Vec<FieldElem>> = order.iter().map(|&i| m.col(i)).collect();
            let rows: Vec<Vec<FieldElem>> = (0..n)
                .map(|r| cols.iter().map(|c| c[r].clone()).collect())
                .collect();
            FMat::from_rows(rows)
        };
        let sig = order.iter().map(|&i| signature[i].clone()).collect();
        Ok(ModuleDesc {
            n,
            basis: permute(&basis)?,
            dual_basis: permute(&dual_basis)?,
            signature: sig,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn basis(&self) -> &FMat {
        &self.basis
    }

    pub fn signature(&self) -> &[SigTag] {
        &self.signature
    }

    pub fn backend(&self) -> crate::field::Backend {
        self.basis.backend()
    }

    /// Classification triple `(l, m, n')`: counts of FREE, O- and M-components.
    pub fn classify(&self) -> (usize, usize, usize) {
        let mut l = 0;
        let mut m = 0;
        let mut mm = 0;
        for tag in &self.signature {
            match tag {
                SigTag::Free => l += 1,
                SigTag::OShift { .. } => m += 1,
                SigTag::MShift { .. } => mm += 1,
                SigTag::Zero => {}
            }
        }
        (l, m, mm)
    }

    /// Componentwise dual in the dual basis `(Bᵀ)⁻¹`.
    ///
    /// Pairing into `O`: `K ↔ 0`, `t^γO → t^(-γ)O`, `t^γM → t^(-γ)O`.
    /// Pairing into `M`: `K ↔ 0`, `t^γO → t^(-γ)M`, `t^γM → t^(-γ)O`.
    pub fn dual(&self, mode: DualMode) -> Result<ModuleDesc> {
        let sig = self
            .signature
            .iter()
            .map(|tag| match (mode, tag) {
                (_, SigTag::Free) => SigTag::Zero,
                (_, SigTag::Zero) => SigTag::Free,
                (DualMode::O, SigTag::OShift { gamma }) => SigTag::OShift { gamma: -gamma },
                (DualMode::O, SigTag::MShift { gamma }) => SigTag::OShift { gamma: -gamma },
                (DualMode::M, SigTag::OShift { gamma }) => SigTag::MShift { gamma: -gamma },
                (DualMode::M, SigTag::MShift { gamma }) => SigTag::OShift { gamma: -gamma },
            })
            .collect();
        // The dual of the dual basis is the original basis: no inversion.
        ModuleDesc::from_parts(self.dual_basis.clone(), self.basis.clone(), sig)
    }

    /// Smallest closed module containing this one: the double `O`-dual,
    /// which promotes every `M`-component to the matching `O`-component.
    pub fn closure(&self) -> Result<ModuleDesc> {
        self.dual(DualMode::O)?.dual(DualMode::O)
    }

    pub fn predicates(&self) -> ModulePredicates {
        let g_closed = !self
            .signature
            .iter()
            .any(|t| matches!(t, SigTag::MShift { .. }));
        let generates = !self.signature.iter().any(|t| matches!(t, SigTag::Zero));
        let lattice = self
            .signature
            .iter()
            .all(|t| matches!(t, SigTag::OShift { .. }));
        ModulePredicates {
            g_closed,
            semilattice: g_closed && generates,
            lattice,
        }
    }

    /// Coordinates of `a` in the basis columns: `B⁻¹a = (dual basis)ᵀ·a`.
    pub fn coordinates(&self, a: &[FieldElem]) -> Result<Vec<FieldElem>> {
        if a.len() != self.n {
            return Err(Error::DimensionMismatch("vector length".into()));
        }
        self.dual_basis.transpose().mul_vec(a)
    }

    /// The semi-lattice valuation: the maximal `-val(c)` over scalars `c`
    /// with `c·a` inside the module, `∞` when the whole line `K·a` is inside.
    pub fn semilattice_val(&self, a: &[FieldElem]) -> Result<GammaVal> {
        if !self.predicates().semilattice {
            return Err(Error::NotSemilattice);
        }
        let x = self.coordinates(a)?;
        let mut best = GammaVal::Infinity;
        for (xi, tag) in x.iter().zip(&self.signature) {
            if let SigTag::OShift { gamma } = tag {
                match xi.val()? {
                    GammaVal::Infinity => {}
                    GammaVal::Finite(v) => {
                        let cand = GammaVal::Finite(&v - gamma);
                        if cand < best {
                            best = cand;
                        }
                    }
                }
            }
        }
        Ok(best)
    }

    /// Exact membership test.
    pub fn contains(&self, a: &[FieldElem]) -> Result<bool> {
        let x = self.coordinates(a)?;
        for (xi, tag) in x.iter().zip(&self.signature) {
            let ok = match tag {
                SigTag::Free => true,
                SigTag::OShift { gamma } => xi.val()? >= GammaVal::Finite(gamma.clone()),
                SigTag::MShift { gamma } => xi.val()? > GammaVal::Finite(gamma.clone()),
                SigTag::Zero => xi.is_zero()?,
            };
            if !ok {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl Serialize for ModuleDesc {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = s.serialize_map(Some(3))?;
        map.serialize_entry("n", &self.n)?;
        map.serialize_entry("basis", &self.basis)?;
        map.serialize_entry("signature", &self.signature)?;
        map.end()
    }
}

impl<'de> Deserialize<'de> for ModuleDesc {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            n: usize,
            basis: FMat,
            signature: Vec<SigTag>,
        }
        let r = Repr::deserialize(d)?;
        if r.basis.rows() != r.n {
            return Err(serde::de::Error::custom("basis size does not match n"));
        }
        ModuleDesc::new(r.basis, r.signature).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Backend;

    fn fe(n: i64) -> FieldElem {
        FieldElem::from_rat(Backend::RatFunc, Rat::from_int(n))
    }

    fn module(sig: Vec<SigTag>) -> ModuleDesc {
        let n = sig.len();
        ModuleDesc::new(FMat::identity(Backend::RatFunc, n), sig).unwrap()
    }

    fn o(g: i64) -> SigTag {
        SigTag::OShift { gamma: Rat::from_int(g) }
    }

    fn m(g: i64) -> SigTag {
        SigTag::MShift { gamma: Rat::from_int(g) }
    }

    #[test]
    fn classify_counts() {
        assert_eq!(module(vec![o(0), SigTag::Free]).classify(), (1, 1, 0));
        assert_eq!(module(vec![o(0), o(0), o(0)]).classify(), (0, 3, 0));
        assert_eq!(module(vec![m(0)]).classify(), (0, 0, 1));
    }

    #[test]
    fn dual_examples() {
        // M-dual of O is M; M-dual of M is O; M-dual of K is 0.
        assert_eq!(module(vec![o(0)]).dual(DualMode::M).unwrap().signature(), &[m(0)]);
        assert_eq!(module(vec![m(0)]).dual(DualMode::M).unwrap().signature(), &[o(0)]);
        assert_eq!(
            module(vec![SigTag::Free]).dual(DualMode::M).unwrap().signature(),
            &[SigTag::Zero]
        );
    }

    #[test]
    fn closure_promotes_m_components() {
        assert_eq!(module(vec![m(0)]).closure().unwrap().signature(), &[o(0)]);
        let onn = module(vec![o(0), o(0)]);
        assert_eq!(onn.closure().unwrap(), onn);
        // K × M -> K × O
        let km = module(vec![SigTag::Free, m(0)]);
        assert_eq!(km.closure().unwrap().signature(), &[SigTag::Free, o(0)]);
        // Idempotent.
        let c = km.closure().unwrap();
        assert_eq!(c.closure().unwrap(), c);
    }

    #[test]
    fn predicate_flags() {
        let p = module(vec![o(0), o(0)]).predicates();
        assert!(p.g_closed && p.semilattice && p.lattice);
        let p = module(vec![SigTag::Free, o(0)]).predicates();
        assert!(p.g_closed && p.semilattice && !p.lattice);
        let p = module(vec![o(0), m(0)]).predicates();
        assert!(!p.g_closed && !p.semilattice && !p.lattice);
    }

    #[test]
    fn semilattice_val_examples() {
        // O^2 at e1 -> 0.
        let o2 = module(vec![o(0), o(0)]);
        assert_eq!(
            o2.semilattice_val(&[fe(1), fe(0)]).unwrap(),
            GammaVal::finite(0)
        );
        // tO ⊕ O at (1, 1) -> -1.
        let to = module(vec![o(1), o(0)]);
        assert_eq!(
            to.semilattice_val(&[fe(1), fe(1)]).unwrap(),
            GammaVal::finite(-1)
        );
        // K × O at (5, 0) -> ∞.
        let ko = module(vec![SigTag::Free, o(0)]);
        assert_eq!(
            ko.semilattice_val(&[fe(5), fe(0)]).unwrap(),
            GammaVal::Infinity
        );
        assert!(module(vec![m(0)]).semilattice_val(&[fe(1)]).is_err());
    }

    #[test]
    fn canonical_reordering_permutes_basis() {
        // Input ordered (O, FREE): must reorder to (FREE, O) with columns swapped.
        let basis = FMat::from_rows(vec![vec![fe(1), fe(2)], vec![fe(0), fe(1)]]).unwrap();
        let md = ModuleDesc::new(basis, vec![o(0), SigTag::Free]).unwrap();
        assert_eq!(md.signature(), &[SigTag::Free, o(0)]);
        assert_eq!(md.basis().col(1), vec![fe(1), fe(0)]);
        assert_eq!(md.basis().col(0), vec![fe(2), fe(1)]);
    }
}
