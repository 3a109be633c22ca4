//! Computable stably dominated types on affine space: generic types of
//! polydiscs, their degree-`d` semi-lattice images, tropical evaluation of
//! polynomials, and integrals of affine lattice germs along types on `Γ^m`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Backend, FieldElem};
use crate::fmatrix::FMat;
use crate::gammatype::{self, GammaPoint, GammaType};
use crate::lattice::LatticeCode;
use crate::mpoly::{MPoly, Monomial, PolySpace};
use crate::omodule::ModuleDesc;
use crate::rational::{GammaVal, Rat};
use crate::ratlin::RatMat;

/// The generic type of a polydisc: coordinates independently generic in the
/// closed balls `val(x_i - center_i) ≥ radii_i`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MonomialType {
    center: Vec<FieldElem>,
    radii: Vec<Rat>,
}

impl MonomialType {
    pub fn new(center: Vec<FieldElem>, radii: Vec<Rat>) -> Result<Self> {
        if center.is_empty() || center.len() != radii.len() {
            return Err(Error::DimensionMismatch("center/radii lengths".into()));
        }
        let backend = center[0].backend();
        if center.iter().any(|c| c.backend() != backend) {
            return Err(Error::BackendMismatch("polydisc center".into()));
        }
        Ok(MonomialType { center, radii })
    }

    /// The generic type of `O^n`.
    pub fn standard(backend: Backend, n: usize) -> Self {
        MonomialType {
            center: vec![FieldElem::zero(backend); n],
            radii: vec![Rat::zero(); n],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.center.len()
    }

    pub fn center(&self) -> &[FieldElem] {
        &self.center
    }

    pub fn radii(&self) -> &[Rat] {
        &self.radii
    }

    pub fn backend(&self) -> Backend {
        self.center[0].backend()
    }

    /// The product type: both blocks of coordinates, independently generic.
    pub fn product(&self, other: &MonomialType) -> Result<MonomialType> {
        if self.backend() != other.backend() {
            return Err(Error::BackendMismatch("product of polydisc types".into()));
        }
        let mut center = self.center.clone();
        center.extend(other.center.iter().cloned());
        let mut radii = self.radii.clone();
        radii.extend(other.radii.iter().cloned());
        MonomialType::new(center, radii)
    }
}

/// Generic valuation of `f` at the polydisc type: expand around the center
/// and take `min_α (val(c_α) + α·radii)`.
pub fn gauss_val(p: &MonomialType, f: &MPoly) -> Result<GammaVal> {
    if f.num_vars() != p.num_vars() {
        return Err(Error::DimensionMismatch("polynomial arity".into()));
    }
    if f.backend() != p.backend() {
        return Err(Error::BackendMismatch("gauss_val".into()));
    }
    let shifted = f.shift(p.center())?;
    let mut best = GammaVal::Infinity;
    for (m, c) in shifted.terms() {
        let weight: Rat = m
            .0
            .iter()
            .zip(p.radii())
            .fold(Rat::zero(), |acc, (&e, r)| acc + &Rat::from_int(e as i64) * r);
        let v = &c.val()? + &GammaVal::Finite(weight);
        if v < best {
            best = v;
        }
    }
    Ok(best)
}

/// Unipotent change of basis from the shifted powers `(x - center)^α` to the
/// plain monomials, columns in graded-lex order.
pub fn shifted_basis_matrix(space: &PolySpace, center: &[FieldElem]) -> Result<FMat> {
    if center.len() != space.num_vars {
        return Err(Error::DimensionMismatch("center arity".into()));
    }
    let backend = center[0].backend();
    let monos = space.monomials();
    let neg_center: Vec<FieldElem> = center.iter().map(FieldElem::neg).collect();
    let mut cols: Vec<Vec<FieldElem>> = Vec::with_capacity(monos.len());
    for m in &monos {
        // (x - a)^α = (y)^α with y = x - a, expanded over x.
        let mut p = MPoly::constant(backend, space.num_vars, FieldElem::one(backend))?;
        for (i, &e) in m.0.iter().enumerate() {
            for _ in 0..e {
                let mut lin = MPoly::var(backend, space.num_vars, i);
                lin.add_term(Monomial::one(space.num_vars), neg_center[i].clone())?;
                p = p.mul(&lin)?;
            }
        }
        cols.push(p.coeff_vector(space)?);
    }
    let n = monos.len();
    let rows: Vec<Vec<FieldElem>> = (0..n)
        .map(|r| cols.iter().map(|c| c[r].clone()).collect())
        .collect();
    FMat::from_rows(rows)
}

/// The degree-`d` image of a polydisc type: the semi-lattice of polynomials
/// with nonnegative generic valuation, as a canonical lattice code over the
/// monomial basis of `H_d`.
///
/// In the shifted-power basis the lattice is diagonal with exponents
/// `-α·radii`; the unipotent change of basis then makes it a triangular code.
pub fn jd(p: &MonomialType, d: u32) -> Result<LatticeCode> {
    let space = PolySpace::new(p.num_vars(), d);
    let backend = p.backend();
    let mut gamma = Vec::with_capacity(space.dim());
    for m in space.monomials() {
        let w = m
            .0
            .iter()
            .zip(p.radii())
            .fold(Rat::zero(), |acc, (&e, r)| acc - &Rat::from_int(e as i64) * r);
        backend.check_gamma(&w)?;
        gamma.push(w);
    }
    let u = shifted_basis_matrix(&space, p.center())?;
    LatticeCode::new(u, gamma)?.canonicalize()
}

/// Tropical evaluation of a coefficient vector against a semi-lattice in a
/// polynomial space: the constant generic valuation of `f_b` at any type
/// whose degree-`d` image is the given semi-lattice.
pub fn trop_h(l: &ModuleDesc, b: &[FieldElem]) -> Result<GammaVal> {
    l.semilattice_val(b)
}

/// A `Γ^m`-parameterized family of diagonal semi-lattices in `H_d`: at `γ`
/// the lattice is diagonal in the shifted-power basis with exponent vector
/// `L·γ + c`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AffineLatticeFamily {
    space: PolySpace,
    center: Vec<FieldElem>,
    l: RatMat,
    c: Vec<Rat>,
}

impl AffineLatticeFamily {
    pub fn new(space: PolySpace, center: Vec<FieldElem>, l: RatMat, c: Vec<Rat>) -> Result<Self> {
        if center.len() != space.num_vars {
            return Err(Error::DimensionMismatch("family center arity".into()));
        }
        if l.rows() != space.dim() || c.len() != space.dim() {
            return Err(Error::DimensionMismatch(
                "weight map must have one row per basis monomial".into(),
            ));
        }
        Ok(AffineLatticeFamily { space, center, l, c })
    }

    pub fn space(&self) -> &PolySpace {
        &self.space
    }

    pub fn center(&self) -> &[FieldElem] {
        &self.center
    }

    pub fn weight_matrix(&self) -> &RatMat {
        &self.l
    }

    pub fn weight_offset(&self) -> &[Rat] {
        &self.c
    }

    pub fn param_arity(&self) -> usize {
        self.l.cols()
    }

    pub fn backend(&self) -> Backend {
        self.center[0].backend()
    }

    /// The unipotent change of basis of the underlying shifted powers.
    pub fn change_matrix(&self) -> Result<FMat> {
        shifted_basis_matrix(&self.space, &self.center)
    }

    /// Instantiate the family at a rational parameter value.
    pub fn instantiate(&self, gamma: &[Rat]) -> Result<LatticeCode> {
        if gamma.len() != self.param_arity() {
            return Err(Error::DimensionMismatch("parameter arity".into()));
        }
        let w: Vec<Rat> = self
            .l
            .mul_vec(gamma)
            .into_iter()
            .zip(&self.c)
            .map(|(a, b)| a + b)
            .collect();
        for wi in &w {
            self.backend().check_gamma(wi)?;
        }
        LatticeCode::new(self.change_matrix()?, w)?.canonicalize()
    }
}

/// The integral of an affine lattice germ along a type on `Γ^m`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntegralType {
    pub r: GammaType,
    pub family: AffineLatticeFamily,
}

impl IntegralType {
    pub fn new(r: GammaType, family: AffineLatticeFamily) -> Result<Self> {
        if r.n() != family.param_arity() {
            return Err(Error::DimensionMismatch(
                "type arity must match the weight map".into(),
            ));
        }
        Ok(IntegralType { r, family })
    }
}

/// Generic valuation of `f` under the integral type: evaluate every affine
/// form `val(c_α) - w_α(γ)` at the generic point of `r` and take the
/// lexicographic minimum. A scale-free result means the valuation is
/// constant along `r`; `None` means `f` vanishes identically.
pub fn integrate_val(q: &IntegralType, f: &MPoly) -> Result<Option<GammaPoint>> {
    let fam = &q.family;
    if f.num_vars() != fam.space.num_vars {
        return Err(Error::DimensionMismatch("polynomial arity".into()));
    }
    if f.total_degree() > fam.space.degree {
        return Err(Error::DimensionMismatch("degree exceeds the family space".into()));
    }
    let shifted = f.shift(&fam.center)?;
    let point = q.r.point();
    let width = point.scales().width();
    let std_slot = point.scales().inf;
    let monos = fam.space.monomials();
    let mut best: Option<Vec<Rat>> = None;
    for (idx, m) in monos.iter().enumerate() {
        let coeff = shifted.coeff(m);
        let val = match coeff.val()? {
            GammaVal::Infinity => continue,
            GammaVal::Finite(v) => v,
        };
        // row = val(c_α) - c_α - (L_α · coeffs of r)
        let mut row = vec![Rat::zero(); width];
        for j in 0..width {
            let mut acc = Rat::zero();
            for k in 0..point.n() {
                acc = acc + &fam.l[(idx, k)] * &point.coeffs()[(k, j)];
            }
            row[j] = -acc;
        }
        row[std_slot] = &row[std_slot] + &(&val - &fam.c[idx]);
        match &best {
            Some(b) if lex_le(b, &row) => {}
            _ => best = Some(row),
        }
    }
    Ok(best.map(|row| {
        GammaPoint::new(1, point.scales(), RatMat::from_rows(vec![row]))
            .expect("width matches the scale structure")
    }))
}

fn lex_le(a: &[Rat], b: &[Rat]) -> bool {
    for (x, y) in a.iter().zip(b) {
        match x.cmp(y) {
            std::cmp::Ordering::Less => return true,
            std::cmp::Ordering::Greater => return false,
            std::cmp::Ordering::Equal => {}
        }
    }
    true
}

/// Recover the canonical parameterization of an integral type at degree `d`:
/// push `r` forward along the degree-`d` weight map (the exponent vector of
/// the instantiated lattice recovers exactly this image) and replace the
/// family by the identity embedding on those weights.
///
/// Fails with `NOT_INJECTIVE` when the weight map collapses a direction in
/// which `r` genuinely varies.
pub fn recover(q: &IntegralType, d: u32) -> Result<(GammaType, AffineLatticeFamily)> {
    let fam = &q.family;
    if d > fam.space.degree {
        return Err(Error::DimensionMismatch("degree exceeds the family space".into()));
    }
    let sub = PolySpace::new(fam.space.num_vars, d);
    let nd = sub.dim();
    let l_rows: Vec<Vec<Rat>> = (0..nd).map(|i| fam.l.row(i).to_vec()).collect();
    let l_d = RatMat::from_rows(l_rows);
    let c_d: Vec<Rat> = fam.c[..nd].to_vec();

    // Generic injectivity: the weight map must not kill a variation
    // direction of r.
    let variation = q.r.variation_basis();
    if !variation.is_empty() {
        let cols = variation.len();
        let mut b = RatMat::new(q.r.n(), cols);
        for (j, v) in variation.iter().enumerate() {
            for i in 0..q.r.n() {
                b[(i, j)] = v[i].clone();
            }
        }
        let image = l_d.mul(&b);
        if image.rank() < cols {
            return Err(Error::NotInjective(format!(
                "weight map of rank {} on a {}-dimensional variation",
                image.rank(),
                cols
            )));
        }
    }

    let r2 = gammatype::push_type(&q.r, &l_d, &c_d)?;
    let family2 = AffineLatticeFamily::new(
        sub,
        fam.center.clone(),
        RatMat::identity(nd),
        vec![Rat::zero(); nd],
    )?;
    Ok((r2, family2))
}

/// Iterated two-block evaluation of `f` on a product of polydisc types:
/// expand jointly around both centers and fold the minimum with the chosen
/// block first. Both orders compute the same minimum over all monomials.
pub fn gauss_val_blockwise(
    p: &MonomialType,
    q: &MonomialType,
    f: &MPoly,
    p_first: bool,
) -> Result<GammaVal> {
    let joint = p.product(q)?;
    if f.num_vars() != joint.num_vars() {
        return Err(Error::DimensionMismatch("blockwise arity".into()));
    }
    let shifted = f.shift(joint.center())?;
    let np = p.num_vars();
    // Group by the outer block's exponents.
    let mut groups: std::collections::BTreeMap<Vec<u32>, GammaVal> = Default::default();
    for (m, c) in shifted.terms() {
        let (pe, qe) = m.0.split_at(np);
        let (outer, inner, inner_radii): (&[u32], &[u32], &[Rat]) = if p_first {
            (qe, pe, p.radii())
        } else {
            (pe, qe, q.radii())
        };
        let inner_weight = inner
            .iter()
            .zip(inner_radii)
            .fold(Rat::zero(), |acc, (&e, r)| acc + &Rat::from_int(e as i64) * r);
        let v = &c.val()? + &GammaVal::Finite(inner_weight);
        let slot = groups.entry(outer.to_vec()).or_insert(GammaVal::Infinity);
        if v < *slot {
            *slot = v;
        }
    }
    let outer_radii = if p_first { q.radii() } else { p.radii() };
    let mut best = GammaVal::Infinity;
    for (outer, inner_min) in groups {
        let w = outer
            .iter()
            .zip(outer_radii)
            .fold(Rat::zero(), |acc, (&e, r)| acc + &Rat::from_int(e as i64) * r);
        let v = &inner_min + &GammaVal::Finite(w);
        if v < best {
            best = v;
        }
    }
    Ok(best)
}

/// Deterministic witness for the generic valuation: a point of the polydisc
/// where `val(f)` attains `gauss_val`. Searched over rational perturbations
/// `center + (t^{r_i}·u_i)` with `u` on an integer grid; a nonzero residue
/// polynomial cannot vanish on the whole grid, so the search succeeds
/// whenever `f` is nonzero on the type.
pub fn witness_point(p: &MonomialType, f: &MPoly) -> Result<Option<Vec<FieldElem>>> {
    let target = gauss_val(p, f)?;
    if target.is_infinite() {
        return Ok(None);
    }
    let backend = p.backend();
    let n = p.num_vars();
    let d = f.total_degree() as i64;
    let mut u = vec![0i64; n];
    loop {
        let s: Vec<FieldElem> = p
            .center()
            .iter()
            .zip(p.radii())
            .zip(&u)
            .map(|((a, r), &ui)| {
                let pert = FieldElem::t_pow(backend, r)?.scale(&Rat::from_int(ui));
                a.add(&pert)
            })
            .collect::<Result<_>>()?;
        if f.eval(&s)?.val()? == target {
            return Ok(Some(s));
        }
        // advance the grid counter over {0..d}^n
        let mut i = 0;
        loop {
            if i == n {
                return Ok(None);
            }
            u[i] += 1;
            if u[i] <= d {
                break;
            }
            u[i] = 0;
            i += 1;
        }
    }
}

// --- JSON -------------------------------------------------------------------

impl Serialize for MonomialType {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = s.serialize_map(Some(2))?;
        map.serialize_entry("center", &self.center)?;
        map.serialize_entry("radii", &self.radii)?;
        map.end()
    }
}

impl<'de> Deserialize<'de> for MonomialType {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            center: Vec<FieldElem>,
            radii: Vec<Rat>,
        }
        let r = Repr::deserialize(d)?;
        MonomialType::new(r.center, r.radii).map_err(serde::de::Error::custom)
    }
}

impl Serialize for AffineLatticeFamily {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = s.serialize_map(Some(4))?;
        map.serialize_entry("space", &self.space)?;
        map.serialize_entry("center", &self.center)?;
        map.serialize_entry("L", &self.l.to_rows())?;
        map.serialize_entry("c", &self.c)?;
        map.end()
    }
}

impl<'de> Deserialize<'de> for AffineLatticeFamily {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            space: PolySpace,
            center: Vec<FieldElem>,
            #[serde(rename = "L")]
            l: Vec<Vec<Rat>>,
            c: Vec<Rat>,
        }
        let r = Repr::deserialize(d)?;
        AffineLatticeFamily::new(r.space, r.center, RatMat::from_rows(r.l), r.c)
            .map_err(serde::de::Error::custom)
    }
}

impl Serialize for IntegralType {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = s.serialize_map(Some(2))?;
        map.serialize_entry("r", &self.r)?;
        map.serialize_entry("family", &self.family)?;
        map.end()
    }
}

impl<'de> Deserialize<'de> for IntegralType {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            r: GammaType,
            family: AffineLatticeFamily,
        }
        let r = Repr::deserialize(d)?;
        IntegralType::new(r.r, r.family).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gammatype::ScaleStructure;
    use crate::omodule::SigTag;

    fn b() -> Backend {
        Backend::RatFunc
    }

    fn fe(n: i64) -> FieldElem {
        FieldElem::from_rat(b(), Rat::from_int(n))
    }

    fn t_pow(k: i64) -> FieldElem {
        FieldElem::t_pow(b(), &Rat::from_int(k)).unwrap()
    }

    fn x() -> MPoly {
        MPoly::var(b(), 1, 0)
    }

    #[test]
    fn gauss_val_examples() {
        let p = MonomialType::standard(b(), 1);
        // t·x^2 + x + t^-1 -> -1
        let f = x()
            .mul(&x())
            .unwrap()
            .mul(&MPoly::constant(b(), 1, t_pow(1)).unwrap())
            .unwrap()
            .add(&x())
            .unwrap()
            .add(&MPoly::constant(b(), 1, t_pow(-1)).unwrap())
            .unwrap();
        assert_eq!(gauss_val(&p, &f).unwrap(), GammaVal::finite(-1));
        assert_eq!(gauss_val(&p, &x()).unwrap(), GammaVal::finite(0));
        // radii (1,2): x1·x2 -> 3
        let p2 = MonomialType::new(vec![fe(0), fe(0)], vec![Rat::one(), Rat::from_int(2)]).unwrap();
        let f2 = MPoly::var(b(), 2, 0).mul(&MPoly::var(b(), 2, 1)).unwrap();
        assert_eq!(gauss_val(&p2, &f2).unwrap(), GammaVal::finite(3));
    }

    #[test]
    fn gauss_val_oracle_sampling() {
        // Generic valuation bounds the valuation at every polydisc point and
        // is attained at the deterministic witness.
        let p = MonomialType::new(vec![t_pow(1)], vec![Rat::one()]).unwrap();
        let f = x().mul(&x()).unwrap().add(&MPoly::constant(b(), 1, t_pow(1)).unwrap()).unwrap();
        let gv = gauss_val(&p, &f).unwrap();
        for k in 0..20i64 {
            // points t + t^1·k inside the ball
            let s = t_pow(1).add(&t_pow(1).scale(&Rat::from_int(k))).unwrap();
            assert!(f.eval(&[s]).unwrap().val().unwrap() >= gv);
        }
        let w = witness_point(&p, &f).unwrap().unwrap();
        assert_eq!(f.eval(&w).unwrap().val().unwrap(), gv);
    }

    #[test]
    fn jd_examples() {
        // Generic type of O at degree 1: the standard lattice of H_1.
        let code = jd(&MonomialType::standard(b(), 1), 1).unwrap();
        assert_eq!(code.g_invariant(), &[Rat::zero(), Rat::zero()]);
        // Ball of radius 1 at 0: weights (0, -1).
        let ball = MonomialType::new(vec![fe(0)], vec![Rat::one()]).unwrap();
        let code = jd(&ball, 1).unwrap();
        assert_eq!(code.g_invariant(), &[Rat::zero(), Rat::from_int(-1)]);
        // Ball centered at t of radius 1: same lattice as the radius-1 ball
        // at 0, because t is inside it.
        let ball_t = MonomialType::new(vec![t_pow(1)], vec![Rat::one()]).unwrap();
        let code_t = jd(&ball_t, 1).unwrap();
        assert!(code_t.equal(&code).unwrap());
        // Membership oracle: f is in the lattice iff gauss_val(f) ≥ 0.
        let space = PolySpace::new(1, 1);
        for f in [
            x(),
            x().add(&MPoly::constant(b(), 1, t_pow(1)).unwrap()).unwrap(),
            x().mul(&MPoly::constant(b(), 1, t_pow(-1)).unwrap()).unwrap(),
        ] {
            let coeffs = f.coeff_vector(&space).unwrap();
            let member = code_t.member(&coeffs).unwrap();
            let nonneg = gauss_val(&ball_t, &f).unwrap() >= GammaVal::finite(0);
            assert_eq!(member, nonneg);
        }
    }

    #[test]
    fn jd_restriction_to_lower_degree() {
        let p = MonomialType::new(vec![t_pow(1), fe(2)], vec![Rat::one(), Rat::from_int(-1)])
            .unwrap();
        let big = jd(&p, 2).unwrap();
        let small = jd(&p, 1).unwrap();
        let nd = PolySpace::new(2, 1).dim();
        // Leading block of the canonical code at degree 2.
        let rows: Vec<Vec<FieldElem>> = (0..nd)
            .map(|i| (0..nd).map(|j| big.u()[(i, j)].clone()).collect())
            .collect();
        let restricted = LatticeCode::new(
            FMat::from_rows(rows).unwrap(),
            big.g_invariant()[..nd].to_vec(),
        )
        .unwrap();
        assert!(restricted.equal(&small).unwrap());
    }

    #[test]
    fn trop_h_matches_gauss_val() {
        let p = MonomialType::new(vec![t_pow(1)], vec![Rat::one()]).unwrap();
        let code = jd(&p, 2).unwrap();
        let module: ModuleDesc = code.to_module().unwrap();
        assert!(module.predicates().semilattice);
        let space = PolySpace::new(1, 2);
        let f = x()
            .mul(&x())
            .unwrap()
            .add(&MPoly::constant(b(), 1, t_pow(-2)).unwrap())
            .unwrap();
        let lhs = trop_h(&module, &f.coeff_vector(&space).unwrap()).unwrap();
        let rhs = gauss_val(&p, &f).unwrap();
        assert_eq!(lhs, rhs);
        // b = 0 -> ∞
        let zero = vec![fe(0); space.dim()];
        assert_eq!(trop_h(&module, &zero).unwrap(), GammaVal::Infinity);
    }

    fn eps_type() -> GammaType {
        GammaType::from_point(
            &GammaPoint::new(
                1,
                ScaleStructure { inf: 0, eps: 1 },
                RatMat::from_rows(vec![vec![Rat::zero(), Rat::one()]]),
            )
            .unwrap(),
        )
    }

    /// The family of balls of radius γ about 0 in H_1: weights (0, -γ).
    fn ball_family() -> AffineLatticeFamily {
        AffineLatticeFamily::new(
            PolySpace::new(1, 1),
            vec![fe(0)],
            RatMat::from_rows(vec![vec![Rat::zero()], vec![Rat::from_int(-1)]]),
            vec![Rat::zero(), Rat::zero()],
        )
        .unwrap()
    }

    #[test]
    fn integrate_val_examples() {
        // ∫ over "just above 0" of the radius-γ ball: the generic type of M.
        let q = IntegralType::new(eps_type(), ball_family()).unwrap();
        // f = x: valuation is the point ε1.
        let out = integrate_val(&q, &x()).unwrap().unwrap();
        assert_eq!(out.coeffs().to_rows(), vec![vec![Rat::zero(), Rat::one()]]);
        // f = x - t: min(1, ε1) = ε1.
        let f = x().add(&MPoly::constant(b(), 1, t_pow(1).neg()).unwrap()).unwrap();
        let out = integrate_val(&q, &f).unwrap().unwrap();
        assert_eq!(out.coeffs().to_rows(), vec![vec![Rat::zero(), Rat::one()]]);
        // Constant family: the standard value trop_h(L, f).
        let fam = AffineLatticeFamily::new(
            PolySpace::new(1, 1),
            vec![fe(0)],
            RatMat::new(2, 1),
            vec![Rat::zero(), Rat::from_int(-1)],
        )
        .unwrap();
        let qc = IntegralType::new(eps_type(), fam.clone()).unwrap();
        let out = integrate_val(&qc, &x()).unwrap().unwrap();
        // Scale-free row (std = 1, ε = 0): val(x) = 0 - (-1) = 1 along all of r.
        assert_eq!(out.coeffs().to_rows(), vec![vec![Rat::one(), Rat::zero()]]);
        let inst = fam.instantiate(&[Rat::from_int(7)]).unwrap();
        let module: ModuleDesc = inst.to_module().unwrap();
        let space = PolySpace::new(1, 1);
        assert_eq!(
            trop_h(&module, &x().coeff_vector(&space).unwrap()).unwrap(),
            GammaVal::finite(1)
        );
    }

    #[test]
    fn recover_examples() {
        let q = IntegralType::new(eps_type(), ball_family()).unwrap();
        let (r2, fam2) = recover(&q, 1).unwrap();
        // Pushforward by (0, -γ): the point (0, -ε1).
        let rows = r2.point().coeffs().to_rows();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0], vec![Rat::zero(), Rat::zero()]);
        assert_eq!(rows[1], vec![Rat::zero(), -Rat::one()]);
        assert_eq!(fam2.weight_matrix(), &RatMat::identity(2));
        // The instantiated lattice's exponents recover the weight image.
        let inst = q.family.instantiate(&[Rat::new(1, 1)]).unwrap();
        assert_eq!(inst.g_invariant(), &[Rat::zero(), Rat::from_int(-1)]);
        // Constant family over a varying type is not generically injective.
        let constant = AffineLatticeFamily::new(
            PolySpace::new(1, 1),
            vec![fe(0)],
            RatMat::new(2, 1),
            vec![Rat::zero(), Rat::zero()],
        )
        .unwrap();
        let qc = IntegralType::new(eps_type(), constant).unwrap();
        assert!(matches!(recover(&qc, 1), Err(Error::NotInjective(_))));
    }

    #[test]
    fn recover_cross_degree_consistency() {
        // Weights (0, -γ, -2γ) at degree 2: the degree-1 truncation of the
        // recovered type matches the degree-1 recovery.
        let fam = AffineLatticeFamily::new(
            PolySpace::new(1, 2),
            vec![fe(0)],
            RatMat::from_rows(vec![
                vec![Rat::zero()],
                vec![Rat::from_int(-1)],
                vec![Rat::from_int(-2)],
            ]),
            vec![Rat::zero(); 3],
        )
        .unwrap();
        let q = IntegralType::new(eps_type(), fam).unwrap();
        let (r2_deg2, _) = recover(&q, 2).unwrap();
        let (r2_deg1, _) = recover(&q, 1).unwrap();
        // Project the degree-2 recovery to the shared monomials (1, x).
        let proj = RatMat::from_rows(vec![
            vec![Rat::one(), Rat::zero(), Rat::zero()],
            vec![Rat::zero(), Rat::one(), Rat::zero()],
        ]);
        let projected = gammatype::push_type(&r2_deg2, &proj, &[Rat::zero(), Rat::zero()]).unwrap();
        assert_eq!(projected, r2_deg1);
    }

    #[test]
    fn blockwise_orders_agree() {
        let p = MonomialType::new(vec![fe(0)], vec![Rat::one()]).unwrap();
        let q = MonomialType::new(vec![t_pow(1)], vec![Rat::from_int(2)]).unwrap();
        // f(x, y) = x·y + t·x + y^2
        let xv = MPoly::var(b(), 2, 0);
        let yv = MPoly::var(b(), 2, 1);
        let f = xv
            .mul(&yv)
            .unwrap()
            .add(&xv.mul(&MPoly::constant(b(), 2, t_pow(1)).unwrap()).unwrap())
            .unwrap()
            .add(&yv.mul(&yv).unwrap())
            .unwrap();
        let lhs = gauss_val_blockwise(&p, &q, &f, true).unwrap();
        let rhs = gauss_val_blockwise(&p, &q, &f, false).unwrap();
        let joint = gauss_val(&p.product(&q).unwrap(), &f).unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(lhs, joint);
    }

    #[test]
    fn jd_value_group_guard() {
        let p = MonomialType::new(vec![fe(0)], vec![Rat::new(1, 2)]).unwrap();
        assert!(matches!(jd(&p, 1), Err(Error::ValueGroup(_))));
        // Over Puiseux series the same radii are fine.
        let pp = MonomialType::new(
            vec![FieldElem::zero(Backend::Puiseux)],
            vec![Rat::new(1, 2)],
        )
        .unwrap();
        assert!(jd(&pp, 1).is_ok());
    }

    #[test]
    fn module_signature_of_jd() {
        let code = jd(&MonomialType::standard(b(), 1), 1).unwrap();
        let md: ModuleDesc = code.to_module().unwrap();
        assert_eq!(
            md.signature(),
            &[
                SigTag::OShift { gamma: Rat::zero() },
                SigTag::OShift { gamma: Rat::zero() }
            ]
        );
    }
}
