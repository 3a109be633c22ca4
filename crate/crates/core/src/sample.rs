//! Seeded random generation of field elements, matrices and types.
//!
//! Everything is driven by an explicit `ChaCha8Rng` so batch runs are
//! reproducible; the randomized membership search and the property suites
//! both build on these generators.

use rand::seq::IndexedRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::field::{Backend, FieldElem, Prec, Puiseux, RatFunc};
use crate::fmatrix::FMat;
use crate::gammatype::{GammaPoint, ScaleStructure};
use crate::omodule::{ModuleDesc, SigTag};
use crate::poly::Poly;
use crate::rational::Rat;
use crate::ratlin::RatMat;
use crate::stcomp::MonomialType;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A small rational with numerator in `[-9, 9]` and denominator in `{1,2,3}`.
pub fn rat(rng: &mut ChaCha8Rng) -> Rat {
    Rat::new(rng.random_range(-9..=9), rng.random_range(1..=3))
}

pub fn nonzero_rat(rng: &mut ChaCha8Rng) -> Rat {
    loop {
        let q = rat(rng);
        if !q.is_zero() {
            return q;
        }
    }
}

/// An integer in the given inclusive range, as a `Rat`.
pub fn int_in(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> Rat {
    Rat::from_int(rng.random_range(lo..=hi))
}

/// A value-group element of the backend: an integer for `Q(t)`, a small
/// rational with denominator in `{1,2}` for Puiseux series.
pub fn gamma_in(rng: &mut ChaCha8Rng, backend: Backend, lo: i64, hi: i64) -> Rat {
    match backend {
        Backend::RatFunc => int_in(rng, lo, hi),
        Backend::Puiseux => Rat::new(rng.random_range(lo * 2..=hi * 2), 2),
    }
}

fn poly(rng: &mut ChaCha8Rng, max_deg: usize) -> Poly {
    let deg = rng.random_range(0..=max_deg);
    Poly::from_coeffs((0..=deg).map(|_| Rat::from_int(rng.random_range(-4..=4))).collect())
}

fn nonzero_poly(rng: &mut ChaCha8Rng, max_deg: usize) -> Poly {
    loop {
        let p = poly(rng, max_deg);
        if !p.is_zero() {
            return p;
        }
    }
}

/// An arbitrary field element (possibly zero) with small degrees.
pub fn field_elem(rng: &mut ChaCha8Rng, backend: Backend) -> FieldElem {
    match backend {
        Backend::RatFunc => FieldElem::RatFunc(
            RatFunc::new(poly(rng, 2), nonzero_poly(rng, 2)).expect("nonzero denominator"),
        ),
        Backend::Puiseux => {
            let nterms = rng.random_range(0..=3);
            let terms = (0..nterms)
                .map(|_| (nonzero_rat(rng), Rat::new(rng.random_range(-4..=6), 2)))
                .collect();
            FieldElem::Puiseux(Puiseux::new(terms, Prec::Exact))
        }
    }
}

pub fn nonzero_field_elem(rng: &mut ChaCha8Rng, backend: Backend) -> FieldElem {
    loop {
        let x = field_elem(rng, backend);
        if !x.is_zero().unwrap_or(false) {
            return x;
        }
    }
}

/// A sparse element: zero, a Laurent monomial `c·t^k`, or a two-term
/// combination. These exercise the valuation structure while keeping
/// elimination intermediates small.
pub fn sparse_field_elem(rng: &mut ChaCha8Rng, backend: Backend) -> FieldElem {
    let term = |rng: &mut ChaCha8Rng| {
        let c = Rat::from_int(*choice(rng, &[-3i64, -2, -1, 1, 2, 3]));
        let k = gamma_in(rng, backend, -3, 3);
        FieldElem::t_pow(backend, &k)
            .expect("value-group exponent")
            .scale(&c)
    };
    match rng.random_range(0..10) {
        0 => FieldElem::zero(backend),
        1..=8 => term(rng),
        _ => {
            let a = term(rng);
            let b = term(rng);
            a.add(&b).expect("same backend")
        }
    }
}

pub fn sparse_nonzero(rng: &mut ChaCha8Rng, backend: Backend) -> FieldElem {
    loop {
        let x = sparse_field_elem(rng, backend);
        if !x.is_zero().unwrap_or(false) {
            return x;
        }
    }
}

/// A random matrix with sparse entries.
pub fn sparse_fmat(rng: &mut ChaCha8Rng, backend: Backend, rows: usize, cols: usize) -> FMat {
    let rows_v: Vec<Vec<FieldElem>> = (0..rows)
        .map(|_| (0..cols).map(|_| sparse_field_elem(rng, backend)).collect())
        .collect();
    FMat::from_rows(rows_v).expect("consistent backend")
}

/// A random invertible matrix with sparse entries.
pub fn sparse_invertible_fmat(rng: &mut ChaCha8Rng, backend: Backend, n: usize) -> FMat {
    loop {
        let m = sparse_fmat(rng, backend, n, n);
        if let Ok(d) = m.det() {
            if !d.is_zero().unwrap_or(true) {
                return m;
            }
        }
    }
}

/// A unit of the valuation ring: valuation exactly 0.
pub fn unit(rng: &mut ChaCha8Rng, backend: Backend) -> FieldElem {
    let x = integral_elem(rng, backend);
    let c = FieldElem::from_rat(backend, nonzero_rat(rng));
    // nonzero constant + t·(integral element)
    let t = FieldElem::t_pow(backend, &Rat::one()).expect("integer exponent");
    c.add(&t.mul(&x).expect("same backend")).expect("same backend")
}

/// An element of the valuation ring (valuation `≥ 0`), possibly zero.
pub fn integral_elem(rng: &mut ChaCha8Rng, backend: Backend) -> FieldElem {
    match backend {
        Backend::RatFunc => {
            // polynomial / unit denominator
            let num = poly(rng, 2);
            let den = {
                let mut d = poly(rng, 2);
                let c = d.coeff(0);
                if c.is_zero() {
                    d = d.add(&Poly::constant(Rat::one()));
                }
                d
            };
            FieldElem::RatFunc(RatFunc::new(num, den).expect("nonzero denominator"))
        }
        Backend::Puiseux => {
            let nterms = rng.random_range(0..=3);
            let terms = (0..nterms)
                .map(|_| (nonzero_rat(rng), Rat::new(rng.random_range(0..=6), 2)))
                .collect();
            FieldElem::Puiseux(Puiseux::new(terms, Prec::Exact))
        }
    }
}

/// An element of valuation `≥ gamma`.
pub fn elem_above(rng: &mut ChaCha8Rng, backend: Backend, gamma: &Rat) -> FieldElem {
    let shift = match backend {
        Backend::RatFunc => gamma.ceil(),
        Backend::Puiseux => gamma.clone(),
    };
    let t = FieldElem::t_pow(backend, &shift).expect("value-group exponent");
    t.mul(&integral_elem(rng, backend)).expect("same backend")
}

/// A random matrix with arbitrary small entries.
pub fn fmat(rng: &mut ChaCha8Rng, backend: Backend, rows: usize, cols: usize) -> FMat {
    let rows_v: Vec<Vec<FieldElem>> = (0..rows)
        .map(|_| (0..cols).map(|_| field_elem(rng, backend)).collect())
        .collect();
    FMat::from_rows(rows_v).expect("consistent backend")
}

/// A random invertible matrix (rejection sampled on the determinant).
pub fn invertible_fmat(rng: &mut ChaCha8Rng, backend: Backend, n: usize) -> FMat {
    loop {
        let m = fmat(rng, backend, n, n);
        if let Ok(d) = m.det() {
            if !d.is_zero().unwrap_or(true) {
                return m;
            }
        }
    }
}

/// A random element of the integral triangular group: diagonal units and
/// integral entries above the diagonal.
pub fn b_n_o(rng: &mut ChaCha8Rng, backend: Backend, n: usize) -> FMat {
    let mut m = FMat::zero(backend, n, n);
    for i in 0..n {
        m[(i, i)] = unit(rng, backend);
        for j in i + 1..n {
            m[(i, j)] = integral_elem(rng, backend);
        }
    }
    m
}

/// A random invertible upper triangular matrix.
pub fn b_n(rng: &mut ChaCha8Rng, backend: Backend, n: usize) -> FMat {
    let mut m = FMat::zero(backend, n, n);
    for i in 0..n {
        m[(i, i)] = loop {
            let x = field_elem(rng, backend);
            if !x.is_zero().unwrap_or(true) {
                break x;
            }
        };
        for j in i + 1..n {
            m[(i, j)] = field_elem(rng, backend);
        }
    }
    m
}

/// A random classified module with an invertible basis.
pub fn module_desc(rng: &mut ChaCha8Rng, backend: Backend, n: usize) -> ModuleDesc {
    let basis = sparse_invertible_fmat(rng, backend, n);
    let sig = (0..n)
        .map(|_| {
            let g = gamma_in(rng, backend, -3, 3);
            match rng.random_range(0..4) {
                0 => SigTag::Free,
                1 => SigTag::OShift { gamma: g },
                2 => SigTag::MShift { gamma: g },
                _ => SigTag::Zero,
            }
        })
        .collect();
    ModuleDesc::new(basis, sig).expect("invertible basis")
}

/// A random generic point on `Γ^n` with the given scale budget.
pub fn gamma_point(rng: &mut ChaCha8Rng, n: usize, max_inf: usize, max_eps: usize) -> GammaPoint {
    let scales = ScaleStructure {
        inf: rng.random_range(0..=max_inf),
        eps: rng.random_range(0..=max_eps),
    };
    let rows: Vec<Vec<Rat>> = (0..n)
        .map(|_| {
            (0..scales.width())
                .map(|_| Rat::from_int(rng.random_range(-3..=3)))
                .collect()
        })
        .collect();
    GammaPoint::new(n, scales, RatMat::from_rows(rows)).expect("matching width")
}

/// A random polydisc type with value-group radii.
pub fn monomial_type(rng: &mut ChaCha8Rng, backend: Backend, n: usize) -> MonomialType {
    let center = (0..n).map(|_| integral_elem(rng, backend)).collect();
    let radii = (0..n).map(|_| gamma_in(rng, backend, -2, 2)).collect();
    MonomialType::new(center, radii).expect("nonempty")
}

/// Pick one of the given items.
pub fn choice<'a, T>(rng: &mut ChaCha8Rng, items: &'a [T]) -> &'a T {
    items.choose(rng).expect("nonempty slice")
}

/// A sparse element of the integral triangular group: unit diagonal entries
/// of the form `c + c'·t`, sparse integral entries above.
pub fn sparse_b_n_o(rng: &mut ChaCha8Rng, backend: Backend, n: usize) -> FMat {
    let mut m = FMat::zero(backend, n, n);
    for i in 0..n {
        let c = Rat::from_int(*choice(rng, &[-3i64, -2, -1, 1, 2, 3]));
        let k = int_in(rng, -2, 2);
        let u = FieldElem::from_rat(backend, c)
            .add(&FieldElem::t_pow(backend, &Rat::one()).unwrap().scale(&k))
            .unwrap();
        m[(i, i)] = u;
        for j in i + 1..n {
            let c = int_in(rng, -3, 3);
            let k = gamma_in(rng, backend, 0, 3);
            m[(i, j)] = FieldElem::t_pow(backend, &k).unwrap().scale(&c);
        }
    }
    m
}
