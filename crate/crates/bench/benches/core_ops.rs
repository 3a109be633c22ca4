use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use acvf_core::gammatype::GammaType;
use acvf_core::lattice::LatticeCode;
use acvf_core::mpoly::PolySpace;
use acvf_core::sample;
use acvf_core::stcomp::{gauss_val, jd, trop_h};
use acvf_core::valspace::{separate, VVector};
use acvf_core::{Backend, FieldElem, Rat};

fn bench_diagonalize(c: &mut Criterion) {
    let mut rng = sample::rng(11);
    let mats: Vec<_> = (0..16)
        .map(|_| sample::invertible_fmat(&mut rng, Backend::RatFunc, 4))
        .collect();
    let mut i = 0;
    c.bench_function("lattice_diagonalize_4x4", |b| {
        b.iter(|| {
            let m = &mats[i % mats.len()];
            i += 1;
            black_box(LatticeCode::diagonalize(m).unwrap());
        })
    });
}

fn bench_separate(c: &mut Criterion) {
    let mut rng = sample::rng(12);
    let families: Vec<Vec<VVector>> = (0..16)
        .map(|_| {
            (0..4)
                .map(|_| {
                    VVector::standard(
                        (0..4)
                            .map(|_| sample::field_elem(&mut rng, Backend::RatFunc))
                            .collect(),
                    )
                    .unwrap_or_else(|_| {
                        VVector::standard(vec![FieldElem::one(Backend::RatFunc); 4]).unwrap()
                    })
                })
                .collect()
        })
        .collect();
    let mut i = 0;
    c.bench_function("separate_4x4", |b| {
        b.iter(|| {
            let f = &families[i % families.len()];
            i += 1;
            black_box(separate(f).unwrap());
        })
    });
}

fn bench_jd_trop(c: &mut Criterion) {
    let mut rng = sample::rng(13);
    let p = sample::monomial_type(&mut rng, Backend::RatFunc, 2);
    let space = PolySpace::new(2, 3);
    let code = jd(&p, 3).unwrap();
    let module = code.to_module().unwrap();
    let f = {
        let mut f = acvf_core::mpoly::MPoly::zero(Backend::RatFunc, 2);
        for m in space.monomials() {
            f.add_term(m, sample::field_elem(&mut rng, Backend::RatFunc))
                .unwrap();
        }
        f
    };
    c.bench_function("jd_degree3_2vars", |b| {
        b.iter(|| black_box(jd(&p, 3).unwrap()))
    });
    let coeffs = f.coeff_vector(&space).unwrap();
    c.bench_function("trop_vs_gauss", |b| {
        b.iter(|| {
            let lhs = trop_h(&module, &coeffs).unwrap();
            let rhs = gauss_val(&p, &f).unwrap();
            assert_eq!(lhs, rhs);
            black_box(lhs)
        })
    });
}

fn bench_gamma_canonical(c: &mut Criterion) {
    let mut rng = sample::rng(14);
    let points: Vec<_> = (0..32).map(|_| sample::gamma_point(&mut rng, 4, 3, 3)).collect();
    let mut i = 0;
    c.bench_function("gamma_canonicalize_n4", |b| {
        b.iter(|| {
            let p = &points[i % points.len()];
            i += 1;
            black_box(GammaType::from_point(p));
        })
    });
}

fn bench_coset_code(c: &mut Criterion) {
    use acvf_core::coding::{coset_code, CongruenceSubgroup, Thresh};
    let mut rng = sample::rng(15);
    let mut h = CongruenceSubgroup::integral(4);
    for i in 0..4 {
        for j in i + 1..4 {
            h.set(i, j, Thresh::Finite(Rat::from_int((j - i) as i64)), false);
        }
    }
    assert!(h.is_group());
    let mats: Vec<_> = (0..16)
        .map(|_| {
            let mut m = acvf_core::fmatrix::FMat::identity(Backend::RatFunc, 4);
            for i in 0..4 {
                for j in i + 1..4 {
                    m[(i, j)] = sample::field_elem(&mut rng, Backend::RatFunc);
                }
            }
            m
        })
        .collect();
    let mut i = 0;
    c.bench_function("coset_code_4x4", |b| {
        b.iter(|| {
            let m = &mats[i % mats.len()];
            i += 1;
            black_box(coset_code(m, &h).unwrap());
        })
    });
}

criterion_group!(
    benches,
    bench_diagonalize,
    bench_separate,
    bench_jd_trop,
    bench_gamma_canonical,
    bench_coset_code
);
criterion_main!(benches);
