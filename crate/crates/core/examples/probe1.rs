use acvf_core::sample;
use acvf_core::{Backend, FieldElem, GammaVal};
use acvf_core::lattice::LatticeCode;
use std::time::Instant;

fn main() {
    let mut rng = sample::rng(1002);
    for n in 1..=5usize {
        let t0 = Instant::now();
        let mut t_sample = std::time::Duration::ZERO;
        let mut t_inv = std::time::Duration::ZERO;
        let mut t_probe = std::time::Duration::ZERO;
        let mut t_rmult = std::time::Duration::ZERO;
        for _ in 0..6 {
            let t1 = Instant::now();
            let a = sample::sparse_invertible_fmat(&mut rng, Backend::RatFunc, n);
            t_sample += t1.elapsed();
            let code = LatticeCode::diagonalize(&a).unwrap();
            let t1 = Instant::now();
            let inv = a.inverse().unwrap();
            t_inv += t1.elapsed();
            let t1 = Instant::now();
            for _ in 0..50 {
                let x: Vec<FieldElem> = (0..n).map(|_| sample::sparse_field_elem(&mut rng, Backend::RatFunc)).collect();
                let y = inv.mul_vec(&x).unwrap();
                let oracle = y.iter().all(|c| c.val().unwrap() >= GammaVal::finite(0));
                assert_eq!(code.member(&x).unwrap(), oracle);
            }
            t_probe += t1.elapsed();
            let t1 = Instant::now();
            for _ in 0..100 {
                let q = sample::sparse_b_n_o(&mut rng, Backend::RatFunc, n);
                let code_q = LatticeCode::diagonalize(&a.mul(&q).unwrap()).unwrap();
                assert_eq!(code_q.u(), code.u());
            }
            t_rmult += t1.elapsed();
        }
        println!("n={n}: total {:?}/6inst (sample {t_sample:?} inv {t_inv:?} probes {t_probe:?} rmult {t_rmult:?})", t0.elapsed());
    }
}
