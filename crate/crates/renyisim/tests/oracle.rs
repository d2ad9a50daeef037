//! Library results against the brute-force references.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use renyisim::oracle::{self, Objective};
use renyisim_core::asymptotics::Direction;
use renyisim_core::codes::{self, Truncation};
use renyisim_core::{evaluate_code, spectrum, Order, Pmf};

fn pmf(v: &[f64]) -> Pmf {
    Pmf::from_probs(v).unwrap()
}

#[test]
fn brute_force_lower_bounds_every_construction() {
    let mut r = ChaCha8Rng::seed_from_u64(21);
    let orders = [Order::Finite(0.5), Order::One, Order::Finite(2.0), Order::PosInf];
    for _ in 0..12 {
        let p = pmf(&[r.gen_range(0.2..0.8), 1.0]);
        let q = pmf(&[r.gen_range(0.2..0.8), 1.0]);
        let (k, n) = (r.gen_range(1..=3u32), r.gen_range(1..=2u32));
        let src = pmf(&oracle::product_atoms(&p, k).unwrap());
        let tgt = pmf(&oracle::product_atoms(&q, n).unwrap());
        for &a in &orders {
            for dir in Direction::ALL {
                let (map, best) = oracle::brute_force_optimal_map(&src, &tgt, a, dir).unwrap();
                assert_eq!(map.len(), src.len());
                let candidates = [
                    codes::inverse_transform_code(&p, &q, k, n, Truncation::Full),
                    codes::greedy_code(&p, &q, k, n),
                    codes::type_spreading_code(&p, &q, k, n, a),
                    codes::partition_code(&p, &q, k, n, 0.05),
                    codes::combined_code(&p, &q, k, n, a, 0.05),
                ];
                for c in candidates {
                    let c = match c {
                        Ok(c) => c,
                        // some constructions only accept part of the order range
                        Err(renyisim_core::Error::InvalidArgument(_)) => continue,
                        Err(e) => panic!("{e}"),
                    };
                    let v = evaluate_code(&c, a, dir).unwrap().value();
                    assert!(v >= best.value() - 1e-9, "construction {v} below optimum {}", best.value());
                }
            }
        }
    }
}

#[test]
fn naive_mappings_agree_with_block_mappings() {
    let mut r = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..100 {
        let p: Vec<f64> = (0..r.gen_range(1..8)).map(|_| r.gen_range(0.01..1.0)).collect();
        let q: Vec<f64> = (0..r.gen_range(1..8)).map(|_| r.gen_range(0.01..1.0)).collect();
        let (pp, qq) = (pmf(&p), pmf(&q));
        let lib1 = codes::mapping1_pmf(&pp, &qq).unwrap();
        let lib2 = codes::mapping2_pmf(&pp, &qq).unwrap();
        let ref1 = oracle::naive_mapping1(pp.probs(), qq.probs());
        let ref2 = oracle::naive_mapping2(pp.probs(), qq.probs());
        for (a, b) in lib1.iter().zip(&ref1).chain(lib2.iter().zip(&ref2)) {
            assert!((a - b).abs() < 1e-12, "{lib1:?} {ref1:?} / {lib2:?} {ref2:?}");
        }
    }
}

#[test]
fn evaluate_matches_enumeration_on_products() {
    let (p, q) = (pmf(&[0.3, 0.7]), pmf(&[0.1, 0.9]));
    let c = codes::inverse_transform_code(&p, &q, 6, 6, Truncation::Full).unwrap();
    let py = oracle::naive_mapping1(&oracle::product_atoms(&p, 6).unwrap(), &oracle::product_atoms(&q, 6).unwrap());
    let naive = oracle::plain_directed(&py, &oracle::product_atoms(&q, 6).unwrap(), Order::PosInf, Direction::PQ);
    let lib = evaluate_code(&c, Order::PosInf, Direction::PQ).unwrap().value();
    assert!((lib - naive).abs() < 1e-9);
}

#[test]
fn spectrum_estimates_trend_to_exponent() {
    let p = pmf(&[0.2, 0.8]);
    let e = spectrum::exponent_lower(&p, 0.3).value();
    let mut prev = f64::INFINITY;
    for n in [25, 50, 100, 200] {
        let (_, est) = oracle::empirical_spectrum(&p, n, 0.3).unwrap();
        let gap = (est - e).abs();
        assert!(gap <= prev + 1e-3);
        prev = gap;
    }
    assert!(prev < 0.05);
}

#[test]
fn simplex_shadows_exponent_on_binary() {
    let p = pmf(&[0.1, 0.9]);
    let hu = renyisim_core::mode_entropy(&p);
    let closed = spectrum::exponent_upper(&p, hu).value();
    let g = oracle::simplex_grid_opt(Objective::UpperSpectrum { j: hu }, &p, 1000).unwrap();
    assert!((closed - 0.510826).abs() < 1e-5);
    assert!((g - closed).abs() < 2e-3);
}
