mod common;

use std::collections::BTreeSet;

use common::*;
use eaqecc::code::{expanded_product, AdditiveCode};
use eaqecc::decomp::{hyperbolic_decompose, level_ranks, rho_profile, verify_prop_count};
use eaqecc::linalg::{module_rank, HowellBasis};
use proptest::prelude::*;

/// `log_p |M / (pM + S)|` on explicit sets.
fn quotient_rank_scan(p: u64, q: u64, m: &BTreeSet<Vec<u64>>, s: &BTreeSet<Vec<u64>>) -> u32 {
    let pm: BTreeSet<Vec<u64>> = m.iter().map(|v| v.iter().map(|x| x * p % q).collect()).collect();
    let mut sum = BTreeSet::new();
    for a in &pm {
        for b in s {
            sum.insert(a.iter().zip(b).map(|(x, y)| (x + y) % q).collect::<Vec<_>>());
        }
    }
    log_p(p, (m.len() / sum.len()) as u128).expect("index is a power of p")
}

fn scan_rank_at_level(r: &eaqecc::galois::GaloisRing, c: &AdditiveCode, rows: &[Vec<u64>], t: u32) -> u32 {
    let q = r.modulus().value();
    let code = span(q, c.expanded_len(), rows);
    let dual = brute_dual(q, c.expanded_len(), rows, r.p().pow(t));
    let inter: BTreeSet<Vec<u64>> = code.intersection(&dual).cloned().collect();
    quotient_rank_scan(r.p(), q, &code, &inter)
}

#[test]
fn pair_count_matches_scan() {
    let mut g = rng(11);
    let rings = [
        ring(2, 1, 1),
        ring(2, 1, 2),
        ring(2, 2, 1),
        ring(2, 3, 1),
        ring(3, 2, 1),
        ring(2, 2, 2),
    ];
    for r in &rings {
        let max_n = if r.size() > 4 { 1 } else { 3 };
        for _ in 0..15 {
            let (c, rows) = random_code_upto(&mut g, r, max_n);
            let d = hyperbolic_decompose(&c).unwrap();
            assert_eq!(2 * d.c() as u32, scan_rank_at_level(r, &c, &rows, 0), "{}", r.describe());
        }
    }
}

#[test]
fn rho_matches_scan() {
    let mut g = rng(12);
    for r in [ring(2, 2, 1), ring(2, 3, 1), ring(3, 2, 1), ring(2, 2, 2)] {
        let max_n = if r.size() > 4 { 1 } else { 2 };
        for _ in 0..10 {
            let (c, rows) = random_code_upto(&mut g, &r, max_n);
            let ranks: Vec<u32> = (0..=r.b()).map(|t| scan_rank_at_level(&r, &c, &rows, t)).collect();
            assert_eq!(
                level_ranks(&c).unwrap().iter().map(|&x| x as u32).collect::<Vec<_>>(),
                ranks
            );
            let rho: Vec<usize> = (1..r.b() as usize)
                .map(|t| (ranks[t - 1] - ranks[t]) as usize)
                .collect();
            assert_eq!(rho_profile(&c).unwrap(), rho);
        }
    }
}

#[test]
fn decomposition_is_deterministic() {
    let mut g = rng(13);
    let r = ring(2, 2, 2);
    for _ in 0..10 {
        let (c, _) = random_code_upto(&mut g, &r, 2);
        let a = hyperbolic_decompose(&c).unwrap();
        let b = hyperbolic_decompose(&c).unwrap();
        assert_eq!(a.pairs(), b.pairs());
        assert_eq!(a.isotropic(), b.isotropic());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn decomposition_invariants(seed in any::<u64>(), which in 0usize..6) {
        let (_, r, max_n) = corpus_rings().swap_remove(which);
        let mut g = rng(seed);
        let (c, _) = random_code_upto(&mut g, &r, max_n.min(3));
        let d = hyperbolic_decompose(&c).unwrap();
        prop_assert!(d.verify().is_ok());
        let md = c.modulus();
        let q = md.value();

        // span preservation
        let span = HowellBasis::from_gens(md, c.expanded_len(), &d.all_generators());
        prop_assert_eq!(&span, c.expanded());

        // pairing pattern, checked with the plain product
        let iso = d.isotropic();
        let gens = d.all_generators();
        for a in iso {
            for h in &gens {
                prop_assert_eq!(sym(q, a, h), 0);
            }
        }
        for (k, p) in d.pairs().iter().enumerate() {
            prop_assert_eq!(sym(q, &p.first, &p.second), p.exponent);
            prop_assert_ne!(p.exponent, 0);
            prop_assert_eq!(r.trace(&p.gamma), p.exponent);
            for (l, other) in d.pairs().iter().enumerate() {
                if l != k {
                    for (x, y) in [(&p.first, &other.first), (&p.first, &other.second), (&p.second, &other.second)] {
                        prop_assert_eq!(expanded_product(md, x, y), 0);
                    }
                }
            }
        }

        // pair count and lower bound
        let inter = c.intersect(&c.chi_dual()).unwrap();
        prop_assert_eq!(2 * d.c(), c.quotient_rank(&inter).unwrap());
        let lower = module_rank(c.expanded().matrix()) as i64 - module_rank(inter.expanded().matrix()) as i64;
        prop_assert!(2 * d.c() as i64 >= lower);

        for t in 0..=r.b() {
            prop_assert!(verify_prop_count(&d, &c, t).unwrap());
        }

        // rerunning on the output reproduces c
        let again = AdditiveCode::from_expanded(r.clone(), c.n(), &d.all_generators());
        prop_assert_eq!(hyperbolic_decompose(&again).unwrap().c(), d.c());
    }

    #[test]
    fn pair_exponents_have_minimal_valuation_first(seed in any::<u64>()) {
        let r = ring(2, 3, 1);
        let mut g = rng(seed);
        let (c, _) = random_code_upto(&mut g, &r, 3);
        let d = hyperbolic_decompose(&c).unwrap();
        let md = c.modulus();
        let vals: Vec<u32> = d.exponents().iter().map(|&e| md.valuation(e)).collect();
        prop_assert!(vals.windows(2).all(|w| w[0] <= w[1]), "{:?}", vals);
    }
}
