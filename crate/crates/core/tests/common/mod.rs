//! Shared helpers: seeded random codes and brute-force oracles that only
//! use plain modular arithmetic on expanded coordinates.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::sync::Arc;

use eaqecc::code::AdditiveCode;
use eaqecc::galois::GaloisRing;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng8 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng8 {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn ring(p: u64, b: u32, m: usize) -> Arc<GaloisRing> {
    Arc::new(GaloisRing::new(p, b, m).unwrap())
}

/// The six test rings with the largest `n` keeping `|R|^{2n} <= 2^20`.
pub fn corpus_rings() -> Vec<(&'static str, Arc<GaloisRing>, usize)> {
    vec![
        ("F2", ring(2, 1, 1), 10),
        ("F4", ring(2, 1, 2), 5),
        ("Z4", ring(2, 2, 1), 5),
        ("Z8", ring(2, 3, 1), 3),
        ("Z9", ring(3, 2, 1), 3),
        ("GR(4,2)", ring(2, 2, 2), 2),
    ]
}

/// Random expanded generators: uniform rows, each scaled by a random power
/// of `p` so torsion codes show up often.
pub fn random_rows(rng: &mut Rng8, r: &GaloisRing, n: usize, count: usize) -> Vec<Vec<u64>> {
    let q = r.modulus().value();
    let len = 2 * n * r.m();
    (0..count)
        .map(|_| {
            let scale = r.p().pow(rng.gen_range(0..r.b()));
            (0..len).map(|_| rng.gen_range(0..q) * scale % q).collect()
        })
        .collect()
}

pub fn random_code(rng: &mut Rng8, r: &Arc<GaloisRing>, n: usize) -> (AdditiveCode, Vec<Vec<u64>>) {
    let k = rng.gen_range(0..=2 * n * r.m() + 1);
    let rows = random_rows(rng, r, n, k);
    (AdditiveCode::from_expanded(r.clone(), n, &rows), rows)
}

/// Random code with `n` drawn from `1..=max_n`.
pub fn random_code_upto(rng: &mut Rng8, r: &Arc<GaloisRing>, max_n: usize) -> (AdditiveCode, Vec<Vec<u64>>) {
    let n = rng.gen_range(1..=max_n);
    random_code(rng, r, n)
}

/// `Σ y_i x'_i - y'_i x_i` with the x half first.
pub fn sym(q: u64, u: &[u64], v: &[u64]) -> u64 {
    let h = u.len() / 2;
    let mut s = 0u64;
    for i in 0..h {
        s = (s + u[h + i] * v[i]) % q;
        s = (s + (q - u[i] * v[h + i] % q)) % q;
    }
    s
}

pub fn weight(v: &[u64], n: usize, m: usize) -> usize {
    let h = n * m;
    (0..n)
        .filter(|&i| (0..m).any(|j| v[i * m + j] != 0 || v[h + i * m + j] != 0))
        .count()
}

/// Every vector of `Z_q^len`, lexicographically.
pub fn all_vectors(q: u64, len: usize) -> Vec<Vec<u64>> {
    let total = q.pow(len as u32);
    (0..total)
        .map(|mut idx| {
            let mut v = vec![0; len];
            for slot in v.iter_mut().rev() {
                *slot = idx % q;
                idx /= q;
            }
            v
        })
        .collect()
}

/// Additive closure of the generators.
pub fn span(q: u64, len: usize, gens: &[Vec<u64>]) -> BTreeSet<Vec<u64>> {
    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    let zero = vec![0; len];
    seen.insert(zero.clone());
    let mut queue = VecDeque::from([zero]);
    while let Some(v) = queue.pop_front() {
        for g in gens {
            let w: Vec<u64> = v.iter().zip(g).map(|(a, b)| (a + b) % q).collect();
            if seen.insert(w.clone()) {
                queue.push_back(w);
            }
        }
    }
    seen.into_iter().collect()
}

/// `{v : Tr<v|g> = 0 for all g}` by scanning the ambient space.
pub fn brute_dual(q: u64, len: usize, gens: &[Vec<u64>], level_scale: u64) -> BTreeSet<Vec<u64>> {
    all_vectors(q, len)
        .into_iter()
        .filter(|v| gens.iter().all(|g| (sym(q, v, g) * level_scale).is_multiple_of(q)))
        .collect()
}

pub fn set_of(code: &AdditiveCode) -> BTreeSet<Vec<u64>> {
    let mut out = BTreeSet::new();
    eaqecc::linalg::ModuleElements::new(code.expanded()).for_each(|v| {
        out.insert(v.to_vec());
    });
    out
}

pub fn log_p(p: u64, mut x: u128) -> Option<u32> {
    let mut e = 0;
    while x > 1 {
        if !x.is_multiple_of(p as u128) {
            return None;
        }
        x /= p as u128;
        e += 1;
    }
    Some(e)
}
