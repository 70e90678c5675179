//! Additive codes `C ⊆ R^{2n}` and their symplectic duals.
//!
//! A code is kept as the Howell form of its image under
//! [`GaloisRing::phi_expand`], so every dual, rank and intersection is plain
//! linear algebra over `Z_{p^b}`. In expanded coordinates a vector is laid
//! out as `n` x-blocks followed by `n` y-blocks of `m` residues each, and the
//! trace of the ring symplectic product is the standard symplectic product.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::galois::{GaloisRing, RingElement};
use crate::linalg::{self, HowellBasis, ModuleElements, Modulus, ZpbMatrix};

/// A tuple `(x, y)` of two vectors in `R^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SymplecticVector {
    pub x: Vec<RingElement>,
    pub y: Vec<RingElement>,
}

impl SymplecticVector {
    pub fn new(x: Vec<RingElement>, y: Vec<RingElement>) -> Self {
        assert_eq!(x.len(), y.len(), "halves must have equal length");
        SymplecticVector { x, y }
    }

    /// From `x_1..x_n, y_1..y_n`.
    pub fn from_flat(mut v: Vec<RingElement>) -> Self {
        assert!(v.len().is_multiple_of(2), "symplectic vectors have even length");
        let y = v.split_off(v.len() / 2);
        SymplecticVector { x: v, y }
    }

    pub fn to_flat(&self) -> Vec<RingElement> {
        self.x.iter().chain(&self.y).cloned().collect()
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn is_zero(&self) -> bool {
        self.x.iter().chain(&self.y).all(RingElement::is_zero)
    }
}

impl fmt::Display for SymplecticVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let half = |v: &[RingElement]| v.iter().map(|e| format!("{e}")).collect::<Vec<_>>().join(" ");
        write!(f, "({} | {})", half(&self.x), half(&self.y))
    }
}

/// `<(a,b)|(a',b')>_s = b·a' - b'·a`.
pub fn symplectic_product(
    ring: &GaloisRing,
    u: &SymplecticVector,
    v: &SymplecticVector,
) -> Result<RingElement> {
    if u.n() != v.n() {
        return Err(Error::DimensionMismatch {
            expected: u.n(),
            found: v.n(),
        });
    }
    let mut acc = ring.zero();
    for i in 0..u.n() {
        acc = ring.add(&acc, &ring.mul(&u.y[i], &v.x[i]));
        acc = ring.sub(&acc, &ring.mul(&v.y[i], &u.x[i]));
    }
    Ok(acc)
}

pub fn symplectic_weight(v: &SymplecticVector) -> usize {
    v.x.iter()
        .zip(&v.y)
        .filter(|(a, b)| !a.is_zero() || !b.is_zero())
        .count()
}

/// Standard symplectic product on `Z_{p^b}^{2N}`, halves of length `N`.
pub fn expanded_product(md: Modulus, u: &[u64], v: &[u64]) -> u64 {
    debug_assert_eq!(u.len(), v.len());
    let h = u.len() / 2;
    let q = md.value();
    let mut pos = 0u64;
    let mut neg = 0u64;
    for i in 0..h {
        pos = (pos + u[h + i] * v[i]) % q;
        neg = (neg + v[h + i] * u[i]) % q;
    }
    md.sub(pos, neg)
}

/// Symplectic weight of an expanded vector with `n` pairs of `m`-blocks.
pub fn expanded_weight(v: &[u64], n: usize, m: usize) -> usize {
    let half = n * m;
    (0..n)
        .filter(|&i| {
            v[i * m..(i + 1) * m].iter().any(|&c| c != 0)
                || v[half + i * m..half + (i + 1) * m].iter().any(|&c| c != 0)
        })
        .count()
}

/// Which set a distance search ranges over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DistanceMode {
    Code,
    Dual,
    DualMinusCode,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Distance {
    Finite(usize),
    Infinite,
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Finite(d) => write!(f, "{d}"),
            Distance::Infinite => f.write_str("Infinite"),
        }
    }
}

/// A `Z_{p^b}`-submodule of `R^{2n}`.
#[derive(Clone, Debug)]
pub struct AdditiveCode {
    ring: Arc<GaloisRing>,
    n: usize,
    generators: Vec<SymplecticVector>,
    expanded: HowellBasis,
}

impl PartialEq for AdditiveCode {
    /// Equality of the underlying sets.
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.n == other.n && self.expanded == other.expanded
    }
}

impl Eq for AdditiveCode {}

impl AdditiveCode {
    pub fn new(ring: Arc<GaloisRing>, n: usize, generators: Vec<SymplecticVector>) -> Result<Self> {
        let mut rows = Vec::with_capacity(generators.len());
        for g in &generators {
            if g.n() != n || g.y.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: g.n(),
                });
            }
            rows.push(ring.phi_expand(&g.to_flat()));
        }
        let expanded = HowellBasis::from_gens(ring.modulus(), 2 * n * ring.m(), &rows);
        Ok(AdditiveCode {
            ring,
            n,
            generators,
            expanded,
        })
    }

    /// The code whose expanded image is spanned by `rows`.
    pub fn from_expanded(ring: Arc<GaloisRing>, n: usize, rows: &[Vec<u64>]) -> Self {
        let cols = 2 * n * ring.m();
        let expanded = HowellBasis::from_gens(ring.modulus(), cols, rows);
        Self::from_basis(ring, n, expanded)
    }

    fn from_basis(ring: Arc<GaloisRing>, n: usize, expanded: HowellBasis) -> Self {
        let generators = expanded
            .rows()
            .map(|r| SymplecticVector::from_flat(ring.phi_contract(r)))
            .collect();
        AdditiveCode {
            ring,
            n,
            generators,
            expanded,
        }
    }

    pub fn zero(ring: Arc<GaloisRing>, n: usize) -> Self {
        let cols = 2 * n * ring.m();
        let md = ring.modulus();
        Self::from_basis(ring, n, HowellBasis::zero(md, cols))
    }

    pub fn full(ring: Arc<GaloisRing>, n: usize) -> Self {
        let cols = 2 * n * ring.m();
        let md = ring.modulus();
        Self::from_basis(ring, n, HowellBasis::full(md, cols))
    }

    pub fn ring(&self) -> &Arc<GaloisRing> {
        &self.ring
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> Modulus {
        self.ring.modulus()
    }

    /// Length of expanded vectors, `2nm`.
    pub fn expanded_len(&self) -> usize {
        2 * self.n * self.ring.m()
    }

    /// The generators as supplied (or derived from the canonical form).
    pub fn generators(&self) -> &[SymplecticVector] {
        &self.generators
    }

    pub fn expanded(&self) -> &HowellBasis {
        &self.expanded
    }

    /// Canonical generators, one per Howell row, at ring level.
    pub fn canonical_generators(&self) -> Vec<SymplecticVector> {
        self.expanded
            .rows()
            .map(|r| SymplecticVector::from_flat(self.ring.phi_contract(r)))
            .collect()
    }

    pub fn expand(&self, v: &SymplecticVector) -> Vec<u64> {
        self.ring.phi_expand(&v.to_flat())
    }

    pub fn contract(&self, e: &[u64]) -> SymplecticVector {
        SymplecticVector::from_flat(self.ring.phi_contract(e))
    }

    pub fn log_cardinality(&self) -> u32 {
        self.expanded.log_cardinality()
    }

    pub fn cardinality(&self) -> BigUint {
        self.expanded.cardinality()
    }

    /// `log_p |R^{2n}|`.
    pub fn log_ambient(&self) -> u32 {
        2 * self.n as u32 * self.ring.log_size()
    }

    /// Minimal number of `Z_{p^b}` generators.
    pub fn rank(&self) -> usize {
        linalg::module_rank(self.expanded.matrix())
    }

    pub fn is_free(&self) -> bool {
        let b = self.ring.b() as usize;
        self.log_cardinality() as usize == b * self.rank()
    }

    pub fn contains(&self, v: &SymplecticVector) -> bool {
        v.n() == self.n && self.expanded.contains(&self.expand(v))
    }

    pub fn contains_expanded(&self, e: &[u64]) -> bool {
        self.expanded.contains(e)
    }

    fn check_compatible(&self, other: &AdditiveCode) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch);
        }
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(())
    }

    pub fn is_subcode_of(&self, other: &AdditiveCode) -> Result<bool> {
        self.check_compatible(other)?;
        Ok(self.expanded.is_submodule_of(&other.expanded))
    }

    pub fn intersect(&self, other: &AdditiveCode) -> Result<AdditiveCode> {
        self.check_compatible(other)?;
        let e = linalg::intersect(&self.expanded, &other.expanded)?;
        Ok(Self::from_basis(self.ring.clone(), self.n, e))
    }

    pub fn sum(&self, other: &AdditiveCode) -> Result<AdditiveCode> {
        self.check_compatible(other)?;
        let e = self.expanded.sum(&other.expanded)?;
        Ok(Self::from_basis(self.ring.clone(), self.n, e))
    }

    /// `rank(self / sub)`.
    pub fn quotient_rank(&self, sub: &AdditiveCode) -> Result<usize> {
        self.check_compatible(sub)?;
        linalg::quotient_rank(&self.expanded, &sub.expanded)
    }

    /// `{v : Tr(<v|c>_s) ≡ 0 mod p^{b-t} for all c ∈ C}`.
    pub fn chi_dual_level(&self, t: u32) -> AdditiveCode {
        let md = self.modulus();
        let len = self.expanded_len();
        let t = t.min(md.b());
        if t == md.b() {
            return Self::full(self.ring.clone(), self.n);
        }
        let half = len / 2;
        let scale = md.pow_p(t);
        // column j is the functional v -> p^t <v | g_j>
        let gens: Vec<&[u64]> = self.expanded.rows().collect();
        let mut a = ZpbMatrix::zeros(md, len, gens.len());
        for (j, g) in gens.iter().enumerate() {
            for i in 0..half {
                a.set(i, j, md.mul(scale, md.neg(g[half + i])));
                a.set(half + i, j, md.mul(scale, g[i]));
            }
        }
        Self::from_basis(self.ring.clone(), self.n, linalg::kernel(&a))
    }

    pub fn chi_dual(&self) -> AdditiveCode {
        self.chi_dual_level(0)
    }

    /// The `R`-submodule generated by the code.
    pub fn r_span(&self) -> AdditiveCode {
        let ring = &self.ring;
        let mut rows = Vec::new();
        for g in self.canonical_generators() {
            for k in 0..ring.m() as u64 {
                let t = ring.theta_pow(k);
                let x = g.x.iter().map(|e| ring.mul(&t, e)).collect();
                let y = g.y.iter().map(|e| ring.mul(&t, e)).collect();
                rows.push(ring.phi_expand(&SymplecticVector::new(x, y).to_flat()));
            }
        }
        Self::from_expanded(ring.clone(), self.n, &rows)
    }

    /// `{v : <c|v>_s = 0 in R for all c ∈ C}`.
    pub fn symplectic_dual(&self) -> AdditiveCode {
        self.r_span().chi_dual_level(0)
    }

    pub fn is_chi_self_orthogonal(&self) -> bool {
        let md = self.modulus();
        let rows: Vec<&[u64]> = self.expanded.rows().collect();
        rows.iter().enumerate().all(|(i, u)| {
            rows[i + 1..]
                .iter()
                .all(|v| expanded_product(md, u, v) == 0)
        })
    }

    /// Keeps the first `keep_n` coordinate pairs.
    pub fn puncture(&self, keep_n: usize) -> Result<AdditiveCode> {
        if keep_n > self.n {
            return Err(Error::InvalidPuncture {
                keep: keep_n,
                n: self.n,
            });
        }
        let m = self.ring.m();
        let half = self.n * m;
        let rows: Vec<Vec<u64>> = self
            .expanded
            .rows()
            .map(|r| {
                let mut v = r[..keep_n * m].to_vec();
                v.extend_from_slice(&r[half..half + keep_n * m]);
                v
            })
            .collect();
        Ok(Self::from_expanded(self.ring.clone(), keep_n, &rows))
    }

    /// Exhaustive minimum symplectic weight over the chosen set.
    pub fn min_symplectic_distance(&self, mode: DistanceMode, limit: u64) -> Result<Distance> {
        let dual;
        let (target, exclude) = match mode {
            DistanceMode::Code => (self, None),
            DistanceMode::Dual => {
                dual = self.chi_dual();
                (&dual, None)
            }
            DistanceMode::DualMinusCode => {
                dual = self.chi_dual();
                (&dual, Some(&self.expanded))
            }
        };
        min_weight(target, exclude, limit)
    }
}

/// Minimum weight over `code ∖ ({0} ∪ exclude)`.
fn min_weight(code: &AdditiveCode, exclude: Option<&HowellBasis>, limit: u64) -> Result<Distance> {
    let card = code.cardinality();
    if card > BigUint::from(limit) {
        return Err(Error::LimitExceeded {
            cardinality: card,
            limit,
        });
    }
    let elems = ModuleElements::new(code.expanded());
    let total = elems.total();
    let (n, m) = (code.n, code.ring.m());
    let chunk = (total / (rayon::current_num_threads() as u64 * 8)).max(1024);
    let starts: Vec<u64> = (0..total).step_by(chunk as usize).collect();
    let best = starts
        .into_par_iter()
        .map(|s| {
            let mut best = usize::MAX;
            elems.for_each_in_range(s, s + chunk, |v| {
                let w = expanded_weight(v, n, m);
                if w == 0 || w >= best {
                    return;
                }
                if exclude.is_some_and(|e| e.contains(v)) {
                    return;
                }
                best = w;
            });
            best
        })
        .min()
        .unwrap_or(usize::MAX);
    Ok(if best == usize::MAX {
        Distance::Infinite
    } else {
        Distance::Finite(best)
    })
}
