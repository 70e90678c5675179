//! Dense-matrix ground truth for the stabilizer construction.
//!
//! The Hilbert space of `n` qudits over `R` has basis `|x>` for
//! `x ∈ R^n`, indexed by the θ-coordinates of `x` as base-`p^b` digits.
//! Operators are stored symbolically as `ω^ℓ X(a) Z(b)` with `a` in θ
//! coordinates and `b` in dual coordinates, so `Z(b)|x> = ζ^{b·x}|x>` is a
//! plain dot product.

use std::collections::HashMap;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::code::{expanded_product, expanded_weight, AdditiveCode, Distance, SymplecticVector};
use crate::error::{Error, Result};
use crate::extension::SelfOrthogonalExtension;
use crate::galois::{GaloisRing, RingElement};
use crate::linalg::{self, Modulus, ZpbMatrix};

/// `ω^phase X(x) Z(z)`, with `x`, `z` expanded.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PauliOperator {
    pub phase: u64,
    pub x: Vec<u64>,
    pub z: Vec<u64>,
}

impl PauliOperator {
    /// The symplectic coordinates `(x | z)`.
    pub fn support(&self) -> Vec<u64> {
        let mut v = self.x.clone();
        v.extend_from_slice(&self.z);
        v
    }
}

/// Pauli operators on `n` qudits over `R`.
#[derive(Clone, Debug)]
pub struct PauliSpace {
    ring: Arc<GaloisRing>,
    n: usize,
    /// order of ω: `p^b`, or `2^{b+1}` when `p = 2`
    order: u64,
    /// `ζ = ω^{zeta_step}`
    zeta_step: u64,
    roots: Vec<Complex64>,
}

impl PauliSpace {
    pub fn new(ring: Arc<GaloisRing>, n: usize) -> Self {
        let q = ring.modulus().value();
        let order = if ring.p() == 2 { 2 * q } else { q };
        let roots = (0..order)
            .map(|k| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / order as f64))
            .collect();
        PauliSpace {
            ring,
            n,
            order,
            zeta_step: order / q,
            roots,
        }
    }

    pub fn ring(&self) -> &Arc<GaloisRing> {
        &self.ring
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `N`, the order of ω.
    pub fn phase_order(&self) -> u64 {
        self.order
    }

    fn md(&self) -> Modulus {
        self.ring.modulus()
    }

    /// Length of each of `x` and `z`.
    fn half(&self) -> usize {
        self.n * self.ring.m()
    }

    /// `q^n`, saturating.
    pub fn dimension(&self) -> u128 {
        (self.ring.size() as u128).saturating_pow(self.n as u32)
    }

    fn check_dim(&self, cap: usize) -> Result<usize> {
        let dim = self.dimension();
        if dim > cap as u128 {
            return Err(Error::DimensionTooLarge { dim, cap });
        }
        Ok(dim as usize)
    }

    pub fn identity(&self) -> PauliOperator {
        PauliOperator {
            phase: 0,
            x: vec![0; self.half()],
            z: vec![0; self.half()],
        }
    }

    pub fn scalar(&self, phase: u64) -> PauliOperator {
        PauliOperator {
            phase: phase % self.order,
            ..self.identity()
        }
    }

    /// `ω^phase X(a) Z(b)` from ring-level vectors.
    pub fn operator(&self, phase: u64, a: &[RingElement], b: &[RingElement]) -> Result<PauliOperator> {
        if a.len() != self.n || b.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: if a.len() != self.n { a.len() } else { b.len() },
            });
        }
        let v = self.ring.phi_expand(&SymplecticVector::new(a.to_vec(), b.to_vec()).to_flat());
        Ok(self.from_support(phase, &v))
    }

    /// From an expanded symplectic vector `(x | z)`.
    pub fn from_support(&self, phase: u64, v: &[u64]) -> PauliOperator {
        let h = self.half();
        assert_eq!(v.len(), 2 * h, "support length mismatch");
        PauliOperator {
            phase: phase % self.order,
            x: v[..h].to_vec(),
            z: v[h..].to_vec(),
        }
    }

    /// `Ψ(ω^ℓ X(a) Z(b)) = (a, b)`.
    pub fn psi(&self, p: &PauliOperator) -> SymplecticVector {
        SymplecticVector::from_flat(self.ring.phi_contract(&p.support()))
    }

    pub fn weight(&self, p: &PauliOperator) -> usize {
        expanded_weight(&p.support(), self.n, self.ring.m())
    }

    fn dot(&self, a: &[u64], b: &[u64]) -> u64 {
        let md = self.md();
        a.iter().zip(b).fold(0, |acc, (&x, &y)| md.add(acc, md.mul(x, y)))
    }

    /// `PP' = ω^{ℓ+ℓ'} χ(b·a') X(a+a') Z(b+b')`.
    pub fn compose(&self, p: &PauliOperator, q: &PauliOperator) -> PauliOperator {
        let md = self.md();
        let chi = self.dot(&p.z, &q.x) * self.zeta_step;
        PauliOperator {
            phase: (p.phase + q.phase + chi) % self.order,
            x: p.x.iter().zip(&q.x).map(|(&a, &b)| md.add(a, b)).collect(),
            z: p.z.iter().zip(&q.z).map(|(&a, &b)| md.add(a, b)).collect(),
        }
    }

    pub fn pow(&self, p: &PauliOperator, mut e: u64) -> PauliOperator {
        let mut acc = self.identity();
        let mut base = p.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.compose(&acc, &base);
            }
            base = self.compose(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn inverse(&self, p: &PauliOperator) -> PauliOperator {
        let md = self.md();
        let bare = PauliOperator {
            phase: 0,
            x: p.x.iter().map(|&v| md.neg(v)).collect(),
            z: p.z.iter().map(|&v| md.neg(v)).collect(),
        };
        // P · bare = ω^{ℓ + step·(z·(-x))} I
        let s = self.compose(p, &bare).phase;
        PauliOperator {
            phase: (self.order - s) % self.order,
            ..bare
        }
    }

    /// Commutation by the character criterion `χ(ba' - b'a) = 1`.
    pub fn commutes(&self, p: &PauliOperator, q: &PauliOperator) -> bool {
        expanded_product(self.md(), &p.support(), &q.support()) == 0
    }

    fn basis_digits(&self, dim: usize) -> Vec<Vec<u64>> {
        let q0 = self.md().value();
        let h = self.half();
        (0..dim as u64)
            .map(|mut i| {
                let mut d = Vec::with_capacity(h);
                for _ in 0..h {
                    d.push(i % q0);
                    i /= q0;
                }
                d
            })
            .collect()
    }

    fn index_of(&self, digits: &[u64]) -> usize {
        let q0 = self.md().value();
        digits.iter().rev().fold(0u64, |acc, &d| acc * q0 + d) as usize
    }

    /// Column `x` of the operator has its single nonzero entry
    /// `ω^{phase[x]}` in row `perm[x]`.
    pub fn monomial(&self, p: &PauliOperator, cap: usize) -> Result<Monomial> {
        let dim = self.check_dim(cap)?;
        let md = self.md();
        let digits = self.basis_digits(dim);
        let mut perm = Vec::with_capacity(dim);
        let mut phase = Vec::with_capacity(dim);
        for x in &digits {
            let shifted: Vec<u64> = x.iter().zip(&p.x).map(|(&a, &b)| md.add(a, b)).collect();
            perm.push(self.index_of(&shifted));
            phase.push((p.phase + self.dot(&p.z, x) * self.zeta_step) % self.order);
        }
        Ok(Monomial { perm, phase })
    }

    /// The dense `q^n × q^n` matrix.
    pub fn matrix(&self, p: &PauliOperator, cap: usize) -> Result<DenseMatrix> {
        let mono = self.monomial(p, cap)?;
        let dim = mono.perm.len();
        let mut m = DenseMatrix::zeros(dim);
        for x in 0..dim {
            m.data[mono.perm[x] * dim + x] = self.roots[mono.phase[x] as usize];
        }
        Ok(m)
    }

    fn root(&self, k: u64) -> Complex64 {
        self.roots[(k % self.order) as usize]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monomial {
    pub perm: Vec<usize>,
    pub phase: Vec<u64>,
}

/// Square complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn zeros(dim: usize) -> Self {
        DenseMatrix {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.dim + c]
    }

    pub fn mul(&self, other: &DenseMatrix) -> DenseMatrix {
        let d = self.dim;
        assert_eq!(d, other.dim);
        let mut out = DenseMatrix::zeros(d);
        out.data.par_chunks_mut(d).enumerate().for_each(|(i, row)| {
            for k in 0..d {
                let a = self.data[i * d + k];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                let orow = &other.data[k * d..(k + 1) * d];
                for (o, &b) in row.iter_mut().zip(orow) {
                    *o += a * b;
                }
            }
        });
        out
    }

    pub fn adjoint(&self) -> DenseMatrix {
        let d = self.dim;
        let mut out = DenseMatrix::zeros(d);
        for i in 0..d {
            for j in 0..d {
                out.data[j * d + i] = self.data[i * d + j].conj();
            }
        }
        out
    }

    /// Largest entrywise distance.
    pub fn max_diff(&self, other: &DenseMatrix) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.data[i * self.dim + i]).sum()
    }
}

/// The abelian group `A`, one element per codeword of `C'`.
#[derive(Clone, Debug)]
pub struct StabilizerGroup {
    space: PauliSpace,
    /// `ω^{-ξ_i} X(v_i) Z(w_i)` for the Howell rows of `C'`
    generators: Vec<PauliOperator>,
    /// `ξ(X(v_i)Z(w_i)) = ω^{xi[i]}`
    xi: Vec<u64>,
    elements: Vec<PauliOperator>,
}

impl StabilizerGroup {
    pub fn space(&self) -> &PauliSpace {
        &self.space
    }

    pub fn generators(&self) -> &[PauliOperator] {
        &self.generators
    }

    pub fn xi_exponents(&self) -> &[u64] {
        &self.xi
    }

    pub fn elements(&self) -> &[PauliOperator] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// Builds `A = ker ξ` for a character `ξ` of `W = <ωI, X(v)Z(w) : (v,w) ∈ C'>`
/// with `ξ(ω^ℓ I) = ω^ℓ`.
pub fn build_stabilizer(ext: &SelfOrthogonalExtension, cap: usize) -> Result<StabilizerGroup> {
    let code = ext.extended();
    let space = PauliSpace::new(code.ring().clone(), code.n());
    space.check_dim(cap)?;
    let bug = |m: String| Error::InternalInvariantViolation(m);
    let rows = code.expanded().row_vecs();
    let lifts: Vec<PauliOperator> = rows.iter().map(|r| space.from_support(0, r)).collect();
    for (i, a) in lifts.iter().enumerate() {
        for (j, b) in lifts.iter().enumerate().skip(i + 1) {
            if !space.commutes(a, b) || space.compose(a, b) != space.compose(b, a) {
                return Err(bug(format!("generators {i} and {j} do not commute")));
            }
        }
    }

    // relations: lifted kernel vectors of the generator matrix, and p^b e_i
    let md = space.md();
    let r = lifts.len();
    let mut relations: Vec<(Vec<u64>, u64)> = Vec::new();
    if r > 0 {
        let gens = ZpbMatrix::from_rows(md, code.expanded_len(), &rows)?;
        for k in linalg::kernel(&gens).rows() {
            let mut prod = space.identity();
            for (g, &e) in lifts.iter().zip(k) {
                prod = space.compose(&prod, &space.pow(g, e));
            }
            if prod.x.iter().chain(&prod.z).any(|&v| v != 0) {
                return Err(bug("kernel relation is not scalar".into()));
            }
            relations.push((k.to_vec(), prod.phase));
        }
        for (i, g) in lifts.iter().enumerate() {
            let pw = space.pow(g, md.value());
            let mut k = vec![0; r];
            k[i] = md.value();
            relations.push((k, pw.phase));
        }
    }
    let phase_md = if md.p() == 2 {
        Modulus::new(2, md.b() + 1)?
    } else {
        md
    };
    let xi = if r == 0 {
        Vec::new()
    } else {
        let mut a = ZpbMatrix::zeros(phase_md, r, relations.len());
        for (j, (k, _)) in relations.iter().enumerate() {
            for (i, &ki) in k.iter().enumerate() {
                a.set(i, j, ki);
            }
        }
        let rhs: Vec<u64> = relations.iter().map(|(_, s)| s % space.order).collect();
        linalg::solve_left(&a, &rhs).ok_or_else(|| bug("no character extends ω ↦ ω".into()))?
    };

    let generators: Vec<PauliOperator> = lifts
        .iter()
        .zip(&xi)
        .map(|(g, &x)| PauliOperator {
            phase: (g.phase + space.order - x % space.order) % space.order,
            ..g.clone()
        })
        .collect();

    // closure: every element of A lies over a distinct codeword
    let mut seen: HashMap<Vec<u64>, u64> = HashMap::new();
    let id = space.identity();
    seen.insert(id.support(), 0);
    let mut elements = vec![id];
    let mut head = 0;
    while head < elements.len() {
        let e = elements[head].clone();
        head += 1;
        for g in &generators {
            let f = space.compose(&e, g);
            match seen.get(&f.support()) {
                Some(&ph) if ph != f.phase => {
                    return Err(bug("A contains a nontrivial scalar".into()));
                }
                Some(_) => {}
                None => {
                    seen.insert(f.support(), f.phase);
                    elements.push(f);
                }
            }
        }
    }
    if Some(elements.len() as u64) != code.cardinality().try_into().ok() {
        return Err(bug(format!(
            "A has {} elements, C' has {}",
            elements.len(),
            code.cardinality()
        )));
    }
    Ok(StabilizerGroup {
        space,
        generators,
        xi,
        elements,
    })
}

/// `P = (1/|A|) Σ_{F ∈ A} F` together with its checked properties.
#[derive(Clone, Debug)]
pub struct Projector {
    pub matrix: DenseMatrix,
    pub dimension: usize,
    pub trace: f64,
    pub idempotence_error: f64,
}

pub const TRACE_TOLERANCE: f64 = 1e-6;
pub const IDEMPOTENCE_TOLERANCE: f64 = 1e-9;

pub fn projector(a: &StabilizerGroup, cap: usize) -> Result<Projector> {
    let space = &a.space;
    let dim = space.check_dim(cap)?;
    let mut p = DenseMatrix::zeros(dim);
    let w = 1.0 / a.len() as f64;
    for f in &a.elements {
        let mono = space.monomial(f, cap)?;
        for x in 0..dim {
            p.data[mono.perm[x] * dim + x] += space.root(mono.phase[x]) * w;
        }
    }
    let tr = p.trace();
    let rounded = tr.re.round();
    if (tr - Complex64::new(rounded, 0.0)).norm() > TRACE_TOLERANCE || rounded < 0.0 {
        return Err(Error::NonProjector(format!("trace {tr} is not an integer")));
    }
    let err = p.mul(&p).max_diff(&p);
    if err > IDEMPOTENCE_TOLERANCE {
        return Err(Error::NonProjector(format!("|P^2 - P| = {err:e}")));
    }
    Ok(Projector {
        matrix: p,
        dimension: rounded as usize,
        trace: tr.re,
        idempotence_error: err,
    })
}

pub fn projector_dimension(a: &StabilizerGroup, cap: usize) -> Result<usize> {
    Ok(projector(a, cap)?.dimension)
}

/// Orthonormal basis of the image of `P`, as columns.
pub fn image_basis(p: &Projector) -> Result<Vec<Vec<Complex64>>> {
    let d = p.matrix.dim;
    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(p.dimension);
    for j in 0..d {
        if basis.len() == p.dimension {
            break;
        }
        let mut v: Vec<Complex64> = (0..d).map(|i| p.matrix.get(i, j)).collect();
        for _ in 0..2 {
            for u in &basis {
                let c: Complex64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (x, &y) in v.iter_mut().zip(u) {
                    *x -= c * y;
                }
            }
        }
        let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            basis.push(v.into_iter().map(|x| x / norm).collect());
        }
    }
    if basis.len() != p.dimension {
        return Err(Error::NonProjector(format!(
            "image has rank {} but trace {}",
            basis.len(),
            p.dimension
        )));
    }
    Ok(basis)
}

/// How the reported distance was defined.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DistanceConvention {
    /// minimum weight of an undetectable error
    Undetectable,
    /// no undetectable errors: minimum weight of a nonzero error with
    /// nonvanishing compression `U† E U`
    NonzeroCompression,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ErrorSearch {
    pub errors_checked: u64,
    pub undetectable: u64,
    pub undetectable_min_weight: Distance,
    pub nonzero_min_weight: Distance,
    pub distance: Distance,
    pub convention: DistanceConvention,
    /// positions where the matrix verdict differs from membership in
    /// `C^{⊥χ} ∖ C`
    pub mismatches: u64,
    /// dimension of the code space
    pub dimension: usize,
}

impl ErrorSearch {
    pub fn matches_theory(&self) -> bool {
        self.mismatches == 0
    }
}

/// Bound on the squared Frobenius norms `|U†EU - λI|^2` and `|U†EU|^2`.
/// Genuine logical operators sit at distance of order 1.
const COMPRESSION_TOLERANCE: f64 = 1e-6;

/// Classifies every `X(a,0)Z(b,0)` with `(a,b) ∈ R^{2n}` by the matrix
/// criterion `U† E U = λ I`.
pub fn undetectable_error_search(
    code: &AdditiveCode,
    ext: &SelfOrthogonalExtension,
    a: &StabilizerGroup,
    limit: u64,
    cap: usize,
) -> Result<ErrorSearch> {
    let space = &a.space;
    let dim = space.check_dim(cap)?;
    let m = code.ring().m();
    let (n, c) = (code.n(), ext.c());
    let bh = n * m;
    let full = AdditiveCode::full(code.ring().clone(), n);
    let total = full.cardinality();
    if total > limit.into() {
        return Err(Error::LimitExceeded {
            cardinality: total,
            limit,
        });
    }
    let p = projector(a, cap)?;
    let k = p.dimension;
    let dual = code.chi_dual();
    let elems = linalg::ModuleElements::new(full.expanded());
    let count = elems.total();

    struct Verdict {
        weight: usize,
        undetectable: bool,
        nonzero: bool,
        theory: bool,
    }
    let classify = |v: &[u64]| -> Result<Verdict> {
        let mut support = v[..bh].to_vec();
        support.extend(std::iter::repeat_n(0, c * m));
        support.extend_from_slice(&v[bh..]);
        support.extend(std::iter::repeat_n(0, c * m));
        let e = space.from_support(0, &support);
        let mono = space.monomial(&e, cap)?;
        // With U an orthonormal basis of the image and M = U†EU:
        // tr M = tr(EP) and |M|_F^2 = tr(E†PEP), so
        // |M - λI|_F^2 = tr(E†PEP) - |tr(EP)|^2 / k for λ = tr(M)/k.
        let w: Vec<Complex64> = mono.phase.iter().map(|&f| space.root(f)).collect();
        let pm = &p.matrix;
        let mut tr = Complex64::new(0.0, 0.0);
        let mut frob = Complex64::new(0.0, 0.0);
        for x in 0..dim {
            let px = mono.perm[x];
            tr += w[x] * pm.get(x, px);
            let row = w[x].conj();
            for y in 0..dim {
                frob += row * w[y] * pm.get(px, mono.perm[y]) * pm.get(y, x);
            }
        }
        let frob = frob.re;
        let spread = frob - tr.norm_sqr() / k as f64;
        let scalar = spread <= COMPRESSION_TOLERANCE;
        let nonzero = frob > COMPRESSION_TOLERANCE;
        Ok(Verdict {
            weight: expanded_weight(v, n, m),
            undetectable: !scalar,
            nonzero,
            theory: dual.contains_expanded(v) && !code.contains_expanded(v),
        })
    };

    let chunk = 64u64;
    let starts: Vec<u64> = (0..count).step_by(chunk as usize).collect();
    let partial: Vec<Result<(u64, usize, usize, u64)>> = starts
        .into_par_iter()
        .map(|s| {
            let mut found = Vec::new();
            elems.for_each_in_range(s, s + chunk, |v| found.push(v.to_vec()));
            let (mut und, mut und_w, mut nz_w, mut mism) = (0u64, usize::MAX, usize::MAX, 0u64);
            for v in found {
                let verdict = classify(&v)?;
                if verdict.weight == 0 {
                    continue;
                }
                if verdict.undetectable {
                    und += 1;
                    und_w = und_w.min(verdict.weight);
                }
                if verdict.nonzero {
                    nz_w = nz_w.min(verdict.weight);
                }
                if verdict.undetectable != verdict.theory {
                    mism += 1;
                }
            }
            Ok((und, und_w, nz_w, mism))
        })
        .collect();
    let (mut und, mut und_w, mut nz_w, mut mism) = (0u64, usize::MAX, usize::MAX, 0u64);
    for r in partial {
        let (a, b, cc, d) = r?;
        und += a;
        und_w = und_w.min(b);
        nz_w = nz_w.min(cc);
        mism += d;
    }
    let wrap = |w: usize| {
        if w == usize::MAX {
            Distance::Infinite
        } else {
            Distance::Finite(w)
        }
    };
    let (distance, convention) = if und > 0 {
        (wrap(und_w), DistanceConvention::Undetectable)
    } else {
        (wrap(nz_w), DistanceConvention::NonzeroCompression)
    };
    Ok(ErrorSearch {
        errors_checked: count,
        undetectable: und,
        undetectable_min_weight: wrap(und_w),
        nonzero_min_weight: wrap(nz_w),
        distance,
        convention,
        mismatches: mism,
        dimension: k,
    })
}
