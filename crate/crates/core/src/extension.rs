//! χ-self-orthogonal extensions, symplectic subsets and EAQECC parameters.
//!
//! An extension appends `c` coordinate pairs to every generator of a
//! decomposed code. A hyperbolic generator with appended part `a = (b, c)`
//! becomes `(v, -b, w, c)`, which shifts every pairing by `-<a|a'>`; so a
//! symplectic subset whose pair exponents equal the decomposition's cancels
//! every hyperbolic pairing exactly.

use std::sync::Arc;

use num_bigint::BigUint;

use crate::code::{expanded_product, AdditiveCode, Distance, DistanceMode, SymplecticVector};
use crate::decomp::{hyperbolic_decompose, rho_profile, HyperbolicDecomposition};
use crate::error::{Error, Result};
use crate::galois::GaloisRing;
use crate::linalg::{self, HowellBasis, Modulus, ZpbMatrix};

/// Pairs `(a_{i1}, a_{i2})` in `R^{2c}` with trace-trivial pairings except
/// inside each pair.
#[derive(Clone, Debug)]
pub struct SymplecticSubset {
    ring: Arc<GaloisRing>,
    c: usize,
    pairs: Vec<(SymplecticVector, SymplecticVector)>,
}

impl SymplecticSubset {
    /// Validates the pairs before accepting them.
    pub fn new(
        ring: Arc<GaloisRing>,
        c: usize,
        pairs: Vec<(SymplecticVector, SymplecticVector)>,
    ) -> Result<Self> {
        let s = SymplecticSubset { ring, c, pairs };
        s.verify()?;
        Ok(s)
    }

    pub fn c(&self) -> usize {
        self.c
    }

    /// Number of pairs `e`.
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pairs(&self) -> &[(SymplecticVector, SymplecticVector)] {
        &self.pairs
    }

    pub fn expanded_pairs(&self) -> Vec<(Vec<u64>, Vec<u64>)> {
        self.pairs
            .iter()
            .map(|(a, b)| (self.ring.phi_expand(&a.to_flat()), self.ring.phi_expand(&b.to_flat())))
            .collect()
    }

    /// `Tr(<a_{i1}|a_{i2}>_s)` per pair.
    pub fn exponents(&self) -> Vec<u64> {
        let md = self.ring.modulus();
        self.expanded_pairs()
            .iter()
            .map(|(a, b)| expanded_product(md, a, b))
            .collect()
    }

    pub fn verify(&self) -> Result<()> {
        let capacity = self.c * self.ring.m();
        if self.pairs.len() > capacity {
            return Err(Error::CapacityExceeded {
                requested: self.pairs.len(),
                capacity,
            });
        }
        if self.pairs.iter().any(|(a, b)| a.n() != self.c || b.n() != self.c) {
            return Err(Error::DimensionMismatch {
                expected: self.c,
                found: self.pairs.iter().map(|(a, _)| a.n()).find(|&k| k != self.c).unwrap_or(0),
            });
        }
        let md = self.ring.modulus();
        let e = self.expanded_pairs();
        for (i, (a1, a2)) in e.iter().enumerate() {
            if expanded_product(md, a1, a2) == 0 {
                return Err(Error::InternalInvariantViolation(format!(
                    "pair {i} has trivial character"
                )));
            }
            for (j, (b1, b2)) in e.iter().enumerate() {
                let cross = i != j && expanded_product(md, a1, b2) != 0;
                if expanded_product(md, a1, b1) != 0 || expanded_product(md, a2, b2) != 0 || cross {
                    return Err(Error::InternalInvariantViolation(format!(
                        "pairs {i} and {j} are not trace-orthogonal"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Pairs with `χ(<a_{j1}|a_{j2}>_s) = ζ^{z_j}`, packed `m` to a coordinate
/// pair using the θ basis and its dual.
pub fn construct_symplectic_subset(
    ring: &Arc<GaloisRing>,
    c: usize,
    targets: &[u64],
) -> Result<SymplecticSubset> {
    let m = ring.m();
    let md = ring.modulus();
    if targets.len() > c * m {
        return Err(Error::CapacityExceeded {
            requested: targets.len(),
            capacity: c * m,
        });
    }
    if let Some(index) = targets.iter().position(|&z| md.reduce(z) == 0) {
        return Err(Error::ZeroTarget { index });
    }
    let dual = ring.dual_basis();
    let mut pairs = Vec::with_capacity(targets.len());
    for (j, &z) in targets.iter().enumerate() {
        let (slot, l) = (j / m, j % m);
        let mut x = vec![ring.zero(); c];
        let mut y = vec![ring.zero(); c];
        x[slot] = ring.scale(z, &dual[l]);
        let mut a1 = SymplecticVector::new(x, vec![ring.zero(); c]);
        y[slot] = ring.theta_pow(l as u64);
        let a2 = SymplecticVector::new(vec![ring.zero(); c], y);
        let measured = expanded_product(
            md,
            &ring.phi_expand(&a1.to_flat()),
            &ring.phi_expand(&a2.to_flat()),
        );
        if measured != md.reduce(z) {
            if measured != md.neg(z) {
                return Err(Error::InternalInvariantViolation(format!(
                    "pair {j} measures {measured}, expected ±{z}"
                )));
            }
            a1.x[slot] = ring.neg(&a1.x[slot]);
        }
        pairs.push((a1, a2));
    }
    let s = SymplecticSubset::new(ring.clone(), c, pairs)?;
    if s.exponents().iter().zip(targets).any(|(&e, &z)| e != md.reduce(z)) {
        return Err(Error::InternalInvariantViolation(
            "constructed exponents differ from targets".into(),
        ));
    }
    Ok(s)
}

/// A χ-self-orthogonal code over `R^{2(n+c)}` that punctures to `base`.
#[derive(Clone, Debug)]
pub struct SelfOrthogonalExtension {
    base: AdditiveCode,
    extended: AdditiveCode,
    c: usize,
}

impl SelfOrthogonalExtension {
    pub fn base(&self) -> &AdditiveCode {
        &self.base
    }

    pub fn extended(&self) -> &AdditiveCode {
        &self.extended
    }

    pub fn c(&self) -> usize {
        self.c
    }

    pub fn card_extended(&self) -> BigUint {
        self.extended.cardinality()
    }

    /// `log_p |C_0|` where `|C'| = |C| |C_0|`.
    pub fn log_kernel(&self) -> u32 {
        self.extended.log_cardinality() - self.base.log_cardinality()
    }

    /// `|C'| = |C|`, i.e. no nonzero codeword is supported on the appended
    /// coordinates alone.
    ///
    /// Not implied by freeness of the base: when a pair has a non-unit γ, a
    /// multiple of a pair member lands in `C ∩ C^{⊥χ}` with a nonzero
    /// appendix, and its zero-appended copy from `S` differs from it by an
    /// element of `C_0`.
    pub fn preserves_cardinality(&self) -> bool {
        self.log_kernel() == 0
    }

    /// Checks self-orthogonality, puncturing, and the cardinality bounds.
    pub fn verify(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InternalInvariantViolation(m.into()));
        if !self.extended.is_chi_self_orthogonal() {
            return bad("extension is not χ-self-orthogonal");
        }
        if self.extended.puncture(self.base.n())? != self.base {
            return bad("puncturing the extension does not recover the code");
        }
        let lc = self.base.log_cardinality();
        let le = self.extended.log_cardinality();
        let b = self.base.ring().b() as usize;
        let slack: usize = rho_profile(&self.base)?
            .iter()
            .enumerate()
            .map(|(i, r)| (b - (i + 1)) * r)
            .sum();
        if le < lc || le as usize > lc as usize + slack {
            return bad("extension cardinality outside the ρ bounds");
        }
        Ok(())
    }
}

/// Appends `subset[i]` to pair `i` of the decomposition and zeros to every
/// isotropic generator.
fn assemble(
    d: &HyperbolicDecomposition,
    c: usize,
    subset: &[(Vec<u64>, Vec<u64>)],
) -> Result<SelfOrthogonalExtension> {
    let base = d.code();
    let ring = base.ring();
    let md = ring.modulus();
    let m = ring.m();
    let (bh, eh) = (base.n() * m, c * m);
    if subset.len() != d.c() {
        return Err(Error::MismatchedExtension(format!(
            "{} appended pairs for {} hyperbolic pairs",
            subset.len(),
            d.c()
        )));
    }
    let extend = |g: &[u64], a: Option<&[u64]>| -> Vec<u64> {
        let mut v = Vec::with_capacity(2 * (bh + eh));
        v.extend_from_slice(&g[..bh]);
        match a {
            Some(a) => v.extend(a[..eh].iter().map(|&x| md.neg(x))),
            None => v.extend(std::iter::repeat_n(0, eh)),
        }
        v.extend_from_slice(&g[bh..]);
        match a {
            Some(a) => v.extend_from_slice(&a[eh..]),
            None => v.extend(std::iter::repeat_n(0, eh)),
        }
        v
    };
    let mut rows: Vec<Vec<u64>> = d.isotropic().iter().map(|g| extend(g, None)).collect();
    for (p, (a1, a2)) in d.pairs().iter().zip(subset) {
        rows.push(extend(&p.first, Some(a1)));
        rows.push(extend(&p.second, Some(a2)));
    }
    let extended = AdditiveCode::from_expanded(ring.clone(), base.n() + c, &rows);
    let ext = SelfOrthogonalExtension {
        base: base.clone(),
        extended,
        c,
    };
    ext.verify()?;
    Ok(ext)
}

/// One appended coordinate pair per hyperbolic pair:
/// `a_{i1} = (-γ_i e_i, 0)`, `a_{i2} = (0, e_i)`.
pub fn build_extension(d: &HyperbolicDecomposition) -> Result<SelfOrthogonalExtension> {
    let ring = d.code().ring();
    let c = d.c();
    let subset: Vec<(Vec<u64>, Vec<u64>)> = d
        .pairs()
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let mut x1 = vec![ring.zero(); c];
            x1[i] = ring.neg(&p.gamma);
            let a1 = SymplecticVector::new(x1, vec![ring.zero(); c]);
            let mut y2 = vec![ring.zero(); c];
            y2[i] = ring.one();
            let a2 = SymplecticVector::new(vec![ring.zero(); c], y2);
            (ring.phi_expand(&a1.to_flat()), ring.phi_expand(&a2.to_flat()))
        })
        .collect();
    assemble(d, c, &subset)
}

/// `⌈r / 2m⌉` with `r = rank(C / (C ∩ C^{⊥χ}))`.
pub fn minimum_entanglement_degree(code: &AdditiveCode) -> Result<usize> {
    let r = code.quotient_rank(&code.intersect(&code.chi_dual())?)?;
    if r % 2 == 1 {
        return Err(Error::OddRank(r));
    }
    Ok(r.div_ceil(2 * code.ring().m()))
}

pub fn build_minimal_extension(code: &AdditiveCode) -> Result<SelfOrthogonalExtension> {
    build_minimal_extension_from(&hyperbolic_decompose(code)?)
}

/// Packs the decomposition's pairs `m` to a coordinate pair.
pub fn build_minimal_extension_from(d: &HyperbolicDecomposition) -> Result<SelfOrthogonalExtension> {
    let code = d.code();
    let c = minimum_entanglement_degree(code)?;
    let subset = construct_symplectic_subset(code.ring(), c, &d.exponents())?;
    assemble(d, c, &subset.expanded_pairs())
}

/// Reads the appended coordinates of lifted pair members:
/// `a_{i1} = (-v̂_i, ŵ_i)`, `a_{i2} = (-x̂_i, ŷ_i)`.
pub fn extract_symplectic_subset(
    ext: &SelfOrthogonalExtension,
    d: &HyperbolicDecomposition,
) -> Result<SymplecticSubset> {
    if ext.base() != d.code() {
        return Err(Error::MismatchedExtension(
            "extension base differs from the decomposed code".into(),
        ));
    }
    let ring = ext.base().ring();
    let md = ring.modulus();
    let m = ring.m();
    let (n, c) = (ext.base().n(), ext.c());
    let (bh, eh) = (n * m, c * m);
    let full = ext.extended().expanded();
    let punctured: Vec<Vec<u64>> = full
        .rows()
        .map(|r| {
            let mut v = r[..bh].to_vec();
            v.extend_from_slice(&r[bh + eh..2 * bh + eh]);
            v
        })
        .collect();
    let proj = ZpbMatrix::from_rows(md, 2 * bh, &punctured)?;
    let lift = |g: &[u64]| -> Result<Vec<u64>> {
        let x = linalg::solve_left(&proj, g).ok_or_else(|| {
            Error::MismatchedExtension("pair member has no lift into the extension".into())
        })?;
        let l = full.matrix().left_mul_vec(&x);
        let mut a: Vec<u64> = l[bh..bh + eh].iter().map(|&v| md.neg(v)).collect();
        a.extend_from_slice(&l[2 * bh + eh..]);
        Ok(a)
    };
    let mut pairs = Vec::with_capacity(d.c());
    for p in d.pairs() {
        let a1 = SymplecticVector::from_flat(ring.phi_contract(&lift(&p.first)?));
        let a2 = SymplecticVector::from_flat(ring.phi_contract(&lift(&p.second)?));
        pairs.push((a1, a2));
    }
    let s = SymplecticSubset::new(ring.clone(), c, pairs)
        .map_err(|e| Error::MismatchedExtension(e.to_string()))?;
    if s.exponents() != d.exponents() {
        return Err(Error::MismatchedExtension(
            "extracted exponents differ from the decomposition".into(),
        ));
    }
    Ok(s)
}

/// Conditions (a) and (b) for a quasi-symplectic subset of `Z_{p^a}^{2n}`.
///
/// Condition (a) also asks `<a_{i2}|a_{k2}> = 0`, as for symplectic subsets.
/// Without it `{(0,2),(1,0)}, {(2,0),(0,1)}` in `Z_4^2` would pass with
/// `e = 2 > n`, and the bound `e <= n` needs the two members of a pair to be
/// interchangeable.
pub fn verify_quasi_symplectic(md: Modulus, pairs: &[(Vec<u64>, Vec<u64>)], j: &[usize]) -> bool {
    for (i, (a1, a2)) in pairs.iter().enumerate() {
        for (k, (b1, b2)) in pairs.iter().enumerate() {
            if expanded_product(md, a1, b1) != 0 || expanded_product(md, a2, b2) != 0 {
                return false;
            }
            if i != k && expanded_product(md, a1, b2) != 0 {
                return false;
            }
        }
    }
    for (i, (a1, a2)) in pairs.iter().enumerate() {
        if !j.contains(&i) && expanded_product(md, a1, a2) == 0 {
            return false;
        }
    }
    if j.is_empty() {
        return true;
    }
    let Some(len) = pairs.first().map(|(a, _)| a.len()) else {
        return false;
    };
    let fp = Modulus::new(md.p(), 1).expect("prime");
    let reduced: Vec<Vec<u64>> = j.iter().map(|&i| pairs[i].0.iter().map(|&x| x % md.p()).collect()).collect();
    HowellBasis::from_gens(fp, len, &reduced).len() == j.len()
}

/// How the distance was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DistanceCase {
    /// `C^{⊥χ} ⊆ C`: `D = d_s(C^{⊥χ})`
    DualInCode,
    /// otherwise `D = d_s(C^{⊥χ} ∖ C)`
    DualMinusCode,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceOutcome {
    pub case: DistanceCase,
    /// `None` when the search exceeded its limit
    pub value: Option<Distance>,
    pub searched: BigUint,
}

pub fn eaqecc_distance(code: &AdditiveCode, limit: u64) -> Result<DistanceOutcome> {
    let dual = code.chi_dual();
    let case = if dual.is_subcode_of(code)? {
        DistanceCase::DualInCode
    } else {
        DistanceCase::DualMinusCode
    };
    let mode = match case {
        DistanceCase::DualInCode => DistanceMode::Dual,
        DistanceCase::DualMinusCode => DistanceMode::DualMinusCode,
    };
    let value = match code.min_symplectic_distance(mode, limit) {
        Ok(d) => Some(d),
        Err(e) if e.is_cap() => None,
        Err(e) => return Err(e),
    };
    Ok(DistanceOutcome {
        case,
        value,
        searched: dual.cardinality(),
    })
}

/// Parameters `((n, K, D; c))`; sizes are kept as exponents of `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EaqeccParams {
    pub p: u64,
    pub b: u32,
    pub m: usize,
    pub n: usize,
    pub c: usize,
    pub log_code: u32,
    pub log_extended: u32,
    pub rho: Vec<usize>,
    /// `K = p^{log_k_exact}`
    pub log_k_exact: u32,
    pub log_k_upper: i64,
    pub log_k_lower: i64,
    pub distance: DistanceOutcome,
}

impl EaqeccParams {
    pub fn k_exact(&self) -> BigUint {
        BigUint::from(self.p).pow(self.log_k_exact)
    }

    pub fn k_upper(&self) -> Rational {
        Rational::power(self.p, self.log_k_upper)
    }

    pub fn k_lower(&self) -> Rational {
        Rational::power(self.p, self.log_k_lower)
    }

    /// `K_lower` floored at 1.
    pub fn k_lower_reported(&self) -> Rational {
        Rational::power(self.p, self.log_k_lower.max(0))
    }
}

/// A power of a prime, possibly with negative exponent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rational {
    pub num: BigUint,
    pub den: BigUint,
}

impl Rational {
    pub fn power(p: u64, e: i64) -> Self {
        let pow = BigUint::from(p).pow(e.unsigned_abs() as u32);
        if e >= 0 {
            Rational { num: pow, den: 1u32.into() }
        } else {
            Rational { num: 1u32.into(), den: pow }
        }
    }
}

impl std::fmt::Display for Rational {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.den == BigUint::from(1u32) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// Everything the parameter pipeline computes.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub decomposition: HyperbolicDecomposition,
    pub extension: SelfOrthogonalExtension,
    pub params: EaqeccParams,
}

pub fn analyze(code: &AdditiveCode, limit: u64) -> Result<Analysis> {
    let decomposition = hyperbolic_decompose(code)?;
    let extension = build_minimal_extension_from(&decomposition)?;
    let ring = code.ring();
    let (p, b) = (ring.p(), ring.b());
    let c = extension.c();
    let n = code.n();
    let log_q = ring.log_size() as i64;
    let log_total = log_q * (n + c) as i64;
    let log_code = code.log_cardinality();
    let log_extended = extension.extended().log_cardinality();
    let rho = rho_profile(code)?;
    let slack: i64 = rho
        .iter()
        .enumerate()
        .map(|(i, &r)| (b as i64 - (i as i64 + 1)) * r as i64)
        .sum();
    let exact = log_total - log_extended as i64;
    if exact < 0 {
        return Err(Error::InternalInvariantViolation(
            "extension is larger than a self-orthogonal code can be".into(),
        ));
    }
    let upper = log_total - log_code as i64;
    let lower = upper - slack;
    if !(lower <= exact && exact <= upper) {
        return Err(Error::InternalInvariantViolation(format!(
            "K = p^{exact} outside [p^{lower}, p^{upper}]"
        )));
    }
    let distance = eaqecc_distance(code, limit)?;
    let params = EaqeccParams {
        p,
        b,
        m: ring.m(),
        n,
        c,
        log_code,
        log_extended,
        rho,
        log_k_exact: exact as u32,
        log_k_upper: upper,
        log_k_lower: lower,
        distance,
    };
    Ok(Analysis {
        decomposition,
        extension,
        params,
    })
}

pub fn eaqecc_params(code: &AdditiveCode, limit: u64) -> Result<EaqeccParams> {
    Ok(analyze(code, limit)?.params)
}
