//! Symplectic Gram–Schmidt: rewrite a generating set of `C` into isotropic
//! generators and hyperbolic pairs.
//!
//! All work happens on expanded vectors, where the character exponent of a
//! symplectic product is just the symplectic product over `Z_{p^b}`.

use crate::code::{expanded_product, AdditiveCode, SymplecticVector};
use crate::error::{Error, Result};
use crate::galois::RingElement;
use crate::linalg::{solve_congruence, HowellBasis};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HyperbolicPair {
    /// expanded `(v_i, w_i)`
    pub first: Vec<u64>,
    /// expanded `(x_i, y_i)`
    pub second: Vec<u64>,
    /// `γ_i = <(v_i,w_i)|(x_i,y_i)>_s` in the ring
    pub gamma: RingElement,
    /// `Tr(γ_i)`, so `χ(γ_i) = ζ^exponent`
    pub exponent: u64,
}

#[derive(Clone, Debug)]
pub struct HyperbolicDecomposition {
    code: AdditiveCode,
    /// expanded isotropic generators: those of a minimal generating set of
    /// `C ∩ C^{⊥χ}` that are not redundant next to the pairs, then leftovers
    isotropic: Vec<Vec<u64>>,
    pairs: Vec<HyperbolicPair>,
}

/// Greedily picks rows of `candidates` that stay independent modulo
/// `p·ambient + base`; over a local ring this is a minimal lift of a basis
/// of the quotient.
fn minimal_lift(ambient: &HowellBasis, base: &HowellBasis, candidates: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let md = ambient.modulus();
    let mut span = ambient
        .scale(md.p())
        .sum(base)
        .expect("same ambient space");
    let mut chosen = Vec::new();
    for c in candidates {
        if !span.contains(c) {
            span = span
                .sum(&HowellBasis::from_gens(md, ambient.cols(), std::slice::from_ref(c)))
                .expect("same ambient space");
            chosen.push(c.clone());
        }
    }
    chosen
}

/// Minimal generating set of a module.
pub fn minimal_generators(m: &HowellBasis) -> Vec<Vec<u64>> {
    minimal_lift(m, &HowellBasis::zero(m.modulus(), m.cols()), &m.row_vecs())
}

pub fn hyperbolic_decompose(code: &AdditiveCode) -> Result<HyperbolicDecomposition> {
    let md = code.modulus();
    let d = code.intersect(&code.chi_dual())?;
    let isotropic = minimal_generators(d.expanded());
    let mut t = minimal_lift(code.expanded(), d.expanded(), &code.expanded().row_vecs());

    let mut pairs = Vec::new();
    loop {
        let k = t.len();
        let mut best: Option<(usize, usize, u32)> = None;
        for i in 0..k {
            for j in i + 1..k {
                let l = expanded_product(md, &t[i], &t[j]);
                if l != 0 {
                    let v = md.valuation(l);
                    if best.is_none_or(|(_, _, bv)| v < bv) {
                        best = Some((i, j, v));
                    }
                }
            }
        }
        let Some((i, j, _)) = best else { break };
        let g2 = t.remove(j);
        let g1 = t.remove(i);
        let l12 = expanded_product(md, &g1, &g2);
        for g in t.iter_mut() {
            let l1 = expanded_product(md, &g1, g);
            let l2 = expanded_product(md, &g2, g);
            let solve = |rhs| {
                solve_congruence(l12, rhs, md).map_err(|_| {
                    Error::InternalInvariantViolation(format!(
                        "elimination congruence {l12}*u = {rhs} has no solution"
                    ))
                })
            };
            let u = solve(l2)?;
            let v = solve(md.neg(l1))?;
            for ((x, &a), &b) in g.iter_mut().zip(&g1).zip(&g2) {
                *x = md.add(*x, md.add(md.mul(u, a), md.mul(v, b)));
            }
        }
        let ring = code.ring();
        let gamma = crate::code::symplectic_product(ring, &code.contract(&g1), &code.contract(&g2))?;
        debug_assert_eq!(ring.trace(&gamma), l12);
        pairs.push(HyperbolicPair {
            first: g1,
            second: g2,
            gamma,
            exponent: l12,
        });
    }
    // whatever is left of T pairs trivially with everything, so it lies in
    // C ∩ C^{⊥χ} and is already spanned by S
    let decomp = HyperbolicDecomposition {
        code: code.clone(),
        isotropic,
        pairs,
    };
    decomp.verify()?;
    Ok(decomp)
}

impl HyperbolicDecomposition {
    pub fn code(&self) -> &AdditiveCode {
        &self.code
    }

    pub fn isotropic(&self) -> &[Vec<u64>] {
        &self.isotropic
    }

    pub fn pairs(&self) -> &[HyperbolicPair] {
        &self.pairs
    }

    /// Number of hyperbolic pairs.
    pub fn c(&self) -> usize {
        self.pairs.len()
    }

    pub fn isotropic_vectors(&self) -> Vec<SymplecticVector> {
        self.isotropic.iter().map(|e| self.code.contract(e)).collect()
    }

    pub fn pair_vectors(&self) -> Vec<(SymplecticVector, SymplecticVector)> {
        self.pairs
            .iter()
            .map(|p| (self.code.contract(&p.first), self.code.contract(&p.second)))
            .collect()
    }

    pub fn exponents(&self) -> Vec<u64> {
        self.pairs.iter().map(|p| p.exponent).collect()
    }

    /// Every generator, isotropic ones first.
    pub fn all_generators(&self) -> Vec<Vec<u64>> {
        let mut all = self.isotropic.clone();
        for p in &self.pairs {
            all.push(p.first.clone());
            all.push(p.second.clone());
        }
        all
    }

    /// Checks every structural property of the decomposition.
    pub fn verify(&self) -> Result<()> {
        let md = self.code.modulus();
        let bad = |msg: String| Err(Error::InternalInvariantViolation(msg));
        let all = self.all_generators();
        for (i, g) in self.isotropic.iter().enumerate() {
            if let Some(h) = all.iter().position(|h| expanded_product(md, g, h) != 0) {
                return bad(format!("isotropic generator {i} pairs with generator {h}"));
            }
        }
        let iso = self.isotropic.len();
        for (k, p) in self.pairs.iter().enumerate() {
            if p.exponent == 0 || expanded_product(md, &p.first, &p.second) != p.exponent {
                return bad(format!("pair {k} has a trivial or wrong exponent"));
            }
            if self.code.ring().trace(&p.gamma) != p.exponent {
                return bad(format!("pair {k}: trace of γ differs from its exponent"));
            }
            for (idx, h) in all.iter().enumerate() {
                if idx == iso + 2 * k || idx == iso + 2 * k + 1 {
                    continue;
                }
                if expanded_product(md, &p.first, h) != 0 || expanded_product(md, &p.second, h) != 0 {
                    return bad(format!("pair {k} pairs with generator {idx}"));
                }
            }
        }
        let span = HowellBasis::from_gens(md, self.code.expanded_len(), &all);
        if &span != self.code.expanded() {
            return bad("generators do not span the code".into());
        }
        let d = self.code.intersect(&self.code.chi_dual())?;
        let r = self.code.quotient_rank(&d)?;
        if r != 2 * self.c() {
            return bad(format!("{} pairs but rank(C/(C∩C^⊥χ)) = {r}", self.c()));
        }
        Ok(())
    }
}

/// `ρ_t` for `t = 1..b-1`.
pub fn rho_profile(code: &AdditiveCode) -> Result<Vec<usize>> {
    let b = code.ring().b();
    let ranks = level_ranks(code)?;
    Ok((1..b as usize).map(|t| ranks[t - 1] - ranks[t]).collect())
}

/// `rank(C / (C ∩ C^{⊥χ,t}))` for `t = 0..=b`.
pub fn level_ranks(code: &AdditiveCode) -> Result<Vec<usize>> {
    (0..=code.ring().b())
        .map(|t| code.quotient_rank(&code.intersect(&code.chi_dual_level(t))?))
        .collect()
}

/// Compares the number of pair members inside `C^{⊥χ,t}` with the rank
/// difference `rank(C/(C∩C^{⊥χ})) - rank(C/(C∩C^{⊥χ,t}))`.
pub fn verify_prop_count(d: &HyperbolicDecomposition, code: &AdditiveCode, t: u32) -> Result<bool> {
    let dual_t = code.chi_dual_level(t);
    let count = d
        .pairs
        .iter()
        .flat_map(|p| [&p.first, &p.second])
        .filter(|g| dual_t.contains_expanded(g))
        .count();
    let r0 = code.quotient_rank(&code.intersect(&code.chi_dual())?)?;
    let rt = code.quotient_rank(&code.intersect(&dual_t)?)?;
    Ok(r0.checked_sub(rt) == Some(count))
}

#[cfg(test)]
/// Span of a list of expanded vectors as a Howell basis over the code's space.
pub(crate) fn span_of(code: &AdditiveCode, rows: &[Vec<u64>]) -> HowellBasis {
    HowellBasis::from_gens(code.modulus(), code.expanded_len(), rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galois::GaloisRing;
    use std::sync::Arc;

    fn z4() -> Arc<GaloisRing> {
        Arc::new(GaloisRing::new(2, 2, 1).unwrap())
    }

    fn code(r: &Arc<GaloisRing>, n: usize, rows: &[Vec<u64>]) -> AdditiveCode {
        AdditiveCode::from_expanded(r.clone(), n, rows)
    }

    #[test]
    fn isotropic_generators_span_the_intersection() {
        let r = z4();
        let c = code(&r, 2, &[vec![3, 1, 2, 3], vec![3, 0, 0, 0]]);
        let d = hyperbolic_decompose(&c).unwrap();
        let inter = c.intersect(&c.chi_dual()).unwrap();
        assert_eq!(&span_of(&c, d.isotropic()), inter.expanded());
    }

    #[test]
    fn isotropic_only() {
        let r = z4();
        let c = code(&r, 1, &[vec![2, 0]]);
        let d = hyperbolic_decompose(&c).unwrap();
        assert_eq!(d.c(), 0);
        assert_eq!(d.isotropic(), &[vec![2, 0]]);
    }

    #[test]
    fn full_space_is_one_pair() {
        let r = z4();
        let c = AdditiveCode::full(r.clone(), 1);
        let d = hyperbolic_decompose(&c).unwrap();
        assert_eq!(d.c(), 1);
        assert!(d.isotropic().is_empty());
        assert_ne!(d.pairs()[0].exponent, 0);
    }

    #[test]
    fn worked_instance() {
        let r = z4();
        let c = code(&r, 1, &[vec![1, 0], vec![0, 2]]);
        let d = hyperbolic_decompose(&c).unwrap();
        assert_eq!(d.c(), 1);
        assert_eq!(d.pairs()[0].exponent, 2);
        assert_eq!(d.pairs()[0].gamma, r.scalar(2));
        assert_eq!(d.isotropic(), &[vec![2, 0]]);
        let all = span_of(&c, &d.all_generators());
        assert_eq!(&all, c.expanded());
    }

    #[test]
    fn rho_examples() {
        let f2 = Arc::new(GaloisRing::new(2, 1, 1).unwrap());
        assert!(rho_profile(&code(&f2, 1, &[vec![1, 1]])).unwrap().is_empty());
        let r = z4();
        assert_eq!(rho_profile(&code(&r, 1, &[vec![1, 0], vec![0, 2]])).unwrap(), vec![2]);
        assert_eq!(rho_profile(&AdditiveCode::full(r, 1)).unwrap(), vec![0]);
    }

    #[test]
    fn prop_count_examples() {
        let r = z4();
        let c = code(&r, 1, &[vec![1, 0], vec![0, 2]]);
        let d = hyperbolic_decompose(&c).unwrap();
        for t in 0..=2 {
            assert!(verify_prop_count(&d, &c, t).unwrap(), "t = {t}");
        }
        let members_in_level1 = d
            .pairs()
            .iter()
            .flat_map(|p| [&p.first, &p.second])
            .filter(|g| c.chi_dual_level(1).contains_expanded(g))
            .count();
        assert_eq!(members_in_level1, 2);
    }

    #[test]
    fn minimal_generators_drop_redundancy() {
        let md = r_md();
        let m = HowellBasis::from_gens(md, 2, &[vec![2, 1]]);
        // Howell form has two rows, but one generator suffices
        assert_eq!(m.len(), 2);
        assert_eq!(minimal_generators(&m).len(), 1);
    }

    fn r_md() -> crate::linalg::Modulus {
        crate::linalg::Modulus::new(2, 2).unwrap()
    }
}
