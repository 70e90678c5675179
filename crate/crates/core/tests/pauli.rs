mod common;

use std::sync::Arc;

use common::*;
use eaqecc::code::{symplectic_product, SymplecticVector};
use eaqecc::extension::build_minimal_extension;
use eaqecc::galois::{GaloisRing, RingElement};
use eaqecc::pauli::{build_stabilizer, projector, undetectable_error_search, DenseMatrix, PauliSpace};
use num_complex::Complex64;
use rand::Rng;

/// `X(a)Z(b)` on one qudit built straight from ring arithmetic, basis
/// indexed by `element_at`.
fn oracle_matrix(r: &GaloisRing, a: &RingElement, b: &RingElement) -> Vec<Vec<Complex64>> {
    let q = r.size() as usize;
    let elems: Vec<RingElement> = r.elements().collect();
    let index = |e: &RingElement| elems.iter().position(|f| f == e).unwrap();
    let pb = r.modulus().value() as f64;
    let mut m = vec![vec![Complex64::new(0.0, 0.0); q]; q];
    for (col, x) in elems.iter().enumerate() {
        let row = index(&r.add(x, a));
        let tr = r.trace(&r.mul(b, x)) as f64;
        m[row][col] = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * tr / pb);
    }
    m
}

fn mul(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect())
        .collect()
}

fn close(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> bool {
    a.iter().flatten().zip(b.iter().flatten()).all(|(x, y)| (x - y).norm() < 1e-9)
}

fn pauli_rings() -> Vec<(&'static str, Arc<GaloisRing>)> {
    vec![
        ("F2", ring(2, 1, 1)),
        ("Z4", ring(2, 2, 1)),
        ("F4", ring(2, 1, 2)),
        ("GR(4,2)", ring(2, 2, 2)),
        ("Z9", ring(3, 2, 1)),
    ]
}

#[test]
fn commutation_matches_character_criterion() {
    let mut g = rng(31);
    for (name, r) in pauli_rings() {
        let space = PauliSpace::new(r.clone(), 1);
        let mut seen = [false; 2];
        for _ in 0..200 {
            let mut el = || r.element_at(g.gen_range(0..r.size()));
            let (a, b, a2, b2) = (el(), el(), el(), el());
            let u = SymplecticVector::new(vec![a.clone()], vec![b.clone()]);
            let v = SymplecticVector::new(vec![a2.clone()], vec![b2.clone()]);
            let criterion = r.trace(&symplectic_product(&r, &u, &v).unwrap()) == 0;

            let (ma, mb) = (oracle_matrix(&r, &a, &b), oracle_matrix(&r, &a2, &b2));
            let by_oracle = close(&mul(&ma, &mb), &mul(&mb, &ma));

            let p = space.operator(0, &[a], &[b]).unwrap();
            let q = space.operator(0, &[a2], &[b2]).unwrap();
            let (pm, qm) = (space.matrix(&p, 1024).unwrap(), space.matrix(&q, 1024).unwrap());
            let by_matrix = pm.mul(&qm).max_diff(&qm.mul(&pm)) < 1e-9;

            assert_eq!(by_oracle, criterion, "{name}");
            assert_eq!(by_matrix, criterion, "{name}");
            assert_eq!(space.commutes(&p, &q), criterion, "{name}");
            seen[criterion as usize] = true;
        }
        assert!(seen[0] && seen[1], "{name}: both outcomes should occur");
    }
}

#[test]
fn every_operator_is_unitary() {
    for (name, r) in pauli_rings() {
        let space = PauliSpace::new(r.clone(), 1);
        let elems: Vec<RingElement> = r.elements().collect();
        for a in &elems {
            for b in &elems {
                for phase in [0, 1] {
                    let p = space.operator(phase, std::slice::from_ref(a), std::slice::from_ref(b)).unwrap();
                    let m = space.matrix(&p, 1024).unwrap();
                    let id = DenseMatrix::identity(m.dim());
                    assert!(m.mul(&m.adjoint()).max_diff(&id) < 1e-12, "{name}");
                }
            }
        }
    }
}

#[test]
fn two_qudit_products_match_matrices() {
    let mut g = rng(32);
    for (name, r) in pauli_rings().into_iter().take(3) {
        let space = PauliSpace::new(r.clone(), 2);
        let half = 2 * r.m();
        let q = r.modulus().value();
        for _ in 0..20 {
            let sup = |g: &mut Rng8| (0..2 * half).map(|_| g.gen_range(0..q)).collect::<Vec<_>>();
            let (u, v) = (sup(&mut g), sup(&mut g));
            let p = space.from_support(g.gen_range(0..space.phase_order()), &u);
            let s = space.from_support(g.gen_range(0..space.phase_order()), &v);
            let lhs = space.matrix(&space.compose(&p, &s), 1024).unwrap();
            let rhs = space.matrix(&p, 1024).unwrap().mul(&space.matrix(&s, 1024).unwrap());
            assert!(lhs.max_diff(&rhs) < 1e-9, "{name}");
        }
    }
}

#[test]
fn projector_dimension_times_group_order_is_full_dimension() {
    let mut g = rng(33);
    let mut checked = 0;
    for (_, r) in pauli_rings() {
        for _ in 0..12 {
            let (c, _) = random_code_upto(&mut g, &r, 2);
            let ext = build_minimal_extension(&c).unwrap();
            let total = (r.size() as u128).pow((c.n() + ext.c()) as u32);
            if total > 256 {
                continue;
            }
            let a = build_stabilizer(&ext, 256).unwrap();
            let p = projector(&a, 256).unwrap();
            assert_eq!(p.dimension as u128 * a.len() as u128, total);
            assert!(p.idempotence_error < 1e-9);
            // every element of A fixes the code space
            let space = a.space();
            let dim = p.matrix.dim();
            let order = space.phase_order() as f64;
            for f in a.elements() {
                // (F P)[perm x, j] = ω^{phase x} P[x, j]
                let mono = space.monomial(f, 256).unwrap();
                for x in 0..dim {
                    let w = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * mono.phase[x] as f64 / order);
                    for j in 0..dim {
                        let d = w * p.matrix.get(x, j) - p.matrix.get(mono.perm[x], j);
                        assert!(d.norm() < 1e-9);
                    }
                }
            }
            let search = undetectable_error_search(&c, &ext, &a, 1 << 16, 256).unwrap();
            assert!(search.matches_theory());
            checked += 1;
        }
    }
    assert!(checked >= 20, "only {checked} instances fit the cap");
}
