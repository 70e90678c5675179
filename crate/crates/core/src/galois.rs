//! Galois rings `GR(p^b, m) = Z_{p^b}[x]/(h)`.
//!
//! `h` is the lift of the smallest primitive polynomial over `F_p` that
//! divides `x^{p^m-1} - 1`, so the class `θ` of `x` is itself a Teichmüller
//! element of order `p^m - 1`. Elements are stored as `m` coordinates in the
//! basis `1, θ, …, θ^{m-1}`.

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{is_prime, Modulus, MAX_MODULUS};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RingElement(Vec<u64>);

impl RingElement {
    pub fn coeffs(&self) -> &[u64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// The value of a scalar element, `None` if a higher coordinate is set.
    pub fn as_scalar(&self) -> Option<u64> {
        if self.0[1..].iter().all(|&c| c == 0) {
            Some(self.0[0])
        } else {
            None
        }
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u64::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

/// Arithmetic in `Z_{p^b}[x]/(h)` for a monic `h` of degree `m`.
#[derive(Clone, Debug, PartialEq, Eq)]
struct PolyRing {
    md: Modulus,
    /// low-to-high, length `m + 1`, leading coefficient 1
    h: Vec<u64>,
}

impl PolyRing {
    fn m(&self) -> usize {
        self.h.len() - 1
    }

    fn one(&self) -> Vec<u64> {
        let mut v = vec![0; self.m()];
        v[0] = 1 % self.md.value();
        v
    }

    fn x(&self) -> Vec<u64> {
        let mut v = vec![0; self.m()];
        if self.m() == 1 {
            v[0] = self.md.neg(self.h[0]);
        } else {
            v[1] = 1;
        }
        v
    }

    fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let md = self.md;
        let q = md.value();
        let m = self.m();
        let mut prod = vec![0u64; 2 * m - 1];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + ai * bj) % q;
            }
        }
        for d in (m..prod.len()).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            // x^d = -sum h_k x^{d-m+k}
            for k in 0..m {
                let idx = d - m + k;
                prod[idx] = (prod[idx] + (q - self.h[k]) * c) % q;
            }
            prod[d] = 0;
        }
        prod.truncate(m);
        prod
    }

    fn pow(&self, a: &[u64], mut e: u64) -> Vec<u64> {
        let mut acc = self.one();
        let mut base = a.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Whether the class of `x` has multiplicative order exactly `order`.
fn x_has_order(ring: &PolyRing, order: u64, factors: &[u64]) -> bool {
    let x = ring.x();
    let one = ring.one();
    ring.pow(&x, order) == one && factors.iter().all(|&r| ring.pow(&x, order / r) != one)
}

fn smallest_primitive(p: u64, m: usize) -> Vec<u64> {
    let fp = Modulus::new(p, 1).expect("p is prime");
    let order = p.pow(m as u32) - 1;
    let factors = prime_factors(order);
    for idx in 0..p.pow(m as u32) {
        let mut h = Vec::with_capacity(m + 1);
        let mut rest = idx;
        for _ in 0..m {
            h.push(rest % p);
            rest /= p;
        }
        h.push(1);
        if h[0] == 0 {
            continue;
        }
        let ring = PolyRing { md: fp, h };
        if x_has_order(&ring, order, &factors) {
            return ring.h;
        }
    }
    unreachable!("primitive polynomials exist in every degree")
}

/// `GR(p^b, m)` with its trace data.
#[derive(Clone, Debug)]
pub struct GaloisRing {
    poly: PolyRing,
    m: usize,
    /// `p^m - 1`
    unit_order: u64,
    /// `Tr(θ^k)` for `k < m`.
    trace_basis: Vec<u64>,
    /// `Tr(θ^{i+j})`, row-major `m×m`.
    trace_form: Vec<u64>,
    /// inverse of the trace form; column `j` holds the coordinates of `γ_j`
    trace_form_inv: Vec<u64>,
}

impl PartialEq for GaloisRing {
    fn eq(&self, other: &Self) -> bool {
        self.poly == other.poly
    }
}

impl Eq for GaloisRing {}

impl GaloisRing {
    pub fn new(p: u64, b: u32, m: usize) -> Result<Self> {
        check_params(p, b, m)?;
        let h0 = smallest_primitive(p, m);
        let md = Modulus::new(p, b)?;
        let base = PolyRing { md, h: h0 };
        let pm = p.pow(m as u32);
        // Teichmüller lift of x
        let mut beta = base.x();
        loop {
            let next = base.pow(&beta, pm);
            if next == beta {
                break;
            }
            beta = next;
        }
        // h(y) = prod_k (y - beta^{p^k}), coefficients in R0
        let mut hy: Vec<Vec<u64>> = vec![base.one()];
        let mut root = beta.clone();
        for _ in 0..m {
            let neg_root: Vec<u64> = root.iter().map(|&c| md.neg(c)).collect();
            let mut next = vec![vec![0u64; m]; hy.len() + 1];
            for (i, c) in hy.iter().enumerate() {
                for (t, &v) in c.iter().enumerate() {
                    next[i + 1][t] = md.add(next[i + 1][t], v);
                }
                let prod = base.mul(c, &neg_root);
                for (t, &v) in prod.iter().enumerate() {
                    next[i][t] = md.add(next[i][t], v);
                }
            }
            hy = next;
            root = base.pow(&root, p);
        }
        let mut h = Vec::with_capacity(m + 1);
        for c in &hy {
            if c[1..].iter().any(|&v| v != 0) {
                return Err(Error::InternalInvariantViolation(
                    "lifted minimal polynomial has non-scalar coefficients".into(),
                ));
            }
            h.push(c[0]);
        }
        Self::build(md, m, h)
    }

    /// A ring over a caller-supplied `h` (low-to-high, monic).
    pub fn with_h(p: u64, b: u32, m: usize, h: &[u64]) -> Result<Self> {
        check_params(p, b, m)?;
        let md = Modulus::new(p, b)?;
        if h.len() != m + 1 {
            return Err(Error::HPolyInvalid(format!(
                "expected {} coefficients, found {}",
                m + 1,
                h.len()
            )));
        }
        if h[m] != 1 {
            return Err(Error::HPolyInvalid("polynomial is not monic".into()));
        }
        if let Some(&c) = h.iter().find(|&&c| c >= md.value()) {
            return Err(Error::HPolyInvalid(format!(
                "coefficient {c} is not reduced modulo {}",
                md.value()
            )));
        }
        let fp = Modulus::new(p, 1)?;
        let reduced = PolyRing {
            md: fp,
            h: h.iter().map(|&c| c % p).collect(),
        };
        let order = p.pow(m as u32) - 1;
        if !x_has_order(&reduced, order, &prime_factors(order)) {
            return Err(Error::HPolyInvalid("not primitive modulo p".into()));
        }
        Self::build(md, m, h.to_vec())
    }

    fn build(md: Modulus, m: usize, h: Vec<u64>) -> Result<Self> {
        let poly = PolyRing { md, h };
        let unit_order = md.p().pow(m as u32) - 1;
        if poly.pow(&poly.x(), unit_order) != poly.one() {
            return Err(Error::HPolyInvalid(format!(
                "does not divide x^{unit_order} - 1"
            )));
        }
        let mut ring = GaloisRing {
            poly,
            m,
            unit_order,
            trace_basis: Vec::new(),
            trace_form: Vec::new(),
            trace_form_inv: Vec::new(),
        };
        if !x_has_order(&ring.poly, unit_order, &prime_factors(unit_order)) {
            return Err(Error::HPolyInvalid("θ is not a primitive root".into()));
        }
        ring.trace_basis = (0..m)
            .map(|k| ring.trace_via_frobenius(&ring.theta_pow(k as u64)))
            .collect();
        let mut form = vec![0u64; m * m];
        for i in 0..m {
            for j in 0..m {
                form[i * m + j] = ring.trace(&ring.theta_pow((i + j) as u64));
            }
        }
        ring.trace_form_inv = invert(md, m, &form).ok_or(Error::SingularTraceForm)?;
        ring.trace_form = form;
        Ok(ring)
    }

    pub fn modulus(&self) -> Modulus {
        self.poly.md
    }

    pub fn p(&self) -> u64 {
        self.poly.md.p()
    }

    pub fn b(&self) -> u32 {
        self.poly.md.b()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Defining polynomial, low-to-high with the leading 1.
    pub fn h(&self) -> &[u64] {
        &self.poly.h
    }

    /// `log_p |R| = b m`.
    pub fn log_size(&self) -> u32 {
        self.b() * self.m as u32
    }

    /// `|R|`, which always fits since `p^{bm} <= 2^31`.
    pub fn size(&self) -> u64 {
        self.p().pow(self.log_size())
    }

    pub fn element(&self, coeffs: &[u64]) -> Result<RingElement> {
        if coeffs.len() != self.m {
            return Err(Error::DimensionMismatch {
                expected: self.m,
                found: coeffs.len(),
            });
        }
        if let Some(&v) = coeffs.iter().find(|&&v| v >= self.modulus().value()) {
            return Err(Error::EntryOutOfRange {
                value: v,
                modulus: self.modulus().value(),
            });
        }
        Ok(RingElement(coeffs.to_vec()))
    }

    fn elem_reduced(&self, coeffs: Vec<u64>) -> RingElement {
        debug_assert_eq!(coeffs.len(), self.m);
        RingElement(coeffs)
    }

    pub fn zero(&self) -> RingElement {
        RingElement(vec![0; self.m])
    }

    pub fn one(&self) -> RingElement {
        RingElement(self.poly.one())
    }

    pub fn scalar(&self, k: u64) -> RingElement {
        let mut v = vec![0; self.m];
        v[0] = self.modulus().reduce(k);
        RingElement(v)
    }

    pub fn theta(&self) -> RingElement {
        RingElement(self.poly.x())
    }

    pub fn theta_pow(&self, k: u64) -> RingElement {
        RingElement(self.poly.pow(&self.poly.x(), k % self.unit_order))
    }

    /// The element with base-`p^b` digits of `index` as coordinates.
    pub fn element_at(&self, mut index: u64) -> RingElement {
        let q = self.modulus().value();
        let mut v = Vec::with_capacity(self.m);
        for _ in 0..self.m {
            v.push(index % q);
            index /= q;
        }
        RingElement(v)
    }

    pub fn elements(&self) -> impl Iterator<Item = RingElement> + '_ {
        (0..self.size()).map(move |i| self.element_at(i))
    }

    pub fn add(&self, a: &RingElement, b: &RingElement) -> RingElement {
        let md = self.modulus();
        self.elem_reduced(a.0.iter().zip(&b.0).map(|(&x, &y)| md.add(x, y)).collect())
    }

    pub fn sub(&self, a: &RingElement, b: &RingElement) -> RingElement {
        let md = self.modulus();
        self.elem_reduced(a.0.iter().zip(&b.0).map(|(&x, &y)| md.sub(x, y)).collect())
    }

    pub fn neg(&self, a: &RingElement) -> RingElement {
        let md = self.modulus();
        self.elem_reduced(a.0.iter().map(|&x| md.neg(x)).collect())
    }

    pub fn mul(&self, a: &RingElement, b: &RingElement) -> RingElement {
        RingElement(self.poly.mul(&a.0, &b.0))
    }

    pub fn scale(&self, k: u64, a: &RingElement) -> RingElement {
        let md = self.modulus();
        self.elem_reduced(a.0.iter().map(|&x| md.mul(k, x)).collect())
    }

    pub fn pow(&self, a: &RingElement, e: u64) -> RingElement {
        RingElement(self.poly.pow(&a.0, e))
    }

    /// The Teichmüller representative congruent to `z` modulo `p`.
    pub fn teichmuller_lift(&self, z: &RingElement) -> RingElement {
        let p = self.p();
        let pm = p.pow(self.m as u32);
        let mut cur: Vec<u64> = z.0.iter().map(|&c| c % p).collect();
        loop {
            let next = self.poly.pow(&cur, pm);
            if next == cur {
                return RingElement(cur);
            }
            cur = next;
        }
    }

    pub fn is_teichmuller(&self, z: &RingElement) -> bool {
        self.pow(z, self.p().pow(self.m as u32)) == *z
    }

    /// `z = z_0 + z_1 p + … + z_{b-1} p^{b-1}` with every `z_i` in `T`.
    pub fn teichmuller_decompose(&self, z: &RingElement) -> Vec<RingElement> {
        let p = self.p();
        let mut digits = Vec::with_capacity(self.b() as usize);
        let mut w = z.clone();
        for _ in 0..self.b() {
            let d = self.teichmuller_lift(&w);
            let diff = self.sub(&w, &d);
            debug_assert!(diff.0.iter().all(|&c| c % p == 0));
            w = RingElement(diff.0.iter().map(|&c| c / p).collect());
            digits.push(d);
        }
        debug_assert_eq!(&self.recompose(&digits), z);
        digits
    }

    pub fn recompose(&self, digits: &[RingElement]) -> RingElement {
        let mut acc = self.zero();
        let mut pk = 1u64;
        for d in digits {
            acc = self.add(&acc, &self.scale(pk, d));
            pk = pk.saturating_mul(self.p()) % self.modulus().value().max(1);
        }
        acc
    }

    /// The generalized Frobenius, digitwise `p`-th power.
    pub fn frobenius(&self, z: &RingElement) -> RingElement {
        let p = self.p();
        let digits: Vec<RingElement> = self
            .teichmuller_decompose(z)
            .iter()
            .map(|d| self.pow(d, p))
            .collect();
        self.recompose(&digits)
    }

    /// `z + f(z) + … + f^{m-1}(z)` by repeated Frobenius.
    pub fn trace_via_frobenius(&self, z: &RingElement) -> u64 {
        let mut acc = z.clone();
        let mut cur = z.clone();
        for _ in 1..self.m {
            cur = self.frobenius(&cur);
            acc = self.add(&acc, &cur);
        }
        acc.as_scalar()
            .expect("generalized trace landed outside Z_{p^b}")
    }

    /// The generalized trace, using linearity over the θ basis.
    pub fn trace(&self, z: &RingElement) -> u64 {
        let md = self.modulus();
        z.0
            .iter()
            .zip(&self.trace_basis)
            .fold(0, |acc, (&c, &t)| md.add(acc, md.mul(c, t)))
    }

    /// Exponent `k` with `χ(z) = ζ^k`, `ζ = exp(2πi/p^b)`.
    pub fn char_exponent(&self, z: &RingElement) -> u64 {
        self.trace(z)
    }

    /// Whether `χ(z)` lies in `H_t = <ζ^{p^{b-t}}>`.
    pub fn char_in_level(&self, z: &RingElement, t: u32) -> bool {
        let md = self.modulus();
        let t = t.min(md.b());
        self.trace(z).is_multiple_of(md.pow_p(md.b() - t))
    }

    /// `γ_0, …, γ_{m-1}` with `Tr(θ^i γ_j) = δ_ij`.
    pub fn dual_basis(&self) -> Vec<RingElement> {
        let m = self.m;
        (0..m)
            .map(|j| RingElement((0..m).map(|k| self.trace_form_inv[k * m + j]).collect()))
            .collect()
    }

    /// Coordinates `(Tr(z θ^k))_k`, i.e. `z` written in the dual basis.
    pub fn dual_coords(&self, z: &RingElement) -> Vec<u64> {
        let md = self.modulus();
        let m = self.m;
        (0..m)
            .map(|k| {
                (0..m).fold(0, |acc, j| md.add(acc, md.mul(z.0[j], self.trace_form[j * m + k])))
            })
            .collect()
    }

    /// Inverse of [`dual_coords`](Self::dual_coords): `sum c_k γ_k`.
    pub fn from_dual_coords(&self, c: &[u64]) -> RingElement {
        let md = self.modulus();
        let m = self.m;
        RingElement(
            (0..m)
                .map(|j| {
                    (0..m).fold(0, |acc, k| {
                        md.add(acc, md.mul(c[k], self.trace_form_inv[j * m + k]))
                    })
                })
                .collect(),
        )
    }

    /// Expands `(x | y) ∈ R^{2n}` to `Z_{p^b}^{2nm}`: the `x` half in θ
    /// coordinates, the `y` half in dual-basis coordinates. The trace of the
    /// symplectic product becomes the plain symplectic product.
    pub fn phi_expand(&self, v: &[RingElement]) -> Vec<u64> {
        assert!(v.len().is_multiple_of(2), "symplectic vectors have even length");
        let n = v.len() / 2;
        let mut out = Vec::with_capacity(v.len() * self.m);
        for x in &v[..n] {
            out.extend_from_slice(&x.0);
        }
        for y in &v[n..] {
            out.extend(self.dual_coords(y));
        }
        out
    }

    pub fn phi_contract(&self, e: &[u64]) -> Vec<RingElement> {
        let m = self.m;
        assert!(e.len().is_multiple_of(2 * m), "expanded length must be a multiple of 2m");
        let n = e.len() / (2 * m);
        let mut out = Vec::with_capacity(2 * n);
        for i in 0..n {
            out.push(RingElement(e[i * m..(i + 1) * m].to_vec()));
        }
        for i in n..2 * n {
            out.push(self.from_dual_coords(&e[i * m..(i + 1) * m]));
        }
        out
    }

    pub fn describe(&self) -> String {
        format!("GR({}^{},{})", self.p(), self.b(), self.m)
    }
}

fn check_params(p: u64, b: u32, m: usize) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let too_large = Error::ParameterTooLarge { p, b, m };
    if b == 0 || m == 0 || m > 64 {
        return Err(too_large);
    }
    let mut size = 1u64;
    for _ in 0..(b as u64 * m as u64) {
        size = size.saturating_mul(p);
        if size > MAX_MODULUS {
            return Err(too_large);
        }
    }
    Ok(())
}

/// Gauss–Jordan inverse over `Z/p^b`; `None` unless the matrix is invertible.
fn invert(md: Modulus, n: usize, a: &[u64]) -> Option<Vec<u64>> {
    let mut a = a.to_vec();
    let mut inv = vec![0u64; n * n];
    for i in 0..n {
        inv[i * n + i] = 1 % md.value();
    }
    for col in 0..n {
        let piv = (col..n).find(|&r| md.is_unit(a[r * n + col]))?;
        if piv != col {
            for j in 0..n {
                a.swap(piv * n + j, col * n + j);
                inv.swap(piv * n + j, col * n + j);
            }
        }
        let u = md.inv(a[col * n + col])?;
        for j in 0..n {
            a[col * n + j] = md.mul(a[col * n + j], u);
            inv[col * n + j] = md.mul(inv[col * n + j], u);
        }
        for r in 0..n {
            if r == col {
                continue;
            }
            let f = a[r * n + col];
            if f == 0 {
                continue;
            }
            for j in 0..n {
                a[r * n + j] = md.sub(a[r * n + j], md.mul(f, a[col * n + j]));
                inv[r * n + j] = md.sub(inv[r * n + j], md.mul(f, inv[col * n + j]));
            }
        }
    }
    Some(inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gr(p: u64, b: u32, m: usize) -> GaloisRing {
        GaloisRing::new(p, b, m).unwrap()
    }

    fn el(r: &GaloisRing, c: &[u64]) -> RingElement {
        r.element(c).unwrap()
    }

    /// `Tr(sum a_i b'_i - sum b_i a'_i)` computed in the ring.
    fn ring_pairing(r: &GaloisRing, u: &[RingElement], v: &[RingElement]) -> u64 {
        let n = u.len() / 2;
        let mut acc = r.zero();
        for i in 0..n {
            acc = r.add(&acc, &r.mul(&u[n + i], &v[i]));
            acc = r.sub(&acc, &r.mul(&v[n + i], &u[i]));
        }
        r.trace(&acc)
    }

    fn expanded_pairing(md: Modulus, u: &[u64], v: &[u64]) -> u64 {
        let h = u.len() / 2;
        let mut acc = 0;
        for i in 0..h {
            acc = md.add(acc, md.mul(u[h + i], v[i]));
            acc = md.sub(acc, md.mul(v[h + i], u[i]));
        }
        acc
    }

    #[test]
    fn construction_examples() {
        let z4 = gr(2, 2, 1);
        assert_eq!(z4.m(), 1);
        // x - 3 is the lift of x + 1 dividing x - 1
        assert_eq!(z4.h(), &[3, 1]);
        assert_eq!(z4.theta(), z4.one());
        let r = gr(2, 2, 2);
        assert_eq!(r.h(), &[1, 1, 1]);
        let f4 = gr(2, 1, 2);
        assert_eq!(f4.size(), 4);
        assert_eq!(gr(3, 2, 1).h(), &[1, 1]);
        assert!(matches!(
            GaloisRing::new(2, 16, 2),
            Err(Error::ParameterTooLarge { .. })
        ));
        assert!(matches!(GaloisRing::new(4, 1, 1), Err(Error::NotPrime(4))));
    }

    #[test]
    fn lifted_polynomial_divides_cyclotomic_binomial() {
        // (x - 1)(x^2 + x + 1) = x^3 - 1 over Z_4, checked by multiplying out
        let md = Modulus::new(2, 2).unwrap();
        let f = [md.neg(1), 1];
        let g = [1u64, 1, 1];
        let mut prod = [0u64; 4];
        for (i, &a) in f.iter().enumerate() {
            for (j, &b) in g.iter().enumerate() {
                prod[i + j] = md.add(prod[i + j], md.mul(a, b));
            }
        }
        assert_eq!(prod, [md.neg(1), 0, 0, 1]);
        for (p, b, m) in [(2, 3, 3), (3, 2, 2), (5, 1, 3), (2, 1, 5), (3, 3, 1)] {
            let r = gr(p, b, m);
            assert_eq!(r.theta_pow(r.p().pow(m as u32) - 1), r.one());
            assert!(r.is_teichmuller(&r.theta()));
        }
    }

    #[test]
    fn supplied_h_is_validated() {
        assert!(GaloisRing::with_h(2, 2, 2, &[1, 1, 1]).is_ok());
        assert!(matches!(
            GaloisRing::with_h(2, 2, 2, &[3, 1, 1]),
            Err(Error::HPolyInvalid(_))
        ));
        // reduces to x^2 + x + 1 but does not divide x^3 - 1 over Z_4
        assert!(matches!(
            GaloisRing::with_h(2, 2, 2, &[3, 3, 1]),
            Err(Error::HPolyInvalid(_))
        ));
        assert!(matches!(
            GaloisRing::with_h(2, 2, 1, &[1, 1]),
            Err(Error::HPolyInvalid(_))
        ));
        assert!(GaloisRing::with_h(2, 2, 1, &[3, 1]).is_ok());
    }

    #[test]
    fn multiplication_examples() {
        let r = gr(2, 2, 2);
        let t = r.theta();
        assert_eq!(r.mul(&t, &t), el(&r, &[3, 3]));
        let a = el(&r, &[2, 3]);
        assert_eq!(r.mul(&a, &r.one()), a);
        assert_eq!(r.mul(&a, &r.zero()), r.zero());
    }

    #[test]
    fn teichmuller_examples() {
        let r = gr(2, 2, 2);
        assert_eq!(r.teichmuller_decompose(&r.zero()), vec![r.zero(), r.zero()]);
        assert_eq!(r.teichmuller_decompose(&r.scalar(2)), vec![r.zero(), r.one()]);
        assert_eq!(r.teichmuller_decompose(&r.theta()), vec![r.theta(), r.zero()]);
        // |T| = p^m and T = {0, θ^k}
        let t: std::collections::BTreeSet<_> = r.elements().filter(|z| r.is_teichmuller(z)).collect();
        let mut expect: std::collections::BTreeSet<_> = (0..3).map(|k| r.theta_pow(k)).collect();
        expect.insert(r.zero());
        assert_eq!(t, expect);
    }

    #[test]
    fn frobenius_examples() {
        let r = gr(2, 2, 2);
        assert_eq!(r.frobenius(&r.one()), r.one());
        assert_eq!(r.frobenius(&r.theta()), el(&r, &[3, 3]));
        for z in r.elements() {
            assert_eq!(r.frobenius(&r.frobenius(&z)), z);
        }
    }

    #[test]
    fn trace_examples() {
        let r = gr(2, 2, 2);
        assert_eq!(r.trace(&r.one()), 2);
        assert_eq!(r.trace(&r.theta()), 3);
        assert_eq!(r.trace(&r.mul(&r.theta(), &r.theta())), 3);
        assert_eq!(r.trace(&r.zero()), 0);
        let z4 = gr(2, 2, 1);
        assert_eq!(z4.char_exponent(&z4.scalar(3)), 3);
        assert_eq!(r.char_exponent(&r.theta()), 3);
        for z in r.elements() {
            assert_eq!(r.trace(&z), r.trace_via_frobenius(&z));
        }
    }

    #[test]
    fn dual_basis_examples() {
        let z4 = gr(2, 2, 1);
        assert_eq!(z4.dual_basis(), vec![z4.one()]);
        let r = gr(2, 2, 2);
        let d = r.dual_basis();
        assert_eq!(d, vec![el(&r, &[3, 1]), el(&r, &[1, 2])]);
        for (i, q) in [(2, 2, 2), (3, 2, 2), (2, 3, 3), (2, 1, 4)].into_iter().enumerate() {
            let r = gr(q.0, q.1, q.2);
            let d = r.dual_basis();
            for a in 0..r.m() {
                for bb in 0..r.m() {
                    let t = r.trace(&r.mul(&r.theta_pow(a as u64), &d[bb]));
                    assert_eq!(t, u64::from(a == bb), "ring #{i}");
                }
            }
        }
    }

    #[test]
    fn character_levels() {
        let z8 = gr(2, 3, 1);
        assert!(z8.char_in_level(&z8.scalar(4), 1));
        assert!(!z8.char_in_level(&z8.scalar(2), 1));
        assert!(z8.char_in_level(&z8.scalar(2), 2));
        assert!(z8.char_in_level(&z8.scalar(1), 3));
    }

    #[test]
    fn phi_examples() {
        let z4 = gr(2, 2, 1);
        let v = vec![z4.scalar(3), z4.scalar(2)];
        assert_eq!(z4.phi_expand(&v), vec![3, 2]);
        let r = gr(2, 2, 2);
        let zero = vec![r.zero(), r.zero()];
        assert_eq!(r.phi_expand(&zero), vec![0; 4]);
        assert_eq!(r.phi_contract(&r.phi_expand(&v_of(&r, 7, 200))), v_of(&r, 7, 200));
    }

    fn v_of(r: &GaloisRing, a: u64, b: u64) -> Vec<RingElement> {
        vec![r.element_at(a % r.size()), r.element_at(b % r.size())]
    }

    #[test]
    fn phi_preserves_pairing_exhaustively() {
        for r in [gr(2, 2, 2), gr(2, 1, 2), gr(3, 1, 2)] {
            let md = r.modulus();
            let vecs: Vec<_> = (0..r.size())
                .flat_map(|a| (0..r.size()).map(move |b| (a, b)))
                .map(|(a, b)| v_of(&r, a, b))
                .collect();
            for u in &vecs {
                let eu = r.phi_expand(u);
                for v in &vecs {
                    let ev = r.phi_expand(v);
                    assert_eq!(ring_pairing(&r, u, v), expanded_pairing(md, &eu, &ev));
                }
            }
        }
    }

    #[test]
    fn frobenius_is_ring_automorphism() {
        for r in [gr(2, 2, 2), gr(3, 2, 2)] {
            let f: Vec<RingElement> = r.elements().map(|z| r.frobenius(&z)).collect();
            let idx = |z: &RingElement| -> usize {
                let q = r.modulus().value();
                z.coeffs().iter().rev().fold(0u64, |acc, &c| acc * q + c) as usize
            };
            for u in r.elements() {
                for v in r.elements() {
                    assert_eq!(f[idx(&r.mul(&u, &v))], r.mul(&f[idx(&u)], &f[idx(&v)]));
                    assert_eq!(f[idx(&r.add(&u, &v))], r.add(&f[idx(&u)], &f[idx(&v)]));
                }
            }
            for k in 0..r.modulus().value() {
                assert_eq!(r.frobenius(&r.scalar(k)), r.scalar(k));
            }
        }
    }

    #[test]
    fn trace_is_linear_and_surjective() {
        for r in [gr(2, 2, 2), gr(3, 2, 2), gr(2, 3, 2), gr(2, 1, 3)] {
            let q = r.modulus().value();
            let mut image = vec![false; q as usize];
            for u in r.elements() {
                let tu = r.trace(&u);
                image[tu as usize] = true;
                for e in 0..q {
                    assert_eq!(r.trace(&r.scale(e, &u)), r.modulus().mul(e, tu));
                }
            }
            assert!(image.iter().all(|&x| x));
        }
    }

    #[test]
    fn character_is_nondegenerate() {
        let r = gr(2, 2, 2);
        for u in r.elements().filter(|u| !u.is_zero()) {
            assert!(r.elements().any(|s| r.trace(&r.mul(&u, &s)) != 0));
        }
    }

    proptest! {
        #[test]
        fn trace_additive(a in 0u64..81, b in 0u64..81) {
            let r = gr(3, 2, 2);
            let (u, v) = (r.element_at(a), r.element_at(b));
            prop_assert_eq!(
                r.trace(&r.add(&u, &v)),
                r.modulus().add(r.trace(&u), r.trace(&v))
            );
        }

        #[test]
        fn phi_round_trip(seed in proptest::collection::vec(0u64..512, 4)) {
            let r = gr(2, 3, 3);
            let v: Vec<_> = seed.iter().map(|&s| r.element_at(s)).collect();
            prop_assert_eq!(r.phi_contract(&r.phi_expand(&v)), v);
        }
    }
}
