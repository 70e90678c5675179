//! Exact linear algebra over the chain ring `Z/p^b`.
//!
//! Every nonzero residue factors as `unit * p^v`, so elimination always pivots
//! on an entry of minimal valuation and divides exactly. Submodules of
//! `(Z/p^b)^k` are represented canonically by their Howell form; the Smith form
//! is computed on demand for rank and cardinality.

use num_bigint::BigUint;

use crate::error::{Error, Result};

/// Largest modulus accepted anywhere in the crate.
pub const MAX_MODULUS: u64 = 1 << 31;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// The residue ring `Z/p^b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Modulus {
    p: u64,
    b: u32,
    q: u64,
}

impl Modulus {
    pub fn new(p: u64, b: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if b == 0 {
            return Err(Error::ModulusTooLarge { p, b });
        }
        let mut q = 1u64;
        for _ in 0..b {
            q = q.saturating_mul(p);
            if q > MAX_MODULUS {
                return Err(Error::ModulusTooLarge { p, b });
            }
        }
        Ok(Modulus { p, b, q })
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn b(&self) -> u32 {
        self.b
    }

    /// `p^b`.
    #[inline]
    pub fn value(&self) -> u64 {
        self.q
    }

    /// `p^e` for `e <= b`.
    pub fn pow_p(&self, e: u32) -> u64 {
        debug_assert!(e <= self.b);
        self.p.pow(e)
    }

    /// p-adic valuation of a residue; zero has valuation `b`.
    pub fn valuation(&self, x: u64) -> u32 {
        let mut x = x % self.q;
        if x == 0 {
            return self.b;
        }
        let mut v = 0;
        while x.is_multiple_of(self.p) {
            x /= self.p;
            v += 1;
        }
        v
    }

    /// `gcd(x, p^b)`.
    pub fn gcd(&self, x: u64) -> u64 {
        self.pow_p(self.valuation(x))
    }

    #[inline]
    pub fn reduce(&self, x: u64) -> u64 {
        x % self.q
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.q
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.q - b % self.q) % self.q
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        (self.q - a % self.q) % self.q
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        (a % self.q) * (b % self.q) % self.q
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.q;
        base %= self.q;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Inverse of a unit, `None` for non-units.
    pub fn inv(&self, a: u64) -> Option<u64> {
        let a = a % self.q;
        if a.is_multiple_of(self.p) {
            return None;
        }
        let (g, x, _) = ext_gcd(a as i64, self.q as i64);
        debug_assert_eq!(g, 1);
        Some(x.rem_euclid(self.q as i64) as u64)
    }

    pub fn is_unit(&self, a: u64) -> bool {
        !a.is_multiple_of(self.p)
    }
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

/// Smallest `u >= 0` with `lhs * u = rhs (mod p^b)`.
pub fn solve_congruence(lhs: u64, rhs: u64, modulus: Modulus) -> Result<u64> {
    let q = modulus.value();
    let (lhs, rhs) = (lhs % q, rhs % q);
    let g = modulus.gcd(lhs);
    if rhs % g != 0 {
        return Err(Error::NoSolution { lhs, rhs, modulus: q });
    }
    if lhs == 0 {
        // rhs == 0 here
        return Ok(0);
    }
    let reduced = q / g;
    let unit = (lhs / g) % reduced;
    let (_, inv, _) = ext_gcd(unit as i64, reduced as i64);
    let inv = inv.rem_euclid(reduced as i64) as u64;
    Ok(((rhs / g) % reduced) * inv % reduced)
}

/// Dense row-major matrix over `Z/p^b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZpbMatrix {
    modulus: Modulus,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl ZpbMatrix {
    pub fn zeros(modulus: Modulus, rows: usize, cols: usize) -> Self {
        ZpbMatrix {
            modulus,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(modulus: Modulus, n: usize) -> Self {
        let mut m = Self::zeros(modulus, n, n);
        for i in 0..n {
            m.set(i, i, 1 % modulus.value());
        }
        m
    }

    /// Builds a matrix from rows, rejecting unreduced entries.
    pub fn from_rows(modulus: Modulus, cols: usize, rows: &[Vec<u64>]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: r.len(),
                });
            }
            for &x in r {
                if x >= modulus.value() {
                    return Err(Error::EntryOutOfRange {
                        value: x,
                        modulus: modulus.value(),
                    });
                }
                data.push(x);
            }
        }
        Ok(ZpbMatrix {
            modulus,
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Builds a matrix from rows, reducing every entry.
    pub fn from_rows_reduced(modulus: Modulus, cols: usize, rows: &[Vec<u64>]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "row length mismatch");
            data.extend(r.iter().map(|&x| x % modulus.value()));
        }
        ZpbMatrix {
            modulus,
            rows: rows.len(),
            cols,
            data,
        }
    }

    #[inline]
    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        self.data[r * self.cols + c] = v % self.modulus.value();
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<u64>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.modulus, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c);
            }
        }
        t
    }

    pub fn mul(&self, other: &ZpbMatrix) -> Result<ZpbMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let md = self.modulus;
        let mut out = Self::zeros(md, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] = (out.data[idx] + a * other.get(k, j)) % md.value();
                }
            }
        }
        Ok(out)
    }

    /// Row vector times matrix.
    pub fn left_mul_vec(&self, x: &[u64]) -> Vec<u64> {
        assert_eq!(x.len(), self.rows);
        let md = self.modulus;
        let mut out = vec![0u64; self.cols];
        for (r, &xr) in x.iter().enumerate() {
            if xr == 0 {
                continue;
            }
            for (c, o) in out.iter_mut().enumerate() {
                *o = (*o + xr * self.get(r, c)) % md.value();
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }
}

// --- row helpers -----------------------------------------------------------

/// `dst += k * src`.
fn axpy(md: Modulus, dst: &mut [u64], k: u64, src: &[u64]) {
    let k = k % md.value();
    if k == 0 {
        return;
    }
    for (d, &s) in dst.iter_mut().zip(src) {
        *d = (*d + k * s) % md.value();
    }
}

fn scaled(md: Modulus, k: u64, src: &[u64]) -> Vec<u64> {
    src.iter().map(|&s| md.mul(k, s)).collect()
}

/// Canonical generator matrix of a submodule of `(Z/p^b)^cols`.
///
/// Rows are in echelon order, each pivot is a power of `p`, entries above a
/// pivot `p^v` lie in `[0, p^v)`, and every module element whose first `j`
/// coordinates vanish is a combination of the rows with pivot column `>= j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HowellBasis {
    matrix: ZpbMatrix,
    pivots: Vec<usize>,
}

impl HowellBasis {
    pub fn zero(modulus: Modulus, cols: usize) -> Self {
        HowellBasis {
            matrix: ZpbMatrix::zeros(modulus, 0, cols),
            pivots: Vec::new(),
        }
    }

    pub fn full(modulus: Modulus, cols: usize) -> Self {
        HowellBasis {
            matrix: ZpbMatrix::identity(modulus, cols),
            pivots: (0..cols).collect(),
        }
    }

    pub fn from_gens(modulus: Modulus, cols: usize, gens: &[Vec<u64>]) -> Self {
        howell_rows(modulus, cols, gens.to_vec())
    }

    pub fn matrix(&self) -> &ZpbMatrix {
        &self.matrix
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn modulus(&self) -> Modulus {
        self.matrix.modulus
    }

    pub fn cols(&self) -> usize {
        self.matrix.cols
    }

    pub fn len(&self) -> usize {
        self.matrix.rows
    }

    pub fn is_empty(&self) -> bool {
        self.matrix.rows == 0
    }

    pub fn row(&self, i: usize) -> &[u64] {
        self.matrix.row(i)
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u64]> + '_ {
        (0..self.len()).map(move |i| self.row(i))
    }

    pub fn row_vecs(&self) -> Vec<Vec<u64>> {
        self.matrix.row_vecs()
    }

    fn pivot_valuation(&self, i: usize) -> u32 {
        self.modulus().valuation(self.row(i)[self.pivots[i]])
    }

    /// `log_p` of the module cardinality.
    pub fn log_cardinality(&self) -> u32 {
        let b = self.modulus().b();
        (0..self.len()).map(|i| b - self.pivot_valuation(i)).sum()
    }

    pub fn cardinality(&self) -> BigUint {
        BigUint::from(self.modulus().p()).pow(self.log_cardinality())
    }

    /// Reduces `x` against the basis; returns the residue.
    pub fn reduce(&self, x: &[u64]) -> Vec<u64> {
        let md = self.modulus();
        let mut x: Vec<u64> = x.iter().map(|&v| md.reduce(v)).collect();
        for i in 0..self.len() {
            let c = self.pivots[i];
            let piv = self.row(i)[c];
            let k = x[c] / piv;
            if k != 0 {
                axpy(md, &mut x, md.neg(k), self.row(i));
            }
        }
        x
    }

    pub fn contains(&self, x: &[u64]) -> bool {
        assert_eq!(x.len(), self.cols(), "vector length mismatch");
        self.reduce(x).iter().all(|&v| v == 0)
    }

    pub fn is_submodule_of(&self, other: &HowellBasis) -> bool {
        self.rows().all(|r| other.contains(r))
    }

    /// Sum of two modules.
    pub fn sum(&self, other: &HowellBasis) -> Result<HowellBasis> {
        check_same_space(self, other)?;
        let mut gens = self.row_vecs();
        gens.extend(other.row_vecs());
        Ok(howell_rows(self.modulus(), self.cols(), gens))
    }

    /// `k * M`.
    pub fn scale(&self, k: u64) -> HowellBasis {
        let md = self.modulus();
        let gens = self.rows().map(|r| scaled(md, k, r)).collect();
        howell_rows(md, self.cols(), gens)
    }
}

fn check_same_space(a: &HowellBasis, b: &HowellBasis) -> Result<()> {
    if a.modulus() != b.modulus() {
        return Err(Error::RingMismatch);
    }
    if a.cols() != b.cols() {
        return Err(Error::DimensionMismatch {
            expected: a.cols(),
            found: b.cols(),
        });
    }
    Ok(())
}

fn howell_rows(md: Modulus, cols: usize, gens: Vec<Vec<u64>>) -> HowellBasis {
    let mut work: Vec<Vec<u64>> = gens
        .into_iter()
        .map(|r| {
            assert_eq!(r.len(), cols, "row length mismatch");
            r.into_iter().map(|x| md.reduce(x)).collect::<Vec<_>>()
        })
        .filter(|r: &Vec<u64>| r.iter().any(|&x| x != 0))
        .collect();
    let mut out: Vec<Vec<u64>> = Vec::new();
    let mut pivots = Vec::new();

    for col in 0..cols {
        let mut best: Option<(usize, u32)> = None;
        for (i, r) in work.iter().enumerate() {
            if r[col] != 0 {
                let v = md.valuation(r[col]);
                if best.is_none_or(|(_, bv)| v < bv) {
                    best = Some((i, v));
                }
            }
        }
        let Some((idx, v)) = best else { continue };
        let mut piv = work.remove(idx);
        let pv = md.pow_p(v);
        let unit = md.inv(piv[col] / pv).expect("unit part is invertible");
        for x in piv.iter_mut() {
            *x = md.mul(*x, unit);
        }
        debug_assert_eq!(piv[col], pv);
        for r in work.iter_mut() {
            if r[col] != 0 {
                let k = r[col] / pv;
                axpy(md, r, md.neg(k), &piv);
                debug_assert_eq!(r[col], 0);
            }
        }
        if v > 0 {
            let ann = scaled(md, md.pow_p(md.b() - v), &piv);
            if ann.iter().any(|&x| x != 0) {
                work.push(ann);
            }
        }
        work.retain(|r| r.iter().any(|&x| x != 0));
        out.push(piv);
        pivots.push(col);
    }
    debug_assert!(work.is_empty());

    for i in 0..out.len() {
        let c = pivots[i];
        let pv = out[i][c];
        let (upper, lower) = out.split_at_mut(i);
        let row_i = &lower[0];
        for r in upper.iter_mut() {
            let k = r[c] / pv;
            if k != 0 {
                axpy(md, r, md.neg(k), row_i);
            }
        }
    }

    let matrix = ZpbMatrix::from_rows_reduced(md, cols, &out);
    HowellBasis { matrix, pivots }
}

/// Canonical Howell form of the row module of `gens`.
pub fn howell_form(gens: &ZpbMatrix) -> HowellBasis {
    howell_rows(gens.modulus, gens.cols, gens.row_vecs())
}

/// Smith decomposition `input = left * D * right` with `D` diagonal,
/// diagonal entries `p^{e_i}` (zero when `e_i = b`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub diag_exponents: Vec<u32>,
    pub left: ZpbMatrix,
    pub right: ZpbMatrix,
}

impl SmithDecomposition {
    pub fn diagonal(&self) -> ZpbMatrix {
        let md = self.left.modulus;
        let mut d = ZpbMatrix::zeros(md, self.left.rows, self.right.rows);
        for (i, &e) in self.diag_exponents.iter().enumerate() {
            if e < md.b() {
                d.set(i, i, md.pow_p(e));
            }
        }
        d
    }

    pub fn rank(&self) -> usize {
        let b = self.left.modulus.b();
        self.diag_exponents.iter().filter(|&&e| e < b).count()
    }

    pub fn log_cardinality(&self) -> u32 {
        let b = self.left.modulus.b();
        self.diag_exponents
            .iter()
            .filter(|&&e| e < b)
            .map(|&e| b - e)
            .sum()
    }
}

pub fn smith_form(a: &ZpbMatrix) -> SmithDecomposition {
    let md = a.modulus;
    let (r, c) = (a.rows, a.cols);
    let mut d = a.clone();
    // a = u * d * v throughout
    let mut u = ZpbMatrix::identity(md, r);
    let mut v = ZpbMatrix::identity(md, c);
    let mut exps = Vec::new();

    for k in 0..r.min(c) {
        let mut best: Option<(usize, usize, u32)> = None;
        for i in k..r {
            for j in k..c {
                let x = d.get(i, j);
                if x != 0 {
                    let val = md.valuation(x);
                    if best.is_none_or(|(_, _, bv)| val < bv) {
                        best = Some((i, j, val));
                    }
                }
            }
        }
        let Some((pi, pj, val)) = best else {
            exps.extend(std::iter::repeat_n(md.b(), r.min(c) - k));
            break;
        };
        if pi != k {
            swap_rows(&mut d, pi, k);
            swap_cols(&mut u, pi, k);
        }
        if pj != k {
            swap_cols(&mut d, pj, k);
            swap_rows(&mut v, pj, k);
        }
        let pv = md.pow_p(val);
        let unit = d.get(k, k) / pv;
        let unit_inv = md.inv(unit).expect("unit part is invertible");
        // row k *= unit_inv ; u column k *= unit
        for j in 0..c {
            let x = d.get(k, j);
            d.set(k, j, md.mul(x, unit_inv));
        }
        for i in 0..r {
            let x = u.get(i, k);
            u.set(i, k, md.mul(x, unit));
        }
        for i in k + 1..r {
            let x = d.get(i, k);
            if x != 0 {
                let f = x / pv;
                // row i -= f row k ; u column k += f u column i
                for j in 0..c {
                    let y = md.sub(d.get(i, j), md.mul(f, d.get(k, j)));
                    d.set(i, j, y);
                }
                for t in 0..r {
                    let y = md.add(u.get(t, k), md.mul(f, u.get(t, i)));
                    u.set(t, k, y);
                }
            }
        }
        for j in k + 1..c {
            let x = d.get(k, j);
            if x != 0 {
                let f = x / pv;
                // col j -= f col k ; v row k += f v row j
                for i in 0..r {
                    let y = md.sub(d.get(i, j), md.mul(f, d.get(i, k)));
                    d.set(i, j, y);
                }
                for t in 0..c {
                    let y = md.add(v.get(k, t), md.mul(f, v.get(j, t)));
                    v.set(k, t, y);
                }
            }
        }
        exps.push(val);
    }
    SmithDecomposition {
        diag_exponents: exps,
        left: u,
        right: v,
    }
}

fn swap_rows(m: &mut ZpbMatrix, a: usize, b: usize) {
    for j in 0..m.cols {
        m.data.swap(a * m.cols + j, b * m.cols + j);
    }
}

fn swap_cols(m: &mut ZpbMatrix, a: usize, b: usize) {
    for i in 0..m.rows {
        m.data.swap(i * m.cols + a, i * m.cols + b);
    }
}

/// Minimal number of generators of the row module.
pub fn module_rank(gens: &ZpbMatrix) -> usize {
    smith_form(gens).rank()
}

/// Left kernel `{x : x A = 0}` as a Howell basis.
pub fn kernel(a: &ZpbMatrix) -> HowellBasis {
    let md = a.modulus;
    let (r, c) = (a.rows, a.cols);
    let gens: Vec<Vec<u64>> = (0..r)
        .map(|i| {
            let mut row = a.row(i).to_vec();
            row.extend((0..r).map(|j| u64::from(i == j) % md.value()));
            row
        })
        .collect();
    let h = howell_rows(md, c + r, gens);
    let tail: Vec<Vec<u64>> = (0..h.len())
        .filter(|&i| h.pivots[i] >= c)
        .map(|i| h.row(i)[c..].to_vec())
        .collect();
    howell_rows(md, r, tail)
}

/// Intersection of two submodules (Zassenhaus).
pub fn intersect(m1: &HowellBasis, m2: &HowellBasis) -> Result<HowellBasis> {
    check_same_space(m1, m2)?;
    let md = m1.modulus();
    let n = m1.cols();
    let mut gens = Vec::with_capacity(m1.len() + m2.len());
    for r in m1.rows() {
        let mut row = r.to_vec();
        row.extend_from_slice(r);
        gens.push(row);
    }
    for r in m2.rows() {
        let mut row = r.to_vec();
        row.extend(std::iter::repeat_n(0, n));
        gens.push(row);
    }
    let h = howell_rows(md, 2 * n, gens);
    let tail: Vec<Vec<u64>> = (0..h.len())
        .filter(|&i| h.pivots[i] >= n)
        .map(|i| h.row(i)[n..].to_vec())
        .collect();
    Ok(howell_rows(md, n, tail))
}

/// Rank of `M / S`, i.e. `dim_{F_p} M / (pM + S)`.
pub fn quotient_rank(m: &HowellBasis, s: &HowellBasis) -> Result<usize> {
    check_same_space(m, s)?;
    if !s.is_submodule_of(m) {
        return Err(Error::NotSubmodule);
    }
    let md = m.modulus();
    let denom = m.scale(md.p()).sum(s)?;
    Ok((m.log_cardinality() - denom.log_cardinality()) as usize)
}

/// Solves `x A = y`, returning some `x` when one exists.
pub fn solve_left(a: &ZpbMatrix, y: &[u64]) -> Option<Vec<u64>> {
    let md = a.modulus;
    let (r, c) = (a.rows, a.cols);
    assert_eq!(y.len(), c);
    let gens: Vec<Vec<u64>> = (0..r)
        .map(|i| {
            let mut row = a.row(i).to_vec();
            row.extend((0..r).map(|j| u64::from(i == j)));
            row
        })
        .collect();
    let h = howell_rows(md, c + r, gens);
    let mut target = y.to_vec();
    target.extend(std::iter::repeat_n(0, r));
    let rem = h.reduce(&target);
    if rem[..c].iter().any(|&v| v != 0) {
        return None;
    }
    let x: Vec<u64> = rem[c..].iter().map(|&v| md.neg(v)).collect();
    debug_assert_eq!(a.left_mul_vec(&x), y.iter().map(|&v| md.reduce(v)).collect::<Vec<_>>());
    Some(x)
}

/// Irredundant generators of a module, with the count of elements each one
/// contributes along its coefficient range.
#[derive(Clone, Debug)]
pub struct ModuleElements {
    modulus: Modulus,
    gens: Vec<Vec<u64>>,
    radix: Vec<u64>,
    cols: usize,
    total: u64,
}

impl ModuleElements {
    /// Every element is `sum a_i p^{e_i} V_i` with `0 <= a_i < p^{b - e_i}`,
    /// `V` the right Smith transform.
    pub fn new(m: &HowellBasis) -> Self {
        let md = m.modulus();
        let smith = smith_form(m.matrix());
        let mut gens = Vec::new();
        let mut radix = Vec::new();
        for (i, &e) in smith.diag_exponents.iter().enumerate() {
            if e < md.b() {
                gens.push(scaled(md, md.pow_p(e), smith.right.row(i)));
                radix.push(md.pow_p(md.b() - e));
            }
        }
        let total = radix
            .iter()
            .try_fold(1u64, |acc, &r| acc.checked_mul(r))
            .unwrap_or(u64::MAX);
        ModuleElements {
            modulus: md,
            gens,
            radix,
            cols: m.cols(),
            total,
        }
    }

    /// Exact cardinality, saturating at `u64::MAX`.
    pub fn total(&self) -> u64 {
        self.total
    }

    /// Visits the elements with linear index in `[start, end)`.
    pub fn for_each_in_range<F: FnMut(&[u64])>(&self, start: u64, end: u64, mut f: F) {
        let md = self.modulus;
        let end = end.min(self.total);
        if start >= end {
            return;
        }
        let k = self.gens.len();
        let mut digits = vec![0u64; k];
        let mut rest = start;
        for i in 0..k {
            digits[i] = rest % self.radix[i];
            rest /= self.radix[i];
        }
        let mut cur = vec![0u64; self.cols];
        for i in 0..k {
            axpy(md, &mut cur, digits[i], &self.gens[i]);
        }
        let mut idx = start;
        loop {
            f(&cur);
            idx += 1;
            if idx >= end {
                break;
            }
            let mut i = 0;
            loop {
                digits[i] += 1;
                axpy(md, &mut cur, 1, &self.gens[i]);
                if digits[i] < self.radix[i] {
                    break;
                }
                // radix_i * gen_i == 0, so adding the last copy already wrapped
                digits[i] = 0;
                i += 1;
            }
        }
    }

    pub fn for_each<F: FnMut(&[u64])>(&self, f: F) {
        self.for_each_in_range(0, self.total, f)
    }
}

/// All elements of a module, each exactly once.
pub fn enumerate_module(m: &HowellBasis, limit: u64) -> Result<Vec<Vec<u64>>> {
    let card = m.cardinality();
    if card > BigUint::from(limit) {
        return Err(Error::LimitExceeded {
            cardinality: card,
            limit,
        });
    }
    let it = ModuleElements::new(m);
    let mut out = Vec::with_capacity(it.total() as usize);
    it.for_each(|v| out.push(v.to_vec()));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::HashSet;

    fn z(p: u64, b: u32) -> Modulus {
        Modulus::new(p, b).unwrap()
    }

    fn basis(md: Modulus, cols: usize, rows: &[&[u64]]) -> HowellBasis {
        let rows: Vec<Vec<u64>> = rows.iter().map(|r| r.to_vec()).collect();
        HowellBasis::from_gens(md, cols, &rows)
    }

    /// Span by brute force: all combinations with coefficients in `Z/p^b`.
    fn brute_span(md: Modulus, cols: usize, gens: &[Vec<u64>]) -> HashSet<Vec<u64>> {
        let mut set = HashSet::new();
        set.insert(vec![0u64; cols]);
        for g in gens {
            let mut next = HashSet::new();
            for v in &set {
                for k in 0..md.value() {
                    let mut w = v.clone();
                    axpy(md, &mut w, k, g);
                    next.insert(w);
                }
            }
            set = next;
        }
        set
    }

    fn all_vectors(md: Modulus, cols: usize) -> Vec<Vec<u64>> {
        let mut out = vec![vec![]];
        for _ in 0..cols {
            out = out
                .into_iter()
                .flat_map(|v| {
                    (0..md.value()).map(move |x| {
                        let mut w = v.clone();
                        w.push(x);
                        w
                    })
                })
                .collect();
        }
        out
    }

    fn elements(h: &HowellBasis) -> HashSet<Vec<u64>> {
        enumerate_module(h, 1 << 20).unwrap().into_iter().collect()
    }

    #[test]
    fn rejects_composite_and_oversized() {
        assert_eq!(Modulus::new(6, 1), Err(Error::NotPrime(6)));
        assert!(matches!(
            Modulus::new(2, 32),
            Err(Error::ModulusTooLarge { .. })
        ));
        assert!(Modulus::new(2, 31).is_ok());
    }

    #[test]
    fn howell_examples() {
        let z4 = z(2, 2);
        let h = basis(z4, 2, &[&[2, 0], &[0, 2], &[2, 2]]);
        assert_eq!(h.row_vecs(), vec![vec![2, 0], vec![0, 2]]);
        // frozen from the 16-combination brute force span
        let span = brute_span(z4, 2, &[vec![2, 0], vec![0, 2], vec![2, 2]]);
        assert_eq!(elements(&h), span);
        assert!(HowellBasis::from_gens(z4, 2, &[]).is_empty());
        let id = basis(z4, 2, &[&[1, 0], &[0, 1]]);
        assert_eq!(id.row_vecs(), vec![vec![1, 0], vec![0, 1]]);
    }

    #[test]
    fn howell_adds_annihilator_rows() {
        // (2,1) over Z_4 : 2*(2,1) = (0,2) must appear as its own row
        let h = basis(z(2, 2), 2, &[&[2, 1]]);
        assert_eq!(h.row_vecs(), vec![vec![2, 1], vec![0, 2]]);
        assert_eq!(h.log_cardinality(), 2);
        assert!(h.contains(&[0, 2]));
        assert!(!h.contains(&[0, 1]));
    }

    #[test]
    fn rank_examples() {
        let z4 = z(2, 2);
        let m = |rows: &[Vec<u64>]| ZpbMatrix::from_rows(z4, 2, rows).unwrap();
        assert_eq!(module_rank(&m(&[vec![2, 0]])), 1);
        assert_eq!(module_rank(&m(&[vec![2, 0], vec![0, 2], vec![2, 2]])), 2);
        assert_eq!(module_rank(&m(&[])), 0);
        // Nakayama count on the enumerated 8-element module: |M/2M| = 4 = 2^2
        let h = basis(z4, 2, &[&[1, 0], &[0, 2]]);
        assert_eq!(quotient_rank(&h, &HowellBasis::zero(z4, 2)).unwrap(), 2);
    }

    #[test]
    fn kernel_examples() {
        let z4 = z(2, 2);
        let k = kernel(&ZpbMatrix::from_rows(z4, 1, &[vec![2]]).unwrap());
        assert_eq!(elements(&k), [vec![0], vec![2]].into_iter().collect());
        let k = kernel(&ZpbMatrix::from_rows(z4, 1, &[vec![1]]).unwrap());
        assert!(k.is_empty());
        let a = ZpbMatrix::from_rows(z4, 1, &[vec![2], vec![2]]).unwrap();
        let k = kernel(&a);
        // brute force over Z_4^2
        let expect: HashSet<Vec<u64>> = all_vectors(z4, 2)
            .into_iter()
            .filter(|x| a.left_mul_vec(x) == vec![0])
            .collect();
        assert_eq!(expect.len(), 8);
        assert_eq!(elements(&k), expect);
        assert_eq!(k, basis(z4, 2, &[&[1, 1], &[2, 0]]));
    }

    #[test]
    fn intersect_examples() {
        let z4 = z(2, 2);
        let a = basis(z4, 2, &[&[1, 0]]);
        let b = basis(z4, 2, &[&[0, 1]]);
        assert!(intersect(&a, &b).unwrap().is_empty());
        let m1 = basis(z4, 2, &[&[1, 0], &[0, 2]]);
        let m2 = basis(z4, 2, &[&[0, 0], &[2, 0]]);
        let i = intersect(&m1, &m2).unwrap();
        let expect: HashSet<_> = elements(&m1).intersection(&elements(&m2)).cloned().collect();
        assert_eq!(elements(&i), expect);
        assert_eq!(expect, [vec![0, 0], vec![2, 0]].into_iter().collect());
        assert_eq!(intersect(&m1, &m1).unwrap(), m1);
        let other = HowellBasis::zero(z4, 3);
        assert!(matches!(
            intersect(&m1, &other),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn quotient_rank_examples() {
        let z4 = z(2, 2);
        let m = basis(z4, 2, &[&[1, 0], &[0, 2]]);
        let s = basis(z4, 2, &[&[2, 0]]);
        assert_eq!(quotient_rank(&m, &s).unwrap(), 2);
        assert_eq!(quotient_rank(&m, &m).unwrap(), 0);
        let full = HowellBasis::full(z4, 2);
        assert_eq!(quotient_rank(&full, &HowellBasis::zero(z4, 2)).unwrap(), 2);
        assert_eq!(quotient_rank(&s, &m), Err(Error::NotSubmodule));
    }

    /// Minimal generator count of M/S by trying every subset of M.
    fn brute_quotient_rank(md: Modulus, m: &HowellBasis, s: &HowellBasis) -> usize {
        let elems: Vec<Vec<u64>> = elements(m).into_iter().collect();
        let target = m.log_cardinality();
        for k in 0..=m.cols() * 2 {
            let mut idx = vec![0usize; k];
            loop {
                let mut gens = s.row_vecs();
                gens.extend(idx.iter().map(|&i| elems[i].clone()));
                if HowellBasis::from_gens(md, m.cols(), &gens).log_cardinality() == target {
                    return k;
                }
                // next multi-index
                let mut j = 0;
                while j < k {
                    idx[j] += 1;
                    if idx[j] < elems.len() {
                        break;
                    }
                    idx[j] = 0;
                    j += 1;
                }
                if j == k {
                    break;
                }
            }
        }
        unreachable!()
    }

    #[test]
    fn quotient_rank_matches_subset_search() {
        let z4 = z(2, 2);
        let m = basis(z4, 2, &[&[1, 0], &[0, 2]]);
        let s = basis(z4, 2, &[&[2, 0]]);
        assert_eq!(brute_quotient_rank(z4, &m, &s), 2);
        let z8 = z(2, 3);
        let m = basis(z8, 2, &[&[1, 2], &[0, 4]]);
        let s = basis(z8, 2, &[&[4, 0]]);
        assert_eq!(quotient_rank(&m, &s).unwrap(), brute_quotient_rank(z8, &m, &s));
    }

    #[test]
    fn congruences() {
        let z4 = z(2, 2);
        assert_eq!(solve_congruence(2, 2, z4), Ok(1));
        assert!(matches!(
            solve_congruence(2, 1, z4),
            Err(Error::NoSolution { .. })
        ));
        assert_eq!(solve_congruence(1, 3, z4), Ok(3));
        assert_eq!(solve_congruence(0, 0, z4), Ok(0));
        // exhaustive: smallest solution agrees with a linear scan
        let z27 = z(3, 3);
        for lhs in 0..27 {
            for rhs in 0..27 {
                let scan = (0..27).find(|&u| (lhs * u) % 27 == rhs);
                assert_eq!(solve_congruence(lhs, rhs, z27).ok(), scan);
            }
        }
    }

    #[test]
    fn enumeration_examples() {
        let z4 = z(2, 2);
        let h = basis(z4, 2, &[&[2, 0]]);
        let e = elements(&h);
        assert_eq!(e, [vec![0, 0], vec![2, 0]].into_iter().collect());
        let h = basis(z4, 2, &[&[1, 0], &[0, 2]]);
        let all = enumerate_module(&h, 100).unwrap();
        assert_eq!(all.len(), 8);
        assert_eq!(all.iter().collect::<HashSet<_>>().len(), 8);
        let full = HowellBasis::full(z4, 2);
        match enumerate_module(&full, 10) {
            Err(Error::LimitExceeded { cardinality, .. }) => {
                assert_eq!(cardinality, BigUint::from(16u32))
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn range_enumeration_partitions() {
        let z9 = z(3, 2);
        let h = basis(z9, 3, &[&[1, 3, 0], &[0, 3, 6]]);
        let it = ModuleElements::new(&h);
        let mut whole = Vec::new();
        it.for_each(|v| whole.push(v.to_vec()));
        let mut pieces = Vec::new();
        for s in (0..it.total()).step_by(5) {
            it.for_each_in_range(s, s + 5, |v| pieces.push(v.to_vec()));
        }
        assert_eq!(whole, pieces);
    }

    #[test]
    fn solve_left_finds_witness() {
        let z8 = z(2, 3);
        let a = ZpbMatrix::from_rows(z8, 2, &[vec![2, 4], vec![0, 6]]).unwrap();
        let x = solve_left(&a, &[4, 2]).unwrap();
        assert_eq!(a.left_mul_vec(&x), vec![4, 2]);
        assert!(solve_left(&a, &[1, 0]).is_none());
    }

    fn arb_matrix() -> impl Strategy<Value = (Modulus, ZpbMatrix)> {
        (prop_oneof![Just((2u64, 2u32)), Just((2, 3)), Just((3, 2))], 0usize..5, 1usize..5)
            .prop_flat_map(|((p, b), r, c)| {
                let md = Modulus::new(p, b).unwrap();
                proptest::collection::vec(
                    proptest::collection::vec(0..md.value(), c),
                    r,
                )
                .prop_map(move |rows| (md, ZpbMatrix::from_rows(md, c, &rows).unwrap()))
            })
    }

    proptest! {
        #[test]
        fn howell_idempotent_and_span_preserving((md, a) in arb_matrix()) {
            let h = howell_form(&a);
            prop_assert_eq!(howell_form(h.matrix()), h.clone());
            let span = brute_span(md, a.cols(), &a.row_vecs());
            prop_assert_eq!(elements(&h), span);
        }

        #[test]
        fn howell_is_canonical((md, a) in arb_matrix(), shuffle in any::<u64>()) {
            // a different generating set of the same module must give the same form
            let h = howell_form(&a);
            let mut rows = a.row_vecs();
            if rows.len() > 1 {
                let i = (shuffle as usize) % rows.len();
                let j = (i + 1) % rows.len();
                let k = shuffle % md.value();
                let add = rows[j].clone();
                axpy(md, &mut rows[i], k, &add);
                rows.reverse();
            }
            prop_assert_eq!(HowellBasis::from_gens(md, a.cols(), &rows), h);
        }

        #[test]
        fn smith_reproduces_input((_md, a) in arb_matrix()) {
            let s = smith_form(&a);
            let back = s.left.mul(&s.diagonal()).unwrap().mul(&s.right).unwrap();
            prop_assert_eq!(back, a.clone());
            prop_assert!(s.diag_exponents.windows(2).all(|w| w[0] <= w[1]));
            let h = howell_form(&a);
            prop_assert_eq!(s.log_cardinality(), h.log_cardinality());
            prop_assert_eq!(elements(&h).len() as u64, h.modulus().p().pow(h.log_cardinality()));
        }

        #[test]
        fn kernel_sound_and_complete((md, a) in arb_matrix()) {
            prop_assume!(a.rows() <= 3 && a.cols() <= 3);
            let k = kernel(&a);
            for x in all_vectors(md, a.rows()) {
                let zero = a.left_mul_vec(&x).iter().all(|&v| v == 0);
                prop_assert_eq!(zero, k.contains(&x));
            }
        }

        #[test]
        fn quotient_rank_extremes((md, a) in arb_matrix()) {
            let h = howell_form(&a);
            let zero = HowellBasis::zero(md, a.cols());
            prop_assert_eq!(quotient_rank(&h, &zero).unwrap(), module_rank(&a));
            prop_assert_eq!(quotient_rank(&h, &h).unwrap(), 0);
        }
    }
}
