//! Linear algebra over the principal ideal ring ℤ/e.
//!
//! Every finite abelian group handled by the crate is killed by some exponent
//! `e`, so submodules, kernels and quotients can be computed with matrices whose
//! entries are kept in `[0, e)`. The workhorse is a Smith normal form over ℤ/e
//! that tracks the unimodular transforms needed for kernels, cokernel
//! coordinates and solving linear systems.
//!
//! Diagonal entries are normalized to divisors of `e`; the value `e` itself
//! stands for a zero entry. Products go through `u128` so no intermediate can
//! overflow for any modulus that fits in a `u64`.

use crate::error::{invalid, Result};

/// Dense row-major matrix with entries reduced modulo `modulus`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModMatrix {
    rows: usize,
    cols: usize,
    modulus: u64,
    data: Vec<u64>,
}

#[inline]
fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

#[inline]
fn addmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 + b as u128) % m as u128) as u64
}

#[inline]
fn negmod(a: u64, m: u64) -> u64 {
    if a == 0 {
        0
    } else {
        m - a
    }
}

/// Reduces a signed integer into `[0, m)`.
pub fn reduce(x: i128, m: u64) -> u64 {
    x.rem_euclid(m as i128) as u64
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

/// Extended Euclid: returns `(g, s, t)` with `s*a + t*b = g`.
fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

/// Inverse of a unit modulo `m`.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (g, s, _) = ext_gcd(a as i128, m as i128);
    (g == 1).then(|| reduce(s, m))
}

/// A unit `u` of ℤ/m with `u·a ≡ gcd(a, m)`.
fn normalizing_unit(a: u64, m: u64) -> u64 {
    let g = gcd(a, m);
    if g == 0 || m == 1 {
        return 1;
    }
    let a1 = a / g;
    let m1 = m / g;
    let base = if m1 == 1 { 1 } else { inv_mod(a1 % m1, m1).unwrap_or(1) };
    // (ℤ/m)^× → (ℤ/m1)^× is surjective, so a lift exists among base + k·m1.
    let mut u = base;
    while gcd(u, m) != 1 {
        u += m1;
    }
    u % m
}

impl ModMatrix {
    pub fn zeros(rows: usize, cols: usize, modulus: u64) -> Self {
        assert!(modulus >= 1, "modulus must be positive");
        Self {
            rows,
            cols,
            modulus,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize, modulus: u64) -> Self {
        let mut m = Self::zeros(n, n, modulus);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from signed rows, reducing every entry.
    pub fn from_rows(rows: &[Vec<i64>], cols: usize, modulus: u64) -> Result<Self> {
        let mut m = Self::zeros(rows.len(), cols, modulus);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return invalid(format!("row {i} has {} entries, expected {cols}", row.len()));
            }
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, reduce(v as i128, modulus));
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v % self.modulus;
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: u64) {
        let cur = self.get(i, j);
        self.set(i, j, addmod(cur, v, self.modulus));
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<u64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn mul_vec(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.cols);
        let m = self.modulus as u128;
        (0..self.rows)
            .map(|i| {
                let mut acc: u128 = 0;
                for (a, b) in self.row(i).iter().zip(v) {
                    if *a != 0 && *b != 0 {
                        acc = (acc + *a as u128 * *b as u128) % m;
                    }
                }
                acc as u64
            })
            .collect()
    }

    pub fn mul(&self, other: &ModMatrix) -> ModMatrix {
        assert_eq!(self.cols, other.rows);
        assert_eq!(self.modulus, other.modulus);
        let m = self.modulus;
        let mut out = ModMatrix::zeros(self.rows, other.cols, m);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b != 0 {
                        out.add_to(i, j, mulmod(a, b, m));
                    }
                }
            }
        }
        out
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hconcat(&self, other: &ModMatrix) -> ModMatrix {
        assert_eq!(self.rows, other.rows);
        assert_eq!(self.modulus, other.modulus);
        let mut out = ModMatrix::zeros(self.rows, self.cols + other.cols, self.modulus);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j));
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other.get(i, j));
            }
        }
        out
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[Vec<u64>], modulus: u64) -> ModMatrix {
        let mut out = ModMatrix::zeros(rows, columns.len(), modulus);
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, &v) in c.iter().enumerate() {
                out.set(i, j, v);
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// rows (a, b) ← (s·a + t·b, u·a + v·b)
    fn combine_rows(&mut self, a: usize, b: usize, s: u64, t: u64, u: u64, v: u64) {
        let m = self.modulus;
        for j in 0..self.cols {
            let x = self.get(a, j);
            let y = self.get(b, j);
            if x == 0 && y == 0 {
                continue;
            }
            self.set(a, j, addmod(mulmod(s, x, m), mulmod(t, y, m), m));
            self.set(b, j, addmod(mulmod(u, x, m), mulmod(v, y, m), m));
        }
    }

    /// columns (a, b) ← (s·a + t·b, u·a + v·b)
    fn combine_cols(&mut self, a: usize, b: usize, s: u64, t: u64, u: u64, v: u64) {
        let m = self.modulus;
        for i in 0..self.rows {
            let x = self.get(i, a);
            let y = self.get(i, b);
            if x == 0 && y == 0 {
                continue;
            }
            self.set(i, a, addmod(mulmod(s, x, m), mulmod(t, y, m), m));
            self.set(i, b, addmod(mulmod(u, x, m), mulmod(v, y, m), m));
        }
    }
}

/// Smith normal form `P·A·Q = D` over ℤ/e.
///
/// `diag[i]` is a divisor of `e` with `diag[i] | diag[i+1]`; `diag[i] == e`
/// encodes a zero pivot. `p_inv` is the inverse of `p`.
#[derive(Debug, Clone)]
pub struct Snf {
    pub modulus: u64,
    pub diag: Vec<u64>,
    pub p: ModMatrix,
    pub p_inv: ModMatrix,
    pub q: ModMatrix,
}

struct Transforms {
    p: ModMatrix,
    p_inv: ModMatrix,
    q: ModMatrix,
}

impl Transforms {
    // row op R on A: P ← R·P, P⁻¹ ← P⁻¹·R⁻¹. R = [[s,t],[u,v]] with det 1.
    fn row_op(&mut self, a: usize, b: usize, s: u64, t: u64, u: u64, v: u64) {
        let m = self.p.modulus;
        self.p.combine_rows(a, b, s, t, u, v);
        // R⁻¹ = [[v,-t],[-u,s]]; right multiplication acts on columns (a,b):
        // new col a = v·a − u·b, new col b = −t·a + s·b
        self.p_inv
            .combine_cols(a, b, v, negmod(u, m), negmod(t, m), s);
    }

    fn row_swap(&mut self, a: usize, b: usize) {
        self.p.swap_rows(a, b);
        self.p_inv.swap_cols(a, b);
    }

    fn row_scale(&mut self, a: usize, unit: u64) {
        let m = self.p.modulus;
        let inv = inv_mod(unit, m).expect("scaling factor must be a unit");
        for j in 0..self.p.cols {
            let x = self.p.get(a, j);
            self.p.set(a, j, mulmod(x, unit, m));
        }
        for i in 0..self.p_inv.rows {
            let x = self.p_inv.get(i, a);
            self.p_inv.set(i, a, mulmod(x, inv, m));
        }
    }

    fn col_op(&mut self, a: usize, b: usize, s: u64, t: u64, u: u64, v: u64) {
        self.q.combine_cols(a, b, s, t, u, v);
    }

    fn col_swap(&mut self, a: usize, b: usize) {
        self.q.swap_cols(a, b);
    }
}

fn divides(d: u64, x: u64) -> bool {
    // d | e and x in [0, e): divisibility of the representative is well-defined mod e
    x % d == 0
}

/// Computes the Smith normal form of `a` over ℤ/e, `e = a.modulus()`.
pub fn smith_normal_form(a: &ModMatrix) -> Snf {
    let e = a.modulus;
    let (m, n) = (a.rows, a.cols);
    let mut w = a.clone();
    let mut tr = Transforms {
        p: ModMatrix::identity(m, e),
        p_inv: ModMatrix::identity(m, e),
        q: ModMatrix::identity(n, e),
    };
    let k = m.min(n);
    let mut diag = Vec::with_capacity(k);
    if e == 1 {
        return Snf {
            modulus: e,
            diag: vec![1; k],
            p: tr.p,
            p_inv: tr.p_inv,
            q: tr.q,
        };
    }

    for t in 0..k {
        // pivot: entry whose ideal (gcd with e) is smallest
        let mut best: Option<(u64, usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                let v = w.get(i, j);
                if v != 0 {
                    let g = gcd(v, e);
                    if best.map_or(true, |(bg, _, _)| g < bg) {
                        best = Some((g, i, j));
                        if g == 1 {
                            break;
                        }
                    }
                }
            }
            if matches!(best, Some((1, _, _))) {
                break;
            }
        }
        let Some((_, pi, pj)) = best else {
            diag.extend(std::iter::repeat(e).take(k - t));
            break;
        };
        w.swap_rows(t, pi);
        tr.row_swap(t, pi);
        w.swap_cols(t, pj);
        tr.col_swap(t, pj);

        loop {
            normalize_pivot(&mut w, &mut tr, t);
            let mut dirty = false;
            // clear column t
            for i in (t + 1)..m {
                let b = w.get(i, t);
                if b == 0 {
                    continue;
                }
                let g = w.get(t, t);
                if divides(g, b) {
                    let q = b / g;
                    w.combine_rows(t, i, 1, 0, negmod(q, e), 1);
                    tr.row_op(t, i, 1, 0, negmod(q, e), 1);
                } else {
                    let (h, s, tt) = ext_gcd(g as i128, b as i128);
                    let (s, tt) = (reduce(s, e), reduce(tt, e));
                    let u = reduce(-((b as i128) / h), e);
                    let v = ((g as i128) / h) as u64 % e;
                    w.combine_rows(t, i, s, tt, u, v);
                    tr.row_op(t, i, s, tt, u, v);
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // clear row t
            for j in (t + 1)..n {
                let b = w.get(t, j);
                if b == 0 {
                    continue;
                }
                let g = w.get(t, t);
                if divides(g, b) {
                    let q = b / g;
                    w.combine_cols(t, j, 1, 0, negmod(q, e), 1);
                    tr.col_op(t, j, 1, 0, negmod(q, e), 1);
                } else {
                    let (h, s, tt) = ext_gcd(g as i128, b as i128);
                    let (s, tt) = (reduce(s, e), reduce(tt, e));
                    let u = reduce(-((b as i128) / h), e);
                    let v = ((g as i128) / h) as u64 % e;
                    w.combine_cols(t, j, s, tt, u, v);
                    tr.col_op(t, j, s, tt, u, v);
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // pivot must divide the remaining block
            let g = w.get(t, t);
            let mut offender = None;
            'scan: for i in (t + 1)..m {
                for j in (t + 1)..n {
                    if !divides(g, w.get(i, j)) {
                        offender = Some(i);
                        break 'scan;
                    }
                }
            }
            match offender {
                Some(i) => {
                    // row t += row i
                    w.combine_rows(t, i, 1, 1, 0, 1);
                    tr.row_op(t, i, 1, 1, 0, 1);
                }
                None => break,
            }
        }
        let g = w.get(t, t);
        diag.push(if g == 0 { e } else { g });
    }

    Snf {
        modulus: e,
        diag,
        p: tr.p,
        p_inv: tr.p_inv,
        q: tr.q,
    }
}

fn normalize_pivot(w: &mut ModMatrix, tr: &mut Transforms, t: usize) {
    let e = w.modulus;
    let a = w.get(t, t);
    if a == 0 {
        return;
    }
    let u = normalizing_unit(a, e);
    if u != 1 {
        for j in 0..w.cols {
            let x = w.get(t, j);
            w.set(t, j, mulmod(x, u, e));
        }
        tr.row_scale(t, u);
    }
}

impl Snf {
    /// Generators (as columns) of `{x : A·x = 0}` over ℤ/e.
    pub fn kernel_generators(&self, rows_of_a: usize) -> Vec<Vec<u64>> {
        let e = self.modulus;
        let n = self.q.cols;
        let mut gens = Vec::new();
        for i in 0..n {
            let scale = if i < self.diag.len() && i < rows_of_a {
                let g = self.diag[i];
                if g == e {
                    1
                } else {
                    e / g
                }
            } else {
                1
            };
            if scale % e == 0 {
                continue;
            }
            let col: Vec<u64> = self.q.column(i).iter().map(|&v| mulmod(v, scale, e)).collect();
            if col.iter().any(|&v| v != 0) {
                gens.push(col);
            }
        }
        gens
    }

    /// Cokernel moduli: component `i` of `(ℤ/e)^m / col(A)` is ℤ/`moduli[i]`.
    pub fn cokernel_moduli(&self, rows_of_a: usize) -> Vec<u64> {
        (0..rows_of_a)
            .map(|i| self.diag.get(i).copied().unwrap_or(self.modulus))
            .collect()
    }

    /// Cokernel coordinates `P·x`, component-wise reduced.
    pub fn cokernel_coords(&self, x: &[u64]) -> Vec<u64> {
        let moduli = self.cokernel_moduli(self.p.rows);
        self.p
            .mul_vec(x)
            .into_iter()
            .zip(moduli)
            .map(|(v, d)| v % d)
            .collect()
    }
}

/// Solves `A·x ≡ b (mod e)`; returns one solution if any exists.
pub fn solve(a: &ModMatrix, b: &[u64]) -> Option<Vec<u64>> {
    let snf = smith_normal_form(a);
    solve_with(&snf, a.rows, a.cols, b)
}

/// Solves using a precomputed normal form of the `rows × cols` matrix.
pub fn solve_with(snf: &Snf, rows: usize, cols: usize, b: &[u64]) -> Option<Vec<u64>> {
    let e = snf.modulus;
    assert_eq!(b.len(), rows);
    let pb = snf.p.mul_vec(b);
    let mut y = vec![0u64; cols];
    for (i, &v) in pb.iter().enumerate() {
        if i < snf.diag.len() {
            let g = snf.diag[i];
            if g == e {
                if v != 0 {
                    return None;
                }
            } else {
                if v % g != 0 {
                    return None;
                }
                y[i] = v / g;
            }
        } else if v != 0 {
            return None;
        }
    }
    Some(snf.q.mul_vec(&y))
}

/// Scales row `i` of `a` by `e / row_moduli[i]` so that a congruence modulo
/// `row_moduli[i]` becomes a congruence modulo `e`.
pub fn lift_row_moduli(a: &ModMatrix, row_moduli: &[u64]) -> ModMatrix {
    let e = a.modulus;
    let mut out = a.clone();
    for (i, &n) in row_moduli.iter().enumerate() {
        let s = e / n;
        for j in 0..a.cols {
            let v = a.get(i, j);
            out.set(i, j, mulmod(v % n, s, e));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_snf(a: &ModMatrix) {
        let snf = smith_normal_form(a);
        let d = snf.p.mul(a).mul(&snf.q);
        let e = a.modulus();
        for i in 0..d.rows() {
            for j in 0..d.cols() {
                let expect = if i == j && i < snf.diag.len() {
                    snf.diag[i] % e
                } else {
                    0
                };
                assert_eq!(d.get(i, j), expect, "entry ({i},{j}) of P·A·Q");
            }
        }
        assert_eq!(snf.p.mul(&snf.p_inv), ModMatrix::identity(a.rows(), e));
        for w in snf.diag.windows(2) {
            assert_eq!(w[1] % w[0], 0, "divisibility chain {:?}", snf.diag);
        }
        for &g in &snf.diag {
            assert_eq!(e % g, 0);
        }
    }

    #[test]
    fn diagonalizes_small_matrices() {
        let a = ModMatrix::from_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]], 3, 12)
            .unwrap();
        check_snf(&a);
        let b = ModMatrix::from_rows(&[vec![2, 3], vec![0, 0]], 2, 6).unwrap();
        check_snf(&b);
        let snf = smith_normal_form(&b);
        assert_eq!(snf.diag, vec![1, 6]);
    }

    #[test]
    fn coprime_entries_merge_to_unit() {
        let a = ModMatrix::from_rows(&[vec![2, 0], vec![0, 3]], 2, 6).unwrap();
        let snf = smith_normal_form(&a);
        assert_eq!(snf.diag, vec![1, 6]);
        check_snf(&a);
    }

    #[test]
    fn kernel_of_doubling_mod_four() {
        let a = ModMatrix::from_rows(&[vec![2]], 1, 4).unwrap();
        let snf = smith_normal_form(&a);
        let gens = snf.kernel_generators(1);
        assert_eq!(gens, vec![vec![2]]);
    }

    #[test]
    fn solve_detects_inconsistency() {
        let a = ModMatrix::from_rows(&[vec![2, 0], vec![0, 0]], 2, 4).unwrap();
        assert!(solve(&a, &[1, 0]).is_none());
        assert!(solve(&a, &[0, 1]).is_none());
        let x = solve(&a, &[2, 0]).unwrap();
        assert_eq!(a.mul_vec(&x), vec![2, 0]);
    }

    #[test]
    fn normalizing_unit_hits_gcd() {
        for m in 1..40u64 {
            for a in 0..m {
                let u = normalizing_unit(a, m);
                assert_eq!(gcd(u, m), 1);
                if a != 0 {
                    assert_eq!(mulmod(u, a, m), gcd(a, m) % m);
                }
            }
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn snf_transforms_are_consistent(
                e in prop::sample::select(vec![2u64, 3, 4, 6, 8, 12, 30]),
                rows in 1usize..6, cols in 1usize..6,
                seed in prop::collection::vec(0i64..1000, 36),
            ) {
                let data: Vec<Vec<i64>> = (0..rows)
                    .map(|i| (0..cols).map(|j| seed[i * 6 + j]).collect())
                    .collect();
                let a = ModMatrix::from_rows(&data, cols, e).unwrap();
                check_snf(&a);
            }

            #[test]
            fn solve_finds_preimages(
                e in prop::sample::select(vec![2u64, 4, 6, 9, 12]),
                seed in prop::collection::vec(0i64..100, 16),
                x in prop::collection::vec(0u64..100, 4),
            ) {
                let data: Vec<Vec<i64>> = (0..4).map(|i| seed[i*4..i*4+4].to_vec()).collect();
                let a = ModMatrix::from_rows(&data, 4, e).unwrap();
                let x: Vec<u64> = x.iter().map(|v| v % e).collect();
                let b = a.mul_vec(&x);
                let sol = solve(&a, &b).expect("b is in the image");
                prop_assert_eq!(a.mul_vec(&sol), b);
            }
        }
    }
}
