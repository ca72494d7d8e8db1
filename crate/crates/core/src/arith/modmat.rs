//! Dense linear algebra over `Z/n` based on the Howell form.
//!
//! `Z/n` is not a field for composite `n`, so plain row echelon form does
//! not determine the row space. The Howell form does: it is canonical and
//! it keeps, for every `k`, a spanning set of the row-space vectors that
//! vanish in the first `k` columns. Kernels, solutions and membership tests
//! are all read off from it.

use crate::error::{Error, Result};

#[inline]
pub fn mulmod(a: u64, b: u64, n: u64) -> u64 {
    if n <= u32::MAX as u64 {
        (a % n) * (b % n) % n
    } else {
        ((a as u128 * b as u128) % n as u128) as u64
    }
}

#[inline]
fn submod(a: u64, b: u64, n: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + n - b
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `(g, s, t)` with `s a + t b = g = gcd(a, b)`.
pub fn xgcd(a: i128, b: i128) -> (i128, i128, i128) {
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

fn to_mod(x: i128, n: u64) -> u64 {
    x.rem_euclid(n as i128) as u64
}

/// Unit `u` of `Z/n` with `u a = gcd(a, n) (mod n)`.
pub fn normalizing_unit(a: u64, n: u64) -> u64 {
    if n == 1 {
        return 0;
    }
    let g = gcd(a, n);
    let (a1, n1) = (a / g, n / g);
    let (_, s, _) = xgcd(a1 as i128, n1 as i128);
    let u0 = to_mod(s, n1.max(1));
    // lift u0 mod n1 to a unit mod n
    let mut u = u0;
    while gcd(u, n) != 1 {
        u += n1;
    }
    u % n
}

/// Matrix over `Z/n`; rows are stored explicitly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModMatrix {
    modulus: u64,
    cols: usize,
    rows: Vec<Vec<u64>>,
}

/// Particular solution plus a generating set of the homogeneous solutions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModSolution {
    pub particular: Vec<u64>,
    pub kernel: Vec<Vec<u64>>,
}

impl ModMatrix {
    pub fn new(modulus: u64, cols: usize, rows: Vec<Vec<u64>>) -> Self {
        assert!(modulus >= 1, "modulus must be positive");
        let rows = rows
            .into_iter()
            .map(|r| {
                assert_eq!(r.len(), cols, "row length mismatch");
                r.into_iter().map(|x| x % modulus).collect()
            })
            .collect();
        ModMatrix { modulus, cols, rows }
    }

    pub fn from_signed(modulus: u64, cols: usize, rows: &[Vec<i64>]) -> Self {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&x| to_mod(x as i128, modulus)).collect())
            .collect();
        ModMatrix::new(modulus, cols, rows)
    }

    pub fn zero(modulus: u64, rows: usize, cols: usize) -> Self {
        ModMatrix::new(modulus, cols, vec![vec![0; cols]; rows])
    }

    pub fn identity(modulus: u64, n: usize) -> Self {
        let rows = (0..n)
            .map(|i| (0..n).map(|j| u64::from(i == j)).collect())
            .collect();
        ModMatrix::new(modulus, n, rows)
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<Vec<u64>> {
        self.rows
    }

    pub fn push_row(&mut self, row: Vec<u64>) {
        assert_eq!(row.len(), self.cols);
        let n = self.modulus;
        self.rows.push(row.into_iter().map(|x| x % n).collect());
    }

    /// `A x` for a column vector `x`.
    pub fn apply(&self, x: &[u64]) -> Vec<u64> {
        assert_eq!(x.len(), self.cols);
        let n = self.modulus;
        self.rows
            .iter()
            .map(|r| r.iter().zip(x).fold(0, |acc, (&a, &b)| (acc + mulmod(a, b, n)) % n))
            .collect()
    }

    pub fn transpose(&self) -> ModMatrix {
        let rows = (0..self.cols)
            .map(|j| self.rows.iter().map(|r| r[j]).collect())
            .collect();
        ModMatrix { modulus: self.modulus, cols: self.rows.len(), rows }
    }

    /// Canonical Howell form of the row space; zero rows are dropped.
    pub fn howell_form(&self) -> ModMatrix {
        let rows = howell(self.rows.clone(), self.modulus, self.cols);
        ModMatrix { modulus: self.modulus, cols: self.cols, rows }
    }

    /// Right kernel `{ x : A x = 0 }` as a Howell-form generating set.
    pub fn kernel(&self) -> ModMatrix {
        let n = self.modulus;
        let m = self.cols;
        let reduced = self.howell_form();
        let r = reduced.nrows();
        // rows (column j of A | e_j); rows vanishing on the first block span the kernel
        let aug: Vec<Vec<u64>> = (0..m)
            .map(|j| {
                let mut row: Vec<u64> = reduced.rows.iter().map(|rr| rr[j]).collect();
                row.extend((0..m).map(|k| u64::from(k == j)));
                row
            })
            .collect();
        let h = howell(aug, n, r + m);
        let kernel: Vec<Vec<u64>> = h
            .into_iter()
            .filter(|row| row[..r].iter().all(|&x| x == 0))
            .map(|row| row[r..].to_vec())
            .collect();
        ModMatrix { modulus: n, cols: m, rows: kernel }.howell_form()
    }

    /// Solve `A x = b`, or report [`Error::Unsolvable`].
    pub fn solve(&self, b: &[u64]) -> Result<ModSolution> {
        assert_eq!(b.len(), self.rows.len(), "right-hand side has wrong length");
        let n = self.modulus;
        // unknowns (t, x) with A x - t b = 0
        let rows: Vec<Vec<u64>> = self
            .rows
            .iter()
            .zip(b)
            .map(|(r, &bi)| {
                let mut row = vec![submod(0, bi % n, n)];
                row.extend_from_slice(r);
                row
            })
            .collect();
        let aug = ModMatrix { modulus: n, cols: self.cols + 1, rows };
        let ker = aug.kernel();
        if n == 1 {
            return Ok(ModSolution { particular: vec![0; self.cols], kernel: vec![] });
        }
        let mut particular = None;
        let mut kernel = Vec::new();
        for row in ker.rows {
            if row[0] == 0 {
                kernel.push(row[1..].to_vec());
            } else if row[0] == 1 {
                particular = Some(row[1..].to_vec());
            }
        }
        match particular {
            Some(p) => Ok(ModSolution { particular: p, kernel }),
            None => Err(Error::Unsolvable),
        }
    }
}

/// Coordinates and membership relative to a Howell basis.
#[derive(Debug, Clone)]
pub struct HowellBasis {
    modulus: u64,
    cols: usize,
    rows: Vec<Vec<u64>>,
    pivots: Vec<(usize, u64)>,
}

impl HowellBasis {
    pub fn new(m: &ModMatrix) -> Self {
        let h = m.howell_form();
        let pivots = h
            .rows
            .iter()
            .map(|r| {
                let c = r.iter().position(|&x| x != 0).expect("Howell rows are nonzero");
                (c, r[c])
            })
            .collect();
        HowellBasis { modulus: h.modulus, cols: h.cols, rows: h.rows, pivots }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.rows
    }

    /// `(column, pivot value)` per row; pivot values divide the modulus.
    pub fn pivots(&self) -> &[(usize, u64)] {
        &self.pivots
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Reduce `v` against the basis; the result is zero iff `v` is in the row space.
    pub fn reduce(&self, v: &[u64]) -> Vec<u64> {
        self.reduce_with_coords(v).0
    }

    fn reduce_with_coords(&self, v: &[u64]) -> (Vec<u64>, Vec<u64>) {
        let n = self.modulus;
        let mut v: Vec<u64> = v.iter().map(|&x| x % n).collect();
        let mut coords = vec![0u64; self.rows.len()];
        for (i, (row, &(c, p))) in self.rows.iter().zip(&self.pivots).enumerate() {
            let q = v[c] / p;
            if q != 0 {
                coords[i] = q;
                for (x, &y) in v.iter_mut().zip(row) {
                    *x = submod(*x, mulmod(q, y, n), n);
                }
            }
        }
        (v, coords)
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Integer coefficients `c` with `v = sum c_i row_i (mod n)`, if `v` is a member.
    pub fn coordinates(&self, v: &[u64]) -> Option<Vec<u64>> {
        let (rest, coords) = self.reduce_with_coords(v);
        rest.iter().all(|&x| x == 0).then_some(coords)
    }

    pub fn combine(&self, coeffs: &[u64]) -> Vec<u64> {
        let n = self.modulus;
        let mut out = vec![0u64; self.cols];
        for (row, &c) in self.rows.iter().zip(coeffs) {
            let c = c % n;
            if c == 0 {
                continue;
            }
            for (x, &y) in out.iter_mut().zip(row) {
                *x = (*x + mulmod(c, y, n)) % n;
            }
        }
        out
    }
}

fn scale(row: &[u64], k: u64, n: u64) -> Vec<u64> {
    row.iter().map(|&x| mulmod(x, k, n)).collect()
}

fn lin2(a: &[u64], ka: u64, b: &[u64], kb: u64, n: u64) -> Vec<u64> {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| (mulmod(x, ka, n) + mulmod(y, kb, n)) % n)
        .collect()
}

fn howell(rows: Vec<Vec<u64>>, n: u64, cols: usize) -> Vec<Vec<u64>> {
    if n == 1 {
        return Vec::new();
    }
    let mut result: Vec<Vec<u64>> = Vec::new();
    let mut pending: Vec<Vec<u64>> = rows.into_iter().filter(|r| r.iter().any(|&x| x != 0)).collect();
    for c in 0..cols {
        let mut pivot: Option<Vec<u64>> = None;
        let mut rest = Vec::with_capacity(pending.len());
        for row in pending.drain(..) {
            if row[c] == 0 {
                rest.push(row);
                continue;
            }
            match pivot.take() {
                None => pivot = Some(row),
                Some(p) => {
                    let (a, b) = (p[c], row[c]);
                    let (g, s, t) = xgcd(a as i128, b as i128);
                    let new_p = lin2(&p, to_mod(s, n), &row, to_mod(t, n), n);
                    let other = lin2(&p, to_mod(b as i128 / g, n), &row, to_mod(-(a as i128 / g), n), n);
                    debug_assert_eq!(other[c], 0);
                    if other.iter().any(|&x| x != 0) {
                        rest.push(other);
                    }
                    pivot = Some(new_p);
                }
            }
        }
        if let Some(p) = pivot {
            let u = normalizing_unit(p[c], n);
            let p = scale(&p, u, n);
            let g = p[c];
            if g != 0 {
                for r in result.iter_mut() {
                    let q = r[c].checked_div(g).unwrap_or(0);
                    if q != 0 {
                        for (x, &y) in r.iter_mut().zip(&p) {
                            *x = submod(*x, mulmod(q, y, n), n);
                        }
                    }
                }
                let extra = scale(&p, n / g, n);
                if extra.iter().any(|&x| x != 0) {
                    rest.push(extra);
                }
                result.push(p);
            }
        }
        pending = rest;
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Brute-force row space for tiny cases.
    fn span(m: &ModMatrix) -> Vec<Vec<u64>> {
        let n = m.modulus();
        let k = m.nrows();
        let mut out = std::collections::BTreeSet::new();
        let total = (n as usize).pow(k as u32);
        for idx in 0..total {
            let mut coeff = Vec::with_capacity(k);
            let mut t = idx;
            for _ in 0..k {
                coeff.push((t % n as usize) as u64);
                t /= n as usize;
            }
            let mut v = vec![0u64; m.cols()];
            for (row, &c) in m.rows().iter().zip(&coeff) {
                for (x, &y) in v.iter_mut().zip(row) {
                    *x = (*x + c * y) % n;
                }
            }
            out.insert(v);
        }
        out.into_iter().collect()
    }

    #[test]
    fn zero_matrix() {
        let z = ModMatrix::zero(6, 3, 3);
        assert_eq!(z.howell_form().nrows(), 0);
    }

    #[test]
    fn identity_mod_six() {
        let id = ModMatrix::identity(6, 3);
        assert_eq!(id.howell_form(), id);
    }

    #[test]
    fn two_mod_four() {
        let m = ModMatrix::new(4, 1, vec![vec![2]]);
        let h = HowellBasis::new(&m);
        assert_eq!(h.rows(), &[vec![2]]);
        assert!(h.contains(&[2]));
        assert!(h.contains(&[0]));
        assert!(!h.contains(&[1]));
        assert!(!h.contains(&[3]));
    }

    #[test]
    fn howell_property_example() {
        // [[2, 1]] over Z/4: the row space contains (0, 2) which must appear
        let m = ModMatrix::new(4, 2, vec![vec![2, 1]]);
        let h = m.howell_form();
        assert_eq!(h.rows(), &[vec![2, 1], vec![0, 2]]);
    }

    #[test]
    fn solve_identity() {
        let id = ModMatrix::identity(7, 3);
        let sol = id.solve(&[1, 5, 6]).unwrap();
        assert_eq!(sol.particular, vec![1, 5, 6]);
        assert!(sol.kernel.is_empty());
    }

    #[test]
    fn solve_parity() {
        let a = ModMatrix::new(4, 1, vec![vec![2]]);
        assert!(matches!(a.solve(&[1]), Err(Error::Unsolvable)));
        let sol = a.solve(&[2]).unwrap();
        assert_eq!(a.apply(&sol.particular), vec![2]);
        assert_eq!(sol.particular, vec![1]);
        assert_eq!(sol.kernel, vec![vec![2]]);
    }

    #[test]
    fn normalizing_units() {
        for n in 1..40u64 {
            for a in 0..n {
                let u = normalizing_unit(a, n);
                if n > 1 {
                    assert_eq!(gcd(u, n), 1);
                    assert_eq!(mulmod(u, a, n), gcd(a, n) % n);
                }
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(96))]
        #[test]
        fn howell_canonical_and_spans(
            n in prop::sample::select(vec![4u64, 6, 8, 9, 12]),
            entries in proptest::collection::vec(0u64..36, 6),
            mix in proptest::collection::vec(0u64..36, 4),
        ) {
            let m = ModMatrix::new(n, 3, entries.chunks(3).map(|c| c.to_vec()).collect());
            let h = m.howell_form();
            // idempotent
            prop_assert_eq!(h.howell_form(), h.clone());
            // same row space as brute force
            prop_assert_eq!(span(&m), span(&h));
            // stable under row operations: add a multiple of row 1 to row 0 and scale by a unit
            let mut rows = m.rows().to_vec();
            let k = mix[0] % n;
            for j in 0..3 { rows[0][j] = (rows[0][j] + k * rows[1][j]) % n; }
            rows.swap(0, 1);
            let m2 = ModMatrix::new(n, 3, rows);
            prop_assert_eq!(m2.howell_form(), h.clone());
            // membership agrees with enumeration
            let basis = HowellBasis::new(&m);
            let all = span(&m);
            let v = vec![mix[1] % n, mix[2] % n, mix[3] % n];
            prop_assert_eq!(basis.contains(&v), all.contains(&v));
            if let Some(c) = basis.coordinates(&v) {
                prop_assert_eq!(basis.combine(&c), v);
            }
        }

        #[test]
        fn kernel_and_solve(
            n in prop::sample::select(vec![4u64, 6, 8, 12]),
            entries in proptest::collection::vec(0u64..24, 6),
            b in proptest::collection::vec(0u64..24, 2),
        ) {
            let a = ModMatrix::new(n, 3, entries.chunks(3).map(|c| c.to_vec()).collect());
            let ker = a.kernel();
            for row in ker.rows() {
                prop_assert!(a.apply(row).iter().all(|&x| x == 0));
            }
            // exhaustive: every solution of A x = 0 lies in the kernel span
            let kb = HowellBasis::new(&ker);
            let b: Vec<u64> = b.iter().map(|x| x % n).collect();
            let mut any_solution = false;
            for x0 in 0..n { for x1 in 0..n { for x2 in 0..n {
                let x = vec![x0, x1, x2];
                let ax = a.apply(&x);
                if ax.iter().all(|&v| v == 0) {
                    prop_assert!(kb.contains(&x));
                }
                if ax == b { any_solution = true; }
            }}}
            match a.solve(&b) {
                Ok(sol) => {
                    prop_assert!(any_solution);
                    prop_assert_eq!(a.apply(&sol.particular), b);
                    for k in &sol.kernel {
                        prop_assert!(a.apply(k).iter().all(|&x| x == 0));
                    }
                }
                Err(_) => prop_assert!(!any_solution),
            }
        }
    }
}
