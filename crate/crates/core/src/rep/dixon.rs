//! Character tables by Dixon's modular method.
//!
//! Class-sum structure constants act on `F_p^r`; their common eigenvectors
//! are the central characters `omega_chi`. Degrees follow from the
//! orthogonality relation, character values from `d omega / |C|`, and the
//! exact values from eigenvalue multiplicities of `rho(g)`, recovered mod
//! `p` with a fixed element of order `exp(G)`.

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::Cyclotomic;
use crate::error::{Error, Result};
use crate::group::{abelianization, GroupRef};

const PRIME_SEARCH_LIMIT: u64 = 1_000_000;
const RANDOM_ATTEMPTS: usize = 8;

pub(crate) fn powmod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

fn inv(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    powmod(a, p - 2, p)
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Least prime `p = 1 (mod e)` with `p > 2 sqrt(order)`.
pub fn dixon_prime(exponent: u64, order: usize) -> Result<u64> {
    let lower = 2.0 * (order as f64).sqrt();
    let mut p = exponent + 1;
    while p < PRIME_SEARCH_LIMIT {
        if (p as f64) > lower && is_prime(p) {
            return Ok(p);
        }
        p += exponent;
    }
    Err(Error::PrimeSearchFailed { exponent, lower: lower.ceil() as u64 })
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

fn primitive_root(p: u64) -> u64 {
    let qs = prime_factors(p - 1);
    (2..p).find(|&g| qs.iter().all(|&q| powmod(g, (p - 1) / q, p) != 1)).unwrap_or(1)
}

type Mat = Vec<Vec<u64>>;

/// Reduced row echelon form in place; returns pivot columns.
fn rref(m: &mut Mat, p: u64) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| m[i][c] != 0) else { continue };
        m.swap(r, piv);
        let iv = inv(m[r][c], p);
        for x in m[r].iter_mut() {
            *x = *x * iv % p;
        }
        for i in 0..rows {
            if i != r && m[i][c] != 0 {
                let f = m[i][c];
                let (src, dst) = if i < r {
                    let (a, b) = m.split_at_mut(r);
                    (&b[0], &mut a[i])
                } else {
                    let (a, b) = m.split_at_mut(i);
                    (&a[r], &mut b[0])
                };
                for (d, s) in dst.iter_mut().zip(src.iter()) {
                    *d = (*d + p - f * s % p) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    pivots
}

/// Right null space of a square matrix, as column vectors.
fn nullspace(m: &Mat, p: u64) -> Vec<Vec<u64>> {
    let n = m.len();
    let mut a = m.clone();
    let pivots = rref(&mut a, p);
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![0u64; n];
            v[f] = 1;
            for (row, &pc) in a.iter().zip(&pivots) {
                v[pc] = (p - row[f]) % p;
            }
            v
        })
        .collect()
}

/// Characteristic polynomial (low degree first) via Hessenberg reduction.
fn charpoly(m: &Mat, p: u64) -> Vec<u64> {
    let n = m.len();
    let mut h = m.clone();
    for k in 1..n.saturating_sub(1) {
        let Some(i) = (k..n).find(|&i| h[i][k - 1] != 0) else { continue };
        if i != k {
            h.swap(i, k);
            for row in h.iter_mut() {
                row.swap(i, k);
            }
        }
        let t = inv(h[k][k - 1], p);
        for i in k + 1..n {
            let u = h[i][k - 1] * t % p;
            if u == 0 {
                continue;
            }
            for j in 0..n {
                let v = u * h[k][j] % p;
                h[i][j] = (h[i][j] + p - v) % p;
            }
            for row in h.iter_mut() {
                row[k] = (row[k] + u * row[i]) % p;
            }
        }
    }
    let mut polys: Vec<Vec<u64>> = vec![vec![1]];
    for m in 1..=n {
        let prev = &polys[m - 1];
        let mut cur = vec![0u64; m + 1];
        for (i, &c) in prev.iter().enumerate() {
            cur[i + 1] = (cur[i + 1] + c) % p;
            cur[i] = (cur[i] + p - h[m - 1][m - 1] * c % p) % p;
        }
        let mut t = 1u64;
        for i in (1..m).rev() {
            t = t * h[i][i - 1] % p;
            let f = t * h[i - 1][m - 1] % p;
            if f == 0 {
                continue;
            }
            for (j, &c) in polys[i - 1].iter().enumerate() {
                cur[j] = (cur[j] + p - f * c % p) % p;
            }
        }
        polys.push(cur);
    }
    polys.pop().unwrap()
}

fn roots(poly: &[u64], p: u64) -> Vec<u64> {
    (0..p)
        .filter(|&x| poly.iter().rev().fold(0u64, |acc, &c| (acc * x + c) % p) == 0)
        .collect()
}

pub(crate) struct RawTable {
    pub exponent: u64,
    pub prime: u64,
    pub degrees: Vec<u64>,
    pub values: Vec<Vec<Cyclotomic>>,
}

struct ClassInfo {
    reps: Vec<usize>,
    sizes: Vec<usize>,
    class_of: Vec<usize>,
    members: Vec<Vec<usize>>,
}

fn class_info(group: &GroupRef) -> ClassInfo {
    let classes = group.conjugacy_classes();
    ClassInfo {
        reps: classes.iter().map(|c| c.representative).collect(),
        sizes: classes.iter().map(|c| c.size()).collect(),
        class_of: (0..group.order()).map(|g| group.class_index(g)).collect(),
        members: classes.iter().map(|c| c.members.clone()).collect(),
    }
}

/// `sum_i c_i M_i` with `(M_i)[j][k] = #{x in C_i : class(x^-1 z_k) = j}`.
fn class_combination(group: &GroupRef, info: &ClassInfo, coeffs: &[u64], p: u64) -> Mat {
    let r = info.reps.len();
    let mut a = vec![vec![0u64; r]; r];
    for (i, members) in info.members.iter().enumerate() {
        let c = coeffs[i] % p;
        if c == 0 {
            continue;
        }
        for &x in members {
            let xi = group.inv(x);
            for k in 0..r {
                let j = info.class_of[group.mul(xi, info.reps[k])];
                a[j][k] = (a[j][k] + c) % p;
            }
        }
    }
    a
}

/// Split `basis` (rows, RREF) by the eigenspaces of `a`; `None` if it does not split.
fn split(basis: &Mat, pivots: &[usize], a: &Mat, p: u64) -> Result<Option<Vec<Mat>>> {
    let d = basis.len();
    let r = a.len();
    // images A b_t expressed in basis coordinates
    let mut restricted = vec![vec![0u64; d]; d];
    for (t, b) in basis.iter().enumerate() {
        let image: Vec<u64> =
            (0..r).map(|j| a[j].iter().zip(b).fold(0u64, |acc, (&x, &y)| (acc + x * y) % p)).collect();
        for (s, &pc) in pivots.iter().enumerate() {
            restricted[s][t] = image[pc];
        }
    }
    let eig = roots(&charpoly(&restricted, p), p);
    if eig.len() <= 1 {
        return Ok(None);
    }
    let mut parts = Vec::new();
    let mut total = 0;
    for lambda in eig {
        let mut m = restricted.clone();
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = (row[i] + p - lambda) % p;
        }
        let ns = nullspace(&m, p);
        total += ns.len();
        let vecs: Mat = ns
            .iter()
            .map(|u| {
                let mut w = vec![0u64; r];
                for (coef, b) in u.iter().zip(basis) {
                    if *coef != 0 {
                        for (x, &y) in w.iter_mut().zip(b) {
                            *x = (*x + coef * y) % p;
                        }
                    }
                }
                w
            })
            .collect();
        parts.push(vecs);
    }
    if total != d {
        return Err(Error::CharacterTable(format!("eigenspaces of dimension {total} in a space of dimension {d}")));
    }
    Ok(Some(parts))
}

fn int_sqrt(n: u64) -> u64 {
    let mut s = (n as f64).sqrt() as u64;
    while s * s > n {
        s -= 1;
    }
    while (s + 1) * (s + 1) <= n {
        s += 1;
    }
    s
}

pub(crate) fn dixon(group: &GroupRef, seed: u64) -> Result<RawTable> {
    let order = group.order();
    let e = group.exponent();
    if group.is_abelian() {
        return Ok(abelian_table(group));
    }
    let p = dixon_prime(e, order)?;
    let info = class_info(group);
    let r = info.reps.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut done: Vec<Vec<u64>> = Vec::new();
    let mut pending: Vec<Mat> = vec![(0..r).map(|i| (0..r).map(|j| u64::from(i == j)).collect()).collect()];
    while let Some(mut basis) = pending.pop() {
        let pivots = rref(&mut basis, p);
        if basis.len() == 1 {
            done.push(basis.pop().unwrap());
            continue;
        }
        let mut parts = None;
        for _ in 0..RANDOM_ATTEMPTS {
            let coeffs: Vec<u64> = (0..r).map(|_| rng.gen_range(0..p)).collect();
            let a = class_combination(group, &info, &coeffs, p);
            parts = split(&basis, &pivots, &a, p)?;
            if parts.is_some() {
                break;
            }
        }
        if parts.is_none() {
            for i in 1..r {
                let mut coeffs = vec![0u64; r];
                coeffs[i] = 1;
                let a = class_combination(group, &info, &coeffs, p);
                parts = split(&basis, &pivots, &a, p)?;
                if parts.is_some() {
                    break;
                }
            }
        }
        match parts {
            Some(ps) => pending.extend(ps),
            None => {
                return Err(Error::CharacterTable(format!(
                    "common eigenspace of dimension {} does not split",
                    basis.len()
                )))
            }
        }
    }
    if done.len() != r {
        return Err(Error::CharacterTable(format!("{} characters for {r} classes", done.len())));
    }

    let inverse_class: Vec<usize> = info.reps.iter().map(|&x| info.class_of[group.inv(x)]).collect();
    let pow_class: Vec<Vec<usize>> =
        info.reps.iter().map(|&x| (0..e).map(|l| info.class_of[group.pow(x, l)]).collect()).collect();
    let z = powmod(primitive_root(p), (p - 1) / e, p);
    let zinv = inv(z, p);
    let e_inv = inv(e % p, p);
    let order_mod = order as u64 % p;

    let mut degrees = Vec::with_capacity(r);
    let mut values = Vec::with_capacity(r);
    for w in done {
        // scale so that omega(identity class) = 1
        let s = inv(w[0], p);
        let omega: Vec<u64> = w.iter().map(|&x| x * s % p).collect();
        let norm = (0..r).fold(0u64, |acc, k| {
            (acc + omega[k] * omega[inverse_class[k]] % p * inv(info.sizes[k] as u64 % p, p)) % p
        });
        let d2 = order_mod * inv(norm, p) % p;
        let bound = int_sqrt(order as u64);
        let d = (1..=bound)
            .find(|&d| d * d % p == d2)
            .ok_or_else(|| Error::CharacterTable("no degree matches the norm".into()))?;
        let chi_p: Vec<u64> =
            (0..r).map(|k| d * omega[k] % p * inv(info.sizes[k] as u64 % p, p) % p).collect();
        let mut row = Vec::with_capacity(r);
        for k in 0..r {
            // multiplicity of zeta^j as an eigenvalue of rho(rep_k)
            let mut mult = Vec::with_capacity(e as usize);
            for j in 0..e {
                let zj = powmod(zinv, j, p);
                let mut acc = 0u64;
                let mut zp = 1u64;
                for l in 0..e as usize {
                    acc = (acc + chi_p[pow_class[k][l]] * zp) % p;
                    zp = zp * zj % p;
                }
                let m = acc * e_inv % p;
                if m > d {
                    return Err(Error::CharacterTable(format!("eigenvalue multiplicity {m} exceeds degree {d}")));
                }
                mult.push(BigRational::from_integer(m.into()));
            }
            row.push(Cyclotomic::from_root_coeffs(e, &mult));
        }
        degrees.push(d);
        values.push(row);
    }
    Ok(RawTable { exponent: e, prime: p, degrees, values })
}

/// Linear characters read off the abelianization.
fn abelian_table(group: &GroupRef) -> RawTable {
    let e = group.exponent();
    let ab = abelianization(group);
    let factors = &ab.invariant_factors;
    let n = group.order();
    let info = class_info(group);
    let mut values = Vec::with_capacity(n);
    let mut t = vec![0u64; factors.len()];
    loop {
        let row = info
            .reps
            .iter()
            .map(|&g| {
                let k: u64 = factors
                    .iter()
                    .enumerate()
                    .map(|(j, &d)| t[j] * ab.projection[g][j] % d * (e / d))
                    .sum();
                Cyclotomic::root(e, (k % e) as i64)
            })
            .collect();
        values.push(row);
        let mut i = factors.len();
        let finished = loop {
            if i == 0 {
                break true;
            }
            i -= 1;
            t[i] += 1;
            if t[i] < factors[i] {
                break false;
            }
            t[i] = 0;
        };
        if finished {
            break;
        }
    }
    RawTable { exponent: e, prime: 0, degrees: vec![1; n], values }
}
