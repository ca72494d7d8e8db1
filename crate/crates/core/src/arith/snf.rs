//! Smith normal form over the integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type IntMatrix = Vec<Vec<BigInt>>;

/// Largest accepted dimension in either direction.
pub const SNF_DIM_BOUND: usize = 5000;

/// `U * A * V = diag(diagonal)` with `U`, `V` unimodular; `v_inv` is `V^-1`.
#[derive(Debug, Clone)]
pub struct SmithDecomposition {
    pub diagonal: Vec<BigInt>,
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
}

impl SmithDecomposition {
    /// Diagonal entries different from one (torsion and free parts of the cokernel).
    pub fn nontrivial_factors(&self) -> Vec<BigInt> {
        self.diagonal.iter().filter(|d| !d.is_one()).cloned().collect()
    }
}

pub fn int_matrix(rows: &[Vec<i64>]) -> IntMatrix {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

pub fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

pub fn mat_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    (0..inner)
                        .filter(|&k| !row[k].is_zero())
                        .fold(BigInt::zero(), |acc, k| acc + &row[k] * &b[k][j])
                })
                .collect()
        })
        .collect()
}

struct Work {
    a: IntMatrix,
    u: Option<IntMatrix>,
    v: Option<IntMatrix>,
    v_inv: Option<IntMatrix>,
    rows: usize,
    cols: usize,
}

fn axpy_row(m: &mut IntMatrix, dst: usize, src: usize, q: &BigInt) {
    // row dst += q * row src
    let (d, s) = if dst < src {
        let (lo, hi) = m.split_at_mut(src);
        (&mut lo[dst], &hi[0])
    } else {
        let (lo, hi) = m.split_at_mut(dst);
        (&mut hi[0], &lo[src])
    };
    for (x, y) in d.iter_mut().zip(s.iter()) {
        if !y.is_zero() {
            *x += q * y;
        }
    }
}

impl Work {
    /// row dst += q * row src
    fn row_add(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        axpy_row(&mut self.a, dst, src, q);
        if let Some(u) = self.u.as_mut() {
            axpy_row(u, dst, src, q);
        }
    }

    /// col dst += q * col src
    fn col_add(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for row in self.a.iter_mut() {
            if !row[src].is_zero() {
                let t = q * &row[src];
                row[dst] += t;
            }
        }
        if let Some(v) = self.v.as_mut() {
            for row in v.iter_mut() {
                if !row[src].is_zero() {
                    let t = q * &row[src];
                    row[dst] += t;
                }
            }
        }
        if let Some(vi) = self.v_inv.as_mut() {
            // V^-1 <- E^-1 V^-1: row src -= q * row dst
            axpy_row(vi, src, dst, &-q);
        }
    }

    fn row_swap(&mut self, i: usize, j: usize) {
        if i != j {
            self.a.swap(i, j);
            if let Some(u) = self.u.as_mut() {
                u.swap(i, j);
            }
        }
    }

    fn col_swap(&mut self, i: usize, j: usize) {
        if i != j {
            for row in self.a.iter_mut() {
                row.swap(i, j);
            }
            if let Some(v) = self.v.as_mut() {
                for row in v.iter_mut() {
                    row.swap(i, j);
                }
            }
            if let Some(vi) = self.v_inv.as_mut() {
                vi.swap(i, j);
            }
        }
    }

    fn row_negate(&mut self, i: usize) {
        for x in self.a[i].iter_mut() {
            *x = -&*x;
        }
        if let Some(u) = self.u.as_mut() {
            for x in u[i].iter_mut() {
                *x = -&*x;
            }
        }
    }

    fn smallest_in(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.rows {
            for j in t..self.cols {
                let x = &self.a[i][j];
                if x.is_zero() {
                    continue;
                }
                if best.is_none_or(|(bi, bj)| x.abs() < self.a[bi][bj].abs()) {
                    best = Some((i, j));
                    if x.abs().is_one() {
                        return best;
                    }
                }
            }
        }
        best
    }

    fn run(&mut self) {
        let steps = self.rows.min(self.cols);
        for t in 0..steps {
            let Some((pi, pj)) = self.smallest_in(t) else { break };
            self.row_swap(t, pi);
            self.col_swap(t, pj);
            loop {
                let mut dirty = false;
                for i in t + 1..self.rows {
                    if self.a[i][t].is_zero() {
                        continue;
                    }
                    let q = self.a[i][t].div_floor(&self.a[t][t]);
                    self.row_add(i, t, &-q);
                    if !self.a[i][t].is_zero() {
                        dirty = true;
                    }
                }
                for j in t + 1..self.cols {
                    if self.a[t][j].is_zero() {
                        continue;
                    }
                    let q = self.a[t][j].div_floor(&self.a[t][t]);
                    self.col_add(j, t, &-q);
                    if !self.a[t][j].is_zero() {
                        dirty = true;
                    }
                }
                if dirty {
                    // move the smallest remainder in row/column t to the pivot
                    let mut best = (t, t);
                    for i in t + 1..self.rows {
                        let x = &self.a[i][t];
                        if !x.is_zero() && x.abs() < self.a[best.0][best.1].abs() {
                            best = (i, t);
                        }
                    }
                    for j in t + 1..self.cols {
                        let x = &self.a[t][j];
                        if !x.is_zero() && x.abs() < self.a[best.0][best.1].abs() {
                            best = (t, j);
                        }
                    }
                    self.row_swap(t, best.0);
                    self.col_swap(t, best.1);
                    continue;
                }
                // divisibility: pivot must divide the remaining block
                let pivot = self.a[t][t].clone();
                let offender = (t + 1..self.rows).find(|&i| {
                    (t + 1..self.cols).any(|j| !self.a[i][j].is_multiple_of(&pivot))
                });
                match offender {
                    Some(i) => self.row_add(t, i, &BigInt::one()),
                    None => break,
                }
            }
            if self.a[t][t].is_negative() {
                self.row_negate(t);
            }
        }
    }
}

fn check_dims(a: &IntMatrix) -> Result<(usize, usize)> {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    if rows > SNF_DIM_BOUND || cols > SNF_DIM_BOUND {
        return Err(Error::SizeBound(format!("{rows}x{cols} exceeds {SNF_DIM_BOUND}")));
    }
    if a.iter().any(|r| r.len() != cols) {
        return Err(Error::Parse("ragged integer matrix".into()));
    }
    Ok((rows, cols))
}

/// Smith normal form with transforms.
pub fn smith_normal_form(a: &IntMatrix) -> Result<SmithDecomposition> {
    let (rows, cols) = check_dims(a)?;
    let mut w = Work {
        a: a.clone(),
        u: Some(identity(rows)),
        v: Some(identity(cols)),
        v_inv: Some(identity(cols)),
        rows,
        cols,
    };
    w.run();
    let diagonal = (0..rows.min(cols)).map(|i| w.a[i][i].clone()).collect();
    Ok(SmithDecomposition {
        diagonal,
        u: w.u.unwrap(),
        v: w.v.unwrap(),
        v_inv: w.v_inv.unwrap(),
    })
}

/// Diagonal of the Smith normal form only (no transforms).
pub fn smith_diagonal(a: &IntMatrix) -> Result<Vec<BigInt>> {
    let (rows, cols) = check_dims(a)?;
    let mut w = Work { a: a.clone(), u: None, v: None, v_inv: None, rows, cols };
    w.run();
    Ok((0..rows.min(cols)).map(|i| w.a[i][i].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn check(a: &IntMatrix, d: &SmithDecomposition) {
        let prod = mat_mul(&mat_mul(&d.u, a), &d.v);
        for (i, row) in prod.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                if i == j {
                    assert_eq!(x, &d.diagonal[i]);
                } else {
                    assert!(x.is_zero(), "off-diagonal entry at ({i},{j})");
                }
            }
        }
        assert_eq!(mat_mul(&d.v, &d.v_inv), identity(d.v.len()));
        for w in d.diagonal.windows(2) {
            if !w[1].is_zero() {
                assert!(w[1].is_multiple_of(&w[0]), "{:?} does not divide", w);
            }
            if w[0].is_zero() {
                assert!(w[1].is_zero());
            }
        }
    }

    #[test]
    fn diag_six_four() {
        let a = int_matrix(&[vec![6, 0], vec![0, 4]]);
        let d = smith_normal_form(&a).unwrap();
        check(&a, &d);
        assert_eq!(d.diagonal, vec![BigInt::from(2), BigInt::from(12)]);
    }

    #[test]
    fn identity_and_zero() {
        let a = identity(3);
        let d = smith_normal_form(&a).unwrap();
        assert!(d.diagonal.iter().all(|x| x.is_one()));
        let z = int_matrix(&[vec![0]]);
        assert_eq!(smith_normal_form(&z).unwrap().diagonal, vec![BigInt::zero()]);
    }

    #[test]
    fn rectangular() {
        let a = int_matrix(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16], vec![1, 0, 0]]);
        let d = smith_normal_form(&a).unwrap();
        check(&a, &d);
        assert_eq!(smith_diagonal(&a).unwrap(), d.diagonal);
    }

    #[test]
    fn size_guard() {
        let a: IntMatrix = vec![vec![BigInt::zero(); 1]; SNF_DIM_BOUND + 1];
        assert!(matches!(smith_normal_form(&a), Err(Error::SizeBound(_))));
    }

    fn unimodular(seed: &[(usize, usize, i64)], n: usize) -> IntMatrix {
        let mut m = identity(n);
        for &(i, j, q) in seed {
            let (i, j) = (i % n, j % n);
            if i != j {
                axpy_row(&mut m, i, j, &BigInt::from(q));
            }
        }
        m
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn invariant_under_unimodular_change(
            entries in proptest::collection::vec(-9i64..10, 12),
            ops_l in proptest::collection::vec((0usize..4, 0usize..4, -3i64..4), 0..6),
            ops_r in proptest::collection::vec((0usize..3, 0usize..3, -3i64..4), 0..6),
        ) {
            let a: IntMatrix = entries.chunks(3).map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
            let d0 = smith_normal_form(&a).unwrap();
            check(&a, &d0);
            let b = mat_mul(&mat_mul(&unimodular(&ops_l, 4), &a), &unimodular(&ops_r, 3));
            let d1 = smith_normal_form(&b).unwrap();
            check(&b, &d1);
            prop_assert_eq!(d0.diagonal, d1.diagonal);
        }
    }
}
