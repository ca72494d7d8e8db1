//! Generator-based parametrization of normalized 2-cocycles.
//!
//! A normalized cocycle `e` is determined by the values `f(x, s) = e(x, s)`
//! for `s` in a generating set: the identity with `sigma = s` reads
//! `e(x, ys) = e(x, y) + e(xy, s) - e(y, s)`, which fills in the table along
//! a spanning tree of the Cayley graph. The table is a cocycle iff the same
//! recursion is consistent on the non-tree edges; checking the identity for
//! generators only is enough because the defect is itself a 3-cocycle.

use crate::arith::ModMatrix;
use crate::group::GroupRef;

#[derive(Debug, Clone)]
pub struct GeneratorFrame {
    group: GroupRef,
    gens: Vec<usize>,
    visit: Vec<usize>,
    parent: Vec<Option<(usize, usize)>>,
}

impl GeneratorFrame {
    pub fn new(group: &GroupRef) -> Self {
        let gens = group.generators();
        let (visit, parent) = group.cayley_tree(&gens);
        GeneratorFrame { group: group.clone(), gens, visit, parent }
    }

    pub fn group(&self) -> &GroupRef {
        &self.group
    }

    pub fn gens(&self) -> &[usize] {
        &self.gens
    }

    /// Number of free parameters `f(x, s)`, `x != 1`.
    pub fn unknowns(&self) -> usize {
        self.group.order().saturating_sub(1) * self.gens.len()
    }

    fn var(&self, x: usize, i: usize) -> Option<usize> {
        (x != 0).then(|| (x - 1) * self.gens.len() + i)
    }

    /// Parameters of a full exponent table.
    pub fn params_of(&self, table: &[u64]) -> Vec<u64> {
        let n = self.group.order();
        let mut out = Vec::with_capacity(self.unknowns());
        for x in 1..n {
            for &s in &self.gens {
                out.push(table[x * n + s]);
            }
        }
        out
    }

    /// Full exponent table from parameters (only meaningful for solutions).
    pub fn expand(&self, f: &[u64], modulus: u64) -> Vec<u64> {
        let n = self.group.order();
        let fv = |x: usize, i: usize| self.var(x, i).map_or(0, |v| f[v]);
        let mut t = vec![0u64; n * n];
        for x in 0..n {
            for &y in &self.visit[1..] {
                let (p, i) = self.parent[y].expect("tree covers the group");
                let xp = self.group.mul(x, p);
                let val = t[x * n + p] as i128 + fv(xp, i) as i128 - fv(p, i) as i128;
                t[x * n + y] = val.rem_euclid(modulus as i128) as u64;
            }
        }
        t
    }

    /// Integer linear forms (in the parameters) of every table entry `T(x, y)`.
    fn linear_forms(&self) -> Vec<Vec<i32>> {
        let n = self.group.order();
        let u = self.unknowns();
        let mut forms = vec![Vec::new(); n * n];
        for x in 0..n {
            forms[x * n] = vec![0i32; u];
            for &y in &self.visit[1..] {
                let (p, i) = self.parent[y].unwrap();
                let mut row = forms[x * n + p].clone();
                if let Some(v) = self.var(self.group.mul(x, p), i) {
                    row[v] += 1;
                }
                if let Some(v) = self.var(p, i) {
                    row[v] -= 1;
                }
                forms[x * n + y] = row;
            }
        }
        forms
    }

    /// Consistency equations on non-tree edges; their kernel is `Z^2` in
    /// parameter coordinates.
    pub fn equations(&self, modulus: u64) -> ModMatrix {
        let n = self.group.order();
        let u = self.unknowns();
        let forms = self.linear_forms();
        let mut rows = Vec::new();
        for x in 0..n {
            for y in 0..n {
                for (i, &s) in self.gens.iter().enumerate() {
                    let ys = self.group.mul(y, s);
                    if self.parent[ys] == Some((y, i)) {
                        continue;
                    }
                    let mut row: Vec<i64> = forms[x * n + y]
                        .iter()
                        .zip(&forms[x * n + ys])
                        .map(|(&a, &b)| (a - b) as i64)
                        .collect();
                    if let Some(v) = self.var(self.group.mul(x, y), i) {
                        row[v] += 1;
                    }
                    if let Some(v) = self.var(y, i) {
                        row[v] -= 1;
                    }
                    let m = modulus as i64;
                    let reduced: Vec<u64> = row.iter().map(|&a| a.rem_euclid(m) as u64).collect();
                    if reduced.iter().any(|&a| a != 0) {
                        rows.push(reduced);
                    }
                }
            }
        }
        ModMatrix::new(modulus, u, rows)
    }
}
