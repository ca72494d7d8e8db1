//! Finite groups materialized as Cayley tables.
//!
//! Elements are indices `0..order`, with `0` always the identity. Every
//! constructor fixes its element numbering so that downstream output is
//! byte-stable.

mod abelian;
mod spec;
mod subgroup;

pub use abelian::{abelianization, Abelianization};
pub use spec::GroupSpec;
pub use subgroup::{all_subgroups, centralizer, coset_space, CosetSpace, Subgroup};

use std::collections::VecDeque;
use std::sync::{Arc, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Default bound on group orders, overridable through `MOTIVELAB_MAX_ORDER`.
pub const DEFAULT_MAX_ORDER: usize = 2048;

/// Orders up to this size get an exhaustive associativity check.
const EXHAUSTIVE_ASSOC_LIMIT: usize = 64;
const SAMPLED_TRIPLES: usize = 10_000;

pub fn max_order() -> usize {
    std::env::var("MOTIVELAB_MAX_ORDER")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_ORDER)
}

pub type GroupRef = Arc<FiniteGroup>;

/// A conjugacy class: `representative` is its least element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjugacyClass {
    pub representative: usize,
    pub members: Vec<usize>,
}

impl ConjugacyClass {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

#[derive(Debug)]
struct ClassData {
    classes: Vec<ConjugacyClass>,
    class_of: Vec<usize>,
}

#[derive(Debug)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<u32>,
    inverses: Vec<usize>,
    label: String,
    classes: OnceLock<ClassData>,
    char_table: OnceLock<Arc<crate::rep::CharacterTable>>,
}

impl Clone for FiniteGroup {
    fn clone(&self) -> Self {
        FiniteGroup {
            order: self.order,
            table: self.table.clone(),
            inverses: self.inverses.clone(),
            label: self.label.clone(),
            classes: OnceLock::new(),
            char_table: OnceLock::new(),
        }
    }
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.table == other.table
    }
}

impl Eq for FiniteGroup {}

impl FiniteGroup {
    /// Builds a group from a full operation table, validating every axiom.
    ///
    /// If the identity is not element 0 the table is relabeled by swapping
    /// the identity with 0.
    pub fn from_table(rows: Vec<Vec<usize>>, label: impl Into<String>) -> Result<Self> {
        let order = rows.len();
        if order == 0 {
            return Err(Error::NotClosed("empty table".into()));
        }
        let bound = max_order();
        if order > bound {
            return Err(Error::OrderBound { order, bound });
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != order {
                return Err(Error::NotClosed(format!("row {i} has length {}", row.len())));
            }
            if let Some(&bad) = row.iter().find(|&&x| x >= order) {
                return Err(Error::NotClosed(format!("entry {bad} in row {i} is out of range")));
            }
        }
        let identity = (0..order)
            .find(|&e| (0..order).all(|x| rows[e][x] == x && rows[x][e] == x))
            .ok_or(Error::NoIdentity)?;
        // relabel so the identity is 0
        let relabel = |x: usize| -> usize {
            if x == identity {
                0
            } else if x == 0 {
                identity
            } else {
                x
            }
        };
        let mut table = vec![0u32; order * order];
        for a in 0..order {
            for b in 0..order {
                let prod = rows[relabel(a)][relabel(b)];
                table[a * order + b] = relabel(prod) as u32;
            }
        }
        // Latin square check gives inverses and cancellation
        for a in 0..order {
            let mut seen = vec![false; order];
            for b in 0..order {
                let p = table[a * order + b] as usize;
                if seen[p] {
                    return Err(Error::NotClosed(format!("row {a} repeats element {p}")));
                }
                seen[p] = true;
            }
        }
        let mut inverses = vec![usize::MAX; order];
        for a in 0..order {
            for b in 0..order {
                if table[a * order + b] == 0 {
                    inverses[a] = b;
                    break;
                }
            }
        }
        for a in 0..order {
            if table[inverses[a] * order + a] != 0 {
                return Err(Error::NotClosed(format!("element {a} has no two-sided inverse")));
            }
        }
        let group = FiniteGroup {
            order,
            table,
            inverses,
            label: label.into(),
            classes: OnceLock::new(),
            char_table: OnceLock::new(),
        };
        group.check_associative()?;
        Ok(group)
    }

    /// Trusted constructor for tables generated by the built-in constructors.
    pub(crate) fn from_trusted(order: usize, table: Vec<u32>, label: String) -> Result<Self> {
        let bound = max_order();
        if order > bound {
            return Err(Error::OrderBound { order, bound });
        }
        let mut inverses = vec![0; order];
        for a in 0..order {
            inverses[a] = (0..order)
                .find(|&b| table[a * order + b] == 0)
                .ok_or(Error::NoIdentity)?;
        }
        Ok(FiniteGroup {
            order,
            table,
            inverses,
            label,
            classes: OnceLock::new(),
            char_table: OnceLock::new(),
        })
    }

    fn check_associative(&self) -> Result<()> {
        let n = self.order;
        if n <= EXHAUSTIVE_ASSOC_LIMIT {
            for a in 0..n {
                for b in 0..n {
                    let ab = self.mul(a, b);
                    for c in 0..n {
                        if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                            return Err(Error::NonAssociative(a, b, c));
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0);
            for _ in 0..SAMPLED_TRIPLES {
                let (a, b, c) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
                if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                    return Err(Error::NonAssociative(a, b, c));
                }
            }
        }
        Ok(())
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn identity(&self) -> usize {
        0
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn inverses(&self) -> &[usize] {
        &self.inverses
    }

    /// `g x g^-1`.
    #[inline]
    pub fn conjugate(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    /// `a b a^-1 b^-1`.
    pub fn commutator(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b)))
    }

    pub fn pow(&self, g: usize, k: u64) -> usize {
        let mut acc = 0;
        let mut base = g;
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    pub fn element_order(&self, g: usize) -> u64 {
        let mut x = g;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    /// Least common multiple of the element orders.
    pub fn exponent(&self) -> u64 {
        (0..self.order).fold(1u64, |acc, g| num_integer::lcm(acc, self.element_order(g)))
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn cayley_rows(&self) -> Vec<Vec<usize>> {
        (0..self.order)
            .map(|a| (0..self.order).map(|b| self.mul(a, b)).collect())
            .collect()
    }

    fn class_data(&self) -> &ClassData {
        self.classes.get_or_init(|| {
            let n = self.order;
            let mut class_of = vec![usize::MAX; n];
            let mut raw: Vec<Vec<usize>> = Vec::new();
            for x in 0..n {
                if class_of[x] != usize::MAX {
                    continue;
                }
                let mut members: Vec<usize> = (0..n).map(|g| self.conjugate(g, x)).collect();
                members.sort_unstable();
                members.dedup();
                for &m in &members {
                    class_of[m] = raw.len();
                }
                raw.push(members);
            }
            let mut order: Vec<usize> = (0..raw.len()).collect();
            order.sort_by_key(|&i| (raw[i].len(), raw[i][0]));
            let mut rank = vec![0; raw.len()];
            for (new, &old) in order.iter().enumerate() {
                rank[old] = new;
            }
            let classes = order
                .iter()
                .map(|&i| ConjugacyClass {
                    representative: raw[i][0],
                    members: raw[i].clone(),
                })
                .collect();
            let class_of = class_of.into_iter().map(|c| rank[c]).collect();
            ClassData { classes, class_of }
        })
    }

    /// Conjugacy classes sorted by `(size, least member)`; the identity class
    /// is always first.
    pub fn conjugacy_classes(&self) -> &[ConjugacyClass] {
        &self.class_data().classes
    }

    pub fn class_count(&self) -> usize {
        self.class_data().classes.len()
    }

    /// Index into [`conjugacy_classes`](Self::conjugacy_classes) of the class containing `g`.
    pub fn class_index(&self, g: usize) -> usize {
        self.class_data().class_of[g]
    }

    /// Closure of `gens` under multiplication, as a sorted element list.
    pub fn generate(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order];
        seen[0] = true;
        let mut queue = VecDeque::from([0usize]);
        let mut out = vec![0usize];
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    out.push(y);
                    queue.push_back(y);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// A small generating set, chosen greedily by decreasing element order.
    pub fn generators(&self) -> Vec<usize> {
        let mut candidates: Vec<usize> = (1..self.order).collect();
        candidates.sort_by_key(|&g| (std::cmp::Reverse(self.element_order(g)), g));
        let mut gens = Vec::new();
        let mut span = vec![false; self.order];
        span[0] = true;
        let mut covered = 1;
        for g in candidates {
            if covered == self.order {
                break;
            }
            if !span[g] {
                gens.push(g);
                span.iter_mut().for_each(|s| *s = false);
                let members = self.generate(&gens);
                covered = members.len();
                for m in members {
                    span[m] = true;
                }
            }
        }
        gens
    }

    /// Breadth-first spanning tree of the right Cayley graph for `gens`:
    /// returns `(visit order, parent edge)` where `parent[y] = Some((x, i))`
    /// means `y = x * gens[i]`.
    pub fn cayley_tree(&self, gens: &[usize]) -> (Vec<usize>, Vec<Option<(usize, usize)>>) {
        let mut parent = vec![None; self.order];
        let mut seen = vec![false; self.order];
        seen[0] = true;
        let mut visit = vec![0usize];
        let mut head = 0;
        while head < visit.len() {
            let x = visit[head];
            head += 1;
            for (i, &g) in gens.iter().enumerate() {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    parent[y] = Some((x, i));
                    visit.push(y);
                }
            }
        }
        (visit, parent)
    }

    /// Memoized character table (seed 0; the table does not depend on the seed).
    pub(crate) fn cached_char_table(
        &self,
        init: impl FnOnce() -> Result<Arc<crate::rep::CharacterTable>>,
    ) -> Result<Arc<crate::rep::CharacterTable>> {
        if let Some(t) = self.char_table.get() {
            return Ok(t.clone());
        }
        let t = init()?;
        Ok(self.char_table.get_or_init(|| t).clone())
    }

    pub fn construct(spec: &GroupSpec) -> Result<FiniteGroup> {
        spec.build()
    }
}

/// Validate a group built from an arbitrary spec and wrap it for sharing.
pub fn construct_group(spec: &GroupSpec) -> Result<GroupRef> {
    Ok(Arc::new(spec.build()?))
}

/// Structural equality check used by operations that combine objects over
/// a common group.
pub fn same_group(a: &FiniteGroup, b: &FiniteGroup) -> bool {
    std::ptr::eq(a, b) || a == b
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(spec: &str) -> FiniteGroup {
        spec.parse::<GroupSpec>().unwrap().build().unwrap()
    }

    /// Orbit enumeration without the cached class machinery.
    fn brute_class_sizes(group: &FiniteGroup) -> Vec<usize> {
        let n = group.order();
        let mut done = vec![false; n];
        let mut sizes = Vec::new();
        for x in 0..n {
            if done[x] {
                continue;
            }
            let mut orbit = Vec::new();
            for h in 0..n {
                let y = group.mul(group.mul(h, x), group.inv(h));
                if !orbit.contains(&y) {
                    orbit.push(y);
                }
            }
            for &y in &orbit {
                done[y] = true;
            }
            sizes.push(orbit.len());
        }
        sizes.sort_unstable();
        sizes
    }

    #[test]
    fn trivial_group() {
        let t = g("cyclic:1");
        assert_eq!(t.order(), 1);
        assert_eq!(t.class_count(), 1);
        assert!(t.generators().is_empty());
    }

    #[test]
    fn symmetric_three() {
        let s3 = g("symmetric:3");
        assert_eq!(s3.order(), 6);
        assert_eq!(s3.class_count(), 3);
        let sizes: Vec<usize> = s3.conjugacy_classes().iter().map(|c| c.size()).collect();
        assert_eq!(sizes, vec![1, 2, 3]);
        assert_eq!(sizes, brute_class_sizes(&s3));
    }

    #[test]
    fn klein_four() {
        let e4 = g("elem_abelian:2,2");
        assert_eq!(e4.order(), 4);
        assert_eq!(e4.class_count(), 4);
        assert!(e4.is_abelian());
    }

    #[test]
    fn cyclic_four_classes_are_singletons() {
        let c4 = g("cyclic:4");
        assert!(c4.conjugacy_classes().iter().all(|c| c.size() == 1));
    }

    #[test]
    fn dihedral_eight_classes() {
        let d8 = g("dihedral:8");
        let sizes: Vec<usize> = d8.conjugacy_classes().iter().map(|c| c.size()).collect();
        assert_eq!(sizes, vec![1, 1, 2, 2, 2]);
        assert_eq!(sizes, brute_class_sizes(&d8));
    }

    #[test]
    fn identity_class_first_and_partition() {
        for spec in ["symmetric:4", "dihedral:12", "cyclic:6*symmetric:3", "elem_abelian:3,2"] {
            let grp = g(spec);
            let classes = grp.conjugacy_classes();
            assert_eq!(classes[0].members, vec![0]);
            let total: usize = classes.iter().map(|c| c.size()).sum();
            assert_eq!(total, grp.order());
            for c in classes {
                assert_eq!(grp.order() % c.size(), 0);
            }
        }
    }

    #[test]
    fn malformed_tables_rejected() {
        // not closed under inverses: row repeats
        let bad = vec![vec![0, 1], vec![1, 1]];
        assert!(matches!(FiniteGroup::from_table(bad, "bad"), Err(Error::NotClosed(_))));
        let no_id = vec![vec![1, 0], vec![0, 0]];
        assert!(FiniteGroup::from_table(no_id, "bad").is_err());
        // a Latin square that is not associative (order 5 loop)
        let loop5 = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert!(matches!(
            FiniteGroup::from_table(loop5, "loop"),
            Err(Error::NonAssociative(..))
        ));
    }

    #[test]
    fn relabels_identity_to_zero() {
        // Z/3 with identity written as element 2
        let rows = vec![vec![2, 0, 1], vec![0, 1, 2], vec![1, 2, 0]];
        let grp = FiniteGroup::from_table(rows, "z3").unwrap();
        assert_eq!(grp.mul(0, 1), 1);
        assert_eq!(grp.order(), 3);
        assert_eq!(grp.element_order(1), 3);
    }

    #[test]
    fn generators_generate() {
        for spec in ["symmetric:4", "dihedral:12", "elem_abelian:2,3", "cyclic:12"] {
            let grp = g(spec);
            let gens = grp.generators();
            assert_eq!(grp.generate(&gens).len(), grp.order());
        }
    }

    #[test]
    fn order_bound_enforced() {
        let spec: GroupSpec = "cyclic:5000".parse().unwrap();
        assert!(matches!(spec.build(), Err(Error::OrderBound { .. })));
    }
}
