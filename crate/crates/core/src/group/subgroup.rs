use super::{same_group, FiniteGroup, GroupRef};
use crate::error::{Error, Result};

/// A validated subgroup of a shared parent group.
#[derive(Debug, Clone)]
pub struct Subgroup {
    parent: GroupRef,
    members: Vec<usize>,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.members == other.members && same_group(&self.parent, &other.parent)
    }
}

impl Eq for Subgroup {}

impl Subgroup {
    pub fn new(parent: GroupRef, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut members: Vec<usize> = members.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        let n = parent.order();
        if let Some(&bad) = members.iter().find(|&&m| m >= n) {
            return Err(Error::NotASubgroup(format!("element {bad} is outside the group")));
        }
        if members.first() != Some(&0) {
            return Err(Error::NotASubgroup("missing identity".into()));
        }
        let mut inside = vec![false; n];
        for &m in &members {
            inside[m] = true;
        }
        for &a in &members {
            if !inside[parent.inv(a)] {
                return Err(Error::NotASubgroup(format!("inverse of {a} missing")));
            }
            for &b in &members {
                if !inside[parent.mul(a, b)] {
                    return Err(Error::NotASubgroup(format!("{a}*{b} missing")));
                }
            }
        }
        Ok(Subgroup { parent, members })
    }

    pub fn generated_by(parent: GroupRef, gens: &[usize]) -> Self {
        let members = parent.generate(gens);
        Subgroup { parent, members }
    }

    pub fn whole(parent: GroupRef) -> Self {
        let members = (0..parent.order()).collect();
        Subgroup { parent, members }
    }

    pub fn trivial(parent: GroupRef) -> Self {
        Subgroup { parent, members: vec![0] }
    }

    pub fn parent(&self) -> &GroupRef {
        &self.parent
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn index(&self) -> usize {
        self.parent.order() / self.members.len()
    }

    pub fn contains(&self, g: usize) -> bool {
        self.members.binary_search(&g).is_ok()
    }

    pub fn is_whole(&self) -> bool {
        self.members.len() == self.parent.order()
    }

    /// `g H g^-1` as a subgroup.
    pub fn conjugate_by(&self, g: usize) -> Subgroup {
        let mut members: Vec<usize> = self.members.iter().map(|&h| self.parent.conjugate(g, h)).collect();
        members.sort_unstable();
        Subgroup { parent: self.parent.clone(), members }
    }

    /// Lexicographically least conjugate; conjugate subgroups give the same result.
    pub fn canonical_conjugate(&self) -> Subgroup {
        (0..self.parent.order())
            .map(|g| self.conjugate_by(g))
            .min_by(|a, b| a.members.cmp(&b.members))
            .expect("group is nonempty")
    }

    pub fn intersect(&self, other: &Subgroup) -> Subgroup {
        let members = self.members.iter().copied().filter(|&m| other.contains(m)).collect();
        Subgroup { parent: self.parent.clone(), members }
    }

    /// The subgroup as a group in its own right. Local element `i` is
    /// `embedding[i]` in the parent; the embedding is increasing so local 0
    /// is the identity.
    pub fn as_group(&self) -> (FiniteGroup, Vec<usize>) {
        let n = self.members.len();
        let mut local = vec![usize::MAX; self.parent.order()];
        for (i, &m) in self.members.iter().enumerate() {
            local[m] = i;
        }
        let mut table = vec![0u32; n * n];
        for (i, &a) in self.members.iter().enumerate() {
            for (j, &b) in self.members.iter().enumerate() {
                table[i * n + j] = local[self.parent.mul(a, b)] as u32;
            }
        }
        let label = format!("{}<{}>", n, self.parent.label());
        let group = FiniteGroup::from_trusted(n, table, label).expect("subgroup of a valid group");
        (group, self.members.clone())
    }
}

/// `C_G(g) = { h : hg = gh }`, checked against the orbit-stabilizer law.
pub fn centralizer(group: &GroupRef, g: usize) -> Subgroup {
    let members: Vec<usize> = (0..group.order())
        .filter(|&h| group.mul(h, g) == group.mul(g, h))
        .collect();
    let class_size = group.conjugacy_classes()[group.class_index(g)].size();
    assert_eq!(class_size * members.len(), group.order(), "orbit-stabilizer law violated");
    Subgroup { parent: group.clone(), members }
}

/// Left cosets `gH` with the left-translation action of `G`.
#[derive(Debug, Clone)]
pub struct CosetSpace {
    pub subgroup: Subgroup,
    /// Cosets ordered by least element; coset 0 is `H`.
    pub cosets: Vec<Vec<usize>>,
    /// `action[g][i]` is the index of `g * coset_i`.
    pub action: Vec<Vec<usize>>,
    coset_of: Vec<usize>,
}

impl CosetSpace {
    pub fn len(&self) -> usize {
        self.cosets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cosets.is_empty()
    }

    pub fn coset_of(&self, g: usize) -> usize {
        self.coset_of[g]
    }

    /// Stabilizer of coset `i` as a subgroup of the parent.
    pub fn stabilizer(&self, i: usize) -> Subgroup {
        let parent = self.subgroup.parent().clone();
        let members = (0..parent.order()).filter(|&g| self.action[g][i] == i).collect();
        Subgroup { parent, members }
    }
}

pub fn coset_space(group: &GroupRef, subgroup: &Subgroup) -> Result<CosetSpace> {
    if !same_group(group, subgroup.parent()) {
        return Err(Error::NotASubgroup("subgroup of a different group".into()));
    }
    let n = group.order();
    let mut coset_of = vec![usize::MAX; n];
    let mut cosets = Vec::new();
    for g in 0..n {
        if coset_of[g] != usize::MAX {
            continue;
        }
        let mut coset: Vec<usize> = subgroup.members().iter().map(|&h| group.mul(g, h)).collect();
        coset.sort_unstable();
        for &x in &coset {
            coset_of[x] = cosets.len();
        }
        cosets.push(coset);
    }
    let action = (0..n)
        .map(|g| cosets.iter().map(|c| coset_of[group.mul(g, c[0])]).collect())
        .collect();
    let space = CosetSpace {
        subgroup: subgroup.clone(),
        cosets,
        action,
        coset_of,
    };
    assert_eq!(space.stabilizer(0).members(), subgroup.members(), "stabilizer of H must be H");
    assert_eq!(space.len() * subgroup.order(), n);
    Ok(space)
}

/// Every subgroup, ordered by (order, members). Built by closing the
/// trivial subgroup under adjoining one element at a time, so it is only
/// meant for small groups.
pub fn all_subgroups(group: &GroupRef) -> Vec<Subgroup> {
    use std::collections::BTreeSet;
    let mut seen: BTreeSet<(usize, Vec<usize>)> = BTreeSet::new();
    let mut stack = vec![vec![0usize]];
    seen.insert((1, vec![0]));
    while let Some(h) = stack.pop() {
        for g in 0..group.order() {
            if h.binary_search(&g).is_ok() {
                continue;
            }
            let mut gens = h.clone();
            gens.push(g);
            let k = group.generate(&gens);
            if seen.insert((k.len(), k.clone())) {
                stack.push(k);
            }
        }
    }
    seen.into_iter()
        .map(|(_, members)| Subgroup { parent: group.clone(), members })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupSpec;
    use std::sync::Arc;

    fn g(spec: &str) -> GroupRef {
        Arc::new(spec.parse::<GroupSpec>().unwrap().build().unwrap())
    }

    #[test]
    fn centralizers() {
        let s3 = g("symmetric:3");
        assert_eq!(centralizer(&s3, 0).order(), 6);
        // element 1 is the permutation [0,2,1], a transposition
        assert_eq!(s3.element_order(1), 2);
        let c = centralizer(&s3, 1);
        assert_eq!(c.members(), &[0, 1]);
        let c6 = g("cyclic:6");
        for x in 0..6 {
            assert_eq!(centralizer(&c6, x).order(), 6);
        }
        let s4 = g("symmetric:4");
        for x in 0..24 {
            let c = centralizer(&s4, x);
            let class = &s4.conjugacy_classes()[s4.class_index(x)];
            assert_eq!(c.order() * class.size(), 24);
        }
    }

    #[test]
    fn subgroup_validation() {
        let s3 = g("symmetric:3");
        assert!(Subgroup::new(s3.clone(), [0, 1]).is_ok());
        assert!(Subgroup::new(s3.clone(), [1]).is_err());
        assert!(Subgroup::new(s3.clone(), [0, 1, 2]).is_err());
        assert!(Subgroup::new(s3, [0, 9]).is_err());
    }

    #[test]
    fn cosets_of_whole_group() {
        let d8 = g("dihedral:8");
        let space = coset_space(&d8, &Subgroup::whole(d8.clone())).unwrap();
        assert_eq!(space.len(), 1);
        assert!(space.action.iter().all(|p| p == &vec![0]));
    }

    #[test]
    fn s3_on_transposition_cosets() {
        let s3 = g("symmetric:3");
        let h = Subgroup::generated_by(s3.clone(), &[1]);
        let space = coset_space(&s3, &h).unwrap();
        assert_eq!(space.len(), 3);
        // faithful and transitive: the image is all of S3 acting on 3 points
        let mut images: Vec<Vec<usize>> = space.action.clone();
        images.sort();
        images.dedup();
        assert_eq!(images.len(), 6);
        for i in 0..3 {
            assert!((0..6).any(|x| space.action[x][0] == i));
        }
        // homomorphism
        for a in 0..6 {
            for b in 0..6 {
                let ab = s3.mul(a, b);
                for i in 0..3 {
                    assert_eq!(space.action[ab][i], space.action[a][space.action[b][i]]);
                }
            }
        }
    }

    #[test]
    fn c4_mod_c2() {
        let c4 = g("cyclic:4");
        let h = Subgroup::new(c4.clone(), [0, 2]).unwrap();
        let space = coset_space(&c4, &h).unwrap();
        assert_eq!(space.len(), 2);
        assert_eq!(space.action[1], vec![1, 0]);
        assert_eq!(space.action[3], vec![1, 0]);
        assert_eq!(space.action[2], vec![0, 1]);
    }

    #[test]
    fn canonical_conjugates_agree() {
        let s4 = g("symmetric:4");
        let h = Subgroup::generated_by(s4.clone(), &[1]);
        let canon = h.canonical_conjugate();
        for x in 0..24 {
            assert_eq!(h.conjugate_by(x).canonical_conjugate(), canon);
        }
    }

    #[test]
    fn as_group_embedding() {
        let d8 = g("dihedral:8");
        let rot = Subgroup::generated_by(d8.clone(), &[1]);
        let (c4, emb) = rot.as_group();
        assert_eq!(c4.order(), 4);
        assert!(c4.is_abelian());
        for a in 0..4 {
            for b in 0..4 {
                assert_eq!(emb[c4.mul(a, b)], d8.mul(emb[a], emb[b]));
            }
        }
    }
}
