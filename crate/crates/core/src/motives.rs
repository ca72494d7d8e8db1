//! Motive skeletons: direct sums of twisted units `U(G, alpha)` and induced
//! points `U(G / H)`, with hom ranks, restriction and the Lefschetz side.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cohomology::{schur_multiplier, CohomClass, SchurMultiplier, TwoCocycle};
use crate::error::{Error, Result};
use crate::group::{construct_group, same_group, GroupRef, GroupSpec, Subgroup};
use crate::twisted::alpha_regular;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MotiveAtom {
    TwistedUnit(CohomClass),
    /// Canonical (least) representative of a conjugacy class of proper subgroups.
    Induced(Subgroup),
}

impl MotiveAtom {
    pub fn unit(class: CohomClass) -> Self {
        MotiveAtom::TwistedUnit(class)
    }

    /// `Induced(H)` up to conjugacy; `H = G` gives the trivial twisted unit.
    pub fn induced(h: &Subgroup) -> Result<Self> {
        if h.is_whole() {
            return Ok(MotiveAtom::TwistedUnit(schur_multiplier(h.parent())?.trivial_class()?));
        }
        Ok(MotiveAtom::Induced(h.canonical_conjugate()))
    }

    pub fn group(&self) -> &GroupRef {
        match self {
            MotiveAtom::TwistedUnit(c) => c.group(),
            MotiveAtom::Induced(h) => h.parent(),
        }
    }

    /// Number of non-equivariant unit summands after forgetting the action.
    pub fn restricted_length(&self) -> usize {
        match self {
            MotiveAtom::TwistedUnit(_) => 1,
            MotiveAtom::Induced(h) => h.index(),
        }
    }

    fn sort_key(&self) -> (u8, Vec<usize>) {
        match self {
            MotiveAtom::TwistedUnit(c) => (0, c.coordinates().iter().map(|&x| x as usize).collect()),
            MotiveAtom::Induced(h) => (1, std::iter::once(h.order()).chain(h.members().iter().copied()).collect()),
        }
    }
}

impl PartialOrd for MotiveAtom {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MotiveAtom {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl fmt::Display for MotiveAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MotiveAtom::TwistedUnit(c) if c.is_trivial() => write!(f, "U(1)"),
            MotiveAtom::TwistedUnit(c) => write!(f, "U({c})"),
            MotiveAtom::Induced(h) => write!(f, "Ind(H={:?})", h.members()),
        }
    }
}

impl Serialize for MotiveAtom {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        #[serde(tag = "kind", rename_all = "snake_case")]
        enum Repr<'a> {
            TwistedUnit { class: &'a [u64] },
            Induced { subgroup: &'a [usize], index: usize },
        }
        match self {
            MotiveAtom::TwistedUnit(c) => Repr::TwistedUnit { class: c.coordinates() },
            MotiveAtom::Induced(h) => Repr::Induced { subgroup: h.members(), index: h.index() },
        }
        .serialize(s)
    }
}

/// A multiset of atoms over one group, kept sorted.
#[derive(Debug, Clone)]
pub struct MotiveSkeleton {
    group: GroupRef,
    atoms: Vec<MotiveAtom>,
}

impl MotiveSkeleton {
    pub fn new(group: GroupRef, mut atoms: Vec<MotiveAtom>) -> Result<Self> {
        if atoms.iter().any(|a| !same_group(a.group(), &group)) {
            return Err(Error::GroupMismatch);
        }
        atoms.sort();
        Ok(MotiveSkeleton { group, atoms })
    }

    pub fn empty(group: GroupRef) -> Self {
        MotiveSkeleton { group, atoms: Vec::new() }
    }

    pub fn group(&self) -> &GroupRef {
        &self.group
    }

    pub fn atoms(&self) -> &[MotiveAtom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn is_twisted_only(&self) -> bool {
        self.atoms.iter().all(|a| matches!(a, MotiveAtom::TwistedUnit(_)))
    }

    pub fn sum(&self, other: &MotiveSkeleton) -> Result<MotiveSkeleton> {
        if !same_group(&self.group, &other.group) {
            return Err(Error::GroupMismatch);
        }
        MotiveSkeleton::new(self.group.clone(), self.atoms.iter().chain(&other.atoms).cloned().collect())
    }
}

impl PartialEq for MotiveSkeleton {
    fn eq(&self, other: &Self) -> bool {
        same_group(&self.group, &other.group) && self.atoms == other.atoms
    }
}

impl fmt::Display for MotiveSkeleton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.atoms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.atoms.iter().map(|a| a.to_string()).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl Serialize for MotiveSkeleton {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.atoms.serialize(s)
    }
}

/// One block of `length` objects permuted transitively by `G`, with
/// stabilizer `stabilizer`; `class` is the class of an invariant object and
/// only meaningful when the stabilizer is all of `G`.
#[derive(Debug, Clone)]
pub struct Block {
    pub length: usize,
    pub stabilizer: Subgroup,
    pub class: Option<CohomClass>,
}

#[derive(Debug, Clone)]
pub struct CollectionSpec {
    pub group: GroupRef,
    pub blocks: Vec<Block>,
}

impl CollectionSpec {
    pub fn length(&self) -> usize {
        self.blocks.iter().map(|b| b.length).sum()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockFile {
    pub length: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stabilizer: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cocycle_class: Option<Vec<u64>>,
}

/// JSON form of a [`CollectionSpec`]. A missing stabilizer means the whole
/// group; a missing class means the trivial class.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CollectionFile {
    pub group: GroupSpec,
    pub blocks: Vec<BlockFile>,
}

impl CollectionFile {
    pub fn to_spec(&self) -> Result<CollectionSpec> {
        let group = construct_group(&self.group)?;
        let mut multiplier: Option<SchurMultiplier> = None;
        let mut blocks = Vec::with_capacity(self.blocks.len());
        for b in &self.blocks {
            let stabilizer = match &b.stabilizer {
                Some(m) => Subgroup::new(group.clone(), m.iter().copied())?,
                None => Subgroup::whole(group.clone()),
            };
            let class = match &b.cocycle_class {
                Some(c) => {
                    if multiplier.is_none() {
                        multiplier = Some(schur_multiplier(&group)?);
                    }
                    Some(multiplier.as_ref().expect("set above").class_from_coordinates(c)?)
                }
                None => None,
            };
            blocks.push(Block { length: b.length, stabilizer, class });
        }
        Ok(CollectionSpec { group, blocks })
    }
}

/// One atom per block: the twisted unit of the block's class when the
/// stabilizer is `G`, otherwise the induced point `G / H`, which needs
/// `H^2(H, C^x) = 0`.
pub fn decompose_collection(spec: &CollectionSpec) -> Result<MotiveSkeleton> {
    let g = &spec.group;
    let mut multiplier: Option<SchurMultiplier> = None;
    let mut atoms = Vec::with_capacity(spec.blocks.len());
    for (i, b) in spec.blocks.iter().enumerate() {
        if !same_group(b.stabilizer.parent(), g) {
            return Err(Error::GroupMismatch);
        }
        let index = b.stabilizer.index();
        if b.length != index {
            return Err(Error::StabilizerIndexMismatch { block: i, length: b.length, index });
        }
        if b.stabilizer.is_whole() {
            let class = match &b.class {
                Some(c) if !same_group(c.group(), g) => return Err(Error::GroupMismatch),
                Some(c) => c.clone(),
                None => {
                    if multiplier.is_none() {
                        multiplier = Some(schur_multiplier(g)?);
                    }
                    multiplier.as_ref().expect("set above").trivial_class()?
                }
            };
            atoms.push(MotiveAtom::TwistedUnit(class));
        } else {
            let (h, _) = b.stabilizer.as_group();
            let hm = schur_multiplier(&Arc::new(h))?;
            if !hm.is_trivial() {
                return Err(Error::NonTrivialStabilizerH2 { block: i, factors: hm.invariant_factors().to_vec() });
            }
            atoms.push(MotiveAtom::induced(&b.stabilizer)?);
        }
    }
    MotiveSkeleton::new(g.clone(), atoms)
}

/// `alpha` restricted to `H`, as a cocycle on `H` in its own right.
pub fn restrict_cocycle(alpha: &TwoCocycle, h: &Subgroup) -> Result<TwoCocycle> {
    if !same_group(alpha.group(), h.parent()) {
        return Err(Error::GroupMismatch);
    }
    let (hg, emb) = h.as_group();
    let rows = emb.iter().map(|&a| emb.iter().map(|&b| alpha.exp(a, b)).collect()).collect();
    TwoCocycle::new(Arc::new(hg), alpha.modulus(), rows)
}

fn class_count(h: &Subgroup) -> usize {
    if h.is_whole() {
        return h.parent().class_count();
    }
    h.as_group().0.class_count()
}

/// Rank of the hom group between two atoms.
///
/// Twisted units: the number of `alpha beta^-1`-regular classes of `G`.
/// Induced against twisted: regular classes of the restricted class on `H`.
/// Induced against induced: over the double cosets `H1 g H2`, the class
/// counts of `H1 ∩ g H2 g^-1`.
pub fn hom_rank(a: &MotiveAtom, b: &MotiveAtom) -> Result<usize> {
    if !same_group(a.group(), b.group()) {
        return Err(Error::GroupMismatch);
    }
    let g = a.group();
    match (a, b) {
        (MotiveAtom::TwistedUnit(x), MotiveAtom::TwistedUnit(y)) => {
            let c = x.mul(&y.inv()?)?;
            Ok(alpha_regular(g, c.representative())?.count)
        }
        (MotiveAtom::Induced(h), MotiveAtom::TwistedUnit(y)) | (MotiveAtom::TwistedUnit(y), MotiveAtom::Induced(h)) => {
            let r = restrict_cocycle(y.representative(), h)?;
            Ok(alpha_regular(r.group(), &r)?.count)
        }
        (MotiveAtom::Induced(h1), MotiveAtom::Induced(h2)) => {
            let n = g.order();
            let mut seen = vec![false; n];
            let mut total = 0;
            for x in 0..n {
                if seen[x] {
                    continue;
                }
                for &p in h1.members() {
                    for &q in h2.members() {
                        seen[g.mul(g.mul(p, x), q)] = true;
                    }
                }
                total += class_count(&h1.intersect(&h2.conjugate_by(x)));
            }
            Ok(total)
        }
    }
}

pub fn skeleton_hom_rank(a: &MotiveSkeleton, b: &MotiveSkeleton) -> Result<usize> {
    if !same_group(&a.group, &b.group) {
        return Err(Error::GroupMismatch);
    }
    let mut total = 0;
    for x in &a.atoms {
        for y in &b.atoms {
            total += hom_rank(x, y)?;
        }
    }
    Ok(total)
}

/// Length after forgetting the action: `G / H` splits into `[G:H]` points.
pub fn restrict_skeleton(a: &MotiveSkeleton) -> usize {
    a.atoms.iter().map(MotiveAtom::restricted_length).sum()
}

/// Comparison after localizing at the augmentation ideal, where all
/// twisted units become isomorphic to the unit. Induced atoms are rejected.
pub fn localized_isomorphic(a: &MotiveSkeleton, b: &MotiveSkeleton) -> Result<bool> {
    if !same_group(&a.group, &b.group) {
        return Err(Error::GroupMismatch);
    }
    for s in [a, b] {
        if let Some(x) = s.atoms.iter().find(|x| matches!(x, MotiveAtom::Induced(_))) {
            return Err(Error::UnsupportedAtom(format!("{x} in a localized comparison")));
        }
    }
    Ok(a.len() == b.len())
}

/// Hom ranks of `atom` against each atom of `battery`, in both directions.
pub fn hom_profile(atom: &MotiveAtom, battery: &[MotiveAtom]) -> Result<Vec<(usize, usize)>> {
    battery.iter().map(|b| Ok((hom_rank(atom, b)?, hom_rank(b, atom)?))).collect()
}

/// Distinct atoms that no hom rank against `battery` tells apart. They stay
/// distinct in skeletons; this only flags them.
pub fn possibly_isomorphic(a: &MotiveAtom, b: &MotiveAtom, battery: &[MotiveAtom]) -> Result<bool> {
    Ok(a != b && hom_profile(a, battery)? == hom_profile(b, battery)?)
}

/// Lefschetz exponents, `r` repeated `b_{2r}` times.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChowSkeleton {
    pub exponents: Vec<usize>,
}

impl fmt::Display for ChowSkeleton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.exponents.iter().map(|r| r.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

pub fn chow_skeleton(betti: &[u64]) -> Result<ChowSkeleton> {
    let mut exponents = Vec::new();
    for (i, &b) in betti.iter().enumerate() {
        if i % 2 == 1 {
            if b != 0 {
                return Err(Error::OddCohomology { degree: i, value: b });
            }
            continue;
        }
        exponents.extend(std::iter::repeat_n(i / 2, b as usize));
    }
    Ok(ChowSkeleton { exponents })
}

/// Odd Betti numbers vanish and the total equals the collection length.
pub fn check_via(betti: &[u64], collection_length: usize) -> Result<ChowSkeleton> {
    let c = chow_skeleton(betti)?;
    let total: u64 = betti.iter().sum();
    if total != collection_length as u64 {
        return Err(Error::LengthMismatch { collection: collection_length, betti: total });
    }
    Ok(c)
}
