//! Schur multipliers `H^2(G, C^x)` and canonical class coordinates.
//!
//! Cochain route: `H^2(G, C^x) = H^2(G, Z/n) / <delta chi>` with `n = |G|`,
//! where `delta chi` runs over the images of the connecting map for
//! `0 -> Z/n -> Q/Z -> Q/Z -> 0`. `Z^2(G, Z/n)` comes from the generator
//! frame; its Howell basis gives an integer presentation whose Smith form
//! yields the invariant factors, a projection and section representatives.
//!
//! Relation-module route: the torsion of the coinvariants of the cycle
//! space of a Cayley graph (Hopf). Only invariant factors, no class data.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::{GeneratorFrame, TwoCocycle};
use crate::arith::{smith_diagonal, smith_normal_form, HowellBasis};
use crate::error::{Error, Result};
use crate::group::{abelianization, same_group, GroupRef};

/// Largest order handled by the cochain route by default.
pub const DEFAULT_COCHAIN_BOUND: usize = 48;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SchurRoute {
    Cochain,
    RelationModule,
}

#[derive(Debug)]
struct ClassData {
    frame: GeneratorFrame,
    basis: HowellBasis,
    /// Columns of `V` for the kept factors, `projection[i][j]`.
    projection: Vec<Vec<BigInt>>,
    section: Vec<TwoCocycle>,
}

#[derive(Debug)]
struct SchurData {
    group: GroupRef,
    modulus: u64,
    invariant_factors: Vec<u64>,
    route: SchurRoute,
    classes: Option<ClassData>,
}

/// `H^2(G, C^x)` as invariant factors; cheap to clone.
#[derive(Debug, Clone)]
pub struct SchurMultiplier(Arc<SchurData>);

impl SchurMultiplier {
    pub fn group(&self) -> &GroupRef {
        &self.0.group
    }

    /// Coefficient modulus `n = |G|` used for representatives.
    pub fn modulus(&self) -> u64 {
        self.0.modulus
    }

    pub fn invariant_factors(&self) -> &[u64] {
        &self.0.invariant_factors
    }

    pub fn order(&self) -> u64 {
        self.0.invariant_factors.iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.0.invariant_factors.is_empty()
    }

    pub fn route(&self) -> SchurRoute {
        self.0.route
    }

    pub fn has_class_data(&self) -> bool {
        self.0.classes.is_some()
    }

    fn classes(&self) -> Result<&ClassData> {
        self.0.classes.as_ref().ok_or_else(|| {
            Error::ClassDataUnavailable(format!(
                "{} (order {}) was computed without class data",
                self.group().label(),
                self.group().order()
            ))
        })
    }

    /// Representative cocycles, one per invariant factor.
    pub fn section(&self) -> Result<&[TwoCocycle]> {
        Ok(&self.classes()?.section)
    }

    pub fn same(&self, other: &SchurMultiplier) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || same_group(self.group(), other.group())
    }

    /// "C2 x C2" style rendering; the trivial group prints as "1".
    pub fn describe(&self) -> String {
        describe_factors(&self.0.invariant_factors)
    }

    /// Available even without class data.
    pub fn trivial_class(&self) -> Result<CohomClass> {
        Ok(CohomClass {
            multiplier: self.clone(),
            coordinates: vec![0; self.0.invariant_factors.len()],
            representative: TwoCocycle::trivial(self.group().clone(), self.modulus()),
        })
    }

    /// Class with the given coordinates, represented by a product of section cocycles.
    pub fn class_from_coordinates(&self, coords: &[u64]) -> Result<CohomClass> {
        let data = self.classes()?;
        if coords.len() != self.0.invariant_factors.len() {
            return Err(Error::Parse(format!(
                "expected {} coordinates, got {}",
                self.0.invariant_factors.len(),
                coords.len()
            )));
        }
        let mut rep = TwoCocycle::trivial(self.group().clone(), self.modulus());
        for ((sec, &c), &d) in data.section.iter().zip(coords).zip(&self.0.invariant_factors) {
            rep = rep.mul(&sec.pow(c % d))?;
        }
        let class = class_of(&rep, self)?;
        let want: Vec<u64> = coords.iter().zip(&self.0.invariant_factors).map(|(c, d)| c % d).collect();
        debug_assert_eq!(class.coordinates, want);
        Ok(class)
    }

    /// Every class, in lexicographic coordinate order.
    pub fn all_classes(&self) -> Result<Vec<CohomClass>> {
        let factors = self.0.invariant_factors.clone();
        let mut out = Vec::new();
        let mut coords = vec![0u64; factors.len()];
        loop {
            out.push(self.class_from_coordinates(&coords)?);
            let mut i = factors.len();
            loop {
                if i == 0 {
                    return Ok(out);
                }
                i -= 1;
                coords[i] += 1;
                if coords[i] < factors[i] {
                    break;
                }
                coords[i] = 0;
            }
        }
    }
}

pub fn describe_factors(factors: &[u64]) -> String {
    if factors.is_empty() {
        "1".into()
    } else {
        factors.iter().map(|d| format!("C{d}")).collect::<Vec<_>>().join(" x ")
    }
}

impl fmt::Display for SchurMultiplier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.describe())
    }
}

/// A class in `H^2(G, C^x)` with canonical coordinates.
#[derive(Debug, Clone)]
pub struct CohomClass {
    multiplier: SchurMultiplier,
    coordinates: Vec<u64>,
    representative: TwoCocycle,
}

impl PartialEq for CohomClass {
    fn eq(&self, other: &Self) -> bool {
        self.coordinates == other.coordinates && self.multiplier.same(&other.multiplier)
    }
}

impl Eq for CohomClass {}

impl PartialOrd for CohomClass {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CohomClass {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.coordinates.cmp(&other.coordinates)
    }
}

impl std::hash::Hash for CohomClass {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.coordinates.hash(state);
    }
}

impl CohomClass {
    pub fn coordinates(&self) -> &[u64] {
        &self.coordinates
    }

    pub fn representative(&self) -> &TwoCocycle {
        &self.representative
    }

    pub fn multiplier(&self) -> &SchurMultiplier {
        &self.multiplier
    }

    pub fn group(&self) -> &GroupRef {
        self.multiplier.group()
    }

    pub fn is_trivial(&self) -> bool {
        self.coordinates.iter().all(|&c| c == 0)
    }

    fn check_same(&self, other: &CohomClass) -> Result<()> {
        if self.multiplier.same(&other.multiplier) {
            Ok(())
        } else {
            Err(Error::GroupMismatch)
        }
    }

    pub fn mul(&self, other: &CohomClass) -> Result<CohomClass> {
        self.check_same(other)?;
        if self.is_trivial() && other.is_trivial() {
            return Ok(self.clone());
        }
        let rep = self.representative.mul(&other.representative)?;
        class_of(&rep, &self.multiplier)
    }

    pub fn inv(&self) -> Result<CohomClass> {
        if self.is_trivial() {
            return Ok(self.clone());
        }
        class_of(&self.representative.inverse(), &self.multiplier)
    }

    pub fn pow(&self, k: i64) -> Result<CohomClass> {
        if self.is_trivial() {
            return Ok(self.clone());
        }
        let base = if k < 0 { self.representative.inverse() } else { self.representative.clone() };
        class_of(&base.pow(k.unsigned_abs()), &self.multiplier)
    }

    /// Order of the class in `H^2`.
    pub fn order(&self) -> u64 {
        self.coordinates
            .iter()
            .zip(self.multiplier.invariant_factors())
            .map(|(&c, &d)| d / c.gcd(&d))
            .fold(1, |acc, x| acc.lcm(&x))
    }
}

impl fmt::Display for CohomClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.coordinates)
    }
}

impl Serialize for CohomClass {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coordinates.serialize(s)
    }
}

fn big_mod(x: &BigInt, d: u64) -> u64 {
    let d = BigInt::from(d);
    (((x % &d) + &d) % &d).to_u64().unwrap()
}

pub fn schur_multiplier(group: &GroupRef) -> Result<SchurMultiplier> {
    schur_multiplier_with(group, DEFAULT_COCHAIN_BOUND)
}

/// Cochain route up to `cochain_bound`, relation-module route above it.
pub fn schur_multiplier_with(group: &GroupRef, cochain_bound: usize) -> Result<SchurMultiplier> {
    if group.order() <= cochain_bound {
        cochain_route(group)
    } else {
        let factors = relation_module_invariants(group)?;
        Ok(SchurMultiplier(Arc::new(SchurData {
            group: group.clone(),
            modulus: group.order() as u64,
            invariant_factors: factors,
            route: SchurRoute::RelationModule,
            classes: None,
        })))
    }
}

fn cochain_route(group: &GroupRef) -> Result<SchurMultiplier> {
    let order = group.order();
    let n = order as u64;
    let frame = GeneratorFrame::new(group);
    let z2 = if order == 1 { crate::arith::ModMatrix::zero(1, 0, 0) } else { frame.equations(n).kernel() };
    let basis = HowellBasis::new(&z2);
    let k = basis.len();
    let coords = |v: &[u64]| -> Vec<u64> { basis.coordinates(v).expect("vector lies in Z^2") };
    let mut relations: Vec<Vec<BigInt>> = Vec::new();
    let push = |relations: &mut Vec<Vec<BigInt>>, c: Vec<u64>| {
        if c.iter().any(|&x| x != 0) {
            relations.push(c.into_iter().map(BigInt::from).collect());
        }
    };
    // presentation of Z^2 from the Howell basis
    for (i, &(_, p)) in basis.pivots().iter().enumerate() {
        let m = n / p;
        let v: Vec<u64> = basis.rows()[i].iter().map(|&x| (x * m) % n).collect();
        let c = coords(&v);
        let mut row: Vec<BigInt> = c.iter().map(|&x| -BigInt::from(x)).collect();
        row[i] += BigInt::from(m);
        relations.push(row);
    }
    let gens = frame.gens().to_vec();
    // coboundaries of indicator cochains
    for g in 1..order {
        let mut f = Vec::with_capacity(frame.unknowns());
        for x in 1..order {
            for &s in &gens {
                let v = (x == g) as i64 + (s == g) as i64 - (group.mul(x, s) == g) as i64;
                f.push(v.rem_euclid(n as i64) as u64);
            }
        }
        push(&mut relations, coords(&f));
    }
    // connecting-map images of characters G -> Z/n
    let ab = abelianization(group);
    for (j, &d) in ab.invariant_factors.iter().enumerate() {
        let lift = |x: usize| ab.projection[x][j] * (n / d);
        let mut f = Vec::with_capacity(frame.unknowns());
        for x in 1..order {
            for &s in &gens {
                f.push((lift(x) + lift(s) - lift(group.mul(x, s))) / n);
            }
        }
        push(&mut relations, coords(&f));
    }
    let (factors, projection, section) = if k == 0 {
        (vec![], vec![], vec![])
    } else {
        let snf = smith_normal_form(&relations)?;
        let keep: Vec<usize> = (0..k).filter(|&j| !snf.diagonal[j].is_one()).collect();
        let mut factors = Vec::new();
        for &j in &keep {
            let d = &snf.diagonal[j];
            if d.is_zero() || d.is_negative() {
                return Err(Error::Violation(format!("H^2 presentation has infinite factor at {j}")));
            }
            factors.push(d.to_u64().expect("factor fits"));
        }
        let projection: Vec<Vec<BigInt>> =
            (0..k).map(|i| keep.iter().map(|&j| snf.v[i][j].clone()).collect()).collect();
        let section = keep
            .iter()
            .map(|&j| {
                let c: Vec<u64> = snf.v_inv[j].iter().map(|x| big_mod(x, n)).collect();
                let f = basis.combine(&c);
                TwoCocycle::from_flat(group.clone(), n, frame.expand(&f, n))
            })
            .collect();
        (factors, projection, section)
    };
    debug_assert!(factors.iter().all(|&d| n.is_multiple_of(d)), "H^2 is |G|-torsion");
    let data = SchurData {
        group: group.clone(),
        modulus: n,
        invariant_factors: factors,
        route: SchurRoute::Cochain,
        classes: Some(ClassData { frame, basis, projection, section }),
    };
    Ok(SchurMultiplier(Arc::new(data)))
}

/// Canonical class of `alpha`. Its modulus must divide `|G|`.
pub fn class_of(alpha: &TwoCocycle, multiplier: &SchurMultiplier) -> Result<CohomClass> {
    if !same_group(alpha.group(), multiplier.group()) {
        return Err(Error::GroupMismatch);
    }
    alpha.ensure_valid()?;
    let n = multiplier.modulus();
    let data = multiplier.classes()?;
    let promoted = alpha.promote(n)?;
    let f = data.frame.params_of(promoted.table());
    let c = if data.basis.is_empty() {
        vec![]
    } else {
        data.basis
            .coordinates(&f)
            .ok_or_else(|| Error::NotACocycle("table outside the cocycle space".into()))?
    };
    let coordinates = multiplier
        .invariant_factors()
        .iter()
        .enumerate()
        .map(|(j, &d)| {
            let y: BigInt = c.iter().zip(&data.projection).map(|(&ci, col)| BigInt::from(ci) * &col[j]).sum();
            big_mod(&y, d)
        })
        .collect();
    Ok(CohomClass { multiplier: multiplier.clone(), coordinates, representative: alpha.clone() })
}

/// `M(G)` as the torsion of `R / [F, R]`, computed from the cycle space of
/// the Cayley graph on the greedy generators.
pub fn relation_module_invariants(group: &GroupRef) -> Result<Vec<u64>> {
    let n = group.order();
    if n == 1 {
        return Ok(vec![]);
    }
    let gens = group.generators();
    let k = gens.len();
    let (_, parent) = group.cayley_tree(&gens);
    let edge = |x: usize, i: usize| x * k + i;
    let mut nontree = vec![usize::MAX; n * k];
    let mut cycles_of = Vec::new();
    for x in 0..n {
        for (i, &s) in gens.iter().enumerate() {
            if parent[group.mul(x, s)] != Some((x, i)) {
                nontree[edge(x, i)] = cycles_of.len();
                cycles_of.push((x, i));
            }
        }
    }
    let m = cycles_of.len();
    if m * k > crate::arith::snf::SNF_DIM_BOUND {
        return Err(Error::SizeBound(format!("relation module needs a {}x{m} matrix", m * k)));
    }
    // tree path from the root to x as signed edges
    let path = |mut x: usize| {
        let mut out = Vec::new();
        while let Some((p, i)) = parent[x] {
            out.push((p, i));
            x = p;
        }
        out
    };
    let mut rows = Vec::with_capacity(m * k);
    for &(x, i) in &cycles_of {
        let t = group.mul(x, gens[i]);
        let mut signed: Vec<((usize, usize), i64)> = vec![((x, i), 1)];
        signed.extend(path(x).into_iter().map(|e| (e, 1)));
        signed.extend(path(t).into_iter().map(|e| (e, -1)));
        let own = nontree[edge(x, i)];
        for &g in &gens {
            let mut row = vec![0i64; m];
            for &((y, j), sgn) in &signed {
                let idx = nontree[edge(group.mul(g, y), j)];
                if idx != usize::MAX {
                    row[idx] += sgn;
                }
            }
            row[own] -= 1;
            rows.push(row.into_iter().map(BigInt::from).collect::<Vec<_>>());
        }
    }
    let diag = smith_diagonal(&rows)?;
    let free = m - diag.iter().filter(|d| !d.is_zero()).count();
    if free != k {
        return Err(Error::Violation(format!("relation module has free rank {free}, expected {k}")));
    }
    Ok(diag
        .iter()
        .filter(|d| !d.is_zero() && !d.is_one())
        .map(|d| d.to_u64().expect("factor fits"))
        .collect())
}
