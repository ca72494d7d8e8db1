//! Classes of `G`-varieties, their noncommutative motivic measure, and the
//! representation-valued Euler characteristic it factors.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::arith::Cyclotomic;
use crate::catalog::VarietySymbol;
use crate::error::{Error, Result};
use crate::group::{construct_group, same_group, GroupRef};
use crate::motives::{decompose_collection, MotiveAtom, MotiveSkeleton};
use crate::rep::{character_table, permutation_character, VirtualCharacter};
use crate::twisted::invariant_copies;

/// Integer combination of variety symbols.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct K0VarExpr {
    pub terms: Vec<(i64, VarietySymbol)>,
}

impl K0VarExpr {
    pub fn symbol(s: VarietySymbol) -> Self {
        K0VarExpr { terms: vec![(1, s)] }
    }
}

/// Element of `K_0` of the skeleton category: atoms with integer
/// multiplicities, zero terms dropped.
#[derive(Debug, Clone)]
pub struct K0NCClass {
    group: GroupRef,
    terms: BTreeMap<MotiveAtom, i64>,
}

impl K0NCClass {
    pub fn zero(group: GroupRef) -> Self {
        K0NCClass { group, terms: BTreeMap::new() }
    }

    pub fn from_skeleton(s: &MotiveSkeleton) -> Self {
        let mut c = K0NCClass::zero(s.group().clone());
        for a in s.atoms() {
            *c.terms.entry(a.clone()).or_insert(0) += 1;
        }
        c
    }

    pub fn group(&self) -> &GroupRef {
        &self.group
    }

    pub fn terms(&self) -> &BTreeMap<MotiveAtom, i64> {
        &self.terms
    }

    pub fn add(&self, other: &K0NCClass) -> Result<K0NCClass> {
        self.add_scaled(other, 1)
    }

    pub fn add_scaled(&self, other: &K0NCClass, k: i64) -> Result<K0NCClass> {
        if !same_group(&self.group, &other.group) {
            return Err(Error::GroupMismatch);
        }
        let mut terms = self.terms.clone();
        for (a, &m) in &other.terms {
            *terms.entry(a.clone()).or_insert(0) += k * m;
        }
        terms.retain(|_, m| *m != 0);
        Ok(K0NCClass { group: self.group.clone(), terms })
    }

    pub fn scale(&self, k: i64) -> K0NCClass {
        K0NCClass::zero(self.group.clone()).add_scaled(self, k).expect("same group")
    }

    /// Tensor product; defined here for twisted units only, where it
    /// multiplies classes.
    pub fn tensor(&self, other: &K0NCClass) -> Result<K0NCClass> {
        if !same_group(&self.group, &other.group) {
            return Err(Error::GroupMismatch);
        }
        let mut terms: BTreeMap<MotiveAtom, i64> = BTreeMap::new();
        for (a, &m) in &self.terms {
            for (b, &n) in &other.terms {
                let atom = match (a, b) {
                    (MotiveAtom::TwistedUnit(x), MotiveAtom::TwistedUnit(y)) => MotiveAtom::TwistedUnit(x.mul(y)?),
                    _ => return Err(Error::UnsupportedAtom("tensor products of induced atoms".into())),
                };
                *terms.entry(atom).or_insert(0) += m * n;
            }
        }
        terms.retain(|_, m| *m != 0);
        Ok(K0NCClass { group: self.group.clone(), terms })
    }

    /// `sum m_a [G:H_a]`, the length after forgetting the action.
    pub fn restricted_rank(&self) -> i64 {
        self.terms.iter().map(|(a, &m)| m * a.restricted_length() as i64).sum()
    }
}

impl PartialEq for K0NCClass {
    fn eq(&self, other: &Self) -> bool {
        same_group(&self.group, &other.group) && self.terms == other.terms
    }
}

impl fmt::Display for K0NCClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(a, &m)| if m == 1 { a.to_string() } else { format!("{m}*{a}") })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl Serialize for K0NCClass {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Term<'a> {
            atom: &'a MotiveAtom,
            multiplicity: i64,
        }
        let v: Vec<Term> = self.terms.iter().map(|(atom, &multiplicity)| Term { atom, multiplicity }).collect();
        v.serialize(s)
    }
}

pub fn skeleton_of(symbol: &VarietySymbol) -> Result<MotiveSkeleton> {
    decompose_collection(&symbol.collection()?)
}

/// `[X] -> [U(G, perf X)]`, through the exceptional-collection decomposition.
pub fn mu_nc(symbol: &VarietySymbol) -> Result<K0NCClass> {
    Ok(K0NCClass::from_skeleton(&skeleton_of(symbol)?))
}

pub fn mu_nc_expr(expr: &K0VarExpr) -> Result<K0NCClass> {
    let mut out: Option<K0NCClass> = None;
    for (k, s) in &expr.terms {
        let c = mu_nc(s)?.scale(*k);
        out = Some(match out {
            None => c,
            Some(acc) => acc.add(&c)?,
        });
    }
    out.ok_or_else(|| Error::Parse("empty expression".into()))
}

#[derive(Debug, Clone, Serialize)]
pub struct BlowupReport {
    pub ok: bool,
    pub blowup: String,
    pub expected_blowup: String,
    pub divisor: String,
    pub expected_divisor: String,
}

/// The two blow-up relations at class level:
/// `[Bl_Y X] = [X] + (c-1)[Y]` and `[E] = c [Y]`.
pub fn blowup_check(
    x: &VarietySymbol,
    y: &VarietySymbol,
    codim: i64,
    bl: &VarietySymbol,
    e: &VarietySymbol,
) -> Result<BlowupReport> {
    let key = |s: &VarietySymbol| serde_json::to_string(s).unwrap_or_default();
    if key(x) == key(y) {
        return Err(Error::InconsistentAction("the blow-up center must differ from the ambient variety".into()));
    }
    if codim < 1 {
        return Err(Error::ParamRange(format!("codimension must be positive, got {codim}")));
    }
    let (cx, cy, cb, ce) = (mu_nc(x)?, mu_nc(y)?, mu_nc(bl)?, mu_nc(e)?);
    let want_bl = cx.add_scaled(&cy, codim - 1)?;
    let want_e = cy.scale(codim);
    Ok(BlowupReport {
        ok: cb == want_bl && ce == want_e,
        blowup: cb.to_string(),
        expected_blowup: want_bl.to_string(),
        divisor: ce.to_string(),
        expected_divisor: want_e.to_string(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Invariant {
    HH,
    HP,
    K0Rank,
}

impl FromStr for Invariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "hh" => Ok(Invariant::HH),
            "hp" => Ok(Invariant::HP),
            "k0rank" | "k0" => Ok(Invariant::K0Rank),
            _ => Err(Error::UnsupportedInvariant(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InvariantValue {
    /// Dimensions by Hochschild degree.
    Graded(BTreeMap<i64, u64>),
    /// (even, odd) periodic cyclic dimensions.
    Periodic { even: u64, odd: u64 },
    Rank(u64),
}

/// Copies of `E(C)` contributed by an atom: alpha-regular classes for a
/// twisted unit, conjugacy classes of `H` for `G / H`.
pub fn atom_copies(a: &MotiveAtom) -> Result<u64> {
    Ok(match a {
        MotiveAtom::TwistedUnit(c) => invariant_copies(c.representative())? as u64,
        MotiveAtom::Induced(h) => h.as_group().0.class_count() as u64,
    })
}

pub fn evaluate_invariant(a: &MotiveSkeleton, which: Invariant) -> Result<InvariantValue> {
    let mut total = 0u64;
    for atom in a.atoms() {
        total += atom_copies(atom)?;
    }
    Ok(match which {
        Invariant::HH => InvariantValue::Graded(BTreeMap::from([(0, total)])),
        Invariant::HP => InvariantValue::Periodic { even: total, odd: 0 },
        Invariant::K0Rank => InvariantValue::Rank(total),
    })
}

/// The class function `g -> chi(X^g)` decomposed over `Irr(G)`; the
/// multiplicities must be integers.
pub fn euler_char_rep(group: &GroupRef, fixed_euler: &[i64]) -> Result<VirtualCharacter> {
    let table = character_table(group)?;
    if fixed_euler.len() != group.class_count() {
        return Err(Error::ClassCountMismatch { expected: group.class_count(), got: fixed_euler.len() });
    }
    let values: Vec<Cyclotomic> = fixed_euler.iter().map(|&v| Cyclotomic::from_int(1, v)).collect();
    let chi = VirtualCharacter::from_class_function(table, &values)
        .map_err(|e| Error::NonIntegralCharacter(e.to_string()))?;
    if !chi.is_integral() {
        return Err(Error::NonIntegralCharacter(format!("multiplicities {chi}")));
    }
    Ok(chi)
}

/// Twisted units go to the trivial character (the twist is invisible to
/// Hochschild homology with its action), `G / H` to its permutation character.
pub fn hh_class(a: &MotiveSkeleton) -> Result<VirtualCharacter> {
    let g = a.group();
    let table = character_table(g)?;
    let mut out = VirtualCharacter::zero(table.clone());
    for atom in a.atoms() {
        let chi = match atom {
            MotiveAtom::TwistedUnit(_) => VirtualCharacter::trivial(table.clone()),
            MotiveAtom::Induced(h) => permutation_character(g, h)?,
        };
        out = out.add(&chi)?;
    }
    Ok(out)
}

/// Same as [`hh_class`] on a class with multiplicities.
pub fn hh_class_k0(c: &K0NCClass) -> Result<VirtualCharacter> {
    let g = c.group();
    let table = character_table(g)?;
    let mut out = VirtualCharacter::zero(table.clone());
    for (atom, &m) in c.terms() {
        let chi = match atom {
            MotiveAtom::TwistedUnit(_) => VirtualCharacter::trivial(table.clone()),
            MotiveAtom::Induced(h) => permutation_character(g, h)?,
        };
        out = out.add(&chi.scale(&num_rational::BigRational::from_integer(m.into())))?;
    }
    Ok(out)
}

/// Component-wise sums of per-class `(even, odd)` sector dimensions.
pub fn orbifold_dims(group: &GroupRef, sectors: &[(u64, u64)]) -> Result<(u64, u64)> {
    if sectors.len() != group.class_count() {
        return Err(Error::ClassCountMismatch { expected: group.class_count(), got: sectors.len() });
    }
    Ok(sectors.iter().fold((0, 0), |(e, o), &(a, b)| (e + a, o + b)))
}

/// A variety with an action and per-class fixed-locus data, keyed by any
/// element of the class.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MeasureDataset {
    #[serde(default)]
    pub description: String,
    pub symbol: VarietySymbol,
    pub fixed_locus: BTreeMap<String, i64>,
    #[serde(default)]
    pub sectors: BTreeMap<String, [u64; 2]>,
}

fn per_class<T: Copy>(group: &GroupRef, data: &BTreeMap<String, T>, what: &str) -> Result<Vec<T>> {
    let mut out: Vec<Option<T>> = vec![None; group.class_count()];
    for (k, &v) in data {
        let g: usize = k.trim().parse().map_err(|e| Error::Parse(format!("{what} key {k:?}: {e}")))?;
        if g >= group.order() {
            return Err(Error::Parse(format!("{what} key {g} is not a group element")));
        }
        let c = group.class_index(g);
        if out[c].is_some() {
            return Err(Error::Parse(format!("{what} gives two values for class {c}")));
        }
        out[c] = Some(v);
    }
    if out.iter().any(|x| x.is_none()) {
        return Err(Error::ClassCountMismatch { expected: group.class_count(), got: data.len() });
    }
    Ok(out.into_iter().map(|x| x.expect("checked")).collect())
}

impl MeasureDataset {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref()).map_err(|e| Error::Io(e.to_string()))?;
        serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn group(&self) -> Result<GroupRef> {
        construct_group(&self.symbol.group)
    }

    pub fn fixed_euler(&self, group: &GroupRef) -> Result<Vec<i64>> {
        per_class(group, &self.fixed_locus, "fixed_locus")
    }

    pub fn sector_dims(&self, group: &GroupRef) -> Result<Vec<(u64, u64)>> {
        Ok(per_class(group, &self.sectors, "sectors")?.into_iter().map(|[a, b]| (a, b)).collect())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FactorizationReport {
    pub ok: bool,
    pub euler: VirtualCharacter,
    pub hh: VirtualCharacter,
}

/// `euler_char_rep(data) = hh_class(mu_nc(X))`.
pub fn factorization_check(data: &MeasureDataset) -> Result<FactorizationReport> {
    let skeleton = skeleton_of(&data.symbol)?;
    let group = skeleton.group().clone();
    let euler = euler_char_rep(&group, &data.fixed_euler(&group)?)?;
    let hh = hh_class(&skeleton)?;
    Ok(FactorizationReport { ok: euler == hh, euler, hh })
}

/// A blow-up square `E -> Bl_Y X`, `Y -> X` of codimension `codim`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BlowupDataset {
    #[serde(default)]
    pub description: String,
    pub x: VarietySymbol,
    pub y: VarietySymbol,
    pub codim: i64,
    pub blowup: VarietySymbol,
    pub divisor: VarietySymbol,
}

impl BlowupDataset {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref()).map_err(|e| Error::Io(e.to_string()))?;
        serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn check(&self) -> Result<BlowupReport> {
        blowup_check(&self.x, &self.y, self.codim, &self.blowup, &self.divisor)
    }
}

/// Sum of `|G|/|H|` over atoms equals the rank of [`hh_class`].
pub fn hh_rank_matches_restriction(a: &MotiveSkeleton) -> Result<bool> {
    let r = hh_class(a)?.rank();
    Ok(r == num_rational::BigRational::from_integer((crate::motives::restrict_skeleton(a) as i64).into()))
}

/// Degree-0 part of an HH value, zero if absent.
pub fn hh_degree_zero(v: &InvariantValue) -> u64 {
    match v {
        InvariantValue::Graded(m) => m.get(&0).copied().unwrap_or(0),
        InvariantValue::Periodic { even, .. } => *even,
        InvariantValue::Rank(r) => *r,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::ActionFile;
    use crate::group::GroupSpec;

    fn c2() -> GroupSpec {
        GroupSpec::cyclic(2)
    }

    fn sym(entry: &str, group: GroupSpec, action: &str) -> VarietySymbol {
        let action: ActionFile = if action.is_empty() { ActionFile::default() } else { serde_json::from_str(action).unwrap() };
        VarietySymbol { entry: entry.into(), group, action }
    }

    #[test]
    fn mu_nc_examples() {
        let pt = mu_nc(&sym("point", c2(), "")).unwrap();
        assert_eq!(pt.to_string(), "U(1)");
        let two = mu_nc(&sym("disjoint_points:2", c2(), r#"{"orbits":{"0":[[0]]}}"#)).unwrap();
        assert_eq!(two.terms().len(), 1);
        assert!(matches!(two.terms().keys().next(), Some(MotiveAtom::Induced(_))));
        let p2 = mu_nc(&sym("projective_space:2", c2(), "")).unwrap();
        assert_eq!(p2, pt.scale(3));
    }

    #[test]
    fn products_are_tensor_products() {
        let e9 = GroupSpec::ElemAbelian { p: 3, k: 2 };
        for (a, b) in [(1usize, 1usize), (1, 2), (2, 2)] {
            let prod = mu_nc(&sym(
                &format!("projective_product:{a},{b}"),
                e9.clone(),
                r#"{"classes":{"alpha":[1],"beta":[2]}}"#,
            ))
            .unwrap();
            let x = mu_nc(&sym(&format!("projective_space:{a}"), e9.clone(), r#"{"classes":{"alpha":[1]}}"#)).unwrap();
            let y = mu_nc(&sym(&format!("projective_space:{b}"), e9.clone(), r#"{"classes":{"alpha":[2]}}"#)).unwrap();
            assert_eq!(prod, x.tensor(&y).unwrap());
            let pt = mu_nc(&sym("point", e9.clone(), "")).unwrap();
            assert_eq!(pt.tensor(&x).unwrap(), x);
        }
    }

    #[test]
    fn euler_characters() {
        let g = construct_group(&c2()).unwrap();
        let t = character_table(&g).unwrap();
        assert_eq!(euler_char_rep(&g, &[2, 0]).unwrap(), VirtualCharacter::regular(t.clone()));
        assert_eq!(euler_char_rep(&g, &[2, 2]).unwrap().int_coeffs().unwrap(), vec![2, 0]);
        assert!(matches!(euler_char_rep(&g, &[2, 1]), Err(Error::NonIntegralCharacter(_))));
        let triv = construct_group(&GroupSpec::cyclic(1)).unwrap();
        assert_eq!(euler_char_rep(&triv, &[5]).unwrap().int_coeffs().unwrap(), vec![5]);
    }

    #[test]
    fn invariants() {
        let sk = skeleton_of(&sym("projective_space:3", GroupSpec::cyclic(1), "")).unwrap();
        assert_eq!(evaluate_invariant(&sk, Invariant::HH).unwrap(), InvariantValue::Graded(BTreeMap::from([(0, 4)])));
        let pairing = r#"{"classes":{"alpha":[1]}}"#;
        let e4 = GroupSpec::ElemAbelian { p: 2, k: 2 };
        let sk = skeleton_of(&sym("projective_space:1", e4, pairing)).unwrap();
        // U(1) + U(alpha): 4 classes plus 1 regular class
        assert_eq!(evaluate_invariant(&sk, Invariant::K0Rank).unwrap(), InvariantValue::Rank(5));
        let free = skeleton_of(&sym("disjoint_points:2", GroupSpec::cyclic(4), r#"{"orbits":{"0":[[0,2]]}}"#)).unwrap();
        assert_eq!(hh_degree_zero(&evaluate_invariant(&free, Invariant::HH).unwrap()), 2);
        assert!(hh_rank_matches_restriction(&free).unwrap());
        assert!(matches!("hc".parse::<Invariant>(), Err(Error::UnsupportedInvariant(_))));
    }

    #[test]
    fn orbifold() {
        let g = construct_group(&c2()).unwrap();
        assert_eq!(orbifold_dims(&g, &[(2, 0), (2, 0)]).unwrap(), (4, 0));
        assert!(matches!(orbifold_dims(&g, &[]), Err(Error::ClassCountMismatch { .. })));
        let t = construct_group(&GroupSpec::cyclic(1)).unwrap();
        assert_eq!(orbifold_dims(&t, &[(3, 1)]).unwrap(), (3, 1));
    }

    #[test]
    fn blowup_guards() {
        let p2 = sym("projective_space:2", c2(), "");
        let pt = sym("point", c2(), "");
        assert!(blowup_check(&p2, &p2, 2, &p2, &pt).is_err());
        let bl = sym("del_pezzo_bl1", c2(), "");
        let e = sym("projective_space:1", c2(), "");
        assert!(blowup_check(&p2, &pt, 2, &bl, &e).unwrap().ok);
        assert!(!blowup_check(&p2, &pt, 3, &bl, &e).unwrap().ok);
    }
}
