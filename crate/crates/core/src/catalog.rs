//! Varieties with full exceptional collections, their Betti/Hodge data, and
//! the action templates that turn them into collection specs.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::cohomology::{schur_multiplier, CohomClass, SchurMultiplier};
use crate::error::{Error, Result};
use crate::group::{construct_group, same_group, GroupRef, GroupSpec, Subgroup};
use crate::motives::{Block, CollectionSpec};

const MAX_PROJECTIVE: usize = 12;
const MAX_QUADRIC: usize = 10;
const MAX_GRASSMANNIAN: usize = 8;

/// Monomial in the class symbols of an entry, e.g. `alpha^2 * beta`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct ClassExpr(pub Vec<(String, i64)>);

impl ClassExpr {
    pub fn one() -> Self {
        ClassExpr(Vec::new())
    }

    pub fn power(symbol: &str, k: i64) -> Self {
        if k == 0 {
            ClassExpr::one()
        } else {
            ClassExpr(vec![(symbol.to_string(), k)])
        }
    }

    pub fn times(mut self, other: &ClassExpr) -> Self {
        for (s, k) in &other.0 {
            match self.0.iter_mut().find(|(t, _)| t == s) {
                Some((_, e)) => *e += k,
                None => self.0.push((s.clone(), *k)),
            }
        }
        self.0.retain(|(_, k)| *k != 0);
        self.0.sort();
        self
    }

    pub fn symbols(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(|(s, _)| s.as_str())
    }

    /// Value under an assignment of classes to symbols; unassigned symbols
    /// are trivial.
    pub fn evaluate(&self, multiplier: &SchurMultiplier, classes: &BTreeMap<String, CohomClass>) -> Result<CohomClass> {
        let mut c = multiplier.trivial_class()?;
        for (s, k) in &self.0 {
            if let Some(x) = classes.get(s) {
                c = c.mul(&x.pow(*k)?)?;
            }
        }
        Ok(c)
    }
}

impl fmt::Display for ClassExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(s, k)| if *k == 1 { s.clone() } else { format!("{s}^{k}") })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

impl FromStr for ClassExpr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "1" || s.is_empty() {
            return Ok(ClassExpr::one());
        }
        let mut out = ClassExpr::one();
        for factor in s.split('*') {
            let (sym, k) = match factor.trim().split_once('^') {
                Some((a, b)) => (a.trim(), b.trim().parse::<i64>().map_err(|e| Error::Parse(format!("{factor}: {e}")))?),
                None => (factor.trim(), 1),
            };
            if sym.is_empty() || !sym.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(Error::Parse(format!("bad class symbol {sym:?}")));
            }
            out = out.times(&ClassExpr::power(sym, k));
        }
        Ok(out)
    }
}

/// One exceptional object of a template collection.
#[derive(Debug, Clone, Serialize)]
pub struct TemplateObject {
    pub label: String,
    pub class: ClassExpr,
    /// Objects sharing a slot may be permuted by the action; `None` means
    /// the object is invariant under every action.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slot: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CatalogEntry {
    pub name: String,
    pub params: Vec<usize>,
    pub dimension: usize,
    pub betti: Vec<u64>,
    /// `hodge[p][q] = h^{p,q}`.
    pub hodge: Vec<Vec<u64>>,
    pub collection: Vec<TemplateObject>,
    /// Sizes of the permutable slots.
    pub slots: Vec<usize>,
}

impl CatalogEntry {
    pub fn key(&self) -> String {
        if self.params.is_empty() {
            self.name.clone()
        } else {
            let p: Vec<String> = self.params.iter().map(|x| x.to_string()).collect();
            format!("{}:{}", self.name, p.join(","))
        }
    }

    pub fn length(&self) -> usize {
        self.collection.len()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.betti.iter().enumerate().map(|(i, &b)| if i % 2 == 0 { b as i64 } else { -(b as i64) }).sum()
    }

    /// `dim HH_i = sum_{p - q = i} h^{p,q}`, nonzero degrees only.
    pub fn hochschild_dims(&self) -> BTreeMap<i64, u64> {
        let mut out = BTreeMap::new();
        for (p, row) in self.hodge.iter().enumerate() {
            for (q, &h) in row.iter().enumerate() {
                if h != 0 {
                    *out.entry(p as i64 - q as i64).or_insert(0) += h;
                }
            }
        }
        out
    }

    /// Symbols that appear in the template classes.
    pub fn symbols(&self) -> Vec<String> {
        let mut s: Vec<String> = self.collection.iter().flat_map(|o| o.class.symbols().map(String::from)).collect();
        s.sort();
        s.dedup();
        s
    }
}

fn diagonal_hodge(betti: &[u64]) -> Vec<Vec<u64>> {
    let d = betti.len() / 2;
    (0..=d).map(|p| (0..=d).map(|q| if p == q { betti[2 * p] } else { 0 }).collect()).collect()
}

fn betti_from_even(even: &[u64]) -> Vec<u64> {
    let mut b = Vec::with_capacity(2 * even.len());
    for (i, &x) in even.iter().enumerate() {
        if i > 0 {
            b.push(0);
        }
        b.push(x);
    }
    b
}

fn object(label: impl Into<String>, class: ClassExpr) -> TemplateObject {
    TemplateObject { label: label.into(), class, slot: None }
}

fn line_bundles(n: usize) -> Vec<TemplateObject> {
    (0..n).map(|i| object(format!("O({i})"), ClassExpr::power("alpha", i as i64))).collect()
}

fn entry(name: &str, params: Vec<usize>, dimension: usize, even_betti: &[u64], collection: Vec<TemplateObject>) -> CatalogEntry {
    let betti = betti_from_even(even_betti);
    let slots = {
        let mut sizes: BTreeMap<usize, usize> = BTreeMap::new();
        for o in &collection {
            if let Some(s) = o.slot {
                *sizes.entry(s).or_insert(0) += 1;
            }
        }
        sizes.into_values().collect()
    };
    CatalogEntry {
        name: name.to_string(),
        params,
        dimension,
        hodge: diagonal_hodge(&betti),
        betti,
        collection,
        slots,
    }
}

/// Partitions fitting in a `rows x cols` box, grouped by size.
fn box_partitions(rows: usize, cols: usize) -> Vec<Vec<usize>> {
    fn rec(rows: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        out.push(prefix.clone());
        if prefix.len() == rows {
            return;
        }
        for part in 1..=max {
            prefix.push(part);
            rec(rows, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(rows, cols, &mut Vec::new(), &mut out);
    out.sort_by_key(|p| (p.iter().sum::<usize>(), std::cmp::Reverse(p.clone())));
    out
}

fn check_range(ok: bool, what: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::ParamRange(what()))
    }
}

pub fn catalog_lookup(name: &str, params: &[usize]) -> Result<CatalogEntry> {
    let arity = |k: usize| -> Result<()> {
        check_range(params.len() == k, || format!("{name} takes {k} parameter(s), got {}", params.len()))
    };
    match name {
        "point" => {
            arity(0)?;
            Ok(entry("point", vec![], 0, &[1], vec![object("O", ClassExpr::one())]))
        }
        "disjoint_points" => {
            arity(1)?;
            let k = params[0];
            check_range((1..=64).contains(&k), || format!("disjoint_points needs 1 <= k <= 64, got {k}"))?;
            let objs = (0..k)
                .map(|i| TemplateObject { label: format!("O_p{}", i + 1), class: ClassExpr::one(), slot: Some(0) })
                .collect();
            Ok(entry("disjoint_points", vec![k], 0, &[k as u64], objs))
        }
        "projective_space" => {
            arity(1)?;
            let n = params[0];
            check_range(n <= MAX_PROJECTIVE, || format!("projective_space needs n <= {MAX_PROJECTIVE}, got {n}"))?;
            Ok(entry("projective_space", vec![n], n, &vec![1; n + 1], line_bundles(n + 1)))
        }
        "quadric_odd" => {
            arity(1)?;
            let d = params[0];
            check_range(d % 2 == 1 && d <= MAX_QUADRIC, || format!("quadric_odd needs odd d <= {MAX_QUADRIC}, got {d}"))?;
            let mut objs = vec![object("S", ClassExpr::power("beta", 1))];
            objs.extend(line_bundles(d));
            Ok(entry("quadric_odd", vec![d], d, &vec![1; d + 1], objs))
        }
        "quadric_even" => {
            arity(1)?;
            let d = params[0];
            check_range(d.is_multiple_of(2) && (2..=MAX_QUADRIC).contains(&d), || {
                format!("quadric_even needs even 2 <= d <= {MAX_QUADRIC}, got {d}")
            })?;
            let mut objs = vec![
                TemplateObject { label: "S-".into(), class: ClassExpr::power("beta", 1), slot: Some(0) },
                TemplateObject { label: "S+".into(), class: ClassExpr::power("gamma", 1), slot: Some(0) },
            ];
            objs.extend(line_bundles(d));
            let mut even = vec![1u64; d + 1];
            even[d / 2] = 2;
            Ok(entry("quadric_even", vec![d], d, &even, objs))
        }
        "grassmannian" => {
            arity(2)?;
            let (n, d) = (params[0], params[1]);
            check_range(n >= 1 && n <= d && d <= MAX_GRASSMANNIAN, || {
                format!("grassmannian needs 1 <= n <= d <= {MAX_GRASSMANNIAN}, got ({n},{d})")
            })?;
            let dim = n * (d - n);
            let parts = box_partitions(n, d - n);
            let mut even = vec![0u64; dim + 1];
            let objs = parts
                .iter()
                .map(|p| {
                    let size: usize = p.iter().sum();
                    even[size] += 1;
                    let label = if p.is_empty() { "O".to_string() } else { format!("Sigma{p:?}U*") };
                    object(label, ClassExpr::power("alpha", size as i64))
                })
                .collect();
            Ok(entry("grassmannian", vec![n, d], dim, &even, objs))
        }
        "del_pezzo_bl2" => {
            arity(0)?;
            let mut objs = vec![
                TemplateObject { label: "O_E1(-1)".into(), class: ClassExpr::power("gamma", 1), slot: Some(0) },
                TemplateObject { label: "O_E2(-1)".into(), class: ClassExpr::power("beta", 1), slot: Some(0) },
            ];
            objs.extend(line_bundles(3));
            Ok(entry("del_pezzo_bl2", vec![], 2, &[1, 3, 1], objs))
        }
        "del_pezzo_bl1" => {
            arity(0)?;
            let mut objs = vec![object("O_E(-1)", ClassExpr::power("beta", 1))];
            objs.extend(line_bundles(3));
            Ok(entry("del_pezzo_bl1", vec![], 2, &[1, 2, 1], objs))
        }
        "disjoint_projective" => {
            arity(2)?;
            let (n, k) = (params[0], params[1]);
            check_range(n <= MAX_PROJECTIVE && (1..=64).contains(&k), || {
                format!("disjoint_projective needs n <= {MAX_PROJECTIVE}, 1 <= k <= 64, got ({n},{k})")
            })?;
            let mut objs = Vec::new();
            for i in 0..=n {
                for c in 0..k {
                    objs.push(TemplateObject {
                        label: format!("O_{}({i})", c + 1),
                        class: ClassExpr::power("alpha", i as i64),
                        slot: Some(i),
                    });
                }
            }
            Ok(entry("disjoint_projective", vec![n, k], n, &vec![k as u64; n + 1], objs))
        }
        "projective_product" => {
            arity(2)?;
            let (a, b) = (params[0], params[1]);
            check_range(a <= MAX_PROJECTIVE && b <= MAX_PROJECTIVE, || {
                format!("projective_product needs factors <= {MAX_PROJECTIVE}, got ({a},{b})")
            })?;
            let mut even = vec![0u64; a + b + 1];
            let mut objs = Vec::new();
            for i in 0..=a {
                for j in 0..=b {
                    even[i + j] += 1;
                    let class = ClassExpr::power("alpha", i as i64).times(&ClassExpr::power("beta", j as i64));
                    objs.push(object(format!("O({i},{j})"), class));
                }
            }
            Ok(entry("projective_product", vec![a, b], a + b, &even, objs))
        }
        _ => Err(Error::UnknownEntry(name.to_string())),
    }
}

/// All entry names accepted by [`catalog_lookup`].
pub const ENTRY_NAMES: &[&str] = &[
    "point",
    "disjoint_points",
    "projective_space",
    "quadric_odd",
    "quadric_even",
    "grassmannian",
    "del_pezzo_bl2",
    "del_pezzo_bl1",
    "disjoint_projective",
    "projective_product",
];

/// Parse `name` or `name:p1,p2` and look it up.
pub fn lookup_key(key: &str) -> Result<CatalogEntry> {
    let (name, params) = match key.split_once(':') {
        Some((n, p)) => {
            let params = p
                .split(',')
                .map(|x| x.trim().parse::<usize>().map_err(|e| Error::Parse(format!("{key}: {e}"))))
                .collect::<Result<Vec<_>>>()?;
            (n.trim(), params)
        }
        None => (key.trim(), Vec::new()),
    };
    catalog_lookup(name, &params)
}

/// Every entry at small parameters, used for catalog-wide checks.
pub fn full_catalog() -> Vec<CatalogEntry> {
    let mut out = vec![catalog_lookup("point", &[]).expect("catalog")];
    for k in 1..=4 {
        out.push(catalog_lookup("disjoint_points", &[k]).expect("catalog"));
    }
    for n in 0..=MAX_PROJECTIVE {
        out.push(catalog_lookup("projective_space", &[n]).expect("catalog"));
    }
    for d in (1..=MAX_QUADRIC).step_by(2) {
        out.push(catalog_lookup("quadric_odd", &[d]).expect("catalog"));
    }
    for d in (2..=MAX_QUADRIC).step_by(2) {
        out.push(catalog_lookup("quadric_even", &[d]).expect("catalog"));
    }
    for d in 1..=MAX_GRASSMANNIAN {
        for n in 1..=d {
            out.push(catalog_lookup("grassmannian", &[n, d]).expect("catalog"));
        }
    }
    out.push(catalog_lookup("del_pezzo_bl2", &[]).expect("catalog"));
    out.push(catalog_lookup("del_pezzo_bl1", &[]).expect("catalog"));
    out.push(catalog_lookup("disjoint_projective", &[1, 2]).expect("catalog"));
    out.push(catalog_lookup("projective_product", &[1, 1]).expect("catalog"));
    out
}

/// A `G`-action on a catalog entry: classes for the template symbols and
/// the stabilizers of permuted objects, slot by slot.
#[derive(Debug, Clone)]
pub struct ActionSpec {
    pub group: GroupRef,
    pub classes: BTreeMap<String, CohomClass>,
    /// `orbits[slot]` lists the stabilizers of the orbits into which the
    /// objects of that slot fall; objects not covered stay invariant.
    pub orbits: BTreeMap<usize, Vec<Subgroup>>,
}

impl ActionSpec {
    pub fn trivial(group: GroupRef) -> Self {
        ActionSpec { group, classes: BTreeMap::new(), orbits: BTreeMap::new() }
    }

    pub fn with_class(mut self, symbol: &str, class: CohomClass) -> Self {
        self.classes.insert(symbol.to_string(), class);
        self
    }

    pub fn with_orbit(mut self, slot: usize, stabilizer: Subgroup) -> Self {
        self.orbits.entry(slot).or_default().push(stabilizer);
        self
    }
}

/// JSON form of an [`ActionSpec`]: `{"classes": {"alpha": [1]}, "orbits": {"0": [[0]]}}`.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct ActionFile {
    #[serde(default)]
    pub classes: BTreeMap<String, Vec<u64>>,
    #[serde(default)]
    pub orbits: BTreeMap<usize, Vec<Vec<usize>>>,
}

impl ActionFile {
    pub fn resolve(&self, group: &GroupRef) -> Result<ActionSpec> {
        let mut spec = ActionSpec::trivial(group.clone());
        if !self.classes.is_empty() {
            let m = schur_multiplier(group)?;
            for (s, c) in &self.classes {
                spec.classes.insert(s.clone(), m.class_from_coordinates(c)?);
            }
        }
        for (&slot, list) in &self.orbits {
            for members in list {
                spec = spec.with_orbit(slot, Subgroup::new(group.clone(), members.iter().copied())?);
            }
        }
        Ok(spec)
    }
}

/// A catalog variety together with a group action, as used by the CLI and
/// the dataset files.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VarietySymbol {
    pub entry: String,
    pub group: GroupSpec,
    #[serde(default)]
    pub action: ActionFile,
}

impl VarietySymbol {
    pub fn resolve(&self) -> Result<(CatalogEntry, ActionSpec)> {
        let entry = lookup_key(&self.entry)?;
        let group = construct_group(&self.group)?;
        let action = self.action.resolve(&group)?;
        Ok((entry, action))
    }

    pub fn collection(&self) -> Result<CollectionSpec> {
        let (entry, action) = self.resolve()?;
        instantiate(&entry, &action)
    }
}

impl fmt::Display for VarietySymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.entry)?;
        if !self.action.orbits.is_empty() || !self.action.classes.is_empty() {
            write!(f, "[{}]", serde_json::to_string(&self.action).map_err(|_| fmt::Error)?)?;
        }
        Ok(())
    }
}

/// Turn an entry and an action into blocks: invariant objects become
/// length-1 blocks with their template class, and each orbit of a slot
/// becomes one block of length `[G:H]`.
pub fn instantiate(entry: &CatalogEntry, action: &ActionSpec) -> Result<CollectionSpec> {
    let g = &action.group;
    let symbols = entry.symbols();
    for s in action.classes.keys() {
        if !symbols.contains(s) {
            return Err(Error::InconsistentAction(format!("{} has no class symbol {s}", entry.key())));
        }
    }
    for c in action.classes.values() {
        if !same_group(c.group(), g) {
            return Err(Error::GroupMismatch);
        }
    }
    let multiplier = schur_multiplier(g)?;
    let mut blocks = Vec::new();
    let mut permuted = vec![false; entry.collection.len()];
    for (&slot, stabilizers) in &action.orbits {
        let members: Vec<usize> = (0..entry.collection.len()).filter(|&i| entry.collection[i].slot == Some(slot)).collect();
        if members.is_empty() {
            return Err(Error::InconsistentAction(format!("{} has no permutable slot {slot}", entry.key())));
        }
        let moved: usize = stabilizers.iter().map(|h| h.index()).sum();
        if moved > members.len() {
            return Err(Error::InconsistentAction(format!(
                "slot {slot} holds {} objects but the orbits cover {moved}",
                members.len()
            )));
        }
        let mut cursor = 0;
        for h in stabilizers {
            if !same_group(h.parent(), g) {
                return Err(Error::GroupMismatch);
            }
            if h.is_whole() {
                return Err(Error::InconsistentAction("an orbit stabilizer must be a proper subgroup".into()));
            }
            let objs = &members[cursor..cursor + h.index()];
            for &i in objs {
                permuted[i] = true;
                if let Some(s) = entry.collection[i].class.symbols().find(|s| action.classes.contains_key(*s)) {
                    return Err(Error::InconsistentAction(format!(
                        "{} is permuted, so no class may be assigned to {s}",
                        entry.collection[i].label
                    )));
                }
            }
            cursor += h.index();
            blocks.push(Block { length: h.index(), stabilizer: h.clone(), class: None });
        }
    }
    for (i, obj) in entry.collection.iter().enumerate() {
        if permuted[i] {
            continue;
        }
        let class = obj.class.evaluate(&multiplier, &action.classes)?;
        blocks.push(Block { length: 1, stabilizer: Subgroup::whole(g.clone()), class: Some(class) });
    }
    Ok(CollectionSpec { group: g.clone(), blocks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::motives::{decompose_collection, restrict_skeleton};
    use std::sync::Arc;

    fn group(s: &str) -> GroupRef {
        Arc::new(s.parse::<GroupSpec>().unwrap().build().unwrap())
    }

    #[test]
    fn lookup_examples() {
        let p2 = lookup_key("projective_space:2").unwrap();
        assert_eq!(p2.length(), 3);
        assert_eq!(p2.betti, vec![1, 0, 1, 0, 1]);
        let dp = lookup_key("del_pezzo_bl2").unwrap();
        assert_eq!(dp.length(), 5);
        assert_eq!(dp.betti, vec![1, 0, 3, 0, 1]);
        assert_eq!(lookup_key("quadric_even:2").unwrap().length(), 4);
        assert_eq!(lookup_key("quadric_odd:3").unwrap().length(), 4);
        assert_eq!(lookup_key("grassmannian:2,4").unwrap().betti, vec![1, 0, 1, 0, 2, 0, 1, 0, 1]);
        assert!(matches!(lookup_key("projective_space:13"), Err(Error::ParamRange(_))));
        assert!(matches!(lookup_key("quadric_odd:4"), Err(Error::ParamRange(_))));
        assert!(matches!(lookup_key("k3"), Err(Error::UnknownEntry(_))));
    }

    fn gaussian_binomial(d: usize, n: usize) -> Vec<u64> {
        // coefficients of [d choose n]_q via the q-Pascal rule
        let mut t: Vec<Vec<Vec<u64>>> = vec![vec![vec![]; d + 1]; d + 1];
        for a in 0..=d {
            for b in 0..=a {
                t[a][b] = if b == 0 || b == a {
                    vec![1]
                } else {
                    let mut c = vec![0u64; b * (a - b) + 1];
                    for (i, &x) in t[a - 1][b - 1].iter().enumerate() {
                        c[i] += x;
                    }
                    for (i, &x) in t[a - 1][b].iter().enumerate() {
                        c[i + b] += x;
                    }
                    c
                };
            }
        }
        t[d][n].clone()
    }

    #[test]
    fn catalog_invariants() {
        for e in full_catalog() {
            let even: Vec<u64> = e.betti.iter().step_by(2).copied().collect();
            assert!(e.betti.iter().skip(1).step_by(2).all(|&b| b == 0), "{}", e.key());
            assert_eq!(e.betti.iter().sum::<u64>() as usize, e.length(), "{}", e.key());
            let diag: Vec<u64> = (0..e.hodge.len()).map(|p| e.hodge[p][p]).collect();
            assert_eq!(diag, even, "{}", e.key());
            let hh = e.hochschild_dims();
            assert_eq!(hh.keys().copied().collect::<Vec<_>>(), vec![0], "{}", e.key());
            assert_eq!(hh[&0] as usize, e.length());
            if e.name == "grassmannian" {
                assert_eq!(even, gaussian_binomial(e.params[1], e.params[0]), "{}", e.key());
            }
        }
    }

    #[test]
    fn instantiate_examples() {
        let c2 = group("cyclic:2");
        let triv = ActionSpec::trivial(c2.clone());
        let p3 = instantiate(&lookup_key("projective_space:3").unwrap(), &triv).unwrap();
        assert_eq!(p3.blocks.len(), 4);
        assert!(p3.blocks.iter().all(|b| b.length == 1 && b.class.as_ref().unwrap().is_trivial()));

        let swap = ActionSpec::trivial(c2.clone()).with_orbit(0, Subgroup::trivial(c2.clone()));
        let q = instantiate(&lookup_key("quadric_even:2").unwrap(), &swap).unwrap();
        assert_eq!(q.blocks.len(), 3);
        assert_eq!(q.blocks[0].length, 2);
        let dp = instantiate(&lookup_key("del_pezzo_bl2").unwrap(), &swap).unwrap();
        assert_eq!(dp.blocks.len(), 4);
        let sk = decompose_collection(&dp).unwrap();
        assert_eq!(restrict_skeleton(&sk), 5);

        let bad = ActionSpec::trivial(c2.clone()).with_orbit(0, Subgroup::trivial(c2.clone()));
        assert!(matches!(
            instantiate(&lookup_key("projective_space:2").unwrap(), &bad),
            Err(Error::InconsistentAction(_))
        ));
    }

    #[test]
    fn class_expressions() {
        let e: ClassExpr = "alpha^2*beta".parse().unwrap();
        assert_eq!(e.to_string(), "alpha^2*beta");
        assert_eq!("1".parse::<ClassExpr>().unwrap(), ClassExpr::one());
        assert_eq!("alpha*alpha".parse::<ClassExpr>().unwrap(), ClassExpr::power("alpha", 2));
        assert!("al-pha".parse::<ClassExpr>().is_err());
    }
}
