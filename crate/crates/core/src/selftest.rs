//! Table-level checks run by `motivelab selftest`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::catalog::{full_catalog, instantiate, lookup_key, ActionSpec, ClassExpr};
use crate::cohomology::{class_of, pairing_cocycle, schur_multiplier, CohomClass};
use crate::error::{Error, Result};
use crate::group::{construct_group, GroupRef, GroupSpec, Subgroup};
use crate::measures::{evaluate_invariant, factorization_check, BlowupDataset, Invariant, MeasureDataset};
use crate::motives::{
    check_via, chow_skeleton, decompose_collection, hom_rank, localized_isomorphic, MotiveAtom, MotiveSkeleton,
};
use crate::rep::{character_table, idempotents, VirtualCharacter};
use crate::twisted::{alpha_regular, build_twisted, center_basis, wedderburn_dims_retry};

#[derive(Debug, Clone, Serialize)]
pub struct SelftestRow {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

fn row(name: &str, outcome: Result<String>) -> SelftestRow {
    match outcome {
        Ok(detail) => SelftestRow { name: name.into(), pass: true, detail },
        Err(e) => SelftestRow { name: name.into(), pass: false, detail: e.to_string() },
    }
}

fn fail(msg: String) -> Error {
    Error::Violation(msg)
}

fn group(spec: &str) -> Result<GroupRef> {
    construct_group(&spec.parse::<GroupSpec>()?)
}

/// Group spec and expected invariant factors of the Schur multiplier.
pub fn schur_table() -> Vec<(String, Vec<u64>)> {
    let mut t: Vec<(String, Vec<u64>)> = (2..=12).map(|n| (format!("cyclic:{n}"), vec![])).collect();
    t.extend(
        [
            ("symmetric:3", vec![]),
            ("symmetric:4", vec![2]),
            ("symmetric:5", vec![2]),
            ("dihedral:6", vec![]),
            ("dihedral:8", vec![2]),
            ("dihedral:10", vec![]),
            ("dihedral:12", vec![2]),
            ("elem_abelian:2,2", vec![2]),
            ("elem_abelian:2,3", vec![2, 2, 2]),
            ("elem_abelian:3,2", vec![3]),
        ]
        .into_iter()
        .map(|(s, f)| (s.to_string(), f)),
    );
    t
}

/// Groups used for the representation-ring checks.
pub const BATTERY: &[&str] = &[
    "cyclic:2",
    "cyclic:3",
    "cyclic:4",
    "cyclic:6",
    "cyclic:12",
    "symmetric:3",
    "symmetric:4",
    "dihedral:8",
    "dihedral:10",
    "dihedral:12",
    "elem_abelian:2,2",
    "elem_abelian:2,3",
    "elem_abelian:3,2",
];

fn check_schur() -> Result<String> {
    for (spec, want) in schur_table() {
        let m = schur_multiplier(&group(&spec)?)?;
        if m.invariant_factors() != want.as_slice() {
            return Err(fail(format!("{spec}: got {:?}, expected {want:?}", m.invariant_factors())));
        }
    }
    Ok(format!("{} groups", schur_table().len()))
}

fn linear_generator(t: &Arc<crate::rep::CharacterTable>, g: &GroupRef, n: u64) -> Result<usize> {
    let c = g.class_index(1);
    let z = crate::arith::Cyclotomic::root(n, 1);
    (0..t.len())
        .find(|&i| t.degrees()[i] == 1 && t.value(i, c) == &z)
        .ok_or_else(|| fail("no faithful linear character".into()))
}

fn check_rep_rings() -> Result<String> {
    for n in 2..=12u64 {
        let g = group(&format!("cyclic:{n}"))?;
        let t = character_table(&g)?;
        let chi = VirtualCharacter::irreducible(t.clone(), linear_generator(&t, &g, n)?);
        if chi.pow(n as u32)? != VirtualCharacter::trivial(t.clone()) {
            return Err(fail(format!("chi^{n} != 1 in R(C{n})")));
        }
        let mut hit = vec![false; t.len()];
        for k in 0..n as u32 {
            let p = chi.pow(k)?;
            let support: Vec<usize> = (0..t.len()).filter(|&i| p.coeffs()[i] != num_rational::BigRational::from_integer(0.into())).collect();
            if support.len() != 1 || hit[support[0]] {
                return Err(fail(format!("powers of chi are not a basis of R(C{n})")));
            }
            hit[support[0]] = true;
        }
    }
    let t = character_table(&group("symmetric:3")?)?;
    let one = VirtualCharacter::trivial(t.clone());
    let chi = VirtualCharacter::irreducible(t.clone(), 1);
    let psi = VirtualCharacter::irreducible(t.clone(), 2);
    let ok = chi.mul(&chi)? == one
        && chi.mul(&psi)? == psi.mul(&chi)?
        && psi.mul(&psi)? == one.add(&chi)?.add(&psi)?;
    if !ok {
        return Err(fail("R(S3) relations".into()));
    }
    Ok("R(C_n), n <= 12; R(S3)".into())
}

fn check_endomorphisms() -> Result<String> {
    for spec in BATTERY {
        let g = group(spec)?;
        let unit = MotiveAtom::unit(schur_multiplier(&g)?.trivial_class()?);
        let t = character_table(&g)?;
        let r = hom_rank(&unit, &unit)?;
        if r != g.class_count() || t.len() != r {
            return Err(fail(format!("{spec}: End(unit) rank {r}, {} classes", g.class_count())));
        }
        t.verify_exact()?;
        let e = idempotents(&t)?;
        if e.e_plus.rank() != num_rational::BigRational::from_integer(1.into())
            || e.e_minus.rank() != num_rational::BigRational::from_integer(0.into())
        {
            return Err(fail(format!("{spec}: idempotent ranks")));
        }
    }
    Ok(format!("{} groups", BATTERY.len()))
}

fn check_central_type(seed: u64, tol: f64) -> Result<String> {
    let mut out = Vec::new();
    for m in [2usize, 3] {
        let alpha = pairing_cocycle(m)?;
        let g = alpha.group().clone();
        let alg = build_twisted(&g, &alpha)?;
        let regular = alpha_regular(&g, &alpha)?.count;
        let center = center_basis(&alg)?.len();
        let dims = wedderburn_dims_retry(&alg, seed, tol, 8)?.dims;
        if regular != 1 || center != 1 || dims != vec![m] {
            return Err(fail(format!("C{m}xC{m}: regular {regular}, center {center}, dims {dims:?}")));
        }
        out.push(format!("C{m}xC{m}: dims {dims:?}"));
    }
    Ok(out.join("; "))
}

fn nontrivial_class(g: &GroupRef) -> Result<CohomClass> {
    let m = schur_multiplier(g)?;
    m.all_classes()?
        .into_iter()
        .find(|c| !c.is_trivial())
        .ok_or_else(|| fail(format!("{} has trivial multiplier", g.label())))
}

fn check_localization() -> Result<String> {
    let e4 = pairing_cocycle(2)?;
    let ge4 = e4.group().clone();
    let alpha_e4 = class_of(&e4, &schur_multiplier(&ge4)?)?;
    let d8 = group("dihedral:8")?;
    let alpha_d8 = nontrivial_class(&d8)?;
    for (g, alpha) in [(ge4, alpha_e4), (d8, alpha_d8)] {
        let one = alpha.multiplier().trivial_class()?;
        let twisted = MotiveSkeleton::new(
            g.clone(),
            vec![MotiveAtom::unit(one.clone()), MotiveAtom::unit(alpha.clone()), MotiveAtom::unit(alpha.pow(2)?)],
        )?;
        let plain = MotiveSkeleton::new(g.clone(), vec![MotiveAtom::unit(one); 3])?;
        if !localized_isomorphic(&twisted, &plain)? {
            return Err(fail(format!("{}: localized comparison failed", g.label())));
        }
        if twisted == plain {
            return Err(fail(format!("{}: skeletons agree before localization", g.label())));
        }
        let a = evaluate_invariant(&twisted, Invariant::K0Rank)?;
        let b = evaluate_invariant(&plain, Invariant::K0Rank)?;
        if a == b {
            return Err(fail(format!("{}: block counts agree before localization", g.label())));
        }
    }
    Ok("C2xC2, D8".into())
}

#[derive(Debug, Clone, Deserialize)]
pub struct GoldenCase {
    pub entry: String,
    pub case: String,
    pub atoms: Vec<String>,
}

#[derive(Debug, Clone, Deserialize)]
struct GoldenFile {
    cases: Vec<GoldenCase>,
}

pub const GOLDEN_DECOMPOSITIONS: &str = include_str!("../tests/golden/decompositions.json");

pub fn golden_cases() -> Result<Vec<GoldenCase>> {
    let f: GoldenFile = serde_json::from_str(GOLDEN_DECOMPOSITIONS).map_err(|e| Error::Parse(e.to_string()))?;
    Ok(f.cases)
}

/// A concrete group with classes for the template symbols and, for the
/// swapped case, the stabilizer of the permuted pair.
struct GoldenConfig {
    group: GroupRef,
    classes: BTreeMap<String, CohomClass>,
    swap: Option<Subgroup>,
}

fn golden_configs(swap: bool) -> Result<Vec<GoldenConfig>> {
    let mut out = Vec::new();
    let with = |spec: &str, assign: &[(&str, &[u64])], stab: Option<&[usize]>| -> Result<GoldenConfig> {
        let g = group(spec)?;
        let m = schur_multiplier(&g)?;
        let mut classes = BTreeMap::new();
        for (s, c) in assign {
            classes.insert(s.to_string(), m.class_from_coordinates(c)?);
        }
        let swap = stab.map(|gens| Subgroup::generated_by(g.clone(), gens));
        if swap.as_ref().is_some_and(|h| h.index() != 2) {
            return Err(Error::Parse(format!("{spec}: swap stabilizer must have index 2")));
        }
        Ok(GoldenConfig { group: g, classes, swap })
    };
    if swap {
        out.push(with("cyclic:2", &[], Some(&[]))?);
        out.push(with("dihedral:8", &[("alpha", &[1])], Some(&[1]))?);
        out.push(with("elem_abelian:2,2", &[("alpha", &[1])], Some(&[1]))?);
        out.push(with("cyclic:4", &[], Some(&[2]))?);
    } else {
        out.push(with("elem_abelian:2,3", &[("alpha", &[1, 0, 0]), ("beta", &[0, 1, 0]), ("gamma", &[0, 0, 1])], None)?);
        out.push(with("elem_abelian:3,2", &[("alpha", &[1]), ("beta", &[2]), ("gamma", &[1])], None)?);
        out.push(with("symmetric:4", &[("alpha", &[1])], None)?);
        out.push(with("cyclic:3", &[], None)?);
    }
    Ok(out)
}

/// Compare `decompose_collection(instantiate(..))` with the golden atom
/// list under several concrete groups and class assignments.
pub fn check_golden_case(case: &GoldenCase) -> Result<usize> {
    let entry = lookup_key(&case.entry)?;
    let swap = match case.case.as_str() {
        "invariant" => false,
        "swap" => true,
        other => return Err(Error::Parse(format!("unknown case {other}"))),
    };
    let symbols = entry.symbols();
    let configs = golden_configs(swap)?;
    for cfg in &configs {
        let mut action = ActionSpec::trivial(cfg.group.clone());
        for (s, c) in &cfg.classes {
            let permuted = cfg.swap.is_some() && entry.collection.iter().any(|o| o.slot.is_some() && o.class.symbols().any(|t| t == s));
            if symbols.contains(s) && !permuted {
                action = action.with_class(s, c.clone());
            }
        }
        if let Some(h) = &cfg.swap {
            action = action.with_orbit(0, h.clone());
        }
        let got = decompose_collection(&instantiate(&entry, &action)?)?;
        let m = schur_multiplier(&cfg.group)?;
        let mut atoms = Vec::new();
        for a in &case.atoms {
            if a == "induced" {
                let h = cfg.swap.as_ref().ok_or_else(|| Error::Parse("induced atom in an invariant case".into()))?;
                atoms.push(MotiveAtom::induced(h)?);
            } else {
                let expr: ClassExpr = a.parse()?;
                atoms.push(MotiveAtom::unit(expr.evaluate(&m, &action.classes)?));
            }
        }
        let want = MotiveSkeleton::new(cfg.group.clone(), atoms)?;
        if got != want {
            return Err(fail(format!("{} ({}) over {}: got {got}, expected {want}", case.entry, case.case, cfg.group.label())));
        }
    }
    Ok(configs.len())
}

fn check_decompositions() -> Result<String> {
    let cases = golden_cases()?;
    let mut runs = 0;
    for c in &cases {
        runs += check_golden_case(c)?;
    }
    Ok(format!("{} cases, {runs} configurations", cases.len()))
}

fn check_chow() -> Result<String> {
    let catalog = full_catalog();
    for e in &catalog {
        let c = check_via(&e.betti, e.length())?;
        if c.exponents.iter().any(|&r| r > e.dimension) {
            return Err(fail(format!("{}: exponent above dimension", e.key())));
        }
    }
    let c2 = group("cyclic:2")?;
    let p1 = lookup_key("projective_space:1")?;
    let pts = lookup_key("disjoint_points:2")?;
    let triv = ActionSpec::trivial(c2);
    let nc_p1 = decompose_collection(&instantiate(&p1, &triv)?)?;
    let nc_pts = decompose_collection(&instantiate(&pts, &triv)?)?;
    let (ch_p1, ch_pts) = (chow_skeleton(&p1.betti)?, chow_skeleton(&pts.betti)?);
    if nc_p1 != nc_pts || ch_p1 == ch_pts {
        return Err(fail(format!("P1 vs two points: NC {nc_p1} / {nc_pts}, Chow {ch_p1} / {ch_pts}")));
    }
    Ok(format!("{} entries; P1 {ch_p1} vs two points {ch_pts}", catalog.len()))
}

pub const BLOWUP_DATASETS: &[(&str, &str)] = &[
    ("blowup_del_pezzo.json", include_str!("../../../datasets/blowup_del_pezzo.json")),
    ("blowup_one_point.json", include_str!("../../../datasets/blowup_one_point.json")),
];

pub const MEASURE_DATASETS: &[(&str, &str)] = &[
    ("swapped_points.json", include_str!("../../../datasets/swapped_points.json")),
    ("p1_c2.json", include_str!("../../../datasets/p1_c2.json")),
    ("p2_trivial.json", include_str!("../../../datasets/p2_trivial.json")),
];

fn check_blowups() -> Result<String> {
    for (name, text) in BLOWUP_DATASETS {
        let d: BlowupDataset = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let r = d.check()?;
        if !r.ok {
            return Err(fail(format!("{name}: {r:?}")));
        }
    }
    Ok(format!("{} datasets", BLOWUP_DATASETS.len()))
}

fn check_factorization() -> Result<String> {
    for (name, text) in MEASURE_DATASETS {
        let d: MeasureDataset = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let r = factorization_check(&d)?;
        if !r.ok {
            return Err(fail(format!("{name}: euler {} vs hh {}", r.euler, r.hh)));
        }
    }
    Ok(format!("{} datasets", MEASURE_DATASETS.len()))
}

pub fn run(seed: u64, tol: f64) -> Vec<SelftestRow> {
    vec![
        row("schur multipliers", check_schur()),
        row("representation rings", check_rep_rings()),
        row("endomorphisms and idempotents", check_endomorphisms()),
        row("central type", check_central_type(seed, tol)),
        row("localized comparison", check_localization()),
        row("collection decompositions", check_decompositions()),
        row("chow skeletons", check_chow()),
        row("blow-up relations", check_blowups()),
        row("euler factorization", check_factorization()),
    ]
}

#[cfg(test)]
mod tests {
    #[test]
    fn selftest_passes() {
        for r in super::run(0, crate::twisted::DEFAULT_TOL) {
            assert!(r.pass, "{}: {}", r.name, r.detail);
        }
    }
}
