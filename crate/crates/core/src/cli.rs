//! Command-line front end. [`run`] does all the work and returns the exit
//! code together with both renderings, so the binary only prints.

use std::path::Path;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::catalog::{full_catalog, instantiate, lookup_key, ActionFile, CatalogEntry, VarietySymbol};
use crate::cohomology::{class_of, cocycle_validate, schur_multiplier, CocycleFile, TwoCocycle};
use crate::error::{Error, Result};
use crate::group::{construct_group, GroupRef, GroupSpec};
use crate::measures::{
    euler_char_rep, evaluate_invariant, factorization_check, mu_nc, orbifold_dims, BlowupDataset, Invariant,
    MeasureDataset,
};
use crate::motives::{
    check_via, chow_skeleton, decompose_collection, localized_isomorphic, restrict_skeleton, skeleton_hom_rank,
    CollectionFile, MotiveSkeleton,
};
use crate::rep::{character_table, CharacterTableReport};
use crate::twisted::{alpha_regular, build_twisted, center_basis, wedderburn_dims_retry, DEFAULT_TOL};

/// Outcome of one invocation: 0 success, 1 input error, 2 failed check.
#[derive(Debug, Clone)]
pub struct CommandResult {
    pub code: i32,
    pub json: Value,
    pub text: String,
}

impl CommandResult {
    fn ok(json: Value, text: String) -> Self {
        CommandResult { code: 0, json, text }
    }

    fn checked(pass: bool, json: Value, text: String) -> Self {
        CommandResult { code: if pass { 0 } else { 2 }, json, text }
    }

    fn error(e: &Error) -> Self {
        let code = if e.is_check_failure() { 2 } else { 1 };
        CommandResult {
            code,
            json: json!({ "error": format!("{e:?}").split(['(', ' ', '{']).next().unwrap_or(""), "message": e.to_string() }),
            text: format!("error: {e}"),
        }
    }

    /// What the binary prints on stdout (or stderr for input errors).
    pub fn render(&self, as_json: bool) -> String {
        if as_json {
            serde_json::to_string_pretty(&self.json).expect("values serialize")
        } else {
            self.text.clone()
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "motivelab", version, about = "Finite-group cohomology, twisted group algebras and equivariant motive skeletons")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Eigenvalue clustering tolerance.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Group spec (`symmetric:4`, `cyclic:2*cyclic:2`, inline JSON) or a JSON file.
    #[arg(long, global = true)]
    group: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Invariant factors of H^2(G, C^x).
    Schur,
    /// Character table of the group.
    Chartable,
    /// Operations on cocycle files.
    #[command(subcommand)]
    Cocycle(CocycleCmd),
    /// Regular classes, center and simple-component dimensions of a twisted group algebra.
    Twisted(TwistedArgs),
    /// Equivariant motive skeletons.
    #[command(subcommand)]
    Motive(MotiveCmd),
    /// Lefschetz exponents of catalog entries and the length check.
    Chow(ChowArgs),
    /// Motivic measures and their checks.
    #[command(subcommand)]
    Measure(MeasureCmd),
    /// Run the built-in acceptance battery.
    Selftest,
}

#[derive(Debug, Subcommand)]
enum CocycleCmd {
    /// Coordinates of the class of a cocycle in the Schur multiplier.
    Classify { file: String },
    /// Pointwise product of two cocycles.
    Mul { a: String, b: String },
    /// Validate normalization and the cocycle identity.
    Check { file: String },
}

#[derive(Debug, Args)]
struct TwistedArgs {
    /// Cocycle file; overrides --group/--class.
    #[arg(long)]
    cocycle: Option<String>,
    /// Class coordinates in the Schur multiplier, comma separated.
    #[arg(long, value_delimiter = ',')]
    class: Vec<u64>,
}

/// A skeleton is given by a catalog key (with `--action`), a variety-symbol
/// file or a collection file.
#[derive(Debug, Args, Clone)]
struct SkeletonArg {
    /// Catalog key such as `projective_space:2`.
    #[arg(long)]
    catalog: Option<String>,
    /// `trivial`, inline JSON or a file with classes and orbits.
    #[arg(long, default_value = "trivial")]
    action: String,
    /// Variety-symbol or collection JSON file.
    #[arg(long)]
    input: Option<String>,
}

#[derive(Debug, Subcommand)]
enum MotiveCmd {
    /// Atoms of an instantiated exceptional collection.
    Decompose(SkeletonArg),
    /// Rank of Hom between two skeletons, each a symbol or collection file.
    Hom { a: String, b: String },
    /// Length after forgetting the action.
    Restrict(SkeletonArg),
    /// Equality after localization at the augmentation ideal.
    LocalizedEq { a: String, b: String },
}

#[derive(Debug, Args)]
struct ChowArgs {
    #[arg(long, conflicts_with = "all")]
    catalog: Option<String>,
    /// Check every catalog entry.
    #[arg(long)]
    all: bool,
}

#[derive(Debug, Subcommand)]
enum MeasureCmd {
    /// K0 class of a variety symbol (file or inline JSON).
    Nc { symbol: String },
    /// Euler characteristic representation from fixed-locus data.
    Euler { dataset: String },
    /// Compare the Euler representation with the HH class of the skeleton.
    FactorCheck { dataset: String },
    /// Blow-up relation at skeleton level.
    BlowupCheck { dataset: String },
    /// HH, HP or K0Rank of a variety symbol.
    Invariant {
        symbol: String,
        #[arg(long, default_value = "HH")]
        which: String,
    },
    /// Orbifold (even, odd) dimensions from twisted-sector data.
    Orbifold { dataset: String },
}

/// Parse `argv` (without the program name) and execute.
pub fn run<I, T>(argv: I) -> CommandResult
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = std::iter::once(std::ffi::OsString::from("motivelab")).chain(argv.into_iter().map(Into::into));
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let text = e.render().to_string();
            return CommandResult { code, json: json!({ "error": "Usage", "message": text }), text };
        }
    };
    match execute(&cli) {
        Ok(r) => r,
        Err(e) => CommandResult::error(&e),
    }
}

fn read_source(s: &str) -> Result<String> {
    let t = s.trim_start();
    if t.starts_with('{') {
        return Ok(s.to_string());
    }
    std::fs::read_to_string(Path::new(s)).map_err(|e| Error::Io(format!("{s}: {e}")))
}

fn group_spec(cli: &Cli) -> Result<GroupSpec> {
    match &cli.group {
        None => Err(Error::Parse("--group is required".into())),
        Some(s) if Path::new(s).is_file() => read_source(s)?.parse(),
        Some(s) => s.parse(),
    }
}

fn group(cli: &Cli) -> Result<GroupRef> {
    construct_group(&group_spec(cli)?)
}

fn load_cocycle(src: &str) -> Result<(GroupSpec, TwoCocycle)> {
    let file: CocycleFile = serde_json::from_str(&read_source(src)?)?;
    let alpha = file.load()?;
    Ok((file.group, alpha))
}

/// A variety symbol, or the `symbol` field of a measure dataset.
fn symbol(src: &str) -> Result<VarietySymbol> {
    let mut v: Value = serde_json::from_str(&read_source(src)?)?;
    if let Some(inner) = v.get_mut("symbol") {
        v = inner.take();
    }
    Ok(serde_json::from_value(v)?)
}

/// Symbol JSON if it has an `entry`, collection JSON otherwise.
fn skeleton_from_source(src: &str) -> Result<MotiveSkeleton> {
    let v: Value = serde_json::from_str(&read_source(src)?)?;
    if v.get("entry").is_some() {
        let s: VarietySymbol = serde_json::from_value(v)?;
        decompose_collection(&s.collection()?)
    } else {
        let c: CollectionFile = serde_json::from_value(v)?;
        decompose_collection(&c.to_spec()?)
    }
}

fn skeleton_from_arg(cli: &Cli, arg: &SkeletonArg) -> Result<(MotiveSkeleton, Option<CatalogEntry>)> {
    match (&arg.catalog, &arg.input) {
        (Some(key), None) => {
            let entry = lookup_key(key)?;
            let g = match &cli.group {
                Some(_) => group(cli)?,
                None => construct_group(&GroupSpec::Cyclic { n: 1 })?,
            };
            let action: ActionFile = if arg.action.trim() == "trivial" {
                ActionFile::default()
            } else {
                serde_json::from_str(&read_source(&arg.action)?)?
            };
            let spec = instantiate(&entry, &action.resolve(&g)?)?;
            Ok((decompose_collection(&spec)?, Some(entry)))
        }
        (None, Some(path)) => Ok((skeleton_from_source(path)?, None)),
        _ => Err(Error::Parse("give exactly one of --catalog or --input".into())),
    }
}

fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("values serialize")
}

fn execute(cli: &Cli) -> Result<CommandResult> {
    match &cli.command {
        Command::Schur => {
            let g = group(cli)?;
            let m = schur_multiplier(&g)?;
            Ok(CommandResult::ok(
                json!({
                    "group": g.label(),
                    "order": g.order(),
                    "invariant_factors": m.invariant_factors(),
                    "route": format!("{:?}", m.route()),
                }),
                m.describe(),
            ))
        }
        Command::Chartable => {
            let g = group(cli)?;
            let t = character_table(&g)?;
            t.verify_exact()?;
            Ok(CommandResult::ok(to_json(&CharacterTableReport::from(t.as_ref())), t.render()))
        }
        Command::Cocycle(c) => cocycle(c),
        Command::Twisted(t) => twisted(cli, t),
        Command::Motive(m) => motive(cli, m),
        Command::Chow(c) => chow(c),
        Command::Measure(m) => measure(m),
        Command::Selftest => {
            let rows = crate::selftest::run(cli.seed, cli.tol);
            let pass = rows.iter().all(|r| r.pass);
            let text = rows
                .iter()
                .map(|r| format!("{} {}: {}", if r.pass { "PASS" } else { "FAIL" }, r.name, r.detail))
                .collect::<Vec<_>>()
                .join("\n");
            Ok(CommandResult::checked(pass, json!({ "pass": pass, "rows": rows }), text))
        }
    }
}

fn cocycle(c: &CocycleCmd) -> Result<CommandResult> {
    match c {
        CocycleCmd::Classify { file } => {
            let (_, alpha) = load_cocycle(file)?;
            alpha.ensure_valid()?;
            let m = schur_multiplier(alpha.group())?;
            let class = class_of(&alpha, &m)?;
            Ok(CommandResult::ok(
                json!({
                    "multiplier": m.invariant_factors(),
                    "coordinates": class.coordinates(),
                    "order": class.order(),
                }),
                format!("class {:?} of order {} in {}", class.coordinates(), class.order(), m.describe()),
            ))
        }
        CocycleCmd::Mul { a, b } => {
            let (spec, x) = load_cocycle(a)?;
            let (_, y) = load_cocycle(b)?;
            let p = x.mul(&y)?;
            let file = CocycleFile::from_cocycle(spec, &p);
            let text = serde_json::to_string(&file)?;
            Ok(CommandResult::ok(to_json(&file), text))
        }
        CocycleCmd::Check { file } => {
            let (_, alpha) = load_cocycle(file)?;
            match cocycle_validate(&alpha) {
                Ok(()) => Ok(CommandResult::ok(json!({ "valid": true }), "valid 2-cocycle".into())),
                Err(v) => Ok(CommandResult::checked(
                    false,
                    json!({ "valid": false, "violation": v }),
                    format!("invalid: {v}"),
                )),
            }
        }
    }
}

fn twisted(cli: &Cli, t: &TwistedArgs) -> Result<CommandResult> {
    let alpha = match &t.cocycle {
        Some(f) => load_cocycle(f)?.1,
        None => {
            let g = group(cli)?;
            let m = schur_multiplier(&g)?;
            let class = if t.class.is_empty() { m.trivial_class()? } else { m.class_from_coordinates(&t.class)? };
            class.representative().clone()
        }
    };
    let g = alpha.group().clone();
    let reg = alpha_regular(&g, &alpha)?;
    let alg = build_twisted(&g, &alpha)?;
    let center = center_basis(&alg)?;
    let profile = wedderburn_dims_retry(&alg, cli.seed, cli.tol, 8)?;
    let regular_classes: Vec<usize> = (0..reg.regular.len()).filter(|&i| reg.regular[i]).collect();
    Ok(CommandResult::ok(
        json!({
            "group": g.label(),
            "regular_classes": regular_classes,
            "center_dim": center.len(),
            "dims": profile.dims,
            "seed": profile.seed,
            "tol": profile.tol,
        }),
        format!(
            "regular classes: {}\ncenter dimension: {}\nsimple components: {:?}",
            reg.count,
            center.len(),
            profile.dims
        ),
    ))
}

fn motive(cli: &Cli, m: &MotiveCmd) -> Result<CommandResult> {
    match m {
        MotiveCmd::Decompose(arg) => {
            let (s, entry) = skeleton_from_arg(cli, arg)?;
            if let Some(entry) = &entry {
                check_via(&entry.betti, s.len())?;
            }
            Ok(CommandResult::ok(json!({ "skeleton": s, "length": s.len() }), s.to_string()))
        }
        MotiveCmd::Hom { a, b } => {
            let (x, y) = (skeleton_from_source(a)?, skeleton_from_source(b)?);
            let r = skeleton_hom_rank(&x, &y)?;
            Ok(CommandResult::ok(json!({ "rank": r }), r.to_string()))
        }
        MotiveCmd::Restrict(arg) => {
            let (s, _) = skeleton_from_arg(cli, arg)?;
            let n = restrict_skeleton(&s);
            Ok(CommandResult::ok(json!({ "length": n }), n.to_string()))
        }
        MotiveCmd::LocalizedEq { a, b } => {
            let (x, y) = (skeleton_from_source(a)?, skeleton_from_source(b)?);
            let eq = localized_isomorphic(&x, &y)?;
            Ok(CommandResult::ok(
                json!({ "localized_equal": eq, "skeleton_equal": x == y }),
                format!("localized: {eq}, before localization: {}", x == y),
            ))
        }
    }
}

fn chow(c: &ChowArgs) -> Result<CommandResult> {
    let entries = match (&c.catalog, c.all) {
        (Some(key), false) => vec![lookup_key(key)?],
        (None, true) => full_catalog(),
        _ => return Err(Error::Parse("give --catalog <key> or --all".into())),
    };
    let mut rows = Vec::new();
    let mut lines = Vec::new();
    let mut pass = true;
    for e in &entries {
        let exps = chow_skeleton(&e.betti)?;
        let via = check_via(&e.betti, e.length());
        pass &= via.is_ok();
        lines.push(format!(
            "{}: {} length {} {}",
            e.key(),
            exps,
            e.length(),
            match &via {
                Ok(_) => "ok".to_string(),
                Err(err) => format!("FAIL ({err})"),
            }
        ));
        rows.push(json!({
            "entry": e.key(),
            "exponents": exps.exponents,
            "length": e.length(),
            "ok": via.is_ok(),
        }));
    }
    Ok(CommandResult::checked(pass, json!({ "pass": pass, "entries": rows }), lines.join("\n")))
}

fn measure(m: &MeasureCmd) -> Result<CommandResult> {
    match m {
        MeasureCmd::Nc { symbol: s } => {
            let c = mu_nc(&symbol(s)?)?;
            Ok(CommandResult::ok(json!({ "class": c }), c.to_string()))
        }
        MeasureCmd::Euler { dataset } => {
            let d = MeasureDataset::load(dataset)?;
            let g = d.group()?;
            let chi = euler_char_rep(&g, &d.fixed_euler(&g)?)?;
            Ok(CommandResult::ok(json!({ "character": chi }), chi.to_string()))
        }
        MeasureCmd::FactorCheck { dataset } => {
            let r = factorization_check(&MeasureDataset::load(dataset)?)?;
            let text = if r.ok {
                format!("ok: {}", r.euler)
            } else {
                format!("mismatch: euler {} vs hh {}", r.euler, r.hh)
            };
            Ok(CommandResult::checked(r.ok, to_json(&r), text))
        }
        MeasureCmd::BlowupCheck { dataset } => {
            let r = BlowupDataset::load(dataset)?.check()?;
            let text = format!(
                "{}: [Bl] = {} (expected {}), [E] = {} (expected {})",
                if r.ok { "ok" } else { "mismatch" },
                r.blowup,
                r.expected_blowup,
                r.divisor,
                r.expected_divisor
            );
            Ok(CommandResult::checked(r.ok, to_json(&r), text))
        }
        MeasureCmd::Invariant { symbol: s, which } => {
            let which: Invariant = which.parse()?;
            let sk = crate::measures::skeleton_of(&symbol(s)?)?;
            let v = evaluate_invariant(&sk, which)?;
            let text = serde_json::to_string(&v)?;
            Ok(CommandResult::ok(json!({ "invariant": which, "value": v }), text))
        }
        MeasureCmd::Orbifold { dataset } => {
            let d = MeasureDataset::load(dataset)?;
            let g = d.group()?;
            let (even, odd) = orbifold_dims(&g, &d.sector_dims(&g)?)?;
            Ok(CommandResult::ok(json!({ "even": even, "odd": odd }), format!("even {even}, odd {odd}")))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn data(name: &str) -> String {
        format!("{}/../../datasets/{name}", env!("CARGO_MANIFEST_DIR"))
    }

    #[test]
    fn schur_of_s4() {
        let r = run(["schur", "--group", "symmetric:4"]);
        assert_eq!(r.code, 0);
        assert_eq!(r.text, "C2");
        assert_eq!(r.json["invariant_factors"], json!([2]));
    }

    #[test]
    fn decompose_plane() {
        let r = run(["motive", "decompose", "--group", "cyclic:1", "--catalog", "projective_space:2", "--action", "trivial"]);
        assert_eq!(r.code, 0, "{}", r.text);
        assert_eq!(r.json["length"], 3);
        let atoms = r.json["skeleton"].as_array().unwrap();
        assert!(atoms.iter().all(|a| a["kind"] == "twisted_unit"), "{atoms:?}");
    }

    #[test]
    fn factor_check_dataset() {
        let r = run(["measure", "factor-check", &data("p1_c2.json")]);
        assert_eq!(r.code, 0, "{}", r.text);
        assert!(r.text.starts_with("ok"));
    }

    #[test]
    fn blowup_dataset() {
        let r = run(["measure", "blowup-check", &data("blowup_del_pezzo.json")]);
        assert_eq!(r.code, 0, "{}", r.text);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run(["schur"]).code, 1);
        assert_eq!(run(["nonsense"]).code, 1);
        assert_eq!(run(["schur", "--group", "cyclic:x"]).code, 1);
        assert_eq!(run(["--help"]).code, 0);
        let bad = r#"{"group":{"kind":"cyclic","n":3},"modulus":3,"exponents":[[0,0,0],[0,1,0],[0,0,0]]}"#;
        let good = r#"{"group":{"kind":"cyclic","n":2},"modulus":2,"exponents":[[0,0],[0,0]]}"#;
        let r = run(["cocycle", "check", bad]);
        assert_eq!(r.code, 2, "{}", r.text);
        assert_eq!(r.json["valid"], false);
        assert_eq!(run(["cocycle", "check", good]).code, 0);
    }

    #[test]
    fn twisted_pairing() {
        let r = run(["twisted", "--group", "elem_abelian:2,2", "--class", "1"]);
        assert_eq!(r.code, 0, "{}", r.text);
        assert_eq!(r.json["dims"], json!([2]));
        assert_eq!(r.json["center_dim"], 1);
    }

    #[test]
    fn json_is_deterministic() {
        let a = run(["--json", "twisted", "--group", "dihedral:8", "--seed", "5"]);
        let b = run(["--json", "twisted", "--group", "dihedral:8", "--seed", "5"]);
        assert_eq!(a.render(true), b.render(true));
    }

    #[test]
    fn chow_all() {
        let r = run(["chow", "--all"]);
        assert_eq!(r.code, 0, "{}", r.text);
        let r = run(["chow", "--catalog", "projective_space:1"]);
        assert_eq!(r.json["entries"][0]["exponents"], json!([0, 1]));
    }

    #[test]
    fn localized_comparison() {
        let a = r#"{"entry":"projective_space:2","group":{"kind":"elem_abelian","p":2,"k":2},"action":{"classes":{"alpha":[1]}}}"#;
        let b = r#"{"entry":"disjoint_points:3","group":{"kind":"elem_abelian","p":2,"k":2}}"#;
        let r = run(["motive", "localized-eq", a, b]);
        assert_eq!(r.code, 0, "{}", r.text);
        assert_eq!(r.json["localized_equal"], true);
        assert_eq!(r.json["skeleton_equal"], false);
    }
}
