//! wasm-bindgen bindings for the static page in `www/`. Each export runs
//! the matching CLI command and returns its JSON output.

use wasm_bindgen::prelude::*;

fn cli(args: &[&str]) -> Result<String, String> {
    let mut argv = vec!["--json"];
    argv.extend_from_slice(args);
    let r = motivelab::cli::run(argv);
    let out = r.render(true);
    if r.code == 0 {
        Ok(out)
    } else {
        Err(out)
    }
}

pub fn schur_json(group: &str) -> Result<String, String> {
    cli(&["schur", "--group", group])
}

pub fn chartable_json(group: &str) -> Result<String, String> {
    cli(&["chartable", "--group", group])
}

/// `class` is a comma-separated coordinate list; empty means the trivial class.
pub fn twisted_json(group: &str, class: &str, seed: u64) -> Result<String, String> {
    let seed = seed.to_string();
    let mut args = vec!["twisted", "--group", group, "--seed", seed.as_str()];
    if !class.trim().is_empty() {
        args.extend(["--class", class.trim()]);
    }
    cli(&args)
}

#[wasm_bindgen]
pub fn schur(group: &str) -> Result<String, JsError> {
    schur_json(group).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn chartable(group: &str) -> Result<String, JsError> {
    chartable_json(group).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn twisted(group: &str, class: &str, seed: u64) -> Result<String, JsError> {
    twisted_json(group, class, seed).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn operations() {
        let s: serde_json::Value = serde_json::from_str(&schur_json("elem_abelian:2,3").unwrap()).unwrap();
        assert_eq!(s["invariant_factors"], serde_json::json!([2, 2, 2]));
        let t: serde_json::Value = serde_json::from_str(&chartable_json("symmetric:3").unwrap()).unwrap();
        assert_eq!(t["degrees"], serde_json::json!([1, 1, 2]));
        let w: serde_json::Value = serde_json::from_str(&twisted_json("elem_abelian:3,2", "1", 0).unwrap()).unwrap();
        assert_eq!(w["dims"], serde_json::json!([3]));
        assert!(schur_json("bogus").is_err());
    }
}
