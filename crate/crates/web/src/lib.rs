//! Browser bindings: solver check with a Hanani-Tutte witness, brute-force
//! oracle with a crossing-free drawing, and random instances.
//!
//! Every export takes and returns JSON strings; the plain-Rust versions in
//! [`api`] are what the exports wrap.

use wasm_bindgen::prelude::*;

pub mod api {
    use serde_json::json;

    use planarity_ht::constraints::{choose_reference_sets, SeedOrder};
    use planarity_ht::corpus::seeded_graph;
    use planarity_ht::graph::properize;
    use planarity_ht::io::{graph_to_json, parse_graph};
    use planarity_ht::oracle::{brute_level, brute_radial};
    use planarity_ht::pipeline::{check as run_check, drop_empty_levels, CheckOptions, Mode, Witness};
    use planarity_ht::svg::{render_level, render_radial};

    fn mode(s: &str) -> Result<Mode, String> {
        match s {
            "level" => Ok(Mode::Level),
            "radial" => Ok(Mode::Radial),
            other => Err(format!("unknown mode {other}")),
        }
    }

    /// Solver decision; for planar graphs also the drawing of the subdivided
    /// star form whose independent edge pairs cross evenly.
    pub fn check(graph_json: &str, mode_name: &str) -> Result<String, String> {
        let g = parse_graph(graph_json).map_err(|e| e.to_string())?;
        let opts = CheckOptions { witness: true, ..Default::default() };
        let report = run_check(&g, mode(mode_name)?, &opts).map_err(|e| e.to_string())?;
        let (svg, crossings) = match &report.witness {
            None => (None, 0),
            Some(Witness::Level { graph, drawing, star_crossings }) => {
                (Some(render_level(graph, drawing).map_err(|e| e.to_string())?.svg), star_crossings.total())
            }
            Some(Witness::Radial { graph, drawing, refs, star_crossings }) => {
                (Some(render_radial(graph, drawing, refs).map_err(|e| e.to_string())?.svg), star_crossings.total())
            }
        };
        Ok(json!({
            "planar": report.planar,
            "vars": report.vars,
            "xors": report.xors,
            "crossings": crossings,
            "svg": svg,
        })
        .to_string())
    }

    /// Exhaustive decision with a crossing-free drawing when planar.
    pub fn oracle(graph_json: &str, mode_name: &str, budget: u64) -> Result<String, String> {
        let g = properize(&parse_graph(graph_json).map_err(|e| e.to_string())?).graph;
        let (planar, states, svg) = match mode(mode_name)? {
            Mode::Level => {
                let r = brute_level(&g, budget).map_err(|e| e.to_string())?;
                let svg =
                    r.witness.map(|w| render_level(&g, &w).map(|x| x.svg)).transpose().map_err(|e| e.to_string())?;
                (r.planar, r.states_examined, svg)
            }
            Mode::Radial => {
                let compact = drop_empty_levels(&g);
                let (refs, aug) = choose_reference_sets(&compact, SeedOrder::Ascending).map_err(|e| e.to_string())?;
                let r = brute_radial(&aug, &refs, budget).map_err(|e| e.to_string())?;
                let svg = r
                    .witness
                    .map(|w| render_radial(&aug, &w, &refs).map(|x| x.svg))
                    .transpose()
                    .map_err(|e| e.to_string())?;
                (r.planar, r.states_examined, svg)
            }
        };
        Ok(json!({ "planar": planar, "states": states, "svg": svg }).to_string())
    }

    /// A random proper graph as a graph file.
    pub fn random_graph(seed: u64, levels: usize, max_per_level: usize, density: f64) -> String {
        let g = seeded_graph(seed, levels.clamp(1, 12), max_per_level.clamp(1, 8), density.clamp(0.0, 1.0));
        graph_to_json(&g)
    }
}

#[wasm_bindgen]
pub fn check(graph_json: &str, mode: &str) -> Result<String, JsValue> {
    api::check(graph_json, mode).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn oracle(graph_json: &str, mode: &str, budget: u32) -> Result<String, JsValue> {
    api::oracle(graph_json, mode, u64::from(budget)).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = randomGraph)]
pub fn random_graph(seed: u32, levels: u32, max_per_level: u32, density: f64) -> String {
    api::random_graph(u64::from(seed), levels as usize, max_per_level as usize, density)
}

#[cfg(test)]
mod tests {
    use super::api;
    use serde_json::Value;

    const K22: &str = r#"{"levels":2,"vertices":[{"id":"a","level":1},{"id":"b","level":1},
        {"id":"c","level":2},{"id":"d","level":2}],"edges":[["a","c"],["a","d"],["b","c"],["b","d"]]}"#;

    fn parse(s: &str) -> Value {
        serde_json::from_str(s).unwrap()
    }

    #[test]
    fn check_k22() {
        let level = parse(&api::check(K22, "level").unwrap());
        assert_eq!(level["planar"], false);
        assert!(level["svg"].is_null());
        let radial = parse(&api::check(K22, "radial").unwrap());
        assert_eq!(radial["planar"], true);
        assert!(radial["svg"].as_str().unwrap().starts_with("<svg"));
    }

    #[test]
    fn oracle_k22() {
        let r = parse(&api::oracle(K22, "level", 1000).unwrap());
        assert_eq!(r["planar"], false);
        assert_eq!(r["states"], 4);
        let r = parse(&api::oracle(K22, "radial", 1000).unwrap());
        assert_eq!(r["planar"], true);
        assert!(!r["svg"].as_str().unwrap().contains(r#"class="crossing""#));
    }

    #[test]
    fn errors_are_messages() {
        assert!(api::check("{", "level").is_err());
        assert!(api::check(K22, "spiral").unwrap_err().contains("spiral"));
        assert!(api::oracle(K22, "level", 1).unwrap_err().contains("budget"));
    }

    #[test]
    fn random_graphs_are_valid_and_seeded() {
        let a = api::random_graph(5, 3, 3, 0.5);
        assert_eq!(a, api::random_graph(5, 3, 3, 0.5));
        assert!(api::check(&a, "radial").is_ok());
    }
}
