//! End-to-end decision procedures and the solver-versus-oracle crosscheck.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constraints::{
    build_level_full, build_radial_full, enumerate_reference_sets, satisfies, solve_full, solve_reduced, Assignment,
    ConstraintError, ConstraintSystem, ReferenceError, ReferenceSets, SeedOrder,
};
use crate::drawing::{
    assignment_from_drawing_level, assignment_from_drawing_radial, drawing_from_assignment_level,
    drawing_from_assignment_radial, lift_assignment_level, lift_assignment_radial, star_report_level,
    star_report_radial, CrossingReport, DrawingError, LevelDrawing, RadialDrawing,
};
use crate::graph::{properize, LevelGraph, ProperLevelGraph};
use crate::oracle::{brute_level, brute_radial, OracleError};
use crate::structures::{LevelStructures, RadialStructures};
use crate::transform::TransformError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Level,
    Radial,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Level => "level",
            Mode::Radial => "radial",
        })
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PipelineError {
    #[error(transparent)]
    Reference(#[from] ReferenceError),
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error(transparent)]
    Constraint(#[from] ConstraintError),
    #[error(transparent)]
    Drawing(#[from] DrawingError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

#[derive(Clone, Copy, Debug)]
pub struct CheckOptions {
    /// Enforce transitivity by searching the XOR solution space.
    pub full: bool,
    pub witness: bool,
    pub seed: SeedOrder,
    /// Largest solution space `full` may search.
    pub budget: u64,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions { full: false, witness: false, seed: SeedOrder::Ascending, budget: crate::oracle::DEFAULT_BUDGET }
    }
}

/// A drawing of the subdivided star form that is Hanani-Tutte when its
/// crossings are summed per star-form edge.
#[derive(Clone, Debug)]
pub enum Witness {
    Level { graph: ProperLevelGraph, drawing: LevelDrawing, star_crossings: CrossingReport },
    Radial { graph: ProperLevelGraph, drawing: RadialDrawing, refs: ReferenceSets, star_crossings: CrossingReport },
}

#[derive(Clone, Debug)]
pub struct CheckReport {
    pub mode: Mode,
    pub planar: bool,
    pub vars: usize,
    pub xors: usize,
    pub transitivity: usize,
    pub witness: Option<Witness>,
}

/// Drops levels that hold no vertex. Valid for radial drawings once the
/// graph is proper: nothing passes through an empty circle.
pub fn drop_empty_levels(g: &ProperLevelGraph) -> ProperLevelGraph {
    let mut map = vec![0; g.num_levels() + 1];
    let mut next = 0;
    for (i, slot) in map.iter_mut().enumerate().skip(1) {
        if !g.level_vertices(i).is_empty() {
            next += 1;
        }
        *slot = next;
    }
    if next == g.num_levels() {
        return g.clone();
    }
    let vertices = (0..g.num_vertices()).map(|v| (g.name(v).clone(), map[g.level(v)]));
    let edges = g.edges().iter().map(|&(a, b)| (g.name(a).clone(), g.name(b).clone()));
    let h = LevelGraph::new(next.max(1), vertices, edges).expect("relabeling keeps the graph valid");
    ProperLevelGraph::new(h).expect("no edge spans an empty level of a proper graph")
}

fn solve(sys: &ConstraintSystem, opts: &CheckOptions) -> Result<Option<Assignment>, PipelineError> {
    if opts.full {
        Ok(solve_full(sys, opts.budget)?)
    } else {
        Ok(solve_reduced(sys))
    }
}

fn report(mode: Mode, sys: &ConstraintSystem, planar: bool, witness: Option<Witness>) -> CheckReport {
    CheckReport {
        mode,
        planar,
        vars: sys.num_vars(),
        xors: sys.xors().len(),
        transitivity: sys.transitivity().len(),
        witness,
    }
}

fn ht_verified(star_crossings: &CrossingReport, star: &LevelGraph) -> Result<(), PipelineError> {
    match star_crossings.ht_violations.first() {
        None => Ok(()),
        Some(&(e, f)) => Err(DrawingError::NotHananiTutte(star.edge_label(e), star.edge_label(f)).into()),
    }
}

pub fn check_level(g: &LevelGraph, opts: &CheckOptions) -> Result<CheckReport, PipelineError> {
    let s = LevelStructures::new(properize(g).graph);
    let full;
    let sys = if opts.full {
        full = build_level_full(&s.g);
        &full
    } else {
        &s.sys
    };
    let Some(phi) = solve(sys, opts)? else { return Ok(report(Mode::Level, sys, false, None)) };
    let witness = if opts.witness {
        let phi_plus = lift_assignment_level(&s, &phi)?;
        let drawing = drawing_from_assignment_level(&s, &phi_plus)?;
        let star_crossings = star_report_level(&s, &drawing)?;
        ht_verified(&star_crossings, &s.star.graph)?;
        Some(Witness::Level { graph: s.plus.graph().clone(), drawing, star_crossings })
    } else {
        None
    };
    Ok(report(Mode::Level, sys, true, witness))
}

pub fn check_radial(g: &LevelGraph, opts: &CheckOptions) -> Result<CheckReport, PipelineError> {
    let proper = drop_empty_levels(&properize(g).graph);
    let s = RadialStructures::choose(&proper, opts.seed)?;
    let full;
    let sys = if opts.full {
        full = build_radial_full(&s.g, &s.refs)?;
        &full
    } else {
        &s.sys
    };
    let Some(phi) = solve(sys, opts)? else { return Ok(report(Mode::Radial, sys, false, None)) };
    let witness = if opts.witness {
        let phi_plus = lift_assignment_radial(&s, &phi)?;
        let drawing = drawing_from_assignment_radial(&s, &phi_plus)?;
        let star_crossings = star_report_radial(&s, &drawing)?;
        ht_verified(&star_crossings, &s.star.graph)?;
        Some(Witness::Radial { graph: s.plus.graph().clone(), drawing, refs: s.beta.clone(), star_crossings })
    } else {
        None
    };
    Ok(report(Mode::Radial, sys, true, witness))
}

pub fn check(g: &LevelGraph, mode: Mode, opts: &CheckOptions) -> Result<CheckReport, PipelineError> {
    match mode {
        Mode::Level => check_level(g, opts),
        Mode::Radial => check_radial(g, opts),
    }
}

/// Decisions for one crosschecked instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrosscheckOutcome {
    pub level_planar: bool,
    pub radial_planar: bool,
    pub reference_sets: usize,
    pub level_states: u64,
    pub radial_states: u64,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CrosscheckError {
    #[error("{mode} solver says {solver}, oracle says {oracle}")]
    Decision { mode: Mode, solver: bool, oracle: bool },
    #[error("radial decision differs between reference sets")]
    ReferenceDependence,
    #[error("level planar but not radial planar")]
    LevelNotRadial,
    #[error("{mode} round trip failed: {stage}")]
    RoundTrip { mode: Mode, stage: String },
    #[error(transparent)]
    Pipeline(#[from] PipelineError),
}

fn stage(mode: Mode, what: impl Into<String>) -> CrosscheckError {
    CrosscheckError::RoundTrip { mode, stage: what.into() }
}

fn level_round_trip(s: &LevelStructures, phi: &Assignment) -> Result<(), CrosscheckError> {
    let m = Mode::Level;
    let phi_plus = lift_assignment_level(s, phi).map_err(|e| stage(m, format!("lift: {e}")))?;
    if !satisfies(&s.sys_plus, &phi_plus) {
        return Err(stage(m, "lifted assignment violates the plus-graph system"));
    }
    let d = drawing_from_assignment_level(s, &phi_plus).map_err(|e| stage(m, format!("drawing: {e}")))?;
    let rep = star_report_level(s, &d).map_err(|e| stage(m, format!("crossings: {e}")))?;
    if !rep.ht_violations.is_empty() {
        return Err(stage(m, "drawing is not Hanani-Tutte"));
    }
    let ex = assignment_from_drawing_level(s, &d).map_err(|e| stage(m, format!("extraction: {e}")))?;
    if !satisfies(&s.sys_plus, &ex.phi_plus) || !satisfies(&s.sys, &ex.phi) {
        return Err(stage(m, "extracted assignment violates its system"));
    }
    Ok(())
}

fn radial_round_trip(s: &RadialStructures, phi: &Assignment) -> Result<(), CrosscheckError> {
    let m = Mode::Radial;
    let phi_plus = lift_assignment_radial(s, phi).map_err(|e| stage(m, format!("lift: {e}")))?;
    if !satisfies(&s.sys_plus, &phi_plus) {
        return Err(stage(m, "lifted assignment violates the plus-graph system"));
    }
    let d = drawing_from_assignment_radial(s, &phi_plus).map_err(|e| stage(m, format!("drawing: {e}")))?;
    let rep = star_report_radial(s, &d).map_err(|e| stage(m, format!("crossings: {e}")))?;
    if !rep.ht_violations.is_empty() {
        return Err(stage(m, "drawing is not Hanani-Tutte"));
    }
    let ex = assignment_from_drawing_radial(s, &d).map_err(|e| stage(m, format!("extraction: {e}")))?;
    if !satisfies(&s.sys_plus, &ex) {
        return Err(stage(m, "extracted assignment violates its system"));
    }
    Ok(())
}

/// Compares solver and oracle in both modes, the radial one under up to
/// `ref_sets` reference-set choices, and runs every round trip.
pub fn crosscheck(g: &LevelGraph, ref_sets: usize, budget: u64) -> Result<CrosscheckOutcome, CrosscheckError> {
    let proper = properize(g).graph;
    let s = LevelStructures::new(proper.clone());
    let sat = solve_reduced(&s.sys);
    let oracle = brute_level(&proper, budget).map_err(PipelineError::from)?;
    if sat.is_some() != oracle.planar {
        return Err(CrosscheckError::Decision { mode: Mode::Level, solver: sat.is_some(), oracle: oracle.planar });
    }
    if let Some(phi) = &sat {
        level_round_trip(&s, phi)?;
    }
    let compact = drop_empty_levels(&proper);
    let mut decision = None;
    let mut radial_states = 0;
    let choices = enumerate_reference_sets(&compact, ref_sets.max(1));
    for (refs, aug) in &choices {
        let r = RadialStructures::new(aug.clone(), refs.clone()).map_err(PipelineError::from)?;
        let sat = solve_reduced(&r.sys);
        let oracle = brute_radial(aug, refs, budget).map_err(PipelineError::from)?;
        radial_states += oracle.states_examined;
        if sat.is_some() != oracle.planar {
            return Err(CrosscheckError::Decision { mode: Mode::Radial, solver: sat.is_some(), oracle: oracle.planar });
        }
        if decision.is_some_and(|d| d != oracle.planar) {
            return Err(CrosscheckError::ReferenceDependence);
        }
        decision = Some(oracle.planar);
        if let Some(phi) = &sat {
            radial_round_trip(&r, phi)?;
        }
    }
    let radial_planar = decision.expect("every graph has reference sets");
    if oracle.planar && !radial_planar {
        return Err(CrosscheckError::LevelNotRadial);
    }
    Ok(CrosscheckOutcome {
        level_planar: oracle.planar,
        radial_planar,
        reference_sets: choices.len(),
        level_states: oracle.states_examined,
        radial_states,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::parse_graph;

    const K22: &str = r#"{"levels":2,"vertices":[{"id":"a","level":1},{"id":"b","level":1},
        {"id":"c","level":2},{"id":"d","level":2}],"edges":[["a","c"],["a","d"],["b","c"],["b","d"]]}"#;

    #[test]
    fn k22_decisions() {
        let g = parse_graph(K22).unwrap();
        let opts = CheckOptions { witness: true, ..Default::default() };
        assert!(!check(&g, Mode::Level, &opts).unwrap().planar);
        let r = check(&g, Mode::Radial, &opts).unwrap();
        assert!(r.planar);
        assert!(matches!(r.witness, Some(Witness::Radial { .. })));
        let full = CheckOptions { full: true, ..opts };
        assert!(!check(&g, Mode::Level, &full).unwrap().planar);
        assert!(check(&g, Mode::Radial, &full).unwrap().planar);
    }

    #[test]
    fn long_edges_and_empty_levels() {
        let g = parse_graph(
            r#"{"levels":5,"vertices":[{"id":"a","level":1},{"id":"b","level":3},{"id":"c","level":5}],
            "edges":[["a","b"]]}"#,
        )
        .unwrap();
        let opts = CheckOptions { witness: true, ..Default::default() };
        assert!(check(&g, Mode::Level, &opts).unwrap().planar);
        assert!(check(&g, Mode::Radial, &opts).unwrap().planar);
        let outcome = crosscheck(&g, 2, 1000).unwrap();
        assert!(outcome.level_planar && outcome.radial_planar);
    }

    #[test]
    fn dropping_empty_levels() {
        let g = parse_graph(
            r#"{"levels":4,"vertices":[{"id":"a","level":1},{"id":"b","level":2},{"id":"c","level":4}],
            "edges":[["a","b"]]}"#,
        )
        .unwrap();
        let h = drop_empty_levels(&properize(&g).graph);
        assert_eq!(h.num_levels(), 3);
        assert_eq!(h.level(h.vertex("c").unwrap()), 3);
    }

    #[test]
    fn full_budget_is_reported() {
        let g = parse_graph(
            r#"{"levels":1,"vertices":[{"id":"a","level":1},{"id":"b","level":1},{"id":"c","level":1},
            {"id":"d","level":1}],"edges":[]}"#,
        )
        .unwrap();
        let opts = CheckOptions { full: true, budget: 2, ..Default::default() };
        assert!(matches!(check(&g, Mode::Level, &opts), Err(PipelineError::Constraint(ConstraintError::Budget(..)))));
    }

    #[test]
    fn crosscheck_k22() {
        let g = parse_graph(K22).unwrap();
        let o = crosscheck(&g, 2, 1000).unwrap();
        assert!(!o.level_planar);
        assert!(o.radial_planar);
        assert_eq!(o.reference_sets, 2);
        assert_eq!(o.level_states, 4);
    }
}
