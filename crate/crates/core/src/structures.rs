//! Everything derived from one input graph that the drawing conversions need.

use crate::constraints::{
    build_level_reduced, build_radial_reduced, choose_reference_sets, ConstraintSystem, ReferenceError, ReferenceSets,
    SeedOrder,
};
use crate::graph::ProperLevelGraph;
use crate::transform::{build_plus, build_star_level, build_star_radial, PlusGraph, StarForm, TransformError};

/// A proper graph with its star form, plus graph and both reduced systems.
#[derive(Clone, Debug)]
pub struct LevelStructures {
    pub g: ProperLevelGraph,
    pub star: StarForm,
    pub plus: PlusGraph,
    pub sys: ConstraintSystem,
    pub sys_plus: ConstraintSystem,
}

impl LevelStructures {
    pub fn new(g: ProperLevelGraph) -> Self {
        let star = build_star_level(&g);
        let plus = build_plus(&star);
        let sys = build_level_reduced(&g);
        let sys_plus = build_level_reduced(plus.graph());
        LevelStructures { g, star, plus, sys, sys_plus }
    }
}

/// Radial counterpart of [`LevelStructures`]; `g` already contains any
/// inserted reference edges and `beta` holds the plus-graph reference sets.
#[derive(Clone, Debug)]
pub struct RadialStructures {
    pub g: ProperLevelGraph,
    pub refs: ReferenceSets,
    pub star: StarForm,
    pub plus: PlusGraph,
    pub beta: ReferenceSets,
    pub sys: ConstraintSystem,
    pub sys_plus: ConstraintSystem,
}

impl RadialStructures {
    pub fn new(g: ProperLevelGraph, refs: ReferenceSets) -> Result<Self, TransformError> {
        let star = build_star_radial(&g, &refs)?;
        let plus = build_plus(&star);
        let beta = plus.beta.clone().expect("radial star forms carry reference sets");
        let sys = build_radial_reduced(&g, &refs)?;
        let sys_plus = build_radial_reduced(plus.graph(), &beta)?;
        Ok(RadialStructures { g, refs, star, plus, beta, sys, sys_plus })
    }

    /// Chooses reference sets first.
    pub fn choose(g: &ProperLevelGraph, seed: SeedOrder) -> Result<Self, ReferenceError> {
        let (refs, aug) = choose_reference_sets(g, seed)?;
        Self::new(aug, refs).map_err(|e| match e {
            TransformError::Reference(r) => r,
            other => unreachable!("{other}"),
        })
    }
}
