//! Combinatorial drawings and their conversions to and from assignments.
//!
//! A level drawing is a left-to-right order per level. A radial drawing is a
//! clockwise order per level plus, for every edge that shares an endpoint
//! with its gap's reference edge, whether it leaves on the left of that edge.
//!
//! Crossings follow a fixed model: within one gap two independent edges cross
//! at most once, adjacent edges never cross and the reference edge is never
//! crossed. For a radial gap the annulus is cut along the reference edge; a
//! vertex then sits at its clockwise offset from the reference endpoint, and
//! an edge at the reference endpoint starts (or ends) at offset `n` when it
//! is flagged left and at `0` otherwise.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constraints::{classify_gap, Assignment, BoolVar, ConstraintError, ReferenceError, ReferenceSets};
use crate::graph::{LevelGraph, ProperLevelGraph};
use crate::structures::{LevelStructures, RadialStructures};
use crate::transform::{PlusGraph, StarEdge, StarForm};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DrawingError {
    #[error("drawing has {got} levels, graph has {expected}")]
    LevelCount { expected: usize, got: usize },
    #[error("order of level {0} is not a permutation of its vertices")]
    NotPermutation(usize),
    #[error("drawing has {got} flag slots, graph has {expected} edges")]
    FlagCount { expected: usize, got: usize },
    #[error("edge {0} needs a left/right flag")]
    MissingFlag(String),
    #[error("edge {0} cannot carry a flag")]
    StrayFlag(String),
    #[error("independent edges {0} and {1} cross an odd number of times")]
    NotHananiTutte(String, String),
    #[error("assignment violates {0} constraints")]
    Unsatisfying(usize),
    #[error("orders of {0} and {1} around the reference edge disagree")]
    PsiConflict(String, String),
    #[error(transparent)]
    Constraint(#[from] ConstraintError),
    #[error(transparent)]
    Reference(#[from] ReferenceError),
}

/// Left-to-right vertex order per level (index `i - 1`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelDrawing {
    pub orders: Vec<Vec<usize>>,
}

/// Clockwise vertex order per level plus left flags, indexed by edge.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RadialDrawing {
    pub orders: Vec<Vec<usize>>,
    pub flags: Vec<Option<bool>>,
}

fn check_orders(orders: &[Vec<usize>], g: &LevelGraph) -> Result<Vec<usize>, DrawingError> {
    if orders.len() != g.num_levels() {
        return Err(DrawingError::LevelCount { expected: g.num_levels(), got: orders.len() });
    }
    let mut pos = vec![usize::MAX; g.num_vertices()];
    for (i, order) in orders.iter().enumerate() {
        if order.len() != g.level_vertices(i + 1).len() {
            return Err(DrawingError::NotPermutation(i + 1));
        }
        for (p, &v) in order.iter().enumerate() {
            if v >= g.num_vertices() || g.level(v) != i + 1 || pos[v] != usize::MAX {
                return Err(DrawingError::NotPermutation(i + 1));
            }
            pos[v] = p;
        }
    }
    Ok(pos)
}

impl LevelDrawing {
    /// Every level in ascending id order.
    pub fn ascending(g: &LevelGraph) -> Self {
        LevelDrawing { orders: (1..=g.num_levels()).map(|i| g.level_vertices(i).to_vec()).collect() }
    }

    /// Position of every vertex within its level.
    pub fn positions(&self, g: &LevelGraph) -> Result<Vec<usize>, DrawingError> {
        check_orders(&self.orders, g)
    }
}

impl RadialDrawing {
    pub fn positions(&self, g: &LevelGraph) -> Result<Vec<usize>, DrawingError> {
        if self.flags.len() != g.num_edges() {
            return Err(DrawingError::FlagCount { expected: g.num_edges(), got: self.flags.len() });
        }
        check_orders(&self.orders, g)
    }

    /// True when `a, u, v` appear in clockwise order on their level.
    pub fn clockwise(&self, g: &LevelGraph, pos: &[usize], a: usize, u: usize, v: usize) -> bool {
        let n = self.orders[g.level(a) - 1].len();
        (pos[u] + n - pos[a]) % n < (pos[v] + n - pos[a]) % n
    }
}

/// Crossing counts per unordered edge pair (only nonzero counts are kept).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossingReport {
    pub per_pair: BTreeMap<(usize, usize), u32>,
    /// Independent pairs with an odd count.
    pub ht_violations: Vec<(usize, usize)>,
    pub planar: bool,
}

impl CrossingReport {
    fn from_counts(per_pair: BTreeMap<(usize, usize), u32>, g: &LevelGraph) -> Self {
        let ht_violations = verify_hanani_tutte(&per_pair, |e, f| g.independent(e, f));
        let planar = per_pair.values().all(|&c| c == 0);
        CrossingReport { per_pair, ht_violations, planar }
    }

    fn from_list(list: &[(usize, usize, usize)], g: &LevelGraph) -> Self {
        let mut per_pair = BTreeMap::new();
        for &(_, e, f) in list {
            *per_pair.entry((e.min(f), e.max(f))).or_insert(0) += 1;
        }
        Self::from_counts(per_pair, g)
    }

    pub fn count(&self, e: usize, f: usize) -> u32 {
        self.per_pair.get(&(e.min(f), e.max(f))).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.per_pair.values().map(|&c| c as u64).sum()
    }

    /// Sums counts over the edges each edge belongs to (e.g. the star-form
    /// edge a plus-graph edge subdivides).
    pub fn aggregate(&self, owner: &[usize], owner_graph: &LevelGraph) -> CrossingReport {
        let mut per_pair = BTreeMap::new();
        for (&(e, f), &c) in &self.per_pair {
            let (a, b) = (owner[e], owner[f]);
            if a != b {
                *per_pair.entry((a.min(b), a.max(b))).or_insert(0) += c;
            }
        }
        Self::from_counts(per_pair, owner_graph)
    }
}

/// Independent pairs that cross an odd number of times.
pub fn verify_hanani_tutte(
    per_pair: &BTreeMap<(usize, usize), u32>,
    independent: impl Fn(usize, usize) -> bool,
) -> Vec<(usize, usize)> {
    per_pair.iter().filter(|(&(e, f), &c)| c % 2 == 1 && independent(e, f)).map(|(&p, _)| p).collect()
}

fn gap_edges_sorted(g: &LevelGraph, i: usize) -> Vec<usize> {
    let mut gap: Vec<usize> = g.gap_edges(i).collect();
    gap.sort_unstable();
    gap
}

/// `(gap, e, f)` for every crossing of a level drawing.
pub fn level_crossings(d: &LevelDrawing, g: &ProperLevelGraph) -> Result<Vec<(usize, usize, usize)>, DrawingError> {
    let pos = d.positions(g)?;
    let mut out = Vec::new();
    for i in 1..g.num_levels() {
        let gap = gap_edges_sorted(g, i);
        for (p, &e) in gap.iter().enumerate() {
            for &f in &gap[p + 1..] {
                let ((a, b), (c, d)) = (g.edge(e), g.edge(f));
                if g.independent(e, f) && (pos[a] < pos[c]) != (pos[b] < pos[d]) {
                    out.push((i, e, f));
                }
            }
        }
    }
    Ok(out)
}

pub fn count_crossings_level(d: &LevelDrawing, g: &ProperLevelGraph) -> Result<CrossingReport, DrawingError> {
    Ok(CrossingReport::from_list(&level_crossings(d, g)?, g))
}

/// Offsets of both endpoints of every edge in its gap's cut annulus:
/// clockwise distance from the reference endpoint, where an edge at a
/// reference endpoint sits at the full level size when flagged left and at
/// `0` otherwise. Reference edges sit at `(0, 0)`.
pub fn radial_offsets(
    d: &RadialDrawing,
    g: &ProperLevelGraph,
    refs: &ReferenceSets,
) -> Result<Vec<(usize, usize)>, DrawingError> {
    let pos = d.positions(g)?;
    refs.validate(g)?;
    let mut flagged = vec![false; g.num_edges()];
    let mut out = vec![(0, 0); g.num_edges()];
    for i in 1..g.num_levels() {
        let (a, b) = refs.edge(i);
        let (na, nb) = (g.level_vertices(i).len(), g.level_vertices(i + 1).len());
        let gap = classify_gap(g, refs, i);
        let flag = |e: usize| d.flags[e].ok_or_else(|| DrawingError::MissingFlag(g.edge_label(e)));
        for &e in gap.inner.iter().chain(&gap.plus).chain(&gap.minus) {
            let (u, v) = g.edge(e);
            let bottom = if u == a {
                flagged[e] = true;
                if flag(e)? {
                    na
                } else {
                    0
                }
            } else {
                (pos[u] + na - pos[a]) % na
            };
            let top = if v == b {
                flagged[e] = true;
                if flag(e)? {
                    nb
                } else {
                    0
                }
            } else {
                (pos[v] + nb - pos[b]) % nb
            };
            out[e] = (bottom, top);
        }
    }
    if let Some(e) = (0..g.num_edges()).find(|&e| d.flags[e].is_some() && !flagged[e]) {
        return Err(DrawingError::StrayFlag(g.edge_label(e)));
    }
    Ok(out)
}

/// `(gap, e, f)` for every crossing of a radial drawing.
pub fn radial_crossings(
    d: &RadialDrawing,
    g: &ProperLevelGraph,
    refs: &ReferenceSets,
) -> Result<Vec<(usize, usize, usize)>, DrawingError> {
    let offsets = radial_offsets(d, g, refs)?;
    let mut out = Vec::new();
    for i in 1..g.num_levels() {
        let gap = gap_edges_sorted(g, i);
        for (p, &e) in gap.iter().enumerate() {
            let (b1, t1) = offsets[e];
            for &f in &gap[p + 1..] {
                let (b2, t2) = offsets[f];
                if g.independent(e, f) && (b1 < b2) != (t1 < t2) {
                    out.push((i, e, f));
                }
            }
        }
    }
    Ok(out)
}

pub fn count_crossings_radial(
    d: &RadialDrawing,
    g: &ProperLevelGraph,
    refs: &ReferenceSets,
) -> Result<CrossingReport, DrawingError> {
    Ok(CrossingReport::from_list(&radial_crossings(d, g, refs)?, g))
}

fn require(sys: &crate::constraints::ConstraintSystem, a: &Assignment) -> Result<(), DrawingError> {
    let v = crate::constraints::evaluate(sys, a)?;
    if v.is_empty() {
        Ok(())
    } else {
        Err(DrawingError::Unsatisfying(v.len()))
    }
}

fn first_violation(report: &CrossingReport, g: &LevelGraph) -> Result<(), DrawingError> {
    match report.ht_violations.first() {
        None => Ok(()),
        Some(&(e, f)) => Err(DrawingError::NotHananiTutte(g.edge_label(e), g.edge_label(f))),
    }
}

/// Input edge a plus-graph vertex lies on, unless it lies on a stretch edge
/// or is a star vertex.
fn original_edge(star: &StarForm, plus: &PlusGraph, v: usize) -> Option<usize> {
    match star.edge_origin[plus.subdivides(v)?] {
        StarEdge::Original(e) => Some(e),
        StarEdge::Stretch(_) => None,
    }
}

/// Crossings of a plus-graph level drawing summed per star-form edge.
pub fn star_report_level(s: &LevelStructures, d: &LevelDrawing) -> Result<CrossingReport, DrawingError> {
    let report = count_crossings_level(d, s.plus.graph())?;
    Ok(report.aggregate(&s.plus.sub.edge_owner, &s.star.graph))
}

/// Crossings of a plus-graph radial drawing summed per star-form edge.
pub fn star_report_radial(s: &RadialStructures, d: &RadialDrawing) -> Result<CrossingReport, DrawingError> {
    let report = count_crossings_radial(d, s.plus.graph(), &s.beta)?;
    Ok(report.aggregate(&s.plus.sub.edge_owner, &s.star.graph))
}

/// Carries a satisfying assignment of the input system to the plus graph.
///
/// Pairs with distinct images copy the image pair. Two vertices with the
/// same image lie on edges leaving (entering) that vertex and copy the order
/// of the other endpoints.
pub fn lift_assignment_level(s: &LevelStructures, phi: &Assignment) -> Result<Assignment, DrawingError> {
    require(&s.sys, phi)?;
    let o = &s.plus.origin;
    let value = |u: usize, w: usize| phi.get(s.sys.pair(u, w).expect("same-level pair"));
    let mut out = Vec::with_capacity(s.sys_plus.num_vars());
    for var in s.sys_plus.vars() {
        let BoolVar::Pair(a, b) = *var else { unreachable!("level systems hold pairs only") };
        let bit = if o[a] != o[b] {
            value(o[a], o[b])
        } else {
            let ea = original_edge(&s.star, &s.plus, a).expect("shared image implies an input edge");
            let eb = original_edge(&s.star, &s.plus, b).expect("shared image implies an input edge");
            let ((ta, ha), (tb, hb)) = (s.g.edge(ea), s.g.edge(eb));
            if ta == o[a] {
                value(ha, hb)
            } else {
                value(ta, tb)
            }
        };
        out.push(bit);
    }
    Ok(Assignment(out))
}

/// Places every plus-graph vertex left or right of the single star vertex
/// on its level; both sides keep ascending id order.
pub fn drawing_from_assignment_level(s: &LevelStructures, phi_plus: &Assignment) -> Result<LevelDrawing, DrawingError> {
    require(&s.sys_plus, phi_plus)?;
    let gp = s.plus.graph();
    let mut orders = Vec::with_capacity(gp.num_levels());
    for j in 1..=gp.num_levels() {
        let lv = gp.level_vertices(j);
        let pivot = *lv.iter().find(|&&v| s.plus.is_star_vertex(v)).expect("one star vertex per sublevel");
        let right = |w: usize| phi_plus.get(s.sys_plus.pair(pivot, w).expect("same-level pair"));
        let mut order: Vec<usize> = lv.iter().copied().filter(|&w| w != pivot && !right(w)).collect();
        order.push(pivot);
        order.extend(lv.iter().copied().filter(|&w| w != pivot && right(w)));
        orders.push(order);
    }
    Ok(LevelDrawing { orders })
}

/// Assignments read off a plus-graph level drawing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelExtraction {
    /// Positions as read from the drawing.
    pub psi_plus: Assignment,
    /// Repaired to satisfy the plus-graph system.
    pub phi_plus: Assignment,
    /// Projected to the input system.
    pub phi: Assignment,
}

/// Reads assignments off a drawing of the plus graph whose star-form image
/// is a Hanani-Tutte drawing.
///
/// Pairs involving a star vertex keep their positions. Two subdivision
/// vertices take the order of their edges at the lower limits when the edges
/// are independent, at the upper limits when they share a tail and at the
/// lower limits when they share a head.
pub fn assignment_from_drawing_level(s: &LevelStructures, d: &LevelDrawing) -> Result<LevelExtraction, DrawingError> {
    let gp = s.plus.graph();
    let gs = &s.star.graph;
    first_violation(&star_report_level(s, d)?, gs)?;
    let pos = d.positions(gp)?;
    let psi = |a: usize, b: usize| pos[a] < pos[b];
    let at = |e: usize, l: usize| s.plus.on_edge(e, l).expect("edge spans its limits");
    let mut psi_plus = Vec::with_capacity(s.sys_plus.num_vars());
    let mut phi_plus = Vec::with_capacity(s.sys_plus.num_vars());
    for var in s.sys_plus.vars() {
        let BoolVar::Pair(a, b) = *var else { unreachable!("level systems hold pairs only") };
        psi_plus.push(psi(a, b));
        let bit = match (s.plus.subdivides(a), s.plus.subdivides(b)) {
            (Some(e), Some(f)) => {
                let ((te, he), (tf, hf)) = (gs.edge(e), gs.edge(f));
                let low = gs.level(te).max(gs.level(tf));
                let high = gs.level(he).min(gs.level(hf));
                let l = if te == tf { high } else { low };
                psi(at(e, l), at(f, l))
            }
            _ => psi(a, b),
        };
        phi_plus.push(bit);
    }
    let phi_plus = Assignment(phi_plus);
    let mut phi = Vec::with_capacity(s.sys.num_vars());
    for var in s.sys.vars() {
        let BoolVar::Pair(u, w) = *var else { unreachable!("level systems hold pairs only") };
        let (eu, ew) = (s.star.stretch[u], s.star.stretch[w]);
        let l = gs.level(s.star.bot[u]).max(gs.level(s.star.bot[w]));
        phi.push(phi_plus.get(s.sys_plus.pair(at(eu, l), at(ew, l)).expect("same-level pair")));
    }
    Ok(LevelExtraction { psi_plus: Assignment(psi_plus), phi_plus, phi: Assignment(phi) })
}

/// Order of `eps_p, e, f` around gap `p` (edges of the input graph) implied by
/// `phi`; every applicable rule must agree.
fn psi_order(s: &RadialStructures, phi: &Assignment, e: usize, f: usize) -> Result<bool, DrawingError> {
    let g = &s.g;
    let p = g.level(g.edge(e).0);
    let (a, b) = s.refs.edge(p);
    let ((u, u2), (v, v2)) = (g.edge(e), g.edge(f));
    let triple = |x, y, z| phi.get(s.sys.triple(x, y, z).expect("triple variable exists"));
    let flag = |(t, h): (usize, usize)| phi.get(s.sys.flag(t, h).expect("flag variable exists"));
    let mut votes = Vec::with_capacity(2);
    if a != u && a != v && u != v {
        votes.push(triple(a, u, v));
    }
    if b != u2 && b != v2 && u2 != v2 {
        votes.push(triple(b, u2, v2));
    }
    if (a == v && a != u) || (b == v2 && b != u2) {
        votes.push(flag(g.edge(f)));
    }
    if (a == u && a != v) || (b == u2 && b != v2) {
        votes.push(!flag(g.edge(e)));
    }
    match votes.split_first() {
        Some((&first, rest)) if rest.iter().all(|&x| x == first) => Ok(first),
        _ => Err(DrawingError::PsiConflict(g.edge_label(e), g.edge_label(f))),
    }
}

/// Carries a satisfying assignment of the input radial system to the plus
/// graph and its reference sets.
pub fn lift_assignment_radial(s: &RadialStructures, phi: &Assignment) -> Result<Assignment, DrawingError> {
    require(&s.sys, phi)?;
    let o = &s.plus.origin;
    let mut out = Vec::with_capacity(s.sys_plus.num_vars());
    for var in s.sys_plus.vars() {
        let bit = match *var {
            BoolVar::Triple(x, y, z) => {
                if o[x] != o[y] && o[x] != o[z] && o[y] != o[z] {
                    phi.get(s.sys.triple(o[x], o[y], o[z]).expect("image triple exists"))
                } else {
                    let e = original_edge(&s.star, &s.plus, y);
                    let f = original_edge(&s.star, &s.plus, z);
                    match (e, f) {
                        (Some(e), Some(f)) if o[y] == o[z] => psi_order(s, phi, e, f)?,
                        _ => {
                            let gp = s.plus.graph();
                            return Err(DrawingError::PsiConflict(gp.name(y).to_string(), gp.name(z).to_string()));
                        }
                    }
                }
            }
            BoolVar::Flag(t, h) => phi.get(s.sys.flag(o[t], o[h]).expect("image edge carries a flag")),
            BoolVar::Pair(..) => unreachable!("radial systems hold no pairs"),
        };
        out.push(bit);
    }
    Ok(Assignment(out))
}

/// Builds the plus-graph radial drawing described by a satisfying
/// assignment of the plus-graph system.
///
/// A level with two reference vertices lists the vertices between them
/// clockwise first; a level with a star vertex other than its reference
/// vertex splits the rest around it; remaining orders are ascending.
pub fn drawing_from_assignment_radial(
    s: &RadialStructures,
    phi_plus: &Assignment,
) -> Result<RadialDrawing, DrawingError> {
    require(&s.sys_plus, phi_plus)?;
    let gp = s.plus.graph();
    let sys = &s.sys_plus;
    let triple = |x, y, z| phi_plus.get(sys.triple(x, y, z).expect("triple variable exists"));
    let mut orders = Vec::with_capacity(gp.num_levels());
    for j in 1..=gp.num_levels() {
        let lv = gp.level_vertices(j);
        let (bm, bp) = (s.beta.minus[j - 1], s.beta.plus[j - 1]);
        let mut order = vec![bm];
        if bm != bp {
            let rest: Vec<usize> = lv.iter().copied().filter(|&v| v != bm && v != bp).collect();
            order.extend(rest.iter().copied().filter(|&v| triple(bm, v, bp)));
            order.push(bp);
            order.extend(rest.iter().copied().filter(|&v| !triple(bm, v, bp)));
        } else {
            match lv.iter().copied().find(|&v| s.plus.is_star_vertex(v) && v != bm) {
                Some(xi) => {
                    let rest: Vec<usize> = lv.iter().copied().filter(|&v| v != bm && v != xi).collect();
                    order.extend(rest.iter().copied().filter(|&v| !triple(bm, xi, v)));
                    order.push(xi);
                    order.extend(rest.iter().copied().filter(|&v| triple(bm, xi, v)));
                }
                None => order.extend(lv.iter().copied().filter(|&v| v != bm)),
            }
        }
        orders.push(order);
    }
    let mut flags = vec![None; gp.num_edges()];
    for (idx, var) in sys.vars().iter().enumerate() {
        if let BoolVar::Flag(t, h) = *var {
            flags[gp.edge_index(t, h).expect("flagged edge exists")] = Some(phi_plus.get(idx));
        }
    }
    Ok(RadialDrawing { orders, flags })
}

/// Reads a satisfying assignment of the plus-graph radial system off a
/// plus-graph drawing whose star-form image is a Hanani-Tutte drawing.
///
/// Each triple takes its clockwise order, switched when the star-form edges
/// through its vertices cross an odd number of times below its level. Edges
/// sharing their tail count one extra crossing when they cross an odd number
/// of times overall. Flags are switched by crossings with the reference edge.
pub fn assignment_from_drawing_radial(s: &RadialStructures, d: &RadialDrawing) -> Result<Assignment, DrawingError> {
    let gp = s.plus.graph();
    let gs = &s.star.graph;
    let owner = &s.plus.sub.edge_owner;
    let list = radial_crossings(d, gp, &s.beta)?;
    let plus_report = CrossingReport::from_list(&list, gp);
    let star_report = plus_report.aggregate(owner, gs);
    first_violation(&star_report, gs)?;
    let pos = d.positions(gp)?;
    let mut gaps: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for &(j, e, f) in &list {
        let (a, b) = (owner[e], owner[f]);
        if a != b {
            gaps.entry((a.min(b), a.max(b))).or_default().push(j);
        }
    }
    let pcr = |x: Option<usize>, y: Option<usize>, level: usize| -> usize {
        let (Some(e), Some(f)) = (x, y) else { return 0 };
        let below = gaps.get(&(e.min(f), e.max(f))).map_or(0, |v| v.iter().filter(|&&j| j < level).count());
        let phantom = gs.edge(e).0 == gs.edge(f).0 && star_report.count(e, f) % 2 == 1;
        below + phantom as usize
    };
    let mut out = Vec::with_capacity(s.sys_plus.num_vars());
    for var in s.sys_plus.vars() {
        let bit = match *var {
            BoolVar::Triple(x, y, z) => {
                let level = gp.level(x);
                let psi = d.clockwise(gp, &pos, x, y, z);
                let (ex, ey, ez) = (s.plus.subdivides(x), s.plus.subdivides(y), s.plus.subdivides(z));
                let parity = pcr(ex, ey, level) + pcr(ex, ez, level) + pcr(ey, ez, level);
                psi ^ (parity % 2 == 1)
            }
            BoolVar::Flag(t, h) => {
                let e = gp.edge_index(t, h).expect("flagged edge exists");
                let j = gp.level(t);
                let (a, b) = s.beta.edge(j);
                let delta = gp.edge_index(a, b).expect("reference edge exists");
                let left = d.flags[e].ok_or_else(|| DrawingError::MissingFlag(gp.edge_label(e)))?;
                left ^ (plus_report.count(e, delta) % 2 == 1)
            }
            BoolVar::Pair(..) => unreachable!("radial systems hold no pairs"),
        };
        out.push(bit);
    }
    Ok(Assignment(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraints::{choose_reference_sets, satisfies, solve_reduced, SeedOrder};
    use crate::io::{GraphFile, VertexEntry};

    fn proper(k: usize, vs: &[(&str, i64)], es: &[(&str, &str)]) -> ProperLevelGraph {
        let f = GraphFile {
            levels: k,
            vertices: vs.iter().map(|&(id, level)| VertexEntry { id: id.into(), level }).collect(),
            edges: es.iter().map(|&(a, b)| [a.into(), b.into()]).collect(),
        };
        ProperLevelGraph::new(LevelGraph::from_file(&f).unwrap()).unwrap()
    }

    fn k22() -> ProperLevelGraph {
        proper(2, &[("a", 1), ("b", 1), ("c", 2), ("d", 2)], &[("a", "c"), ("a", "d"), ("b", "c"), ("b", "d")])
    }

    fn order(g: &LevelGraph, names: &[&[&str]]) -> Vec<Vec<usize>> {
        names.iter().map(|l| l.iter().map(|n| g.vertex(n).unwrap()).collect()).collect()
    }

    #[test]
    fn two_layer_examples() {
        let g = proper(2, &[("a", 1), ("b", 1), ("c", 2), ("d", 2)], &[("a", "c"), ("b", "d")]);
        let d = LevelDrawing { orders: order(&g, &[&["a", "b"], &["c", "d"]]) };
        assert!(count_crossings_level(&d, &g).unwrap().planar);
        let d = LevelDrawing { orders: order(&g, &[&["a", "b"], &["d", "c"]]) };
        let r = count_crossings_level(&d, &g).unwrap();
        assert_eq!(r.total(), 1);
        assert_eq!(r.ht_violations.len(), 1);
    }

    #[test]
    fn k22_always_one_crossing() {
        let g = k22();
        for top in [["a", "b"], ["b", "a"]] {
            for bottom in [["c", "d"], ["d", "c"]] {
                let d = LevelDrawing { orders: order(&g, &[&top, &bottom]) };
                assert_eq!(count_crossings_level(&d, &g).unwrap().total(), 1);
            }
        }
    }

    #[test]
    fn bad_drawings_are_rejected() {
        let g = k22();
        let d = LevelDrawing { orders: order(&g, &[&["a"], &["c", "d"]]) };
        assert_eq!(count_crossings_level(&d, &g), Err(DrawingError::NotPermutation(1)));
        let d = LevelDrawing { orders: order(&g, &[&["a", "b"]]) };
        assert!(matches!(count_crossings_level(&d, &g), Err(DrawingError::LevelCount { .. })));
    }

    #[test]
    fn radial_flag_examples() {
        let g = k22();
        let (refs, g) = choose_reference_sets(&g, SeedOrder::Ascending).unwrap();
        let ad = g.edge_index(g.vertex("a").unwrap(), g.vertex("d").unwrap()).unwrap();
        let bc = g.edge_index(g.vertex("b").unwrap(), g.vertex("c").unwrap()).unwrap();
        let orders = order(&g, &[&["a", "b"], &["c", "d"]]);
        for (fa, fb, crossings) in [(true, true, 1), (false, false, 1), (true, false, 0), (false, true, 0)] {
            let mut flags = vec![None; g.num_edges()];
            flags[ad] = Some(fa);
            flags[bc] = Some(fb);
            let d = RadialDrawing { orders: orders.clone(), flags };
            let r = count_crossings_radial(&d, &g, &refs).unwrap();
            assert_eq!(r.count(ad, bc), crossings);
        }
        let d = RadialDrawing { orders, flags: vec![None; g.num_edges()] };
        assert!(matches!(count_crossings_radial(&d, &g, &refs), Err(DrawingError::MissingFlag(_))));
    }

    #[test]
    fn k22_pipelines() {
        let g = k22();
        let s = LevelStructures::new(g.clone());
        assert!(solve_reduced(&s.sys).is_none());
        let zeros = Assignment::zeros(s.sys.num_vars());
        assert!(matches!(lift_assignment_level(&s, &zeros), Err(DrawingError::Unsatisfying(_))));

        let r = RadialStructures::choose(&g, SeedOrder::Ascending).unwrap();
        let phi = solve_reduced(&r.sys).unwrap();
        let phi_plus = lift_assignment_radial(&r, &phi).unwrap();
        assert!(satisfies(&r.sys_plus, &phi_plus));
        let d = drawing_from_assignment_radial(&r, &phi_plus).unwrap();
        assert!(star_report_radial(&r, &d).unwrap().ht_violations.is_empty());
        let back = assignment_from_drawing_radial(&r, &d).unwrap();
        assert!(satisfies(&r.sys_plus, &back));
    }

    #[test]
    fn parallel_paths_level_pipeline() {
        let g = proper(
            3,
            &[("a", 1), ("b", 1), ("c", 2), ("d", 2), ("e", 3), ("f", 3)],
            &[("a", "c"), ("c", "e"), ("b", "d"), ("d", "f")],
        );
        let s = LevelStructures::new(g);
        let phi = solve_reduced(&s.sys).unwrap();
        let phi_plus = lift_assignment_level(&s, &phi).unwrap();
        assert!(satisfies(&s.sys_plus, &phi_plus));
        let d = drawing_from_assignment_level(&s, &phi_plus).unwrap();
        assert!(star_report_level(&s, &d).unwrap().ht_violations.is_empty());
        let ex = assignment_from_drawing_level(&s, &d).unwrap();
        assert!(satisfies(&s.sys_plus, &ex.phi_plus));
        assert!(satisfies(&s.sys, &ex.phi));
    }

    #[test]
    fn single_edge_extraction_is_empty() {
        let g = proper(2, &[("u", 1), ("v", 2)], &[("u", "v")]);
        let s = LevelStructures::new(g);
        let d = drawing_from_assignment_level(&s, &Assignment::default()).unwrap();
        let ex = assignment_from_drawing_level(&s, &d).unwrap();
        assert!(ex.phi.is_empty());
    }
}
