//! Constraint systems for level and radial level planarity.
//!
//! Level systems have one variable `x(u,w)` per ordered pair of distinct
//! vertices on a common level ("u left of w"). Radial systems replace these
//! by triples `x(a,u,v)` anchored at a reference vertex `a` ("a, u, v
//! clockwise") and add one flag `l(e)` per edge sharing an endpoint with the
//! gap's reference edge ("e locally left of the reference edge").
//!
//! Full systems carry transitivity clauses; reduced systems are pure XOR.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{LevelGraph, ProperLevelGraph};
use crate::xorsat::{self, XorSystem};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReferenceError {
    #[error("level {0} is empty")]
    EmptyLevel(usize),
    #[error("reference sets cover {got} levels, graph has {expected}")]
    WrongLength { expected: usize, got: usize },
    #[error("reference vertex {vertex} is not on level {level}")]
    WrongLevel { vertex: String, level: usize },
    #[error("reference vertices of level {0} must coincide")]
    EndpointMismatch(usize),
    #[error("reference edge {tail} -> {head} is missing")]
    MissingEdge { tail: String, head: String },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstraintError {
    #[error("assignment has {got} values, system has {expected} variables")]
    Partial { expected: usize, got: usize },
    #[error("{0} solutions exceed the budget of {1}")]
    Budget(u128, u64),
}

/// Per-level reference vertices and the reference edges between them.
///
/// `plus[i - 1]` is the tail of the reference edge leaving level `i`,
/// `minus[i - 1]` the head of the one entering it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReferenceSets {
    pub plus: Vec<usize>,
    pub minus: Vec<usize>,
    /// Reference edges added to gaps that had no edge.
    pub inserted: Vec<(usize, usize)>,
}

impl ReferenceSets {
    pub fn validate(&self, g: &LevelGraph) -> Result<(), ReferenceError> {
        let k = g.num_levels();
        for len in [self.plus.len(), self.minus.len()] {
            if len != k {
                return Err(ReferenceError::WrongLength { expected: k, got: len });
            }
        }
        for i in 1..=k {
            if g.level_vertices(i).is_empty() {
                return Err(ReferenceError::EmptyLevel(i));
            }
            for v in [self.plus[i - 1], self.minus[i - 1]] {
                if v >= g.num_vertices() || g.level(v) != i {
                    let vertex = if v < g.num_vertices() { g.name(v).to_string() } else { format!("#{v}") };
                    return Err(ReferenceError::WrongLevel { vertex, level: i });
                }
            }
        }
        if self.plus[0] != self.minus[0] {
            return Err(ReferenceError::EndpointMismatch(1));
        }
        if self.plus[k - 1] != self.minus[k - 1] {
            return Err(ReferenceError::EndpointMismatch(k));
        }
        for i in 1..k {
            let (a, b) = (self.plus[i - 1], self.minus[i]);
            if g.edge_index(a, b).is_none() {
                return Err(ReferenceError::MissingEdge { tail: g.name(a).to_string(), head: g.name(b).to_string() });
            }
        }
        Ok(())
    }

    /// Reference edge `(alpha_i^+, alpha_{i+1}^-)` of gap `i`.
    pub fn edge(&self, i: usize) -> (usize, usize) {
        (self.plus[i - 1], self.minus[i])
    }

    /// Distinct anchors of level `i`: `alpha_i^+` first.
    pub fn anchors(&self, i: usize) -> Vec<usize> {
        let (p, m) = (self.plus[i - 1], self.minus[i - 1]);
        if p == m {
            vec![p]
        } else {
            vec![p, m]
        }
    }
}

/// Tie-breaking order among candidate reference edges.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeedOrder {
    Ascending,
    Descending,
    Shuffled(u64),
}

fn seed_rank(g: &LevelGraph, seed: SeedOrder) -> Vec<usize> {
    let n = g.num_vertices();
    let mut order: Vec<usize> = (1..=g.num_levels()).flat_map(|i| g.level_vertices(i).iter().copied()).collect();
    match seed {
        SeedOrder::Ascending => {}
        SeedOrder::Descending => order.reverse(),
        SeedOrder::Shuffled(s) => order.shuffle(&mut ChaCha8Rng::seed_from_u64(s)),
    }
    let mut rank = vec![0; n];
    for (r, &v) in order.iter().enumerate() {
        rank[v] = r;
    }
    rank
}

/// Highest level reachable from each vertex.
fn reach(g: &LevelGraph) -> Vec<usize> {
    let mut reach: Vec<usize> = (0..g.num_vertices()).map(|v| g.level(v)).collect();
    for i in (1..=g.num_levels()).rev() {
        for &v in g.level_vertices(i) {
            for &e in g.out_edges(v) {
                reach[v] = reach[v].max(reach[g.edge(e).1]);
            }
        }
    }
    reach
}

/// Picks reference sets, inserting a reference edge into every gap without
/// edges. Returns the sets and the graph they are valid for.
///
/// Each gap prefers edges leaving the head of the previous reference edge,
/// then heads from which the highest level is reachable, then the seed
/// order; a directed path through all levels is therefore always found.
pub fn choose_reference_sets(
    g: &ProperLevelGraph,
    seed: SeedOrder,
) -> Result<(ReferenceSets, ProperLevelGraph), ReferenceError> {
    let k = g.num_levels();
    if let Some(i) = (1..=k).find(|&i| g.level_vertices(i).is_empty()) {
        return Err(ReferenceError::EmptyLevel(i));
    }
    let rank = seed_rank(g, seed);
    let reach = reach(g);
    let first = |i: usize| *g.level_vertices(i).iter().min_by_key(|&&v| rank[v]).expect("level is nonempty");
    let mut plus = vec![usize::MAX; k];
    let mut minus = vec![usize::MAX; k];
    let mut inserted = Vec::new();
    for i in 1..k {
        let prev = (i > 1).then(|| minus[i - 1]);
        let mut cand: Vec<usize> = g.gap_edges(i).collect();
        if let Some(p) = prev {
            if cand.iter().any(|&e| g.edge(e).0 == p) {
                cand.retain(|&e| g.edge(e).0 == p);
            }
        }
        let best = cand.into_iter().min_by_key(|&e| {
            let (a, b) = g.edge(e);
            (std::cmp::Reverse(reach[b]), rank[a], rank[b])
        });
        let (a, b) = match best {
            Some(e) => g.edge(e),
            None => {
                let edge = (prev.unwrap_or_else(|| first(i)), first(i + 1));
                inserted.push(edge);
                edge
            }
        };
        plus[i - 1] = a;
        minus[i] = b;
    }
    if k == 1 {
        plus[0] = first(1);
    }
    minus[0] = plus[0];
    plus[k - 1] = minus[k - 1];
    let refs = ReferenceSets { plus, minus, inserted };
    let aug = if refs.inserted.is_empty() {
        g.clone()
    } else {
        ProperLevelGraph::new(g.with_edges(&refs.inserted)).expect("inserted edges join consecutive levels")
    };
    refs.validate(&aug)?;
    Ok((refs, aug))
}

/// Every valid choice of reference sets, up to `limit` of them. Gaps without
/// edges are filled by each possible inserted edge.
pub fn enumerate_reference_sets(g: &ProperLevelGraph, limit: usize) -> Vec<(ReferenceSets, ProperLevelGraph)> {
    let k = g.num_levels();
    if (1..=k).any(|i| g.level_vertices(i).is_empty()) {
        return Vec::new();
    }
    let choices: Vec<Vec<((usize, usize), bool)>> = (1..k)
        .map(|i| {
            let existing: Vec<_> = g.gap_edges(i).map(|e| (g.edge(e), false)).collect();
            if !existing.is_empty() {
                return existing;
            }
            let mut all = Vec::new();
            for &a in g.level_vertices(i) {
                for &b in g.level_vertices(i + 1) {
                    all.push(((a, b), true));
                }
            }
            all
        })
        .collect();
    let singles: Vec<usize> = if k == 1 { g.level_vertices(1).to_vec() } else { vec![usize::MAX] };
    let mut out = Vec::new();
    let mut idx = vec![0usize; choices.len()];
    'outer: loop {
        for &single in &singles {
            if out.len() >= limit {
                break 'outer;
            }
            let mut plus = vec![usize::MAX; k];
            let mut minus = vec![usize::MAX; k];
            let mut inserted = Vec::new();
            for (gap, &c) in idx.iter().enumerate() {
                let ((a, b), ins) = choices[gap][c];
                plus[gap] = a;
                minus[gap + 1] = b;
                if ins {
                    inserted.push((a, b));
                }
            }
            if k == 1 {
                plus[0] = single;
            }
            minus[0] = plus[0];
            plus[k - 1] = minus[k - 1];
            let refs = ReferenceSets { plus, minus, inserted };
            let aug = ProperLevelGraph::new(g.with_edges(&refs.inserted)).expect("inserted edges are proper");
            out.push((refs, aug));
        }
        let mut d = 0;
        loop {
            if d == idx.len() {
                break 'outer;
            }
            idx[d] += 1;
            if idx[d] < choices[d].len() {
                break;
            }
            idx[d] = 0;
            d += 1;
        }
    }
    out
}

/// A boolean variable over the vertices (indices) of the graph a system was
/// built for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BoolVar {
    /// `u` left of `w`.
    Pair(usize, usize),
    /// `anchor, u, v` clockwise.
    Triple(usize, usize, usize),
    /// Edge `(tail, head)` locally left of its gap's reference edge.
    Flag(usize, usize),
}

/// Which family of constraints an equation belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Rule {
    /// `uw + wu = 1`.
    PairConsistency,
    /// `uw + vx = 0` for independent edges `(u,v)`, `(w,x)`.
    PairPlanarity,
    /// `auv + avu = 1`.
    TripleConsistency,
    /// Two linearizations of one cyclic order agree.
    CyclicMerge,
    /// `a- v a+ = a+ a- v`.
    CyclicSwap,
    /// Two edges avoiding the reference edge.
    GapOrder,
    /// An edge leaving the reference tail and one entering the reference head.
    OppositeFlags,
    /// An edge leaving the reference tail and an edge avoiding the reference edge.
    TailFlag,
    /// An edge entering the reference head and an edge avoiding the reference edge.
    HeadFlag,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct XorEquation {
    pub vars: Vec<usize>,
    pub parity: bool,
    pub rule: Rule,
}

/// `a & b -> c`, or `a & b -> !c` when `negated`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransitivityClause {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub negated: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SystemKind {
    Level,
    Radial,
}

/// Dense slot table for variable lookup.
#[derive(Clone, Debug, Default)]
struct VarIndex {
    pos: Vec<usize>,
    size: Vec<usize>,
    pair_base: Vec<usize>,
    triple_base: Vec<Vec<(usize, usize)>>,
    slots: Vec<u32>,
    flags: HashMap<(usize, usize), usize>,
}

const NONE: u32 = u32::MAX;

impl VarIndex {
    fn new(g: &LevelGraph) -> Self {
        let mut pos = vec![0; g.num_vertices()];
        let mut size = vec![0; g.num_levels()];
        for i in 1..=g.num_levels() {
            size[i - 1] = g.level_vertices(i).len();
            for (p, &v) in g.level_vertices(i).iter().enumerate() {
                pos[v] = p;
            }
        }
        VarIndex { pos, size, ..Default::default() }
    }

    fn pair_slot(&self, level: usize, u: usize, w: usize) -> Option<usize> {
        let base = *self.pair_base.get(level - 1)?;
        Some(base + self.pos[u] * self.size[level - 1] + self.pos[w])
    }

    fn triple_slot(&self, level: usize, a: usize, u: usize, v: usize) -> Option<usize> {
        let &(_, base) = self.triple_base.get(level - 1)?.iter().find(|&&(anchor, _)| anchor == a)?;
        Some(base + self.pos[u] * self.size[level - 1] + self.pos[v])
    }
}

/// Variables, XOR equations and (for full systems) transitivity clauses.
#[derive(Clone, Debug)]
pub struct ConstraintSystem {
    kind: SystemKind,
    full: bool,
    vars: Vec<BoolVar>,
    level_of: Vec<usize>,
    xors: Vec<XorEquation>,
    transitivity: Vec<TransitivityClause>,
    index: VarIndex,
}

impl ConstraintSystem {
    pub fn kind(&self) -> SystemKind {
        self.kind
    }

    /// Built with transitivity clauses (possibly none, on small levels).
    pub fn is_full(&self) -> bool {
        self.full
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn vars(&self) -> &[BoolVar] {
        &self.vars
    }

    pub fn var(&self, i: usize) -> BoolVar {
        self.vars[i]
    }

    pub fn xors(&self) -> &[XorEquation] {
        &self.xors
    }

    pub fn transitivity(&self) -> &[TransitivityClause] {
        &self.transitivity
    }

    fn slot(&self, s: Option<usize>) -> Option<usize> {
        let id = *self.index.slots.get(s?)?;
        (id != NONE).then_some(id as usize)
    }

    pub fn pair(&self, u: usize, w: usize) -> Option<usize> {
        let level = *self.level_of.get(u)?;
        if u == w || self.level_of.get(w) != Some(&level) {
            return None;
        }
        self.slot(self.index.pair_slot(level, u, w))
    }

    pub fn triple(&self, a: usize, u: usize, v: usize) -> Option<usize> {
        let level = *self.level_of.get(a)?;
        if u == v || u == a || v == a || self.level_of.get(u) != Some(&level) || self.level_of.get(v) != Some(&level) {
            return None;
        }
        self.slot(self.index.triple_slot(level, a, u, v))
    }

    pub fn flag(&self, tail: usize, head: usize) -> Option<usize> {
        self.index.flags.get(&(tail, head)).copied()
    }

    pub fn index_of(&self, var: &BoolVar) -> Option<usize> {
        match *var {
            BoolVar::Pair(u, w) => self.pair(u, w),
            BoolVar::Triple(a, u, v) => self.triple(a, u, v),
            BoolVar::Flag(t, h) => self.flag(t, h),
        }
    }

    /// Same variables and equations without transitivity clauses.
    pub fn reduced(&self) -> ConstraintSystem {
        ConstraintSystem { full: false, transitivity: Vec::new(), ..self.clone() }
    }

    pub fn to_xor_system(&self) -> XorSystem {
        let mut sys = XorSystem::new(self.vars.len());
        for x in &self.xors {
            sys.push(x.vars.iter().copied(), x.parity);
        }
        sys
    }

    fn add_var(&mut self, var: BoolVar) -> usize {
        self.vars.push(var);
        self.vars.len() - 1
    }

    fn xor(&mut self, vars: Vec<usize>, parity: bool, rule: Rule) {
        self.xors.push(XorEquation { vars, parity, rule });
    }

    fn empty(kind: SystemKind, full: bool, g: &LevelGraph) -> Self {
        ConstraintSystem {
            kind,
            full,
            vars: Vec::new(),
            level_of: (0..g.num_vertices()).map(|v| g.level(v)).collect(),
            xors: Vec::new(),
            transitivity: Vec::new(),
            index: VarIndex::new(g),
        }
    }
}

/// A value for every variable of a system, indexed like `vars()`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Assignment(pub Vec<bool>);

impl Assignment {
    pub fn zeros(n: usize) -> Self {
        Assignment(vec![false; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> bool {
        self.0[i]
    }

    pub fn value(&self, sys: &ConstraintSystem, var: &BoolVar) -> Option<bool> {
        sys.index_of(var).map(|i| self.0[i])
    }
}

/// Level system: ordered same-level pairs, consistency, planarity and, if
/// `full`, transitivity.
fn build_level(g: &ProperLevelGraph, full: bool) -> ConstraintSystem {
    let mut sys = ConstraintSystem::empty(SystemKind::Level, full, g);
    let mut slots = Vec::new();
    for i in 1..=g.num_levels() {
        let lv = g.level_vertices(i);
        sys.index.pair_base.push(slots.len());
        for &u in lv {
            for &w in lv {
                if u == w {
                    slots.push(NONE);
                } else {
                    slots.push(sys.add_var(BoolVar::Pair(u, w)) as u32);
                }
            }
        }
    }
    sys.index.slots = slots;
    let pair = |sys: &ConstraintSystem, u, w| sys.pair(u, w).expect("pair variable exists");
    for i in 1..=g.num_levels() {
        let lv = g.level_vertices(i);
        for (a, &u) in lv.iter().enumerate() {
            for &w in &lv[a + 1..] {
                let (x, y) = (pair(&sys, u, w), pair(&sys, w, u));
                sys.xor(vec![x, y], true, Rule::PairConsistency);
            }
        }
        if full {
            for &u in lv {
                for &w in lv {
                    for &y in lv {
                        if u != w && w != y && u != y {
                            let clause = TransitivityClause {
                                a: pair(&sys, u, w),
                                b: pair(&sys, w, y),
                                c: pair(&sys, u, y),
                                negated: false,
                            };
                            sys.transitivity.push(clause);
                        }
                    }
                }
            }
        }
    }
    for i in 1..g.num_levels() {
        let gap: Vec<usize> = g.gap_edges(i).collect();
        let mut pairs = Vec::new();
        for (a, &e) in gap.iter().enumerate() {
            for &f in &gap[a + 1..] {
                if g.independent(e, f) {
                    pairs.push(if e < f { (e, f) } else { (f, e) });
                }
            }
        }
        pairs.sort_unstable();
        for (e, f) in pairs {
            let (mut e, mut f) = (g.edge(e), g.edge(f));
            if sys.index.pos[f.0] < sys.index.pos[e.0] {
                std::mem::swap(&mut e, &mut f);
            }
            let (x, y) = (pair(&sys, e.0, f.0), pair(&sys, e.1, f.1));
            sys.xor(vec![x, y], false, Rule::PairPlanarity);
        }
    }
    sys
}

pub fn build_level_full(g: &ProperLevelGraph) -> ConstraintSystem {
    build_level(g, true)
}

pub fn build_level_reduced(g: &ProperLevelGraph) -> ConstraintSystem {
    build_level(g, false)
}

/// Edges of gap `i` split by their relation to the reference edge.
pub struct GapEdges {
    pub reference: usize,
    /// Neither endpoint on the reference edge.
    pub inner: Vec<usize>,
    /// Leaving the reference tail.
    pub plus: Vec<usize>,
    /// Entering the reference head.
    pub minus: Vec<usize>,
}

pub fn classify_gap(g: &LevelGraph, refs: &ReferenceSets, i: usize) -> GapEdges {
    let (a, b) = refs.edge(i);
    let reference = g.edge_index(a, b).expect("reference edge exists");
    let mut out = GapEdges { reference, inner: Vec::new(), plus: Vec::new(), minus: Vec::new() };
    let mut gap: Vec<usize> = g.gap_edges(i).collect();
    gap.sort_unstable();
    for e in gap {
        if e == reference {
            continue;
        }
        let (u, v) = g.edge(e);
        if u == a {
            out.plus.push(e);
        } else if v == b {
            out.minus.push(e);
        } else {
            out.inner.push(e);
        }
    }
    out
}

fn build_radial(g: &ProperLevelGraph, refs: &ReferenceSets, full: bool) -> Result<ConstraintSystem, ReferenceError> {
    refs.validate(g)?;
    let k = g.num_levels();
    let mut sys = ConstraintSystem::empty(SystemKind::Radial, full, g);
    let mut slots = Vec::new();
    for i in 1..=k {
        let lv = g.level_vertices(i);
        let mut bases = Vec::new();
        for a in refs.anchors(i) {
            bases.push((a, slots.len()));
            for &u in lv {
                for &v in lv {
                    if u == v || u == a || v == a {
                        slots.push(NONE);
                    } else {
                        slots.push(sys.add_var(BoolVar::Triple(a, u, v)) as u32);
                    }
                }
            }
        }
        sys.index.triple_base.push(bases);
    }
    sys.index.slots = slots;
    let gaps: Vec<GapEdges> = (1..k).map(|i| classify_gap(g, refs, i)).collect();
    for gap in &gaps {
        for &e in gap.plus.iter().chain(&gap.minus) {
            let id = sys.add_var(BoolVar::Flag(g.edge(e).0, g.edge(e).1));
            sys.index.flags.insert(g.edge(e), id);
        }
    }
    let t = |sys: &ConstraintSystem, a, u, v| sys.triple(a, u, v).expect("triple variable exists");
    for i in 1..=k {
        let lv = g.level_vertices(i);
        for a in refs.anchors(i) {
            let rest: Vec<usize> = lv.iter().copied().filter(|&v| v != a).collect();
            for (p, &u) in rest.iter().enumerate() {
                for &v in &rest[p + 1..] {
                    let (x, y) = (t(&sys, a, u, v), t(&sys, a, v, u));
                    sys.xor(vec![x, y], true, Rule::TripleConsistency);
                }
            }
            if full {
                for &u in &rest {
                    for &v in &rest {
                        for &w in &rest {
                            if u != v && v != w && u != w {
                                let clause = TransitivityClause {
                                    a: t(&sys, a, u, v),
                                    b: t(&sys, a, v, w),
                                    c: t(&sys, a, u, w),
                                    negated: true,
                                };
                                sys.transitivity.push(clause);
                            }
                        }
                    }
                }
            }
        }
        let (ap, am) = (refs.plus[i - 1], refs.minus[i - 1]);
        if ap != am {
            let rest: Vec<usize> = lv.iter().copied().filter(|&v| v != ap && v != am).collect();
            for (p, &u) in rest.iter().enumerate() {
                for &v in &rest[p + 1..] {
                    let vars = vec![t(&sys, am, u, v), t(&sys, ap, u, v), t(&sys, am, u, ap), t(&sys, am, v, ap)];
                    sys.xor(vars, false, Rule::CyclicMerge);
                }
            }
            for &v in &rest {
                let vars = vec![t(&sys, am, v, ap), t(&sys, ap, am, v)];
                sys.xor(vars, false, Rule::CyclicSwap);
            }
        }
    }
    for (idx, gap) in gaps.iter().enumerate() {
        let (a, b) = refs.edge(idx + 1);
        for (p, &e) in gap.inner.iter().enumerate() {
            for &f in &gap.inner[p + 1..] {
                if g.independent(e, f) {
                    let ((u, v), (u2, v2)) = (g.edge(e), g.edge(f));
                    let vars = vec![t(&sys, a, u, u2), t(&sys, b, v, v2)];
                    sys.xor(vars, false, Rule::GapOrder);
                }
            }
        }
        for &e in &gap.plus {
            for &f in &gap.minus {
                let vars =
                    vec![sys.flag(g.edge(e).0, g.edge(e).1).unwrap(), sys.flag(g.edge(f).0, g.edge(f).1).unwrap()];
                sys.xor(vars, true, Rule::OppositeFlags);
            }
        }
        for &e in &gap.plus {
            let (_, v2) = g.edge(e);
            for &f in &gap.inner {
                let (_, v) = g.edge(f);
                if v != v2 {
                    let vars = vec![sys.flag(a, v2).unwrap(), t(&sys, b, v, v2)];
                    sys.xor(vars, false, Rule::TailFlag);
                }
            }
        }
        for &e in &gap.minus {
            let (u2, _) = g.edge(e);
            for &f in &gap.inner {
                let (u, _) = g.edge(f);
                if u != u2 {
                    let vars = vec![sys.flag(u2, b).unwrap(), t(&sys, a, u, u2)];
                    sys.xor(vars, false, Rule::HeadFlag);
                }
            }
        }
    }
    Ok(sys)
}

pub fn build_radial_full(g: &ProperLevelGraph, refs: &ReferenceSets) -> Result<ConstraintSystem, ReferenceError> {
    build_radial(g, refs, true)
}

pub fn build_radial_reduced(g: &ProperLevelGraph, refs: &ReferenceSets) -> Result<ConstraintSystem, ReferenceError> {
    build_radial(g, refs, false)
}

/// A constraint an assignment fails.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Violated {
    Xor(usize),
    Transitivity(usize),
}

/// Every violated equation and clause; empty when `a` satisfies `sys`.
pub fn evaluate(sys: &ConstraintSystem, a: &Assignment) -> Result<Vec<Violated>, ConstraintError> {
    if a.len() != sys.num_vars() {
        return Err(ConstraintError::Partial { expected: sys.num_vars(), got: a.len() });
    }
    let mut out = Vec::new();
    for (i, x) in sys.xors.iter().enumerate() {
        if x.vars.iter().fold(false, |acc, &v| acc ^ a.0[v]) != x.parity {
            out.push(Violated::Xor(i));
        }
    }
    for (i, c) in sys.transitivity.iter().enumerate() {
        if a.0[c.a] && a.0[c.b] && (a.0[c.c] == c.negated) {
            out.push(Violated::Transitivity(i));
        }
    }
    Ok(out)
}

pub fn satisfies(sys: &ConstraintSystem, a: &Assignment) -> bool {
    matches!(evaluate(sys, a), Ok(v) if v.is_empty())
}

/// Solves the XOR part of a system.
pub fn solve_reduced(sys: &ConstraintSystem) -> Option<Assignment> {
    xorsat::solve(&sys.to_xor_system()).assignment().map(|x| Assignment(x.to_vec()))
}

/// Searches the solution space of the XOR part for an assignment that also
/// meets every transitivity clause. Fails when the space holds more than
/// `budget` assignments.
pub fn solve_full(sys: &ConstraintSystem, budget: u64) -> Result<Option<Assignment>, ConstraintError> {
    let Some(ech) = xorsat::echelon(&sys.to_xor_system()) else {
        return Ok(None);
    };
    let d = ech.dimension();
    let count = if d >= 127 { u128::MAX } else { 1u128 << d };
    if count > budget as u128 {
        return Err(ConstraintError::Budget(count, budget));
    }
    let mut free = vec![false; d];
    for _ in 0..count {
        let a = Assignment(ech.solution_with(&free));
        if satisfies(sys, &a) {
            return Ok(Some(a));
        }
        for bit in free.iter_mut() {
            *bit = !*bit;
            if *bit {
                break;
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::{GraphFile, VertexEntry};

    pub(crate) fn proper(k: usize, vs: &[(&str, i64)], es: &[(&str, &str)]) -> ProperLevelGraph {
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

    fn all_assignments(n: usize) -> impl Iterator<Item = Assignment> {
        (0u64..1 << n).map(move |m| Assignment((0..n).map(|i| m >> i & 1 == 1).collect()))
    }

    #[test]
    fn level_counts() {
        let g = proper(1, &[("a", 1), ("b", 1)], &[]);
        let s = build_level_full(&g);
        assert_eq!((s.num_vars(), s.xors().len(), s.transitivity().len()), (2, 1, 0));
        let g = proper(1, &[("a", 1), ("b", 1), ("c", 1)], &[]);
        let s = build_level_full(&g);
        assert_eq!((s.num_vars(), s.xors().len(), s.transitivity().len()), (6, 3, 6));
        assert!(build_level_reduced(&g).transitivity().is_empty());
        assert_eq!(build_level_reduced(&g).xors(), s.xors());
    }

    #[test]
    fn k22_level_planarity_rows() {
        let g = k22();
        let s = build_level_full(&g);
        let id = |n: &str| g.vertex(n).unwrap();
        let planarity: Vec<Vec<usize>> =
            s.xors().iter().filter(|x| x.rule == Rule::PairPlanarity).map(|x| x.vars.clone()).collect();
        let ab = s.pair(id("a"), id("b")).unwrap();
        let cd = s.pair(id("c"), id("d")).unwrap();
        let dc = s.pair(id("d"), id("c")).unwrap();
        assert_eq!(planarity.len(), 2);
        assert!(planarity.contains(&vec![ab, cd]));
        assert!(planarity.contains(&vec![ab, dc]));
        // the hand argument: no assignment of the 4 variables satisfies all rows
        assert!(all_assignments(s.num_vars()).all(|a| !satisfies(&s.reduced(), &a)));
        assert!(solve_reduced(&s).is_none());
    }

    #[test]
    fn path_has_no_variables() {
        let g = proper(3, &[("a", 1), ("b", 2), ("c", 3)], &[("a", "b"), ("b", "c")]);
        let s = build_level_reduced(&g);
        assert_eq!(s.num_vars(), 0);
        assert!(solve_reduced(&s).is_some());
        let (refs, aug) = choose_reference_sets(&g, SeedOrder::Ascending).unwrap();
        assert!(refs.inserted.is_empty());
        let r = build_radial_full(&aug, &refs).unwrap();
        assert_eq!(r.num_vars(), 0);
    }

    #[test]
    fn reference_selection_examples() {
        let g = proper(3, &[("a", 1), ("x", 1), ("b", 2), ("y", 2), ("c", 3)], &[("x", "y"), ("a", "b"), ("b", "c")]);
        let (refs, _) = choose_reference_sets(&g, SeedOrder::Ascending).unwrap();
        let names: Vec<&str> = refs.plus.iter().map(|&v| g.name(v).as_str()).collect();
        assert_eq!(names, vec!["a", "b", "c"]);
        assert_eq!(refs.plus, refs.minus);

        let g = proper(2, &[("p", 1), ("q", 1), ("r", 2), ("s", 2)], &[]);
        let (refs, aug) = choose_reference_sets(&g, SeedOrder::Ascending).unwrap();
        assert_eq!(refs.inserted, vec![(g.vertex("p").unwrap(), g.vertex("r").unwrap())]);
        assert_eq!(aug.num_edges(), 1);

        let g = k22();
        let (refs, aug) = choose_reference_sets(&g, SeedOrder::Ascending).unwrap();
        assert!(refs.inserted.is_empty());
        assert_eq!(refs.edge(1), (g.vertex("a").unwrap(), g.vertex("c").unwrap()));
        assert_eq!(aug, g);
        let (desc, _) = choose_reference_sets(&g, SeedOrder::Descending).unwrap();
        assert_ne!(desc, refs);
    }

    #[test]
    fn empty_level_is_rejected() {
        let g = proper(3, &[("a", 1), ("c", 3)], &[]);
        assert_eq!(choose_reference_sets(&g, SeedOrder::Ascending).unwrap_err(), ReferenceError::EmptyLevel(2));
    }

    #[test]
    fn invalid_refs_are_rejected() {
        let g = k22();
        let id = |n: &str| g.vertex(n).unwrap();
        let bad = ReferenceSets { plus: vec![id("a"), id("c")], minus: vec![id("b"), id("c")], inserted: vec![] };
        assert_eq!(bad.validate(&g), Err(ReferenceError::EndpointMismatch(1)));
        let bad = ReferenceSets { plus: vec![id("c"), id("c")], minus: vec![id("c"), id("c")], inserted: vec![] };
        assert!(matches!(bad.validate(&g), Err(ReferenceError::WrongLevel { .. })));
        assert!(build_radial_reduced(&g, &bad).is_err());
    }

    #[test]
    fn k22_radial_full_is_satisfiable() {
        let g = k22();
        let (refs, aug) = choose_reference_sets(&g, SeedOrder::Ascending).unwrap();
        let s = build_radial_full(&aug, &refs).unwrap();
        // levels of size 2 have no triples; two flags remain
        assert!(s.vars().iter().all(|v| matches!(v, BoolVar::Flag(..))));
        assert_eq!(s.num_vars(), 2);
        assert!(all_assignments(s.num_vars()).any(|a| satisfies(&s, &a)));
        assert!(solve_reduced(&s).is_some());
    }

    #[test]
    fn radial_rule_parities() {
        let g = proper(
            2,
            &[("a", 1), ("b", 1), ("c", 1), ("d", 1), ("w", 2), ("x", 2), ("y", 2), ("z", 2)],
            &[("a", "w"), ("a", "x"), ("b", "y"), ("c", "z"), ("d", "w"), ("b", "z")],
        );
        let (refs, aug) = choose_reference_sets(&g, SeedOrder::Ascending).unwrap();
        let s = build_radial_full(&aug, &refs).unwrap();
        for x in s.xors() {
            let expected = matches!(x.rule, Rule::TripleConsistency | Rule::OppositeFlags);
            assert_eq!(x.parity, expected, "{:?}", x.rule);
            assert!(x.vars.len() <= 4);
        }
        assert!(s.transitivity().iter().all(|c| c.negated));
    }

    #[test]
    fn evaluate_reports() {
        let g = proper(1, &[("a", 1), ("b", 1)], &[]);
        let s = build_level_full(&g);
        assert_eq!(evaluate(&s, &Assignment::zeros(2)).unwrap(), vec![Violated::Xor(0)]);
        let ok = solve_reduced(&s).unwrap();
        assert!(evaluate(&s, &ok).unwrap().is_empty());
        let mut flipped = ok.clone();
        flipped.0[0] ^= true;
        assert_eq!(evaluate(&s, &flipped).unwrap(), vec![Violated::Xor(0)]);
        assert!(matches!(evaluate(&s, &Assignment::zeros(1)), Err(ConstraintError::Partial { .. })));
    }

    #[test]
    fn full_solver_respects_transitivity() {
        let g = proper(1, &[("a", 1), ("b", 1), ("c", 1)], &[]);
        let s = build_level_full(&g);
        let a = solve_full(&s, 1 << 10).unwrap().unwrap();
        assert!(satisfies(&s, &a));
        assert!(matches!(solve_full(&s, 2), Err(ConstraintError::Budget(8, 2))));
    }

    #[test]
    fn enumerate_refs_covers_choices() {
        let g = k22();
        let all = enumerate_reference_sets(&g, 100);
        assert_eq!(all.len(), 4);
        for (r, aug) in &all {
            r.validate(aug).unwrap();
        }
        let g = proper(1, &[("a", 1), ("b", 1)], &[]);
        assert_eq!(enumerate_reference_sets(&g, 100).len(), 2);
    }
}
