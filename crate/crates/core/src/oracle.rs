//! Exhaustive deciders for small instances.

use thiserror::Error;

use crate::constraints::{classify_gap, ReferenceError, ReferenceSets};
use crate::drawing::{count_crossings_level, count_crossings_radial, LevelDrawing, RadialDrawing};
use crate::graph::ProperLevelGraph;

pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("search space of {needed} states exceeds the budget of {budget}")]
    Budget { needed: u128, budget: u64 },
    #[error(transparent)]
    Reference(#[from] ReferenceError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleResult<W> {
    pub planar: bool,
    pub witness: Option<W>,
    pub states_examined: u64,
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

fn within(needed: u128, budget: u64) -> Result<(), OracleError> {
    if needed > budget as u128 {
        Err(OracleError::Budget { needed, budget })
    } else {
        Ok(())
    }
}

/// Advances to the next lexicographic permutation; on the last one resets
/// to ascending order and returns false.
fn next_permutation(xs: &mut [usize]) -> bool {
    let Some(i) = xs.windows(2).rposition(|w| w[0] < w[1]) else {
        xs.reverse();
        return false;
    };
    let j = xs.iter().rposition(|&x| x > xs[i]).expect("a larger element follows");
    xs.swap(i, j);
    xs[i + 1..].reverse();
    true
}

/// Odometer step over per-level permutations, last level fastest.
fn advance(orders: &mut [Vec<usize>], skip_first: bool) -> bool {
    for order in orders.iter_mut().rev() {
        let tail = if skip_first && !order.is_empty() { &mut order[1..] } else { &mut order[..] };
        if next_permutation(tail) {
            return true;
        }
    }
    false
}

fn level_gap_planar(g: &ProperLevelGraph, pos: &[usize], gap: &[usize]) -> bool {
    for (p, &e) in gap.iter().enumerate() {
        let (a, b) = g.edge(e);
        for &f in &gap[p + 1..] {
            let (c, d) = g.edge(f);
            if a != c && b != d && (pos[a] < pos[c]) != (pos[b] < pos[d]) {
                return false;
            }
        }
    }
    true
}

/// Tries every combination of linear level orders.
pub fn brute_level(g: &ProperLevelGraph, budget: u64) -> Result<OracleResult<LevelDrawing>, OracleError> {
    let k = g.num_levels();
    within((1..=k).map(|i| factorial(g.level_vertices(i).len())).product(), budget)?;
    let gaps: Vec<Vec<usize>> = (1..k).map(|i| g.gap_edges(i).collect()).collect();
    let mut orders: Vec<Vec<usize>> = (1..=k).map(|i| g.level_vertices(i).to_vec()).collect();
    let mut pos = vec![0; g.num_vertices()];
    let mut states = 0u64;
    loop {
        states += 1;
        for order in &orders {
            for (p, &v) in order.iter().enumerate() {
                pos[v] = p;
            }
        }
        if gaps.iter().all(|gap| level_gap_planar(g, &pos, gap)) {
            let witness = LevelDrawing { orders };
            debug_assert!(count_crossings_level(&witness, g).map(|r| r.planar).unwrap_or(false));
            return Ok(OracleResult { planar: true, witness: Some(witness), states_examined: states });
        }
        if !advance(&mut orders, false) {
            return Ok(OracleResult { planar: false, witness: None, states_examined: states });
        }
    }
}

/// Searches flags of one radial gap for a crossing-free drawing.
fn radial_gap_flags(
    g: &ProperLevelGraph,
    refs: &ReferenceSets,
    pos: &[usize],
    i: usize,
    states: &mut u64,
) -> Option<Vec<(usize, bool)>> {
    let (a, b) = refs.edge(i);
    let (na, nb) = (g.level_vertices(i).len(), g.level_vertices(i + 1).len());
    let gap = classify_gap(g, refs, i);
    let corner: Vec<usize> = gap.plus.iter().chain(&gap.minus).copied().collect();
    let rel_a = |u: usize| (pos[u] + na - pos[a]) % na;
    let rel_b = |v: usize| (pos[v] + nb - pos[b]) % nb;
    let inner: Vec<(usize, usize, usize)> =
        gap.inner.iter().map(|&e| (e, rel_a(g.edge(e).0), rel_b(g.edge(e).1))).collect();
    let crosses = |x: &[(usize, usize, usize)]| {
        x.iter().enumerate().any(|(p, &(e, b1, t1))| {
            x[p + 1..].iter().any(|&(f, b2, t2)| g.independent(e, f) && (b1 < b2) != (t1 < t2))
        })
    };
    if crosses(&inner) {
        *states += 1;
        return None;
    }
    for mask in 0u64..1 << corner.len() {
        *states += 1;
        let mut all = inner.clone();
        for (bit, &e) in corner.iter().enumerate() {
            let left = mask >> bit & 1 == 1;
            let (u, v) = g.edge(e);
            let bottom = if u == a {
                if left {
                    na
                } else {
                    0
                }
            } else {
                rel_a(u)
            };
            let top = if v == b {
                if left {
                    nb
                } else {
                    0
                }
            } else {
                rel_b(v)
            };
            all.push((e, bottom, top));
        }
        if !crosses(&all) {
            return Some(corner.iter().enumerate().map(|(bit, &e)| (e, mask >> bit & 1 == 1)).collect());
        }
    }
    None
}

/// Tries every combination of cyclic level orders (each level rotated so
/// its outgoing reference vertex comes first) and, per gap, every choice of
/// left/right flags.
pub fn brute_radial(
    g: &ProperLevelGraph,
    refs: &ReferenceSets,
    budget: u64,
) -> Result<OracleResult<RadialDrawing>, OracleError> {
    refs.validate(g)?;
    let k = g.num_levels();
    let mut needed: u128 = (1..=k).map(|i| factorial(g.level_vertices(i).len() - 1)).product();
    for i in 1..k {
        let gap = classify_gap(g, refs, i);
        needed = needed.saturating_mul(1u128 << (gap.plus.len() + gap.minus.len()).min(100));
    }
    within(needed, budget)?;
    let mut orders: Vec<Vec<usize>> = (1..=k)
        .map(|i| {
            let a = refs.plus[i - 1];
            let mut o = vec![a];
            o.extend(g.level_vertices(i).iter().copied().filter(|&v| v != a));
            o
        })
        .collect();
    let mut pos = vec![0; g.num_vertices()];
    let mut states = 0u64;
    loop {
        for order in &orders {
            for (p, &v) in order.iter().enumerate() {
                pos[v] = p;
            }
        }
        let mut flags = vec![None; g.num_edges()];
        let mut ok = true;
        for i in 1..k {
            match radial_gap_flags(g, refs, &pos, i, &mut states) {
                Some(found) => {
                    for (e, left) in found {
                        flags[e] = Some(left);
                    }
                }
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if k == 1 {
            states += 1;
        }
        if ok {
            let witness = RadialDrawing { orders, flags };
            debug_assert!(count_crossings_radial(&witness, g, refs).map(|r| r.planar).unwrap_or(false));
            return Ok(OracleResult { planar: true, witness: Some(witness), states_examined: states });
        }
        if !advance(&mut orders, true) {
            return Ok(OracleResult { planar: false, witness: None, states_examined: states });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraints::{choose_reference_sets, SeedOrder};
    use crate::graph::LevelGraph;
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

    #[test]
    fn permutations_cycle() {
        let mut xs = vec![0, 1, 2];
        let mut count = 1;
        while next_permutation(&mut xs) {
            count += 1;
        }
        assert_eq!(count, 6);
        assert_eq!(xs, vec![0, 1, 2]);
    }

    #[test]
    fn level_examples() {
        let path = proper(3, &[("a", 1), ("b", 2), ("c", 3)], &[("a", "b"), ("b", "c")]);
        let r = brute_level(&path, DEFAULT_BUDGET).unwrap();
        assert!(r.planar);
        assert_eq!(r.states_examined, 1);
        let r = brute_level(&k22(), DEFAULT_BUDGET).unwrap();
        assert!(!r.planar);
        assert_eq!(r.states_examined, 4);
        assert!(r.witness.is_none());
        let two = proper(2, &[("a", 1), ("b", 1), ("c", 2), ("d", 2)], &[("a", "d"), ("b", "c")]);
        let r = brute_level(&two, DEFAULT_BUDGET).unwrap();
        assert!(r.planar);
        assert!(count_crossings_level(r.witness.as_ref().unwrap(), &two).unwrap().planar);
    }

    #[test]
    fn radial_examples() {
        let path = proper(3, &[("a", 1), ("b", 2), ("c", 3)], &[("a", "b"), ("b", "c")]);
        let (refs, g) = choose_reference_sets(&path, SeedOrder::Ascending).unwrap();
        assert!(brute_radial(&g, &refs, DEFAULT_BUDGET).unwrap().planar);
        let (refs, g) = choose_reference_sets(&k22(), SeedOrder::Ascending).unwrap();
        let r = brute_radial(&g, &refs, DEFAULT_BUDGET).unwrap();
        assert!(r.planar);
        assert!(count_crossings_radial(r.witness.as_ref().unwrap(), &g, &refs).unwrap().planar);
    }

    #[test]
    fn budget_is_enforced() {
        let vs: Vec<(String, i64)> = (0..16).map(|i| (format!("v{i}"), (i / 4 + 1) as i64)).collect();
        let vs: Vec<(&str, i64)> = vs.iter().map(|(s, l)| (s.as_str(), *l)).collect();
        let g = proper(4, &vs, &[]);
        assert!(matches!(brute_level(&g, 10), Err(OracleError::Budget { .. })));
    }
}
