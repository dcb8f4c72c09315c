//! Instance generators: the exhaustive small corpus and random instances.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::constraints::{classify_gap, ReferenceSets};
use crate::drawing::{LevelDrawing, RadialDrawing};
use crate::graph::{LevelGraph, ProperLevelGraph, VertexId};

/// Name of the `idx`-th vertex (0-based) of `level` (1-based): `a1`, `a2`,
/// `b1`, ...
pub fn vertex_name(level: usize, idx: usize) -> String {
    if level <= 26 {
        format!("{}{}", (b'a' + level as u8 - 1) as char, idx + 1)
    } else {
        format!("l{level}v{}", idx + 1)
    }
}

/// Proper graph with the given level sizes and edges `(level, tail index,
/// head index)` from `level` to `level + 1`.
pub fn build(sizes: &[usize], edges: &[(usize, usize, usize)]) -> ProperLevelGraph {
    let vertices =
        sizes.iter().enumerate().flat_map(|(i, &n)| (0..n).map(move |j| (VertexId::new(vertex_name(i + 1, j)), i + 1)));
    let edges = edges.iter().map(|&(l, a, b)| (VertexId::new(vertex_name(l, a)), VertexId::new(vertex_name(l + 1, b))));
    let g = LevelGraph::new(sizes.len(), vertices, edges).expect("generated graphs are valid");
    ProperLevelGraph::new(g).expect("generated graphs are proper")
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for at in 0..=p.len() {
            let mut q = p.clone();
            q.insert(at, n - 1);
            out.push(q);
        }
    }
    out
}

fn size_tuples(max_levels: usize, max_per_level: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for k in 1..=max_levels {
        let mut t = vec![1; k];
        loop {
            out.push(t.clone());
            let Some(d) = (0..k).rev().find(|&d| t[d] < max_per_level) else { break };
            t[d] += 1;
            for x in &mut t[d + 1..] {
                *x = 1;
            }
        }
    }
    out
}

/// Every proper graph with at most `max_levels` nonempty levels of at most
/// `max_per_level` vertices, one per class of graphs that differ only by
/// reordering vertices within levels, up to `cap` graphs.
pub fn exhaustive(max_levels: usize, max_per_level: usize, cap: usize) -> Vec<ProperLevelGraph> {
    let mut out = Vec::new();
    for sizes in size_tuples(max_levels, max_per_level) {
        let slots: Vec<(usize, usize, usize)> = (0..sizes.len().saturating_sub(1))
            .flat_map(|i| {
                let (a, b) = (sizes[i], sizes[i + 1]);
                (0..a).flat_map(move |p| (0..b).map(move |q| (i + 1, p, q)))
            })
            .collect();
        let m = slots.len();
        let slot_index =
            |l: usize, p: usize, q: usize| slots.iter().position(|&s| s == (l, p, q)).expect("slot exists");
        let perms: Vec<Vec<Vec<usize>>> = sizes.iter().map(|&n| permutations(n)).collect();
        let mut maps: Vec<Vec<usize>> = Vec::new();
        let mut idx = vec![0; sizes.len()];
        loop {
            maps.push(
                slots
                    .iter()
                    .map(|&(l, p, q)| slot_index(l, perms[l - 1][idx[l - 1]][p], perms[l][idx[l]][q]))
                    .collect(),
            );
            let Some(d) = (0..idx.len()).rev().find(|&d| idx[d] + 1 < perms[d].len()) else { break };
            idx[d] += 1;
            for x in &mut idx[d + 1..] {
                *x = 0;
            }
        }
        let mut seen = vec![false; 1 << m];
        for mask in 0u64..1 << m {
            if seen[mask as usize] {
                continue;
            }
            for map in &maps {
                let mut image = 0u64;
                for (bit, &to) in map.iter().enumerate() {
                    image |= (mask >> bit & 1) << to;
                }
                seen[image as usize] = true;
            }
            let edges: Vec<_> = (0..m).filter(|&b| mask >> b & 1 == 1).map(|b| slots[b]).collect();
            out.push(build(&sizes, &edges));
            if out.len() >= cap {
                return out;
            }
        }
    }
    out
}

/// Random proper graph with `levels` levels of `1..=max_per_level` vertices
/// each and every possible edge present with probability `density`.
pub fn random_graph(rng: &mut impl Rng, levels: usize, max_per_level: usize, density: f64) -> ProperLevelGraph {
    let sizes: Vec<usize> = (0..levels).map(|_| rng.gen_range(1..=max_per_level)).collect();
    let mut edges = Vec::new();
    for i in 1..levels {
        for p in 0..sizes[i - 1] {
            for q in 0..sizes[i] {
                if rng.gen_bool(density) {
                    edges.push((i, p, q));
                }
            }
        }
    }
    build(&sizes, &edges)
}

/// [`random_graph`] from a seeded generator.
pub fn seeded_graph(seed: u64, levels: usize, max_per_level: usize, density: f64) -> ProperLevelGraph {
    random_graph(&mut ChaCha8Rng::seed_from_u64(seed), levels, max_per_level, density)
}

/// `count` random graphs from a seeded generator, each with
/// `1..=max_levels` levels, `1..=max_per_level` vertices per level and a
/// random edge density.
pub fn random_corpus(seed: u64, count: usize, max_levels: usize, max_per_level: usize) -> Vec<ProperLevelGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let levels = rng.gen_range(1..=max_levels.max(1));
            let density = rng.gen_range(0.2..0.8);
            random_graph(&mut rng, levels, max_per_level.max(1), density)
        })
        .collect()
}

pub fn random_level_drawing(g: &LevelGraph, rng: &mut impl Rng) -> LevelDrawing {
    let mut d = LevelDrawing::ascending(g);
    for order in &mut d.orders {
        order.shuffle(rng);
    }
    d
}

/// Random cyclic orders and random flags on every edge at a reference endpoint.
pub fn random_radial_drawing(g: &ProperLevelGraph, refs: &ReferenceSets, rng: &mut impl Rng) -> RadialDrawing {
    let orders = random_level_drawing(g, rng).orders;
    let mut flags = vec![None; g.num_edges()];
    for i in 1..g.num_levels() {
        let gap = classify_gap(g, refs, i);
        for &e in gap.plus.iter().chain(&gap.minus) {
            flags[e] = Some(rng.gen_bool(0.5));
        }
    }
    RadialDrawing { orders, flags }
}

/// Relabels vertices by a random within-level permutation of their names.
pub fn shuffle_names(g: &ProperLevelGraph, rng: &mut impl Rng) -> ProperLevelGraph {
    let mut rename: Vec<VertexId> = g.names().to_vec();
    for i in 1..=g.num_levels() {
        let lv = g.level_vertices(i);
        let mut names: Vec<VertexId> = lv.iter().map(|&v| g.name(v).clone()).collect();
        names.shuffle(rng);
        for (&v, n) in lv.iter().zip(names) {
            rename[v] = n;
        }
    }
    let vertices = (0..g.num_vertices()).map(|v| (rename[v].clone(), g.level(v)));
    let edges = g.edges().iter().map(|&(a, b)| (rename[a].clone(), rename[b].clone()));
    ProperLevelGraph::new(LevelGraph::new(g.num_levels(), vertices, edges).expect("relabeling keeps validity"))
        .expect("relabeling keeps properness")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names() {
        assert_eq!(vertex_name(1, 0), "a1");
        assert_eq!(vertex_name(3, 2), "c3");
    }

    #[test]
    fn tiny_corpus_counts() {
        // one level of up to 2 vertices: sizes (1), (2)
        assert_eq!(exhaustive(1, 2, 100).len(), 2);
        // two levels of one vertex: with and without the edge
        assert_eq!(exhaustive(2, 1, 100).iter().filter(|g| g.num_levels() == 2).count(), 2);
        // sizes (2,2): 16 edge sets fall into 7 classes
        let two = exhaustive(2, 2, 1000);
        let count = two
            .iter()
            .filter(|g| g.num_levels() == 2 && g.level_vertices(1).len() == 2 && g.level_vertices(2).len() == 2)
            .count();
        assert_eq!(count, 7);
    }

    #[test]
    fn cap_is_respected() {
        assert_eq!(exhaustive(3, 3, 50).len(), 50);
    }

    #[test]
    fn random_generation_is_seeded() {
        let a = random_graph(&mut ChaCha8Rng::seed_from_u64(7), 3, 3, 0.5);
        let b = random_graph(&mut ChaCha8Rng::seed_from_u64(7), 3, 3, 0.5);
        assert_eq!(a, b);
        let d = random_level_drawing(&a, &mut ChaCha8Rng::seed_from_u64(1));
        assert!(d.positions(&a).is_ok());
        assert_eq!(random_corpus(3, 5, 3, 3), random_corpus(3, 5, 3, 3));
    }
}
