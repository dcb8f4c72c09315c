//! Star forms and their proper subdivisions.
//!
//! The star form replaces every vertex `v` by a *stretch edge*
//! `(bot(v), top(v))` spread over sublevels so that every sublevel holds a
//! single star vertex (the radial variant leaves one or two vertices on each
//! middle sublevel). Its proper subdivision is the plus graph, and the map
//! `origin` sends each plus-graph vertex back to an input vertex.

use std::ops::RangeInclusive;

use thiserror::Error;

use crate::constraints::{ReferenceError, ReferenceSets};
use crate::graph::{properize, LevelGraph, ProperLevelGraph, Subdivision, VertexId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TransformError {
    #[error(transparent)]
    Reference(#[from] ReferenceError),
    #[error("edge {edge} does not span sublevel {level}")]
    OutsideEdge { edge: String, level: usize },
}

/// What an edge of the star form stands for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StarEdge {
    /// Stretch edge of an input vertex.
    Stretch(usize),
    /// Image of an input edge.
    Original(usize),
}

/// A star form together with its provenance maps.
///
/// Star vertex `2v` is `bot(v)` and `2v + 1` is `top(v)`. Star edge `v` is
/// the stretch edge of input vertex `v`; star edge `n + e` is the image of
/// input edge `e`.
#[derive(Clone, Debug)]
pub struct StarForm {
    pub graph: LevelGraph,
    pub bot: Vec<usize>,
    pub top: Vec<usize>,
    pub stretch: Vec<usize>,
    pub edge_map: Vec<usize>,
    pub edge_origin: Vec<StarEdge>,
    /// Sublevel (index `j - 1`) to the input level it replaces.
    pub level_map: Vec<usize>,
    /// Sublevels replacing each input level (index `i - 1`).
    pub blocks: Vec<RangeInclusive<usize>>,
    /// Sublevel crossed by every stretch edge of input level `i` (index `i - 1`).
    pub middle: Vec<usize>,
    /// Reference sets of the input, present for the radial variant.
    pub refs: Option<ReferenceSets>,
}

impl StarForm {
    pub fn num_sublevels(&self) -> usize {
        self.graph.num_levels()
    }

    pub fn is_radial(&self) -> bool {
        self.refs.is_some()
    }

    /// Input vertex whose stretch edge has `star_vertex` as an endpoint.
    pub fn owner(&self, star_vertex: usize) -> usize {
        star_vertex / 2
    }

    pub fn is_top(&self, star_vertex: usize) -> bool {
        star_vertex % 2 == 1
    }
}

/// Placement of one input level: `(vertex, bot offset, top offset)` with
/// 1-based offsets inside the block, plus block height and middle offset.
struct LevelLayout {
    slots: Vec<(usize, usize, usize)>,
    height: usize,
    middle: usize,
}

fn plain_layout(g: &LevelGraph, i: usize) -> LevelLayout {
    let vs = g.level_vertices(i);
    let n = vs.len();
    let slots = vs.iter().enumerate().map(|(j, &v)| (v, j + 1, n + j + 1)).collect();
    LevelLayout { slots, height: 2 * n, middle: n }
}

fn radial_layout(g: &LevelGraph, i: usize, refs: &ReferenceSets) -> LevelLayout {
    let plus = refs.plus[i - 1];
    let minus = refs.minus[i - 1];
    let n = g.level_vertices(i).len();
    if plus != minus {
        let mut order = vec![minus];
        order.extend(g.level_vertices(i).iter().copied().filter(|&v| v != plus && v != minus));
        order.push(plus);
        let slots = order.iter().enumerate().map(|(j, &v)| (v, j + 1, n + j)).collect();
        LevelLayout { slots, height: 2 * n - 1, middle: n }
    } else {
        let mut slots = vec![(plus, 1, 2 * n + 1)];
        let rest = g.level_vertices(i).iter().copied().filter(|&v| v != plus);
        slots.extend(rest.enumerate().map(|(j, v)| (v, j + 2, n + j + 2)));
        LevelLayout { slots, height: 2 * n + 1, middle: n + 1 }
    }
}

fn assemble(g: &LevelGraph, layouts: Vec<LevelLayout>, refs: Option<ReferenceSets>) -> StarForm {
    let n = g.num_vertices();
    let mut star_level = vec![0; 2 * n];
    let mut level_map = Vec::new();
    let mut blocks = Vec::with_capacity(layouts.len());
    let mut middle = Vec::with_capacity(layouts.len());
    let mut offset = 0;
    for (idx, layout) in layouts.iter().enumerate() {
        for &(v, b, t) in &layout.slots {
            star_level[2 * v] = offset + b;
            star_level[2 * v + 1] = offset + t;
        }
        level_map.extend(std::iter::repeat_n(idx + 1, layout.height));
        blocks.push(offset + 1..=offset + layout.height);
        middle.push(offset + layout.middle);
        offset += layout.height;
    }
    let mut names = Vec::with_capacity(2 * n);
    for v in 0..n {
        names.push(VertexId::new(format!("bot({})", g.name(v))));
        names.push(VertexId::new(format!("top({})", g.name(v))));
    }
    let mut edges: Vec<(usize, usize)> = (0..n).map(|v| (2 * v, 2 * v + 1)).collect();
    let mut edge_origin: Vec<StarEdge> = (0..n).map(StarEdge::Stretch).collect();
    for (e, &(a, b)) in g.edges().iter().enumerate() {
        edges.push((2 * a + 1, 2 * b));
        edge_origin.push(StarEdge::Original(e));
    }
    let graph = LevelGraph::from_parts(offset, names, star_level, edges);
    StarForm {
        graph,
        bot: (0..n).map(|v| 2 * v).collect(),
        top: (0..n).map(|v| 2 * v + 1).collect(),
        stretch: (0..n).collect(),
        edge_map: (0..g.num_edges()).map(|e| n + e).collect(),
        edge_origin,
        level_map,
        blocks,
        middle,
        refs,
    }
}

/// Star form for level planarity: level `i` with `n_i` vertices becomes
/// `2 n_i` sublevels, one star vertex each.
pub fn build_star_level(g: &ProperLevelGraph) -> StarForm {
    let layouts = (1..=g.num_levels()).map(|i| plain_layout(g, i)).collect();
    assemble(g, layouts, None)
}

/// Modified star form for radial level planarity.
///
/// Level `i` becomes `2 n_i - 1` sublevels when its two reference vertices
/// differ (the middle sublevel then holds `top(alpha_i^-)` and
/// `bot(alpha_i^+)`), otherwise `2 n_i + 1` sublevels with an empty middle.
pub fn build_star_radial(g: &ProperLevelGraph, refs: &ReferenceSets) -> Result<StarForm, TransformError> {
    refs.validate(g)?;
    let layouts = (1..=g.num_levels()).map(|i| radial_layout(g, i, refs)).collect();
    Ok(assemble(g, layouts, Some(refs.clone())))
}

/// Proper subdivision of a star form with the vertex map back to the input.
#[derive(Clone, Debug)]
pub struct PlusGraph {
    pub sub: Subdivision,
    /// Plus-graph vertex to the input vertex it stands for.
    pub origin: Vec<usize>,
    /// Plus-graph level to input level.
    pub level_map: Vec<usize>,
    /// Reference sets of the plus graph (radial variant only).
    pub beta: Option<ReferenceSets>,
}

impl PlusGraph {
    pub fn graph(&self) -> &ProperLevelGraph {
        &self.sub.graph
    }

    /// Star edge a plus-graph vertex subdivides; `None` for star vertices.
    pub fn subdivides(&self, v: usize) -> Option<usize> {
        self.sub.subdivides[v]
    }

    pub fn is_star_vertex(&self, v: usize) -> bool {
        self.sub.subdivides[v].is_none()
    }

    /// Star edge owning each plus-graph edge.
    pub fn edge_owner(&self, e: usize) -> usize {
        self.sub.edge_owner[e]
    }

    /// Vertex of star edge `e` on sublevel `j`.
    pub fn on_edge(&self, e: usize, j: usize) -> Option<usize> {
        self.sub.path_vertex(e, j)
    }
}

/// Subdivides the star form and fills in the vertex map and, for the radial
/// variant, the plus-graph reference sets.
pub fn build_plus(sf: &StarForm) -> PlusGraph {
    let sub = properize(&sf.graph);
    let gp = &sub.graph;
    let mut origin = vec![usize::MAX; gp.num_vertices()];
    for (v, slot) in origin.iter_mut().enumerate() {
        *slot = match sub.subdivides[v] {
            None => sf.owner(v),
            Some(e) => match sf.edge_origin[e] {
                StarEdge::Stretch(w) => w,
                StarEdge::Original(_) => {
                    let (x, x2) = sf.graph.edge(e);
                    if sf.level_map[gp.level(v) - 1] == sf.level_map[sf.graph.level(x) - 1] {
                        sf.owner(x)
                    } else {
                        sf.owner(x2)
                    }
                }
            },
        };
    }
    let beta = sf.refs.as_ref().map(|refs| {
        let k = sf.num_sublevels();
        let mut plus = Vec::with_capacity(k);
        let mut minus = Vec::with_capacity(k);
        for j in 1..=k {
            let i = sf.level_map[j - 1];
            let (ap, am) = (refs.plus[i - 1], refs.minus[i - 1]);
            let on_stretch = |v: usize| sub.path_vertex(sf.stretch[v], j).expect("stretch edge spans sublevel");
            let m = sf.middle[i - 1];
            if ap == am || j < m {
                let b = on_stretch(am);
                plus.push(b);
                minus.push(b);
            } else if j == m {
                minus.push(sf.top[am]);
                plus.push(sf.bot[ap]);
            } else {
                let b = on_stretch(ap);
                plus.push(b);
                minus.push(b);
            }
        }
        ReferenceSets { plus, minus, inserted: Vec::new() }
    });
    PlusGraph { sub, origin, level_map: sf.level_map.clone(), beta }
}

/// Contiguous piece of the subdivision path of star edge `e` from sublevel
/// `i` to sublevel `j`.
pub fn path_segment(pg: &PlusGraph, sf: &StarForm, e: usize, i: usize, j: usize) -> Result<Vec<usize>, TransformError> {
    let (lo, hi) = (i.min(j), i.max(j));
    let path = &pg.sub.paths[e];
    let start = pg.graph().level(path[0]);
    let end = pg.graph().level(*path.last().expect("paths are nonempty"));
    for l in [i, j] {
        if l < start || l > end {
            return Err(TransformError::OutsideEdge { edge: sf.graph.edge_label(e), level: l });
        }
    }
    Ok(path[lo - start..=hi - start].to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
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

    fn one_per_level(sf: &StarForm) -> bool {
        (1..=sf.num_sublevels()).all(|j| sf.graph.level_vertices(j).len() == 1)
    }

    #[test]
    fn single_edge_star_form() {
        let g = proper(2, &[("u", 1), ("v", 2)], &[("u", "v")]);
        let sf = build_star_level(&g);
        assert_eq!(sf.num_sublevels(), 4);
        let gs = &sf.graph;
        let lv = |name: &str| gs.level(gs.vertex(name).unwrap());
        assert_eq!((lv("bot(u)"), lv("top(u)"), lv("bot(v)"), lv("top(v)")), (1, 2, 3, 4));
        let mut edges: Vec<_> =
            gs.edges().iter().map(|&(a, b)| (gs.name(a).to_string(), gs.name(b).to_string())).collect();
        edges.sort();
        assert_eq!(
            edges,
            vec![
                ("bot(u)".into(), "top(u)".into()),
                ("bot(v)".into(), "top(v)".into()),
                ("top(u)".into(), "bot(v)".into())
            ]
        );
        let pg = build_plus(&sf);
        assert_eq!(pg.graph().num_vertices(), 4);
        assert!(pg.sub.paths.iter().all(|p| p.len() == 2));
    }

    #[test]
    fn three_vertex_level_gives_six_sublevels() {
        let g = proper(1, &[("a", 1), ("b", 1), ("c", 1)], &[]);
        let sf = build_star_level(&g);
        assert_eq!(sf.num_sublevels(), 6);
        assert!(one_per_level(&sf));
    }

    #[test]
    fn k22_star_form_counts() {
        let sf = build_star_level(&k22());
        assert_eq!(sf.num_sublevels(), 8);
        assert_eq!(sf.graph.num_vertices(), 8);
        let stretch = sf.edge_origin.iter().filter(|o| matches!(o, StarEdge::Stretch(_))).count();
        assert_eq!((stretch, sf.graph.num_edges() - stretch), (4, 4));
        assert!(one_per_level(&sf));
    }

    #[test]
    fn k22_origin_map_by_hand() {
        // level 1: a (bot 1, top 3), b (bot 2, top 4); level 2: c (5, 7), d (6, 8)
        let g = k22();
        let sf = build_star_level(&g);
        let pg = build_plus(&sf);
        let gp = pg.graph();
        let o = |name: &str| g.name(pg.origin[gp.vertex(name).unwrap()]).to_string();
        for v in ["a", "b", "c", "d"] {
            assert_eq!(o(&format!("bot({v})")), v);
            assert_eq!(o(&format!("top({v})")), v);
        }
        // stretch subdivisions
        assert_eq!(o("bot(a)~top(a)~2"), "a");
        assert_eq!(o("bot(b)~top(b)~3"), "b");
        assert_eq!(o("bot(c)~top(c)~6"), "c");
        assert_eq!(o("bot(d)~top(d)~7"), "d");
        // edge (top(a), bot(d)) spans 3..6; sublevel 4 is in a's block, 5 in d's
        assert_eq!(o("top(a)~bot(d)~4"), "a");
        assert_eq!(o("top(a)~bot(d)~5"), "d");
        assert_eq!(o("top(b)~bot(d)~5"), "d");
        assert_eq!(o("top(a)~bot(c)~4"), "a");
        // every vertex maps somewhere on the input
        assert!(pg.origin.iter().all(|&w| w < 4));
    }

    #[test]
    fn radial_sublevel_counts() {
        use crate::constraints::ReferenceSets;
        let g = proper(2, &[("a", 1), ("b", 1), ("c", 1), ("x", 2), ("y", 2), ("z", 2)], &[("a", "x"), ("c", "y")]);
        let id = |s: &str| g.vertex(s).unwrap();
        // level 1: a is both references; level 2: x is both references
        let refs = ReferenceSets { plus: vec![id("a"), id("x")], minus: vec![id("a"), id("x")], inserted: vec![] };
        let sf = build_star_radial(&g, &refs).unwrap();
        assert_eq!(sf.blocks[0].clone().count(), 7);
        assert_eq!(sf.blocks[1].clone().count(), 7);
        assert!(sf.graph.level_vertices(sf.middle[0]).is_empty());

        // three-level graph where level 2 gets different references
        let g = proper(3, &[("a", 1), ("p", 2), ("q", 2), ("r", 2), ("z", 3)], &[("a", "p"), ("r", "z")]);
        let id = |s: &str| g.vertex(s).unwrap();
        let refs = ReferenceSets {
            plus: vec![id("a"), id("r"), id("z")],
            minus: vec![id("a"), id("p"), id("z")],
            inserted: vec![],
        };
        let sf = build_star_radial(&g, &refs).unwrap();
        assert_eq!(sf.blocks[1].clone().count(), 5);
        let mid: Vec<String> =
            sf.graph.level_vertices(sf.middle[1]).iter().map(|&v| sf.graph.name(v).to_string()).collect();
        assert_eq!(mid, vec!["bot(r)".to_string(), "top(p)".to_string()]);
        let pg = build_plus(&sf);
        let beta = pg.beta.as_ref().unwrap();
        let m = sf.middle[1];
        assert_eq!(pg.graph().name(beta.minus[m - 1]).as_str(), "top(p)");
        assert_eq!(pg.graph().name(beta.plus[m - 1]).as_str(), "bot(r)");
        beta.validate(pg.graph()).unwrap();
    }

    #[test]
    fn path_graph_radial_blocks_have_three_sublevels() {
        let g = proper(3, &[("a", 1), ("b", 2), ("c", 3)], &[("a", "b"), ("b", "c")]);
        let (refs, aug) =
            crate::constraints::choose_reference_sets(&g, crate::constraints::SeedOrder::Ascending).unwrap();
        let sf = build_star_radial(&aug, &refs).unwrap();
        assert_eq!(sf.num_sublevels(), 9);
        assert!(sf.blocks.iter().all(|b| b.clone().count() == 3));
    }

    #[test]
    fn path_segments() {
        let sf = build_star_level(&k22());
        let pg = build_plus(&sf);
        let e = sf.stretch[1]; // b: sublevels 2..4
        assert_eq!(path_segment(&pg, &sf, e, 3, 3).unwrap().len(), 1);
        assert_eq!(path_segment(&pg, &sf, e, 2, 4).unwrap(), pg.sub.paths[e]);
        let mid = path_segment(&pg, &sf, e, 2, 3).unwrap();
        let levels: Vec<usize> = mid.iter().map(|&v| pg.graph().level(v)).collect();
        assert_eq!(levels, vec![2, 3]);
        assert!(path_segment(&pg, &sf, e, 1, 3).is_err());
    }
}
