//! File formats: graph and drawing JSON, constraint dumps.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constraints::{BoolVar, ConstraintSystem, ReferenceError, ReferenceSets, SystemKind};
use crate::drawing::{DrawingError, LevelDrawing, RadialDrawing};
use crate::graph::{GraphError, LevelGraph};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Reference(#[from] ReferenceError),
    #[error("expected a {expected} drawing, found {got}")]
    Kind { expected: DrawingKind, got: DrawingKind },
    #[error("unknown vertex {0}")]
    UnknownVertex(String),
    #[error("level {0} does not exist")]
    BadLevel(usize),
    #[error("unknown edge {0}")]
    UnknownEdge(String),
    #[error("flag of {0} must be 0 or 1, found {1}")]
    BadFlag(String, u8),
    #[error(transparent)]
    Drawing(#[from] DrawingError),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Graph file: `{"levels": k, "vertices": [{"id", "level"}], "edges": [[a, b]]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphFile {
    pub levels: usize,
    pub vertices: Vec<VertexEntry>,
    pub edges: Vec<[String; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexEntry {
    pub id: String,
    pub level: i64,
}

pub fn parse_graph(text: &str) -> Result<LevelGraph, IoError> {
    let file: GraphFile = serde_json::from_str(text)?;
    Ok(LevelGraph::from_file(&file)?)
}

pub fn graph_to_json(g: &LevelGraph) -> String {
    serde_json::to_string_pretty(&g.to_file()).expect("graph files serialize")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DrawingKind {
    Level,
    Radial,
}

impl std::fmt::Display for DrawingKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            DrawingKind::Level => "level",
            DrawingKind::Radial => "radial",
        })
    }
}

/// Reference vertices per level, by name.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RefsEntry {
    pub plus: Vec<String>,
    pub minus: Vec<String>,
}

/// Drawing file: `{"kind", "orders": {level: [ids]}, "flags": {"t->h": 0|1}}`,
/// optionally with the reference sets the flags refer to.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DrawingFile {
    pub kind: DrawingKind,
    pub orders: BTreeMap<usize, Vec<String>>,
    #[serde(default)]
    pub flags: BTreeMap<String, u8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub refs: Option<RefsEntry>,
}

fn names_of(g: &LevelGraph, vs: &[usize]) -> Vec<String> {
    vs.iter().map(|&v| g.name(v).to_string()).collect()
}

fn orders_of(g: &LevelGraph, orders: &[Vec<usize>]) -> BTreeMap<usize, Vec<String>> {
    orders.iter().enumerate().map(|(i, o)| (i + 1, names_of(g, o))).collect()
}

fn lookup(g: &LevelGraph, name: &str) -> Result<usize, IoError> {
    g.vertex(name).ok_or_else(|| IoError::UnknownVertex(name.to_string()))
}

impl DrawingFile {
    pub fn from_level(g: &LevelGraph, d: &LevelDrawing) -> Self {
        DrawingFile { kind: DrawingKind::Level, orders: orders_of(g, &d.orders), flags: BTreeMap::new(), refs: None }
    }

    pub fn from_radial(g: &LevelGraph, d: &RadialDrawing, refs: Option<&ReferenceSets>) -> Self {
        let flags = d.flags.iter().enumerate().filter_map(|(e, f)| f.map(|f| (g.edge_label(e), u8::from(f)))).collect();
        let refs = refs.map(|r| RefsEntry { plus: names_of(g, &r.plus), minus: names_of(g, &r.minus) });
        DrawingFile { kind: DrawingKind::Radial, orders: orders_of(g, &d.orders), flags, refs }
    }

    pub fn parse(text: &str) -> Result<Self, IoError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("drawing files serialize")
    }

    fn orders(&self, g: &LevelGraph) -> Result<Vec<Vec<usize>>, IoError> {
        if let Some((&bad, _)) = self.orders.iter().find(|(&l, _)| l == 0 || l > g.num_levels()) {
            return Err(IoError::BadLevel(bad));
        }
        (1..=g.num_levels())
            .map(|i| {
                self.orders.get(&i).map(|names| names.iter().map(|n| lookup(g, n)).collect()).unwrap_or(Ok(Vec::new()))
            })
            .collect()
    }

    pub fn to_level(&self, g: &LevelGraph) -> Result<LevelDrawing, IoError> {
        if self.kind != DrawingKind::Level {
            return Err(IoError::Kind { expected: DrawingKind::Level, got: self.kind });
        }
        if let Some(key) = self.flags.keys().next() {
            return Err(IoError::UnknownEdge(key.clone()));
        }
        let d = LevelDrawing { orders: self.orders(g)? };
        d.positions(g)?;
        Ok(d)
    }

    /// The drawing and, when present, its reference sets (validated against `g`).
    pub fn to_radial(&self, g: &LevelGraph) -> Result<(RadialDrawing, Option<ReferenceSets>), IoError> {
        if self.kind != DrawingKind::Radial {
            return Err(IoError::Kind { expected: DrawingKind::Radial, got: self.kind });
        }
        let labels: HashMap<String, usize> = (0..g.num_edges()).map(|e| (g.edge_label(e), e)).collect();
        let mut flags = vec![None; g.num_edges()];
        for (key, &value) in &self.flags {
            let &e = labels.get(key).ok_or_else(|| IoError::UnknownEdge(key.clone()))?;
            if value > 1 {
                return Err(IoError::BadFlag(key.clone(), value));
            }
            flags[e] = Some(value == 1);
        }
        let refs = match &self.refs {
            None => None,
            Some(r) => {
                let plus = r.plus.iter().map(|n| lookup(g, n)).collect::<Result<_, _>>()?;
                let minus = r.minus.iter().map(|n| lookup(g, n)).collect::<Result<_, _>>()?;
                let refs = ReferenceSets { plus, minus, inserted: Vec::new() };
                refs.validate(g)?;
                Some(refs)
            }
        };
        let d = RadialDrawing { orders: self.orders(g)?, flags };
        d.positions(g)?;
        Ok((d, refs))
    }
}

/// A constraint system as written in a dump, with variables spelled out.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintDump {
    pub kind: SystemKind,
    pub full: bool,
    pub xors: Vec<(Vec<BoolVar>, bool)>,
    /// `(a, b, c, negated)` for `a & b -> [!]c`.
    pub transitivity: Vec<(BoolVar, BoolVar, BoolVar, bool)>,
}

const HEADER_TAIL: &str =
    "x(u,w) = u before w on its level; x(a,u,v) = a,u,v clockwise; l(t,h) = edge t->h left of its reference edge";

fn escape(name: &str, out: &mut String) {
    for c in name.chars() {
        if matches!(c, '\\' | ',' | '(' | ')' | '&' | '+' | '=' | '!' | '#' | ' ' | '\t') {
            out.push('\\');
        }
        out.push(c);
    }
}

fn write_var(g: &LevelGraph, v: &BoolVar, out: &mut String) {
    let (tag, ids): (char, Vec<usize>) = match *v {
        BoolVar::Pair(u, w) => ('x', vec![u, w]),
        BoolVar::Triple(a, u, w) => ('x', vec![a, u, w]),
        BoolVar::Flag(t, h) => ('l', vec![t, h]),
    };
    out.push(tag);
    out.push('(');
    for (i, &id) in ids.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        escape(g.name(id).as_str(), out);
    }
    out.push(')');
}

impl ConstraintDump {
    pub fn from_system(sys: &ConstraintSystem) -> Self {
        ConstraintDump {
            kind: sys.kind(),
            full: sys.is_full(),
            xors: sys.xors().iter().map(|x| (x.vars.iter().map(|&i| sys.var(i)).collect(), x.parity)).collect(),
            transitivity: sys
                .transitivity()
                .iter()
                .map(|c| (sys.var(c.a), sys.var(c.b), sys.var(c.c), c.negated))
                .collect(),
        }
    }

    pub fn to_text(&self, g: &LevelGraph) -> String {
        let kind = match self.kind {
            SystemKind::Level => "level",
            SystemKind::Radial => "radial",
        };
        let mut out = format!(
            "# kind={kind} system={} xors={} transitivity={}; {HEADER_TAIL}\n",
            if self.full { "full" } else { "reduced" },
            self.xors.len(),
            self.transitivity.len()
        );
        for (vars, parity) in &self.xors {
            if vars.is_empty() {
                out.push('0');
            }
            for (i, v) in vars.iter().enumerate() {
                if i > 0 {
                    out.push_str(" + ");
                }
                write_var(g, v, &mut out);
            }
            let _ = writeln!(out, " = {}", u8::from(*parity));
        }
        for (a, b, c, negated) in &self.transitivity {
            write_var(g, a, &mut out);
            out.push_str(" & ");
            write_var(g, b, &mut out);
            out.push_str(if *negated { " -> !" } else { " -> " });
            write_var(g, c, &mut out);
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str, g: &LevelGraph) -> Result<Self, IoError> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or(IoError::Parse { line: 1, msg: "missing header".into() })?;
        let field = |key: &str| {
            header.split([' ', ';']).find_map(|tok| tok.strip_prefix(key).and_then(|t| t.strip_prefix('=')))
        };
        let bad_header = |msg: &str| IoError::Parse { line: 1, msg: msg.into() };
        if !header.starts_with('#') {
            return Err(bad_header("header must start with #"));
        }
        let kind = match field("kind") {
            Some("level") => SystemKind::Level,
            Some("radial") => SystemKind::Radial,
            _ => return Err(bad_header("missing kind")),
        };
        let full = match field("system") {
            Some("full") => true,
            Some("reduced") => false,
            _ => return Err(bad_header("missing system")),
        };
        let mut dump = ConstraintDump { kind, full, xors: Vec::new(), transitivity: Vec::new() };
        for (i, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            let mut p = LineParser { g, chars: line.chars().collect(), at: 0, line: i + 1 };
            p.statement(&mut dump)?;
        }
        Ok(dump)
    }
}

struct LineParser<'a> {
    g: &'a LevelGraph,
    chars: Vec<char>,
    at: usize,
    line: usize,
}

impl LineParser<'_> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, IoError> {
        Err(IoError::Parse { line: self.line, msg: format!("column {}: {}", self.at + 1, msg.into()) })
    }

    fn skip_spaces(&mut self) {
        while self.chars.get(self.at) == Some(&' ') {
            self.at += 1;
        }
    }

    fn eat(&mut self, s: &str) -> bool {
        self.skip_spaces();
        let n = s.chars().count();
        if self.chars.get(self.at..self.at + n).is_some_and(|w| w.iter().copied().eq(s.chars())) {
            self.at += n;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<(), IoError> {
        if self.eat(s) {
            Ok(())
        } else {
            self.err(format!("expected '{s}'"))
        }
    }

    fn name(&mut self) -> Result<usize, IoError> {
        let mut name = String::new();
        while let Some(&c) = self.chars.get(self.at) {
            match c {
                '\\' => {
                    let Some(&next) = self.chars.get(self.at + 1) else { return self.err("dangling escape") };
                    name.push(next);
                    self.at += 2;
                }
                ',' | ')' => break,
                _ => {
                    name.push(c);
                    self.at += 1;
                }
            }
        }
        match self.g.vertex(&name) {
            Some(v) => Ok(v),
            None => Err(IoError::UnknownVertex(name)),
        }
    }

    fn var(&mut self) -> Result<BoolVar, IoError> {
        self.skip_spaces();
        let tag = self.chars.get(self.at).copied();
        if !matches!(tag, Some('x' | 'l')) || self.chars.get(self.at + 1) != Some(&'(') {
            return self.err("expected a variable");
        }
        self.at += 2;
        let mut ids = vec![self.name()?];
        while self.chars.get(self.at) == Some(&',') {
            self.at += 1;
            ids.push(self.name()?);
        }
        self.expect(")")?;
        match (tag, ids.as_slice()) {
            (Some('x'), &[u, w]) => Ok(BoolVar::Pair(u, w)),
            (Some('x'), &[a, u, v]) => Ok(BoolVar::Triple(a, u, v)),
            (Some('l'), &[t, h]) => Ok(BoolVar::Flag(t, h)),
            _ => self.err("wrong number of arguments"),
        }
    }

    fn bit(&mut self) -> Result<bool, IoError> {
        if self.eat("0") {
            Ok(false)
        } else if self.eat("1") {
            Ok(true)
        } else {
            self.err("expected 0 or 1")
        }
    }

    fn end(&mut self) -> Result<(), IoError> {
        self.skip_spaces();
        if self.at == self.chars.len() {
            Ok(())
        } else {
            self.err("trailing input")
        }
    }

    fn statement(&mut self, dump: &mut ConstraintDump) -> Result<(), IoError> {
        if self.eat("0") {
            self.expect("=")?;
            let parity = self.bit()?;
            dump.xors.push((Vec::new(), parity));
            return self.end();
        }
        let first = self.var()?;
        if self.eat("&") {
            let second = self.var()?;
            self.expect("->")?;
            let negated = self.eat("!");
            let third = self.var()?;
            dump.transitivity.push((first, second, third, negated));
            return self.end();
        }
        let mut vars = vec![first];
        while self.eat("+") {
            vars.push(self.var()?);
        }
        self.expect("=")?;
        let parity = self.bit()?;
        dump.xors.push((vars, parity));
        self.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraints::{build_level_full, build_radial_full, choose_reference_sets, SeedOrder};
    use crate::graph::ProperLevelGraph;

    fn graph(json: &str) -> ProperLevelGraph {
        ProperLevelGraph::new(parse_graph(json).unwrap()).unwrap()
    }

    const K22: &str = r#"{"levels":2,"vertices":[{"id":"a","level":1},{"id":"b","level":1},
        {"id":"c","level":2},{"id":"d","level":2}],"edges":[["a","c"],["a","d"],["b","c"],["b","d"]]}"#;

    #[test]
    fn graph_json_round_trip() {
        let g = graph(K22);
        let again = parse_graph(&graph_to_json(&g)).unwrap();
        assert_eq!(again.to_file(), g.to_file());
    }

    #[test]
    fn bad_json_is_an_error() {
        assert!(matches!(parse_graph("{"), Err(IoError::Json(_))));
        assert!(matches!(
            parse_graph(r#"{"levels":1,"vertices":[{"id":"a","level":3}],"edges":[]}"#),
            Err(IoError::Graph(_))
        ));
    }

    #[test]
    fn single_level_dump() {
        let g = graph(r#"{"levels":1,"vertices":[{"id":"a","level":1},{"id":"b","level":1}],"edges":[]}"#);
        let text = ConstraintDump::from_system(&build_level_full(&g)).to_text(&g);
        let body: Vec<&str> = text.lines().skip(1).collect();
        assert_eq!(body, vec!["x(a,b) + x(b,a) = 1"]);
    }

    #[test]
    fn dumps_round_trip() {
        let g = graph(K22);
        let dump = ConstraintDump::from_system(&build_level_full(&g));
        assert_eq!(ConstraintDump::parse(&dump.to_text(&g), &g).unwrap(), dump);
        let (refs, aug) = choose_reference_sets(&g, SeedOrder::Ascending).unwrap();
        let dump = ConstraintDump::from_system(&build_radial_full(&aug, &refs).unwrap());
        assert!(dump.xors.iter().flat_map(|x| &x.0).any(|v| matches!(v, BoolVar::Flag(..))));
        assert_eq!(ConstraintDump::parse(&dump.to_text(&aug), &aug).unwrap(), dump);
    }

    #[test]
    fn awkward_names_are_escaped() {
        let g = graph(
            r#"{"levels":1,"vertices":[{"id":"a b","level":1},{"id":"x(1,2)","level":1},{"id":"p\\q!","level":1}],"edges":[]}"#,
        );
        let dump = ConstraintDump::from_system(&build_level_full(&g));
        let text = dump.to_text(&g);
        assert!(text.contains(r"x(a\ b,x\(1\,2\))"));
        assert_eq!(ConstraintDump::parse(&text, &g).unwrap(), dump);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let g = graph(K22);
        let text = "# kind=level system=reduced\nx(a,b) + x(b,a) = 1\nx(a,b) + = 1\n";
        assert!(matches!(ConstraintDump::parse(text, &g), Err(IoError::Parse { line: 3, .. })));
        let text = "# kind=level system=reduced\nx(a,zz) = 1\n";
        assert!(matches!(ConstraintDump::parse(text, &g), Err(IoError::UnknownVertex(_))));
    }

    #[test]
    fn drawing_files_round_trip() {
        let g = graph(K22);
        let d = LevelDrawing { orders: vec![vec![1, 0], vec![2, 3]] };
        let file = DrawingFile::from_level(&g, &d);
        let again = DrawingFile::parse(&file.to_json()).unwrap();
        assert_eq!(again, file);
        assert_eq!(again.to_level(&g).unwrap(), d);
        assert!(matches!(again.to_radial(&g), Err(IoError::Kind { .. })));

        let (refs, aug) = choose_reference_sets(&g, SeedOrder::Ascending).unwrap();
        let mut flags = vec![None; aug.num_edges()];
        flags[1] = Some(true);
        let r = RadialDrawing { orders: vec![vec![0, 1], vec![3, 2]], flags };
        let file = DrawingFile::from_radial(&aug, &r, Some(&refs));
        let json = file.to_json();
        assert!(json.contains("\"a->d\": 1"));
        let (back, back_refs) = DrawingFile::parse(&json).unwrap().to_radial(&aug).unwrap();
        assert_eq!(back, r);
        assert_eq!(back_refs.unwrap().plus, refs.plus);
    }

    #[test]
    fn drawing_file_rejects_unknown_names() {
        let g = graph(K22);
        let text = r#"{"kind":"level","orders":{"1":["a","zz"],"2":["c","d"]}}"#;
        assert!(matches!(DrawingFile::parse(text).unwrap().to_level(&g), Err(IoError::UnknownVertex(_))));
        let text = r#"{"kind":"level","orders":{"1":["a","b"],"5":["c","d"]}}"#;
        assert!(matches!(DrawingFile::parse(text).unwrap().to_level(&g), Err(IoError::BadLevel(5))));
    }
}
