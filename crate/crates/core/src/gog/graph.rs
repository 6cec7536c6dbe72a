use std::collections::BTreeMap;
use std::fmt;

use super::label::{injective, Element, GroupLabel, TriState};
use super::GogError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub name: String,
    pub label: GroupLabel,
}

/// An edge `from -- to`. `from_map[i]` and `to_map[i]` are the images of the
/// i-th generator of the edge group in the endpoint groups. A loop has
/// `from == to`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub name: String,
    pub label: GroupLabel,
    pub from: usize,
    pub to: usize,
    pub from_map: Vec<Element>,
    pub to_map: Vec<Element>,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.from == self.to
    }

    pub fn endpoint(&self, end: End) -> usize {
        match end {
            End::From => self.from,
            End::To => self.to,
        }
    }

    pub fn map(&self, end: End) -> &[Element] {
        match end {
            End::From => &self.from_map,
            End::To => &self.to_map,
        }
    }

    pub fn map_mut(&mut self, end: End) -> &mut Vec<Element> {
        match end {
            End::From => &mut self.from_map,
            End::To => &mut self.to_map,
        }
    }

    pub fn reversed(&self) -> Edge {
        Edge {
            name: self.name.clone(),
            label: self.label.clone(),
            from: self.to,
            to: self.from,
            from_map: self.to_map.clone(),
            to_map: self.from_map.clone(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum End {
    From,
    To,
}

impl End {
    pub const BOTH: [End; 2] = [End::From, End::To];

    pub fn other(self) -> End {
        match self {
            End::From => End::To,
            End::To => End::From,
        }
    }
}

impl fmt::Display for End {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            End::From => "from",
            End::To => "to",
        })
    }
}

/// A finite graph of groups. Values are immutable once built; operations
/// return new graphs.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GraphOfGroups {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
}

impl GraphOfGroups {
    pub fn new(vertices: Vec<Vertex>, edges: Vec<Edge>) -> Self {
        GraphOfGroups { vertices, edges }
    }

    pub fn single(name: &str, label: GroupLabel) -> Self {
        GraphOfGroups::new(vec![Vertex { name: name.into(), label }], vec![])
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v.name == name)
    }

    pub fn edge_index(&self, name: &str) -> Option<usize> {
        self.edges.iter().position(|e| e.name == name)
    }

    /// Incident edge ends `(edge, end)` at `v`; a loop contributes both ends.
    pub fn incident(&self, v: usize) -> Vec<(usize, End)> {
        let mut out = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            for end in End::BOTH {
                if e.endpoint(end) == v {
                    out.push((i, end));
                }
            }
        }
        out
    }

    /// Valence with loops counted twice.
    pub fn valence(&self, v: usize) -> usize {
        self.incident(v).len()
    }

    pub fn has_loop_at(&self, v: usize) -> bool {
        self.edges.iter().any(|e| e.is_loop() && e.from == v)
    }

    pub fn is_connected(&self) -> bool {
        if self.vertices.is_empty() {
            return false;
        }
        let comps = self.components(&(0..self.edges.len()).collect::<Vec<_>>());
        comps.iter().all(|&c| c == comps[0])
    }

    /// Component id of each vertex in the subgraph with the given edges.
    pub fn components(&self, edges: &[usize]) -> Vec<usize> {
        let n = self.vertices.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let next = p[y];
                p[y] = r;
                y = next;
            }
            r
        }
        for &i in edges {
            let e = &self.edges[i];
            let (a, b) = (find(&mut parent, e.from), find(&mut parent, e.to));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        (0..n).map(|v| find(&mut parent, v)).collect()
    }

    /// Whether `tree` is a spanning tree.
    pub fn is_spanning_tree(&self, tree: &[usize]) -> bool {
        let mut sorted = tree.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != tree.len() || tree.len() + 1 != self.vertices.len() {
            return false;
        }
        if tree.iter().any(|&i| i >= self.edges.len() || self.edges[i].is_loop()) {
            return false;
        }
        let comps = self.components(tree);
        comps.iter().all(|&c| c == comps[0])
    }

    /// Breadth-first spanning tree preferring lower edge indices.
    pub fn default_spanning_tree(&self) -> Vec<usize> {
        let n = self.vertices.len();
        let mut seen = vec![false; n];
        let mut tree = Vec::new();
        if n == 0 {
            return tree;
        }
        let mut queue = std::collections::VecDeque::from([0]);
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            for (i, e) in self.edges.iter().enumerate() {
                for end in End::BOTH {
                    if e.endpoint(end) == v && !seen[e.endpoint(end.other())] {
                        let w = e.endpoint(end.other());
                        seen[w] = true;
                        tree.push(i);
                        queue.push_back(w);
                    }
                }
            }
        }
        tree.sort_unstable();
        tree
    }

    /// Every spanning tree, as sorted edge index lists.
    pub fn spanning_trees(&self) -> Vec<Vec<usize>> {
        let k = self.vertices.len().saturating_sub(1);
        let candidates: Vec<usize> = (0..self.edges.len()).filter(|&i| !self.edges[i].is_loop()).collect();
        let mut out = Vec::new();
        let mut chosen = Vec::new();
        fn rec(g: &GraphOfGroups, cands: &[usize], start: usize, k: usize, chosen: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if chosen.len() == k {
                if g.is_spanning_tree(chosen) {
                    out.push(chosen.clone());
                }
                return;
            }
            for i in start..cands.len() {
                chosen.push(cands[i]);
                rec(g, cands, i + 1, k, chosen, out);
                chosen.pop();
            }
        }
        rec(self, &candidates, 0, k, &mut chosen, &mut out);
        out
    }

    /// Renames vertices and edges; labels and maps are untouched.
    pub fn renamed(&self, vertex_names: &[String], edge_names: &[String]) -> Self {
        let mut g = self.clone();
        for (v, n) in g.vertices.iter_mut().zip(vertex_names) {
            v.name = n.clone();
        }
        for (e, n) in g.edges.iter_mut().zip(edge_names) {
            e.name = n.clone();
        }
        g
    }

    /// Reorders vertices by `perm` (old index `i` goes to `perm[i]`) and edges by `edge_perm`.
    pub fn permuted(&self, perm: &[usize], edge_perm: &[usize]) -> Self {
        let mut vertices = self.vertices.clone();
        for (i, v) in self.vertices.iter().enumerate() {
            vertices[perm[i]] = v.clone();
        }
        let mut edges = self.edges.clone();
        for (i, e) in self.edges.iter().enumerate() {
            let mut e = e.clone();
            e.from = perm[e.from];
            e.to = perm[e.to];
            edges[edge_perm[i]] = e;
        }
        GraphOfGroups { vertices, edges }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Severity {
    Error,
    Unchecked,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DiagnosticKind {
    Disconnected,
    DuplicateName,
    BadEndpoint,
    ArityMismatch,
    WellTyped,
    RelationFailure,
    NotInjective,
    Unchecked,
}

impl DiagnosticKind {
    pub fn code(self) -> &'static str {
        match self {
            DiagnosticKind::Disconnected => "DISCONNECTED",
            DiagnosticKind::DuplicateName => "DUPLICATE_NAME",
            DiagnosticKind::BadEndpoint => "BAD_ENDPOINT",
            DiagnosticKind::ArityMismatch => "ARITY_MISMATCH",
            DiagnosticKind::WellTyped => "WELL_TYPED",
            DiagnosticKind::RelationFailure => "RELATION_FAILURE",
            DiagnosticKind::NotInjective => "NOT_INJECTIVE",
            DiagnosticKind::Unchecked => "UNCHECKED",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub kind: DiagnosticKind,
    /// `edge:end`, a vertex name, or empty for graph-level findings.
    pub location: String,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Unchecked => "unchecked",
        };
        write!(f, "{sev} {} {}: {}", self.kind.code(), self.location, self.message)
    }
}

fn error(kind: DiagnosticKind, location: String, message: String) -> Diagnostic {
    Diagnostic { severity: Severity::Error, kind, location, message }
}

fn unchecked(location: String, message: String) -> Diagnostic {
    Diagnostic { severity: Severity::Unchecked, kind: DiagnosticKind::Unchecked, location, message }
}

/// Structural and algebraic checks. Findings that cannot be decided are
/// reported as `Unchecked`, not as errors.
pub fn validate(g: &GraphOfGroups) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let mut seen = BTreeMap::new();
    for v in &g.vertices {
        if seen.insert(v.name.as_str(), ()).is_some() {
            out.push(error(DiagnosticKind::DuplicateName, v.name.clone(), "vertex name used twice".into()));
        }
    }
    let mut seen_edges = BTreeMap::new();
    for e in &g.edges {
        if seen_edges.insert(e.name.as_str(), ()).is_some() {
            out.push(error(DiagnosticKind::DuplicateName, e.name.clone(), "edge name used twice".into()));
        }
    }
    let n = g.vertices.len();
    let mut endpoints_ok = true;
    for e in &g.edges {
        if e.from >= n || e.to >= n {
            out.push(error(DiagnosticKind::BadEndpoint, e.name.clone(), "endpoint out of range".into()));
            endpoints_ok = false;
        }
    }
    if n == 0 {
        out.push(error(DiagnosticKind::Disconnected, String::new(), "graph has no vertices".into()));
    } else if endpoints_ok && !g.is_connected() {
        out.push(error(DiagnosticKind::Disconnected, String::new(), "underlying graph is not connected".into()));
    }
    if !endpoints_ok {
        return out;
    }
    for e in &g.edges {
        for end in End::BOTH {
            let target = &g.vertices[e.endpoint(end)].label;
            out.extend(check_map(&e.label, e.map(end), target, &format!("{}:{end}", e.name)));
        }
    }
    out
}

/// Checks one edge map; at most one error is reported for an ill-typed map.
pub fn check_map(source: &GroupLabel, images: &[Element], target: &GroupLabel, loc: &str) -> Vec<Diagnostic> {
    let expected = source.generator_count();
    if images.len() != expected {
        return vec![error(
            DiagnosticKind::ArityMismatch,
            loc.into(),
            format!("{} images for {expected} generators", images.len()),
        )];
    }
    for (i, img) in images.iter().enumerate() {
        if let Err(msg) = target.well_typed(img) {
            return vec![error(DiagnosticKind::WellTyped, loc.into(), format!("image {}: {msg}", i + 1))];
        }
    }
    let mut out = Vec::new();
    match relations_hold(source, images, target) {
        TriState::Yes => {}
        TriState::No => {
            out.push(error(DiagnosticKind::RelationFailure, loc.into(), "a relation of the edge group is not preserved".into()));
            return out;
        }
        TriState::Unknown => out.push(unchecked(loc.into(), "relations could not be checked".into())),
    }
    match injective(source, images, target) {
        TriState::Yes => {}
        TriState::No => out.push(error(DiagnosticKind::NotInjective, loc.into(), "edge map is not injective".into())),
        TriState::Unknown => {
            if out.is_empty() {
                out.push(unchecked(loc.into(), "injectivity could not be checked".into()));
            }
        }
    }
    out
}

/// Whether every defining relation of `source` maps to the identity.
pub fn relations_hold(source: &GroupLabel, images: &[Element], target: &GroupLabel) -> TriState {
    let Some(p) = source.presentation() else { return TriState::Unknown };
    TriState::all(p.relations().iter().map(|r| match target.eval(r, images) {
        Some(x) => target.is_identity(&x),
        None => TriState::Unknown,
    }))
}

/// Fails with `InvalidInput` if `validate` reports an error.
pub fn require_valid(g: &GraphOfGroups) -> Result<(), GogError> {
    match validate(g).into_iter().find(|d| d.severity == Severity::Error) {
        Some(d) => Err(GogError::InvalidInput(d.to_string())),
        None => Ok(()),
    }
}
