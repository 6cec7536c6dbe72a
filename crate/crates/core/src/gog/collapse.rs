use std::collections::{BTreeMap, BTreeSet};

use crate::invariants::{FinitePresentation, Word};

use super::graph::{require_valid, Edge, End, GraphOfGroups, Vertex};
use super::label::{Element, GroupLabel};
use super::GogError;

/// Where each piece of the graph lives in its fundamental presentation.
#[derive(Clone, Debug)]
pub struct PresentationLayout {
    /// First generator index of each vertex group.
    pub vertex_offsets: Vec<usize>,
    /// Stable letter of each edge outside the spanning tree.
    pub stable_letters: BTreeMap<usize, usize>,
}

impl PresentationLayout {
    /// An element of vertex `v` as a word in the fundamental presentation.
    pub fn vertex_word(&self, g: &GraphOfGroups, v: usize, e: &Element) -> Option<Word> {
        let off = self.vertex_offsets[v];
        Some(g.vertices()[v].label.element_to_word(e)?.rename(|i| i + off))
    }
}

fn sanitize(s: &str) -> String {
    let mut out: String = s.chars().map(|c| if c.is_ascii_alphanumeric() || c == '_' { c } else { '_' }).collect();
    if !out.starts_with(|c: char| c.is_ascii_alphabetic() || c == '_') {
        out.insert(0, 'v');
    }
    out
}

/// Bass–Serre presentation of `π1(g)` relative to a spanning tree:
/// vertex generators, then one stable letter per edge outside the tree.
pub fn fundamental_presentation(g: &GraphOfGroups, tree: &[usize]) -> Result<FinitePresentation, GogError> {
    Ok(fundamental_presentation_with_layout(g, tree)?.0)
}

pub fn fundamental_presentation_with_layout(
    g: &GraphOfGroups,
    tree: &[usize],
) -> Result<(FinitePresentation, PresentationLayout), GogError> {
    if !g.is_spanning_tree(tree) {
        return Err(GogError::InvalidInput("edge set is not a spanning tree".into()));
    }
    let mut presentations = Vec::new();
    for v in g.vertices() {
        let p = v.label.presentation().ok_or_else(|| GogError::Unpresentable(v.name.clone()))?;
        presentations.push(p);
    }
    if let Some(e) = g.edges().iter().find(|e| e.label.is_opaque()) {
        return Err(GogError::Unpresentable(e.name.clone()));
    }
    let tree_set: BTreeSet<usize> = tree.iter().copied().collect();
    let stable_edges: Vec<usize> = (0..g.edges().len()).filter(|i| !tree_set.contains(i)).collect();

    // plain names where they are unique, prefixed by their owner otherwise
    let mut candidates: Vec<(String, String)> = Vec::new();
    for (v, p) in g.vertices().iter().zip(&presentations) {
        for n in p.generator_names() {
            candidates.push((n.clone(), format!("{}_{n}", sanitize(&v.name))));
        }
    }
    for &i in &stable_edges {
        let n = sanitize(&g.edges()[i].name);
        candidates.push((n.clone(), format!("t_{n}")));
    }
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for (plain, _) in &candidates {
        *counts.entry(plain.as_str()).or_default() += 1;
    }
    let mut names: Vec<String> = Vec::new();
    let mut used = BTreeSet::new();
    for (plain, prefixed) in &candidates {
        let mut name = if counts[plain.as_str()] == 1 { plain.clone() } else { prefixed.clone() };
        let base = name.clone();
        let mut k = 2;
        while !used.insert(name.clone()) {
            name = format!("{base}_{k}");
            k += 1;
        }
        names.push(name);
    }

    let mut vertex_offsets = Vec::new();
    let mut relations = Vec::new();
    let mut off = 0;
    for p in &presentations {
        vertex_offsets.push(off);
        relations.extend(p.relations().iter().map(|r| r.rename(|i| i + off)));
        off += p.generator_count();
    }
    let stable_letters: BTreeMap<usize, usize> = stable_edges.iter().enumerate().map(|(k, &i)| (i, off + k)).collect();
    let layout = PresentationLayout { vertex_offsets, stable_letters };

    for (i, e) in g.edges().iter().enumerate() {
        for k in 0..e.label.generator_count() {
            let word_at = |end: End| {
                layout
                    .vertex_word(g, e.endpoint(end), &e.map(end)[k])
                    .ok_or_else(|| GogError::InvalidInput(format!("edge {} image {} is not expressible", e.name, k + 1)))
            };
            let (u, w) = (word_at(End::From)?, word_at(End::To)?);
            let rel = match layout.stable_letters.get(&i) {
                None => u.mul(&w.inverse()),
                Some(&t) => u.conjugate_by(&Word::generator(t)).mul(&w.inverse()),
            };
            if !rel.is_identity() {
                relations.push(rel);
            }
        }
    }
    Ok((FinitePresentation::new(names, relations), layout))
}

/// Collapses each connected component of the chosen edges to one vertex.
///
/// A component whose groups are all presentable becomes a `PRESENTED` vertex
/// carrying the fundamental presentation of the component (spanning tree
/// chosen breadth-first by lowest edge index). A component containing an
/// opaque group becomes an opaque vertex; maps into it are kept as tokens
/// `vertex:word` naming the original element.
pub fn collapse(g: &GraphOfGroups, edges: &[usize]) -> Result<GraphOfGroups, GogError> {
    require_valid(g)?;
    let chosen: BTreeSet<usize> = edges.iter().copied().collect();
    if let Some(&bad) = chosen.iter().find(|&&i| i >= g.edges().len()) {
        return Err(GogError::InvalidInput(format!("no edge with index {bad}")));
    }
    if chosen.is_empty() {
        return Ok(g.clone());
    }
    let chosen_list: Vec<usize> = chosen.iter().copied().collect();
    let comp = g.components(&chosen_list);
    let mut roots: Vec<usize> = comp.clone();
    roots.sort_unstable();
    roots.dedup();
    let new_index: BTreeMap<usize, usize> = roots.iter().enumerate().map(|(k, &r)| (r, k)).collect();

    // per old vertex: its new vertex and how to translate its elements
    let mut translate: Vec<Option<Translation>> = vec![None; g.vertices().len()];
    let mut vertices = Vec::new();
    for &root in &roots {
        let members: Vec<usize> = (0..g.vertices().len()).filter(|&v| comp[v] == root).collect();
        let inner: Vec<usize> = chosen_list.iter().copied().filter(|&i| comp[g.edges()[i].from] == root).collect();
        if inner.is_empty() {
            vertices.push(g.vertices()[root].clone());
            continue;
        }
        let name = members.iter().map(|&v| g.vertices()[v].name.as_str()).collect::<Vec<_>>().join("+");
        let sub = subgraph(g, &members, &inner);
        let opaque = sub.vertices().iter().any(|v| v.label.is_opaque()) || sub.edges().iter().any(|e| e.label.is_opaque());
        if opaque {
            let mut props = BTreeSet::new();
            for v in sub.vertices() {
                if let GroupLabel::Opaque { props: p, .. } = &v.label {
                    // these pass from a subgroup to the whole group
                    for key in ["infinite", "non-abelian", "non-cyclic"] {
                        if p.contains(key) {
                            props.insert(key.to_string());
                        }
                    }
                }
            }
            let label = GroupLabel::Opaque { name: format!("pi1({name})"), props };
            vertices.push(Vertex { name, label });
            for &v in &members {
                translate[v] = Some(Translation::Token(g.vertices()[v].name.clone()));
            }
        } else {
            let tree = sub.default_spanning_tree();
            let (p, layout) = fundamental_presentation_with_layout(&sub, &tree)?;
            vertices.push(Vertex { name, label: GroupLabel::Presented(p) });
            for (k, &v) in members.iter().enumerate() {
                translate[v] = Some(Translation::Shift(layout.vertex_offsets[k]));
            }
        }
    }

    let mut new_edges = Vec::new();
    for (i, e) in g.edges().iter().enumerate() {
        if chosen.contains(&i) {
            continue;
        }
        let mut ne: Edge = e.clone();
        for end in End::BOTH {
            let old = e.endpoint(end);
            let new = new_index[&comp[old]];
            match end {
                End::From => ne.from = new,
                End::To => ne.to = new,
            }
            if let Some(t) = &translate[old] {
                let label = &g.vertices()[old].label;
                let images: Option<Vec<Element>> = e.map(end).iter().map(|x| t.apply(label, x)).collect();
                *ne.map_mut(end) = images
                    .ok_or_else(|| GogError::InvalidInput(format!("edge {} has an inexpressible image", e.name)))?;
            }
        }
        new_edges.push(ne);
    }
    Ok(GraphOfGroups::new(vertices, new_edges))
}

#[derive(Clone, Debug)]
enum Translation {
    Shift(usize),
    Token(String),
}

impl Translation {
    fn apply(&self, label: &GroupLabel, x: &Element) -> Option<Element> {
        match self {
            Translation::Shift(off) => Some(Element::Word(label.element_to_word(x)?.rename(|i| i + off))),
            Translation::Token(vertex) => {
                let inner = match x {
                    Element::Token(t) => t.clone(),
                    _ => {
                        let names = label.generator_names();
                        label.element_to_word(x)?.display(&names).to_string()
                    }
                };
                Some(Element::Token(format!("{vertex}:{inner}")))
            }
        }
    }
}

/// The sub-graph of groups on `members` with the given edges, reindexed.
pub fn subgraph(g: &GraphOfGroups, members: &[usize], edges: &[usize]) -> GraphOfGroups {
    let pos: BTreeMap<usize, usize> = members.iter().enumerate().map(|(k, &v)| (v, k)).collect();
    let vertices = members.iter().map(|&v| g.vertices()[v].clone()).collect();
    let edges = edges
        .iter()
        .map(|&i| {
            let mut e = g.edges()[i].clone();
            e.from = pos[&e.from];
            e.to = pos[&e.to];
            e
        })
        .collect();
    GraphOfGroups::new(vertices, edges)
}
