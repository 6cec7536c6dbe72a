//! The `.gog` text format.
//!
//! ```text
//! gog/1
//! # comments run to the end of the line
//! [meta]
//! name = theta0
//! note = free text, may repeat
//!
//! [groups]
//! H = heisenberg full
//! W = opaque G_w hyperbolic torsion-free
//! Z = abelian 1
//!
//! [vertices]
//! v = H
//! w = W
//!
//! [edge e1]
//! group = Z
//! from = v
//! to = w
//! from-map = (0, 1, 0)
//! to-map = p
//! ```
//!
//! Group specs: `abelian <m> [/ (r), (r), ...]`, `free <r>`,
//! `heisenberg full | hn <n> | center | derived <n> | cyclic (x, y, z)`,
//! `presented <gens | relations>`, `opaque <name> [property ...]`.
//!
//! Map images are separated by top-level commas and written in the
//! endpoint's own syntax: `(a, b, ...)` for abelian groups, `(x, y, z)` for
//! Heisenberg elements, words like `x^2 y^-1` (identity `1`) for free and
//! presented groups, a bare token for opaque groups.
//!
//! Serialization is canonical: groups sorted by id, vertices and edges in
//! graph order, comments dropped, one space around `=`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};

use num_bigint::BigInt;

use crate::gog::{Edge, Element, GraphOfGroups, GroupLabel, Vertex};
use crate::invariants::{FinitePresentation, ParseError};
use crate::lattice::{LatticeGroup, Vector};
use crate::polycyclic::{HeisElement, HeisSubgroupDesc};

pub const HEADER: &str = "gog/1";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DocError {
    pub line: usize,
    pub column: usize,
    pub reason: String,
}

impl fmt::Display for DocError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.reason)
    }
}

impl std::error::Error for DocError {}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Mode {
    /// Unknown sections and keys are errors.
    #[default]
    Strict,
    /// Unknown sections and keys are kept and written back unchanged.
    Lenient,
}

/// A line kept in lenient mode, with the section it appeared in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtraLine {
    pub section: String,
    pub key: String,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GogDocument {
    pub name: Option<String>,
    pub notes: Vec<String>,
    pub groups: BTreeMap<String, GroupLabel>,
    pub vertex_groups: Vec<String>,
    pub edge_groups: Vec<String>,
    pub graph: GraphOfGroups,
    pub extra: Vec<ExtraLine>,
}

impl GogDocument {
    /// Wraps a graph, naming each distinct label by its kind and position.
    pub fn from_graph(name: Option<&str>, graph: &GraphOfGroups) -> GogDocument {
        let mut groups: BTreeMap<String, GroupLabel> = BTreeMap::new();
        let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
        let mut id_of = |label: &GroupLabel| -> String {
            if let Some((id, _)) = groups.iter().find(|(_, l)| *l == label) {
                return id.clone();
            }
            let prefix = match label {
                GroupLabel::Abelian(_) => "A",
                GroupLabel::Heisenberg(_) => "H",
                GroupLabel::Free(_) => "F",
                GroupLabel::Presented(_) => "P",
                GroupLabel::Opaque { .. } => "O",
            };
            let k = counts.entry(prefix).or_default();
            *k += 1;
            let id = format!("{prefix}{k}");
            groups.insert(id.clone(), label.clone());
            id
        };
        let vertex_groups = graph.vertices().iter().map(|v| id_of(&v.label)).collect();
        let edge_groups = graph.edges().iter().map(|e| id_of(&e.label)).collect();
        GogDocument {
            name: name.map(str::to_string),
            notes: vec![],
            groups,
            vertex_groups,
            edge_groups,
            graph: graph.clone(),
            extra: vec![],
        }
    }

    pub fn parse(text: &str, mode: Mode) -> Result<GogDocument, DocError> {
        Reader::new(mode).read(text)
    }

    pub fn serialize(&self) -> String {
        let mut out = String::new();
        out.push_str(HEADER);
        out.push('\n');
        out.push_str("\n[meta]\n");
        if let Some(n) = &self.name {
            let _ = writeln!(out, "name = {n}");
        }
        for n in &self.notes {
            let _ = writeln!(out, "note = {n}");
        }
        self.write_extra(&mut out, "meta");
        out.push_str("\n[groups]\n");
        for (id, label) in &self.groups {
            let _ = writeln!(out, "{id} = {}", group_spec(label));
        }
        self.write_extra(&mut out, "groups");
        out.push_str("\n[vertices]\n");
        for (v, id) in self.graph.vertices().iter().zip(&self.vertex_groups) {
            let _ = writeln!(out, "{} = {id}", v.name);
        }
        self.write_extra(&mut out, "vertices");
        for (e, id) in self.graph.edges().iter().zip(&self.edge_groups) {
            let _ = writeln!(out, "\n[edge {}]", e.name);
            let _ = writeln!(out, "group = {id}");
            let _ = writeln!(out, "from = {}", self.graph.vertices()[e.from].name);
            let _ = writeln!(out, "to = {}", self.graph.vertices()[e.to].name);
            let from = &self.graph.vertices()[e.from].label;
            let to = &self.graph.vertices()[e.to].label;
            let _ = writeln!(out, "from-map = {}", images_text(from, &e.from_map));
            let _ = writeln!(out, "to-map = {}", images_text(to, &e.to_map));
            self.write_extra(&mut out, &format!("edge {}", e.name));
        }
        let known: BTreeSet<String> = known_sections(&self.graph);
        let mut unknown: Vec<&str> = Vec::new();
        for x in &self.extra {
            if !known.contains(&x.section) && !unknown.contains(&x.section.as_str()) {
                unknown.push(&x.section);
            }
        }
        for s in unknown {
            let _ = writeln!(out, "\n[{s}]");
            self.write_extra(&mut out, s);
        }
        out
    }

    fn write_extra(&self, out: &mut String, section: &str) {
        for x in self.extra.iter().filter(|x| x.section == section) {
            let _ = writeln!(out, "{} = {}", x.key, x.value);
        }
    }
}

fn known_sections(g: &GraphOfGroups) -> BTreeSet<String> {
    let mut s: BTreeSet<String> = ["meta", "groups", "vertices"].iter().map(|s| s.to_string()).collect();
    s.extend(g.edges().iter().map(|e| format!("edge {}", e.name)));
    s
}

pub fn group_spec(label: &GroupLabel) -> String {
    match label {
        GroupLabel::Abelian(g) => {
            let rows: Vec<String> = g.relations().basis().iter().map(|r| tuple(r)).collect();
            if rows.is_empty() {
                format!("abelian {}", g.ambient_rank())
            } else {
                format!("abelian {} / {}", g.ambient_rank(), rows.join(", "))
            }
        }
        GroupLabel::Free(r) => format!("free {r}"),
        GroupLabel::Heisenberg(d) => match d {
            HeisSubgroupDesc::Full => "heisenberg full".into(),
            HeisSubgroupDesc::Hn(n) => format!("heisenberg hn {n}"),
            HeisSubgroupDesc::Center => "heisenberg center".into(),
            HeisSubgroupDesc::DerivedOfHn(n) => format!("heisenberg derived {n}"),
            HeisSubgroupDesc::Cyclic(h) => format!("heisenberg cyclic {}", heis_tuple(h)),
        },
        GroupLabel::Presented(p) => format!("presented {p}"),
        GroupLabel::Opaque { name, props } => {
            let mut s = format!("opaque {name}");
            for p in props {
                s.push(' ');
                s.push_str(p);
            }
            s
        }
    }
}

fn tuple(v: &[BigInt]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(", "))
}

fn heis_tuple(h: &HeisElement) -> String {
    format!("({}, {}, {})", h.x, h.y, h.z)
}

pub fn element_text(target: &GroupLabel, e: &Element) -> String {
    match e {
        Element::Vector(v) => tuple(v),
        Element::Heis(h) => heis_tuple(h),
        Element::Word(w) => w.display(&target.generator_names()).to_string(),
        Element::Token(t) => t.clone(),
    }
}

pub fn images_text(target: &GroupLabel, images: &[Element]) -> String {
    images.iter().map(|e| element_text(target, e)).collect::<Vec<_>>().join(", ")
}

/// Splits at commas outside brackets, reporting each piece with its byte offset.
fn split_top(s: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' | '<' => depth += 1,
            ')' | ']' | '>' => depth -= 1,
            ',' if depth == 0 => {
                out.push((start, &s[start..i]));
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push((start, &s[start..]));
    out.into_iter()
        .map(|(off, piece)| {
            let lead = piece.len() - piece.trim_start().len();
            (off + lead, piece.trim())
        })
        .collect()
}

/// A value and where it starts in the source.
#[derive(Clone, Debug)]
struct Located {
    line: usize,
    column: usize,
    text: String,
}

impl Located {
    fn err(&self, offset: usize, reason: impl Into<String>) -> DocError {
        DocError { line: self.line, column: self.column + offset, reason: reason.into() }
    }
}

fn parse_int<T: std::str::FromStr>(loc: &Located, offset: usize, s: &str) -> Result<T, DocError> {
    s.trim().parse().map_err(|_| loc.err(offset, format!("expected an integer, found {:?}", s.trim())))
}

/// `(a, b, ...)` starting at `offset` within `loc`.
fn parse_tuple(loc: &Located, offset: usize, s: &str) -> Result<Vector, DocError> {
    let t = s.trim();
    if !t.starts_with('(') || !t.ends_with(')') {
        return Err(loc.err(offset, format!("expected a tuple like (1, 0), found {t:?}")));
    }
    let inner = &t[1..t.len() - 1];
    if inner.trim().is_empty() {
        return Ok(vec![]);
    }
    split_top(inner)
        .into_iter()
        .map(|(o, p)| parse_int::<BigInt>(loc, offset + 1 + o, p))
        .collect()
}

fn parse_group(loc: &Located) -> Result<GroupLabel, DocError> {
    let text = loc.text.as_str();
    let (kind, rest) = text.split_once(char::is_whitespace).unwrap_or((text, ""));
    let rest_off = text.len() - rest.len();
    let rest = rest.trim();
    match kind {
        "abelian" => {
            let (m, rels) = rest.split_once('/').unwrap_or((rest, ""));
            let m: usize = parse_int(loc, rest_off, m)?;
            let mut rows = Vec::new();
            if !rels.trim().is_empty() {
                let off = text.find('/').unwrap_or(0) + 1;
                for (o, r) in split_top(rels) {
                    let row = parse_tuple(loc, off + o, r)?;
                    if row.len() != m {
                        return Err(loc.err(off + o, format!("relation has {} entries, expected {m}", row.len())));
                    }
                    rows.push(row);
                }
            }
            LatticeGroup::new(m, &rows).map(GroupLabel::Abelian).map_err(|e| loc.err(0, e.to_string()))
        }
        "free" => Ok(GroupLabel::Free(parse_int(loc, rest_off, rest)?)),
        "heisenberg" => {
            let (sub, arg) = rest.split_once(char::is_whitespace).unwrap_or((rest, ""));
            let arg_off = text.len() - arg.len();
            let desc = match sub {
                "full" => HeisSubgroupDesc::Full,
                "center" => HeisSubgroupDesc::Center,
                "hn" | "derived" => {
                    let n: u64 = parse_int(loc, arg_off, arg)?;
                    if n == 0 {
                        return Err(loc.err(arg_off, "parameter must be positive"));
                    }
                    if sub == "hn" {
                        HeisSubgroupDesc::Hn(n)
                    } else {
                        HeisSubgroupDesc::DerivedOfHn(n)
                    }
                }
                "cyclic" => {
                    let v = parse_tuple(loc, arg_off, arg)?;
                    if v.len() != 3 {
                        return Err(loc.err(arg_off, "a Heisenberg element has three coordinates"));
                    }
                    HeisSubgroupDesc::Cyclic(HeisElement::new(v[0].clone(), v[1].clone(), v[2].clone()))
                }
                other => return Err(loc.err(rest_off, format!("unknown Heisenberg subgroup {other:?}"))),
            };
            Ok(GroupLabel::Heisenberg(desc))
        }
        "presented" => FinitePresentation::parse(rest)
            .map(GroupLabel::Presented)
            .map_err(|e| presentation_error(loc, rest_off, &e)),
        "opaque" => {
            let mut parts = rest.split_whitespace();
            let name = parts.next().ok_or_else(|| loc.err(rest_off, "opaque group needs a name"))?;
            Ok(GroupLabel::Opaque { name: name.into(), props: parts.map(str::to_string).collect() })
        }
        other => Err(loc.err(0, format!("unknown group kind {other:?}"))),
    }
}

fn presentation_error(loc: &Located, offset: usize, e: &ParseError) -> DocError {
    match e {
        ParseError::Syntax { pos, msg } => loc.err(offset + pos, msg.clone()),
        other => loc.err(offset, other.to_string()),
    }
}

fn parse_element(target: &GroupLabel, loc: &Located, offset: usize, s: &str) -> Result<Element, DocError> {
    match target {
        GroupLabel::Abelian(_) => Ok(Element::Vector(parse_tuple(loc, offset, s)?)),
        GroupLabel::Heisenberg(_) => {
            let v = parse_tuple(loc, offset, s)?;
            if v.len() != 3 {
                return Err(loc.err(offset, "a Heisenberg element has three coordinates"));
            }
            Ok(Element::Heis(HeisElement::new(v[0].clone(), v[1].clone(), v[2].clone())))
        }
        GroupLabel::Free(_) | GroupLabel::Presented(_) => {
            let alphabet = FinitePresentation::new(target.generator_names(), vec![]);
            alphabet.parse_word(s).map(Element::Word).map_err(|e| presentation_error(loc, offset, &e))
        }
        GroupLabel::Opaque { .. } => {
            if s.is_empty() || s.contains(char::is_whitespace) && s.contains(',') {
                return Err(loc.err(offset, "expected a token"));
            }
            Ok(Element::Token(s.to_string()))
        }
    }
}

fn parse_images(target: &GroupLabel, loc: &Located) -> Result<Vec<Element>, DocError> {
    if loc.text.trim().is_empty() {
        return Ok(vec![]);
    }
    split_top(&loc.text).into_iter().map(|(o, p)| parse_element(target, loc, o, p)).collect()
}

#[derive(Default)]
struct RawEdge {
    name: String,
    header: (usize, usize),
    group: Option<Located>,
    from: Option<Located>,
    to: Option<Located>,
    from_map: Option<Located>,
    to_map: Option<Located>,
}

struct Reader {
    mode: Mode,
    doc: GogDocument,
    vertices: Vec<(String, Located)>,
    edges: Vec<RawEdge>,
}

impl Reader {
    fn new(mode: Mode) -> Self {
        Reader { mode, doc: GogDocument::default(), vertices: vec![], edges: vec![] }
    }

    fn read(mut self, text: &str) -> Result<GogDocument, DocError> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
        let header = lines.by_ref().find(|(_, l)| !is_blank(l));
        match header {
            Some((_, l)) if l.trim() == HEADER => {}
            Some((n, _)) => return Err(DocError { line: n, column: 1, reason: format!("expected header {HEADER:?}") }),
            None => return Err(DocError { line: 1, column: 1, reason: "empty document".into() }),
        }
        let mut section: Option<String> = None;
        let mut seen_sections = BTreeSet::new();
        for (n, raw) in lines {
            if is_blank(raw) {
                continue;
            }
            let indent = raw.len() - raw.trim_start().len();
            let line = raw.trim();
            if let Some(inner) = line.strip_prefix('[') {
                let Some(name) = inner.strip_suffix(']') else {
                    return Err(DocError { line: n, column: indent + 1, reason: "unterminated section header".into() });
                };
                let name = name.trim().to_string();
                if !seen_sections.insert(name.clone()) {
                    return Err(DocError { line: n, column: indent + 1, reason: format!("section [{name}] repeated") });
                }
                if let Some(e) = name.strip_prefix("edge ") {
                    self.edges.push(RawEdge { name: e.trim().to_string(), header: (n, indent + 1), ..Default::default() });
                } else if !["meta", "groups", "vertices"].contains(&name.as_str()) && self.mode == Mode::Strict {
                    return Err(DocError { line: n, column: indent + 1, reason: format!("unknown section [{name}]") });
                }
                section = Some(name);
                continue;
            }
            let Some(sec) = section.clone() else {
                return Err(DocError { line: n, column: indent + 1, reason: "entry outside any section".into() });
            };
            let Some(eq) = line.find('=') else {
                return Err(DocError { line: n, column: indent + 1, reason: "expected key = value".into() });
            };
            let key = line[..eq].trim().to_string();
            let value_raw = &line[eq + 1..];
            let value = value_raw.trim();
            let lead = value_raw.len() - value_raw.trim_start().len();
            let loc = Located { line: n, column: indent + eq + 2 + lead, text: value.to_string() };
            if key.is_empty() {
                return Err(DocError { line: n, column: indent + 1, reason: "empty key".into() });
            }
            self.entry(&sec, key, loc, (n, indent + 1))?;
        }
        self.finish()
    }

    fn unknown(&mut self, section: &str, key: String, loc: &Located, at: (usize, usize)) -> Result<(), DocError> {
        match self.mode {
            Mode::Strict => Err(DocError { line: at.0, column: at.1, reason: format!("unknown key {key:?} in [{section}]") }),
            Mode::Lenient => {
                self.doc.extra.push(ExtraLine { section: section.to_string(), key, value: loc.text.clone() });
                Ok(())
            }
        }
    }

    fn entry(&mut self, section: &str, key: String, loc: Located, at: (usize, usize)) -> Result<(), DocError> {
        match section {
            "meta" => match key.as_str() {
                "name" => {
                    if self.doc.name.is_some() {
                        return Err(DocError { line: at.0, column: at.1, reason: "name given twice".into() });
                    }
                    self.doc.name = Some(loc.text);
                }
                "note" => self.doc.notes.push(loc.text),
                _ => self.unknown(section, key, &loc, at)?,
            },
            "groups" => {
                let label = parse_group(&loc)?;
                if self.doc.groups.insert(key.clone(), label).is_some() {
                    return Err(DocError { line: at.0, column: at.1, reason: format!("group {key:?} defined twice") });
                }
            }
            "vertices" => self.vertices.push((key, loc)),
            s if s.starts_with("edge ") => {
                let edge = self.edges.last_mut().expect("edge section");
                let slot = match key.as_str() {
                    "group" => &mut edge.group,
                    "from" => &mut edge.from,
                    "to" => &mut edge.to,
                    "from-map" => &mut edge.from_map,
                    "to-map" => &mut edge.to_map,
                    _ => return self.unknown(section, key, &loc, at),
                };
                if slot.is_some() {
                    return Err(DocError { line: at.0, column: at.1, reason: format!("key {key:?} given twice") });
                }
                *slot = Some(loc);
            }
            _ => self.unknown(section, key, &loc, at)?,
        }
        Ok(())
    }

    fn group(&self, loc: &Located) -> Result<(String, GroupLabel), DocError> {
        let id = loc.text.trim();
        let label = self.doc.groups.get(id).ok_or_else(|| loc.err(0, format!("unknown group {id:?}")))?;
        Ok((id.to_string(), label.clone()))
    }

    fn finish(mut self) -> Result<GogDocument, DocError> {
        let mut vertices = Vec::new();
        let mut index = BTreeMap::new();
        for (name, loc) in &self.vertices {
            let (id, label) = self.group(loc)?;
            if index.insert(name.clone(), vertices.len()).is_some() {
                return Err(DocError { line: loc.line, column: 1, reason: format!("vertex {name:?} defined twice") });
            }
            self.doc.vertex_groups.push(id);
            vertices.push(Vertex { name: name.clone(), label });
        }
        let mut edges = Vec::new();
        for raw in &self.edges {
            let missing = |what: &str| DocError {
                line: raw.header.0,
                column: raw.header.1,
                reason: format!("edge {:?} has no {what}", raw.name),
            };
            let group = raw.group.as_ref().ok_or_else(|| missing("group"))?;
            let (id, label) = self.group(group)?;
            let endpoint = |loc: &Option<Located>, what: &str| -> Result<usize, DocError> {
                let loc = loc.as_ref().ok_or_else(|| missing(what))?;
                index.get(loc.text.trim()).copied().ok_or_else(|| loc.err(0, format!("unknown vertex {:?}", loc.text)))
            };
            let from = endpoint(&raw.from, "from")?;
            let to = endpoint(&raw.to, "to")?;
            let from_map = parse_images(&vertices[from].label, raw.from_map.as_ref().ok_or_else(|| missing("from-map"))?)?;
            let to_map = parse_images(&vertices[to].label, raw.to_map.as_ref().ok_or_else(|| missing("to-map"))?)?;
            self.doc.edge_groups.push(id);
            edges.push(Edge { name: raw.name.clone(), label, from, to, from_map, to_map });
        }
        self.doc.graph = GraphOfGroups::new(vertices, edges);
        Ok(self.doc)
    }
}

fn is_blank(line: &str) -> bool {
    let t = line.trim();
    t.is_empty() || t.starts_with('#')
}

/// Parses a group spec such as `abelian 2 / (0, 4)`.
pub fn parse_group_spec(text: &str) -> Result<GroupLabel, DocError> {
    parse_group(&Located { line: 1, column: 1, text: text.trim().to_string() })
}

/// Parses one element of `target` written in document syntax.
pub fn parse_element_text(target: &GroupLabel, text: &str) -> Result<Element, DocError> {
    let loc = Located { line: 1, column: 1, text: text.trim().to_string() };
    parse_element(target, &loc, 0, &loc.text)
}

/// Parses a comma-separated list of elements of `target`.
pub fn parse_images_text(target: &GroupLabel, text: &str) -> Result<Vec<Element>, DocError> {
    parse_images(target, &Located { line: 1, column: 1, text: text.trim().to_string() })
}

/// Parses `(a, b), (c, d)` into integer vectors.
pub fn parse_vectors(text: &str) -> Result<Vec<Vector>, DocError> {
    let loc = Located { line: 1, column: 1, text: text.trim().to_string() };
    if loc.text.is_empty() {
        return Ok(vec![]);
    }
    split_top(&loc.text).into_iter().map(|(o, p)| parse_tuple(&loc, o, p)).collect()
}
