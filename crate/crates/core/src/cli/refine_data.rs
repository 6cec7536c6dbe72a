//! Refinement data files: a `.gog` document holding the one-edge splitting,
//! plus `[refine]`, `[marking]` and `[attach]` sections.
//!
//! ```text
//! [refine]
//! vertex = v
//! stable = (1, 0, 0)
//!
//! [marking]
//! u = (0, 1, 0), (0, 0, 1)
//!
//! [attach]
//! e1 = from u (5, 0, 0)
//! e2 = from u
//! ```
//!
//! Marking images, the stable image and conjugators are elements of the
//! refined vertex's group. A missing conjugator means the identity.

use std::collections::BTreeMap;

use super::document::{parse_element_text, parse_images_text, DocError, GogDocument, Mode};
use crate::gog::{Attachment, End, GraphOfGroups, Marking, RefinementData};

const SECTIONS: [&str; 3] = ["refine", "marking", "attach"];

/// Line and value column of each key in the extra sections.
fn positions(text: &str) -> BTreeMap<(String, String), (usize, usize)> {
    let mut out = BTreeMap::new();
    let mut section = String::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if let Some(s) = line.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            section = s.trim().to_string();
        } else if let Some(eq) = raw.find('=') {
            if SECTIONS.contains(&section.as_str()) && !line.starts_with('#') {
                let after = &raw[eq + 1..];
                let col = eq + 2 + (after.len() - after.trim_start().len());
                out.insert((section.clone(), raw[..eq].trim().to_string()), (i + 1, col));
            }
        }
    }
    out
}

pub fn parse_refine_data(text: &str, g: &GraphOfGroups, mode: Mode) -> Result<RefinementData, DocError> {
    let mut doc = GogDocument::parse(text, Mode::Lenient)?;
    let at = positions(text);
    let err = |section: &str, key: &str, reason: String| {
        let (line, column) = at.get(&(section.to_string(), key.to_string())).copied().unwrap_or((0, 0));
        DocError { line, column, reason }
    };
    let relocate = |section: &str, key: &str, e: DocError| {
        let (line, column) = at.get(&(section.to_string(), key.to_string())).copied().unwrap_or((0, 0));
        DocError { line, column: column + e.column - 1, reason: e.reason }
    };
    let extra = std::mem::take(&mut doc.extra);
    let mut refine = BTreeMap::new();
    let mut marking = BTreeMap::new();
    let mut attach = Vec::new();
    for x in extra {
        match x.section.as_str() {
            "refine" => {
                if !["vertex", "stable"].contains(&x.key.as_str()) {
                    return Err(err("refine", &x.key, format!("unknown key {:?} in [refine]", x.key)));
                }
                refine.insert(x.key, x.value);
            }
            "marking" => {
                marking.insert(x.key, x.value);
            }
            "attach" => attach.push((x.key, x.value)),
            _ if mode == Mode::Lenient => {}
            s => {
                return Err(DocError { line: 0, column: 0, reason: format!("unknown section or key {:?} in [{s}]", x.key) })
            }
        }
    }
    let splitting = doc.graph;
    let vname = refine.get("vertex").ok_or_else(|| DocError { line: 0, column: 0, reason: "[refine] has no vertex".into() })?;
    let vertex = g.vertex_index(vname).ok_or_else(|| err("refine", "vertex", format!("no vertex named {vname:?}")))?;
    let gv = &g.vertices()[vertex].label;
    let stable_image = match refine.get("stable") {
        Some(s) => Some(parse_element_text(gv, s).map_err(|e| relocate("refine", "stable", e))?),
        None => None,
    };
    let mut vertex_images = Vec::new();
    for u in splitting.vertices() {
        let text = marking.remove(&u.name).ok_or_else(|| DocError {
            line: 0,
            column: 0,
            reason: format!("[marking] has no entry for {:?}", u.name),
        })?;
        vertex_images.push(parse_images_text(gv, &text).map_err(|e| relocate("marking", &u.name, e))?);
    }
    if let Some(k) = marking.keys().next() {
        return Err(err("marking", k, format!("{k:?} is not a vertex of the splitting")));
    }
    let mut attachments = Vec::new();
    for (edge_name, value) in attach {
        let bad = |reason: String| err("attach", &edge_name, reason);
        let edge = g.edge_index(&edge_name).ok_or_else(|| bad(format!("no edge named {edge_name:?}")))?;
        let mut parts = value.splitn(3, char::is_whitespace);
        let end = match parts.next() {
            Some("from") => End::From,
            Some("to") => End::To,
            other => return Err(bad(format!("expected from or to, found {:?}", other.unwrap_or("")))),
        };
        let target_name = parts.next().ok_or_else(|| bad("missing splitting vertex".into()))?;
        let target = splitting
            .vertex_index(target_name)
            .ok_or_else(|| bad(format!("{target_name:?} is not a vertex of the splitting")))?;
        let conjugator = match parts.next().map(str::trim).filter(|s| !s.is_empty()) {
            Some(c) => parse_element_text(gv, c).map_err(|e| DocError { reason: e.reason, ..bad(String::new()) })?,
            None => gv.identity(),
        };
        attachments.push(Attachment { edge, end, target, conjugator });
    }
    Ok(RefinementData { vertex, splitting, marking: Marking { vertex_images, stable_image }, attachments })
}
