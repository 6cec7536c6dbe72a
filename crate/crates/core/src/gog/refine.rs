//! One-edge refinement of a vertex from a marked splitting of its group.

use crate::invariants::abelianization;

use super::collapse::{collapse, fundamental_presentation_with_layout};
use super::equivalent::equivalent;
use super::graph::{require_valid, validate, Edge, End, GraphOfGroups, Severity, Vertex};
use super::label::{express, Element, GroupLabel, TriState};
use super::GogError;

/// The isomorphism `π1(Λ_v) -> G_v`, given on generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Marking {
    /// For each vertex of `Λ_v`, the images of its generators in `G_v`.
    pub vertex_images: Vec<Vec<Element>>,
    /// Image of the stable letter when `Λ_v` is a loop.
    pub stable_image: Option<Element>,
}

/// Where an incident edge end of the refined vertex re-attaches.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Attachment {
    pub edge: usize,
    pub end: End,
    /// Vertex of `Λ_v`.
    pub target: usize,
    /// Element `g_e` of `G_v`; the new map is `ad(g_e)` composed with the old one.
    pub conjugator: Element,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RefinementData {
    pub vertex: usize,
    /// The one-edge splitting `Λ_v`.
    pub splitting: GraphOfGroups,
    pub marking: Marking,
    pub attachments: Vec<Attachment>,
}

/// Replaces `data.vertex` by the splitting `Λ_v`.
///
/// Each incident edge end is re-attached at its chosen vertex `u` of `Λ_v`
/// with map `ad(g_e)` composed with the old map, rewritten through the
/// marking into `G_u`. Afterwards the new edge is collapsed again and the
/// result must not be provably inequivalent to `g`.
pub fn refine(g: &GraphOfGroups, data: &RefinementData) -> Result<GraphOfGroups, GogError> {
    require_valid(g)?;
    let v = data.vertex;
    let Some(vertex) = g.vertices().get(v) else {
        return Err(GogError::InvalidInput(format!("no vertex with index {v}")));
    };
    let gv = &vertex.label;
    let lam = &data.splitting;
    if lam.edges().len() != 1 || !(1..=2).contains(&lam.vertices().len()) {
        return Err(GogError::InvalidInput("the splitting must have exactly one edge".into()));
    }
    if let Some(d) = validate(lam).into_iter().find(|d| d.severity == Severity::Error) {
        return Err(GogError::InvalidInput(format!("splitting: {d}")));
    }
    for u in lam.vertices() {
        if g.vertices().iter().enumerate().any(|(i, w)| i != v && w.name == u.name) {
            return Err(GogError::InvalidInput(format!("vertex name {} is already used", u.name)));
        }
    }
    if g.edges().iter().any(|e| e.name == lam.edges()[0].name) {
        return Err(GogError::InvalidInput(format!("edge name {} is already used", lam.edges()[0].name)));
    }
    check_marking(gv, lam, &data.marking)?;

    let incident = g.incident(v);
    if data.attachments.len() != incident.len() {
        return Err(GogError::InvalidInput(format!(
            "{} attachments for {} incident edge ends",
            data.attachments.len(),
            incident.len()
        )));
    }
    let first_new = v;
    let second_new = g.vertices().len();
    let new_index = |u: usize| if u == 0 { first_new } else { second_new };

    let mut edges: Vec<Edge> = g.edges().to_vec();
    for &(ei, end) in &incident {
        let att = data
            .attachments
            .iter()
            .find(|a| a.edge == ei && a.end == end)
            .ok_or_else(|| GogError::InvalidInput(format!("no attachment for edge {} ({end})", g.edges()[ei].name)))?;
        let u = att.target;
        if u >= lam.vertices().len() {
            return Err(GogError::InvalidInput(format!("attachment to missing splitting vertex {u}")));
        }
        if gv.well_typed(&att.conjugator).is_err() {
            return Err(GogError::InvalidInput(format!("conjugator for edge {} is not in the vertex group", g.edges()[ei].name)));
        }
        let gu = &lam.vertices()[u].label;
        let sub_images = &data.marking.vertex_images[u];
        let mut new_map = Vec::new();
        for img in g.edges()[ei].map(end) {
            let conj = gv.conjugate(img, &att.conjugator).ok_or_else(|| {
                GogError::AttachmentUndecidable(format!("cannot conjugate in the group of {}", vertex.name))
            })?;
            let w = match express(gv, sub_images, &conj) {
                Ok(Some(w)) => w,
                Ok(None) => {
                    return Err(GogError::AttachmentFailed(format!(
                        "edge {} ({end}) does not land in the group of {}",
                        g.edges()[ei].name,
                        lam.vertices()[u].name
                    )))
                }
                Err(()) => {
                    return Err(GogError::AttachmentUndecidable(format!(
                        "membership for edge {} ({end}) cannot be decided",
                        g.edges()[ei].name
                    )))
                }
            };
            let elem = gu
                .word_to_element(&w)
                .ok_or_else(|| GogError::AttachmentUndecidable(format!("group of {} has no element model", lam.vertices()[u].name)))?;
            new_map.push(elem);
        }
        let e = &mut edges[ei];
        *e.map_mut(end) = new_map;
        match end {
            End::From => e.from = new_index(u),
            End::To => e.to = new_index(u),
        }
    }

    let mut vertices: Vec<Vertex> = g.vertices().to_vec();
    vertices[v] = lam.vertices()[0].clone();
    if lam.vertices().len() == 2 {
        vertices.push(lam.vertices()[1].clone());
    }
    let mut new_edge = lam.edges()[0].clone();
    new_edge.from = new_index(new_edge.from);
    new_edge.to = new_index(new_edge.to);
    edges.push(new_edge);
    let refined = GraphOfGroups::new(vertices, edges);

    if let Some(d) = validate(&refined).into_iter().find(|d| d.severity == Severity::Error) {
        return Err(GogError::AttachmentFailed(format!("refined graph is invalid: {d}")));
    }
    if round_trip(g, &refined, data)? == TriState::No {
        return Err(GogError::AttachmentFailed("collapsing the new edge does not give back the input".into()));
    }
    Ok(refined)
}

/// Checks that the marking is a well-defined onto map with matching
/// abelianizations. Injectivity beyond that is not verified.
fn check_marking(gv: &GroupLabel, lam: &GraphOfGroups, marking: &Marking) -> Result<(), GogError> {
    if gv.is_opaque() {
        return Err(GogError::AttachmentUndecidable("the refined vertex carries an opaque group".into()));
    }
    if marking.vertex_images.len() != lam.vertices().len() {
        return Err(GogError::InvalidMarking("one image list per splitting vertex is required".into()));
    }
    for (u, imgs) in lam.vertices().iter().zip(&marking.vertex_images) {
        if imgs.len() != u.label.generator_count() {
            return Err(GogError::InvalidMarking(format!("wrong number of images for {}", u.name)));
        }
        if let Some(bad) = imgs.iter().find(|x| gv.well_typed(x).is_err()) {
            return Err(GogError::InvalidMarking(format!("{bad:?} is not in the vertex group")));
        }
    }
    let is_loop = lam.edges()[0].is_loop();
    if is_loop != marking.stable_image.is_some() {
        return Err(GogError::InvalidMarking("a stable letter image is required exactly for a loop".into()));
    }
    let images = marking_images(marking);
    let tree = lam.default_spanning_tree();
    let (p, _) = fundamental_presentation_with_layout(lam, &tree)
        .map_err(|e| GogError::InvalidMarking(format!("splitting has no presentation: {e}")))?;
    for r in p.relations() {
        let value = gv
            .eval(r, &images)
            .ok_or_else(|| GogError::InvalidMarking("images cannot be multiplied".into()))?;
        match gv.is_identity(&value) {
            TriState::Yes => {}
            TriState::No => return Err(GogError::InvalidMarking(format!("relation {} fails", p.word_to_string(r)))),
            TriState::Unknown => {
                return Err(GogError::AttachmentUndecidable(format!("cannot check relation {}", p.word_to_string(r))))
            }
        }
    }
    match gv.generated_by(&images) {
        TriState::Yes => {}
        TriState::No => return Err(GogError::InvalidMarking("marking is not onto the vertex group".into())),
        TriState::Unknown => return Err(GogError::AttachmentUndecidable("cannot decide whether the marking is onto".into())),
    }
    if Some(abelianization(&p)) != gv.abelianization() {
        return Err(GogError::InvalidMarking("abelianizations differ, so the marking is not injective".into()));
    }
    Ok(())
}

/// Marking images in the generator order of the fundamental presentation.
fn marking_images(marking: &Marking) -> Vec<Element> {
    let mut images: Vec<Element> = marking.vertex_images.iter().flatten().cloned().collect();
    images.extend(marking.stable_image.clone());
    images
}

/// Collapses the new edge of a refinement and pushes the merged vertex
/// back into `vertex` through the marking. `None` when an edge image cannot
/// be pushed back.
pub fn collapse_refinement(
    refined: &GraphOfGroups,
    data: &RefinementData,
    vertex: &Vertex,
) -> Result<Option<GraphOfGroups>, GogError> {
    let new_edge = refined.edges().len() - 1;
    let collapsed = collapse(refined, &[new_edge])?;
    let images = marking_images(&data.marking);
    // the merged component keeps the smaller index, which is data.vertex
    let merged = data.vertex;
    let mut vertices = collapsed.vertices().to_vec();
    vertices[merged] = vertex.clone();
    let mut edges = collapsed.edges().to_vec();
    for e in edges.iter_mut() {
        for end in End::BOTH {
            if e.endpoint(end) != merged {
                continue;
            }
            let mapped: Option<Vec<Element>> = e
                .map(end)
                .iter()
                .map(|x| match x {
                    Element::Word(w) => vertex.label.eval(w, &images),
                    _ => None,
                })
                .collect();
            match mapped {
                Some(m) => *e.map_mut(end) = m,
                None => return Ok(None),
            }
        }
    }
    Ok(Some(GraphOfGroups::new(vertices, edges)))
}

fn round_trip(g: &GraphOfGroups, refined: &GraphOfGroups, data: &RefinementData) -> Result<TriState, GogError> {
    match collapse_refinement(refined, data, &g.vertices()[data.vertex])? {
        Some(back) => Ok(equivalent(&back, g)),
        None => Ok(TriState::Unknown),
    }
}

/// The trivial splitting `G_v = G_v *_{G_e} G_e` of a vertex along one of
/// its incident edge groups, marked by the identity.
pub fn trivial_amalgam(g: &GraphOfGroups, v: usize, along: usize, end: End, names: (&str, &str, &str)) -> RefinementData {
    let gv = g.vertices()[v].label.clone();
    let e = &g.edges()[along];
    let ge = e.label.clone();
    let inclusion = e.map(end).to_vec();
    let splitting = GraphOfGroups::new(
        vec![Vertex { name: names.0.into(), label: gv.clone() }, Vertex { name: names.1.into(), label: ge.clone() }],
        vec![Edge {
            name: names.2.into(),
            label: ge.clone(),
            from: 0,
            to: 1,
            from_map: inclusion.clone(),
            to_map: ge.generators(),
        }],
    );
    let marking = Marking { vertex_images: vec![gv.generators(), inclusion], stable_image: None };
    let attachments = g
        .incident(v)
        .into_iter()
        .map(|(edge, end2)| Attachment {
            edge,
            end: end2,
            target: if edge == along && end2 == end { 1 } else { 0 },
            conjugator: gv.identity(),
        })
        .collect();
    RefinementData { vertex: v, splitting, marking, attachments }
}
