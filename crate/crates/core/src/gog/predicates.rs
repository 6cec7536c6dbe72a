//! Minimality, reducedness and redundant vertices, decided on the quotient graph.
//!
//! Translation to the tree: a vertex of valence one whose edge group equals
//! the vertex group is the quotient of a vertex of `T` with a single edge
//! orbit whose stabilizer fixes the whole star, so `T` minus the open star
//! is an invariant subtree. A surjective map on a non-loop edge is the
//! quotient picture of `G_e = G_v` for an edge with distinct endpoint orbits.

use super::graph::{require_valid, End, GraphOfGroups};
use super::label::{surjective, TriState};
use super::GogError;

/// Whether the edge map at `(edge, end)` is onto its vertex group.
pub fn end_surjective(g: &GraphOfGroups, edge: usize, end: End) -> TriState {
    let e = &g.edges()[edge];
    surjective(&e.label, e.map(end), &g.vertices()[e.endpoint(end)].label)
}

/// `No` iff some valence-one vertex has a surjective edge map.
/// A single loop is always minimal.
pub fn is_minimal(g: &GraphOfGroups) -> Result<TriState, GogError> {
    require_valid(g)?;
    let mut result = TriState::Yes;
    for v in 0..g.vertices().len() {
        let inc = g.incident(v);
        if let [(edge, end)] = inc[..] {
            result = result.and(end_surjective(g, edge, end).not());
        }
    }
    Ok(result)
}

/// `No` iff some non-loop edge has a surjective endpoint map. Loops are exempt.
pub fn is_reduced(g: &GraphOfGroups) -> Result<TriState, GogError> {
    require_valid(g)?;
    let mut result = TriState::Yes;
    for (i, e) in g.edges().iter().enumerate() {
        if e.is_loop() {
            continue;
        }
        for end in End::BOTH {
            result = result.and(end_surjective(g, i, end).not());
        }
    }
    Ok(result)
}

/// Valence-two vertices without loops whose two incident edge maps are both
/// isomorphisms. Edge maps are monomorphisms, so isomorphism means onto.
/// Vertices where neither map is provably proper are listed with `Unknown`.
pub fn find_redundant_vertices(g: &GraphOfGroups) -> Result<Vec<(usize, TriState)>, GogError> {
    require_valid(g)?;
    let mut out = Vec::new();
    for v in 0..g.vertices().len() {
        if g.has_loop_at(v) {
            continue;
        }
        let inc = g.incident(v);
        if inc.len() != 2 {
            continue;
        }
        let t = TriState::all(inc.iter().map(|&(e, end)| end_surjective(g, e, end)));
        if t != TriState::No {
            out.push((v, t));
        }
    }
    Ok(out)
}
