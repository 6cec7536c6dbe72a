//! A sound but incomplete test for equivalence of splittings.
//!
//! `Yes` is returned only for an explicit graph isomorphism matching labels
//! and edge maps up to inner automorphisms of the vertex groups. `No` is
//! returned only when an isomorphism invariant differs. Everything else is
//! `Unknown`.

use crate::invariants::abelianization;
use crate::lattice::{self, AbelianInvariants, Index};

use super::collapse::fundamental_presentation;
use super::graph::{End, GraphOfGroups};
use super::label::{Element, GroupLabel, TriState};

#[derive(Clone, Debug, PartialEq, Eq)]
struct Signature {
    label: GroupLabel,
    /// `None` for labels without a computable abelianization.
    abelianization: Option<AbelianInvariants>,
    valence: usize,
    loops: usize,
    /// Index of the subgroup generated by incident edge groups, for abelian labels.
    edge_span: Option<Index>,
}

impl Signature {
    fn compatible(&self, other: &Signature) -> bool {
        fn agree<T: PartialEq>(a: &Option<T>, b: &Option<T>) -> bool {
            match (a, b) {
                (Some(x), Some(y)) => x == y,
                _ => true,
            }
        }
        self.valence == other.valence
            && !self.label.props_refute(&other.label)
            && !other.label.props_refute(&self.label)
            && self.loops == other.loops
            && agree(&self.abelianization, &other.abelianization)
            && agree(&self.edge_span, &other.edge_span)
    }
}

/// Index in `G_v` of the subgroup generated by the images of incident edge groups.
pub fn edge_span_index(g: &GraphOfGroups, v: usize) -> Option<Index> {
    let GroupLabel::Abelian(group) = &g.vertices()[v].label else { return None };
    let mut gens = Vec::new();
    for (e, end) in g.incident(v) {
        for img in g.edges()[e].map(end) {
            let Element::Vector(x) = img else { return None };
            gens.push(x.clone());
        }
    }
    let span = lattice::canonicalize(&gens, group).ok()?;
    lattice::index(&span, &group.whole()).ok()
}

fn signatures(g: &GraphOfGroups) -> Vec<Signature> {
    (0..g.vertices().len())
        .map(|v| Signature {
            label: g.vertices()[v].label.clone(),
            abelianization: g.vertices()[v].label.abelianization(),
            valence: g.valence(v),
            loops: g.edges().iter().filter(|e| e.is_loop() && e.from == v).count(),
            edge_span: edge_span_index(g, v),
        })
        .collect()
}

/// Whether some bijection pairs every vertex with a compatible one.
fn perfect_matching(left: &[Signature], right: &[Signature]) -> bool {
    fn augment(u: usize, adj: &[Vec<usize>], seen: &mut [bool], owner: &mut [Option<usize>]) -> bool {
        for &w in &adj[u] {
            if seen[w] {
                continue;
            }
            seen[w] = true;
            if owner[w].is_none() || augment(owner[w].unwrap(), adj, seen, owner) {
                owner[w] = Some(u);
                return true;
            }
        }
        false
    }
    let adj: Vec<Vec<usize>> =
        left.iter().map(|s| (0..right.len()).filter(|&j| s.compatible(&right[j])).collect()).collect();
    let mut owner = vec![None; right.len()];
    (0..left.len()).all(|u| augment(u, &adj, &mut vec![false; right.len()], &mut owner))
}

fn pi1_abelianization(g: &GraphOfGroups) -> Option<AbelianInvariants> {
    let p = fundamental_presentation(g, &g.default_spanning_tree()).ok()?;
    Some(abelianization(&p))
}

pub fn equivalent(g1: &GraphOfGroups, g2: &GraphOfGroups) -> TriState {
    if g1.vertices().len() != g2.vertices().len() || g1.edges().len() != g2.edges().len() {
        return TriState::No;
    }
    if !perfect_matching(&signatures(g1), &signatures(g2)) {
        return TriState::No;
    }
    if let (Some(a), Some(b)) = (pi1_abelianization(g1), pi1_abelianization(g2)) {
        if a != b {
            return TriState::No;
        }
    }
    let mut search = Search { g1, g2, perm: vec![None; g1.vertices().len()], used: vec![false; g2.vertices().len()] };
    if search.vertices(0) {
        TriState::Yes
    } else {
        TriState::Unknown
    }
}

struct Search<'a> {
    g1: &'a GraphOfGroups,
    g2: &'a GraphOfGroups,
    perm: Vec<Option<usize>>,
    used: Vec<bool>,
}

impl Search<'_> {
    fn vertices(&mut self, v: usize) -> bool {
        if v == self.g1.vertices().len() {
            let perm: Vec<usize> = self.perm.iter().map(|p| p.unwrap()).collect();
            let mut taken = vec![false; self.g2.edges().len()];
            return self.edges(&perm, 0, &mut taken);
        }
        for w in 0..self.g2.vertices().len() {
            if self.used[w]
                || self.g1.valence(v) != self.g2.valence(w)
                || !self.g1.vertices()[v].label.same_group(&self.g2.vertices()[w].label)
            {
                continue;
            }
            self.used[w] = true;
            self.perm[v] = Some(w);
            if self.vertices(v + 1) {
                return true;
            }
            self.used[w] = false;
            self.perm[v] = None;
        }
        false
    }

    fn edges(&self, perm: &[usize], i: usize, taken: &mut [bool]) -> bool {
        if i == self.g1.edges().len() {
            return true;
        }
        let e = &self.g1.edges()[i];
        for (j, f) in self.g2.edges().iter().enumerate() {
            if taken[j] || !e.label.same_group(&f.label) {
                continue;
            }
            for flip in [false, true] {
                let f = if flip { f.reversed() } else { f.clone() };
                if perm[e.from] != f.from || perm[e.to] != f.to {
                    continue;
                }
                let ok = End::BOTH.iter().all(|&end| {
                    let target = &self.g2.vertices()[f.endpoint(end)].label;
                    maps_agree(target, e.map(end), f.map(end))
                });
                if ok {
                    taken[j] = true;
                    if self.edges(perm, i + 1, taken) {
                        return true;
                    }
                    taken[j] = false;
                }
            }
        }
        false
    }
}

/// Equal up to an inner automorphism of the target, where that is decidable.
fn maps_agree(target: &GroupLabel, a: &[Element], b: &[Element]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    match target {
        GroupLabel::Abelian(_) => a.iter().zip(b).all(|(x, y)| target.equal(x, y) == TriState::Yes),
        GroupLabel::Heisenberg(d) => {
            let hs = |v: &[Element]| -> Option<Vec<_>> {
                v.iter().map(|e| if let Element::Heis(h) = e { Some(h.clone()) } else { None }).collect()
            };
            match (hs(a), hs(b)) {
                (Some(x), Some(y)) => d.subgroup().simultaneously_conjugate(&x, &y),
                _ => false,
            }
        }
        _ => a == b,
    }
}
