//! The explicit examples of non-finiteness, each with a recomputable
//! certificate separating its members.
//!
//! Ids used on the command line: `finite-order`, `bs24`, `roots`,
//! `heisenberg`, `power`, `theta`.

use std::fmt;

use num_bigint::BigInt;

use crate::gog::{
    collapse, edge_span_index, equivalent, refine, subgraph, Attachment, Edge, Element, End, GogError,
    GraphOfGroups, GroupLabel, Marking, RefinementData, TriState, Vertex,
};
use crate::invariants::{
    abelianization, distinguish, DistinguishReport, FiniteGroupTable, FinitePresentation, Word,
};
use crate::lattice::{self, AbelianInvariants, Index, LatticeGroup, Vector};
use crate::polycyclic::{hn_center_derived_index, HeisElement, HeisSubgroupDesc};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilyId {
    FiniteOrder,
    Bs24,
    Roots,
    Heisenberg,
    Power,
    Theta,
}

impl FamilyId {
    pub const ALL: [FamilyId; 6] =
        [FamilyId::FiniteOrder, FamilyId::Bs24, FamilyId::Roots, FamilyId::Heisenberg, FamilyId::Power, FamilyId::Theta];

    pub fn id(self) -> &'static str {
        match self {
            FamilyId::FiniteOrder => "finite-order",
            FamilyId::Bs24 => "bs24",
            FamilyId::Roots => "roots",
            FamilyId::Heisenberg => "heisenberg",
            FamilyId::Power => "power",
            FamilyId::Theta => "theta",
        }
    }

    pub fn parse(s: &str) -> Option<FamilyId> {
        FamilyId::ALL.into_iter().find(|f| f.id() == s)
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Parameter {
    Int(u64),
    Vector([i64; 3]),
}

impl fmt::Display for Parameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Parameter::Int(n) => write!(f, "{n}"),
            Parameter::Vector([a, b, c]) => write!(f, "({a}, {b}, {c})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    Abelianization(AbelianInvariants),
    Index(Index),
    /// `b ∈ <a1>` and `b ∈ e(<a1>, Z^3)`.
    Membership { in_subgroup: bool, in_root_closure: bool },
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Certificate::Abelianization(a) => write!(f, "abelianization: {a}"),
            Certificate::Index(i) => write!(f, "index: {i}"),
            Certificate::Membership { in_subgroup, in_root_closure } => {
                write!(f, "in-subgroup: {in_subgroup}\nin-root-closure: {in_root_closure}")
            }
        }
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum FamilyError {
    #[error("parameter out of range: {0}")]
    Parameter(String),
    #[error(transparent)]
    Gog(#[from] GogError),
}

#[derive(Clone, Debug)]
pub struct FamilyInstance {
    pub family: FamilyId,
    pub parameter: Parameter,
    pub graph: GraphOfGroups,
    pub certificate: Certificate,
    /// Intermediate graphs of the construction, by name.
    pub related: Vec<(String, GraphOfGroups)>,
    pub notes: Vec<String>,
}

impl FamilyInstance {
    /// Recomputes the certificate from `graph`.
    pub fn recompute_certificate(&self) -> Option<Certificate> {
        match self.family {
            FamilyId::FiniteOrder | FamilyId::Bs24 | FamilyId::Roots => {
                let name = match self.family {
                    FamilyId::FiniteOrder => "B",
                    FamilyId::Bs24 => "V",
                    _ => "P",
                };
                let v = self.graph.vertex_index(name)?;
                Some(Certificate::Abelianization(self.graph.vertices()[v].label.abelianization()?))
            }
            FamilyId::Heisenberg => match &self.graph.edges().first()?.label {
                GroupLabel::Heisenberg(HeisSubgroupDesc::Hn(n)) => {
                    Some(Certificate::Index(Index::Finite(hn_center_derived_index(*n).ok()?)))
                }
                GroupLabel::Heisenberg(HeisSubgroupDesc::Full) => Some(Certificate::Index(Index::Finite(BigInt::from(1)))),
                _ => None,
            },
            FamilyId::Theta => Some(Certificate::Index(edge_span_index(&self.graph, self.graph.vertex_index("u")?)?)),
            FamilyId::Power => {
                // b is read off from its image a1^b1 a2^b2 a3^b3 in the vertex containing A
                let e = self.graph.edges().first()?;
                let Element::Word(w) = &e.map(End::To)[1] else { return None };
                let v = &self.graph.vertices()[e.to].label;
                let GroupLabel::Presented(p) = v else { return None };
                let sums = w.exponent_sums(p.generator_count());
                let b: Vec<i64> = ["a1", "a2", "a3"].iter().map(|n| p.generator_index(n).map(|i| sums[i])).collect::<Option<_>>()?;
                Some(power_certificate(&[b[0], b[1], b[2]]))
            }
        }
    }
}

/// Builds a family member from its id and integer parameter.
pub fn make(family: FamilyId, n: u64) -> Result<FamilyInstance, FamilyError> {
    match family {
        FamilyId::FiniteOrder => make_finite_order_family(n),
        FamilyId::Bs24 => make_bs24_instance(n),
        FamilyId::Roots => make_pn_splitting(n),
        FamilyId::Heisenberg => make_heis_family(n),
        FamilyId::Power => Ok(make_example_1_4([n as i64, 0, 0])),
        FamilyId::Theta => make_theta(n),
    }
}

fn z() -> GroupLabel {
    GroupLabel::Abelian(LatticeGroup::free(1))
}

fn word(p: &FinitePresentation, text: &str) -> Element {
    Element::Word(p.parse_word(text).expect("family word"))
}

fn presented(text: &str) -> FinitePresentation {
    FinitePresentation::parse(text).expect("family presentation")
}

fn vertex(name: &str, label: GroupLabel) -> Vertex {
    Vertex { name: name.into(), label }
}

fn edge(name: &str, label: GroupLabel, ends: (usize, usize), maps: (Vec<Element>, Vec<Element>)) -> Edge {
    Edge { name: name.into(), label, from: ends.0, to: ends.1, from_map: maps.0, to_map: maps.1 }
}

/// `H *_{Z/n} (Z/n * Z)` with `H` opaque.
pub fn make_finite_order_family(n: u64) -> Result<FamilyInstance, FamilyError> {
    if n < 2 {
        return Err(FamilyError::Parameter(format!("finite-order needs n >= 2, got {n}")));
    }
    let b = presented(&format!("<u, s | u^{n}>"));
    let zn = LatticeGroup::new(1, &[vec![BigInt::from(n)]]).expect("Z/n");
    let graph = GraphOfGroups::new(
        vec![
            vertex("H", GroupLabel::opaque("H", &["infinite", "non-abelian"])),
            vertex("B", GroupLabel::Presented(b.clone())),
        ],
        vec![edge(
            "e",
            GroupLabel::Abelian(zn),
            (0, 1),
            (vec![Element::Token(format!("h{n}"))], vec![word(&b, "u")]),
        )],
    );
    Ok(FamilyInstance {
        family: FamilyId::FiniteOrder,
        parameter: Parameter::Int(n),
        certificate: Certificate::Abelianization(abelianization(&b)),
        graph,
        related: vec![],
        notes: vec![],
    })
}

/// `<x, y | x^(2^n) = y^2>` and the HNN splitting `t x^2 t^-1 = x` of
/// `BS(2,4)` over it.
///
/// With `y' = t^n y t^-n` one gets `y'^2 = x`, the relation `x^(2^n) = y^2`
/// becomes a consequence, and `t y'^4 t^-1 = y'^2` is left.
pub fn make_bs24_vertex(n: u64) -> Result<(FinitePresentation, GraphOfGroups), FamilyError> {
    if !(1..=62).contains(&n) {
        return Err(FamilyError::Parameter(format!("bs24 needs 1 <= n <= 62, got {n}")));
    }
    let v = bs24_presentation(n);
    let graph = GraphOfGroups::new(
        vec![vertex("V", GroupLabel::Presented(v.clone()))],
        vec![edge("t", z(), (0, 0), (vec![word(&v, "x^2")], vec![word(&v, "x")]))],
    );
    Ok((v, graph))
}

pub fn bs24_presentation(n: u64) -> FinitePresentation {
    presented(&format!("<x, y | x^{} = y^2>", 1u64 << n))
}

fn make_bs24_instance(n: u64) -> Result<FamilyInstance, FamilyError> {
    let (v, graph) = make_bs24_vertex(n)?;
    Ok(FamilyInstance {
        family: FamilyId::Bs24,
        parameter: Parameter::Int(n),
        certificate: Certificate::Abelianization(abelianization(&v)),
        graph,
        related: vec![],
        notes: vec!["abelianization is the same for every n; separate members with bs24_witness".into()],
    })
}

/// Searches the targets for a hom count separating two members.
pub fn bs24_witness(n: u64, m: u64, targets: &[FiniteGroupTable], budget: u64) -> DistinguishReport {
    distinguish(&bs24_presentation(n), &bs24_presentation(m), targets, budget)
}

pub fn pn_presentation(n: u64) -> FinitePresentation {
    presented(&format!("<an, x, y | an^{} = [x, y]>", 1u64 << n))
}

/// `BS(1,2) *_{<a_n>} P_n` with `a_n = t^-n a t^n`.
pub fn make_pn_splitting(n: u64) -> Result<FamilyInstance, FamilyError> {
    if !(1..=62).contains(&n) {
        return Err(FamilyError::Parameter(format!("roots needs 1 <= n <= 62, got {n}")));
    }
    let bs = presented("<a, t | t a t^-1 = a^2>");
    let p = pn_presentation(n);
    let graph = GraphOfGroups::new(
        vec![vertex("BS", GroupLabel::Presented(bs.clone())), vertex("P", GroupLabel::Presented(p.clone()))],
        vec![edge("e", z(), (0, 1), (vec![word(&bs, &format!("t^-{n} a t^{n}"))], vec![word(&p, "an")]))],
    );
    Ok(FamilyInstance {
        family: FamilyId::Roots,
        parameter: Parameter::Int(n),
        certificate: Certificate::Abelianization(abelianization(&p)),
        graph,
        related: vec![],
        notes: vec![],
    })
}

/// `H *_{H_n} (H_n * Z)`.
pub fn make_heis_family(n: u64) -> Result<FamilyInstance, FamilyError> {
    let d = HeisSubgroupDesc::hn(n).map_err(|e| FamilyError::Parameter(e.to_string()))?;
    let mut names = d.generator_names();
    names.push("s".into());
    let k = FinitePresentation::new(names, d.relators());
    let graph = GraphOfGroups::new(
        vec![vertex("H", GroupLabel::Heisenberg(HeisSubgroupDesc::Full)), vertex("K", GroupLabel::Presented(k.clone()))],
        vec![edge(
            "e",
            GroupLabel::Heisenberg(d.clone()),
            (0, 1),
            (
                d.generators().into_iter().map(Element::Heis).collect(),
                ["an", "bn", "c"].iter().map(|w| word(&k, w)).collect(),
            ),
        )],
    );
    let index = hn_center_derived_index(n).map_err(|e| FamilyError::Parameter(e.to_string()))?;
    let notes = if n == 1 { vec!["n = 1 is the trivial amalgam H *_H (H * Z), not minimal".into()] } else { vec![] };
    Ok(FamilyInstance {
        family: FamilyId::Heisenberg,
        parameter: Parameter::Int(n),
        certificate: Certificate::Index(Index::Finite(index)),
        graph,
        related: vec![],
        notes,
    })
}

fn power_certificate(b: &[i64; 3]) -> Certificate {
    let z3 = LatticeGroup::free(3);
    let a1 = lattice::canonicalize(&[ints(&[1, 0, 0])], &z3).expect("<a1>");
    let closure = lattice::root_closure(&a1, &z3.whole()).expect("root closure");
    let bv = ints(b);
    Certificate::Membership {
        in_subgroup: lattice::membership(&bv, &a1).expect("dimension"),
        in_root_closure: lattice::membership(&bv, &closure).expect("dimension"),
    }
}

fn ints(v: &[i64]) -> Vector {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// The splitting of `G = A * G1 * G2 * G3` (amalgamated along
/// `[x_i, y_i] = a_i`) over `<a1, b>`.
///
/// The vertex `<G1, b>` is presented as `G1 *_{<a1>} <a1, b>`, that is
/// `<x1, y1, b | [[x1, y1], b]>`, and as the free group `<x1, y1>` when
/// `b` is a multiple of `a1`. The other vertex is
/// `<x2, y2, x3, y3, a1, a2, a3 | a2 = [x2, y2], a3 = [x3, y3], [a_i, a_j]>`.
pub fn make_example_1_4(b: [i64; 3]) -> FamilyInstance {
    let certificate = power_certificate(&b);
    let edge_group = LatticeGroup::free(2);
    let [b1, b2, b3] = b;
    // <a1, b> as Z^2 modulo the relations between a1 and b
    let kernel = lattice::map_kernel(&[ints(&[1, 0, 0]), ints(&b)], &LatticeGroup::free(3)).expect("kernel");
    let edge_group = LatticeGroup::new(2, kernel.basis()).unwrap_or(edge_group);
    let multiple = b2 == 0 && b3 == 0;
    let (v1, v1_images) = if multiple {
        let p = presented("<x1, y1 | >");
        let a1 = Word::generator(0).commutator(&Word::generator(1));
        let img = vec![Element::Word(a1.clone()), Element::Word(a1.pow(b1))];
        (p, img)
    } else {
        let p = presented("<x1, y1, b | [[x1, y1], b]>");
        let img = vec![word(&p, "[x1, y1]"), word(&p, "b")];
        (p, img)
    };
    let v2 = presented("<x2, y2, x3, y3, a1, a2, a3 | a2 = [x2, y2], a3 = [x3, y3], [a1, a2], [a1, a3], [a2, a3]>");
    let b_word = Word::from_syllables([(4, b1), (5, b2), (6, b3)]);
    let graph = GraphOfGroups::new(
        vec![vertex("V1", GroupLabel::Presented(v1)), vertex("V2", GroupLabel::Presented(v2.clone()))],
        vec![edge(
            "e",
            GroupLabel::Abelian(edge_group),
            (0, 1),
            (v1_images, vec![word(&v2, "a1"), Element::Word(b_word)]),
        )],
    );
    FamilyInstance {
        family: FamilyId::Power,
        parameter: Parameter::Vector(b),
        graph,
        certificate,
        related: vec![],
        notes: vec![],
    }
}

fn hyperbolic_vertex() -> Vertex {
    vertex("w", GroupLabel::opaque("G_w", &["infinite", "non-abelian", "non-cyclic", "torsion-free", "hyperbolic"]))
}

/// `Θ_n`: `v = H` and an opaque hyperbolic `w`, joined by two cyclic edges
/// onto `<b c^n>` and `<b>` in `H`.
pub fn theta_graph(n: u64) -> GraphOfGroups {
    let n = n as i64;
    GraphOfGroups::new(
        vec![vertex("v", GroupLabel::Heisenberg(HeisSubgroupDesc::Full)), hyperbolic_vertex()],
        vec![
            edge("e1", z(), (0, 1), (vec![Element::Heis(HeisElement::new(0, 1, n))], vec![Element::Token("p".into())])),
            edge("e2", z(), (0, 1), (vec![Element::Heis(HeisElement::b())], vec![Element::Token("q".into())])),
        ],
    )
}

/// `H = Z^2 ⋊ Z` as an HNN extension of `u = Z^2` with `t g1 t^-1 = g1 g2`
/// and `t g2 t^-1 = g2`, marked by `g1 -> b`, `g2 -> c`, `t -> a`.
pub fn heisenberg_splitting() -> (GraphOfGroups, Marking) {
    let z2 = GroupLabel::Abelian(LatticeGroup::free(2));
    let v = |x: i64, y: i64| Element::Vector(ints(&[x, y]));
    let splitting = GraphOfGroups::new(
        vec![vertex("u", z2.clone())],
        vec![edge("h", z2, (0, 0), (vec![v(1, 0), v(0, 1)], vec![v(1, 1), v(0, 1)]))],
    );
    let marking = Marking {
        vertex_images: vec![vec![Element::Heis(HeisElement::b()), Element::Heis(HeisElement::c())]],
        stable_image: Some(Element::Heis(HeisElement::a())),
    };
    (splitting, marking)
}

/// Refinement data of `Θ_0` at `v` with `g_e1 = t^n` and `g_e2 = 1`.
pub fn theta_refinement(n: u64) -> RefinementData {
    let (splitting, marking) = heisenberg_splitting();
    let attach = |edge: usize, k: i64| Attachment {
        edge,
        end: End::From,
        target: 0,
        conjugator: Element::Heis(HeisElement::a().pow_i64(k)),
    };
    RefinementData { vertex: 0, splitting, marking, attachments: vec![attach(0, n as i64), attach(1, 0)] }
}

/// `Θ_n`, `Λ_n`, `Γ_n` and `Γ'_n`; the certificate is the index of the
/// subgroup of `Z^2` generated by incident edge groups in `Γ'_n`.
pub fn make_theta(n: u64) -> Result<FamilyInstance, FamilyError> {
    if n > i64::MAX as u64 {
        return Err(FamilyError::Parameter(format!("theta parameter {n} is too large")));
    }
    let theta = theta_graph(n);
    let lambda = refine(&theta_graph(0), &theta_refinement(n))?;
    let gamma = collapse(&lambda, &[0, 1])?;
    let loop_edge = lambda.edges().len() - 1;
    let all: Vec<usize> = (0..lambda.vertices().len()).collect();
    let gamma_prime = subgraph(&lambda, &all, &(0..loop_edge).collect::<Vec<_>>());
    let u = gamma_prime.vertex_index("u").expect("u");
    let index = edge_span_index(&gamma_prime, u).expect("abelian vertex");
    Ok(FamilyInstance {
        family: FamilyId::Theta,
        parameter: Parameter::Int(n),
        graph: gamma_prime,
        certificate: Certificate::Index(index),
        related: vec![("theta".into(), theta), ("lambda".into(), lambda), ("gamma".into(), gamma)],
        notes: vec![],
    })
}

/// Collapses the Heisenberg edge of `Λ_n` and compares with `Θ_n`.
pub fn theta_round_trip(n: u64) -> Result<TriState, FamilyError> {
    let data = theta_refinement(n);
    let theta0 = theta_graph(0);
    let lambda = refine(&theta0, &data)?;
    match crate::gog::collapse_refinement(&lambda, &data, &theta0.vertices()[0])? {
        Some(back) => Ok(equivalent(&back, &theta_graph(n))),
        None => Ok(TriState::Unknown),
    }
}
