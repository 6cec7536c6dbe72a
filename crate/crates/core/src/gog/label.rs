use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::invariants::{abelianization, FinitePresentation, Word};
use crate::lattice::{self, AbelianInvariants, Lattice, LatticeGroup, Vector};
use crate::polycyclic::{heis_inv, heis_mul, HeisElement, HeisSubgroup, HeisSubgroupDesc};

/// Three-valued answer of a partial decision procedure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TriState {
    Yes,
    No,
    Unknown,
}

impl TriState {
    pub fn from_bool(b: bool) -> Self {
        if b {
            TriState::Yes
        } else {
            TriState::No
        }
    }

    pub fn and(self, other: TriState) -> TriState {
        match (self, other) {
            (TriState::No, _) | (_, TriState::No) => TriState::No,
            (TriState::Yes, TriState::Yes) => TriState::Yes,
            _ => TriState::Unknown,
        }
    }

    pub fn or(self, other: TriState) -> TriState {
        match (self, other) {
            (TriState::Yes, _) | (_, TriState::Yes) => TriState::Yes,
            (TriState::No, TriState::No) => TriState::No,
            _ => TriState::Unknown,
        }
    }

    pub fn not(self) -> TriState {
        match self {
            TriState::Yes => TriState::No,
            TriState::No => TriState::Yes,
            TriState::Unknown => TriState::Unknown,
        }
    }

    pub fn all(items: impl IntoIterator<Item = TriState>) -> TriState {
        items.into_iter().fold(TriState::Yes, TriState::and)
    }

    pub fn any(items: impl IntoIterator<Item = TriState>) -> TriState {
        items.into_iter().fold(TriState::No, TriState::or)
    }
}

impl fmt::Display for TriState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TriState::Yes => "YES",
            TriState::No => "NO",
            TriState::Unknown => "UNKNOWN",
        })
    }
}

/// The group carried by a vertex or an edge.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GroupLabel {
    Abelian(LatticeGroup),
    Heisenberg(HeisSubgroupDesc),
    Free(usize),
    Presented(FinitePresentation),
    /// A group known only by name and a few declared properties
    /// (`infinite`, `non-abelian`, `non-cyclic`, ...).
    Opaque { name: String, props: BTreeSet<String> },
}

/// An element of a label, in the representation its kind uses.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Element {
    /// Coordinates in `Z^m`, read modulo the relations.
    Vector(Vector),
    /// Coordinates in the ambient Heisenberg group.
    Heis(HeisElement),
    /// A word over the label's generators.
    Word(Word),
    /// A symbolic name for an element of an opaque group.
    Token(String),
}

/// Token naming the identity map between equal opaque labels.
pub const IDENTITY_TOKEN: &str = "id";

impl GroupLabel {
    pub fn opaque(name: &str, props: &[&str]) -> Self {
        GroupLabel::Opaque { name: name.to_string(), props: props.iter().map(|s| s.to_string()).collect() }
    }

    pub fn is_opaque(&self) -> bool {
        matches!(self, GroupLabel::Opaque { .. })
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            GroupLabel::Abelian(_) => "ABELIAN",
            GroupLabel::Heisenberg(_) => "HEISENBERG_SUB",
            GroupLabel::Free(_) => "FREE",
            GroupLabel::Presented(_) => "PRESENTED",
            GroupLabel::Opaque { .. } => "OPAQUE",
        }
    }

    /// Number of distinguished generators; an edge map lists one image per generator.
    /// Opaque labels use a single symbolic image.
    pub fn generator_count(&self) -> usize {
        match self {
            GroupLabel::Abelian(g) => g.ambient_rank(),
            GroupLabel::Heisenberg(d) => d.generators().len(),
            GroupLabel::Free(r) => *r,
            GroupLabel::Presented(p) => p.generator_count(),
            GroupLabel::Opaque { .. } => 1,
        }
    }

    pub fn generator_names(&self) -> Vec<String> {
        match self {
            GroupLabel::Abelian(g) => (1..=g.ambient_rank()).map(|i| format!("g{i}")).collect(),
            GroupLabel::Heisenberg(d) => d.generator_names(),
            GroupLabel::Free(r) => (1..=*r).map(|i| format!("x{i}")).collect(),
            GroupLabel::Presented(p) => p.generator_names().to_vec(),
            GroupLabel::Opaque { .. } => vec![],
        }
    }

    /// The distinguished generators as elements.
    pub fn generators(&self) -> Vec<Element> {
        match self {
            GroupLabel::Abelian(g) => {
                let m = g.ambient_rank();
                (0..m).map(|i| Element::Vector((0..m).map(|j| BigInt::from((i == j) as i64)).collect())).collect()
            }
            GroupLabel::Heisenberg(d) => d.generators().into_iter().map(Element::Heis).collect(),
            GroupLabel::Free(_) | GroupLabel::Presented(_) => {
                (0..self.generator_count()).map(|i| Element::Word(Word::generator(i))).collect()
            }
            GroupLabel::Opaque { .. } => vec![],
        }
    }

    /// A presentation on [`generator_names`](Self::generator_names), if the label has one.
    pub fn presentation(&self) -> Option<FinitePresentation> {
        let names = self.generator_names();
        let relations = match self {
            GroupLabel::Abelian(g) => {
                let m = g.ambient_rank();
                let mut rels = Vec::new();
                for i in 0..m {
                    for j in i + 1..m {
                        rels.push(Word::generator(i).commutator(&Word::generator(j)));
                    }
                }
                for row in g.relations().basis() {
                    rels.push(vector_word(row)?);
                }
                rels
            }
            GroupLabel::Heisenberg(d) => d.relators(),
            GroupLabel::Free(_) => vec![],
            GroupLabel::Presented(p) => return Some(p.clone()),
            GroupLabel::Opaque { .. } => return None,
        };
        Some(FinitePresentation::new(names, relations))
    }

    pub fn abelianization(&self) -> Option<AbelianInvariants> {
        match self {
            GroupLabel::Abelian(g) => Some(g.invariants()),
            GroupLabel::Free(r) => Some(AbelianInvariants { free_rank: *r, torsion: vec![] }),
            GroupLabel::Opaque { .. } => None,
            _ => Some(abelianization(&self.presentation()?)),
        }
    }

    /// Structural equality after canonical forms.
    pub fn same_group(&self, other: &GroupLabel) -> bool {
        match (self, other) {
            (GroupLabel::Heisenberg(a), GroupLabel::Heisenberg(b)) => a.subgroup() == b.subgroup(),
            _ => self == other,
        }
    }

    pub fn has_prop(&self, prop: &str) -> bool {
        matches!(self, GroupLabel::Opaque { props, .. } if props.contains(prop))
    }

    /// Whether `e` is an element of this label in the right representation.
    pub fn well_typed(&self, e: &Element) -> Result<(), String> {
        match (self, e) {
            (GroupLabel::Abelian(g), Element::Vector(v)) => {
                if v.len() == g.ambient_rank() {
                    Ok(())
                } else {
                    Err(format!("vector of length {} in a group of ambient rank {}", v.len(), g.ambient_rank()))
                }
            }
            (GroupLabel::Heisenberg(d), Element::Heis(h)) => {
                if d.contains(h) {
                    Ok(())
                } else {
                    Err(format!("{h} is not in the subgroup"))
                }
            }
            (GroupLabel::Free(_) | GroupLabel::Presented(_), Element::Word(w)) => match w.max_generator() {
                Some(g) if g >= self.generator_count() => Err(format!("word uses generator {g} of {}", self.generator_count())),
                _ => Ok(()),
            },
            (GroupLabel::Opaque { .. }, Element::Token(_)) => Ok(()),
            _ => Err(format!("element of the wrong kind for a {} label", self.kind_name())),
        }
    }

    pub fn identity(&self) -> Element {
        match self {
            GroupLabel::Abelian(g) => Element::Vector(vec![BigInt::zero(); g.ambient_rank()]),
            GroupLabel::Heisenberg(_) => Element::Heis(HeisElement::identity()),
            GroupLabel::Free(_) | GroupLabel::Presented(_) => Element::Word(Word::identity()),
            GroupLabel::Opaque { .. } => Element::Token("1".into()),
        }
    }

    pub fn mul(&self, a: &Element, b: &Element) -> Option<Element> {
        match (a, b) {
            (Element::Vector(x), Element::Vector(y)) => Some(Element::Vector(x.iter().zip(y).map(|(p, q)| p + q).collect())),
            (Element::Heis(x), Element::Heis(y)) => Some(Element::Heis(heis_mul(x, y))),
            (Element::Word(x), Element::Word(y)) => Some(Element::Word(x.mul(y))),
            _ => None,
        }
    }

    pub fn inverse(&self, a: &Element) -> Option<Element> {
        match a {
            Element::Vector(x) => Some(Element::Vector(x.iter().map(|p| -p).collect())),
            Element::Heis(x) => Some(Element::Heis(heis_inv(x))),
            Element::Word(x) => Some(Element::Word(x.inverse())),
            Element::Token(_) => None,
        }
    }

    /// `h a h⁻¹`.
    pub fn conjugate(&self, a: &Element, h: &Element) -> Option<Element> {
        let ha = self.mul(h, a)?;
        self.mul(&ha, &self.inverse(h)?)
    }

    /// Evaluates a word in the images `gens`.
    pub fn eval(&self, w: &Word, gens: &[Element]) -> Option<Element> {
        let mut acc = self.identity();
        for &(g, e) in w.syllables() {
            let base = gens.get(g)?;
            let p = self.pow(base, e)?;
            acc = self.mul(&acc, &p)?;
        }
        Some(acc)
    }

    pub fn pow(&self, a: &Element, k: i64) -> Option<Element> {
        match a {
            Element::Vector(x) => Some(Element::Vector(x.iter().map(|p| p * k).collect())),
            Element::Heis(x) => Some(Element::Heis(x.pow_i64(k))),
            Element::Word(x) => Some(Element::Word(x.pow(k))),
            Element::Token(_) => None,
        }
    }

    pub fn is_identity(&self, a: &Element) -> TriState {
        match (self, a) {
            (GroupLabel::Abelian(g), Element::Vector(v)) => TriState::from_bool(g.is_zero(v)),
            (GroupLabel::Heisenberg(_), Element::Heis(h)) => TriState::from_bool(h.is_identity()),
            (GroupLabel::Free(_), Element::Word(w)) => TriState::from_bool(w.is_identity()),
            (GroupLabel::Presented(p), Element::Word(w)) => {
                if w.is_identity() || p.relations().iter().any(|r| r == w || r.inverse() == *w) {
                    return TriState::Yes;
                }
                // a nonzero image in the abelianization refutes triviality
                let n = p.generator_count();
                let rows: Vec<Vector> = p
                    .relations()
                    .iter()
                    .map(|r| r.exponent_sums(n).into_iter().map(BigInt::from).collect())
                    .collect();
                let rel = Lattice::from_generators(n, &rows).expect("consistent rows");
                let sums: Vector = w.exponent_sums(n).into_iter().map(BigInt::from).collect();
                if rel.contains(&sums) {
                    TriState::Unknown
                } else {
                    TriState::No
                }
            }
            (GroupLabel::Opaque { .. }, Element::Token(t)) if t == "1" => TriState::Yes,
            _ => TriState::Unknown,
        }
    }

    pub fn equal(&self, a: &Element, b: &Element) -> TriState {
        if a == b {
            return TriState::Yes;
        }
        match (self.inverse(b), a) {
            (Some(bi), _) => match self.mul(a, &bi) {
                Some(d) => self.is_identity(&d),
                None => TriState::Unknown,
            },
            (None, _) => TriState::Unknown,
        }
    }

    /// The element as a word over this label's generators.
    pub fn element_to_word(&self, e: &Element) -> Option<Word> {
        match (self, e) {
            (GroupLabel::Abelian(_), Element::Vector(v)) => vector_word(v),
            (GroupLabel::Heisenberg(d), Element::Heis(h)) => heis_word(d, h),
            (GroupLabel::Free(_) | GroupLabel::Presented(_), Element::Word(w)) => Some(w.clone()),
            _ => None,
        }
    }

    /// Evaluates a word over this label's generators.
    pub fn word_to_element(&self, w: &Word) -> Option<Element> {
        if self.is_opaque() {
            return None;
        }
        self.eval(w, &self.generators())
    }

    /// Decides whether the images generate the whole label.
    pub fn generated_by(&self, images: &[Element]) -> TriState {
        match self {
            GroupLabel::Abelian(g) => {
                let Some(vs) = vectors(images) else { return TriState::Unknown };
                match lattice::canonicalize(&vs, g) {
                    Ok(s) => TriState::from_bool(s == g.whole()),
                    Err(_) => TriState::Unknown,
                }
            }
            GroupLabel::Heisenberg(d) => {
                let Some(hs) = heis_elements(images) else { return TriState::Unknown };
                TriState::from_bool(HeisSubgroup::generated_by(&hs) == d.subgroup())
            }
            GroupLabel::Free(_) | GroupLabel::Presented(_) => {
                let Some(words) = words(images) else { return TriState::Unknown };
                let n = self.generator_count();
                let hit: BTreeSet<usize> = words
                    .iter()
                    .filter_map(|w| match w.syllables() {
                        [(g, e)] if e.abs() == 1 => Some(*g),
                        _ => None,
                    })
                    .collect();
                if hit.len() == n {
                    return TriState::Yes;
                }
                // the images must at least generate the abelianization
                let pres = self.presentation().expect("presentable");
                let rows: Vec<Vector> = pres
                    .relations()
                    .iter()
                    .map(|r| r.exponent_sums(n).into_iter().map(BigInt::from).collect())
                    .collect();
                let ab = LatticeGroup::new(n, &rows).expect("consistent rows");
                let sums: Vec<Vector> =
                    words.iter().map(|w| w.exponent_sums(n).into_iter().map(BigInt::from).collect()).collect();
                let onto_ab = lattice::canonicalize(&sums, &ab).map(|s| s == ab.whole()).unwrap_or(false);
                if !onto_ab {
                    TriState::No
                } else if matches!(self, GroupLabel::Free(r) if *r <= 1) {
                    TriState::Yes
                } else {
                    TriState::Unknown
                }
            }
            GroupLabel::Opaque { .. } => TriState::Unknown,
        }
    }

    /// Whether the group is trivial, when decidable.
    pub fn is_trivial(&self) -> TriState {
        match self {
            GroupLabel::Opaque { props, .. } => {
                if props.contains("infinite") || props.contains("non-abelian") || props.contains("non-cyclic") {
                    TriState::No
                } else {
                    TriState::Unknown
                }
            }
            GroupLabel::Presented(p) => {
                if p.generator_count() == 0 {
                    TriState::Yes
                } else if !abelianization(p).is_trivial() {
                    TriState::No
                } else {
                    TriState::Unknown
                }
            }
            _ => TriState::from_bool(self.abelianization().is_some_and(|a| a.is_trivial())),
        }
    }

    /// Whether the declared properties of an opaque label rule out an
    /// isomorphism with `other`.
    pub fn props_refute(&self, other: &GroupLabel) -> bool {
        let GroupLabel::Opaque { props, .. } = self else { return false };
        let has = |p: &str| props.contains(p);
        let rank_two_abelian = other.is_abelian() == TriState::Yes
            && other.abelianization().is_some_and(|a| a.free_rank >= 2);
        let torsion = matches!(other, GroupLabel::Abelian(g) if !g.invariants().torsion.is_empty());
        (has("non-abelian") && other.is_abelian() == TriState::Yes)
            || (has("non-cyclic") && other.is_cyclic() == TriState::Yes)
            || (has("infinite") && other.is_finite() == TriState::Yes)
            || (has("finite") && other.is_finite() == TriState::No)
            || (has("hyperbolic") && rank_two_abelian)
            || (has("torsion-free") && torsion)
    }

    /// Abelian / cyclic / finite, when decidable.
    fn is_abelian(&self) -> TriState {
        match self {
            GroupLabel::Abelian(_) => TriState::Yes,
            GroupLabel::Heisenberg(d) => TriState::from_bool(d.subgroup().is_abelian()),
            GroupLabel::Free(r) => TriState::from_bool(*r <= 1),
            GroupLabel::Presented(_) => TriState::Unknown,
            GroupLabel::Opaque { props, .. } => {
                if props.contains("non-abelian") {
                    TriState::No
                } else {
                    TriState::Unknown
                }
            }
        }
    }

    fn is_cyclic(&self) -> TriState {
        match self {
            GroupLabel::Abelian(g) => TriState::from_bool(g.invariants().generator_count() <= 1),
            GroupLabel::Heisenberg(d) => TriState::from_bool(d.subgroup().hirsch_length() <= 1),
            GroupLabel::Free(r) => TriState::from_bool(*r <= 1),
            GroupLabel::Presented(p) => {
                if abelianization(p).generator_count() > 1 {
                    TriState::No
                } else {
                    TriState::Unknown
                }
            }
            GroupLabel::Opaque { props, .. } => {
                if props.contains("non-cyclic") || props.contains("non-abelian") {
                    TriState::No
                } else {
                    TriState::Unknown
                }
            }
        }
    }

    fn is_finite(&self) -> TriState {
        match self {
            GroupLabel::Opaque { props, .. } => {
                if props.contains("infinite") {
                    TriState::No
                } else if props.contains("finite") {
                    TriState::Yes
                } else {
                    TriState::Unknown
                }
            }
            GroupLabel::Heisenberg(d) => TriState::from_bool(d.subgroup().hirsch_length() == 0),
            GroupLabel::Free(r) => TriState::from_bool(*r == 0),
            GroupLabel::Abelian(g) => TriState::from_bool(g.free_rank() == 0),
            GroupLabel::Presented(p) => {
                if abelianization(p).free_rank > 0 {
                    TriState::No
                } else {
                    TriState::Unknown
                }
            }
        }
    }
}

/// Whether the homomorphism `source -> target` given by `images` is onto.
pub fn surjective(source: &GroupLabel, images: &[Element], target: &GroupLabel) -> TriState {
    if let GroupLabel::Opaque { .. } = target {
        if source.same_group(target) && images == [Element::Token(IDENTITY_TOKEN.into())] {
            return TriState::Yes;
        }
        // a quotient of an abelian, cyclic or finite group is again one
        let refuted = (source.is_abelian() == TriState::Yes && target.is_abelian() == TriState::No)
            || (source.is_cyclic() == TriState::Yes && target.is_cyclic() == TriState::No)
            || (source.is_finite() == TriState::Yes && target.is_finite() == TriState::No);
        return if refuted { TriState::No } else { TriState::Unknown };
    }
    if source.is_opaque() {
        return TriState::Unknown;
    }
    target.generated_by(images)
}

/// Whether the homomorphism `source -> target` given by `images` is injective.
/// Assumes the relations of `source` hold among the images.
pub fn injective(source: &GroupLabel, images: &[Element], target: &GroupLabel) -> TriState {
    if source.is_trivial() == TriState::Yes {
        return TriState::Yes;
    }
    if source.same_group(target) && images == target.generators().as_slice() && !images.is_empty() {
        return TriState::Yes;
    }
    if source.is_opaque() {
        let identity = source.same_group(target) && images == [Element::Token(IDENTITY_TOKEN.into())];
        return if identity { TriState::Yes } else { TriState::Unknown };
    }
    let src_ab = source.abelianization();
    let infinite_cyclic = matches!(&src_ab, Some(a) if a.free_rank == 1 && a.torsion.is_empty())
        && source.is_cyclic() == TriState::Yes;
    match target {
        GroupLabel::Abelian(t) => match source {
            GroupLabel::Abelian(s) => {
                let Some(vs) = vectors(images) else { return TriState::Unknown };
                match lattice::map_kernel(&vs, t) {
                    Ok(k) => TriState::from_bool(k == *s.relations()),
                    Err(_) => TriState::Unknown,
                }
            }
            _ if infinite_cyclic => {
                let Some(vs) = vectors(images) else { return TriState::Unknown };
                match lattice::map_kernel(&vs, t) {
                    Ok(k) => TriState::from_bool(k.rank() == 0),
                    Err(_) => TriState::Unknown,
                }
            }
            _ => {
                // the image is abelian, so a non-abelian source cannot embed
                if source.is_abelian() == TriState::No {
                    TriState::No
                } else {
                    TriState::Unknown
                }
            }
        },
        GroupLabel::Heisenberg(_) => {
            // subgroups of H are torsion-free nilpotent; an onto map between
            // such groups of equal Hirsch length is injective
            let Some(hs) = heis_elements(images) else { return TriState::Unknown };
            let image_h = HeisSubgroup::generated_by(&hs).hirsch_length();
            match source {
                GroupLabel::Abelian(s) => {
                    if !s.invariants().torsion.is_empty() {
                        TriState::No
                    } else {
                        TriState::from_bool(image_h == s.free_rank())
                    }
                }
                GroupLabel::Heisenberg(d) => TriState::from_bool(image_h == d.subgroup().hirsch_length()),
                GroupLabel::Free(r) if *r >= 2 => TriState::No,
                GroupLabel::Free(_) => TriState::from_bool(image_h == 1),
                _ => TriState::Unknown,
            }
        }
        GroupLabel::Free(_) => {
            // a torsion-free target kills no proper subgroup of Z unless it kills all
            if infinite_cyclic {
                return TriState::any(images.iter().map(|i| target.is_identity(i).not()));
            }
            match source {
                GroupLabel::Free(r) => {
                    // an image whose abelianization has rank r is free of rank r
                    let Some(ws) = words(images) else { return TriState::Unknown };
                    let n = target.generator_count();
                    let rows: Vec<Vector> =
                        ws.iter().map(|w| w.exponent_sums(n).into_iter().map(BigInt::from).collect()).collect();
                    let rank = Lattice::from_generators(n, &rows).map(|l| l.rank()).unwrap_or(0);
                    if rank == *r {
                        TriState::Yes
                    } else {
                        TriState::Unknown
                    }
                }
                GroupLabel::Abelian(s) => {
                    // free groups are torsion-free with cyclic abelian subgroups
                    if !s.invariants().torsion.is_empty() || s.free_rank() >= 2 {
                        TriState::No
                    } else {
                        TriState::Unknown
                    }
                }
                GroupLabel::Heisenberg(d) => {
                    if d.subgroup().hirsch_length() >= 2 {
                        TriState::No
                    } else {
                        TriState::Unknown
                    }
                }
                _ => TriState::Unknown,
            }
        }
        GroupLabel::Presented(p) => {
            // a map that stays injective after abelianizing the target is injective
            let Some(ws) = words(images) else { return TriState::Unknown };
            let n = p.generator_count();
            let rows: Vec<Vector> = p
                .relations()
                .iter()
                .map(|r| r.exponent_sums(n).into_iter().map(BigInt::from).collect())
                .collect();
            let Ok(ab) = LatticeGroup::new(n, &rows) else { return TriState::Unknown };
            let vs: Vec<Vector> = ws.iter().map(|w| w.exponent_sums(n).into_iter().map(BigInt::from).collect()).collect();
            let Ok(kernel) = lattice::map_kernel(&vs, &ab) else { return TriState::Unknown };
            let certified = match source {
                GroupLabel::Abelian(s) => kernel == *s.relations(),
                _ => infinite_cyclic && kernel.rank() == 0,
            };
            if certified {
                TriState::Yes
            } else {
                TriState::Unknown
            }
        }
        _ => TriState::Unknown,
    }
}

/// A word `w` over `sub_images` with `w(sub_images) = e` in `target`:
/// `Ok(Some(w))` when found, `Ok(None)` when `e` provably lies outside the
/// generated subgroup, `Err(())` when undecided.
pub fn express(target: &GroupLabel, sub_images: &[Element], e: &Element) -> Result<Option<Word>, ()> {
    if target.is_identity(e) == TriState::Yes {
        return Ok(Some(Word::identity()));
    }
    if let Some(i) = sub_images.iter().position(|s| s == e) {
        return Ok(Some(Word::generator(i)));
    }
    // the subgroup is everything, written in the label's own generators
    if sub_images == target.generators().as_slice() && !sub_images.is_empty() {
        return target.element_to_word(e).map(Some).ok_or(());
    }
    match target {
        GroupLabel::Abelian(g) => {
            let (Some(vs), Element::Vector(v)) = (vectors(sub_images), e) else { return Err(()) };
            match lattice::combination(&vs, g, v) {
                Ok(Some(k)) => Ok(vector_word(&k)),
                Ok(None) => Ok(None),
                Err(_) => Err(()),
            }
        }
        GroupLabel::Heisenberg(_) => {
            let (Some(hs), Element::Heis(h)) = (heis_elements(sub_images), e) else { return Err(()) };
            Ok(HeisSubgroup::generated_by_tracked(&hs).express(h))
        }
        _ => Err(()),
    }
}

fn vectors(images: &[Element]) -> Option<Vec<Vector>> {
    images.iter().map(|e| if let Element::Vector(v) = e { Some(v.clone()) } else { None }).collect()
}

fn heis_elements(images: &[Element]) -> Option<Vec<HeisElement>> {
    images.iter().map(|e| if let Element::Heis(h) = e { Some(h.clone()) } else { None }).collect()
}

fn words(images: &[Element]) -> Option<Vec<Word>> {
    images.iter().map(|e| if let Element::Word(w) = e { Some(w.clone()) } else { None }).collect()
}

/// `g1^v1 g2^v2 ...`
fn vector_word(v: &[BigInt]) -> Option<Word> {
    let syllables: Option<Vec<(usize, i64)>> = v.iter().enumerate().map(|(i, x)| i64::try_from(x).ok().map(|e| (i, e))).collect();
    Some(Word::from_syllables(syllables?))
}

fn heis_word(d: &HeisSubgroupDesc, h: &HeisElement) -> Option<Word> {
    let n = match d {
        HeisSubgroupDesc::Full => BigInt::one(),
        HeisSubgroupDesc::Hn(n) => BigInt::from(*n),
        _ => return HeisSubgroup::generated_by_tracked(&d.generators()).express(h),
    };
    if !d.contains(h) {
        return None;
    }
    // (x, y, z) = A^(x/n) B^(y/n) c^(z - xy) with A = a^n, B = b^n
    let p = i64::try_from(&h.x / &n).ok()?;
    let q = i64::try_from(&h.y / &n).ok()?;
    let r = i64::try_from(&h.z - &h.x * &h.y).ok()?;
    Some(Word::from_syllables([(0, p), (1, q), (2, r)]))
}
