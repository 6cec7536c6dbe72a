//! The discrete Heisenberg group and its finitely generated subgroups.
//!
//! Coordinates: `(x, y, z)` is the unitriangular matrix with superdiagonal
//! `(x, y)` and corner `z`, so that
//!
//! ```text
//! (x1, y1, z1) (x2, y2, z2) = (x1 + x2, y1 + y2, z1 + z2 + x1 y2)
//! ```
//!
//! With `a = (1,0,0)`, `b = (0,1,0)`, `c = (0,0,1)` we get `[a, b] = c` and
//! `c` central. Conjugation by `h = (p, q, r)` is
//! `(x, y, z) ↦ (x, y, z + p y - q x)`.
//!
//! The semidirect product view `Z^2 ⋊ Z = <α, β, t | αβ = βα, tαt⁻¹ = αβ, tβt⁻¹ = β>`
//! is realised by `t = a`, `α = b`, `β = c`: conjugation by `a` sends
//! `b ↦ b c` and fixes `c`. On coordinates, conjugation by `t^n` is
//! `(x, y, z) ↦ (x, y, z + n y)`; no further central correction appears.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::invariants::Word;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolycyclicError {
    #[error("subgroup parameter n must be positive")]
    ZeroParameter,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HeisElement {
    pub x: BigInt,
    pub y: BigInt,
    pub z: BigInt,
}

impl HeisElement {
    pub fn new(x: impl Into<BigInt>, y: impl Into<BigInt>, z: impl Into<BigInt>) -> Self {
        HeisElement { x: x.into(), y: y.into(), z: z.into() }
    }

    pub fn identity() -> Self {
        HeisElement::new(0, 0, 0)
    }

    pub fn a() -> Self {
        HeisElement::new(1, 0, 0)
    }

    pub fn b() -> Self {
        HeisElement::new(0, 1, 0)
    }

    pub fn c() -> Self {
        HeisElement::new(0, 0, 1)
    }

    pub fn is_identity(&self) -> bool {
        self.x.is_zero() && self.y.is_zero() && self.z.is_zero()
    }

    pub fn is_central(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn pow(&self, k: &BigInt) -> HeisElement {
        // (x,y,z)^k = (kx, ky, kz + xy k(k-1)/2), valid for every integer k
        let tri = k * (k - BigInt::one()) / 2;
        HeisElement {
            x: k * &self.x,
            y: k * &self.y,
            z: k * &self.z + &self.x * &self.y * tri,
        }
    }

    pub fn pow_i64(&self, k: i64) -> HeisElement {
        self.pow(&BigInt::from(k))
    }

    /// `h g h⁻¹` where `self = g`.
    pub fn conjugate_by(&self, h: &HeisElement) -> HeisElement {
        HeisElement {
            x: self.x.clone(),
            y: self.y.clone(),
            z: &self.z + &h.x * &self.y - &h.y * &self.x,
        }
    }

    /// Evaluates a word over `gens`.
    pub fn eval(word: &Word, gens: &[HeisElement]) -> HeisElement {
        word.syllables()
            .iter()
            .fold(HeisElement::identity(), |acc, &(g, e)| heis_mul(&acc, &gens[g].pow_i64(e)))
    }
}

impl fmt::Display for HeisElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}, {}]", self.x, self.y, self.z)
    }
}

pub fn heis_mul(g: &HeisElement, h: &HeisElement) -> HeisElement {
    HeisElement {
        x: &g.x + &h.x,
        y: &g.y + &h.y,
        z: &g.z + &h.z + &g.x * &h.y,
    }
}

pub fn heis_inv(g: &HeisElement) -> HeisElement {
    HeisElement { x: -&g.x, y: -&g.y, z: &g.x * &g.y - &g.z }
}

/// `g h g⁻¹ h⁻¹`, always central.
pub fn heis_comm(g: &HeisElement, h: &HeisElement) -> HeisElement {
    HeisElement::new(0, 0, &g.x * &h.y - &g.y * &h.x)
}

/// Conjugation by `t^n` in the semidirect product coordinates.
pub fn stable_conjugation(n: i64, g: &HeisElement) -> HeisElement {
    g.conjugate_by(&HeisElement::a().pow_i64(n))
}

/// The named subgroups used by the splitting examples.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum HeisSubgroupDesc {
    Full,
    /// `H_n = <a^n, b^n, c>`
    Hn(u64),
    Center,
    /// `[H_n, H_n] = <c^(n^2)>`
    DerivedOfHn(u64),
    Cyclic(HeisElement),
}

impl HeisSubgroupDesc {
    pub fn hn(n: u64) -> Result<Self, PolycyclicError> {
        if n == 0 {
            return Err(PolycyclicError::ZeroParameter);
        }
        Ok(HeisSubgroupDesc::Hn(n))
    }

    /// The distinguished generators, as elements of `H`.
    pub fn generators(&self) -> Vec<HeisElement> {
        match self {
            HeisSubgroupDesc::Full => vec![HeisElement::a(), HeisElement::b(), HeisElement::c()],
            HeisSubgroupDesc::Hn(n) => {
                vec![HeisElement::new(*n, 0, 0), HeisElement::new(0, *n, 0), HeisElement::c()]
            }
            HeisSubgroupDesc::Center => vec![HeisElement::c()],
            HeisSubgroupDesc::DerivedOfHn(n) => vec![HeisElement::new(0, 0, n * n)],
            HeisSubgroupDesc::Cyclic(g) => vec![g.clone()],
        }
    }

    pub fn generator_names(&self) -> Vec<String> {
        let names: &[&str] = match self {
            HeisSubgroupDesc::Full => &["a", "b", "c"],
            HeisSubgroupDesc::Hn(_) => &["an", "bn", "c"],
            HeisSubgroupDesc::Center => &["c"],
            HeisSubgroupDesc::DerivedOfHn(_) => &["d"],
            HeisSubgroupDesc::Cyclic(_) => &["g"],
        };
        names.iter().map(|s| s.to_string()).collect()
    }

    /// Defining relators over [`generators`](Self::generators).
    pub fn relators(&self) -> Vec<Word> {
        let x = Word::generator(0);
        let y = Word::generator(1);
        let z = Word::generator(2);
        match self {
            HeisSubgroupDesc::Full | HeisSubgroupDesc::Hn(_) => {
                let k = match self {
                    HeisSubgroupDesc::Hn(n) => (n * n) as i64,
                    _ => 1,
                };
                vec![
                    x.commutator(&y).mul(&Word::power_of(2, -k)),
                    x.commutator(&z),
                    y.commutator(&z),
                ]
            }
            HeisSubgroupDesc::Cyclic(g) if g.is_identity() => vec![Word::generator(0)],
            _ => vec![],
        }
    }

    pub fn subgroup(&self) -> HeisSubgroup {
        HeisSubgroup::generated_by(&self.generators())
    }

    pub fn contains(&self, g: &HeisElement) -> bool {
        match self {
            HeisSubgroupDesc::Full => true,
            HeisSubgroupDesc::Hn(n) => {
                let n = BigInt::from(*n);
                g.x.is_multiple_of(&n) && g.y.is_multiple_of(&n)
            }
            _ => self.subgroup().contains(g),
        }
    }
}

/// `g ∈ H_n`.
pub fn hn_membership(n: u64, g: &HeisElement) -> Result<bool, PolycyclicError> {
    Ok(HeisSubgroupDesc::hn(n)?.contains(g))
}

/// `[Z(H_n) : [H_n, H_n]]`, computed from the subgroup machinery.
pub fn hn_center_derived_index(n: u64) -> Result<BigInt, PolycyclicError> {
    let desc = HeisSubgroupDesc::hn(n)?;
    let gens = desc.generators();
    let mut commutators = Vec::new();
    for (i, g) in gens.iter().enumerate() {
        for h in &gens[i + 1..] {
            commutators.push(heis_comm(g, h));
        }
    }
    let derived = HeisSubgroup::generated_by(&commutators);
    // H_n is non-abelian, so its center is its intersection with <c>
    let center = desc.subgroup();
    let center_gen = center.central_generator();
    Ok(derived.central_generator() / center_gen)
}

/// Canonical form of a finitely generated subgroup `K ≤ H`.
///
/// `first` has `x > 0`, `second` has `x = 0, y > 0` and `K ∩ Z(H) = <c^central>`.
/// The projection of `K` to `Z^2` has Hermite basis `first, second` (when
/// present, with `0 <= first.y < second.y`) and the `z`-coordinates of the lifts are
/// reduced modulo `central`. This makes equality structural.
#[derive(Clone, Debug)]
pub struct HeisSubgroup {
    first: Option<Tracked>,
    second: Option<Tracked>,
    central: BigInt,
    central_word: Option<Word>,
}

/// An element together with a word producing it, when words are tracked.
#[derive(Clone, Debug)]
struct Tracked {
    elem: HeisElement,
    word: Option<Word>,
}

// the tracking word is bookkeeping, not part of the subgroup's identity
impl PartialEq for Tracked {
    fn eq(&self, other: &Self) -> bool {
        self.elem == other.elem
    }
}
impl Eq for Tracked {}
impl std::hash::Hash for Tracked {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.elem.hash(state)
    }
}

impl PartialEq for HeisSubgroup {
    fn eq(&self, other: &Self) -> bool {
        self.first == other.first && self.second == other.second && self.central == other.central
    }
}
impl Eq for HeisSubgroup {}
impl std::hash::Hash for HeisSubgroup {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.first.hash(state);
        self.second.hash(state);
        self.central.hash(state);
    }
}

impl Tracked {
    fn mul(&self, other: &Tracked) -> Tracked {
        let word = self.word.as_ref().zip(other.word.as_ref()).map(|(u, v)| u.mul(v));
        Tracked { elem: heis_mul(&self.elem, &other.elem), word }
    }

    fn pow(&self, k: &BigInt) -> Tracked {
        let word = self.word.as_ref().map(|w| w.pow(i64::try_from(k).expect("exponent fits in i64")));
        Tracked { elem: self.elem.pow(k), word }
    }

    fn inverse(&self) -> Tracked {
        Tracked { elem: heis_inv(&self.elem), word: self.word.as_ref().map(Word::inverse) }
    }
}

/// Euclidean reduction of one coordinate; returns the survivor and the rest.
fn reduce_coordinate(mut items: Vec<Tracked>, coord: fn(&HeisElement) -> &BigInt) -> (Option<Tracked>, Vec<Tracked>) {
    loop {
        let nonzero: Vec<usize> = (0..items.len()).filter(|&i| !coord(&items[i].elem).is_zero()).collect();
        if nonzero.len() <= 1 {
            let survivor = nonzero.first().map(|&i| items.remove(i));
            let survivor = survivor.map(|t| if coord(&t.elem).is_negative() { t.inverse() } else { t });
            return (survivor, items);
        }
        let pivot = *nonzero.iter().min_by_key(|&&i| coord(&items[i].elem).abs()).unwrap();
        let p = items[pivot].clone();
        for &i in &nonzero {
            if i == pivot {
                continue;
            }
            let q = coord(&items[i].elem).div_floor(coord(&p.elem));
            items[i] = items[i].mul(&p.pow(&-q));
        }
    }
}

impl HeisSubgroup {
    pub fn generated_by(gens: &[HeisElement]) -> Self {
        HeisSubgroup::build(gens, false)
    }

    /// Like [`generated_by`](Self::generated_by), but remembers how the
    /// canonical generators are written in `gens` so that [`express`](Self::express)
    /// can return words. Words may grow quickly with the size of the entries.
    pub fn generated_by_tracked(gens: &[HeisElement]) -> Self {
        HeisSubgroup::build(gens, true)
    }

    fn build(gens: &[HeisElement], track: bool) -> Self {
        let items: Vec<Tracked> = gens
            .iter()
            .enumerate()
            .map(|(i, g)| Tracked { elem: g.clone(), word: track.then(|| Word::generator(i)) })
            .collect();
        let (first, rest) = reduce_coordinate(items, |g| &g.x);
        let (second, rest) = reduce_coordinate(rest, |g| &g.y);
        let mut centrals = rest;
        if let (Some(f), Some(s)) = (&first, &second) {
            let comm = Tracked {
                elem: heis_comm(&f.elem, &s.elem),
                word: f.word.as_ref().zip(s.word.as_ref()).map(|(u, v)| u.commutator(v)),
            };
            centrals.push(comm);
        }
        // extended gcd over the central elements; they commute, so words combine freely
        let mut central_t = Tracked { elem: HeisElement::identity(), word: track.then(Word::identity) };
        for t in centrals {
            if t.elem.z.is_zero() {
                continue;
            }
            let e = central_t.elem.z.extended_gcd(&t.elem.z);
            central_t = central_t.pow(&e.x).mul(&t.pow(&e.y));
        }
        if central_t.elem.z.is_negative() {
            central_t = central_t.inverse();
        }
        let central = central_t.elem.z.clone();
        let central_word = central_t.word.clone();
        let mut first = first;
        let mut second = second;
        if let (Some(f), Some(s)) = (first.as_mut(), second.as_ref()) {
            let q = f.elem.y.div_floor(&s.elem.y);
            *f = f.mul(&s.pow(&-q));
        }
        if !central.is_zero() {
            for t in [first.as_mut(), second.as_mut()].into_iter().flatten() {
                let q = t.elem.z.div_floor(&central);
                *t = t.mul(&central_t.pow(&-q));
            }
        }
        HeisSubgroup { first, second, central, central_word }
    }

    pub fn full() -> Self {
        HeisSubgroupDesc::Full.subgroup()
    }

    /// `K ∩ Z(H) = <c^k>`; returns `k` (zero when trivial).
    pub fn central_generator(&self) -> BigInt {
        self.central.clone()
    }

    /// Hirsch length (0 to 3).
    pub fn hirsch_length(&self) -> usize {
        self.first.is_some() as usize + self.second.is_some() as usize + (!self.central.is_zero()) as usize
    }

    pub fn is_abelian(&self) -> bool {
        // non-abelian iff the projection has rank 2
        !(self.first.is_some() && self.second.is_some())
    }

    pub fn contains(&self, g: &HeisElement) -> bool {
        self.exponents(g).is_some()
    }

    pub fn contains_subgroup(&self, other: &HeisSubgroup) -> bool {
        other.canonical_generators().iter().all(|g| self.contains(g))
    }

    pub fn canonical_generators(&self) -> Vec<HeisElement> {
        let mut v: Vec<HeisElement> = [&self.first, &self.second].into_iter().flatten().map(|t| t.elem.clone()).collect();
        if !self.central.is_zero() {
            v.push(HeisElement::new(0, 0, self.central.clone()));
        }
        v
    }

    /// Exponents `(p, q, k)` with `g = first^p second^q c^(k central)`, or
    /// `None` when `g ∉ K`. Missing canonical generators get exponent zero.
    fn exponents(&self, g: &HeisElement) -> Option<(BigInt, BigInt, BigInt)> {
        let mut rest = g.clone();
        let step = |t: &Option<Tracked>, coord: fn(&HeisElement) -> &BigInt, rest: &mut HeisElement| match t {
            Some(t) => {
                let (p, r) = coord(rest).div_rem(coord(&t.elem));
                if !r.is_zero() {
                    return None;
                }
                *rest = heis_mul(&t.elem.pow(&-&p), rest);
                Some(p)
            }
            None => coord(rest).is_zero().then(BigInt::zero),
        };
        let p = step(&self.first, |g| &g.x, &mut rest)?;
        let q = step(&self.second, |g| &g.y, &mut rest)?;
        if self.central.is_zero() {
            return rest.z.is_zero().then(|| (p, q, BigInt::zero()));
        }
        let (k, r) = rest.z.div_rem(&self.central);
        r.is_zero().then_some((p, q, k))
    }

    /// A word over the generating set this subgroup was built from that
    /// evaluates to `g`, or `None` when `g ∉ K`.
    ///
    /// # Panics
    /// If the subgroup was not built with [`generated_by_tracked`](Self::generated_by_tracked).
    pub fn express(&self, g: &HeisElement) -> Option<Word> {
        let (p, q, k) = self.exponents(g)?;
        let word_of = |t: &Option<Tracked>| t.as_ref().map(|t| t.word.clone().expect("words are tracked"));
        let mut w = Word::identity();
        for (t, e) in [(word_of(&self.first), p), (word_of(&self.second), q), (self.central_word.clone(), k)] {
            if let Some(t) = t {
                w = w.mul(&t.pow(i64::try_from(&e).ok()?));
            }
        }
        Some(w)
    }

    /// Whether some `h ∈ self` conjugates each `from[i]` to `to[i]`.
    pub fn simultaneously_conjugate(&self, from: &[HeisElement], to: &[HeisElement]) -> bool {
        if from.len() != to.len() {
            return false;
        }
        if from.iter().zip(to).any(|(f, t)| f.x != t.x || f.y != t.y) {
            return false;
        }
        // h = α·first + β·second on the projection; the z-shift is p y - q x
        let lifts: Vec<&HeisElement> = [&self.first, &self.second].into_iter().flatten().map(|t| &t.elem).collect();
        let columns: Vec<Vec<BigInt>> = lifts
            .iter()
            .map(|u| from.iter().map(|g| &u.x * &g.y - &u.y * &g.x).collect())
            .collect();
        let target: Vec<BigInt> = from.iter().zip(to).map(|(f, t)| &t.z - &f.z).collect();
        let lattice = crate::lattice::Lattice::from_generators(from.len(), &columns).expect("consistent dimension");
        lattice.contains(&target)
    }
}
