//! Finitely generated abelian groups `Z^m / L` and their subgroups.
//!
//! A subgroup `S` of `Z^m / L` is stored through its preimage lattice in
//! `Z^m`, which always contains `L`. Preimages are kept in Hermite form (see
//! [`normal_form`]), so subgroup equality and hashing are structural.

pub mod normal_form;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

pub use normal_form::{Matrix, Vector};
use normal_form::{abs_det, coordinates, echelon, hermite_basis, integer_kernel, smith_invariants, transpose};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("dimension mismatch: expected {expected} coordinates, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("not a subgroup: the first group is not contained in the second")]
    NotASubgroup,
    #[error("subgroups live in different parent groups")]
    ParentMismatch,
}

/// A sublattice of `Z^dim`, stored by its Hermite basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lattice {
    dim: usize,
    basis: Matrix,
}

impl Lattice {
    pub fn from_generators(dim: usize, gens: &[Vector]) -> Result<Self, LatticeError> {
        for g in gens {
            check_len(dim, g)?;
        }
        Ok(Lattice { dim, basis: hermite_basis(gens, dim) })
    }

    pub fn zero(dim: usize) -> Self {
        Lattice { dim, basis: Vec::new() }
    }

    pub fn full(dim: usize) -> Self {
        let basis = (0..dim)
            .map(|i| (0..dim).map(|j| BigInt::from((i == j) as i64)).collect())
            .collect();
        Lattice { dim, basis }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        v.len() == self.dim && coordinates(&self.basis, v).is_some()
    }

    pub fn coordinates(&self, v: &[BigInt]) -> Option<Vector> {
        if v.len() != self.dim {
            return None;
        }
        coordinates(&self.basis, v)
    }

    pub fn contains_lattice(&self, other: &Lattice) -> bool {
        other.basis.iter().all(|b| self.contains(b))
    }

    pub fn sum(&self, other: &Lattice) -> Lattice {
        let mut gens = self.basis.clone();
        gens.extend(other.basis.iter().cloned());
        Lattice { dim: self.dim, basis: hermite_basis(&gens, self.dim) }
    }

    pub fn with_vectors(&self, extra: &[Vector]) -> Lattice {
        let mut gens = self.basis.clone();
        gens.extend(extra.iter().cloned());
        Lattice { dim: self.dim, basis: hermite_basis(&gens, self.dim) }
    }

    pub fn intersect(&self, other: &Lattice) -> Lattice {
        if self.rank() == 0 || other.rank() == 0 {
            return Lattice::zero(self.dim);
        }
        let mut stacked = self.basis.clone();
        stacked.extend(other.basis.iter().cloned());
        let kernel = integer_kernel(&stacked, self.dim);
        let r = self.rank();
        let gens: Matrix = kernel
            .iter()
            .map(|c| {
                (0..self.dim)
                    .map(|j| (0..r).map(|i| &c[i] * &self.basis[i][j]).sum())
                    .collect()
            })
            .collect();
        Lattice { dim: self.dim, basis: hermite_basis(&gens, self.dim) }
    }

    /// `{v in Z^dim : k v in self for some k >= 1}`.
    pub fn saturation(&self) -> Lattice {
        let r = self.rank();
        if r == 0 {
            return Lattice::zero(self.dim);
        }
        if r == self.dim {
            return Lattice::full(self.dim);
        }
        // annihilator N = {w : B w = 0}, then saturation = {v : N v = 0}
        let cols = transpose(&self.basis, self.dim);
        let annihilator = integer_kernel(&cols, r);
        let ncols = transpose(&annihilator, self.dim);
        let sat = integer_kernel(&ncols, annihilator.len());
        Lattice { dim: self.dim, basis: hermite_basis(&sat, self.dim) }
    }

    /// `[self : sub]`, `None` when infinite. Requires `sub ⊆ self`.
    pub fn index_of(&self, sub: &Lattice) -> Option<BigInt> {
        if sub.rank() != self.rank() {
            return None;
        }
        let coords: Matrix = sub
            .basis
            .iter()
            .map(|b| self.coordinates(b).expect("sublattice"))
            .collect();
        Some(abs_det(&coords))
    }

    /// A basis of a lattice `C ⊆ self` with `self = sub ⊕ C`, where `sub` is
    /// a sublattice of `self` that is saturated inside `self`.
    pub fn complement_of(&self, sub: &Lattice) -> Matrix {
        let r = self.rank();
        let s = sub.rank();
        if s == 0 {
            return self.basis.clone();
        }
        let coords: Matrix = sub
            .basis
            .iter()
            .map(|b| self.coordinates(b).expect("sublattice"))
            .collect();
        // rows of R are the coordinate axes; U R = H gives M U^T = [D | 0]
        let e = echelon(&transpose(&coords, r), s, true);
        let uinv = e.inverse.expect("transform requested");
        (s..r)
            .map(|j| {
                let f: Vector = (0..r).map(|i| uinv[i][j].clone()).collect();
                (0..self.dim)
                    .map(|c| (0..r).map(|i| &f[i] * &self.basis[i][c]).sum())
                    .collect()
            })
            .collect()
    }
}

fn check_len(dim: usize, v: &[BigInt]) -> Result<(), LatticeError> {
    if v.len() != dim {
        return Err(LatticeError::DimensionMismatch { expected: dim, found: v.len() });
    }
    Ok(())
}

/// `[T : S]`, which may be infinite.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Index {
    Finite(BigInt),
    Infinite,
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Index::Finite(n) => write!(f, "{n}"),
            Index::Infinite => f.write_str("infinite"),
        }
    }
}

/// Abelian invariants `Z^r ⊕ Z/d_1 ⊕ ... ⊕ Z/d_k` with `d_1 | ... | d_k`, all `d_i >= 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AbelianInvariants {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl AbelianInvariants {
    /// Invariants of `Z^ncols / rowspan(rows)`.
    pub fn of_quotient(rows: &[Vector], ncols: usize) -> Self {
        let d = smith_invariants(rows, ncols);
        AbelianInvariants {
            free_rank: ncols - d.len(),
            torsion: d.into_iter().filter(|x| !x.is_one()).collect(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Minimal number of generators.
    pub fn generator_count(&self) -> usize {
        self.free_rank + self.torsion.len()
    }
}

impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t: Vec<String> = self.torsion.iter().map(|d| d.to_string()).collect();
        write!(f, "({}; ({}))", self.free_rank, t.join(", "))
    }
}

/// The finitely generated abelian group `Z^m / L`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LatticeGroup {
    relations: Lattice,
}

impl LatticeGroup {
    pub fn new(ambient_rank: usize, relations: &[Vector]) -> Result<Self, LatticeError> {
        Ok(LatticeGroup { relations: Lattice::from_generators(ambient_rank, relations)? })
    }

    /// `Z^m`.
    pub fn free(ambient_rank: usize) -> Self {
        LatticeGroup { relations: Lattice::zero(ambient_rank) }
    }

    pub fn ambient_rank(&self) -> usize {
        self.relations.dim()
    }

    pub fn relations(&self) -> &Lattice {
        &self.relations
    }

    pub fn invariants(&self) -> AbelianInvariants {
        AbelianInvariants::of_quotient(self.relations.basis(), self.ambient_rank())
    }

    pub fn free_rank(&self) -> usize {
        self.ambient_rank() - self.relations.rank()
    }

    pub fn is_zero(&self, v: &[BigInt]) -> bool {
        self.relations.contains(v)
    }

    pub fn whole(&self) -> LatticeSubgroup {
        LatticeSubgroup { parent: self.clone(), preimage: Lattice::full(self.ambient_rank()) }
    }

    pub fn trivial(&self) -> LatticeSubgroup {
        LatticeSubgroup { parent: self.clone(), preimage: self.relations.clone() }
    }
}

/// A subgroup of a [`LatticeGroup`], stored by its Hermite preimage lattice.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LatticeSubgroup {
    parent: LatticeGroup,
    preimage: Lattice,
}

impl LatticeSubgroup {
    pub fn parent(&self) -> &LatticeGroup {
        &self.parent
    }

    pub fn preimage(&self) -> &Lattice {
        &self.preimage
    }

    /// Generators modulo relations: the Hermite rows of the preimage.
    pub fn generators(&self) -> &[Vector] {
        self.preimage.basis()
    }

    /// Rank of the torsion-free part.
    pub fn rank(&self) -> usize {
        self.preimage.rank() - self.parent.relations.rank()
    }

    pub fn is_subgroup_of(&self, other: &LatticeSubgroup) -> bool {
        self.parent == other.parent && other.preimage.contains_lattice(&self.preimage)
    }

    pub fn invariants(&self) -> AbelianInvariants {
        // S ≅ P_S / L; express L in coordinates of P_S
        let coords: Matrix = self
            .parent
            .relations
            .basis()
            .iter()
            .map(|v| self.preimage.coordinates(v).expect("relations lie in every preimage"))
            .collect();
        AbelianInvariants::of_quotient(&coords, self.preimage.rank())
    }

    fn from_lattice(parent: &LatticeGroup, preimage: Lattice) -> Self {
        LatticeSubgroup { parent: parent.clone(), preimage }
    }
}

/// The subgroup generated by `gens` (read modulo the relations of `parent`).
pub fn canonicalize(gens: &[Vector], parent: &LatticeGroup) -> Result<LatticeSubgroup, LatticeError> {
    for g in gens {
        check_len(parent.ambient_rank(), g)?;
    }
    let preimage = parent.relations.with_vectors(gens);
    Ok(LatticeSubgroup::from_lattice(parent, preimage))
}

pub fn membership(v: &[BigInt], s: &LatticeSubgroup) -> Result<bool, LatticeError> {
    check_len(s.parent.ambient_rank(), v)?;
    Ok(s.preimage.contains(v))
}

/// `[t : s]`.
pub fn index(s: &LatticeSubgroup, t: &LatticeSubgroup) -> Result<Index, LatticeError> {
    require_subgroup(s, t)?;
    Ok(match t.preimage.index_of(&s.preimage) {
        Some(n) => Index::Finite(n),
        None => Index::Infinite,
    })
}

fn require_subgroup(a: &LatticeSubgroup, b: &LatticeSubgroup) -> Result<(), LatticeError> {
    if a.parent != b.parent {
        return Err(LatticeError::ParentMismatch);
    }
    if !b.preimage.contains_lattice(&a.preimage) {
        return Err(LatticeError::NotASubgroup);
    }
    Ok(())
}

/// `e(A, B)`: the elements of `B` having a positive multiple in `A`.
///
/// On preimages this is `P_B ∩ sat(P_A)`; torsion of `B` is included since
/// its multiples reach the relation lattice, which lies in `P_A`.
pub fn root_closure(a: &LatticeSubgroup, b: &LatticeSubgroup) -> Result<LatticeSubgroup, LatticeError> {
    require_subgroup(a, b)?;
    let closure = b.preimage.intersect(&a.preimage.saturation());
    Ok(LatticeSubgroup::from_lattice(&b.parent, closure))
}

/// Splits `B = e(A,B) ⊕ B0` with `B0` torsion-free.
pub fn split_complement(
    a: &LatticeSubgroup,
    b: &LatticeSubgroup,
) -> Result<(LatticeSubgroup, LatticeSubgroup), LatticeError> {
    let e = root_closure(a, b)?;
    // P_E is saturated in P_B, so a lattice complement exists
    let comp = b.preimage.complement_of(&e.preimage);
    let b0 = b.parent.relations.with_vectors(&comp);
    Ok((e, LatticeSubgroup::from_lattice(&b.parent, b0)))
}

/// Whether some isomorphism `B → B'` restricts to the identity on `A`.
pub fn sandwich_equivalent(
    a: &LatticeSubgroup,
    b: &LatticeSubgroup,
    b_prime: &LatticeSubgroup,
) -> Result<bool, LatticeError> {
    let e = root_closure(a, b)?;
    let e_prime = root_closure(a, b_prime)?;
    let rank = b.preimage.rank() - e.preimage.rank();
    let rank_prime = b_prime.preimage.rank() - e_prime.preimage.rank();
    Ok(e == e_prime && rank == rank_prime)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SandwichClass {
    pub root_closure: LatticeSubgroup,
    pub complement_rank: usize,
    pub witness: LatticeSubgroup,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SandwichClassReport {
    pub root_closure_options: Vec<LatticeSubgroup>,
    /// Inclusive range of achievable complement ranks.
    pub complement_rank_range: (usize, usize),
    pub class_count: usize,
    pub classes: Vec<SandwichClass>,
}

/// All classes of subgroups `A ⊆ B ⊆ P` under sandwich equivalence, with a witness each.
pub fn count_sandwich_classes(a: &LatticeSubgroup, p: &LatticeGroup) -> Result<SandwichClassReport, LatticeError> {
    if &a.parent != p {
        return Err(LatticeError::ParentMismatch);
    }
    let m = p.ambient_rank();
    let sat = a.preimage.saturation();
    let options = intermediate_lattices(&a.preimage, &sat);
    let max_rank = m - a.preimage.rank();
    let complement = Lattice::full(m).complement_of(&sat);
    let mut classes = Vec::new();
    for e in &options {
        for k in 0..=max_rank {
            let witness = e.with_vectors(&complement[..k]);
            classes.push(SandwichClass {
                root_closure: LatticeSubgroup::from_lattice(p, e.clone()),
                complement_rank: k,
                witness: LatticeSubgroup::from_lattice(p, witness),
            });
        }
    }
    Ok(SandwichClassReport {
        root_closure_options: options.into_iter().map(|e| LatticeSubgroup::from_lattice(p, e)).collect(),
        complement_rank_range: (0, max_rank),
        class_count: classes.len(),
        classes,
    })
}

/// Every lattice between `lower` and `upper` when `[upper : lower]` is finite,
/// sorted by Hermite basis.
pub fn intermediate_lattices(lower: &Lattice, upper: &Lattice) -> Vec<Lattice> {
    let r = upper.rank();
    let coords: Matrix = lower
        .basis()
        .iter()
        .map(|b| upper.coordinates(b).expect("lower ⊆ upper"))
        .collect();
    let h = hermite_basis(&coords, r);
    assert_eq!(h.len(), r, "index must be finite");
    // for a full-rank upper-triangular Hermite basis, 0 <= c_i < h_ii is a
    // complete system of coset representatives
    let bounds: Vec<BigInt> = (0..r).map(|i| h[i][i].clone()).collect();
    let mut reps: Vec<Vector> = vec![vec![BigInt::zero(); r]];
    for (i, bound) in bounds.iter().enumerate() {
        let mut next = Vec::new();
        for rep in &reps {
            let mut c = BigInt::zero();
            while &c < bound {
                let mut v = rep.clone();
                v[i] = c.clone();
                next.push(v);
                c += 1;
            }
        }
        reps = next;
    }
    let ambient: Vec<Vector> = reps
        .iter()
        .filter(|c| c.iter().any(|x| !x.is_zero()))
        .map(|c| {
            (0..upper.dim())
                .map(|j| (0..r).map(|i| &c[i] * &upper.basis()[i][j]).sum())
                .collect()
        })
        .collect();
    let mut found = vec![lower.clone()];
    let mut frontier = vec![lower.clone()];
    while let Some(s) = frontier.pop() {
        for v in &ambient {
            if s.contains(v) {
                continue;
            }
            let t = s.with_vectors(std::slice::from_ref(v));
            if !found.contains(&t) {
                found.push(t.clone());
                frontier.push(t);
            }
        }
    }
    found.sort_by(|x, y| x.basis.cmp(&y.basis));
    found
}

/// Coefficients `k` with `sum k_i gens_i = v` in `group`, if any.
pub fn combination(gens: &[Vector], group: &LatticeGroup, v: &[BigInt]) -> Result<Option<Vector>, LatticeError> {
    let m = group.ambient_rank();
    for g in gens {
        check_len(m, g)?;
    }
    check_len(m, v)?;
    let mut rows = gens.to_vec();
    rows.extend(group.relations().basis().iter().cloned());
    let e = echelon(&rows, m, true);
    let Some(c) = coordinates(&e.basis(), v) else { return Ok(None) };
    let u = e.transform.expect("transform requested");
    let k = (0..gens.len())
        .map(|j| c.iter().zip(&u).map(|(ci, row)| ci * &row[j]).sum())
        .collect();
    Ok(Some(k))
}

/// Kernel of the homomorphism `Z^s -> group` sending the i-th basis vector to `images[i]`.
pub fn map_kernel(images: &[Vector], group: &LatticeGroup) -> Result<Lattice, LatticeError> {
    let m = group.ambient_rank();
    for g in images {
        check_len(m, g)?;
    }
    let s = images.len();
    let mut rows = images.to_vec();
    rows.extend(group.relations().basis().iter().cloned());
    let k = integer_kernel(&rows, m);
    let projected: Matrix = k.into_iter().map(|r| r[..s].to_vec()).collect();
    Lattice::from_generators(s, &projected)
}
