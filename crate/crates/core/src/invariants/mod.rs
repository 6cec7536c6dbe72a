//! Non-isomorphism certificates for finitely presented groups: abelianization
//! by Smith normal form and homomorphism counts into finite groups.

mod presentation;
mod table;
mod word;

use num_bigint::BigInt;
use thiserror::Error;

use crate::lattice::AbelianInvariants;

pub use presentation::{FinitePresentation, ParseError};
pub use table::{FiniteGroupTable, TableError};
pub use word::{Word, WordDisplay};

/// Default number of relation evaluations allowed per hom count.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantsError {
    #[error("hom count exceeded the budget of {0} relation evaluations")]
    BudgetExceeded(u64),
}

/// Budget taken from `GOG_BUDGET`, falling back to [`DEFAULT_BUDGET`].
pub fn budget_from_env() -> u64 {
    std::env::var("GOG_BUDGET").ok().and_then(|s| s.trim().parse().ok()).unwrap_or(DEFAULT_BUDGET)
}

/// Invariant factors of `Z^gens / (exponent-sum rows of the relations)`.
pub fn abelianization(p: &FinitePresentation) -> AbelianInvariants {
    let n = p.generator_count();
    let rows: Vec<Vec<BigInt>> = p
        .relations()
        .iter()
        .map(|r| r.exponent_sums(n).into_iter().map(BigInt::from).collect())
        .collect();
    AbelianInvariants::of_quotient(&rows, n)
}

/// Number of homomorphisms `p -> q`, i.e. generator assignments satisfying
/// every relation.
pub fn hom_count(p: &FinitePresentation, q: &FiniteGroupTable, budget: u64) -> Result<u64, InvariantsError> {
    let n = p.generator_count();
    // relations are checked as soon as their last generator is assigned
    let mut by_last: Vec<Vec<&Word>> = vec![Vec::new(); n];
    for r in p.relations() {
        if let Some(g) = r.max_generator() {
            by_last[g].push(r);
        }
    }
    let powers = q.power_tables();
    let mut search = HomSearch { q, powers: &powers, by_last: &by_last, budget, spent: 0, assignment: vec![0; n] };
    search.count(0)
}

struct HomSearch<'a> {
    q: &'a FiniteGroupTable,
    powers: &'a [Vec<usize>],
    by_last: &'a [Vec<&'a Word>],
    budget: u64,
    spent: u64,
    assignment: Vec<usize>,
}

impl HomSearch<'_> {
    fn eval(&self, w: &Word) -> usize {
        let mut acc = self.q.identity();
        for &(g, e) in w.syllables() {
            let cycle = &self.powers[self.assignment[g]];
            let k = e.rem_euclid(cycle.len() as i64) as usize;
            acc = self.q.mul(acc, cycle[k]);
        }
        acc
    }

    fn count(&mut self, k: usize) -> Result<u64, InvariantsError> {
        if k == self.assignment.len() {
            return Ok(1);
        }
        let mut total = 0;
        'elements: for x in 0..self.q.order() {
            self.assignment[k] = x;
            for r in self.by_last[k].iter() {
                self.spent += 1;
                if self.spent > self.budget {
                    return Err(InvariantsError::BudgetExceeded(self.budget));
                }
                if self.eval(r) != self.q.identity() {
                    continue 'elements;
                }
            }
            total += self.count(k + 1)?;
        }
        Ok(total)
    }
}

/// Outcome of [`distinguish`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Distinction {
    Abelianization(AbelianInvariants, AbelianInvariants),
    /// `target` indexes the supplied list.
    HomCount { target: usize, counts: (u64, u64) },
    /// No certificate found. This does not prove the groups isomorphic.
    NoneFound,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistinguishReport {
    pub result: Distinction,
    /// Targets skipped because a count ran out of budget.
    pub over_budget: Vec<usize>,
}

/// Searches for a certificate that `p1` and `p2` are not isomorphic: first the
/// abelianizations, then hom counts into each target in order.
pub fn distinguish(
    p1: &FinitePresentation,
    p2: &FinitePresentation,
    targets: &[FiniteGroupTable],
    budget: u64,
) -> DistinguishReport {
    let (a1, a2) = (abelianization(p1), abelianization(p2));
    if a1 != a2 {
        return DistinguishReport { result: Distinction::Abelianization(a1, a2), over_budget: vec![] };
    }
    let mut over_budget = Vec::new();
    for (i, q) in targets.iter().enumerate() {
        let counts = hom_count(p1, q, budget).and_then(|c1| Ok((c1, hom_count(p2, q, budget)?)));
        match counts {
            Ok((c1, c2)) if c1 != c2 => {
                return DistinguishReport { result: Distinction::HomCount { target: i, counts: (c1, c2) }, over_budget };
            }
            Ok(_) => {}
            Err(InvariantsError::BudgetExceeded(_)) => over_budget.push(i),
        }
    }
    DistinguishReport { result: Distinction::NoneFound, over_budget }
}

/// Dihedral tables of orders `6, 8, ..., max_order`, smallest first.
pub fn dihedral_targets(max_order: usize) -> Vec<FiniteGroupTable> {
    (3..=max_order / 2).map(FiniteGroupTable::dihedral).collect()
}

#[cfg(test)]
mod tests;
