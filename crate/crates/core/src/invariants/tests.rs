use super::*;
use num_integer::Integer;
use proptest::prelude::*;

fn pres(s: &str) -> FinitePresentation {
    FinitePresentation::parse(s).unwrap()
}

fn ab(free_rank: usize, torsion: &[i64]) -> AbelianInvariants {
    AbelianInvariants { free_rank, torsion: torsion.iter().map(|&d| BigInt::from(d)).collect() }
}

fn bs24_vertex(n: u32) -> FinitePresentation {
    pres(&format!("<x, y | x^{} = y^2>", 1i64 << n))
}

#[test]
fn abelianization_examples() {
    assert_eq!(abelianization(&pres("<x | >")), ab(1, &[]));
    assert_eq!(abelianization(&pres("<a, x, y | a^8 [x, y]^-1>")), ab(2, &[8]));
    assert_eq!(abelianization(&pres("<x, y | x^6>")), ab(1, &[6]));
    assert_eq!(abelianization(&pres("<x, y | x^2 = y^2>")), ab(1, &[2]));
    for n in 1..6 {
        assert_eq!(abelianization(&bs24_vertex(n)), ab(1, &[2]));
    }
}

#[test]
fn hom_count_examples() {
    let z4 = FiniteGroupTable::cyclic(4);
    assert_eq!(hom_count(&pres("<x | >"), &z4, DEFAULT_BUDGET).unwrap(), 4);
    assert_eq!(hom_count(&pres("<x | x^2>"), &z4, DEFAULT_BUDGET).unwrap(), 2);
    let d16 = FiniteGroupTable::dihedral(8);
    let c1 = hom_count(&bs24_vertex(1), &d16, DEFAULT_BUDGET).unwrap();
    let c2 = hom_count(&bs24_vertex(2), &d16, DEFAULT_BUDGET).unwrap();
    assert_ne!(c1, c2);
}

/// Counts `x^(2^n) = y^2` solutions by direct enumeration of pairs.
fn pair_count(q: &FiniteGroupTable, n: u32) -> u64 {
    let pow = |g: usize, k: u64| (0..k).fold(q.identity(), |acc, _| q.mul(acc, g));
    let mut count = 0;
    for x in 0..q.order() {
        for y in 0..q.order() {
            if pow(x, 1 << n) == pow(y, 2) {
                count += 1;
            }
        }
    }
    count
}

#[test]
fn hom_count_matches_pair_enumeration() {
    for m in 3..=8 {
        let q = FiniteGroupTable::dihedral(m);
        for n in 1..=3 {
            assert_eq!(hom_count(&bs24_vertex(n), &q, DEFAULT_BUDGET).unwrap(), pair_count(&q, n));
        }
    }
}

#[test]
fn budget_is_enforced() {
    let q = FiniteGroupTable::dihedral(8);
    let p = pres("<x, y, z | [x, y], [y, z]>");
    assert_eq!(hom_count(&p, &q, 100), Err(InvariantsError::BudgetExceeded(100)));
}

#[test]
fn distinguish_examples() {
    let targets = dihedral_targets(16);
    let p = bs24_vertex(1);
    assert_eq!(distinguish(&p, &p, &targets, DEFAULT_BUDGET).result, Distinction::NoneFound);
    let p2 = pres("<a, x, y | a^4 [x, y]^-1>");
    let p3 = pres("<a, x, y | a^8 [x, y]^-1>");
    assert_eq!(distinguish(&p2, &p3, &targets, DEFAULT_BUDGET).result, Distinction::Abelianization(ab(2, &[4]), ab(2, &[8])));
    let r = distinguish(&bs24_vertex(1), &bs24_vertex(2), &targets, DEFAULT_BUDGET);
    match r.result {
        Distinction::HomCount { target, counts } => {
            assert!(targets[target].order() <= 16);
            assert_ne!(counts.0, counts.1);
        }
        other => panic!("no witness: {other:?}"),
    }
}

#[test]
fn dihedral_tables_are_groups() {
    for m in 3..=16 {
        let d = FiniteGroupTable::dihedral(m);
        let reloaded = FiniteGroupTable::parse("copy", &d.to_text()).unwrap();
        assert_eq!(reloaded.order(), 2 * m);
        assert!(!d.is_abelian());
    }
    assert!(FiniteGroupTable::cyclic(5).is_abelian());
}

#[test]
fn table_loader_rejects_non_groups() {
    assert!(matches!(FiniteGroupTable::parse("bad", "2\n0 1\n0 1\n"), Err(TableError::NotAGroup(_))));
    assert!(matches!(FiniteGroupTable::parse("short", "2\n0 1\n"), Err(TableError::Malformed(_))));
    let z3 = FiniteGroupTable::parse("z3", "# cyclic\n3\n0 1 2\n1 2 0\n2 0 1\n").unwrap();
    assert_eq!(z3.identity(), 0);
}

#[test]
fn presentation_text_round_trip() {
    for s in ["<x | >", "<x, y | x^2 y^-2>", "<a, x, y | a^8 x y x^-1 y^-1>", "<t | 1>"] {
        let p = pres(s);
        assert_eq!(pres(&p.to_string()), p);
    }
    assert_eq!(pres("<x, y | x^2 = y^2>").to_string(), "<x, y | x^2 y^-2>");
    assert_eq!(pres("<x, y | (x y)^2>").relations()[0].syllables(), &[(0, 1), (1, 1), (0, 1), (1, 1)]);
    assert!(matches!(FinitePresentation::parse("<x | z>"), Err(ParseError::UnknownGenerator(_))));
    assert!(matches!(FinitePresentation::parse("<x, x | >"), Err(ParseError::DuplicateGenerator(_))));
}

fn hom_to_cyclic(a: &AbelianInvariants, m: u64) -> u64 {
    let m_big = BigInt::from(m);
    let torsion: u64 = a.torsion.iter().map(|d| u64::try_from(d.gcd(&m_big)).unwrap()).product();
    m.pow(a.free_rank as u32) * torsion
}

fn relator() -> impl Strategy<Value = Word> {
    proptest::collection::vec((0usize..3, -3i64..=3), 0..6).prop_map(Word::from_syllables)
}

fn presentation() -> impl Strategy<Value = FinitePresentation> {
    proptest::collection::vec(relator(), 0..4).prop_map(|r| FinitePresentation::numbered(3, r))
}

proptest! {
    #[test]
    fn abelianization_is_tietze_invariant(p in presentation(), conj in relator(), k in 0usize..4) {
        let base = abelianization(&p);
        let mut rels = p.relations().to_vec();
        rels.reverse();
        prop_assert_eq!(abelianization(&p.with_relations(rels.clone())), base.clone());
        if !rels.is_empty() {
            let i = k % rels.len();
            rels[i] = rels[i].inverse();
            prop_assert_eq!(abelianization(&p.with_relations(rels.clone())), base.clone());
            rels[i] = rels[i].conjugate_by(&conj);
            prop_assert_eq!(abelianization(&p.with_relations(rels)), base);
        }
    }

    #[test]
    fn hom_count_invariances(p in presentation(), conj in relator(), m in 3usize..6) {
        let q = FiniteGroupTable::dihedral(m);
        let base = hom_count(&p, &q, DEFAULT_BUDGET).unwrap();
        let relabeled = p.relabel(&[2, 0, 1]);
        prop_assert_eq!(hom_count(&relabeled, &q, DEFAULT_BUDGET).unwrap(), base);
        let rels: Vec<Word> = p.relations().iter().map(|r| r.conjugate_by(&conj)).collect();
        prop_assert_eq!(hom_count(&p.with_relations(rels), &q, DEFAULT_BUDGET).unwrap(), base);
    }

    #[test]
    fn abelian_hom_counts_match_invariants(p in presentation(), m in 2u64..8) {
        // add commutators so the presentation is abelian
        let x = Word::generator(0);
        let y = Word::generator(1);
        let z = Word::generator(2);
        let mut rels = p.relations().to_vec();
        rels.extend([x.commutator(&y), x.commutator(&z), y.commutator(&z)]);
        let p = p.with_relations(rels);
        let q = FiniteGroupTable::cyclic(m as usize);
        prop_assert_eq!(hom_count(&p, &q, DEFAULT_BUDGET).unwrap(), hom_to_cyclic(&abelianization(&p), m));
    }

    #[test]
    fn parse_display_round_trip(p in presentation()) {
        prop_assert_eq!(FinitePresentation::parse(&p.to_string()).unwrap(), p);
    }
}
