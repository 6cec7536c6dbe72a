//! Acceptance suite. Each criterion prints one PASS or FAIL line; the
//! process exits non-zero if any fails.
//!
//! The oracles here are written against plain `i64` arithmetic and brute
//! force so they share no code with the library paths they check.

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use gogkit::cli::{exit_code, run, GogDocument, Mode};
use gogkit::families::{bs24_witness, make, make_pn_splitting, make_theta, pn_presentation, Certificate, FamilyId};
use gogkit::gog::{
    collapse_refinement, equivalent, fundamental_presentation, is_minimal, is_reduced, refine, trivial_amalgam,
    Attachment, Edge, Element, End, GraphOfGroups, GroupLabel, Marking, RefinementData, TriState, Vertex,
};
use gogkit::invariants::{abelianization, dihedral_targets, Distinction, FiniteGroupTable, Word, DEFAULT_BUDGET};
use gogkit::lattice::{
    self, canonicalize, count_sandwich_classes, sandwich_equivalent, AbelianInvariants, Index, LatticeError,
    LatticeGroup, LatticeSubgroup,
};
use gogkit::polycyclic::{hn_center_derived_index, HeisElement, HeisSubgroupDesc};
use num_bigint::BigInt;
use num_traits::ToPrimitive;

type Check = fn() -> Result<String, String>;

fn main() {
    let criteria: [(u32, &str, Check, Option<Duration>); 10] = [
        (1, "edge-span index of the theta family", edge_span_index, Some(Duration::from_secs(1))),
        (2, "Heisenberg center/derived index", heis_index, Some(Duration::from_secs(30))),
        (3, "root-family abelianizations", roots_abelianization, Some(Duration::from_secs(1))),
        (4, "BS(2,4) vertex groups separated", bs24_separation, Some(Duration::from_secs(60))),
        (5, "sandwich classes against brute force", sandwich_classes, None),
        (6, "minimality truth table", minimality_table, None),
        (7, "refinement round trip", refinement_round_trip, None),
        (8, "lattice arithmetic against enumeration", lattice_enumeration, Some(Duration::from_secs(60))),
        (9, "spanning-tree independence", spanning_tree_independence, None),
        (10, "CLI round trip and exit codes", cli_round_trip, None),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (id, name, check, limit) in criteria {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let took = start.elapsed();
        let result = match (result, limit) {
            (Ok(_), Some(l)) if took > l => Err(format!("took {took:.2?}, limit {l:?}")),
            (r, _) => r,
        };
        let (tag, detail) = match result {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("{tag} {id:>2} {name}: {detail} ({took:.2?})");
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn small(v: &[BigInt]) -> Vec<i64> {
    v.iter().map(|x| x.to_i64().expect("small entry")).collect()
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Row-style Hermite form: pivots positive, entries above a pivot reduced
/// into `[0, pivot)`, zero rows dropped.
fn hermite(mut rows: Vec<Vec<i64>>, ncols: usize) -> Vec<Vec<i64>> {
    let mut r = 0;
    for c in 0..ncols {
        loop {
            let Some(p) = (r..rows.len()).filter(|&i| rows[i][c] != 0).min_by_key(|&i| rows[i][c].abs()) else { break };
            rows.swap(r, p);
            let mut done = true;
            for i in r + 1..rows.len() {
                let q = rows[i][c] / rows[r][c];
                if q != 0 {
                    for k in 0..ncols {
                        rows[i][k] -= q * rows[r][k];
                    }
                }
                done &= rows[i][c] == 0;
            }
            if done {
                break;
            }
        }
        if r < rows.len() && rows[r][c] != 0 {
            if rows[r][c] < 0 {
                rows[r].iter_mut().for_each(|x| *x = -*x);
            }
            for i in 0..r {
                let q = rows[i][c].div_euclid(rows[r][c]);
                for k in 0..ncols {
                    rows[i][k] -= q * rows[r][k];
                }
            }
            r += 1;
        }
    }
    rows.truncate(r);
    rows
}

fn hermite_of(l: &LatticeSubgroup) -> Vec<Vec<i64>> {
    let m = l.parent().ambient_rank();
    hermite(l.preimage().basis().iter().map(|v| small(v)).collect(), m)
}

// 1 ------------------------------------------------------------------------

fn edge_span_index() -> Result<String, String> {
    for n in 1..=100u64 {
        let inst = make_theta(n).map_err(|e| format!("n = {n}: {e}"))?;
        let want = Certificate::Index(Index::Finite(BigInt::from(n)));
        ensure!(inst.certificate == want, "n = {n}: certificate {}", inst.certificate);
        // gcd of the 2x2 minors of the incident images at u
        let g = &inst.graph;
        let u = g.vertex_index("u").ok_or("no vertex u")?;
        let mut vs = Vec::new();
        for (e, end) in g.incident(u) {
            for img in g.edges()[e].map(end) {
                let Element::Vector(v) = img else { return Err(format!("n = {n}: non-vector image")) };
                vs.push(small(v));
            }
        }
        let mut d = 0;
        for i in 0..vs.len() {
            for j in i + 1..vs.len() {
                d = gcd(d, vs[i][0] * vs[j][1] - vs[i][1] * vs[j][0]);
            }
        }
        ensure!(d == n as i64, "n = {n}: minors give {d}");
    }
    Ok("index n for n = 1..100".into())
}

// 2 ------------------------------------------------------------------------

type H = (i64, i64, i64);

fn hmul(g: H, h: H) -> H {
    (g.0 + h.0, g.1 + h.1, g.2 + h.2 + g.0 * h.1)
}

fn hinv(g: H) -> H {
    (-g.0, -g.1, -g.2 + g.0 * g.1)
}

/// `[Z(H_n) : [H_n, H_n]]` from a ball of words of length at most 3.
fn heis_index_oracle(n: i64) -> i64 {
    let gens = [(n, 0, 0), (0, n, 0), (0, 0, 1)];
    let letters: Vec<H> = gens.iter().flat_map(|&g| [g, hinv(g)]).collect();
    let mut ball: BTreeSet<H> = BTreeSet::from([(0, 0, 0)]);
    for _ in 0..3 {
        let next: Vec<H> = ball.iter().flat_map(|&g| letters.iter().map(move |&l| hmul(g, l))).collect();
        ball.extend(next);
    }
    let central = |g: H| gens.iter().all(|&s| hmul(g, s) == hmul(s, g));
    let center = ball.iter().filter(|&&g| central(g)).fold(0, |d, g| gcd(d, g.2));
    let mut derived = 0;
    for &g in &ball {
        for &h in &ball {
            let c = hmul(hmul(g, h), hinv(hmul(h, g)));
            assert!(c.0 == 0 && c.1 == 0);
            derived = gcd(derived, c.2);
        }
    }
    derived / center
}

fn heis_index() -> Result<String, String> {
    let mut prev = BigInt::from(0);
    for n in 1..=50u64 {
        let i = hn_center_derived_index(n).map_err(|e| e.to_string())?;
        ensure!(i > prev, "not increasing at n = {n}: {prev} then {i}");
        if n <= 5 {
            let o = heis_index_oracle(n as i64);
            ensure!(i == BigInt::from(o), "n = {n}: library {i}, oracle {o}");
        }
        prev = i;
    }
    Ok("strictly increasing to n = 50, oracle agrees for n = 1..5".into())
}

// 3 ------------------------------------------------------------------------

fn roots_abelianization() -> Result<String, String> {
    let mut seen = BTreeSet::new();
    for n in 1..=20u64 {
        let p = pn_presentation(n);
        ensure!(p.relations().len() == 1 && p.generator_count() == 3, "n = {n}: unexpected presentation");
        let row = p.relations()[0].exponent_sums(3);
        let d = row.iter().fold(0, |d, &x| gcd(d, x));
        let oracle = AbelianInvariants {
            free_rank: 3 - usize::from(d != 0),
            torsion: if d > 1 { vec![BigInt::from(d)] } else { vec![] },
        };
        let inst = make_pn_splitting(n).map_err(|e| e.to_string())?;
        ensure!(
            inst.certificate == Certificate::Abelianization(oracle.clone()),
            "n = {n}: {} against oracle {oracle}",
            inst.certificate
        );
        ensure!(seen.insert(oracle), "n = {n}: repeated certificate");
    }
    Ok("20 distinct certificates, each Z^2 + Z/2^n".into())
}

// 4 ------------------------------------------------------------------------

const BS24_GOLDEN: [((u64, u64), &str, (u64, u64)); 6] = [
    ((1, 2), "D8", (40, 48)),
    ((1, 3), "D8", (40, 48)),
    ((1, 4), "D8", (40, 48)),
    ((2, 3), "D16", (128, 160)),
    ((2, 4), "D16", (128, 160)),
    ((3, 4), "D32", (448, 576)),
];

/// Counts assignments of the generators into the dihedral group of order
/// `2m` that kill every relator. Elements are `(r, s)` meaning `rot^r ref^s`.
fn dihedral_hom_count(relations: &[Word], gens: usize, m: i64) -> u64 {
    let mul = |a: (i64, i64), b: (i64, i64)| ((a.0 + if a.1 == 0 { b.0 } else { -b.0 }).rem_euclid(m), (a.1 + b.1) % 2);
    let inv = |a: (i64, i64)| if a.1 == 0 { ((-a.0).rem_euclid(m), 0) } else { a };
    let elems: Vec<(i64, i64)> = (0..m).flat_map(|r| [(r, 0), (r, 1)]).collect();
    let mut count = 0;
    let mut idx = vec![0usize; gens];
    loop {
        let images: Vec<_> = idx.iter().map(|&i| elems[i]).collect();
        let ok = relations.iter().all(|w| {
            let mut acc = (0, 0);
            for &(g, e) in w.syllables() {
                let x = if e < 0 { inv(images[g]) } else { images[g] };
                for _ in 0..e.abs() {
                    acc = mul(acc, x);
                }
            }
            acc == (0, 0)
        });
        count += u64::from(ok);
        let mut k = 0;
        while k < gens {
            idx[k] += 1;
            if idx[k] < elems.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
        if k == gens {
            return count;
        }
    }
}

fn bs24_separation() -> Result<String, String> {
    let mut targets: Vec<FiniteGroupTable> = (2..=32).map(FiniteGroupTable::cyclic).collect();
    targets.extend(dihedral_targets(32));
    for ((n, m), name, golden) in BS24_GOLDEN {
        let report = bs24_witness(n, m, &targets, DEFAULT_BUDGET);
        let Distinction::HomCount { target, counts } = report.result else {
            return Err(format!("({n}, {m}): {:?}", report.result));
        };
        let t = &targets[target];
        ensure!(t.order() <= 32, "({n}, {m}): target order {}", t.order());
        ensure!(t.name() == name && counts == golden, "({n}, {m}): {} {counts:?}, golden {name} {golden:?}", t.name());
        let half = (t.order() / 2) as i64;
        let p = |k| gogkit::families::bs24_presentation(k);
        let brute = (dihedral_hom_count(p(n).relations(), 2, half), dihedral_hom_count(p(m).relations(), 2, half));
        ensure!(brute == counts, "({n}, {m}): brute force {brute:?}, library {counts:?}");
    }
    Ok("all 6 pairs separated by dihedral targets of order <= 32, goldens match".into())
}

// 5 ------------------------------------------------------------------------

struct SandwichCase {
    rank: usize,
    relations: Vec<Vec<i64>>,
    /// Coordinate reduced modulo the given value before deduplication.
    torsion: Option<(usize, i64)>,
    a: Vec<Vec<i64>>,
    /// Coordinates spanning the saturation of `A` plus the relations.
    inside: Vec<usize>,
    classes: usize,
}

/// Reduces `v` against an echelon basis; true when it reduces to zero.
fn in_span(basis: &[Vec<i64>], v: &[i64]) -> bool {
    let mut v = v.to_vec();
    for row in basis {
        let c = row.iter().position(|&x| x != 0).unwrap();
        if v[c] % row[c] != 0 {
            return false;
        }
        let q = v[c] / row[c];
        v.iter_mut().zip(row).for_each(|(x, r)| *x -= q * r);
    }
    v.iter().all(|&x| x == 0)
}

type SandwichKey = (Vec<Vec<i64>>, usize);

impl SandwichCase {
    /// Columns reordered so coordinates outside the saturation come first.
    fn order(&self) -> Vec<usize> {
        let mut o: Vec<usize> = (0..self.rank).filter(|c| !self.inside.contains(c)).collect();
        o.extend(&self.inside);
        o
    }

    fn permute(&self, v: &[i64]) -> Vec<i64> {
        self.order().iter().map(|&c| v[c]).collect()
    }

    /// Hermite basis of `<gens> + relations` in reordered coordinates.
    fn lattice(&self, gens: &[Vec<i64>]) -> Vec<Vec<i64>> {
        let rows = gens.iter().chain(&self.relations).map(|v| self.permute(v)).collect();
        hermite(rows, self.rank)
    }

    /// Root closure basis and complement rank of a lattice containing `A`.
    fn key(&self, b: &[Vec<i64>]) -> SandwichKey {
        let outside = self.rank - self.inside.len();
        let e: Vec<Vec<i64>> = b.iter().filter(|r| r[..outside].iter().all(|&x| x == 0)).cloned().collect();
        let k = b.len() - e.len();
        (e, k)
    }

    fn vectors(&self) -> Vec<Vec<i64>> {
        let reduce = |mut v: Vec<i64>| {
            if let Some((c, m)) = self.torsion {
                v[c] = v[c].rem_euclid(m);
            }
            v
        };
        let mut all = vec![vec![]];
        for _ in 0..self.rank {
            all = all.into_iter().flat_map(|v: Vec<i64>| (-4..=4).map(move |x| [v.clone(), vec![x]].concat())).collect();
        }
        let set: BTreeSet<Vec<i64>> = all
            .into_iter()
            .map(|v| {
                let neg = reduce(v.iter().map(|x| -x).collect());
                reduce(v).min(neg)
            })
            .collect();
        set.into_iter().collect()
    }
}

fn sandwich_case(case: &SandwichCase) -> Result<String, String> {
    let start = Instant::now();
    let p = LatticeGroup::new(case.rank, &case.relations.iter().map(|r| big(r)).collect::<Vec<_>>())
        .map_err(|e| e.to_string())?;
    let a_lat = case.lattice(&case.a);
    // the declared inside coordinates must be the saturation of A
    let outside = case.rank - case.inside.len();
    ensure!(
        a_lat.len() == case.inside.len() && a_lat.iter().all(|r| r[..outside].iter().all(|&x| x == 0)),
        "inside coordinates do not match A"
    );
    let vs = case.vectors();
    let mut buckets: BTreeMap<SandwichKey, Vec<Vec<Vec<i64>>>> = BTreeMap::new();
    for i in 0..vs.len() {
        for j in i..vs.len() {
            for k in j..vs.len() {
                let gens = vec![vs[i].clone(), vs[j].clone(), vs[k].clone()];
                let b = case.lattice(&gens);
                if !a_lat.iter().all(|r| in_span(&b, r)) {
                    continue;
                }
                let reps = buckets.entry(case.key(&b)).or_default();
                if reps.len() < 2 {
                    reps.push(gens);
                }
            }
        }
    }
    let sub = |gens: &[Vec<i64>]| canonicalize(&gens.iter().map(|g| big(g)).collect::<Vec<_>>(), &p).unwrap();
    let a = sub(&case.a);
    let report = count_sandwich_classes(&a, &p).map_err(|e| e.to_string())?;
    ensure!(buckets.len() == case.classes, "brute force found {} classes, expected {}", buckets.len(), case.classes);
    ensure!(report.class_count == buckets.len(), "library {} classes, brute force {}", report.class_count, buckets.len());
    let to_key = |l: &LatticeSubgroup| {
        let rows = hermite_of(l).iter().map(|v| case.permute(v)).collect();
        case.key(&hermite(rows, case.rank))
    };
    let mut lib_keys = BTreeSet::new();
    for c in &report.classes {
        let key = (hermite(hermite_of(&c.root_closure).iter().map(|v| case.permute(v)).collect(), case.rank), c.complement_rank);
        ensure!(to_key(&c.witness) == key, "witness {:?} is not in its class {key:?}", c.witness.generators());
        ensure!(a.is_subgroup_of(&c.witness), "witness does not contain A");
        lib_keys.insert(key);
    }
    let ours: BTreeSet<_> = buckets.keys().cloned().collect();
    ensure!(lib_keys == ours, "class keys differ: library {lib_keys:?}, brute force {ours:?}");
    let reps: Vec<(&SandwichKey, LatticeSubgroup)> =
        buckets.iter().flat_map(|(k, gs)| gs.iter().map(move |g| (k, sub(g)))).collect();
    for (k1, b1) in &reps {
        for (k2, b2) in &reps {
            let eq = sandwich_equivalent(&a, b1, b2).map_err(|e| e.to_string())?;
            ensure!(eq == (k1 == k2), "sandwich_equivalent {eq} for keys {k1:?} and {k2:?}");
        }
    }
    let took = start.elapsed();
    ensure!(took < Duration::from_secs(10), "took {took:.2?}, limit 10s");
    Ok(format!("{}", buckets.len()))
}

fn sandwich_classes() -> Result<String, String> {
    let z2 = |a: Vec<Vec<i64>>, inside: Vec<usize>, classes| SandwichCase {
        rank: 2,
        relations: vec![],
        torsion: None,
        a,
        inside,
        classes,
    };
    let cases = [
        ("<(2,0)> in Z^2", z2(vec![vec![2, 0]], vec![0], 4)),
        ("<(1,0)> in Z^2", z2(vec![vec![1, 0]], vec![0], 2)),
        ("<(4,0)> in Z^2", z2(vec![vec![4, 0]], vec![0], 6)),
        ("<(2,0),(0,2)> in Z^2", z2(vec![vec![2, 0], vec![0, 2]], vec![0, 1], 5)),
        ("0 in Z^2", z2(vec![], vec![], 3)),
        (
            "<(2,0,0)> in Z^2+Z/4",
            SandwichCase {
                rank: 3,
                relations: vec![vec![0, 0, 4]],
                torsion: Some((2, 4)),
                a: vec![vec![2, 0, 0]],
                inside: vec![0, 2],
                classes: 16,
            },
        ),
    ];
    let mut parts = Vec::new();
    for (name, case) in &cases {
        let n = sandwich_case(case).map_err(|e| format!("{name}: {e}"))?;
        parts.push(format!("{name}: {n}"));
    }
    Ok(parts.join(", "))
}

// 6 ------------------------------------------------------------------------

fn abelian(rank: usize, relations: &[&[i64]]) -> GroupLabel {
    GroupLabel::Abelian(LatticeGroup::new(rank, &relations.iter().map(|r| big(r)).collect::<Vec<_>>()).unwrap())
}

fn vecs(vs: &[&[i64]]) -> Vec<Element> {
    vs.iter().map(|v| Element::Vector(big(v))).collect()
}

fn heis(hs: &[H]) -> Vec<Element> {
    hs.iter().map(|&(x, y, z)| Element::Heis(HeisElement::new(x, y, z))).collect()
}

fn full_heis() -> GroupLabel {
    GroupLabel::Heisenberg(HeisSubgroupDesc::Full)
}

fn vertex(name: &str, label: GroupLabel) -> Vertex {
    Vertex { name: name.into(), label }
}

fn amalgam(a: GroupLabel, b: GroupLabel, c: GroupLabel, from: Vec<Element>, to: Vec<Element>) -> GraphOfGroups {
    GraphOfGroups::new(
        vec![vertex("a", a), vertex("b", b)],
        vec![Edge { name: "e".into(), label: c, from: 0, to: 1, from_map: from, to_map: to }],
    )
}

fn hnn(a: GroupLabel, c: GroupLabel, from: Vec<Element>, to: Vec<Element>) -> GraphOfGroups {
    GraphOfGroups::new(
        vec![vertex("a", a)],
        vec![Edge { name: "t".into(), label: c, from: 0, to: 0, from_map: from, to_map: to }],
    )
}

/// Whether the images generate the target: unit Hermite form for abelian
/// targets, and for the full Heisenberg group generation of `Z^2` after
/// projecting away the center.
fn oracle_surjective(target: &GroupLabel, images: &[Element]) -> bool {
    let (rows, n): (Vec<Vec<i64>>, usize) = match target {
        GroupLabel::Abelian(g) => {
            let mut rows: Vec<Vec<i64>> = images
                .iter()
                .map(|e| match e {
                    Element::Vector(v) => small(v),
                    _ => unreachable!(),
                })
                .collect();
            rows.extend(g.relations().basis().iter().map(|r| small(r)));
            (rows, g.ambient_rank())
        }
        GroupLabel::Heisenberg(HeisSubgroupDesc::Full) => (
            images
                .iter()
                .map(|e| match e {
                    Element::Heis(h) => small(&[h.x.clone(), h.y.clone()]),
                    _ => unreachable!(),
                })
                .collect(),
            2,
        ),
        _ => unreachable!("oracle covers abelian and full Heisenberg targets"),
    };
    let h = hermite(rows, n);
    h.len() == n && (0..n).all(|i| h[i][i] == 1)
}

fn minimality_cases() -> Vec<GraphOfGroups> {
    let z = || abelian(1, &[]);
    let z2 = || abelian(2, &[]);
    let zm = |m: i64| abelian(1, &[&[m]]);
    let hn = |n| GroupLabel::Heisenberg(HeisSubgroupDesc::Hn(n));
    let center = || GroupLabel::Heisenberg(HeisSubgroupDesc::Center);
    let hn_gens = |n: i64| heis(&[(n, 0, 0), (0, n, 0), (0, 0, 1)]);
    vec![
        amalgam(z(), z2(), z(), vecs(&[&[1]]), vecs(&[&[1, 0]])),
        amalgam(z(), z(), z(), vecs(&[&[2]]), vecs(&[&[3]])),
        amalgam(z(), z(), z(), vecs(&[&[1]]), vecs(&[&[3]])),
        amalgam(z(), z(), z(), vecs(&[&[-1]]), vecs(&[&[2]])),
        amalgam(z2(), z2(), z2(), vecs(&[&[1, 0], &[0, 1]]), vecs(&[&[2, 0], &[0, 1]])),
        amalgam(z2(), z2(), z2(), vecs(&[&[1, 1], &[0, 2]]), vecs(&[&[1, 0], &[0, 3]])),
        amalgam(z2(), z(), z(), vecs(&[&[1, 0]]), vecs(&[&[1]])),
        amalgam(z2(), z2(), z(), vecs(&[&[1, 2]]), vecs(&[&[0, 5]])),
        amalgam(zm(6), zm(6), zm(6), vecs(&[&[1]]), vecs(&[&[5]])),
        amalgam(zm(6), zm(4), zm(2), vecs(&[&[3]]), vecs(&[&[2]])),
        amalgam(zm(6), zm(3), zm(3), vecs(&[&[2]]), vecs(&[&[1]])),
        amalgam(zm(6), abelian(2, &[&[0, 6]]), zm(6), vecs(&[&[1]]), vecs(&[&[0, 1]])),
        amalgam(full_heis(), full_heis(), center(), heis(&[(0, 0, 1)]), heis(&[(0, 0, 1)])),
        amalgam(full_heis(), full_heis(), hn(2), hn_gens(2), hn_gens(2)),
        amalgam(full_heis(), full_heis(), hn(1), hn_gens(1), hn_gens(1)),
        amalgam(full_heis(), full_heis(), full_heis(), hn_gens(1), heis(&[(1, 0, 0), (1, 1, 0), (0, 0, 1)])),
        amalgam(full_heis(), z(), z(), heis(&[(0, 1, 0)]), vecs(&[&[1]])),
        amalgam(full_heis(), z(), z(), heis(&[(0, 1, 0)]), vecs(&[&[2]])),
        hnn(z(), z(), vecs(&[&[1]]), vecs(&[&[2]])),
        hnn(z(), z(), vecs(&[&[1]]), vecs(&[&[1]])),
        hnn(z2(), z2(), vecs(&[&[1, 0], &[0, 1]]), vecs(&[&[0, 1], &[1, 0]])),
        hnn(full_heis(), center(), heis(&[(0, 0, 1)]), heis(&[(0, 0, 1)])),
        hnn(zm(6), zm(6), vecs(&[&[1]]), vecs(&[&[5]])),
    ]
}

fn minimality_table() -> Result<String, String> {
    let cases = minimality_cases();
    let mut minimal = 0;
    for (i, g) in cases.iter().enumerate() {
        let e = &g.edges()[0];
        let want = e.is_loop()
            || !(oracle_surjective(&g.vertices()[e.from].label, &e.from_map)
                || oracle_surjective(&g.vertices()[e.to].label, &e.to_map));
        let got = is_minimal(g).map_err(|err| format!("case {i}: {err}"))?;
        ensure!(got == TriState::from_bool(want), "case {i}: is_minimal {got}, oracle {want}");
        minimal += usize::from(want);
    }
    Ok(format!("{} cases agree ({minimal} minimal)", cases.len()))
}

// 7 ------------------------------------------------------------------------

fn heis_refinements() -> Vec<(GraphOfGroups, RefinementData)> {
    let (z, z2) = (abelian(1, &[]), abelian(2, &[]));
    let mut out = Vec::new();
    for (p, q, c1, c2) in [(0, 0, 0, 0), (1, 0, 2, 0), (3, -1, -1, 4)] {
        let g = GraphOfGroups::new(
            vec![vertex("v", full_heis()), vertex("w", z2.clone())],
            vec![
                Edge { name: "e1".into(), label: z.clone(), from: 0, to: 1, from_map: heis(&[(0, 1, p)]), to_map: vecs(&[&[1, 0]]) },
                Edge { name: "e2".into(), label: z.clone(), from: 0, to: 1, from_map: heis(&[(0, 1, q)]), to_map: vecs(&[&[0, 1]]) },
            ],
        );
        for j in [-1, 0, 2] {
            for k in [0, 1, -2] {
                for i in [0, 5] {
                    // t g1 t^-1 = g1 g2 with g1 = (0,1,j), g2 = c, t = (1,k,i)
                    let splitting = hnn(z2.clone(), z2.clone(), vecs(&[&[1, 0], &[0, 1]]), vecs(&[&[1, 1], &[0, 1]]));
                    let marking = Marking {
                        vertex_images: vec![heis(&[(0, 1, j), (0, 0, 1)])],
                        stable_image: heis(&[(1, k, i)]).pop(),
                    };
                    let attach = |edge, c| Attachment {
                        edge,
                        end: End::From,
                        target: 0,
                        conjugator: heis(&[(c, 0, 0)]).pop().unwrap(),
                    };
                    let data = RefinementData { vertex: 0, splitting, marking, attachments: vec![attach(0, c1), attach(1, c2)] };
                    out.push((g.clone(), data));
                }
            }
        }
    }
    out
}

fn abelian_refinements() -> Vec<(GraphOfGroups, RefinementData)> {
    let z = abelian(1, &[]);
    let mut out = Vec::new();
    let bases: [([i64; 2], [i64; 2]); 5] = [([1, 0], [0, 1]), ([1, 2], [0, 1]), ([2, 1], [1, 1]), ([1, 0], [3, 1]), ([3, 2], [1, 1])];
    for (p, q) in bases {
        for k in [1, 2, -3] {
            let g = amalgam(abelian(2, &[]), z.clone(), z.clone(), vecs(&[&[k * p[0], k * p[1]]]), vecs(&[&[1]]));
            // Z^2 as the HNN extension of Z with trivial action
            let data = RefinementData {
                vertex: 0,
                splitting: hnn(z.clone(), z.clone(), vecs(&[&[1]]), vecs(&[&[1]])),
                marking: Marking { vertex_images: vec![vecs(&[&p])], stable_image: vecs(&[&q]).pop() },
                attachments: vec![Attachment { edge: 0, end: End::From, target: 0, conjugator: vecs(&[&[0, 0]]).pop().unwrap() }],
            };
            out.push((g, data));
        }
    }
    out
}

fn trivial_refinements() -> Vec<(GraphOfGroups, RefinementData)> {
    let mut out = Vec::new();
    for file in ["trivial-amalgam.gog", "trefoil.gog", "subdivided.gog", "heis-center.gog", "bs12.gog"] {
        let g = corpus_doc(file).graph;
        for v in 0..g.vertices().len() {
            if !matches!(g.vertices()[v].label, GroupLabel::Abelian(_) | GroupLabel::Heisenberg(_)) {
                continue;
            }
            for (edge, end) in g.incident(v) {
                out.push((g.clone(), trivial_amalgam(&g, v, edge, end, ("s0", "s1", "snew"))));
            }
        }
    }
    out
}

fn refinement_round_trip() -> Result<String, String> {
    let mut accepted = 0;
    let mut rejected = Vec::new();
    let groups = [("heisenberg", heis_refinements()), ("abelian", abelian_refinements()), ("trivial", trivial_refinements())];
    for (kind, cases) in &groups {
        for (i, (g, data)) in cases.iter().enumerate() {
            let refined = match refine(g, data) {
                Ok(r) => r,
                Err(e) => {
                    rejected.push(format!("{kind} {i}: {e}"));
                    continue;
                }
            };
            accepted += 1;
            let back = collapse_refinement(&refined, data, &g.vertices()[data.vertex]).map_err(|e| format!("{kind} {i}: {e}"))?;
            let back = back.ok_or_else(|| format!("{kind} {i}: collapse could not be pushed back"))?;
            let eq = equivalent(&back, g);
            ensure!(eq == TriState::Yes, "{kind} {i}: equivalent {eq}");
        }
    }
    ensure!(accepted >= 50, "only {accepted} accepted; rejected: {rejected:?}");
    Ok(format!("{accepted} accepted cases all round trip, {} rejected", rejected.len()))
}

// 8 ------------------------------------------------------------------------

/// Subgroup of `Z/d1 x Z/d2` generated by the given elements, as a bitset
/// over `x * d2 + y`.
fn closure(d: (i64, i64), gens: &[(i64, i64)]) -> u64 {
    let bit = |(x, y): (i64, i64)| 1u64 << (x.rem_euclid(d.0) * d.1 + y.rem_euclid(d.1));
    let mut set = bit((0, 0));
    let mut frontier = vec![(0, 0)];
    while let Some(e) = frontier.pop() {
        for g in gens {
            let s = ((e.0 + g.0).rem_euclid(d.0), (e.1 + g.1).rem_euclid(d.1));
            if set & bit(s) == 0 {
                set |= bit(s);
                frontier.push(s);
            }
        }
    }
    set
}

fn lattice_quotient(d: (i64, i64)) -> Result<usize, String> {
    let p = LatticeGroup::new(2, &[big(&[d.0, 0]), big(&[0, d.1])]).map_err(|e| e.to_string())?;
    let elems: Vec<(i64, i64)> = (0..d.0).flat_map(|x| (0..d.1).map(move |y| (x, y))).collect();
    let mut subgroups: BTreeMap<u64, LatticeSubgroup> = BTreeMap::new();
    for &g in &elems {
        for &h in &elems {
            let set = closure(d, &[g, h]);
            // generators shifted by the relations to exercise reduction
            let gens = [big(&[g.0 - d.0, g.1 + 2 * d.1]), big(&[h.0, h.1])];
            let s = canonicalize(&gens, &p).map_err(|e| e.to_string())?;
            match subgroups.get(&set) {
                Some(t) => ensure!(*t == s, "{d:?}: <{g:?}, {h:?}> canonicalizes differently from an equal subgroup"),
                None => {
                    ensure!(!subgroups.values().any(|t| *t == s), "{d:?}: <{g:?}, {h:?}> collides with a different subgroup");
                    subgroups.insert(set, s);
                }
            }
        }
    }
    let bit = |(x, y): (i64, i64)| 1u64 << (x * d.1 + y);
    for (&set, s) in &subgroups {
        for &e in &elems {
            let v = big(&[e.0 + 3 * d.0, e.1 - d.1]);
            let got = lattice::membership(&v, s).map_err(|e| e.to_string())?;
            ensure!(got == (set & bit(e) != 0), "{d:?}: membership of {e:?}");
        }
        for (&tset, t) in &subgroups {
            let sub = set & tset == set;
            match lattice::index(s, t) {
                Ok(Index::Finite(i)) if sub => {
                    let want = tset.count_ones() / set.count_ones();
                    ensure!(i == BigInt::from(want), "{d:?}: index {i}, enumeration {want}");
                }
                Err(LatticeError::NotASubgroup) if !sub => {}
                other => return Err(format!("{d:?}: index gave {other:?} with containment {sub}")),
            }
            if sub {
                // every element of a finite group has a power in S
                let e = lattice::root_closure(s, t).map_err(|e| e.to_string())?;
                ensure!(e == *t, "{d:?}: root closure differs from T");
            }
        }
    }
    Ok(subgroups.len())
}

fn lattice_enumeration() -> Result<String, String> {
    let mut total = 0;
    for d1 in 1..=6 {
        for d2 in 1..=6 {
            total += lattice_quotient((d1, d2))?;
        }
    }
    Ok(format!("{total} subgroups over 36 quotients agree"))
}

// 9 ------------------------------------------------------------------------

fn corpus() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn corpus_files() -> Vec<PathBuf> {
    let mut out = Vec::new();
    for dir in [corpus(), corpus().join("refine")] {
        let mut files: Vec<PathBuf> = std::fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).filter(|p| p.is_file()).collect();
        files.sort();
        out.extend(files);
    }
    out
}

fn corpus_doc(name: &str) -> GogDocument {
    GogDocument::parse(&std::fs::read_to_string(corpus().join(name)).unwrap(), Mode::Lenient).unwrap()
}

fn generated_graphs() -> Vec<GraphOfGroups> {
    let shapes: [&[(usize, usize)]; 5] = [
        &[(0, 1), (1, 2)],
        &[(0, 1), (1, 2), (2, 0)],
        &[(0, 1), (0, 1), (1, 2)],
        &[(0, 1), (1, 2), (2, 0), (0, 2)],
        &[(0, 1), (1, 2), (2, 0), (0, 0), (1, 2)],
    ];
    let mut out = Vec::new();
    for shape in shapes {
        for s in 0..4i64 {
            let edges = shape
                .iter()
                .enumerate()
                .map(|(i, &(a, b))| {
                    let i = i as i64;
                    let from = (1 + (i + s) % 3) * if (i + s) % 2 == 0 { 1 } else { -1 };
                    let to = 1 + (2 * i + s) % 4;
                    Edge {
                        name: format!("e{i}"),
                        label: abelian(1, &[]),
                        from: a,
                        to: b,
                        from_map: vecs(&[&[from]]),
                        to_map: vecs(&[&[to]]),
                    }
                })
                .collect();
            let vertices = (0..3).map(|v| vertex(&format!("v{v}"), abelian(1, &[]))).collect();
            out.push(GraphOfGroups::new(vertices, edges));
        }
    }
    out
}

fn spanning_tree_independence() -> Result<String, String> {
    let mut graphs: Vec<(String, GraphOfGroups)> = Vec::new();
    for f in corpus_files() {
        let text = std::fs::read_to_string(&f).unwrap();
        if let Ok(doc) = GogDocument::parse(&text, Mode::Lenient) {
            graphs.push((f.file_name().unwrap().to_string_lossy().into(), doc.graph));
        }
    }
    for id in FamilyId::ALL {
        for n in 1..=4 {
            if let Ok(inst) = make(id, n) {
                graphs.push((format!("{id} {n}"), inst.graph));
                graphs.extend(inst.related.into_iter().map(|(name, g)| (format!("{id} {n} {name}"), g)));
            }
        }
    }
    graphs.extend(generated_graphs().into_iter().enumerate().map(|(i, g)| (format!("generated {i}"), g)));
    let (mut checked, mut trees, mut unpresentable) = (0, 0, 0);
    for (name, g) in &graphs {
        if g.edges().len() > 5 {
            continue;
        }
        let mut seen: Option<AbelianInvariants> = None;
        let mut skipped = false;
        for tree in g.spanning_trees() {
            let p = match fundamental_presentation(g, &tree) {
                Ok(p) => p,
                Err(_) => {
                    skipped = true;
                    break;
                }
            };
            let ab = abelianization(&p);
            trees += 1;
            if let Some(first) = &seen {
                ensure!(*first == ab, "{name}: tree {tree:?} gives {ab}, another gives {first}");
            }
            seen = Some(ab);
        }
        if skipped {
            unpresentable += 1;
        } else {
            checked += 1;
        }
    }
    Ok(format!("{checked} graphs over {trees} trees agree, {unpresentable} skipped as unpresentable"))
}

// 10 -----------------------------------------------------------------------

fn gog(args: &[String]) -> (i32, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(std::iter::once("gog".to_string()).chain(args.iter().cloned()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap())
}

fn path(name: &str) -> String {
    corpus().join(name).to_string_lossy().into_owned()
}

fn tri_of(t: Result<TriState, gogkit::gog::GogError>) -> TriState {
    t.unwrap_or(TriState::Unknown)
}

fn cli_round_trip() -> Result<String, String> {
    // parse and serialize are idempotent on every shipped document
    let mut documents = 0;
    for f in corpus_files() {
        if f.parent().is_some_and(|d| d.ends_with("invalid")) {
            continue;
        }
        let text = std::fs::read_to_string(&f).unwrap();
        let name = f.display();
        let once = GogDocument::parse(&text, Mode::Lenient).map_err(|e| format!("{name}: {e}"))?.serialize();
        let twice = GogDocument::parse(&once, Mode::Lenient).map_err(|e| format!("{name}: {e}"))?.serialize();
        ensure!(once == twice, "{name}: serialize is not idempotent");
        let (code, out) = gog(&["--lenient".into(), "format".into(), f.to_string_lossy().into()]);
        ensure!(code == 0 && out == once, "{name}: format exit {code}");
        documents += 1;
    }

    let t3 = format!("--data={}", path("refine/theta0-t3.refine"));
    let goldens: Vec<(Vec<String>, i32, &str)> = [
        (vec!["minimal", &path("trivial-amalgam.gog")], 1, "minimal: NO"),
        (vec!["minimal", &path("theta0.gog")], 0, ""),
        (vec!["minimal", &path("trefoil.gog")], 0, ""),
        (vec!["minimal", &path("bs12.gog")], 0, ""),
        (vec!["minimal", &path("heis-center.gog")], 0, ""),
        (vec!["reduced", &path("subdivided.gog")], 1, ""),
        (vec!["reduced", &path("trefoil.gog")], 0, ""),
        (vec!["redundant", &path("subdivided.gog")], 1, "m"),
        (vec!["redundant", &path("theta0.gog")], 0, ""),
        (vec!["validate", &path("theta0.gog")], 2, "unchecked: 2"),
        (vec!["validate", &path("trefoil.gog")], 0, "errors: 0"),
        (vec!["validate", &path("finite-order-3.gog")], 2, ""),
        (vec!["validate", &path("no-such-file.gog")], 65, ""),
        (vec!["equivalent", &path("trefoil.gog"), &path("trefoil.gog")], 0, ""),
        (vec!["equivalent", &path("trefoil.gog"), &path("bs12.gog")], 1, ""),
        (vec!["invariants", &path("trefoil.gog")], 0, "(1; ())"),
        (vec!["invariants", &path("theta0.gog")], 2, ""),
        (vec!["invariants", &path("free-product.gog")], 0, "(1; (6))"),
        (vec!["collapse", &path("trefoil.gog"), "--edges", "e"], 0, "gog/1"),
        (vec!["collapse", &path("theta0.gog"), "--edges", "zz"], 64, ""),
        (vec!["refine", &path("theta0.gog"), &t3], 0, "gog/1"),
        (vec!["refine", &path("theta0.gog"), &format!("--data={}", path("refine/theta0-bad-marking.refine"))], 65, ""),
        (vec!["refine", &path("theta0.gog"), &format!("--data={}", path("refine/theta0-at-w.refine"))], 2, ""),
        (
            vec!["refine", &path("trivial-amalgam.gog"), &format!("--data={}", path("refine/trivial-amalgam-split.refine"))],
            1,
            "",
        ),
        (vec!["family", "theta", "--n", "5", "--invariants"], 0, "index: 5"),
        (vec!["family", "heisenberg", "--n", "3", "--invariants"], 0, "index: 9"),
        (vec!["family", "bs24", "--n", "0"], 64, ""),
        (vec!["sandwich", "--ambient", "2", "--sub", "(2, 0)"], 0, "classes: 4"),
        (vec!["sandwich", "--ambient", "3 / (0, 0, 4)", "--sub", "(2, 0, 0)"], 0, "classes: 16"),
        (vec!["format", &path("invalid/bad-exponent.gog")], 65, ""),
        (vec!["format", &path("lenient-extra.gog")], 65, ""),
        (vec!["--lenient", "format", &path("lenient-extra.gog")], 0, "[layout]"),
    ]
    .into_iter()
    .map(|(args, code, needle)| (args.into_iter().map(String::from).collect(), code, needle))
    .collect();
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    for (i, (args, want, needle)) in goldens.iter().enumerate() {
        let (code, out) = gog(args);
        ensure!(code == *want, "{}: exit {code}, golden {want}", args.join(" "));
        ensure!(out.contains(needle), "{}: output lacks {needle:?}", args.join(" "));
        // determinism of stdout and of the report file
        let reports: Vec<(String, String)> = (0..2)
            .map(|k| {
                let r = dir.path().join(format!("{i}-{k}.txt"));
                let mut a = vec!["--report".to_string(), r.to_string_lossy().into()];
                a.extend(args.iter().cloned());
                let (_, out) = gog(&a);
                (out, std::fs::read_to_string(&r).unwrap_or_default())
            })
            .collect();
        ensure!(reports[0] == reports[1] && reports[0].0 == out, "{}: output differs between runs", args.join(" "));
    }

    // predicate exit codes against the library's answers
    let mut predicates = 0;
    for f in ["trivial-amalgam.gog", "theta0.gog", "trefoil.gog", "bs12.gog", "heis-center.gog", "subdivided.gog"] {
        let g = corpus_doc(f).graph;
        for (cmd, t) in [("minimal", tri_of(is_minimal(&g))), ("reduced", tri_of(is_reduced(&g)))] {
            let (code, _) = gog(&[cmd.into(), path(f)]);
            ensure!(code == exit_code(t), "{cmd} {f}: exit {code}, library {t}");
            predicates += 1;
        }
        for other in ["trefoil.gog", "bs12.gog"] {
            let t = equivalent(&g, &corpus_doc(other).graph);
            let (code, _) = gog(&["equivalent".into(), path(f), path(other)]);
            ensure!(code == exit_code(t), "equivalent {f} {other}: exit {code}, library {t}");
            predicates += 1;
        }
    }
    Ok(format!("{documents} documents stable, {} golden invocations, {predicates} predicate exits match", goldens.len()))
}
