use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use ktq::algebra::{
    affine_table, classify, enumerate_ktqs, parse_algebra, EnumerateOptions, Filter, OpTable, TernaryQuasigroup,
};
use ktq::chain::{
    boundary, boundary_tuple, d_degeneracy, face_left, face_right, is_d_degenerate, literal_degeneracy_windows,
    relator_generators, tuples, Chain, DTuple, DiffKind, RelatorVariant,
};
use ktq::diagram::{CrossingKind, Diagram, DiagramKind};
use ktq::homology::{
    cocycle_constraints, homology, relator_matrix, two_cocycles, CycleClassifier, HomologyVariant, Relators,
};
use ktq::invariants::state_sum_over;
use ktq::linalg::hermite_normal_form;
use num_bigint::BigInt;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Outcome = Result<String, String>;
type Criterion = (&'static str, u64, fn() -> Outcome);

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

fn algebra(name: &str) -> TernaryQuasigroup {
    let path = fixtures().join("algebras").join(format!("{name}.ktq"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    classify(&parse_algebra(&text).expect("fixture algebra parses"))
}

fn diagram(name: &str) -> Diagram {
    let path = fixtures().join("diagrams").join(format!("{name}.diag"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    Diagram::parse(&text).expect("fixture diagram parses")
}

const SAMPLE_KTQS: [&str; 6] = ["trivial", "z2_sum", "z2_sum_shifted", "z3_linear", "z4_linear", "z5_affine"];

fn sample_quasigroups() -> Vec<(&'static str, TernaryQuasigroup)> {
    SAMPLE_KTQS.iter().chain(&["z3_sum"]).map(|&n| (n, algebra(n))).collect()
}

fn diagram_names() -> Vec<String> {
    let mut names: Vec<String> = std::fs::read_dir(fixtures().join("diagrams"))
        .expect("diagram fixtures")
        .filter_map(|e| {
            let p = e.ok()?.path();
            (p.extension()? == "diag").then(|| p.file_stem().unwrap().to_string_lossy().into_owned())
        })
        .collect();
    names.sort();
    names
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn t(v: &[u8]) -> DTuple {
    DTuple::from(v)
}

fn op(tab: &OpTable) -> impl Fn(u8, u8, u8) -> u8 + '_ {
    move |a, b, c| tab.apply(a, b, c)
}

// ---------------------------------------------------------------------------
// 1. Axiom oracle

struct BruteFlags {
    quasigroup: bool,
    a3l: bool,
    a3r: bool,
    involutory: bool,
}

fn brute_flags(n: usize, v: &[u8]) -> BruteFlags {
    let at = |a: usize, b: usize, c: usize| v[(a * n + b) * n + c] as usize;
    let mut quasigroup = true;
    for p in 0..n {
        for q in 0..n {
            let mut seen = [[false; 8]; 3];
            for s in 0..n {
                seen[0][at(s, p, q)] = true;
                seen[1][at(p, s, q)] = true;
                seen[2][at(p, q, s)] = true;
            }
            if seen.iter().any(|row| row[..n].iter().any(|&b| !b)) {
                quasigroup = false;
            }
        }
    }
    let (mut a3l, mut a3r, mut involutory) = (true, true, true);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if at(a, at(a, b, c), c) != b {
                    involutory = false;
                }
                for d in 0..n {
                    let lhs_l = at(at(a, b, c), c, d);
                    let rhs_l = at(at(a, b, at(b, c, d)), at(b, c, d), d);
                    let lhs_r = at(a, b, at(b, c, d));
                    let rhs_r = at(a, at(a, b, c), at(at(a, b, c), c, d));
                    a3l &= lhs_l == rhs_l;
                    a3r &= lhs_r == rhs_r;
                }
            }
        }
    }
    BruteFlags { quasigroup, a3l, a3r, involutory: quasigroup && involutory }
}

fn agree(tab: &OpTable) -> Result<(), String> {
    let f = classify(tab).flags();
    let b = brute_flags(tab.order(), tab.values());
    ensure(
        f.is_quasigroup == b.quasigroup
            && f.satisfies_a3l == b.a3l
            && f.satisfies_a3r == b.a3r
            && f.is_involutory == b.involutory,
        || format!("flags disagree on table {:?}", tab.values()),
    )
}

fn axiom_oracle() -> Outcome {
    let mut checked = 0;
    for bits in 0u32..256 {
        let v: Vec<u8> = (0..8).map(|i| ((bits >> i) & 1) as u8).collect();
        agree(&OpTable::new(2, v).unwrap())?;
        checked += 1;
    }
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let latin = enumerate_ktqs(EnumerateOptions::new(3).filter(Filter::AllQuasigroups)).map_err(|e| e.to_string())?;
    for k in 0..500 {
        let v: Vec<u8> = if k % 2 == 0 {
            (0..27).map(|_| rng.gen_range(0..3)).collect()
        } else {
            let mut v = latin[rng.gen_range(0..latin.len())].values().to_vec();
            if k % 4 == 1 {
                let i = rng.gen_range(0..27);
                v[i] = rng.gen_range(0..3);
            }
            v
        };
        agree(&OpTable::new(3, v).unwrap())?;
        checked += 1;
    }
    for n in 3..=5 {
        for (a, b, c) in itertools::iproduct!(0..n as i64, 0..n as i64, 0..n as i64) {
            agree(&affine_table(n, a, b, c).unwrap())?;
            checked += 1;
        }
    }
    Ok(format!("{checked} tables"))
}

// ---------------------------------------------------------------------------
// 2. Low-degree boundary formulas

fn chain_of(degree: isize, terms: &[(Vec<u8>, i64)]) -> Chain {
    Chain::from_terms(degree, terms.iter().map(|(v, k)| (t(v), *k)))
}

fn hand_boundary(tab: &OpTable, x: &[u8]) -> Chain {
    let f = op(tab);
    match *x {
        [a, b, c] => {
            let abc = f(a, b, c);
            chain_of(0, &[(vec![b, c], 1), (vec![a, abc], -1), (vec![abc, c], -1), (vec![a, b], 1)])
        }
        [a, b, c, d] => {
            let abc = f(a, b, c);
            let bcd = f(b, c, d);
            chain_of(
                1,
                &[
                    (vec![b, c, d], 1),
                    (vec![a, abc, f(abc, c, d)], -1),
                    (vec![abc, c, d], -1),
                    (vec![a, b, bcd], 1),
                    (vec![f(a, b, bcd), bcd, d], 1),
                    (vec![a, b, c], -1),
                ],
            )
        }
        [a, b, c, d, e] => {
            let abc = f(a, b, c);
            let abc_cd = f(abc, c, d);
            let bcd = f(b, c, d);
            let cde = f(c, d, e);
            let bc_cde = f(b, c, cde);
            chain_of(
                2,
                &[
                    (vec![b, c, d, e], 1),
                    (vec![a, abc, abc_cd, f(abc_cd, d, e)], -1),
                    (vec![abc, c, d, e], -1),
                    (vec![a, b, bcd, f(bcd, d, e)], 1),
                    (vec![f(a, b, bcd), bcd, d, e], 1),
                    (vec![a, b, c, cde], -1),
                    (vec![f(a, b, bc_cde), bc_cde, cde, e], -1),
                    (vec![a, b, c, d], 1),
                ],
            )
        }
        _ => unreachable!(),
    }
}

fn formula_fidelity() -> Outcome {
    let x = algebra("z3_linear");
    let mut checked = 0;
    for degree in 1..=3 {
        for tup in tuples(3, degree) {
            let generic = boundary_tuple(x.table(), &tup, DiffKind::Full);
            let expected = hand_boundary(x.table(), tup.entries());
            ensure(generic == expected, || format!("boundary of {tup:?}: {generic:?} vs {expected:?}"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} tuples"))
}

// ---------------------------------------------------------------------------
// 3. The boundary squares to zero

fn boundary_squared() -> Outcome {
    let mut checked = 0;
    for name in ["z2_sum", "z2_sum_shifted", "z3_linear"] {
        let x = algebra(name);
        for kind in [DiffKind::Left, DiffKind::Right, DiffKind::Full] {
            for degree in 1..=4 {
                for tup in tuples(x.order(), degree) {
                    let dd = boundary(x.table(), &boundary_tuple(x.table(), &tup, kind), kind);
                    ensure(dd.is_zero(), || format!("{name} {kind:?}: boundary twice of {tup:?} is {dd:?}"))?;
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} generators"))
}

// ---------------------------------------------------------------------------
// 4. Relator subgroups are subcomplexes

fn column(c: &Chain, order: usize) -> Vec<BigInt> {
    c.to_vector(order).into_iter().map(BigInt::from).collect()
}

fn closure_case(x: &TernaryQuasigroup, variant: RelatorVariant, kind: DiffKind) -> Result<usize, String> {
    let relators = match variant {
        RelatorVariant::D => Relators::D,
        RelatorVariant::I => Relators::I,
        RelatorVariant::ID => Relators::ID,
    };
    let mut checked = 0;
    for degree in 1..=3 {
        let lower = relator_matrix(x, degree - 1, relators).map_err(|e| e.to_string())?;
        let lattice = hermite_normal_form(&lower);
        for g in relator_generators(x, degree, variant).map_err(|e| e.to_string())?.generators {
            let b = boundary(x.table(), &g, kind);
            ensure(lattice.solve(&column(&b, x.order())).is_some(), || {
                format!("{variant:?} {kind:?}: boundary of relator {g:?} leaves the subgroup")
            })?;
            checked += 1;
        }
    }
    Ok(checked)
}

fn subcomplex_closure() -> Outcome {
    let z3 = algebra("z3_linear");
    let z5 = algebra("z5_affine");
    let mut checked = 0;
    for kind in [DiffKind::Left, DiffKind::Right, DiffKind::Full] {
        for variant in [RelatorVariant::D, RelatorVariant::I, RelatorVariant::ID] {
            checked += closure_case(&z3, variant, kind)?;
        }
        checked += closure_case(&z5, RelatorVariant::D, kind)?;
    }
    Ok(format!("{checked} relator boundaries"))
}

// ---------------------------------------------------------------------------
// 5. Left/right duality through the reversed operation

fn duality() -> Outcome {
    let mut checked = 0;
    for (name, x) in sample_quasigroups() {
        let tab = x.table();
        let hat = tab.hat();
        for degree in 0..=3 {
            let n = degree as usize;
            for tup in tuples(x.order(), degree) {
                let rev = tup.reversed();
                for i in 0..=n {
                    let right = face_right(tab, i, &tup).unwrap();
                    let converted = face_left(&hat, n - i, &rev).unwrap().reversed();
                    ensure(right == converted, || format!("{name}: face {i} of {tup:?}"))?;
                }
                let right = boundary_tuple(tab, &tup, DiffKind::Right);
                let left = boundary_tuple(&hat, &rev, DiffKind::Left).reversed();
                let sign = if n.is_multiple_of(2) { 1 } else { -1 };
                ensure(right == left.scaled(-sign), || format!("{name}: right boundary of {tup:?}"))?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} tuples"))
}

// ---------------------------------------------------------------------------
// 6. Degeneracy conditions

fn brute_division(tab: &OpTable, slot: usize, p: u8, q: u8, target: u8) -> u8 {
    (0..tab.order() as u8)
        .find(|&s| {
            let v = match slot {
                0 => tab.apply(s, p, q),
                _ => tab.apply(p, q, s),
            };
            v == target
        })
        .expect("quasigroup slots are bijective")
}

fn degeneracy_equivalence() -> Outcome {
    let mut checked = 0;
    for (name, x) in sample_quasigroups() {
        let tab = x.table();
        for degree in 1..=3 {
            for tup in tuples(x.order(), degree) {
                let e = tup.entries();
                let windows = 1..e.len() - 1;
                let unified = windows.clone().find(|&j| tab.apply(e[j - 1], e[j], e[j + 1]) == e[j]);
                // (a, b, abbR): the third entry solves a b _ T = b.
                let d1 = windows.clone().find(|&j| e[j + 1] == brute_division(tab, 2, e[j - 1], e[j], e[j]));
                // (bbaL, b, a): the first entry solves _ b a T = b.
                let d2 = windows.clone().find(|&j| e[j - 1] == brute_division(tab, 0, e[j], e[j + 1], e[j]));
                ensure(unified == d1 && d1 == d2, || format!("{name}: windows of {tup:?} differ"))?;
                let lib = literal_degeneracy_windows(&x, &tup).map_err(|e| e.to_string())?;
                ensure(lib == (d1, d2), || format!("{name}: literal windows of {tup:?}"))?;
                let found = d_degeneracy(&x, &tup).map_err(|e| e.to_string())?;
                ensure(found.map(|g| g.window) == unified, || format!("{name}: unified window of {tup:?}"))?;
                ensure(found.is_none_or(|g| g.d1 && g.d2), || format!("{name}: flags of {tup:?}"))?;
                ensure(is_d_degenerate(&x, &tup).unwrap() == unified.is_some(), || name.to_string())?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} tuples"))
}

// ---------------------------------------------------------------------------
// 7. Coloring solver against exhaustive search

fn brute_colorings(d: &Diagram, x: &TernaryQuasigroup) -> BTreeSet<Vec<u8>> {
    let n = x.order();
    let r = d.num_regions();
    let mut out = BTreeSet::new();
    let mut col = vec![0u8; r];
    for mut code in 0..n.pow(r as u32) {
        for slot in col.iter_mut() {
            *slot = (code % n) as u8;
            code /= n;
        }
        let ok = d.crossings().iter().all(|c| {
            let [a, b, cc, dd] = c.corners.map(|i| col[i]);
            match c.kind {
                CrossingKind::Marker => a == cc && b == dd,
                _ => x.apply(a, b, cc) == dd,
            }
        });
        if ok {
            out.insert(col.clone());
        }
    }
    out
}

fn colorable(d: &Diagram, x: &TernaryQuasigroup) -> bool {
    match d.kind() {
        Some(DiagramKind::Flat) => x.is_iktq(),
        _ => x.is_quasigroup(),
    }
}

fn coloring_solver() -> Outcome {
    let mut checked = 0;
    for (name, x) in sample_quasigroups() {
        for dname in diagram_names() {
            let d = diagram(&dname);
            if !colorable(&d, &x) {
                ensure(d.colorings(&x).is_err(), || format!("{dname} over {name} should be rejected"))?;
                continue;
            }
            if (x.order() as f64).powi(d.num_regions() as i32) > 1e6 {
                continue;
            }
            let solved: BTreeSet<Vec<u8>> = d.colorings(&x).map_err(|e| e.to_string())?.into_iter().collect();
            ensure(solved == brute_colorings(&d, &x), || format!("{dname} over {name}"))?;
            checked += 1;
        }
        let unknot = diagram("unknot").count_colorings(&x).map_err(|e| e.to_string())?;
        ensure(unknot == x.order().pow(2), || format!("unknot over {name}: {unknot}"))?;
    }
    let example = diagram("example3").count_colorings(&algebra("z3_linear")).map_err(|e| e.to_string())?;
    ensure(example == 3, || format!("example diagram has {example} colorings"))?;
    Ok(format!("{checked} diagram/algebra pairs"))
}

// ---------------------------------------------------------------------------
// 8. Associated chains are cycles

fn cycle_property() -> Outcome {
    let mut checked = 0;
    for name in SAMPLE_KTQS {
        let x = algebra(name);
        for dname in diagram_names() {
            let d = diagram(&dname);
            if !colorable(&d, &x) {
                continue;
            }
            for col in d.colorings(&x).map_err(|e| e.to_string())? {
                let mut c = Chain::zero(1);
                for k in d.crossings() {
                    let [a, b, cc, _] = k.corners.map(|i| col[i]);
                    c.add_term(t(&[a, b, cc]), k.kind.sign());
                }
                let b = boundary(x.table(), &c, DiffKind::Full);
                ensure(b.is_zero(), || format!("{dname} over {name}, coloring {col:?}: boundary {b:?}"))?;
                let lib = d.associated_chain(&x, &col).map_err(|e| e.to_string())?;
                ensure(lib == c, || format!("{dname} over {name}: associated chain differs"))?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} colorings"))
}

// ---------------------------------------------------------------------------
// 9. Invariance under the moves

struct Pair {
    name: String,
    step: String,
    flat: bool,
    first: String,
    second: String,
    correspondence: String,
}

fn pairs() -> Vec<Pair> {
    let text = std::fs::read_to_string(fixtures().join("pairs.txt")).expect("pairs manifest");
    text.lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|l| {
            let f: Vec<&str> = l.split_whitespace().collect();
            Pair {
                name: f[0].into(),
                step: f[1].into(),
                flat: f[2] == "flat",
                first: f[3].into(),
                second: f[4].into(),
                correspondence: f[5].into(),
            }
        })
        .collect()
}

fn move_variant(p: &Pair) -> HomologyVariant {
    match (p.step.as_str(), p.flat) {
        ("R1", false) => HomologyVariant::normalized(),
        ("R1", true) => HomologyVariant::normalized_involutory_degenerate(),
        ("R2", true) => HomologyVariant::normalized_involutory(),
        _ => HomologyVariant::plain(),
    }
}

fn state_sum_multiset(d: &Diagram, cols: &[Vec<u8>], phi: &ktq::homology::Cochain) -> BTreeMap<u64, i64> {
    state_sum_over(d, phi, cols).terms().filter(|&(_, k)| k != 0).collect()
}

fn invariance_suite() -> Outcome {
    let mut checked = 0;
    let moves: BTreeSet<String> = pairs().iter().map(|p| format!("{}{}", p.step, if p.flat { "f" } else { "" })).collect();
    for wanted in ["R1", "R2", "R3", "R1f", "R2f", "R3f"] {
        ensure(moves.contains(wanted), || format!("no fixture pair for {wanted}"))?;
    }
    for name in SAMPLE_KTQS.iter().filter(|&&n| n != "trivial") {
        let x = algebra(name);
        for p in pairs() {
            if p.flat && !x.is_iktq() {
                continue;
            }
            let variant = move_variant(&p);
            let (d1, d2) = (diagram(&p.first), diagram(&p.second));
            let corr_path = fixtures().join("correspondences").join(&p.correspondence);
            let corr = ktq::diagram::Correspondence::parse(&std::fs::read_to_string(corr_path).unwrap())
                .map_err(|e| e.to_string())?;
            let cols1 = d1.colorings(&x).map_err(|e| e.to_string())?;
            let cols2 = d2.colorings(&x).map_err(|e| e.to_string())?;
            let label = format!("{} over {name} in {variant}", p.name);
            ensure(cols1.len() == cols2.len(), || format!("{label}: {} vs {} colorings", cols1.len(), cols2.len()))?;

            let classifier = CycleClassifier::new(&x, variant).map_err(|e| e.to_string())?;
            for (i, j) in corr.match_colorings(&cols1, &cols2).map_err(|e| e.to_string())? {
                let c1 = d1.associated_chain(&x, &cols1[i]).map_err(|e| e.to_string())?;
                let c2 = d2.associated_chain(&x, &cols2[j]).map_err(|e| e.to_string())?;
                let same = classifier.class_equal(&c1, &c2).map_err(|e| e.to_string())?;
                ensure(same, || format!("{label}: classes differ for coloring {:?}", cols1[i]))?;
            }

            for phi in two_cocycles(&x, 3, variant).map_err(|e| e.to_string())? {
                let s1 = state_sum_multiset(&d1, &cols1, &phi);
                let s2 = state_sum_multiset(&d2, &cols2, &phi);
                ensure(s1 == s2, || format!("{label}: state sums {s1:?} vs {s2:?}"))?;
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} pair/algebra cases"))
}

// ---------------------------------------------------------------------------
// 10. Cocycle generators against row reduction modulo p

fn rank_mod(rows: &[Vec<u64>], p: u64) -> usize {
    let mut m: Vec<Vec<u64>> = rows.iter().map(|r| r.iter().map(|v| v % p).collect()).collect();
    let cols = m.first().map_or(0, Vec::len);
    let inv = |a: u64| (1..p).find(|&b| a * b % p == 1).unwrap();
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..m.len()).find(|&r| m[r][c] != 0) else { continue };
        m.swap(rank, piv);
        let s = inv(m[rank][c]);
        for v in m[rank].iter_mut() {
            *v = *v * s % p;
        }
        for r in 0..m.len() {
            if r != rank && m[r][c] != 0 {
                let f = m[r][c];
                let pivot = m[rank].clone();
                for (v, w) in m[r].iter_mut().zip(&pivot) {
                    *v = (*v + p - f * w % p) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn constraint_rows(x: &TernaryQuasigroup, variant: RelatorVariant) -> Vec<Vec<i64>> {
    let mut rows: Vec<Vec<i64>> =
        tuples(x.order(), 2).map(|tup| boundary_tuple(x.table(), &tup, DiffKind::Full).to_vector(x.order())).collect();
    for g in relator_generators(x, 1, variant).unwrap().generators {
        rows.push(g.to_vector(x.order()));
    }
    rows
}

fn cocycle_cross_check() -> Outcome {
    let x = algebra("z3_linear");
    let mut report = Vec::new();
    for (variant, relators, rv) in [
        (HomologyVariant::normalized(), Relators::D, RelatorVariant::D),
        (HomologyVariant::normalized_involutory_degenerate(), Relators::ID, RelatorVariant::ID),
    ] {
        ensure(variant.relators == relators, || "variant table".into())?;
        let rows = constraint_rows(&x, rv);
        let lib_rows = cocycle_constraints(&x, variant).map_err(|e| e.to_string())?;
        ensure(lib_rows.rows() == rows.len(), || "constraint row count".into())?;
        for p in [2u64, 3, 5] {
            let reduced: Vec<Vec<u64>> =
                rows.iter().map(|r| r.iter().map(|&v| v.rem_euclid(p as i64) as u64).collect()).collect();
            let nullity = 27 - rank_mod(&reduced, p);
            let gens = two_cocycles(&x, p, variant).map_err(|e| e.to_string())?;
            let vectors: Vec<Vec<u64>> = gens.iter().map(|g| g.to_vector(3)).collect();
            for g in &vectors {
                for r in &reduced {
                    let dot: u64 = r.iter().zip(g).map(|(a, b)| a * b).sum::<u64>() % p;
                    ensure(dot == 0, || format!("{variant} mod {p}: generator violates a constraint"))?;
                }
            }
            let span = rank_mod(&vectors, p);
            ensure(span == nullity, || format!("{variant} mod {p}: span {span}, expected {nullity}"))?;
            report.push(format!("{variant}/Z_{p}: {nullity}"));
        }
    }
    Ok(report.join(", "))
}

// ---------------------------------------------------------------------------
// 11. Homology regression

const FROZEN_NORMALIZED_DEGREE_ONE: [(&str, &str); 3] = [("z2_sum", "Z^2"), ("z2_sum_shifted", "Z"), ("z3_linear", "Z^6")];

/// Dimension of the degree-one homology of the normalized complex with
/// coefficients in `Z_p`, by row reduction on non-degenerate tuples.
fn normalized_dimension_mod(x: &TernaryQuasigroup, p: u64) -> usize {
    let n = x.order();
    let nondeg = |degree: isize| -> Vec<DTuple> {
        tuples(n, degree).filter(|tup| !is_d_degenerate(x, tup).unwrap()).collect()
    };
    let matrix = |from: &[DTuple], to: &[DTuple]| -> Vec<Vec<u64>> {
        let index: BTreeMap<&DTuple, usize> = to.iter().enumerate().map(|(i, tup)| (tup, i)).collect();
        from.iter()
            .map(|tup| {
                let mut row = vec![0u64; to.len()];
                for (face, k) in boundary_tuple(x.table(), tup, DiffKind::Full).iter() {
                    if let Some(&i) = index.get(face) {
                        row[i] = (row[i] as i64 + k).rem_euclid(p as i64) as u64;
                    }
                }
                row
            })
            .collect()
    };
    let (c0, c1, c2) = (nondeg(0), nondeg(1), nondeg(2));
    c1.len() - rank_mod(&matrix(&c1, &c0), p) - rank_mod(&matrix(&c2, &c1), p)
}

fn homology_regression() -> Outcome {
    for name in SAMPLE_KTQS {
        let x = algebra(name);
        for variant in [HomologyVariant::plain(), HomologyVariant::normalized()] {
            let g = homology(&x, -1, variant).map_err(|e| e.to_string())?;
            ensure(g.to_string() == "Z", || format!("{name}: {variant} in degree -1 is {g}"))?;
        }
    }
    let trivial = algebra("trivial");
    for degree in 1..=3 {
        let g = homology(&trivial, degree, HomologyVariant::normalized()).map_err(|e| e.to_string())?;
        ensure(g.is_trivial(), || format!("trivial algebra: degree {degree} is {g}"))?;
    }
    for (name, frozen) in FROZEN_NORMALIZED_DEGREE_ONE {
        let x = algebra(name);
        let h1 = homology(&x, 1, HomologyVariant::normalized()).map_err(|e| e.to_string())?;
        let h0 = homology(&x, 0, HomologyVariant::normalized()).map_err(|e| e.to_string())?;
        ensure(h1.to_string() == frozen, || format!("{name}: H^N_1 = {h1}, frozen {frozen}"))?;
        for p in [2u64, 3] {
            let expected = h1.free_rank + h1.p_torsion_count(p) + h0.p_torsion_count(p);
            let found = normalized_dimension_mod(&x, p);
            ensure(found == expected, || format!("{name} mod {p}: dimension {found}, groups predict {expected}"))?;
        }
    }
    Ok("frozen degree-one groups confirmed".into())
}

// ---------------------------------------------------------------------------

fn main() {
    let criteria: [Criterion; 11] = [
        ("axiom oracle", 10, axiom_oracle),
        ("boundary formulas in low degrees", 5, formula_fidelity),
        ("boundary squares to zero", 30, boundary_squared),
        ("relator subgroups are subcomplexes", 60, subcomplex_closure),
        ("left/right duality", 10, duality),
        ("degeneracy conditions agree", 5, degeneracy_equivalence),
        ("coloring solver matches exhaustive search", 30, coloring_solver),
        ("associated chains are cycles", 10, cycle_property),
        ("invariance under moves", 120, invariance_suite),
        ("cocycle generators match row reduction", 60, cocycle_cross_check),
        ("homology regression", 120, homology_regression),
    ];
    let mut failures = 0;
    for (i, (label, limit, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > Duration::from_secs(*limit) => {
                Err(format!("{detail}; exceeded the {limit} s limit"))
            }
            other => other,
        };
        let secs = elapsed.as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {label} ({detail}; {secs:.2} s)", i + 1),
            Err(why) => {
                failures += 1;
                println!("FAIL {:>2} {label}: {why} ({secs:.2} s)", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
