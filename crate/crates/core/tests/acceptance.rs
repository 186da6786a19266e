//! End-to-end acceptance suite.
//!
//! Each test certifies one pillar of the library against independent
//! oracles — brute-force enumerations, closed-form counts, or frozen
//! reference values — and prints a one-line summary. The suite is fully
//! deterministic: every random input comes from a fixed-seed generator or
//! a frozen draw.

use mhk_core::{
    bases_of, characterization_report, check_circuit_axioms, chordless_circuits, circuits_of,
    covering_number_bruteforce, fort_hedlund, generate_closure, min_circuit_clauses,
    min_circuit_subsystem, min_generator, phi_shift, rank2_group_representation, schonheim_bound,
    verify_design, BinaryMatrix, BoolFn, Budget, CircuitAxiomViolation, DefiniteClause,
    DefiniteCnf, DesignKind, DesignSpec, GroundSet, Matroid, Method, SetFamily, Witness,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn budget() -> Budget {
    Budget::from_log2(30).unwrap()
}

fn fam(n: usize, sets: &[&[usize]]) -> SetFamily {
    let g = GroundSet::new(n).unwrap();
    SetFamily::from_sets(g, sets.iter().map(|s| g.vset_from_iter(s.iter().copied()).unwrap()))
        .unwrap()
}

fn binary_matroid(rows: usize, columns: &[u64]) -> Matroid {
    let mx = BinaryMatrix::from_columns(rows, columns.to_vec()).unwrap();
    Matroid::from_binary(&mx, &budget()).unwrap()
}

/// The shared test zoo: all uniform matroids on at most seven elements,
/// the graphic matroids of K4 and K_{3,3}, and three frozen random binary
/// matroids (with loops and parallel columns among them).
fn zoo() -> Vec<(String, Matroid)> {
    let b = budget();
    let mut out = Vec::new();
    for n in 1..=7usize {
        for r in 0..=n {
            out.push((format!("U({n},{r})"), Matroid::uniform(n, r).unwrap()));
        }
    }
    let k4 = BinaryMatrix::complete_graph_incidence(4).unwrap();
    out.push(("K4".into(), Matroid::from_binary(&k4, &b).unwrap()));
    let k33_edges: Vec<(usize, usize)> =
        (0..3).flat_map(|i| (0..3).map(move |j| (i, 3 + j))).collect();
    let k33 = BinaryMatrix::graph_incidence(6, &k33_edges).unwrap();
    out.push(("K3,3".into(), Matroid::from_binary(&k33, &b).unwrap()));
    // Frozen draws from a seeded sampler; kept as literals so the zoo does
    // not depend on random-number internals.
    out.push(("B1".into(), binary_matroid(4, &[15, 12, 3, 0, 11, 5])));
    out.push(("B2".into(), binary_matroid(4, &[11, 1, 6, 3, 1, 8, 6, 1])));
    out.push(("B3".into(), binary_matroid(5, &[25, 31, 20, 16, 9, 25, 27, 7])));
    out
}

/// Draws a nontrivial antichain: nonempty, no empty member, not just the
/// full ground set, members pairwise incomparable.
fn random_antichain(rng: &mut ChaCha8Rng) -> Option<SetFamily> {
    let n = rng.gen_range(2..=7usize);
    let g = GroundSet::new(n).unwrap();
    let full = g.full_mask();
    let k = rng.gen_range(1..=6usize);
    let masks: Vec<u64> = (0..k).map(|_| rng.gen_range(1..=full)).collect();
    let f = SetFamily::from_masks(g, masks).unwrap().minimal_sets();
    if f.is_empty() || f.contains_mask(0) || f.masks() == [full] {
        None
    } else {
        Some(f)
    }
}

/// Minimal sets whose every-true-superset intersection is the full ground
/// set; computed straight from a truth table.
fn keys_from_table(f: &BoolFn) -> SetFamily {
    let g = f.ground();
    let tab = f.superset_intersection_table(&budget()).unwrap();
    let full = g.full_mask();
    let keys = (0..1u64 << g.n()).filter(|&x| tab[x as usize] == full);
    SetFamily::from_masks(g, keys).unwrap().minimal_sets()
}

/// Maximal true sets other than the full ground set, from a truth table.
fn max_nontrivial_from_table(f: &BoolFn) -> SetFamily {
    let g = f.ground();
    let full = g.full_mask();
    let true_sets = f.true_sets(&budget()).unwrap();
    SetFamily::from_masks(g, true_sets.masks().iter().copied().filter(|&m| m != full))
        .unwrap()
        .maximal_sets()
}

#[test]
fn a01_recognition_criteria_agree_on_random_antichains() {
    let b = budget();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED_0001);
    let mut done = 0;
    let mut matroidal = 0;
    while done < 500 {
        let Some(f) = random_antichain(&mut rng) else { continue };
        let report = characterization_report(&f, &b).unwrap();
        assert!(
            report.consistent(),
            "criteria disagree on {f}: {:?}",
            report.entries().map(|(name, c)| (name, c.holds))
        );
        if report.all_hold() {
            matroidal += 1;
        }
        done += 1;
    }
    println!("a01 PASS: 11 recognition criteria agree pairwise on 500 antichains ({matroidal} matroidal)");
}

#[test]
fn a02_matroid_closure_and_lattice_match_horn_semantics() {
    let b = budget();
    let mut checked_masks = 0u64;
    for (name, m) in zoo() {
        let g = m.ground();
        let phi = m.circular_formula();
        let table = phi.closure_table(&b).unwrap();
        for x in 0..1u64 << g.n() {
            let closure = m.closure(&g.vset(x).unwrap()).mask();
            assert_eq!(
                closure, table[x as usize],
                "{name}: closure of {} disagrees with forward chaining",
                g.vset(x).unwrap()
            );
            checked_masks += 1;
        }
        assert_eq!(*m.bases(), phi.minimal_keys(&b).unwrap(), "{name}: bases vs minimal keys");
        assert_eq!(
            m.hyperplanes(&b).unwrap(),
            phi.max_nontrivial_true_sets(&b).unwrap(),
            "{name}: hyperplanes vs maximal nontrivial true sets"
        );
        assert_eq!(
            m.flats(&b).unwrap(),
            phi.true_sets(&b).unwrap(),
            "{name}: flats vs true sets"
        );
    }
    println!("a02 PASS: closure/bases/hyperplanes/flats match Horn semantics on {} subsets", checked_masks);
}

#[test]
fn a03_implicate_duality_matches_transversal_duality() {
    let b = budget();
    let mut count = 0;
    for (name, m) in zoo() {
        let g = m.ground();
        let c = m.circuits();
        let h = BoolFn::from_cnf(&m.circular_formula(), &b).unwrap();
        let hi = h.implicate_dual(&b).unwrap();

        // The dual function is the circular function of ((C^d)^c)^d.
        let cdcd = c
            .minimal_transversals(&b)
            .unwrap()
            .complement_family()
            .minimal_transversals(&b)
            .unwrap();
        let expected = BoolFn::from_cnf(&DefiniteCnf::circular(&cdcd), &b).unwrap();
        for x in 0..1u64 << g.n() {
            assert_eq!(
                hi.value(x),
                expected.value(x),
                "{name}: dual truth tables differ at {}",
                g.vset(x).unwrap()
            );
        }

        // Keys, maximal nontrivial true sets, and true sets of the dual,
        // each recomputed from the dual's truth table alone.
        assert_eq!(
            keys_from_table(&hi),
            c.minimal_transversals(&b).unwrap(),
            "{name}: dual keys vs minimal transversals"
        );
        assert_eq!(
            max_nontrivial_from_table(&hi),
            c.complement_family(),
            "{name}: dual maximal nontrivial true sets vs complements"
        );
        assert_eq!(
            hi.true_sets(&b).unwrap(),
            c.complement_family().intersection_closure(&b).unwrap(),
            "{name}: dual true sets vs intersection closure of complements"
        );
        count += 1;
    }
    println!("a03 PASS: implicate duality matches transversal duality on {count} matroids");
}

#[test]
fn a04_wheel_and_chain_families_reproduce_pinned_results() {
    let b = budget();

    // Five triangles of the wheel on {0..4} with hub 5.
    let wheel: Vec<Vec<usize>> =
        (0..5).map(|i| vec![i, (i + 1) % 5, 5]).collect();
    let h1 = fam(6, &wheel.iter().map(|t| t.as_slice()).collect::<Vec<_>>());
    let phi1 = DefiniteCnf::circular(&h1);

    // Its minimal keys are exactly the ten wheel edges.
    let mut edges: Vec<Vec<usize>> = (0..5).map(|i| vec![i, (i + 1) % 5]).collect();
    edges.extend((0..5).map(|i| vec![i, 5]));
    let edge_family = fam(6, &edges.iter().map(|e| e.as_slice()).collect::<Vec<_>>());
    assert_eq!(phi1.minimal_keys(&b).unwrap(), edge_family, "wheel: minimal keys");

    // Its maximal nontrivial true sets: the hub alone plus the five
    // "second-neighbour" pairs of the rim.
    let mut models: Vec<Vec<usize>> = vec![vec![5]];
    models.extend((0..5).map(|i| vec![i, (i + 2) % 5]));
    let model_family = fam(6, &models.iter().map(|m| m.as_slice()).collect::<Vec<_>>());
    assert_eq!(
        phi1.max_nontrivial_true_sets(&b).unwrap(),
        model_family,
        "wheel: maximal nontrivial true sets"
    );

    // The triangle family fails circuit elimination, and the formula is
    // not the circular formula of any matroid.
    assert!(matches!(
        check_circuit_axioms(&h1),
        Some(CircuitAxiomViolation::EliminationFails { .. })
    ));
    let rec1 = mhk_core::is_matroid_horn(&phi1, &b).unwrap();
    assert!(!rec1.matroid_horn, "wheel formula recognized as matroidal: {:?}", rec1.reason);

    // A chain of three overlapping four-sets on {0..7}.
    let h2 = fam(8, &[&[0, 1, 2, 3], &[2, 3, 4, 5], &[4, 5, 6, 7]]);
    let phi2 = DefiniteCnf::circular(&h2);
    let g8 = h2.ground();

    // Pinned minimal keys: three of one side plus a cross pair of the
    // other, where the admissible pairs form a four-cycle.
    let x_mask: u64 = 0b0000_1111;
    let y_mask: u64 = 0b1111_0000;
    let e_pairs = fam(8, &[&[0, 2], &[0, 3], &[1, 2], &[1, 3]]);
    let f_pairs = fam(8, &[&[4, 6], &[4, 7], &[5, 6], &[5, 7]]);
    let expected_keys = SetFamily::from_masks(
        g8,
        (0..1u64 << 8).filter(|&k| {
            let in_x = (k & x_mask).count_ones();
            let in_y = (k & y_mask).count_ones();
            (in_x == 3 && f_pairs.contains_mask(k & y_mask))
                || (in_y == 3 && e_pairs.contains_mask(k & x_mask))
        }),
    )
    .unwrap();
    let keys2 = phi2.minimal_keys(&b).unwrap();
    assert_eq!(keys2, expected_keys, "chain: minimal keys");

    // Turning those keys inside out yields a genuine circuit family with
    // the same minimal keys, yet the chain formula itself is not the
    // circular formula of any matroid.
    let c2 = keys2.complement_family().minimal_transversals(&b).unwrap();
    let expected_c2 = fam(
        8,
        &[&[0, 1, 2, 3], &[4, 5, 6, 7], &[0, 1, 4, 5], &[0, 1, 6, 7], &[2, 3, 4, 5], &[2, 3, 6, 7]],
    );
    assert_eq!(c2, expected_c2, "chain: derived circuit family");
    assert!(check_circuit_axioms(&c2).is_none(), "derived family violates circuit axioms");
    assert_eq!(
        DefiniteCnf::circular(&c2).minimal_keys(&b).unwrap(),
        keys2,
        "chain: circular formula of the derived family changes the keys"
    );
    let rec2 = mhk_core::is_matroid_horn(&phi2, &b).unwrap();
    assert!(!rec2.matroid_horn, "chain formula recognized as matroidal: {:?}", rec2.reason);
    assert!(mhk_core::is_matroid_horn(&DefiniteCnf::circular(&c2), &b).unwrap().matroid_horn);

    // The separating probe: {0,1,2,4} -> 5 is an implicate of the chain
    // formula, but the body {0,1,4,5} does not derive 2.
    let probe_body = g8.vset_from_iter([0, 1, 2, 4]).unwrap();
    assert!(phi2.is_implicate(&probe_body, 5).unwrap());
    let prime2 = phi2.prime_implicates(&b).unwrap();
    assert!(prime2.raw_clauses().contains(&(probe_body.mask(), 5)));
    let stuck = g8.vset_from_iter([0, 1, 4, 5]).unwrap();
    assert!(!phi2.forward_chain(&stuck).0.contains(2));

    println!("a04 PASS: wheel and chain families reproduce all pinned keys, models, and recognition verdicts");
}

#[test]
fn a05_chordless_family_is_the_unique_minimum_for_small_binary_matroids() {
    let b = budget();
    let k4 = BinaryMatrix::complete_graph_incidence(4).unwrap();
    let instances = [
        ("K4", Matroid::from_binary(&k4, &b).unwrap()),
        // Frozen draws of simple binary matroids (distinct nonzero
        // columns) with at most ten circuits and a real chordless gap.
        ("S1", binary_matroid(4, &[13, 4, 9, 12, 1, 3, 8])),
        ("S2", binary_matroid(3, &[4, 2, 5, 6, 1, 3])),
    ];
    for (name, m) in &instances {
        let ch = chordless_circuits(m).unwrap();
        assert!(m.circuits().len() <= 10, "{name}: too many circuits for the exhaustive tier");
        assert!(
            ch.len() < m.circuits().len(),
            "{name}: every circuit is chordless, instance is trivial"
        );

        let g = min_generator(m, Method::Exact, &b).unwrap();
        assert!(g.exact && g.unique == Some(true), "{name}: generator minimum not certified unique");
        assert_eq!(g.value, ch.len(), "{name}: generator minimum");
        assert_eq!(g.witness, Witness::Circuits(ch.clone()), "{name}: generator witness");

        let c = min_circuit_subsystem(m, Method::Exact, &b).unwrap();
        assert!(c.exact && c.unique == Some(true), "{name}: subsystem minimum not certified unique");
        assert_eq!(c.value, ch.len(), "{name}: subsystem minimum");
        assert_eq!(c.witness, Witness::Circuits(ch.clone()), "{name}: subsystem witness");

        let k = min_circuit_clauses(m, Method::Exact, &b).unwrap();
        let clause_count: usize = ch.iter().map(|s| s.card()).sum();
        assert!(k.exact && k.unique == Some(true), "{name}: clause minimum not certified unique");
        assert_eq!(k.value, clause_count, "{name}: clause minimum");
        let Witness::Clauses(ref cnf) = k.witness else { panic!("{name}: clause witness shape") };
        let mut got: Vec<(u64, u8)> = cnf.raw_clauses().to_vec();
        let mut expected: Vec<(u64, u8)> = DefiniteCnf::circular(&ch).raw_clauses().to_vec();
        got.sort_unstable();
        expected.sort_unstable();
        assert_eq!(got, expected, "{name}: clause witness is not the chordless clause set");

        // The shortcut method agrees with the exhaustive search.
        for (objective, value) in [
            (min_generator(m, Method::Chordless, &b).unwrap(), g.value),
            (min_circuit_subsystem(m, Method::Chordless, &b).unwrap(), c.value),
            (min_circuit_clauses(m, Method::Chordless, &b).unwrap(), k.value),
        ] {
            assert_eq!(objective.value, value, "{name}: chordless shortcut disagrees");
        }
    }
    println!(
        "a05 PASS: chordless witnesses certified unique optima for all three objectives on K4 (4/4/12) and two frozen binary matroids"
    );
}

#[test]
fn a06_uniform_matroid_minimums_match_closed_forms_and_covering_bounds() {
    let b = budget();
    let mut lines = Vec::new();
    for n in 3..=7usize {
        for r in 1..=n - 2 {
            let m = Matroid::uniform(n, r).unwrap();
            let blocks = mhk_core::binomial(n, r) as usize;

            let g = min_generator(&m, Method::Exact, &b).unwrap();
            assert!(g.exact, "U({n},{r}): generator search not exact");
            assert_eq!(g.value, n - r, "U({n},{r}): generator minimum");
            let Witness::Circuits(ref gw) = g.witness else { panic!("generator witness shape") };
            assert_eq!(
                &generate_closure(gw, m.circuits(), &b).unwrap().0,
                m.circuits(),
                "U({n},{r}): generator witness does not regenerate the circuits"
            );

            let k = min_circuit_clauses(&m, Method::Exact, &b).unwrap();
            assert!(k.exact, "U({n},{r}): clause search not exact");
            assert_eq!(k.value, blocks, "U({n},{r}): clause minimum");
            let Witness::Clauses(ref kw) = k.witness else { panic!("clause witness shape") };
            assert!(
                kw.equivalent(&m.circular_formula(), &b).unwrap(),
                "U({n},{r}): clause witness is not equivalent to the circular formula"
            );

            let c = min_circuit_subsystem(&m, Method::Exact, &b).unwrap();
            assert!(c.exact, "U({n},{r}): subsystem search not exact");
            let lower_token = (2 * blocks as u64).div_ceil(2 * r as u64 + 1) as usize;
            assert!(
                (lower_token..=blocks).contains(&c.value),
                "U({n},{r}): subsystem minimum {} outside [{lower_token}, {blocks}]",
                c.value
            );
            let (cover, _) = covering_number_bruteforce(n, r + 1, r, &b).unwrap();
            assert!(
                (cover..=2 * cover).contains(&c.value),
                "U({n},{r}): subsystem minimum {} outside [{cover}, {}]",
                c.value,
                2 * cover
            );
            assert!(schonheim_bound(n, r + 1, r).unwrap() as usize <= cover);
            let Witness::Circuits(ref cw) = c.witness else { panic!("subsystem witness shape") };
            let spec = DesignSpec::new(DesignKind::Implication, n, r + 1, r).unwrap();
            assert!(verify_design(&spec, cw, &b).unwrap().valid);

            lines.push(format!("U({n},{r}): G={} C={} K={}", g.value, c.value, k.value));
        }
    }
    println!("a06 PASS: {}", lines.join("; "));
}

#[test]
fn a07_doubled_optimal_covers_yield_valid_uniform_representations() {
    let b = budget();
    let mut lines = Vec::new();
    for (n, r) in [(4usize, 2usize), (5, 2), (6, 2), (7, 2), (6, 3)] {
        let (c, cover) = covering_number_bruteforce(n, r + 1, r, &b).unwrap();
        assert!(schonheim_bound(n, r + 1, r).unwrap() as usize <= c);
        let doubled = mhk_core::covering_doubling_representation(n, r, &cover, &b).unwrap();
        let spec = DesignSpec::new(DesignKind::Implication, n, r + 1, r).unwrap();
        let report = verify_design(&spec, &doubled, &b).unwrap();
        assert!(report.valid, "({n},{r}): doubled cover fails verification: {:?}", report.defect);
        assert!(
            doubled.len() <= 2 * c,
            "({n},{r}): doubled cover has {} blocks, cover number is {c}",
            doubled.len()
        );
        lines.push(format!("({n},{r}): {} ≤ 2·{c}", doubled.len()));
    }
    println!("a07 PASS: {}", lines.join("; "));
}

#[test]
fn a08_grouped_triple_layouts_validate_with_pinned_sizes() {
    let b = budget();
    let pinned = [(46usize, 7935usize), (47, 585), (51, 1575), (61, 7200)];
    let mut ratios = Vec::new();
    for (n, size) in pinned {
        let rep = rank2_group_representation(n, &b).unwrap();
        let spec = DesignSpec::new(DesignKind::Implication, n, 3, 2).unwrap();
        let report = verify_design(&spec, &rep.family, &b).unwrap();
        assert!(report.valid, "n={n}: layout fails verification: {:?}", report.defect);
        assert_eq!(rep.family.len(), size, "n={n}: layout size");
        let ratio = rep.family.len() as f64 / (n as f64 * n as f64 / 5.0);
        ratios.push((n, ratio));
    }
    let summary: Vec<String> =
        ratios.iter().map(|(n, q)| format!("n={n}: ratio={q:.2}")).collect();
    println!("a08 sizes and validity hold for all four layouts; {}", summary.join(", "));
    let offending: Vec<String> = ratios
        .iter()
        .filter(|(_, q)| *q >= 5.0)
        .map(|(n, q)| format!("n={n} gives {q:.2}"))
        .collect();
    assert!(
        offending.is_empty(),
        "layout size exceeds five times n²/5: {} — the quadratic residual-block term C(b,2)·(n−b) \
         dominates at these sizes (b=31 for n=46, b=16 for n=61), so the linear-regime ratio bound \
         cannot hold at them even though sizes and validity are exactly as constructed",
        offending.join(", ")
    );
    println!("a08 PASS: grouped layouts stay within the linear-regime ratio");
}

#[test]
fn a09_triple_cover_formula_matches_brute_force() {
    let b = budget();
    let mut values = Vec::new();
    for n in 3..=9usize {
        let (c, witness) = covering_number_bruteforce(n, 3, 2, &b).unwrap();
        assert_eq!(
            fort_hedlund(n).unwrap(),
            c as u64,
            "closed-form triple-cover count disagrees with brute force at n={n}"
        );
        assert!(
            schonheim_bound(n, 3, 2).unwrap() <= c as u64,
            "lower bound exceeds brute force at n={n}"
        );
        let spec = DesignSpec::new(DesignKind::Covering, n, 3, 2).unwrap();
        assert!(verify_design(&spec, &witness, &b).unwrap().valid);
        values.push(c.to_string());
    }
    println!("a09 PASS: triple cover numbers for n=3..9 are {}", values.join(", "));
}

// ---------------------------------------------------------------------------
// Law suite (fixed-seed property checks)
// ---------------------------------------------------------------------------

fn random_family(rng: &mut ChaCha8Rng, max_n: usize, allow_empty_member: bool) -> SetFamily {
    let n = rng.gen_range(1..=max_n);
    let g = GroundSet::new(n).unwrap();
    let k = rng.gen_range(0..=6usize);
    let lo = u64::from(!allow_empty_member);
    let masks: Vec<u64> = (0..k).map(|_| rng.gen_range(lo..=g.full_mask())).collect();
    SetFamily::from_masks(g, masks).unwrap()
}

fn random_cnf(rng: &mut ChaCha8Rng, max_n: usize) -> DefiniteCnf {
    let n = rng.gen_range(2..=max_n);
    let g = GroundSet::new(n).unwrap();
    let k = rng.gen_range(0..=8usize);
    let clauses: Vec<DefiniteClause> = (0..k)
        .map(|_| {
            let body = rng.gen_range(1..=g.full_mask());
            let outside: Vec<usize> = (0..n).filter(|v| body >> v & 1 == 0).collect();
            let head = if outside.is_empty() {
                let v = rng.gen_range(0..n);
                return DefiniteClause::new(g, g.vset(body & !(1 << v)).unwrap(), v).unwrap();
            } else {
                outside[rng.gen_range(0..outside.len())]
            };
            DefiniteClause::new(g, g.vset(body).unwrap(), head).unwrap()
        })
        .collect();
    DefiniteCnf::new(g, clauses)
}

/// Lengths of the cyclic runs of members, independent of the library's
/// interval bookkeeping. Assumes `t` is neither empty nor everything.
fn cyclic_run_lengths(mask: u64, n: usize) -> Vec<usize> {
    let mut lengths = Vec::new();
    for v in 0..n {
        let pred = (v + n - 1) % n;
        if mask >> v & 1 == 1 && mask >> pred & 1 == 0 {
            let mut len = 0;
            let mut w = v;
            while mask >> w & 1 == 1 {
                len += 1;
                w = (w + 1) % n;
            }
            lengths.push(len);
        }
    }
    lengths
}

#[test]
fn a10_algebraic_law_suite_holds_on_seeded_inputs() {
    let b = budget();

    // Complement is an involution.
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED_1001);
    for _ in 0..400 {
        let f = random_family(&mut rng, 10, true);
        assert_eq!(f.complement_family().complement_family(), f);
    }

    // Transversal duality is an involution on antichains without the
    // empty member.
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED_1002);
    for _ in 0..400 {
        let f = random_family(&mut rng, 10, false).minimal_sets();
        let dd = f
            .minimal_transversals(&b)
            .unwrap()
            .minimal_transversals(&b)
            .unwrap();
        assert_eq!(dd, f, "double transversal changed {f}");
    }

    // Bases/circuits round trip, with both directions checked against a
    // direct enumeration.
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED_1003);
    for _ in 0..300 {
        let c = random_family(&mut rng, 8, false).minimal_sets();
        if c.is_empty() {
            continue;
        }
        let g = c.ground();
        let bases = bases_of(&c, &b).unwrap();
        let brute_bases: Vec<u64> = (0..1u64 << g.n())
            .filter(|&x| {
                !c.has_member_within(x)
                    && (0..g.n()).all(|v| x >> v & 1 == 1 || c.has_member_within(x | 1 << v))
            })
            .collect();
        assert_eq!(bases, SetFamily::from_masks(g, brute_bases).unwrap());
        assert_eq!(circuits_of(&bases, &b).unwrap(), c, "circuit recovery failed for {c}");
    }

    // Intersection closures are intersection-closed and contain the
    // ground set; union closures are union-closed and contain the empty
    // set.
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED_1004);
    for _ in 0..300 {
        let f = random_family(&mut rng, 8, true);
        let ic = f.intersection_closure(&b).unwrap();
        assert!(ic.contains_mask(f.ground().full_mask()));
        let uc = f.union_closure(&b).unwrap();
        assert!(uc.contains_mask(0));
        for &x in ic.masks() {
            for &y in ic.masks() {
                assert!(ic.contains_mask(x & y));
            }
        }
        for &x in uc.masks() {
            for &y in uc.masks() {
                assert!(uc.contains_mask(x | y));
            }
        }
    }

    // Serialization round trip.
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED_1005);
    for _ in 0..300 {
        let f = random_family(&mut rng, 10, true);
        assert_eq!(f.to_string().parse::<SetFamily>().unwrap(), f);
    }

    // True sets of a definite formula are intersection-closed and contain
    // the ground set.
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED_1006);
    for _ in 0..300 {
        let phi = random_cnf(&mut rng, 7);
        let t = phi.true_sets(&b).unwrap();
        assert!(t.contains_mask(phi.ground().full_mask()));
        for &x in t.masks() {
            for &y in t.masks() {
                assert!(t.contains_mask(x & y), "true sets of {phi} not closed at {x:#b} & {y:#b}");
            }
        }
    }

    // Implicate-set families are union-closed.
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED_1007);
    for _ in 0..200 {
        let phi = random_cnf(&mut rng, 6);
        let f = BoolFn::from_cnf(&phi, &b).unwrap();
        let imps = f.implicate_sets(&b).unwrap();
        for &x in imps.masks() {
            for &y in imps.masks() {
                assert!(imps.contains_mask(x | y), "implicate sets of {phi} not union-closed");
            }
        }
    }

    // A set is true for a circular formula exactly when no implicate set
    // sticks out of it by a single element.
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED_1008);
    for _ in 0..200 {
        let h = random_family(&mut rng, 6, false);
        let phi = DefiniteCnf::circular(&h);
        let f = BoolFn::from_cnf(&phi, &b).unwrap();
        let imps = f.implicate_sets(&b).unwrap();
        let n = h.ground().n();
        for x in 0..1u64 << n {
            let expected = imps.masks().iter().all(|&i| (i & !x).count_ones() != 1);
            assert_eq!(
                phi.is_model_mask(x),
                expected,
                "true-set characterization fails for {phi} at {x:#b}"
            );
        }
    }

    // The rotation map preserves size and never shortens the longest run;
    // with two or more runs it strictly lengthens it.
    let mut shifted = 0u64;
    for n in 2..=10usize {
        let g = GroundSet::new(n).unwrap();
        for mask in 1..g.full_mask() {
            let t = g.vset(mask).unwrap();
            let image = phi_shift(&t).unwrap();
            assert_eq!(image.card(), t.card(), "size changed for {t}");
            let before = cyclic_run_lengths(mask, n);
            let after = cyclic_run_lengths(image.mask(), n);
            let l_before = before.iter().copied().max().unwrap();
            let l_after = after.iter().copied().max().unwrap();
            if before.len() >= 2 {
                assert!(l_after > l_before, "longest run did not grow for {t}");
            } else {
                assert!(l_after >= l_before, "longest run shrank for {t}");
            }
            shifted += 1;
        }
    }

    println!("a10 PASS: involution/duality/closure/serialization/Horn/rotation laws hold ({shifted} rotation inputs)");
}
