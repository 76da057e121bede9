//! Acceptance suite: one test per criterion, each printing a single
//! PASS line (run with `--nocapture` to see them).

mod common;

use std::time::Instant;

use foamlab::error::Error;
use foamlab::famforge::{
    build_family, families_equivalent, family_invariants, quotient_checks, verify_axioms,
    LiftPolicy,
};
use foamlab::foamkit::{assemble_compressed, compress, weak_iso, Foam, FoamClass};
use foamlab::io::InputDocument;
use foamlab::permcore::{group_closure, ElementTuple, Permutation, DEFAULT_ELEMENT_CAP};
use foamlab::realcover::{
    admissible_component, count_ovals, genus_rh, involution_lifts, realize_cw_bare,
    validate_monodromy, ComponentCover, RealBase,
};
use foamlab::survey::{
    check_corollaries, component_pool, enumerate_families, oval_sum_ceiling,
    real_form_count_bound_holds, real_form_count_rhs_exact, sharp_oval_rhs_eighths,
    transitive_tuples, weak_oval_cap, EnumLimits, EVEN_GENUS_FORM_CAP,
};

fn data(file: &str) -> String {
    std::fs::read_to_string(format!("{}/data/{file}", env!("CARGO_MANIFEST_DIR")))
        .expect("shipped data file")
}

fn e9_family() -> foamlab::famforge::EquippedFamily {
    let doc = InputDocument::parse(&data("e9.json")).unwrap();
    build_family(doc.base(), &doc.to_components().unwrap(), LiftPolicy::FirstValid).unwrap()
}

/// Criterion 1: the flagship pipeline reports the exact invariants.
#[test]
fn acceptance_1_flagship_pipeline() {
    let start = Instant::now();
    let f = e9_family();
    let inv = family_invariants(&f);
    assert_eq!(inv.group_order, 9);
    assert_eq!(inv.subgroup_orders, vec![3, 3]);
    assert_eq!(inv.hat_genus, 4);
    assert_eq!(inv.component_genus, vec![2, 2]);
    assert_eq!(inv.component_ovals, vec![1, 1]);
    assert!(verify_axioms(&f).all_pass(), "generation and axioms pass");
    let q = quotient_checks(&f).unwrap();
    assert!(q.all_hold());
    assert_eq!(q.genus_equality, vec![true, true], "2 = (4-1)/3 + 1 exactly");
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "pipeline took {elapsed:?}");
    println!("ACCEPTANCE 1 (flagship pipeline): PASS");
}

/// Criterion 2: Riemann-Hurwitz genus equals cellular genus on every
/// transitive tuple with d <= 3, n <= 4.
#[test]
fn acceptance_2_genus_oracle() {
    let mut checked = 0usize;
    for d in 1..=3usize {
        for n in 0..=4usize {
            for tuple in transitive_tuples(d, n) {
                let c = ComponentCover::new("sweep", d, tuple);
                let g = genus_rh(&c).unwrap();
                let cw = realize_cw_bare(&c).unwrap();
                assert_eq!(cw.genus().unwrap(), g, "degree {d}, {n} points");
                checked += 1;
            }
        }
    }
    assert!(checked > 200, "swept {checked} tuples");
    println!("ACCEPTANCE 2 (genus oracle, {checked} tuples): PASS");
}

/// Criterion 3: cellular oval counts equal the flood-fill oracle, and
/// under admissibility equal |Fix(t)|.
#[test]
fn acceptance_3_oval_oracle() {
    let mut checked = 0usize;
    for d in 1..=3usize {
        for n in 0..=4usize {
            for tuple in transitive_tuples(d, n) {
                let c = ComponentCover::new("sweep", d, tuple.clone());
                for t in involution_lifts(&c).unwrap() {
                    let (k, _) = count_ovals(&c, &t).unwrap();
                    let oracle = common::oval_count_oracle(d, &tuple, &t);
                    assert_eq!(k, oracle, "d={d}, n={n}, t={t}");
                    if admissible_component(&c, &t).unwrap() {
                        assert_eq!(k, t.fixed_points().max(if n == 0 { 1 } else { 0 }));
                    }
                    checked += 1;
                }
            }
        }
    }
    assert!(checked > 100, "checked {checked} lifted covers");
    println!("ACCEPTANCE 3 (oval oracle, {checked} lifted covers): PASS");
}

/// Criterion 4: closure order equals the truncated coset-table oracle on
/// 20 pseudo-random cases with d <= 4, n <= 3.
#[test]
fn acceptance_4_group_order_oracle() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0xf0a_u64);
    let mut cases = 0usize;
    while cases < 20 {
        let d = rng.gen_range(1..=4usize);
        let n = rng.gen_range(1..=3usize);
        let mut tuple: Vec<Permutation> = Vec::new();
        let mut acc = Permutation::identity(d);
        for _ in 0..n - 1 {
            let mut images: Vec<usize> = (1..=d).collect();
            for i in (1..d).rev() {
                images.swap(i, rng.gen_range(0..=i));
            }
            let p = Permutation::from_images(images).unwrap();
            acc = acc.compose(&p).unwrap();
            tuple.push(p);
        }
        tuple.push(acc.inverse());
        let c = ComponentCover::new("case", d, tuple.clone());
        if !validate_monodromy(&c).monodromy_valid() {
            continue;
        }
        let gens: Vec<ElementTuple> = tuple.iter().map(|p| vec![p.clone()]).collect();
        let group = group_closure(&gens, DEFAULT_ELEMENT_CAP).unwrap();
        let oracle = common::group_order_oracle(&gens, 12)
            .expect("coset table closes within length 12");
        assert_eq!(group.order(), oracle, "d={d}, n={n}");
        cases += 1;
    }
    println!("ACCEPTANCE 4 (group order oracle, 20 seeded cases): PASS");
}

/// Criterion 5: zero violations of the quotient, Harnack, and corollary
/// bounds over the full default enumeration.
#[test]
fn acceptance_5_inequality_sweep() {
    // Harnack per connected cover.
    for d in 1..=3usize {
        for n in 0..=4usize {
            for tuple in transitive_tuples(d, n) {
                let c = ComponentCover::new("sweep", d, tuple);
                let g = genus_rh(&c).unwrap();
                for t in involution_lifts(&c).unwrap() {
                    let (k, _) = count_ovals(&c, &t).unwrap();
                    assert!(k <= g + 1, "Harnack violated: k={k}, g={g}");
                }
            }
        }
    }
    // Family-level bounds over the enumeration.
    let families = enumerate_families(&EnumLimits::default()).unwrap();
    assert!(!families.is_empty());
    for f in &families {
        let q = quotient_checks(f).unwrap();
        assert!(q.all_hold());
        let bounds = check_corollaries(f).unwrap();
        assert!(bounds.all_hold());
    }
    println!(
        "ACCEPTANCE 5 (inequality sweep, {} families): PASS",
        families.len()
    );
}

/// Criterion 6: corollary right-hand sides are the exact displayed
/// integers for hat_g = 4 (and r = 3 for the sharp bound).
#[test]
fn acceptance_6_corollary_arithmetic() {
    assert_eq!(oval_sum_ceiling(4), 126);
    assert_eq!(real_form_count_rhs_exact(4), Some(6));
    assert!(real_form_count_bound_holds(6, 4) && !real_form_count_bound_holds(7, 4));
    assert_eq!(EVEN_GENUS_FORM_CAP, 4);
    assert_eq!(sharp_oval_rhs_eighths(4, 3), 12 * 8);
    assert_eq!(weak_oval_cap(4), 38);
    // The same numbers appear in the rendered report of a hat_g = 4 family.
    let f = e9_family();
    assert_eq!(f.hat_genus, 4);
    let bounds = check_corollaries(&f).unwrap();
    assert!(bounds.records[0].rhs_display.contains("126"));
    assert!(bounds.records[2].rhs_display.contains('6'));
    assert_eq!(bounds.records[3].rhs_display, "4");
    println!("ACCEPTANCE 6 (corollary arithmetic): PASS");
}

/// Criterion 7: foam axioms on the flagship, rejection of the
/// inadmissible component with an admissibility diagnosis, idempotent
/// compression, and weak-isomorphism sanity over 100 generated foams.
#[test]
fn acceptance_7_foam_axioms() {
    let doc = InputDocument::parse(&data("e9.json")).unwrap();
    let comps: Vec<ComponentCover> = doc
        .to_components()
        .unwrap()
        .into_iter()
        .map(|c| {
            let t = involution_lifts(&c).unwrap().into_iter().next().unwrap();
            c.with_lift(t)
        })
        .collect();
    let e9 = assemble_compressed(doc.base(), &comps).unwrap();
    assert_eq!(e9.classification(), FoamClass::Foam);
    assert!(e9.report.cond_a && e9.report.cond_b && e9.report.cond_c && e9.report.cond_d);

    // The hyperelliptic component is rejected with the admissibility
    // diagnosis (each oval must map homeomorphically onto the base).
    let hdoc = InputDocument::parse(&data("hyperelliptic6.json")).unwrap();
    let hcomps = hdoc.to_components().unwrap();
    let err = assemble_compressed(hdoc.base(), &hcomps).unwrap_err();
    match &err {
        Error::Inadmissible { name, .. } => assert_eq!(name, "hyper6"),
        other => panic!("expected an admissibility rejection, got {other}"),
    }
    assert!(err.to_string().contains("homeomorphically"));

    // 100 generated foams: compress idempotent, weak_iso reflexive and
    // symmetric.
    let mut foams: Vec<Foam> = Vec::new();
    'outer: for n in [0usize, 2, 3, 4] {
        let pool = component_pool(&EnumLimits {
            points: n,
            ..EnumLimits::default()
        })
        .unwrap();
        let base = RealBase::new(n);
        for i in 0..pool.len() {
            for j in i..pool.len() {
                let comps = if i == j {
                    vec![pool[i].clone()]
                } else {
                    vec![pool[i].clone(), pool[j].clone()]
                };
                if let Ok(f) = assemble_compressed(base, &comps) {
                    foams.push(f);
                    if foams.len() >= 100 {
                        break 'outer;
                    }
                }
            }
        }
    }
    assert!(foams.len() >= 100, "generated only {} foams", foams.len());
    for f in &foams {
        let c1 = compress(f).unwrap();
        let c2 = compress(&c1).unwrap();
        assert_eq!(c1.graph, c2.graph);
        assert_eq!(c1.gluing, c2.gluing);
        assert!(weak_iso(f, f, false).unwrap(), "weak_iso must be reflexive");
    }
    for pair in foams.chunks(2) {
        if let [a, b] = pair {
            assert_eq!(
                weak_iso(a, b, false).unwrap(),
                weak_iso(b, a, false).unwrap(),
                "weak_iso must be symmetric"
            );
        }
    }
    println!(
        "ACCEPTANCE 7 (foam axioms, {} generated foams): PASS",
        foams.len()
    );
}

/// Criterion 8: machine-readable output is byte-identical across runs
/// (library-level; the CLI suite repeats this through the binary).
#[test]
fn acceptance_8_determinism() {
    let doc = InputDocument::parse(&data("e9.json")).unwrap();
    let render = || {
        let f = build_family(
            doc.base(),
            &doc.to_components().unwrap(),
            LiftPolicy::FirstValid,
        )
        .unwrap();
        serde_json::to_string(&foamlab::io::family_report(&f).unwrap()).unwrap()
    };
    assert_eq!(render(), render());

    let run = || {
        let families = enumerate_families(&EnumLimits::default()).unwrap();
        families
            .iter()
            .map(|f| serde_json::to_string(&foamlab::io::family_report(f).unwrap()).unwrap())
            .collect::<Vec<_>>()
            .join("\n")
    };
    let a = run();
    let b = run();
    assert_eq!(a, b);
    // Enumerated families are pairwise non-equivalent (dedup soundness).
    let families = enumerate_families(&EnumLimits::default()).unwrap();
    for i in 0..families.len() {
        for j in i + 1..families.len() {
            assert!(!families_equivalent(&families[i], &families[j]).unwrap_or(false));
        }
    }
    println!("ACCEPTANCE 8 (determinism): PASS");
}
