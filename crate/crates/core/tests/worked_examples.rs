//! Integration tests for the worked map examples beyond the acceptance
//! criteria: the edge-shift orbit equivalence between E and F, degenerate
//! candidate maps, the single-point positivity rejection, flow certificates,
//! and the pushforward side of the stabilized correspondence.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use shiftlab_core::cohomology::{positivity, CylFunction, Decision};
use shiftlab_core::cover::build_cover;
use shiftlab_core::flow::{
    kappa_susp_stab_eval, psi_f_map, psi_sharp_eval, suspend, verify_flow_certificate, RoofFunction,
};
use shiftlab_core::io;
use shiftlab_core::presentation::{from_matrix, EvPerPoint, MatrixKind, Presentation, SftMatrix};
use shiftlab_core::relations::{
    compile_map, verify_coe, verify_eventual_conjugacy, verify_positive_coe, verify_preservation,
    CocyclePairSpec, CompiledMap, MapSpec, PreservationMode, PreservationScope, Verdict,
};
use shiftlab_core::stab::{by_first_symbol, StabCylFunction, StabElement, StabPoint};

fn fixture_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn load_shift(name: &str) -> Presentation {
    let text = std::fs::read_to_string(fixture_dir().join(format!("{name}.json"))).unwrap();
    let file: io::PresentationFile = serde_json::from_str(&text).unwrap();
    io::presentation_from_file(&file).unwrap()
}

fn load_maps(name: &str, dom: &Presentation, cod: &Presentation) -> (CompiledMap, CompiledMap) {
    let text = std::fs::read_to_string(fixture_dir().join(name)).unwrap();
    let file: io::MapsFile = serde_json::from_str(&text).unwrap();
    (
        compile_map(&io::map_spec_from_file(&file.h), dom, cod).unwrap(),
        compile_map(&io::map_spec_from_file(&file.h_inv), cod, dom).unwrap(),
    )
}

fn load_cocycles(
    name: &str,
    dom: &Presentation,
    cod: &Presentation,
) -> (CocyclePairSpec, CocyclePairSpec) {
    let text = std::fs::read_to_string(fixture_dir().join(name)).unwrap();
    let file: io::CocyclesFile = serde_json::from_str(&text).unwrap();
    io::cocycles_from_file(dom, cod, &file).unwrap()
}

#[test]
fn edge_shift_orbit_equivalence_between_e_and_f() {
    let e = load_shift("E");
    let f = load_shift("F");
    let (h, h_inv) = load_maps("map_E_F.json", &e, &f);
    let (cx, cy) = load_cocycles("cocycles_E_F.json", &e, &f);

    // the exchange of e by e'd' is a genuine homeomorphism here
    let conj = shiftlab_core::relations::verify_conjugacy(&h, &h_inv).unwrap();
    assert_eq!(conj.verdict, Verdict::Fail, "it is not a conjugacy");
    let coe = verify_coe(&h, &h_inv, &cx, &cy).unwrap();
    assert_eq!(coe.verdict, Verdict::Pass, "{:?}", coe.counterexample);

    // least period preserving on periodic orbits
    let pres = verify_preservation(
        &h,
        &h_inv,
        &cx,
        &cy,
        PreservationMode::LeastPeriod,
        PreservationScope::Periodic,
        4,
    )
    .unwrap();
    assert_eq!(pres.verdict, Verdict::Pass, "{:?}", pres.counterexample);

    // but not on eventually periodic points: the entry edge into the loop
    let pres_ev = verify_preservation(
        &h,
        &h_inv,
        &cx,
        &cy,
        PreservationMode::LeastPeriod,
        PreservationScope::EventuallyPeriodic,
        3,
    )
    .unwrap();
    assert_eq!(pres_ev.verdict, Verdict::Fail);
    let x = EvPerPoint::parse(&e.alphabet, "b", "a").unwrap();
    let diff = cx.l.iterated(&x, 1) - cx.k.iterated(&x, 1);
    let image = h.t.apply_to_point(&x).unwrap();
    assert_eq!(diff, 2);
    assert_eq!(image.lp(), 1);
}

#[test]
fn even_odd_lift_identifies_with_the_edge_shifts() {
    let even = load_shift("even");
    let odd = load_shift("odd");
    let (h, h_inv) = load_maps("map_even_odd.json", &even, &odd);
    let (cx, cy) = load_cocycles("cocycles_even_odd.json", &even, &odd);
    let lift = shiftlab_core::relations::lift_to_cover(
        &h,
        &h_inv,
        &shiftlab_core::relations::LiftKind::Coe(cx, cy),
    )
    .unwrap();
    assert_eq!(lift.relation_report.verdict, Verdict::Pass);
    assert_eq!(lift.intertwining_report.verdict, Verdict::Pass);
    // the lifted relation lives on the named edge shifts
    let e = load_shift("E");
    let f = load_shift("F");
    assert!(shiftlab_core::iso::graph_isomorphic(&lift.dom_edges, &e).is_some());
    assert!(shiftlab_core::iso::graph_isomorphic(&lift.cod_edges, &f).is_some());
}

#[test]
fn shifted_identity_as_an_eventual_conjugacy_candidate() {
    // h = the shift itself, presented as a window-2 block code, paired with
    // itself: both lag equations hold at lag 1, the inverse identities fail
    let full2 = load_shift("full2");
    let mut table = BTreeMap::new();
    for w in full2.words_of_length(2) {
        table.insert(
            full2.render_word(&w),
            full2.alphabet.symbol(w[1]).to_string(),
        );
    }
    let h = compile_map(
        &MapSpec::BlockMap {
            window: 2,
            table,
            pad: 0,
        },
        &full2,
        &full2,
    )
    .unwrap();
    let rep = verify_eventual_conjugacy(&h, &h, 1).unwrap();
    assert_eq!(rep.verdict, Verdict::Fail);
    // the two lag equations themselves hold; the failure is the inverse check
    let ce = rep.counterexample.unwrap();
    let equation = match ce {
        shiftlab_core::relations::Counterexample::Word { equation, .. } => equation,
        shiftlab_core::relations::Counterexample::Point { equation, .. } => equation,
    };
    assert!(equation.contains("h_inv(h(x))"), "failed at {equation}");
}

#[test]
fn single_point_shift_positivity_rejection() {
    let single = from_matrix(&SftMatrix::new(vec![vec![1]]).unwrap(), MatrixKind::Vertex).unwrap();
    // cocycle data l_X = 1, k_X = 0 on one side and l_Y = 0, k_Y = 1 on the
    // other: the second difference is the constant -1
    let cx = CocyclePairSpec::new(
        CylFunction::constant(&single, 0),
        CylFunction::constant(&single, 1),
    )
    .unwrap();
    let cy = CocyclePairSpec::new(
        CylFunction::constant(&single, 1),
        CylFunction::constant(&single, 0),
    )
    .unwrap();
    let rep = verify_positive_coe(&single, &single, &cx, &cy, 6).unwrap();
    assert_eq!(rep.verdict, Verdict::Fail);
    match rep.counterexample.unwrap() {
        shiftlab_core::relations::Counterexample::Point { equation, .. } => {
            assert!(equation.contains("side Y"), "{equation}");
        }
        other => panic!("unexpected counterexample {other:?}"),
    }
    // zero cocycles are positive
    let zero = CocyclePairSpec::new(
        CylFunction::constant(&single, 0),
        CylFunction::constant(&single, 0),
    )
    .unwrap();
    let rep = verify_positive_coe(&single, &single, &zero, &zero, 6).unwrap();
    assert_eq!(rep.verdict, Verdict::Pass);
    // and the stabilizer-preserving check accepts the mixed pair
    let id = shiftlab_core::relations::identity_map(&single).unwrap();
    let pres = verify_preservation(
        &id,
        &id,
        &cx,
        &cy,
        PreservationMode::Stabilizer,
        PreservationScope::Periodic,
        2,
    )
    .unwrap();
    assert_eq!(pres.verdict, Verdict::Pass);
    // while the signed least-period check rejects the negative side
    let pres = verify_preservation(
        &id,
        &id,
        &cx,
        &cy,
        PreservationMode::LeastPeriod,
        PreservationScope::Periodic,
        2,
    )
    .unwrap();
    assert_eq!(pres.verdict, Verdict::Fail);
}

#[test]
fn golden_vs_full2_invariants_are_inconclusive() {
    let golden = load_shift("golden");
    let full2 = load_shift("full2");
    match shiftlab_core::flow::compare_flow_invariants(&golden, &full2).unwrap() {
        shiftlab_core::flow::FlowComparison::Inconclusive => {}
        other => panic!("golden and full2 share BF data: {other:?}"),
    }
}

#[test]
fn flow_certificate_for_a_doubled_suspension() {
    // full 2-shift with roof 2 against its own suspension presentation with
    // roof 1, certified by the relabeling block code
    let full2 = load_shift("full2");
    let sx = suspend(&full2, &RoofFunction::constant(&full2, 2).unwrap()).unwrap();
    let y = sx.presentation.clone();
    let sy = suspend(&y, &RoofFunction::constant(&y, 1).unwrap()).unwrap();
    let mut table = BTreeMap::new();
    for sym in sx.presentation.alphabet.symbols() {
        table.insert(sym.to_string(), format!("{sym}@0"));
    }
    let h = compile_map(
        &MapSpec::BlockMap {
            window: 1,
            table: table.clone(),
            pad: 0,
        },
        &sx.presentation,
        &sy.presentation,
    )
    .unwrap();
    let mut back = BTreeMap::new();
    for (a, b) in &table {
        back.insert(b.clone(), a.clone());
    }
    let h_inv = compile_map(
        &MapSpec::BlockMap {
            window: 1,
            table: back,
            pad: 0,
        },
        &sy.presentation,
        &sx.presentation,
    )
    .unwrap();
    let rep = verify_flow_certificate(&sx, &sy, &h, Some(&h_inv), 0).unwrap();
    assert_eq!(rep.verdict, Verdict::Pass, "{:?}", rep.counterexample);
    // the block-code route certifies the same relabeling
    let rep = verify_flow_certificate(&sx, &sy, &h, None, 0).unwrap();
    assert_eq!(rep.verdict, Verdict::Pass);
}

#[test]
fn flow_certificate_fails_for_the_matrix_pair() {
    // any candidate between the suspensions of the intro pair must fail
    let a = from_matrix(
        &shiftlab_core::presentation::fixtures::matrix_a(),
        MatrixKind::Edge,
    )
    .unwrap();
    let ap = from_matrix(
        &shiftlab_core::presentation::fixtures::matrix_a_prime(),
        MatrixKind::Edge,
    )
    .unwrap();
    let sx = suspend(&a, &RoofFunction::constant(&a, 1).unwrap()).unwrap();
    let sy = suspend(&ap, &RoofFunction::constant(&ap, 1).unwrap()).unwrap();
    // a collapsing candidate: everything onto a self-loop of the codomain
    let loop_sym = {
        let self_loop = ap.edges.iter().find(|e| e.from == e.to).unwrap();
        format!("{}@0", ap.alphabet.symbol(self_loop.label))
    };
    let mut table = BTreeMap::new();
    for sym in sx.presentation.alphabet.symbols() {
        table.insert(sym.to_string(), loop_sym.clone());
    }
    let h = compile_map(
        &MapSpec::BlockMap {
            window: 1,
            table,
            pad: 0,
        },
        &sx.presentation,
        &sy.presentation,
    )
    .unwrap();
    let back_sym = format!("{}@0", a.alphabet.symbol(a.edges[0].label));
    let mut back = BTreeMap::new();
    for sym in sy.presentation.alphabet.symbols() {
        back.insert(sym.to_string(), back_sym.clone());
    }
    let h_inv = compile_map(
        &MapSpec::BlockMap {
            window: 1,
            table: back,
            pad: 0,
        },
        &sy.presentation,
        &sx.presentation,
    )
    .unwrap();
    let rep = verify_flow_certificate(&sx, &sy, &h, Some(&h_inv), 0).unwrap();
    assert_eq!(rep.verdict, Verdict::Fail);
    // the block-code route fails as well: the collapse is not almost injective
    let rep = verify_flow_certificate(&sx, &sy, &h, None, 2).unwrap();
    assert_eq!(rep.verdict, Verdict::Fail);
    // and the invariants already distinguish the pair
    assert!(matches!(
        shiftlab_core::flow::compare_flow_invariants(&a, &ap).unwrap(),
        shiftlab_core::flow::FlowComparison::Distinguishable { .. }
    ));
}

#[test]
fn pushforward_intertwines_the_stabilized_cocycles() {
    // the pushforward of a stabilized base cochain corresponds to the base
    // cocycle through the level-splitting isomorphism
    let even = load_shift("even");
    let cover = build_cover(&even).unwrap();
    let roof = RoofFunction::new(
        &even,
        by_first_symbol(&even, &[("0", 1), ("1", 2)]).unwrap(),
    )
    .unwrap();
    let susp = suspend(&even, &roof).unwrap();
    let mut zetas: Vec<StabCylFunction> = vec![StabCylFunction::constant(&even, 1)];
    zetas.push(StabCylFunction::level0(
        &even,
        by_first_symbol(&even, &[("0", 2), ("1", -1)]).unwrap(),
    ));
    zetas.push(StabCylFunction {
        levels: vec![
            by_first_symbol(&even, &[("0", 1), ("1", 0)]).unwrap(),
            by_first_symbol(&even, &[("0", 0), ("1", 3)]).unwrap(),
        ],
        tail: CylFunction::constant(&even, -2),
    });
    for x in even.eventually_periodic_points(1, 2) {
        for lift in cover.lift_point(&x).unwrap() {
            for (k, l, i, j) in [
                (0usize, 0usize, 0usize, 0usize),
                (1, 0, 0, 1),
                (2, 1, 1, 2),
                (0, 3, 2, 0),
            ] {
                let (target, source) = if j >= i {
                    (lift.clone(), lift.shift_n(j - i))
                } else {
                    (lift.shift_n(i - j), lift.clone())
                };
                let el = StabElement::new(
                    &cover,
                    StabPoint {
                        point: target,
                        level: k,
                    },
                    j as i64 - i as i64,
                    StabPoint {
                        point: source,
                        level: l,
                    },
                    i,
                    j,
                )
                .unwrap();
                for zeta in &zetas {
                    let lhs = shiftlab_core::stab::kappa_stab_eval(&cover, zeta, &el);
                    let image = psi_f_map(&cover, &susp, &el).unwrap();
                    // evaluate the pushforward along the image arrow
                    let pushed = |bx: &EvPerPoint, tower: usize, stab: usize| {
                        psi_sharp_eval(&susp, zeta, bx, tower, stab)
                    };
                    let rhs = {
                        // reuse the suspension evaluator by wrapping the
                        // pushforward as a closure-backed cochain
                        kappa_susp_stab_eval_with(&cover, &susp, &pushed, &image)
                    };
                    assert_eq!(lhs, rhs, "pushforward intertwining failed");
                }
            }
        }
    }
}

/// Closure-backed variant of the suspension cocycle evaluation.
fn kappa_susp_stab_eval_with<F>(
    cover: &shiftlab_core::cover::CoverGraph,
    susp: &shiftlab_core::flow::Suspension,
    f: &F,
    el: &shiftlab_core::flow::SuspStabElement,
) -> i64
where
    F: Fn(&EvPerPoint, usize, usize) -> i64,
{
    shiftlab_core::flow::kappa_susp_stab_eval_fn(cover, susp, f, el)
}

#[test]
fn suspension_cocycle_closure_matches_table_form() {
    // the closure-backed evaluator agrees with the table-backed one
    let even = load_shift("even");
    let cover = build_cover(&even).unwrap();
    let roof = RoofFunction::new(
        &even,
        by_first_symbol(&even, &[("0", 1), ("1", 2)]).unwrap(),
    )
    .unwrap();
    let susp = suspend(&even, &roof).unwrap();
    let xi = StabCylFunction::level0(
        &susp.presentation,
        CylFunction::constant(&susp.presentation, 3),
    );
    let x = EvPerPoint::parse(&even.alphabet, "", "0").unwrap();
    let lift = cover.iota(&x).unwrap();
    let el = psi_f_map(
        &cover,
        &susp,
        &StabElement::new(
            &cover,
            StabPoint {
                point: lift.clone(),
                level: 2,
            },
            1,
            StabPoint {
                point: lift,
                level: 0,
            },
            0,
            1,
        )
        .unwrap(),
    )
    .unwrap();
    let table = kappa_susp_stab_eval(&cover, &susp, &xi, &el);
    let closure = kappa_susp_stab_eval_with(
        &cover,
        &susp,
        &|bx: &EvPerPoint, tower: usize, stab: usize| {
            shiftlab_core::flow::eval_susp_stab(&susp, &xi, bx, tower, stab)
        },
        &el,
    );
    assert_eq!(table, closure);
}

#[test]
fn positivity_decision_never_returns_unknown_at_default_depth() {
    // cylinder functions are decided exactly: a certificate or a negative orbit
    use rand::{Rng, SeedableRng};
    let mut rng = rand::rngs::StdRng::seed_from_u64(7);
    for name in ["even", "golden", "full2", "odd"] {
        let p = load_shift(name);
        for _ in 0..50 {
            let depth = rng.gen_range(0..=2usize);
            let values: BTreeMap<_, _> = p
                .words_of_length(depth)
                .into_iter()
                .map(|w| (w, rng.gen_range(-3..=3i64)))
                .collect();
            let f = CylFunction::new(&p, depth, values).unwrap();
            match positivity(&p, &f, 8) {
                Decision::Yes(_) | Decision::No { .. } => {}
                Decision::Unknown => panic!("positivity must decide cylinder functions"),
            }
        }
    }
}
