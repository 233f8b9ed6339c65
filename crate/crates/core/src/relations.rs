//! Exact verification of dynamical relations between shift spaces: conjugacy,
//! eventual conjugacy, continuous orbit equivalence with cocycle pairs,
//! stabilizer/least-period preservation, positivity, almost injectivity and
//! surjectivity, and the constructive lift of a verified relation to the
//! covers.
//!
//! Every equation is compiled into a pair of transducers (cylinder-dependent
//! shift offsets folded into the machine state) and compared exactly; every
//! fail verdict carries a witness that can be revalidated by direct point
//! evaluation.

use std::collections::BTreeMap;

use crate::cohomology::CylFunction;
use crate::cover::{build_cover, CoverGraph};
use crate::error::{Error, Result};
use crate::presentation::{EvPerPoint, Presentation, Word};
use crate::transducer::{
    self, compile_block_map, compile_substitution, transducer_equal, Equivalence, TailOverride,
    Transducer,
};

/// Finite description of a continuous map between shift spaces.
#[derive(Debug, Clone)]
pub enum MapSpec {
    BlockMap {
        window: usize,
        /// window word (domain) -> output symbol (codomain), both as strings
        table: BTreeMap<String, String>,
        /// widen the compiled buffer without changing the map
        pad: usize,
    },
    Substitution {
        rules: Vec<(String, String)>,
        /// whole-point exceptions, applied at position 0
        point_overrides: Vec<((String, String), (String, String))>,
        /// tail exceptions: whenever the remaining input equals the left
        /// point, the right point is emitted verbatim
        suffix_overrides: Vec<((String, String), (String, String))>,
    },
}

/// A compiled continuous map, single-valued on the domain shift and with
/// image verified inside the codomain.
#[derive(Debug, Clone)]
pub struct CompiledMap {
    pub dom: Presentation,
    pub cod: Presentation,
    pub t: Transducer,
    pub is_block_map: bool,
}

pub fn compile_map(spec: &MapSpec, dom: &Presentation, cod: &Presentation) -> Result<CompiledMap> {
    let t = match spec {
        MapSpec::BlockMap { window, table, pad } => {
            let mut tbl = BTreeMap::new();
            for (w, s) in table {
                tbl.insert(dom.alphabet.tokenize(w)?, cod.alphabet.id_of(s)?);
            }
            compile_block_map(dom, cod, *window, &tbl, *pad)?
        }
        MapSpec::Substitution {
            rules,
            point_overrides,
            suffix_overrides,
        } => {
            let rs: Vec<(Word, Word)> = rules
                .iter()
                .map(|(p, r)| Ok((dom.alphabet.tokenize(p)?, cod.alphabet.tokenize(r)?)))
                .collect::<Result<_>>()?;
            let ovs = |list: &[((String, String), (String, String))]| -> Result<Vec<TailOverride>> {
                list.iter()
                    .map(|((ft, fc), (tt, tc))| {
                        Ok(TailOverride {
                            from: EvPerPoint::parse(&dom.alphabet, ft, fc)?,
                            to: EvPerPoint::parse(&cod.alphabet, tt, tc)?,
                        })
                    })
                    .collect()
            };
            compile_substitution(
                dom,
                cod,
                &rs,
                &ovs(point_overrides)?,
                &ovs(suffix_overrides)?,
            )?
        }
    };
    Ok(CompiledMap {
        dom: dom.clone(),
        cod: cod.clone(),
        t,
        is_block_map: matches!(spec, MapSpec::BlockMap { .. }),
    })
}

/// The identity map as a compiled map.
pub fn identity_map(p: &Presentation) -> Result<CompiledMap> {
    Ok(CompiledMap {
        dom: p.clone(),
        cod: p.clone(),
        t: Transducer::identity(p, p)?,
        is_block_map: true,
    })
}

/// A pair of nonnegative cylinder functions used as orbit-equivalence
/// cocycles.
#[derive(Debug, Clone)]
pub struct CocyclePairSpec {
    pub k: CylFunction,
    pub l: CylFunction,
}

impl CocyclePairSpec {
    pub fn new(k: CylFunction, l: CylFunction) -> Result<Self> {
        for (w, v) in k.values.iter().chain(l.values.iter()) {
            if *v < 0 {
                return Err(Error::Parse(format!(
                    "cocycle values must be nonnegative (word {w:?} has {v})"
                )));
            }
        }
        Ok(CocyclePairSpec { k, l })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    Unknown,
}

#[derive(Debug, Clone)]
pub enum Counterexample {
    /// An admissible input word on which two compiled sides first differ.
    Word {
        word: String,
        point: EvPerPoint,
        equation: String,
    },
    /// A point-level violation with both computed sides.
    Point {
        point: EvPerPoint,
        equation: String,
        lhs: String,
        rhs: String,
    },
}

#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub verdict: Verdict,
    pub checked_equations: Vec<String>,
    pub counterexample: Option<Counterexample>,
    pub bounds: BTreeMap<String, u64>,
    pub notes: Vec<String>,
}

impl VerificationReport {
    fn new() -> Self {
        VerificationReport {
            verdict: Verdict::Pass,
            checked_equations: Vec::new(),
            counterexample: None,
            bounds: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    fn fail(&mut self, ce: Counterexample) {
        if self.verdict == Verdict::Pass {
            self.verdict = Verdict::Fail;
            self.counterexample = Some(ce);
        }
    }
}

fn check_equation(
    report: &mut VerificationReport,
    name: &str,
    lhs: &Transducer,
    rhs: &Transducer,
    dom: &Presentation,
) -> Result<()> {
    report.checked_equations.push(name.to_string());
    match transducer_equal(lhs, rhs, dom)? {
        Equivalence::Equal => Ok(()),
        Equivalence::Differs { witness } => {
            let point =
                transducer::extend_to_point(dom, &witness).expect("witness words are admissible");
            report.fail(Counterexample::Word {
                word: dom.render_word(&witness),
                point,
                equation: name.to_string(),
            });
            Ok(())
        }
    }
}

/// `h . shift = shift . h`, plus both inverse identities.
pub fn verify_conjugacy(h: &CompiledMap, h_inv: &CompiledMap) -> Result<VerificationReport> {
    verify_eventual_conjugacy(h, h_inv, 0)
}

/// The two eventual-conjugacy equations at lag `ell`, plus the inverse
/// identities; at lag 0 this is exactly conjugacy.
pub fn verify_eventual_conjugacy(
    h: &CompiledMap,
    h_inv: &CompiledMap,
    ell: usize,
) -> Result<VerificationReport> {
    let mut report = VerificationReport::new();
    report.bounds.insert("ell".into(), ell as u64);
    report
        .bounds
        .insert("lag_bound".into(), transducer::LAG_BOUND as u64);
    let ell_c = CylFunction::constant(&h.dom, ell as i64);
    let ell1_c = CylFunction::constant(&h.dom, ell as i64 + 1);
    let lhs = h.t.pre_shift(1).drop_by_cocycle(&ell_c);
    let rhs = h.t.drop_by_cocycle(&ell1_c);
    check_equation(
        &mut report,
        &format!("shift^{ell}(h(shift x)) = shift^{}(h(x))", ell + 1),
        &lhs,
        &rhs,
        &h.dom,
    )?;
    let ell_d = CylFunction::constant(&h_inv.dom, ell as i64);
    let ell1_d = CylFunction::constant(&h_inv.dom, ell as i64 + 1);
    let lhs = h_inv.t.pre_shift(1).drop_by_cocycle(&ell_d);
    let rhs = h_inv.t.drop_by_cocycle(&ell1_d);
    check_equation(
        &mut report,
        &format!("shift^{ell}(h_inv(shift y)) = shift^{}(h_inv(y))", ell + 1),
        &lhs,
        &rhs,
        &h_inv.dom,
    )?;
    // inverse identities
    let comp = h.t.then(&h_inv.t)?;
    let idx = Transducer::identity(&h.dom, &h.dom)?;
    check_equation(&mut report, "h_inv(h(x)) = x", &comp, &idx, &h.dom)?;
    let comp = h_inv.t.then(&h.t)?;
    let idy = Transducer::identity(&h_inv.dom, &h_inv.dom)?;
    check_equation(&mut report, "h(h_inv(y)) = y", &comp, &idy, &h_inv.dom)?;
    Ok(report)
}

/// The two orbit-equivalence cocycle equations, verified exactly.
pub fn verify_coe(
    h: &CompiledMap,
    h_inv: &CompiledMap,
    cx: &CocyclePairSpec,
    cy: &CocyclePairSpec,
) -> Result<VerificationReport> {
    let mut report = VerificationReport::new();
    report
        .bounds
        .insert("lag_bound".into(), transducer::LAG_BOUND as u64);
    let lhs = h.t.drop_by_cocycle(&cx.l);
    let rhs = h.t.pre_shift(1).drop_by_cocycle(&cx.k);
    check_equation(
        &mut report,
        "shift^{l_X(x)}(h(x)) = shift^{k_X(x)}(h(shift x))",
        &lhs,
        &rhs,
        &h.dom,
    )?;
    let lhs = h_inv.t.drop_by_cocycle(&cy.l);
    let rhs = h_inv.t.pre_shift(1).drop_by_cocycle(&cy.k);
    check_equation(
        &mut report,
        "shift^{l_Y(y)}(h_inv(y)) = shift^{k_Y(y)}(h_inv(shift y))",
        &lhs,
        &rhs,
        &h_inv.dom,
    )?;
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PreservationMode {
    Stabilizer,
    LeastPeriod,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PreservationScope {
    Periodic,
    EventuallyPeriodic,
}

/// The default exhaustiveness bound for preservation checks: twice the
/// product of the two presentations' vertex counts.
pub fn default_period_bound(h: &CompiledMap) -> usize {
    2 * h.dom.vertex_count() * h.cod.vertex_count()
}

/// Compare image least periods against iterated cocycle differences over
/// every orbit within the bound; with the eventually periodic scope, points
/// with a transient up to the bound are included.
pub fn verify_preservation(
    h: &CompiledMap,
    h_inv: &CompiledMap,
    cx: &CocyclePairSpec,
    cy: &CocyclePairSpec,
    mode: PreservationMode,
    scope: PreservationScope,
    period_bound: usize,
) -> Result<VerificationReport> {
    let mut report = VerificationReport::new();
    report
        .bounds
        .insert("period_bound".into(), period_bound as u64);
    let side = |map: &CompiledMap,
                pair: &CocyclePairSpec,
                tag: &str,
                report: &mut VerificationReport|
     -> Result<()> {
        let points = match scope {
            PreservationScope::Periodic => map.dom.periodic_points_up_to(period_bound),
            PreservationScope::EventuallyPeriodic => map
                .dom
                .eventually_periodic_points(period_bound, period_bound),
        };
        report
            .checked_equations
            .push(format!("{tag}: lp(image) vs iterated cocycle difference"));
        for x in points {
            let image = map.t.apply_to_point(&x)?;
            let p = x.lp();
            let diff = pair.l.iterated(&x, p) - pair.k.iterated(&x, p);
            let expected = image.lp() as i64;
            let got = match mode {
                PreservationMode::Stabilizer => diff.abs(),
                PreservationMode::LeastPeriod => diff,
            };
            report.notes.push(format!(
                "{tag}: x = {}, h(x) = {}, lp(h(x)) = {}, l^({p}) - k^({p}) = {diff}",
                x.render(&map.dom.alphabet),
                image.render(&map.cod.alphabet),
                image.lp()
            ));
            if got != expected {
                report.fail(Counterexample::Point {
                    point: x.clone(),
                    equation: format!("{tag} least-period equation"),
                    lhs: format!("{got}"),
                    rhs: format!("lp = {expected}"),
                });
            }
        }
        Ok(())
    };
    side(h, cx, "forward", &mut report)?;
    side(h_inv, cy, "backward", &mut report)?;
    Ok(report)
}

/// Positivity of both cocycle differences, delegated to the cohomology
/// decision procedure.
pub fn verify_positive_coe(
    px: &Presentation,
    py: &Presentation,
    cx: &CocyclePairSpec,
    cy: &CocyclePairSpec,
    depth_bound: usize,
) -> Result<VerificationReport> {
    let mut report = VerificationReport::new();
    report
        .bounds
        .insert("depth_bound".into(), depth_bound as u64);
    for (p, pair, tag) in [(px, cx, "X"), (py, cy, "Y")] {
        let diff = pair.l.sub(p, &pair.k);
        report
            .checked_equations
            .push(format!("[l_{tag} - k_{tag}] in the positive cone"));
        match crate::cohomology::positivity(p, &diff, depth_bound) {
            crate::cohomology::Decision::Yes(b) => {
                report
                    .notes
                    .push(format!("{tag}: certificate of depth {}", b.depth));
            }
            crate::cohomology::Decision::No { witness, orbit_sum } => {
                report.fail(Counterexample::Point {
                    point: witness.clone(),
                    equation: format!("positivity on side {tag}"),
                    lhs: format!("orbit sum {orbit_sum}"),
                    rhs: "nonnegative".into(),
                });
            }
            crate::cohomology::Decision::Unknown => {
                if report.verdict == Verdict::Pass {
                    report.verdict = Verdict::Unknown;
                }
            }
        }
    }
    Ok(report)
}

/// Almost injectivity of a sliding block code at the given lag.
pub fn almost_injective(phi: &CompiledMap, lag: usize) -> Result<bool> {
    if !phi.is_block_map {
        return Err(Error::Unsupported(
            "almost injectivity is decided for sliding block codes".into(),
        ));
    }
    transducer::almost_injective(&phi.t, &phi.dom, lag)
}

/// Almost surjectivity of a sliding block code at the given lag.
pub fn almost_surjective(phi: &CompiledMap, lag: usize) -> Result<bool> {
    if !phi.is_block_map {
        return Err(Error::Unsupported(
            "almost surjectivity is decided for sliding block codes".into(),
        ));
    }
    transducer::almost_surjective(&phi.t, &phi.dom, &phi.cod, lag)
}

// ---------------------------------------------------------------------------
// lifting a verified relation to the covers
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub enum LiftKind {
    Conjugacy,
    Eventual(usize),
    Coe(CocyclePairSpec, CocyclePairSpec),
}

#[derive(Debug)]
pub struct LiftedRelation {
    pub cover_dom: CoverGraph,
    pub cover_cod: CoverGraph,
    pub dom_edges: Presentation,
    pub cod_edges: Presentation,
    pub map: CompiledMap,
    pub map_inv: CompiledMap,
    pub cocycles: Option<(CocyclePairSpec, CocyclePairSpec)>,
    pub relation_report: VerificationReport,
    pub intertwining_report: VerificationReport,
}

/// Run a machine from a given state on an eventually periodic input.
fn apply_from_state(t: &Transducer, q0: usize, x: &EvPerPoint) -> Result<EvPerPoint> {
    let shifted = Transducer {
        input: t.input.clone(),
        output: t.output.clone(),
        delta: t.delta.clone(),
        initial: q0,
        max_emit: t.max_emit,
    };
    shifted.apply_to_point(x)
}

/// Lift a compiled map to a map between the cover edge shifts.
///
/// The residual past-state map sends a pair (machine state, cover vertex of
/// the remaining input) to the cover vertex of the remaining emitted tail; it
/// is computed on stored witnesses and checked for well-definedness across
/// all witnesses of each vertex.
fn lift_map(
    h: &CompiledMap,
    cover_dom: &CoverGraph,
    cover_cod: &CoverGraph,
    dom_edges: &Presentation,
    cod_edges: &Presentation,
) -> Result<CompiledMap> {
    // edge label id in the edge shift = index in the sorted cover edge list
    let dom_edge_info: Vec<(usize, usize, usize)> = cover_dom
        .graph
        .edges
        .iter()
        .map(|e| (e.from, e.label, e.to))
        .collect();
    // codomain cover edge lookup: (source, base label, target) -> edge label id
    let mut cod_edge_id: BTreeMap<(usize, usize, usize), usize> = BTreeMap::new();
    for (idx, e) in cover_cod.graph.edges.iter().enumerate() {
        cod_edge_id.insert((e.from, e.label, e.to), idx);
    }

    // residual past-state map on reachable (machine state, cover vertex)
    let mut s_map: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut queue: Vec<(usize, usize)> = (0..cover_dom.vertex_count())
        .map(|v| (h.t.initial, v))
        .collect();
    let mut seen: std::collections::BTreeSet<(usize, usize)> = queue.iter().copied().collect();
    let compute_s = |q: usize, v: usize| -> Result<usize> {
        let mut result: Option<usize> = None;
        for w in &cover_dom.witnesses[v] {
            let out = apply_from_state(&h.t, q, w).map_err(|e| {
                Error::LiftNotWellDefined(format!(
                    "residual image of witness {} undefined: {e}",
                    w.render(&h.dom.alphabet)
                ))
            })?;
            let cls = cover_cod.class_of_point(&out)?;
            match result {
                None => result = Some(cls),
                Some(r) if r == cls => {}
                Some(r) => {
                    return Err(Error::LiftNotWellDefined(format!(
                        "witnesses of cover vertex {v} map to distinct classes {r} and {cls}"
                    )))
                }
            }
        }
        Ok(result.expect("cover vertices carry witnesses"))
    };
    while let Some((q, v)) = queue.pop() {
        let s = compute_s(q, v)?;
        s_map.insert((q, v), s);
        for e in cover_dom.graph.out_edges(v) {
            if let Some((qn, _)) = h.t.step(q, e.label) {
                if seen.insert((qn, e.to)) {
                    queue.push((qn, e.to));
                }
            }
        }
    }

    // the lifted machine: input cover edges, output cover edges
    let step = |q: &usize, edge_sym: usize| -> Option<(usize, Word)> {
        let (_, base_label, target) = dom_edge_info[edge_sym];
        let (qn, w) = h.t.step(*q, base_label)?;
        let end = *s_map.get(&(qn, target))?;
        // chain the emitted symbols backward from the residual class
        let mut states = vec![end];
        for &b in w.iter().rev() {
            let rb = cover_cod
                .base
                .alphabet
                .id_of(h.cod.alphabet.symbol(b))
                .ok()?;
            let prev = cover_cod.pre_class[rb][*states.last().unwrap()]?;
            states.push(prev);
        }
        states.reverse();
        let mut out = Vec::new();
        for (i, &b) in w.iter().enumerate() {
            let rb = cover_cod
                .base
                .alphabet
                .id_of(h.cod.alphabet.symbol(b))
                .ok()?;
            let id = *cod_edge_id.get(&(states[i], rb, states[i + 1]))?;
            out.push(id);
        }
        Some((qn, out))
    };
    let (delta, max_emit) = {
        let mut ids: std::collections::HashMap<usize, usize> = std::collections::HashMap::new();
        let mut keys = vec![h.t.initial];
        ids.insert(h.t.initial, 0);
        let mut delta: Vec<BTreeMap<usize, (usize, Word)>> = Vec::new();
        let mut max_emit = 1;
        let mut i = 0;
        while i < keys.len() {
            let key = keys[i];
            let mut row = BTreeMap::new();
            for a in dom_edges.alphabet.ids() {
                if let Some((nk, out)) = step(&key, a) {
                    let id = *ids.entry(nk).or_insert_with(|| {
                        keys.push(nk);
                        keys.len() - 1
                    });
                    max_emit = max_emit.max(out.len());
                    row.insert(a, (id, out));
                }
            }
            delta.push(row);
            i += 1;
        }
        (delta, max_emit)
    };
    let t = Transducer {
        input: dom_edges.alphabet.clone(),
        output: cod_edges.alphabet.clone(),
        delta,
        initial: 0,
        max_emit,
    };
    t.validate(dom_edges, cod_edges)
        .map_err(|e| Error::LiftNotWellDefined(format!("lifted machine failed validation: {e}")))?;
    Ok(CompiledMap {
        dom: dom_edges.clone(),
        cod: cod_edges.clone(),
        t,
        is_block_map: false,
    })
}

/// Cocycle on the cover edge shift obtained by composing with the factor map.
pub fn compose_cocycle_with_factor(
    c: &CylFunction,
    cover: &CoverGraph,
    edges: &Presentation,
) -> CylFunction {
    let mut values = BTreeMap::new();
    for w in edges.words_of_length(c.depth) {
        let base: Word = w.iter().map(|&e| cover.graph.edges[e].label).collect();
        values.insert(w, c.eval_word(&base));
    }
    CylFunction {
        depth: c.depth,
        values,
    }
}

/// The label-reading factor map as a transducer from the cover edge shift to
/// the base shift.
pub fn factor_transducer(cover: &CoverGraph, edges: &Presentation) -> Transducer {
    let labels: Vec<usize> = cover.graph.edges.iter().map(|e| e.label).collect();
    let delta = vec![labels
        .iter()
        .enumerate()
        .map(|(i, &l)| (i, (0usize, vec![l])))
        .collect::<BTreeMap<_, _>>()];
    Transducer {
        input: edges.alphabet.clone(),
        output: cover.base.alphabet.clone(),
        delta,
        initial: 0,
        max_emit: 1,
    }
}

/// Lift a verified relation to the covers, re-verify it there, and check the
/// intertwining with the factor maps.
pub fn lift_to_cover(
    h: &CompiledMap,
    h_inv: &CompiledMap,
    kind: &LiftKind,
) -> Result<LiftedRelation> {
    // the base relation must hold before lifting
    let base_report = match kind {
        LiftKind::Conjugacy => verify_conjugacy(h, h_inv)?,
        LiftKind::Eventual(l) => verify_eventual_conjugacy(h, h_inv, *l)?,
        LiftKind::Coe(cx, cy) => verify_coe(h, h_inv, cx, cy)?,
    };
    if base_report.verdict != Verdict::Pass {
        return Err(Error::LiftNotWellDefined(
            "the base relation does not hold, nothing to lift".into(),
        ));
    }
    let cover_dom = build_cover(&h.dom)?;
    let cover_cod = build_cover(&h.cod)?;
    let dom_edges = cover_dom.as_edge_presentation();
    let cod_edges = cover_cod.as_edge_presentation();
    let lifted = lift_map(h, &cover_dom, &cover_cod, &dom_edges, &cod_edges)?;
    let lifted_inv = lift_map(h_inv, &cover_cod, &cover_dom, &cod_edges, &dom_edges)?;

    let (relation_report, cocycles) = match kind {
        LiftKind::Conjugacy => (verify_conjugacy(&lifted, &lifted_inv)?, None),
        LiftKind::Eventual(l) => (verify_eventual_conjugacy(&lifted, &lifted_inv, *l)?, None),
        LiftKind::Coe(cx, cy) => {
            let cx_lift = CocyclePairSpec::new(
                compose_cocycle_with_factor(&cx.k, &cover_dom, &dom_edges),
                compose_cocycle_with_factor(&cx.l, &cover_dom, &dom_edges),
            )?;
            let cy_lift = CocyclePairSpec::new(
                compose_cocycle_with_factor(&cy.k, &cover_cod, &cod_edges),
                compose_cocycle_with_factor(&cy.l, &cover_cod, &cod_edges),
            )?;
            let rep = verify_coe(&lifted, &lifted_inv, &cx_lift, &cy_lift)?;
            (rep, Some((cx_lift, cy_lift)))
        }
    };

    // intertwining: h . pi_dom = pi_cod . lifted
    let mut intertwining_report = VerificationReport::new();
    let pi_dom = factor_transducer(&cover_dom, &dom_edges);
    let pi_cod = factor_transducer(&cover_cod, &cod_edges);
    let lhs = pi_dom.then(&h.t)?;
    let rhs = lifted.t.then(&pi_cod)?;
    check_equation(
        &mut intertwining_report,
        "h(pi(x~)) = pi(h~(x~))",
        &lhs,
        &rhs,
        &dom_edges,
    )?;
    let lhs = pi_cod.then(&h_inv.t)?;
    let rhs = lifted_inv.t.then(&pi_dom)?;
    check_equation(
        &mut intertwining_report,
        "h_inv(pi(y~)) = pi(h_inv~(y~))",
        &lhs,
        &rhs,
        &cod_edges,
    )?;

    Ok(LiftedRelation {
        cover_dom,
        cover_cod,
        dom_edges,
        cod_edges,
        map: lifted,
        map_inv: lifted_inv,
        cocycles,
        relation_report,
        intertwining_report,
    })
}

// ---------------------------------------------------------------------------
// revalidation of counterexamples by direct point evaluation
// ---------------------------------------------------------------------------

/// Recheck a coe-style mismatch witness through direct point evaluation:
/// both shifted images are computed on the witness point and compared.
pub fn revalidate_coe_witness(
    h: &CompiledMap,
    pair: &CocyclePairSpec,
    x: &EvPerPoint,
) -> Result<bool> {
    let l = pair.l.eval(x).max(0) as usize;
    let k = pair.k.eval(x).max(0) as usize;
    let lhs = h.t.apply_to_point(x)?.shift_n(l);
    let rhs = h.t.apply_to_point(&x.shift())?.shift_n(k);
    Ok(lhs != rhs)
}

/// Recheck an eventual-conjugacy mismatch witness at a given lag.
pub fn revalidate_eventual_witness(h: &CompiledMap, ell: usize, x: &EvPerPoint) -> Result<bool> {
    let lhs = h.t.apply_to_point(&x.shift())?.shift_n(ell);
    let rhs = h.t.apply_to_point(x)?.shift_n(ell + 1);
    Ok(lhs != rhs)
}
