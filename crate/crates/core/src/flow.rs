//! Discrete suspensions, flow-equivalence invariant reports, the suspension
//! cochain maps, and verification of flow-equivalence certificates via
//! conjugate suspensions.
//!
//! Invariant reports are one-sided: unequal Bowen-Franks data of the covers
//! (under effectiveness) certifies non-flow-equivalence, while equality never
//! certifies flow equivalence.  Positive certificates only come from
//! `verify_flow_certificate`, which checks a supplied conjugacy or an almost
//! injective and almost surjective block code between two suspensions.

use std::collections::BTreeMap;

use crate::cohomology::{bowen_franks, AbelianGroupPresentation, CylFunction};
use crate::cover::{build_cover, CoverGraph, CoverPoint};
use crate::error::{Error, Result};
use crate::past::{classify, GroupoidFlags};
use crate::presentation::{Alphabet, Edge, EvPerPoint, Presentation, SftMatrix, Word};
use crate::relations::{
    almost_injective, almost_surjective, verify_conjugacy, CompiledMap, Counterexample, Verdict,
    VerificationReport,
};
use crate::stab::{StabCylFunction, StabElement};

/// A strictly positive cylinder function used as a suspension roof.
#[derive(Debug, Clone)]
pub struct RoofFunction(pub CylFunction);

impl RoofFunction {
    pub fn new(p: &Presentation, f: CylFunction) -> Result<Self> {
        for (w, v) in &f.values {
            if *v < 1 {
                return Err(Error::RoofNotPositive(p.render_word(w)));
            }
        }
        Ok(RoofFunction(f))
    }

    pub fn constant(p: &Presentation, c: i64) -> Result<Self> {
        RoofFunction::new(p, CylFunction::constant(p, c))
    }

    pub fn eval(&self, x: &EvPerPoint) -> usize {
        self.0.eval(x) as usize
    }
}

/// The suspension of a shift by a roof function, presented as a labeled graph
/// over the alphabet of (symbol, level) pairs, written `a@i`.
#[derive(Debug, Clone)]
pub struct Suspension {
    pub base: Presentation,
    pub roof: RoofFunction,
    pub presentation: Presentation,
}

pub const MAX_ROOF_DEPTH: usize = 4;

/// Build the suspension as a labeled graph presenting exactly the embedded
/// images of (point, level) pairs.
///
/// States are pairs of a length-`d` path of the base presentation (enough
/// lookahead to read the roof) and a level below the roof of the path's
/// label word; a level-0 state hands over to the extended path at the top of
/// its tower.
pub fn suspend(p: &Presentation, roof: &RoofFunction) -> Result<Suspension> {
    if roof.0.depth > MAX_ROOF_DEPTH {
        return Err(Error::DepthOverflow(roof.0.depth, MAX_ROOF_DEPTH));
    }
    let d = roof.0.depth.max(1);
    // paths of d edges in the base graph: (start vertex, labels..., vertices...)
    #[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
    struct Path {
        labels: Word,
        verts: Vec<usize>, // d + 1 vertices
    }
    let mut paths: Vec<Path> = p
        .edges
        .iter()
        .map(|e| Path {
            labels: vec![e.label],
            verts: vec![e.from, e.to],
        })
        .collect();
    for _ in 1..d {
        let mut next = Vec::new();
        for path in &paths {
            let end = *path.verts.last().unwrap();
            for e in p.out_edges(end) {
                let mut labels = path.labels.clone();
                labels.push(e.label);
                let mut verts = path.verts.clone();
                verts.push(e.to);
                next.push(Path { labels, verts });
            }
        }
        paths = next;
    }
    paths.sort();
    paths.dedup();
    let max_roof = paths
        .iter()
        .map(|pa| roof.0.eval_word(&pa.labels))
        .max()
        .unwrap_or(1) as usize;
    let mut symbols = Vec::new();
    for a in p.alphabet.ids() {
        for i in 0..max_roof {
            symbols.push(format!("{}@{}", p.alphabet.symbol(a), i));
        }
    }
    let susp_alph = Alphabet::new(symbols)?;
    let sym_id = |a: usize, i: usize| -> usize {
        susp_alph
            .id_of(&format!("{}@{}", p.alphabet.symbol(a), i))
            .unwrap()
    };
    // vertices: (path, level)
    let mut verts = Vec::new();
    let mut vid: BTreeMap<(Path, usize), usize> = BTreeMap::new();
    for pa in &paths {
        let f = roof.0.eval_word(&pa.labels) as usize;
        for i in 0..f {
            vid.insert((pa.clone(), i), verts.len());
            verts.push(format!(
                "({}@{};{})",
                p.render_word(&pa.labels),
                pa.verts
                    .iter()
                    .map(|&v| p.vertices[v].as_str())
                    .collect::<Vec<_>>()
                    .join("-"),
                i
            ));
        }
    }
    let mut edges = Vec::new();
    for pa in &paths {
        let f = roof.0.eval_word(&pa.labels) as usize;
        for i in 0..f {
            let from = vid[&(pa.clone(), i)];
            let label = sym_id(pa.labels[0], i);
            if i > 0 {
                edges.push(Edge {
                    from,
                    label,
                    to: vid[&(pa.clone(), i - 1)],
                });
            } else {
                // advance the path by one edge of the base graph
                let end = *pa.verts.last().unwrap();
                for e in p.out_edges(end) {
                    let mut labels = pa.labels[1..].to_vec();
                    labels.push(e.label);
                    let mut vs = pa.verts[1..].to_vec();
                    vs.push(e.to);
                    let pa2 = Path { labels, verts: vs };
                    let f2 = roof.0.eval_word(&pa2.labels) as usize;
                    edges.push(Edge {
                        from,
                        label,
                        to: vid[&(pa2, f2 - 1)],
                    });
                }
            }
        }
    }
    let presentation = Presentation::new(susp_alph, verts, edges)?;
    Ok(Suspension {
        base: p.clone(),
        roof: roof.clone(),
        presentation,
    })
}

impl Suspension {
    /// The suspension step on (point, level) pairs.
    pub fn step(&self, x: &EvPerPoint, i: usize) -> (EvPerPoint, usize) {
        if i > 0 {
            (x.clone(), i - 1)
        } else {
            let sx = x.shift();
            let lvl = self.roof.eval(&sx) - 1;
            (sx, lvl)
        }
    }

    /// The embedded image of (x, i) as a point of the suspension shift.
    pub fn stream(&self, x: &EvPerPoint, i: usize) -> EvPerPoint {
        assert!(i < self.roof.eval(x), "level must sit below the roof");
        let mut pairs: Vec<usize> = Vec::new();
        let mut seen: Vec<((EvPerPoint, usize), usize)> = Vec::new();
        let mut cur = (x.clone(), i);
        loop {
            if let Some((_, at)) = seen.iter().find(|(c, _)| *c == cur) {
                let cycle = pairs[*at..].to_vec();
                let transient = pairs[..*at].to_vec();
                return EvPerPoint::new(transient, cycle);
            }
            seen.push((cur.clone(), pairs.len()));
            let sym = self
                .presentation
                .alphabet
                .id_of(&format!(
                    "{}@{}",
                    self.base.alphabet.symbol(cur.0.symbol_at(0)),
                    cur.1
                ))
                .unwrap();
            pairs.push(sym);
            cur = self.step(&cur.0, cur.1);
        }
    }
}

// ---------------------------------------------------------------------------
// invariant reports
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct FlowInvariantReport {
    pub cover_adjacency: Vec<Vec<u64>>,
    pub bowen_franks: AbelianGroupPresentation,
    pub flags: GroupoidFlags,
}

/// Necessary flow invariants computed on the cover: adjacency data, the
/// Bowen-Franks presentation of `I - A`, and classification flags.
pub fn invariant_report(p: &Presentation) -> Result<FlowInvariantReport> {
    let cover = build_cover(p)?;
    let adj = cover.adjacency();
    let m = SftMatrix::new(adj.clone())?;
    Ok(FlowInvariantReport {
        cover_adjacency: adj,
        bowen_franks: bowen_franks(&m),
        flags: classify(p)?,
    })
}

#[derive(Debug, Clone)]
pub enum FlowComparison {
    /// The shifts cannot be flow equivalent; the reason names the differing
    /// invariant.
    Distinguishable { reason: String },
    /// Equal invariants never certify flow equivalence.
    Inconclusive,
}

fn det_sign(d: &num_bigint::BigInt) -> i8 {
    use std::cmp::Ordering;
    match d.cmp(&num_bigint::BigInt::from(0)) {
        Ordering::Less => -1,
        Ordering::Equal => 0,
        Ordering::Greater => 1,
    }
}

/// Compare the necessary invariants of two presentations.
pub fn compare_flow_invariants(p1: &Presentation, p2: &Presentation) -> Result<FlowComparison> {
    let r1 = invariant_report(p1)?;
    let r2 = invariant_report(p2)?;
    if !(r1.flags.effective && r2.flags.effective) {
        return Ok(FlowComparison::Inconclusive);
    }
    if !r1.bowen_franks.same_group(&r2.bowen_franks) {
        return Ok(FlowComparison::Distinguishable {
            reason: format!(
                "Bowen-Franks groups differ: {:?} vs {:?}",
                r1.bowen_franks.reduced(),
                r2.bowen_franks.reduced()
            ),
        });
    }
    let s1 = det_sign(&r1.bowen_franks.determinant);
    let s2 = det_sign(&r2.bowen_franks.determinant);
    if s1 != s2 {
        return Ok(FlowComparison::Distinguishable {
            reason: format!(
                "det(I - A) signs differ: {} vs {}",
                r1.bowen_franks.determinant, r2.bowen_franks.determinant
            ),
        });
    }
    Ok(FlowComparison::Inconclusive)
}

/// Verify a flow-equivalence certificate: suspensions by the two roofs must
/// be related by the supplied map, either as a full conjugacy pair or as an
/// almost injective and almost surjective block code.
pub fn verify_flow_certificate(
    suspension_x: &Suspension,
    suspension_y: &Suspension,
    h: &CompiledMap,
    h_inv: Option<&CompiledMap>,
    lag: usize,
) -> Result<VerificationReport> {
    let mut report = VerificationReport {
        verdict: Verdict::Pass,
        checked_equations: Vec::new(),
        counterexample: None,
        bounds: BTreeMap::new(),
        notes: Vec::new(),
    };
    report.bounds.insert("lag".into(), lag as u64);
    if !h
        .dom
        .alphabet
        .symbols()
        .eq(suspension_x.presentation.alphabet.symbols())
        || !h
            .cod
            .alphabet
            .symbols()
            .eq(suspension_y.presentation.alphabet.symbols())
    {
        return Err(Error::AlphabetMismatch(
            "certificate map must connect the two suspensions".into(),
        ));
    }
    if let Some(hi) = h_inv {
        let rep = verify_conjugacy(h, hi)?;
        report.checked_equations.extend(rep.checked_equations);
        report.notes.push("route: conjugacy of suspensions".into());
        if rep.verdict != Verdict::Pass {
            report.verdict = rep.verdict;
            report.counterexample = rep.counterexample;
        }
        return Ok(report);
    }
    report
        .checked_equations
        .push("almost injective + almost surjective block code".into());
    report
        .notes
        .push("route: two-sided conjugacy of suspensions from a block code".into());
    let inj = almost_injective(h, lag)?;
    let surj = almost_surjective(h, lag)?;
    if !(inj && surj) {
        report.verdict = Verdict::Fail;
        report.counterexample = Some(Counterexample::Point {
            point: EvPerPoint::new(Vec::new(), vec![0]),
            equation: format!("almost injective = {inj}, almost surjective = {surj} at lag {lag}"),
            lhs: format!("{inj}"),
            rhs: format!("{surj}"),
        });
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// suspension cochain maps
// ---------------------------------------------------------------------------

/// The pullback along the inclusion at level 0: sum a suspension cochain over
/// the tower fibers of one base step.
pub fn iota_f_star_eval(susp: &Suspension, xi: &CylFunction, x: &EvPerPoint) -> i64 {
    let steps = susp.roof.eval(&x.shift());
    let mut total = 0;
    let mut cur = (x.clone(), 0usize);
    for _ in 0..steps {
        total += xi.eval(&susp.stream(&cur.0, cur.1));
        cur = susp.step(&cur.0, cur.1);
    }
    total
}

fn stab_step(susp: &Suspension, pt: &(EvPerPoint, usize, usize)) -> (EvPerPoint, usize, usize) {
    let (x, i, k) = pt;
    if *k > 0 {
        (x.clone(), *i, k - 1)
    } else {
        let (x2, i2) = susp.step(x, *i);
        (x2, i2, 0)
    }
}

/// Evaluate a suspension-level stabilized cochain at ((x, i), k).
pub fn eval_susp_stab(
    susp: &Suspension,
    xi: &StabCylFunction,
    x: &EvPerPoint,
    i: usize,
    k: usize,
) -> i64 {
    xi.eval(&susp.stream(x, i), k)
}

/// The pullback of a stabilized suspension cochain to the stabilized base.
///
/// This is the unique function whose stabilized cocycle corresponds to the
/// suspension cocycle of `xi` under the level-splitting isomorphism: its
/// value at (x, n) is the difference of the inclusive step sums of the two
/// split points of n and n - 1.
pub fn psi_star_eval(susp: &Suspension, xi: &StabCylFunction, x: &EvPerPoint, n: usize) -> i64 {
    if n == 0 {
        let steps = susp.roof.eval(&x.shift());
        let mut total = 0;
        let mut cur = (x.clone(), 0usize, 0usize);
        for _ in 0..steps {
            total += eval_susp_stab(susp, xi, &cur.0, cur.1, cur.2);
            cur = stab_step(susp, &cur);
        }
        return total;
    }
    let f = susp.roof.eval(x);
    let split_sum = |m: usize| -> i64 {
        let (i, k) = (m % f, m / f);
        let mut total = 0;
        let mut cur = (x.clone(), i, k);
        for _ in 0..=i + k {
            total += eval_susp_stab(susp, xi, &cur.0, cur.1, cur.2);
            cur = stab_step(susp, &cur);
        }
        total
    };
    split_sum(n) - split_sum(n - 1)
}

/// The pushforward of a stabilized base cochain to the stabilized suspension.
pub fn psi_sharp_eval(
    susp: &Suspension,
    zeta: &StabCylFunction,
    x: &EvPerPoint,
    i: usize,
    k: usize,
) -> i64 {
    let f = susp.roof.eval(x);
    if k >= 1 {
        let lo = (k - 1) * f + i + 1;
        let hi = k * f + i;
        (lo..=hi).map(|j| zeta.eval(x, j)).sum()
    } else if i >= 1 {
        zeta.eval(x, i)
    } else {
        let sx = x.shift();
        let fs = susp.roof.eval(&sx);
        zeta.eval(x, 0) - (1..fs).map(|j| zeta.eval(&sx, j)).sum::<i64>()
    }
}

// ---------------------------------------------------------------------------
// the stabilized correspondence between base and suspension
// ---------------------------------------------------------------------------

/// A point of the suspended cover with a stabilization level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuspStabPoint {
    pub point: CoverPoint,
    pub tower: usize,
    pub stab: usize,
}

/// An arrow of the stabilized groupoid of the suspension, with meeting
/// indices for the suspension dynamics.
#[derive(Debug, Clone)]
pub struct SuspStabElement {
    pub target: SuspStabPoint,
    pub n: i64,
    pub source: SuspStabPoint,
    pub i: usize,
    pub j: usize,
}

fn susp_cover_step(
    cover: &CoverGraph,
    susp: &Suspension,
    pt: &(CoverPoint, usize),
) -> (CoverPoint, usize) {
    let (x, i) = pt;
    if *i > 0 {
        (x.clone(), i - 1)
    } else {
        let sx = x.shift();
        let lvl = susp.roof.eval(&cover.factor_image(&sx)) - 1;
        (sx, lvl)
    }
}

fn susp_stab_step(cover: &CoverGraph, susp: &Suspension, pt: &SuspStabPoint) -> SuspStabPoint {
    if pt.stab > 0 {
        SuspStabPoint {
            point: pt.point.clone(),
            tower: pt.tower,
            stab: pt.stab - 1,
        }
    } else {
        let (p2, t2) = susp_cover_step(cover, susp, &(pt.point.clone(), pt.tower));
        SuspStabPoint {
            point: p2,
            tower: t2,
            stab: 0,
        }
    }
}

impl SuspStabElement {
    pub fn new(
        cover: &CoverGraph,
        susp: &Suspension,
        target: SuspStabPoint,
        n: i64,
        source: SuspStabPoint,
        i: usize,
        j: usize,
    ) -> Result<Self> {
        if n != j as i64 - i as i64 {
            return Err(Error::BadGroupoidElement(format!(
                "n = {n} but j - i = {}",
                j as i64 - i as i64
            )));
        }
        let mut t = (target.point.clone(), target.tower);
        for _ in 0..j {
            t = susp_cover_step(cover, susp, &t);
        }
        let mut s = (source.point.clone(), source.tower);
        for _ in 0..i {
            s = susp_cover_step(cover, susp, &s);
        }
        if t != s {
            return Err(Error::BadGroupoidElement(
                "suspension points do not meet at the declared indices".into(),
            ));
        }
        Ok(SuspStabElement {
            target,
            n,
            source,
            i,
            j,
        })
    }
}

/// Evaluate the stabilized suspension cocycle on an arrow, with the cochain
/// supplied as any evaluator on (base point, tower level, stabilization
/// level) triples.
pub fn kappa_susp_stab_eval_fn<F>(
    cover: &CoverGraph,
    susp: &Suspension,
    f: &F,
    el: &SuspStabElement,
) -> i64
where
    F: Fn(&EvPerPoint, usize, usize) -> i64,
{
    let mut total = 0i64;
    let mut cur = el.target.clone();
    for _ in 0..=el.j + el.target.stab {
        total += f(&cover.factor_image(&cur.point), cur.tower, cur.stab);
        cur = susp_stab_step(cover, susp, &cur);
    }
    let mut cur = el.source.clone();
    for _ in 0..=el.i + el.source.stab {
        total -= f(&cover.factor_image(&cur.point), cur.tower, cur.stab);
        cur = susp_stab_step(cover, susp, &cur);
    }
    total
}

/// Evaluate the stabilized suspension cocycle of a suspension cochain on an
/// arrow.
pub fn kappa_susp_stab_eval(
    cover: &CoverGraph,
    susp: &Suspension,
    xi: &StabCylFunction,
    el: &SuspStabElement,
) -> i64 {
    kappa_susp_stab_eval_fn(
        cover,
        susp,
        &|bx: &EvPerPoint, tower, stab| eval_susp_stab(susp, xi, bx, tower, stab),
        el,
    )
}

/// Transport a stabilized arrow of the base to the suspension by the index
/// arithmetic of the roof: levels split into tower and stabilization
/// coordinates, and shifts count through the towers.
pub fn psi_f_map(
    cover: &CoverGraph,
    susp: &Suspension,
    el: &StabElement,
) -> Result<SuspStabElement> {
    let base_t = cover.factor_image(&el.target.point);
    let base_s = cover.factor_image(&el.source.point);
    let ft = susp.roof.eval(&base_t);
    let fs = susp.roof.eval(&base_s);
    let (it, kt) = (el.target.level % ft, el.target.level / ft);
    let (is, ks) = (el.source.level % fs, el.source.level / fs);
    let tower_sum = |x: &EvPerPoint, upto: usize| -> usize {
        (1..=upto).map(|r| susp.roof.eval(&x.shift_n(r))).sum()
    };
    let l = it + tower_sum(&base_t, el.j);
    let lp = is + tower_sum(&base_s, el.i);
    SuspStabElement::new(
        cover,
        susp,
        SuspStabPoint {
            point: el.target.point.clone(),
            tower: it,
            stab: kt,
        },
        l as i64 - lp as i64,
        SuspStabPoint {
            point: el.source.point.clone(),
            tower: is,
            stab: ks,
        },
        lp,
        l,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iso::graph_isomorphic;
    use crate::presentation::fixtures;
    use crate::stab::by_first_symbol;

    fn roof_one_plus_z1(p: &Presentation) -> RoofFunction {
        RoofFunction::new(p, by_first_symbol(p, &[("0", 1), ("1", 2)]).unwrap()).unwrap()
    }

    #[test]
    fn suspend_by_one_is_a_relabeling() {
        for name in [
            "full2", "golden", "even", "odd", "E", "F", "Eprime", "Fprime",
        ] {
            let p = fixtures::by_name(name).unwrap();
            let s = suspend(&p, &RoofFunction::constant(&p, 1).unwrap()).unwrap();
            let canon = s.presentation.follower_canonical_form();
            let canon_base = p.follower_canonical_form();
            assert!(
                graph_isomorphic(&canon, &canon_base).is_some(),
                "suspension by 1 of {name} must be the same graph up to relabeling"
            );
        }
    }

    #[test]
    fn suspension_doubles_periods() {
        let golden = fixtures::golden().unwrap();
        let s = suspend(&golden, &RoofFunction::constant(&golden, 2).unwrap()).unwrap();
        for p in 1..=3usize {
            let base_count = golden
                .periodic_orbits_up_to(p)
                .into_iter()
                .filter(|x| x.lp() == p)
                .count();
            let susp_count = s
                .presentation
                .periodic_orbits_up_to(2 * p)
                .into_iter()
                .filter(|x| x.lp() == 2 * p)
                .count();
            assert_eq!(susp_count, base_count, "period {p} orbit counts");
        }
    }

    #[test]
    fn stream_images_are_admissible() {
        let even = fixtures::even().unwrap();
        let s = suspend(&even, &roof_one_plus_z1(&even)).unwrap();
        for x in even.eventually_periodic_points(2, 2) {
            for i in 0..s.roof.eval(&x) {
                let z = s.stream(&x, i);
                assert!(
                    s.presentation.point_admissible(&z),
                    "stream of ({}, {i}) must be admissible",
                    x.render(&even.alphabet)
                );
            }
        }
    }

    #[test]
    fn roof_must_be_positive() {
        let p = fixtures::full2().unwrap();
        assert!(RoofFunction::constant(&p, 0).is_err());
    }

    #[test]
    fn iota_star_examples() {
        let full2 = fixtures::full2().unwrap();
        let s = suspend(&full2, &RoofFunction::constant(&full2, 2).unwrap()).unwrap();
        let one = CylFunction::constant(&s.presentation, 1);
        for x in full2.eventually_periodic_points(1, 2) {
            assert_eq!(iota_f_star_eval(&s, &one, &x), 2);
        }
        // indicator of level 0 pulls back to the constant 1
        let mut table = BTreeMap::new();
        for sym in s.presentation.alphabet.ids() {
            let name = s.presentation.alphabet.symbol(sym).to_string();
            table.insert(sym, name.ends_with("@0") as i64);
        }
        let level0 = CylFunction::by_first_symbol(&s.presentation, &table).unwrap();
        for x in full2.eventually_periodic_points(1, 2) {
            assert_eq!(iota_f_star_eval(&s, &level0, &x), 1);
        }
    }

    #[test]
    fn orbit_sums_correspond_under_suspension() {
        // the base orbit sum of the pullback equals the suspension orbit sum
        for name in ["golden", "even", "full2"] {
            let p = fixtures::by_name(name).unwrap();
            let roof = roof_one_plus_z1(&p);
            let s = suspend(&p, &roof).unwrap();
            for xi_word in s.presentation.words_of_length(2).into_iter().take(8) {
                let xi = CylFunction::indicator(&s.presentation, &xi_word).unwrap();
                for orbit in p.periodic_orbits_up_to(3) {
                    let lp = orbit.lp();
                    let mut base_sum = 0;
                    let mut x = orbit.clone();
                    for _ in 0..lp {
                        base_sum += iota_f_star_eval(&s, &xi, &x);
                        x = x.shift();
                    }
                    // suspension orbit of (orbit, 0)
                    let total_len: usize = (0..lp).map(|t| s.roof.eval(&orbit.shift_n(t))).sum();
                    let mut susp_sum = 0;
                    let mut cur = (orbit.clone(), 0usize);
                    for _ in 0..total_len {
                        susp_sum += xi.eval(&s.stream(&cur.0, cur.1));
                        cur = s.step(&cur.0, cur.1);
                    }
                    assert_eq!(base_sum, susp_sum, "{name}: orbit {orbit}");
                }
            }
        }
    }

    #[test]
    fn invariant_reports_of_intro_matrices() {
        use crate::presentation::{from_matrix, MatrixKind};
        let a = from_matrix(&fixtures::matrix_a(), MatrixKind::Edge).unwrap();
        let ap = from_matrix(&fixtures::matrix_a_prime(), MatrixKind::Edge).unwrap();
        let ra = invariant_report(&a).unwrap();
        assert!(ra.bowen_franks.is_trivial());
        assert_eq!(ra.bowen_franks.determinant, num_bigint::BigInt::from(-1));
        let rap = invariant_report(&ap).unwrap();
        assert!(rap.bowen_franks.is_trivial());
        assert_eq!(rap.bowen_franks.determinant, num_bigint::BigInt::from(1));
        match compare_flow_invariants(&a, &ap).unwrap() {
            FlowComparison::Distinguishable { reason } => {
                assert!(reason.contains("signs differ"), "{reason}");
            }
            FlowComparison::Inconclusive => panic!("intro matrices must be distinguished"),
        }
        // a presentation against itself is inconclusive
        assert!(matches!(
            compare_flow_invariants(&a, &a).unwrap(),
            FlowComparison::Inconclusive
        ));
    }

    #[test]
    fn single_fixed_point_invariants() {
        use crate::presentation::{from_matrix, MatrixKind, SftMatrix};
        let single =
            from_matrix(&SftMatrix::new(vec![vec![1]]).unwrap(), MatrixKind::Vertex).unwrap();
        let r = invariant_report(&single).unwrap();
        assert_eq!(r.bowen_franks.reduced(), (vec![], 1));
        assert_eq!(r.bowen_franks.determinant, num_bigint::BigInt::from(0));
        // not effective, so comparisons stay inconclusive
        assert!(matches!(
            compare_flow_invariants(&single, &single).unwrap(),
            FlowComparison::Inconclusive
        ));
    }

    #[test]
    fn bf_invariants_stable_under_suspension() {
        for name in ["golden", "full2", "even"] {
            let p = fixtures::by_name(name).unwrap();
            let base = invariant_report(&p).unwrap();
            for roof in [RoofFunction::constant(&p, 2).unwrap(), roof_one_plus_z1(&p)] {
                let s = suspend(&p, &roof).unwrap();
                let rep = invariant_report(&s.presentation).unwrap();
                assert!(
                    rep.bowen_franks.same_group(&base.bowen_franks),
                    "{name}: BF group must be suspension invariant"
                );
                assert_eq!(
                    det_sign(&rep.bowen_franks.determinant),
                    det_sign(&base.bowen_franks.determinant),
                    "{name}: det sign must be suspension invariant"
                );
            }
        }
    }

    #[test]
    fn kappa_intertwining_on_sampled_elements() {
        let even = fixtures::even().unwrap();
        let cover = build_cover(&even).unwrap();
        let roof = roof_one_plus_z1(&even);
        let susp = suspend(&even, &roof).unwrap();
        // suspension cochains of depth <= 2, a few indicators and a constant
        let mut xis: Vec<StabCylFunction> = Vec::new();
        xis.push(StabCylFunction::constant(&susp.presentation, 1));
        for w in susp.presentation.words_of_length(2).into_iter().take(4) {
            xis.push(StabCylFunction::level0(
                &susp.presentation,
                CylFunction::indicator(&susp.presentation, &w).unwrap(),
            ));
        }
        for x in even.eventually_periodic_points(1, 2) {
            for lift in cover.lift_point(&x).unwrap() {
                for (k, l, i, j) in [
                    (0usize, 0usize, 0usize, 0usize),
                    (1, 0, 0, 1),
                    (2, 1, 1, 2),
                    (0, 2, 2, 0),
                ] {
                    // arrange a valid meeting: shift^j target = shift^i source
                    let (target, source) = if j >= i {
                        (lift.clone(), lift.shift_n(j - i))
                    } else {
                        (lift.shift_n(i - j), lift.clone())
                    };
                    let el = StabElement::new(
                        &cover,
                        crate::stab::StabPoint {
                            point: target,
                            level: k,
                        },
                        j as i64 - i as i64,
                        crate::stab::StabPoint {
                            point: source,
                            level: l,
                        },
                        i,
                        j,
                    )
                    .unwrap();
                    for xi in &xis {
                        let lhs = crate::stab::kappa_stab_eval_fn(
                            &cover,
                            |bx, n| psi_star_eval(&susp, xi, bx, n),
                            &el,
                        );
                        let image = psi_f_map(&cover, &susp, &el).unwrap();
                        let rhs = kappa_susp_stab_eval(&cover, &susp, xi, &image);
                        assert_eq!(lhs, rhs, "intertwining failed");
                    }
                }
            }
        }
    }

    #[test]
    fn flow_certificate_identity() {
        let full2 = fixtures::full2().unwrap();
        let s1 = suspend(&full2, &RoofFunction::constant(&full2, 1).unwrap()).unwrap();
        let h = crate::relations::identity_map(&s1.presentation).unwrap();
        let rep = verify_flow_certificate(&s1, &s1, &h, Some(&h), 0).unwrap();
        assert_eq!(rep.verdict, Verdict::Pass);
    }
}
