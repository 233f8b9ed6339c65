//! The canonical cover of a sofic presentation as a finite labeled graph.
//!
//! Vertices are the predecessor-language classes realized by actual points;
//! an edge `(q, a, q')` records that the past of `a . tail` is `q` whenever
//! the past of `tail` is `q'`.  Points of the cover are the infinite paths;
//! the factor map reads edge labels.  Reading one symbol backward is
//! deterministic, which is what makes point lifting a finite computation.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::past::{self, PastAnalysis};
use crate::presentation::{Alphabet, Edge, EvPerPoint, Presentation, SymId, VertId, Word};

/// Index of a cover vertex.
pub type CovV = usize;

#[derive(Debug, Clone)]
pub struct CoverGraph {
    pub base: Presentation,
    /// The cover as a labeled graph over the base alphabet.
    pub graph: Presentation,
    /// Representative vertex set per cover vertex (smallest member of the
    /// language class).
    pub vertex_sets: Vec<BTreeSet<VertId>>,
    /// All realized vertex sets merged into each cover vertex.
    pub members: Vec<Vec<BTreeSet<VertId>>>,
    /// Eventually periodic witnesses whose past state is the cover vertex.
    pub witnesses: Vec<Vec<EvPerPoint>>,
    /// `pre_class[a][q']` is the unique source of an `a`-edge into `q'`.
    pub pre_class: Vec<Vec<Option<CovV>>>,
    pub analysis: PastAnalysis,
}

/// A point of the cover: an eventually periodic path, stored as the canonical
/// transient/cycle form of its (symbol, vertex) pair sequence.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CoverPoint {
    pub transient: Vec<(SymId, CovV)>,
    pub cycle: Vec<(SymId, CovV)>,
}

impl CoverPoint {
    pub fn new(transient: Vec<(SymId, CovV)>, cycle: Vec<(SymId, CovV)>) -> Self {
        let (t, c) = canonical_seq(transient, cycle);
        CoverPoint {
            transient: t,
            cycle: c,
        }
    }

    pub fn pair_at(&self, i: usize) -> (SymId, CovV) {
        if i < self.transient.len() {
            self.transient[i]
        } else {
            self.cycle[(i - self.transient.len()) % self.cycle.len()]
        }
    }

    pub fn base_point(&self) -> EvPerPoint {
        EvPerPoint::new(
            self.transient.iter().map(|&(a, _)| a).collect(),
            self.cycle.iter().map(|&(a, _)| a).collect(),
        )
    }

    pub fn state_at(&self, i: usize) -> CovV {
        self.pair_at(i).1
    }

    pub fn shift(&self) -> CoverPoint {
        if self.transient.is_empty() {
            let mut c = self.cycle.clone();
            c.rotate_left(1);
            CoverPoint::new(Vec::new(), c)
        } else {
            CoverPoint::new(self.transient[1..].to_vec(), self.cycle.clone())
        }
    }

    pub fn shift_n(&self, n: usize) -> CoverPoint {
        let mut p = self.clone();
        for _ in 0..n {
            p = p.shift();
        }
        p
    }

    pub fn render(&self, cover: &CoverGraph) -> String {
        let alph = &cover.base.alphabet;
        let part = |pairs: &[(SymId, CovV)]| -> String {
            pairs
                .iter()
                .map(|&(a, q)| format!("{}@{}", alph.symbol(a), q))
                .collect::<Vec<_>>()
                .join(" ")
        };
        format!("[{} | ({})^inf]", part(&self.transient), part(&self.cycle))
    }
}

fn canonical_seq<T: Clone + Eq>(mut t: Vec<T>, c: Vec<T>) -> (Vec<T>, Vec<T>) {
    assert!(!c.is_empty());
    // primitive root of the cycle
    let n = c.len();
    let mut alpha = c;
    for d in 1..n {
        if n.is_multiple_of(d) && (0..n).all(|i| alpha[i] == alpha[i % d]) {
            alpha.truncate(d);
            break;
        }
    }
    // absorb trailing cycle entries from the transient
    while let Some(last) = t.last() {
        if *last == *alpha.last().unwrap() {
            t.pop();
            alpha.rotate_right(1);
        } else {
            break;
        }
    }
    (t, alpha)
}

/// Build the cover of a presentation.
pub fn build_cover(p: &Presentation) -> Result<CoverGraph> {
    let an = past::analyze(p);
    // merge realized past states into language classes
    let mut class_members: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, &c) in an.language_class.iter().enumerate() {
        class_members.entry(c).or_default().push(i);
    }
    // cover vertex order: by smallest member set, for deterministic output
    let mut classes: Vec<(BTreeSet<VertId>, Vec<usize>)> = class_members
        .into_values()
        .map(|members| {
            let rep = members
                .iter()
                .map(|&i| an.realized[i].clone())
                .min_by_key(|s| (s.len(), s.clone()))
                .unwrap();
            (rep, members)
        })
        .collect();
    classes.sort_by(|a, b| (a.0.len(), &a.0).cmp(&(b.0.len(), &b.0)));
    let class_of_state: HashMap<usize, CovV> = classes
        .iter()
        .enumerate()
        .flat_map(|(q, (_, members))| members.iter().map(move |&m| (m, q)))
        .collect();

    let nq = classes.len();
    let mut pre_class: Vec<Vec<Option<CovV>>> = vec![vec![None; nq]; p.alphabet.len()];
    let mut edges = Vec::new();
    for (qp, (_, members)) in classes.iter().enumerate() {
        for a in p.alphabet.ids() {
            let mut images = BTreeSet::new();
            for &m in members {
                images.insert(an.pre[a][m].map(|t| class_of_state[&t]));
            }
            assert_eq!(images.len(), 1, "pre map must respect language classes");
            if let Some(Some(q)) = images.into_iter().next() {
                edges.push(Edge {
                    from: q,
                    label: a,
                    to: qp,
                });
                pre_class[a][qp] = Some(q);
            }
        }
    }

    let names: Vec<String> = classes
        .iter()
        .map(|(rep, _)| {
            let inner: Vec<&str> = rep.iter().map(|&v| p.vertices[v].as_str()).collect();
            format!("{{{}}}", inner.join(","))
        })
        .collect();
    let graph = Presentation::new(p.alphabet.clone(), names, edges)?;
    assert_eq!(
        graph.vertex_count(),
        nq,
        "every cover vertex carries an infinite path"
    );

    let witnesses: Vec<Vec<EvPerPoint>> = classes
        .iter()
        .map(|(_, members)| {
            let mut w = Vec::new();
            for &m in members {
                for x in &an.witnesses[m] {
                    if !w.contains(x) {
                        w.push(x.clone());
                    }
                }
            }
            w
        })
        .collect();

    Ok(CoverGraph {
        base: p.clone(),
        graph,
        vertex_sets: classes.iter().map(|(rep, _)| rep.clone()).collect(),
        members: classes
            .into_iter()
            .map(|(_, members)| members.iter().map(|&m| an.realized[m].clone()).collect())
            .collect(),
        witnesses,
        pre_class,
        analysis: an,
    })
}

impl CoverGraph {
    pub fn vertex_count(&self) -> usize {
        self.vertex_sets.len()
    }

    /// Cover vertex of an eventually periodic tail.
    pub fn class_of_point(&self, x: &EvPerPoint) -> Result<CovV> {
        let set = past::vertex_set_of(&self.base, x)?;
        let idx = self.analysis.state_index(&set).unwrap();
        Ok(self
            .members
            .iter()
            .position(|m| m.contains(&self.analysis.realized[idx]))
            .unwrap())
    }

    /// The canonical lift: states are the past states of the successive tails.
    pub fn iota(&self, x: &EvPerPoint) -> Result<CoverPoint> {
        if !self.base.point_admissible(x) {
            return Err(Error::PointNotAdmissible(x.render(&self.base.alphabet)));
        }
        let t = x.transient.len();
        let c = x.cycle.len();
        let mut pairs = Vec::new();
        let mut tail = x.clone();
        for _ in 0..t + c {
            let q = self.class_of_point(&tail)?;
            pairs.push((tail.symbol_at(0), q));
            tail = tail.shift();
        }
        let cycle = pairs.split_off(t);
        Ok(CoverPoint::new(pairs, cycle))
    }

    /// Base point of a cover point.
    pub fn factor_image(&self, pt: &CoverPoint) -> EvPerPoint {
        pt.base_point()
    }

    /// Verify the backward compatibility of a cover point.
    pub fn validate_point(&self, pt: &CoverPoint) -> Result<()> {
        let t = pt.transient.len();
        let c = pt.cycle.len();
        for i in 0..t + c {
            let (a, q) = pt.pair_at(i);
            let (_, qn) = pt.pair_at(i + 1);
            if self.pre_class[a][qn] != Some(q) {
                return Err(Error::BadGroupoidElement(format!(
                    "state {} does not precede state {} under symbol {}",
                    q,
                    qn,
                    self.base.alphabet.symbol(a)
                )));
            }
        }
        Ok(())
    }

    /// All eventually periodic cover points over `x`.
    ///
    /// Backward determinism forces the state sequence onto a cycle of the
    /// phase graph over the periodic tail, so the lift set is finite: one lift
    /// per phase-0 cycle node whose backward extension through the transient
    /// survives.
    pub fn lift_point(&self, x: &EvPerPoint) -> Result<Vec<CoverPoint>> {
        if !self.base.point_admissible(x) {
            return Err(Error::PointNotAdmissible(x.render(&self.base.alphabet)));
        }
        let alpha = &x.cycle;
        let period = alpha.len();
        let nq = self.vertex_count();
        // backward step in the phase graph: phase p node came from phase p-1
        let bwd = |phase: usize, q: CovV| -> Option<(usize, CovV)> {
            let prev_phase = (phase + period - 1) % period;
            self.pre_class[alpha[prev_phase]][q].map(|qp| (prev_phase, qp))
        };
        let mut lifts = BTreeSet::new();
        for q0 in 0..nq {
            // detect whether (0, q0) lies on a backward cycle
            let mut node = (0usize, q0);
            let mut on_cycle = false;
            for _ in 0..period * nq {
                match bwd(node.0, node.1) {
                    Some(n) => node = n,
                    None => break,
                }
                if node == (0, q0) {
                    on_cycle = true;
                    break;
                }
            }
            if !on_cycle {
                continue;
            }
            // read the cycle forward from (0, q0): the backward walk lists
            // positions m-1, m-2, ..., 1, so reverse and put q0 first
            let mut cyc_states = Vec::new();
            let mut cur = (0usize, q0);
            loop {
                cur = bwd(cur.0, cur.1).unwrap();
                if cur == (0, q0) {
                    break;
                }
                cyc_states.push(cur.1);
            }
            cyc_states.reverse();
            cyc_states.insert(0, q0);
            // states for positions |mu| .. |mu|+m-1 with labels alpha^inf
            let m = cyc_states.len();
            let cycle_pairs: Vec<(SymId, CovV)> =
                (0..m).map(|i| (alpha[i % period], cyc_states[i])).collect();
            // extend backward through the transient
            let mut states_rev = Vec::new();
            let mut q = q0;
            let mut ok = true;
            for &a in x.transient.iter().rev() {
                match self.pre_class[a][q] {
                    Some(qp) => {
                        states_rev.push(qp);
                        q = qp;
                    }
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if !ok {
                continue;
            }
            states_rev.reverse();
            let transient_pairs: Vec<(SymId, CovV)> = x
                .transient
                .iter()
                .zip(states_rev.iter())
                .map(|(&a, &q)| (a, q))
                .collect();
            lifts.insert(CoverPoint::new(transient_pairs, cycle_pairs));
        }
        Ok(lifts.into_iter().collect())
    }

    /// Drop the first coordinate.
    pub fn shift_cover(&self, pt: &CoverPoint) -> CoverPoint {
        pt.shift()
    }

    /// Vertices from which the infinite continuation is forced (every vertex
    /// reachable from them has exactly one outgoing edge).
    pub fn forced_region(&self) -> BTreeSet<CovV> {
        let n = self.vertex_count();
        let out_deg: Vec<usize> = (0..n).map(|q| self.graph.out_edges(q).len()).collect();
        let mut bad: Vec<bool> = out_deg.iter().map(|&d| d >= 2).collect();
        // propagate badness backward along edges
        loop {
            let mut changed = false;
            for e in &self.graph.edges {
                if bad[e.to] && !bad[e.from] {
                    bad[e.from] = true;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        (0..n).filter(|&q| !bad[q]).collect()
    }

    /// A sample base point whose canonical lift is isolated, if any.
    pub fn forced_region_sample(&self, forced: &BTreeSet<CovV>) -> Option<EvPerPoint> {
        let q = *forced.iter().next()?;
        Some(self.forced_walk(q))
    }

    /// A periodic point whose lift is an isolated periodic cover point, if the
    /// forced region is nonempty (it then always closes into a cycle).
    pub fn forced_cycle(&self, forced: &BTreeSet<CovV>) -> Option<EvPerPoint> {
        let &q0 = forced.iter().next()?;
        // follow unique successors until a repeat
        let mut seen = BTreeMap::new();
        let mut q = q0;
        let mut labels = Vec::new();
        loop {
            if let Some(&at) = seen.get(&q) {
                let cycle: Word = labels[at..].to_vec();
                return Some(EvPerPoint::new(Vec::new(), cycle));
            }
            seen.insert(q, labels.len());
            let e = self.graph.out_edges(q)[0];
            labels.push(e.label);
            q = e.to;
        }
    }

    fn forced_walk(&self, q0: CovV) -> EvPerPoint {
        let mut seen = BTreeMap::new();
        let mut q = q0;
        let mut labels = Vec::new();
        loop {
            if let Some(&at) = seen.get(&q) {
                let cycle: Word = labels[at..].to_vec();
                let transient: Word = labels[..at].to_vec();
                return EvPerPoint::new(transient, cycle);
            }
            seen.insert(q, labels.len());
            let e = self.graph.out_edges(q)[0];
            labels.push(e.label);
            q = e.to;
        }
    }

    /// Is a cover point isolated (its path enters the forced region)?
    pub fn is_isolated_point(&self, pt: &CoverPoint) -> bool {
        let forced = self.forced_region();
        pt.transient
            .iter()
            .chain(pt.cycle.iter())
            .any(|&(_, q)| forced.contains(&q))
    }

    /// Isolated eventually periodic cover points with transient length at
    /// most `transient_bound`.
    pub fn isolated_points(&self, transient_bound: usize) -> Vec<CoverPoint> {
        let forced = self.forced_region();
        let mut out = BTreeSet::new();
        // purely forced continuations from every forced vertex
        for &q in &forced {
            let x = self.forced_walk(q);
            for lift in self.lift_point(&x).unwrap() {
                if lift.state_at(0) == q {
                    out.insert(lift);
                }
            }
        }
        // bounded approaches into the forced region
        let mut frontier: Vec<Vec<(SymId, CovV)>> =
            forced.iter().map(|&q| vec![(usize::MAX, q)]).collect();
        for _ in 0..transient_bound {
            let mut next = Vec::new();
            for path in &frontier {
                let (_, first) = path[0];
                for e in &self.graph.edges {
                    if e.to == first {
                        let mut p2 = vec![(e.label, e.from)];
                        p2.extend_from_slice(path);
                        next.push(p2);
                    }
                }
            }
            for path in &next {
                // path = approach pairs ending at a forced vertex
                let entry = path.last().unwrap().1;
                let tail = self.forced_walk(entry);
                let approach: Vec<SymId> = path[..path.len() - 1].iter().map(|&(a, _)| a).collect();
                let mut full_transient = approach;
                full_transient.extend(tail.transient.iter());
                let x = EvPerPoint::new(full_transient, tail.cycle.clone());
                for lift in self.lift_point(&x).unwrap() {
                    if self.is_isolated_point(&lift) {
                        out.insert(lift);
                    }
                }
            }
            frontier = next;
        }
        out.into_iter().collect()
    }

    /// The cover as an edge shift: same graph, distinct edge labels.
    pub fn as_edge_presentation(&self) -> Presentation {
        let mut edges: Vec<&Edge> = self.graph.edges.iter().collect();
        edges.sort();
        let labels: Vec<String> = edges
            .iter()
            .enumerate()
            .map(|(i, e)| {
                format!(
                    "e{}[{}:{}->{}]",
                    i,
                    self.base.alphabet.symbol(e.label),
                    e.from,
                    e.to
                )
            })
            .collect();
        let alph = Alphabet::new(labels).unwrap();
        let new_edges = edges
            .iter()
            .enumerate()
            .map(|(i, e)| Edge {
                from: e.from,
                label: i,
                to: e.to,
            })
            .collect();
        Presentation::new(alph, self.graph.vertices.clone(), new_edges).unwrap()
    }

    /// Adjacency matrix of the cover graph.
    pub fn adjacency(&self) -> Vec<Vec<u64>> {
        self.graph.adjacency()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iso::graph_isomorphic;
    use crate::presentation::fixtures;

    fn pt(p: &Presentation, mu: &str, alpha: &str) -> EvPerPoint {
        EvPerPoint::parse(&p.alphabet, mu, alpha).unwrap()
    }

    #[test]
    fn cover_of_even_is_graph_e() {
        let even = fixtures::even().unwrap();
        let cov = build_cover(&even).unwrap();
        assert_eq!(cov.vertex_count(), 3);
        let e = fixtures::graph_e().unwrap();
        let iso = graph_isomorphic(&cov.as_edge_presentation(), &e);
        assert!(iso.is_some(), "cover(even) must match E up to edge naming");
        // and the labeled cover graph matches the three-vertex presentation
        let even3 = fixtures::even3().unwrap();
        assert!(graph_isomorphic(&cov.graph, &even3).is_some());
    }

    #[test]
    fn cover_of_odd_is_graph_f() {
        let odd = fixtures::odd().unwrap();
        let cov = build_cover(&odd).unwrap();
        assert_eq!(cov.vertex_count(), 3);
        let f = fixtures::graph_f().unwrap();
        assert!(graph_isomorphic(&cov.as_edge_presentation(), &f).is_some());
        let odd3 = fixtures::odd3().unwrap();
        assert!(graph_isomorphic(&cov.graph, &odd3).is_some());
    }

    #[test]
    fn cover_is_presentation_independent() {
        let c2 = build_cover(&fixtures::even().unwrap()).unwrap();
        let c3 = build_cover(&fixtures::even3().unwrap()).unwrap();
        assert!(graph_isomorphic(&c2.graph, &c3.graph).is_some());
    }

    #[test]
    fn cover_of_golden_has_bijective_factor_map() {
        let golden = fixtures::golden().unwrap();
        let cov = build_cover(&golden).unwrap();
        assert_eq!(cov.vertex_count(), 2);
        // same underlying multigraph as the presentation
        assert!(crate::iso::multigraph_isomorphic(&cov.graph, &golden).is_some());
        // lifts are singletons
        for x in golden.eventually_periodic_points(3, 3) {
            let lifts = cov.lift_point(&x).unwrap();
            assert_eq!(lifts.len(), 1, "SFT lift of {x} must be unique");
            assert_eq!(cov.factor_image(&lifts[0]), x);
            assert_eq!(cov.iota(&x).unwrap(), lifts[0]);
        }
    }

    #[test]
    fn cover_of_cover_is_cover_for_sft() {
        let golden = fixtures::golden().unwrap();
        let cov = build_cover(&golden).unwrap();
        let edge = cov.as_edge_presentation();
        let cov2 = build_cover(&edge).unwrap();
        assert!(graph_isomorphic(&cov2.as_edge_presentation(), &edge).is_some());
        let full2 = fixtures::full2().unwrap();
        let cov = build_cover(&full2).unwrap();
        assert!(graph_isomorphic(&cov.graph, &full2).is_some());
    }

    #[test]
    fn lifts_of_zero_point_in_even_cover() {
        let even = fixtures::even().unwrap();
        let cov = build_cover(&even).unwrap();
        let x = pt(&even, "", "0");
        let lifts = cov.lift_point(&x).unwrap();
        // the canonical lift on the all-vertices loop plus the two phases of
        // the backward 2-cycle
        assert_eq!(lifts.len(), 3);
        let iota = cov.iota(&x).unwrap();
        assert!(lifts.contains(&iota));
        assert_eq!(iota.cycle.len(), 1);
        let mut period2 = 0;
        for l in &lifts {
            assert_eq!(cov.factor_image(l), x);
            if l.cycle.len() == 2 {
                period2 += 1;
            }
        }
        assert_eq!(period2, 2);
        // shifting a 2-cycle lift stays on the 2-cycle
        let two = lifts.iter().find(|l| l.cycle.len() == 2).unwrap();
        let shifted = cov.shift_cover(two);
        assert_eq!(shifted.cycle.len(), 2);
        assert!(lifts.contains(&shifted));
        // the fixed lift is fixed
        assert_eq!(cov.shift_cover(&iota), iota);
    }

    #[test]
    fn intertwining_and_merge_bound() {
        for name in ["even", "odd", "golden", "full2"] {
            let p = fixtures::by_name(name).unwrap();
            let cov = build_cover(&p).unwrap();
            for x in p.eventually_periodic_points(2, 3) {
                if x.transient.len() + x.cycle.len() > 6 {
                    continue;
                }
                let lifts = cov.lift_point(&x).unwrap();
                for l in &lifts {
                    cov.validate_point(l).unwrap();
                    // pi . shift = shift . pi
                    assert_eq!(cov.factor_image(&cov.shift_cover(l)), x.shift());
                }
                // lifts that agree after k shifts are equal
                for a in &lifts {
                    for b in &lifts {
                        for k in 0..=4usize {
                            if a.shift_n(k) == b.shift_n(k) {
                                assert_eq!(a, b);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn isolated_points_of_covers() {
        let even = fixtures::even().unwrap();
        let cov = build_cover(&even).unwrap();
        let x = pt(&even, "", "0");
        let iota = cov.iota(&x).unwrap();
        assert!(cov.is_isolated_point(&iota));
        let isolated = cov.isolated_points(1);
        assert!(isolated.contains(&iota));
        // non-canonical lifts of 0^inf are not isolated
        for l in cov.lift_point(&x).unwrap() {
            if l != iota {
                assert!(!cov.is_isolated_point(&l));
            }
        }

        let full2 = fixtures::full2().unwrap();
        let cov2 = build_cover(&full2).unwrap();
        assert!(cov2.forced_region().is_empty());
        assert!(cov2.isolated_points(2).is_empty());
    }

    #[test]
    fn cover_vertex_count_matches_past_classes() {
        for name in ["even", "odd", "golden", "full2", "Eprime", "Fprime"] {
            let p = fixtures::by_name(name).unwrap();
            let cov = build_cover(&p).unwrap();
            let distinct: BTreeSet<usize> = cov.analysis.language_class.iter().copied().collect();
            assert_eq!(cov.vertex_count(), distinct.len());
        }
    }
}
