//! Predecessor sets, past equivalence at every depth, isolation in past
//! equivalence and the groupoid classification flags.
//!
//! The predecessor language of a point is represented by the set of vertices
//! the point is readable from.  The finitely many vertex sets realized by
//! actual points are computed once per presentation and reused by the cover
//! construction, the depth-`l` partitions and the isolation tests.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::presentation::{EvPerPoint, Presentation, SymId, VertId, Word};

/// Canonical finite representation of the predecessor language of a point:
/// the set of vertices the point is readable from, plus the id of its
/// predecessor-language class (two states are the same past iff their
/// predecessor languages agree, which is decided by partition refinement,
/// not by raw subset equality).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PastState {
    pub vertex_set: BTreeSet<VertId>,
    pub language_class: usize,
}

/// Everything derived from the realized past states of one presentation.
#[derive(Debug, Clone)]
pub struct PastAnalysis {
    /// Realized past states (vertex sets of actual points), sorted.
    pub realized: Vec<BTreeSet<VertId>>,
    /// Eventually periodic witnesses per realized state (`V(witness) = state`).
    pub witnesses: Vec<Vec<EvPerPoint>>,
    /// `pre[a][i]`: index of the realized state `pre_a(realized[i])`, or
    /// `None` when that set is empty.
    pub pre: Vec<Vec<Option<usize>>>,
    /// `partitions[l][i]` is the depth-`l` past-equivalence block of state `i`;
    /// the list ends at the stabilization depth.
    pub partitions: Vec<Vec<usize>>,
    /// Stable (full predecessor language) class of each realized state.
    pub language_class: Vec<usize>,
}

impl PastAnalysis {
    pub fn stabilization_depth(&self) -> usize {
        self.partitions.len() - 1
    }

    pub fn state_index(&self, set: &BTreeSet<VertId>) -> Option<usize> {
        self.realized.iter().position(|s| s == set)
    }

    /// Depth-`l` block id of a realized state (depths beyond stabilization
    /// coincide with the stable partition).
    pub fn block_at(&self, l: usize, state: usize) -> usize {
        let l = l.min(self.stabilization_depth());
        self.partitions[l][state]
    }
}

fn vertex_mask(set: &BTreeSet<VertId>) -> u64 {
    set.iter().fold(0u64, |m, &v| m | (1 << v))
}

fn mask_to_set(mask: u64, n: usize) -> BTreeSet<VertId> {
    (0..n).filter(|&v| mask & (1 << v) != 0).collect()
}

/// Compute the realized past states of a presentation together with
/// eventually periodic witnesses.
///
/// The search walks the transformation monoid generated by the per-symbol
/// predecessor maps: the state reached after a word `w` is the tuple
/// `v -> pre_w({v})`, and the past state of a point is the stabilized value of
/// `pre_prefix(all vertices)`, which is constant exactly on the strongly
/// connected components of this walk.
pub fn analyze(p: &Presentation) -> PastAnalysis {
    let n = p.vertex_count();
    assert!(
        n <= 32,
        "past analysis is sized for desk-scale presentations"
    );
    // pre_single[a][v] = mask of vertices with an a-edge into v
    let mut pre_single = vec![vec![0u64; n]; p.alphabet.len()];
    for e in &p.edges {
        pre_single[e.label][e.to] |= 1 << e.from;
    }

    // tracker states: tuple (pre_w({v}))_v, transitions compose on the inside
    type Tuple = Vec<u64>;
    let start: Tuple = (0..n).map(|v| 1u64 << v).collect();
    let mut ids: HashMap<Tuple, usize> = HashMap::new();
    let mut states: Vec<Tuple> = vec![start.clone()];
    let mut trans: Vec<Vec<Option<(SymId, usize)>>> = Vec::new();
    ids.insert(start, 0);
    let mut i = 0;
    while i < states.len() {
        let cur = states[i].clone();
        let mut row = Vec::new();
        for a in p.alphabet.ids() {
            let mut next: Tuple = vec![0; n];
            for v in 0..n {
                let mut acc = 0u64;
                let mut pv = pre_single[a][v];
                while pv != 0 {
                    let u = pv.trailing_zeros() as usize;
                    pv &= pv - 1;
                    acc |= cur[u];
                }
                next[v] = acc;
            }
            if next.iter().all(|&m| m == 0) {
                row.push(None);
                continue;
            }
            let id = *ids.entry(next.clone()).or_insert_with(|| {
                states.push(next.clone());
                states.len() - 1
            });
            row.push(Some((a, id)));
            assert!(
                states.len() <= 200_000,
                "tracker exploration exceeded bound"
            );
        }
        trans.push(row);
        i += 1;
    }

    // strongly connected components of the tracker graph
    let succ: Vec<Vec<usize>> = trans
        .iter()
        .map(|row| row.iter().flatten().map(|&(_, t)| t).collect())
        .collect();
    let scc = tarjan_scc(&succ);
    // an SCC is cyclic if it has an internal edge
    let mut cyclic = vec![false; scc.comp_count];
    for (s, row) in succ.iter().enumerate() {
        for &t in row {
            if scc.comp[s] == scc.comp[t] {
                cyclic[scc.comp[s]] = true;
            }
        }
    }

    // realized values: union over the tuple, collected on cyclic SCCs
    let mut realized_sets: BTreeSet<BTreeSet<VertId>> = BTreeSet::new();
    for (s, tuple) in states.iter().enumerate() {
        if cyclic[scc.comp[s]] {
            let all: u64 = tuple.iter().fold(0, |m, &x| m | x);
            realized_sets.insert(mask_to_set(all, n));
        }
    }
    let realized: Vec<BTreeSet<VertId>> = realized_sets.into_iter().collect();
    let index: HashMap<BTreeSet<VertId>, usize> = realized
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, s)| (s, i))
        .collect();

    // witnesses: for each tracker state on a cyclic SCC, a transient word
    // (path from the start) and a cycle word (loop inside the SCC)
    let mut witnesses: Vec<Vec<EvPerPoint>> = vec![Vec::new(); realized.len()];
    let path_from_start = bfs_words(&trans, states.len());
    for (s, tuple) in states.iter().enumerate() {
        if !cyclic[scc.comp[s]] {
            continue;
        }
        let all: u64 = tuple.iter().fold(0, |m, &x| m | x);
        let ridx = index[&mask_to_set(all, n)];
        if witnesses[ridx].len() >= 3 {
            continue;
        }
        if let (Some(mu), Some(alpha)) = (&path_from_start[s], cycle_word(&trans, &scc, s)) {
            let x = EvPerPoint::new(mu.clone(), alpha);
            if !witnesses[ridx].contains(&x) {
                witnesses[ridx].push(x);
            }
        }
    }
    for (i, w) in witnesses.iter().enumerate() {
        assert!(
            !w.is_empty(),
            "realized state {:?} must have a witness",
            realized[i]
        );
    }

    // predecessor map on realized states
    let mut pre: Vec<Vec<Option<usize>>> = vec![vec![None; realized.len()]; p.alphabet.len()];
    for (i, set) in realized.iter().enumerate() {
        for a in p.alphabet.ids() {
            let pa = p.pre(set, a);
            if pa.is_empty() {
                continue;
            }
            let j = *index
                .get(&pa)
                .unwrap_or_else(|| panic!("pre_a of a realized state must be realized"));
            pre[a][i] = Some(j);
        }
    }

    // depth partitions by refinement: two states are depth-(l+1) equivalent
    // iff they are depth-l equivalent and their pre_a images are depth-l
    // equivalent for every symbol
    let m = realized.len();
    let mut partitions: Vec<Vec<usize>> = vec![vec![0; m]];
    loop {
        let prev = partitions.last().unwrap().clone();
        let mut sig: HashMap<(usize, Vec<Option<usize>>), usize> = HashMap::new();
        let mut next = vec![0; m];
        for s in 0..m {
            let key: Vec<Option<usize>> = (0..p.alphabet.len())
                .map(|a| pre[a][s].map(|t| prev[t]))
                .collect();
            let fresh = sig.len();
            next[s] = *sig.entry((prev[s], key)).or_insert(fresh);
        }
        if next == prev {
            break;
        }
        partitions.push(next);
        assert!(
            partitions.len() <= m + 1,
            "stabilization depth exceeds the past-state count"
        );
    }
    let language_class = partitions.last().unwrap().clone();

    PastAnalysis {
        realized,
        witnesses,
        pre,
        partitions,
        language_class,
    }
}

struct Scc {
    comp: Vec<usize>,
    comp_count: usize,
}

fn tarjan_scc(succ: &[Vec<usize>]) -> Scc {
    // iterative Tarjan
    let n = succ.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comp = vec![usize::MAX; n];
    let mut counter = 0usize;
    let mut comp_count = 0usize;
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        while let Some(&mut (v, ref mut ei)) = call.last_mut() {
            if *ei == 0 {
                index[v] = counter;
                low[v] = counter;
                counter += 1;
                stack.push(v);
                on_stack[v] = true;
            }
            if *ei < succ[v].len() {
                let w = succ[v][*ei];
                *ei += 1;
                if index[w] == usize::MAX {
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                if low[v] == index[v] {
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w] = false;
                        comp[w] = comp_count;
                        if w == v {
                            break;
                        }
                    }
                    comp_count += 1;
                }
                let child = v;
                call.pop();
                if let Some(&mut (parent, _)) = call.last_mut() {
                    low[parent] = low[parent].min(low[child]);
                }
            }
        }
    }
    Scc { comp, comp_count }
}

fn bfs_words(trans: &[Vec<Option<(SymId, usize)>>], n: usize) -> Vec<Option<Word>> {
    let mut words: Vec<Option<Word>> = vec![None; n];
    words[0] = Some(Vec::new());
    let mut queue = std::collections::VecDeque::from([0usize]);
    while let Some(s) = queue.pop_front() {
        let base = words[s].clone().unwrap();
        for entry in trans[s].iter().flatten() {
            let (a, t) = *entry;
            if words[t].is_none() {
                let mut w = base.clone();
                w.push(a);
                words[t] = Some(w);
                queue.push_back(t);
            }
        }
    }
    words
}

fn cycle_word(trans: &[Vec<Option<(SymId, usize)>>], scc: &Scc, s: usize) -> Option<Word> {
    // shortest loop from s back to s staying inside its SCC
    let target = s;
    let mut best: Option<Word> = None;
    let mut queue = std::collections::VecDeque::new();
    let mut seen: HashMap<usize, Word> = HashMap::new();
    for entry in trans[s].iter().flatten() {
        let (a, t) = *entry;
        if scc.comp[t] != scc.comp[s] {
            continue;
        }
        if t == target {
            return Some(vec![a]);
        }
        if let std::collections::hash_map::Entry::Vacant(e) = seen.entry(t) {
            e.insert(vec![a]);
            queue.push_back(t);
        }
    }
    while let Some(u) = queue.pop_front() {
        let base = seen[&u].clone();
        for entry in trans[u].iter().flatten() {
            let (a, t) = *entry;
            if scc.comp[t] != scc.comp[s] {
                continue;
            }
            let mut w = base.clone();
            w.push(a);
            if t == target {
                if best.is_none() {
                    best = Some(w);
                }
                continue;
            }
            if let std::collections::hash_map::Entry::Vacant(e) = seen.entry(t) {
                e.insert(w);
                queue.push_back(t);
            }
        }
    }
    best
}

/// The set of vertices an eventually periodic point is readable from.
pub fn vertex_set_of(p: &Presentation, x: &EvPerPoint) -> Result<BTreeSet<VertId>> {
    if !p.point_admissible(x) {
        return Err(Error::PointNotAdmissible(x.render(&p.alphabet)));
    }
    // greatest fixpoint of pre_alpha from all vertices, then pull back mu
    let mut w = p.all_vertices();
    loop {
        let next = p.pre_word(&w, &x.cycle);
        if next == w {
            break;
        }
        w = next;
    }
    Ok(p.pre_word(&w, &x.transient))
}

/// Full past state of a point, with its language class.
pub fn past_state(p: &Presentation, an: &PastAnalysis, x: &EvPerPoint) -> Result<PastState> {
    let set = vertex_set_of(p, x)?;
    let idx = an
        .state_index(&set)
        .unwrap_or_else(|| panic!("past state of an admissible point must be realized"));
    Ok(PastState {
        vertex_set: set,
        language_class: an.language_class[idx],
    })
}

/// Exactly the admissible length-`l` words with a path ending in the state.
pub fn predecessor_words(p: &Presentation, state: &PastState, l: usize) -> Vec<Word> {
    let mut words: Vec<(Word, BTreeSet<VertId>)> = vec![(Vec::new(), state.vertex_set.clone())];
    for _ in 0..l {
        let mut next = Vec::new();
        for (w, set) in &words {
            for a in p.alphabet.ids() {
                let pa = p.pre(set, a);
                if !pa.is_empty() {
                    let mut w2 = vec![a];
                    w2.extend_from_slice(w);
                    next.push((w2, pa));
                }
            }
        }
        words = next;
    }
    let mut out: Vec<Word> = words.into_iter().map(|(w, _)| w).collect();
    out.sort();
    out.dedup();
    out
}

/// Union of predecessor words of lengths `0..=l`.
pub fn truncated_past(p: &Presentation, state: &PastState, l: usize) -> BTreeSet<Word> {
    let mut out = BTreeSet::new();
    for ll in 0..=l {
        out.extend(predecessor_words(p, state, ll));
    }
    out
}

/// One block of the depth-`l` past-equivalence partition.
#[derive(Debug, Clone)]
pub struct PartitionBlock {
    pub states: Vec<BTreeSet<VertId>>,
    pub representative: EvPerPoint,
}

/// Partition the realized past states by equality of truncated predecessor
/// languages to depth `l`.
pub fn l_past_partition(an: &PastAnalysis, l: usize) -> Vec<PartitionBlock> {
    let part = &an.partitions[l.min(an.stabilization_depth())];
    let mut blocks: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (s, &b) in part.iter().enumerate() {
        blocks.entry(b).or_default().push(s);
    }
    blocks
        .into_values()
        .map(|states| PartitionBlock {
            representative: an.witnesses[states[0]][0].clone(),
            states: states.into_iter().map(|s| an.realized[s].clone()).collect(),
        })
        .collect()
}

/// Depth-(k,l) equivalence of two eventually periodic points: equal length-k
/// prefixes and equal depth-l truncated pasts of the shifted tails.
pub fn kl_equivalent(
    p: &Presentation,
    an: &PastAnalysis,
    x: &EvPerPoint,
    y: &EvPerPoint,
    k: usize,
    l: usize,
) -> Result<bool> {
    if x.prefix(k) != y.prefix(k) {
        return Ok(false);
    }
    let sx = vertex_set_of(p, &x.shift_n(k))?;
    let sy = vertex_set_of(p, &y.shift_n(k))?;
    let ix = an.state_index(&sx).unwrap();
    let iy = an.state_index(&sy).unwrap();
    Ok(an.block_at(l, ix) == an.block_at(l, iy))
}

// ---------------------------------------------------------------------------
// counting points with a prescribed past state
// ---------------------------------------------------------------------------

/// Count (saturated at 2) the points whose readable-from vertex set is
/// exactly one of `targets`, and return one such point if it is unique.
///
/// Runs a deterministic tracker whose state records, per start vertex, the
/// endpoints of paths reading the input so far.  A point qualifies iff the
/// components of the target set stay alive forever and all other components
/// eventually die.
fn count_points_with_vertex_set(p: &Presentation, targets: &[BTreeSet<VertId>]) -> usize {
    let mut total = 0usize;
    for t in targets {
        total += count_points_single(p, t);
        if total >= 2 {
            return 2;
        }
    }
    total
}

fn count_points_single(p: &Presentation, target: &BTreeSet<VertId>) -> usize {
    let n = p.vertex_count();
    let tmask = vertex_mask(target);
    let mut post_single = vec![vec![0u64; n]; p.alphabet.len()];
    for e in &p.edges {
        post_single[e.label][e.from] |= 1 << e.to;
    }
    type Tuple = Vec<u64>;
    let step = |tup: &Tuple, a: SymId| -> Tuple {
        tup.iter()
            .map(|&mask| {
                let mut acc = 0u64;
                let mut m = mask;
                while m != 0 {
                    let v = m.trailing_zeros() as usize;
                    m &= m - 1;
                    acc |= post_single[a][v];
                }
                acc
            })
            .collect()
    };
    let start: Tuple = (0..n).map(|v| 1u64 << v).collect();
    // explore reachable tracker states with live target components
    let alive_ok = |tup: &Tuple| -> bool { (0..n).all(|v| tmask & (1 << v) == 0 || tup[v] != 0) };
    if !alive_ok(&start) {
        return 0;
    }
    let mut ids: HashMap<Tuple, usize> = HashMap::new();
    let mut states = vec![start.clone()];
    ids.insert(start, 0);
    let mut trans: Vec<Vec<Option<usize>>> = Vec::new();
    let mut i = 0;
    while i < states.len() {
        let cur = states[i].clone();
        let mut row = Vec::new();
        for a in p.alphabet.ids() {
            let nxt = step(&cur, a);
            if !alive_ok(&nxt) || nxt.iter().all(|&m| m == 0) {
                row.push(None);
                continue;
            }
            let id = *ids.entry(nxt.clone()).or_insert_with(|| {
                states.push(nxt.clone());
                states.len() - 1
            });
            row.push(Some(id));
            assert!(
                states.len() <= 500_000,
                "tracker exploration exceeded bound"
            );
        }
        trans.push(row);
        i += 1;
    }
    let m = states.len();
    // viable: an infinite run with target components alive exists
    let mut viable = vec![true; m];
    loop {
        let mut changed = false;
        for s in 0..m {
            if viable[s]
                && !trans[s]
                    .iter()
                    .any(|t| matches!(t, Some(id) if viable[*id]))
            {
                viable[s] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    if !viable[0] {
        return 0;
    }
    // in-target: every non-target component already dead
    let in_target =
        |s: usize| -> bool { (0..n).all(|v| tmask & (1 << v) != 0 || states[s][v] == 0) };
    // productive: viable and can reach an in-target viable state
    let mut productive = vec![false; m];
    for s in 0..m {
        productive[s] = viable[s] && in_target(s);
    }
    loop {
        let mut changed = false;
        for s in 0..m {
            if viable[s]
                && !productive[s]
                && trans[s]
                    .iter()
                    .any(|t| matches!(t, Some(id) if productive[*id]))
            {
                productive[s] = true;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    if !productive[0] {
        return 0;
    }
    // count accepted runs with saturation at 2, via DFS with cycle detection
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        White,
        InProgress,
        Done(usize),
    }
    fn run_count(
        s: usize,
        trans: &[Vec<Option<usize>>],
        viable: &[bool],
        productive: &[bool],
        in_target: &dyn Fn(usize) -> bool,
        marks: &mut Vec<Mark>,
    ) -> usize {
        if in_target(s) {
            // inside the target region: count viable runs (1 iff no branching
            // is reachable)
            let mut seen = BTreeSet::new();
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                if !seen.insert(u) {
                    continue;
                }
                let succ: Vec<usize> = trans[u]
                    .iter()
                    .flatten()
                    .copied()
                    .filter(|&t| viable[t])
                    .collect();
                if succ.len() >= 2 {
                    return 2;
                }
                stack.extend(succ);
            }
            return 1;
        }
        match marks[s] {
            Mark::Done(c) => return c,
            Mark::InProgress => return 2, // productive cycle before the target
            Mark::White => {}
        }
        marks[s] = Mark::InProgress;
        let mut total = 0;
        for t in trans[s].iter().flatten() {
            if productive[*t] {
                total += run_count(*t, trans, viable, productive, in_target, marks);
                if total >= 2 {
                    total = 2;
                    break;
                }
            }
        }
        marks[s] = Mark::Done(total);
        total
    }
    let mut marks = vec![Mark::White; m];
    run_count(0, &trans, &viable, &productive, &in_target, &mut marks)
}

/// Is `[x]_l` a singleton for some depth `l`?  Returns the least such depth.
pub fn is_isolated_in_past_equivalence(
    p: &Presentation,
    an: &PastAnalysis,
    x: &EvPerPoint,
) -> Result<(bool, Option<usize>)> {
    let set = vertex_set_of(p, x)?;
    let idx = an.state_index(&set).unwrap();
    let class = an.language_class[idx];
    let class_states: Vec<BTreeSet<VertId>> = (0..an.realized.len())
        .filter(|&s| an.language_class[s] == class)
        .map(|s| an.realized[s].clone())
        .collect();
    if count_points_with_vertex_set(p, &class_states) != 1 {
        return Ok((false, None));
    }
    // least l whose block equals the stable language class of x
    for l in 0..=an.stabilization_depth() {
        let block = an.block_at(l, idx);
        let block_is_class = (0..an.realized.len())
            .all(|s| (an.block_at(l, s) == block) == (an.language_class[s] == class));
        if block_is_class {
            return Ok((true, Some(l)));
        }
    }
    Ok((false, None))
}

// ---------------------------------------------------------------------------
// classification
// ---------------------------------------------------------------------------

/// Groupoid classification flags with witnesses.
#[derive(Debug, Clone)]
pub struct GroupoidFlags {
    pub principal: bool,
    pub effective: bool,
    pub condition_i: bool,
    pub dense_aperiodic: bool,
    pub witnesses: Vec<(String, Option<EvPerPoint>)>,
}

/// Classify a presentation.
///
/// * `principal` — no eventually periodic point exists (never, for a nonempty
///   presentation: a cycle always exists);
/// * `condition_i` — no point is isolated in past equivalence, equivalently
///   the cover has no vertex with a forced infinite continuation;
/// * `effective` — no periodic point is isolated in past equivalence,
///   equivalently the forced region of the cover contains no cycle;
/// * `dense_aperiodic` — aperiodic points are dense: every follower state
///   reaches a strongly connected component that branches.
pub fn classify(p: &Presentation) -> Result<GroupoidFlags> {
    let cov = crate::cover::build_cover(p)?;
    let mut witnesses = Vec::new();

    // principal: a nonempty essential presentation always carries a cycle
    let cycle = p
        .periodic_points_up_to(p.vertex_count().max(1))
        .into_iter()
        .next();
    let principal = cycle.is_none();
    if let Some(w) = &cycle {
        witnesses.push(("periodic point".to_string(), Some(w.clone())));
    }

    // forced region of the cover: vertices from which the continuation is
    // unique forever
    let forced = cov.forced_region();
    let condition_i = forced.is_empty();
    if !condition_i {
        if let Some(x) = cov.forced_region_sample(&forced) {
            witnesses.push(("isolated in past equivalence".to_string(), Some(x)));
        }
    }
    // inside the forced region out-degrees are exactly one, so a nonempty
    // forced region always closes into a cycle; a cycle there is a periodic
    // point isolated in past equivalence
    let forced_cycle = cov.forced_cycle(&forced);
    let effective = forced_cycle.is_none();
    if let Some(x) = &forced_cycle {
        witnesses.push((
            "periodic point isolated in past equivalence".to_string(),
            Some(x.clone()),
        ));
    }

    let dense_aperiodic = dense_aperiodic(p);

    let flags = GroupoidFlags {
        principal,
        effective,
        condition_i,
        dense_aperiodic,
        witnesses,
    };
    // implication chain
    assert!(!flags.condition_i || flags.effective);
    assert!(!flags.effective || flags.dense_aperiodic);
    assert!(!flags.principal || flags.effective);
    Ok(flags)
}

fn dense_aperiodic(p: &Presentation) -> bool {
    let d = if p.right_resolving {
        p.clone()
    } else {
        p.determinize()
    };
    let n = d.vertex_count();
    let succ: Vec<Vec<usize>> = (0..n)
        .map(|v| d.out_edges(v).iter().map(|e| e.to).collect())
        .collect();
    let scc = tarjan_scc(&succ);
    // branching SCC: strictly more internal edges than vertices
    let mut comp_sizes = vec![0usize; scc.comp_count];
    for v in 0..n {
        comp_sizes[scc.comp[v]] += 1;
    }
    let mut comp_edges = vec![0usize; scc.comp_count];
    for (v, row) in succ.iter().enumerate() {
        for &w in row {
            if scc.comp[v] == scc.comp[w] {
                comp_edges[scc.comp[v]] += 1;
            }
        }
    }
    let branching: Vec<bool> = (0..scc.comp_count)
        .map(|c| comp_edges[c] > comp_sizes[c])
        .collect();
    // every vertex must reach a branching SCC
    let mut reaches = vec![false; n];
    loop {
        let mut changed = false;
        for v in 0..n {
            if reaches[v] {
                continue;
            }
            if branching[scc.comp[v]] || succ[v].iter().any(|&w| reaches[w]) {
                reaches[v] = true;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    reaches.iter().all(|&b| b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::fixtures;

    fn pt(p: &Presentation, mu: &str, alpha: &str) -> EvPerPoint {
        EvPerPoint::parse(&p.alphabet, mu, alpha).unwrap()
    }

    #[test]
    fn even_realized_states() {
        let p = fixtures::even().unwrap();
        let an = analyze(&p);
        assert_eq!(an.realized.len(), 3);
        assert!(an.realized.len() <= 1 << p.vertex_count());
    }

    #[test]
    fn even_past_of_zero_point() {
        let p = fixtures::even().unwrap();
        let an = analyze(&p);
        let x = pt(&p, "", "0");
        let s = past_state(&p, &an, &x).unwrap();
        assert_eq!(s.vertex_set, p.all_vertices());
        // depth-2 predecessor words: all admissible length-2 words (including
        // 11, which the even shift allows)
        let words: Vec<String> = predecessor_words(&p, &s, 2)
            .iter()
            .map(|w| p.render_word(w))
            .collect();
        assert_eq!(words, vec!["00", "01", "10", "11"]);
        // depth 0 is the empty word
        assert_eq!(predecessor_words(&p, &s, 0), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn even_past_of_one_zero_tail() {
        let p = fixtures::even().unwrap();
        let an = analyze(&p);
        // 10^inf: predecessors of length 2 are the words mu with mu 1 0^inf
        // admissible
        let x = pt(&p, "1", "0");
        let s = past_state(&p, &an, &x).unwrap();
        let words: Vec<String> = predecessor_words(&p, &s, 2)
            .iter()
            .map(|w| p.render_word(w))
            .collect();
        // brute force oracle
        let mut expect = Vec::new();
        for w in p.words_of_length(2) {
            let mut cand = w.clone();
            cand.extend(x.prefix(8));
            if p.is_admissible(&cand) {
                expect.push(p.render_word(&w));
            }
        }
        assert_eq!(words, expect);
    }

    #[test]
    fn golden_past_of_one_zero_tail() {
        let p = fixtures::golden().unwrap();
        let an = analyze(&p);
        let x = pt(&p, "1", "0");
        let s = past_state(&p, &an, &x).unwrap();
        let words: Vec<String> = predecessor_words(&p, &s, 1)
            .iter()
            .map(|w| p.render_word(w))
            .collect();
        assert_eq!(words, vec!["0"]);
    }

    #[test]
    fn full_shift_has_single_past_state() {
        let p = fixtures::full2().unwrap();
        let an = analyze(&p);
        assert_eq!(an.realized.len(), 1);
        let x = pt(&p, "", "0");
        let s = past_state(&p, &an, &x).unwrap();
        assert_eq!(s.vertex_set.len(), 1);
    }

    #[test]
    fn partition_examples() {
        let p = fixtures::even().unwrap();
        let an = analyze(&p);
        // depth 0: a single block
        assert_eq!(l_past_partition(&an, 0).len(), 1);
        // depth 2: the all-vertices state is alone in its block
        let blocks = l_past_partition(&an, 2);
        let all = p.all_vertices();
        let b = blocks.iter().find(|b| b.states.contains(&all)).unwrap();
        assert_eq!(b.states.len(), 1);

        let g = fixtures::golden().unwrap();
        let gan = analyze(&g);
        assert_eq!(l_past_partition(&gan, 1).len(), 2);
    }

    #[test]
    fn isolation_examples() {
        let even = fixtures::even().unwrap();
        let an = analyze(&even);
        let x = pt(&even, "", "0");
        assert_eq!(
            is_isolated_in_past_equivalence(&even, &an, &x).unwrap(),
            (true, Some(2))
        );

        let full2 = fixtures::full2().unwrap();
        let an2 = analyze(&full2);
        let y = pt(&full2, "", "0");
        assert_eq!(
            is_isolated_in_past_equivalence(&full2, &an2, &y).unwrap(),
            (false, None)
        );

        let odd = fixtures::odd().unwrap();
        let an3 = analyze(&odd);
        let z = pt(&odd, "", "0");
        let (iso, l) = is_isolated_in_past_equivalence(&odd, &an3, &z).unwrap();
        assert!(iso);
        assert_eq!(l, Some(2));
    }

    #[test]
    fn monotone_refinement() {
        // refining (k, l) never merges blocks
        for name in ["even", "odd", "golden", "full2"] {
            let p = fixtures::by_name(name).unwrap();
            let an = analyze(&p);
            let pts = p.eventually_periodic_points(2, 3);
            for x in &pts {
                for y in &pts {
                    for k2 in 0..=3usize {
                        for l2 in k2..=4usize {
                            if !kl_equivalent(&p, &an, x, y, k2, l2).unwrap() {
                                continue;
                            }
                            for k1 in 0..=k2 {
                                for l1 in k1..=l2 {
                                    if l1 - k1 <= l2 - k2 {
                                        assert!(
                                            kl_equivalent(&p, &an, x, y, k1, l1).unwrap(),
                                            "refinement merged blocks"
                                        );
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn classification_flags() {
        let even = classify(&fixtures::even().unwrap()).unwrap();
        assert!(!even.principal);
        assert!(!even.effective);
        assert!(!even.condition_i);
        assert!(even.dense_aperiodic);

        let full2 = classify(&fixtures::full2().unwrap()).unwrap();
        assert!(!full2.principal);
        assert!(full2.effective);
        assert!(full2.condition_i);

        let golden = classify(&fixtures::golden().unwrap()).unwrap();
        assert!(golden.condition_i);
        assert!(golden.effective);

        // single fixed point: the unique point is periodic and isolated
        let m = crate::presentation::SftMatrix::new(vec![vec![1]]).unwrap();
        let single =
            crate::presentation::from_matrix(&m, crate::presentation::MatrixKind::Vertex).unwrap();
        let flags = classify(&single).unwrap();
        assert!(!flags.principal);
        assert!(!flags.effective);
        assert!(!flags.condition_i);
        assert!(!flags.dense_aperiodic);
    }

    #[test]
    fn predecessor_words_match_brute_force() {
        for name in ["even", "odd", "golden", "full2"] {
            let p = fixtures::by_name(name).unwrap();
            let an = analyze(&p);
            for x in p.eventually_periodic_points(2, 4) {
                if x.transient.len() + x.cycle.len() > 6 {
                    continue;
                }
                let s = past_state(&p, &an, &x).unwrap();
                for l in 0..=4usize {
                    let got: BTreeSet<Word> = predecessor_words(&p, &s, l).into_iter().collect();
                    let mut expect = BTreeSet::new();
                    for w in p.words_of_length(l) {
                        let mut cand = w.clone();
                        cand.extend(x.prefix(2 * p.vertex_count() + 8));
                        if p.is_admissible(&cand) {
                            expect.insert(w);
                        }
                    }
                    assert_eq!(got, expect, "fixture {name}, point {x}, depth {l}");
                }
            }
        }
    }
}
