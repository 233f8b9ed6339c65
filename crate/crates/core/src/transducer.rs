//! Finite-state transducers computing continuous maps between shift spaces,
//! with exact equality checking by product search.
//!
//! A transducer consumes one input symbol per step and emits a bounded word
//! per step.  Block maps compile to pure delay lines; substitution maps
//! compile through a bounded-lookahead parser that can divert into verbatim
//! tail emitters for designated eventually periodic overrides.  Equality of
//! the induced maps on all points of the domain shift is decided by a product
//! automaton search for an output mismatch, with the unmatched output surplus
//! carried in the search state.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::hash::Hash;

use crate::cohomology::CylFunction;
use crate::error::{Error, Result};
use crate::presentation::{Alphabet, EvPerPoint, Presentation, SymId, VertId, Word};

/// Maximum unmatched-output length carried by the equality search.  The
/// search is complete for rate-matched machines well below this bound.
pub const LAG_BOUND: usize = 96;

#[derive(Debug, Clone)]
pub struct Transducer {
    pub input: Alphabet,
    pub output: Alphabet,
    /// per state: input symbol -> (next state, emitted word)
    pub delta: Vec<BTreeMap<SymId, (usize, Word)>>,
    pub initial: usize,
    pub max_emit: usize,
}

fn explore<K, F>(
    input_len: usize,
    initial: K,
    mut step: F,
) -> (Vec<BTreeMap<SymId, (usize, Word)>>, usize)
where
    K: Clone + Eq + Hash,
    F: FnMut(&K, SymId) -> Option<(K, Word)>,
{
    let mut ids: HashMap<K, usize> = HashMap::new();
    let mut keys: Vec<K> = vec![initial.clone()];
    ids.insert(initial, 0);
    let mut delta: Vec<BTreeMap<SymId, (usize, Word)>> = Vec::new();
    let mut max_emit = 1;
    let mut i = 0;
    while i < keys.len() {
        let key = keys[i].clone();
        let mut row = BTreeMap::new();
        for a in 0..input_len {
            if let Some((next, out)) = step(&key, a) {
                let id = *ids.entry(next.clone()).or_insert_with(|| {
                    keys.push(next.clone());
                    keys.len() - 1
                });
                max_emit = max_emit.max(out.len());
                row.insert(a, (id, out));
            }
            assert!(
                keys.len() <= 500_000,
                "transducer exploration exceeded bound"
            );
        }
        delta.push(row);
        i += 1;
    }
    (delta, max_emit)
}

impl Transducer {
    pub fn state_count(&self) -> usize {
        self.delta.len()
    }

    pub fn step(&self, q: usize, a: SymId) -> Option<(usize, &Word)> {
        self.delta[q].get(&a).map(|(n, w)| (*n, w))
    }

    /// Identity map (symbols matched by name between the two alphabets).
    pub fn identity(dom: &Presentation, cod: &Presentation) -> Result<Transducer> {
        let map: Vec<SymId> = dom
            .alphabet
            .symbols()
            .map(|s| cod.alphabet.id_of(s))
            .collect::<Result<_>>()?;
        let (delta, max_emit) = explore(dom.alphabet.len(), (), |_, a| Some(((), vec![map[a]])));
        Ok(Transducer {
            input: dom.alphabet.clone(),
            output: cod.alphabet.clone(),
            delta,
            initial: 0,
            max_emit,
        })
    }

    /// Composition: feed this machine's output into `next`.
    pub fn then(&self, next: &Transducer) -> Result<Transducer> {
        let rename: Vec<SymId> = self
            .output
            .symbols()
            .map(|s| next.input.id_of(s))
            .collect::<Result<_>>()?;
        let (delta, max_emit) = explore(
            self.input.len(),
            (self.initial, next.initial),
            |&(q1, q2), a| {
                let (q1n, w1) = self.step(q1, a)?;
                let mut q2cur = q2;
                let mut out = Vec::new();
                for &b in w1 {
                    let (q2n, w2) = next.step(q2cur, rename[b])?;
                    out.extend_from_slice(w2);
                    q2cur = q2n;
                }
                Some(((q1n, q2cur), out))
            },
        );
        Ok(Transducer {
            input: self.input.clone(),
            output: next.output.clone(),
            delta,
            initial: 0,
            max_emit,
        })
    }

    /// Apply the map to the shifted input, skipping `n` leading symbols.
    pub fn pre_shift(&self, n: usize) -> Transducer {
        #[derive(Clone, PartialEq, Eq, Hash)]
        enum K {
            Skip(usize),
            Run(usize),
        }
        let initial = if n == 0 {
            K::Run(self.initial)
        } else {
            K::Skip(0)
        };
        let (delta, max_emit) = explore(self.input.len(), initial, |k, a| match k {
            K::Skip(i) => {
                if i + 1 < n {
                    Some((K::Skip(i + 1), Vec::new()))
                } else {
                    Some((K::Run(self.initial), Vec::new()))
                }
            }
            K::Run(q) => {
                let (qn, w) = self.step(*q, a)?;
                Some((K::Run(qn), w.clone()))
            }
        });
        Transducer {
            input: self.input.clone(),
            output: self.output.clone(),
            delta,
            initial: 0,
            max_emit,
        }
    }

    /// Drop the first `c(x)` output symbols, where the drop count is the
    /// cylinder function `c` evaluated on the original input.
    pub fn drop_by_cocycle(&self, c: &CylFunction) -> Transducer {
        #[derive(Clone, PartialEq, Eq, Hash)]
        struct K {
            seen: Word,
            inner: usize,
            drop: Option<usize>,
            pending: Word,
        }
        let d = c.depth;
        let initial = K {
            seen: Vec::new(),
            inner: self.initial,
            drop: if d == 0 {
                Some(c.values.get(&Vec::new()).copied().unwrap_or(0).max(0) as usize)
            } else {
                None
            },
            pending: Vec::new(),
        };
        let (delta, max_emit) = explore(self.input.len(), initial, |k, a| {
            let mut seen = k.seen.clone();
            if seen.len() < d {
                seen.push(a);
            }
            let (inner, w) = self.step(k.inner, a)?;
            let mut pending = k.pending.clone();
            pending.extend_from_slice(w);
            let mut drop = k.drop;
            if drop.is_none() && seen.len() == d {
                let v = *c.values.get(&seen)?;
                debug_assert!(v >= 0);
                drop = Some(v.max(0) as usize);
            }
            let mut out = Vec::new();
            if let Some(mut k_rem) = drop {
                let mut rest = VecDeque::from(pending);
                while k_rem > 0 && !rest.is_empty() {
                    rest.pop_front();
                    k_rem -= 1;
                }
                drop = Some(k_rem);
                if k_rem == 0 {
                    out = rest.iter().copied().collect();
                    rest.clear();
                }
                pending = rest.into_iter().collect();
            }
            Some((
                K {
                    seen,
                    inner,
                    drop,
                    pending,
                },
                out,
            ))
        });
        Transducer {
            input: self.input.clone(),
            output: self.output.clone(),
            delta,
            initial: 0,
            max_emit,
        }
    }

    /// Run the machine on an eventually periodic point.
    pub fn apply_to_point(&self, x: &EvPerPoint) -> Result<EvPerPoint> {
        let mut q = self.initial;
        let mut transient_out: Word = Vec::new();
        for &a in &x.transient {
            let (qn, w) = self
                .step(q, a)
                .ok_or_else(|| Error::NotAdmissible(format!("no transition on symbol {a}")))?;
            transient_out.extend_from_slice(w);
            q = qn;
        }
        // pump the cycle until the machine state repeats at the cycle start
        let mut seen: HashMap<usize, (usize, usize)> = HashMap::new(); // state -> (round, out len)
        let mut outputs: Word = Vec::new();
        let mut round = 0usize;
        loop {
            if let Some(&(_, out_at)) = seen.get(&q) {
                let cycle_out: Word = outputs[out_at..].to_vec();
                if cycle_out.is_empty() {
                    return Err(Error::Starvation(format!(
                        "{:?}",
                        self.input.render(&x.cycle)
                    )));
                }
                let mut t = transient_out;
                t.extend_from_slice(&outputs[..out_at]);
                return Ok(EvPerPoint::new(t, cycle_out));
            }
            seen.insert(q, (round, outputs.len()));
            for &a in &x.cycle {
                let (qn, w) = self
                    .step(q, a)
                    .ok_or_else(|| Error::NotAdmissible(format!("no transition on symbol {a}")))?;
                outputs.extend_from_slice(w);
                q = qn;
            }
            round += 1;
        }
    }

    /// Check totality on the domain, admissibility of every emitted word in
    /// the codomain, and absence of starving input cycles.
    pub fn validate(&self, dom: &Presentation, cod: &Presentation) -> Result<()> {
        let rename: Vec<SymId> = self
            .output
            .symbols()
            .map(|s| cod.alphabet.id_of(s))
            .collect::<Result<_>>()?;
        #[derive(Clone, PartialEq, Eq, Hash)]
        struct K {
            q: usize,
            dom: Vec<VertId>,
            cod: Vec<VertId>,
        }
        let start = K {
            q: self.initial,
            dom: dom.all_vertices().into_iter().collect(),
            cod: cod.all_vertices().into_iter().collect(),
        };
        let mut ids: HashMap<K, usize> = HashMap::new();
        ids.insert(start.clone(), 0);
        let mut queue = vec![start];
        let mut edges: Vec<(usize, usize, usize)> = Vec::new(); // (from, to, emitted count)
        let mut i = 0;
        while i < queue.len() {
            let cur = queue[i].clone();
            let dom_set: BTreeSet<VertId> = cur.dom.iter().copied().collect();
            let cod_set: BTreeSet<VertId> = cur.cod.iter().copied().collect();
            for a in dom.alphabet.ids() {
                let next_dom = dom.post(&dom_set, a);
                if next_dom.is_empty() {
                    continue;
                }
                let Some((qn, w)) = self.step(cur.q, a) else {
                    return Err(Error::Parse(format!(
                        "map is not total: no transition on admissible symbol {:?}",
                        dom.alphabet.symbol(a)
                    )));
                };
                let mut cod_cur = cod_set.clone();
                for &b in w {
                    cod_cur = cod.post(&cod_cur, rename[b]);
                    if cod_cur.is_empty() {
                        return Err(Error::ImageNotAdmissible(self.output.render(w)));
                    }
                }
                let k = K {
                    q: qn,
                    dom: next_dom.into_iter().collect(),
                    cod: cod_cur.into_iter().collect(),
                };
                let id = *ids.entry(k.clone()).or_insert_with(|| {
                    queue.push(k);
                    queue.len() - 1
                });
                edges.push((i, id, w.len()));
            }
            i += 1;
        }
        // starving cycle: a reachable cycle along zero-emission transitions
        let n = queue.len();
        let mut zero_succ: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &(u, v, e) in &edges {
            if e == 0 {
                zero_succ[u].push(v);
            }
        }
        let mut color = vec![0u8; n];
        fn dfs(u: usize, zero_succ: &[Vec<usize>], color: &mut [u8]) -> bool {
            color[u] = 1;
            for &v in &zero_succ[u] {
                if color[v] == 1 {
                    return true;
                }
                if color[v] == 0 && dfs(v, zero_succ, color) {
                    return true;
                }
            }
            color[u] = 2;
            false
        }
        for u in 0..n {
            if color[u] == 0 && dfs(u, &zero_succ, &mut color) {
                return Err(Error::Starvation("zero-emission input cycle".into()));
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// compilers
// ---------------------------------------------------------------------------

/// Compile a sliding block code with the given window; `pad` widens the
/// buffer without changing the map (useful to produce a second, differently
/// timed compilation of the same code).
pub fn compile_block_map(
    dom: &Presentation,
    cod: &Presentation,
    window: usize,
    table: &BTreeMap<Word, SymId>,
    pad: usize,
) -> Result<Transducer> {
    assert!(window >= 1);
    for w in dom.words_of_length(window) {
        if !table.contains_key(&w) {
            return Err(Error::Parse(format!(
                "block map table misses admissible window {:?}",
                dom.render_word(&w)
            )));
        }
    }
    let width = window + pad;
    let (delta, max_emit) = explore(dom.alphabet.len(), Vec::<SymId>::new(), |buf, a| {
        let mut b = buf.clone();
        b.push(a);
        if b.len() < width {
            return Some((b, Vec::new()));
        }
        let key: Word = b[..window].to_vec();
        let out = table.get(&key).copied();
        let next = b[1..].to_vec();
        out.map(|o| (next, vec![o]))
    });
    let t = Transducer {
        input: dom.alphabet.clone(),
        output: cod.alphabet.clone(),
        delta,
        initial: 0,
        max_emit,
    };
    t.validate(dom, cod)?;
    Ok(t)
}

/// Least prefix length after which only one point of the shift carries the
/// prefix (in any position).  Needed to compile point and tail overrides.
fn sync_length(dom: &Presentation, t: &EvPerPoint, cap: usize) -> Option<usize> {
    't_len: for len in 1..=cap {
        let prefix = t.prefix(len);
        let mut set = dom.all_vertices();
        for &a in &prefix {
            set = dom.post(&set, a);
        }
        if set.is_empty() {
            return None; // not admissible at all
        }
        // from here the continuation must be forced to follow t
        let mut pos = len;
        let mut seen: BTreeSet<(Vec<VertId>, usize)> = BTreeSet::new();
        loop {
            let canon_pos = if pos < t.transient.len() {
                pos
            } else {
                t.transient.len() + (pos - t.transient.len()) % t.cycle.len()
            };
            let key = (set.iter().copied().collect(), canon_pos);
            if !seen.insert(key) {
                return Some(len);
            }
            let expected = t.symbol_at(pos);
            for a in dom.alphabet.ids() {
                if a != expected && !dom.post(&set, a).is_empty() {
                    continue 't_len;
                }
            }
            set = dom.post(&set, expected);
            if set.is_empty() {
                continue 't_len;
            }
            pos += 1;
        }
    }
    None
}

/// An override: when the remaining input equals `from`, emit `to` verbatim.
#[derive(Debug, Clone)]
pub struct TailOverride {
    pub from: EvPerPoint,
    pub to: EvPerPoint,
}

struct CompiledOverride {
    from: EvPerPoint,
    to: EvPerPoint,
    sync: usize,
}

impl CompiledOverride {
    fn target(&self, n: usize) -> usize {
        // output symbols due after consuming n input symbols
        let tm = self.from.transient.len();
        let ta = self.from.cycle.len();
        let rm = self.to.transient.len();
        let ra = self.to.cycle.len();
        if n == 0 {
            return 0;
        }
        if n <= tm {
            // ceil(n * rm / tm)
            (n * rm).div_ceil(tm)
        } else {
            rm + ((n - tm) * ra).div_ceil(ta)
        }
    }

    fn canonical(&self, n: usize) -> usize {
        let tm = self.from.transient.len();
        let ta = self.from.cycle.len();
        if n < tm + ta {
            n
        } else {
            tm + (n - tm) % ta
        }
    }

    fn next_state(&self, m: usize) -> usize {
        self.canonical(m + 1)
    }

    fn chunk(&self, m: usize) -> Word {
        // emissions on consuming input symbol number m (canonical index)
        let lo = self.target(m);
        let hi = self.target(m + 1);
        (lo..hi).map(|i| self.to.symbol_at(i)).collect()
    }

    fn catchup(&self, consumed: usize) -> Word {
        (0..self.target(consumed))
            .map(|i| self.to.symbol_at(i))
            .collect()
    }

    fn expected_symbol(&self, m: usize) -> SymId {
        self.from.symbol_at(m)
    }
}

/// Compile a substitution map: rewrite rules applied by a bounded-lookahead
/// parser, with optional whole-point overrides (position 0 only) and tail
/// overrides (any position).  Rule sets that are not uniquely parsable are
/// rejected.
pub fn compile_substitution(
    dom: &Presentation,
    cod: &Presentation,
    rules: &[(Word, Word)],
    point_overrides: &[TailOverride],
    suffix_overrides: &[TailOverride],
) -> Result<Transducer> {
    for (p, _) in rules {
        if p.is_empty() {
            return Err(Error::AmbiguousRules("empty pattern".into()));
        }
    }
    for (p, _) in rules {
        for (q, _) in rules {
            if p != q && q.len() > p.len() && q[..p.len()] == p[..] {
                return Err(Error::AmbiguousRules(format!(
                    "pattern {:?} is a prefix of {:?}",
                    dom.render_word(p),
                    dom.render_word(q)
                )));
            }
        }
    }
    let cap = 64;
    let compile_ov = |ov: &TailOverride| -> Result<CompiledOverride> {
        if !dom.point_admissible(&ov.from) {
            return Err(Error::PointNotAdmissible(ov.from.render(&dom.alphabet)));
        }
        if !cod.point_admissible(&ov.to) {
            return Err(Error::ImageNotAdmissible(ov.to.render(&cod.alphabet)));
        }
        let sync = sync_length(dom, &ov.from, cap)
            .ok_or_else(|| Error::ExceptionNotSynchronizing(ov.from.render(&dom.alphabet)))?;
        Ok(CompiledOverride {
            from: ov.from.clone(),
            to: ov.to.clone(),
            sync,
        })
    };
    let points: Vec<CompiledOverride> = point_overrides
        .iter()
        .map(compile_ov)
        .collect::<Result<_>>()?;
    let suffixes: Vec<CompiledOverride> = suffix_overrides
        .iter()
        .map(compile_ov)
        .collect::<Result<_>>()?;
    // distinct tail overrides must not be simultaneously triggerable
    for (i, a) in suffixes.iter().enumerate() {
        for b in suffixes.iter().skip(i + 1) {
            let l = a.sync.max(b.sync);
            if a.from.prefix(l) == b.from.prefix(l) {
                return Err(Error::AmbiguousRules("overlapping tail overrides".into()));
            }
        }
    }
    let width = suffixes
        .iter()
        .chain(points.iter())
        .map(|o| o.sync)
        .chain(rules.iter().map(|(p, _)| p.len()))
        .max()
        .unwrap_or(1)
        .max(1);

    #[derive(Clone, PartialEq, Eq, Hash)]
    enum K {
        Start {
            buf: Word,
        },
        Parse {
            buf: Word,
        },
        Emit {
            point_side: bool,
            ov: usize,
            m: usize,
        },
    }

    let ident: Vec<Option<SymId>> = dom
        .alphabet
        .symbols()
        .map(|s| cod.alphabet.id_of(s).ok())
        .collect();

    let parse_forward = |mut buf: Word| -> Option<(K, Word)> {
        let mut out = Vec::new();
        'outer: while buf.len() >= width {
            for (idx, ov) in suffixes.iter().enumerate() {
                if buf[..ov.sync] == ov.from.prefix(ov.sync)[..] {
                    out.extend(ov.catchup(width));
                    return Some((
                        K::Emit {
                            point_side: false,
                            ov: idx,
                            m: ov.canonical(width),
                        },
                        out,
                    ));
                }
            }
            for (p, r) in rules {
                if buf.len() >= p.len() && buf[..p.len()] == p[..] {
                    out.extend_from_slice(r);
                    buf.drain(..p.len());
                    continue 'outer;
                }
            }
            let a = buf.remove(0);
            out.push(ident[a]?);
        }
        Some((K::Parse { buf }, out))
    };

    let (delta, max_emit) = explore(
        dom.alphabet.len(),
        K::Start { buf: Vec::new() },
        |k, a| match k {
            K::Start { buf } => {
                let mut b = buf.clone();
                b.push(a);
                if b.len() < width {
                    return Some((K::Start { buf: b }, Vec::new()));
                }
                for (idx, ov) in points.iter().enumerate() {
                    if b[..] == ov.from.prefix(width)[..] {
                        return Some((
                            K::Emit {
                                point_side: true,
                                ov: idx,
                                m: ov.canonical(width),
                            },
                            ov.catchup(width),
                        ));
                    }
                }
                parse_forward(b)
            }
            K::Parse { buf } => {
                let mut b = buf.clone();
                b.push(a);
                parse_forward(b)
            }
            K::Emit { point_side, ov, m } => {
                let o = if *point_side {
                    &points[*ov]
                } else {
                    &suffixes[*ov]
                };
                if a != o.expected_symbol(*m) {
                    return None;
                }
                Some((
                    K::Emit {
                        point_side: *point_side,
                        ov: *ov,
                        m: o.next_state(*m),
                    },
                    o.chunk(*m),
                ))
            }
        },
    );
    let t = Transducer {
        input: dom.alphabet.clone(),
        output: cod.alphabet.clone(),
        delta,
        initial: 0,
        max_emit,
    };
    t.validate(dom, cod)?;
    Ok(t)
}

// ---------------------------------------------------------------------------
// equality
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub enum Equivalence {
    Equal,
    Differs { witness: Word },
}

/// Decide whether two machines induce the same map on every point of the
/// domain shift.  Sound in both directions within the lag bound; exceeding
/// the bound is reported as an error.
pub fn transducer_equal(
    t1: &Transducer,
    t2: &Transducer,
    dom: &Presentation,
) -> Result<Equivalence> {
    if !t1.output.symbols().eq(t2.output.symbols()) {
        // compare outputs by name through the common renderer
        return Err(Error::AlphabetMismatch(
            "compared maps must share an output alphabet".into(),
        ));
    }
    #[derive(Clone, PartialEq, Eq, Hash)]
    struct K {
        q1: usize,
        q2: usize,
        dom: Vec<VertId>,
        side1_ahead: bool,
        surplus: Word,
    }
    let start = K {
        q1: t1.initial,
        q2: t2.initial,
        dom: dom.all_vertices().into_iter().collect(),
        side1_ahead: true,
        surplus: Vec::new(),
    };
    let mut ids: HashMap<K, usize> = HashMap::new();
    ids.insert(start.clone(), 0);
    let mut states = vec![start];
    let mut parent: Vec<Option<(usize, SymId)>> = vec![None];
    let mut i = 0;
    while i < states.len() {
        let cur = states[i].clone();
        let dom_set: BTreeSet<VertId> = cur.dom.iter().copied().collect();
        for a in dom.alphabet.ids() {
            let next_dom = dom.post(&dom_set, a);
            if next_dom.is_empty() {
                continue;
            }
            let (q1n, w1) = t1
                .step(cur.q1, a)
                .ok_or_else(|| Error::Parse("first map is not total on the domain".into()))?;
            let (q2n, w2) = t2
                .step(cur.q2, a)
                .ok_or_else(|| Error::Parse("second map is not total on the domain".into()))?;
            let mut out1: VecDeque<SymId> = if cur.side1_ahead {
                cur.surplus.iter().copied().collect()
            } else {
                VecDeque::new()
            };
            out1.extend(w1.iter().copied());
            let mut out2: VecDeque<SymId> = if cur.side1_ahead {
                VecDeque::new()
            } else {
                cur.surplus.iter().copied().collect()
            };
            out2.extend(w2.iter().copied());
            let mut mismatch = false;
            while !out1.is_empty() && !out2.is_empty() {
                if out1.pop_front() != out2.pop_front() {
                    mismatch = true;
                    break;
                }
            }
            if mismatch {
                let mut word = vec![a];
                let mut at = i;
                while let Some((p, sym)) = parent[at] {
                    word.push(sym);
                    at = p;
                }
                word.reverse();
                return Ok(Equivalence::Differs { witness: word });
            }
            let (side1_ahead, surplus): (bool, Word) = if out2.is_empty() {
                (true, out1.into_iter().collect())
            } else {
                (false, out2.into_iter().collect())
            };
            if surplus.len() > LAG_BOUND {
                return Err(Error::Unsupported(
                    "output lag bound exceeded while comparing maps".into(),
                ));
            }
            let k = K {
                q1: q1n,
                q2: q2n,
                dom: next_dom.into_iter().collect(),
                side1_ahead,
                surplus,
            };
            if !ids.contains_key(&k) {
                ids.insert(k.clone(), states.len());
                states.push(k);
                parent.push(Some((i, a)));
                assert!(states.len() <= 2_000_000, "equality search exceeded bound");
            }
        }
        i += 1;
    }
    Ok(Equivalence::Equal)
}

/// Extend an admissible finite word to an eventually periodic point of the
/// presentation (used to turn mismatch witnesses into concrete points).
pub fn extend_to_point(p: &Presentation, w: &Word) -> Option<EvPerPoint> {
    let mut set = p.all_vertices();
    for &a in w {
        set = p.post(&set, a);
        if set.is_empty() {
            return None;
        }
    }
    // follow any continuation until a (vertex set) repeat, then read the loop
    let mut tail: Word = Vec::new();
    let mut seen: Vec<(BTreeSet<VertId>, usize)> = vec![(set.clone(), 0)];
    loop {
        let a = p
            .alphabet
            .ids()
            .find(|&a| !p.post(&set, a).is_empty())
            .expect("essential presentations always extend");
        set = p.post(&set, a);
        tail.push(a);
        if let Some((_, at)) = seen.iter().find(|(s, _)| *s == set) {
            let cycle: Word = tail[*at..].to_vec();
            let mut transient = w.clone();
            transient.extend_from_slice(&tail[..*at]);
            return Some(EvPerPoint::new(transient, cycle));
        }
        seen.push((set.clone(), tail.len()));
    }
}

// ---------------------------------------------------------------------------
// almost injectivity / surjectivity for sliding block codes
// ---------------------------------------------------------------------------

/// Does `phi(x) = phi(x')` force the inputs to agree after `lag` shifts?
/// Exact for block codes (one output symbol per input past the delay).
pub fn almost_injective(t: &Transducer, dom: &Presentation, lag: usize) -> Result<bool> {
    #[derive(Clone, PartialEq, Eq, Hash)]
    struct K {
        qa: usize,
        qb: usize,
        doma: Vec<VertId>,
        domb: Vec<VertId>,
        side_a_ahead: bool,
        surplus: Word,
        diff_seen: bool,
        pos: usize, // saturated at lag
    }
    let start = K {
        qa: t.initial,
        qb: t.initial,
        doma: dom.all_vertices().into_iter().collect(),
        domb: dom.all_vertices().into_iter().collect(),
        side_a_ahead: true,
        surplus: Vec::new(),
        diff_seen: false,
        pos: 0,
    };
    let mut ids: HashMap<K, usize> = HashMap::new();
    ids.insert(start.clone(), 0);
    let mut states = vec![start];
    let mut succ: Vec<Vec<usize>> = Vec::new();
    let mut i = 0;
    while i < states.len() {
        let cur = states[i].clone();
        let set_a: BTreeSet<VertId> = cur.doma.iter().copied().collect();
        let set_b: BTreeSet<VertId> = cur.domb.iter().copied().collect();
        let mut row = Vec::new();
        for a in dom.alphabet.ids() {
            let next_a = dom.post(&set_a, a);
            if next_a.is_empty() {
                continue;
            }
            for b in dom.alphabet.ids() {
                let next_b = dom.post(&set_b, b);
                if next_b.is_empty() {
                    continue;
                }
                let (qan, wa) = t
                    .step(cur.qa, a)
                    .ok_or_else(|| Error::Parse("map is not total on the domain".into()))?;
                let (qbn, wb) = t
                    .step(cur.qb, b)
                    .ok_or_else(|| Error::Parse("map is not total on the domain".into()))?;
                let mut oa: VecDeque<SymId> = if cur.side_a_ahead {
                    cur.surplus.iter().copied().collect()
                } else {
                    VecDeque::new()
                };
                oa.extend(wa.iter().copied());
                let mut ob: VecDeque<SymId> = if cur.side_a_ahead {
                    VecDeque::new()
                } else {
                    cur.surplus.iter().copied().collect()
                };
                ob.extend(wb.iter().copied());
                let mut consistent = true;
                while !oa.is_empty() && !ob.is_empty() {
                    if oa.pop_front() != ob.pop_front() {
                        consistent = false;
                        break;
                    }
                }
                if !consistent {
                    continue; // outputs already differ: not an equal-output pair
                }
                let (side_a_ahead, surplus): (bool, Word) = if ob.is_empty() {
                    (true, oa.into_iter().collect())
                } else {
                    (false, ob.into_iter().collect())
                };
                if surplus.len() > LAG_BOUND {
                    return Err(Error::Unsupported(
                        "output lag bound exceeded in injectivity search".into(),
                    ));
                }
                let k = K {
                    qa: qan,
                    qb: qbn,
                    doma: next_a.iter().copied().collect(),
                    domb: next_b.iter().copied().collect(),
                    side_a_ahead,
                    surplus,
                    diff_seen: cur.diff_seen || (a != b && cur.pos >= lag),
                    pos: (cur.pos + 1).min(lag),
                };
                let id = *ids.entry(k.clone()).or_insert_with(|| {
                    states.push(k);
                    states.len() - 1
                });
                row.push(id);
                assert!(states.len() <= 2_000_000, "pair search exceeded bound");
            }
        }
        succ.push(row);
        i += 1;
    }
    // viable states admit an infinite equal-output continuation
    let n = states.len();
    let mut viable = vec![true; n];
    loop {
        let mut changed = false;
        for s in 0..n {
            if viable[s] && !succ[s].iter().any(|&v| viable[v]) {
                viable[s] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    // a reachable viable state with a late difference refutes
    let mut reach = vec![false; n];
    let mut stack = vec![0usize];
    reach[0] = true;
    while let Some(u) = stack.pop() {
        if !viable[u] {
            continue;
        }
        if states[u].diff_seen {
            return Ok(false);
        }
        for &v in &succ[u] {
            if viable[v] && !reach[v] {
                reach[v] = true;
                stack.push(v);
            }
        }
    }
    Ok(true)
}

/// Is every point of the codomain, after `lag` shifts, in the shifted image?
pub fn almost_surjective(
    t: &Transducer,
    dom: &Presentation,
    cod: &Presentation,
    lag: usize,
) -> Result<bool> {
    let rename: Vec<SymId> = t
        .output
        .symbols()
        .map(|s| cod.alphabet.id_of(s))
        .collect::<Result<_>>()?;
    // image NFA nodes: (machine state, domain subset, pending output)
    #[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
    struct N {
        q: usize,
        dom: Vec<VertId>,
        pending: Word, // output symbols not yet consumed by the NFA reader
    }
    // one NFA move = read one output symbol; epsilon moves consume inputs
    // that emit nothing
    let start = N {
        q: t.initial,
        dom: dom.all_vertices().into_iter().collect(),
        pending: Vec::new(),
    };
    // epsilon closure: consume inputs while no output is pending
    let closure = |nodes: BTreeSet<N>| -> Result<BTreeSet<N>> {
        let mut out = BTreeSet::new();
        let mut stack: Vec<N> = nodes.into_iter().collect();
        let mut guard = 0usize;
        while let Some(nd) = stack.pop() {
            guard += 1;
            if guard > 1_000_000 {
                return Err(Error::Unsupported("image automaton exceeded bound".into()));
            }
            if !nd.pending.is_empty() {
                out.insert(nd);
                continue;
            }
            if !out.insert(nd.clone()) {
                continue;
            }
            let dom_set: BTreeSet<VertId> = nd.dom.iter().copied().collect();
            for a in dom.alphabet.ids() {
                let next_dom = dom.post(&dom_set, a);
                if next_dom.is_empty() {
                    continue;
                }
                if let Some((qn, w)) = t.step(nd.q, a) {
                    let nd2 = N {
                        q: qn,
                        dom: next_dom.into_iter().collect(),
                        pending: w.iter().map(|&b| rename[b]).collect(),
                    };
                    if nd2.pending.is_empty() {
                        stack.push(nd2);
                    } else {
                        out.insert(nd2);
                    }
                }
            }
        }
        Ok(out)
    };
    let read = |nodes: &BTreeSet<N>, sym: SymId| -> BTreeSet<N> {
        let mut out = BTreeSet::new();
        for nd in nodes {
            if let Some((&first, rest)) = nd.pending.split_first() {
                if first == sym {
                    out.insert(N {
                        q: nd.q,
                        dom: nd.dom.clone(),
                        pending: rest.to_vec(),
                    });
                }
            }
        }
        out
    };
    let mut img: BTreeSet<N> = closure([start].into_iter().collect())?;
    // advance the image by `lag` arbitrary output symbols
    for _ in 0..lag {
        let mut next = BTreeSet::new();
        for sym in cod.alphabet.ids() {
            next.extend(read(&img, sym));
        }
        img = closure(next)?;
    }
    // codomain after lag shifts: vertices reachable by length-lag paths
    let mut cod_set = cod.all_vertices();
    for _ in 0..lag {
        let mut next = BTreeSet::new();
        for a in cod.alphabet.ids() {
            next.extend(cod.post(&cod_set, a));
        }
        cod_set = next;
    }
    // prefix-language inclusion by product subset search
    let mut seen: BTreeSet<(Vec<VertId>, Vec<N>)> = BTreeSet::new();
    let key = |c: &BTreeSet<VertId>, i: &BTreeSet<N>| {
        (
            c.iter().copied().collect::<Vec<_>>(),
            i.iter().cloned().collect::<Vec<_>>(),
        )
    };
    let mut queue = vec![(cod_set, img)];
    seen.insert(key(&queue[0].0, &queue[0].1));
    while let Some((cset, iset)) = queue.pop() {
        for sym in cod.alphabet.ids() {
            let cnext = cod.post(&cset, sym);
            if cnext.is_empty() {
                continue;
            }
            let inext = closure(read(&iset, sym))?;
            if inext.is_empty() {
                return Ok(false);
            }
            let k = key(&cnext, &inext);
            if seen.insert(k) {
                queue.push((cnext, inext));
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::fixtures;

    fn subst(dom: &Presentation, cod: &Presentation, rules: &[(&str, &str)]) -> Transducer {
        let rs: Vec<(Word, Word)> = rules
            .iter()
            .map(|(p, r)| {
                (
                    dom.alphabet.tokenize(p).unwrap(),
                    cod.alphabet.tokenize(r).unwrap(),
                )
            })
            .collect();
        compile_substitution(dom, cod, &rs, &[], &[]).unwrap()
    }

    #[test]
    fn even_to_odd_substitution() {
        let even = fixtures::even().unwrap();
        let odd = fixtures::odd().unwrap();
        let h = subst(&even, &odd, &[("1", "10")]);
        let x = EvPerPoint::parse(&even.alphabet, "", "1").unwrap();
        let y = h.apply_to_point(&x).unwrap();
        assert_eq!(y.render(&odd.alphabet), "(10)^inf");
        let z = EvPerPoint::parse(&even.alphabet, "", "0").unwrap();
        assert_eq!(
            h.apply_to_point(&z).unwrap().render(&odd.alphabet),
            "(0)^inf"
        );
        // the trailing 0 of the image absorbs into the cycle
        let w = EvPerPoint::parse(&even.alphabet, "11", "0").unwrap();
        assert_eq!(
            h.apply_to_point(&w).unwrap().render(&odd.alphabet),
            "101(0)^inf"
        );
    }

    #[test]
    fn inverse_substitution_and_composition() {
        let even = fixtures::even().unwrap();
        let odd = fixtures::odd().unwrap();
        let h = subst(&even, &odd, &[("1", "10")]);
        let hinv = subst(&odd, &even, &[("10", "1")]);
        let comp = h.then(&hinv).unwrap();
        comp.validate(&even, &even).unwrap();
        let id = Transducer::identity(&even, &even).unwrap();
        assert!(matches!(
            transducer_equal(&comp, &id, &even).unwrap(),
            Equivalence::Equal
        ));
        let comp2 = hinv.then(&h).unwrap();
        let id2 = Transducer::identity(&odd, &odd).unwrap();
        assert!(matches!(
            transducer_equal(&comp2, &id2, &odd).unwrap(),
            Equivalence::Equal
        ));
    }

    #[test]
    fn equality_detects_differences() {
        let even = fixtures::even().unwrap();
        let odd = fixtures::odd().unwrap();
        let h = subst(&even, &odd, &[("1", "10")]);
        // h vs h shifted by one output symbol must differ, with a witness
        let dropped = h.drop_by_cocycle(&CylFunction::constant(&even, 1));
        match transducer_equal(&h, &dropped, &even).unwrap() {
            Equivalence::Differs { witness } => {
                assert!(even.is_admissible(&witness));
                let x = extend_to_point(&even, &witness).unwrap();
                let y1 = h.apply_to_point(&x).unwrap();
                let y2 = dropped.apply_to_point(&x).unwrap();
                assert_ne!(y1, y2, "witness must separate the maps");
            }
            Equivalence::Equal => panic!("maps cannot be equal"),
        }
    }

    #[test]
    fn block_map_compilations_agree() {
        let golden = fixtures::golden().unwrap();
        // 2-block recoding into the full shift on admissible pairs
        let full2 = fixtures::full2().unwrap();
        let mut table = BTreeMap::new();
        for w in golden.words_of_length(2) {
            // send 00 -> 0, 01 -> 1, 10 -> 0 (collapse)
            let sym = if w == golden.alphabet.tokenize("01").unwrap() {
                full2.alphabet.id_of("1").unwrap()
            } else {
                full2.alphabet.id_of("0").unwrap()
            };
            table.insert(w, sym);
        }
        let t1 = compile_block_map(&golden, &full2, 2, &table, 0).unwrap();
        let t2 = compile_block_map(&golden, &full2, 2, &table, 3).unwrap();
        assert!(matches!(
            transducer_equal(&t1, &t2, &golden).unwrap(),
            Equivalence::Equal
        ));
    }

    #[test]
    fn tail_override_machine() {
        let ep = fixtures::e_prime().unwrap();
        let fp = fixtures::f_prime().unwrap();
        let tok = |s: &str| ep.alphabet.tokenize(s).unwrap();
        let tokf = |s: &str| fp.alphabet.tokenize(s).unwrap();
        let rules = vec![(tok("21"), tokf("2"))];
        let pt = |mu: &str, al: &str| EvPerPoint::parse(&ep.alphabet, mu, al).unwrap();
        let ptf = |mu: &str, al: &str| EvPerPoint::parse(&fp.alphabet, mu, al).unwrap();
        let h = compile_substitution(
            &ep,
            &fp,
            &rules,
            &[
                TailOverride {
                    from: pt("", "34"),
                    to: ptf("", "43"),
                },
                TailOverride {
                    from: pt("", "43"),
                    to: ptf("", "34"),
                },
            ],
            &[TailOverride {
                from: pt("21", "34"),
                to: ptf("21", "34"),
            }],
        )
        .unwrap();
        // pinned values
        assert_eq!(h.apply_to_point(&pt("", "34")).unwrap(), ptf("", "43"));
        assert_eq!(h.apply_to_point(&pt("", "43")).unwrap(), ptf("", "34"));
        assert_eq!(h.apply_to_point(&pt("1", "34")).unwrap(), ptf("1", "34"));
        assert_eq!(h.apply_to_point(&pt("21", "34")).unwrap(), ptf("21", "34"));
        // a non-tail-adjacent block is exchanged
        assert_eq!(h.apply_to_point(&pt("211", "34")).unwrap(), ptf("21", "34"));
        assert_eq!(h.apply_to_point(&pt("", "21")).unwrap(), ptf("", "2"));
        // deep in the shift the exchange still applies
        assert_eq!(
            h.apply_to_point(&pt("1211", "34")).unwrap(),
            ptf("121", "34")
        );
    }

    #[test]
    fn almost_injective_and_surjective_examples() {
        let golden = fixtures::golden().unwrap();
        let id = Transducer::identity(&golden, &golden).unwrap();
        assert!(almost_injective(&id, &golden, 0).unwrap());
        assert!(almost_surjective(&id, &golden, &golden, 0).unwrap());

        // label collapse on a doubled golden mean: two-to-one on the first
        // coordinate, injective after one shift
        let a = Alphabet::new(["0a", "0b", "1"]).unwrap();
        let doubled = Presentation::new(
            a,
            vec!["g0".into(), "g1".into()],
            vec![
                crate::presentation::Edge {
                    from: 0,
                    label: 0,
                    to: 0,
                },
                crate::presentation::Edge {
                    from: 0,
                    label: 1,
                    to: 0,
                },
                crate::presentation::Edge {
                    from: 0,
                    label: 2,
                    to: 1,
                },
                crate::presentation::Edge {
                    from: 1,
                    label: 0,
                    to: 0,
                },
                crate::presentation::Edge {
                    from: 1,
                    label: 1,
                    to: 0,
                },
            ],
        )
        .unwrap();
        let mut table = BTreeMap::new();
        table.insert(vec![0usize], golden.alphabet.id_of("0").unwrap());
        table.insert(vec![1usize], golden.alphabet.id_of("0").unwrap());
        table.insert(vec![2usize], golden.alphabet.id_of("1").unwrap());
        let collapse = compile_block_map(&doubled, &golden, 1, &table, 0).unwrap();
        assert!(!almost_injective(&collapse, &doubled, 0).unwrap());
        // collapsing the first symbol still distinguishes tails forever
        assert!(!almost_injective(&collapse, &doubled, 1).unwrap());
        assert!(almost_surjective(&collapse, &doubled, &golden, 0).unwrap());
    }
}
