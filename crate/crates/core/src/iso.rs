//! Labeled-multigraph isomorphism by backtracking with signature pruning.
//!
//! Presentations in scope stay small (a few dozen vertices), so a brute-force
//! search with degree/label pruning is enough.  When the two alphabets differ,
//! a label correspondence is searched for as part of the match: a bijection
//! when the alphabets have equal size, otherwise a function from the finer
//! (all-distinct) alphabet onto the coarser one.

use std::collections::BTreeMap;

use crate::presentation::{Presentation, SymId, VertId};

/// A successful match: vertex bijection (indexed by vertices of the first
/// graph) plus the induced label correspondence from the first alphabet into
/// the second.
#[derive(Debug, Clone)]
pub struct Isomorphism {
    pub vertex_map: Vec<VertId>,
    pub label_map: BTreeMap<SymId, SymId>,
}

/// Label-preserving isomorphism when the alphabets agree symbol-for-symbol;
/// otherwise a label correspondence is discovered as part of the search.
pub fn graph_isomorphic(p1: &Presentation, p2: &Presentation) -> Option<Isomorphism> {
    if p1.vertex_count() != p2.vertex_count() || p1.edges.len() != p2.edges.len() {
        return None;
    }
    let same_alphabet = p1.alphabet.symbols().eq(p2.alphabet.symbols());
    if same_alphabet {
        search(p1, p2, LabelMode::Identity)
    } else if p1.alphabet.len() == p2.alphabet.len() {
        search(p1, p2, LabelMode::Bijection)
    } else {
        // allow a consistent many-to-one correspondence in either direction
        search(p1, p2, LabelMode::Function).or_else(|| {
            search(p2, p1, LabelMode::Function).map(|iso| invert(iso, p1.vertex_count()))
        })
    }
}

/// Isomorphism of the underlying directed multigraphs, ignoring labels.
pub fn multigraph_isomorphic(p1: &Presentation, p2: &Presentation) -> Option<Vec<VertId>> {
    if p1.vertex_count() != p2.vertex_count() || p1.edges.len() != p2.edges.len() {
        return None;
    }
    search(p1, p2, LabelMode::Ignore).map(|iso| iso.vertex_map)
}

#[derive(Clone, Copy, PartialEq)]
enum LabelMode {
    Identity,
    Bijection,
    Function,
    Ignore,
}

fn invert(iso: Isomorphism, n: usize) -> Isomorphism {
    let mut vertex_map = vec![0; n];
    for (v, &w) in iso.vertex_map.iter().enumerate() {
        vertex_map[w] = v;
    }
    // a function correspondence is not invertible label-wise; report the
    // pairs seen, coarse side first
    let label_map = iso.label_map.iter().map(|(&a, &b)| (b, a)).collect();
    Isomorphism {
        vertex_map,
        label_map,
    }
}

fn degree_signature(p: &Presentation, v: VertId, mode: LabelMode) -> Vec<(usize, usize)> {
    // (out-degree, in-degree) per label, or aggregated when labels are ignored
    match mode {
        LabelMode::Ignore | LabelMode::Bijection | LabelMode::Function => {
            let out = p.edges.iter().filter(|e| e.from == v).count();
            let inn = p.edges.iter().filter(|e| e.to == v).count();
            vec![(out, inn)]
        }
        LabelMode::Identity => {
            let mut sig = Vec::new();
            for a in p.alphabet.ids() {
                let out = p
                    .edges
                    .iter()
                    .filter(|e| e.from == v && e.label == a)
                    .count();
                let inn = p.edges.iter().filter(|e| e.to == v && e.label == a).count();
                sig.push((out, inn));
            }
            sig
        }
    }
}

fn search(p1: &Presentation, p2: &Presentation, mode: LabelMode) -> Option<Isomorphism> {
    let n = p1.vertex_count();
    assert!(
        n <= 32,
        "isomorphism search is sized for small presentations"
    );
    let sig1: Vec<_> = (0..n).map(|v| degree_signature(p1, v, mode)).collect();
    let sig2: Vec<_> = (0..n).map(|v| degree_signature(p2, v, mode)).collect();
    let mut vmap: Vec<Option<VertId>> = vec![None; n];
    let mut used = vec![false; n];
    let mut lmap: BTreeMap<SymId, SymId> = BTreeMap::new();
    if mode == LabelMode::Identity {
        for a in p1.alphabet.ids() {
            lmap.insert(a, a);
        }
    }
    let mut lused = vec![false; p2.alphabet.len()];
    if backtrack(
        p1, p2, mode, &sig1, &sig2, &mut vmap, &mut used, &mut lmap, &mut lused, 0,
    ) {
        Some(Isomorphism {
            vertex_map: vmap.into_iter().map(|v| v.unwrap()).collect(),
            label_map: lmap,
        })
    } else {
        None
    }
}

#[allow(clippy::too_many_arguments)]
fn backtrack(
    p1: &Presentation,
    p2: &Presentation,
    mode: LabelMode,
    sig1: &[Vec<(usize, usize)>],
    sig2: &[Vec<(usize, usize)>],
    vmap: &mut Vec<Option<VertId>>,
    used: &mut Vec<bool>,
    lmap: &mut BTreeMap<SymId, SymId>,
    lused: &mut Vec<bool>,
    v: VertId,
) -> bool {
    let n = p1.vertex_count();
    if v == n {
        return check_full(p1, p2, mode, vmap, lmap, lused);
    }
    for w in 0..n {
        if used[w] || sig1[v] != sig2[w] {
            continue;
        }
        vmap[v] = Some(w);
        used[w] = true;
        if backtrack(p1, p2, mode, sig1, sig2, vmap, used, lmap, lused, v + 1) {
            return true;
        }
        vmap[v] = None;
        used[w] = false;
    }
    false
}

fn check_full(
    p1: &Presentation,
    p2: &Presentation,
    mode: LabelMode,
    vmap: &[Option<VertId>],
    lmap: &mut BTreeMap<SymId, SymId>,
    lused: &mut Vec<bool>,
) -> bool {
    // try to extend the vertex bijection to a consistent edge/label match
    let mut remaining: Vec<(VertId, VertId, SymId)> =
        p2.edges.iter().map(|e| (e.from, e.to, e.label)).collect();
    let saved_lmap = lmap.clone();
    let saved_lused = lused.clone();
    let mut ok = true;
    for e in &p1.edges {
        let f = vmap[e.from].unwrap();
        let t = vmap[e.to].unwrap();
        // candidate target edges between the mapped endpoints
        let pos = remaining.iter().position(|&(a, b, lab)| {
            if a != f || b != t {
                return false;
            }
            match mode {
                LabelMode::Ignore => true,
                LabelMode::Identity => lab == e.label,
                LabelMode::Bijection | LabelMode::Function => match lmap.get(&e.label) {
                    Some(&mapped) => mapped == lab,
                    None => mode == LabelMode::Function || !lused[lab],
                },
            }
        });
        match pos {
            Some(i) => {
                let (_, _, lab) = remaining.remove(i);
                if matches!(mode, LabelMode::Bijection | LabelMode::Function)
                    && !lmap.contains_key(&e.label)
                {
                    lmap.insert(e.label, lab);
                    lused[lab] = true;
                }
            }
            None => {
                ok = false;
                break;
            }
        }
    }
    if !ok || !remaining.is_empty() {
        *lmap = saved_lmap;
        *lused = saved_lused;
        return false;
    }
    true
}
