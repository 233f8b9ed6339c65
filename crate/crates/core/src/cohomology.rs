//! Integer cylinder functions, cycle sums, coboundary and positivity
//! decisions, cocycle evaluation on cover orbit data, and Bowen–Franks
//! invariants through Smith normal form.
//!
//! Coboundary and positivity certificates are searched over transfer
//! functions of bounded cylinder depth.  Positivity reduces to a system of
//! difference constraints, so Bellman–Ford either produces an integer
//! certificate or a periodic orbit with negative sum.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;

use crate::cover::{CoverGraph, CoverPoint};
use crate::error::{Error, Result};
use crate::presentation::{EvPerPoint, Presentation, SftMatrix, Word};

/// An integer-valued function depending on finitely many coordinates: a table
/// on the admissible words of one fixed depth.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CylFunction {
    pub depth: usize,
    pub values: BTreeMap<Word, i64>,
}

pub const MAX_DEPTH: usize = 12;

impl CylFunction {
    pub fn new(p: &Presentation, depth: usize, values: BTreeMap<Word, i64>) -> Result<Self> {
        if depth > MAX_DEPTH {
            return Err(Error::DepthOverflow(depth, MAX_DEPTH));
        }
        let words = p.words_of_length(depth);
        for w in &words {
            if !values.contains_key(w) {
                return Err(Error::Parse(format!(
                    "cylinder table misses admissible word {:?}",
                    p.render_word(w)
                )));
            }
        }
        for w in values.keys() {
            if !p.is_admissible(w) {
                return Err(Error::NotAdmissible(p.render_word(w)));
            }
        }
        Ok(CylFunction { depth, values })
    }

    pub fn constant(p: &Presentation, c: i64) -> Self {
        let mut values = BTreeMap::new();
        values.insert(Vec::new(), c);
        CylFunction::new(p, 0, values).unwrap()
    }

    /// Indicator of the cylinder of a word.
    pub fn indicator(p: &Presentation, w: &Word) -> Result<Self> {
        if !p.is_admissible(w) {
            return Err(Error::NotAdmissible(p.render_word(w)));
        }
        let mut values = BTreeMap::new();
        for word in p.words_of_length(w.len()) {
            values.insert(word.clone(), if &word == w { 1 } else { 0 });
        }
        CylFunction::new(p, w.len(), values)
    }

    /// Depth-1 function given per first symbol.
    pub fn by_first_symbol(
        p: &Presentation,
        table: &BTreeMap<crate::presentation::SymId, i64>,
    ) -> Result<Self> {
        let mut values = BTreeMap::new();
        for w in p.words_of_length(1) {
            let v = table.get(&w[0]).copied().ok_or_else(|| {
                Error::Parse(format!(
                    "missing value for symbol {}",
                    p.alphabet.symbol(w[0])
                ))
            })?;
            values.insert(w, v);
        }
        CylFunction::new(p, 1, values)
    }

    pub fn eval_word(&self, w: &[crate::presentation::SymId]) -> i64 {
        assert!(w.len() >= self.depth);
        *self
            .values
            .get(&w[..self.depth].to_vec())
            .unwrap_or_else(|| panic!("word outside the admissible table"))
    }

    pub fn eval(&self, x: &EvPerPoint) -> i64 {
        self.eval_word(&x.prefix(self.depth.max(1)))
    }

    /// Iterated sum `f(x) + f(sx) + ... + f(s^{n-1} x)`.
    pub fn iterated(&self, x: &EvPerPoint, n: usize) -> i64 {
        let mut total = 0;
        let mut cur = x.clone();
        for _ in 0..n {
            total += self.eval(&cur);
            cur = cur.shift();
        }
        total
    }

    pub fn add(&self, p: &Presentation, other: &CylFunction) -> CylFunction {
        self.zip(p, other, |a, b| a + b)
    }

    pub fn sub(&self, p: &Presentation, other: &CylFunction) -> CylFunction {
        self.zip(p, other, |a, b| a - b)
    }

    pub fn negate(&self, p: &Presentation) -> CylFunction {
        let zero = CylFunction::constant(p, 0);
        zero.sub(p, self)
    }

    fn zip(
        &self,
        p: &Presentation,
        other: &CylFunction,
        op: impl Fn(i64, i64) -> i64,
    ) -> CylFunction {
        let depth = self.depth.max(other.depth);
        let mut values = BTreeMap::new();
        for w in p.words_of_length(depth) {
            values.insert(w.clone(), op(self.eval_word(&w), other.eval_word(&w)));
        }
        CylFunction { depth, values }
    }

    /// The composition with the shift: depth grows by one.
    pub fn compose_shift(&self, p: &Presentation) -> CylFunction {
        let depth = self.depth + 1;
        let mut values = BTreeMap::new();
        for w in p.words_of_length(depth) {
            values.insert(w.clone(), self.eval_word(&w[1..]));
        }
        CylFunction { depth, values }
    }
}

/// Sum of a cylinder function over each periodic orbit up to a bound.
pub fn cycle_sums(
    p: &Presentation,
    f: &CylFunction,
    period_bound: usize,
) -> Vec<(EvPerPoint, i64)> {
    p.periodic_orbits_up_to(period_bound)
        .into_iter()
        .map(|x| {
            let s = f.iterated(&x, x.lp());
            (x, s)
        })
        .collect()
}

#[derive(Debug, Clone)]
pub enum Decision {
    Yes(CylFunction),
    No { witness: EvPerPoint, orbit_sum: i64 },
    Unknown,
}

// ---------------------------------------------------------------------------
// word graph and Bellman-Ford
// ---------------------------------------------------------------------------

struct WordGraph {
    nodes: Vec<Word>,
    /// (from, to, weight, connecting word)
    edges: Vec<(usize, usize, i64, Word)>,
}

fn word_graph(p: &Presentation, f: &CylFunction, d: usize) -> WordGraph {
    assert!(d + 1 >= f.depth);
    let nodes = p.words_of_length(d);
    let index: HashMap<Word, usize> = nodes
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, w)| (w, i))
        .collect();
    let mut edges = Vec::new();
    for w in p.words_of_length(d + 1) {
        let from = index[&w[..d].to_vec()];
        let to = index[&w[1..].to_vec()];
        edges.push((from, to, f.eval_word(&w), w));
    }
    WordGraph { nodes, edges }
}

/// Bellman-Ford from a virtual source; returns either distances or a cycle
/// with negative total weight (as a list of edge indices in forward order).
fn bellman_ford(
    n: usize,
    edges: &[(usize, usize, i64, Word)],
) -> std::result::Result<Vec<i64>, Vec<usize>> {
    let mut dist = vec![0i64; n];
    let mut parent: Vec<Option<usize>> = vec![None; n]; // incoming edge index
    for _ in 0..n {
        let mut changed = false;
        for (ei, &(u, v, w, _)) in edges.iter().enumerate() {
            if dist[u] + w < dist[v] {
                dist[v] = dist[u] + w;
                parent[v] = Some(ei);
                changed = true;
            }
        }
        if !changed {
            return Ok(dist);
        }
    }
    // a further relaxation reveals a vertex on or reachable from a negative
    // cycle; walk parents n times to land on the cycle, then collect it
    for &(u, v, w, _) in edges {
        if dist[u] + w < dist[v] {
            let mut x = u;
            for _ in 0..n {
                x = edges[parent[x].unwrap()].0;
            }
            let start = x;
            let mut cycle_edges = Vec::new();
            let mut cur = start;
            loop {
                let ei = parent[cur].unwrap();
                cycle_edges.push(ei);
                cur = edges[ei].0;
                if cur == start {
                    break;
                }
            }
            cycle_edges.reverse();
            return Err(cycle_edges);
        }
    }
    Ok(dist)
}

fn cycle_to_point(edges: &[(usize, usize, i64, Word)], cycle: &[usize]) -> EvPerPoint {
    // the forward edge cycle spells a periodic point by the first symbols
    // of the connecting words
    let alpha: Word = cycle.iter().map(|&ei| edges[ei].3[0]).collect();
    EvPerPoint::new(Vec::new(), alpha)
}

/// Decide whether `f` is a coboundary `b - b . shift`.
///
/// A periodic orbit with nonzero sum is a sound "no" witness.  Otherwise a
/// transfer `b` is searched at cylinder depths up to `depth(f) + vertex
/// count`; success is a sound "yes".  Neither failure is assumed complete.
pub fn is_coboundary(p: &Presentation, f: &CylFunction) -> Decision {
    let d0 = f.depth.saturating_sub(1);
    let g = word_graph(p, f, d0);
    // nonzero cycle sums refute: check via negative-cycle detection on f and -f
    for sign in [1i64, -1] {
        let signed: Vec<(usize, usize, i64, Word)> = g
            .edges
            .iter()
            .map(|(u, v, w, word)| (*u, *v, sign * w, word.clone()))
            .collect();
        if let Err(cyc) = bellman_ford(g.nodes.len(), &signed) {
            let witness = cycle_to_point(&signed, &cyc);
            let orbit_sum = f.iterated(&witness, witness.lp());
            debug_assert_ne!(orbit_sum, 0);
            return Decision::No { witness, orbit_sum };
        }
    }
    for d in d0..=f.depth + p.vertex_count() + 1 {
        if d > MAX_DEPTH {
            break;
        }
        if let Some(b) = transfer_at_depth(p, f, d) {
            return Decision::Yes(b);
        }
    }
    Decision::Unknown
}

fn transfer_at_depth(p: &Presentation, f: &CylFunction, d: usize) -> Option<CylFunction> {
    let g = word_graph(p, f, d);
    let n = g.nodes.len();
    // solve b[u] - b[v] = w for each edge (u, v, w) by propagation
    let mut b: Vec<Option<i64>> = vec![None; n];
    let mut adj: Vec<Vec<(usize, i64)>> = vec![Vec::new(); n];
    for &(u, v, w, _) in &g.edges {
        adj[u].push((v, w)); // b[v] = b[u] - w
        adj[v].push((u, -w)); // treat undirected for propagation
    }
    for start in 0..n {
        if b[start].is_some() {
            continue;
        }
        b[start] = Some(0);
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            let bu = b[u].unwrap();
            for &(v, w) in &adj[u] {
                let want = bu - w;
                match b[v] {
                    None => {
                        b[v] = Some(want);
                        stack.push(v);
                    }
                    Some(bv) => {
                        if bv != want {
                            return None;
                        }
                    }
                }
            }
        }
    }
    let values: BTreeMap<Word, i64> = g
        .nodes
        .iter()
        .enumerate()
        .map(|(i, w)| (w.clone(), b[i].unwrap()))
        .collect();
    let bf = CylFunction { depth: d, values };
    // re-check the defining identity exhaustively at the working depth
    let check_depth = d + 1;
    for w in p.words_of_length(check_depth) {
        if f.eval_word(&w) != bf.eval_word(&w) - bf.eval_word(&w[1..]) {
            return None;
        }
    }
    Some(bf)
}

/// Decide whether `[f]` lies in the positive cone: some representative
/// `f + b - b . shift` is nonnegative everywhere.
///
/// The constraint system is a set of difference constraints, so the decision
/// is exact: a negative cycle in the constraint graph is a periodic orbit
/// with negative `f`-sum (a sound "no"), and otherwise shortest-path
/// potentials give an integer certificate.
pub fn positivity(p: &Presentation, f: &CylFunction, depth_bound: usize) -> Decision {
    let d0 = f.depth.saturating_sub(1);
    if d0 > depth_bound || d0 > MAX_DEPTH {
        return Decision::Unknown;
    }
    let g = word_graph(p, f, d0);
    match bellman_ford(g.nodes.len(), &g.edges) {
        Err(cyc) => {
            let witness = cycle_to_point(&g.edges, &cyc);
            let orbit_sum = f.iterated(&witness, witness.lp());
            debug_assert!(orbit_sum < 0);
            Decision::No { witness, orbit_sum }
        }
        Ok(dist) => {
            let values: BTreeMap<Word, i64> = g
                .nodes
                .iter()
                .enumerate()
                .map(|(i, w)| (w.clone(), dist[i]))
                .collect();
            let b = CylFunction { depth: d0, values };
            // the certificate must make f + b - b.shift nonnegative on every
            // admissible window
            let check_depth = d0 + 1;
            for w in p.words_of_length(check_depth) {
                let v = f.eval_word(&w) + b.eval_word(&w) - b.eval_word(&w[1..]);
                assert!(v >= 0, "positivity certificate failed its own check");
            }
            Decision::Yes(b)
        }
    }
}

// ---------------------------------------------------------------------------
// groupoid elements over the cover and the cocycle map
// ---------------------------------------------------------------------------

/// A single orbit-equivalence arrow between two cover points: `p = j - i` and
/// the two points meet after `j` and `i` shifts respectively.
#[derive(Debug, Clone)]
pub struct GroupoidElementRef {
    pub source: CoverPoint,
    pub target: CoverPoint,
    pub p: i64,
    pub i: usize,
    pub j: usize,
}

impl GroupoidElementRef {
    /// Validates the meeting data on construction.
    pub fn new(
        cover: &CoverGraph,
        target: CoverPoint,
        p: i64,
        source: CoverPoint,
        i: usize,
        j: usize,
    ) -> Result<Self> {
        cover.validate_point(&target)?;
        cover.validate_point(&source)?;
        if p != j as i64 - i as i64 {
            return Err(Error::BadGroupoidElement(format!(
                "p = {p} but j - i = {}",
                j as i64 - i as i64
            )));
        }
        if target.shift_n(j) != source.shift_n(i) {
            return Err(Error::BadGroupoidElement(
                "shifted points do not meet at the declared indices".into(),
            ));
        }
        Ok(GroupoidElementRef {
            source,
            target,
            p,
            i,
            j,
        })
    }

    /// Groupoid composition: the target of `other` must equal the source of
    /// `self`.
    pub fn compose(
        &self,
        cover: &CoverGraph,
        other: &GroupoidElementRef,
    ) -> Result<GroupoidElementRef> {
        if self.source != other.target {
            return Err(Error::BadGroupoidElement("endpoints do not match".into()));
        }
        GroupoidElementRef::new(
            cover,
            self.target.clone(),
            self.p + other.p,
            other.source.clone(),
            self.i + other.i,
            self.j + other.j,
        )
    }
}

/// Evaluate the cocycle associated to a base cylinder function on a groupoid
/// element; it is the unique cocycle whose value on a one-step arrow
/// `(x, 1, shift x)` is `f` of the base point.
pub fn kappa_eval(cover: &CoverGraph, f: &CylFunction, g: &GroupoidElementRef) -> i64 {
    let mut total = 0i64;
    let mut x = g.target.clone();
    for _ in 0..g.j {
        total += f.eval(&cover.factor_image(&x));
        x = x.shift();
    }
    let mut y = g.source.clone();
    for _ in 0..g.i {
        total -= f.eval(&cover.factor_image(&y));
        y = y.shift();
    }
    total
}

/// The canonical cocycle just reads off the arrow's degree.
pub fn canonical_cocycle_eval(g: &GroupoidElementRef) -> i64 {
    g.p
}

/// Compose a cylinder function on the cover (given through its edge shift)
/// with the cover shift: the table depth grows by one.
pub fn compose_with_cover_shift(cover_edges: &Presentation, f: &CylFunction) -> CylFunction {
    f.compose_shift(cover_edges)
}

// ---------------------------------------------------------------------------
// Smith normal form and Bowen-Franks data
// ---------------------------------------------------------------------------

/// Smith normal form presentation of a finitely generated abelian group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianGroupPresentation {
    /// Diagonal of the Smith normal form (nonnegative, each dividing the
    /// next; zeros are free factors).
    pub invariant_factors: Vec<BigInt>,
    pub determinant: BigInt,
}

impl AbelianGroupPresentation {
    /// Nontrivial torsion factors plus free rank.
    pub fn reduced(&self) -> (Vec<BigInt>, usize) {
        let one = BigInt::from(1);
        let zero = BigInt::from(0);
        let torsion: Vec<BigInt> = self
            .invariant_factors
            .iter()
            .filter(|d| **d != one && **d != zero)
            .cloned()
            .collect();
        let rank = self
            .invariant_factors
            .iter()
            .filter(|d| **d == zero)
            .count();
        (torsion, rank)
    }

    pub fn is_trivial(&self) -> bool {
        let (t, r) = self.reduced();
        t.is_empty() && r == 0
    }

    pub fn same_group(&self, other: &AbelianGroupPresentation) -> bool {
        self.reduced() == other.reduced()
    }
}

pub struct SnfDecomposition {
    pub diag: Vec<BigInt>,
    pub u: Vec<Vec<BigInt>>,
    pub v: Vec<Vec<BigInt>>,
    /// the transformed matrix U A V
    pub d: Vec<Vec<BigInt>>,
}

fn identity_big(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| (0..n).map(|j| BigInt::from((i == j) as i64)).collect())
        .collect()
}

/// Smith normal form over the integers with unimodular transforms.
pub fn smith_normal_form(a: &[Vec<BigInt>]) -> SnfDecomposition {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut m: Vec<Vec<BigInt>> = a.to_vec();
    let mut u = identity_big(rows);
    let mut v = identity_big(cols);
    let zero = BigInt::from(0);

    let mut k = 0usize;
    while k < rows.min(cols) {
        // pivot: smallest nonzero absolute value in the trailing block
        let mut pivot: Option<(usize, usize)> = None;
        for i in k..rows {
            for j in k..cols {
                if m[i][j] != zero {
                    let better = match &pivot {
                        None => true,
                        Some((pi, pj)) => m[i][j].magnitude() < m[*pi][*pj].magnitude(),
                    };
                    if better {
                        pivot = Some((i, j));
                    }
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        m.swap(k, pi);
        u.swap(k, pi);
        for row in m.iter_mut() {
            row.swap(k, pj);
        }
        for row in v.iter_mut() {
            row.swap(k, pj);
        }
        // clear row and column k by Euclid steps
        let mut dirty = true;
        while dirty {
            dirty = false;
            for i in k + 1..rows {
                if m[i][k] != zero {
                    let q = div_floor(&m[i][k], &m[k][k]);
                    for j in 0..cols {
                        let t = &m[k][j] * &q;
                        m[i][j] -= t;
                    }
                    for j in 0..rows {
                        let t = &u[k][j] * &q;
                        u[i][j] -= t;
                    }
                    if m[i][k] != zero {
                        m.swap(k, i);
                        u.swap(k, i);
                        dirty = true;
                    }
                }
            }
            for j in k + 1..cols {
                if m[k][j] != zero {
                    let q = div_floor(&m[k][j], &m[k][k]);
                    for i in 0..rows {
                        let t = &m[i][k] * &q;
                        m[i][j] -= t;
                    }
                    for i in 0..cols {
                        let t = &v[i][k] * &q;
                        v[i][j] -= t;
                    }
                    if m[k][j] != zero {
                        for row in m.iter_mut() {
                            row.swap(k, j);
                        }
                        for row in v.iter_mut() {
                            row.swap(k, j);
                        }
                        dirty = true;
                    }
                }
            }
        }
        // divisibility: fold a non-divisible entry into row k and restart
        let dk = m[k][k].clone();
        let mut fixed = true;
        'div: for i in k + 1..rows {
            for j in k + 1..cols {
                if &m[i][j] % &dk != zero {
                    for jj in 0..cols {
                        let t = m[i][jj].clone();
                        m[k][jj] += t;
                    }
                    for jj in 0..rows {
                        let t = u[i][jj].clone();
                        u[k][jj] += t;
                    }
                    fixed = false;
                    break 'div;
                }
            }
        }
        if fixed {
            k += 1;
        }
    }
    // normalize diagonal signs
    for k in 0..rows.min(cols) {
        if m[k][k] < zero {
            for j in 0..cols {
                m[k][j] = -m[k][j].clone();
            }
            for j in 0..rows {
                u[k][j] = -u[k][j].clone();
            }
        }
    }
    let diag = (0..rows.min(cols)).map(|k| m[k][k].clone()).collect();
    SnfDecomposition { diag, u, v, d: m }
}

fn div_floor(a: &BigInt, b: &BigInt) -> BigInt {
    // rounded quotient so remainders shrink fast
    let (q, r) = (a / b, a % b);
    let two_r: BigInt = &r * BigInt::from(2);
    if two_r.magnitude() > b.magnitude() {
        if (r >= BigInt::from(0)) == (*b >= BigInt::from(0)) {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

/// Exact determinant by fraction-free Gaussian elimination.
pub fn determinant(a: &[Vec<BigInt>]) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::from(1);
    }
    let mut m: Vec<Vec<BigInt>> = a.to_vec();
    let zero = BigInt::from(0);
    let mut sign = BigInt::from(1);
    let mut prev = BigInt::from(1);
    for k in 0..n - 1 {
        if m[k][k] == zero {
            let swap = (k + 1..n).find(|&i| m[i][k] != zero);
            match swap {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return zero,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = &t / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * m[n - 1][n - 1].clone()
}

/// `I - A` as a big-integer matrix.
pub fn i_minus_a(a: &SftMatrix) -> Vec<Vec<BigInt>> {
    let n = a.size();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| BigInt::from((i == j) as i64) - BigInt::from(a.entries[i][j]))
                .collect()
        })
        .collect()
}

/// Bowen-Franks data of a nonnegative integer matrix: the cokernel of
/// `I - A` in Smith normal form together with `det(I - A)`.
pub fn bowen_franks(a: &SftMatrix) -> AbelianGroupPresentation {
    let m = i_minus_a(a);
    let snf = smith_normal_form(&m);
    let mut diag = snf.diag;
    // a square matrix contributes one diagonal slot per row
    while diag.len() < a.size() {
        diag.push(BigInt::from(0));
    }
    AbelianGroupPresentation {
        invariant_factors: diag,
        determinant: determinant(&m),
    }
}
