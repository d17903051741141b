//! Auditors for three uniform-density notions, each with a certificate that
//! can be re-checked from scratch.
//!
//! * vertex: every `U` spans at least `d·C(|U|,k) − η·n^k` edges;
//! * triple: every `X, Y, Z` carry at least `d|X||Y||Z| − η·n³` ordered
//!   triples `(x, y, z) ∈ X×Y×Z` with `{x, y, z}` an edge;
//! * profile: the least relative density `e(U)/C(|U|,k)` over `|U| ≥ ⌈η·n⌉`.
//!
//! The slack of a certificate is the left side minus the right side, so a
//! negative slack is a violation.

use std::cmp::Ordering;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::combinatorics::binomial_f64;
use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, Vertex};

/// Largest `n` for the exhaustive vertex and profile audits.
pub const EXACT_VERTEX_LIMIT: usize = 24;
/// Largest `n` for the exhaustive triple audit.
pub const EXACT_TRIPLE_LIMIT: usize = 10;
/// Largest `n` accepted by the heuristic auditors.
pub const HEURISTIC_LIMIT: usize = 4096;
/// Default number of random restarts.
pub const DEFAULT_RESTARTS: usize = 64;
/// Cap on descent cycles per restart.
pub const MAX_DESCENT_CYCLES: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Heuristic,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityQuery {
    pub d: f64,
    pub eta: f64,
    pub mode: Mode,
    /// Number of random restarts in heuristic mode.
    pub budget: usize,
    pub seed: u64,
}

impl DensityQuery {
    pub fn new(d: f64, eta: f64, mode: Mode) -> Result<Self> {
        let q = DensityQuery {
            d,
            eta,
            mode,
            budget: DEFAULT_RESTARTS,
            seed: 0,
        };
        q.validate()?;
        Ok(q)
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.d) {
            return Err(Error::InvalidArgument(format!("d = {} outside [0, 1]", self.d)));
        }
        if !(self.eta > 0.0 && self.eta.is_finite()) {
            return Err(Error::InvalidArgument(format!("eta = {} must be positive", self.eta)));
        }
        if self.budget == 0 {
            return Err(Error::InvalidArgument("budget must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Satisfied,
    Violated,
    Unresolved,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Notion {
    Vertex,
    Triple,
    Profile,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Certificate {
    Vertex {
        #[serde(rename = "U")]
        u: Vec<Vertex>,
    },
    Triple {
        #[serde(rename = "X")]
        x: Vec<Vertex>,
        #[serde(rename = "Y")]
        y: Vec<Vertex>,
        #[serde(rename = "Z")]
        z: Vec<Vertex>,
    },
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Stats {
    pub sets_examined: u64,
    pub descent_iterations: u64,
    pub restarts: usize,
    /// Every restart reached a fixed point within the cycle cap.
    pub converged: bool,
    /// Objective after each descent step of the best restart.
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub trace: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityReport {
    pub notion: Notion,
    pub verdict: Verdict,
    pub mode: Mode,
    pub d: f64,
    pub eta: f64,
    /// Present in exact mode (the minimiser) and whenever the verdict is violated.
    pub certificate: Option<Certificate>,
    /// Least slack found.
    pub slack: f64,
    pub stats: Stats,
}

impl DensityReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serialises")
    }
}

/// Recomputes the slack of a certificate by direct counting.
pub fn verify_density_certificate(h: &Hypergraph, cert: &Certificate, d: f64, eta: f64) -> Result<f64> {
    let n = h.vertex_count();
    let k = h.uniformity();
    let check = |set: &[Vertex]| -> Result<()> {
        match set.iter().find(|&&v| v >= n) {
            Some(&vertex) => Err(Error::VertexOutOfRange { vertex, n }),
            None => Ok(()),
        }
    };
    match cert {
        Certificate::Vertex { u } => {
            check(u)?;
            let mut u = u.clone();
            u.sort_unstable();
            u.dedup();
            let e = h.induced_edge_count(&u) as f64;
            Ok(e - d * binomial_f64(u.len(), k) + eta * (n as f64).powi(k as i32))
        }
        Certificate::Triple { x, y, z } => {
            if k != 3 {
                return Err(Error::Uniformity { k, min: 3 });
            }
            check(x)?;
            check(y)?;
            check(z)?;
            let set = |s: &[Vertex]| {
                let mut s = s.to_vec();
                s.sort_unstable();
                s.dedup();
                s
            };
            let (x, y, z) = (set(x), set(y), set(z));
            let mut count = 0u64;
            for &a in &x {
                for &b in &y {
                    for &c in &z {
                        if a == b || b == c || a == c {
                            continue;
                        }
                        let mut e = [a, b, c];
                        e.sort_unstable();
                        count += h.contains_edge(&e) as u64;
                    }
                }
            }
            let product = (x.len() * y.len() * z.len()) as f64;
            Ok(count as f64 - d * product + eta * (n as f64).powi(3))
        }
    }
}

fn mask_to_vec(mask: u64) -> Vec<Vertex> {
    (0..64).filter(|&v| mask >> v & 1 == 1).collect()
}

fn bools_to_vec(set: &[bool]) -> Vec<Vertex> {
    set.iter().enumerate().filter(|(_, &b)| b).map(|(v, _)| v).collect()
}

/// Lexicographic order of the sorted vertex lists of two masks.
fn lex_cmp(a: u64, b: u64) -> Ordering {
    if a == b {
        return Ordering::Equal;
    }
    let low = (a ^ b).trailing_zeros();
    // the lists agree below `low`; the one holding `low` is smaller unless the other has ended
    let (holder, other) = if a >> low & 1 == 1 { (a, b) } else { (b, a) };
    let other_ended = other >> low == 0;
    let holder_smaller = !other_ended;
    let a_smaller = (holder == a) == holder_smaller;
    if a_smaller {
        Ordering::Less
    } else {
        Ordering::Greater
    }
}

/// Per subset size, the fewest induced edges and the lexicographically least set attaining it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SizeMinima {
    pub min_edges: Vec<u64>,
    pub argmin: Vec<u64>,
    pub sets_examined: u64,
}

impl SizeMinima {
    fn new(n: usize) -> Self {
        SizeMinima {
            min_edges: vec![u64::MAX; n + 1],
            argmin: vec![0; n + 1],
            sets_examined: 0,
        }
    }

    fn offer(&mut self, mask: u64, edges: u64) {
        let s = mask.count_ones() as usize;
        let better = edges < self.min_edges[s]
            || (edges == self.min_edges[s] && lex_cmp(mask, self.argmin[s]) == Ordering::Less);
        if better {
            self.min_edges[s] = edges;
            self.argmin[s] = mask;
        }
    }

    fn merge(mut self, other: SizeMinima) -> SizeMinima {
        for s in 0..self.min_edges.len() {
            if other.min_edges[s] != u64::MAX {
                self.offer(other.argmin[s], other.min_edges[s]);
            }
        }
        self.sets_examined += other.sets_examined;
        self
    }
}

/// Edges through `v` whose other vertices all lie in `set` (`v` itself excluded from the test).
struct Incremental {
    k: usize,
    /// For `k = 3`: `link[v][a]` is the mask of `b` with `{v, a, b}` an edge.
    link: Vec<Vec<u64>>,
    /// Otherwise: masks of `e \ {v}` for edges `e` through `v`.
    rest: Vec<Vec<u64>>,
}

impl Incremental {
    fn new(h: &Hypergraph) -> Self {
        let n = h.vertex_count();
        let k = h.uniformity();
        let mut link = Vec::new();
        let mut rest = Vec::new();
        if k == 3 {
            link = vec![vec![0u64; n]; n];
            for e in h.edges() {
                for i in 0..3 {
                    let (a, b) = (e[(i + 1) % 3], e[(i + 2) % 3]);
                    link[e[i]][a] |= 1 << b;
                    link[e[i]][b] |= 1 << a;
                }
            }
        } else {
            rest = vec![Vec::new(); n];
            for e in h.edges() {
                let full = e.iter().fold(0u64, |m, &v| m | 1 << v);
                for &v in e {
                    rest[v].push(full & !(1 << v));
                }
            }
        }
        Incremental { k, link, rest }
    }

    fn through(&self, v: usize, set: u64) -> u64 {
        let set = set & !(1 << v);
        if self.k == 3 {
            let mut pairs = 0u64;
            let mut rem = set;
            while rem != 0 {
                let a = rem.trailing_zeros() as usize;
                rem &= rem - 1;
                pairs += (self.link[v][a] & set).count_ones() as u64;
            }
            pairs / 2
        } else {
            self.rest[v].iter().filter(|&&m| m & !set == 0).count() as u64
        }
    }
}

fn gray_chunk(inc: &Incremental, n: usize, low_bits: usize, high: u64) -> SizeMinima {
    let mut out = SizeMinima::new(n);
    let mut mask = high << low_bits;
    // edges inside the fixed high part
    let mut edges = 0u64;
    let mut built = 0u64;
    for v in mask_to_vec(mask) {
        edges += inc.through(v, built);
        built |= 1 << v;
    }
    out.offer(mask, edges);
    for i in 1u64..1 << low_bits {
        let v = i.trailing_zeros() as usize;
        let delta = inc.through(v, mask);
        if mask >> v & 1 == 1 {
            edges -= delta;
        } else {
            edges += delta;
        }
        mask ^= 1 << v;
        out.offer(mask, edges);
    }
    out.sets_examined = 1 << low_bits;
    out
}

/// Minimum induced edge count per subset size over all `2^n` subsets.
///
/// Subsets are walked in Gray-code order so each step changes one vertex.
pub fn size_minima(h: &Hypergraph) -> Result<SizeMinima> {
    let n = h.vertex_count();
    if n > EXACT_VERTEX_LIMIT {
        return Err(Error::SizeLimit {
            what: "vertex count for exact audit",
            size: n as u128,
            limit: EXACT_VERTEX_LIMIT as u128,
        });
    }
    Ok(size_minima_unchecked(h))
}

/// [`size_minima`] without the size limit; callers bound `n` themselves (at most 63).
pub(crate) fn size_minima_unchecked(h: &Hypergraph) -> SizeMinima {
    let n = h.vertex_count();
    assert!(n < 64, "subset masks hold at most 63 vertices");
    let inc = Incremental::new(h);
    let high_bits = match n {
        0..=11 => 0,
        12..=19 => 4,
        _ => 6,
    };
    let low_bits = n - high_bits;
    let highs: Vec<u64> = (0..1u64 << high_bits).collect();
    let chunk = |&high: &u64| gray_chunk(&inc, n, low_bits, high);
    #[cfg(feature = "parallel")]
    let parts: Vec<SizeMinima> = {
        use rayon::prelude::*;
        highs.par_iter().map(chunk).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let parts: Vec<SizeMinima> = highs.iter().map(chunk).collect();
    parts
        .into_iter()
        .reduce(SizeMinima::merge)
        .expect("at least one chunk")
}

fn vertex_slack(edges: f64, size: usize, k: usize, n: usize, d: f64, eta: f64) -> f64 {
    edges - d * binomial_f64(size, k) + eta * (n as f64).powi(k as i32)
}

/// Audits `e(U) ≥ d·C(|U|,k) − η·n^k` over vertex subsets.
///
/// Exact mode is exhaustive and returns the minimiser; heuristic mode runs
/// greedy single-vertex flips from random starts and never claims "satisfied".
pub fn vertex_density_check(h: &Hypergraph, q: &DensityQuery) -> Result<DensityReport> {
    q.validate()?;
    let n = h.vertex_count();
    let k = h.uniformity();
    let (slack, set, stats) = match q.mode {
        Mode::Exact => {
            let minima = size_minima(h)?;
            let mut best: Option<(f64, u64)> = None;
            for s in 0..=n {
                let value = vertex_slack(minima.min_edges[s] as f64, s, k, n, q.d, q.eta);
                let mask = minima.argmin[s];
                let better = match best {
                    None => true,
                    Some((b, m)) => value < b || (value == b && lex_cmp(mask, m) == Ordering::Less),
                };
                if better {
                    best = Some((value, mask));
                }
            }
            let (value, mask) = best.expect("n + 1 sizes");
            let stats = Stats {
                sets_examined: minima.sets_examined,
                converged: true,
                ..Stats::default()
            };
            (value, mask_to_vec(mask), stats)
        }
        Mode::Heuristic => heuristic_vertex(h, q)?,
    };
    let verdict = match (slack < 0.0, q.mode) {
        (true, _) => Verdict::Violated,
        (false, Mode::Exact) => Verdict::Satisfied,
        (false, Mode::Heuristic) => Verdict::Unresolved,
    };
    let certificate = (q.mode == Mode::Exact || verdict == Verdict::Violated).then_some(Certificate::Vertex { u: set });
    Ok(DensityReport {
        notion: Notion::Vertex,
        verdict,
        mode: q.mode,
        d: q.d,
        eta: q.eta,
        certificate,
        slack,
        stats,
    })
}

fn check_heuristic_size(n: usize) -> Result<()> {
    if n > HEURISTIC_LIMIT {
        return Err(Error::SizeLimit {
            what: "vertex count for heuristic audit",
            size: n as u128,
            limit: HEURISTIC_LIMIT as u128,
        });
    }
    Ok(())
}

fn restart_rng(seed: u64, restart: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(restart as u64);
    rng
}

#[cfg(feature = "parallel")]
fn run_restarts<T: Send>(count: usize, f: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
    use rayon::prelude::*;
    (0..count).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn run_restarts<T>(count: usize, f: impl Fn(usize) -> T) -> Vec<T> {
    (0..count).map(f).collect()
}

/// For each vertex, the number of edges through it whose other vertices lie in `set`.
fn through_counts(h: &Hypergraph, set: &[bool]) -> Vec<u64> {
    let mut counts = vec![0u64; h.vertex_count()];
    for e in h.edges() {
        let inside = e.iter().filter(|&&v| set[v]).count();
        if inside == e.len() {
            e.iter().for_each(|&v| counts[v] += 1);
        } else if inside + 1 == e.len() {
            let out = *e.iter().find(|&&v| !set[v]).expect("one vertex outside");
            counts[out] += 1;
        }
    }
    counts
}

fn heuristic_vertex(h: &Hypergraph, q: &DensityQuery) -> Result<(f64, Vec<Vertex>, Stats)> {
    let n = h.vertex_count();
    check_heuristic_size(n)?;
    let k = h.uniformity();
    let runs = run_restarts(q.budget, |r| {
        let mut rng = restart_rng(q.seed, r);
        let mut set: Vec<bool> = (0..n).map(|_| rng.random_bool(0.5)).collect();
        let mut size = set.iter().filter(|&&b| b).count();
        let mut edges = h.induced_edge_count(&bools_to_vec(&set)) as f64;
        let mut steps = 0u64;
        loop {
            let through = through_counts(h, &set);
            let mut best: Option<(f64, usize)> = None;
            for v in 0..n {
                let delta = if set[v] {
                    -(through[v] as f64) - q.d * (binomial_f64(size - 1, k) - binomial_f64(size, k))
                } else {
                    through[v] as f64 - q.d * (binomial_f64(size + 1, k) - binomial_f64(size, k))
                };
                if delta < 0.0 && best.is_none_or(|(b, _)| delta < b) {
                    best = Some((delta, v));
                }
            }
            let Some((_, v)) = best else { break };
            edges += if set[v] { -(through[v] as f64) } else { through[v] as f64 };
            size = if set[v] { size - 1 } else { size + 1 };
            set[v] = !set[v];
            steps += 1;
        }
        let slack = vertex_slack(edges, size, k, n, q.d, q.eta);
        (slack, bools_to_vec(&set), steps)
    });
    let mut stats = Stats {
        restarts: q.budget,
        converged: true,
        ..Stats::default()
    };
    let mut best: Option<(f64, Vec<Vertex>)> = None;
    for (slack, set, steps) in runs {
        stats.sets_examined += steps + 1;
        stats.descent_iterations += steps;
        let better = best.as_ref().is_none_or(|(b, s)| slack < *b || (slack == *b && set < *s));
        if better {
            best = Some((slack, set));
        }
    }
    let (slack, set) = best.expect("budget is at least 1");
    Ok((slack, set, stats))
}

/// Ordered-triple weights: for each `v`, the number of `(a, b) ∈ A×B` with
/// `{v, a, b}` an edge.
fn role_weights(h: &Hypergraph, a: &[bool], b: &[bool]) -> Vec<u64> {
    let mut w = vec![0u64; h.vertex_count()];
    for e in h.edges() {
        for i in 0..3 {
            let (p, q) = (e[(i + 1) % 3], e[(i + 2) % 3]);
            w[e[i]] += (a[p] && b[q]) as u64 + (a[q] && b[p]) as u64;
        }
    }
    w
}

fn count_true(s: &[bool]) -> usize {
    s.iter().filter(|&&b| b).count()
}

/// The best third set given the other two, and its objective without the `η·n³` term.
fn best_response(h: &Hypergraph, a: &[bool], b: &[bool], d: f64) -> (Vec<bool>, f64) {
    let weights = role_weights(h, a, b);
    let scale = d * (count_true(a) * count_true(b)) as f64;
    let mut value = 0.0;
    let set = weights
        .iter()
        .map(|&w| {
            let gain = w as f64 - scale;
            if gain < 0.0 {
                value += gain;
            }
            gain < 0.0
        })
        .collect();
    (set, value)
}

fn triple_objective(h: &Hypergraph, x: &[bool], y: &[bool], z: &[bool], d: f64) -> f64 {
    let weights = role_weights(h, x, y);
    let hits: u64 = weights.iter().zip(z).filter(|(_, &in_z)| in_z).map(|(w, _)| w).sum();
    hits as f64 - d * (count_true(x) * count_true(y) * count_true(z)) as f64
}

/// Audits `e(X,Y,Z) ≥ d|X||Y||Z| − η·n³` over subset triples.
///
/// Exact mode enumerates all `(X, Y)` pairs and takes the optimal `Z` in
/// closed form, `Z = {v : deg_{X×Y}(v) < d|X||Y|}`, which attains the minimum
/// over all `Z` for that pair. Heuristic mode cycles that best response over
/// the three coordinates from random starts until a fixed point.
pub fn triple_density_check(h: &Hypergraph, q: &DensityQuery) -> Result<DensityReport> {
    q.validate()?;
    if h.uniformity() != 3 {
        return Err(Error::Uniformity {
            k: h.uniformity(),
            min: 3,
        });
    }
    let n = h.vertex_count();
    let floor = q.eta * (n as f64).powi(3);
    let (value, cert, stats) = match q.mode {
        Mode::Exact => exact_triple(h, q.d)?,
        Mode::Heuristic => heuristic_triple(h, q)?,
    };
    let slack = value + floor;
    let verdict = match (slack < 0.0, q.mode) {
        (true, _) => Verdict::Violated,
        (false, Mode::Exact) => Verdict::Satisfied,
        (false, Mode::Heuristic) => Verdict::Unresolved,
    };
    let certificate = (q.mode == Mode::Exact || verdict == Verdict::Violated).then_some(cert);
    Ok(DensityReport {
        notion: Notion::Triple,
        verdict,
        mode: q.mode,
        d: q.d,
        eta: q.eta,
        certificate,
        slack,
        stats,
    })
}

fn exact_triple(h: &Hypergraph, d: f64) -> Result<(f64, Certificate, Stats)> {
    let n = h.vertex_count();
    if n > EXACT_TRIPLE_LIMIT {
        return Err(Error::SizeLimit {
            what: "vertex count for exact triple audit",
            size: n as u128,
            limit: EXACT_TRIPLE_LIMIT as u128,
        });
    }
    let mut link = vec![vec![0u64; n]; n];
    for e in h.edges() {
        for i in 0..3 {
            let (a, b) = (e[(i + 1) % 3], e[(i + 2) % 3]);
            link[e[i]][a] |= 1 << b;
            link[e[i]][b] |= 1 << a;
        }
    }
    let full = 1u64 << n;
    let for_x = |x: u64| -> (f64, u64, u64, u64) {
        let mut best = (f64::INFINITY, 0, 0, 0);
        let xs = mask_to_vec(x);
        for y in 0..full {
            let scale = d * (xs.len() as u32 * y.count_ones()) as f64;
            let mut value = 0.0;
            let mut z = 0u64;
            for (v, row) in link.iter().enumerate() {
                let w: u32 = xs.iter().map(|&a| (row[a] & y).count_ones()).sum();
                let gain = w as f64 - scale;
                if gain < 0.0 {
                    value += gain;
                    z |= 1 << v;
                }
            }
            if value < best.0 {
                best = (value, x, y, z);
            }
        }
        best
    };
    let xs: Vec<u64> = (0..full).collect();
    #[cfg(feature = "parallel")]
    let results: Vec<(f64, u64, u64, u64)> = {
        use rayon::prelude::*;
        xs.par_iter().map(|&x| for_x(x)).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let results: Vec<(f64, u64, u64, u64)> = xs.iter().map(|&x| for_x(x)).collect();
    // strict improvement keeps the first pair in (X, Y) counter order
    let (value, x, y, z) = results
        .into_iter()
        .fold((f64::INFINITY, 0, 0, 0), |acc, r| if r.0 < acc.0 { r } else { acc });
    let cert = Certificate::Triple {
        x: mask_to_vec(x),
        y: mask_to_vec(y),
        z: mask_to_vec(z),
    };
    let stats = Stats {
        sets_examined: full * full,
        converged: true,
        ..Stats::default()
    };
    Ok((value, cert, stats))
}

struct DescentRun {
    value: f64,
    sets: [Vec<bool>; 3],
    trace: Vec<f64>,
    converged: bool,
}

fn heuristic_triple(h: &Hypergraph, q: &DensityQuery) -> Result<(f64, Certificate, Stats)> {
    let n = h.vertex_count();
    check_heuristic_size(n)?;
    let runs = run_restarts(q.budget, |r| {
        let mut rng = restart_rng(q.seed, r);
        let mut sets: [Vec<bool>; 3] =
            std::array::from_fn(|_| (0..n).map(|_| rng.random_bool(0.5)).collect());
        let mut value = triple_objective(h, &sets[0], &sets[1], &sets[2], q.d);
        let mut trace = vec![value];
        let mut converged = false;
        for _ in 0..MAX_DESCENT_CYCLES {
            let mut changed = false;
            // the objective is symmetric in the roles, so the free set can rotate
            for free in [2, 0, 1] {
                let (a, b) = match free {
                    0 => (&sets[1], &sets[2]),
                    1 => (&sets[0], &sets[2]),
                    _ => (&sets[0], &sets[1]),
                };
                let (next, next_value) = best_response(h, a, b, q.d);
                let tolerance = 1e-9 * (1.0 + value.abs());
                assert!(
                    next_value <= value + tolerance,
                    "descent step increased the objective from {value} to {next_value}"
                );
                if next != sets[free] {
                    changed = true;
                    sets[free] = next;
                }
                value = next_value;
                trace.push(value);
            }
            if !changed {
                converged = true;
                break;
            }
        }
        DescentRun {
            value,
            sets,
            trace,
            converged,
        }
    });
    let mut stats = Stats {
        restarts: q.budget,
        converged: true,
        ..Stats::default()
    };
    let mut best: Option<DescentRun> = None;
    for run in runs {
        let steps = run.trace.len() as u64 - 1;
        stats.descent_iterations += steps;
        stats.sets_examined += steps + 1;
        stats.converged &= run.converged;
        if best.as_ref().is_none_or(|b| run.value < b.value) {
            best = Some(run);
        }
    }
    let best = best.expect("budget is at least 1");
    stats.trace = best.trace;
    let [x, y, z] = &best.sets;
    let cert = Certificate::Triple {
        x: bools_to_vec(x),
        y: bools_to_vec(y),
        z: bools_to_vec(z),
    };
    Ok((best.value, cert, stats))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfileEntry {
    pub eta: f64,
    /// `⌈η·n⌉`, raised to `k` when smaller.
    pub min_size: usize,
    /// Least `e(U)/C(|U|,k)` found over `|U| ≥ min_size`; `None` when no size qualifies.
    pub value: Option<f64>,
    pub certificate: Option<Certificate>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfileReport {
    pub notion: Notion,
    pub mode: Mode,
    pub entries: Vec<ProfileEntry>,
    pub stats: Stats,
}

impl ProfileReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serialises")
    }
}

/// `⌈η·n⌉` with a small allowance for rounding in `η·n`.
pub fn min_subset_size(eta: f64, n: usize) -> usize {
    (eta * n as f64 - 1e-9).ceil().max(0.0) as usize
}

/// Least relative density over subsets of at least `⌈η·n⌉` vertices, per `η`.
pub fn density_profile(h: &Hypergraph, eta_grid: &[f64], mode: Mode, budget: usize, seed: u64) -> Result<ProfileReport> {
    if eta_grid.is_empty() {
        return Err(Error::InvalidArgument("empty eta grid".into()));
    }
    if let Some(&bad) = eta_grid.iter().find(|&&e| !(e > 0.0 && e <= 1.0)) {
        return Err(Error::InvalidArgument(format!("eta = {bad} outside (0, 1]")));
    }
    if budget == 0 {
        return Err(Error::InvalidArgument("budget must be at least 1".into()));
    }
    let n = h.vertex_count();
    let k = h.uniformity();
    let mut stats = Stats {
        converged: true,
        ..Stats::default()
    };
    let entries = match mode {
        Mode::Exact => {
            let minima = size_minima(h)?;
            stats.sets_examined = minima.sets_examined;
            eta_grid
                .iter()
                .map(|&eta| {
                    let min_size = min_subset_size(eta, n).max(k);
                    let best = (min_size..=n)
                        .map(|s| (minima.min_edges[s] as f64 / binomial_f64(s, k), minima.argmin[s]))
                        .fold(None, |acc: Option<(f64, u64)>, (r, m)| match acc {
                            Some((b, bm)) if b < r || (b == r && lex_cmp(bm, m) != Ordering::Greater) => Some((b, bm)),
                            _ => Some((r, m)),
                        });
                    ProfileEntry {
                        eta,
                        min_size,
                        value: best.map(|(r, _)| r),
                        certificate: best.map(|(_, m)| Certificate::Vertex { u: mask_to_vec(m) }),
                    }
                })
                .collect()
        }
        Mode::Heuristic => {
            check_heuristic_size(n)?;
            stats.restarts = budget;
            eta_grid
                .iter()
                .enumerate()
                .map(|(i, &eta)| {
                    let min_size = min_subset_size(eta, n).max(k);
                    let found = heuristic_profile(h, min_size, budget, seed.wrapping_add(i as u64));
                    let (value, cert, steps) = match found {
                        Some((r, set, steps)) => (Some(r), Some(Certificate::Vertex { u: set }), steps),
                        None => (None, None, 0),
                    };
                    stats.descent_iterations += steps;
                    ProfileEntry {
                        eta,
                        min_size,
                        value,
                        certificate: cert,
                    }
                })
                .collect()
        }
    };
    Ok(ProfileReport {
        notion: Notion::Profile,
        mode,
        entries,
        stats,
    })
}

/// Random-size starts improved by swapping a high-degree member for a low-degree outsider.
fn heuristic_profile(h: &Hypergraph, min_size: usize, budget: usize, seed: u64) -> Option<(f64, Vec<Vertex>, u64)> {
    let n = h.vertex_count();
    let k = h.uniformity();
    if min_size > n {
        return None;
    }
    let runs = run_restarts(budget, |r| {
        let mut rng = restart_rng(seed, r);
        let size = rng.random_range(min_size..=n);
        let chosen = rand::seq::index::sample(&mut rng, n, size);
        let mut set = vec![false; n];
        chosen.iter().for_each(|v| set[v] = true);
        let mut edges = h.induced_edge_count(&bools_to_vec(&set));
        let mut steps = 0u64;
        loop {
            let through = through_counts(h, &set);
            let out = (0..n).filter(|&v| set[v]).max_by_key(|&v| (through[v], std::cmp::Reverse(v)));
            let inn = (0..n).filter(|&v| !set[v]).min_by_key(|&v| (through[v], v));
            let (Some(out), Some(inn)) = (out, inn) else { break };
            set[out] = false;
            set[inn] = true;
            let swapped = h.induced_edge_count(&bools_to_vec(&set));
            if swapped >= edges {
                set[out] = true;
                set[inn] = false;
                break;
            }
            edges = swapped;
            steps += 1;
        }
        (edges as f64 / binomial_f64(size, k), bools_to_vec(&set), steps)
    });
    let steps = runs.iter().map(|r| r.2).sum();
    runs.into_iter()
        .reduce(|a, b| if b.0 < a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a })
        .map(|(r, set, _)| (r, set, steps))
}
