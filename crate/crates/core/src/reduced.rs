//! Reduced hypergraphs and the three-stage red/blue/green selection.
//!
//! A reduced hypergraph on indices `0..m` has a vertex class `P^{ij}` for
//! every pair `i < j` (vertices are local indices `0..|P^{ij}|`) and a
//! tripartite constituent `A^{ijk}` for every triple `i < j < k`, whose edges
//! are triples `(p, q, r) ∈ P^{ij} × P^{ik} × P^{jk}`.
//!
//! The selection procedures are greedy versions of the existence arguments:
//! they never promise success at small `m`, but every success they return has
//! been re-checked.

use std::collections::{BTreeMap, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Pair = (usize, usize);
pub type Triple = (usize, usize, usize);

/// Largest number of tuples scored exhaustively in one red step; beyond it
/// the tuple is chosen one coordinate at a time.
pub const TUPLE_BUDGET: u64 = 1 << 12;

#[derive(Clone, Debug, PartialEq, Eq)]
struct Constituent {
    sizes: [usize; 3],
    bits: Vec<bool>,
}

impl Constituent {
    fn empty(sizes: [usize; 3]) -> Self {
        Constituent {
            sizes,
            bits: vec![false; sizes[0] * sizes[1] * sizes[2]],
        }
    }

    fn slot(&self, p: usize, q: usize, r: usize) -> usize {
        (p * self.sizes[1] + q) * self.sizes[2] + r
    }

    fn contains(&self, p: usize, q: usize, r: usize) -> bool {
        p < self.sizes[0] && q < self.sizes[1] && r < self.sizes[2] && self.bits[self.slot(p, q, r)]
    }

    fn edge_count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedHypergraph {
    m: usize,
    class_size: BTreeMap<Pair, usize>,
    constituents: BTreeMap<Triple, Constituent>,
}

fn pair_key(s: &str) -> Result<Pair> {
    let parts: Vec<usize> = s
        .split(',')
        .map(|t| t.trim().parse().map_err(|_| Error::InvalidArgument(format!("bad pair key `{s}`"))))
        .collect::<Result<_>>()?;
    match parts[..] {
        [i, j] if i < j => Ok((i, j)),
        _ => Err(Error::InvalidArgument(format!("bad pair key `{s}`"))),
    }
}

fn triple_key(s: &str) -> Result<Triple> {
    let parts: Vec<usize> = s
        .split(',')
        .map(|t| t.trim().parse().map_err(|_| Error::InvalidArgument(format!("bad triple key `{s}`"))))
        .collect::<Result<_>>()?;
    match parts[..] {
        [i, j, k] if i < j && j < k => Ok((i, j, k)),
        _ => Err(Error::InvalidArgument(format!("bad triple key `{s}`"))),
    }
}

#[derive(Serialize, Deserialize)]
struct ReducedJson {
    m: usize,
    class_size: BTreeMap<String, usize>,
    constituents: BTreeMap<String, Vec<[usize; 3]>>,
}

impl ReducedHypergraph {
    /// All constituents empty; every class size must be positive.
    pub fn new(m: usize, class_size: impl Fn(usize, usize) -> usize) -> Result<Self> {
        let mut sizes = BTreeMap::new();
        for i in 0..m {
            for j in i + 1..m {
                let s = class_size(i, j);
                if s == 0 {
                    return Err(Error::InvalidArgument(format!("class ({i},{j}) is empty")));
                }
                sizes.insert((i, j), s);
            }
        }
        let mut constituents = BTreeMap::new();
        for i in 0..m {
            for j in i + 1..m {
                for k in j + 1..m {
                    let dims = [sizes[&(i, j)], sizes[&(i, k)], sizes[&(j, k)]];
                    constituents.insert((i, j, k), Constituent::empty(dims));
                }
            }
        }
        Ok(ReducedHypergraph {
            m,
            class_size: sizes,
            constituents,
        })
    }

    /// Every constituent complete.
    pub fn complete(m: usize, class_size: impl Fn(usize, usize) -> usize) -> Result<Self> {
        let mut a = Self::new(m, class_size)?;
        for c in a.constituents.values_mut() {
            c.bits.iter_mut().for_each(|b| *b = true);
        }
        Ok(a)
    }

    pub fn index_count(&self) -> usize {
        self.m
    }

    pub fn class_size(&self, i: usize, j: usize) -> usize {
        self.class_size[&(i.min(j), i.max(j))]
    }

    fn constituent(&self, t: Triple) -> &Constituent {
        &self.constituents[&t]
    }

    fn check_triple(&self, (i, j, k): Triple) -> Result<()> {
        if !(i < j && j < k && k < self.m) {
            return Err(Error::InvalidArgument(format!("({i},{j},{k}) is not an index triple below {}", self.m)));
        }
        Ok(())
    }

    fn check_member(&self, pair: Pair, index: usize) -> Result<()> {
        let size = self.class_size(pair.0, pair.1);
        if index >= size {
            return Err(Error::ClassMismatch { pair, index, size });
        }
        Ok(())
    }

    /// Adds `(p, q, r) ∈ P^{ij} × P^{ik} × P^{jk}` to `A^{ijk}`.
    pub fn add_edge(&mut self, t: Triple, p: usize, q: usize, r: usize) -> Result<()> {
        self.check_triple(t)?;
        let (i, j, k) = t;
        self.check_member((i, j), p)?;
        self.check_member((i, k), q)?;
        self.check_member((j, k), r)?;
        let c = self.constituents.get_mut(&t).expect("triple checked");
        let slot = c.slot(p, q, r);
        c.bits[slot] = true;
        Ok(())
    }

    pub fn contains_edge(&self, t: Triple, p: usize, q: usize, r: usize) -> bool {
        self.constituents.get(&t).is_some_and(|c| c.contains(p, q, r))
    }

    pub fn edge_count(&self, t: Triple) -> usize {
        self.constituent(t).edge_count()
    }

    /// Edges of `A^{ijk}` as `(p, q, r)` triples in lexicographic order.
    pub fn edges(&self, t: Triple) -> Vec<[usize; 3]> {
        let c = self.constituent(t);
        let [a, b, s] = c.sizes;
        let mut out = Vec::new();
        for p in 0..a {
            for q in 0..b {
                for r in 0..s {
                    if c.contains(p, q, r) {
                        out.push([p, q, r]);
                    }
                }
            }
        }
        out
    }

    /// `|E(A^{ijk})| / (|P^{ij}||P^{ik}||P^{jk}|)`.
    pub fn density(&self, t: Triple) -> f64 {
        let c = self.constituent(t);
        c.edge_count() as f64 / c.bits.len() as f64
    }

    pub fn to_json(&self) -> serde_json::Value {
        let body = ReducedJson {
            m: self.m,
            class_size: self
                .class_size
                .iter()
                .map(|(&(i, j), &s)| (format!("{i},{j}"), s))
                .collect(),
            constituents: self
                .constituents
                .keys()
                .map(|&(i, j, k)| (format!("{i},{j},{k}"), self.edges((i, j, k))))
                .collect(),
        };
        serde_json::to_value(body).expect("reduced hypergraph serialises")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let body: ReducedJson = serde_json::from_value(value.clone())
            .map_err(|e| Error::InvalidArgument(format!("reduced hypergraph JSON: {e}")))?;
        let mut sizes = BTreeMap::new();
        for (key, &s) in &body.class_size {
            sizes.insert(pair_key(key)?, s);
        }
        let mut a = Self::new(body.m, |i, j| sizes.get(&(i, j)).copied().unwrap_or(0))?;
        if sizes.len() != a.class_size.len() {
            return Err(Error::InvalidArgument("class_size lists pairs outside the index set".into()));
        }
        for (key, edges) in &body.constituents {
            let t = triple_key(key)?;
            for &[p, q, r] in edges {
                a.add_edge(t, p, q, r)?;
            }
        }
        Ok(a)
    }
}

/// Whether every constituent has density at least `mu`, with the sparsest
/// constituent (first in index order among ties) and its density.
pub fn is_mu_dense(a: &ReducedHypergraph, mu: f64) -> (bool, Option<(Triple, f64)>) {
    let worst = a
        .constituents
        .keys()
        .map(|&t| (t, a.density(t)))
        .fold(None, |acc: Option<(Triple, f64)>, (t, d)| match acc {
            Some((_, best)) if best <= d => acc,
            _ => Some((t, d)),
        });
    let dense = a
        .constituents
        .iter()
        .all(|(_, c)| c.edge_count() as f64 >= mu * c.bits.len() as f64);
    (dense, worst)
}

/// Number of `(Q, R) ∈ P^{ik} × P^{jk}` with `{P, Q, R}` in `A^{ijk}`, for `P ∈ P^{ij}`.
pub fn degree(a: &ReducedHypergraph, t: Triple, p: usize) -> Result<usize> {
    a.check_triple(t)?;
    a.check_member((t.0, t.1), p)?;
    let c = a.constituent(t);
    let block = c.sizes[1] * c.sizes[2];
    Ok(c.bits[p * block..(p + 1) * block].iter().filter(|&&b| b).count())
}

/// Number of `R ∈ P^{jk}` with `{P, Q, R}` in `A^{ijk}`, for `P ∈ P^{ij}`, `Q ∈ P^{ik}`.
pub fn pair_degree(a: &ReducedHypergraph, t: Triple, p: usize, q: usize) -> Result<usize> {
    a.check_triple(t)?;
    a.check_member((t.0, t.1), p)?;
    a.check_member((t.0, t.2), q)?;
    let c = a.constituent(t);
    Ok((0..c.sizes[2]).filter(|&r| c.contains(p, q, r)).count())
}

/// `{P ∈ P^{ij} : degree(P) ≥ μ'·|P^{ik}||P^{jk}|}` as a membership vector.
pub fn red_candidates(a: &ReducedHypergraph, mu_prime: f64, t: Triple) -> Result<Vec<bool>> {
    a.check_triple(t)?;
    let (i, j, k) = t;
    let threshold = mu_prime * (a.class_size(i, k) * a.class_size(j, k)) as f64;
    (0..a.class_size(i, j))
        .map(|p| Ok(degree(a, t, p)? as f64 >= threshold))
        .collect()
}

/// Which index of the triple plays the free role in a candidate set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pattern {
    /// Pair `(r, s)`, free index `t > s`.
    Red,
    /// Pair `(r, t)`, free index `r < s < t`.
    Blue,
    /// Pair `(s, t)`, free index `r < s`.
    Green,
}

/// Classes on indices `0..m` with candidate subsets keyed by `(pair, free index)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateSystem {
    m: usize,
    class_size: BTreeMap<Pair, usize>,
    sets: HashMap<(usize, usize, usize), Vec<bool>>,
}

impl CandidateSystem {
    /// All candidate sets start full.
    pub fn full(m: usize, pattern: Pattern, class_size: impl Fn(usize, usize) -> usize) -> Self {
        let mut sizes = BTreeMap::new();
        for a in 0..m {
            for b in a + 1..m {
                sizes.insert((a, b), class_size(a, b));
            }
        }
        let mut sets = HashMap::new();
        for a in 0..m {
            for b in a + 1..m {
                for c in 0..m {
                    let relevant = match pattern {
                        Pattern::Red => c > b,
                        Pattern::Blue => a < c && c < b,
                        Pattern::Green => c < a,
                    };
                    if relevant {
                        sets.insert((a, b, c), vec![true; sizes[&(a, b)]]);
                    }
                }
            }
        }
        CandidateSystem {
            m,
            class_size: sizes,
            sets,
        }
    }

    pub fn index_count(&self) -> usize {
        self.m
    }

    pub fn class_size(&self, a: usize, b: usize) -> usize {
        self.class_size[&(a, b)]
    }

    /// Candidate set of pair `(a, b)` with respect to free index `c`.
    pub fn get(&self, a: usize, b: usize, c: usize) -> &[bool] {
        &self.sets[&(a, b, c)]
    }

    pub fn set(&mut self, pair: Pair, free: usize, members: Vec<bool>) -> Result<()> {
        let size = *self
            .class_size
            .get(&pair)
            .ok_or_else(|| Error::InvalidArgument(format!("no class {pair:?}")))?;
        if members.len() != size {
            return Err(Error::InvalidArgument(format!(
                "candidate set for {pair:?} has length {}, class has {size}",
                members.len()
            )));
        }
        let slot = self
            .sets
            .get_mut(&(pair.0, pair.1, free))
            .ok_or_else(|| Error::InvalidArgument(format!("free index {free} does not fit pair {pair:?}")))?;
        *slot = members;
        Ok(())
    }

    /// Maps every index `i` to `m - 1 - i`; red and green systems swap.
    pub fn reversed(&self) -> Self {
        let flip = |i: usize| self.m - 1 - i;
        CandidateSystem {
            m: self.m,
            class_size: self.class_size.iter().map(|(&(a, b), &s)| ((flip(b), flip(a)), s)).collect(),
            sets: self
                .sets
                .iter()
                .map(|(&(a, b, c), v)| ((flip(b), flip(a), flip(c)), v.clone()))
                .collect(),
        }
    }

    /// Every candidate set holds at least `eps` of its class.
    pub fn check_bound(&self, eps: f64) -> Result<()> {
        let mut keys: Vec<_> = self.sets.keys().copied().collect();
        keys.sort_unstable();
        for (a, b, c) in keys {
            let set = &self.sets[&(a, b, c)];
            let size = set.iter().filter(|&&x| x).count();
            let class = set.len();
            let bound = eps * class as f64;
            if (size as f64) + 1e-9 < bound {
                return Err(Error::CandidateTooSmall {
                    triple: (a, b, c),
                    size,
                    class,
                    bound,
                });
            }
        }
        Ok(())
    }
}

/// Selected indices (increasing) with one chosen class element per pair.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Selection {
    pub indices: Vec<usize>,
    pub chosen: BTreeMap<Pair, usize>,
}

impl Selection {
    /// Keeps the first `m` indices and the choices among them.
    pub fn truncated(&self, m: usize) -> Selection {
        let indices: Vec<usize> = self.indices.iter().copied().take(m).collect();
        self.restricted(&indices)
    }

    fn restricted(&self, indices: &[usize]) -> Selection {
        let chosen = self
            .chosen
            .iter()
            .filter(|((a, b), _)| indices.contains(a) && indices.contains(b))
            .map(|(&k, &v)| (k, v))
            .collect();
        Selection {
            indices: indices.to_vec(),
            chosen,
        }
    }
}

/// The defining property of a selection for the given pattern.
pub fn selection_holds(sys: &CandidateSystem, sel: &Selection, pattern: Pattern) -> bool {
    let x = &sel.indices;
    if x.windows(2).any(|w| w[0] >= w[1]) || x.iter().any(|&i| i >= sys.m) {
        return false;
    }
    for (ai, &a) in x.iter().enumerate() {
        for &b in &x[ai + 1..] {
            let Some(&p) = sel.chosen.get(&(a, b)) else {
                return false;
            };
            if p >= sys.class_size(a, b) {
                return false;
            }
            let ok = x.iter().all(|&c| {
                let relevant = match pattern {
                    Pattern::Red => c > b,
                    Pattern::Blue => a < c && c < b,
                    Pattern::Green => c < a,
                };
                !relevant || sys.get(a, b, c)[p]
            });
            if !ok {
                return false;
            }
        }
    }
    true
}

/// Greedy red selection, as long as indices survive.
///
/// Each step adds the smallest surviving index `n` and fixes the elements
/// for the pairs `(x, n)`, `x` already selected, so that as many later
/// indices as possible still accept all of them; ties go to the
/// lexicographically least tuple.
fn red_greedy(sys: &CandidateSystem) -> Selection {
    let mut alive: Vec<usize> = (0..sys.m).collect();
    let mut sel = Selection::default();
    while !alive.is_empty() {
        let n = alive.remove(0);
        let prev = sel.indices.clone();
        let sizes: Vec<usize> = prev.iter().map(|&r| sys.class_size(r, n)).collect();
        let accepts = |t: usize, fixed: &[usize]| prev.iter().zip(fixed).all(|(&r, &p)| sys.get(r, n, t)[p]);
        let survivors = |fixed: &[usize]| alive.iter().filter(|&&t| accepts(t, fixed)).count();

        let total: u64 = sizes.iter().fold(1u64, |acc, &s| acc.saturating_mul(s as u64));
        let tuple: Vec<usize> = if total <= TUPLE_BUDGET {
            let mut best = (survivors(&vec![0; prev.len()]), vec![0; prev.len()]);
            let mut current = vec![0; prev.len()];
            // odometer over tuples in lexicographic order
            'outer: loop {
                let mut i = current.len();
                loop {
                    if i == 0 {
                        break 'outer;
                    }
                    i -= 1;
                    current[i] += 1;
                    if current[i] < sizes[i] {
                        break;
                    }
                    current[i] = 0;
                }
                let count = survivors(&current);
                if count > best.0 {
                    best = (count, current.clone());
                }
            }
            best.1
        } else {
            let mut fixed = Vec::with_capacity(prev.len());
            for &size in &sizes {
                let pick = (0..size)
                    .map(|p| {
                        fixed.push(p);
                        let c = alive.iter().filter(|&&t| accepts(t, &fixed)).count();
                        fixed.pop();
                        (c, p)
                    })
                    .fold((0, 0), |best, (c, p)| if c > best.0 { (c, p) } else { best });
                fixed.push(pick.1);
            }
            fixed
        };
        alive.retain(|&t| accepts(t, &tuple));
        for (&r, &p) in prev.iter().zip(&tuple) {
            sel.chosen.insert((r, n), p);
        }
        sel.indices.push(n);
    }
    sel
}

fn check_pattern(sys: &CandidateSystem, pattern: Pattern) -> Result<()> {
    let expected = CandidateSystem::full(sys.m, pattern, |a, b| sys.class_size(a, b));
    if expected.sets.len() != sys.sets.len() || expected.sets.keys().any(|k| !sys.sets.contains_key(k)) {
        return Err(Error::InvalidArgument(format!("candidate system is not a {pattern:?} system")));
    }
    Ok(())
}

fn finish(sel: Selection, m: usize) -> Option<Selection> {
    (sel.indices.len() >= m).then(|| sel.truncated(m))
}

/// Largest red selection the greedy finds; its property is asserted.
pub fn select_red_maximal(sys: &CandidateSystem, eps: f64) -> Result<Selection> {
    check_pattern(sys, Pattern::Red)?;
    sys.check_bound(eps)?;
    let sel = red_greedy(sys);
    assert!(selection_holds(sys, &sel, Pattern::Red), "red selection failed its check");
    Ok(sel)
}

/// Indices `X` of size `m` and `P^{rs}_red` in every `P^{rs}_{t,red}` with `t > s` in `X`,
/// or `None` when the greedy runs out of indices.
pub fn select_red(sys: &CandidateSystem, eps: f64, m: usize) -> Result<Option<Selection>> {
    Ok(finish(select_red_maximal(sys, eps)?, m))
}

/// Green selection by running the red greedy on the index-reversed system.
pub fn select_green_maximal(sys: &CandidateSystem, eps: f64) -> Result<Selection> {
    check_pattern(sys, Pattern::Green)?;
    sys.check_bound(eps)?;
    let red = red_greedy(&sys.reversed());
    let flip = |i: usize| sys.m - 1 - i;
    let mut indices: Vec<usize> = red.indices.iter().map(|&i| flip(i)).collect();
    indices.reverse();
    let chosen = red.chosen.iter().map(|(&(a, b), &p)| ((flip(b), flip(a)), p)).collect();
    let sel = Selection { indices, chosen };
    assert!(selection_holds(sys, &sel, Pattern::Green), "green selection failed its check");
    Ok(sel)
}

/// Indices `Z` of size `m` and `P^{st}_green` in every `P^{st}_{r,green}` with `r < s` in `Z`.
///
/// `Z` is the largest-first part of the greedy result, so it is not always
/// the first `m` indices; the selection keeps the `m` largest.
pub fn select_green(sys: &CandidateSystem, eps: f64, m: usize) -> Result<Option<Selection>> {
    let sel = select_green_maximal(sys, eps)?;
    if sel.indices.len() < m {
        return Ok(None);
    }
    let keep: Vec<usize> = sel.indices[sel.indices.len() - m..].to_vec();
    Ok(Some(sel.restricted(&keep)))
}

/// Sets `W_s` and subsets `D_{rs} ⊆ W_s` for `r < s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoIndexSystem {
    pub w: Vec<usize>,
    pub d: HashMap<Pair, Vec<bool>>,
}

impl TwoIndexSystem {
    pub fn full(w: Vec<usize>) -> Self {
        let mut d = HashMap::new();
        for (s, &size) in w.iter().enumerate() {
            for r in 0..s {
                d.insert((r, s), vec![true; size]);
            }
        }
        TwoIndexSystem { w, d }
    }
}

/// Indices `Z` with one element `d_s ∈ W_s` each.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct TwoIndexSelection {
    pub indices: Vec<usize>,
    pub elements: BTreeMap<usize, usize>,
}

/// Whether `d_s ∈ D_{rs}` for all `r < s` in the selection.
pub fn two_indices_hold(sys: &TwoIndexSystem, sel: &TwoIndexSelection) -> bool {
    let z = &sel.indices;
    if z.windows(2).any(|w| w[0] >= w[1]) || z.iter().any(|&s| s >= sys.w.len()) {
        return false;
    }
    z.iter().enumerate().all(|(si, &s)| {
        sel.elements
            .get(&s)
            .is_some_and(|&e| e < sys.w[s] && z[..si].iter().all(|&r| sys.d[&(r, s)][e]))
    })
}

/// Green selection on the indices plus one extra top index `L`, with
/// classes `P^{st} = W_s` and candidates `P^{st}_{r,green} = D_{rs}`; the
/// elements chosen for the pairs `(s, L)` are the `d_s`.
pub fn select_two_indices_maximal(sys: &TwoIndexSystem, eps: f64) -> Result<TwoIndexSelection> {
    let big_m = sys.w.len();
    if sys.w.contains(&0) {
        return Err(Error::InvalidArgument("W sets must be nonempty".into()));
    }
    for s in 0..big_m {
        for r in 0..s {
            let set = sys
                .d
                .get(&(r, s))
                .ok_or_else(|| Error::InvalidArgument(format!("missing D_{{{r},{s}}}")))?;
            if set.len() != sys.w[s] {
                return Err(Error::InvalidArgument(format!("D_{{{r},{s}}} has the wrong length")));
            }
        }
    }
    let top = big_m;
    let mut green = CandidateSystem::full(big_m + 1, Pattern::Green, |s, _| sys.w[s]);
    for s in 0..big_m {
        for t in s + 1..=top {
            for r in 0..s {
                green.set((s, t), r, sys.d[&(r, s)].clone())?;
            }
        }
    }
    let sel = select_green_maximal(&green, eps)?;
    // the reversed greedy always starts from the top index
    assert_eq!(sel.indices.last(), Some(&top));
    let indices: Vec<usize> = sel.indices[..sel.indices.len() - 1].to_vec();
    let elements = indices.iter().map(|&s| (s, sel.chosen[&(s, top)])).collect();
    let out = TwoIndexSelection { indices, elements };
    assert!(two_indices_hold(sys, &out), "two-index selection failed its check");
    Ok(out)
}

/// `Z` of size `m` (the largest selected indices) with `d_s ∈ D_{rs}` for all `r < s` in `Z`.
pub fn select_two_indices(sys: &TwoIndexSystem, eps: f64, m: usize) -> Result<Option<TwoIndexSelection>> {
    let sel = select_two_indices_maximal(sys, eps)?;
    if sel.indices.len() < m {
        return Ok(None);
    }
    let indices = sel.indices[sel.indices.len() - m..].to_vec();
    let elements = indices.iter().map(|&s| (s, sel.elements[&s])).collect();
    Ok(Some(TwoIndexSelection { indices, elements }))
}

/// Blue selection: for each selected index `r` in turn, the later indices
/// are thinned by a two-index selection with `W_t = P^{rt}` and
/// `D_{st} = P^{rt}_{s,blue}`, whose elements become `P^{rt}_blue`.
pub fn select_blue_maximal(sys: &CandidateSystem, eps: f64) -> Result<Selection> {
    check_pattern(sys, Pattern::Blue)?;
    sys.check_bound(eps)?;
    let mut list: Vec<usize> = (0..sys.m).collect();
    let mut chosen = BTreeMap::new();
    let mut p = 0;
    while p + 1 < list.len() {
        let r = list[p];
        let tail: Vec<usize> = list[p + 1..].to_vec();
        let w: Vec<usize> = tail.iter().map(|&t| sys.class_size(r, t)).collect();
        let mut d = HashMap::new();
        for (j, &t) in tail.iter().enumerate() {
            for (i, &s) in tail[..j].iter().enumerate() {
                d.insert((i, j), sys.get(r, t, s).to_vec());
            }
        }
        let two = select_two_indices_maximal(&TwoIndexSystem { w, d }, eps)?;
        list.truncate(p + 1);
        for &j in &two.indices {
            list.push(tail[j]);
            chosen.insert((r, tail[j]), two.elements[&j]);
        }
        p += 1;
    }
    // choices made for indices that a later round dropped are discarded
    let sel = Selection { indices: list.clone(), chosen }.restricted(&list);
    assert!(selection_holds(sys, &sel, Pattern::Blue), "blue selection failed its check");
    Ok(sel)
}

/// Indices `Y` of size `m` and `P^{rt}_blue` in every `P^{rt}_{s,blue}` with `r < s < t` in `Y`.
pub fn select_blue(sys: &CandidateSystem, eps: f64, m: usize) -> Result<Option<Selection>> {
    Ok(finish(select_blue_maximal(sys, eps)?, m))
}

/// Indices `λ(0) < … < λ(f-1)` and per position pair `(r, s)` one red, blue
/// and green vertex of `P^{λ(r)λ(s)}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoreSelection {
    pub lambda: Vec<usize>,
    pub red: BTreeMap<Pair, usize>,
    pub blue: BTreeMap<Pair, usize>,
    pub green: BTreeMap<Pair, usize>,
}

#[derive(Serialize, Deserialize)]
struct ChoiceJson {
    pair: [usize; 2],
    vertex: usize,
}

#[derive(Serialize, Deserialize)]
struct CoreJson {
    lambda: Vec<usize>,
    red: Vec<ChoiceJson>,
    blue: Vec<ChoiceJson>,
    green: Vec<ChoiceJson>,
}

impl CoreSelection {
    pub fn to_json(&self) -> serde_json::Value {
        let list = |m: &BTreeMap<Pair, usize>| {
            m.iter()
                .map(|(&(r, s), &v)| ChoiceJson {
                    pair: [r, s],
                    vertex: v,
                })
                .collect()
        };
        let body = CoreJson {
            lambda: self.lambda.clone(),
            red: list(&self.red),
            blue: list(&self.blue),
            green: list(&self.green),
        };
        serde_json::to_value(body).expect("selection serialises")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let body: CoreJson = serde_json::from_value(value.clone())
            .map_err(|e| Error::InvalidArgument(format!("core selection JSON: {e}")))?;
        let map = |l: Vec<ChoiceJson>| l.into_iter().map(|c| ((c.pair[0], c.pair[1]), c.vertex)).collect();
        Ok(CoreSelection {
            lambda: body.lambda,
            red: map(body.red),
            blue: map(body.blue),
            green: map(body.green),
        })
    }
}

/// Recomputes all `C(f,3)` membership tests of a core selection.
pub fn verify_core(a: &ReducedHypergraph, sel: &CoreSelection) -> Result<bool> {
    let lambda = &sel.lambda;
    if lambda.windows(2).any(|w| w[0] >= w[1]) || lambda.iter().any(|&i| i >= a.m) {
        return Ok(false);
    }
    let f = lambda.len();
    for r in 0..f {
        for s in r + 1..f {
            let pair = (lambda[r], lambda[s]);
            for colour in [&sel.red, &sel.blue, &sel.green] {
                let Some(&v) = colour.get(&(r, s)) else {
                    return Ok(false);
                };
                a.check_member(pair, v)?;
            }
        }
    }
    for r in 0..f {
        for s in r + 1..f {
            for t in s + 1..f {
                let triple = (lambda[r], lambda[s], lambda[t]);
                if !a.contains_edge(triple, sel.red[&(r, s)], sel.blue[&(r, t)], sel.green[&(s, t)]) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Outcome of the three-stage pipeline, with the stage sizes reached.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoreOutcome {
    pub selection: Option<CoreSelection>,
    pub red_indices: usize,
    pub blue_indices: usize,
    pub green_indices: usize,
}

/// Finds `f` indices with red, blue and green vertices such that every
/// red-blue-green triple along `r < s < t` is a constituent edge.
///
/// Red candidates are the vertices of degree at least `μ/2·|P^{rt}||P^{st}|`;
/// blue candidates have pair-degree at least `μ/4·|P^{st}|` with the chosen
/// red vertex; green candidates complete the chosen red and blue vertices to
/// an edge.
pub fn select_rainbow_core(a: &ReducedHypergraph, mu: f64, f: usize) -> Result<CoreOutcome> {
    if !(mu > 0.0 && mu <= 1.0) {
        return Err(Error::InvalidArgument(format!("mu = {mu} outside (0, 1]")));
    }
    let (dense, worst) = is_mu_dense(a, mu);
    if !dense {
        let (triple, ratio) = worst.expect("a failing constituent exists");
        return Err(Error::NotMuDense { mu, triple, ratio });
    }
    let failed = |red, blue, green| CoreOutcome {
        selection: None,
        red_indices: red,
        blue_indices: blue,
        green_indices: green,
    };

    // red stage on all indices
    let mut red_sys = CandidateSystem::full(a.m, Pattern::Red, |i, j| a.class_size(i, j));
    for r in 0..a.m {
        for s in r + 1..a.m {
            for t in s + 1..a.m {
                red_sys.set((r, s), t, red_candidates(a, mu / 2.0, (r, s, t))?)?;
            }
        }
    }
    let red = select_red_maximal(&red_sys, mu / 2.0)?;
    let x = red.indices.clone();
    if x.len() < f {
        return Ok(failed(x.len(), 0, 0));
    }

    // blue stage on positions of X
    let mut blue_sys = CandidateSystem::full(x.len(), Pattern::Blue, |i, j| a.class_size(x[i], x[j]));
    for r in 0..x.len() {
        for t in r + 2..x.len() {
            for s in r + 1..t {
                let p = red.chosen[&(x[r], x[s])];
                let need = mu / 4.0 * a.class_size(x[s], x[t]) as f64;
                let set = (0..a.class_size(x[r], x[t]))
                    .map(|q| Ok(pair_degree(a, (x[r], x[s], x[t]), p, q)? as f64 >= need))
                    .collect::<Result<Vec<bool>>>()?;
                blue_sys.set((r, t), s, set)?;
            }
        }
    }
    let blue = select_blue_maximal(&blue_sys, mu / 4.0)?;
    let y: Vec<usize> = blue.indices.iter().map(|&i| x[i]).collect();
    if y.len() < f {
        return Ok(failed(x.len(), y.len(), 0));
    }
    let red_at = |i: usize, j: usize| red.chosen[&(i, j)];
    let blue_at = |i: usize, j: usize| {
        let xi = x.iter().position(|&v| v == i).expect("index in X");
        let xj = x.iter().position(|&v| v == j).expect("index in X");
        blue.chosen[&(xi, xj)]
    };

    // green stage on positions of Y
    let mut green_sys = CandidateSystem::full(y.len(), Pattern::Green, |i, j| a.class_size(y[i], y[j]));
    for s in 0..y.len() {
        for t in s + 1..y.len() {
            for r in 0..s {
                let (p, q) = (red_at(y[r], y[s]), blue_at(y[r], y[t]));
                let set = (0..a.class_size(y[s], y[t]))
                    .map(|v| a.contains_edge((y[r], y[s], y[t]), p, q, v))
                    .collect();
                green_sys.set((s, t), r, set)?;
            }
        }
    }
    let green = select_green_maximal(&green_sys, mu / 4.0)?;
    let z: Vec<usize> = green.indices.iter().map(|&i| y[i]).collect();
    if z.len() < f {
        return Ok(failed(x.len(), y.len(), z.len()));
    }

    let positions: Vec<usize> = green.indices[..f].to_vec();
    let lambda: Vec<usize> = positions.iter().map(|&i| y[i]).collect();
    let mut sel = CoreSelection {
        lambda: lambda.clone(),
        red: BTreeMap::new(),
        blue: BTreeMap::new(),
        green: BTreeMap::new(),
    };
    for r in 0..f {
        for s in r + 1..f {
            sel.red.insert((r, s), red_at(lambda[r], lambda[s]));
            sel.blue.insert((r, s), blue_at(lambda[r], lambda[s]));
            sel.green.insert((r, s), green.chosen[&(positions[r], positions[s])]);
        }
    }
    assert!(verify_core(a, &sel)?, "rainbow core failed verification");
    Ok(CoreOutcome {
        selection: Some(sel),
        red_indices: x.len(),
        blue_indices: y.len(),
        green_indices: z.len(),
    })
}

/// Every constituent triple included independently with probability `p`.
pub fn random_reduced(m: usize, class_size: usize, p: f64, seed: u64) -> Result<ReducedHypergraph> {
    if class_size == 0 || !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidArgument("class size must be positive and p in [0, 1]".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut a = ReducedHypergraph::new(m, |_, _| class_size)?;
    for c in a.constituents.values_mut() {
        c.bits.iter_mut().for_each(|b| *b = rng.random_bool(p));
    }
    Ok(a)
}

/// Rejection-samples [`random_reduced`] until it is `mu`-dense; attempt `i`
/// uses stream `i` of the seed. Returns the instance and the attempt count.
pub fn random_mu_dense(
    m: usize,
    class_size: usize,
    p: f64,
    mu: f64,
    seed: u64,
    max_attempts: usize,
) -> Result<(ReducedHypergraph, usize)> {
    for attempt in 0..max_attempts {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(attempt as u64);
        let a = random_reduced(m, class_size, p, rng.random())?;
        if is_mu_dense(&a, mu).0 {
            return Ok((a, attempt + 1));
        }
    }
    Err(Error::InvalidArgument(format!(
        "no {mu}-dense instance in {max_attempts} attempts"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn random_system(m: usize, size: usize, pattern: Pattern, density: f64, seed: u64) -> CandidateSystem {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut sys = CandidateSystem::full(m, pattern, |_, _| size);
        let mut keys: Vec<_> = sys.sets.keys().copied().collect();
        keys.sort_unstable();
        let keep = ((density * size as f64).ceil() as usize).max(1);
        for (a, b, c) in keys {
            let chosen = rand::seq::index::sample(&mut rng, size, keep);
            let mut set = vec![false; size];
            chosen.iter().for_each(|i| set[i] = true);
            sys.set((a, b), c, set).unwrap();
        }
        sys
    }

    #[test]
    fn density_and_degrees() {
        let full = ReducedHypergraph::complete(5, |_, _| 3).unwrap();
        assert!(is_mu_dense(&full, 1.0).0);
        assert_eq!(degree(&full, (0, 1, 2), 0).unwrap(), 9);
        assert_eq!(red_candidates(&full, 1.0, (0, 1, 2)).unwrap(), vec![true; 3]);

        let mut holey = full.clone();
        holey.constituents.get_mut(&(1, 2, 4)).unwrap().bits.fill(false);
        let (dense, worst) = is_mu_dense(&holey, 0.1);
        assert!(!dense);
        assert_eq!(worst, Some(((1, 2, 4), 0.0)));
        assert_eq!(degree(&holey, (1, 2, 4), 2).unwrap(), 0);
        assert_eq!(red_candidates(&holey, 0.1, (1, 2, 4)).unwrap(), vec![false; 3]);
        assert!(matches!(degree(&full, (0, 1, 2), 3), Err(Error::ClassMismatch { .. })));
    }

    #[test]
    fn handcrafted_red_candidates() {
        let mut a = ReducedHypergraph::new(3, |_, _| 2).unwrap();
        for (q, r) in [(0, 0), (0, 1), (1, 0)] {
            a.add_edge((0, 1, 2), 0, q, r).unwrap();
        }
        a.add_edge((0, 1, 2), 1, 1, 1).unwrap();
        assert_eq!(red_candidates(&a, 0.5, (0, 1, 2)).unwrap(), vec![true, false]);
        assert_eq!(pair_degree(&a, (0, 1, 2), 0, 0).unwrap(), 2);
    }

    #[test]
    fn degrees_sum_to_edge_count() {
        let a = random_reduced(6, 4, 0.4, 3).unwrap();
        for &t in a.constituents.keys() {
            let sum: usize = (0..4).map(|p| degree(&a, t, p).unwrap()).sum();
            assert_eq!(sum, a.edge_count(t));
        }
    }

    #[test]
    fn red_candidate_bound_under_density() {
        for seed in 0..20 {
            let a = random_reduced(6, 4, 0.6, seed).unwrap();
            let (dense, worst) = is_mu_dense(&a, 0.3);
            let mu = if dense { 0.3 } else { worst.unwrap().1 };
            if mu <= 0.0 {
                continue;
            }
            for &t in a.constituents.keys() {
                let c = red_candidates(&a, mu / 2.0, t).unwrap();
                let size = c.iter().filter(|&&b| b).count() as f64;
                assert!(size + 1e-9 >= mu / 2.0 * 4.0);
            }
        }
    }

    #[test]
    fn full_systems_always_succeed() {
        for m in 1..=7 {
            let red = CandidateSystem::full(m, Pattern::Red, |_, _| 2);
            let sel = select_red(&red, 1.0, m).unwrap().unwrap();
            assert_eq!(sel.indices, (0..m).collect::<Vec<_>>());
            let blue = CandidateSystem::full(m, Pattern::Blue, |_, _| 2);
            assert_eq!(select_blue(&blue, 1.0, m).unwrap().unwrap().indices.len(), m);
            let green = CandidateSystem::full(m, Pattern::Green, |_, _| 2);
            assert_eq!(select_green(&green, 1.0, m).unwrap().unwrap().indices.len(), m);
            let two = TwoIndexSystem::full(vec![3; m]);
            assert_eq!(select_two_indices(&two, 1.0, m).unwrap().unwrap().indices.len(), m);
        }
        let two = TwoIndexSystem::full(vec![3; 5]);
        assert!(select_two_indices(&two, 1.0, 1).unwrap().is_some());
    }

    #[test]
    fn undersized_candidates_are_rejected() {
        let mut sys = CandidateSystem::full(4, Pattern::Red, |_, _| 3);
        sys.set((0, 1), 3, vec![true, false, false]).unwrap();
        assert!(matches!(select_red(&sys, 0.5, 3), Err(Error::CandidateTooSmall { .. })));
        assert!(select_red(&sys, 0.3, 3).is_ok());
        assert!(select_blue(&sys, 0.3, 3).is_err());
    }

    #[test]
    fn random_red_successes_verify() {
        for seed in 0..30 {
            let sys = random_system(12, 3, Pattern::Red, 1.0 / 3.0, seed);
            if let Some(sel) = select_red(&sys, 1.0 / 3.0, 3).unwrap() {
                assert!(selection_holds(&sys, &sel, Pattern::Red));
            }
        }
    }

    #[test]
    fn structured_two_index_instance() {
        let m = 8;
        let mut sys = TwoIndexSystem::full(vec![3; m]);
        for s in 0..m {
            for r in 0..s {
                let mut set = vec![false; 3];
                set[r % 3] = true;
                set[(r + 1) % 3] = true;
                sys.d.insert((r, s), set);
            }
        }
        let sel = select_two_indices_maximal(&sys, 0.6).unwrap();
        assert!(two_indices_hold(&sys, &sel));
        assert!(sel.indices.len() >= 2);
    }

    #[test]
    fn green_is_reversed_red() {
        for seed in 0..50 {
            let red = random_system(9, 3, Pattern::Red, 0.5, seed);
            let green = red.reversed();
            assert_eq!(green.reversed(), red);
            let r = select_red_maximal(&red, 0.5).unwrap();
            let g = select_green_maximal(&green, 0.5).unwrap();
            let flip = |i: usize| 8 - i;
            let mut expected: Vec<usize> = r.indices.iter().map(|&i| flip(i)).collect();
            expected.reverse();
            assert_eq!(g.indices, expected);
            for (&(a, b), &p) in &r.chosen {
                assert_eq!(g.chosen[&(flip(b), flip(a))], p);
            }
        }
    }

    #[test]
    fn random_blue_successes_verify() {
        for seed in 0..20 {
            let sys = random_system(9, 3, Pattern::Blue, 0.67, seed);
            let sel = select_blue_maximal(&sys, 0.6).unwrap();
            assert!(selection_holds(&sys, &sel, Pattern::Blue));
        }
    }

    #[test]
    fn complete_instances_succeed() {
        for m in 3..=8 {
            let a = ReducedHypergraph::complete(m, |i, j| 1 + (i + j) % 3).unwrap();
            for f in 1..=m {
                let out = select_rainbow_core(&a, 1.0, f).unwrap();
                let sel = out.selection.expect("complete instance");
                assert_eq!(sel.lambda.len(), f);
                assert!(verify_core(&a, &sel).unwrap());
            }
        }
    }

    #[test]
    fn singleton_classes() {
        let mut a = ReducedHypergraph::new(5, |_, _| 1).unwrap();
        for t in a.constituents.keys().copied().collect::<Vec<_>>() {
            a.add_edge(t, 0, 0, 0).unwrap();
        }
        assert!(select_rainbow_core(&a, 1.0, 5).unwrap().selection.is_some());
        a.constituents.get_mut(&(0, 2, 4)).unwrap().bits[0] = false;
        assert!(matches!(select_rainbow_core(&a, 1.0, 5), Err(Error::NotMuDense { .. })));
    }

    #[test]
    fn swapping_colours_breaks_a_core() {
        // A^{012} holds only (red 0, blue 1, green 0) among its classes of size 2
        let mut a = ReducedHypergraph::new(3, |_, _| 2).unwrap();
        a.add_edge((0, 1, 2), 0, 1, 0).unwrap();
        let sel = CoreSelection {
            lambda: vec![0, 1, 2],
            red: [((0, 1), 0), ((0, 2), 0), ((1, 2), 0)].into(),
            blue: [((0, 1), 1), ((0, 2), 1), ((1, 2), 1)].into(),
            green: [((0, 1), 0), ((0, 2), 0), ((1, 2), 0)].into(),
        };
        assert!(verify_core(&a, &sel).unwrap());
        let swapped = CoreSelection {
            red: sel.blue.clone(),
            blue: sel.red.clone(),
            ..sel.clone()
        };
        assert!(!verify_core(&a, &swapped).unwrap());
        let short = CoreSelection {
            lambda: vec![0, 2],
            red: [((0, 1), 0)].into(),
            blue: [((0, 1), 1)].into(),
            green: [((0, 1), 0)].into(),
        };
        assert!(verify_core(&a, &short).unwrap());
        let outside = CoreSelection {
            red: [((0, 1), 5), ((0, 2), 0), ((1, 2), 0)].into(),
            ..sel
        };
        assert!(matches!(verify_core(&a, &outside), Err(Error::ClassMismatch { .. })));
    }

    #[test]
    fn random_pipeline_runs_verify() {
        let mut successes = 0;
        for seed in 0..20 {
            let (a, _) = random_mu_dense(10, 4, 0.75, 0.5, seed, 100).unwrap();
            let out = select_rainbow_core(&a, 0.5, 3).unwrap();
            if let Some(sel) = out.selection {
                successes += 1;
                assert!(verify_core(&a, &sel).unwrap());
            }
        }
        assert!(successes > 0);
    }

    #[test]
    fn random_density_at_quarter() {
        let dense = (0..200)
            .filter(|&seed| is_mu_dense(&random_reduced(5, 4, 0.5, seed).unwrap(), 0.25).0)
            .count();
        assert!(dense >= 198, "{dense}");
    }

    #[test]
    fn json_round_trips() {
        let a = random_reduced(5, 3, 0.3, 1).unwrap();
        assert_eq!(ReducedHypergraph::from_json(&a.to_json()).unwrap(), a);
        let full = ReducedHypergraph::complete(4, |_, _| 2).unwrap();
        let sel = select_rainbow_core(&full, 1.0, 4).unwrap().selection.unwrap();
        assert_eq!(CoreSelection::from_json(&sel.to_json()).unwrap(), sel);
    }
}
