//! Ordered rainbow colourings of the shadow, and the pair-colouring host `H_φ`.
//!
//! For a vertex ordering, an edge `e` with vertices `u_1 < … < u_k` (by
//! position) demands colour `ℓ` on the `(k-1)`-set `e \ {u_ℓ}`. For `k = 3`
//! colour 3 is the pair of the two smallest vertices, printed as red; colour 2
//! is blue and colour 1 is green.

use std::collections::{BTreeMap, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{binomial, colex_rank, combinations};
use crate::error::{Error, ParseError, Result};
use crate::hypergraph::{Hypergraph, Vertex};

pub type Colour = usize;

pub const GREEN: Colour = 1;
pub const BLUE: Colour = 2;
pub const RED: Colour = 3;

/// Human-facing label; names are only used for 3-uniform hypergraphs.
pub fn colour_label(k: usize, colour: Colour) -> ColourLabel {
    match (k, colour) {
        (3, RED) => ColourLabel::Name("red".into()),
        (3, BLUE) => ColourLabel::Name("blue".into()),
        (3, GREEN) => ColourLabel::Name("green".into()),
        _ => ColourLabel::Index(colour),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ColourLabel {
    Index(Colour),
    Name(String),
}

impl ColourLabel {
    pub fn colour(&self, k: usize) -> Result<Colour> {
        let c = match self {
            ColourLabel::Index(c) => *c,
            ColourLabel::Name(name) if k == 3 => match name.as_str() {
                "red" => RED,
                "blue" => BLUE,
                "green" => GREEN,
                other => return Err(Error::InvalidArgument(format!("unknown colour `{other}`"))),
            },
            ColourLabel::Name(name) => {
                return Err(Error::InvalidArgument(format!(
                    "colour names need k = 3, got `{name}` for k = {k}"
                )))
            }
        };
        if c == 0 || c > k {
            return Err(Error::ColourOutOfRange { colour: c, k });
        }
        Ok(c)
    }
}

/// A vertex ordering together with a colouring of the shadow.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShadowColouring {
    /// Vertices listed from first to last position.
    pub ordering: Vec<Vertex>,
    pub colours: BTreeMap<Vec<Vertex>, Colour>,
}

/// Two edges demanding different colours on the same tuple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Conflict {
    pub tuple: Vec<Vertex>,
    pub first: Colour,
    pub second: Colour,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Forced {
    Consistent(ShadowColouring),
    Conflict(Conflict),
}

#[derive(Serialize, Deserialize)]
struct WitnessJson {
    ordering: Vec<Vertex>,
    colours: Vec<ColourEntry>,
}

#[derive(Serialize, Deserialize)]
struct ColourEntry {
    tuple: Vec<Vertex>,
    colour: ColourLabel,
}

impl ShadowColouring {
    pub fn to_json(&self, k: usize) -> serde_json::Value {
        let body = WitnessJson {
            ordering: self.ordering.clone(),
            colours: self
                .colours
                .iter()
                .map(|(t, &c)| ColourEntry {
                    tuple: t.clone(),
                    colour: colour_label(k, c),
                })
                .collect(),
        };
        serde_json::to_value(body).expect("witness serialises")
    }

    pub fn from_json(value: &serde_json::Value, k: usize) -> Result<Self> {
        let body: WitnessJson = serde_json::from_value(value.clone())
            .map_err(|e| Error::InvalidArgument(format!("witness JSON: {e}")))?;
        let mut colours = BTreeMap::new();
        for entry in body.colours {
            let mut t = entry.tuple;
            t.sort_unstable();
            colours.insert(t, entry.colour.colour(k)?);
        }
        Ok(ShadowColouring {
            ordering: body.ordering,
            colours,
        })
    }
}

fn positions(n: usize, ordering: &[Vertex]) -> Result<Vec<usize>> {
    let mut pos = vec![usize::MAX; n];
    if ordering.len() != n {
        return Err(Error::InvalidArgument(format!(
            "ordering lists {} vertices, expected {n}",
            ordering.len()
        )));
    }
    for (i, &v) in ordering.iter().enumerate() {
        if v >= n || pos[v] != usize::MAX {
            return Err(Error::InvalidArgument(format!(
                "ordering is not a permutation of 0..{n}"
            )));
        }
        pos[v] = i;
    }
    Ok(pos)
}

/// The `(k-1)`-sets of `edge` with the colour each one is forced to take.
fn demands(edge: &[Vertex], pos: &[usize]) -> Vec<(Vec<Vertex>, Colour)> {
    let mut by_pos = edge.to_vec();
    by_pos.sort_by_key(|&v| pos[v]);
    by_pos
        .iter()
        .enumerate()
        .map(|(l, &skip)| {
            let tuple: Vec<Vertex> = edge.iter().copied().filter(|&v| v != skip).collect();
            (tuple, l + 1)
        })
        .collect()
}

/// Applies the position rule to every edge under a fixed ordering.
pub fn forced_colouring(f: &Hypergraph, ordering: &[Vertex]) -> Result<Forced> {
    let pos = positions(f.vertex_count(), ordering)?;
    let mut colours: BTreeMap<Vec<Vertex>, Colour> = BTreeMap::new();
    for e in f.edges() {
        for (tuple, c) in demands(e, &pos) {
            match colours.get(&tuple) {
                Some(&prev) if prev != c => {
                    return Ok(Forced::Conflict(Conflict {
                        tuple,
                        first: prev,
                        second: c,
                    }))
                }
                Some(_) => {}
                None => {
                    colours.insert(tuple, c);
                }
            }
        }
    }
    // every shadow tuple lies in an edge, so nothing is left for the default colour 1
    debug_assert_eq!(colours.len(), f.shadow().len());
    Ok(Forced::Consistent(ShadowColouring {
        ordering: ordering.to_vec(),
        colours,
    }))
}

/// Pure re-check of the rainbow condition, independent of the search.
pub fn verify_witness(f: &Hypergraph, w: &ShadowColouring) -> bool {
    let Ok(pos) = positions(f.vertex_count(), &w.ordering) else {
        return false;
    };
    let shadow = f.shadow();
    if shadow.len() != w.colours.len() || !shadow.iter().all(|t| w.colours.contains_key(t)) {
        return false;
    }
    let k = f.uniformity();
    f.edges().all(|e| {
        (1..=k).all(|l| {
            // the vertex at the l-th smallest position
            let skip = *e
                .iter()
                .find(|&&v| e.iter().filter(|&&u| pos[u] < pos[v]).count() == l - 1)
                .expect("positions are distinct");
            let rest: Vec<Vertex> = e.iter().copied().filter(|&v| v != skip).collect();
            w.colours.get(&rest) == Some(&l)
        })
    })
}

struct OrderSearch<'a> {
    f: &'a Hypergraph,
    incidence: Vec<Vec<usize>>,
    pos: Vec<usize>,
    ordering: Vec<Vertex>,
    colours: HashMap<Vec<Vertex>, (Colour, u32)>,
    log: Vec<Vec<Vertex>>,
}

impl OrderSearch<'_> {
    /// Records a demand; false on conflict.
    fn demand(&mut self, tuple: Vec<Vertex>, c: Colour) -> bool {
        match self.colours.get_mut(&tuple) {
            Some((prev, _)) if *prev != c => false,
            Some((_, count)) => {
                *count += 1;
                self.log.push(tuple);
                true
            }
            None => {
                self.colours.insert(tuple.clone(), (c, 1));
                self.log.push(tuple);
                true
            }
        }
    }

    fn undo_to(&mut self, mark: usize) {
        while self.log.len() > mark {
            let t = self.log.pop().expect("log longer than mark");
            let entry = self.colours.get_mut(&t).expect("logged tuples are present");
            entry.1 -= 1;
            if entry.1 == 0 {
                self.colours.remove(&t);
            }
        }
    }

    /// Places `v` at the next position and records everything that is now forced.
    fn place(&mut self, v: Vertex) -> bool {
        let k = self.f.uniformity();
        self.pos[v] = self.ordering.len();
        self.ordering.push(v);
        for i in 0..self.incidence[v].len() {
            let e = self.f.edge(self.incidence[v][i]);
            let unplaced: Vec<Vertex> = e.iter().copied().filter(|&u| self.pos[u] == usize::MAX).collect();
            let ok = match unplaced.len() {
                // the last vertex to arrive will be the largest, so the others get colour k
                1 => {
                    let tuple: Vec<Vertex> = e.iter().copied().filter(|&u| u != unplaced[0]).collect();
                    self.demand(tuple, k)
                }
                0 => demands(e, &self.pos)
                    .into_iter()
                    .filter(|&(_, c)| c < k)
                    .all(|(tuple, c)| self.demand(tuple, c)),
                _ => true,
            };
            if !ok {
                return false;
            }
        }
        true
    }

    fn unplace(&mut self, v: Vertex) {
        self.pos[v] = usize::MAX;
        self.ordering.pop();
    }

    fn run(&mut self) -> bool {
        let n = self.f.vertex_count();
        if self.ordering.len() == n {
            return true;
        }
        for v in 0..n {
            if self.pos[v] != usize::MAX {
                continue;
            }
            let mark = self.log.len();
            if self.place(v) && self.run() {
                return true;
            }
            self.undo_to(mark);
            self.unplace(v);
        }
        false
    }
}

/// Searches for an ordering whose forced colouring is consistent.
///
/// Orderings are explored as prefixes, vertices in ascending index, so the
/// witness is the lexicographically least valid ordering.
pub fn decide_condition_b(f: &Hypergraph) -> Result<Option<ShadowColouring>> {
    if f.uniformity() < 3 {
        return Err(Error::Uniformity {
            k: f.uniformity(),
            min: 3,
        });
    }
    let n = f.vertex_count();
    let mut search = OrderSearch {
        f,
        incidence: f.incidence(),
        pos: vec![usize::MAX; n],
        ordering: Vec::with_capacity(n),
        colours: HashMap::new(),
        log: Vec::new(),
    };
    if !search.run() {
        return Ok(None);
    }
    match forced_colouring(f, &search.ordering)? {
        Forced::Consistent(w) => Ok(Some(w)),
        Forced::Conflict(c) => unreachable!("search accepted an ordering with conflict {c:?}"),
    }
}

/// A total colouring of all `(k-1)`-subsets of `0..n` with colours `1..=k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairColouring {
    k: usize,
    n: usize,
    /// Indexed by colex rank of the tuple.
    colours: Vec<Colour>,
}

impl PairColouring {
    pub fn from_fn(k: usize, n: usize, mut colour: impl FnMut(&[Vertex]) -> Colour) -> Result<Self> {
        if k < 3 {
            return Err(Error::Uniformity { k, min: 3 });
        }
        let mut colours = vec![0; binomial(n as u64, k as u64 - 1) as usize];
        for t in combinations(n, k - 1) {
            let c = colour(&t);
            if c == 0 || c > k {
                return Err(Error::ColourOutOfRange { colour: c, k });
            }
            colours[colex_rank(&t)] = c;
        }
        Ok(PairColouring { k, n, colours })
    }

    /// Builds from explicit entries; every `(k-1)`-subset must be listed.
    pub fn from_entries(k: usize, n: usize, entries: &BTreeMap<Vec<Vertex>, Colour>) -> Result<Self> {
        for t in entries.keys() {
            if t.len() + 1 != k || t.iter().any(|&v| v >= n) || t.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidArgument(format!("bad tuple {t:?}")));
            }
        }
        if let Some(t) = combinations(n, k - 1).find(|t| !entries.contains_key(t)) {
            return Err(Error::NotTotal(t));
        }
        Self::from_fn(k, n, |t| entries[t])
    }

    pub fn uniformity(&self) -> usize {
        self.k
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    /// Colour of a sorted `(k-1)`-tuple.
    pub fn get(&self, tuple: &[Vertex]) -> Colour {
        self.colours[colex_rank(tuple)]
    }

    /// File format: `k n` header, then one line per tuple in lexicographic
    /// order listing the tuple followed by its colour index.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.k, self.n);
        for t in combinations(self.n, self.k - 1) {
            for v in &t {
                out.push_str(&v.to_string());
                out.push(' ');
            }
            out.push_str(&self.get(&t).to_string());
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let nums = |lineno: usize, line: &str| -> std::result::Result<Vec<usize>, ParseError> {
            line.split_whitespace()
                .map(|t| t.parse().map_err(|_| ParseError::new(lineno, format!("`{t}` is not an integer"))))
                .collect()
        };
        let (hl, header) = lines.next().ok_or_else(|| ParseError::new(1, "missing header `k n`"))?;
        let [k, n] = nums(hl, header)?[..] else {
            return Err(ParseError::new(hl, "header needs `k n`").into());
        };
        if k < 3 {
            return Err(ParseError::new(hl, format!("uniformity {k} is below 3")).into());
        }
        let mut entries = BTreeMap::new();
        for (lineno, line) in lines {
            let row = nums(lineno, line)?;
            if row.len() != k {
                return Err(ParseError::new(lineno, format!("expected {} vertices and a colour", k - 1)).into());
            }
            let (tuple, c) = row.split_at(k - 1);
            if tuple.windows(2).any(|w| w[0] >= w[1]) || tuple.iter().any(|&v| v >= n) {
                return Err(ParseError::new(lineno, "tuple must be strictly increasing and in range").into());
            }
            if c[0] == 0 || c[0] > k {
                return Err(ParseError::new(lineno, format!("colour {} outside 1..={k}", c[0])).into());
            }
            if entries.insert(tuple.to_vec(), c[0]).is_some() {
                return Err(ParseError::new(lineno, "tuple listed twice").into());
            }
        }
        Self::from_entries(k, n, &entries)
    }
}

/// Independent uniform colours for every `(k-1)`-subset, drawn in lexicographic order.
pub fn random_pair_colouring(n: usize, k: usize, seed: u64) -> Result<PairColouring> {
    if n + 1 < k {
        return Err(Error::InvalidArgument(format!("need n >= k - 1, got n = {n}, k = {k}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    PairColouring::from_fn(k, n, |_| rng.random_range(1..=k))
}

/// Whether `build_h_phi` is used beyond the 3-uniform construction.
pub fn h_phi_is_extension(k: usize) -> bool {
    k != 3
}

/// The hypergraph whose edges are the `k`-sets `e` with colour `ℓ` on
/// `e \ {ℓ-th smallest vertex}` for every `ℓ`. For `k = 3`: `{i<j<l}` is an
/// edge iff `ij` is red, `il` blue and `jl` green.
pub fn build_h_phi(phi: &PairColouring) -> Hypergraph {
    let k = phi.k;
    let mut edges = Vec::new();
    let mut rest = Vec::with_capacity(k - 1);
    for e in combinations(phi.n, k) {
        let is_edge = (0..k).all(|l| {
            rest.clear();
            rest.extend(e.iter().enumerate().filter(|&(i, _)| i != l).map(|(_, &v)| v));
            phi.get(&rest) == l + 1
        });
        if is_edge {
            edges.extend(e);
        }
    }
    Hypergraph::from_canonical(k, phi.n, edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::enumerate_hypergraphs;
    use crate::hypergraph::fixtures::*;
    use crate::search::contains_copy;

    const V: usize = 0;
    const W: usize = 1;
    const X: usize = 2;
    const Y: usize = 3;
    const Z: usize = 4;

    fn reference_colours() -> BTreeMap<Vec<Vertex>, Colour> {
        let pairs = [
            ([W, X], RED),
            ([X, Z], RED),
            ([V, Z], RED),
            ([V, X], BLUE),
            ([V, Y], BLUE),
            ([X, Y], BLUE),
            ([V, W], GREEN),
            ([W, Y], GREEN),
            ([Y, Z], GREEN),
        ];
        pairs
            .into_iter()
            .map(|(mut p, c)| {
                p.sort_unstable();
                (p.to_vec(), c)
            })
            .collect()
    }

    #[test]
    fn forced_colouring_reproduces_the_reference_colouring() {
        let Forced::Consistent(w) = forced_colouring(&c5_minus(), &[X, W, V, Z, Y]).unwrap() else {
            panic!("ordering x<w<v<z<y must be consistent");
        };
        assert_eq!(w.colours, reference_colours());
        assert!(verify_witness(&c5_minus(), &w));
    }

    #[test]
    fn forced_colouring_k4_conflict() {
        let Forced::Conflict(c) = forced_colouring(&k4(), &[0, 1, 2, 3]).unwrap() else {
            panic!("K4 is never consistent");
        };
        assert_eq!(c.tuple, vec![0, 2]);
        assert_eq!((c.first, c.second), (BLUE, RED));
    }

    #[test]
    fn forced_colouring_single_edge() {
        for ord in [[0, 1, 2], [2, 0, 1], [1, 2, 0]] {
            assert!(matches!(forced_colouring(&single_edge(), &ord).unwrap(), Forced::Consistent(_)));
        }
        assert!(forced_colouring(&single_edge(), &[0, 0, 1]).is_err());
    }

    #[test]
    fn decider_examples() {
        let w = decide_condition_b(&c5_minus()).unwrap().expect("C5- satisfies (b)");
        assert!(verify_witness(&c5_minus(), &w));
        assert_eq!(decide_condition_b(&k4()).unwrap(), None);
        let tripartite = Hypergraph::new(3, 6, [[0, 2, 4], [0, 3, 4], [1, 2, 5], [1, 3, 4], [0, 2, 5]]).unwrap();
        assert!(decide_condition_b(&tripartite).unwrap().is_some());
        let graph = Hypergraph::new(2, 2, [[0, 1]]).unwrap();
        assert!(decide_condition_b(&graph).is_err());
    }

    #[test]
    fn verify_rejects_bad_witnesses() {
        let mut w = decide_condition_b(&single_edge()).unwrap().unwrap();
        assert!(verify_witness(&single_edge(), &w));
        let swapped: BTreeMap<_, _> = w.colours.iter().map(|(t, &c)| (t.clone(), 4 - c)).collect();
        w.colours = swapped;
        assert!(!verify_witness(&single_edge(), &w));

        let edgeless = Hypergraph::empty(3, 4).unwrap();
        let empty = ShadowColouring {
            ordering: vec![3, 1, 0, 2],
            colours: BTreeMap::new(),
        };
        assert!(verify_witness(&edgeless, &empty));
        let mut extra = empty.clone();
        extra.colours.insert(vec![0, 1], 1);
        assert!(!verify_witness(&edgeless, &extra));
    }

    #[test]
    fn witness_json_round_trip() {
        let w = decide_condition_b(&c5_minus()).unwrap().unwrap();
        let json = w.to_json(3);
        assert!(json["colours"][0]["colour"].is_string());
        assert_eq!(ShadowColouring::from_json(&json, 3).unwrap(), w);
    }

    /// Brute force over every colouring of the shadow for one ordering.
    fn naive_consistent(f: &Hypergraph, ordering: &[Vertex]) -> bool {
        let k = f.uniformity();
        let shadow: Vec<Vec<Vertex>> = f.shadow().iter().cloned().collect();
        let total = k.pow(shadow.len() as u32);
        (0..total).any(|code| {
            let colours: BTreeMap<_, _> = shadow
                .iter()
                .enumerate()
                .map(|(i, t)| (t.clone(), code / k.pow(i as u32) % k + 1))
                .collect();
            verify_witness(
                f,
                &ShadowColouring {
                    ordering: ordering.to_vec(),
                    colours,
                },
            )
        })
    }

    #[test]
    fn fixed_ordering_agrees_with_naive_enumeration() {
        for f in enumerate_hypergraphs(3, 4).unwrap() {
            for ord in [[0, 1, 2, 3], [2, 0, 3, 1], [3, 2, 1, 0]] {
                let forced = matches!(forced_colouring(&f, &ord).unwrap(), Forced::Consistent(_));
                assert_eq!(forced, naive_consistent(&f, &ord), "{f:?} {ord:?}");
            }
        }
    }

    #[test]
    fn decider_is_relabelling_invariant() {
        use rand::seq::SliceRandom;
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for f in enumerate_hypergraphs(3, 5).unwrap().step_by(37) {
            let mut perm: Vec<usize> = (0..5).collect();
            perm.shuffle(&mut rng);
            let g = f.relabel(&perm).unwrap();
            assert_eq!(
                decide_condition_b(&f).unwrap().is_some(),
                decide_condition_b(&g).unwrap().is_some()
            );
        }
    }

    #[test]
    fn h_phi_small_examples() {
        let mut entries = BTreeMap::new();
        entries.insert(vec![0, 1], RED);
        entries.insert(vec![0, 2], BLUE);
        entries.insert(vec![1, 2], GREEN);
        let phi = PairColouring::from_entries(3, 3, &entries).unwrap();
        assert_eq!(build_h_phi(&phi), single_edge());

        entries.insert(vec![0, 1], BLUE);
        let phi = PairColouring::from_entries(3, 3, &entries).unwrap();
        assert_eq!(build_h_phi(&phi).edge_count(), 0);

        entries.remove(&vec![0, 1]);
        assert!(matches!(PairColouring::from_entries(3, 3, &entries), Err(Error::NotTotal(_))));
    }

    #[test]
    fn reference_colouring_as_host_contains_c5_minus() {
        let mut entries = reference_colours();
        entries.insert(vec![W, Z], GREEN);
        let ordered: Vec<usize> = vec![X, W, V, Z, Y];
        // relabel so the reference ordering becomes 0<1<2<3<4
        let mut rank = [0; 5];
        for (i, &v) in ordered.iter().enumerate() {
            rank[v] = i;
        }
        let relabelled: BTreeMap<_, _> = entries
            .into_iter()
            .map(|(t, c)| {
                let mut u: Vec<usize> = t.iter().map(|&v| rank[v]).collect();
                u.sort_unstable();
                (u, c)
            })
            .collect();
        let phi = PairColouring::from_entries(3, 5, &relabelled).unwrap();
        let host = build_h_phi(&phi);
        assert_eq!(host.edge_count(), 4);
        assert!(contains_copy(&c5_minus(), &host).unwrap().is_some());
    }

    #[test]
    fn random_colouring_is_deterministic_and_balanced() {
        let a = random_pair_colouring(60, 3, 42).unwrap();
        assert_eq!(a, random_pair_colouring(60, 3, 42).unwrap());
        assert_ne!(a, random_pair_colouring(60, 3, 43).unwrap());
        let mut freq = [0usize; 4];
        for t in combinations(60, 2) {
            freq[a.get(&t)] += 1;
        }
        for c in 1..=3 {
            let share = freq[c] as f64 / 1770.0;
            assert!((share - 1.0 / 3.0).abs() <= 0.03, "colour {c}: {share}");
        }
        assert_eq!(random_pair_colouring(3, 3, 0).unwrap().colours.len(), 3);
    }

    #[test]
    fn pair_colouring_file_round_trip() {
        let phi = random_pair_colouring(6, 3, 7).unwrap();
        assert_eq!(PairColouring::parse(&phi.to_text()).unwrap(), phi);
        assert!(PairColouring::parse("3 3\n0 1 1\n0 2 2\n").is_err());
        assert!(PairColouring::parse("3 3\n0 1 4\n0 2 2\n1 2 1\n").is_err());
    }

    #[test]
    fn k4_never_embeds_in_any_four_vertex_h_phi() {
        for code in 0..3usize.pow(6) {
            let pairs: Vec<Vec<usize>> = combinations(4, 2).collect();
            let entries: BTreeMap<_, _> = pairs
                .into_iter()
                .enumerate()
                .map(|(i, p)| (p, code / 3usize.pow(i as u32) % 3 + 1))
                .collect();
            let host = build_h_phi(&PairColouring::from_entries(3, 4, &entries).unwrap());
            assert!(contains_copy(&k4(), &host).unwrap().is_none());
        }
    }

    #[test]
    fn four_uniform_variant() {
        let f = Hypergraph::new(4, 5, [[0, 1, 2, 3], [1, 2, 3, 4]]).unwrap();
        let w = decide_condition_b(&f).unwrap().unwrap();
        assert!(verify_witness(&f, &w));
        assert!(h_phi_is_extension(4));
        let host = build_h_phi(&random_pair_colouring(8, 4, 1).unwrap());
        assert_eq!(host.uniformity(), 4);
    }
}
