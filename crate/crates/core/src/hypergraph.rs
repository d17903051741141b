//! Canonical `k`-uniform hypergraphs on the vertex set `0..n`.
//!
//! Edges are stored flat, each edge sorted ascending and the edge list sorted
//! lexicographically without duplicates, so two hypergraphs are equal exactly
//! when their edge sets are.

use std::collections::BTreeSet;
use std::fmt;

use crate::combinatorics::{binomial, combinations};
use crate::error::{Error, ParseError, Result};

pub type Vertex = usize;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Hypergraph {
    k: usize,
    n: usize,
    edges: Vec<Vertex>,
}

/// The `(k-1)`-sets covered by at least one edge.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Shadow(pub BTreeSet<Vec<Vertex>>);

impl Shadow {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, tuple: &[Vertex]) -> bool {
        self.0.contains(tuple)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Vec<Vertex>> {
        self.0.iter()
    }
}

impl Hypergraph {
    /// Builds a hypergraph from arbitrary edges; each edge is sorted, then the
    /// whole list is validated and canonicalised.
    pub fn new<I, E>(k: usize, n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = E>,
        E: AsRef<[Vertex]>,
    {
        if k < 2 {
            return Err(Error::Uniformity { k, min: 2 });
        }
        let mut list: Vec<Vec<Vertex>> = Vec::new();
        for e in edges {
            let e = e.as_ref();
            if e.len() != k {
                return Err(Error::EdgeArity {
                    edge: e.to_vec(),
                    expected: k,
                    found: e.len(),
                });
            }
            let mut sorted = e.to_vec();
            sorted.sort_unstable();
            if let Some(&v) = sorted.iter().find(|&&v| v >= n) {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::RepeatedVertex {
                    vertex: w[0],
                    edge: e.to_vec(),
                });
            }
            list.push(sorted);
        }
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateEdge(w[0].clone()));
        }
        Ok(Hypergraph {
            k,
            n,
            edges: list.concat(),
        })
    }

    /// Caller guarantees sorted edges in strictly increasing order.
    pub(crate) fn from_canonical(k: usize, n: usize, edges: Vec<Vertex>) -> Self {
        debug_assert_eq!(edges.len() % k, 0);
        debug_assert!(edges
            .chunks_exact(k)
            .all(|e| e.windows(2).all(|w| w[0] < w[1]) && e[k - 1] < n));
        debug_assert!(edges
            .chunks_exact(k)
            .zip(edges.chunks_exact(k).skip(1))
            .all(|(a, b)| a < b));
        Hypergraph { k, n, edges }
    }

    pub fn empty(k: usize, n: usize) -> Result<Self> {
        Self::new(k, n, std::iter::empty::<Vec<Vertex>>())
    }

    pub fn complete(k: usize, n: usize) -> Result<Self> {
        Self::new(k, n, combinations(n, k))
    }

    pub fn uniformity(&self) -> usize {
        self.k
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len() / self.k
    }

    pub fn edges(&self) -> impl ExactSizeIterator<Item = &[Vertex]> + Clone + '_ {
        self.edges.chunks_exact(self.k)
    }

    pub fn edge(&self, i: usize) -> &[Vertex] {
        &self.edges[i * self.k..(i + 1) * self.k]
    }

    /// Membership test for a sorted `k`-tuple.
    pub fn contains_edge(&self, sorted: &[Vertex]) -> bool {
        if sorted.len() != self.k {
            return false;
        }
        let (mut lo, mut hi) = (0, self.edge_count());
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.edge(mid).cmp(sorted) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return true,
            }
        }
        false
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for &v in &self.edges {
            deg[v] += 1;
        }
        deg
    }

    /// Edge indices incident to each vertex.
    pub fn incidence(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.n];
        for (i, e) in self.edges().enumerate() {
            for &v in e {
                inc[v].push(i);
            }
        }
        inc
    }

    pub fn shadow(&self) -> Shadow {
        let mut out = BTreeSet::new();
        for e in self.edges() {
            for skip in 0..self.k {
                let t: Vec<Vertex> = e
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != skip)
                    .map(|(_, &v)| v)
                    .collect();
                out.insert(t);
            }
        }
        Shadow(out)
    }

    /// Number of edges with every vertex in `subset`. Vertices outside `0..n`
    /// are ignored; duplicates in `subset` are harmless.
    pub fn induced_edge_count(&self, subset: &[Vertex]) -> usize {
        let mut member = vec![false; self.n];
        for &v in subset {
            if v < self.n {
                member[v] = true;
            }
        }
        self.edges()
            .filter(|e| e.iter().all(|&v| member[v]))
            .count()
    }

    /// The sub-hypergraph induced on `subset`, relabelled to `0..|subset|` in
    /// the order the vertices are listed.
    pub fn induced(&self, subset: &[Vertex]) -> Result<Hypergraph> {
        let mut label = vec![usize::MAX; self.n];
        for (i, &v) in subset.iter().enumerate() {
            if v >= self.n {
                return Err(Error::VertexOutOfRange { vertex: v, n: self.n });
            }
            label[v] = i;
        }
        let edges: Vec<Vec<Vertex>> = self
            .edges()
            .filter(|e| e.iter().all(|&v| label[v] != usize::MAX))
            .map(|e| e.iter().map(|&v| label[v]).collect())
            .collect();
        Hypergraph::new(self.k, subset.len(), edges)
    }

    /// Image under the vertex permutation `perm` (vertex `v` becomes `perm[v]`).
    pub fn relabel(&self, perm: &[Vertex]) -> Result<Hypergraph> {
        if perm.len() != self.n {
            return Err(Error::InvalidArgument(format!(
                "permutation has length {}, expected {}",
                perm.len(),
                self.n
            )));
        }
        let edges: Vec<Vec<Vertex>> = self
            .edges()
            .map(|e| e.iter().map(|&v| perm[v]).collect())
            .collect();
        Hypergraph::new(self.k, self.n, edges)
    }

    /// Copy with one more edge; returns `self` unchanged if the edge exists.
    pub fn with_edge(&self, edge: &[Vertex]) -> Result<Hypergraph> {
        let mut sorted = edge.to_vec();
        sorted.sort_unstable();
        if self.contains_edge(&sorted) {
            return Ok(self.clone());
        }
        let edges = self.edges().map(<[Vertex]>::to_vec).chain(Some(sorted));
        Hypergraph::new(self.k, self.n, edges)
    }

    /// Serialises to the HYG text format.
    pub fn to_hyg(&self) -> String {
        let mut out = format!("{} {} {}\n", self.k, self.n, self.edge_count());
        for e in self.edges() {
            let line: Vec<String> = e.iter().map(|v| v.to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    /// Parses the HYG text format: a header `k n m`, then `m` lines of `k`
    /// strictly increasing 0-based vertices. Lines starting with `#` and blank
    /// lines are skipped.
    pub fn parse_hyg(text: &str) -> std::result::Result<Hypergraph, ParseError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        let (hline, header) = lines
            .next()
            .ok_or_else(|| ParseError::new(1, "missing header `k n m`"))?;
        let nums = parse_numbers(hline, header)?;
        let [k, n, m] = nums[..] else {
            return Err(ParseError::new(
                hline,
                format!("header needs 3 numbers `k n m`, found {}", nums.len()),
            ));
        };
        if k < 2 {
            return Err(ParseError::new(hline, format!("uniformity {k} is below 2")));
        }

        let mut seen = BTreeSet::new();
        let mut count = 0;
        let mut last_line = hline;
        for (lineno, line) in lines {
            last_line = lineno;
            count += 1;
            if count > m {
                return Err(ParseError::new(
                    lineno,
                    format!("more than the {m} edges announced in the header"),
                ));
            }
            let e = parse_numbers(lineno, line)?;
            if e.len() != k {
                return Err(ParseError::new(
                    lineno,
                    format!("edge has {} vertices, expected {k}", e.len()),
                ));
            }
            if let Some(&v) = e.iter().find(|&&v| v >= n) {
                return Err(ParseError::new(
                    lineno,
                    format!("vertex {v} out of range for {n} vertices"),
                ));
            }
            if e.windows(2).any(|w| w[0] >= w[1]) {
                let mut sorted = e.clone();
                sorted.sort_unstable();
                return Err(match sorted.windows(2).find(|w| w[0] == w[1]) {
                    Some(w) => ParseError::new(lineno, format!("vertex {} repeated within edge", w[0])),
                    None => ParseError::new(lineno, "edge vertices are not strictly increasing"),
                });
            }
            if seen.contains(&e) {
                return Err(ParseError::new(lineno, format!("duplicate edge {e:?}")));
            }
            seen.insert(e);
        }
        if count < m {
            return Err(ParseError::new(
                last_line,
                format!("header announces {m} edges, found {count}"),
            ));
        }
        let sorted: Vec<Vertex> = seen.into_iter().flatten().collect();
        Ok(Hypergraph::from_canonical(k, n, sorted))
    }
}

fn parse_numbers(lineno: usize, line: &str) -> std::result::Result<Vec<usize>, ParseError> {
    line.split_whitespace()
        .map(|tok| {
            tok.parse::<usize>()
                .map_err(|_| ParseError::new(lineno, format!("`{tok}` is not a non-negative integer")))
        })
        .collect()
}

impl fmt::Debug for Hypergraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Hypergraph")
            .field("k", &self.k)
            .field("n", &self.n)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

impl std::str::FromStr for Hypergraph {
    type Err = ParseError;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Hypergraph::parse_hyg(s)
    }
}

/// Largest number of edge slots `C(f,k)` that [`enumerate_hypergraphs`] accepts.
pub const ENUMERATION_SLOT_LIMIT: u64 = 25;

/// Every labelled `k`-uniform hypergraph on `f` vertices, in edge-bitmask
/// order: bit `i` of the mask selects the `i`-th `k`-subset in lexicographic order.
pub fn enumerate_hypergraphs(
    k: usize,
    f: usize,
) -> Result<impl Iterator<Item = Hypergraph>> {
    if k < 2 {
        return Err(Error::Uniformity { k, min: 2 });
    }
    let slots = binomial(f as u64, k as u64);
    if slots > ENUMERATION_SLOT_LIMIT {
        return Err(Error::EnumerationTooLarge {
            k,
            f,
            slots,
            limit: ENUMERATION_SLOT_LIMIT,
        });
    }
    let subsets: Vec<Vec<Vertex>> = combinations(f, k).collect();
    Ok((0usize..1 << slots).map(move |mask| {
        let edges: Vec<Vertex> = subsets
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .flat_map(|(_, s)| s.iter().copied())
            .collect();
        Hypergraph::from_canonical(k, f, edges)
    }))
}
