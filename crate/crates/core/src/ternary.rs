//! The k-ary hypergraphs `T_n^(k)` and the recursive partition test for
//! embedding a pattern into one of them.
//!
//! A vertex of `T_n^(k)` is a length-`n` vector over `0..k`, encoded as a
//! base-`k` integer with the first coordinate most significant. `k` vectors
//! form an edge when, at the first coordinate where they are not all equal,
//! they take every value in `0..k`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, Vertex};

/// Largest vertex count `build_ternary` materialises.
pub const TERNARY_VERTEX_LIMIT: usize = 256;
/// Largest edge count `build_ternary` materialises.
pub const TERNARY_EDGE_LIMIT: u64 = 2_000_000;

/// A vector in `{0,…,k-1}^n`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct KaryVector {
    k: usize,
    coords: Vec<u8>,
}

impl KaryVector {
    pub fn new(k: usize, coords: Vec<u8>) -> Result<Self> {
        if !(2..=36).contains(&k) {
            return Err(Error::InvalidArgument(format!("base {k} outside 2..=36")));
        }
        if let Some(&c) = coords.iter().find(|&&c| c as usize >= k) {
            return Err(Error::InvalidArgument(format!("coordinate {c} outside 0..{k}")));
        }
        Ok(KaryVector { k, coords })
    }

    /// Decodes the vertex index used by [`build_ternary`].
    pub fn from_index(k: usize, n: usize, mut index: usize) -> Self {
        let mut coords = vec![0u8; n];
        for c in coords.iter_mut().rev() {
            *c = (index % k) as u8;
            index /= k;
        }
        KaryVector { k, coords }
    }

    pub fn to_index(&self) -> usize {
        self.coords.iter().fold(0, |acc, &c| acc * self.k + c as usize)
    }

    pub fn base(&self) -> usize {
        self.k
    }

    pub fn coords(&self) -> &[u8] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn parse(k: usize, digits: &str) -> Result<Self> {
        let coords = digits
            .chars()
            .map(|ch| {
                ch.to_digit(36)
                    .filter(|&d| (d as usize) < k)
                    .map(|d| d as u8)
                    .ok_or_else(|| Error::InvalidArgument(format!("`{ch}` is not a base-{k} digit")))
            })
            .collect::<Result<Vec<u8>>>()?;
        KaryVector::new(k, coords)
    }
}

impl fmt::Display for KaryVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &c in &self.coords {
            let ch = char::from_digit(c as u32, 36).expect("base is at most 36");
            write!(f, "{ch}")?;
        }
        Ok(())
    }
}

/// The edge rule of `T_n^(k)` applied to `k` vectors.
pub fn kary_edge(k: usize, vs: &[KaryVector]) -> Result<bool> {
    if vs.len() != k {
        return Err(Error::InvalidArgument(format!("expected {k} vectors, got {}", vs.len())));
    }
    let len = vs[0].len();
    if vs.iter().any(|v| v.len() != len) {
        return Err(Error::UnequalLengths);
    }
    for (i, a) in vs.iter().enumerate() {
        if vs[i + 1..].contains(a) {
            return Err(Error::DuplicateVector(a.to_string()));
        }
    }
    let column = (0..len)
        .find(|&i| vs.iter().any(|v| v.coords[i] != vs[0].coords[i]))
        .expect("distinct vectors differ somewhere");
    let mut seen = vec![false; k];
    for v in vs {
        seen[v.coords[column] as usize] = true;
    }
    Ok(seen.iter().all(|&s| s))
}

/// `e(T_n^(k)) = (k^{kn} - k^n) / (k^k - k)`.
pub fn kary_edge_count(k: usize, n: usize) -> BigUint {
    let k_big = BigUint::from(k);
    let kn = k_big.pow(n as u32);
    let numerator = kn.pow(k as u32) - &kn;
    numerator / (k_big.pow(k as u32) - &k_big)
}

/// Materialises `T_n^(k)`.
pub fn build_ternary(k: usize, n: usize) -> Result<Hypergraph> {
    if !(3..=36).contains(&k) {
        return Err(Error::Uniformity { k, min: 3 });
    }
    let vertices = (k as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if vertices > TERNARY_VERTEX_LIMIT as u128 {
        return Err(Error::SizeLimit {
            what: "vertex count of T_n",
            size: vertices,
            limit: TERNARY_VERTEX_LIMIT as u128,
        });
    }
    let edges = kary_edge_count(k, n);
    if edges > BigUint::from(TERNARY_EDGE_LIMIT) {
        return Err(Error::SizeLimit {
            what: "edge count of T_n",
            size: u128::try_from(edges).unwrap_or(u128::MAX),
            limit: TERNARY_EDGE_LIMIT as u128,
        });
    }

    // k shifted copies of T_{m-1} plus every transversal of the k blocks
    let mut list: Vec<Vec<Vertex>> = Vec::new();
    let mut block = 1usize;
    for _ in 0..n {
        let mut next = Vec::with_capacity(list.len() * k);
        for c in 0..k {
            next.extend(list.iter().map(|e| e.iter().map(|&v| v + c * block).collect::<Vec<_>>()));
        }
        let mut pick = vec![0usize; k];
        loop {
            next.push(pick.iter().enumerate().map(|(c, &v)| v + c * block).collect());
            let Some(i) = (0..k).rev().find(|&i| pick[i] + 1 < block) else {
                break;
            };
            pick[i] += 1;
            pick[i + 1..].iter_mut().for_each(|p| *p = 0);
        }
        list = next;
        block *= k;
    }
    list.sort_unstable();
    Ok(Hypergraph::from_canonical(k, block, list.concat()))
}

/// An injective map from pattern vertices into `{0,…,k-1}^length` under
/// which every pattern edge satisfies the k-ary edge rule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbeddingWitness {
    pub k: usize,
    pub length: usize,
    pub map: Vec<KaryVector>,
}

#[derive(Serialize, Deserialize)]
struct WitnessJson {
    length: usize,
    map: BTreeMap<Vertex, String>,
}

impl EmbeddingWitness {
    pub fn to_json(&self) -> serde_json::Value {
        let body = WitnessJson {
            length: self.length,
            map: self.map.iter().enumerate().map(|(v, x)| (v, x.to_string())).collect(),
        };
        serde_json::to_value(body).expect("witness serialises")
    }

    pub fn from_json(value: &serde_json::Value, k: usize) -> Result<Self> {
        let body: WitnessJson = serde_json::from_value(value.clone())
            .map_err(|e| Error::InvalidArgument(format!("witness JSON: {e}")))?;
        let map = body
            .map
            .iter()
            .enumerate()
            .map(|(i, (&v, digits))| {
                if v != i {
                    return Err(Error::InvalidArgument(format!("witness skips vertex {i}")));
                }
                KaryVector::parse(k, digits)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(EmbeddingWitness {
            k,
            length: body.length,
            map,
        })
    }

    /// Host vertex indices in `T_length^(k)`.
    pub fn indices(&self) -> Vec<Vertex> {
        self.map.iter().map(KaryVector::to_index).collect()
    }
}

/// Re-checks a witness without using the search code.
pub fn verify_embedding(f: &Hypergraph, w: &EmbeddingWitness) -> bool {
    if w.k != f.uniformity() || w.map.len() != f.vertex_count() {
        return false;
    }
    if w.map.iter().any(|x| x.len() != w.length || x.base() != w.k) {
        return false;
    }
    let mut sorted = w.map.clone();
    sorted.sort();
    if sorted.windows(2).any(|p| p[0] == p[1]) {
        return false;
    }
    f.edges().all(|e| {
        let vs: Vec<KaryVector> = e.iter().map(|&v| w.map[v].clone()).collect();
        kary_edge(w.k, &vs).unwrap_or(false)
    })
}

/// Largest pattern the partition search accepts (subsets are bitmasks).
pub const PARTITION_VERTEX_LIMIT: usize = 64;

type Coords = BTreeMap<Vertex, Vec<u8>>;

struct PartitionSearch {
    k: usize,
    edge_masks: Vec<u64>,
    edges: Vec<Vec<Vertex>>,
    memo: HashMap<u64, Option<Coords>>,
}

impl PartitionSearch {
    fn solve(&mut self, set: u64) -> Option<Coords> {
        if let Some(hit) = self.memo.get(&set) {
            return hit.clone();
        }
        let result = self.solve_uncached(set);
        self.memo.insert(set, result.clone());
        result
    }

    fn solve_uncached(&mut self, set: u64) -> Option<Coords> {
        let verts: Vec<Vertex> = (0..64).filter(|&v| set >> v & 1 == 1).collect();
        let inside: Vec<usize> = (0..self.edge_masks.len())
            .filter(|&i| self.edge_masks[i] & !set == 0)
            .collect();
        if inside.is_empty() {
            return Some(self.distinct_codes(&verts));
        }

        // edges indexed by the position of their last vertex within `verts`
        let mut closing: Vec<Vec<usize>> = vec![Vec::new(); verts.len()];
        for &i in &inside {
            let last = *self.edges[i].iter().max().expect("edges are non-empty");
            let p = verts.binary_search(&last).expect("edge inside set");
            closing[p].push(i);
        }
        let mut label = vec![usize::MAX; 64];
        self.assign(0, 0, &verts, &closing, &mut label)
    }

    /// Distinct vectors of the minimal common length for an edgeless set.
    fn distinct_codes(&self, verts: &[Vertex]) -> Coords {
        let mut len = 0;
        while self.k.pow(len as u32) < verts.len() {
            len += 1;
        }
        verts
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, KaryVector::from_index(self.k, len, i).coords))
            .collect()
    }

    fn edge_ok(&self, edge: usize, label: &[usize]) -> bool {
        let e = &self.edges[edge];
        let first = label[e[0]];
        if e.iter().all(|&v| label[v] == first) {
            return true;
        }
        let mut seen = vec![false; self.k];
        e.iter().all(|&v| !std::mem::replace(&mut seen[label[v]], true))
    }

    /// Assigns parts to `verts[pos..]` in canonical first-use order.
    fn assign(
        &mut self,
        pos: usize,
        used: usize,
        verts: &[Vertex],
        closing: &[Vec<usize>],
        label: &mut Vec<usize>,
    ) -> Option<Coords> {
        if pos == verts.len() {
            if used < 2 {
                return None;
            }
            return self.combine(used, verts, label);
        }
        let v = verts[pos];
        for part in 0..(used + 1).min(self.k) {
            label[v] = part;
            if closing[pos].iter().all(|&e| self.edge_ok(e, label)) {
                let found = self.assign(pos + 1, used.max(part + 1), verts, closing, label);
                if found.is_some() {
                    return found;
                }
            }
        }
        label[v] = usize::MAX;
        None
    }

    /// Recurses into each part and prefixes the part label.
    fn combine(&mut self, used: usize, verts: &[Vertex], label: &[usize]) -> Option<Coords> {
        let mut parts = vec![0u64; used];
        for &v in verts {
            parts[label[v]] |= 1 << v;
        }
        let mut sub = Vec::with_capacity(used);
        for &p in &parts {
            sub.push(self.solve(p)?);
        }
        let depth = sub
            .iter()
            .flat_map(|c| c.values().map(Vec::len))
            .max()
            .unwrap_or(0);
        let mut out = Coords::new();
        for (part, coords) in sub.into_iter().enumerate() {
            for (v, mut tail) in coords {
                tail.resize(depth, 0);
                let mut full = Vec::with_capacity(depth + 1);
                full.push(part as u8);
                full.extend(tail);
                out.insert(v, full);
            }
        }
        Some(out)
    }
}

/// Decides whether `f` is a subhypergraph of some `T_ℓ^(k)` with `ℓ <= v(f)`.
///
/// The vertex set is split into `k` labelled parts (at least two nonempty)
/// so that every edge lies in one part or meets every part, then each part
/// is handled recursively. Sets without edges get distinct vectors directly.
pub fn decide_ternary_embeddable(f: &Hypergraph) -> Result<Option<EmbeddingWitness>> {
    let k = f.uniformity();
    if !(3..=36).contains(&k) {
        return Err(Error::Uniformity { k, min: 3 });
    }
    let n = f.vertex_count();
    if n > PARTITION_VERTEX_LIMIT {
        return Err(Error::SizeLimit {
            what: "pattern vertex count",
            size: n as u128,
            limit: PARTITION_VERTEX_LIMIT as u128,
        });
    }
    let edges: Vec<Vec<Vertex>> = f.edges().map(<[Vertex]>::to_vec).collect();
    let edge_masks = edges.iter().map(|e| e.iter().fold(0u64, |m, &v| m | 1 << v)).collect();
    let mut search = PartitionSearch {
        k,
        edge_masks,
        edges,
        memo: HashMap::new(),
    };
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let Some(coords) = search.solve(all) else {
        return Ok(None);
    };
    let length = coords.values().map(Vec::len).max().unwrap_or(0);
    debug_assert!(length <= n.max(1));
    let map = (0..n)
        .map(|v| KaryVector {
            k,
            coords: coords[&v].clone(),
        })
        .collect();
    let w = EmbeddingWitness { k, length, map };
    debug_assert!(verify_embedding(f, &w));
    Ok(Some(w))
}

/// Frequent hypergraphs are exactly those embeddable in some `T_ℓ^(k)`.
pub fn is_frequent(f: &Hypergraph) -> Result<bool> {
    Ok(decide_ternary_embeddable(f)?.is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colour::decide_condition_b;
    use crate::hypergraph::enumerate_hypergraphs;
    use crate::hypergraph::fixtures::*;
    use crate::search::contains_copy;
    use proptest::prelude::*;

    fn v(digits: &str) -> KaryVector {
        KaryVector::parse(3, digits).unwrap()
    }

    #[test]
    fn edge_rule_examples() {
        assert!(kary_edge(3, &[v("00"), v("11"), v("22")]).unwrap());
        assert!(kary_edge(3, &[v("00"), v("01"), v("02")]).unwrap());
        assert!(!kary_edge(3, &[v("00"), v("10"), v("11")]).unwrap());
        assert_eq!(kary_edge(3, &[v("00"), v("1"), v("22")]), Err(Error::UnequalLengths));
        assert!(matches!(kary_edge(3, &[v("00"), v("00"), v("22")]), Err(Error::DuplicateVector(_))));
    }

    #[test]
    fn index_encoding_round_trip() {
        let x = KaryVector::from_index(3, 3, 14);
        assert_eq!(x.to_string(), "112");
        assert_eq!(x.to_index(), 14);
        assert!(KaryVector::parse(3, "13").is_err());
    }

    #[test]
    fn small_ternary_hypergraphs() {
        let t1 = build_ternary(3, 1).unwrap();
        assert_eq!((t1.vertex_count(), t1.edge_count()), (3, 1));
        let t2 = build_ternary(3, 2).unwrap();
        assert_eq!((t2.vertex_count(), t2.edge_count()), (9, 30));
        let t3 = build_ternary(3, 3).unwrap();
        assert_eq!((t3.vertex_count(), t3.edge_count()), (27, 819));
        assert_eq!(build_ternary(3, 0).unwrap().edge_count(), 0);
        assert!(matches!(build_ternary(3, 6), Err(Error::SizeLimit { .. })));
    }

    #[test]
    fn built_edges_match_the_rule() {
        for (k, n) in [(3, 2), (3, 3), (4, 2)] {
            let t = build_ternary(k, n).unwrap();
            let size = t.vertex_count();
            let mut count = 0;
            for e in crate::combinatorics::combinations(size, k) {
                let vs: Vec<_> = e.iter().map(|&i| KaryVector::from_index(k, n, i)).collect();
                let rule = kary_edge(k, &vs).unwrap();
                assert_eq!(rule, t.contains_edge(&e), "{e:?}");
                count += rule as usize;
            }
            assert_eq!(BigUint::from(count), kary_edge_count(k, n));
        }
    }

    #[test]
    fn edge_count_formula() {
        assert_eq!(kary_edge_count(3, 2), BigUint::from(30u32));
        assert_eq!(kary_edge_count(3, 3), BigUint::from(819u32));
        assert_eq!(kary_edge_count(5, 0), BigUint::from(0u32));
        for k in 3..7usize {
            let mut e = BigUint::from(0u32);
            for n in 1..8usize {
                e = e * k + BigUint::from(k).pow((k * (n - 1)) as u32);
                assert_eq!(kary_edge_count(k, n), e);
            }
        }
    }

    #[test]
    fn first_coordinate_blocks_are_copies() {
        for n in 1..=3 {
            let t = build_ternary(3, n).unwrap();
            let smaller = build_ternary(3, n - 1).unwrap();
            let block = 3usize.pow(n as u32 - 1);
            for c in 0..3 {
                let part: Vec<usize> = (c * block..(c + 1) * block).collect();
                assert_eq!(t.induced(&part).unwrap(), smaller);
            }
        }
    }

    #[test]
    fn embedding_examples() {
        let w = decide_ternary_embeddable(&single_edge()).unwrap().unwrap();
        assert!(verify_embedding(&single_edge(), &w));
        assert_eq!(w.length, 1);
        assert!(decide_ternary_embeddable(&Hypergraph::empty(3, 7).unwrap()).unwrap().is_some());
        assert_eq!(decide_ternary_embeddable(&k4()).unwrap(), None);
        assert_eq!(decide_ternary_embeddable(&c5_minus()).unwrap(), None);
        let path = Hypergraph::new(3, 4, [[0, 1, 2], [1, 2, 3]]).unwrap();
        let w = decide_ternary_embeddable(&path).unwrap().unwrap();
        assert!(verify_embedding(&path, &w));
        assert!(w.length <= 4);
        assert!(is_frequent(&single_edge()).unwrap());
        assert!(!is_frequent(&k4()).unwrap());
    }

    #[test]
    fn verify_rejects_bad_maps() {
        let good = EmbeddingWitness {
            k: 3,
            length: 1,
            map: vec![v("0"), v("1"), v("2")],
        };
        assert!(verify_embedding(&single_edge(), &good));
        let repeated = EmbeddingWitness {
            map: vec![v("0"), v("1"), v("1")],
            ..good.clone()
        };
        assert!(!verify_embedding(&single_edge(), &repeated));
        let short = EmbeddingWitness {
            length: 2,
            ..good.clone()
        };
        assert!(!verify_embedding(&single_edge(), &short));
    }

    #[test]
    fn witness_json_round_trip() {
        let path = Hypergraph::new(3, 4, [[0, 1, 2], [1, 2, 3]]).unwrap();
        let w = decide_ternary_embeddable(&path).unwrap().unwrap();
        let json = w.to_json();
        assert_eq!(json["length"], w.length);
        assert_eq!(EmbeddingWitness::from_json(&json, 3).unwrap(), w);
    }

    #[test]
    fn agrees_with_direct_search_on_four_vertices() {
        let t4 = build_ternary(3, 4).unwrap();
        for f in enumerate_hypergraphs(3, 4).unwrap() {
            let direct = contains_copy(&f, &t4).unwrap().is_some();
            assert_eq!(is_frequent(&f).unwrap(), direct, "{f:?}");
        }
    }

    #[test]
    fn witness_lands_in_built_hypergraph() {
        let path = Hypergraph::new(3, 5, [[0, 1, 2], [1, 2, 3], [2, 3, 4]]).unwrap();
        let w = decide_ternary_embeddable(&path).unwrap().unwrap();
        let host = build_ternary(3, w.length).unwrap();
        let images = w.indices();
        for e in path.edges() {
            let mut img: Vec<usize> = e.iter().map(|&x| images[x]).collect();
            img.sort_unstable();
            assert!(host.contains_edge(&img));
        }
    }

    #[test]
    fn frequent_implies_condition_b_on_five_vertices() {
        for f in enumerate_hypergraphs(3, 5).unwrap() {
            if is_frequent(&f).unwrap() {
                assert!(decide_condition_b(&f).unwrap().is_some(), "{f:?}");
            }
        }
    }

    #[test]
    fn four_uniform_embedding() {
        let f = Hypergraph::new(4, 5, [[0, 1, 2, 3], [0, 1, 2, 4]]).unwrap();
        let w = decide_ternary_embeddable(&f).unwrap().unwrap();
        assert!(verify_embedding(&f, &w));
        assert!(contains_copy(&f, &build_ternary(4, w.length).unwrap()).unwrap().is_some());
    }

    fn arb_vectors() -> impl Strategy<Value = Vec<KaryVector>> {
        proptest::collection::btree_set(proptest::collection::vec(0u8..3, 3), 3)
            .prop_map(|set| set.into_iter().map(|c| KaryVector::new(3, c).unwrap()).collect())
    }

    proptest! {
        #[test]
        fn edge_rule_ignores_argument_order(vs in arb_vectors()) {
            let base = kary_edge(3, &vs).unwrap();
            for perm in [[1, 0, 2], [2, 1, 0], [1, 2, 0]] {
                let permuted: Vec<_> = perm.iter().map(|&i| vs[i].clone()).collect();
                prop_assert_eq!(kary_edge(3, &permuted).unwrap(), base);
            }
        }
    }
}
