//! Backtracking searches for edge-preserving maps between hypergraphs.
//!
//! Pattern vertices are placed in descending-degree order (ties by index) and
//! host vertices are tried in ascending order. An edge is checked as soon as
//! its last vertex has been placed.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, Vertex};

/// A total map from pattern vertices to host vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexMap {
    pub images: Vec<Vertex>,
    pub injective: bool,
}

impl VertexMap {
    pub fn new(images: Vec<Vertex>) -> Self {
        let mut sorted = images.clone();
        sorted.sort_unstable();
        let injective = sorted.windows(2).all(|w| w[0] != w[1]);
        VertexMap { images, injective }
    }

    /// Re-checks the map from scratch: every pattern edge must land on a host edge,
    /// and the injectivity flag must be truthful.
    pub fn verify(&self, pattern: &Hypergraph, host: &Hypergraph) -> bool {
        if self.images.len() != pattern.vertex_count()
            || self.images.iter().any(|&v| v >= host.vertex_count())
        {
            return false;
        }
        if self.injective {
            let mut seen = vec![false; host.vertex_count()];
            for &v in &self.images {
                if std::mem::replace(&mut seen[v], true) {
                    return false;
                }
            }
        }
        pattern.edges().all(|e| {
            let mut img: Vec<Vertex> = e.iter().map(|&v| self.images[v]).collect();
            img.sort_unstable();
            host.contains_edge(&img)
        })
    }
}

/// Pattern vertices sorted by descending degree, ties by index.
pub fn search_order(pattern: &Hypergraph) -> Vec<Vertex> {
    let deg = pattern.degrees();
    let mut order: Vec<Vertex> = (0..pattern.vertex_count()).collect();
    order.sort_by(|&a, &b| deg[b].cmp(&deg[a]).then(a.cmp(&b)));
    order
}

/// Precomputed placement plan: for each position, the edges (as lists of
/// positions) whose last vertex sits at that position.
struct Plan {
    order: Vec<Vertex>,
    closing: Vec<Vec<Vec<usize>>>,
    min_degree: Vec<usize>,
}

impl Plan {
    fn new(pattern: &Hypergraph) -> Self {
        let order = search_order(pattern);
        let mut position = vec![0; order.len()];
        for (i, &v) in order.iter().enumerate() {
            position[v] = i;
        }
        let mut closing = vec![Vec::new(); order.len()];
        for e in pattern.edges() {
            let pos: Vec<usize> = e.iter().map(|&v| position[v]).collect();
            let last = *pos.iter().max().expect("edges are non-empty");
            closing[last].push(pos);
        }
        let deg = pattern.degrees();
        let min_degree = order.iter().map(|&v| deg[v]).collect();
        Plan {
            order,
            closing,
            min_degree,
        }
    }

    /// Checks the edges closed at `pos` under the partial assignment.
    fn closes_ok(&self, pos: usize, assigned: &[Vertex], host: &Hypergraph, buf: &mut Vec<Vertex>) -> bool {
        self.closing[pos].iter().all(|edge| {
            buf.clear();
            buf.extend(edge.iter().map(|&p| assigned[p]));
            buf.sort_unstable();
            buf.windows(2).all(|w| w[0] != w[1]) && host.contains_edge(buf)
        })
    }
}

fn check_uniformity(pattern: &Hypergraph, host: &Hypergraph) -> Result<()> {
    if pattern.uniformity() != host.uniformity() {
        return Err(Error::UniformityMismatch {
            pattern: pattern.uniformity(),
            host: host.uniformity(),
        });
    }
    Ok(())
}

/// Finds an injective edge-preserving map from `pattern` into `host`, if any.
///
/// The search is complete; the returned witness is the first one met in the
/// deterministic search order.
pub fn contains_copy(pattern: &Hypergraph, host: &Hypergraph) -> Result<Option<VertexMap>> {
    check_uniformity(pattern, host)?;
    let f = pattern.vertex_count();
    if f > host.vertex_count() {
        return Ok(None);
    }
    let plan = Plan::new(pattern);
    let host_deg = host.degrees();
    let mut assigned = vec![0; f];
    let mut used = vec![false; host.vertex_count()];
    let mut buf = Vec::with_capacity(pattern.uniformity());

    fn rec(
        pos: usize,
        plan: &Plan,
        host: &Hypergraph,
        host_deg: &[usize],
        assigned: &mut [Vertex],
        used: &mut [bool],
        buf: &mut Vec<Vertex>,
    ) -> bool {
        if pos == assigned.len() {
            return true;
        }
        for x in 0..host.vertex_count() {
            if used[x] || host_deg[x] < plan.min_degree[pos] {
                continue;
            }
            assigned[pos] = x;
            if !plan.closes_ok(pos, assigned, host, buf) {
                continue;
            }
            used[x] = true;
            if rec(pos + 1, plan, host, host_deg, assigned, used, buf) {
                return true;
            }
            used[x] = false;
        }
        false
    }

    if !rec(0, &plan, host, &host_deg, &mut assigned, &mut used, &mut buf) {
        return Ok(None);
    }
    let mut images = vec![0; f];
    for (pos, &v) in plan.order.iter().enumerate() {
        images[v] = assigned[pos];
    }
    Ok(Some(VertexMap::new(images)))
}

fn count_maps(pattern: &Hypergraph, host: &Hypergraph, injective: bool) -> Result<BigUint> {
    check_uniformity(pattern, host)?;
    let n = host.vertex_count();
    let plan = Plan::new(pattern);
    // Isolated pattern vertices sit at the end of the order and multiply the
    // count by the number of free host vertices.
    let constrained = plan.min_degree.iter().take_while(|&&d| d > 0).count();
    let f = pattern.vertex_count();
    if injective && f > n {
        return Ok(BigUint::from(0u32));
    }

    let count_from = |first: Vertex| -> u64 {
        let mut assigned = vec![0; constrained];
        let mut used = vec![false; n];
        let mut buf = Vec::with_capacity(pattern.uniformity());
        assigned[0] = first;
        if !plan.closes_ok(0, &assigned, host, &mut buf) {
            return 0;
        }
        used[first] = true;
        let mut total = 0u64;
        walk(1, &plan, host, injective, &mut assigned, &mut used, &mut buf, &mut total);
        total
    };

    let core = if constrained == 0 {
        BigUint::from(1u32)
    } else {
        let firsts: Vec<Vertex> = (0..n).collect();
        sum_counts(&firsts, count_from)
    };

    let free = if injective {
        (0..f - constrained).fold(BigUint::from(1u32), |acc, i| acc * BigUint::from(n - constrained - i))
    } else {
        BigUint::from(n).pow((f - constrained) as u32)
    };
    Ok(core * free)
}

#[allow(clippy::too_many_arguments)]
fn walk(
    pos: usize,
    plan: &Plan,
    host: &Hypergraph,
    injective: bool,
    assigned: &mut [Vertex],
    used: &mut [bool],
    buf: &mut Vec<Vertex>,
    total: &mut u64,
) {
    if pos == assigned.len() {
        *total += 1;
        return;
    }
    for x in 0..host.vertex_count() {
        if injective && used[x] {
            continue;
        }
        assigned[pos] = x;
        if !plan.closes_ok(pos, assigned, host, buf) {
            continue;
        }
        if injective {
            used[x] = true;
        }
        walk(pos + 1, plan, host, injective, assigned, used, buf, total);
        if injective {
            used[x] = false;
        }
    }
}

#[cfg(feature = "parallel")]
fn sum_counts(firsts: &[Vertex], f: impl Fn(Vertex) -> u64 + Sync) -> BigUint {
    use rayon::prelude::*;
    firsts
        .par_iter()
        .map(|&x| BigUint::from(f(x)))
        .reduce(|| BigUint::from(0u32), |a, b| a + b)
}

#[cfg(not(feature = "parallel"))]
fn sum_counts(firsts: &[Vertex], f: impl Fn(Vertex) -> u64) -> BigUint {
    firsts.iter().map(|&x| BigUint::from(f(x))).sum()
}

/// `hom(F, H)`: the number of (not necessarily injective) maps sending every
/// edge of `pattern` to an edge of `host`.
pub fn count_homomorphisms(pattern: &Hypergraph, host: &Hypergraph) -> Result<BigUint> {
    count_maps(pattern, host, false)
}

/// Number of injective edge-preserving maps (labelled copies times automorphisms).
pub fn count_injective_homomorphisms(pattern: &Hypergraph, host: &Hypergraph) -> Result<BigUint> {
    count_maps(pattern, host, true)
}
