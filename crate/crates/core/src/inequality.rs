//! Numerical checks of the exponent `ρ = 2/(log₂3 − 1)`, the three-variable
//! inequality behind the density of `T_ℓ`, the density bound itself, the
//! family of subsets showing the exponent is optimal, and homomorphism
//! counts into `T_n`.

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use crate::density::size_minima_unchecked;
use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, Vertex};
use crate::search::count_homomorphisms;
use crate::ternary::{build_ternary, is_frequent, kary_edge_count};

/// `ρ` and `τ = ρ + 3`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ExponentConstants {
    pub rho: f64,
    pub tau: f64,
}

impl ExponentConstants {
    pub fn new() -> Self {
        let rho = 2.0 / (3f64.log2() - 1.0);
        ExponentConstants { rho, tau: rho + 3.0 }
    }

    /// Relative error of `2^{τ−1} = 3^{τ−3}`.
    pub fn identity_error(&self) -> f64 {
        let lhs = 2f64.powf(self.tau - 1.0);
        let rhs = 3f64.powf(self.tau - 3.0);
        ((lhs - rhs) / rhs).abs()
    }
}

impl Default for ExponentConstants {
    fn default() -> Self {
        Self::new()
    }
}

/// `x^τ + y^τ + z^τ + 24xyz − 3^{3−τ}(x+y+z)^τ`.
pub fn tau_inequality(x: f64, y: f64, z: f64) -> f64 {
    let tau = ExponentConstants::new().tau;
    x.powf(tau) + y.powf(tau) + z.powf(tau) + 24.0 * x * y * z - 3f64.powf(3.0 - tau) * (x + y + z).powf(tau)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanReport {
    pub op: &'static str,
    pub resolution: usize,
    pub points: u64,
    pub min: f64,
    pub argmin: [f64; 3],
    pub tolerance: f64,
}

/// Grid tolerance for the scan minimum.
pub const SCAN_TOLERANCE: f64 = 1e-9;

/// Minimum of [`tau_inequality`] over the uniform grid with `resolution` points per
/// axis, endpoints included; ties keep the first grid point in index order.
pub fn tau_inequality_scan(resolution: usize) -> Result<ScanReport> {
    if resolution < 2 {
        return Err(Error::InvalidArgument(format!("resolution {resolution} is below 2")));
    }
    let tau = ExponentConstants::new().tau;
    let c = 3f64.powf(3.0 - tau);
    let grid: Vec<f64> = (0..resolution).map(|i| i as f64 / (resolution - 1) as f64).collect();
    let powers: Vec<f64> = grid.iter().map(|g| g.powf(tau)).collect();
    let plane = |i: usize| -> (f64, [usize; 3]) {
        let mut best = (f64::INFINITY, [0; 3]);
        for j in 0..resolution {
            for k in 0..resolution {
                let (x, y, z) = (grid[i], grid[j], grid[k]);
                let v = powers[i] + powers[j] + powers[k] + 24.0 * x * y * z - c * (x + y + z).powf(tau);
                if v < best.0 {
                    best = (v, [i, j, k]);
                }
            }
        }
        best
    };
    #[cfg(feature = "parallel")]
    let planes: Vec<(f64, [usize; 3])> = {
        use rayon::prelude::*;
        (0..resolution).into_par_iter().map(plane).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let planes: Vec<(f64, [usize; 3])> = (0..resolution).map(plane).collect();
    let (min, idx) = planes
        .into_iter()
        .fold((f64::INFINITY, [0; 3]), |acc, p| if p.0 < acc.0 { p } else { acc });
    Ok(ScanReport {
        op: "verify-fact7",
        resolution,
        points: (resolution as u64).pow(3),
        min,
        argmin: idx.map(|i| grid[i]),
        tolerance: SCAN_TOLERANCE,
    })
}

/// `¼ η^ρ |X|³/6 − (3/8)·3^ℓ` with `η = |X|/3^ℓ`.
pub fn tn_bound(level: usize, size: usize) -> f64 {
    let rho = ExponentConstants::new().rho;
    let total = 3f64.powi(level as i32);
    let eta = size as f64 / total;
    0.25 * eta.powf(rho) * (size as f64).powi(3) / 6.0 - 0.375 * total
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AuditMode {
    Exact,
    Sampled,
}

/// Largest level audited exhaustively without the long-run flag.
pub const EXACT_LEVEL_LIMIT: usize = 2;
/// Largest level audited exhaustively at all (`2^27` subsets).
pub const LONG_EXACT_LEVEL_LIMIT: usize = 3;
/// Largest level for sampled audits (`T_5` has 243 vertices).
pub const SAMPLED_LEVEL_LIMIT: usize = 5;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TnViolation {
    pub set: Vec<Vertex>,
    pub size: usize,
    pub eta: f64,
    pub edges: usize,
    pub bound: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TnAuditReport {
    pub op: &'static str,
    pub level: usize,
    pub mode: AuditMode,
    pub seed: u64,
    pub examined: u64,
    /// Least `e(X) − bound` over the subsets examined.
    pub min_margin: f64,
    pub violations: Vec<TnViolation>,
    pub tolerance: f64,
}

/// Checks `e(X) ≥ ¼ η^ρ |X|³/6 − (3/8)·3^ℓ` on subsets `X` of `T_ℓ`.
///
/// Exact mode walks all `2^{3^ℓ}` subsets and compares the fewest edges per
/// size with the bound for that size; it needs `allow_long` at `ℓ = 3`.
/// Sampled mode draws `samples` subsets: a size uniform in `0..=3^ℓ`, then a
/// uniform subset of that size.
pub fn tn_density_audit(level: usize, mode: AuditMode, samples: u64, seed: u64, allow_long: bool) -> Result<TnAuditReport> {
    let limit = match mode {
        AuditMode::Exact if allow_long => LONG_EXACT_LEVEL_LIMIT,
        AuditMode::Exact => EXACT_LEVEL_LIMIT,
        AuditMode::Sampled => SAMPLED_LEVEL_LIMIT,
    };
    if level > limit {
        return Err(Error::SizeLimit {
            what: "level for this audit mode",
            size: level as u128,
            limit: limit as u128,
        });
    }
    let t = build_ternary(3, level)?;
    let n = t.vertex_count();
    let mut report = TnAuditReport {
        op: "audit-tn",
        level,
        mode,
        seed,
        examined: 0,
        min_margin: f64::INFINITY,
        violations: Vec::new(),
        tolerance: SCAN_TOLERANCE,
    };
    let record = |report: &mut TnAuditReport, set: Vec<Vertex>, edges: usize| {
        let size = set.len();
        let bound = tn_bound(level, size);
        let margin = edges as f64 - bound;
        report.min_margin = report.min_margin.min(margin);
        if margin < -SCAN_TOLERANCE {
            report.violations.push(TnViolation {
                set,
                size,
                eta: size as f64 / n as f64,
                edges,
                bound,
            });
        }
    };
    match mode {
        AuditMode::Exact => {
            let minima = size_minima_unchecked(&t);
            report.examined = minima.sets_examined;
            for size in 0..=n {
                let set: Vec<Vertex> = (0..n).filter(|&v| minima.argmin[size] >> v & 1 == 1).collect();
                record(&mut report, set, minima.min_edges[size] as usize);
            }
        }
        AuditMode::Sampled => {
            if samples == 0 {
                return Err(Error::InvalidArgument("sampled audit needs at least one sample".into()));
            }
            let edge_masks: Vec<u128> = t.edges().map(|e| e.iter().fold(0u128, |m, &v| m | 1 << v)).collect();
            let big_masks: Vec<Vec<Vertex>> = if n > 128 { t.edges().map(<[Vertex]>::to_vec).collect() } else { Vec::new() };
            const CHUNK: u64 = 1 << 14;
            let chunks = samples.div_ceil(CHUNK);
            // each chunk returns its violations followed by its tightest sample
            let run = |c: u64| -> Vec<(Vec<Vertex>, usize)> {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(c);
                let count = CHUNK.min(samples - c * CHUNK);
                let mut found: Vec<(Vec<Vertex>, usize)> = Vec::new();
                let mut tightest: Option<(f64, Vec<Vertex>, usize)> = None;
                for _ in 0..count {
                    let size = rng.random_range(0..=n);
                    let mut set = rand::seq::index::sample(&mut rng, n, size).into_vec();
                    set.sort_unstable();
                    let edges = if n <= 128 {
                        let mask = set.iter().fold(0u128, |m, &v| m | 1 << v);
                        edge_masks.iter().filter(|&&e| e & !mask == 0).count()
                    } else {
                        let mut member = vec![false; n];
                        set.iter().for_each(|&v| member[v] = true);
                        big_masks.iter().filter(|e| e.iter().all(|&v| member[v])).count()
                    };
                    let margin = edges as f64 - tn_bound(level, size);
                    if margin < -SCAN_TOLERANCE {
                        found.push((set, edges));
                    } else if tightest.as_ref().is_none_or(|t| margin < t.0) {
                        tightest = Some((margin, set, edges));
                    }
                }
                found.extend(tightest.map(|(_, s, e)| (s, e)));
                found
            };
            #[cfg(feature = "parallel")]
            let found: Vec<Vec<(Vec<Vertex>, usize)>> = {
                use rayon::prelude::*;
                (0..chunks).into_par_iter().map(run).collect()
            };
            #[cfg(not(feature = "parallel"))]
            let found: Vec<Vec<(Vec<Vertex>, usize)>> = (0..chunks).map(run).collect();
            report.examined = samples;
            for (set, edges) in found.into_iter().flatten() {
                record(&mut report, set, edges);
            }
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OptimalityPoint {
    pub op: &'static str,
    pub r: usize,
    pub n: usize,
    /// `|U| / 3^n = (2/3)^r`.
    pub eta: f64,
    #[serde(serialize_with = "decimal")]
    pub size: BigUint,
    #[serde(serialize_with = "decimal")]
    pub edges: BigUint,
    /// Right-hand side of the density bound at this `|U|`.
    pub bound: f64,
    /// `e(U) / (η^ρ |U|³ / 24)`, equal to `1 − 9^{−(n−r)}`.
    pub leading_ratio: f64,
}

/// The subset `U = {0,1}^r × {0,1,2}^{n−r}` of `T_n`, which has
/// `e(U) = 2^r (27^{n−r} − 3^{n−r}) / 24`.
pub fn optimality_family(r: usize, n: usize) -> Result<OptimalityPoint> {
    if r > n {
        return Err(Error::InvalidArgument(format!("r = {r} exceeds n = {n}")));
    }
    let two_r = BigUint::from(2u32).pow(r as u32);
    let size = &two_r * BigUint::from(3u32).pow((n - r) as u32);
    let edges = &two_r * kary_edge_count(3, n - r);
    let rho = ExponentConstants::new().rho;
    let eta = (2.0f64 / 3.0).powi(r as i32);
    let size_f = size.to_f64().expect("finite");
    let bound = 0.25 * eta.powf(rho) * size_f.powi(3) / 6.0 - 0.375 * 3f64.powi(n as i32);
    let leading = eta.powf(rho) * size_f.powi(3) / 24.0;
    let leading_ratio = if leading > 0.0 {
        edges.to_f64().expect("finite") / leading
    } else {
        0.0
    };
    Ok(OptimalityPoint {
        op: "optimality",
        r,
        n,
        eta,
        size,
        edges,
        bound,
        leading_ratio,
    })
}

/// Vertices of `T_n` whose first `r` coordinates avoid 2.
pub fn optimality_subset(r: usize, n: usize) -> Vec<Vertex> {
    let total = 3usize.pow(n as u32);
    (0..total)
        .filter(|&v| {
            let digits = crate::ternary::KaryVector::from_index(3, n, v);
            digits.coords()[..r].iter().all(|&c| c < 2)
        })
        .collect()
}

/// `e(U)` for the optimality subset, counted inside an explicit `T_n`.
pub fn optimality_family_brute(r: usize, n: usize) -> Result<usize> {
    if r > n {
        return Err(Error::InvalidArgument(format!("r = {r} exceeds n = {n}")));
    }
    Ok(build_ternary(3, n)?.induced_edge_count(&optimality_subset(r, n)))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SupersaturationRow {
    pub n: usize,
    #[serde(serialize_with = "decimal")]
    pub hom: BigUint,
    /// `hom(F, T_n) / (k^n)^{v(F)}`.
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SupersaturationReport {
    pub op: &'static str,
    pub pattern: String,
    pub rows: Vec<SupersaturationRow>,
}

/// Exact `hom(F, T_n)` for `n = 1..=n_max`, normalised by `v(T_n)^{v(F)}`.
pub fn supersaturation_experiment(f: &Hypergraph, n_max: usize) -> Result<SupersaturationReport> {
    if !is_frequent(f)? {
        return Err(Error::NotEmbeddable);
    }
    let k = f.uniformity();
    let rows = (1..=n_max)
        .map(|n| {
            let host = build_ternary(k, n)?;
            let hom = count_homomorphisms(f, &host)?;
            let denom = BigUint::from(host.vertex_count()).pow(f.vertex_count() as u32);
            Ok(SupersaturationRow {
                n,
                ratio: big_ratio(&hom, &denom),
                hom,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SupersaturationReport {
        op: "supersat",
        pattern: f.to_hyg(),
        rows,
    })
}

/// Big integers appear in reports as decimal strings.
pub fn decimal<S: Serializer>(value: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(value)
}

/// `a / b` in floating point, robust to operands beyond `f64` range.
fn big_ratio(a: &BigUint, b: &BigUint) -> f64 {
    match (a.to_f64(), b.to_f64()) {
        (Some(x), Some(y)) if x.is_finite() && y.is_finite() => x / y,
        _ => {
            let shift = b.bits().saturating_sub(60);
            let (x, y) = (a >> shift, b >> shift);
            x.to_f64().unwrap_or(f64::INFINITY) / y.to_f64().unwrap_or(f64::INFINITY)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::fixtures::*;

    #[test]
    fn constants() {
        let c = ExponentConstants::new();
        assert!(c.rho > 3.41 && c.rho < 3.43);
        assert!(c.identity_error() < 1e-12);
        assert!(((2.0f64 / 3.0).powf(c.rho) - 0.25).abs() < 1e-12);
    }

    #[test]
    fn equality_cases() {
        assert!(tau_inequality(1.0, 1.0, 0.0).abs() < 1e-12);
        assert!(tau_inequality(1.0, 1.0, 1.0).abs() < 1e-12);
        assert!(tau_inequality(0.0, 0.0, 0.0).abs() < 1e-12);
        assert!(tau_inequality(1.0, 0.5, 0.5) > 0.0);
    }

    #[test]
    fn coarse_scans_are_non_negative() {
        let mut last = f64::INFINITY;
        for res in [11, 21, 51] {
            let s = tau_inequality_scan(res).unwrap();
            assert!(s.min >= -SCAN_TOLERANCE);
            assert!(s.min <= last + 1e-6);
            last = s.min;
        }
        assert!(tau_inequality_scan(1).is_err());
    }

    #[test]
    fn low_levels_have_no_violations() {
        let r1 = tn_density_audit(1, AuditMode::Exact, 0, 0, false).unwrap();
        assert!(r1.violations.is_empty());
        assert_eq!(r1.examined, 8);
        for size in 0..=3 {
            assert!(tn_bound(1, size) <= 0.0);
        }
        let r2 = tn_density_audit(2, AuditMode::Exact, 0, 0, false).unwrap();
        assert!(r2.violations.is_empty());
        assert_eq!(r2.examined, 512);
        assert!(matches!(
            tn_density_audit(3, AuditMode::Exact, 0, 0, false),
            Err(Error::SizeLimit { .. })
        ));
    }

    #[test]
    fn sampled_audit_is_deterministic() {
        let a = tn_density_audit(3, AuditMode::Sampled, 20_000, 5, false).unwrap();
        assert!(a.violations.is_empty());
        assert_eq!(a, tn_density_audit(3, AuditMode::Sampled, 20_000, 5, false).unwrap());
    }

    #[test]
    fn optimality_family_matches_brute_force() {
        for n in 0..=3 {
            for r in 0..=n {
                let p = optimality_family(r, n).unwrap();
                assert_eq!(p.edges, BigUint::from(optimality_family_brute(r, n).unwrap()));
                if r < n {
                    let expected = 1.0 - 9f64.powi(-((n - r) as i32));
                    assert!((p.leading_ratio - expected).abs() < 1e-12);
                }
            }
        }
        let p = optimality_family(1, 3).unwrap();
        assert_eq!(p.size, BigUint::from(18u32));
        assert_eq!(p.edges, BigUint::from(60u32));
        assert!((p.eta - 2.0 / 3.0).abs() < 1e-15);
        let top = optimality_family(3, 3).unwrap();
        assert_eq!(top.edges, BigUint::from(0u32));
        assert!(top.bound <= 0.0);
        assert!(optimality_family(4, 3).is_err());
    }

    #[test]
    fn supersaturation_values() {
        let edge = supersaturation_experiment(&single_edge(), 3).unwrap();
        let homs: Vec<BigUint> = edge.rows.iter().map(|r| r.hom.clone()).collect();
        assert_eq!(homs, [6u32, 180, 4914].map(BigUint::from));

        let path = Hypergraph::new(3, 4, [[0, 1, 2], [1, 2, 3]]).unwrap();
        let report = supersaturation_experiment(&path, 3).unwrap();
        let homs: Vec<BigUint> = report.rows.iter().map(|r| r.hom.clone()).collect();
        assert_eq!(homs, [6u32, 504, 40878].map(BigUint::from));
        assert!((report.rows[2].ratio - 40878.0 / 531441.0).abs() < 1e-15);

        let pair = Hypergraph::empty(3, 2).unwrap();
        assert!(supersaturation_experiment(&pair, 2).unwrap().rows.iter().all(|r| r.ratio == 1.0));
        assert_eq!(supersaturation_experiment(&k4(), 2), Err(Error::NotEmbeddable));
    }

    #[test]
    fn big_integers_serialise_as_decimal() {
        let p = serde_json::to_value(optimality_family(1, 3).unwrap()).unwrap();
        assert_eq!(p["size"], "18");
        assert_eq!(p["edges"], "60");
        let big = serde_json::to_value(optimality_family(0, 30).unwrap()).unwrap();
        assert_eq!(big["size"], BigUint::from(3u32).pow(30).to_string());
    }

    #[test]
    fn ratio_of_large_integers() {
        let a = BigUint::from(3u32).pow(2000);
        let b = BigUint::from(3u32).pow(2001);
        assert!((big_ratio(&a, &b) - 1.0 / 3.0).abs() < 1e-12);
    }
}
