//! Erdős–Rényi null model: graph generation, PS variance formulas and
//! Monte-Carlo sampling of PS and φ on fixed node sets.
//!
//! Every replication `r` draws from its own ChaCha8 stream
//! (`seed_from_u64(seed)`, stream `r`), so samples do not depend on how
//! replications are scheduled across threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::metrics::{community_f, phi, ps, ContingencyTable};
use crate::partition::Partition;

/// Name of the random generator, for output metadata.
pub const RNG_NAME: &str = "ChaCha8Rng";

pub const HISTOGRAM_BINS: usize = 61;

/// `G(n, p)` with an explicit seed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErParams {
    pub n: usize,
    pub p: f64,
    pub seed: u64,
}

impl ErParams {
    pub fn new(n: usize, p: f64, seed: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter(format!(
                "n = {n}; need at least 2 nodes"
            )));
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidParameter(format!("p = {p} is not in [0, 1]")));
        }
        Ok(ErParams { n, p, seed })
    }

    /// `p = λ / (n − 1)`.
    pub fn from_lambda(n: usize, lambda: f64, seed: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter(format!(
                "n = {n}; need at least 2 nodes"
            )));
        }
        Self::new(n, lambda / (n - 1) as f64, seed)
    }

    /// `p = 2m / (n(n − 1))`.
    pub fn from_edge_count(n: usize, m: usize, seed: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter(format!(
                "n = {n}; need at least 2 nodes"
            )));
        }
        Self::new(n, 2.0 * m as f64 / (n as f64 * (n - 1) as f64), seed)
    }

    /// Expected degree `(n − 1)p`.
    pub fn lambda(&self) -> f64 {
        (self.n - 1) as f64 * self.p
    }

    pub fn big_n(&self) -> usize {
        self.n - 1
    }

    fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng
    }
}

/// Draws one `G(n, p)` graph from stream 0 of the seed.
pub fn generate_er(params: &ErParams) -> Graph {
    generate_with(params, &mut params.rng(0))
}

/// Draws one `G(n, p)` graph from replication stream `replication`.
pub fn generate_er_replication(params: &ErParams, replication: u64) -> Graph {
    generate_with(params, &mut params.rng(replication))
}

/// Geometric skipping over the pairs `(v, w)`, `w < v`, in row order: each
/// pair is kept independently with probability `p` in `O(n + m)` time.
fn generate_with<R: Rng>(params: &ErParams, rng: &mut R) -> Graph {
    let n = params.n;
    let p = params.p;
    let mut edges: Vec<(NodeId, NodeId)> = Vec::new();
    if p >= 1.0 {
        for v in 1..n {
            for w in 0..v {
                edges.push((w, v));
            }
        }
    } else if p > 0.0 {
        let log_q = (1.0 - p).ln();
        let (mut v, mut w): (usize, i64) = (1, -1);
        while v < n {
            let r: f64 = rng.random();
            let skip = ((1.0 - r).ln() / log_q).floor();
            w += 1 + skip.min(i64::MAX as f64 / 2.0) as i64;
            while w >= v as i64 && v < n {
                w -= v as i64;
                v += 1;
            }
            if v < n {
                edges.push((w as usize, v));
            }
        }
    }
    Graph::from_edges(n, &edges).0
}

/// Variance of `PS(u, S)` under `G(n, p)` for `u ∈ S`, `ε = |S| − 1`, written
/// as the Chebyshev-bound expansion
/// `(p²ε² − p²ε + pε)/N² + λε²(λ − p + 1)/N⁴ − 2pε²(λ + 1)/N³`, `λ = Np`.
///
/// The cross term uses `E[dω] = pε(λ + 1)`; the exact moment is
/// `pε(λ + 1 − p)`, so this falls short of [`ps_variance_exact`] by
/// `2ε²p²/N³`.
pub fn ps_variance(big_n: usize, epsilon: usize, p: f64) -> f64 {
    let n = big_n as f64;
    let e = epsilon as f64;
    let lambda = n * p;
    (p * p * e * e - p * p * e + p * e) / (n * n) + lambda * e * e * (lambda - p + 1.0) / n.powi(4)
        - 2.0 * p * e * e * (lambda + 1.0) / n.powi(3)
}

/// Exact variance `p(1 − p)ε(N − ε)/N³` of `PS(u, S)` for `u ∈ S`.
pub fn ps_variance_exact(big_n: usize, epsilon: usize, p: f64) -> f64 {
    let n = big_n as f64;
    let e = epsilon as f64;
    p * (1.0 - p) * e * (n - e) / n.powi(3)
}

/// Chebyshev bound `ps_variance / κ` on `P[|PS(u, S)| ≥ √κ]`.
pub fn ps_variance_bound(kappa: f64, big_n: usize, epsilon: usize, p: f64) -> Result<f64> {
    if kappa.is_nan() || kappa <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "kappa = {kappa}; must be positive"
        )));
    }
    if epsilon == 0 || epsilon >= big_n {
        return Err(Error::InvalidParameter(format!(
            "epsilon = {epsilon} must lie strictly between 0 and N = {big_n}"
        )));
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "p = {p} must lie in (0, 1)"
        )));
    }
    Ok(ps_variance(big_n, epsilon, p) / kappa)
}

/// What one replication records.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleLevel {
    /// `PS(0, S)` for the member node 0.
    Node,
    /// `F(S)`.
    Community,
}

/// Equal-width histogram over `[min, max]` of a sample.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    /// `bins + 1` ascending edges.
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
}

impl Histogram {
    pub fn new(values: &[f64], bins: usize) -> Self {
        let bins = bins.max(1);
        if values.is_empty() {
            return Histogram {
                edges: vec![0.0; bins + 1],
                counts: vec![0; bins],
            };
        }
        let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let width = (hi - lo) / bins as f64;
        let edges: Vec<f64> = (0..=bins)
            .map(|i| if i == bins { hi } else { lo + width * i as f64 })
            .collect();
        let mut counts = vec![0u64; bins];
        for &x in values {
            let idx = if width > 0.0 {
                (((x - lo) / width) as usize).min(bins - 1)
            } else {
                0
            };
            counts[idx] += 1;
        }
        Histogram { edges, counts }
    }

    /// `(lo, hi, count)` per bin.
    pub fn bins(&self) -> impl Iterator<Item = (f64, f64, u64)> + '_ {
        self.counts
            .iter()
            .enumerate()
            .map(|(i, &c)| (self.edges[i], self.edges[i + 1], c))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PsSample {
    /// One value per replication, in replication order.
    pub values: Vec<f64>,
    pub histogram: Histogram,
}

/// φ values from non-degenerate draws.
#[derive(Debug, Clone, PartialEq)]
pub struct PhiSample {
    pub values: Vec<f64>,
    /// Draws with `d_u ∈ {0, N}`, where φ is undefined.
    pub discarded: usize,
}

impl PhiSample {
    pub fn discard_rate(&self) -> f64 {
        let total = self.values.len() + self.discarded;
        if total == 0 {
            0.0
        } else {
            self.discarded as f64 / total as f64
        }
    }
}

fn check_sampling(params: &ErParams, community_size: usize, replications: usize) -> Result<()> {
    if community_size == 0 || community_size >= params.n {
        return Err(Error::InvalidParameter(format!(
            "community size {community_size} must lie in [1, n) with n = {}",
            params.n
        )));
    }
    if replications == 0 {
        return Err(Error::InvalidParameter(
            "at least one replication is required".into(),
        ));
    }
    Ok(())
}

/// Links from node 0 into `{1, .., size − 1}`.
fn links_into_prefix(g: &Graph, size: usize) -> usize {
    g.neighbors(0).iter().filter(|&&v| v < size).count()
}

/// Generates `replications` graphs and records PS of `S = {0, .., size − 1}`
/// at the requested level.
pub fn sample_ps_distribution(
    params: &ErParams,
    community_size: usize,
    replications: usize,
    level: SampleLevel,
) -> Result<PsSample> {
    check_sampling(params, community_size, replications)?;
    let big_n = params.big_n();
    let group: Vec<NodeId> = (0..community_size).collect();
    let values: Vec<f64> = (0..replications as u64)
        .into_par_iter()
        .map(|r| {
            let g = generate_er_replication(params, r);
            match level {
                SampleLevel::Node => {
                    let ct = ContingencyTable::new(
                        links_into_prefix(&g, community_size),
                        community_size - 1,
                        g.degree(0),
                        big_n,
                    )
                    .expect("counts come from a simple graph");
                    ps(&ct).expect("N >= 1")
                }
                SampleLevel::Community => {
                    let p = Partition::from_groups(&g, std::slice::from_ref(&group))
                        .expect("prefix of node range");
                    community_f(&g, &p, 0).expect("N >= 1")
                }
            }
        })
        .collect();
    let histogram = Histogram::new(&values, HISTOGRAM_BINS);
    Ok(PsSample { values, histogram })
}

/// Node-level φ(0, S) over `replications` graphs, skipping draws with an
/// isolated or universal node 0.
pub fn sample_phi_distribution(
    params: &ErParams,
    community_size: usize,
    replications: usize,
) -> Result<PhiSample> {
    check_sampling(params, community_size, replications)?;
    if community_size < 2 {
        return Err(Error::InvalidParameter(
            "φ needs a community of at least two nodes".into(),
        ));
    }
    let big_n = params.big_n();
    let draws: Vec<Option<f64>> = (0..replications as u64)
        .into_par_iter()
        .map(|r| {
            let g = generate_er_replication(params, r);
            let ct = ContingencyTable::new(
                links_into_prefix(&g, community_size),
                community_size - 1,
                g.degree(0),
                big_n,
            )
            .expect("counts come from a simple graph");
            phi(&ct).ok()
        })
        .collect();
    let discarded = draws.iter().filter(|d| d.is_none()).count();
    Ok(PhiSample {
        values: draws.into_iter().flatten().collect(),
        discarded,
    })
}

/// Sample mean and unbiased variance.
pub fn mean_variance(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let ss: f64 = values.iter().map(|x| (x - mean) * (x - mean)).sum();
    (mean, ss / (n - 1.0))
}

/// Quantile with linear interpolation between order statistics.
pub fn quantile(values: &[f64], q: f64) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    quantile_sorted(&sorted, q)
}

fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    if sorted.is_empty() {
        return f64::NAN;
    }
    let pos = q.clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

pub fn interquartile_range(values: &[f64]) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    quantile_sorted(&sorted, 0.75) - quantile_sorted(&sorted, 0.25)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extreme_probabilities() {
        let g = generate_er(&ErParams::new(10, 0.0, 1).unwrap());
        assert_eq!(g.edge_count(), 0);
        let g = generate_er(&ErParams::new(10, 1.0, 1).unwrap());
        assert_eq!(g.edge_count(), 45);
    }

    #[test]
    fn edge_count_within_four_sigma() {
        let params = ErParams::new(1000, 0.01, 42).unwrap();
        let pairs = 1000.0 * 999.0 / 2.0;
        let sigma = (pairs * 0.01 * 0.99_f64).sqrt();
        for r in 0..5 {
            let m = generate_er_replication(&params, r).edge_count() as f64;
            assert!((m - pairs * 0.01).abs() < 4.0 * sigma, "m = {m}");
        }
    }

    #[test]
    fn every_pair_is_reachable() {
        // p = 0.5 on 6 nodes: over many draws each of the 15 pairs shows up
        let params = ErParams::new(6, 0.5, 3).unwrap();
        let mut seen = [[0usize; 6]; 6];
        for r in 0..400 {
            for (u, v) in generate_er_replication(&params, r).edges() {
                seen[u][v] += 1;
            }
        }
        for (u, row) in seen.iter().enumerate() {
            for (v, &hits) in row.iter().enumerate().skip(u + 1) {
                assert!((120..280).contains(&hits), "pair ({u},{v}): {hits}");
            }
        }
    }

    #[test]
    fn same_seed_same_graph() {
        let params = ErParams::from_lambda(200, 5.0, 9).unwrap();
        assert_eq!(generate_er(&params), generate_er(&params));
        let other = ErParams { seed: 10, ..params };
        assert_ne!(generate_er(&params), generate_er(&other));
    }

    #[test]
    fn parameterizations_agree() {
        let a = ErParams::from_lambda(101, 4.0, 0).unwrap();
        let b = ErParams::from_edge_count(101, 202, 0).unwrap();
        assert!((a.p - b.p).abs() < 1e-15);
        assert!((a.lambda() - 4.0).abs() < 1e-12);
        assert!(ErParams::new(1, 0.5, 0).is_err());
        assert!(ErParams::new(5, 1.5, 0).is_err());
    }

    #[test]
    fn closed_form_matches_symbolic_expansion() {
        // E[Y²] from the moments E[ω²], E[d²], E[dω] with the cross moment
        // pε(λ+1)
        for &(n, e, p) in &[
            (280usize, 20usize, 8.0 / 280.0),
            (50, 7, 0.3),
            (1000, 100, 0.001),
        ] {
            let (nf, ef) = (n as f64, e as f64);
            let lambda = nf * p;
            let e_w2 = ef * p * (1.0 - p) + ef * ef * p * p;
            let e_d2 = nf * p * (1.0 - p) + lambda * lambda;
            let e_dw = p * ef * (lambda + 1.0);
            let expected =
                e_w2 / (nf * nf) + ef * ef * e_d2 / nf.powi(4) - 2.0 * ef * e_dw / nf.powi(3);
            assert!((ps_variance(n, e, p) - expected).abs() < 1e-15);
            let gap = ps_variance_exact(n, e, p) - ps_variance(n, e, p);
            assert!((gap - 2.0 * ef * ef * p * p / nf.powi(3)).abs() < 1e-18);
            let bound = ps_variance_bound(1e-3, n, e, p).unwrap();
            assert!((bound - expected / 1e-3).abs() < 1e-12);
        }
    }

    #[test]
    fn bound_rejects_bad_kappa() {
        assert!(ps_variance_bound(0.0, 280, 20, 0.1).is_err());
        assert!(ps_variance_bound(-1.0, 280, 20, 0.1).is_err());
    }

    #[test]
    fn bound_vanishes_in_sparse_limit() {
        let mut last = f64::INFINITY;
        for n in [1_000usize, 10_000, 100_000, 1_000_000] {
            let b = ps_variance_bound(1e-4, n, 20, 8.0 / n as f64).unwrap();
            assert!(b < last);
            last = b;
        }
        assert!(last < 1e-4);
    }

    #[test]
    fn histogram_layout() {
        let values: Vec<f64> = (0..100).map(|i| i as f64).collect();
        let h = Histogram::new(&values, 61);
        assert_eq!(h.counts.len(), 61);
        assert_eq!(h.edges.len(), 62);
        assert_eq!(h.counts.iter().sum::<u64>(), 100);
        assert_eq!(h.edges[0], 0.0);
        assert_eq!(h.edges[61], 99.0);
        let flat = Histogram::new(&[2.0, 2.0], 5);
        assert_eq!(flat.counts[0], 2);
    }

    #[test]
    fn sample_is_reproducible_and_sized() {
        let params = ErParams::from_lambda(100, 6.0, 7).unwrap();
        let a = sample_ps_distribution(&params, 10, 50, SampleLevel::Node).unwrap();
        let b = sample_ps_distribution(&params, 10, 50, SampleLevel::Node).unwrap();
        assert_eq!(a.values.len(), 50);
        assert_eq!(a, b);
        assert!(sample_ps_distribution(&params, 100, 5, SampleLevel::Node).is_err());
        assert!(sample_ps_distribution(&params, 10, 0, SampleLevel::Node).is_err());
    }

    #[test]
    fn community_level_matches_direct_f() {
        let params = ErParams::from_lambda(60, 5.0, 11).unwrap();
        let s = sample_ps_distribution(&params, 15, 3, SampleLevel::Community).unwrap();
        for (r, &value) in s.values.iter().enumerate() {
            let g = generate_er_replication(&params, r as u64);
            let mut l = 0;
            let mut k = 0;
            for u in 0..15 {
                k += g.degree(u);
                l += g.neighbors(u).iter().filter(|&&v| v < 15 && v > u).count();
            }
            let n = 59.0;
            let f = 2.0 * l as f64 / n - 14.0 * k as f64 / (n * n);
            assert!((value - f).abs() < 1e-12);
        }
    }

    #[test]
    fn phi_discards_isolated_draws() {
        // λ tiny: node 0 is often isolated
        let params = ErParams::from_lambda(50, 0.5, 5).unwrap();
        let s = sample_phi_distribution(&params, 10, 400).unwrap();
        assert_eq!(s.values.len() + s.discarded, 400);
        assert!(s.discarded > 0);
        let rate = s.discard_rate();
        let expected = (1.0 - params.p).powi(49);
        assert!((rate - expected).abs() < 0.1, "{rate} vs {expected}");
    }

    #[test]
    fn quantiles() {
        let v = [4.0, 1.0, 3.0, 2.0, 5.0];
        assert_eq!(quantile(&v, 0.5), 3.0);
        assert_eq!(quantile(&v, 0.25), 2.0);
        assert_eq!(interquartile_range(&v), 2.0);
        let (m, var) = mean_variance(&v);
        assert_eq!(m, 3.0);
        assert_eq!(var, 2.5);
    }
}
