//! Node-community correlation measures and the community objectives built
//! from them.
//!
//! Every measure is a function of the 2×2 contingency table between the
//! neighbor vector of a node `u` and the membership vector of a community `S`,
//! both taken over the `N = n − 1` nodes other than `u`:
//!
//! * `ω`: neighbors of `u` inside `S`
//! * `ε`: members of `S` other than `u`
//! * `d`: degree of `u`
//!
//! PS is `ω/N − ε·d/N²`, φ is `(ωN − εd) / √(ε(N−ε)d(N−d))`, and the cosine
//! limit of φ for large `N` is `ω/√(εd)`.

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::partition::{CommunityId, Partition};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ContingencyTable {
    pub omega: usize,
    pub epsilon: usize,
    pub degree: usize,
    pub big_n: usize,
}

impl ContingencyTable {
    /// Validates `0 ≤ ω ≤ min(ε, d)`, `ε ≤ N`, `d ≤ N`.
    pub fn new(omega: usize, epsilon: usize, degree: usize, big_n: usize) -> Result<Self> {
        if omega > epsilon.min(degree) || epsilon > big_n || degree > big_n {
            return Err(Error::InvalidTable(format!(
                "omega={omega}, epsilon={epsilon}, d={degree}, N={big_n}"
            )));
        }
        Ok(ContingencyTable {
            omega,
            epsilon,
            degree,
            big_n,
        })
    }

    /// Community members `u` is not linked to.
    pub fn f10(&self) -> usize {
        self.epsilon - self.omega
    }

    /// Neighbors of `u` outside the community.
    pub fn f01(&self) -> usize {
        self.degree - self.omega
    }

    /// Nodes neither in the community nor adjacent to `u`.
    pub fn f00(&self) -> usize {
        self.big_n + self.omega - self.epsilon - self.degree
    }

    fn degenerate(&self) -> Error {
        Error::Degenerate {
            omega: self.omega,
            epsilon: self.epsilon,
            degree: self.degree,
            big_n: self.big_n,
        }
    }
}

/// Community quality used when deciding whether to merge two communities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MergeMetric {
    /// Exact φ sum.
    #[default]
    Phi,
    /// Large-graph cosine limit of the φ sum.
    Cosine,
}

/// Table for a member `u` of its own community (`ε = |S| − 1`).
pub fn contingency(g: &Graph, p: &Partition, u: NodeId) -> Result<ContingencyTable> {
    let c = p.community_of(u).ok_or(Error::Unassigned(u))?;
    Ok(ContingencyTable {
        omega: p.links_to(g, u, c),
        epsilon: p.size(c) - 1,
        degree: g.degree(u),
        big_n: g.node_count() - 1,
    })
}

/// Table for a node `u` evaluated against a community it does not belong to
/// (`ε = |S|`).
pub fn contingency_against(
    g: &Graph,
    p: &Partition,
    u: NodeId,
    c: CommunityId,
) -> Result<ContingencyTable> {
    if !p.contains_community(c) {
        return Err(Error::UnknownCommunity(c));
    }
    if p.community_of(u) == Some(c) {
        return Err(Error::AlreadyMember {
            node: u,
            community: c,
        });
    }
    Ok(ContingencyTable {
        omega: p.links_to(g, u, c),
        epsilon: p.size(c),
        degree: g.degree(u),
        big_n: g.node_count() - 1,
    })
}

/// Piatetsky-Shapiro rule interest `ω/N − εd/N²`.
pub fn ps(ct: &ContingencyTable) -> Result<f64> {
    if ct.big_n == 0 {
        return Err(Error::TooFewNodes);
    }
    let n = ct.big_n as f64;
    Ok(ct.omega as f64 / n - (ct.epsilon as f64 * ct.degree as f64) / (n * n))
}

/// φ-coefficient. Errors when `ε ∈ {0, N}` or `d ∈ {0, N}`.
pub fn phi(ct: &ContingencyTable) -> Result<f64> {
    if ct.epsilon == 0 || ct.epsilon >= ct.big_n || ct.degree == 0 || ct.degree >= ct.big_n {
        return Err(ct.degenerate());
    }
    Ok(phi_value(ct.omega, ct.epsilon, ct.degree, ct.big_n))
}

/// φ without the degeneracy check; degenerate tables give 0.
#[inline]
pub(crate) fn phi_value(omega: usize, epsilon: usize, degree: usize, big_n: usize) -> f64 {
    if epsilon == 0 || epsilon >= big_n || degree == 0 || degree >= big_n {
        return 0.0;
    }
    let (w, e, d, n) = (omega as f64, epsilon as f64, degree as f64, big_n as f64);
    let num = w * n - e * d;
    let den = (e * (n - e)).sqrt() * (d * (n - d)).sqrt();
    (num / den).clamp(-1.0, 1.0)
}

/// Cosine between neighbor and community vectors, `ω/√(εd)`; 0 when either
/// vector is empty.
#[inline]
pub(crate) fn cosine_value(omega: usize, epsilon: usize, degree: usize) -> f64 {
    if epsilon == 0 || degree == 0 {
        return 0.0;
    }
    omega as f64 / ((epsilon as f64).sqrt() * (degree as f64).sqrt())
}

/// Cosine similarity `ω/√(εd)`. Errors when `ε = 0` or `d = 0`.
pub fn cosine(ct: &ContingencyTable) -> Result<f64> {
    if ct.epsilon == 0 || ct.degree == 0 {
        return Err(ct.degenerate());
    }
    Ok(cosine_value(ct.omega, ct.epsilon, ct.degree))
}

/// `(nb-score, com-score) = (ω/d, ω/ε)`.
pub fn confidence_scores(ct: &ContingencyTable) -> Result<(f64, f64)> {
    if ct.degree == 0 || ct.epsilon == 0 {
        return Err(ct.degenerate());
    }
    Ok((
        ct.omega as f64 / ct.degree as f64,
        ct.omega as f64 / ct.epsilon as f64,
    ))
}

fn big_n(g: &Graph) -> Result<usize> {
    match g.node_count() {
        0 | 1 => Err(Error::TooFewNodes),
        n => Ok(n - 1),
    }
}

fn check_community(p: &Partition, c: CommunityId) -> Result<()> {
    if p.contains_community(c) {
        Ok(())
    } else {
        Err(Error::UnknownCommunity(c))
    }
}

/// Closed form `2l_S/N − εK_S/N²`, equal to the PS sum over members.
pub fn community_f(g: &Graph, p: &Partition, c: CommunityId) -> Result<f64> {
    let big_n = big_n(g)?;
    check_community(p, c)?;
    let size = p.size(c);
    if size == 0 {
        return Ok(0.0);
    }
    Ok(f_closed(
        p.internal_edges(c),
        size - 1,
        p.degree_sum(c),
        big_n,
    ))
}

#[inline]
fn f_closed(internal_edges: usize, epsilon: usize, degree_sum: usize, big_n: usize) -> f64 {
    let n = big_n as f64;
    2.0 * internal_edges as f64 / n - (epsilon as f64 * degree_sum as f64) / (n * n)
}

/// Γ: sum of `F` over all communities. Unassigned nodes contribute nothing.
pub fn partition_gamma(g: &Graph, p: &Partition) -> Result<f64> {
    let big_n = big_n(g)?;
    Ok(p.community_ids()
        .map(|c| f_closed(p.internal_edges(c), p.size(c) - 1, p.degree_sum(c), big_n))
        .sum())
}

/// Φ: sum of φ over members. Degenerate members (and singleton communities)
/// contribute 0.
pub fn community_phi(g: &Graph, p: &Partition, c: CommunityId) -> Result<f64> {
    correlation_sum(g, p, c, MergeMetric::Phi)
}

/// Cosine-limit version of Φ.
pub fn community_cos(g: &Graph, p: &Partition, c: CommunityId) -> Result<f64> {
    correlation_sum(g, p, c, MergeMetric::Cosine)
}

fn correlation_sum(g: &Graph, p: &Partition, c: CommunityId, metric: MergeMetric) -> Result<f64> {
    let big_n = big_n(g)?;
    check_community(p, c)?;
    let size = p.size(c);
    if size == 0 {
        return Ok(0.0);
    }
    let epsilon = size - 1;
    Ok(p.members(c)
        .iter()
        .map(|&u| {
            let omega = p.links_to(g, u, c);
            member_score(metric, omega, epsilon, g.degree(u), big_n)
        })
        .sum())
}

#[inline]
pub(crate) fn member_score(
    metric: MergeMetric,
    omega: usize,
    epsilon: usize,
    degree: usize,
    big_n: usize,
) -> f64 {
    match metric {
        MergeMetric::Phi => phi_value(omega, epsilon, degree, big_n),
        MergeMetric::Cosine => cosine_value(omega, epsilon, degree),
    }
}

/// Newman modularity `Σ_S [l_S/m − (K_S/2m)²]`.
pub fn modularity(g: &Graph, p: &Partition) -> Result<f64> {
    let m = g.edge_count();
    if m == 0 {
        return Err(Error::NoEdges);
    }
    let m = m as f64;
    Ok(p.community_ids()
        .map(|c| {
            let k = p.degree_sum(c) as f64 / (2.0 * m);
            p.internal_edges(c) as f64 / m - k * k
        })
        .sum())
}

/// `F(S ∪ {u}) − F(S)` for `u ∉ S`, computed as
/// `2l_{u,S}/N − (|S|·d_u + K_S)/N²`. Zero for an empty community.
pub fn delta_add(g: &Graph, p: &Partition, u: NodeId, c: CommunityId) -> Result<f64> {
    let big_n = big_n(g)?;
    check_community(p, c)?;
    if p.community_of(u) == Some(c) {
        return Err(Error::AlreadyMember {
            node: u,
            community: c,
        });
    }
    let numerator = add_gain_scaled(
        p.links_to(g, u, c),
        p.size(c),
        p.degree_sum(c),
        g.degree(u),
        big_n,
    );
    Ok(scaled_to_f64(numerator, big_n))
}

/// `F(S) − F(S \ {u})` for the community `S` containing `u`: the objective
/// contribution lost if `u` left. Zero for a singleton.
pub fn delta_remove(g: &Graph, p: &Partition, u: NodeId) -> Result<f64> {
    let big_n = big_n(g)?;
    let c = p.community_of(u).ok_or(Error::Unassigned(u))?;
    let d = g.degree(u);
    let numerator = add_gain_scaled(
        p.links_to(g, u, c),
        p.size(c) - 1,
        p.degree_sum(c) - d,
        d,
        big_n,
    );
    Ok(scaled_to_f64(numerator, big_n))
}

/// `N² · (F(S ∪ {u}) − F(S))` in exact integer arithmetic, where `links` is
/// `|N(u) ∩ S|`, `size = |S|` and `degree_sum = K_S` exclude `u`.
#[inline]
pub(crate) fn add_gain_scaled(
    links: usize,
    size: usize,
    degree_sum: usize,
    degree: usize,
    big_n: usize,
) -> i128 {
    2 * links as i128 * big_n as i128 - (size as i128 * degree as i128 + degree_sum as i128)
}

/// `N² · PS(u, S)` for an outside node: `l_{u,S}·N − |S|·d_u`.
#[inline]
pub(crate) fn ps_scaled(links: usize, size: usize, degree: usize, big_n: usize) -> i128 {
    links as i128 * big_n as i128 - size as i128 * degree as i128
}

#[inline]
pub(crate) fn scaled_to_f64(numerator: i128, big_n: usize) -> f64 {
    let n = big_n as f64;
    numerator as f64 / (n * n)
}

/// `ΔW = Φ(S_a ∪ S_b) − Φ(S_a) − Φ(S_b)` evaluated without modifying `p`.
pub fn delta_merge_w(
    g: &Graph,
    p: &Partition,
    a: CommunityId,
    b: CommunityId,
    metric: MergeMetric,
) -> Result<f64> {
    let big_n = big_n(g)?;
    check_community(p, a)?;
    check_community(p, b)?;
    if a == b {
        return Err(Error::SelfMerge(a));
    }
    let (size_a, size_b) = (p.size(a), p.size(b));
    let mut before = 0.0;
    let mut after = 0.0;
    for (own, size_own) in [(a, size_a), (b, size_b)] {
        for &u in p.members(own) {
            let mut in_a = 0;
            let mut in_b = 0;
            for &v in g.neighbors(u) {
                match p.community_of(v) {
                    Some(x) if x == a => in_a += 1,
                    Some(x) if x == b => in_b += 1,
                    _ => {}
                }
            }
            let d = g.degree(u);
            let omega_own = if own == a { in_a } else { in_b };
            before += member_score(metric, omega_own, size_own - 1, d, big_n);
            after += member_score(metric, in_a + in_b, size_a + size_b - 1, d, big_n);
        }
    }
    Ok(after - before)
}
