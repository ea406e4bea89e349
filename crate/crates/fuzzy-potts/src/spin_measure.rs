//! Exact probability measures on vertex spins.
//!
//! A [`SpinMeasure`] is a dense table over `colors^vertex_count` spin
//! configurations, indexed by rank. For two colors the rank is a bitmask
//! (bit `v` set means vertex `v` has the plus spin); for `r` colors the
//! rank is the base-`r` expansion with vertex `v` at digit `v`.
//!
//! The central construction is the fuzzy Potts measure: draw an edge
//! configuration from an edge measure, then color each open component
//! plus with probability `alpha` and minus otherwise, independently
//! across components. [`joint_fuzzy_potts`] keeps the pair (edge
//! configuration, spins) as a sparse [`JointMeasure`]; marginalizing it
//! over edges recovers [`fuzzy_potts`].
//!
//! The same colouring mechanism applied to an arbitrary random partition
//! is [`divide_and_color`]; applied to the open-component partition of a
//! random-cluster measure with integer `q` and the uniform color
//! distribution, it reproduces the `q`-state Potts Gibbs measure
//! ([`potts_gibbs`]) exactly.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::edge_measure::EdgeMeasure;
use crate::error::Error;
use crate::graph::{component_partition, EdgeConfig, Graph, Partition};
use crate::lattice::{plc_scan_table, PlcVerdict};
use crate::rational::Rational;
use crate::Result;

/// Default cap on `edge_count + vertex_count` for joint edge/spin tables;
/// the joint rank space has `2^(edge_count + vertex_count)` cells (the
/// table itself is sparse, but scans may touch the whole rank space).
pub const DEFAULT_JOINT_BITS_CAP: usize = 24;

/// A spin configuration, encoded as a rank (see module docs).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SpinConfig(pub u64);

impl SpinConfig {
    /// Color of vertex `v` under `color_count` colors.
    pub fn color(self, v: usize, color_count: usize) -> usize {
        if color_count == 2 {
            ((self.0 >> v) & 1) as usize
        } else {
            let mut r = self.0;
            for _ in 0..v {
                r /= color_count as u64;
            }
            (r % color_count as u64) as usize
        }
    }
}

/// A probability measure on spin configurations, stored densely by rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpinMeasure {
    vertex_count: usize,
    color_count: usize,
    probs: Vec<Rational>,
}

impl SpinMeasure {
    /// Normalizes nonnegative weights (one per spin rank) into a measure.
    pub fn from_weights(
        vertex_count: usize,
        color_count: usize,
        weights: Vec<Rational>,
    ) -> Result<SpinMeasure> {
        if vertex_count == 0 {
            return Err(Error::EmptyGraph);
        }
        if color_count < 2 {
            return Err(Error::InvalidStateCount(format!(
                "spin measures need at least 2 colors, got {color_count}"
            )));
        }
        let expected = rank_count(vertex_count, color_count)?;
        if weights.len() as u64 != expected {
            return Err(Error::ParameterCountMismatch {
                expected: expected as usize,
                actual: weights.len(),
            });
        }
        let mut total = Rational::zero();
        for w in &weights {
            if w.is_negative() {
                return Err(Error::NotNormalizable);
            }
            total += w;
        }
        if total.is_zero() {
            return Err(Error::NotNormalizable);
        }
        let probs = weights.into_iter().map(|w| w / &total).collect();
        Ok(SpinMeasure {
            vertex_count,
            color_count,
            probs,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn color_count(&self) -> usize {
        self.color_count
    }

    /// The full probability table, indexed by spin rank.
    pub fn probs(&self) -> &[Rational] {
        &self.probs
    }

    /// Probability of one spin configuration.
    pub fn prob(&self, s: SpinConfig) -> Result<&Rational> {
        self.check_config(s)?;
        Ok(&self.probs[s.0 as usize])
    }

    pub fn check_config(&self, s: SpinConfig) -> Result<()> {
        if (s.0 as usize) < self.probs.len() {
            Ok(())
        } else {
            Err(Error::SpinConfigOutOfRange {
                rank: s.0,
                rank_count: self.probs.len() as u64,
            })
        }
    }

    fn check_vertex_color(&self, v: usize, color: usize) -> Result<()> {
        if v >= self.vertex_count {
            return Err(Error::VertexOutOfRange {
                vertex: v,
                vertex_count: self.vertex_count,
            });
        }
        if color >= self.color_count {
            return Err(Error::ColorOutOfRange {
                color,
                color_count: self.color_count,
            });
        }
        Ok(())
    }
}

fn rank_count(vertex_count: usize, color_count: usize) -> Result<u64> {
    let mut total: u64 = 1;
    for _ in 0..vertex_count {
        total = total
            .checked_mul(color_count as u64)
            .filter(|&t| t <= 1 << 32)
            .ok_or(Error::JointSizeCapExceeded {
                bits: vertex_count * color_count.next_power_of_two().trailing_zeros() as usize,
                cap: 32,
            })?;
    }
    Ok(total)
}

/// The fuzzy Potts measure of an edge measure: draw edges, then color each
/// open component plus with probability `alpha`, independently. Two
/// colors; plus is color 1 and bit `v` of the rank. Requires
/// `0 < alpha < 1`.
pub fn fuzzy_potts(mu: &EdgeMeasure, alpha: &Rational) -> Result<SpinMeasure> {
    check_alpha(alpha)?;
    let g = mu.graph();
    let n = g.vertex_count();
    let mut table = vec![Rational::zero(); 1usize << n];
    for c in g.configs() {
        let p = &mu.probs()[c.0 as usize];
        if p.is_zero() {
            continue;
        }
        let partition = component_partition(g, c)?;
        for (rank, coloring_prob) in block_colorings(&partition, alpha) {
            table[rank as usize] += p * coloring_prob;
        }
    }
    SpinMeasure::from_weights(n, 2, table)
}

fn check_alpha(alpha: &Rational) -> Result<()> {
    if alpha.is_positive() && *alpha < Rational::one() {
        Ok(())
    } else {
        Err(Error::ParameterOutOfRange(
            "color probability alpha must lie strictly between 0 and 1",
        ))
    }
}

/// All plus/minus colorings of the blocks of a partition, as
/// (spin rank, probability) pairs; block plus-probability `alpha`.
fn block_colorings(partition: &Partition, alpha: &Rational) -> Vec<(u64, Rational)> {
    let beta = Rational::one() - alpha;
    let mut out = vec![(0u64, Rational::one())];
    for block in partition.blocks() {
        let mask: u64 = block.iter().map(|&v| 1u64 << v).sum();
        let mut next = Vec::with_capacity(out.len() * 2);
        for (rank, prob) in &out {
            next.push((*rank, prob * &beta));
            next.push((rank | mask, prob * alpha));
        }
        out = next;
    }
    out
}

/// A joint distribution of (edge configuration, spin configuration),
/// stored sparsely: only pairs with positive probability are kept. Spins
/// are two-colored. Ranks follow the same encodings as [`EdgeConfig`] and
/// [`SpinConfig`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JointMeasure {
    graph: Graph,
    entries: BTreeMap<(u64, u64), Rational>,
}

impl JointMeasure {
    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    /// Number of (edge, spin) pairs with positive probability.
    pub fn support_size(&self) -> usize {
        self.entries.len()
    }

    /// Probability of one (edge configuration, spin configuration) pair.
    pub fn prob(&self, c: EdgeConfig, s: SpinConfig) -> Result<Rational> {
        self.graph.check_config(c)?;
        if s.0 >= 1u64 << self.graph.vertex_count() {
            return Err(Error::SpinConfigOutOfRange {
                rank: s.0,
                rank_count: 1u64 << self.graph.vertex_count(),
            });
        }
        Ok(self
            .entries
            .get(&(c.0, s.0))
            .cloned()
            .unwrap_or_else(Rational::zero))
    }

    /// The positive-probability entries, in ascending (edge rank, spin
    /// rank) order.
    pub fn entries(&self) -> impl Iterator<Item = (EdgeConfig, SpinConfig, &Rational)> {
        self.entries
            .iter()
            .map(|(&(c, s), p)| (EdgeConfig(c), SpinConfig(s), p))
    }

    /// Dense spin marginal (a two-color spin table over all vertices).
    pub fn spin_table(&self) -> Vec<Rational> {
        let mut table = vec![Rational::zero(); 1usize << self.graph.vertex_count()];
        for (&(_, s), p) in &self.entries {
            table[s as usize] += p;
        }
        table
    }

    /// Dense edge marginal (a table over all edge configurations).
    pub fn edge_table(&self) -> Vec<Rational> {
        let mut table = vec![Rational::zero(); self.graph.config_count() as usize];
        for (&(c, _), p) in &self.entries {
            table[c as usize] += p;
        }
        table
    }
}

/// The joint distribution of (edge configuration, fuzzy Potts spins):
/// edges from `mu`, then each open component plus with probability
/// `alpha`. The spin marginal is [`fuzzy_potts`]; the edge marginal is
/// `mu` itself. Capped at [`DEFAULT_JOINT_BITS_CAP`] total rank bits.
pub fn joint_fuzzy_potts(mu: &EdgeMeasure, alpha: &Rational) -> Result<JointMeasure> {
    joint_fuzzy_potts_with_cap(mu, alpha, DEFAULT_JOINT_BITS_CAP)
}

/// As [`joint_fuzzy_potts`] with an explicit cap on
/// `edge_count + vertex_count`.
pub fn joint_fuzzy_potts_with_cap(
    mu: &EdgeMeasure,
    alpha: &Rational,
    max_bits: usize,
) -> Result<JointMeasure> {
    check_alpha(alpha)?;
    let g = mu.graph();
    let bits = g.edge_count() + g.vertex_count();
    let cap = max_bits.min(63);
    if bits > cap {
        return Err(Error::JointSizeCapExceeded { bits, cap });
    }
    let mut entries = BTreeMap::new();
    for c in g.configs() {
        let p = &mu.probs()[c.0 as usize];
        if p.is_zero() {
            continue;
        }
        let partition = component_partition(g, c)?;
        for (rank, coloring_prob) in block_colorings(&partition, alpha) {
            let value = p * coloring_prob;
            if !value.is_zero() {
                entries.insert((c.0, rank), value);
            }
        }
    }
    Ok(JointMeasure {
        graph: g.clone(),
        entries,
    })
}

/// A probability measure on partitions of the vertex set `0..vertex_count`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionMeasure {
    vertex_count: usize,
    probs: BTreeMap<Partition, Rational>,
}

impl PartitionMeasure {
    /// Normalizes nonnegative weights on partitions into a measure. Every
    /// partition must cover exactly the vertices `0..vertex_count`.
    pub fn from_weights(
        vertex_count: usize,
        weights: BTreeMap<Partition, Rational>,
    ) -> Result<PartitionMeasure> {
        if vertex_count == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut total = Rational::zero();
        for (partition, w) in &weights {
            if partition.vertex_count() != vertex_count
                || (0..vertex_count).any(|v| partition.block_of(v).is_none())
            {
                return Err(Error::Unsupported(format!(
                    "partition {:?} does not cover exactly the vertices 0..{vertex_count}",
                    partition.blocks()
                )));
            }
            if w.is_negative() {
                return Err(Error::NotNormalizable);
            }
            total += w;
        }
        if total.is_zero() {
            return Err(Error::NotNormalizable);
        }
        let probs = weights.into_iter().map(|(k, w)| (k, w / &total)).collect();
        Ok(PartitionMeasure {
            vertex_count,
            probs,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// The positive-probability partitions in canonical order.
    pub fn entries(&self) -> impl Iterator<Item = (&Partition, &Rational)> {
        self.probs.iter()
    }

    pub fn prob(&self, partition: &Partition) -> Rational {
        self.probs
            .get(partition)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }
}

/// The pushforward of an edge measure under the open-component-partition
/// map: the law of the random partition of the vertices into clusters.
pub fn partition_measure_from_edge_measure(mu: &EdgeMeasure) -> Result<PartitionMeasure> {
    let g = mu.graph();
    let mut probs: BTreeMap<Partition, Rational> = BTreeMap::new();
    for c in g.configs() {
        let p = &mu.probs()[c.0 as usize];
        if p.is_zero() {
            continue;
        }
        let partition = component_partition(g, c)?;
        *probs.entry(partition).or_insert_with(Rational::zero) += p;
    }
    PartitionMeasure::from_weights(g.vertex_count(), probs)
}

/// The divide-and-color measure: draw a partition, then give each block an
/// independent color from the distribution `beta` (color `i` with
/// probability `beta[i]`). Spins use `beta.len()` colors.
pub fn divide_and_color(pm: &PartitionMeasure, beta: &[Rational]) -> Result<SpinMeasure> {
    let r = beta.len();
    if r < 2 {
        return Err(Error::InvalidStateCount(format!(
            "divide-and-color needs at least 2 colors, got {r}"
        )));
    }
    let mut total = Rational::zero();
    for b in beta {
        if b.is_negative() {
            return Err(Error::ParameterOutOfRange(
                "color distribution entries must be nonnegative",
            ));
        }
        total += b;
    }
    if !total.is_one() {
        return Err(Error::ParameterOutOfRange(
            "color distribution must sum to exactly 1",
        ));
    }
    let n = pm.vertex_count();
    let size = rank_count(n, r)?;
    let mut table = vec![Rational::zero(); size as usize];
    for (partition, p) in pm.entries() {
        // Digit weight of vertex v is r^v; a block's rank contribution for
        // color k is k * sum of digit weights over the block.
        let block_weights: Vec<u64> = partition
            .blocks()
            .iter()
            .map(|block| block.iter().map(|&v| (r as u64).pow(v as u32)).sum())
            .collect();
        let mut partial: Vec<(u64, Rational)> = vec![(0, p.clone())];
        for &w in &block_weights {
            let mut next = Vec::with_capacity(partial.len() * r);
            for (rank, prob) in &partial {
                for (color, b) in beta.iter().enumerate() {
                    if b.is_zero() {
                        continue;
                    }
                    next.push((rank + color as u64 * w, prob * b));
                }
            }
            partial = next;
        }
        for (rank, prob) in partial {
            table[rank as usize] += prob;
        }
    }
    SpinMeasure::from_weights(n, r, table)
}

/// The `states`-state Potts Gibbs measure with edge weights derived from
/// edge probabilities: a spin configuration's weight is the product over
/// monochromatic edges of `1 / (1 - p_e)`. Requires an integer number of
/// states at least 2 and every `p_e` in `[0, 1)`.
///
/// This is exactly the spin marginal of the coupled random-cluster
/// construction at cluster weight `q = states`, so it equals
/// [`divide_and_color`] applied to the cluster partition with the uniform
/// color distribution.
pub fn potts_gibbs(g: &Graph, p: &[Rational], states: usize) -> Result<SpinMeasure> {
    if states < 2 {
        return Err(Error::InvalidStateCount(format!(
            "the Potts measure needs an integer state count of at least 2, got {states}"
        )));
    }
    if g.vertex_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    if p.len() != g.edge_count() {
        return Err(Error::ParameterCountMismatch {
            expected: g.edge_count(),
            actual: p.len(),
        });
    }
    for pe in p {
        if pe.is_negative() || *pe >= Rational::one() {
            return Err(Error::ParameterOutOfRange(
                "Potts edge probabilities must lie in [0, 1)",
            ));
        }
    }
    let n = g.vertex_count();
    let size = rank_count(n, states)?;
    let edge_weights: Vec<Rational> = p
        .iter()
        .map(|pe| (Rational::one() - pe).recip())
        .collect();
    let mut table = Vec::with_capacity(size as usize);
    for rank in 0..size {
        let s = SpinConfig(rank);
        let mut w = Rational::one();
        for (i, &(u, v)) in g.edges().iter().enumerate() {
            if s.color(u, states) == s.color(v, states) {
                w *= &edge_weights[i];
            }
        }
        table.push(w);
    }
    SpinMeasure::from_weights(n, states, table)
}

/// Conditions a spin measure on vertex `v` having color `color`. The
/// result lives on the same configuration space, with all mass on the
/// matching configurations.
pub fn condition_spin(nu: &SpinMeasure, v: usize, color: usize) -> Result<SpinMeasure> {
    nu.check_vertex_color(v, color)?;
    let weights: Vec<Rational> = nu
        .probs
        .iter()
        .enumerate()
        .map(|(rank, p)| {
            if SpinConfig(rank as u64).color(v, nu.color_count) == color {
                p.clone()
            } else {
                Rational::zero()
            }
        })
        .collect();
    if weights.iter().all(Rational::is_zero) {
        return Err(Error::NullConditioning);
    }
    SpinMeasure::from_weights(nu.vertex_count, nu.color_count, weights)
}

/// Conditions a joint edge/spin measure on vertex `v` having color
/// `color` (0 = minus, 1 = plus).
pub fn condition_spin_joint(jm: &JointMeasure, v: usize, color: usize) -> Result<JointMeasure> {
    jm.graph.check_vertex(v)?;
    if color >= 2 {
        return Err(Error::ColorOutOfRange {
            color,
            color_count: 2,
        });
    }
    let mut entries = BTreeMap::new();
    let mut mass = Rational::zero();
    for (&(c, s), p) in &jm.entries {
        if (s >> v) & 1 == color as u64 {
            mass += p;
            entries.insert((c, s), p.clone());
        }
    }
    if mass.is_zero() {
        return Err(Error::NullConditioning);
    }
    for p in entries.values_mut() {
        *p /= &mass;
    }
    Ok(JointMeasure {
        graph: jm.graph.clone(),
        entries,
    })
}

/// Probability that vertex `v` has color `color`.
pub fn spin_marginal(nu: &SpinMeasure, v: usize, color: usize) -> Result<Rational> {
    nu.check_vertex_color(v, color)?;
    let mut total = Rational::zero();
    for (rank, p) in nu.probs.iter().enumerate() {
        if SpinConfig(rank as u64).color(v, nu.color_count) == color {
            total += p;
        }
    }
    Ok(total)
}

/// Checks the positive lattice condition for a two-color spin measure,
/// with minus below plus coordinatewise (so meet and join are bitwise AND
/// and OR of spin ranks). Errors on measures with more than two colors,
/// where the spin space is not a product of two-element chains.
pub fn plc_check_spin(nu: &SpinMeasure) -> Result<PlcVerdict> {
    if nu.color_count != 2 {
        return Err(Error::TwoColorsRequired {
            color_count: nu.color_count,
        });
    }
    Ok(match plc_scan_table(&nu.probs) {
        None => PlcVerdict::Holds,
        Some(w) => PlcVerdict::Fails(w),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::edge_measure::{marginal, random_cluster, uniform_forest};
    use crate::rational::{integer, ratio};

    fn triangle() -> Graph {
        Graph::new(3, vec![(0, 1), (0, 2), (1, 2)]).unwrap()
    }

    fn k2() -> Graph {
        Graph::new(2, vec![(0, 1)]).unwrap()
    }

    #[test]
    fn fuzzy_potts_on_a_single_edge() {
        let mu = random_cluster(&k2(), &[ratio(1, 2)], &integer(2)).unwrap();
        assert_eq!(mu.probs(), &[ratio(2, 3), ratio(1, 3)]);
        let nu = fuzzy_potts(&mu, &ratio(1, 2)).unwrap();
        assert_eq!(
            nu.probs(),
            &[ratio(1, 3), ratio(1, 6), ratio(1, 6), ratio(1, 3)]
        );
        // Single-site marginals equal alpha regardless of the edge law.
        assert_eq!(spin_marginal(&nu, 0, 1).unwrap(), ratio(1, 2));
        assert_eq!(spin_marginal(&nu, 1, 1).unwrap(), ratio(1, 2));
    }

    #[test]
    fn fuzzy_potts_single_site_marginal_is_alpha() {
        let mu = uniform_forest(&triangle()).unwrap();
        let alpha = ratio(2, 7);
        let nu = fuzzy_potts(&mu, &alpha).unwrap();
        for v in 0..3 {
            assert_eq!(spin_marginal(&nu, v, 1).unwrap(), alpha);
        }
    }

    #[test]
    fn alpha_must_be_interior() {
        let mu = random_cluster(&k2(), &[ratio(1, 2)], &integer(2)).unwrap();
        for bad in [integer(0), integer(1), ratio(3, 2), ratio(-1, 2)] {
            assert!(fuzzy_potts(&mu, &bad).is_err(), "alpha = {bad}");
        }
    }

    #[test]
    fn joint_marginals_are_consistent() {
        let mu = random_cluster(&triangle(), &vec![ratio(1, 3); 3], &ratio(3, 2)).unwrap();
        let alpha = ratio(1, 4);
        let jm = joint_fuzzy_potts(&mu, &alpha).unwrap();
        assert_eq!(jm.edge_table(), mu.probs());
        let nu = fuzzy_potts(&mu, &alpha).unwrap();
        assert_eq!(jm.spin_table(), nu.probs());
        // Support: each edge configuration contributes 2^components pairs.
        assert_eq!(jm.support_size(), 8 + 3 * 4 + 4 * 2);
        let total: Rational = jm.entries().map(|(_, _, p)| p.clone()).sum();
        assert_eq!(total, integer(1));
    }

    #[test]
    fn joint_cap_is_enforced() {
        let mu = random_cluster(&triangle(), &vec![ratio(1, 2); 3], &integer(2)).unwrap();
        assert_eq!(
            joint_fuzzy_potts_with_cap(&mu, &ratio(1, 2), 5).unwrap_err(),
            Error::JointSizeCapExceeded { bits: 6, cap: 5 }
        );
        assert!(joint_fuzzy_potts_with_cap(&mu, &ratio(1, 2), 6).is_ok());
    }

    #[test]
    fn cluster_partition_pushforward_on_the_triangle() {
        let mu = random_cluster(&triangle(), &vec![ratio(1, 2); 3], &integer(2)).unwrap();
        let pm = partition_measure_from_edge_measure(&mu).unwrap();
        let got: Vec<(Vec<Vec<usize>>, Rational)> = pm
            .entries()
            .map(|(partition, p)| (partition.blocks().to_vec(), p.clone()))
            .collect();
        let expected = vec![
            (vec![vec![0], vec![1], vec![2]], ratio(2, 7)),
            (vec![vec![0], vec![1, 2]], ratio(1, 7)),
            (vec![vec![0, 1], vec![2]], ratio(1, 7)),
            (vec![vec![0, 1, 2]], ratio(2, 7)),
            (vec![vec![0, 2], vec![1]], ratio(1, 7)),
        ];
        assert_eq!(got, expected);
    }

    #[test]
    fn potts_gibbs_triangle_two_states() {
        // Weight 2 per monochromatic edge at p = 1/2: constant spins get
        // 8, one dissenting vertex gets 2; total 28.
        let nu = potts_gibbs(&triangle(), &vec![ratio(1, 2); 3], 2).unwrap();
        assert_eq!(nu.probs()[0], ratio(2, 7));
        assert_eq!(nu.probs()[7], ratio(2, 7));
        for rank in 1..7 {
            assert_eq!(nu.probs()[rank], ratio(1, 14), "rank {rank}");
        }
    }

    #[test]
    fn divide_and_color_reproduces_fuzzy_potts() {
        let mu = random_cluster(&triangle(), &vec![ratio(2, 5); 3], &integer(2)).unwrap();
        let alpha = ratio(1, 3);
        let pm = partition_measure_from_edge_measure(&mu).unwrap();
        // Color 1 is plus, so beta = (1 - alpha, alpha).
        let dc = divide_and_color(&pm, &[ratio(2, 3), alpha.clone()]).unwrap();
        let nu = fuzzy_potts(&mu, &alpha).unwrap();
        assert_eq!(dc, nu);
    }

    #[test]
    fn edwards_sokal_identity_on_the_triangle() {
        // Divide-and-color over the cluster partition with uniform colors
        // equals the Potts Gibbs measure, exactly, for integer q.
        for states in [2usize, 3] {
            let q = integer(states as i64);
            let p = vec![ratio(1, 2); 3];
            let mu = random_cluster(&triangle(), &p, &q).unwrap();
            let pm = partition_measure_from_edge_measure(&mu).unwrap();
            let beta = vec![Rational::new(1.into(), (states as i64).into()); states];
            let dc = divide_and_color(&pm, &beta).unwrap();
            let gibbs = potts_gibbs(&triangle(), &p, states).unwrap();
            assert_eq!(dc, gibbs, "q = {states}");
        }
    }

    #[test]
    fn divide_and_color_validates_beta() {
        let mu = random_cluster(&k2(), &[ratio(1, 2)], &integer(2)).unwrap();
        let pm = partition_measure_from_edge_measure(&mu).unwrap();
        assert!(divide_and_color(&pm, &[integer(1)]).is_err());
        assert!(divide_and_color(&pm, &[ratio(1, 2), ratio(1, 3)]).is_err());
        assert!(divide_and_color(&pm, &[ratio(3, 2), ratio(-1, 2)]).is_err());
        assert!(divide_and_color(&pm, &[ratio(1, 2), ratio(1, 2)]).is_ok());
    }

    #[test]
    fn conditioning_spins() {
        let mu = random_cluster(&k2(), &[ratio(1, 2)], &integer(2)).unwrap();
        let nu = fuzzy_potts(&mu, &ratio(1, 2)).unwrap();
        let plus0 = condition_spin(&nu, 0, 1).unwrap();
        assert_eq!(
            plus0.probs(),
            &[integer(0), ratio(1, 3), integer(0), ratio(2, 3)]
        );
        assert!(condition_spin(&nu, 5, 1).is_err());
        assert!(condition_spin(&nu, 0, 2).is_err());
    }

    #[test]
    fn conditioning_joints() {
        let mu = random_cluster(&triangle(), &vec![ratio(1, 2); 3], &integer(2)).unwrap();
        let jm = joint_fuzzy_potts(&mu, &ratio(1, 2)).unwrap();
        let plus0 = condition_spin_joint(&jm, 0, 1).unwrap();
        // Spin marginal of the conditioned joint equals conditioning the
        // spin marginal.
        let nu = fuzzy_potts(&mu, &ratio(1, 2)).unwrap();
        let nu_plus0 = condition_spin(&nu, 0, 1).unwrap();
        assert_eq!(plus0.spin_table(), nu_plus0.probs());
        // The edge marginal tilts toward configurations joining 0.
        assert!(marginal(&mu, 0).unwrap() < integer(1));
        let total: Rational = plus0.entries().map(|(_, _, p)| p.clone()).sum();
        assert_eq!(total, integer(1));
    }

    #[test]
    fn spin_lattice_condition_needs_two_colors() {
        let gibbs = potts_gibbs(&triangle(), &vec![ratio(1, 2); 3], 3).unwrap();
        assert_eq!(
            plc_check_spin(&gibbs).unwrap_err(),
            Error::TwoColorsRequired { color_count: 3 }
        );
    }

    #[test]
    fn spin_lattice_condition_verdicts() {
        // Plenty of colors per cluster keeps the fuzzy measure inside the
        // lattice-condition region.
        let mu4 = random_cluster(&triangle(), &vec![ratio(1, 2); 3], &integer(4)).unwrap();
        let nu4 = fuzzy_potts(&mu4, &ratio(1, 2)).unwrap();
        assert!(plc_check_spin(&nu4).unwrap().holds());

        // Plain percolation on the four-cycle with a fair coloring fails:
        // opposite corners can be plus while the joins drop mass.
        let c4 = Graph::new(4, vec![(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap();
        let mu1 = random_cluster(&c4, &vec![ratio(1, 3); 4], &integer(1)).unwrap();
        let nu1 = fuzzy_potts(&mu1, &ratio(1, 2)).unwrap();
        match plc_check_spin(&nu1).unwrap() {
            PlcVerdict::Fails(w) => {
                assert_eq!((w.a, w.b), (1, 8));
                assert_eq!(w.product_pair, ratio(16, 6561));
                assert_eq!(w.product_meet_join, ratio(31, 13122));
            }
            PlcVerdict::Holds => panic!("expected a violation"),
        }
    }
}
