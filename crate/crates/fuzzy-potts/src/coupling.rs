//! An explicit monotone coupling of one edge measure conditioned two ways.
//!
//! Given an edge measure, a distinguished edge `e`, and an endpoint `x`
//! of `e`, [`build_coupling`] constructs an exact joint distribution of a
//! pair of configurations `(psi, xi)` whose marginals are the measure
//! conditioned on `e` open and on `e` closed respectively. Edges are
//! revealed one at a time, preferring edges incident to the current open
//! cluster of `x` in the `psi` chain; at each step both chains share a
//! single uniform draw, so each chain opens the edge exactly with its own
//! conditional probability while agreeing as often as possible.
//!
//! For random-cluster measures with `q >= 1` the shared draw yields
//! `psi >= xi` pointwise, and the two configurations agree on every edge
//! not touching the final open cluster of `x`; [`verify_coupling`] checks
//! all of this exactly, leaf by leaf, and
//! [`lemma2_conclusion_via_coupling`] turns the per-leaf comparison into
//! the covariance conclusion it certifies.

use alloc::vec::Vec;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::association::IncreasingEvent;
use crate::edge_measure::{conditional_edge_marginal, marginal, random_cluster, EdgeMeasure};
use crate::error::Error;
use crate::graph::{component_partition, EdgeConfig, Graph};
use crate::rational::{pow_u, Rational};
use crate::spin_measure::joint_fuzzy_potts;
use crate::Result;

/// Hard cap on edge count for coupling construction: the tree can have up
/// to `3^(edges - 1)` leaves.
pub const COUPLING_EDGE_CAP: usize = 10;

/// Which unvisited edge the construction reveals next.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeRule {
    /// Lowest-indexed edge incident to the open cluster of `x`, falling
    /// back to the lowest-indexed remaining edge.
    LowestIncidentFirst,
    /// Highest-indexed edge incident to the open cluster of `x`, falling
    /// back to the highest-indexed remaining edge.
    HighestIncidentFirst,
}

/// One complete outcome of the coupled revelation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CouplingLeaf {
    /// The configuration of the chain conditioned on `e` open.
    pub psi: EdgeConfig,
    /// The configuration of the chain conditioned on `e` closed.
    pub xi: EdgeConfig,
    /// Joint probability of this pair.
    pub probability: Rational,
    /// The order in which edges were revealed on this branch, starting
    /// with `e` itself.
    pub visit_order: Vec<usize>,
}

/// The full exact distribution of the coupled pair, as a set of leaves.
#[derive(Clone, Debug)]
pub struct CouplingDistribution {
    measure: EdgeMeasure,
    edge: usize,
    vertex: usize,
    rule: EdgeRule,
    leaves: Vec<CouplingLeaf>,
    domination_guaranteed: bool,
}

impl CouplingDistribution {
    /// The underlying (unconditioned) edge measure.
    pub fn measure(&self) -> &EdgeMeasure {
        &self.measure
    }

    /// The distinguished edge whose state separates the two chains.
    pub fn edge(&self) -> usize {
        self.edge
    }

    /// The distinguished endpoint whose open cluster guides revelation.
    pub fn vertex(&self) -> usize {
        self.vertex
    }

    pub fn rule(&self) -> EdgeRule {
        self.rule
    }

    /// Leaves in construction order (children explored as both-open, one
    /// chain only, both-closed).
    pub fn leaves(&self) -> &[CouplingLeaf] {
        &self.leaves
    }

    /// Whether at every revelation the open-conditioned chain had the
    /// larger conditional probability, which forces `psi >= xi` on every
    /// leaf. Random-cluster measures with `q >= 1` guarantee this; below
    /// 1 it can fail.
    pub fn domination_guaranteed(&self) -> bool {
        self.domination_guaranteed
    }
}

fn check_coupling_preconditions(g: &Graph, e: usize, x: usize) -> Result<()> {
    g.check_vertex(x)?;
    let (u, v) = g.endpoints(e)?;
    if u != x && v != x {
        return Err(Error::EdgeNotIncident { edge: e, vertex: x });
    }
    if g.edge_count() > COUPLING_EDGE_CAP {
        return Err(Error::EdgeCountCapExceeded {
            edges: g.edge_count(),
            cap: COUPLING_EDGE_CAP,
        });
    }
    Ok(())
}

/// The next edge to reveal: prefer unvisited edges incident to the open
/// cluster of `x` under the partial `psi` assignment, then any remaining
/// unvisited edge, oriented by the rule.
fn next_edge(
    g: &Graph,
    rule: EdgeRule,
    visited: u64,
    psi_partial: EdgeConfig,
    x: usize,
) -> Result<Option<usize>> {
    let part = component_partition(g, psi_partial)?;
    let cluster = part.block_of(x);
    let mut incident: Option<usize> = None;
    let mut remaining: Option<usize> = None;
    for f in 0..g.edge_count() {
        if (visited >> f) & 1 == 1 {
            continue;
        }
        let (u, v) = g.endpoints(f)?;
        let touches = part.block_of(u) == cluster || part.block_of(v) == cluster;
        let better = |current: Option<usize>| match (rule, current) {
            (_, None) => true,
            (EdgeRule::LowestIncidentFirst, Some(c)) => f < c,
            (EdgeRule::HighestIncidentFirst, Some(c)) => f > c,
        };
        if touches && better(incident) {
            incident = Some(f);
        }
        if better(remaining) {
            remaining = Some(f);
        }
    }
    Ok(incident.or(remaining))
}

/// Builds the coupling for the random-cluster measure with the given
/// edge probabilities and cluster weight, revealing lowest-indexed
/// incident edges first.
pub fn build_coupling(
    g: &Graph,
    p: &[Rational],
    q: &Rational,
    e: usize,
    x: usize,
) -> Result<CouplingDistribution> {
    build_coupling_with_rule(g, p, q, e, x, EdgeRule::LowestIncidentFirst)
}

/// As [`build_coupling`] with an explicit revelation rule. The resulting
/// leaf set depends on the rule, but the two chain marginals do not.
pub fn build_coupling_with_rule(
    g: &Graph,
    p: &[Rational],
    q: &Rational,
    e: usize,
    x: usize,
    rule: EdgeRule,
) -> Result<CouplingDistribution> {
    check_coupling_preconditions(g, e, x)?;
    let mu = random_cluster(g, p, q)?;
    let mut leaves = Vec::new();
    let mut ordered = true;
    let mut assignment: Vec<(usize, bool)> = Vec::with_capacity(g.edge_count());
    descend(
        &mu,
        rule,
        x,
        1u64 << e,
        EdgeConfig::EMPTY.with_edge(e, true),
        EdgeConfig::EMPTY,
        Rational::one(),
        &mut alloc::vec![e],
        &mut assignment,
        &mut leaves,
        &mut ordered,
    )?;
    Ok(CouplingDistribution {
        measure: mu,
        edge: e,
        vertex: x,
        rule,
        leaves,
        domination_guaranteed: ordered,
    })
}

#[allow(clippy::too_many_arguments)]
fn descend(
    mu: &EdgeMeasure,
    rule: EdgeRule,
    x: usize,
    visited: u64,
    psi: EdgeConfig,
    xi: EdgeConfig,
    prob: Rational,
    order: &mut Vec<usize>,
    assignment: &mut Vec<(usize, bool)>,
    leaves: &mut Vec<CouplingLeaf>,
    ordered: &mut bool,
) -> Result<()> {
    let g = mu.graph();
    let f = match next_edge(g, rule, visited, psi, x)? {
        Some(f) => f,
        None => {
            leaves.push(CouplingLeaf {
                psi,
                xi,
                probability: prob,
                visit_order: order.clone(),
            });
            return Ok(());
        }
    };

    // Conditional probability that f is open, separately under each
    // chain's partial assignment of the visited edges.
    assignment.clear();
    for i in 0..g.edge_count() {
        if (visited >> i) & 1 == 1 {
            assignment.push((i, psi.is_open(i)));
        }
    }
    let threshold_psi = conditional_edge_marginal(mu, assignment, f)?;
    assignment.clear();
    for i in 0..g.edge_count() {
        if (visited >> i) & 1 == 1 {
            assignment.push((i, xi.is_open(i)));
        }
    }
    let threshold_xi = conditional_edge_marginal(mu, assignment, f)?;

    if threshold_psi < threshold_xi {
        *ordered = false;
    }
    let low = threshold_psi.clone().min(threshold_xi.clone());
    let high = threshold_psi.clone().max(threshold_xi.clone());
    let psi_opens_alone = threshold_psi >= threshold_xi;

    order.push(f);
    let now_visited = visited | (1u64 << f);
    // Both chains share one uniform draw below the pair of thresholds:
    // both open, exactly one opens, or both stay closed.
    let both_open = low.clone();
    if !both_open.is_zero() {
        descend(
            mu,
            rule,
            x,
            now_visited,
            psi.with_edge(f, true),
            xi.with_edge(f, true),
            &prob * &both_open,
            order,
            assignment,
            leaves,
            ordered,
        )?;
    }
    let middle = &high - &low;
    if !middle.is_zero() {
        descend(
            mu,
            rule,
            x,
            now_visited,
            psi.with_edge(f, psi_opens_alone),
            xi.with_edge(f, !psi_opens_alone),
            &prob * &middle,
            order,
            assignment,
            leaves,
            ordered,
        )?;
    }
    let both_closed = Rational::one() - &high;
    if !both_closed.is_zero() {
        descend(
            mu,
            rule,
            x,
            now_visited,
            psi,
            xi,
            prob * both_closed,
            order,
            assignment,
            leaves,
            ordered,
        )?;
    }
    order.pop();
    Ok(())
}

/// Exhaustive verification of a coupling distribution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CouplingReport {
    /// Leaf probabilities sum to exactly 1.
    pub probabilities_sum_to_one: bool,
    /// The `psi` marginal equals the measure conditioned on `e` open.
    pub open_marginal_matches: bool,
    /// The `xi` marginal equals the measure conditioned on `e` closed.
    pub closed_marginal_matches: bool,
    /// Every leaf has `psi >= xi` edgewise.
    pub domination_holds: bool,
    /// On every leaf, edges with no endpoint in the open cluster of `x`
    /// under `psi` have the same state in both configurations.
    pub off_component_agreement: bool,
}

impl CouplingReport {
    pub fn all_hold(&self) -> bool {
        self.probabilities_sum_to_one
            && self.open_marginal_matches
            && self.closed_marginal_matches
            && self.domination_holds
            && self.off_component_agreement
    }
}

/// Checks a coupling distribution exactly: total mass, both conditional
/// marginals, edgewise domination, and agreement away from the open
/// cluster of `x`.
pub fn verify_coupling(cd: &CouplingDistribution) -> Result<CouplingReport> {
    let mu = &cd.measure;
    let g = mu.graph();
    let e = cd.edge;
    let m = marginal(mu, e)?;
    let one = Rational::one();
    if m.is_zero() || m == one {
        return Err(Error::NullConditioning);
    }

    let size = 1usize << g.edge_count();
    let mut psi_table = alloc::vec![Rational::zero(); size];
    let mut xi_table = alloc::vec![Rational::zero(); size];
    let mut total = Rational::zero();
    let mut domination_holds = true;
    let mut off_component_agreement = true;
    for leaf in &cd.leaves {
        total += &leaf.probability;
        psi_table[leaf.psi.0 as usize] += &leaf.probability;
        xi_table[leaf.xi.0 as usize] += &leaf.probability;
        if !leaf.xi.le(leaf.psi) {
            domination_holds = false;
        }
        let part = component_partition(g, leaf.psi)?;
        let cluster = part.block_of(cd.vertex);
        for f in 0..g.edge_count() {
            let (u, v) = g.endpoints(f)?;
            if part.block_of(u) != cluster
                && part.block_of(v) != cluster
                && leaf.psi.is_open(f) != leaf.xi.is_open(f)
            {
                off_component_agreement = false;
            }
        }
    }

    let closed_mass = &one - &m;
    let mut open_marginal_matches = true;
    let mut closed_marginal_matches = true;
    for c in g.configs() {
        let p = &mu.probs()[c.0 as usize];
        let expect_psi = if c.is_open(e) {
            p / &m
        } else {
            Rational::zero()
        };
        let expect_xi = if c.is_open(e) {
            Rational::zero()
        } else {
            p / &closed_mass
        };
        if psi_table[c.0 as usize] != expect_psi {
            open_marginal_matches = false;
        }
        if xi_table[c.0 as usize] != expect_xi {
            closed_marginal_matches = false;
        }
    }
    Ok(CouplingReport {
        probabilities_sum_to_one: total == one,
        open_marginal_matches,
        closed_marginal_matches,
        domination_holds,
        off_component_agreement,
    })
}

/// Spin colorings of a configuration's clusters when the cluster of `x`
/// is forced plus: every achievable spin rank together with how many free
/// clusters were raised to plus, over `free` free clusters in total.
pub fn forced_plus_colorings(
    g: &Graph,
    c: EdgeConfig,
    x: usize,
) -> Result<(usize, Vec<(u64, u32)>)> {
    g.check_vertex(x)?;
    if g.vertex_count() >= 64 {
        return Err(Error::Unsupported(alloc::format!(
            "spin ranks for {} vertices exceed the 64-bit encoding",
            g.vertex_count()
        )));
    }
    let part = component_partition(g, c)?;
    let cluster = part.block_of(x).expect("x was checked against the graph");
    let mut base = 0u64;
    let mut free_masks = Vec::new();
    for (i, block) in part.blocks().iter().enumerate() {
        let mask = block.iter().fold(0u64, |acc, &v| acc | (1 << v));
        if i == cluster {
            base = mask;
        } else {
            free_masks.push(mask);
        }
    }
    let free = free_masks.len();
    let mut out = Vec::with_capacity(1 << free);
    for choice in 0..(1u64 << free) {
        let mut rank = base;
        for (j, mask) in free_masks.iter().enumerate() {
            if (choice >> j) & 1 == 1 {
                rank |= mask;
            }
        }
        out.push((rank, choice.count_ones()));
    }
    Ok((free, out))
}

/// Probability that the spins land in `event` given the edge
/// configuration, when each cluster is plus independently with
/// probability `alpha` and the cluster of `x` is conditioned plus.
fn event_probability_given_config<E: IncreasingEvent>(
    g: &Graph,
    c: EdgeConfig,
    x: usize,
    alpha: &Rational,
    event: &E,
) -> Result<Rational> {
    let (free, colorings) = forced_plus_colorings(g, c, x)?;
    let beta = Rational::one() - alpha;
    let mut total = Rational::zero();
    for (rank, raised) in colorings {
        if event.contains(rank) {
            total += pow_u(alpha, raised as usize) * pow_u(&beta, free - raised as usize);
        }
    }
    Ok(total)
}

/// The covariance conclusion certified by a coupling, for one increasing
/// spin event.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CouplingConclusion {
    /// On every leaf, the event is at least as likely under `psi` as
    /// under `xi` (cluster of `x` conditioned plus in both).
    pub per_leaf_monotone: bool,
    /// Probability of the event given the distinguished edge open (and
    /// the spin at `x` plus), aggregated over leaves.
    pub probability_given_open: Rational,
    /// Likewise given the edge closed.
    pub probability_given_closed: Rational,
    /// `m (1 - m) (P_open - P_closed)` with `m` the edge marginal: the
    /// covariance between the event and the edge state, conditioned on
    /// the spin at `x` being plus.
    pub covariance: Rational,
    /// Whether that covariance equals the one computed directly from the
    /// joint edge-spin measure, with no coupling involved.
    pub matches_direct_covariance: bool,
}

/// Aggregates a coupling into the covariance between an increasing spin
/// event and the distinguished edge's state, conditioned on the spin at
/// `x` being plus, and cross-checks it against the direct computation on
/// the joint measure. `per_leaf_monotone` reports whether the coupling
/// certifies the sign pointwise.
pub fn lemma2_conclusion_via_coupling<E: IncreasingEvent>(
    cd: &CouplingDistribution,
    alpha: &Rational,
    event: &E,
) -> Result<CouplingConclusion> {
    let mu = &cd.measure;
    let g = mu.graph();
    if event.coordinates() != g.vertex_count() {
        return Err(Error::IncompatibleMeasures);
    }
    let mut per_leaf_monotone = true;
    let mut p_open = Rational::zero();
    let mut p_closed = Rational::zero();
    for leaf in &cd.leaves {
        let under_psi = event_probability_given_config(g, leaf.psi, cd.vertex, alpha, event)?;
        let under_xi = event_probability_given_config(g, leaf.xi, cd.vertex, alpha, event)?;
        if under_psi < under_xi {
            per_leaf_monotone = false;
        }
        p_open += &leaf.probability * under_psi;
        p_closed += &leaf.probability * under_xi;
    }
    let m = marginal(mu, cd.edge)?;
    let covariance = &m * (Rational::one() - &m) * (&p_open - &p_closed);
    let jm = joint_fuzzy_potts(mu, alpha)?;
    let direct = crate::association::lemma2_covariance(&jm, cd.vertex, cd.edge, event)?;
    Ok(CouplingConclusion {
        per_leaf_monotone,
        probability_given_open: p_open,
        probability_given_closed: p_closed,
        covariance: covariance.clone(),
        matches_direct_covariance: covariance == direct,
    })
}

/// A per-leaf event-monotonicity violation: the event is strictly less
/// likely under `psi` than under `xi` on that leaf at coloring bias 1/2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerLeafViolation {
    pub leaf_index: usize,
    pub event: crate::association::UpSet,
}

/// Checks, for every increasing spin event at coloring bias 1/2, that
/// every leaf makes the event at least as likely under `psi` as under
/// `xi`. At bias 1/2 each coloring of the free clusters is equally
/// likely, so the comparison reduces to exact integer counting. Returns
/// the first violation (leaf order, then event mask order) or `None`.
pub fn per_leaf_event_monotonicity(
    cd: &CouplingDistribution,
) -> Result<Option<PerLeafViolation>> {
    let g = cd.measure.graph();
    let n = g.vertex_count();
    let upsets = crate::association::enumerate_upsets(n)?;
    let rank_count = 1usize << n;
    for (leaf_index, leaf) in cd.leaves.iter().enumerate() {
        let (free_psi, colorings_psi) = forced_plus_colorings(g, leaf.psi, cd.vertex)?;
        let (free_xi, colorings_xi) = forced_plus_colorings(g, leaf.xi, cd.vertex)?;
        let mut count_psi = alloc::vec![0u64; rank_count];
        let mut count_xi = alloc::vec![0u64; rank_count];
        for (rank, _) in colorings_psi {
            count_psi[rank as usize] += 1;
        }
        for (rank, _) in colorings_xi {
            count_xi[rank as usize] += 1;
        }
        for event in &upsets {
            let mut in_psi = 0u64;
            let mut in_xi = 0u64;
            for &rank in event.member_ranks().iter() {
                in_psi += count_psi[rank as usize];
                in_xi += count_xi[rank as usize];
            }
            // P(event | psi) >= P(event | xi) cross-multiplied by the
            // coloring counts 2^free.
            if (in_psi as u128) << free_xi < (in_xi as u128) << free_psi {
                return Ok(Some(PerLeafViolation {
                    leaf_index,
                    event: *event,
                }));
            }
        }
    }
    Ok(None)
}

/// Draws exact coupled samples by walking one revelation path with a
/// deterministic stream of uniform draws.
pub struct CouplingSampler {
    measure: EdgeMeasure,
    edge: usize,
    vertex: usize,
    rule: EdgeRule,
    rng: ChaCha8Rng,
}

impl CouplingSampler {
    /// Prepares a sampler for the random-cluster coupling, seeded
    /// deterministically.
    pub fn new(
        g: &Graph,
        p: &[Rational],
        q: &Rational,
        e: usize,
        x: usize,
        seed: u64,
    ) -> Result<CouplingSampler> {
        check_coupling_preconditions(g, e, x)?;
        let mu = random_cluster(g, p, q)?;
        Ok(CouplingSampler {
            measure: mu,
            edge: e,
            vertex: x,
            rule: EdgeRule::LowestIncidentFirst,
            rng: ChaCha8Rng::seed_from_u64(seed),
        })
    }

    /// Draws one coupled pair `(psi, xi)`. Each revealed edge consumes a
    /// single uniform value, evaluated against both chains' conditional
    /// probabilities, so the pair has exactly the coupling distribution.
    pub fn draw(&mut self) -> Result<(EdgeConfig, EdgeConfig)> {
        let g = self.measure.graph();
        let e = self.edge;
        let mut visited = 1u64 << e;
        let mut psi = EdgeConfig::EMPTY.with_edge(e, true);
        let mut xi = EdgeConfig::EMPTY;
        let mut assignment: Vec<(usize, bool)> = Vec::with_capacity(g.edge_count());
        while let Some(f) = next_edge(g, self.rule, visited, psi, self.vertex)? {
            assignment.clear();
            for i in 0..g.edge_count() {
                if (visited >> i) & 1 == 1 {
                    assignment.push((i, psi.is_open(i)));
                }
            }
            let t_psi = conditional_edge_marginal(&self.measure, &assignment, f)?;
            assignment.clear();
            for i in 0..g.edge_count() {
                if (visited >> i) & 1 == 1 {
                    assignment.push((i, xi.is_open(i)));
                }
            }
            let t_xi = conditional_edge_marginal(&self.measure, &assignment, f)?;

            // One uniform draw on a common denominator, compared against
            // both thresholds exactly.
            let b_psi = t_psi
                .denom()
                .to_biguint()
                .expect("denominators are positive");
            let b_xi = t_xi
                .denom()
                .to_biguint()
                .expect("denominators are positive");
            let common = b_psi.lcm(&b_xi);
            let u = uniform_below(&mut self.rng, &common);
            let scaled_psi = t_psi
                .numer()
                .to_biguint()
                .expect("conditional probabilities are nonnegative")
                * (&common / &b_psi);
            let scaled_xi = t_xi
                .numer()
                .to_biguint()
                .expect("conditional probabilities are nonnegative")
                * (&common / &b_xi);
            psi = psi.with_edge(f, u < scaled_psi);
            xi = xi.with_edge(f, u < scaled_xi);
            visited |= 1u64 << f;
        }
        Ok((psi, xi))
    }
}

/// One draw from the coupling, from a fresh deterministic stream.
pub fn sample_coupling(
    g: &Graph,
    p: &[Rational],
    q: &Rational,
    e: usize,
    x: usize,
    seed: u64,
) -> Result<(EdgeConfig, EdgeConfig)> {
    CouplingSampler::new(g, p, q, e, x, seed)?.draw()
}

/// Uniform integer in `[0, bound)` by rejection on the bit width.
fn uniform_below(rng: &mut ChaCha8Rng, bound: &BigUint) -> BigUint {
    if bound.is_one() {
        return BigUint::zero();
    }
    let bits = bound.bits();
    let bytes = bits.div_ceil(8) as usize;
    let excess = (bytes as u64) * 8 - bits;
    let mut buf = alloc::vec![0u8; bytes];
    loop {
        rng.fill_bytes(&mut buf);
        buf[bytes - 1] &= 0xffu8 >> excess;
        let u = BigUint::from_bytes_le(&buf);
        if &u < bound {
            return u;
        }
    }
}
