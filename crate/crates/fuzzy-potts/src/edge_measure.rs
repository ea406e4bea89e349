//! Exact probability measures on edge configurations.
//!
//! An [`EdgeMeasure`] is a dense table of exact rationals indexed by
//! configuration rank, always normalized to total mass one. Constructors
//! enforce a cap on the edge count (default [`DEFAULT_EDGE_CAP`]) because
//! the table has `2^edge_count` entries; `_with_cap` variants let a caller
//! raise the cap deliberately.

use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::graph::{component_count, contract_edge, delete_edge, is_forest, EdgeConfig, Graph};
use crate::rational::{pow_u, Rational};
use crate::Result;

/// Default cap on the number of edges for dense-table construction.
/// `2^20` rationals is the largest table built without an explicit opt-in.
pub const DEFAULT_EDGE_CAP: usize = 20;

/// A probability measure on `{0,1}^E`, stored densely by configuration
/// rank and normalized exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeMeasure {
    graph: Graph,
    probs: Vec<Rational>,
}

impl EdgeMeasure {
    /// Normalizes nonnegative weights (one per configuration rank) into a
    /// measure. Fails if any weight is negative or the total is zero.
    pub fn from_weights(graph: Graph, weights: Vec<Rational>) -> Result<EdgeMeasure> {
        EdgeMeasure::from_weights_with_cap(graph, weights, DEFAULT_EDGE_CAP)
    }

    /// As [`EdgeMeasure::from_weights`] with an explicit edge cap.
    pub fn from_weights_with_cap(
        graph: Graph,
        weights: Vec<Rational>,
        max_edges: usize,
    ) -> Result<EdgeMeasure> {
        check_edge_cap(&graph, max_edges)?;
        if graph.vertex_count() == 0 {
            return Err(Error::EmptyGraph);
        }
        let expected = graph.config_count() as usize;
        if weights.len() != expected {
            return Err(Error::ParameterCountMismatch {
                expected,
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
        Ok(EdgeMeasure { graph, probs })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    /// The full probability table, indexed by configuration rank.
    pub fn probs(&self) -> &[Rational] {
        &self.probs
    }

    /// Probability of one configuration.
    pub fn prob(&self, c: EdgeConfig) -> Result<&Rational> {
        self.graph.check_config(c)?;
        Ok(&self.probs[c.0 as usize])
    }

    /// Number of configurations with positive probability.
    pub fn support_size(&self) -> usize {
        self.probs.iter().filter(|p| !p.is_zero()).count()
    }
}

fn check_edge_cap(g: &Graph, cap: usize) -> Result<()> {
    let edges = g.edge_count();
    // Ranks are u64, so 2^edges must fit regardless of the caller's cap.
    let cap = cap.min(63);
    if edges > cap {
        return Err(Error::EdgeCountCapExceeded { edges, cap });
    }
    Ok(())
}

fn check_edge_probabilities(g: &Graph, p: &[Rational], open_interval: bool) -> Result<()> {
    if p.len() != g.edge_count() {
        return Err(Error::ParameterCountMismatch {
            expected: g.edge_count(),
            actual: p.len(),
        });
    }
    for pe in p {
        let ok = if open_interval {
            pe.is_positive() && *pe < Rational::one()
        } else {
            !pe.is_negative() && *pe <= Rational::one()
        };
        if !ok {
            return Err(Error::ParameterOutOfRange(if open_interval {
                "edge probabilities must lie strictly between 0 and 1"
            } else {
                "edge probabilities must lie in [0, 1]"
            }));
        }
    }
    Ok(())
}

/// The random-cluster measure: a configuration `c` gets weight
/// `prod_open p_e * prod_closed (1 - p_e) * q^k(c)`, where `k(c)` is the
/// number of open components (isolated vertices included). Requires every
/// `p_e` strictly inside `(0, 1)` and `q > 0`; `q` need not be an integer.
pub fn random_cluster(g: &Graph, p: &[Rational], q: &Rational) -> Result<EdgeMeasure> {
    random_cluster_with_cap(g, p, q, DEFAULT_EDGE_CAP)
}

/// As [`random_cluster`] with an explicit edge cap.
pub fn random_cluster_with_cap(
    g: &Graph,
    p: &[Rational],
    q: &Rational,
    max_edges: usize,
) -> Result<EdgeMeasure> {
    check_edge_cap(g, max_edges)?;
    if g.vertex_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    check_edge_probabilities(g, p, true)?;
    if !q.is_positive() {
        return Err(Error::ParameterOutOfRange("cluster weight q must be positive"));
    }
    let bernoulli = bernoulli_weights(g, p);
    let mut weights = Vec::with_capacity(g.config_count() as usize);
    for c in g.configs() {
        let k = component_count(g, c)?;
        weights.push(&bernoulli[c.0 as usize] * pow_u(q, k));
    }
    EdgeMeasure::from_weights_with_cap(g.clone(), weights, max_edges)
}

/// The product (independent percolation) measure: each edge is open with
/// its own probability `p_e` in `[0, 1]`, independently.
pub fn product_measure(g: &Graph, p: &[Rational]) -> Result<EdgeMeasure> {
    product_measure_with_cap(g, p, DEFAULT_EDGE_CAP)
}

/// As [`product_measure`] with an explicit edge cap.
pub fn product_measure_with_cap(
    g: &Graph,
    p: &[Rational],
    max_edges: usize,
) -> Result<EdgeMeasure> {
    check_edge_cap(g, max_edges)?;
    if g.vertex_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    check_edge_probabilities(g, p, false)?;
    let weights = bernoulli_weights(g, p);
    EdgeMeasure::from_weights_with_cap(g.clone(), weights, max_edges)
}

/// The uniform measure on forests: every acyclic configuration gets equal
/// probability, every configuration with a cycle gets zero.
pub fn uniform_forest(g: &Graph) -> Result<EdgeMeasure> {
    uniform_forest_with_cap(g, DEFAULT_EDGE_CAP)
}

/// As [`uniform_forest`] with an explicit edge cap.
pub fn uniform_forest_with_cap(g: &Graph, max_edges: usize) -> Result<EdgeMeasure> {
    check_edge_cap(g, max_edges)?;
    if g.vertex_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    let mut weights = Vec::with_capacity(g.config_count() as usize);
    for c in g.configs() {
        weights.push(if is_forest(g, c)? {
            Rational::one()
        } else {
            Rational::zero()
        });
    }
    EdgeMeasure::from_weights_with_cap(g.clone(), weights, max_edges)
}

fn bernoulli_weights(g: &Graph, p: &[Rational]) -> Vec<Rational> {
    // prod_open p_e * prod_closed (1 - p_e) for every rank, built edge by
    // edge so the whole table costs O(2^|E|) multiplications.
    let mut weights = alloc::vec![Rational::one()];
    for pe in p.iter().take(g.edge_count()) {
        let closed = Rational::one() - pe;
        let mut next = Vec::with_capacity(weights.len() * 2);
        for w in &weights {
            next.push(w * &closed);
        }
        for w in &weights {
            next.push(w * pe);
        }
        weights = next;
    }
    weights
}

/// Probability that edge `e` is open.
pub fn marginal(mu: &EdgeMeasure, e: usize) -> Result<Rational> {
    mu.graph.endpoints(e)?;
    let mut total = Rational::zero();
    for c in mu.graph.configs() {
        if c.is_open(e) {
            total += &mu.probs[c.0 as usize];
        }
    }
    Ok(total)
}

/// Probability that edge `e` is open, conditioned on the given fixed edge
/// states. Fails with [`Error::NullConditioning`] if the conditioning
/// event has probability zero.
pub fn conditional_edge_marginal(
    mu: &EdgeMeasure,
    fixed: &[(usize, bool)],
    e: usize,
) -> Result<Rational> {
    mu.graph.endpoints(e)?;
    for &(f, _) in fixed {
        mu.graph.endpoints(f)?;
    }
    let mut mass = Rational::zero();
    let mut open_mass = Rational::zero();
    'configs: for c in mu.graph.configs() {
        for &(f, state) in fixed {
            if c.is_open(f) != state {
                continue 'configs;
            }
        }
        let p = &mu.probs[c.0 as usize];
        mass += p;
        if c.is_open(e) {
            open_mass += p;
        }
    }
    if mass.is_zero() {
        return Err(Error::NullConditioning);
    }
    Ok(open_mass / mass)
}

/// Conditions on the state of edge `e` and returns the conditional measure
/// as a measure on the corresponding minor — the contraction `g/e` when
/// conditioning on open, the deletion `g - e` when conditioning on closed —
/// together with the edge re-index map (old index to new; the conditioned
/// edge maps to `None`).
///
/// The minor's edge `i` corresponds to the old edge with the `i`-th
/// smallest surviving index, so configuration bits carry over in order.
pub fn condition_on_edge(
    mu: &EdgeMeasure,
    e: usize,
    open: bool,
) -> Result<(EdgeMeasure, Vec<Option<usize>>)> {
    let g = &mu.graph;
    g.endpoints(e)?;
    let minor = if open {
        contract_edge(g, e)?.0
    } else {
        delete_edge(g, e)?
    };
    let edge_map: Vec<Option<usize>> = (0..g.edge_count())
        .map(|i| {
            if i == e {
                None
            } else if i < e {
                Some(i)
            } else {
                Some(i - 1)
            }
        })
        .collect();

    let low_mask = (1u64 << e) - 1;
    let mut weights = Vec::with_capacity(minor.config_count() as usize);
    for t in minor.configs() {
        // Insert the conditioned bit at position e to find the source rank.
        let lifted = (t.0 & low_mask) | ((t.0 & !low_mask) << 1) | ((open as u64) << e);
        weights.push(mu.probs[lifted as usize].clone());
    }
    if weights.iter().all(Rational::is_zero) {
        return Err(Error::NullConditioning);
    }
    // Renormalization by the event's probability happens in from_weights.
    let conditional = EdgeMeasure::from_weights_with_cap(minor, weights, DEFAULT_EDGE_CAP)?;
    Ok((conditional, edge_map))
}

/// Total variation distance between two measures on the same graph:
/// half the sum of absolute probability differences.
pub fn tv_distance(a: &EdgeMeasure, b: &EdgeMeasure) -> Result<Rational> {
    if a.graph != b.graph {
        return Err(Error::IncompatibleMeasures);
    }
    let mut sum = Rational::zero();
    for (pa, pb) in a.probs.iter().zip(&b.probs) {
        sum += (pa - pb).abs();
    }
    Ok(sum / Rational::from_integer(2.into()))
}
