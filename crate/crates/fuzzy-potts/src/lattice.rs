//! The positive lattice condition and its relatives.
//!
//! Configuration space `{0,1}^E` is a distributive lattice under the
//! coordinatewise order (`meet` = AND of ranks, `join` = OR). A strictly
//! positive measure satisfying the *positive lattice condition* (PLC)
//!
//! ```text
//! mu(a) * mu(b) <= mu(a meet b) * mu(a join b)   for all a, b
//! ```
//!
//! is positively associated; the scan here checks the inequality for every
//! pair exhaustively, so it is also meaningful (sound, with witnesses) for
//! measures that are not strictly positive, where PLC is sufficient but
//! not necessary for positive association.
//!
//! Two further checks live here because they share the lattice structure:
//!
//! * [`monotone_conditional_check`] — the conditional-probability form of
//!   PLC: for every edge, conditioning on a coordinatewise larger
//!   assignment of any other edge set can only increase the conditional
//!   probability of being open. For strictly positive measures this is
//!   equivalent to PLC; the scan skips conditioning events of probability
//!   zero.
//! * [`cut_independence_check`] — given that all edges crossing a vertex
//!   cut are closed, the configurations on the two sides are independent.
//!
//! All scans report the first violation in a fixed deterministic order, so
//! witnesses are reproducible byte for byte.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_traits::{ToPrimitive, Zero};

use crate::edge_measure::EdgeMeasure;
use crate::graph::EdgeConfig;
use crate::rational::{common_numerators, Rational};
use crate::Result;

/// Outcome of a positive-lattice-condition scan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PlcVerdict {
    /// The inequality holds for every pair of configurations.
    Holds,
    /// The inequality fails; the witness is the first failing pair.
    Fails(PlcWitness),
}

impl PlcVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, PlcVerdict::Holds)
    }
}

/// An exact PLC violation: a pair of configuration ranks whose probability
/// product exceeds the product over their meet and join.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlcWitness {
    /// First rank of the violating pair (the smaller).
    pub a: u64,
    /// Second rank of the violating pair.
    pub b: u64,
    /// `mu(a) * mu(b)`.
    pub product_pair: Rational,
    /// `mu(a meet b) * mu(a join b)`, strictly smaller than `product_pair`.
    pub product_meet_join: Rational,
}

/// Scans a rank-indexed probability table for the positive lattice
/// condition, where meet and join are bitwise AND and OR of ranks. The
/// table length must be a power of two. Returns the first violating pair
/// in lexicographic order (`a` ascending, then `b`), or `None` if the
/// condition holds. Cost is `O(4^n)` pair checks for `2^n` entries.
pub(crate) fn plc_scan_table(table: &[Rational]) -> Option<PlcWitness> {
    debug_assert!(table.len().is_power_of_two());
    let n = table.len();
    let (numers, denom) = common_numerators(table);
    let witness = |a: usize, b: usize| {
        let d2 = &denom * &denom;
        Some(PlcWitness {
            a: a as u64,
            b: b as u64,
            product_pair: Rational::new(&numers[a] * &numers[b], d2.clone()),
            product_meet_join: Rational::new(&numers[a & b] * &numers[a | b], d2),
        })
    };
    // Fast path: with numerators below 2^64 the pair products fit in u128.
    if let Some(small) = numers
        .iter()
        .map(ToPrimitive::to_u64)
        .collect::<Option<Vec<u64>>>()
    {
        for a in 0..n {
            if small[a] == 0 {
                continue;
            }
            for b in (a + 1)..n {
                if a & b == a {
                    // Comparable pair: meet and join are a and b themselves.
                    continue;
                }
                if (small[a] as u128) * (small[b] as u128)
                    > (small[a & b] as u128) * (small[a | b] as u128)
                {
                    return witness(a, b);
                }
            }
        }
        return None;
    }
    for a in 0..n {
        if numers[a].is_zero() {
            continue;
        }
        for b in (a + 1)..n {
            if a & b == a {
                continue;
            }
            if &numers[a] * &numers[b] > &numers[a & b] * &numers[a | b] {
                return witness(a, b);
            }
        }
    }
    None
}

/// Checks the positive lattice condition for an edge measure.
pub fn plc_check(mu: &EdgeMeasure) -> PlcVerdict {
    match plc_scan_table(mu.probs()) {
        None => PlcVerdict::Holds,
        Some(w) => PlcVerdict::Fails(w),
    }
}

/// Outcome of the monotone-conditional scan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MonotoneVerdict {
    Holds,
    Fails(MonotoneWitness),
}

impl MonotoneVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, MonotoneVerdict::Holds)
    }
}

/// A monotonicity violation: conditioning edge `edge` on the larger
/// assignment `upper` of the edge set `conditioned_mask` gives a strictly
/// smaller open probability than conditioning on the smaller assignment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonotoneWitness {
    /// Bitmask (over edge indices) of the conditioned edge set `F`.
    pub conditioned_mask: u64,
    /// The edge whose conditional open probability drops.
    pub edge: usize,
    /// Smaller assignment on `F` (bits within `conditioned_mask`).
    pub lower_assignment: u64,
    /// Larger assignment on `F`.
    pub upper_assignment: u64,
    /// `Pr[edge open | lower_assignment]`.
    pub lower_probability: Rational,
    /// `Pr[edge open | upper_assignment]`, strictly smaller.
    pub upper_probability: Rational,
}

/// Checks that for every edge `e`, every other edge set `F`, and every
/// pair of assignments `xi <= psi` on `F` with positive probability,
///
/// ```text
/// Pr[e open | xi on F]  <=  Pr[e open | psi on F].
/// ```
///
/// For strictly positive measures this is equivalent to the positive
/// lattice condition. Conditioning events of probability zero are
/// skipped. The scan order is: `F` mask ascending, `e` ascending, `psi`
/// ascending, `xi` ascending; the first violation is returned.
pub fn monotone_conditional_check(mu: &EdgeMeasure) -> MonotoneVerdict {
    let m = mu.graph().edge_count();
    let full = EdgeConfig::full(m).0;
    for f_mask in 0..=full {
        for e in 0..m {
            if (f_mask >> e) & 1 == 1 {
                continue;
            }
            // One sweep accumulates, per assignment on F, the event mass
            // and the mass where e is also open.
            let mut by_assignment: BTreeMap<u64, (Rational, Rational)> = BTreeMap::new();
            for c in mu.graph().configs() {
                let key = c.0 & f_mask;
                let entry = by_assignment
                    .entry(key)
                    .or_insert_with(|| (Rational::zero(), Rational::zero()));
                let p = &mu.probs()[c.0 as usize];
                entry.0 += p;
                if c.is_open(e) {
                    entry.1 += p;
                }
            }
            let assignments: Vec<u64> = by_assignment.keys().copied().collect();
            for &psi in &assignments {
                let (psi_mass, psi_open) = &by_assignment[&psi];
                if psi_mass.is_zero() {
                    continue;
                }
                for &xi in &assignments {
                    if xi >= psi || xi & psi != xi {
                        continue;
                    }
                    let (xi_mass, xi_open) = &by_assignment[&xi];
                    if xi_mass.is_zero() {
                        continue;
                    }
                    // xi_open/xi_mass > psi_open/psi_mass, cross-multiplied.
                    if xi_open * psi_mass > psi_open * xi_mass {
                        return MonotoneVerdict::Fails(MonotoneWitness {
                            conditioned_mask: f_mask,
                            edge: e,
                            lower_assignment: xi,
                            upper_assignment: psi,
                            lower_probability: xi_open / xi_mass,
                            upper_probability: psi_open / psi_mass,
                        });
                    }
                }
            }
        }
    }
    MonotoneVerdict::Holds
}

/// Outcome of the cut-independence scan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CutVerdict {
    Holds,
    Fails(CutWitness),
}

impl CutVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, CutVerdict::Holds)
    }
}

/// A cut-independence violation: conditioned on all edges across the cut
/// `(S, complement)` being closed, the joint probability of one
/// configuration differs from the product of its side marginals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutWitness {
    /// Bitmask (over vertex indices) of the side `S` containing vertex 0.
    pub side_mask: u64,
    /// The configuration (all cross edges closed) where factorization fails.
    pub config: EdgeConfig,
    /// Conditional probability of `config` given the cut is closed.
    pub conditional_joint: Rational,
    /// Product of the two conditional side marginals at `config`.
    pub marginal_product: Rational,
}

/// Checks that for every vertex cut, conditioned on all crossing edges
/// being closed, the restrictions of the configuration to the two sides
/// are independent. Cuts whose closed-crossing event has probability zero
/// are skipped; loops never cross a cut. Scans sides `S` containing
/// vertex 0 in ascending mask order and configurations in ascending rank
/// order, returning the first violation.
pub fn cut_independence_check(mu: &EdgeMeasure) -> Result<CutVerdict> {
    let g = mu.graph();
    let n = g.vertex_count();
    if n >= 64 {
        // Vertex masks are u64; measures of that size cannot be built
        // under any supported edge cap anyway.
        return Err(crate::error::Error::Unsupported(
            alloc::string::String::from("cut scan supports at most 63 vertices"),
        ));
    }
    let full_vertices = (1u64 << n) - 1;
    for side_mask in 0..=full_vertices {
        if side_mask & 1 == 0 || side_mask == full_vertices {
            // Each cut is scanned once, from the side containing vertex 0.
            continue;
        }
        let mut cross = 0u64;
        let mut side_edges = 0u64;
        let mut other_edges = 0u64;
        for (i, &(u, v)) in g.edges().iter().enumerate() {
            let u_in = (side_mask >> u) & 1 == 1;
            let v_in = (side_mask >> v) & 1 == 1;
            match (u_in, v_in) {
                (true, true) => side_edges |= 1 << i,
                (false, false) => other_edges |= 1 << i,
                _ => cross |= 1 << i,
            }
        }
        // Mass of the event (all cross edges closed) and the per-side
        // marginals within it.
        let mut event_mass = Rational::zero();
        let mut side_marginal: BTreeMap<u64, Rational> = BTreeMap::new();
        let mut other_marginal: BTreeMap<u64, Rational> = BTreeMap::new();
        for c in g.configs() {
            if c.0 & cross != 0 {
                continue;
            }
            let p = &mu.probs()[c.0 as usize];
            event_mass += p;
            *side_marginal.entry(c.0 & side_edges).or_insert_with(Rational::zero) += p;
            *other_marginal.entry(c.0 & other_edges).or_insert_with(Rational::zero) += p;
        }
        if event_mass.is_zero() {
            continue;
        }
        for c in g.configs() {
            if c.0 & cross != 0 {
                continue;
            }
            // Factorization, cross-multiplied by the event mass:
            // mu(c) * mass == side[c] * other[c].
            let joint = &mu.probs()[c.0 as usize] * &event_mass;
            let product = &side_marginal[&(c.0 & side_edges)] * &other_marginal[&(c.0 & other_edges)];
            if joint != product {
                let mass_sq = &event_mass * &event_mass;
                return Ok(CutVerdict::Fails(CutWitness {
                    side_mask,
                    config: c,
                    conditional_joint: &mu.probs()[c.0 as usize] / &event_mass,
                    marginal_product: product / mass_sq,
                }));
            }
        }
    }
    Ok(CutVerdict::Holds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::edge_measure::{product_measure, random_cluster, uniform_forest};
    use crate::graph::Graph;
    use crate::rational::{integer, ratio};
    use alloc::vec;

    fn triangle() -> Graph {
        Graph::new(3, vec![(0, 1), (0, 2), (1, 2)]).unwrap()
    }

    #[test]
    fn plc_fails_below_q_one_on_the_triangle() {
        let mu = random_cluster(&triangle(), &vec![ratio(1, 2); 3], &ratio(1, 2)).unwrap();
        match plc_check(&mu) {
            PlcVerdict::Fails(w) => {
                assert_eq!((w.a, w.b), (1, 6));
                assert_eq!(w.product_pair, ratio(8, 529));
                assert_eq!(w.product_meet_join, ratio(4, 529));
            }
            PlcVerdict::Holds => panic!("expected a violation"),
        }
    }

    #[test]
    fn plc_holds_at_and_above_q_one() {
        for q in [integer(1), ratio(3, 2), integer(2), integer(4)] {
            let mu = random_cluster(&triangle(), &vec![ratio(1, 2); 3], &q).unwrap();
            assert!(plc_check(&mu).holds(), "q = {q}");
        }
    }

    #[test]
    fn plc_for_product_measures_is_tight() {
        // Independent coordinates satisfy the condition with equality.
        let mu = product_measure(&triangle(), &[ratio(1, 3), ratio(1, 2), ratio(2, 3)]).unwrap();
        assert!(plc_check(&mu).holds());
    }

    #[test]
    fn plc_fails_for_the_uniform_forest_on_the_triangle() {
        // A single edge and the complementary pair join to the full
        // triangle, which has probability zero: 1/49 > 0.
        let mu = uniform_forest(&triangle()).unwrap();
        match plc_check(&mu) {
            PlcVerdict::Fails(w) => {
                assert_eq!((w.a, w.b), (1, 6));
                assert_eq!(w.product_pair, ratio(1, 49));
                assert_eq!(w.product_meet_join, integer(0));
            }
            PlcVerdict::Holds => panic!("expected a violation"),
        }
    }

    #[test]
    fn monotone_check_agrees_with_plc_on_positive_measures() {
        let cases = [
            (ratio(1, 2), false),
            (integer(1), true),
            (integer(2), true),
            (integer(3), true),
        ];
        for (q, expect_holds) in cases {
            let mu = random_cluster(&triangle(), &vec![ratio(1, 2); 3], &q).unwrap();
            assert_eq!(plc_check(&mu).holds(), expect_holds, "plc at q = {q}");
            assert_eq!(
                monotone_conditional_check(&mu).holds(),
                expect_holds,
                "monotone at q = {q}"
            );
        }
    }

    #[test]
    fn monotone_witness_for_the_uniform_forest() {
        // Conditioning one triangle edge open makes another less likely:
        // 1/3 open given open versus 1/2 given closed.
        let mu = uniform_forest(&triangle()).unwrap();
        match monotone_conditional_check(&mu) {
            MonotoneVerdict::Fails(w) => {
                assert_eq!(w.conditioned_mask, 0b001);
                assert_eq!(w.edge, 1);
                assert_eq!(w.lower_assignment, 0);
                assert_eq!(w.upper_assignment, 0b001);
                assert_eq!(w.lower_probability, ratio(1, 2));
                assert_eq!(w.upper_probability, ratio(1, 3));
            }
            MonotoneVerdict::Holds => panic!("expected a violation"),
        }
    }

    #[test]
    fn monotone_check_on_a_path() {
        let g = Graph::new(3, vec![(0, 1), (1, 2)]).unwrap();
        let mu = random_cluster(&g, &vec![ratio(1, 2); 2], &integer(3)).unwrap();
        assert!(monotone_conditional_check(&mu).holds());
    }

    #[test]
    fn cut_independence_holds_for_cluster_weights() {
        // With all cross edges closed the component count splits across
        // the cut, so the random-cluster weight factorizes.
        let mu = random_cluster(&triangle(), &vec![ratio(1, 2); 3], &ratio(1, 2)).unwrap();
        assert!(cut_independence_check(&mu).unwrap().holds());
        let uf = uniform_forest(&triangle()).unwrap();
        assert!(cut_independence_check(&uf).unwrap().holds());
    }

    #[test]
    fn cut_independence_fails_for_correlated_components() {
        // Two disjoint edges whose states agree with probability 3/4:
        // no edge crosses the cut between the components, yet the sides
        // are dependent.
        let g = Graph::new(4, vec![(0, 1), (2, 3)]).unwrap();
        let mu = crate::edge_measure::EdgeMeasure::from_weights(
            g,
            vec![ratio(3, 8), ratio(1, 8), ratio(1, 8), ratio(3, 8)],
        )
        .unwrap();
        match cut_independence_check(&mu).unwrap() {
            CutVerdict::Fails(w) => {
                assert_eq!(w.side_mask, 0b0011);
                assert_eq!(w.config, EdgeConfig(0));
                assert_eq!(w.conditional_joint, ratio(3, 8));
                assert_eq!(w.marginal_product, ratio(1, 4));
            }
            CutVerdict::Holds => panic!("expected a violation"),
        }
    }
}
