//! Threshold reconstruction, parameter sweeps, and separating witnesses.
//!
//! Everything here drives the checkers from the other modules across
//! parameter grids and graph families:
//!
//! - [`figure1_analysis`] works out, in closed form and by brute force,
//!   when the direct edge of the two-path family becomes negatively
//!   correlated with connectivity under the uniform forest measure (the
//!   sign flips strictly after `m = 6`);
//! - [`lemma2_failure_demo`] exhibits the resulting failure of the
//!   edge/event covariance conclusion on that family;
//! - [`conjecture_probe_q_lt_1`] sweeps cluster weights below 1 looking
//!   for positive-association violations of the two-color spin measure
//!   (none is asserted: a find would be news, so the probe only reports);
//! - [`haggstrom_boundary_scan`] maps where the spin measure keeps or
//!   loses the lattice condition as `(q, alpha)` crosses the boundary
//!   `alpha * q >= 1 and (1 - alpha) * q >= 1`;
//! - [`single_property_insufficiency_search`] exhibits two toy measures
//!   proving that neither the lattice condition nor cut independence
//!   alone forces positive association of the spin measure.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::association::{
    positive_association_check_with_cap, PaVerdict, PaWitness, UPSET_ENUMERATION_CAP,
};
use crate::edge_measure::{random_cluster, uniform_forest, EdgeMeasure};
use crate::error::Error;
use crate::graph::{component_count, corpus_up_to, figure1_graph, Graph};
use crate::lattice::{cut_independence_check, plc_check, CutVerdict, PlcVerdict, PlcWitness};
use crate::rational::{pow_u, ratio, Rational, SignClass};
use crate::spin_measure::{fuzzy_potts, plc_check_spin};
use crate::Result;

/// The default graph corpus for sweeps: every connected multigraph-free
/// graph on at most 4 vertices with at most 6 edges, deterministically
/// ordered (10 graphs, from the single vertex to the complete graph).
pub fn standard_corpus() -> Vec<Graph> {
    corpus_up_to(4, 6)
}

/// Exact counts and correlation for the two-path family under the
/// uniform forest measure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Figure1Analysis {
    pub m: usize,
    /// Forest configurations: `2 * 3^m + m * 3^(m-1)`.
    pub forest_count: BigInt,
    /// Spanning trees: `2^(m-1) * (m + 2)`.
    pub tree_count: BigInt,
    /// Spanning trees containing the direct edge: `2^m`.
    pub tree_with_edge_count: BigInt,
    /// Forests containing the direct edge: `3^m`.
    pub forest_with_edge_count: BigInt,
    /// Probability that the whole graph is connected.
    pub pr_connected: Rational,
    /// Probability that the direct edge is open.
    pub pr_e_open: Rational,
    /// Covariance of the two indicators: positive up to `m = 5`, exactly
    /// zero at `m = 6`, strictly negative from `m = 7` on.
    pub covariance: Rational,
    pub sign: SignClass,
    /// Whether the closed forms were re-derived by full enumeration
    /// (done for `m <= 7`).
    pub brute_force_checked: bool,
}

/// Analyzes the two-path family at a given `m >= 1`: closed-form counts
/// for any `m`, verified against brute-force enumeration for `m <= 7`,
/// and the exact covariance between "the direct edge is open" and "the
/// configuration is connected" under the uniform forest measure.
pub fn figure1_analysis(m: usize) -> Result<Figure1Analysis> {
    if m < 1 {
        return Err(Error::ParameterOutOfRange(
            "m must be a positive integer",
        ));
    }
    let three = BigInt::from(3);
    let two = BigInt::from(2);
    let pow3_m1 = three.pow(m as u32 - 1);
    let pow3_m = &pow3_m1 * &three;
    let pow2_m1 = two.pow(m as u32 - 1);
    let forest_count = BigInt::from(2) * &pow3_m + BigInt::from(m as u64) * &pow3_m1;
    let tree_count = &pow2_m1 * BigInt::from(m as u64 + 2);
    let tree_with_edge_count = &pow2_m1 * &two;
    let forest_with_edge_count = pow3_m;

    let brute_force_checked = m <= 7;
    if brute_force_checked {
        let (g, _x, e) = figure1_graph(m)?;
        let mut forests = BigInt::from(0);
        let mut trees = BigInt::from(0);
        let mut trees_with_e = BigInt::from(0);
        let mut forests_with_e = BigInt::from(0);
        for c in g.configs() {
            if !crate::graph::is_forest(&g, c)? {
                continue;
            }
            forests += 1;
            let open = c.is_open(e);
            if open {
                forests_with_e += 1;
            }
            if component_count(&g, c)? == 1 {
                trees += 1;
                if open {
                    trees_with_e += 1;
                }
            }
        }
        if forests != forest_count
            || trees != tree_count
            || trees_with_e != tree_with_edge_count
            || forests_with_e != forest_with_edge_count
        {
            return Err(Error::Unsupported(alloc::format!(
                "internal consistency failure: enumeration found {forests}/{trees}/{trees_with_e}/{forests_with_e} \
                 forests/trees/trees-with-edge/forests-with-edge at m = {m}, closed forms disagree"
            )));
        }
    }

    let pr_connected = Rational::new(tree_count.clone(), forest_count.clone());
    let pr_e_open = Rational::new(forest_with_edge_count.clone(), forest_count.clone());
    let pr_both = Rational::new(tree_with_edge_count.clone(), forest_count.clone());
    let covariance = pr_both - &pr_connected * &pr_e_open;
    let sign = SignClass::of(&covariance);
    Ok(Figure1Analysis {
        m,
        forest_count,
        tree_count,
        tree_with_edge_count,
        forest_with_edge_count,
        pr_connected,
        pr_e_open,
        covariance,
        sign,
        brute_force_checked,
    })
}

/// The covariance conclusion evaluated on the two-path family under the
/// uniform forest measure, for the event "every spin is plus".
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FailureDemo {
    pub m: usize,
    pub alpha: Rational,
    /// `Cov(1[all spins plus], 1[direct edge open] | spin at x is plus)`,
    /// exactly. Strictly negative for `m = 7` at small `alpha`.
    pub covariance: Rational,
    pub sign: SignClass,
    /// `Pr(all plus | spin at x is plus) - Pr(connected)`.
    pub gap: Rational,
    /// The sanity bound `|gap| <= alpha`: the all-plus event is forced by
    /// connectivity and costs at most a factor `alpha` otherwise.
    pub gap_within_alpha: bool,
}

/// Evaluates, on the two-path family with `m` paths under the uniform
/// forest measure colored with bias `alpha`, the exact covariance between
/// the all-plus spin event and the direct edge's state conditioned on the
/// spin at `x` being plus — the quantity whose sign the coupling argument
/// controls for cluster weights at least 1, and which goes negative here.
pub fn lemma2_failure_demo(m: usize, alpha: &Rational) -> Result<FailureDemo> {
    if m < 1 {
        return Err(Error::ParameterOutOfRange(
            "m must be a positive integer",
        ));
    }
    if !alpha.is_positive() || alpha >= &ratio(1, 1) {
        return Err(Error::ParameterOutOfRange(
            "alpha must be strictly between 0 and 1",
        ));
    }
    let (g, _x, e) = figure1_graph(m)?;
    let mu = uniform_forest(&g)?;

    // With the cluster of x conditioned plus, Pr(all plus | config) is
    // alpha^(k-1), and the spin at x is independent of the configuration
    // (each cluster flips a coin), so the conditional covariance reduces
    // to sums of alpha^k over the forest configurations.
    let mut weighted_all = Rational::from_integer(0.into());
    let mut weighted_all_open = Rational::from_integer(0.into());
    let mut pr_open = Rational::from_integer(0.into());
    let mut pr_connected = Rational::from_integer(0.into());
    for c in g.configs() {
        let p = &mu.probs()[c.0 as usize];
        if p.is_zero() {
            continue;
        }
        let k = component_count(&g, c)?;
        let alpha_k = pow_u(alpha, k);
        weighted_all += p * &alpha_k;
        if c.is_open(e) {
            weighted_all_open += p * &alpha_k;
            pr_open += p;
        }
        if k == 1 {
            pr_connected += p;
        }
    }
    let covariance = &weighted_all_open / alpha - (&weighted_all / alpha) * &pr_open;
    let gap = &weighted_all / alpha - pr_connected;
    let gap_within_alpha = gap.abs() <= *alpha;
    let sign = SignClass::of(&covariance);
    Ok(FailureDemo {
        m,
        alpha: alpha.clone(),
        covariance,
        sign,
        gap,
        gap_within_alpha,
    })
}

/// A positive-association violation found by the parameter sweep.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbeViolation {
    /// Index into the corpus handed to the probe.
    pub graph_index: usize,
    pub q: Rational,
    pub p: Rational,
    pub alpha: Rational,
    pub witness: PaWitness,
}

/// Sweeps the corpus over every `(q, p, alpha)` combination, checking
/// positive association of the two-color spin measure built over the
/// random-cluster measure, and reports every violation in scan order
/// (graph, then `q`, then `p`, then `alpha`).
///
/// For cluster weights at least 1 positive association is guaranteed, so
/// the sweep finds nothing; below 1 it is an open question, so violations
/// are reported, never asserted — an actual find would be significant, and
/// the scan order makes reruns bit-for-bit reproducible.
pub fn conjecture_probe_q_lt_1(
    corpus: &[Graph],
    q_values: &[Rational],
    p_values: &[Rational],
    alpha_values: &[Rational],
) -> Result<Vec<ProbeViolation>> {
    let mut out = Vec::new();
    for (graph_index, g) in corpus.iter().enumerate() {
        for q in q_values {
            for p in p_values {
                let edge_probs = alloc::vec![p.clone(); g.edge_count()];
                let mu = random_cluster(g, &edge_probs, q)?;
                for alpha in alpha_values {
                    let nu = fuzzy_potts(&mu, alpha)?;
                    if let PaVerdict::Fails(witness) =
                        positive_association_check_with_cap(nu.probs(), UPSET_ENUMERATION_CAP)?
                    {
                        out.push(ProbeViolation {
                            graph_index,
                            q: q.clone(),
                            p: p.clone(),
                            alpha: alpha.clone(),
                            witness,
                        });
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Default probe grid: cluster weights below 1, interior edge
/// probabilities and coloring biases.
pub fn default_probe_grid() -> (Vec<Rational>, Vec<Rational>, Vec<Rational>) {
    (
        alloc::vec![ratio(1, 4), ratio(1, 2), ratio(3, 4), ratio(9, 10)],
        alloc::vec![ratio(1, 3), ratio(1, 2), ratio(2, 3)],
        alloc::vec![ratio(1, 4), ratio(1, 2), ratio(3, 4)],
    )
}

/// The first lattice-condition failure found in one boundary cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryFailure {
    /// Index into the corpus handed to the scan.
    pub graph_index: usize,
    /// The edge probability at which the failure appeared.
    pub p: Rational,
    pub witness: PlcWitness,
}

/// One `(q, alpha)` cell of the boundary scan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryCell {
    pub q: Rational,
    pub alpha: Rational,
    /// Whether `alpha * q >= 1` and `(1 - alpha) * q >= 1` — the product
    /// condition under which the spin measure provably satisfies the
    /// lattice condition.
    pub condition_met: bool,
    /// Whether the lattice condition held for every corpus graph and
    /// every edge probability in this cell.
    pub holds_everywhere: bool,
    /// The first failure in scan order (graph, then edge probability),
    /// when one exists.
    pub first_failure: Option<BoundaryFailure>,
}

/// Checks the lattice condition of the two-color spin measure on every
/// corpus graph, for every `(q, alpha)` cell of the grid and every edge
/// probability. Cells satisfying the product condition are expected to
/// hold everywhere (callers assert this); cells violating it are
/// expected to exhibit at least one failure, recorded with its witness.
pub fn haggstrom_boundary_scan(
    corpus: &[Graph],
    qa_grid: &[(Rational, Rational)],
    p_values: &[Rational],
) -> Result<Vec<BoundaryCell>> {
    let one = ratio(1, 1);
    let mut out = Vec::with_capacity(qa_grid.len());
    for (q, alpha) in qa_grid {
        let condition_met = alpha * q >= one && (&one - alpha) * q >= one;
        let mut first_failure = None;
        'graphs: for (graph_index, g) in corpus.iter().enumerate() {
            for p in p_values {
                let edge_probs = alloc::vec![p.clone(); g.edge_count()];
                let mu = random_cluster(g, &edge_probs, q)?;
                let nu = fuzzy_potts(&mu, alpha)?;
                if let PlcVerdict::Fails(witness) = plc_check_spin(&nu)? {
                    first_failure = Some(BoundaryFailure {
                        graph_index,
                        p: p.clone(),
                        witness,
                    });
                    break 'graphs;
                }
            }
        }
        out.push(BoundaryCell {
            q: q.clone(),
            alpha: alpha.clone(),
            condition_met,
            holds_everywhere: first_failure.is_none(),
            first_failure,
        });
    }
    Ok(out)
}

/// Default boundary grid: cluster weights {1, 2, 4} crossed with
/// coloring biases {1/10, 1/4, 1/2, 3/4, 9/10}.
pub fn default_boundary_grid() -> Vec<(Rational, Rational)> {
    let qs = [ratio(1, 1), ratio(2, 1), ratio(4, 1)];
    let alphas = [
        ratio(1, 10),
        ratio(1, 4),
        ratio(1, 2),
        ratio(3, 4),
        ratio(9, 10),
    ];
    let mut out = Vec::with_capacity(qs.len() * alphas.len());
    for q in &qs {
        for alpha in &alphas {
            out.push((q.clone(), alpha.clone()));
        }
    }
    out
}

/// Default edge probabilities for the boundary scan.
pub fn default_boundary_edge_probabilities() -> Vec<Rational> {
    alloc::vec![ratio(1, 3), ratio(1, 2), ratio(2, 3)]
}

/// A toy edge measure separating the two sufficient properties: exactly
/// one of them holds, yet the two-color spin measure built over it is
/// not positively associated.
#[derive(Clone, Debug)]
pub struct InsufficiencyWitness {
    pub measure: EdgeMeasure,
    pub alpha: Rational,
    /// Lattice-condition verdict for the edge measure.
    pub plc: PlcVerdict,
    /// Cut-independence verdict for the edge measure.
    pub cut: CutVerdict,
    /// Positive-association verdict for the resulting spin measure —
    /// fails for both witnesses.
    pub pa: PaVerdict,
    /// The spin measure's full probability table, rank-indexed.
    pub spin_table: Vec<Rational>,
}

/// Produces the two separating witnesses, each verified exactly by the
/// three checkers at construction time:
///
/// 1. Two disjoint edges whose states agree more often than independent
///    coins: the lattice condition holds, cut independence fails across
///    the empty cut, and the spin measure is not positively associated.
/// 2. A four-edge star whose edge set is one of two disjoint pairs with
///    equal probability: cut independence holds (every side of every cut
///    of a star is edge-free), the lattice condition fails on the two
///    incomparable atoms, and the spin measure again fails positive
///    association. No graph with three or fewer edges admits such a
///    witness — measures there that fail the lattice condition while
///    keeping cut independence all leave the spin measure positively
///    associated — so four edges is minimal for this direction.
pub fn single_property_insufficiency_search() -> Result<(InsufficiencyWitness, InsufficiencyWitness)>
{
    let half = ratio(1, 2);

    // Witness 1: correlated disjoint edges.
    let g1 = Graph::new(4, alloc::vec![(0, 1), (2, 3)])?;
    let mu1 = EdgeMeasure::from_weights(
        g1,
        alloc::vec![ratio(3, 8), ratio(1, 8), ratio(1, 8), ratio(3, 8)],
    )?;
    let first = verify_insufficiency_witness(mu1, &half)?;

    // Witness 2: a star opened as one of two disjoint leaf pairs.
    let g2 = Graph::new(5, alloc::vec![(0, 1), (0, 2), (0, 3), (0, 4)])?;
    let mut weights = alloc::vec![Rational::from_integer(0.into()); 16];
    weights[0b0011] = half.clone();
    weights[0b1100] = half.clone();
    let mu2 = EdgeMeasure::from_weights(g2, weights)?;
    let second = verify_insufficiency_witness(mu2, &half)?;

    Ok((first, second))
}

fn verify_insufficiency_witness(
    measure: EdgeMeasure,
    alpha: &Rational,
) -> Result<InsufficiencyWitness> {
    let plc = plc_check(&measure);
    let cut = cut_independence_check(&measure)?;
    let nu = fuzzy_potts(&measure, alpha)?;
    let pa = positive_association_check_with_cap(nu.probs(), UPSET_ENUMERATION_CAP)?;
    Ok(InsufficiencyWitness {
        measure,
        alpha: alpha.clone(),
        plc,
        cut,
        pa,
        spin_table: nu.probs().to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::association::correlation;
    use crate::association::UpSet;
    use crate::rational::integer;
    use alloc::vec;

    #[test]
    fn family_analysis_matches_hand_counts() {
        let a = figure1_analysis(1).unwrap();
        assert_eq!(a.forest_count, BigInt::from(7));
        assert_eq!(a.tree_count, BigInt::from(3));
        assert_eq!(a.tree_with_edge_count, BigInt::from(2));
        assert_eq!(a.forest_with_edge_count, BigInt::from(3));
        assert_eq!(a.pr_connected, ratio(3, 7));
        assert_eq!(a.pr_e_open, ratio(3, 7));
        assert_eq!(a.covariance, ratio(5, 49));
        assert!(a.brute_force_checked);
    }

    #[test]
    fn family_covariance_crosses_zero_after_six() {
        let expected = [
            (1, ratio(5, 49), SignClass::Positive),
            (2, ratio(1, 24), SignClass::Positive),
            (3, ratio(4, 243), SignClass::Positive),
            (4, ratio(4, 675), SignClass::Positive),
            (5, ratio(16, 9801), SignClass::Positive),
            (6, integer(0), SignClass::Zero),
            (7, ratio(-64, 123_201), SignClass::Negative),
        ];
        for (m, cov, sign) in expected {
            let a = figure1_analysis(m).unwrap();
            assert_eq!(a.covariance, cov, "m = {m}");
            assert_eq!(a.sign, sign, "m = {m}");
            assert!(a.brute_force_checked);
        }
    }

    #[test]
    fn family_analysis_beyond_enumeration_uses_closed_forms() {
        let a = figure1_analysis(8).unwrap();
        assert!(!a.brute_force_checked);
        assert_eq!(a.covariance, ratio(-64, 107_163));
        assert_eq!(a.sign, SignClass::Negative);
        assert!(figure1_analysis(0).is_err());
    }

    #[test]
    fn failure_demo_exhibits_the_sign_flip() {
        let small = lemma2_failure_demo(1, &ratio(1, 100)).unwrap();
        assert_eq!(small.covariance, ratio(49_797, 490_000));
        assert_eq!(small.sign, SignClass::Positive);
        assert!(small.gap_within_alpha);

        let big = lemma2_failure_demo(7, &ratio(1, 100)).unwrap();
        assert_eq!(
            big.covariance,
            ratio(-868_671_843_968_907, 1_690_000_000_000_000_000)
        );
        assert_eq!(big.sign, SignClass::Negative);
        assert_eq!(
            big.gap,
            crate::rational::parse_rational("21647071827672389/10530000000000000000").unwrap()
        );
        assert!(big.gap_within_alpha);

        let tiny_alpha = lemma2_failure_demo(7, &ratio(1, 1000)).unwrap();
        assert_eq!(tiny_alpha.sign, SignClass::Negative);
        assert!(tiny_alpha.gap_within_alpha);
    }

    #[test]
    fn failure_demo_validates_parameters() {
        assert!(lemma2_failure_demo(0, &ratio(1, 2)).is_err());
        assert!(lemma2_failure_demo(1, &integer(1)).is_err());
        assert!(lemma2_failure_demo(1, &integer(0)).is_err());
    }

    #[test]
    fn probe_reports_nothing_on_a_single_edge() {
        let corpus = vec![Graph::new(2, vec![(0, 1)]).unwrap()];
        let violations = conjecture_probe_q_lt_1(
            &corpus,
            &[ratio(1, 2), integer(1)],
            &[ratio(1, 2)],
            &[ratio(1, 2)],
        )
        .unwrap();
        assert!(violations.is_empty());
    }

    #[test]
    fn probe_is_reproducible() {
        let corpus = corpus_up_to(3, 3);
        let (qs, ps, alphas) = (
            vec![ratio(1, 2), ratio(9, 10)],
            vec![ratio(1, 2)],
            vec![ratio(1, 4), ratio(1, 2)],
        );
        let a = conjecture_probe_q_lt_1(&corpus, &qs, &ps, &alphas).unwrap();
        let b = conjecture_probe_q_lt_1(&corpus, &qs, &ps, &alphas).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn boundary_scan_matches_the_product_condition() {
        let corpus = standard_corpus();
        let cells = haggstrom_boundary_scan(
            &corpus,
            &default_boundary_grid(),
            &default_boundary_edge_probabilities(),
        )
        .unwrap();
        assert_eq!(cells.len(), 15);
        let mut held = 0;
        for cell in &cells {
            if cell.condition_met {
                held += 1;
                assert!(
                    cell.holds_everywhere,
                    "condition-satisfying cell (q={}, alpha={}) must hold",
                    cell.q, cell.alpha
                );
            } else {
                assert!(
                    !cell.holds_everywhere,
                    "violated cell (q={}, alpha={}) should exhibit a failure",
                    cell.q, cell.alpha
                );
                let failure = cell.first_failure.as_ref().unwrap();
                // Every violated cell first fails on the 4-cycle at the
                // smallest edge probability.
                assert_eq!(failure.graph_index, 7);
                assert_eq!(corpus[7].edge_count(), 4);
                assert_eq!(failure.p, ratio(1, 3));
            }
        }
        assert_eq!(held, 4);

        // Frozen witness detail for the (q=1, alpha=1/2) cell.
        let cell = cells
            .iter()
            .find(|c| c.q == integer(1) && c.alpha == ratio(1, 2))
            .unwrap();
        let witness = &cell.first_failure.as_ref().unwrap().witness;
        assert_eq!((witness.a, witness.b), (1, 8));
        assert_eq!(witness.product_pair, ratio(16, 6561));
        assert_eq!(witness.product_meet_join, ratio(31, 13122));
    }

    #[test]
    fn insufficiency_witnesses_separate_the_properties() {
        let (first, second) = single_property_insufficiency_search().unwrap();

        assert_eq!(first.measure.graph().edge_count(), 2);
        assert!(first.plc.holds());
        assert!(!matches!(first.cut, CutVerdict::Holds));
        assert!(!first.pa.holds());
        let a_mask: u64 = (0..16u64)
            .filter(|r| r & 0b0011 != 0)
            .fold(0, |acc, r| acc | (1 << r));
        let a = UpSet::new(4, a_mask).unwrap();
        let b = UpSet::principal(4, 0b1100).unwrap();
        assert_eq!(
            correlation(&first.spin_table, &a, &b).unwrap(),
            ratio(-1, 128)
        );

        assert_eq!(second.measure.graph().edge_count(), 4);
        assert!(!second.plc.holds());
        assert!(matches!(second.cut, CutVerdict::Holds));
        assert!(!second.pa.holds());
        let a2 = UpSet::principal(5, 0b00110).unwrap();
        let b2 = UpSet::principal(5, 0b11000).unwrap();
        assert_eq!(
            correlation(&second.spin_table, &a2, &b2).unwrap(),
            ratio(-1, 64)
        );
    }
}
