//! The acceptance suite behind the `corpus` command.
//!
//! Ten criteria, each an independent exhaustive computation over the
//! standard corpus (every connected simple graph with at most 4 vertices
//! and 6 edges) or the two-path family. A criterion passes only when every
//! instance it scans satisfies the property exactly; failures carry the
//! first offending instance in the detail line. All arithmetic is rational
//! and all expected constants are exact.

use fuzzy_potts::association::{enumerate_upsets, positive_association_check, PaVerdict};
use fuzzy_potts::coupling::{build_coupling, per_leaf_event_monotonicity, verify_coupling};
use fuzzy_potts::edge_measure::{condition_on_edge, random_cluster};
use fuzzy_potts::explorer::{
    default_boundary_edge_probabilities, default_boundary_grid, default_probe_grid,
    figure1_analysis, haggstrom_boundary_scan, lemma2_failure_demo, standard_corpus,
};
use fuzzy_potts::graph::Graph;
use fuzzy_potts::lattice::{plc_check, PlcVerdict};
use fuzzy_potts::rational::{exact_string, integer, parse_rational, ratio, SignClass};
use fuzzy_potts::spin_measure::{
    divide_and_color, fuzzy_potts, partition_measure_from_edge_measure, potts_gibbs,
};
use fuzzy_potts::Rational;

use crate::commands::{self, PSpec};
use crate::graphs::family_graph;
use crate::report::Format;
use crate::Caps;

/// Outcome of one criterion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriterionResult {
    pub number: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn criterion(
    number: usize,
    name: &'static str,
    body: impl FnOnce() -> Result<String, String>,
) -> CriterionResult {
    match body() {
        Ok(detail) => CriterionResult {
            number,
            name,
            passed: true,
            detail,
        },
        Err(detail) => CriterionResult {
            number,
            name,
            passed: false,
            detail,
        },
    }
}

fn grid_qs() -> Vec<Rational> {
    vec![integer(1), ratio(3, 2), integer(2), integer(4)]
}

fn grid_ps() -> Vec<Rational> {
    vec![ratio(1, 3), ratio(1, 2), ratio(2, 3)]
}

fn grid_alphas() -> Vec<Rational> {
    vec![ratio(1, 4), ratio(1, 2), ratio(3, 4)]
}

fn triangle() -> Graph {
    Graph::new(3, vec![(0, 1), (0, 2), (1, 2)]).expect("triangle is well-formed")
}

fn three_path() -> Graph {
    Graph::new(3, vec![(0, 1), (1, 2)]).expect("path is well-formed")
}

/// Criterion 1: the colored measure of every corpus random-cluster measure
/// with cluster weight at least 1 is positively associated, for all grid
/// parameters, verified over every up-set pair.
pub fn spin_association_grid() -> CriterionResult {
    criterion(
        1,
        "positive association of the colored measure across the corpus grid",
        || {
            let corpus = standard_corpus();
            let mut checked = 0usize;
            for (gi, g) in corpus.iter().enumerate() {
                for q in grid_qs() {
                    for p in grid_ps() {
                        let probs = vec![p.clone(); g.edge_count()];
                        let mu = random_cluster(g, &probs, &q)
                            .map_err(|e| format!("graph {gi}: {e}"))?;
                        for alpha in grid_alphas() {
                            let nu = fuzzy_potts(&mu, &alpha)
                                .map_err(|e| format!("graph {gi}: {e}"))?;
                            let verdict = positive_association_check(nu.probs())
                                .map_err(|e| format!("graph {gi}: {e}"))?;
                            if let PaVerdict::Fails(w) = verdict {
                                return Err(format!(
                                    "graph {gi}, q={}, p={}, alpha={}: covariance {}",
                                    exact_string(&q),
                                    exact_string(&p),
                                    exact_string(&alpha),
                                    exact_string(&w.covariance)
                                ));
                            }
                            checked += 1;
                        }
                    }
                }
            }
            Ok(format!(
                "{checked} colored measures ({} graphs x 4 cluster weights x 3 edge probabilities x 3 biases), every up-set pair nonnegatively correlated",
                corpus.len()
            ))
        },
    )
}

/// Criterion 2: the lattice condition holds for every grid random-cluster
/// measure (cluster weight at least 1) and fails, with the frozen witness,
/// for the triangle at p = 1/2 below cluster weight 1.
pub fn edge_lattice_condition_grid() -> CriterionResult {
    criterion(
        2,
        "lattice condition: holds at cluster weight 1 and above, fails below",
        || {
            let corpus = standard_corpus();
            let mut held = 0usize;
            for (gi, g) in corpus.iter().enumerate() {
                for q in grid_qs() {
                    for p in grid_ps() {
                        let probs = vec![p.clone(); g.edge_count()];
                        let mu = random_cluster(g, &probs, &q)
                            .map_err(|e| format!("graph {gi}: {e}"))?;
                        if let PlcVerdict::Fails(w) = plc_check(&mu) {
                            return Err(format!(
                                "graph {gi}, q={}, p={}: lattice condition fails at ranks ({}, {})",
                                exact_string(&q),
                                exact_string(&p),
                                w.a,
                                w.b
                            ));
                        }
                        held += 1;
                    }
                }
            }

            let probs = vec![ratio(1, 2); 3];
            let below = random_cluster(&triangle(), &probs, &ratio(1, 2))
                .map_err(|e| e.to_string())?;
            match plc_check(&below) {
                PlcVerdict::Holds => Err(
                    "triangle at p=1/2, cluster weight 1/2 unexpectedly satisfies the lattice condition"
                        .to_string(),
                ),
                PlcVerdict::Fails(w) => {
                    let want_pair = ratio(8, 529);
                    let want_meet_join = ratio(4, 529);
                    if (w.a, w.b) != (1, 6)
                        || w.product_pair != want_pair
                        || w.product_meet_join != want_meet_join
                    {
                        return Err(format!(
                            "unexpected witness: ranks ({}, {}), products {} and {}",
                            w.a,
                            w.b,
                            exact_string(&w.product_pair),
                            exact_string(&w.product_meet_join)
                        ));
                    }
                    Ok(format!(
                        "{held} measures hold; triangle at p=1/2, cluster weight 1/2 fails at ranks (1, 6) with 8/529 > 4/529"
                    ))
                }
            }
        },
    )
}

/// Criterion 3: conditioning a random-cluster measure on one edge's state
/// equals the random-cluster measure of the corresponding minor, as exact
/// tables, across the corpus and the full parameter grid.
pub fn conditioning_matches_minor_measure() -> CriterionResult {
    criterion(
        3,
        "single-edge conditioning equals the minor's random-cluster measure",
        || {
            let corpus = standard_corpus();
            let mut compared = 0usize;
            for (gi, g) in corpus.iter().enumerate() {
                if g.edge_count() == 0 {
                    continue;
                }
                for q in grid_qs() {
                    for p in grid_ps() {
                        let probs = vec![p.clone(); g.edge_count()];
                        let mu = random_cluster(g, &probs, &q)
                            .map_err(|e| format!("graph {gi}: {e}"))?;
                        for e in 0..g.edge_count() {
                            for open in [false, true] {
                                let (cond, _map) = condition_on_edge(&mu, e, open)
                                    .map_err(|err| format!("graph {gi}, edge {e}: {err}"))?;
                                let minor_probs =
                                    vec![p.clone(); cond.graph().edge_count()];
                                let direct = random_cluster(cond.graph(), &minor_probs, &q)
                                    .map_err(|err| format!("graph {gi}, edge {e}: {err}"))?;
                                if cond.probs() != direct.probs() {
                                    return Err(format!(
                                        "graph {gi}, edge {e}, open={open}, q={}, p={}: tables differ",
                                        exact_string(&q),
                                        exact_string(&p)
                                    ));
                                }
                                compared += 1;
                            }
                        }
                    }
                }
            }
            Ok(format!(
                "{compared} conditionings match the minor's measure exactly (both edge states, full parameter grid)"
            ))
        },
    )
}

/// Criterion 4: for every corpus graph, incident (vertex, edge) pair, and
/// cluster weight in {1, 2}, the revelation coupling verifies exactly
/// (marginals, domination, off-cluster agreement) and every leaf is
/// monotone for every increasing spin event at bias 1/2.
pub fn coupling_grid() -> CriterionResult {
    criterion(
        4,
        "coupling verification and per-leaf event monotonicity across the corpus",
        || {
            let corpus = standard_corpus();
            let mut verified = 0usize;
            for (gi, g) in corpus.iter().enumerate() {
                if g.edge_count() == 0 {
                    continue;
                }
                let probs = vec![ratio(1, 2); g.edge_count()];
                for q in [integer(1), integer(2)] {
                    for e in 0..g.edge_count() {
                        let (u, v) = g
                            .endpoints(e)
                            .map_err(|err| format!("graph {gi}: {err}"))?;
                        let endpoints = if u == v { vec![u] } else { vec![u, v] };
                        for x in endpoints {
                            let context = format!(
                                "graph {gi}, edge {e}, vertex {x}, q={}",
                                exact_string(&q)
                            );
                            let cd = build_coupling(g, &probs, &q, e, x)
                                .map_err(|err| format!("{context}: {err}"))?;
                            let report = verify_coupling(&cd)
                                .map_err(|err| format!("{context}: {err}"))?;
                            if !report.all_hold() {
                                return Err(format!(
                                    "{context}: verification failed ({report:?})"
                                ));
                            }
                            if let Some(violation) = per_leaf_event_monotonicity(&cd)
                                .map_err(|err| format!("{context}: {err}"))?
                            {
                                return Err(format!(
                                    "{context}: leaf {} not monotone for event mask {:#x}",
                                    violation.leaf_index,
                                    violation.event.members_mask()
                                ));
                            }
                            verified += 1;
                        }
                    }
                }
            }
            Ok(format!(
                "{verified} couplings: probabilities sum to one, both conditional marginals exact, domination and off-cluster agreement on every leaf, and per-leaf monotonicity for all up-sets"
            ))
        },
    )
}

/// Criterion 5: on the two-path family the covariance between
/// connectedness and the direct edge is positive through width 5, exactly
/// zero at 6, and exactly -64/123201 at 7, with closed-form counts equal
/// to full enumeration throughout.
pub fn two_path_sign_threshold() -> CriterionResult {
    criterion(
        5,
        "two-path covariance crosses zero after width six",
        || {
            let expected = [
                ratio(5, 49),
                ratio(1, 24),
                ratio(4, 243),
                ratio(4, 675),
                ratio(16, 9801),
                integer(0),
                ratio(-64, 123201),
            ];
            for (i, want) in expected.iter().enumerate() {
                let m = i + 1;
                let analysis =
                    figure1_analysis(m).map_err(|e| format!("width {m}: {e}"))?;
                if !analysis.brute_force_checked {
                    return Err(format!(
                        "width {m}: enumeration cross-check did not run"
                    ));
                }
                if &analysis.covariance != want {
                    return Err(format!(
                        "width {m}: covariance {} differs from expected {}",
                        exact_string(&analysis.covariance),
                        exact_string(want)
                    ));
                }
                let want_sign = match m {
                    6 => SignClass::Zero,
                    7 => SignClass::Negative,
                    _ => SignClass::Positive,
                };
                if analysis.sign != want_sign {
                    return Err(format!(
                        "width {m}: sign {} instead of {}",
                        analysis.sign.name(),
                        want_sign.name()
                    ));
                }
            }
            Ok(
                "covariances 5/49, 1/24, 4/243, 4/675, 16/9801, 0, -64/123201 for widths 1..7; enumeration equals the closed forms at every width"
                    .to_string(),
            )
        },
    )
}

/// Criterion 6: at width 7 and coloring bias 1/100, the covariance of the
/// all-plus event with the direct edge, conditioned on a plus spin at the
/// hub, is strictly negative (exact value frozen).
pub fn two_path_conditional_failure() -> CriterionResult {
    criterion(
        6,
        "conditional covariance goes negative at width seven, bias 1/100",
        || {
            let demo = lemma2_failure_demo(7, &ratio(1, 100)).map_err(|e| e.to_string())?;
            let want = parse_rational("-868671843968907/1690000000000000000")
                .map_err(|e| e.to_string())?;
            if demo.sign != SignClass::Negative {
                return Err(format!("sign is {}", demo.sign.name()));
            }
            if demo.covariance != want {
                return Err(format!(
                    "covariance {} differs from the frozen value",
                    exact_string(&demo.covariance)
                ));
            }
            if !demo.gap_within_alpha {
                return Err("decomposition gap fell outside [0, alpha]".to_string());
            }
            Ok(format!(
                "covariance {} < 0 between the all-plus event and the direct edge",
                exact_string(&demo.covariance)
            ))
        },
    )
}

/// Criterion 7: the q-state Potts Gibbs measure equals divide-and-color
/// over the random-cluster partition, exactly, for 2 and 3 states on the
/// triangle and the three-vertex path at p = 1/2.
pub fn potts_divide_and_color_identity() -> CriterionResult {
    criterion(
        7,
        "Potts Gibbs equals divide-and-color over the cluster partition",
        || {
            let half = ratio(1, 2);
            for (label, g) in [("triangle", triangle()), ("three-path", three_path())] {
                let probs = vec![half.clone(); g.edge_count()];
                for states in [2usize, 3] {
                    let context = format!("{label}, {states} states");
                    let gibbs = potts_gibbs(&g, &probs, states)
                        .map_err(|e| format!("{context}: {e}"))?;
                    let mu = random_cluster(&g, &probs, &integer(states as i64))
                        .map_err(|e| format!("{context}: {e}"))?;
                    let pm = partition_measure_from_edge_measure(&mu)
                        .map_err(|e| format!("{context}: {e}"))?;
                    let beta = vec![ratio(1, states as i64); states];
                    let colored = divide_and_color(&pm, &beta)
                        .map_err(|e| format!("{context}: {e}"))?;
                    if gibbs.probs() != colored.probs() {
                        return Err(format!("{context}: tables differ"));
                    }
                }
            }
            Ok(
                "exact table equality for 2 and 3 states on the triangle and the three-vertex path at p = 1/2"
                    .to_string(),
            )
        },
    )
}

/// Criterion 8: across the default (q, alpha) grid, the colored measure's
/// lattice condition holds corpus-wide exactly when both alpha*q and
/// (1-alpha)*q are at least 1; every other cell exhibits a failure — at
/// which positive association nevertheless still holds.
pub fn spin_lattice_boundary() -> CriterionResult {
    criterion(
        8,
        "colored lattice condition matches the product threshold, with association intact",
        || {
            let corpus = standard_corpus();
            let cells = haggstrom_boundary_scan(
                &corpus,
                &default_boundary_grid(),
                &default_boundary_edge_probabilities(),
            )
            .map_err(|e| e.to_string())?;
            let mut met = 0usize;
            let mut violated = 0usize;
            let mut target_seen = false;
            for cell in &cells {
                let cell_name = format!(
                    "cell q={}, alpha={}",
                    exact_string(&cell.q),
                    exact_string(&cell.alpha)
                );
                if cell.condition_met {
                    met += 1;
                    if !cell.holds_everywhere {
                        return Err(format!("{cell_name}: condition met but a failure exists"));
                    }
                } else {
                    violated += 1;
                    let failure = cell.first_failure.as_ref().ok_or(format!(
                        "{cell_name}: condition not met yet no corpus graph fails"
                    ))?;
                    let g = &corpus[failure.graph_index];
                    let probs = vec![failure.p.clone(); g.edge_count()];
                    let mu = random_cluster(g, &probs, &cell.q)
                        .map_err(|e| format!("{cell_name}: {e}"))?;
                    let nu = fuzzy_potts(&mu, &cell.alpha)
                        .map_err(|e| format!("{cell_name}: {e}"))?;
                    let pa = positive_association_check(nu.probs())
                        .map_err(|e| format!("{cell_name}: {e}"))?;
                    if !pa.holds() {
                        return Err(format!(
                            "{cell_name}: positive association fails at the same instance (graph {})",
                            failure.graph_index
                        ));
                    }
                    if cell.q == integer(2) && cell.alpha == ratio(9, 10) {
                        target_seen = true;
                    }
                }
            }
            if !target_seen {
                return Err(
                    "the cell q=2, alpha=9/10 did not appear among the violated cells".to_string(),
                );
            }
            Ok(format!(
                "{met} threshold-satisfying cells hold corpus-wide; all {violated} others fail somewhere (q=2, alpha=9/10 included) while positive association holds at each failing instance"
            ))
        },
    )
}

/// Criterion 9: up-set counts over 2, 3, 4 coordinates are 6, 20, 168.
pub fn upset_counts() -> CriterionResult {
    criterion(9, "up-set counts match the monotone-function ladder", || {
        for (n, want) in [(2usize, 6usize), (3, 20), (4, 168)] {
            let got = enumerate_upsets(n).map_err(|e| e.to_string())?.len();
            if got != want {
                return Err(format!("{n} coordinates: {got} up-sets, expected {want}"));
            }
        }
        Ok("6, 20, and 168 up-sets over 2, 3, and 4 coordinates".to_string())
    })
}

/// Criterion 10: repeating a run produces byte-identical reports in every
/// format. Exercised on the four report-heaviest commands, including the
/// seeded sampler.
pub fn report_determinism() -> CriterionResult {
    criterion(10, "reports are byte-identical across repeated runs", || {
        let caps = Caps {
            max_edges: fuzzy_potts::edge_measure::DEFAULT_EDGE_CAP,
            max_pa_vertices: fuzzy_potts::association::DEFAULT_COORDINATE_CAP,
            max_joint_bits: fuzzy_potts::spin_measure::DEFAULT_JOINT_BITS_CAP,
        };
        let (qs, ps, alphas) = default_probe_grid();
        let alpha = ratio(1, 100);

        let run_figure1 = || commands::figure1(7, Some(&alpha)).map_err(|e| e.message);
        let run_probe = || commands::probe_q(&qs, &ps, &alphas).map_err(|e| e.message);
        let run_boundary = || {
            commands::boundary(
                &default_boundary_grid(),
                &default_boundary_edge_probabilities(),
            )
            .map_err(|e| e.message)
        };
        let run_couple = || {
            let rg = family_graph("triangle", None, None).map_err(|e| e.message)?;
            commands::couple(
                &rg,
                &PSpec::default_uniform(),
                &integer(2),
                Some(0),
                Some(0),
                fuzzy_potts::coupling::EdgeRule::LowestIncidentFirst,
                Some(500),
                7,
                &caps,
            )
            .map_err(|e| e.message)
        };

        let mut compared = 0usize;
        let mut compare = |name: &str,
                           run: &dyn Fn() -> Result<crate::report::CommandOutput, String>|
         -> Result<(), String> {
            let first = run()?;
            let second = run()?;
            if first.exit_code != second.exit_code {
                return Err(format!("{name}: exit codes differ between runs"));
            }
            for format in [Format::Json, Format::Csv, Format::Text] {
                let a = first.render(format).map_err(|e| e.message)?;
                let b = second.render(format).map_err(|e| e.message)?;
                if a != b {
                    return Err(format!("{name}: {format:?} output differs between runs"));
                }
                compared += 1;
            }
            Ok(())
        };

        compare("figure1", &run_figure1)?;
        compare("probe-q", &run_probe)?;
        compare("boundary", &run_boundary)?;
        compare("couple", &run_couple)?;
        Ok(format!(
            "{compared} renderings (figure1, probe-q, boundary, and couple with 500 seeded draws; json, csv, and text) identical across repeated runs"
        ))
    })
}

/// Runs all ten criteria in order.
pub fn run_all() -> Vec<CriterionResult> {
    vec![
        spin_association_grid(),
        edge_lattice_condition_grid(),
        conditioning_matches_minor_measure(),
        coupling_grid(),
        two_path_sign_threshold(),
        two_path_conditional_failure(),
        potts_divide_and_color_identity(),
        spin_lattice_boundary(),
        upset_counts(),
        report_determinism(),
    ]
}
