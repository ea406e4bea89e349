//! The ten commands, implemented over resolved, typed parameters.
//!
//! Each function returns a [`CommandOutput`] carrying the JSON envelope,
//! the CSV table (when the result is tabular), the text summary, and the
//! exit code, so the binary and the integration tests exercise one code
//! path. Nothing here reads the clock or emits platform-dependent values:
//! identical inputs render byte-identical reports.

use std::fmt::Write as _;

use fuzzy_potts::association::{
    enumerate_upsets, positive_association_check_with_cap, PaVerdict, PaWitness, WitnessEvent,
    UPSET_ENUMERATION_CAP,
};
use fuzzy_potts::coupling::{build_coupling_with_rule, verify_coupling, CouplingSampler, EdgeRule};
use fuzzy_potts::edge_measure::{
    product_measure_with_cap, random_cluster_with_cap, uniform_forest_with_cap, EdgeMeasure,
};
use fuzzy_potts::explorer::{
    conjecture_probe_q_lt_1, figure1_analysis, haggstrom_boundary_scan, lemma2_failure_demo,
    standard_corpus,
};
use fuzzy_potts::graph::Graph;
use fuzzy_potts::lattice::{plc_check, PlcVerdict, PlcWitness};
use fuzzy_potts::rational::{exact_string, integer, ratio};
use fuzzy_potts::spin_measure::{
    divide_and_color, fuzzy_potts, joint_fuzzy_potts_with_cap, partition_measure_from_edge_measure,
    plc_check_spin, potts_gibbs,
};
use fuzzy_potts::{Error, Rational};
use serde_json::{json, Map, Value};

use crate::graphs::ResolvedGraph;
use crate::report::{envelope, rational_json, rational_text, CommandOutput, CsvTable};
use crate::{Caps, CliError};

/// Edge probabilities, either one value for every edge or a per-edge list.
#[derive(Clone, Debug)]
pub enum PSpec {
    Uniform(Rational),
    PerEdge(Vec<Rational>),
}

impl PSpec {
    /// The default edge probability, one half.
    pub fn default_uniform() -> PSpec {
        PSpec::Uniform(ratio(1, 2))
    }

    fn per_edge(&self, edge_count: usize) -> Result<Vec<Rational>, CliError> {
        match self {
            PSpec::Uniform(p) => Ok(vec![p.clone(); edge_count]),
            PSpec::PerEdge(list) => {
                if list.len() != edge_count {
                    return Err(CliError::new(format!(
                        "--p-list has {} entries but the graph has {} edges",
                        list.len(),
                        edge_count
                    )));
                }
                Ok(list.clone())
            }
        }
    }

    fn params_json(&self) -> Value {
        match self {
            PSpec::Uniform(p) => rational_json(p),
            PSpec::PerEdge(list) => Value::Array(list.iter().map(rational_json).collect()),
        }
    }
}

/// A fully resolved measure request.
#[derive(Clone, Debug)]
pub enum MeasureSpec {
    RandomCluster { p: PSpec, q: Rational },
    UniformForest,
    Product { p: PSpec },
}

impl MeasureSpec {
    pub fn kind_name(&self) -> &'static str {
        match self {
            MeasureSpec::RandomCluster { .. } => "random-cluster",
            MeasureSpec::UniformForest => "uniform-forest",
            MeasureSpec::Product { .. } => "product",
        }
    }

    /// Builds the measure, refusing instances above the edge cap.
    pub fn build(&self, g: &Graph, caps: &Caps) -> Result<EdgeMeasure, CliError> {
        let mu = match self {
            MeasureSpec::RandomCluster { p, q } => {
                random_cluster_with_cap(g, &p.per_edge(g.edge_count())?, q, caps.max_edges)?
            }
            MeasureSpec::UniformForest => uniform_forest_with_cap(g, caps.max_edges)?,
            MeasureSpec::Product { p } => {
                product_measure_with_cap(g, &p.per_edge(g.edge_count())?, caps.max_edges)?
            }
        };
        Ok(mu)
    }

    fn params_entries(&self) -> Vec<(&'static str, Value)> {
        match self {
            MeasureSpec::RandomCluster { p, q } => vec![
                ("measure", json!("random-cluster")),
                ("p", p.params_json()),
                ("q", rational_json(q)),
            ],
            MeasureSpec::UniformForest => vec![("measure", json!("uniform-forest"))],
            MeasureSpec::Product { p } => vec![
                ("measure", json!("product")),
                ("p", p.params_json()),
            ],
        }
    }
}

fn graph_params(rg: &ResolvedGraph) -> Value {
    let edges: Vec<Value> = rg
        .graph
        .edges()
        .iter()
        .map(|&(u, v)| json!([u, v]))
        .collect();
    json!({
        "label": rg.label,
        "vertices": rg.graph.vertex_count(),
        "edges": edges,
    })
}

fn measure_params(rg: &ResolvedGraph, spec: &MeasureSpec, alpha: Option<&Rational>) -> Value {
    let mut map = Map::new();
    map.insert("graph".into(), graph_params(rg));
    for (key, value) in spec.params_entries() {
        map.insert(key.into(), value);
    }
    if let Some(a) = alpha {
        map.insert("alpha".into(), rational_json(a));
    }
    Value::Object(map)
}

fn plc_witness_json(w: &PlcWitness) -> Value {
    json!({
        "a": w.a,
        "b": w.b,
        "product_pair": rational_json(&w.product_pair),
        "product_meet_join": rational_json(&w.product_meet_join),
    })
}

fn pa_witness_json(w: &PaWitness) -> Value {
    json!({
        "a_members": w.a.member_ranks(),
        "b_members": w.b.member_ranks(),
        "covariance": rational_json(&w.covariance),
    })
}

/// Resolves the conditioning site from flags and the family's designation.
fn resolve_site(
    rg: &ResolvedGraph,
    x: Option<usize>,
    e: Option<usize>,
) -> Result<(usize, usize), CliError> {
    let designated = rg.designated;
    let x = x.or(designated.map(|(dx, _)| dx));
    let e = e.or(designated.map(|(_, de)| de));
    match (x, e) {
        (Some(x), Some(e)) => Ok((x, e)),
        _ => Err(CliError::new(
            "this graph designates no conditioning site; pass --x VERTEX and --e EDGE",
        )),
    }
}

fn table_rows(probs: &[Rational]) -> Vec<Value> {
    probs
        .iter()
        .enumerate()
        .map(|(rank, p)| {
            json!({
                "rank": rank,
                "probability": rational_json(p),
            })
        })
        .collect()
}

/// `measure`: build an edge measure (and optionally its two-color spin
/// measure) and dump the exact tables.
pub fn measure(
    rg: &ResolvedGraph,
    spec: &MeasureSpec,
    alpha: Option<&Rational>,
    caps: &Caps,
) -> Result<CommandOutput, CliError> {
    let mu = spec.build(&rg.graph, caps)?;
    let spin = match alpha {
        Some(a) => Some(fuzzy_potts(&mu, a)?),
        None => None,
    };

    let mut result = Map::new();
    result.insert("vertices".into(), json!(rg.graph.vertex_count()));
    result.insert("edges".into(), json!(rg.graph.edge_count()));
    result.insert("edge_table".into(), Value::Array(table_rows(mu.probs())));
    if let Some(nu) = &spin {
        result.insert("spin_table".into(), Value::Array(table_rows(nu.probs())));
    }

    let mut csv = CsvTable::new(vec!["table", "rank", "exact", "decimal"]);
    for (rank, p) in mu.probs().iter().enumerate() {
        csv.push(vec![
            "edge".to_string(),
            rank.to_string(),
            exact_string(p),
            fuzzy_potts::rational::decimal_string(p, crate::report::DECIMAL_DIGITS),
        ]);
    }
    if let Some(nu) = &spin {
        for (rank, p) in nu.probs().iter().enumerate() {
            csv.push(vec![
                "spin".to_string(),
                rank.to_string(),
                exact_string(p),
                fuzzy_potts::rational::decimal_string(p, crate::report::DECIMAL_DIGITS),
            ]);
        }
    }

    let mut text = format!(
        "{} on {}: {} vertices, {} edges, {} configurations\n",
        spec.kind_name(),
        rg.label,
        rg.graph.vertex_count(),
        rg.graph.edge_count(),
        mu.probs().len()
    );
    for (rank, p) in mu.probs().iter().enumerate() {
        writeln!(text, "  edge rank {rank}: {}", rational_text(p)).unwrap();
    }
    if let (Some(nu), Some(a)) = (&spin, alpha) {
        writeln!(text, "spin table (alpha = {}):", exact_string(a)).unwrap();
        for (rank, p) in nu.probs().iter().enumerate() {
            writeln!(text, "  spin rank {rank}: {}", rational_text(p)).unwrap();
        }
    }

    Ok(CommandOutput {
        command: "measure",
        envelope: envelope(
            "measure",
            measure_params(rg, spec, alpha),
            Value::Object(result),
        ),
        csv: Some(csv),
        text,
        exit_code: 0,
    })
}

/// `check-plc`: the lattice condition on the edge measure, or on the spin
/// measure when `alpha` is given. A computed "fails" verdict still exits 0.
pub fn check_plc(
    rg: &ResolvedGraph,
    spec: &MeasureSpec,
    alpha: Option<&Rational>,
    caps: &Caps,
) -> Result<CommandOutput, CliError> {
    let mu = spec.build(&rg.graph, caps)?;
    let (target, verdict) = match alpha {
        None => ("edge", plc_check(&mu)),
        Some(a) => ("spin", plc_check_spin(&fuzzy_potts(&mu, a)?)?),
    };

    let mut result = Map::new();
    result.insert("target".into(), json!(target));
    let mut text = format!("lattice condition on the {target} measure: ");
    match &verdict {
        PlcVerdict::Holds => {
            result.insert("verdict".into(), json!("holds"));
            text.push_str("holds\n");
        }
        PlcVerdict::Fails(w) => {
            result.insert("verdict".into(), json!("fails"));
            result.insert("witness".into(), plc_witness_json(w));
            writeln!(
                text,
                "fails\n  witness ranks a={} b={}: mu(a)mu(b) = {} but mu(meet)mu(join) = {}",
                w.a,
                w.b,
                rational_text(&w.product_pair),
                rational_text(&w.product_meet_join)
            )
            .unwrap();
        }
    }

    Ok(CommandOutput {
        command: "check-plc",
        envelope: envelope(
            "check-plc",
            measure_params(rg, spec, alpha),
            Value::Object(result),
        ),
        csv: None,
        text,
        exit_code: 0,
    })
}

/// `check-pa`: positive association of the spin measure over every up-set
/// pair. Refuses vertex counts above the up-set cap.
pub fn check_pa(
    rg: &ResolvedGraph,
    spec: &MeasureSpec,
    alpha: &Rational,
    caps: &Caps,
) -> Result<CommandOutput, CliError> {
    let mu = spec.build(&rg.graph, caps)?;
    let nu = fuzzy_potts(&mu, alpha)?;
    let verdict = positive_association_check_with_cap(nu.probs(), caps.max_pa_vertices)?;
    let n = rg.graph.vertex_count();
    let upset_count = enumerate_upsets(n)?.len();

    let mut result = Map::new();
    result.insert("vertices".into(), json!(n));
    result.insert("upsets".into(), json!(upset_count));
    let mut text = String::new();
    match &verdict {
        PaVerdict::Holds => {
            result.insert("verdict".into(), json!("holds"));
            writeln!(
                text,
                "positive association: holds ({upset_count} up-sets over {n} vertices, all pairs nonnegatively correlated)"
            )
            .unwrap();
        }
        PaVerdict::Fails(w) => {
            result.insert("verdict".into(), json!("fails"));
            result.insert("witness".into(), pa_witness_json(w));
            writeln!(
                text,
                "positive association: fails\n  covariance {} for events with member ranks {:?} and {:?}",
                rational_text(&w.covariance),
                w.a.member_ranks(),
                w.b.member_ranks()
            )
            .unwrap();
        }
    }

    Ok(CommandOutput {
        command: "check-pa",
        envelope: envelope(
            "check-pa",
            measure_params(rg, spec, Some(alpha)),
            Value::Object(result),
        ),
        csv: None,
        text,
        exit_code: 0,
    })
}

/// `check-lemma2`: nonnegativity of the covariance between an increasing
/// spin event and the state of edge `e`, conditioned on the spin at `x`
/// being plus, scanned over all up-sets (or principal up-sets above the
/// exhaustive cap).
pub fn check_lemma2(
    rg: &ResolvedGraph,
    spec: &MeasureSpec,
    alpha: &Rational,
    x: Option<usize>,
    e: Option<usize>,
    caps: &Caps,
) -> Result<CommandOutput, CliError> {
    let (x, e) = resolve_site(rg, x, e)?;
    let mu = spec.build(&rg.graph, caps)?;
    let jm = joint_fuzzy_potts_with_cap(&mu, alpha, caps.max_joint_bits)?;
    let verdict = fuzzy_potts::association::lemma2_check_with_cap(&jm, x, e, caps.max_pa_vertices)?;
    let n = rg.graph.vertex_count();
    let exhaustive = n <= caps.max_pa_vertices.min(UPSET_ENUMERATION_CAP);
    let scan = if exhaustive {
        "exhaustive"
    } else {
        "principal-only"
    };

    let mut params = match measure_params(rg, spec, Some(alpha)) {
        Value::Object(map) => map,
        _ => unreachable!(),
    };
    params.insert("x".into(), json!(x));
    params.insert("e".into(), json!(e));

    let mut result = Map::new();
    result.insert("scan".into(), json!(scan));
    let mut text = String::new();
    match &verdict {
        fuzzy_potts::association::ConditionalCovVerdict::Holds => {
            result.insert("verdict".into(), json!("holds"));
            writeln!(
                text,
                "conditional covariance with the open state of edge {e}, given a plus spin at vertex {x}: nonnegative for every increasing event ({scan} scan)"
            )
            .unwrap();
        }
        fuzzy_potts::association::ConditionalCovVerdict::Fails(w) => {
            result.insert("verdict".into(), json!("fails"));
            let event = match &w.event {
                WitnessEvent::Enumerated(upset) => json!({
                    "kind": "enumerated",
                    "members": upset.member_ranks(),
                }),
                WitnessEvent::Principal(p) => json!({
                    "kind": "principal",
                    "generator": p.generator,
                }),
            };
            result.insert(
                "witness".into(),
                json!({
                    "event": event,
                    "covariance": rational_json(&w.covariance),
                }),
            );
            writeln!(
                text,
                "conditional covariance check fails: covariance {} for a witness increasing event ({scan} scan)",
                rational_text(&w.covariance)
            )
            .unwrap();
        }
    }

    Ok(CommandOutput {
        command: "check-lemma2",
        envelope: envelope("check-lemma2", Value::Object(params), Value::Object(result)),
        csv: None,
        text,
        exit_code: 0,
    })
}

fn bits_string(rank: u64, width: usize) -> String {
    // Edge 0 is the rightmost character, matching the rank's binary form.
    format!("{rank:0width$b}")
}

/// `couple`: build the revelation coupling of the two single-edge
/// conditionings, verify its guarantees, and optionally sample it.
#[allow(clippy::too_many_arguments)]
pub fn couple(
    rg: &ResolvedGraph,
    p: &PSpec,
    q: &Rational,
    x: Option<usize>,
    e: Option<usize>,
    rule: EdgeRule,
    samples: Option<u64>,
    seed: u64,
    caps: &Caps,
) -> Result<CommandOutput, CliError> {
    let g = &rg.graph;
    if g.edge_count() > caps.max_edges {
        return Err(Error::EdgeCountCapExceeded {
            edges: g.edge_count(),
            cap: caps.max_edges,
        }
        .into());
    }
    let (x, e) = resolve_site(rg, x, e)?;
    let probs = p.per_edge(g.edge_count())?;
    let cd = build_coupling_with_rule(g, &probs, q, e, x, rule)?;
    let report = verify_coupling(&cd)?;
    let width = g.edge_count();

    let rule_name = match rule {
        EdgeRule::LowestIncidentFirst => "lowest-incident-first",
        EdgeRule::HighestIncidentFirst => "highest-incident-first",
    };

    let leaves: Vec<Value> = cd
        .leaves()
        .iter()
        .map(|leaf| {
            json!({
                "psi": leaf.psi.0,
                "xi": leaf.xi.0,
                "probability": rational_json(&leaf.probability),
                "visit_order": leaf.visit_order,
            })
        })
        .collect();

    let mut result = Map::new();
    result.insert("edge".into(), json!(e));
    result.insert("vertex".into(), json!(x));
    result.insert("rule".into(), json!(rule_name));
    result.insert("leaf_count".into(), json!(cd.leaves().len()));
    result.insert("leaves".into(), Value::Array(leaves));
    result.insert(
        "verification".into(),
        json!({
            "probabilities_sum_to_one": report.probabilities_sum_to_one,
            "open_marginal_matches": report.open_marginal_matches,
            "closed_marginal_matches": report.closed_marginal_matches,
            "domination_holds": report.domination_holds,
            "off_component_agreement": report.off_component_agreement,
            "all_hold": report.all_hold(),
        }),
    );

    let mut csv = CsvTable::new(vec![
        "leaf", "psi", "xi", "exact", "decimal", "visit_order",
    ]);
    for (i, leaf) in cd.leaves().iter().enumerate() {
        let order: Vec<String> = leaf.visit_order.iter().map(|e| e.to_string()).collect();
        csv.push(vec![
            i.to_string(),
            bits_string(leaf.psi.0, width),
            bits_string(leaf.xi.0, width),
            exact_string(&leaf.probability),
            fuzzy_potts::rational::decimal_string(&leaf.probability, crate::report::DECIMAL_DIGITS),
            order.join(" "),
        ]);
    }

    let mut text = format!(
        "coupling of the edge-{e} conditionings on {} (vertex {x}, rule {rule_name}): {} leaves\n",
        rg.label,
        cd.leaves().len()
    );
    writeln!(
        text,
        "  verification: sum-to-one={} open-marginal={} closed-marginal={} domination={} off-component={}",
        report.probabilities_sum_to_one,
        report.open_marginal_matches,
        report.closed_marginal_matches,
        report.domination_holds,
        report.off_component_agreement
    )
    .unwrap();
    for (i, leaf) in cd.leaves().iter().enumerate() {
        writeln!(
            text,
            "  leaf {i}: psi={} xi={} probability {}",
            bits_string(leaf.psi.0, width),
            bits_string(leaf.xi.0, width),
            rational_text(&leaf.probability)
        )
        .unwrap();
    }

    if let Some(count) = samples {
        if rule != EdgeRule::LowestIncidentFirst {
            return Err(CliError::new(
                "sampling follows the lowest-incident revelation rule; drop --rule highest or --samples",
            ));
        }
        let mut sampler = CouplingSampler::new(g, &probs, q, e, x, seed)?;
        let mut tally: std::collections::BTreeMap<(u64, u64), u64> =
            std::collections::BTreeMap::new();
        let mut dominated: u64 = 0;
        for _ in 0..count {
            let (psi, xi) = sampler.draw()?;
            if xi.le(psi) {
                dominated += 1;
            }
            *tally.entry((psi.0, xi.0)).or_insert(0) += 1;
        }
        let rows: Vec<Value> = tally
            .iter()
            .map(|(&(psi, xi), &n)| json!({"psi": psi, "xi": xi, "count": n}))
            .collect();
        result.insert(
            "samples".into(),
            json!({
                "count": count,
                "seed": seed,
                "dominated": dominated,
                "tally": rows,
            }),
        );
        writeln!(
            text,
            "  samples: {count} draws with seed {seed}; {dominated} had xi below psi"
        )
        .unwrap();
        for (&(psi, xi), &n) in &tally {
            writeln!(
                text,
                "    psi={} xi={}: {n}",
                bits_string(psi, width),
                bits_string(xi, width)
            )
            .unwrap();
        }
    }

    let mut params = Map::new();
    params.insert("graph".into(), graph_params(rg));
    params.insert("p".into(), p.params_json());
    params.insert("q".into(), rational_json(q));
    params.insert("x".into(), json!(x));
    params.insert("e".into(), json!(e));
    params.insert("rule".into(), json!(rule_name));
    if let Some(count) = samples {
        params.insert("samples".into(), json!(count));
        params.insert("seed".into(), json!(seed));
    }

    Ok(CommandOutput {
        command: "couple",
        envelope: envelope("couple", Value::Object(params), Value::Object(result)),
        csv: Some(csv),
        text,
        exit_code: 0,
    })
}

/// `figure1`: exact analysis of the two-path family — forest and tree
/// counts, connection and edge probabilities, and the covariance whose
/// sign flips once the family is wide enough. With `alpha`, also runs the
/// conditional-covariance failure demonstration at that coloring bias.
pub fn figure1(m: usize, alpha: Option<&Rational>) -> Result<CommandOutput, CliError> {
    let analysis = figure1_analysis(m)?;
    let demo = match alpha {
        Some(a) => Some(lemma2_failure_demo(m, a)?),
        None => None,
    };

    let mut result = Map::new();
    result.insert("m".into(), json!(m));
    result.insert(
        "counts".into(),
        json!({
            "forests": analysis.forest_count.to_string(),
            "trees": analysis.tree_count.to_string(),
            "trees_containing_edge": analysis.tree_with_edge_count.to_string(),
            "forests_containing_edge": analysis.forest_with_edge_count.to_string(),
        }),
    );
    result.insert("pr_connected".into(), rational_json(&analysis.pr_connected));
    result.insert("pr_edge_open".into(), rational_json(&analysis.pr_e_open));
    result.insert("covariance".into(), rational_json(&analysis.covariance));
    result.insert("sign".into(), json!(analysis.sign.name()));
    result.insert(
        "brute_force_checked".into(),
        json!(analysis.brute_force_checked),
    );
    if let Some(d) = &demo {
        result.insert(
            "conditional_demo".into(),
            json!({
                "alpha": rational_json(&d.alpha),
                "covariance": rational_json(&d.covariance),
                "sign": d.sign.name(),
                "gap": rational_json(&d.gap),
                "gap_within_alpha": d.gap_within_alpha,
            }),
        );
    }

    let mut csv = CsvTable::new(vec![
        "m",
        "forests",
        "trees",
        "trees_containing_edge",
        "forests_containing_edge",
        "covariance_exact",
        "covariance_decimal",
        "sign",
    ]);
    csv.push(vec![
        m.to_string(),
        analysis.forest_count.to_string(),
        analysis.tree_count.to_string(),
        analysis.tree_with_edge_count.to_string(),
        analysis.forest_with_edge_count.to_string(),
        exact_string(&analysis.covariance),
        fuzzy_potts::rational::decimal_string(&analysis.covariance, crate::report::DECIMAL_DIGITS),
        analysis.sign.name().to_string(),
    ]);

    let mut text = format!(
        "two-path family with m = {m} ({} vertices, {} edges)\n",
        m + 2,
        2 * m + 1
    );
    writeln!(
        text,
        "  forests: {}; spanning trees: {}; trees containing the direct edge: {}; forests containing it: {}",
        analysis.forest_count, analysis.tree_count, analysis.tree_with_edge_count, analysis.forest_with_edge_count
    )
    .unwrap();
    writeln!(
        text,
        "  under the uniform forest measure: Pr[connected] = {}, Pr[direct edge open] = {}",
        rational_text(&analysis.pr_connected),
        rational_text(&analysis.pr_e_open)
    )
    .unwrap();
    writeln!(
        text,
        "  covariance of connectedness with the direct edge: {} — {}",
        rational_text(&analysis.covariance),
        analysis.sign.name()
    )
    .unwrap();
    writeln!(
        text,
        "  brute-force cross-check: {}",
        if analysis.brute_force_checked {
            "counts re-derived by full enumeration"
        } else {
            "closed forms only (enumeration above its cap)"
        }
    )
    .unwrap();
    if let Some(d) = &demo {
        writeln!(
            text,
            "  at coloring bias alpha = {}: conditional covariance of the all-plus event with the direct edge = {} — {}",
            exact_string(&d.alpha),
            rational_text(&d.covariance),
            d.sign.name()
        )
        .unwrap();
    }

    let mut params = Map::new();
    params.insert("m".into(), json!(m));
    if let Some(a) = alpha {
        params.insert("alpha".into(), rational_json(a));
    }

    Ok(CommandOutput {
        command: "figure1",
        envelope: envelope("figure1", Value::Object(params), Value::Object(result)),
        csv: Some(csv),
        text,
        exit_code: 0,
    })
}

fn rational_list_json(values: &[Rational]) -> Value {
    Value::Array(values.iter().map(rational_json).collect())
}

/// `probe-q`: sweep cluster weights (typically below 1, where positive
/// association is an open question), edge probabilities, and coloring
/// biases over the standard corpus, reporting any positive-association
/// violation. Exit code 2 flags a find; nothing is asserted.
pub fn probe_q(
    qs: &[Rational],
    ps: &[Rational],
    alphas: &[Rational],
) -> Result<CommandOutput, CliError> {
    let corpus = standard_corpus();
    let violations = conjecture_probe_q_lt_1(&corpus, qs, ps, alphas)?;
    let cells = corpus.len() * qs.len() * ps.len() * alphas.len();

    let rows: Vec<Value> = violations
        .iter()
        .map(|v| {
            json!({
                "graph_index": v.graph_index,
                "q": rational_json(&v.q),
                "p": rational_json(&v.p),
                "alpha": rational_json(&v.alpha),
                "witness": pa_witness_json(&v.witness),
            })
        })
        .collect();

    let result = json!({
        "corpus_size": corpus.len(),
        "cells": cells,
        "violation_count": violations.len(),
        "violations": rows,
    });

    let mut csv = CsvTable::new(vec![
        "graph_index",
        "q",
        "p",
        "alpha",
        "covariance_exact",
        "covariance_decimal",
    ]);
    for v in &violations {
        csv.push(vec![
            v.graph_index.to_string(),
            exact_string(&v.q),
            exact_string(&v.p),
            exact_string(&v.alpha),
            exact_string(&v.witness.covariance),
            fuzzy_potts::rational::decimal_string(
                &v.witness.covariance,
                crate::report::DECIMAL_DIGITS,
            ),
        ]);
    }

    let mut text = String::new();
    if violations.is_empty() {
        writeln!(
            text,
            "no positive-association violation in {cells} cells ({} corpus graphs)",
            corpus.len()
        )
        .unwrap();
    } else {
        for v in &violations {
            writeln!(
                text,
                "POSITIVE-ASSOCIATION VIOLATION: corpus graph {} at q={}, p={}, alpha={}, covariance {}",
                v.graph_index,
                exact_string(&v.q),
                exact_string(&v.p),
                exact_string(&v.alpha),
                rational_text(&v.witness.covariance)
            )
            .unwrap();
        }
    }

    let params = json!({
        "qs": rational_list_json(qs),
        "ps": rational_list_json(ps),
        "alphas": rational_list_json(alphas),
    });

    let exit_code = if violations.is_empty() { 0 } else { 2 };
    Ok(CommandOutput {
        command: "probe-q",
        envelope: envelope("probe-q", params, result),
        csv: Some(csv),
        text,
        exit_code,
    })
}

/// `boundary`: scan (q, alpha) cells for the spin measure's lattice
/// condition over the corpus. Exits 1 if any cell contradicts the
/// product-condition threshold (condition met but a failure found, or
/// condition violated with no failure anywhere).
pub fn boundary(
    grid: &[(Rational, Rational)],
    ps: &[Rational],
) -> Result<CommandOutput, CliError> {
    let corpus = standard_corpus();
    let cells = haggstrom_boundary_scan(&corpus, grid, ps)?;
    let consistent = cells.iter().all(|cell| {
        if cell.condition_met {
            cell.holds_everywhere
        } else {
            cell.first_failure.is_some()
        }
    });

    let cell_rows: Vec<Value> = cells
        .iter()
        .map(|cell| {
            let failure = match &cell.first_failure {
                None => Value::Null,
                Some(f) => json!({
                    "graph_index": f.graph_index,
                    "p": rational_json(&f.p),
                    "witness": plc_witness_json(&f.witness),
                }),
            };
            json!({
                "q": rational_json(&cell.q),
                "alpha": rational_json(&cell.alpha),
                "condition_met": cell.condition_met,
                "holds_everywhere": cell.holds_everywhere,
                "first_failure": failure,
            })
        })
        .collect();

    let result = json!({
        "corpus_size": corpus.len(),
        "cells": cell_rows,
        "consistent": consistent,
    });

    let mut csv = CsvTable::new(vec![
        "q",
        "alpha",
        "condition_met",
        "holds_everywhere",
        "failure_graph_index",
        "failure_p",
    ]);
    for cell in &cells {
        let (fg, fp) = match &cell.first_failure {
            Some(f) => (f.graph_index.to_string(), exact_string(&f.p)),
            None => (String::new(), String::new()),
        };
        csv.push(vec![
            exact_string(&cell.q),
            exact_string(&cell.alpha),
            cell.condition_met.to_string(),
            cell.holds_everywhere.to_string(),
            fg,
            fp,
        ]);
    }

    let mut text = String::new();
    for cell in &cells {
        let status = match (&cell.first_failure, cell.condition_met) {
            (None, _) => "lattice condition holds on every corpus graph".to_string(),
            (Some(f), _) => format!(
                "first failure on corpus graph {} at p = {}",
                f.graph_index,
                exact_string(&f.p)
            ),
        };
        writeln!(
            text,
            "  q={} alpha={}: condition {}; {}",
            exact_string(&cell.q),
            exact_string(&cell.alpha),
            if cell.condition_met { "met" } else { "not met" },
            status
        )
        .unwrap();
    }
    writeln!(
        text,
        "threshold consistent across {} cells: {}",
        cells.len(),
        if consistent { "yes" } else { "NO" }
    )
    .unwrap();

    let params = json!({
        "grid": grid
            .iter()
            .map(|(q, a)| json!({"q": rational_json(q), "alpha": rational_json(a)}))
            .collect::<Vec<Value>>(),
        "ps": rational_list_json(ps),
    });

    Ok(CommandOutput {
        command: "boundary",
        envelope: envelope("boundary", params, result),
        csv: Some(csv),
        text,
        exit_code: if consistent { 0 } else { 1 },
    })
}

/// `es-check`: the coloring identity between the q-state Potts Gibbs
/// measure and divide-and-color over the random-cluster partition, as
/// exact table equality. Exits 1 on any mismatch.
pub fn es_check(states_list: &[usize], p: &Rational) -> Result<CommandOutput, CliError> {
    let cases: Vec<(&str, Graph)> = vec![
        (
            "triangle",
            Graph::new(3, vec![(0, 1), (0, 2), (1, 2)]).map_err(CliError::from)?,
        ),
        (
            "path-3",
            Graph::new(3, vec![(0, 1), (1, 2)]).map_err(CliError::from)?,
        ),
    ];

    let mut rows = Vec::new();
    let mut csv = CsvTable::new(vec!["graph", "states", "tables_equal"]);
    let mut text = String::new();
    let mut all_equal = true;
    for (label, g) in &cases {
        let probs = vec![p.clone(); g.edge_count()];
        for &states in states_list {
            let gibbs = potts_gibbs(g, &probs, states)?;
            let q = integer(states as i64);
            let mu = random_cluster_with_cap(g, &probs, &q, g.edge_count())?;
            let pm = partition_measure_from_edge_measure(&mu)?;
            let beta = vec![ratio(1, states as i64); states];
            let colored = divide_and_color(&pm, &beta)?;
            let equal = gibbs.probs() == colored.probs();
            all_equal &= equal;
            rows.push(json!({
                "graph": label,
                "states": states,
                "configurations": gibbs.probs().len(),
                "tables_equal": equal,
            }));
            csv.push(vec![
                label.to_string(),
                states.to_string(),
                equal.to_string(),
            ]);
            writeln!(
                text,
                "  {label}, {states} states: Potts Gibbs table {} divide-and-color table",
                if equal { "equals" } else { "DIFFERS FROM" }
            )
            .unwrap();
        }
    }
    writeln!(
        text,
        "coloring identity: {}",
        if all_equal { "exact equality in every case" } else { "MISMATCH FOUND" }
    )
    .unwrap();

    let result = json!({
        "p": rational_json(p),
        "cases": rows,
        "all_equal": all_equal,
    });
    let params = json!({
        "states": states_list,
        "p": rational_json(p),
    });

    Ok(CommandOutput {
        command: "es-check",
        envelope: envelope("es-check", params, result),
        csv: Some(csv),
        text,
        exit_code: if all_equal { 0 } else { 1 },
    })
}

/// `corpus`: run the whole acceptance suite, one pass/fail line per
/// criterion. Exits 0 only if every criterion passes.
pub fn corpus() -> CommandOutput {
    let results = crate::acceptance::run_all();
    let all_passed = results.iter().all(|r| r.passed);

    let rows: Vec<Value> = results
        .iter()
        .map(|r| {
            json!({
                "number": r.number,
                "name": r.name,
                "passed": r.passed,
                "detail": r.detail,
            })
        })
        .collect();
    let result = json!({
        "criteria": rows,
        "all_passed": all_passed,
    });

    let mut csv = CsvTable::new(vec!["number", "name", "passed", "detail"]);
    for r in &results {
        csv.push(vec![
            r.number.to_string(),
            r.name.to_string(),
            r.passed.to_string(),
            r.detail.clone(),
        ]);
    }

    let mut text = String::new();
    for r in &results {
        writeln!(
            text,
            "{} {:2} {} — {}",
            if r.passed { "PASS" } else { "FAIL" },
            r.number,
            r.name,
            r.detail
        )
        .unwrap();
    }
    writeln!(
        text,
        "{}/{} criteria passed",
        results.iter().filter(|r| r.passed).count(),
        results.len()
    )
    .unwrap();

    CommandOutput {
        command: "corpus",
        envelope: envelope("corpus", json!({}), result),
        csv: Some(csv),
        text,
        exit_code: if all_passed { 0 } else { 1 },
    }
}
