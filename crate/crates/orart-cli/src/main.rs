//! Batch front end: reads JSON descriptions of graphs, complexes, and
//! point sets, runs the requested analysis, and prints a deterministic
//! text or JSON report.
//!
//! Exit codes: 0 when the requested check passes (or the command is a
//! pure computation), 1 when a check fails and a witness is reported,
//! 2 on unreadable or malformed input. Set `ORART_LOG=debug` for
//! progress chatter on stderr; stdout carries only the report.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use orart::bruhat_tits::{fixed_point, min_enclosing_ball};
use orart::cone::berestovskii_probe;
use orart::error::Error;
use orart::f2algebra::{build_gamma_algebra, conjecture_probe};
use orart::graph_of_groups;
use orart::io::{
    read_json, CubeComplexDoc, IsometrySetDoc, MetricGraphDoc, MetricSpaceDoc, PointSetDoc,
};
use orart::metric_graph::{GraphPoint, MetricGraph};
use orart::model_spaces::Kappa;
use orart::raag::{abelianization, presentation};
use orart::report::CatReport;
use orart::salvetti::{ball_cube_complex, cayley_ball, f2_betti, link_at_identity, salvetti_cells};
use orart::special_graph::{SpecialGraph, SpecialGraphSpec};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "orart", version, about = "Graph groups, cube complexes, and curvature checks")]
struct Cli {
    /// Emit the report as JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for every randomized search; fixed inputs and seeds give
    /// byte-identical reports.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AnalyzeKind {
    SpecialGraph,
}

#[derive(Subcommand)]
enum Command {
    /// Check a special graph against the validity rules.
    Validate { input: PathBuf },
    /// Full report on one input: validity, chordality, cliques, group
    /// presentation, abelianization, graded dimensions, cells, link.
    Analyze {
        kind: AnalyzeKind,
        input: PathBuf,
        /// Largest degree reported for the graded dimensions.
        #[arg(long, default_value_t = 6)]
        maxdeg: usize,
    },
    /// Vertex-link flag condition on a cube complex.
    Gromov { input: PathBuf },
    /// Curvature tests on a metric graph: comparison triangles by
    /// default, the quadratic midpoint inequality with --cn.
    CatTest {
        input: PathBuf,
        /// Run the midpoint inequality over graph vertices.
        #[arg(long)]
        cn: bool,
        /// Check every vertex (default unless --samples is given).
        #[arg(long)]
        exhaustive: bool,
        /// Comparison curvature.
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
        kappa: f64,
        /// With --cn, how many vertices to sample; otherwise the
        /// subdivision density of the comparison test.
        #[arg(long)]
        samples: Option<usize>,
        /// Slack below which an inequality counts as violated.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Smallest enclosing ball of a finite point set.
    Circumcenter { input: PathBuf },
    /// Common fixed point of the group generated by finitely many
    /// isometries, via the circumcenter of a saturated orbit.
    FixedPoint {
        input: PathBuf,
        /// Largest orbit accepted before giving up.
        #[arg(long, default_value_t = 1024)]
        samples: usize,
    },
    /// Midpoint inequality on the curvature-kappa cone over a finite
    /// metric base.
    Cone {
        input: PathBuf,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
        kappa: f64,
        /// Cone radii to sample (repeatable).
        #[arg(long = "radius", default_values_t = vec![0.5, 1.0, 2.0])]
        radius: Vec<f64>,
        /// Slack below which an inequality counts as violated.
        #[arg(long, default_value_t = 1e-7)]
        tol: f64,
    },
    /// Graded dimensions of the graph algebra against clique counts.
    Cohomology {
        input: PathBuf,
        #[arg(long, default_value_t = 6)]
        maxdeg: usize,
    },
    /// Decompose the graph group along a clique tree and reassemble it.
    GraphOfGroups { input: PathBuf },
    /// Cayley-ball cube complex of a clique group, with link checks.
    Cayley {
        input: PathBuf,
        /// Word-metric radius of the ball.
        #[arg(long, default_value_t = 2)]
        radius: usize,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(
        env_logger::Env::new().filter_or("ORART_LOG", "warn"),
    )
    .format_timestamp(None)
    .init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<u8, Error> {
    match &cli.command {
        Command::Validate { input } => validate(input, cli.json),
        Command::Analyze { kind: AnalyzeKind::SpecialGraph, input, maxdeg } => {
            analyze_graph(input, *maxdeg, cli.json)
        }
        Command::Gromov { input } => gromov(input, cli.json),
        Command::CatTest { input, cn, exhaustive, kappa, samples, tol } => {
            cat_test(input, *cn, *exhaustive, *kappa, *samples, *tol, cli)
        }
        Command::Circumcenter { input } => circumcenter(input, cli),
        Command::FixedPoint { input, samples } => fixed_point_cmd(input, *samples, cli),
        Command::Cone { input, kappa, radius, tol } => cone(input, *kappa, radius, *tol, cli.json),
        Command::Cohomology { input, maxdeg } => cohomology(input, *maxdeg, cli.json),
        Command::GraphOfGroups { input } => graph_of_groups_cmd(input, cli.json),
        Command::Cayley { input, radius } => cayley(input, *radius, cli.json),
    }
}

fn read_graph(path: &Path) -> Result<SpecialGraph, Error> {
    let spec: SpecialGraphSpec = read_json(path)?;
    let graph = SpecialGraph::from_spec(&spec)?;
    log::debug!(
        "read {} with {} vertices",
        path.display(),
        graph.vertex_count()
    );
    Ok(graph)
}

fn emit(json_mode: bool, value: &Value, text: &str) {
    if json_mode {
        println!("{}", serde_json::to_string_pretty(value).expect("report serializes"));
    } else {
        print!("{text}");
    }
}

fn verdict_line(passed: bool) -> &'static str {
    if passed {
        "verdict: pass"
    } else {
        "verdict: fail"
    }
}

/// Renders a midpoint-inequality report: the sample inventory first, then
/// every retained witness.
fn render_cat_report(report: &CatReport, out: &mut String) {
    use std::fmt::Write;
    writeln!(out, "{}", verdict_line(report.passed())).unwrap();
    writeln!(out, "kind: {}", report.kind).unwrap();
    writeln!(
        out,
        "inequalities checked: {} (skipped {}, violated {})",
        report.checked, report.skipped, report.violations
    )
    .unwrap();
    writeln!(out, "minimum slack: {} (tolerance {})", report.min_slack, report.tolerance)
        .unwrap();
    for w in &report.witnesses {
        writeln!(
            out,
            "witness: p={} q={} r={} m={} slack={}",
            w.points[0], w.points[1], w.points[2], w.points[3], w.slack
        )
        .unwrap();
    }
}

fn validate(input: &Path, json_mode: bool) -> Result<u8, Error> {
    let graph = read_graph(input)?;
    let validation = graph.validate();
    let violations: Vec<Value> = validation
        .violations
        .iter()
        .map(|v| json!({ "rule": v.rule, "witness": v.witness }))
        .collect();
    let mut text = format!(
        "{}\nvertices: {}\n",
        verdict_line(validation.is_valid()),
        graph.vertex_count()
    );
    for v in &validation.violations {
        text.push_str(&format!("violation: {} ({})\n", v.rule, v.witness));
    }
    emit(
        json_mode,
        &json!({
            "valid": validation.is_valid(),
            "vertices": graph.vertex_count(),
            "violations": violations,
        }),
        &text,
    );
    Ok(u8::from(!validation.is_valid()))
}

fn analyze_graph(input: &Path, maxdeg: usize, json_mode: bool) -> Result<u8, Error> {
    let graph = read_graph(input)?;
    let validation = graph.validate();
    if !validation.is_valid() {
        let mut text = String::from("verdict: fail\n");
        for v in &validation.violations {
            text.push_str(&format!("violation: {} ({})\n", v.rule, v.witness));
        }
        let violations: Vec<Value> = validation
            .violations
            .iter()
            .map(|v| json!({ "rule": v.rule, "witness": v.witness }))
            .collect();
        emit(json_mode, &json!({ "valid": false, "violations": violations }), &text);
        return Ok(1);
    }

    let naive = graph.naive();
    let chordal = naive.is_chordal();
    let cliques: Vec<Vec<String>> = naive
        .maximal_cliques()?
        .iter()
        .map(|c| naive.clique_label(c))
        .collect();
    let pres = presentation(&graph)?;
    let relators: Vec<String> = pres.relators.iter().map(|r| r.format(&pres.generators)).collect();
    let ab = abelianization(&graph)?;
    let algebra = build_gamma_algebra(&graph)?;
    let dims = algebra.hilbert_dims(maxdeg);
    let probe = conjecture_probe(&graph, maxdeg)?;
    let cells = salvetti_cells(&graph)?;
    let betti = f2_betti(&graph)?;
    let link = link_at_identity(&graph)?;

    let mut text = String::new();
    {
        use std::fmt::Write;
        writeln!(text, "valid: true").unwrap();
        writeln!(text, "chordal: {chordal}").unwrap();
        let rendered: Vec<String> = cliques.iter().map(|c| format!("{{{}}}", c.join(", "))).collect();
        writeln!(text, "maximal cliques: {}", rendered.join(" ")).unwrap();
        writeln!(text, "generators: {}", pres.generators.join(", ")).unwrap();
        writeln!(text, "relators: {}", relators.join(", ")).unwrap();
        writeln!(text, "abelianization: {ab}").unwrap();
        let dim_strings: Vec<String> = dims.iter().map(u64::to_string).collect();
        writeln!(text, "graded dimensions (maxdeg {maxdeg}): {}", dim_strings.join(", "))
            .unwrap();
        writeln!(text, "dimension probe: {probe}").unwrap();
        let cell_strings: Vec<String> = cells.cells.iter().map(u64::to_string).collect();
        writeln!(
            text,
            "cells by dimension: {} (euler {})",
            cell_strings.join(", "),
            cells.euler
        )
        .unwrap();
        writeln!(text, "identity link flag: {}", link.is_flag).unwrap();
        writeln!(text, "note: {}", betti.assumption).unwrap();
    }
    emit(
        json_mode,
        &json!({
            "valid": true,
            "chordal": chordal,
            "maximal_cliques": cliques,
            "presentation": { "generators": pres.generators, "relators": relators },
            "abelianization": {
                "free_rank": ab.free_rank,
                "invariant_factors": ab.invariant_factors,
                "display": ab.to_string(),
            },
            "graded_dimensions": dims,
            "probe": {
                "dims": probe.dims,
                "clique_counts": probe.clique_counts,
                "all_match": probe.all_match,
                "ambiguous_rule4": probe.ambiguous_rule4,
            },
            "cells": { "by_dimension": cells.cells, "euler": cells.euler },
            "identity_link_flag": link.is_flag,
            "betti_note": betti.assumption,
        }),
        &text,
    );
    Ok(0)
}

fn gromov(input: &Path, json_mode: bool) -> Result<u8, Error> {
    let doc: CubeComplexDoc = read_json(input)?;
    let complex = doc.build()?;
    let report = complex.gromov_report()?;
    let mut text = format!("{}\n", verdict_line(report.all_links_flag));
    for f in &report.failures {
        text.push_str(&format!(
            "witness: link of vertex {} holds the hollow clique {:?}\n",
            f.vertex, f.witness
        ));
    }
    emit(json_mode, &json!({ "all_links_flag": report.all_links_flag, "failures": report.failures }), &text);
    Ok(u8::from(!report.all_links_flag))
}

#[allow(clippy::too_many_arguments)]
fn cat_test(
    input: &Path,
    cn: bool,
    exhaustive: bool,
    kappa: f64,
    samples: Option<usize>,
    tol: f64,
    cli: &Cli,
) -> Result<u8, Error> {
    let doc: MetricGraphDoc = read_json(input)?;
    let graph: MetricGraph = doc.build()?;
    let n = graph.vertex_count();
    let (report, inventory) = if cn {
        let mut vertices: Vec<usize> = (0..n).collect();
        let inventory = match samples {
            Some(k) if !exhaustive && k < n => {
                let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
                vertices.shuffle(&mut rng);
                vertices.truncate(k);
                vertices.sort_unstable();
                format!("vertices checked: {k} of {n} (seed {})", cli.seed)
            }
            _ => format!("vertices checked: all {n}"),
        };
        let points: Vec<GraphPoint> = vertices
            .into_iter()
            .map(|vertex| GraphPoint::Vertex { vertex })
            .collect();
        (orart::report::cn_report(&graph, &points, tol), inventory)
    } else {
        let density = samples.unwrap_or(8);
        let report = graph.cat_test(Kappa::new(kappa)?, density, tol)?;
        (report, format!("subdivision density: {density}"))
    };
    let mut text = String::new();
    render_cat_report(&report, &mut text);
    text.push_str(&inventory);
    text.push('\n');
    emit(cli.json, &json!({ "report": report, "inventory": inventory }), &text);
    Ok(u8::from(!report.passed()))
}

fn circumcenter(input: &Path, cli: &Cli) -> Result<u8, Error> {
    let doc: PointSetDoc = read_json(input)?;
    let points = doc.build()?;
    let ball = min_enclosing_ball(&points, cli.seed)?;
    let text = format!(
        "center: {:?}\nradius: {}\npoints: {}\n",
        ball.center,
        ball.radius,
        points.len()
    );
    emit(
        cli.json,
        &json!({ "center": ball.center, "radius": ball.radius, "points": points.len() }),
        &text,
    );
    Ok(0)
}

fn fixed_point_cmd(input: &Path, orbit_cap: usize, cli: &Cli) -> Result<u8, Error> {
    let doc: IsometrySetDoc = read_json(input)?;
    let isometries = doc.build()?;
    if isometries.is_empty() {
        return Err(Error::EmptyInput("isometries"));
    }
    let dim = isometries[0].dim();
    let start = vec![0.0; dim];
    match fixed_point(&isometries, &start, orbit_cap, cli.seed) {
        Ok(outcome) => {
            let text = format!(
                "center: {:?}\nradius: {}\norbit size: {}\nmax displacement: {}\n",
                outcome.center, outcome.radius, outcome.orbit_size, outcome.max_displacement
            );
            emit(
                cli.json,
                &json!({
                    "center": outcome.center,
                    "radius": outcome.radius,
                    "orbit_size": outcome.orbit_size,
                    "max_displacement": outcome.max_displacement,
                }),
                &text,
            );
            Ok(0)
        }
        Err(Error::OrbitCap(cap)) => {
            let text = format!(
                "verdict: fail\nthe orbit did not close within {cap} points; the generated group is not finite at this cap\n"
            );
            emit(cli.json, &json!({ "verdict": "fail", "orbit_cap": cap }), &text);
            Ok(1)
        }
        Err(e) => Err(e),
    }
}

/// Looseness allowed when hunting midpoints among sampled cone points.
const CONE_MID_TOL: f64 = 1e-6;

fn cone(input: &Path, kappa: f64, radii: &[f64], tol: f64, json_mode: bool) -> Result<u8, Error> {
    let doc: MetricSpaceDoc = read_json(input)?;
    let base = doc.build()?;
    let report = berestovskii_probe(Kappa::new(kappa)?, &base, radii, CONE_MID_TOL, tol)?;
    let inventory = format!(
        "base points: {}, radii: {:?}, cone points: {}",
        base.len(),
        radii,
        1 + base.len() * radii.len()
    );
    let mut text = String::new();
    render_cat_report(&report, &mut text);
    text.push_str(&inventory);
    text.push('\n');
    emit(json_mode, &json!({ "report": report, "inventory": inventory }), &text);
    Ok(u8::from(!report.passed()))
}

fn cohomology(input: &Path, maxdeg: usize, json_mode: bool) -> Result<u8, Error> {
    let graph = read_graph(input)?;
    let validation = graph.validate();
    if !validation.is_valid() {
        let mut text = String::from("verdict: fail\n");
        for v in &validation.violations {
            text.push_str(&format!("violation: {} ({})\n", v.rule, v.witness));
        }
        emit(json_mode, &json!({ "valid": false }), &text);
        return Ok(1);
    }
    let algebra = build_gamma_algebra(&graph)?;
    let probe = conjecture_probe(&graph, maxdeg)?;
    let betti = f2_betti(&graph)?;
    let mut text = String::new();
    {
        use std::fmt::Write;
        writeln!(text, "{}", verdict_line(probe.all_match)).unwrap();
        writeln!(text, "generators: {}", algebra.generators().join(", ")).unwrap();
        writeln!(text, "relations: {}", algebra.relation_strings().join(", ")).unwrap();
        let dim_strings: Vec<String> = probe.dims.iter().map(u64::to_string).collect();
        writeln!(text, "graded dimensions (maxdeg {maxdeg}): {}", dim_strings.join(", "))
            .unwrap();
        let clique_strings: Vec<String> =
            probe.clique_counts.iter().map(u64::to_string).collect();
        writeln!(text, "clique counts: {}", clique_strings.join(", ")).unwrap();
        writeln!(text, "ambiguous rule-4 sites: {}", probe.ambiguous_rule4).unwrap();
        writeln!(text, "note: {}", betti.assumption).unwrap();
    }
    emit(
        json_mode,
        &json!({
            "generators": algebra.generators(),
            "relations": algebra.relation_strings(),
            "dims": probe.dims,
            "clique_counts": probe.clique_counts,
            "all_match": probe.all_match,
            "ambiguous_rule4": probe.ambiguous_rule4,
            "betti_note": betti.assumption,
        }),
        &text,
    );
    Ok(u8::from(!probe.all_match))
}

fn graph_of_groups_cmd(input: &Path, json_mode: bool) -> Result<u8, Error> {
    let graph = read_graph(input)?;
    let validation = graph.validate();
    if !validation.is_valid() {
        let mut text = String::from("verdict: fail\n");
        for v in &validation.violations {
            text.push_str(&format!("violation: {} ({})\n", v.rule, v.witness));
        }
        emit(json_mode, &json!({ "valid": false }), &text);
        return Ok(1);
    }
    let naive = graph.naive();
    if !naive.is_chordal() {
        let text = "verdict: fail\nthe underlying graph is not chordal, so it has no clique tree\n";
        emit(json_mode, &json!({ "chordal": false, "verdict": "fail" }), text);
        return Ok(1);
    }
    let tree = naive.clique_tree()?;
    tree.verify()?;
    let gog = graph_of_groups::build(&graph, &tree)?;
    let pi1 = graph_of_groups::pi1_presentation(&gog)?;
    let whole = presentation(&graph)?;
    let matches = graph_of_groups::compare_presentations(&pi1, &whole);
    let rows = graph_of_groups::exact_rows_check(&graph, &gog)?;

    let node_labels: Vec<String> = gog
        .cliques
        .iter()
        .map(|c| format!("{{{}}}", naive.clique_label(c).join(", ")))
        .collect();
    let edge_lines: Vec<String> = gog
        .edges
        .iter()
        .map(|e| {
            format!(
                "{} -- {} over {{{}}}",
                node_labels[e.ends.0],
                node_labels[e.ends.1],
                e.shared
                    .iter()
                    .map(|&v| graph.vertex_name(v).to_string())
                    .collect::<Vec<_>>()
                    .join(", ")
            )
        })
        .collect();
    let passed = matches && rows.passed;
    let mut text = String::new();
    {
        use std::fmt::Write;
        writeln!(text, "{}", verdict_line(passed)).unwrap();
        writeln!(text, "clique-tree nodes: {}", node_labels.join(" ")).unwrap();
        for line in &edge_lines {
            writeln!(text, "gluing: {line}").unwrap();
        }
        writeln!(text, "reassembled equals whole presentation: {matches}").unwrap();
        writeln!(text, "index and inclusion audit passed: {}", rows.passed).unwrap();
    }
    emit(
        json_mode,
        &json!({
            "chordal": true,
            "nodes": node_labels,
            "gluings": edge_lines,
            "presentation_matches": matches,
            "rows_passed": rows.passed,
        }),
        &text,
    );
    Ok(u8::from(!passed))
}

fn cayley(input: &Path, radius: usize, json_mode: bool) -> Result<u8, Error> {
    let graph = read_graph(input)?;
    let ball = cayley_ball(&graph, radius)?;
    let complex = ball_cube_complex(&graph, &ball)?;
    let report = complex.gromov_report()?;
    let cube_vector = complex.cube_vector();
    let mut text = format!(
        "{}\nball radius: {}\nelements: {}\ncubes by dimension: {:?}\n",
        verdict_line(report.all_links_flag),
        radius,
        ball.len(),
        cube_vector
    );
    for f in report.failures.iter().take(5) {
        text.push_str(&format!(
            "witness: link of element {} holds the hollow clique {:?}\n",
            f.vertex, f.witness
        ));
    }
    if report.failures.len() > 5 {
        text.push_str(&format!("... and {} more failures\n", report.failures.len() - 5));
    }
    emit(
        json_mode,
        &json!({
            "radius": radius,
            "elements": ball.len(),
            "cubes_by_dimension": cube_vector,
            "all_links_flag": report.all_links_flag,
            "failures": report.failures,
        }),
        &text,
    );
    Ok(u8::from(!report.all_links_flag))
}
