//! `bgm`: command-line front end for the binary graph model toolkit.
//!
//! Graphs are referred to either by a catalog name (K3, C5, K23, prism,
//! ...) or by a path to a graph file, text or JSON.  Exit codes: 0
//! success, 1 mismatch or verification failure, 2 usage error, 3 budget
//! or capability limits hit with partial results.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use bgm_core::basis::{self, FiberVerdict, WidthStatus};
use bgm_core::model::{cell_string, is_move};
use bgm_core::io::{
    graph_from_text, table_from_text, CertificateDoc, GraphDoc, MoveDoc, ReportDoc,
};
use bgm_core::{catalog, classify, forest, Error, Graph, Move, Result, Table};

const DEFAULT_BUDGET: u64 = 5_000_000;

#[derive(Parser)]
#[command(name = "bgm", version, about = "Markov bases of binary graph models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Print the 0-1 marginal matrix of a graph.
    Matrix {
        #[arg(long)]
        graph: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Per-degree minimal generator counts and representatives.
    Basis {
        #[arg(long)]
        graph: String,
        /// Top degree to sweep; defaults to the certified width bound.
        #[arg(long)]
        dmax: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Markov width, flagged exact only when the stopping degree is
    /// certified.
    Width {
        #[arg(long)]
        graph: String,
        #[arg(long)]
        dmax: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Structural classification of low-degree generators with
    /// provenance.
    Classify {
        #[arg(long)]
        graph: String,
        #[arg(long, default_value_t = 3)]
        dmax: usize,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact degree of the variety of a forest model.
    ForestDegree {
        #[arg(long)]
        graph: String,
        /// Cross-check against the standard-monomial count.
        #[arg(long)]
        oracle: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check fiber connectivity of a proposed move set.
    Verify {
        #[arg(long)]
        graph: String,
        /// JSON file with a list of moves.
        #[arg(long)]
        moves: PathBuf,
        #[arg(long, default_value_t = 4)]
        dmax: usize,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Random walk on the fiber of a start table.
    Sample {
        #[arg(long)]
        graph: String,
        /// Start table file (text form).
        #[arg(long)]
        start: PathBuf,
        /// Move set file; computed from the basis when absent.
        #[arg(long)]
        moves: Option<PathBuf>,
        #[arg(long)]
        dmax: Option<usize>,
        #[arg(long, default_value_t = 10_000)]
        steps: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recompute the generator-count table and diff it against the
    /// checked-in fixture.
    ReproduceTable {
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        /// Alternative fixture file.
        #[arg(long)]
        fixture: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-validate a reduction certificate file.
    Replay {
        #[arg(long)]
        cert: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Argument(_) | Error::Parse { .. } => 2,
                Error::Capability(_) | Error::Budget { .. } => 3,
            })
        }
    }
}

fn load_graph(spec: &str) -> Result<Graph> {
    if let Some(g) = catalog::by_name(spec) {
        return Ok(g);
    }
    let text = fs::read_to_string(spec)
        .map_err(|e| Error::argument(format!("cannot read graph {spec:?}: {e}")))?;
    if text.trim_start().starts_with('{') {
        let doc: GraphDoc = serde_json::from_str(&text)
            .map_err(|e| Error::parse(e.line(), e.to_string()))?;
        doc.to_graph()
    } else {
        graph_from_text(&text)
    }
}

fn emit(out: &Option<PathBuf>, s: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, s)
            .map_err(|e| Error::argument(format!("cannot write {path:?}: {e}"))),
        None => {
            print!("{s}");
            Ok(())
        }
    }
}

/// `--dmax` wins; otherwise the certified bound; otherwise an error,
/// since an unbounded sweep has no stopping rule.
fn resolve_dmax(g: &Graph, dmax: Option<usize>) -> Result<(usize, bool)> {
    let bound = catalog::certified_width_bound(g);
    let d = match dmax.or(bound) {
        Some(d) => d,
        None => {
            return Err(Error::argument(
                "no certified width bound for this graph; pass --dmax",
            ))
        }
    };
    Ok((d, bound.is_some_and(|b| d >= b)))
}

fn run(command: Command) -> Result<u8> {
    match command {
        Command::Matrix { graph, format, out } => cmd_matrix(&graph, format, &out),
        Command::Basis {
            graph,
            dmax,
            budget,
            format,
            out,
        } => cmd_basis(&graph, dmax, budget, format, &out),
        Command::Width {
            graph,
            dmax,
            budget,
            out,
        } => cmd_width(&graph, dmax, budget, &out),
        Command::Classify {
            graph,
            dmax,
            budget,
            out,
        } => cmd_classify(&graph, dmax, budget, &out),
        Command::ForestDegree {
            graph,
            oracle,
            format,
            out,
        } => cmd_forest_degree(&graph, oracle, format, &out),
        Command::Verify {
            graph,
            moves,
            dmax,
            budget,
            out,
        } => cmd_verify(&graph, &moves, dmax, budget, &out),
        Command::Sample {
            graph,
            start,
            moves,
            dmax,
            steps,
            seed,
            budget,
            out,
        } => cmd_sample(&graph, &start, &moves, dmax, steps, seed, budget, &out),
        Command::ReproduceTable {
            budget,
            fixture,
            format,
            out,
        } => cmd_reproduce_table(budget, &fixture, format, &out),
        Command::Replay { cert, out } => cmd_replay(&cert, &out),
    }
}

fn cmd_matrix(graph: &str, format: Format, out: &Option<PathBuf>) -> Result<u8> {
    let g = load_graph(graph)?;
    let rows = bgm_core::model::marginal_matrix(&g)?;
    let rank = bgm_core::model::integer_rank(&rows);
    let body = match format {
        Format::Json => {
            let doc = serde_json::json!({
                "graph": GraphDoc::of(&g),
                "rows": rows,
                "rank": rank,
            });
            format!("{}\n", serde_json::to_string_pretty(&doc).unwrap())
        }
        Format::Csv => rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|b| b.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
                    + "\n"
            })
            .collect(),
        Format::Text => rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|b| b.to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
                    + "\n"
            })
            .collect(),
    };
    emit(out, &body)?;
    Ok(0)
}

fn cmd_basis(
    graph: &str,
    dmax: Option<usize>,
    budget: u64,
    format: Format,
    out: &Option<PathBuf>,
) -> Result<u8> {
    let g = load_graph(graph)?;
    let (dmax, justified) = resolve_dmax(&g, dmax)?;
    let report = basis::markov_basis_up_to(&g, dmax, budget, justified)?;
    let partial = report.partial.is_some();
    let doc = ReportDoc::of(&report);
    let body = match format {
        Format::Json => format!("{}\n", serde_json::to_string_pretty(&doc).unwrap()),
        Format::Csv => {
            let mut s = String::from("degree,count\n");
            for (d, summary) in &report.per_degree {
                s.push_str(&format!("{d},{}\n", summary.count));
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for (d, summary) in &report.per_degree {
                s.push_str(&format!("degree {d}: {} generators\n", summary.count));
            }
            let exact = if report.width.is_exact() { "" } else { " (lower bound)" };
            s.push_str(&format!("width: {}{exact}\n", report.width.value()));
            if let Some(reason) = &report.partial {
                s.push_str(&format!("partial: {reason}\n"));
            }
            s
        }
    };
    emit(out, &body)?;
    Ok(if partial { 3 } else { 0 })
}

fn cmd_width(
    graph: &str,
    dmax: Option<usize>,
    budget: u64,
    out: &Option<PathBuf>,
) -> Result<u8> {
    let g = load_graph(graph)?;
    let (dmax, justified) = resolve_dmax(&g, dmax)?;
    let report = basis::markov_basis_up_to(&g, dmax, budget, justified)?;
    let doc = serde_json::json!({
        "exact": report.width.is_exact(),
        "value": report.width.value(),
    });
    emit(out, &format!("{doc}\n"))?;
    Ok(if report.partial.is_some() { 3 } else { 0 })
}

fn provenance_json(p: &classify::Provenance, n: usize) -> serde_json::Value {
    match p {
        classify::Provenance::Degree2 { v1, v2, v3 } => serde_json::json!({
            "kind": "degree2-partition",
            "v1": v1, "v2": v2, "v3": v3,
        }),
        classify::Provenance::ColoringPair {
            minor,
            left,
            right,
            flip,
        } => serde_json::json!({
            "kind": "coloring-pair",
            "minor": GraphDoc::of(minor),
            "left": left,
            "right": right,
            "flip": cell_string(*flip, n),
        }),
        classify::Provenance::Pullback { degree, assignment } => serde_json::json!({
            "kind": "pullback",
            "degree": degree,
            "assignment": assignment,
        }),
    }
}

fn cmd_classify(
    graph: &str,
    dmax: usize,
    budget: u64,
    out: &Option<PathBuf>,
) -> Result<u8> {
    let g = load_graph(graph)?;
    let n = g.vertex_count();
    if dmax < 2 {
        return Err(Error::argument("classification starts at degree 2"));
    }
    let mut degrees = serde_json::Map::new();
    let classes: Vec<serde_json::Value> = classify::degree2_classes(&g)
        .iter()
        .map(|c| {
            serde_json::json!({
                "v1": c.v1, "v2": c.v2, "v3": c.v3,
                "move": MoveDoc::of(&c.representative, n),
            })
        })
        .collect();
    degrees.insert("2".into(), serde_json::json!({ "classes": classes }));
    let candidate_json = |c: &classify::GeneratorCandidate| {
        serde_json::json!({
            "move": MoveDoc::of(&c.mv, n),
            "minimal": c.minimal,
            "provenance": provenance_json(&c.provenance, n),
        })
    };
    if dmax >= 3 {
        let gens: Vec<serde_json::Value> = classify::degree3_generators(&g, true, budget)?
            .iter()
            .map(candidate_json)
            .collect();
        degrees.insert("3".into(), serde_json::json!({ "generators": gens }));
    }
    for d in 4..=dmax {
        let cands: Vec<serde_json::Value> = classify::pullback_candidates(&g, d, budget)?
            .iter()
            .map(candidate_json)
            .collect();
        degrees.insert(d.to_string(), serde_json::json!({ "candidates": cands }));
    }
    let doc = serde_json::json!({
        "graph": GraphDoc::of(&g),
        "degrees": degrees,
    });
    emit(out, &format!("{}\n", serde_json::to_string_pretty(&doc).unwrap()))?;
    Ok(0)
}

fn cmd_forest_degree(
    graph: &str,
    oracle: bool,
    format: Format,
    out: &Option<PathBuf>,
) -> Result<u8> {
    let g = load_graph(graph)?;
    let degree = forest::forest_degree(&g)?;
    let oracle_value = if oracle {
        Some(forest::degree_oracle(&g)?)
    } else {
        None
    };
    let agree = oracle_value.as_ref().map(|o| *o == degree);
    let body = match format {
        Format::Json => {
            let doc = serde_json::json!({
                "degree": degree.to_string(),
                "oracle": oracle_value.as_ref().map(|o| o.to_string()),
            });
            format!("{doc}\n")
        }
        _ => match &oracle_value {
            Some(o) => format!("{degree} (oracle: {o})\n"),
            None => format!("{degree}\n"),
        },
    };
    emit(out, &body)?;
    match agree {
        Some(false) => {
            eprintln!("error: oracle disagrees with the recursion");
            Ok(1)
        }
        _ => Ok(0),
    }
}

fn load_moves(path: &PathBuf, g: &Graph) -> Result<Vec<Move>> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::argument(format!("cannot read moves {path:?}: {e}")))?;
    let docs: Vec<MoveDoc> = serde_json::from_str(&text)
        .map_err(|e| Error::parse(e.line(), e.to_string()))?;
    let mut moves = Vec::new();
    for doc in &docs {
        let (m, width) = doc.to_move()?;
        if width != g.vertex_count() {
            return Err(Error::argument(format!(
                "move width {width} does not match a graph on {} vertices",
                g.vertex_count()
            )));
        }
        if !is_move(g, &m) {
            return Err(Error::argument(format!("not a move for this graph: {m}")));
        }
        moves.push(m);
    }
    Ok(moves)
}

fn cmd_verify(
    graph: &str,
    moves_path: &PathBuf,
    dmax: usize,
    budget: u64,
    out: &Option<PathBuf>,
) -> Result<u8> {
    let g = load_graph(graph)?;
    let moves = load_moves(moves_path, &g)?;
    let mut connected = 0u64;
    let mut skipped = Vec::new();
    let mut witnesses = Vec::new();
    for d in 2..=dmax {
        let fibers = match basis::degree_d_fibers(&g, d, budget) {
            Ok(f) => f,
            Err(Error::Capability(msg)) => {
                skipped.push(format!("degree {d}: {msg}"));
                continue;
            }
            Err(e) => return Err(e),
        };
        let keys: Vec<_> = fibers.keys().cloned().collect();
        for verdict in basis::verify_markov_basis(&g, &moves, &keys, budget) {
            match verdict {
                FiberVerdict::Connected { .. } => connected += 1,
                FiberVerdict::Skipped { reason } => skipped.push(reason),
                FiberVerdict::Disconnected { left, right } => {
                    let n = g.vertex_count();
                    witnesses.push(serde_json::json!({
                        "degree": d,
                        "left": left.cells().iter().map(|&c| cell_string(c, n)).collect::<Vec<_>>(),
                        "right": right.cells().iter().map(|&c| cell_string(c, n)).collect::<Vec<_>>(),
                    }));
                }
            }
        }
    }
    let disconnected = witnesses.len();
    let doc = serde_json::json!({
        "moves": moves.len(),
        "connected_fibers": connected,
        "disconnected_fibers": disconnected,
        "skipped": skipped,
        "witnesses": witnesses,
    });
    emit(out, &format!("{}\n", serde_json::to_string_pretty(&doc).unwrap()))?;
    Ok(if disconnected > 0 {
        1
    } else if !skipped.is_empty() {
        3
    } else {
        0
    })
}

#[allow(clippy::too_many_arguments)]
fn cmd_sample(
    graph: &str,
    start: &PathBuf,
    moves: &Option<PathBuf>,
    dmax: Option<usize>,
    steps: u64,
    seed: u64,
    budget: u64,
    out: &Option<PathBuf>,
) -> Result<u8> {
    let g = load_graph(graph)?;
    let n = g.vertex_count();
    let text = fs::read_to_string(start)
        .map_err(|e| Error::argument(format!("cannot read table {start:?}: {e}")))?;
    let (start_table, width) = table_from_text(&text)?;
    if width != n {
        return Err(Error::argument(format!(
            "table width {width} does not match a graph on {n} vertices"
        )));
    }
    let moves = match moves {
        Some(path) => load_moves(path, &g)?,
        None => {
            let (dmax, justified) = resolve_dmax(&g, dmax)?;
            basis::markov_basis_up_to(&g, dmax, budget, justified)?.moves()
        }
    };
    let walk = basis::random_walk(&g, &moves, &start_table, steps, seed)?;
    let cells = |t: &Table| {
        t.cells()
            .iter()
            .map(|&c| cell_string(c, n))
            .collect::<Vec<_>>()
    };
    let visited: Vec<serde_json::Value> = walk
        .visited
        .iter()
        .map(|(t, count)| serde_json::json!({ "table": cells(t), "count": count }))
        .collect();
    let doc = serde_json::json!({
        "seed": seed,
        "steps": steps,
        "accepted": walk.accepted,
        "rejected": walk.rejected,
        "end": cells(&walk.end),
        "distinct_tables": walk.visited.len(),
        "visited": visited,
    });
    emit(out, &format!("{}\n", serde_json::to_string_pretty(&doc).unwrap()))?;
    Ok(0)
}

struct FixtureRow {
    graph: String,
    counts: [u64; 5],
    total: u64,
    width: usize,
}

const FIXTURE_DEGREES: [usize; 5] = [2, 4, 6, 8, 10];

fn parse_fixture(text: &str) -> Result<Vec<FixtureRow>> {
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || i == 0 {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 8 {
            return Err(Error::parse(i + 1, format!("expected 8 fields, got {}", fields.len())));
        }
        let num = |k: usize| -> Result<u64> {
            fields[k]
                .trim()
                .parse()
                .map_err(|_| Error::parse(i + 1, format!("bad number {:?}", fields[k])))
        };
        rows.push(FixtureRow {
            graph: fields[0].trim().to_string(),
            counts: [num(1)?, num(2)?, num(3)?, num(4)?, num(5)?],
            total: num(6)?,
            width: num(7)? as usize,
        });
    }
    if rows.is_empty() {
        return Err(Error::parse(1, "empty fixture"));
    }
    Ok(rows)
}

struct DiffLine {
    graph: String,
    item: String,
    expected: u64,
    computed: Option<u64>,
    status: &'static str,
}

fn cmd_reproduce_table(
    budget: u64,
    fixture: &Option<PathBuf>,
    format: Format,
    out: &Option<PathBuf>,
) -> Result<u8> {
    let text = match fixture {
        Some(path) => fs::read_to_string(path)
            .map_err(|e| Error::argument(format!("cannot read fixture {path:?}: {e}")))?,
        None => include_str!("../data/table2.csv").to_string(),
    };
    let rows = parse_fixture(&text)?;
    let mut lines = Vec::new();
    for row in &rows {
        let g = catalog::by_name(&row.graph)
            .ok_or_else(|| Error::argument(format!("unknown graph {:?} in fixture", row.graph)))?;
        let bound = catalog::certified_width_bound(&g);
        let dmax = 10;
        let justified = bound.is_some_and(|b| dmax >= b);
        let report = basis::markov_basis_up_to(&g, dmax, budget, justified)?;
        for (k, &d) in FIXTURE_DEGREES.iter().enumerate() {
            let expected = row.counts[k];
            let computed = report.per_degree.get(&d).map(|s| s.count);
            let status = match computed {
                Some(c) if c == expected => "ok",
                Some(_) => "mismatch",
                None => "skipped",
            };
            lines.push(DiffLine {
                graph: row.graph.clone(),
                item: d.to_string(),
                expected,
                computed,
                status,
            });
        }
        // Odd degrees must come out empty wherever they were computed.
        for (&d, summary) in &report.per_degree {
            if d % 2 == 1 {
                lines.push(DiffLine {
                    graph: row.graph.clone(),
                    item: d.to_string(),
                    expected: 0,
                    computed: Some(summary.count),
                    status: if summary.count == 0 { "ok" } else { "mismatch" },
                });
            }
        }
        let total: Option<u64> = FIXTURE_DEGREES
            .iter()
            .map(|d| report.per_degree.get(d).map(|s| s.count))
            .sum();
        if let Some(total) = total {
            lines.push(DiffLine {
                graph: row.graph.clone(),
                item: "total".into(),
                expected: row.total,
                computed: Some(total),
                status: if total == row.total { "ok" } else { "mismatch" },
            });
        }
        let width_status = match report.width {
            WidthStatus::Exact(w) if w == row.width => "ok",
            WidthStatus::Exact(_) => "mismatch",
            // A partial sweep only bounds the width from below.
            WidthStatus::AtLeast(w) if w <= row.width => "skipped",
            WidthStatus::AtLeast(_) => "mismatch",
        };
        lines.push(DiffLine {
            graph: row.graph.clone(),
            item: "width".into(),
            expected: row.width as u64,
            computed: Some(report.width.value() as u64),
            status: width_status,
        });
    }
    let mismatches = lines.iter().filter(|l| l.status == "mismatch").count();
    let skips = lines.iter().filter(|l| l.status == "skipped").count();
    let render_computed =
        |l: &DiffLine| l.computed.map_or("-".to_string(), |c| c.to_string());
    let body = match format {
        Format::Json => {
            let items: Vec<serde_json::Value> = lines
                .iter()
                .map(|l| {
                    serde_json::json!({
                        "graph": l.graph,
                        "item": l.item,
                        "expected": l.expected,
                        "computed": l.computed,
                        "status": l.status,
                    })
                })
                .collect();
            format!(
                "{}\n",
                serde_json::to_string_pretty(&serde_json::json!({
                    "lines": items,
                    "mismatches": mismatches,
                    "skipped": skips,
                }))
                .unwrap()
            )
        }
        Format::Csv => {
            let mut s = String::from("graph,item,expected,computed,status\n");
            for l in &lines {
                s.push_str(&format!(
                    "{},{},{},{},{}\n",
                    l.graph,
                    l.item,
                    l.expected,
                    render_computed(l),
                    l.status
                ));
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for l in &lines {
                s.push_str(&format!(
                    "{:8} {:>5} expected {:>6} computed {:>7} {}\n",
                    l.graph,
                    l.item,
                    l.expected,
                    render_computed(l),
                    l.status
                ));
            }
            s.push_str(&format!("{mismatches} mismatches, {skips} skipped\n"));
            s
        }
    };
    emit(out, &body)?;
    Ok(if mismatches > 0 {
        1
    } else if skips > 0 {
        3
    } else {
        0
    })
}

fn cmd_replay(cert: &PathBuf, out: &Option<PathBuf>) -> Result<u8> {
    let text = fs::read_to_string(cert)
        .map_err(|e| Error::argument(format!("cannot read certificate {cert:?}: {e}")))?;
    let doc: CertificateDoc = serde_json::from_str(&text)
        .map_err(|e| Error::parse(e.line(), e.to_string()))?;
    let (g, certificate) = doc.to_certificate()?;
    match certificate.validate(&g) {
        Ok(()) => {
            let summary = serde_json::json!({
                "valid": true,
                "steps": certificate.path.len(),
                "degree": certificate.start.degree(),
            });
            emit(out, &format!("{summary}\n"))?;
            Ok(0)
        }
        Err(e) => {
            eprintln!("error: invalid certificate: {e}");
            let summary = serde_json::json!({
                "valid": false,
                "reason": e.to_string(),
            });
            emit(out, &format!("{summary}\n"))?;
            Ok(1)
        }
    }
}
