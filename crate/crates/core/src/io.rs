//! Text and JSON codecs: graphs, tables, tableau-printed moves, basis
//! reports, and reduction certificates.  Every writer has a parser that
//! round-trips to an equal value.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::basis::{BasisReport, DegreeSummary, WidthStatus};
use crate::error::{Error, Result};
use crate::families::ReductionCertificate;
use crate::graph::Graph;
use crate::model::{cell_string, parse_cell, Move, Table};

/// Text form: first line the vertex count, then one `u v` pair per line.
pub fn graph_to_text(g: &Graph) -> String {
    let mut out = format!("{}\n", g.vertex_count());
    for (u, v) in g.edge_list() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

pub fn graph_from_text(s: &str) -> Result<Graph> {
    let mut lines = s
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (line, first) = lines
        .next()
        .ok_or_else(|| Error::parse(1, "empty graph file"))?;
    let n: usize = first
        .parse()
        .map_err(|_| Error::parse(line, format!("expected vertex count, got {first:?}")))?;
    let mut edges = Vec::new();
    for (line, l) in lines {
        let mut it = l.split_whitespace();
        let parse_end = |tok: Option<&str>| -> Result<u32> {
            tok.ok_or_else(|| Error::parse(line, "expected `u v`"))?
                .parse()
                .map_err(|_| Error::parse(line, format!("bad vertex id in {l:?}")))
        };
        let u = parse_end(it.next())?;
        let v = parse_end(it.next())?;
        if it.next().is_some() {
            return Err(Error::parse(line, format!("trailing tokens in {l:?}")));
        }
        edges.push((u, v));
    }
    Graph::with_edges(n, &edges)
}

/// JSON mirror of the graph text format.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDoc {
    pub n: usize,
    pub edges: Vec<(u32, u32)>,
}

impl GraphDoc {
    pub fn of(g: &Graph) -> GraphDoc {
        GraphDoc {
            n: g.vertex_count(),
            edges: g.edge_list(),
        }
    }

    pub fn to_graph(&self) -> Result<Graph> {
        Graph::with_edges(self.n, &self.edges)
    }
}

/// Text form: one `bitstring count` line per distinct cell.
pub fn table_to_text(t: &Table, n: usize) -> String {
    let mut out = String::new();
    for (cell, count) in t.counts() {
        out.push_str(&format!("{} {}\n", cell_string(cell, n), count));
    }
    out
}

/// Parses a table; the bit-width is taken from the first cell.
pub fn table_from_text(s: &str) -> Result<(Table, usize)> {
    let mut counts: BTreeMap<u128, u32> = BTreeMap::new();
    let mut width: Option<usize> = None;
    for (i, l) in s.lines().enumerate() {
        let line = i + 1;
        let l = l.trim();
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        let mut it = l.split_whitespace();
        let bits = it.next().unwrap();
        let (cell, n) =
            parse_cell(bits).map_err(|e| Error::parse(line, format!("{e}")))?;
        match width {
            None => width = Some(n),
            Some(w) if w != n => {
                return Err(Error::parse(line, "inconsistent cell widths"))
            }
            _ => {}
        }
        let count: u32 = it
            .next()
            .ok_or_else(|| Error::parse(line, "expected `bitstring count`"))?
            .parse()
            .map_err(|_| Error::parse(line, format!("bad count in {l:?}")))?;
        if it.next().is_some() {
            return Err(Error::parse(line, format!("trailing tokens in {l:?}")));
        }
        *counts.entry(cell).or_insert(0) += count;
    }
    let width = width.ok_or_else(|| Error::parse(1, "empty table"))?;
    Ok((Table::from_counts(&counts), width))
}

/// The paper's tableau print of a move: one bracketed index-string row
/// per variable occurrence (rows repeat for exponents above 1), the two
/// blocks separated by a `-` line.
pub fn move_to_tableau(m: &Move, n: usize) -> String {
    let block = |t: &Table| -> String {
        t.cells()
            .iter()
            .map(|&c| {
                let bits: Vec<String> = (0..n)
                    .map(|i| crate::model::cell_bit(c, i, n).to_string())
                    .collect();
                format!("[ {} ]\n", bits.join(" "))
            })
            .collect()
    };
    format!("{}-\n{}", block(&m.plus), block(&m.minus))
}

pub fn move_from_tableau(s: &str) -> Result<(Move, usize)> {
    let mut blocks: Vec<Vec<u128>> = vec![Vec::new()];
    let mut width: Option<usize> = None;
    for (i, l) in s.lines().enumerate() {
        let line = i + 1;
        let l = l.trim();
        if l.is_empty() {
            continue;
        }
        if l == "-" {
            blocks.push(Vec::new());
            continue;
        }
        let inner = l
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| Error::parse(line, format!("expected bracketed row, got {l:?}")))?;
        let bits: String = inner.split_whitespace().collect();
        let (cell, n) =
            parse_cell(&bits).map_err(|e| Error::parse(line, format!("{e}")))?;
        match width {
            None => width = Some(n),
            Some(w) if w != n => return Err(Error::parse(line, "inconsistent row widths")),
            _ => {}
        }
        blocks.last_mut().unwrap().push(cell);
    }
    if blocks.len() != 2 {
        return Err(Error::parse(
            s.lines().count(),
            format!("expected two blocks separated by `-`, got {}", blocks.len()),
        ));
    }
    let width = width.ok_or_else(|| Error::parse(1, "empty tableau"))?;
    let minus = Table::from_cells(blocks.pop().unwrap());
    let plus = Table::from_cells(blocks.pop().unwrap());
    Ok((Move::new(plus, minus), width))
}

/// JSON form of a move: the two blocks as lists of index strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveDoc {
    pub plus: Vec<String>,
    pub minus: Vec<String>,
}

impl MoveDoc {
    pub fn of(m: &Move, n: usize) -> MoveDoc {
        let strings =
            |t: &Table| t.cells().iter().map(|&c| cell_string(c, n)).collect();
        MoveDoc {
            plus: strings(&m.plus),
            minus: strings(&m.minus),
        }
    }

    pub fn to_move(&self) -> Result<(Move, usize)> {
        let mut width: Option<usize> = None;
        let mut parse_block = |cells: &[String]| -> Result<Table> {
            let mut out = Vec::new();
            for s in cells {
                let (cell, n) = parse_cell(s)?;
                match width {
                    None => width = Some(n),
                    Some(w) if w != n => {
                        return Err(Error::argument("inconsistent cell widths"))
                    }
                    _ => {}
                }
                out.push(cell);
            }
            Ok(Table::from_cells(out))
        };
        let plus = parse_block(&self.plus)?;
        let minus = parse_block(&self.minus)?;
        let width = width.ok_or_else(|| Error::argument("empty move"))?;
        Ok((Move::new(plus, minus), width))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeDoc {
    pub count: u64,
    pub reps: Vec<MoveDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WidthDoc {
    pub exact: bool,
    pub value: usize,
}

/// JSON form of a basis report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportDoc {
    pub graph: GraphDoc,
    pub degrees: BTreeMap<String, DegreeDoc>,
    pub width: WidthDoc,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub partial: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partial_reason: Option<String>,
}

impl ReportDoc {
    pub fn of(report: &BasisReport) -> ReportDoc {
        let n = report.graph.vertex_count();
        let degrees = report
            .per_degree
            .iter()
            .map(|(d, summary)| {
                (
                    d.to_string(),
                    DegreeDoc {
                        count: summary.count,
                        reps: summary
                            .representatives
                            .iter()
                            .map(|m| MoveDoc::of(m, n))
                            .collect(),
                    },
                )
            })
            .collect();
        ReportDoc {
            graph: GraphDoc::of(&report.graph),
            degrees,
            width: WidthDoc {
                exact: report.width.is_exact(),
                value: report.width.value(),
            },
            partial: report.partial.is_some(),
            partial_reason: report.partial.clone(),
        }
    }

    pub fn to_report(&self) -> Result<BasisReport> {
        let graph = self.graph.to_graph()?;
        let mut per_degree = BTreeMap::new();
        for (d, doc) in &self.degrees {
            let degree: usize = d
                .parse()
                .map_err(|_| Error::argument(format!("bad degree key {d:?}")))?;
            let representatives = doc
                .reps
                .iter()
                .map(|m| m.to_move().map(|(mv, _)| mv))
                .collect::<Result<Vec<Move>>>()?;
            per_degree.insert(
                degree,
                DegreeSummary {
                    count: doc.count,
                    representatives,
                },
            );
        }
        let width = if self.width.exact {
            WidthStatus::Exact(self.width.value)
        } else {
            WidthStatus::AtLeast(self.width.value)
        };
        Ok(BasisReport {
            graph,
            per_degree,
            width,
            partial: self.partial_reason.clone(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepDoc {
    #[serde(rename = "move")]
    pub mv: MoveDoc,
    pub sign: i8,
}

/// JSON form of a reduction certificate, with the graph it applies to.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateDoc {
    pub graph: GraphDoc,
    pub start: Vec<String>,
    pub end: Vec<String>,
    pub path: Vec<StepDoc>,
}

impl CertificateDoc {
    pub fn of(g: &Graph, cert: &ReductionCertificate) -> CertificateDoc {
        let n = g.vertex_count();
        let strings =
            |t: &Table| t.cells().iter().map(|&c| cell_string(c, n)).collect();
        CertificateDoc {
            graph: GraphDoc::of(g),
            start: strings(&cert.start),
            end: strings(&cert.end),
            path: cert
                .path
                .iter()
                .map(|(m, sign)| StepDoc {
                    mv: MoveDoc::of(m, n),
                    sign: *sign,
                })
                .collect(),
        }
    }

    pub fn to_certificate(&self) -> Result<(Graph, ReductionCertificate)> {
        let g = self.graph.to_graph()?;
        let block = |cells: &[String]| -> Result<Table> {
            let mut out = Vec::new();
            for s in cells {
                out.push(parse_cell(s)?.0);
            }
            Ok(Table::from_cells(out))
        };
        let path = self
            .path
            .iter()
            .map(|s| s.mv.to_move().map(|(m, _)| (m, s.sign)))
            .collect::<Result<Vec<_>>>()?;
        Ok((
            g,
            ReductionCertificate {
                start: block(&self.start)?,
                end: block(&self.end)?,
                path,
            },
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::markov_basis_up_to;
    use crate::catalog;
    use crate::families::{cycle_quartics, cycle_reduce};

    #[test]
    fn graph_text_round_trip() {
        for g in [
            catalog::complete(4),
            catalog::cycle(5),
            catalog::section1_example(),
            Graph::empty(3),
        ] {
            let text = graph_to_text(&g);
            assert_eq!(graph_from_text(&text).unwrap(), g);
            let doc = GraphDoc::of(&g);
            let json = serde_json::to_string(&doc).unwrap();
            let back: GraphDoc = serde_json::from_str(&json).unwrap();
            assert_eq!(back.to_graph().unwrap(), g);
        }
    }

    #[test]
    fn graph_text_errors_carry_line_numbers() {
        let err = graph_from_text("3\n0 1\n0 x\n").unwrap_err();
        assert!(format!("{err}").contains("line 3"), "{err}");
        assert!(graph_from_text("").is_err());
    }

    #[test]
    fn table_text_round_trip() {
        let q = crate::model::tests::k3_quartic();
        let doubled = q.plus.plus(&q.plus);
        for t in [q.plus.clone(), q.minus.clone(), doubled] {
            let text = table_to_text(&t, 3);
            let (back, n) = table_from_text(&text).unwrap();
            assert_eq!(back, t);
            assert_eq!(n, 3);
        }
    }

    #[test]
    fn tableau_round_trip_matches_the_printed_quartic() {
        let q = crate::model::tests::k3_quartic();
        let text = move_to_tableau(&q, 3);
        assert_eq!(
            text,
            "[ 0 0 0 ]\n[ 0 1 1 ]\n[ 1 0 1 ]\n[ 1 1 0 ]\n-\n\
             [ 0 0 1 ]\n[ 0 1 0 ]\n[ 1 0 0 ]\n[ 1 1 1 ]\n"
        );
        let (back, n) = move_from_tableau(&text).unwrap();
        assert_eq!(back, q);
        assert_eq!(n, 3);
    }

    #[test]
    fn tableau_parses_exponent_repetition() {
        // A squared variable appears as a repeated row.
        let text = "[ 0 0 ]\n[ 0 0 ]\n[ 1 1 ]\n-\n[ 0 1 ]\n[ 0 1 ]\n[ 1 0 ]\n";
        let (m, _) = move_from_tableau(text).unwrap();
        assert_eq!(m.plus.count(0b00), 2);
        assert_eq!(m.minus.count(0b01), 2);
    }

    #[test]
    fn move_json_round_trip() {
        for m in cycle_quartics(5).unwrap() {
            let doc = MoveDoc::of(&m, 5);
            let json = serde_json::to_string(&doc).unwrap();
            let back: MoveDoc = serde_json::from_str(&json).unwrap();
            assert_eq!(back.to_move().unwrap(), (m, 5));
        }
    }

    #[test]
    fn report_json_round_trip_and_shape() {
        let report = markov_basis_up_to(&catalog::cycle(4), 4, 10_000_000, true).unwrap();
        let doc = ReportDoc::of(&report);
        let json = serde_json::to_string_pretty(&doc).unwrap();
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(value["width"]["exact"], serde_json::json!(true));
        assert_eq!(value["width"]["value"], serde_json::json!(4));
        assert_eq!(value["degrees"]["2"]["count"], serde_json::json!(8));
        assert!(value.get("partial").is_none());
        let back: ReportDoc = serde_json::from_str(&json).unwrap();
        let report2 = back.to_report().unwrap();
        assert_eq!(report2.graph, report.graph);
        assert_eq!(report2.per_degree, report.per_degree);
        assert_eq!(report2.width, report.width);
    }

    #[test]
    fn certificate_json_round_trip() {
        let g = catalog::cycle(4);
        let q = &cycle_quartics(4).unwrap()[0];
        let cert = cycle_reduce(4, &q.plus, &q.minus).unwrap();
        let doc = CertificateDoc::of(&g, &cert);
        let json = serde_json::to_string(&doc).unwrap();
        let back: CertificateDoc = serde_json::from_str(&json).unwrap();
        let (g2, cert2) = back.to_certificate().unwrap();
        assert_eq!(g2, g);
        cert2.validate(&g2).unwrap();
        assert_eq!(cert2.start, cert.start);
        assert_eq!(cert2.end, cert.end);
    }
}
