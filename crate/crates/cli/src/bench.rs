//! Benchmark table: per document and algorithm, time, mean line width and
//! mesh distance to the zero-padding layout, absolute and relative to
//! Boxes-NS.

use std::time::Instant;

use rocks::metrics;
use rocks::pipeline::{place, Algorithm, Options};
use rocks::LayoutTree;
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub document: String,
    pub algorithm: Algorithm,
    /// Mean over the repeats, milliseconds.
    pub time_ms: f64,
    pub mean_line_width: f64,
    pub mesh_h: f64,
    pub mesh_v: f64,
    /// Ratios to boxes-ns on the same document, when it was measured.
    pub ratios: Option<Ratios>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Ratios {
    pub time: Option<f64>,
    pub mean_line_width: Option<f64>,
    pub mesh_h: Option<f64>,
    pub mesh_v: Option<f64>,
}

fn ratio(a: f64, b: f64) -> Option<f64> {
    (b != 0.0).then(|| a / b)
}

pub fn measure(
    name: &str,
    tree: &LayoutTree,
    algos: &[Algorithm],
    repeat: usize,
    opts: &Options,
) -> Vec<Row> {
    let mut rows: Vec<Row> = algos
        .iter()
        .map(|&a| {
            let start = Instant::now();
            let mut result = None;
            for _ in 0..repeat.max(1) {
                result = Some(place(tree, a, opts));
            }
            let time_ms = start.elapsed().as_secs_f64() * 1e3 / repeat.max(1) as f64;
            let mut row = Row {
                document: name.to_string(),
                algorithm: a,
                time_ms,
                mean_line_width: 0.0,
                mesh_h: 0.0,
                mesh_v: 0.0,
                ratios: None,
                error: None,
            };
            match result.expect("at least one run") {
                Ok(p) => {
                    let reference = rocks::layout::flat_text_placement(tree, opts.line_height);
                    row.mean_line_width = metrics::mean_line_width(tree, &p);
                    match metrics::mesh_distance(
                        &metrics::segments(tree, &reference),
                        &metrics::segments(tree, &p),
                    ) {
                        Ok((h, v)) => (row.mesh_h, row.mesh_v) = (h, v),
                        Err(e) => row.error = Some(e.to_string()),
                    }
                }
                Err(e) => row.error = Some(e.to_string()),
            }
            row
        })
        .collect();
    let base = rows
        .iter()
        .find(|r| r.algorithm == Algorithm::BoxesNs && r.error.is_none())
        .cloned();
    if let Some(b) = base {
        for r in rows.iter_mut().filter(|r| r.error.is_none()) {
            r.ratios = Some(Ratios {
                time: ratio(r.time_ms, b.time_ms),
                mean_line_width: ratio(r.mean_line_width, b.mean_line_width),
                mesh_h: ratio(r.mesh_h, b.mesh_h),
                mesh_v: ratio(r.mesh_v, b.mesh_v),
            });
        }
    }
    rows
}

fn cell(v: Option<f64>) -> String {
    v.map_or("-".to_string(), |x| format!("{x:.2}"))
}

pub fn table(rows: &[Row]) -> String {
    let mut out = format!(
        "{:<24} {:<9} {:>10} {:>9} {:>10} {:>10} {:>7} {:>7} {:>7} {:>7}\n",
        "document",
        "algo",
        "time_ms",
        "width",
        "meshH",
        "meshV",
        "t/bns",
        "w/bns",
        "H/bns",
        "V/bns"
    );
    for r in rows {
        if let Some(e) = &r.error {
            out.push_str(&format!(
                "{:<24} {:<9} error: {e}\n",
                r.document,
                r.algorithm.name()
            ));
            continue;
        }
        let q = r.ratios.as_ref();
        out.push_str(&format!(
            "{:<24} {:<9} {:>10.3} {:>9.1} {:>10.1} {:>10.1} {:>7} {:>7} {:>7} {:>7}\n",
            r.document,
            r.algorithm.name(),
            r.time_ms,
            r.mean_line_width,
            r.mesh_h,
            r.mesh_v,
            cell(q.and_then(|q| q.time)),
            cell(q.and_then(|q| q.mean_line_width)),
            cell(q.and_then(|q| q.mesh_h)),
            cell(q.and_then(|q| q.mesh_v)),
        ));
    }
    out
}
