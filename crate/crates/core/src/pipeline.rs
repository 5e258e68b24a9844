//! One entry point over every layout algorithm, shared by the CLI and the
//! benchmarks.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::baselines::{layout_boxes, layout_sblocks};
use crate::constraints::{layout_l2a, ConstraintError};
use crate::geometry::{Polygon, Rect};
use crate::layout::{flat_text_placement, Placement};
use crate::linebreak::{layout_l2b, BreakParams, LinebreakError};
use crate::model::{LayoutNode, LayoutTree, NodeId, WrapId};
use crate::regions_pure::layout_l1p;
use crate::regions_stateful::{layout_l1s, StatefulLayout};
use crate::simplify::{simplify, Outlines};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    /// Plain text, paddings ignored.
    Flat,
    L1p,
    L1s,
    L2a,
    L2b,
    Boxes,
    BoxesNs,
    #[serde(rename = "sblocks")]
    SBlocks,
}

impl Algorithm {
    pub const ALL: [Algorithm; 8] = [
        Algorithm::Flat,
        Algorithm::L1p,
        Algorithm::L1s,
        Algorithm::L2a,
        Algorithm::L2b,
        Algorithm::Boxes,
        Algorithm::BoxesNs,
        Algorithm::SBlocks,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Flat => "flat",
            Algorithm::L1p => "l1p",
            Algorithm::L1s => "l1s",
            Algorithm::L2a => "l2a",
            Algorithm::L2b => "l2b",
            Algorithm::Boxes => "boxes",
            Algorithm::BoxesNs => "boxes-ns",
            Algorithm::SBlocks => "sblocks",
        }
    }

    /// Whether outlines are padded regions (as opposed to boxes or nothing).
    pub fn has_regions(self) -> bool {
        !matches!(
            self,
            Algorithm::Flat | Algorithm::Boxes | Algorithm::BoxesNs
        )
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Algorithm::ALL.iter().map(|a| a.name()).collect();
                format!(
                    "unknown algorithm {s:?}; expected one of {}",
                    names.join(", ")
                )
            })
    }
}

#[derive(Debug, Clone)]
pub struct Options {
    pub line_height: f64,
    /// Compute wrap outlines at all.
    pub outlines: bool,
    pub simplify: bool,
    /// L2a: unpinned runs share one variable.
    pub grouped: bool,
    pub breaks: BreakParams,
    /// L2b justification width; `None` uses the ideal width.
    pub target_width: Option<f64>,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            line_height: 16.0,
            outlines: true,
            simplify: false,
            grouped: false,
            breaks: BreakParams::new(480.0),
            target_width: None,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    #[error(transparent)]
    Constraint(#[from] ConstraintError),
    #[error(transparent)]
    Linebreak(#[from] LinebreakError),
}

#[derive(Debug, Clone)]
pub struct Output {
    pub algorithm: Algorithm,
    /// The laid-out tree; differs from the input only for L2b.
    pub tree: LayoutTree,
    pub placement: Placement,
    /// Per wrap, outermost first.
    pub outlines: Vec<(WrapId, NodeId, Polygon)>,
    pub warnings: Vec<String>,
}

impl Output {
    /// Zero-padding layout of the same tree, the reference for metrics.
    pub fn reference(&self, line_height: f64) -> Placement {
        flat_text_placement(&self.tree, line_height)
    }
}

fn wrap_outlines(tree: &LayoutTree, o: &Outlines) -> Vec<(WrapId, NodeId, Polygon)> {
    o.wraps(tree).map(|(w, n, p)| (w, n, p.clone())).collect()
}

fn region_outlines(
    tree: &LayoutTree,
    placement: &Placement,
    sigma: impl Fn(NodeId, usize) -> f64,
    opts: &Options,
) -> Vec<(WrapId, NodeId, Polygon)> {
    if !opts.outlines {
        return Vec::new();
    }
    let o = if opts.simplify {
        simplify(tree, placement, sigma, opts.line_height)
    } else {
        Outlines::unsimplified(tree, placement, sigma)
    };
    wrap_outlines(tree, &o)
}

/// Positions only, for timing.
pub fn place(
    tree: &LayoutTree,
    algo: Algorithm,
    opts: &Options,
) -> Result<Placement, PipelineError> {
    let lh = opts.line_height;
    Ok(match algo {
        Algorithm::Flat => flat_text_placement(tree, lh),
        Algorithm::L1p => layout_l1p(tree, lh).placement,
        Algorithm::L1s => StatefulLayout::new(tree).layout(lh),
        Algorithm::L2a => layout_l2a(tree, lh, opts.grouped)?.layout.placement,
        Algorithm::L2b => {
            let target = opts.target_width.unwrap_or(opts.breaks.ideal_width);
            layout_l2b(tree, &opts.breaks, target, lh)?.layout.placement
        }
        Algorithm::Boxes => layout_boxes(tree, true, lh).placement,
        Algorithm::BoxesNs => layout_boxes(tree, false, lh).placement,
        Algorithm::SBlocks => layout_sblocks(tree, lh),
    })
}

pub fn run(tree: &LayoutTree, algo: Algorithm, opts: &Options) -> Result<Output, PipelineError> {
    let lh = opts.line_height;
    let mut warnings = Vec::new();
    let (tree, placement, outlines) = match algo {
        Algorithm::Flat => (tree.clone(), flat_text_placement(tree, lh), Vec::new()),
        Algorithm::L1p => {
            let l = layout_l1p(tree, lh);
            let o = region_outlines(tree, &l.placement, |n, c| l.sigma(n, c), opts);
            (tree.clone(), l.placement, o)
        }
        Algorithm::L1s => {
            let (p, s) = layout_l1s(tree, lh);
            let o = region_outlines(tree, &p, |n, c| s.sigma(n, c), opts);
            (tree.clone(), p, o)
        }
        Algorithm::L2a => {
            let l = layout_l2a(tree, lh, opts.grouped)?.layout;
            let o = region_outlines(tree, &l.placement, |n, c| l.sigma(n, c), opts);
            (tree.clone(), l.placement, o)
        }
        Algorithm::L2b => {
            let target = opts.target_width.unwrap_or(opts.breaks.ideal_width);
            let l = layout_l2b(tree, &opts.breaks, target, lh)?;
            warnings = l.warnings;
            let o = region_outlines(
                &l.tree,
                &l.layout.placement,
                |n, c| l.layout.sigma(n, c),
                opts,
            );
            (l.tree, l.layout.placement, o)
        }
        Algorithm::Boxes | Algorithm::BoxesNs => {
            let b = layout_boxes(tree, algo == Algorithm::Boxes, lh);
            let o = if opts.outlines {
                b.boxes
                    .iter()
                    .map(|&(n, r)| match tree.node(n) {
                        LayoutNode::Wrap { wrap, .. } => (*wrap, n, Polygon::from_rect(r)),
                        _ => unreachable!("boxes come from wraps"),
                    })
                    .collect()
            } else {
                Vec::new()
            };
            (tree.clone(), b.placement, o)
        }
        Algorithm::SBlocks => {
            let p = layout_sblocks(tree, lh);
            let s = {
                let mut s = StatefulLayout::new(tree);
                s.layout(lh);
                s
            };
            let o = region_outlines(tree, &p, |n, c| s.sigma(n, c), opts);
            (tree.clone(), p, o)
        }
    };
    Ok(Output {
        algorithm: algo,
        tree,
        placement,
        outlines,
        warnings,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JsonFragment {
    pub id: u32,
    pub text: String,
    pub x: f64,
    pub y: f64,
    pub w: f64,
    pub h: f64,
    pub line: usize,
    pub spacer: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JsonRegion {
    pub wrap: String,
    pub node: u32,
    /// Half-open column span.
    pub columns: [usize; 2],
    pub depth: usize,
    pub extent: Option<Rect>,
    pub loops: Vec<Vec<[f64; 2]>>,
}

/// Machine-readable dump of an [`Output`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JsonLayout {
    pub algorithm: Algorithm,
    #[serde(rename = "lineHeight")]
    pub line_height: f64,
    pub fragments: Vec<JsonFragment>,
    pub regions: Vec<JsonRegion>,
    pub warnings: Vec<String>,
}

impl JsonLayout {
    pub fn new(out: &Output, line_height: f64) -> JsonLayout {
        let t = &out.tree;
        let line_of = out.placement.line_of();
        let fragments = t
            .fragments()
            .iter()
            .zip(&out.placement.rects)
            .enumerate()
            .map(|(c, (f, r))| JsonFragment {
                id: f.id.0,
                text: f.text.clone(),
                x: r.x,
                y: r.y,
                w: r.w,
                h: r.h,
                line: line_of[c],
                spacer: f.is_spacer,
            })
            .collect();
        let ranges = t.column_ranges();
        let depth = t.wrap_depths();
        let regions = out
            .outlines
            .iter()
            .map(|(w, n, p)| JsonRegion {
                wrap: t.wrap(*w).name.clone(),
                node: n.0,
                columns: [ranges[n.index()].start, ranges[n.index()].end],
                depth: depth[w.index()],
                extent: p.bbox(),
                loops: p
                    .loops
                    .iter()
                    .map(|l| l.iter().map(|q| [q.x, q.y]).collect())
                    .collect(),
            })
            .collect();
        JsonLayout {
            algorithm: out.algorithm,
            line_height,
            fragments,
            regions,
            warnings: out.warnings.clone(),
        }
    }

    /// Positions and spacer mask, enough to compute metrics.
    pub fn to_placement(&self) -> (Placement, Vec<bool>) {
        let rects = self
            .fragments
            .iter()
            .map(|f| Rect::new(f.x, f.y, f.w, f.h))
            .collect();
        let line_of: Vec<usize> = self.fragments.iter().map(|f| f.line).collect();
        let n = line_of.last().map_or(0, |l| l + 1);
        let lines = crate::layout::lines_from_index(&line_of, n);
        let spacer = self.fragments.iter().map(|f| f.spacer).collect();
        (Placement { rects, lines }, spacer)
    }
}
