//! Column alignment through lower-bound constraints on horizontal positions.
//!
//! Each stack's x is no longer fixed by its left neighbour; it only has to be
//! at least the neighbour's x plus the gap L1 would use. Stacks sharing a pin
//! id share one variable, so pinned fragments on different lines line up.

use std::collections::{BTreeMap, HashMap, VecDeque};

use crate::model::{LayoutNode, LayoutTree};
use crate::regions_pure::{self, finish, PureLayout};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarName {
    /// Shared by every pin with this id.
    Pin(String),
    /// First column of an unpinned stack or group.
    Free(usize),
}

/// `p[target] >= p[source] + c`, or `p[target] >= c` when `source` is `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub target: usize,
    pub source: Option<usize>,
    pub c: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ConstraintProblem {
    pub vars: Vec<VarName>,
    pub constraints: Vec<Constraint>,
    /// Variable and offset from it for every column, by line.
    pub lines: Vec<Vec<(usize, usize, f64)>>,
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum ConstraintError {
    #[error("pin {pid:?} appears twice on line {line}")]
    DuplicatePin { pid: String, line: usize },
    #[error("pins form a cycle; involved variables: {0:?}")]
    Cycle(Vec<VarName>),
}

/// Builds the problem from L1's line-relative layout.
///
/// Adjacent stacks on a line must keep at least the gap L1 gives them, and
/// each line's first stack keeps at least its L1 indent. With `grouped`,
/// runs of unpinned stacks share one variable and keep their L1 offsets.
pub fn collect_constraints(
    tree: &LayoutTree,
    lines: &regions_pure::Layout,
    grouped: bool,
) -> Result<ConstraintProblem, ConstraintError> {
    let mut pid_of: HashMap<usize, &str> = HashMap::new();
    for n in tree.nodes() {
        if let LayoutNode::Pin { pid, column } = n {
            pid_of.insert(*column, pid);
        }
    }
    let mut cp = ConstraintProblem::default();
    let mut index: BTreeMap<VarName, usize> = BTreeMap::new();
    let mut var = |cp: &mut ConstraintProblem, name: VarName| -> usize {
        *index.entry(name.clone()).or_insert_with(|| {
            cp.vars.push(name);
            cp.vars.len() - 1
        })
    };
    for (li, line) in lines.iter().enumerate() {
        let mut seen = Vec::new();
        let mut row = Vec::with_capacity(line.region.len());
        // (var, x of the group's first stack)
        let mut group: Option<(usize, f64)> = None;
        for s in &line.region {
            let x = s.rect.x;
            let (v, off) = match pid_of.get(&s.column) {
                Some(pid) => {
                    if seen.contains(pid) {
                        return Err(ConstraintError::DuplicatePin {
                            pid: pid.to_string(),
                            line: li,
                        });
                    }
                    seen.push(*pid);
                    group = None;
                    (var(&mut cp, VarName::Pin(pid.to_string())), 0.0)
                }
                None => match group {
                    Some((g, gx)) if grouped => (g, x - gx),
                    _ => {
                        let g = var(&mut cp, VarName::Free(s.column));
                        group = Some((g, x));
                        (g, 0.0)
                    }
                },
            };
            match row.last() {
                None => cp.constraints.push(Constraint {
                    target: v,
                    source: None,
                    c: x - off,
                }),
                Some(&(_, pv, poff)) if pv != v => {
                    let prev = &line.region[row.len() - 1];
                    let gap = x - prev.rect.x;
                    cp.constraints.push(Constraint {
                        target: v,
                        source: Some(pv),
                        c: poff + gap - off,
                    });
                }
                _ => {}
            }
            row.push((s.column, v, off));
        }
        cp.lines.push(row);
    }
    Ok(cp)
}

/// Least solution by longest paths over the constraint DAG; every variable
/// starts at 0.
pub fn solve_constraints(cp: &ConstraintProblem) -> Result<Vec<f64>, ConstraintError> {
    let n = cp.vars.len();
    let mut out_edges: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    let mut indeg = vec![0usize; n];
    let mut p = vec![0.0f64; n];
    for k in &cp.constraints {
        match k.source {
            None => p[k.target] = p[k.target].max(k.c),
            Some(s) => {
                out_edges[s].push((k.target, k.c));
                indeg[k.target] += 1;
            }
        }
    }
    let mut queue: VecDeque<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut visited = 0;
    while let Some(v) = queue.pop_front() {
        visited += 1;
        for &(t, c) in &out_edges[v] {
            p[t] = p[t].max(p[v] + c);
            indeg[t] -= 1;
            if indeg[t] == 0 {
                queue.push_back(t);
            }
        }
    }
    if visited < n {
        let stuck = (0..n)
            .filter(|&v| indeg[v] > 0)
            .map(|v| cp.vars[v].clone())
            .collect();
        return Err(ConstraintError::Cycle(stuck));
    }
    Ok(p)
}

#[derive(Debug, Clone)]
pub struct L2aLayout {
    pub layout: PureLayout,
    pub problem: ConstraintProblem,
    pub assignment: Vec<f64>,
}

pub fn layout_l2a(
    tree: &LayoutTree,
    line_height: f64,
    grouped: bool,
) -> Result<L2aLayout, ConstraintError> {
    let mut lines = regions_pure::layout(tree);
    let problem = collect_constraints(tree, &lines, grouped)?;
    let assignment = solve_constraints(&problem)?;
    for (line, row) in lines.iter_mut().zip(&problem.lines) {
        for (s, &(_, v, off)) in line.region.iter_mut().zip(row) {
            s.rect.x = assignment[v] + off;
        }
    }
    Ok(L2aLayout {
        layout: finish(tree, lines, line_height),
        problem,
        assignment,
    })
}
