//! Fragments, syntax trees and layout trees.
//!
//! A [`SyntaxTree`] is what a front end hands us: nodes with padding whose
//! children are atoms and newlines. Layout works on a [`LayoutTree`], where
//! newlines and sibling lists have been re-parsed into binary `JoinH`/`JoinV`
//! nodes and every node carries its own padding as a `Wrap`.

mod convert;
mod parse;
mod tree;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

pub use convert::to_layout_tree;
pub use parse::{parse_document, InputFormat, ParseError, PlainTextMode};
pub use tree::{LayoutNode, LayoutTree, LayoutTreeBuilder, NodeId, WrapId, WrapInfo};

/// Opaque per-wrap presentation attributes (`stroke`, `fill`, `class`, ...).
/// Layout never reads these.
pub type Style = BTreeMap<String, String>;

/// Monospace font model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub char_width: f64,
    pub line_height: f64,
}

impl Default for Metrics {
    fn default() -> Self {
        Metrics {
            char_width: 8.0,
            line_height: 16.0,
        }
    }
}

impl Metrics {
    pub fn new(char_width: f64, line_height: f64) -> Result<Self, ModelError> {
        if !(char_width > 0.0 && line_height > 0.0) {
            return Err(ModelError::BadMetrics {
                char_width,
                line_height,
            });
        }
        Ok(Metrics {
            char_width,
            line_height,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FragId(pub u32);

impl fmt::Display for FragId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

/// An indivisible rectangle to be positioned by layout.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Fragment {
    pub id: FragId,
    pub width: f64,
    pub height: f64,
    pub text: String,
    pub is_spacer: bool,
}

impl Fragment {
    pub fn spacer(id: FragId, width: f64) -> Self {
        Fragment {
            id,
            width,
            height: 0.0,
            text: String::new(),
            is_spacer: true,
        }
    }

    /// A fragment with an explicit size and no text, for tests and synthetic input.
    pub fn sized(id: FragId, width: f64, height: f64) -> Self {
        Fragment {
            id,
            width,
            height,
            text: String::new(),
            is_spacer: false,
        }
    }
}

/// Measures `text` under the monospace model.
pub fn measure_fragment(id: FragId, text: &str, metrics: &Metrics) -> Result<Fragment, ModelError> {
    if text.contains(['\n', '\r']) {
        return Err(ModelError::EmbeddedNewline(text.to_string()));
    }
    Ok(Fragment {
        id,
        width: text.chars().count() as f64 * metrics.char_width,
        height: metrics.line_height,
        text: text.to_string(),
        is_spacer: false,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntaxNode {
    pub id: String,
    pub padding: f64,
    pub style: Style,
    pub children: Vec<SyntaxTree>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SyntaxTree {
    Node(SyntaxNode),
    Atom(Fragment),
    /// A fragment whose horizontal position is tied to every other pin with
    /// the same `pid` (used by column-constrained layout only).
    Pin {
        pid: String,
        fragment: Fragment,
    },
    /// Explicit whitespace of the given width.
    Spacer(f64),
    Newline,
}

impl SyntaxTree {
    pub fn node(id: impl Into<String>, padding: f64, children: Vec<SyntaxTree>) -> Self {
        SyntaxTree::Node(SyntaxNode {
            id: id.into(),
            padding,
            style: Style::new(),
            children,
        })
    }

    /// Atoms (and pins) in document order.
    pub fn atoms(&self) -> Vec<&Fragment> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut Vec<&'a Fragment>) {
        match self {
            SyntaxTree::Node(n) => n.children.iter().for_each(|c| c.collect_atoms(out)),
            SyntaxTree::Atom(f) | SyntaxTree::Pin { fragment: f, .. } => out.push(f),
            SyntaxTree::Spacer(_) | SyntaxTree::Newline => {}
        }
    }

    /// Sets every node's padding to `padding`.
    pub fn set_uniform_padding(&mut self, padding: f64) {
        if let SyntaxTree::Node(n) = self {
            n.padding = padding;
            n.children
                .iter_mut()
                .for_each(|c| c.set_uniform_padding(padding));
        }
    }
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum ModelError {
    #[error("fragment text contains a newline: {0:?}")]
    EmbeddedNewline(String),
    #[error("metrics must be positive (char width {char_width}, line height {line_height})")]
    BadMetrics { char_width: f64, line_height: f64 },
    #[error("wrap id {0:?} is used more than once")]
    DuplicateWrapId(String),
    #[error("negative padding {padding} on {id:?}")]
    NegativePadding { id: String, padding: f64 },
    #[error("fragment id {0} is used more than once")]
    DuplicateFragId(FragId),
    #[error("negative size on fragment {0}")]
    NegativeSize(FragId),
    #[error("node {0:?} is not part of the tree or is used twice")]
    Malformed(NodeId),
}

#[cfg(test)]
mod tests {
    use super::*;

    fn size(text: &str, cw: f64, lh: f64) -> (f64, f64) {
        let f = measure_fragment(FragId(0), text, &Metrics::new(cw, lh).unwrap()).unwrap();
        (f.width, f.height)
    }

    #[test]
    fn monospace_sizes() {
        assert_eq!(size("", 8.0, 16.0), (0.0, 16.0));
        assert_eq!(size("abs", 8.0, 16.0), (24.0, 16.0));
        assert_eq!(size("x", 10.0, 20.0), (10.0, 20.0));
        assert_eq!(size("λx", 8.0, 16.0), (16.0, 16.0));
    }

    #[test]
    fn newline_rejected() {
        let m = Metrics::default();
        assert!(matches!(
            measure_fragment(FragId(0), "a\nb", &m),
            Err(ModelError::EmbeddedNewline(_))
        ));
    }
}
