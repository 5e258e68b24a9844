//! Layout of nested structured text as ragged blocks.
//!
//! A document is a [`model::LayoutTree`] of fragments joined horizontally and
//! vertically and wrapped with padding. The layout algorithms place every
//! fragment so that the padded outline of each wrap (a rectilinear polygon)
//! never improperly overlaps its neighbours, while staying as close as
//! possible to plain text layout.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x >= 0.0)` also rejects NaN
#![cfg_attr(test, allow(clippy::single_range_in_vec_init))]

pub mod baselines;
pub mod constraints;
pub mod geometry;
pub mod layout;
pub mod linebreak;
pub mod metrics;
pub mod model;
pub mod pipeline;
pub mod regions_pure;
pub mod regions_stateful;
pub mod render;
pub mod simplify;
pub mod synth;

pub use geometry::Rect;
pub use layout::Placement;
pub use model::{Fragment, LayoutTree, Metrics, SyntaxTree};
