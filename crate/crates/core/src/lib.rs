//! Crossing-number bounds for bounded-degree graphs with exact drawings.

pub mod bounds;
pub mod cliquesum;
pub mod convex;
pub mod decomposition;
pub mod drawers;
pub mod error;
pub mod formats;
pub mod generators;
pub mod geometry;
pub mod graph;
pub mod oracle;
pub mod par;
pub mod planar;
pub mod svg;

pub use error::{Error, Result};
pub use geometry::{Drawing, Point, Style, Q};
pub use graph::Graph;
pub use par::Exec;
