//! Constraint-grammar parsing of vector diagrams.
//!
//! Primitives are normalized onto an `8192 x 8192` grid, installed in a
//! pyramid spatial index, and parsed top-down by grammars whose rules bind
//! constituents through spatially generated contexts.

pub mod config;
pub mod constraints;
pub mod geometry;
pub mod grammar;
pub mod io;
pub mod parser;
pub mod scene;
pub mod spatial;
mod union_find;

pub use config::Config;
pub use constraints::TaggedSet;
pub use geometry::{Coord, Tag};
pub use grammar::{parse_grammar, Grammar};
pub use parser::{parse, ParseError, Parser};

pub type Point = geometry::Point<f64>;
pub type Rect = geometry::Rect<f64>;
pub type Shape = geometry::Shape<f64>;
pub type Primitive = geometry::Primitive<f64>;
pub type Scene = scene::Scene<f64>;
pub type SpatialIndex = spatial::SpatialIndex<f64>;
pub type Diagram = io::Diagram<f64>;
pub type SolutionForest = parser::SolutionForest<f64>;
pub type Node = parser::Node<f64>;
pub type Value = constraints::eval::Value<f64>;
