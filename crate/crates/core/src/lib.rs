//! SplitWeave: a small language for layered, fragment-based vector patterns,
//! with samplers, program edits and an analogical-quartet dataset writer.

pub mod color;
pub mod dsl;
pub mod edits;
pub mod field;
pub mod geometry;
pub mod motifs;
pub mod num;
pub mod parser;
pub mod render;
pub mod rng;
pub mod samplers;

pub use color::Color;
pub use num::Num;
