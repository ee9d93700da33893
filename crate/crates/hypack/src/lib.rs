//! Packing-radius bounds for hyperbolic surfaces and combinatorial
//! constructions of surfaces attaining them.

pub mod assembler;
pub mod blocks;
pub mod bounds;
pub mod cli;
pub mod complex;
pub mod geometry;
pub mod hyptrig;
mod polygon;
pub mod strip;
