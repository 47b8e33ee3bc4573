//! One-dimensional FLC tilings: generators, Voronoi tiles and patterns.

pub mod number;
pub mod patterns;
pub mod sample;
pub mod spec;
pub mod substitution;

pub use number::{AlgebraicNumber, QuadSurd};
pub use patterns::{enumerate_patterns, factors, Pattern};
pub use sample::{
    cut_and_project_sample, voronoi_1d, DeloneSet1DSample, FieldElem, PunctureRule, Tiling1DSample,
};
pub use spec::TilingSpec;
pub use substitution::{substitution_sample, SubstitutionRule};
