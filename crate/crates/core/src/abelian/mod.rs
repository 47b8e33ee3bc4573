//! Exact integer linear algebra over `Z`.

pub mod cohomology;
pub mod direct_limit;
pub mod group;
pub mod lattice;
pub mod matrix;
pub mod snf;

pub use cohomology::{cohomology_at, complex_cohomology, CohomologyBasis};
pub use direct_limit::{direct_limit_fg, DirectLimit, DirectSystem, LimitStatus, MapReport};
pub use group::{present_quotient, GroupPresentation, Normalized};
pub use lattice::{kernel_and_cokernel, kernel_basis, same_lattice, solve, Lattice, Subquotient};
pub use matrix::IntMatrix;
pub use snf::{smith_normal_form, SmithForm};
