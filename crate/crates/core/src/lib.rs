//! Root isolation for univariate polynomials.
//!
//! Radii of all roots come from the Newton polygon of a polynomial that has
//! been put through repeated root squaring. Real roots are then isolated by
//! sign checks on the resulting radius intervals, complex roots by
//! intersecting annuli around three shifted centers.

pub mod bench;
pub mod complex;
pub mod error;
pub mod oracle;
pub mod poly;
pub mod radii;
pub mod real;
pub mod scalar;
pub mod scaled;

pub use error::{Error, Result};
pub use poly::{ComplexPoint, Polynomial};
pub use radii::{
    choose_iteration_count, distances_from_point, newton_polygon_radii, refined_radii, RadiiEstimate,
};
