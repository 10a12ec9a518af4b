//! Grid geometry for quantitative concentration and isoperimetric inequalities.
//!
//! Sets are binary grids ([`grid::GridSet`]); r-neighborhoods, erosions and
//! r-envelopes come from exact distance transforms ([`distance`]); boundaries
//! are marching-squares polygons ([`boundary`]). On top of those sit the
//! scalar deficits and asymmetries ([`functionals`]), perimeter-growth fits
//! ([`steiner`]), the shape corpus ([`shapes`]) and the sweep and
//! verification drivers used by the command-line tool.

pub mod boundary;
pub mod distance;
pub mod error;
pub mod format;
pub mod functionals;
pub mod grid;
pub mod shapes;
pub mod steiner;
pub mod sweep;
pub mod verify;

pub use error::{Error, Result};
pub use grid::{BallSpec, GridSet, Point};
