//! Three-folded operators on integer triples and the lozenge number tilings
//! of the plane they generate.
//!
//! * [`triple`]: the operators `H1, H2, H3`, words and their identities.
//! * [`lattice`]: node coordinates, the closed-form weight, region growth,
//!   minima, represented values and occurrence counts.
//! * [`reduction`]: descent to the center, tower classification, shortest
//!   words, the zigzag operator and the negative-weight census.
//! * [`modular`]: residue-class densities modulo a prime.
//! * [`render`]: SVG and CSV output.

pub mod error;
pub mod lattice;
pub mod modular;
pub mod reduction;
pub mod render;
pub mod triple;

pub use error::{Error, Result};
pub use lattice::{closed_weight, line_weight, Bounds, NodeCoord, TrianglePlacement, WeightGrid};
pub use reduction::{Germ, TowerClassification};
pub use triple::{apply_operator, apply_word, OperatorId, Triple, Word};
