//! Persistent homology of filtered complexes and covers, nerves, the
//! Mayer-Vietoris spectral sequence, and checks of approximate nerve bounds.
//!
//! All filtrations are integer-valued; real values go through
//! [`complex::discretize`]. Distances that may be half-integers are kept
//! doubled in [`distance::HalfGrid`].

pub mod barcode;
pub mod bound;
pub mod complex;
pub mod distance;
pub mod error;
pub mod examples;
pub mod field;
pub mod io;
pub mod linalg;
pub mod morphism;
pub mod nerve;
pub mod persistence;
pub mod random;
pub mod spectral;
pub mod tower;

pub use barcode::{Barcode, Death, Interval};
pub use bound::{certify, sharpness_suite, BoundReport, SharpnessReport, Verdict};
pub use complex::{FilteredComplex, FilteredCover, GridMap, Member, Simplex, Vertex};
pub use distance::{bottleneck, eps_trivial, point_distance, HalfGrid, Matching};
pub use error::{Error, Result};
pub use field::Prime;
pub use morphism::TowerMorphism;
pub use persistence::{barcode, tower_homology, FilteredChainComplex};
pub use tower::PersistenceTower;
