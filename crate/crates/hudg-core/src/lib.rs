//! Structural and algorithmic toolkit for hyperbolic uniform disk graphs:
//! stable hyperbolic-plane geometry, clique-based balanced separators,
//! hyperbolic Delaunay/Voronoi complexes with outerplanarity measurement,
//! exact maximum independent set via a noose-based dynamic program, and a
//! degeneracy-based PTAS.

pub mod delaunay;
pub mod error;
pub mod graph;
pub mod hgeom;
pub mod noose;
pub mod separator;
pub mod instance;

pub use error::{Error, Result};
pub use graph::{DiskGraph, IndependentSet};
pub use hgeom::HPoint;
pub use instance::Instance;
