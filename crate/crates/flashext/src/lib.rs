//! Exact F2 homological algebra for lightning flash modules, Brown–Gitler
//! comodules, Margolis homology, and trigraded Ext charts over `E(0)` and `E(1)`.

pub mod assembly;
pub mod charts;
pub mod emod;
pub mod error;
pub mod ext_classical;
pub mod ext_equivariant;
pub mod f2core;
pub mod grading;
pub mod les_engine;
pub mod margolis;
pub mod steenrod;

pub use error::{Error, Result};
pub use f2core::{F2Matrix, F2Vec};
pub use grading::{Cone, Degree, ExtDegree, M2Element, M2Monomial, Window};
