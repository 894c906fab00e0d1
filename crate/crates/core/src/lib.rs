//! Exact Bergman fans of graphic matroids and tropical moduli spaces of
//! weighted stable rational curves.

pub mod bergman;
pub mod dot;
pub mod error;
pub mod fan;
pub mod fibre;
pub mod graph;
pub mod lattice;
pub mod matroid;
pub mod moduli;
pub mod suite;

pub use bergman::{BuildingSet, FlatFan, MembershipMethod};
pub use error::{Error, Result};
pub use fan::{BalanceReport, Locator, WeightedFan};
pub use fibre::{FibreFan, GluedGraph, Preorder};
pub use graph::{EdgeSet, Graph};
pub use matroid::{Flat, GraphicMatroid, WeightCovector};
pub use moduli::{M0wOutcome, Split, TreeType, WeightVector};
pub use suite::{run_suite, SuiteConfig, SuiteReport};
