//! Tropical moduli of rational curves with marked points and weights.

pub mod chambers;
pub mod m0n;
pub mod m0w;
pub mod projection;
pub mod trees;
pub mod unstable;
pub mod weights;

pub use chambers::{chamber_representatives, perturb_in_chamber};
pub use m0n::{distance_vector, m0n_fan, ModuliFan};
pub use m0w::{losev_manin_fan, m0w_fan, stable_types, M0wFan, M0wOutcome, Obstruction, ObstructionReport};
pub use projection::{ConeImage, Projection, RayImage};
pub use trees::{all_splits, enumerate_tree_types, MetricTree, Split, TreeType, TreeVertex};
pub use unstable::{inherited_unstable, non_injective_types, UnstableCones};
pub use weights::{classify_weights, ChamberSignature, Classification, WeightClass, WeightVector};
