//! Glued graphs and fibre products of their Bergman fans.
pub mod decomposition;
pub mod glue;
pub mod graphs;
pub mod preorder;
pub mod product;
pub mod verify;

pub use decomposition::{weight_graph_decomposition, SmallPiece, WeightGraphDecomposition};
pub use glue::{glue_along, glue_graphs, identity_embedding, Embedding, GluedGraph};
pub use graphs::{graph_predicates, ChordalCertificate, GraphPredicates, SplitPartition};
pub use preorder::Preorder;
pub use product::{set_fibre_product, stable_fibre_product, FibreCell, FibreFactor, FibreFan, ProductKind};
pub use verify::{
    compare_supports, non_chordal_counterexample, square_counterexample, verify_fibre_theorem, FibreTheoremReport,
    NonChordalReport, SquareReport, SupportComparison, DEFAULT_SAMPLES,
};
