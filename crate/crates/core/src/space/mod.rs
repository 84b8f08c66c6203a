//! Metric graphs, group normal forms and periodic covers.

pub mod counting;
pub mod cover;
pub mod graph;
pub mod group;
pub mod point;

pub use counting::{covering_number, packing_number, CountResult};
pub use cover::{expand_cover, Cover, CoverPatch, CoverVertex, GroupDescription, SpaceDescription, VoltageAssignment};
pub use graph::{length_to_f64, validate_graph, GraphDescription, Length, MetricGraph, SideId};
pub use group::{GroupElement, GroupSpec, Symbol, Word};
pub use point::GraphPoint;
