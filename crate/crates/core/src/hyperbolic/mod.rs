//! Gromov products, boundaries and hulls.

pub mod boundary;
pub mod convexity;
pub mod gromov;
pub mod hull;
pub mod minkowski;

pub use boundary::{
    boundary_gromov_product, ray_point, shadow_contains, visual_ball_contains, BoundaryPoint, BoundaryProduct,
    CylinderSet,
};
pub use convexity::{check_line_convexity, uniform_grid, ConvexityReport};
pub use gromov::{estimate_delta, estimate_delta_with, gromov_product, DeltaConfig, DeltaNet, HyperbolicityReport};
pub use hull::{qc_hull_contains, BoundarySet, GeodesicCore};
pub use minkowski::{minkowski_dimension_estimate, visual_cover_count};
