//! Planar geometry for robot configurations: points, the unit-disc graph,
//! hulls, the connectivity boundary walk, enclosing and empty circles.

pub mod boundary;
pub mod config;
pub mod disc;
pub mod empty;
pub mod enclose;
pub mod grid;
pub mod hull;
pub mod point;
pub mod polygon;

pub use boundary::{connectivity_boundary, is_convex_cycle, BoundaryCycle};
pub use config::Configuration;
pub use disc::{disc_graph, is_near_gathering, max_pairwise_dist, DiscGraph};
pub use empty::{has_delta_hole, largest_empty_circle};
pub use enclose::{smallest_enclosing_circle, Circle};
pub use grid::CellGrid;
pub use hull::{convex_hull, hull_border, on_hull_border};
pub use point::{
    circumcenter, collinear, line_intersection_params, orient2d, point_segment_dist,
    project_param, segment_segment_dist, Point,
};
pub use polygon::{
    convex_interior_clearance, convex_intersection_area, is_convex_ccw, point_in_polygon,
    signed_area, PolygonLocation,
};

#[derive(Debug, thiserror::Error)]
pub enum GeometryError {
    #[error("configuration holds no robots")]
    EmptyConfiguration,
    #[error("robot {index} has a non-finite coordinate")]
    NonFinitePosition { index: usize },
    #[error("unit-disc graph is disconnected")]
    Disconnected,
    #[error("boundary walk failed to close")]
    BoundaryWalkDiverged,
}
