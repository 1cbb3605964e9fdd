//! Numerically stable hyperbolic-plane primitives: points, models,
//! distances, geodesics, bisectors, circumcenters, areas, centerpoints.
//!
//! All operations are pure functions of immutable values.

mod centerpoint;
mod formulas;
mod geodesic;
pub(crate) mod minkowski;
mod point;

pub use centerpoint::{centerpoint, klein_tukey_depth};
pub use formulas::{angle_of_parallelism, disk_area, right_triangle_area, saccheri_summit};
pub use geodesic::{
    angle_at, circumcenter, dist_point_geodesic, dist_point_ray, dist_point_segment,
    halfplane_ideal_arc, interior_angle, perpendicular_bisector, signed_dist_point_geodesic,
    triangle_area_signed, Geodesic, IdealArc, Ray, Segment, CIRCUMCENTER_RADIAL_CAP,
};
pub use point::{dist, from_halfplane, from_klein, from_poincare, to_halfplane, HPoint, IdealPoint};
