//! Convex polytopes and intrinsic-volume estimators.

pub mod hull;
pub mod kubota;
pub mod nearest;
pub mod polytope;
pub mod steiner;

pub use polytope::{
    dist_to_polytope, hull_volume, make_box, make_crosspolytope, make_cube, make_random_polytope,
    make_simplex, minkowski_segment, project, segment_mixed_derivative, Polytope,
};
pub use kubota::{kubota_estimate, Ball, ConvexBody, SubspaceBall};
pub use steiner::{
    ball_intrinsic_volumes, box_intrinsic_volumes, default_grid, parallel_volumes_exact,
    parallel_volumes_mc, sample_distances, steiner_fit, DistanceSample, IntrinsicVolumeVector,
    SteinerPolynomial,
};
