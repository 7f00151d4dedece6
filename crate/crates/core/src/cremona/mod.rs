// SPDX-License-Identifier: Apache-2.0

//! Birational self-maps of the projective plane.

pub mod forest;
pub mod homaloidal;
pub mod map;

pub use forest::{base_forest, base_forest_seeded, shared_points, BubbleForest, Direction, ForestNode};
pub use homaloidal::{composition_degree, homaloidal_type, inertia_witness, predicted_composition_degree, HomaloidalType};
pub use map::{check_nonsingular_cubic, CremonaMap};
