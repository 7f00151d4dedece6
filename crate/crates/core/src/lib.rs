// SPDX-License-Identifier: Apache-2.0

//! Exact plane Cremona maps, infinitely near base points, volume preserving
//! Sarkisov factorization relative to a plane cubic, and a quartic
//! threefold involution check.

pub mod config;
pub mod cremona;
pub mod elliptic;
pub mod error;
pub mod exact;
pub mod json;
pub mod sarkisov;
pub mod surfaces;
pub mod threefold;

pub use config::Config;
pub use cremona::{BubbleForest, CremonaMap, HomaloidalType};
pub use elliptic::{CurvePoint, WeierstrassCurve};
pub use error::{Error, Result};
pub use exact::{HomPoly, Poly, Rational};
pub use sarkisov::{FactorizationState, SarkisovLink, SarkisovTrace};
pub use surfaces::{DivisorClass, SurfaceModel};
