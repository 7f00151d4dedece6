// SPDX-License-Identifier: Apache-2.0

//! Sarkisov factorization of plane Cremona maps into links between the
//! plane and Hirzebruch surfaces, with volume preserving flags relative to
//! a plane cubic.
//!
//! The engine works on an enriched description of the linear system: its
//! class on the current model, the multiplicities of its base points, and
//! incidence flags of those points with the strict transform of the cubic,
//! the negative section and the fibers.

mod engine;
mod jonquieres;
mod state;

pub use engine::{
    elementary_transform_update, enrich, factorize, link_iii_update, next_link, run, Step,
};
pub use jonquieres::{jonquieres_centers, JonquieresReport, CONVENTION};
pub use state::{CaseTag, FactorizationState, LinkKind, PointRecord, SarkisovLink, SarkisovTrace};
