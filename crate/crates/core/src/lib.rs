//! Reconstruction and classification of the quasi-symmetric 2-(64,24,46)
//! designs of Blokhuis–Haemers type living in the dual of the binary code
//! spanned by the lines of AG(3,4).
//!
//! Build order: [`gf4`] → [`geometry`] → [`gf2`] → [`bh`] (special cliques,
//! design assembly) → [`group`] (collineations and their action on choice
//! vectors) → [`classify`] → [`analysis`].

pub mod analysis;
pub mod bh;
pub mod classify;
pub mod clique;
pub mod formats;
pub mod geometry;
pub mod gf2;
pub mod gf4;
pub mod group;
mod par;

pub use bh::{BhDesign, DesignChoice, Universe};
pub use gf2::Block;
pub use group::QuotientGroup;
