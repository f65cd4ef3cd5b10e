//! Exact verification of two compatible Hochschild-Kostant-Rosenberg pictures:
//! the PBW/Duflo square for Lie algebra representations, and the
//! Duflo-twisted contraction calculus on a bi-exterior model of
//! polyvectors and forms.

pub mod catalog;
pub mod hodge;
pub mod lie;
pub mod linalg;
pub mod pbw;
pub mod series;
pub mod sampling;
pub mod verify;
