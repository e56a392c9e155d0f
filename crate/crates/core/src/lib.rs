//! Exact computation of semi-equivariant Čech cohomology for finite Γ-spaces
//! with coefficients in finite Γ-groups, the Dixmier-Douady lifting
//! obstruction of central extensions, and the classification of liftings of
//! semi-equivariant principal bundles.

pub mod error;
pub mod extension;
pub mod groups;
pub mod linalg;
pub mod nonabelian;
pub mod space;
pub mod cochain;
pub mod cohomology;
pub mod bundle;
pub mod scenario;
pub mod cli;
pub mod suite;

pub use error::{Error, Result};
