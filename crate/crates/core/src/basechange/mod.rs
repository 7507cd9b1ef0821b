//! Base change along strong monoidal functors.
//!
//! A functor is given by how it acts on matrix entries together with its
//! monoidal witnesses as explicit matrices. Pushforwards transport operads
//! and algebras through those witnesses, and the `check_*` functions build
//! both sides of each compatibility statement with an explicit comparison
//! map and report the deviations.

mod checks;
mod functor;
mod pushforward;

pub use checks::{
    check_hochschild_transport, check_residue_transport, check_spectral_mapping, check_spectral_mapping_with,
    check_spectrum_transport, CHECK_TOLERANCE,
};
pub use functor::{Coherence, FunctorHandle, FunctorRegistry, ScalarMap};
pub use pushforward::{pushforward_algebra, pushforward_operad};
