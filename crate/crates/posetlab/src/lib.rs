//! File formats, the acceptance suite and the command-line front end for
//! [`posetlab_core`].

pub mod cli;
pub mod format;
pub mod suite;

pub use posetlab_core as core;
