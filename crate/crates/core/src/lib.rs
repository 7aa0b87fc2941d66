//! Stylometric profiling of time-stamped abstract corpora and tests for
//! shifts in writing style across periods.

pub mod cohesion;
pub mod corpus;
pub mod driftstats;
pub mod error;
pub mod lexical;
pub mod markers;
pub mod pipeline;
pub mod profile;
pub mod readability;
pub mod resources;
pub mod sentiment;
pub mod store;
pub mod syntax;
pub mod synth;
pub mod textkit;

pub use error::{Error, Result};
pub use resources::Resources;
