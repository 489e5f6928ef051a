//! Fuzz target bodies, shared with the seed replay test of the main workspace.

include!("checks.rs");
