//! Command-line front end: text formats, JSON rendering and command dispatch.

pub mod app;
pub mod dsl;
pub mod render;
