//! Shape generators, file formats, run configuration and the commands.

pub mod commands;
pub mod config;
pub mod files;
pub mod generate;

pub use commands::{execute, resolve_shape, Outcome};
pub use config::{Mode, RunConfig};
pub use files::{format_shape, load_shape, parse_shape, save_shape, ShapeFormat};
pub use generate::{generate_shape, generator_registry, GenArgs, ShapeGenerator};
