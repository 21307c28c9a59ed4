//! Random walks on groups acting on Gromov hyperbolic spaces.

#![allow(clippy::len_without_is_empty)]

pub mod boundary;
pub mod cli;
pub mod coarse;
pub mod config;
pub mod error;
pub mod estimators;
pub mod experiment;
pub mod horo;
pub mod oracle;
pub mod output;
pub mod space;
pub mod strips;
pub mod verify;
pub mod walk;
pub mod word;

pub use error::{Error, Result};
