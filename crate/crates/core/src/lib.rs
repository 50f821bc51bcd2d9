#![cfg_attr(not(test), no_std)]
extern crate alloc;

pub mod concave_majorant;
pub mod error;
pub mod families;
pub mod grenander;
pub mod math;
pub mod rng;

pub use error::{Error, Result};
