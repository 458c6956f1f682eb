#![allow(clippy::needless_range_loop)]

pub mod arith;
pub mod audit;
pub mod cover;
pub mod fiber;
pub mod germ;
pub mod model;
pub mod par;
pub mod report;
pub mod sample;
