//! Hyperfunctions, coroutining folds and fold/build fusion for
//! multi-branch list pipelines.

pub mod lazy;
pub mod model;
pub mod folds;
pub mod observe;
pub mod fusion;
pub mod parse;
pub mod cli;
