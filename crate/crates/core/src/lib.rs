//! Matrix Code programs in Liffig notation.

pub mod model;
pub mod interp;
pub mod parser;
pub mod verify;
pub mod transpile;
pub mod corpus;
pub mod cli;
