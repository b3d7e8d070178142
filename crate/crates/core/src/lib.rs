//! Clifford quantum cellular automata over `F2[u, u^-1]`.
//!
//! Polynomial and matrix algebra, Pauli evolution, symmetry patterns,
//! fixed-point stabilizer models and measurement-based gate verification.
//! The `cqca` binary wraps all of it; see [`cli`].

pub mod bits;
pub mod cli;
pub mod cqca;
pub mod gf2;
pub mod mbqc;
pub mod numtheory;
pub mod pauli;
pub mod polyring;
pub mod stabilizer;
pub mod symmetry;
