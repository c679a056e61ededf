//! The pun language: a small call-by-value functional language where
//! properties are declared in the program and checked against randomly
//! generated well-typed inputs derived from the typing rules.

pub mod ast;
pub mod parser;
pub mod pretty;
pub mod runner;
pub mod eval;
pub mod gen;
pub mod typecheck;
