//! A finite-scale workbench for model companionship.
//!
//! The crate covers two layers:
//!
//! * first-order syntax and finite semantics: formulas, Levy classification,
//!   Morleyization, finite structures, embeddings and bounded checks for
//!   existential closedness, Π₁-separation and Kaiser hulls;
//! * the coding of hereditarily finite sets by well-founded extensional
//!   pointed graphs, together with the recursive compilation of
//!   membership-language formulas into formulas about codes.
//!
//! Every bounded notion is decided by exhaustive search, so the outputs can be
//! re-checked by brute force.

pub mod cli;
pub mod engine;
pub mod error;
pub mod formula;
pub mod hf;
pub mod par;
pub mod structure;
pub mod suite;
pub mod templates;
pub mod translate;

pub use error::{Error, Result};
pub use formula::{Formula, LevyClass, Signature, Term};
pub use structure::FinStructure;
