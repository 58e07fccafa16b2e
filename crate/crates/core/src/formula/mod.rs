//! First-order formulas over a finite signature.
//!
//! Bounded quantifiers are first-class nodes so that Δ₀ material can be
//! recognised syntactically.

mod ast;
mod levy;
pub(crate) mod morley;
mod prenex;
mod signature;
mod syntax;

pub use ast::{Formula, Quantifier, Term};
pub use levy::{levy_classify, LevyClass};
pub use morley::{morleyize, MorleyKind, MorleySymbol, MorleyizationResult};
pub use prenex::{prenex_parts, to_prenex, Prefix};
pub use signature::{Signature, Symbol};
pub use syntax::{infer_signature, parse, parse_inferring, print};
