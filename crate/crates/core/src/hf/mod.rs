//! Hereditarily finite sets and their codes by well-founded extensional
//! pointed graphs.

mod code;
mod eval;
mod quotient;
mod set;

pub use code::{
    collapse, encode, graph_mem, graph_mem_iso, graphs_equal, graphs_equal_iso, is_wfe,
    pointed_isomorphic, subcode, Interner, PointedCode, WfeCheck, MAX_CODE_DOMAIN,
};
pub use eval::{eval_in_domain, hf_eval, HFDomain};
pub use quotient::{
    dual_path_check, quotient_check, valid_codes, DualPathReport, QuotientReport,
    MAX_QUOTIENT_DOMAIN,
};
pub use set::{ackermann, ackermann_decode, hf_universe, universe_size, HFSet, MAX_UNIVERSE_LEVEL};

pub(crate) use code::check_preds;
pub(crate) use eval::member;
pub(crate) use quotient::{mask_preds, top_value};
