//! Bounded model-theoretic searches over finite classes: existential
//! closedness, Π₁-separation, universal equivalents and Π₂ hulls.

mod class;
mod ec;
mod hull;
mod separate;
mod univ;

pub use class::{build_class, builtin, BoundedClass};
pub use ec::{
    check_model_complete_bounded, ec_models, is_ec_in_class, refute_along, AlongRefutation,
    EcReport, EcVerdict, ModelCompletenessReport, Refutation, RobinsonCounterexample,
    MAX_EC_PARAMS,
};
pub use hull::{kaiser_hull_pi2, pi2_sentence_shapes, rank_one_selection, HullReport};
pub use separate::{pi1_separator, universal_sentence_shapes, SeparationReport};
pub use univ::find_universal_equivalent;
