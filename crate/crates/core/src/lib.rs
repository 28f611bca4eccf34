//! Exact arithmetic in real biquadratic fields `Q(sqrt(m), sqrt(n))` and
//! certificate-producing procedures around sums of squares of their integers.
//!
//! * [`field`]: field classification, integral bases, exact element arithmetic,
//!   exact embedding signs, trace, norm and minimal polynomials.
//! * [`sos`]: decides whether a totally positive integer is a sum of squares of
//!   integers, returning either the squares or an exhaustion record.
//! * [`atlas`]: interval families certifying non-representability, witness
//!   elements and brute-force oracles for the underlying tuple inequalities.
//! * [`decomp`]: subfield product decompositions, diagonal `±1` forms and
//!   six-square compositions.

pub mod error;
pub mod field;
pub mod sos;
pub mod atlas;
pub mod decomp;

pub use error::{AtlasError, DecompError, EngineError, FieldError};
pub use field::{
    make_field, BasisId, CaseLabel, EmbeddingSigns, Field, FieldElement, FieldParams, Radical,
    RationalElement, RationalQuartic, Sign, SubfieldTag,
};
