//! Computational ludics: designs, normalization, logical behaviours, a
//! deterministic proof search with countermodel extraction, and a
//! polarized linear logic front end.

pub mod behaviour;
pub mod countermodel;
pub mod design;
pub mod llp;
pub mod normalize;
pub mod proofsys;
pub mod syntax;

pub use behaviour::{Behaviour, Connective, Context};
pub use design::{Design, DefSystem, Name, Polarity, Signature, Var};
pub use normalize::{evaluate_closed, interact, normal_form, orthogonal, step, EvalOutcome, NormalForm, Verdict};
pub use proofsys::{parse_sequent, prove, Derivation, ProofResult, Sequent};
pub use syntax::{parse_design, parse_document, ParseError};
