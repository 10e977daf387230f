//! Finite Ext-algebra recognizers for visibly pushdown languages.
//!
//! A visibly pushdown alphabet splits its letters into calls, returns and
//! internals; the well-matched words over such an alphabet form a monoid
//! that additionally carries the unary operations `ext_{u,v}: x ↦ uxv`.
//! Finite quotients of this structure — a finite monoid `R` together with a
//! composition-closed set `O(R)` of self-maps containing all translations —
//! recognize exactly the visibly pushdown languages of well-matched words.
//!
//! This crate provides:
//!
//! * the word-level vocabulary: alphabets, well-matchedness, contexts and
//!   bounded enumeration ([`alphabet`], [`words`]),
//! * finite Ext-algebras as explicit tables, morphisms, recognition and the
//!   pseudo-variety constructions: products, generated subalgebras,
//!   quotients, syntactic minimization, isomorphism and division
//!   ([`algebra`], [`morphism`], [`constructions`], [`compare`]),
//! * visibly pushdown and visibly counter automata with the level-function
//!   machinery behind the soundness proofs ([`vpa`], [`vca`]),
//! * the translations between machines and algebras ([`translate`]),
//! * ω-power semantics, profinite term evaluation, separation and the
//!   equation engines for the visibly counter classes ([`profinite`],
//!   [`equations`]),
//! * a line-oriented file format and a command-line driver ([`format`],
//!   [`cli`]).
//!
//! Everything is immutable after construction and safe to share across
//! threads; all operations are pure.

pub mod algebra;
pub mod alphabet;
pub mod cli;
pub mod compare;
pub mod constructions;
pub mod equations;
mod error;
pub mod format;
pub mod morphism;
pub mod profinite;
pub mod translate;
pub mod vca;
pub mod vpa;
pub mod words;

pub use algebra::{ExtAlgebra, Violation};
pub use alphabet::{LetterKind, PushdownAlphabet};
pub use compare::{are_isomorphic, divides, DivisionOutcome, SearchCaps};
pub use constructions::{
    direct_product, generated_subalgebra, product_spec, quotient, syntactic_quotient,
};
pub use equations::{
    check_vcl_equation, check_zero_vcl_equation, Counterexample, EquationCheckResult,
    EquationClass, MorphismMode,
};
pub use error::Error;
pub use morphism::{context_op, Morphism, RecognizerSpec};
pub use profinite::{idempotent_power_element, idempotent_power_op, separates, ProfiniteTerm};
pub use translate::{ext_algebra_to_vpa, monoid_to_ext_algebra, vpa_to_ext_algebra, FiniteMonoid};
pub use vca::Vca;
pub use vpa::Vpa;
pub use words::{
    apply_context, enumerate_contexts, enumerate_well_matched, is_well_matched, stack_height,
    Context, Word,
};

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;
