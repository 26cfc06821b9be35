//! Explicit finitely presented overgroups of the additive group of rationals.
//!
//! The crate builds every intermediate presentation of the construction
//! tower (from the auxiliary groups `xi(m)` up to the 98-generator group
//! `q_final` and its two-generator image `t_q_final`), computes the
//! embedding word of any rational in each target group, and checks the
//! free-group and sequence-set identities the construction relies on.
//!
//! Modules, bottom-up:
//!
//! * [`words`]: reduced words over decorated generators, substitution and
//!   the standard word builders;
//! * [`seqsets`]: finite-support integer sequences and the sequence sets;
//! * [`presentations`]: presentations and their constructors;
//! * [`pipeline`]: the stage recipes and the embedding maps;
//! * [`verify`]: Stallings automata, action oracles and property suites;
//! * [`cli`]: the command-line interface.

pub mod cli;
pub mod pipeline;
pub mod presentations;
pub mod seqsets;
pub mod verify;
pub mod words;

pub use pipeline::{build, Rational, StageId};
pub use presentations::Presentation;
pub use seqsets::{Seq, SetId};
pub use words::{GenId, Morphism, Word};
