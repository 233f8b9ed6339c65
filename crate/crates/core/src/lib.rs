//! Exact computation with one-sided shift spaces given as finite labeled-graph
//! presentations.
//!
//! The crate provides:
//!
//! * [`presentation`] — alphabets, words, labeled-graph presentations of sofic
//!   shifts, eventually periodic points, determinization/minimization and the
//!   named fixture shifts;
//! * [`past`] — predecessor sets, depth-`l` past equivalence, isolation in past
//!   equivalence and groupoid classification flags;
//! * [`cover`] — the canonical cover of a sofic presentation as a finite
//!   labeled graph, the factor map that reads labels, and point lifting;
//! * [`cohomology`] — integer cylinder functions, coboundary and positivity
//!   decisions, cocycle evaluation on cover-level orbit data and Bowen–Franks
//!   invariants via Smith normal form;
//! * [`relations`] — finite-state transducers for block maps and substitution
//!   maps, and exact verifiers for conjugacy, eventual conjugacy and continuous
//!   orbit equivalence with cocycle pairs;
//! * [`flow`] — discrete suspensions, flow-equivalence invariant reports and
//!   certificate verification.
//!
//! Everything is exact: verdicts are produced by finite automaton searches or
//! integer arithmetic, never by sampling with tolerances.

pub mod cohomology;
pub mod cover;
pub mod error;
pub mod flow;
pub mod io;
pub mod iso;
pub mod past;
pub mod presentation;
pub mod relations;
pub mod stab;
pub mod transducer;

pub use error::{Error, Result};
pub use presentation::{Alphabet, EvPerPoint, Presentation, SftMatrix, SymId, Word};
