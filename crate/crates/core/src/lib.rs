//! Exact computation of three minimal excludant size statistics on
//! overpartitions, together with the generating functions that count them.
//!
//! The crate is organised bottom-up:
//!
//! - [`qseries`]: truncated formal power series over exact integers and the
//!   q-Pochhammer products built from them.
//! - [`overpartitions`]: enumeration of overpartitions and the statistics
//!   `mes`, `overmes` and `tildemes`, plus the class predicates used by the
//!   restricted generating functions.
//! - [`formulas`]: closed-form right-hand sides of every identity, expanded
//!   to a fixed order.
//! - [`verify`]: brute-force enumeration tables and coefficient-by-coefficient
//!   comparison against [`formulas`], producing [`VerificationReport`]s.

pub mod error;
pub mod formulas;
pub mod overpartitions;
pub mod qseries;
pub mod verify;

pub use error::{Error, Result};
pub use formulas::{BivariateTable, Formulas, TheoremId, TheoremKind};
pub use overpartitions::{ClassFamily, Overpartition, RenderStyle, StatParams, Statistic};
pub use qseries::{Length, PochSpec, Sign, TruncatedSeries};
pub use verify::{CheckId, Fault, Mismatch, Status, VerificationReport};
