//! Combinatorics of `n(n+1)/2`-colored integer partitions.
//!
//! Parts carry either a *primary* color `a_1, …, a_n` or a *secondary* color
//! `a_i a_j` (`i < j`), ordered along a single chain
//!
//! ```text
//! a1a2 < … < a1an < a1 < a2a3 < … < a2an < a2 < … < a(n-1)an < a(n-1) < an
//! ```
//!
//! On colored parts three relations are built from the lexicographic order
//! `≻`: the difference order `▷`, and its relaxation `≫` on *special pairs*
//! of secondary colors. The crate provides:
//!
//! * the ground sets `O` (primary parts, `≻`-ordered), `E` (`≫`-ordered) and
//!   `E2` (`▷`-ordered), with exhaustive enumerators;
//! * the merge/cross machine [`machine::phi`] mapping `O` into `E` and its
//!   inverse cross/split machine [`machine::psi`], with full event traces;
//! * the bridge analysis characterizing the image `E1 = phi(O)` inside `E`
//!   ([`bridge`]);
//! * mining of optimal forbidden patterns — the minimal `≫`-chains excluded
//!   from `E1` ([`pattern`]);
//! * the Motzkin-word / weighted-rooted-forest encoding of partitions in `E`
//!   ([`motzkin`]);
//! * truncated product-series verification of the counting identity
//!   `U(C,m) = W(C,m)` and the inequality `U(C,m) ≤ V(C,m)` ([`series`]),
//!   together with the mod-12 specialization for four colors.

pub mod bridge;
pub mod color;
pub mod error;
pub mod machine;
pub mod motzkin;
pub mod part;
pub mod partition;
pub mod pattern;
pub mod series;

pub use color::Color;
pub use error::{Error, Result};
pub use part::{ColoredPart, ShiftedPart};
pub use partition::Partition;
