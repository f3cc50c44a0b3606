//! Workbench for the Josephus elimination game.
//!
//! `n` players stand in a circle; every `m`-th surviving player is removed
//! until one remains. This crate builds that game several independent ways
//! and checks the ways against each other:
//!
//! * [`circle`] — the functional circular-zipper data type;
//! * [`solvers`] — five solvers from faithful simulation to closed form,
//!   all reporting through a shared [`solvers::KillSequence`];
//! * [`dynamics`] — finite state systems, exhaustive morphism and
//!   isomorphism checking, and the canonical map linking the circle model
//!   to the cursor-and-list model;
//! * [`dot`] — deterministic internal-diagram export with a matching
//!   reader;
//! * [`literate`] — a small tangle/weave pipeline for documents of prose
//!   and named code chunks;
//! * [`fenwick`] — the order-statistic tree behind the `O(n log n)` solver.
//!
//! The `josephus` binary exposes all of it as subcommands.

pub mod circle;
pub mod dot;
pub mod dynamics;
pub mod fenwick;
pub mod literate;
pub mod solvers;

pub use circle::{mk_circle, Circle, CircleError, Label};
pub use dynamics::{
    build_system, canonical_map, system_map, verify_canonical, DynSystem, DynamicsError,
    Reading, SystemMap, VerifyReport,
};
pub use solvers::{
    closed_form_m2, simulate_imperative, solve_order_statistic, solve_recurrence, solve_zipper,
    Algorithm, Counted, ImperativeState, KillSequence, Problem,
};
