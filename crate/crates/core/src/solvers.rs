//! Interoperable solvers for the elimination game: `n` players stand in a
//! circle and every `m`-th surviving player is removed until one remains.
//!
//! Five routes compute the same answer at different costs:
//!
//! * [`simulate_imperative`] — replays the cursor-and-list algorithm
//!   verbatim (quadratic, the reference behaviour);
//! * [`solve_zipper`] — drives the [`Circle`] zipper with [`remove_nth`];
//! * [`solve_order_statistic`] — rank selection over a [`Fenwick`] tree,
//!   `O(n log n)` for the full elimination order;
//! * [`solve_recurrence`] — survivor only, `O(n)` time and `O(1)` space;
//! * [`closed_form_m2`] — survivor only, `O(log n)`, kill step 2.
//!
//! All full solvers must produce identical [`KillSequence`]s; the
//! survivor-only solvers must agree on the survivor. That agreement is the
//! central cross-implementation check and is exercised exhaustively in the
//! acceptance suite.
//!
//! Each solver has a `_counted` variant reporting a count of elementary
//! steps (element shifts, focus rotations, tree touches, recurrence
//! evaluations). Counters are per-invocation and deterministic, so
//! complexity trends can be asserted without wall clocks.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::circle::{mk_circle, Circle, Label};
use crate::fenwick::Fenwick;

/// Problem instance: `n` players, every `m`-th removed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Problem {
    n: u64,
    m: u64,
}

/// Error from [`Problem::new`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProblemError {
    #[error("player count must be at least 1 (got {0})")]
    InvalidCount(u64),
    #[error("kill step must be at least 1 (got {0})")]
    InvalidStep(u64),
}

impl Problem {
    /// Validates `n >= 1` and `m >= 1`.
    pub fn new(n: u64, m: u64) -> Result<Self, ProblemError> {
        if n < 1 {
            return Err(ProblemError::InvalidCount(n));
        }
        if m < 1 {
            return Err(ProblemError::InvalidStep(m));
        }
        Ok(Problem { n, m })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn m(&self) -> u64 {
        self.m
    }
}

/// Complete elimination record: the kill order (length `n - 1`) plus the
/// survivor. `order ∪ {survivor}` is always a permutation of `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KillSequence {
    pub n: u64,
    pub m: u64,
    pub order: Vec<u64>,
    pub survivor: u64,
}

impl KillSequence {
    pub fn problem(&self) -> Problem {
        Problem { n: self.n, m: self.m }
    }

    /// CSV trace, one row per kill: `step,killed,remaining_count`.
    pub fn csv(&self) -> String {
        let mut out = String::from("step,killed,remaining_count\n");
        for (i, killed) in self.order.iter().enumerate() {
            let step = i as u64 + 1;
            out.push_str(&format!("{step},{killed},{}\n", self.n - step));
        }
        out
    }
}

/// Snapshot of the cursor-and-list algorithm: the surviving players in list
/// order and the 0-based cursor, always `0 <= index < prisoners.len()`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ImperativeState {
    index: usize,
    prisoners: Vec<u64>,
}

/// Error from [`ImperativeState::new`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StateError {
    #[error("prisoner list must be nonempty")]
    Empty,
    #[error("cursor {index} out of range for {len} prisoners")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("duplicate prisoner {0}")]
    Duplicate(u64),
}

impl ImperativeState {
    pub fn new(index: usize, prisoners: Vec<u64>) -> Result<Self, StateError> {
        if prisoners.is_empty() {
            return Err(StateError::Empty);
        }
        if index >= prisoners.len() {
            return Err(StateError::IndexOutOfRange { index, len: prisoners.len() });
        }
        let mut seen = std::collections::HashSet::with_capacity(prisoners.len());
        for &p in &prisoners {
            if !seen.insert(p) {
                return Err(StateError::Duplicate(p));
            }
        }
        Ok(ImperativeState { index, prisoners })
    }

    pub(crate) fn new_unchecked(index: usize, prisoners: Vec<u64>) -> Self {
        debug_assert!(index < prisoners.len());
        ImperativeState { index, prisoners }
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn prisoners(&self) -> &[u64] {
        &self.prisoners
    }
}

impl fmt::Display for ImperativeState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, [", self.index)?;
        for (i, p) in self.prisoners.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "])")
    }
}

/// A solver result together with its elementary-operation count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counted<T> {
    pub value: T,
    pub ops: u64,
}

fn starting_prisoners(n: u64) -> Vec<u64> {
    (1..=n).collect()
}

/// Replays the cursor-and-list algorithm step for step: starting from
/// `prisoners = [1..n]` and `index = 0`, each round sets
/// `index = (m - 1 + index) mod len(prisoners)` and removes that entry.
///
/// The counter tallies element shifts caused by list removal.
pub fn simulate_imperative_counted(p: &Problem) -> Counted<KillSequence> {
    let mut prisoners = starting_prisoners(p.n);
    let mut index: usize = 0;
    let mut order = Vec::with_capacity(prisoners.len().saturating_sub(1));
    let mut ops = 0u64;
    while prisoners.len() > 1 {
        let len = prisoners.len();
        index = (step_offset(p.m, len) + index) % len;
        ops += (len - 1 - index) as u64;
        order.push(prisoners.remove(index));
    }
    Counted {
        value: KillSequence { n: p.n, m: p.m, order, survivor: prisoners[0] },
        ops,
    }
}

/// See [`simulate_imperative_counted`].
pub fn simulate_imperative(p: &Problem) -> KillSequence {
    simulate_imperative_counted(p).value
}

/// Like [`simulate_imperative`], also returning the state after each kill.
/// The recorded cursor is reduced modulo the shrunk list, which is the value
/// the following round consumes.
pub fn imperative_trace(p: &Problem) -> (KillSequence, Vec<ImperativeState>) {
    let mut prisoners = starting_prisoners(p.n);
    let mut index: usize = 0;
    let mut order = Vec::new();
    let mut states = Vec::new();
    while prisoners.len() > 1 {
        let len = prisoners.len();
        index = (step_offset(p.m, len) + index) % len;
        order.push(prisoners.remove(index));
        index %= prisoners.len();
        states.push(ImperativeState::new_unchecked(index, prisoners.clone()));
    }
    (
        KillSequence { n: p.n, m: p.m, order, survivor: prisoners[0] },
        states,
    )
}

/// `(m - 1) mod len` as a usize, safe for any `m >= 1`.
pub(crate) fn step_offset(m: u64, len: usize) -> usize {
    ((m - 1) % len as u64) as usize
}

/// Rotates the focus `m - 1` positions forward, then removes it. Returns
/// the removed label and the shrunk circle. Whole revolutions are skipped,
/// so the result is identical to `m - 1` literal rotations at any `m`.
pub fn remove_nth<T: Label>(m: u64, circle: Circle<T>) -> (T, Circle<T>) {
    let (killed, circle, _) = remove_nth_inner(m, circle);
    (killed, circle)
}

fn remove_nth_inner<T: Label>(m: u64, mut circle: Circle<T>) -> (T, Circle<T>, u64) {
    assert!(m >= 1, "kill step must be at least 1");
    let rotations = step_offset(m, circle.size()) as u64;
    for _ in 0..rotations {
        circle = circle.next();
    }
    let killed = circle.current().clone();
    (killed, circle.remove(), rotations)
}

/// Builds the circle `1, 2, .., n` and repeatedly removes the `m`-th element
/// from the focus until a single player remains.
///
/// The counter tallies focus rotations.
pub fn solve_zipper_counted(p: &Problem) -> Counted<KillSequence> {
    let mut circle = mk_circle(1u64, 2..=p.n).expect("fresh labels are distinct");
    let mut order = Vec::new();
    let mut ops = 0u64;
    while !circle.is_singleton() {
        let (killed, rest, rotations) = remove_nth_inner(p.m, circle);
        order.push(killed);
        ops += rotations;
        circle = rest;
    }
    Counted {
        value: KillSequence { n: p.n, m: p.m, order, survivor: *circle.current() },
        ops,
    }
}

/// See [`solve_zipper_counted`].
pub fn solve_zipper(p: &Problem) -> KillSequence {
    solve_zipper_counted(p).value
}

/// Like [`solve_zipper`], also returning the circle after each kill.
pub fn zipper_trace(p: &Problem) -> (KillSequence, Vec<Circle<u64>>) {
    let mut circle = mk_circle(1u64, 2..=p.n).expect("fresh labels are distinct");
    let mut order = Vec::new();
    let mut states = Vec::new();
    while !circle.is_singleton() {
        let (killed, rest) = remove_nth(p.m, circle);
        order.push(killed);
        states.push(rest.clone());
        circle = rest;
    }
    (
        KillSequence { n: p.n, m: p.m, order, survivor: *circle.current() },
        states,
    )
}

/// Full elimination order in `O(n log n)`: positions live in a Fenwick tree
/// of alive flags and the `m`-th survivor is found by rank selection instead
/// of a linear scan. Produces a [`KillSequence`] identical to
/// [`simulate_imperative`].
///
/// The counter tallies tree-node touches during elimination.
pub fn solve_order_statistic_counted(p: &Problem) -> Counted<KillSequence> {
    let n = p.n as usize;
    let mut tree = Fenwick::all_ones(n);
    let mut alive = n;
    let mut rank: usize = 0;
    let mut order = Vec::with_capacity(n.saturating_sub(1));
    while alive > 1 {
        rank = (step_offset(p.m, alive) + rank) % alive;
        let position = tree.select(rank as u64 + 1);
        order.push(position as u64);
        tree.clear(position);
        alive -= 1;
        // rank now names the next survivor; the modulo above absorbs the
        // case where the last-ranked player was removed.
    }
    let ops = tree.touches();
    let survivor = tree.select(1) as u64;
    Counted {
        value: KillSequence { n: p.n, m: p.m, order, survivor },
        ops,
    }
}

/// See [`solve_order_statistic_counted`].
pub fn solve_order_statistic(p: &Problem) -> KillSequence {
    solve_order_statistic_counted(p).value
}

/// Survivor only, via the recurrence `J(1) = 0`,
/// `J(k) = (J(k-1) + m) mod k`; the 1-based survivor is `J(n) + 1`.
///
/// The counter tallies recurrence evaluations (`n - 1`).
pub fn solve_recurrence_counted(p: &Problem) -> Counted<u64> {
    let mut j: u64 = 0;
    let mut ops = 0u64;
    for k in 2..=p.n {
        j = ((j as u128 + p.m as u128) % k as u128) as u64;
        ops += 1;
    }
    Counted { value: j + 1, ops }
}

/// See [`solve_recurrence_counted`].
pub fn solve_recurrence(p: &Problem) -> u64 {
    solve_recurrence_counted(p).value
}

/// Survivor for kill step 2 in closed form: writing `n = 2^a + l` with
/// `0 <= l < 2^a`, the survivor is `2l + 1`.
///
/// The counter tallies the doublings used to locate `2^a`.
pub fn closed_form_m2_counted(n: u64) -> Counted<u64> {
    assert!(n >= 1, "player count must be at least 1");
    let mut power = 1u64;
    let mut ops = 0u64;
    while power <= n / 2 {
        power *= 2;
        ops += 1;
    }
    Counted { value: 2 * (n - power) + 1, ops }
}

/// See [`closed_form_m2_counted`].
pub fn closed_form_m2(n: u64) -> u64 {
    closed_form_m2_counted(n).value
}

/// Solver selector for the command line and the benchmark harness.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Imperative,
    Zipper,
    OrderStatistic,
    Recurrence,
    ClosedFormM2,
}

/// Error from [`Algorithm::solve`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("the closed form applies only to kill step 2 (problem has m = {0})")]
    ClosedFormKillStep(u64),
}

/// Survivor plus, for solvers that can produce it, the elimination order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub survivor: u64,
    pub order: Option<Vec<u64>>,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [
        Algorithm::Imperative,
        Algorithm::Zipper,
        Algorithm::OrderStatistic,
        Algorithm::Recurrence,
        Algorithm::ClosedFormM2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Imperative => "imperative",
            Algorithm::Zipper => "zipper",
            Algorithm::OrderStatistic => "order-statistic",
            Algorithm::Recurrence => "recurrence",
            Algorithm::ClosedFormM2 => "closed-form",
        }
    }

    /// Whether this solver reports the full elimination order.
    pub fn produces_order(self) -> bool {
        matches!(
            self,
            Algorithm::Imperative | Algorithm::Zipper | Algorithm::OrderStatistic
        )
    }

    pub fn solve(self, p: &Problem) -> Result<Counted<Solution>, SolveError> {
        let from_kills = |c: Counted<KillSequence>| Counted {
            value: Solution { survivor: c.value.survivor, order: Some(c.value.order) },
            ops: c.ops,
        };
        match self {
            Algorithm::Imperative => Ok(from_kills(simulate_imperative_counted(p))),
            Algorithm::Zipper => Ok(from_kills(solve_zipper_counted(p))),
            Algorithm::OrderStatistic => Ok(from_kills(solve_order_statistic_counted(p))),
            Algorithm::Recurrence => {
                let c = solve_recurrence_counted(p);
                Ok(Counted { value: Solution { survivor: c.value, order: None }, ops: c.ops })
            }
            Algorithm::ClosedFormM2 => {
                if p.m != 2 {
                    return Err(SolveError::ClosedFormKillStep(p.m));
                }
                let c = closed_form_m2_counted(p.n);
                Ok(Counted { value: Solution { survivor: c.value, order: None }, ops: c.ops })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circle::mk_circle;

    fn problem(n: u64, m: u64) -> Problem {
        Problem::new(n, m).unwrap()
    }

    #[test]
    fn problem_validation() {
        assert_eq!(Problem::new(0, 3), Err(ProblemError::InvalidCount(0)));
        assert_eq!(Problem::new(3, 0), Err(ProblemError::InvalidStep(0)));
        assert!(Problem::new(1, 1).is_ok());
    }

    #[test]
    fn imperative_hundred_every_tenth() {
        let ks = simulate_imperative(&problem(100, 10));
        assert_eq!(ks.order[0], 10);
        // Survivor frozen from the brute-force counting oracle (tests/oracle.rs).
        assert_eq!(ks.survivor, 26);
    }

    #[test]
    fn imperative_single_player() {
        let ks = simulate_imperative(&problem(1, 5));
        assert!(ks.order.is_empty());
        assert_eq!(ks.survivor, 1);
    }

    #[test]
    fn imperative_six_every_third() {
        let ks = simulate_imperative(&problem(6, 3));
        assert_eq!(&ks.order[..3], &[3, 6, 4]);
        assert_eq!(ks.order, vec![3, 6, 4, 2, 5]);
        assert_eq!(ks.survivor, 1);
    }

    #[test]
    fn zipper_matches_imperative_on_the_hundred_instance() {
        let p = problem(100, 10);
        assert_eq!(solve_zipper(&p), simulate_imperative(&p));
    }

    #[test]
    fn zipper_two_players_step_one() {
        let ks = solve_zipper(&problem(2, 1));
        assert_eq!(ks.order, vec![1]);
        assert_eq!(ks.survivor, 2);
    }

    #[test]
    fn zipper_six_every_third_identical() {
        let p = problem(6, 3);
        assert_eq!(solve_zipper(&p), simulate_imperative(&p));
    }

    #[test]
    fn remove_nth_examples() {
        let c = mk_circle(1u64, vec![2, 3]).unwrap();
        let (killed, rest) = remove_nth(1, c);
        assert_eq!(killed, 1);
        assert_eq!(rest, mk_circle(2u64, vec![3]).unwrap());

        let c = mk_circle(1u64, vec![2, 3]).unwrap();
        let (killed, rest) = remove_nth(3, c);
        assert_eq!(killed, 3);
        assert_eq!(rest, mk_circle(1u64, vec![2]).unwrap());
    }

    #[test]
    fn remove_nth_on_singleton_is_identity() {
        for m in [1, 2, 3, 17, 1_000_003] {
            let c = mk_circle(9u64, Vec::new()).unwrap();
            let (killed, rest) = remove_nth(m, c.clone());
            assert_eq!(killed, 9);
            assert_eq!(rest, c);
        }
    }

    #[test]
    fn recurrence_base_case() {
        for m in [1, 2, 100, u64::MAX] {
            assert_eq!(solve_recurrence(&problem(1, m)), 1);
        }
    }

    #[test]
    fn recurrence_matches_simulation() {
        assert_eq!(solve_recurrence(&problem(100, 10)), 26);
        assert_eq!(solve_recurrence(&problem(41, 3)), 31);
        for n in 1..=30 {
            for m in 1..=8 {
                let p = problem(n, m);
                assert_eq!(
                    solve_recurrence(&p),
                    simulate_imperative(&p).survivor,
                    "(n={n}, m={m})"
                );
            }
        }
    }

    #[test]
    fn closed_form_powers_of_two() {
        for a in 0..=12 {
            assert_eq!(closed_form_m2(1 << a), 1);
        }
        assert_eq!(closed_form_m2(1), 1);
        assert_eq!(closed_form_m2(100), solve_recurrence(&problem(100, 2)));
    }

    #[test]
    fn order_statistic_matches_imperative() {
        let p = problem(6, 3);
        assert_eq!(solve_order_statistic(&p), simulate_imperative(&p));

        let ks = solve_order_statistic(&problem(1, 1));
        assert!(ks.order.is_empty());
        assert_eq!(ks.survivor, 1);

        let p = problem(10_000, 10);
        assert_eq!(solve_order_statistic(&p).survivor, solve_recurrence(&p));
    }

    #[test]
    fn first_kill_is_m_when_enough_players() {
        for m in 1..=12 {
            for n in m.max(2)..=(m + 20) {
                assert_eq!(simulate_imperative(&problem(n, m)).order[0], m);
            }
        }
    }

    #[test]
    fn step_one_kills_in_label_order() {
        let ks = simulate_imperative(&problem(7, 1));
        assert_eq!(ks.order, vec![1, 2, 3, 4, 5, 6]);
        assert_eq!(ks.survivor, 7);
    }

    #[test]
    fn kill_step_larger_than_count_wraps() {
        for n in 1..=20 {
            for m in [21u64, 22, 37, 1_000_000_007] {
                let p = problem(n, m);
                let reference = simulate_imperative(&p);
                assert_eq!(solve_zipper(&p), reference);
                assert_eq!(solve_order_statistic(&p), reference);
                assert_eq!(solve_recurrence(&p), reference.survivor);
            }
        }
    }

    #[test]
    fn kill_sequence_json_shape() {
        let ks = simulate_imperative(&problem(3, 2));
        assert_eq!(
            serde_json::to_string(&ks).unwrap(),
            r#"{"n":3,"m":2,"order":[2,1],"survivor":3}"#
        );
    }

    #[test]
    fn kill_sequence_csv_shape() {
        let ks = simulate_imperative(&problem(3, 2));
        assert_eq!(ks.csv(), "step,killed,remaining_count\n1,2,2\n2,1,1\n");
    }

    #[test]
    fn counters_are_zero_for_single_player() {
        let p = problem(1, 10);
        assert_eq!(simulate_imperative_counted(&p).ops, 0);
        assert_eq!(solve_zipper_counted(&p).ops, 0);
        assert_eq!(solve_order_statistic_counted(&p).ops, 0);
        assert_eq!(solve_recurrence_counted(&p).ops, 0);
        assert_eq!(closed_form_m2_counted(1).ops, 0);
    }

    #[test]
    fn traces_record_state_after_each_kill() {
        let p = problem(6, 3);
        let (ks, states) = imperative_trace(&p);
        assert_eq!(states.len(), 5);
        assert_eq!(states[0].prisoners(), &[1, 2, 4, 5, 6]);
        assert_eq!(states[0].index(), 2);
        assert_eq!(ks, simulate_imperative(&p));

        let (ks, circles) = zipper_trace(&p);
        assert_eq!(circles.len(), 5);
        assert_eq!(circles[0], mk_circle(4u64, vec![5, 6, 1, 2]).unwrap());
        assert!(circles[4].is_singleton());
        assert_eq!(ks.survivor, *circles[4].current());
    }

    #[test]
    fn closed_form_via_algorithm_requires_step_two() {
        let p = problem(10, 3);
        assert_eq!(
            Algorithm::ClosedFormM2.solve(&p),
            Err(SolveError::ClosedFormKillStep(3))
        );
        let p = problem(10, 2);
        assert_eq!(Algorithm::ClosedFormM2.solve(&p).unwrap().value.survivor, 5);
    }

    #[test]
    fn imperative_state_display_and_validation() {
        let s = ImperativeState::new(1, vec![1, 3]).unwrap();
        assert_eq!(s.to_string(), "(1, [1, 3])");
        assert_eq!(
            ImperativeState::new(2, vec![1, 3]),
            Err(StateError::IndexOutOfRange { index: 2, len: 2 })
        );
        assert_eq!(ImperativeState::new(0, vec![]), Err(StateError::Empty));
        assert_eq!(
            ImperativeState::new(0, vec![4, 4]),
            Err(StateError::Duplicate(4))
        );
    }
}
