//! Finite discrete dynamical systems and morphism checking between them.
//!
//! A system is a finite state set together with a total endomap (the
//! one-step dynamics). A map `f` between two systems is a *morphism* when
//! stepping then mapping equals mapping then stepping at every state; a
//! bijective morphism whose inverse is also a morphism is an *isomorphism*.
//! Both checks are exhaustive and report the first failing state under the
//! system's canonical ordering, so verdicts are deterministic.
//!
//! The module also houses the two concrete systems this crate compares:
//! circles under the kill step, and cursor-and-list snapshots under one
//! round of the imperative loop, linked by [`canonical_map`].

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::hash::Hash;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::circle::{mk_circle, Circle};
use crate::solvers::{remove_nth, step_offset, ImperativeState};

/// States must be cheap to clone, hashable, and printable; the `Display`
/// form doubles as the canonical serialized form used for ordering,
/// verdicts, and diagram labels.
pub trait State: Clone + Eq + Hash + fmt::Display {}

impl<T: Clone + Eq + Hash + fmt::Display> State for T {}

/// Largest universe accepted by the state enumerators. Eight labels already
/// give 109 600 circle states; anything bigger is a sign the caller wanted
/// a different tool.
pub const UNIVERSE_GUARD: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DynamicsError {
    #[error("a dynamical system needs at least one state")]
    EmptyStateSet,
    #[error("state {state} steps to {image}, which is outside the system")]
    ClosureViolation { state: String, image: String },
    #[error("universe of {size} labels exceeds the enumeration guard of {max}")]
    UniverseTooLarge { size: usize, max: usize },
    #[error("duplicate label {0} in universe")]
    DuplicateUniverseLabel(u64),
    #[error("map sends {state} to {image}, which is outside the target system")]
    MapEscapes { state: String, image: String },
    #[error("{states} states exceed the diagram cap of {cap}; filter the systems first")]
    DiagramCapExceeded { states: usize, cap: usize },
    #[error("state {0} is not in the system")]
    UnknownState(String),
}

/// A finite state set with a total endomap, stored as an index table.
/// States are kept sorted by their canonical (`Display`) form.
#[derive(Debug, Clone)]
pub struct DynSystem<S: State> {
    states: Vec<S>,
    canons: Vec<String>,
    index: HashMap<S, usize>,
    step: Vec<usize>,
}

/// Validates that `step` maps every state back into `states` and builds the
/// system. Duplicate input states collapse; the error names the first state
/// whose image escapes.
pub fn build_system<S: State>(
    states: impl IntoIterator<Item = S>,
    step: impl Fn(&S) -> S,
) -> Result<DynSystem<S>, DynamicsError> {
    let mut unique: Vec<S> = Vec::new();
    let mut seen: HashSet<S> = HashSet::new();
    for s in states {
        if seen.insert(s.clone()) {
            unique.push(s);
        }
    }
    if unique.is_empty() {
        return Err(DynamicsError::EmptyStateSet);
    }
    unique.sort_by_cached_key(|s| s.to_string());
    let canons: Vec<String> = unique.iter().map(|s| s.to_string()).collect();
    let index: HashMap<S, usize> = unique
        .iter()
        .enumerate()
        .map(|(i, s)| (s.clone(), i))
        .collect();
    let mut table = Vec::with_capacity(unique.len());
    for (i, s) in unique.iter().enumerate() {
        let image = step(s);
        match index.get(&image) {
            Some(&j) => table.push(j),
            None => {
                return Err(DynamicsError::ClosureViolation {
                    state: canons[i].clone(),
                    image: image.to_string(),
                })
            }
        }
    }
    Ok(DynSystem { states: unique, canons, index, step: table })
}

impl<S: State> DynSystem<S> {
    /// Number of states, always at least 1.
    pub fn len(&self) -> usize {
        self.states.len()
    }

    /// States in canonical order.
    pub fn states(&self) -> &[S] {
        &self.states
    }

    pub fn canon(&self, i: usize) -> &str {
        &self.canons[i]
    }

    pub fn contains(&self, s: &S) -> bool {
        self.index.contains_key(s)
    }

    pub fn index_of(&self, s: &S) -> Option<usize> {
        self.index.get(s).copied()
    }

    /// Index of the one-step image of state `i`.
    pub fn step_index(&self, i: usize) -> usize {
        self.step[i]
    }

    /// One-step image of a state, if the state belongs to the system.
    pub fn step_of(&self, s: &S) -> Option<&S> {
        self.index_of(s).map(|i| &self.states[self.step[i]])
    }

    /// Applies the dynamics `t` times to a known state.
    pub fn iterate(&self, s: &S, t: usize) -> Result<&S, DynamicsError> {
        let mut i = self
            .index_of(s)
            .ok_or_else(|| DynamicsError::UnknownState(s.to_string()))?;
        for _ in 0..t {
            i = self.step[i];
        }
        Ok(&self.states[i])
    }
}

/// The forward orbit of `start` under `step`, up to (excluding) the first
/// revisited state. Always finite: either the orbit reaches a cycle or a
/// fixed point.
pub fn orbit<S: State>(start: &S, step: impl Fn(&S) -> S) -> Vec<S> {
    let mut seen: HashSet<S> = HashSet::new();
    let mut out = Vec::new();
    let mut cur = start.clone();
    while seen.insert(cur.clone()) {
        out.push(cur.clone());
        cur = step(&cur);
    }
    out
}

/// A total map between the state sets of two systems, checkable as a
/// morphism. Owns both systems.
#[derive(Debug, Clone)]
pub struct SystemMap<S: State, T: State> {
    source: DynSystem<S>,
    target: DynSystem<T>,
    forward: Vec<usize>,
}

/// Builds a [`SystemMap`], verifying that `f` lands inside the target's
/// state set at every source state.
pub fn system_map<S: State, T: State>(
    source: DynSystem<S>,
    target: DynSystem<T>,
    f: impl Fn(&S) -> T,
) -> Result<SystemMap<S, T>, DynamicsError> {
    let mut forward = Vec::with_capacity(source.len());
    for (i, s) in source.states().iter().enumerate() {
        let image = f(s);
        match target.index_of(&image) {
            Some(j) => forward.push(j),
            None => {
                return Err(DynamicsError::MapEscapes {
                    state: source.canon(i).to_string(),
                    image: image.to_string(),
                })
            }
        }
    }
    Ok(SystemMap { source, target, forward })
}

/// A state where the commuting square fails, with both sides of the
/// comparison: `map_after_step` is the image of the stepped state,
/// `step_after_map` is the step of the mapped state.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub state: String,
    pub map_after_step: String,
    pub step_after_map: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MorphismVerdict {
    Holds,
    Fails(Counterexample),
}

impl MorphismVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, MorphismVerdict::Holds)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IsoVerdict {
    Holds,
    NotMorphism(Counterexample),
    /// Two distinct states share an image.
    NotInjective { left: String, right: String, image: String },
    /// A target state is never hit.
    NotSurjective { missed: String },
    /// The map is a bijective morphism but its inverse fails the square.
    InverseNotMorphism(Counterexample),
}

impl IsoVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, IsoVerdict::Holds)
    }
}

impl<S: State, T: State> SystemMap<S, T> {
    pub fn source(&self) -> &DynSystem<S> {
        &self.source
    }

    pub fn target(&self) -> &DynSystem<T> {
        &self.target
    }

    /// Image of source state `i` as a target index.
    pub fn forward_index(&self, i: usize) -> usize {
        self.forward[i]
    }

    fn violates(&self, i: usize) -> bool {
        // f(step(x)) vs step(f(x)), as target indices.
        self.forward[self.source.step_index(i)] != self.target.step_index(self.forward[i])
    }

    fn counterexample_at(&self, i: usize) -> Counterexample {
        Counterexample {
            state: self.source.canon(i).to_string(),
            map_after_step: self
                .target
                .canon(self.forward[self.source.step_index(i)])
                .to_string(),
            step_after_map: self
                .target
                .canon(self.target.step_index(self.forward[i]))
                .to_string(),
        }
    }

    /// Checks `f(step(x)) = step(f(x))` at every source state. On failure
    /// reports the first violation in canonical state order.
    pub fn is_morphism(&self) -> MorphismVerdict {
        match (0..self.source.len()).find(|&i| self.violates(i)) {
            Some(i) => MorphismVerdict::Fails(self.counterexample_at(i)),
            None => MorphismVerdict::Holds,
        }
    }

    /// Same verdict as [`SystemMap::is_morphism`], with the scan partitioned
    /// across the rayon pool. The minimum violating index wins, so the
    /// result does not depend on the schedule.
    pub fn is_morphism_parallel(&self) -> MorphismVerdict {
        let src_step = &self.source.step;
        let tgt_step = &self.target.step;
        let forward = &self.forward;
        let first = (0..forward.len())
            .into_par_iter()
            .filter(|&i| forward[src_step[i]] != tgt_step[forward[i]])
            .min();
        match first {
            Some(i) => MorphismVerdict::Fails(self.counterexample_at(i)),
            None => MorphismVerdict::Holds,
        }
    }

    /// Holds iff the map is a morphism, a bijection onto the target states,
    /// and its inverse is a morphism. Failures report the first offending
    /// condition in that order.
    pub fn is_isomorphism(&self) -> IsoVerdict {
        if let MorphismVerdict::Fails(cex) = self.is_morphism() {
            return IsoVerdict::NotMorphism(cex);
        }
        let mut hit: Vec<Option<usize>> = vec![None; self.target.len()];
        for (i, &j) in self.forward.iter().enumerate() {
            if let Some(prev) = hit[j] {
                return IsoVerdict::NotInjective {
                    left: self.source.canon(prev).to_string(),
                    right: self.source.canon(i).to_string(),
                    image: self.target.canon(j).to_string(),
                };
            }
            hit[j] = Some(i);
        }
        let mut inverse = vec![0usize; self.target.len()];
        for (j, slot) in hit.iter().enumerate() {
            match slot {
                Some(i) => inverse[j] = *i,
                None => {
                    return IsoVerdict::NotSurjective {
                        missed: self.target.canon(j).to_string(),
                    }
                }
            }
        }
        // Inverse square: g(step(y)) vs step(g(y)) for g = f⁻¹.
        for j in 0..self.target.len() {
            let lhs = inverse[self.target.step_index(j)];
            let rhs = self.source.step_index(inverse[j]);
            if lhs != rhs {
                return IsoVerdict::InverseNotMorphism(Counterexample {
                    state: self.target.canon(j).to_string(),
                    map_after_step: self.source.canon(lhs).to_string(),
                    step_after_map: self.source.canon(rhs).to_string(),
                });
            }
        }
        IsoVerdict::Holds
    }
}

fn check_universe(universe: &[u64]) -> Result<(), DynamicsError> {
    if universe.len() > UNIVERSE_GUARD {
        return Err(DynamicsError::UniverseTooLarge {
            size: universe.len(),
            max: UNIVERSE_GUARD,
        });
    }
    let mut seen = HashSet::new();
    for &label in universe {
        if !seen.insert(label) {
            return Err(DynamicsError::DuplicateUniverseLabel(label));
        }
    }
    Ok(())
}

fn arrangements(universe: &[u64]) -> Vec<Vec<u64>> {
    fn go(universe: &[u64], used: &mut [bool], prefix: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        for i in 0..universe.len() {
            if used[i] {
                continue;
            }
            used[i] = true;
            prefix.push(universe[i]);
            out.push(prefix.clone());
            go(universe, used, prefix, out);
            prefix.pop();
            used[i] = false;
        }
    }
    let mut out = Vec::new();
    go(universe, &mut vec![false; universe.len()], &mut Vec::new(), &mut out);
    out
}

/// Every circle whose labels form a nonempty distinct subset of `universe`,
/// in every arrangement and with every choice of focus.
pub fn enumerate_circle_states(universe: &[u64]) -> Result<Vec<Circle<u64>>, DynamicsError> {
    check_universe(universe)?;
    Ok(arrangements(universe)
        .into_iter()
        .map(|arr| mk_circle(arr[0], arr[1..].to_vec()).expect("arrangement labels are distinct"))
        .collect())
}

/// Every cursor-and-list snapshot over `universe`: each nonempty distinct
/// arrangement paired with every in-range cursor.
pub fn enumerate_imperative_states(
    universe: &[u64],
) -> Result<Vec<ImperativeState>, DynamicsError> {
    check_universe(universe)?;
    let mut out = Vec::new();
    for arr in arrangements(universe) {
        for index in 0..arr.len() {
            out.push(
                ImperativeState::new(index, arr.clone()).expect("arrangement is valid"),
            );
        }
    }
    Ok(out)
}

/// One elimination round on a circle: remove the `m`-th element from the
/// focus. Singletons are fixed points, so the map is total.
pub fn kill_step_circle(c: &Circle<u64>, m: u64) -> Circle<u64> {
    if c.is_singleton() {
        c.clone()
    } else {
        remove_nth(m, c.clone()).1
    }
}

/// One elimination round on a cursor-and-list snapshot: advance the cursor
/// by `m - 1` modulo the list length, remove the entry there, and reduce
/// the cursor modulo the shrunk list. Single-entry states are fixed points.
pub fn kill_step_imperative(s: &ImperativeState, m: u64) -> ImperativeState {
    let len = s.prisoners().len();
    if len == 1 {
        return s.clone();
    }
    let k = (step_offset(m, len) + s.index()) % len;
    let mut prisoners = s.prisoners().to_vec();
    prisoners.remove(k);
    let index = if k == prisoners.len() { 0 } else { k };
    ImperativeState::new_unchecked(index, prisoners)
}

/// The cursor update alone: `index <- (m - 1 + index) mod len`, list
/// untouched. Exposed so the index-only reading of the imperative dynamics
/// can be experimented with next to the full elimination round.
pub fn gamma_line6(s: &ImperativeState, m: u64) -> ImperativeState {
    let len = s.prisoners().len();
    ImperativeState::new_unchecked(
        (step_offset(m, len) + s.index()) % len,
        s.prisoners().to_vec(),
    )
}

/// Maps a circle to the cursor-and-list snapshot for the same elimination
/// configuration: the list holds the circle's labels in the unique linear
/// order that the list dynamics preserves, and the cursor points at the
/// focus.
///
/// For circles whose cyclic order is a rotation of ascending label order —
/// every circle reachable from a freshly built game — the list is simply
/// the surviving labels ascending, independent of `m`. Other circles take
/// the order consistent with their own elimination future under kill step
/// `m`: each removed label is reinserted next to its circle predecessor,
/// and a label that would sit at the seam goes to whichever end keeps the
/// smaller label first.
pub fn canonical_map(c: &Circle<u64>, m: u64) -> ImperativeState {
    let readout = elimination_readout(c, m);
    let index = readout
        .iter()
        .position(|x| x == c.current())
        .expect("focus appears in its own readout");
    ImperativeState::new_unchecked(index, readout)
}

fn elimination_readout(c: &Circle<u64>, m: u64) -> Vec<u64> {
    // Run the elimination forward, remembering each victim and its circle
    // successor, then rebuild the list back to front.
    let mut kills: Vec<(u64, u64)> = Vec::new();
    let mut cur = c.clone();
    while !cur.is_singleton() {
        let (killed, rest) = remove_nth(m, cur);
        kills.push((killed, *rest.current()));
        cur = rest;
    }
    let mut readout = vec![*cur.current()];
    for &(killed, successor) in kills.iter().rev() {
        let pos = readout
            .iter()
            .position(|&x| x == successor)
            .expect("successor survives into the smaller readout");
        if pos > 0 {
            readout.insert(pos, killed);
        } else if killed < readout[0] {
            readout.insert(0, killed);
        } else {
            readout.push(killed);
        }
    }
    readout
}

/// The ascending-start circle over `universe`: smallest label in focus,
/// remaining labels in ascending order after it.
pub fn start_circle(universe: &[u64]) -> Result<Circle<u64>, DynamicsError> {
    check_universe(universe)?;
    if universe.is_empty() {
        return Err(DynamicsError::EmptyStateSet);
    }
    let mut sorted = universe.to_vec();
    sorted.sort_unstable();
    Ok(mk_circle(sorted[0], sorted[1..].to_vec()).expect("universe labels are distinct"))
}

/// All circles over `universe` under the kill step.
pub fn circle_system(universe: &[u64], m: u64) -> Result<DynSystem<Circle<u64>>, DynamicsError> {
    build_system(enumerate_circle_states(universe)?, |c| kill_step_circle(c, m))
}

/// All cursor-and-list snapshots over `universe` under the elimination
/// round.
pub fn imperative_system(
    universe: &[u64],
    m: u64,
) -> Result<DynSystem<ImperativeState>, DynamicsError> {
    build_system(enumerate_imperative_states(universe)?, |s| {
        kill_step_imperative(s, m)
    })
}

/// Which square to verify: the elimination round on both sides, or the
/// rotation/cursor-update reading (one `next` against the index update
/// alone).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reading {
    KillStep,
    Line6Next,
}

/// First failing condition from a verification run, tagged by kind.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FailureWitness {
    Morphism(Counterexample),
    NotInjective { left: String, right: String, image: String },
    NotSurjective { missed: String },
    InverseMorphism(Counterexample),
    /// The map left the target system while restricting to reachable
    /// states, which already refutes the isomorphism.
    Escape { state: String, image: String },
}

impl FailureWitness {
    fn from_iso(verdict: IsoVerdict) -> Option<FailureWitness> {
        match verdict {
            IsoVerdict::Holds => None,
            IsoVerdict::NotMorphism(c) => Some(FailureWitness::Morphism(c)),
            IsoVerdict::NotInjective { left, right, image } => {
                Some(FailureWitness::NotInjective { left, right, image })
            }
            IsoVerdict::NotSurjective { missed } => {
                Some(FailureWitness::NotSurjective { missed })
            }
            IsoVerdict::InverseNotMorphism(c) => Some(FailureWitness::InverseMorphism(c)),
        }
    }
}

/// Combined verdict over a universe: the morphism condition on the full
/// state enumerations and the isomorphism condition on the states reachable
/// from the ascending start.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub morphism: bool,
    pub isomorphism: bool,
    pub counterexample: Option<FailureWitness>,
    pub states_checked: usize,
}

/// Runs the full verification for the canonical map over `{1..=universe}`-
/// style label sets. `parallel` routes the exhaustive morphism scan through
/// the rayon pool; the verdict is identical either way.
pub fn verify_canonical(
    universe: &[u64],
    m: u64,
    reading: Reading,
    parallel: bool,
) -> Result<VerifyReport, DynamicsError> {
    let circle_step: Box<dyn Fn(&Circle<u64>) -> Circle<u64> + Sync> = match reading {
        Reading::KillStep => Box::new(move |c| kill_step_circle(c, m)),
        Reading::Line6Next => Box::new(move |c| c.clone().next()),
    };
    let imp_step: Box<dyn Fn(&ImperativeState) -> ImperativeState + Sync> = match reading {
        Reading::KillStep => Box::new(move |s| kill_step_imperative(s, m)),
        Reading::Line6Next => Box::new(move |s| gamma_line6(s, m)),
    };

    let full_source = build_system(enumerate_circle_states(universe)?, &circle_step)?;
    let full_states = full_source.len();
    let full_target = build_system(enumerate_imperative_states(universe)?, &imp_step)?;
    let map = system_map(full_source, full_target, |c| canonical_map(c, m))?;
    let morphism = if parallel {
        map.is_morphism_parallel()
    } else {
        map.is_morphism()
    };

    let start = start_circle(universe)?;
    let reachable_source = build_system(orbit(&start, &circle_step), &circle_step)?;
    let reachable_checked = reachable_source.len();
    let reachable_target = build_system(
        orbit(&canonical_map(&start, m), &imp_step),
        &imp_step,
    )?;
    let iso = match system_map(reachable_source, reachable_target, |c| canonical_map(c, m)) {
        Ok(restricted) => FailureWitness::from_iso(restricted.is_isomorphism()),
        Err(DynamicsError::MapEscapes { state, image }) => {
            Some(FailureWitness::Escape { state, image })
        }
        Err(other) => return Err(other),
    };

    let counterexample = match &morphism {
        MorphismVerdict::Fails(cex) => Some(FailureWitness::Morphism(cex.clone())),
        MorphismVerdict::Holds => iso.clone(),
    };
    Ok(VerifyReport {
        morphism: morphism.holds(),
        isomorphism: iso.is_none(),
        counterexample,
        states_checked: full_states + reachable_checked,
    })
}
