//! A nonempty circular arrangement with one focused element.
//!
//! `Circle` is a functional zipper over a ring: [`Circle::next`] rotates the
//! focus one position forward and [`Circle::remove`] deletes the focused
//! element, focusing its successor. Both are total; on a single-element
//! circle they return the circle unchanged, which makes the empty circle
//! unrepresentable.
//!
//! Values are immutable: `next` and `remove` consume their input and return
//! a fresh circle, so the type is safe to share and send between threads.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::hash::Hash;

use serde::Serialize;
use thiserror::Error;

/// Bounds required of circle labels: comparable, hashable, printable.
pub trait Label: Clone + Eq + Hash + Ord + fmt::Debug + fmt::Display {}

impl<T: Clone + Eq + Hash + Ord + fmt::Debug + fmt::Display> Label for T {}

/// Error from [`mk_circle`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CircleError<T: fmt::Display> {
    /// The same label would appear twice in the circle.
    #[error("duplicate label {0} in circle")]
    DuplicateLabel(T),
}

/// A circular arrangement of distinct labels with one element in focus.
///
/// Equality is structural: circles with the same ring but a different focus,
/// or the remainder listed in a different rotation, are distinct values.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Circle<T> {
    focus: T,
    rest: VecDeque<T>,
}

/// Builds a circle from a focus and the labels that follow it, in circle
/// order. Fails if any label appears twice.
pub fn mk_circle<T: Label>(
    focus: T,
    after: impl IntoIterator<Item = T>,
) -> Result<Circle<T>, CircleError<T>> {
    let rest: VecDeque<T> = after.into_iter().collect();
    let mut seen = HashSet::with_capacity(rest.len() + 1);
    seen.insert(focus.clone());
    for label in &rest {
        if !seen.insert(label.clone()) {
            return Err(CircleError::DuplicateLabel(label.clone()));
        }
    }
    Ok(Circle { focus, rest })
}

impl<T: Label> Circle<T> {
    /// The element currently in focus.
    pub fn current(&self) -> &T {
        &self.focus
    }

    /// True iff the circle contains exactly one element.
    pub fn is_singleton(&self) -> bool {
        self.rest.is_empty()
    }

    /// Number of elements in the circle, always at least 1.
    pub fn size(&self) -> usize {
        1 + self.rest.len()
    }

    /// Moves the focus to the following element; the old focus becomes the
    /// last element of the remainder. Identity on singletons.
    pub fn next(mut self) -> Self {
        match self.rest.pop_front() {
            Some(new_focus) => {
                let old = std::mem::replace(&mut self.focus, new_focus);
                self.rest.push_back(old);
                self
            }
            None => self,
        }
    }

    /// Deletes the focused element and focuses its successor. Identity on
    /// singletons.
    pub fn remove(mut self) -> Self {
        match self.rest.pop_front() {
            Some(new_focus) => {
                self.focus = new_focus;
                self
            }
            None => self,
        }
    }

    /// Labels in circle order, starting at the focus.
    pub fn iter(&self) -> impl Iterator<Item = &T> {
        std::iter::once(&self.focus).chain(self.rest.iter())
    }

    /// The labels after the focus, in circle order.
    pub fn rest(&self) -> impl Iterator<Item = &T> {
        self.rest.iter()
    }
}

impl<T: Label> fmt::Display for Circle<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C {} [", self.focus)?;
        for (i, label) in self.rest.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{label}")?;
        }
        write!(f, "]")
    }
}
