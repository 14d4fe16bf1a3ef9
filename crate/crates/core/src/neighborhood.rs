//! Neighborhoods generated by objective-variant symmetries.
//!
//! The neighbors of an assignment are its images under each generator.
//! Because every generator maps models to models, every neighbor of a model
//! is again a model, and since swaps are involutions the relation is
//! symmetric.

use std::collections::{BTreeSet, VecDeque};

use crate::model::{Assignment, Mop};
use crate::symmetry::{apply_symmetry, Classification, DesSymmetry, DetectionReport};

/// Which generator set to build from the detected swaps of a type.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum GeneratorSet {
    /// Every surviving pair: `C(n, 2)` generators per type.
    #[default]
    AllPairs,
    /// Only swaps of neighboring codes `(k, k+1)`. When all of them survive
    /// they still generate every permutation of the type, with `n - 1`
    /// generators instead of `C(n, 2)`.
    Adjacent,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Move {
    pub generator_index: usize,
    pub description: String,
}

#[derive(Clone, Debug)]
pub struct Neighborhood {
    pub generators: Vec<DesSymmetry>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum NeighborhoodError {
    #[error("orbit exceeds the cap of {cap} assignments")]
    CapExceeded { cap: usize },
}

/// Collects the generators from a detection report. Unclassified symmetries
/// are kept; objective-invariant ones are already in the rejected list.
/// Returns `None` when nothing survives.
pub fn build_neighborhood(report: &DetectionReport) -> Option<Neighborhood> {
    build_neighborhood_with(report, GeneratorSet::AllPairs)
}

pub fn build_neighborhood_with(report: &DetectionReport, set: GeneratorSet) -> Option<Neighborhood> {
    let generators: Vec<DesSymmetry> = report
        .symmetries
        .iter()
        .filter(|s| !s.classification.is_invariant())
        .filter(|s| match set {
            GeneratorSet::AllPairs => true,
            GeneratorSet::Adjacent => s.b == s.a + 1,
        })
        .cloned()
        .collect();
    if generators.is_empty() {
        None
    } else {
        Some(Neighborhood { generators })
    }
}

impl Neighborhood {
    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn is_fully_classified(&self) -> bool {
        self.generators
            .iter()
            .all(|g| g.classification != Classification::Unclassified)
    }

    pub fn apply(&self, mop: &Mop, index: usize, a: &Assignment) -> Assignment {
        apply_symmetry(mop, &self.generators[index], a)
    }

    /// One neighbor per generator, in generator order. Duplicates are not
    /// removed.
    pub fn neighbors<'a>(
        &'a self,
        mop: &'a Mop,
        a: &'a Assignment,
    ) -> impl Iterator<Item = (Move, Assignment)> + 'a {
        self.generators.iter().enumerate().map(move |(i, g)| {
            (
                Move {
                    generator_index: i,
                    description: g.describe(mop),
                },
                apply_symmetry(mop, g, a),
            )
        })
    }

    /// Breadth-first closure of `a` under the generators. Fails once more
    /// than `cap` distinct assignments have been reached.
    pub fn orbit_closure(
        &self,
        mop: &Mop,
        a: &Assignment,
        cap: usize,
    ) -> Result<BTreeSet<Assignment>, NeighborhoodError> {
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::new();
        seen.insert(a.clone());
        queue.push_back(a.clone());
        while let Some(x) = queue.pop_front() {
            for g in &self.generators {
                let y = apply_symmetry(mop, g, &x);
                if !seen.contains(&y) {
                    if seen.len() >= cap {
                        return Err(NeighborhoodError::CapExceeded { cap });
                    }
                    seen.insert(y.clone());
                    queue.push_back(y);
                }
            }
        }
        Ok(seen)
    }
}
