use std::collections::{BTreeSet, HashSet};
use std::fmt;

use super::word::{cyclic_canonical, cyclic_reduce, Word};
use super::GroupError;

/// A finite presentation `⟨generators | relators⟩`.
///
/// Generator ids live in `0..id_space`; `generators` lists the ids that are
/// active. Simplification removes ids without renumbering the survivors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    id_space: usize,
    generators: Vec<u32>,
    relators: Vec<Word>,
    labels: Vec<String>,
    provenance: Option<String>,
}

impl Presentation {
    /// `⟨g0..g{n-1} | relators⟩`. Relators are cyclically reduced and trivial
    /// ones dropped.
    pub fn new(generator_count: usize, relators: Vec<Word>) -> Result<Self, GroupError> {
        let labels = (0..generator_count).map(|i| format!("g{i}")).collect();
        Self::with_labels(labels, relators)
    }

    pub fn with_labels(labels: Vec<String>, relators: Vec<Word>) -> Result<Self, GroupError> {
        let n = labels.len();
        for r in &relators {
            if let Some(g) = r.max_generator() {
                if g as usize >= n {
                    return Err(GroupError::UnknownGenerator(g));
                }
            }
        }
        Ok(Self {
            id_space: n,
            generators: (0..n as u32).collect(),
            relators: normalize_relators(relators),
            labels,
            provenance: None,
        })
    }

    pub(crate) fn from_parts(
        id_space: usize,
        generators: Vec<u32>,
        relators: Vec<Word>,
        labels: Vec<String>,
        provenance: Option<String>,
    ) -> Self {
        Self {
            id_space,
            generators,
            relators,
            labels,
            provenance,
        }
    }

    pub fn with_provenance(mut self, provenance: impl Into<String>) -> Self {
        self.provenance = Some(provenance.into());
        self
    }

    pub fn provenance(&self) -> Option<&str> {
        self.provenance.as_deref()
    }

    /// Size of the generator id space (active or not).
    pub fn id_space(&self) -> usize {
        self.id_space
    }

    pub fn generators(&self) -> &[u32] {
        &self.generators
    }

    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn label(&self, gen: u32) -> &str {
        &self.labels[gen as usize]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn is_active(&self, gen: u32) -> bool {
        self.generators.binary_search(&gen).is_ok()
    }

    /// Fails if the word uses a generator that is not active here.
    pub fn check_word(&self, word: &Word) -> Result<(), GroupError> {
        match word.letters().iter().find(|l| !self.is_active(l.gen())) {
            Some(l) => Err(GroupError::UnknownGenerator(l.gen())),
            None => Ok(()),
        }
    }

    pub fn total_relator_length(&self) -> usize {
        self.relators.iter().map(Word::len).sum()
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.generators.iter().map(|g| format!("g{g}")).collect();
        let rels: Vec<String> = self.relators.iter().map(ToString::to_string).collect();
        write!(f, "< {} | {} >", gens.join(", "), rels.join(", "))
    }
}

/// Cyclically reduces, drops trivial relators, and removes duplicates up to
/// rotation and inversion. Keeps first-occurrence order.
pub(crate) fn normalize_relators(relators: Vec<Word>) -> Vec<Word> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for r in relators {
        let r = cyclic_reduce(&r);
        if r.is_empty() {
            continue;
        }
        if seen.insert(cyclic_canonical(&r)) {
            out.push(r);
        }
    }
    out
}

pub(crate) fn active_set(p: &Presentation) -> BTreeSet<u32> {
    p.generators.iter().copied().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relators_are_normalized() {
        let p = Presentation::new(
            2,
            vec![
                Word::from_signed(&[1, 2, -2]),
                Word::from_signed(&[2, -2]),
                Word::from_signed(&[-1]),
            ],
        )
        .unwrap();
        assert_eq!(p.relators(), &[Word::from_signed(&[1])]);
    }

    #[test]
    fn unknown_generators_are_rejected() {
        assert_eq!(
            Presentation::new(1, vec![Word::from_signed(&[2])]).unwrap_err(),
            GroupError::UnknownGenerator(1)
        );
        let p = Presentation::new(1, vec![]).unwrap();
        assert!(p.check_word(&Word::from_signed(&[1, -1])).is_ok());
        assert_eq!(
            p.check_word(&Word::from_signed(&[3])).unwrap_err(),
            GroupError::UnknownGenerator(2)
        );
    }
}
