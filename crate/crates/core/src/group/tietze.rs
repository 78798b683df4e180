//! Tietze simplification.
//!
//! A generator that occurs exactly once in some relator is solved for and
//! substituted everywhere; the relator and generator are then dropped. The
//! shortest relator is tried first, so length-1 relators kill generators and
//! length-2 relators become substitutions before anything longer is used.

use std::collections::BTreeSet;

use super::presentation::{active_set, normalize_relators, Presentation};
use super::word::{Letter, Word};

/// Result of [`simplify`]: an isomorphic presentation plus the isomorphism on
/// generators.
#[derive(Clone, Debug)]
pub struct Simplification {
    presentation: Presentation,
    images: Vec<Word>,
    steps: u64,
    exhausted: bool,
}

impl Simplification {
    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    /// Number of Tietze moves applied.
    pub fn steps(&self) -> u64 {
        self.steps
    }

    /// `true` when the budget or the growth guard stopped simplification
    /// while eliminations were still available.
    pub fn exhausted(&self) -> bool {
        self.exhausted
    }

    /// Image of an original generator in the surviving generators.
    pub fn generator_image(&self, gen: u32) -> &Word {
        &self.images[gen as usize]
    }

    /// Image of a word over the original generators, freely reduced.
    pub fn image(&self, word: &Word) -> Word {
        word.substitute(|g| self.images[g as usize].clone())
    }

    pub fn is_trivial(&self) -> bool {
        self.presentation.generator_count() == 0
    }
}

/// Applies at most `budget` elimination moves.
pub fn simplify(presentation: &Presentation, budget: u64) -> Simplification {
    let mut active: BTreeSet<u32> = active_set(presentation);
    let mut relators = normalize_relators(presentation.relators().to_vec());
    let mut images: Vec<Word> = (0..presentation.id_space() as u32)
        .map(|g| {
            if active.contains(&g) {
                Word::generator(g)
            } else {
                Word::empty()
            }
        })
        .collect();
    let initial_len: usize = relators.iter().map(Word::len).sum();
    let length_cap = (initial_len * 4).max(20_000);

    let mut steps = 0u64;
    let mut exhausted = false;
    while let Some((index, gen, expr)) = find_elimination(&relators) {
        if steps >= budget {
            exhausted = true;
            break;
        }
        let occurrences: usize = relators
            .iter()
            .map(|r| r.letters().iter().filter(|l| l.gen() == gen).count())
            .sum();
        let current: usize = relators.iter().map(Word::len).sum();
        if current + occurrences * expr.len() > length_cap {
            exhausted = true;
            break;
        }

        relators.remove(index);
        active.remove(&gen);
        let image = |h: u32| {
            if h == gen {
                expr.clone()
            } else {
                Word::generator(h)
            }
        };
        for r in relators.iter_mut() {
            if r.letters().iter().any(|l| l.gen() == gen) {
                *r = r.substitute(image);
            }
        }
        relators = normalize_relators(relators);
        for w in images.iter_mut() {
            if w.letters().iter().any(|l| l.gen() == gen) {
                *w = w.substitute(image);
            }
        }
        steps += 1;
    }

    let simplified = Presentation::from_parts(
        presentation.id_space(),
        active.into_iter().collect(),
        relators,
        presentation.labels().to_vec(),
        presentation.provenance().map(str::to_string),
    );
    Simplification {
        presentation: simplified,
        images,
        steps,
        exhausted,
    }
}

/// Finds `(relator index, generator, expression)` such that the generator
/// equals the expression in the group and the relator is consumed.
fn find_elimination(relators: &[Word]) -> Option<(usize, u32, Word)> {
    let mut order: Vec<usize> = (0..relators.len()).collect();
    order.sort_by_key(|&i| relators[i].len());
    for i in order {
        let r = relators[i].letters();
        let mut counts: Vec<(u32, usize, usize)> = Vec::new(); // (gen, count, position)
        for (pos, l) in r.iter().enumerate() {
            match counts.iter_mut().find(|c| c.0 == l.gen()) {
                Some(c) => c.1 += 1,
                None => counts.push((l.gen(), 1, pos)),
            }
        }
        let Some(&(gen, _, pos)) = counts.iter().filter(|c| c.1 == 1).max_by_key(|c| c.0) else {
            continue;
        };
        // r = u g^e v  ⇒  g^e (v u) = 1 after rotation
        let rest: Vec<Letter> = r[pos + 1..].iter().chain(&r[..pos]).copied().collect();
        let rest = Word::from_letters(rest).free_reduce();
        let expr = if r[pos].is_inverse() {
            rest
        } else {
            rest.inverse()
        };
        return Some((i, gen, expr));
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(v: &[i32]) -> Word {
        Word::from_signed(v)
    }

    #[test]
    fn length_one_relator_kills_generator() {
        let p = Presentation::new(1, vec![w(&[1])]).unwrap();
        let s = simplify(&p, 100);
        assert!(s.is_trivial());
        assert_eq!(s.presentation().relators().len(), 0);
    }

    #[test]
    fn length_two_relator_substitutes() {
        let p = Presentation::new(2, vec![w(&[1, 2])]).unwrap();
        let s = simplify(&p, 100);
        assert_eq!(s.presentation().generators(), &[0]);
        assert!(s.presentation().relators().is_empty());
        assert_eq!(s.generator_image(1), &w(&[-1]));
        assert!(!s.exhausted());
    }

    #[test]
    fn powers_are_left_alone() {
        let p = Presentation::new(1, vec![w(&[1, 1, 1])]).unwrap();
        let s = simplify(&p, 100);
        assert_eq!(s.presentation().generators(), &[0]);
        assert_eq!(s.presentation().relators(), &[w(&[1, 1, 1])]);
    }

    #[test]
    fn images_respect_relators() {
        // ⟨a, b, c | a b c, b c⟩ ≅ ⟨c⟩ with a = 1 and b = c^-1
        let p = Presentation::new(3, vec![w(&[1, 2, 3]), w(&[2, 3])]).unwrap();
        let s = simplify(&p, 100);
        for r in p.relators() {
            assert!(s.image(r).is_empty());
        }
        assert_eq!(s.presentation().generator_count(), 1);
    }

    #[test]
    fn zero_budget_is_flagged() {
        let p = Presentation::new(1, vec![w(&[1])]).unwrap();
        let s = simplify(&p, 0);
        assert!(s.exhausted());
        assert_eq!(s.presentation().generator_count(), 1);
    }
}
