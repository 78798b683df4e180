//! Greedy Dehn-style rewriting: replace more than half of a relator by the
//! inverse of the remainder until no such replacement applies.

use super::word::{cyclic_reduce, Letter, Word};

#[derive(Clone, Debug)]
pub struct Rewriter {
    /// Every cyclic rotation of every relator and its inverse.
    rotations: Vec<Vec<Letter>>,
}

impl Rewriter {
    pub fn new(relators: &[Word]) -> Self {
        let mut rotations = Vec::new();
        for r in relators {
            for base in [r.clone(), r.inverse()] {
                let l = base.letters();
                for k in 0..l.len() {
                    rotations.push(l[k..].iter().chain(&l[..k]).copied().collect());
                }
            }
        }
        rotations.sort();
        rotations.dedup();
        Self { rotations }
    }

    /// Rewrites `word` towards the identity. Returns the rewritten word and the
    /// number of replacements performed, or `None` if the budget ran out.
    pub fn reduce(&self, word: &Word, budget: u64) -> Option<(Word, u64)> {
        let mut w = cyclic_reduce(word);
        let mut steps = 0u64;
        'outer: loop {
            let letters = w.letters().to_vec();
            for i in 0..letters.len() {
                for rot in &self.rotations {
                    let n = rot.len();
                    let m = letters[i..]
                        .iter()
                        .zip(rot)
                        .take_while(|(a, b)| a == b)
                        .count();
                    if 2 * m > n {
                        steps += 1;
                        if steps > budget {
                            return None;
                        }
                        // rot = u v with u matched, so u = v^-1
                        let replacement = Word::from_letters(rot[m..].to_vec()).inverse();
                        let mut out = letters[..i].to_vec();
                        out.extend(replacement.letters());
                        out.extend(&letters[i + m..]);
                        w = cyclic_reduce(&Word::from_letters(out));
                        continue 'outer;
                    }
                }
            }
            return Some((w, steps));
        }
    }
}
