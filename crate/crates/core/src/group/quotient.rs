//! Search for permutation representations, used to separate words.

use super::presentation::Presentation;
use super::word::Word;

/// A homomorphism to the symmetric group on `degree` points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermRep {
    degree: usize,
    /// Indexed by generator id; `None` for ids not active in the presentation.
    images: Vec<Option<Vec<u8>>>,
}

impl PermRep {
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Image permutation of the word (right action, left to right).
    pub fn apply(&self, word: &Word) -> Vec<u8> {
        let mut perm: Vec<u8> = (0..self.degree as u8).collect();
        for l in word.letters() {
            let g = self.images[l.gen() as usize].as_ref().expect("active generator");
            if l.is_inverse() {
                let inv = invert(g);
                perm = perm.iter().map(|&x| inv[x as usize]).collect();
            } else {
                perm = perm.iter().map(|&x| g[x as usize]).collect();
            }
        }
        perm
    }

    pub fn is_identity(&self, word: &Word) -> bool {
        self.apply(word).iter().enumerate().all(|(i, &x)| i == x as usize)
    }
}

fn invert(p: &[u8]) -> Vec<u8> {
    let mut out = vec![0u8; p.len()];
    for (i, &x) in p.iter().enumerate() {
        out[x as usize] = i as u8;
    }
    out
}

fn permutations(k: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut cur: Vec<u8> = (0..k as u8).collect();
    heap_permute(k, &mut cur, &mut out);
    out.sort();
    out
}

fn heap_permute(k: usize, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
    if k <= 1 {
        out.push(cur.clone());
        return;
    }
    for i in 0..k {
        heap_permute(k - 1, cur, out);
        if k % 2 == 0 {
            cur.swap(i, k - 1);
        } else {
            cur.swap(0, k - 1);
        }
    }
}

/// Nontrivial homomorphisms `G → S_k` for `k = 2..=max_degree`, at most
/// `limit` of them. Returns the representations found and whether the budget
/// ran out before the search space was covered.
pub fn find_quotients(
    presentation: &Presentation,
    max_degree: usize,
    limit: usize,
    budget: u64,
) -> (Vec<PermRep>, bool) {
    let gens = presentation.generators();
    let mut found = Vec::new();
    let mut steps = 0u64;
    if gens.is_empty() {
        return (found, false);
    }
    // a relator is checked once the last of its generators is assigned
    let slot_of = |g: u32| gens.binary_search(&g).expect("active generator");
    let mut check_at: Vec<Vec<&Word>> = vec![Vec::new(); gens.len()];
    for r in presentation.relators() {
        let last = r.letters().iter().map(|l| slot_of(l.gen())).max().unwrap_or(0);
        check_at[last].push(r);
    }
    for degree in 2..=max_degree {
        let perms = permutations(degree);
        let mut images: Vec<Option<Vec<u8>>> = vec![None; presentation.id_space()];
        let mut choice = vec![0usize; gens.len()];
        let mut slot = 0usize;
        // iterative depth-first search over generator assignments
        loop {
            if choice[slot] == perms.len() {
                choice[slot] = 0;
                images[gens[slot] as usize] = None;
                if slot == 0 {
                    break;
                }
                slot -= 1;
                choice[slot] += 1;
                continue;
            }
            steps += 1;
            if steps > budget {
                return (found, true);
            }
            images[gens[slot] as usize] = Some(perms[choice[slot]].clone());
            let rep = PermRep {
                degree,
                images: images.clone(),
            };
            if !check_at[slot].iter().all(|r| rep.is_identity(r)) {
                choice[slot] += 1;
                continue;
            }
            if slot + 1 < gens.len() {
                slot += 1;
                continue;
            }
            let nontrivial = gens
                .iter()
                .any(|&g| !rep.is_identity(&Word::generator(g)));
            if nontrivial {
                found.push(rep);
                if found.len() >= limit {
                    return (found, false);
                }
            }
            choice[slot] += 1;
        }
    }
    (found, false)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutation_counts() {
        assert_eq!(permutations(3).len(), 6);
        assert_eq!(permutations(4).len(), 24);
    }

    #[test]
    fn finds_sign_map_of_s3() {
        let p = Presentation::new(
            2,
            vec![Word::from_signed(&[1, 1]), Word::from_signed(&[2, 2, 2]), Word::from_signed(&[1, 2, 1, 2])],
        )
        .unwrap();
        let (reps, exhausted) = find_quotients(&p, 3, 100, 1_000_000);
        assert!(!exhausted);
        assert!(!reps.is_empty());
        for rep in &reps {
            for r in p.relators() {
                assert!(rep.is_identity(r));
            }
        }
        assert!(reps.iter().any(|rep| !rep.is_identity(&Word::from_signed(&[1]))));
    }

    #[test]
    fn trivial_group_has_none() {
        let p = Presentation::new(1, vec![Word::from_signed(&[1])]).unwrap();
        let (reps, _) = find_quotients(&p, 4, 100, 1_000_000);
        assert!(reps.is_empty());
    }
}
