//! Budgeted word problem and subgroup membership for one presentation.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::sync::OnceLock;

use serde::Serialize;

use super::abelian::AbelianMap;
use super::coset::{enumerate, CosetTable, Enumeration};
use super::presentation::Presentation;
use super::quotient::{find_quotients, PermRep};
use super::rewrite::Rewriter;
use super::tietze::{simplify, Simplification};
use super::word::{Letter, Word};
use super::{Certificate, GroupError, Verdict};
use crate::union_find::UnionFind;

const MAX_QUOTIENT_DEGREE: usize = 5;
const MAX_QUOTIENTS: usize = 16;
const QUOTIENT_BUDGET: u64 = 200_000;
const TABLE_CELLS: usize = 4_000_000;

/// How the solver decides equality.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelKind {
    Trivial,
    /// No relators survive simplification.
    Free { rank: usize },
    /// A complete coset table of the whole group exists.
    Finite { order: usize },
    /// Only partial methods apply.
    Unresolved,
}

#[derive(Debug)]
enum Model {
    Trivial,
    Free,
    Finite(FiniteModel),
    Unresolved,
}

#[derive(Debug)]
struct FiniteModel {
    table: CosetTable,
    reps: Vec<Word>,
}

/// Decision procedures for one presentation, with the expensive
/// preprocessing (simplification, abelianization, coset table) done once.
#[derive(Debug)]
pub struct GroupSolver {
    original: Presentation,
    simplification: Simplification,
    abelian: AbelianMap,
    model: Model,
    slot_of: HashMap<u32, usize>,
    rewriter: Rewriter,
    quotients: OnceLock<(Vec<PermRep>, bool)>,
    budget: u64,
}

impl GroupSolver {
    pub fn new(presentation: &Presentation, budget: u64) -> Self {
        let simplification = simplify(presentation, budget);
        let simple = simplification.presentation();
        let abelian = AbelianMap::new(simple);
        let slot_of: HashMap<u32, usize> =
            simple.generators().iter().enumerate().map(|(i, &g)| (g, i)).collect();
        let model = if simple.generator_count() == 0 {
            Model::Trivial
        } else if simple.relators().is_empty() {
            Model::Free
        } else if abelian.invariants().free_rank == 0 {
            let rels: Vec<Vec<usize>> = simple.relators().iter().map(|r| columns(&slot_of, r)).collect();
            let cols = 2 * simple.generator_count();
            let cap = (TABLE_CELLS / cols).min(budget.min(usize::MAX as u64) as usize);
            match enumerate(simple.generator_count(), &rels, &[], cap, budget) {
                Enumeration::Complete { table, .. } => {
                    let reps = shortlex_representatives(&table, simple.generators());
                    Model::Finite(FiniteModel { table, reps })
                }
                Enumeration::Exhausted { .. } => Model::Unresolved,
            }
        } else {
            Model::Unresolved
        };
        Self {
            original: presentation.clone(),
            rewriter: Rewriter::new(simple.relators()),
            simplification,
            abelian,
            model,
            slot_of,
            quotients: OnceLock::new(),
            budget,
        }
    }

    pub fn presentation(&self) -> &Presentation {
        &self.original
    }

    pub fn simplification(&self) -> &Simplification {
        &self.simplification
    }

    pub fn abelian(&self) -> &AbelianMap {
        &self.abelian
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    pub fn model(&self) -> ModelKind {
        match &self.model {
            Model::Trivial => ModelKind::Trivial,
            Model::Free => ModelKind::Free {
                rank: self.simplification.presentation().generator_count(),
            },
            Model::Finite(f) => ModelKind::Finite { order: f.table.index() },
            Model::Unresolved => ModelKind::Unresolved,
        }
    }

    /// Whether [`canonical`](Self::canonical) is available for every word.
    pub fn is_exact(&self) -> bool {
        !matches!(self.model, Model::Unresolved)
    }

    /// Image of an original word in the simplified generators.
    pub fn image(&self, word: &Word) -> Word {
        self.simplification.image(word)
    }

    /// A normal form: equal group elements get identical words. `None` when
    /// the model is unresolved.
    pub fn canonical(&self, word: &Word) -> Option<Word> {
        let img = self.image(word);
        match &self.model {
            Model::Trivial => Some(Word::empty()),
            Model::Free => Some(img),
            Model::Finite(f) => Some(f.reps[f.table.trace(0, &columns(&self.slot_of, &img))].clone()),
            Model::Unresolved => None,
        }
    }

    fn invariants_text(&self) -> String {
        self.abelian.invariants().to_string()
    }

    fn quotients(&self) -> &[PermRep] {
        let budget = self.budget.min(QUOTIENT_BUDGET);
        &self
            .quotients
            .get_or_init(|| find_quotients(self.simplification.presentation(), MAX_QUOTIENT_DEGREE, MAX_QUOTIENTS, budget))
            .0
    }

    /// Is `w1 = w2` in the group?
    pub fn equal(&self, w1: &Word, w2: &Word) -> Result<Verdict, GroupError> {
        self.original.check_word(w1)?;
        self.original.check_word(w2)?;
        if w1.free_reduce() == w2.free_reduce() {
            return Ok(Verdict::proven(Certificate::FreeReduction));
        }
        Ok(self.is_identity(&w1.mul(&w2.inverse())))
    }

    /// Is the word the identity element?
    pub fn is_trivial_word(&self, word: &Word) -> Result<Verdict, GroupError> {
        self.equal(word, &Word::empty())
    }

    fn is_identity(&self, word: &Word) -> Verdict {
        let img = self.image(word);
        if !self.abelian.is_trivial(&img) {
            return Verdict::refuted(Certificate::Abelianization {
                invariants: self.invariants_text(),
            });
        }
        match &self.model {
            Model::Trivial => Verdict::proven(Certificate::Tietze {
                steps: self.simplification.steps(),
            }),
            Model::Free => {
                let rank = self.simplification.presentation().generator_count();
                if img.is_empty() {
                    Verdict::proven(Certificate::FreeNormalForm { rank })
                } else {
                    Verdict::refuted(Certificate::FreeNormalForm { rank })
                }
            }
            Model::Finite(f) => {
                let index = f.table.index();
                if f.table.trace(0, &columns(&self.slot_of, &img)) == 0 {
                    Verdict::proven(Certificate::CosetTable { index })
                } else {
                    Verdict::refuted(Certificate::CosetTable { index })
                }
            }
            Model::Unresolved => {
                if img.is_empty() {
                    return Verdict::proven(Certificate::Tietze {
                        steps: self.simplification.steps(),
                    });
                }
                if let Some((rest, steps)) = self.rewriter.reduce(&img, self.budget) {
                    if rest.is_empty() {
                        return Verdict::proven(Certificate::Rewriting { steps });
                    }
                }
                match self.quotients().iter().find(|q| !q.is_identity(&img)) {
                    Some(q) => Verdict::refuted(Certificate::FiniteQuotient { degree: q.degree() }),
                    None => Verdict::Unknown { budget: self.budget },
                }
            }
        }
    }

    /// Is the whole group trivial?
    pub fn is_trivial_group(&self) -> Verdict {
        match &self.model {
            Model::Trivial => Verdict::proven(Certificate::Tietze {
                steps: self.simplification.steps(),
            }),
            _ if !self.abelian.invariants().is_trivial() => Verdict::refuted(Certificate::Abelianization {
                invariants: self.invariants_text(),
            }),
            Model::Finite(f) if f.table.index() == 1 => {
                Verdict::proven(Certificate::CosetTable { index: 1 })
            }
            Model::Finite(f) => Verdict::refuted(Certificate::CosetTable { index: f.table.index() }),
            Model::Free => Verdict::refuted(Certificate::FreeNormalForm {
                rank: self.simplification.presentation().generator_count(),
            }),
            Model::Unresolved => match self.quotients().first() {
                Some(q) => Verdict::refuted(Certificate::FiniteQuotient { degree: q.degree() }),
                None => Verdict::Unknown { budget: self.budget },
            },
        }
    }

    /// Does `target` lie in the subgroup generated by `generators`?
    /// All words are over the original generators.
    pub fn in_subgroup(&self, generators: &[Word], target: &Word) -> Result<Verdict, GroupError> {
        self.original.check_word(target)?;
        for g in generators {
            self.original.check_word(g)?;
        }
        let target_reduced = target.free_reduce();
        if target_reduced.is_empty() || generators.iter().any(|g| g.free_reduce() == target_reduced) {
            return Ok(Verdict::proven(Certificate::FreeReduction));
        }
        let t = self.image(target);
        if t.is_empty() {
            return Ok(Verdict::proven(Certificate::Tietze {
                steps: self.simplification.steps(),
            }));
        }
        let hs: Vec<Word> = generators.iter().map(|g| self.image(g)).filter(|g| !g.is_empty()).collect();
        if hs.is_empty() {
            return Ok(self.is_identity(target));
        }
        if !self.abelian.in_span(&hs, &t) {
            return Ok(Verdict::refuted(Certificate::Abelianization {
                invariants: self.invariants_text(),
            }));
        }
        match &self.model {
            Model::Trivial => Ok(Verdict::proven(Certificate::Tietze {
                steps: self.simplification.steps(),
            })),
            Model::Free => {
                let graph = FoldedGraph::new(&self.slot_of, &hs);
                let vertices = graph.vertex_count();
                if graph.accepts(&self.slot_of, &t) {
                    Ok(Verdict::proven(Certificate::SubgroupGraph { vertices }))
                } else {
                    Ok(Verdict::refuted(Certificate::SubgroupGraph { vertices }))
                }
            }
            Model::Finite(f) => {
                let gens: Vec<Vec<usize>> = hs.iter().map(|h| columns(&self.slot_of, h)).collect();
                let mut seen = BTreeSet::from([0usize]);
                let mut queue = VecDeque::from([0usize]);
                while let Some(c) = queue.pop_front() {
                    for h in &gens {
                        let d = f.table.trace(c, h);
                        if seen.insert(d) {
                            queue.push_back(d);
                        }
                    }
                }
                let element = f.table.trace(0, &columns(&self.slot_of, &t));
                if seen.contains(&element) {
                    Ok(Verdict::proven(Certificate::CosetTable { index: f.table.index() }))
                } else {
                    Ok(Verdict::refuted(Certificate::SubgroupEnumerated { size: seen.len() }))
                }
            }
            Model::Unresolved => {
                let simple = self.simplification.presentation();
                let rels: Vec<Vec<usize>> = simple.relators().iter().map(|r| columns(&self.slot_of, r)).collect();
                let sub: Vec<Vec<usize>> = hs.iter().map(|h| columns(&self.slot_of, h)).collect();
                let cap = TABLE_CELLS / (2 * simple.generator_count());
                match enumerate(simple.generator_count(), &rels, &sub, cap, self.budget) {
                    Enumeration::Complete { table, .. } => {
                        let index = table.index();
                        if table.trace(0, &columns(&self.slot_of, &t)) == 0 {
                            Ok(Verdict::proven(Certificate::CosetTable { index }))
                        } else {
                            Ok(Verdict::refuted(Certificate::CosetTable { index }))
                        }
                    }
                    Enumeration::Exhausted { .. } => Ok(Verdict::Unknown { budget: self.budget }),
                }
            }
        }
    }
}

fn column(slot_of: &HashMap<u32, usize>, l: Letter) -> usize {
    2 * slot_of[&l.gen()] + usize::from(l.is_inverse())
}

fn columns(slot_of: &HashMap<u32, usize>, w: &Word) -> Vec<usize> {
    w.letters().iter().map(|&l| column(slot_of, l)).collect()
}

/// Shortlex-least word reaching each coset from coset 0. Breadth-first search
/// over columns in letter order gives exactly that.
fn shortlex_representatives(table: &CosetTable, gens: &[u32]) -> Vec<Word> {
    let mut reps: Vec<Option<Word>> = vec![None; table.index()];
    reps[0] = Some(Word::empty());
    let mut queue = VecDeque::from([0usize]);
    while let Some(c) = queue.pop_front() {
        for x in 0..table.columns() {
            let d = table.act(c, x);
            if reps[d].is_none() {
                let mut w = reps[c].clone().unwrap();
                w.push(Letter::new(gens[x / 2], x % 2 == 1));
                reps[d] = Some(w);
                queue.push_back(d);
            }
        }
    }
    reps.into_iter().map(|w| w.expect("coset table is connected")).collect()
}

/// Folded graph of a subgroup of a free group.
struct FoldedGraph {
    /// `(source, slot, target)` over representative vertices.
    edges: BTreeSet<(usize, usize, usize)>,
    base: usize,
}

impl FoldedGraph {
    fn new(slot_of: &HashMap<u32, usize>, generators: &[Word]) -> Self {
        let mut count = 1usize;
        let mut raw: Vec<(usize, usize, usize)> = Vec::new();
        for h in generators {
            let n = h.len();
            let mut prev = 0;
            for (i, l) in h.letters().iter().enumerate() {
                let next = if i + 1 == n {
                    0
                } else {
                    count += 1;
                    count - 1
                };
                let slot = slot_of[&l.gen()];
                if l.is_inverse() {
                    raw.push((next, slot, prev));
                } else {
                    raw.push((prev, slot, next));
                }
                prev = next;
            }
        }
        let mut uf = UnionFind::new(count);
        loop {
            let mut changed = false;
            let mut out: HashMap<(usize, usize), usize> = HashMap::new();
            let mut inn: HashMap<(usize, usize), usize> = HashMap::new();
            for &(u, a, v) in &raw {
                let (u, v) = (uf.find(u), uf.find(v));
                if let Some(&w) = out.get(&(u, a)) {
                    changed |= uf.union(w, v);
                } else {
                    out.insert((u, a), v);
                }
                if let Some(&w) = inn.get(&(v, a)) {
                    changed |= uf.union(w, u);
                } else {
                    inn.insert((v, a), u);
                }
            }
            if !changed {
                break;
            }
        }
        let edges = raw
            .iter()
            .map(|&(u, a, v)| (uf.find(u), a, uf.find(v)))
            .collect();
        let base = uf.find(0);
        Self { edges, base }
    }

    fn vertex_count(&self) -> usize {
        let mut vs: BTreeSet<usize> = BTreeSet::from([self.base]);
        for &(u, _, v) in &self.edges {
            vs.insert(u);
            vs.insert(v);
        }
        vs.len()
    }

    fn accepts(&self, slot_of: &HashMap<u32, usize>, word: &Word) -> bool {
        let mut cur = self.base;
        for l in word.letters() {
            let a = slot_of[&l.gen()];
            let next = if l.is_inverse() {
                self.edges.iter().find(|&&(_, b, v)| b == a && v == cur).map(|e| e.0)
            } else {
                self.edges.iter().find(|&&(u, b, _)| b == a && u == cur).map(|e| e.2)
            };
            match next {
                Some(n) => cur = n,
                None => return false,
            }
        }
        cur == self.base
    }
}

/// One-shot equality check.
pub fn equal_in_group(presentation: &Presentation, w1: &Word, w2: &Word, budget: u64) -> Result<Verdict, GroupError> {
    presentation.check_word(w1)?;
    presentation.check_word(w2)?;
    if w1.free_reduce() == w2.free_reduce() {
        return Ok(Verdict::proven(Certificate::FreeReduction));
    }
    GroupSolver::new(presentation, budget).equal(w1, w2)
}

/// One-shot triviality check.
pub fn is_trivial_group(presentation: &Presentation, budget: u64) -> Verdict {
    GroupSolver::new(presentation, budget).is_trivial_group()
}
