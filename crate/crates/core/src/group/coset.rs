//! Todd–Coxeter coset enumeration (HLT strategy with coincidence processing).
//!
//! Generators are addressed by column: generator slot `k` uses column `2k`
//! and its inverse column `2k + 1`.

const NONE: u32 = u32::MAX;

/// A complete, compacted coset table. Coset `0` is the subgroup itself.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetTable {
    columns: usize,
    table: Vec<u32>,
}

impl CosetTable {
    /// Number of cosets.
    pub fn index(&self) -> usize {
        if self.columns == 0 {
            1
        } else {
            self.table.len() / self.columns
        }
    }

    pub fn columns(&self) -> usize {
        self.columns
    }

    pub fn act(&self, coset: usize, column: usize) -> usize {
        self.table[coset * self.columns + column] as usize
    }

    /// Coset reached from `start` by reading the word of columns.
    pub fn trace(&self, start: usize, word: &[usize]) -> usize {
        word.iter().fold(start, |c, &x| self.act(c, x))
    }
}

/// Outcome of [`enumerate`].
#[derive(Clone, Debug)]
pub enum Enumeration {
    Complete { table: CosetTable, steps: u64 },
    Exhausted { steps: u64 },
}

/// Enumerates the cosets of `⟨subgroup⟩` in `⟨slots | relators⟩`. Words are
/// column sequences. Gives up once `budget` steps are spent or more than
/// `max_cosets` cosets are needed at once.
pub fn enumerate(
    slots: usize,
    relators: &[Vec<usize>],
    subgroup: &[Vec<usize>],
    max_cosets: usize,
    budget: u64,
) -> Enumeration {
    let mut e = Enumerator {
        cols: 2 * slots,
        table: Vec::new(),
        p: Vec::new(),
        queue: Vec::new(),
        max_cosets: max_cosets.max(1),
        steps: 0,
        budget,
    };
    if e.run(relators, subgroup).is_err() {
        return Enumeration::Exhausted { steps: e.steps };
    }
    Enumeration::Complete {
        table: e.compact(),
        steps: e.steps,
    }
}

struct Exhausted;

struct Enumerator {
    cols: usize,
    table: Vec<u32>,
    p: Vec<u32>,
    queue: Vec<u32>,
    max_cosets: usize,
    steps: u64,
    budget: u64,
}

impl Enumerator {
    fn get(&self, c: u32, x: usize) -> u32 {
        self.table[c as usize * self.cols + x]
    }

    fn set(&mut self, c: u32, x: usize, d: u32) {
        self.table[c as usize * self.cols + x] = d;
    }

    fn tick(&mut self) -> Result<(), Exhausted> {
        self.steps += 1;
        if self.steps > self.budget {
            Err(Exhausted)
        } else {
            Ok(())
        }
    }

    fn new_coset(&mut self) -> Result<u32, Exhausted> {
        if self.p.len() >= self.max_cosets {
            return Err(Exhausted);
        }
        let c = self.p.len() as u32;
        self.p.push(c);
        self.table.extend(std::iter::repeat(NONE).take(self.cols));
        Ok(c)
    }

    fn define(&mut self, c: u32, x: usize) -> Result<(), Exhausted> {
        self.tick()?;
        let d = self.new_coset()?;
        self.set(c, x, d);
        self.set(d, x ^ 1, c);
        Ok(())
    }

    fn rep(&mut self, k: u32) -> u32 {
        let mut root = k;
        while self.p[root as usize] != root {
            root = self.p[root as usize];
        }
        let mut k = k;
        while self.p[k as usize] != root {
            let next = self.p[k as usize];
            self.p[k as usize] = root;
            k = next;
        }
        root
    }

    fn merge(&mut self, k: u32, l: u32) {
        let a = self.rep(k);
        let b = self.rep(l);
        if a != b {
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            self.p[hi as usize] = lo;
            self.queue.push(hi);
        }
    }

    fn coincidence(&mut self, a: u32, b: u32) -> Result<(), Exhausted> {
        self.tick()?;
        self.queue.clear();
        self.merge(a, b);
        let mut i = 0;
        while i < self.queue.len() {
            let g = self.queue[i];
            i += 1;
            for x in 0..self.cols {
                let d = self.get(g, x);
                if d == NONE {
                    continue;
                }
                self.set(d, x ^ 1, NONE);
                let mu = self.rep(g);
                let nu = self.rep(d);
                let mx = self.get(mu, x);
                if mx != NONE {
                    self.merge(nu, mx);
                } else {
                    let nx = self.get(nu, x ^ 1);
                    if nx != NONE {
                        self.merge(mu, nx);
                    } else {
                        self.set(mu, x, nu);
                        self.set(nu, x ^ 1, mu);
                    }
                }
            }
        }
        Ok(())
    }

    fn scan_and_fill(&mut self, a: u32, w: &[usize]) -> Result<(), Exhausted> {
        if w.is_empty() {
            return Ok(());
        }
        let mut f = a;
        let mut b = a;
        let mut i = 0usize;
        let mut j = w.len() as isize - 1;
        loop {
            while (i as isize) <= j && self.get(f, w[i]) != NONE {
                f = self.get(f, w[i]);
                i += 1;
            }
            if (i as isize) > j {
                if f != b {
                    self.coincidence(f, b)?;
                }
                return Ok(());
            }
            while j >= i as isize && self.get(b, w[j as usize] ^ 1) != NONE {
                b = self.get(b, w[j as usize] ^ 1);
                j -= 1;
            }
            if j < i as isize {
                self.coincidence(f, b)?;
                return Ok(());
            }
            if j == i as isize {
                self.tick()?;
                self.set(f, w[i], b);
                self.set(b, w[i] ^ 1, f);
                return Ok(());
            }
            self.define(f, w[i])?;
        }
    }

    fn run(&mut self, relators: &[Vec<usize>], subgroup: &[Vec<usize>]) -> Result<(), Exhausted> {
        self.new_coset()?;
        for h in subgroup {
            self.scan_and_fill(0, h)?;
        }
        let mut a = 0usize;
        while a < self.p.len() {
            for r in relators {
                if self.p[a] != a as u32 {
                    break;
                }
                self.scan_and_fill(a as u32, r)?;
            }
            if self.p[a] == a as u32 {
                for x in 0..self.cols {
                    if self.get(a as u32, x) == NONE {
                        self.define(a as u32, x)?;
                    }
                }
            }
            a += 1;
        }
        Ok(())
    }

    fn compact(&mut self) -> CosetTable {
        let n = self.p.len();
        let mut new_id = vec![NONE; n];
        let mut live = Vec::new();
        for c in 0..n {
            if self.p[c] == c as u32 {
                new_id[c] = live.len() as u32;
                live.push(c as u32);
            }
        }
        let mut table = Vec::with_capacity(live.len() * self.cols);
        for &c in &live {
            for x in 0..self.cols {
                let d = self.get(c, x);
                let r = self.rep(d);
                table.push(new_id[r as usize]);
            }
        }
        CosetTable {
            columns: self.cols,
            table,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(e: Enumeration) -> CosetTable {
        match e {
            Enumeration::Complete { table, .. } => table,
            Enumeration::Exhausted { .. } => panic!("enumeration exhausted"),
        }
    }

    #[test]
    fn cyclic_group_of_order_three() {
        let t = complete(enumerate(1, &[vec![0, 0, 0]], &[], 100, 10_000));
        assert_eq!(t.index(), 3);
        assert_eq!(t.trace(0, &[0, 0]), t.trace(0, &[1]));
    }

    #[test]
    fn symmetric_group_of_order_six() {
        // ⟨a, b | a², b³, (ab)²⟩
        let rels = vec![vec![0, 0], vec![2, 2, 2], vec![0, 2, 0, 2]];
        assert_eq!(complete(enumerate(2, &rels, &[], 100, 10_000)).index(), 6);
        assert_eq!(complete(enumerate(2, &rels, &[vec![2]], 100, 10_000)).index(), 2);
    }

    #[test]
    fn collapse_to_trivial() {
        // ⟨a, b | a b a^-1 b^-2, b a b^-1 a^-2⟩ is trivial
        let rels = vec![vec![0, 2, 1, 3, 3], vec![2, 0, 3, 1, 1]];
        assert_eq!(complete(enumerate(2, &rels, &[], 1000, 100_000)).index(), 1);
    }

    #[test]
    fn infinite_group_exhausts() {
        assert!(matches!(enumerate(1, &[], &[], 50, 10_000), Enumeration::Exhausted { .. }));
    }

    #[test]
    fn no_generators() {
        assert_eq!(complete(enumerate(0, &[], &[], 10, 10)).index(), 1);
    }
}
