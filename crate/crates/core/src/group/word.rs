use std::cmp::Ordering;
use std::fmt;

/// A generator or its inverse. Stored as `±(gen + 1)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Letter(i32);

impl Letter {
    pub fn new(gen: u32, inverse: bool) -> Self {
        let v = gen as i32 + 1;
        Letter(if inverse { -v } else { v })
    }

    pub fn gen(self) -> u32 {
        (self.0.unsigned_abs() - 1) as u32
    }

    pub fn is_inverse(self) -> bool {
        self.0 < 0
    }

    pub fn inverse(self) -> Self {
        Letter(-self.0)
    }

    /// `+1` or `-1`.
    pub fn sign(self) -> i64 {
        self.0.signum() as i64
    }

    /// The raw signed encoding, `±(gen + 1)`.
    pub fn signed(self) -> i32 {
        self.0
    }

    fn order_key(self) -> (u32, bool) {
        (self.gen(), self.is_inverse())
    }
}

impl Ord for Letter {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order_key().cmp(&other.order_key())
    }
}

impl PartialOrd for Letter {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A word over generator letters. Ordering is shortlex.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_letters(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    /// Builds a word from signed indices `±(gen + 1)`; zeros are rejected.
    pub fn from_signed(values: &[i32]) -> Self {
        assert!(values.iter().all(|&v| v != 0), "zero is not a letter");
        Word(values.iter().map(|&v| Letter(v)).collect())
    }

    pub fn generator(gen: u32) -> Self {
        Word(vec![Letter::new(gen, false)])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn signed(&self) -> Vec<i32> {
        self.0.iter().map(|l| l.signed()).collect()
    }

    pub fn inverse(&self) -> Self {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    /// Concatenation followed by free reduction.
    pub fn mul(&self, other: &Word) -> Word {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        for &l in self.0.iter().chain(&other.0) {
            push_reduced(&mut out, l);
        }
        Word(out)
    }

    pub fn push(&mut self, letter: Letter) {
        push_reduced(&mut self.0, letter);
    }

    pub fn free_reduce(&self) -> Word {
        free_reduce(self)
    }

    pub fn is_freely_reduced(&self) -> bool {
        self.0.windows(2).all(|w| w[0] != w[1].inverse())
    }

    /// Exponent sum of each generator, indexed by generator id.
    pub fn exponent_sums(&self, generator_count: usize) -> Vec<i64> {
        let mut out = vec![0i64; generator_count];
        for l in &self.0 {
            out[l.gen() as usize] += l.sign();
        }
        out
    }

    pub fn max_generator(&self) -> Option<u32> {
        self.0.iter().map(|l| l.gen()).max()
    }

    pub fn shortlex_cmp(&self, other: &Word) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }

    /// Replaces each letter by the corresponding image word (inverted for
    /// inverse letters) and freely reduces.
    pub fn substitute(&self, image: impl Fn(u32) -> Word) -> Word {
        let mut out = Vec::with_capacity(self.0.len());
        for &l in &self.0 {
            let w = image(l.gen());
            if l.is_inverse() {
                for &m in w.0.iter().rev() {
                    push_reduced(&mut out, m.inverse());
                }
            } else {
                for &m in &w.0 {
                    push_reduced(&mut out, m);
                }
            }
        }
        Word(out)
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.shortlex_cmp(other)
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "g{}", l.gen())?;
            if l.is_inverse() {
                write!(f, "^-1")?;
            }
        }
        Ok(())
    }
}

impl serde::Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

fn push_reduced(out: &mut Vec<Letter>, l: Letter) {
    if out.last() == Some(&l.inverse()) {
        out.pop();
    } else {
        out.push(l);
    }
}

/// Removes adjacent inverse pairs until none remain.
pub fn free_reduce(word: &Word) -> Word {
    let mut out = Vec::with_capacity(word.0.len());
    for &l in &word.0 {
        push_reduced(&mut out, l);
    }
    Word(out)
}

/// Freely reduces, then strips inverse pairs across the two ends.
pub fn cyclic_reduce(word: &Word) -> Word {
    let w = free_reduce(word).0;
    let mut lo = 0;
    let mut hi = w.len();
    while hi - lo >= 2 && w[lo] == w[hi - 1].inverse() {
        lo += 1;
        hi -= 1;
    }
    Word(w[lo..hi].to_vec())
}

/// Canonical representative of a cyclically reduced word up to rotation and
/// inversion: the shortlex-least rotation of the word or its inverse.
pub fn cyclic_canonical(word: &Word) -> Word {
    let w = cyclic_reduce(word);
    if w.len() > 256 {
        return w;
    }
    let inv = w.inverse();
    let mut best = w.clone();
    for base in [&w, &inv] {
        let n = base.len();
        for r in 0..n {
            let rot: Vec<Letter> = base.0[r..].iter().chain(&base.0[..r]).copied().collect();
            if rot < best.0 {
                best = Word(rot);
            }
        }
    }
    best
}
