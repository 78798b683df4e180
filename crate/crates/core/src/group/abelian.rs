//! Abelianization through Smith normal form over arbitrary-precision integers.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::presentation::Presentation;
use super::word::Word;

/// Free rank plus torsion coefficients `d_1 | d_2 | ...`, all `≥ 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AbelianInvariants {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl AbelianInvariants {
    pub fn trivial() -> Self {
        Self {
            free_rank: 0,
            torsion: Vec::new(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    fn from_diagonal(columns: usize, diagonal: &[BigInt]) -> Self {
        let one = BigInt::one();
        Self {
            free_rank: columns - diagonal.len(),
            torsion: diagonal.iter().filter(|d| **d != one).cloned().collect(),
        }
    }
}

impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        write!(f, "{}", parts.join(" x "))
    }
}

/// Invariants of the abelianization of `presentation`.
///
/// Unit pivots are eliminated on a sparse matrix first; the remainder goes
/// through dense Smith normal form.
pub fn abelianize(presentation: &Presentation) -> AbelianInvariants {
    let gens = presentation.generators();
    let col_of: HashMap<u32, usize> = gens.iter().enumerate().map(|(i, &g)| (g, i)).collect();
    let mut rows: Vec<BTreeMap<usize, BigInt>> = presentation
        .relators()
        .iter()
        .map(|r| sparse_row(r, &col_of))
        .filter(|r| !r.is_empty())
        .collect();
    let mut live_cols: BTreeSet<usize> = (0..gens.len()).collect();
    eliminate_unit_pivots(&mut rows, &mut live_cols);

    let col_index: HashMap<usize, usize> = live_cols.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let dense: Vec<Vec<BigInt>> = rows
        .iter()
        .filter(|r| !r.is_empty())
        .map(|r| {
            let mut row = vec![BigInt::zero(); live_cols.len()];
            for (c, v) in r {
                row[col_index[c]] = v.clone();
            }
            row
        })
        .collect();
    let diagonal = smith_diagonal(dense, live_cols.len(), None);
    AbelianInvariants::from_diagonal(live_cols.len(), &diagonal)
}

fn sparse_row(word: &Word, col_of: &HashMap<u32, usize>) -> BTreeMap<usize, BigInt> {
    let mut row: BTreeMap<usize, BigInt> = BTreeMap::new();
    for l in word.letters() {
        *row.entry(col_of[&l.gen()]).or_insert_with(BigInt::zero) += l.sign();
    }
    row.retain(|_, v| !v.is_zero());
    row
}

/// Repeatedly pivots on `±1` entries, each time choosing the unit whose column
/// is sparsest. Pivot rows and columns are removed; they contribute a `1` to
/// the diagonal and nothing to the invariants.
fn eliminate_unit_pivots(rows: &mut [BTreeMap<usize, BigInt>], live_cols: &mut BTreeSet<usize>) {
    let mut col_rows: HashMap<usize, BTreeSet<usize>> = HashMap::new();
    for (i, r) in rows.iter().enumerate() {
        for &c in r.keys() {
            col_rows.entry(c).or_default().insert(i);
        }
    }
    loop {
        let mut best: Option<(usize, usize, usize)> = None; // (column weight, row, column)
        for (i, r) in rows.iter().enumerate() {
            for (&c, v) in r {
                if v.abs().is_one() {
                    let weight = col_rows[&c].len();
                    if best.map_or(true, |b| weight < b.0) {
                        best = Some((weight, i, c));
                    }
                }
            }
        }
        let Some((_, pr, pc)) = best else { break };
        let pivot_row = std::mem::take(&mut rows[pr]);
        let unit = pivot_row[&pc].clone();
        for &c in pivot_row.keys() {
            col_rows.get_mut(&c).unwrap().remove(&pr);
        }
        let others: Vec<usize> = col_rows[&pc].iter().copied().collect();
        for i in others {
            // row_i -= (a_i,pc / unit) * pivot_row, and unit is its own inverse
            let factor = &rows[i][&pc] * &unit;
            for (&c, v) in &pivot_row {
                let entry = rows[i].entry(c).or_insert_with(BigInt::zero);
                *entry -= &factor * v;
                if entry.is_zero() {
                    rows[i].remove(&c);
                    col_rows.get_mut(&c).unwrap().remove(&i);
                } else {
                    col_rows.entry(c).or_default().insert(i);
                }
            }
        }
        live_cols.remove(&pc);
    }
}

/// Smith normal form diagonal of an `m × ncols` matrix: the nonzero invariant
/// factors, positive, each dividing the next.
///
/// When `transform` is given it must start as the `ncols × ncols` identity and
/// ends as a unimodular `V` with `U·A·V = D` for some unimodular `U`.
pub(crate) fn smith_diagonal(
    mut a: Vec<Vec<BigInt>>,
    ncols: usize,
    mut transform: Option<&mut Vec<Vec<BigInt>>>,
) -> Vec<BigInt> {
    let m = a.len();
    let mut diagonal = Vec::new();
    let mut t = 0;
    while t < m && t < ncols {
        let Some((pi, pj)) = min_abs_entry(&a, t, ncols) else { break };
        a.swap(t, pi);
        swap_columns(&mut a, t, pj, t);
        if let Some(v) = transform.as_deref_mut() {
            swap_columns(v, t, pj, 0);
        }
        loop {
            let mut clean = true;
            for i in t + 1..m {
                if !a[i][t].is_zero() {
                    let q = a[i][t].div_floor(&a[t][t]);
                    row_axpy(&mut a, i, t, &q, t, ncols);
                    clean &= a[i][t].is_zero();
                }
            }
            for j in t + 1..ncols {
                if !a[t][j].is_zero() {
                    let q = a[t][j].div_floor(&a[t][t]);
                    col_axpy(&mut a, j, t, &q, t);
                    if let Some(v) = transform.as_deref_mut() {
                        col_axpy(v, j, t, &q, 0);
                    }
                    clean &= a[t][j].is_zero();
                }
            }
            if clean {
                let pivot = a[t][t].clone();
                let bad = (t + 1..m).find(|&i| (t + 1..ncols).any(|j| !a[i][j].is_multiple_of(&pivot)));
                match bad {
                    Some(i) => {
                        let one = BigInt::one();
                        let neg = -one;
                        row_axpy(&mut a, t, i, &neg, t, ncols);
                    }
                    None => break,
                }
            }
            // bring the smallest nonzero entry of row/column t to the pivot
            let mut best: Option<(BigInt, bool, usize)> = None;
            for i in t..m {
                if !a[i][t].is_zero() && best.as_ref().map_or(true, |b| a[i][t].abs() < b.0) {
                    best = Some((a[i][t].abs(), true, i));
                }
            }
            for j in t + 1..ncols {
                if !a[t][j].is_zero() && best.as_ref().map_or(true, |b| a[t][j].abs() < b.0) {
                    best = Some((a[t][j].abs(), false, j));
                }
            }
            match best {
                Some((_, true, i)) => a.swap(t, i),
                Some((_, false, j)) => {
                    swap_columns(&mut a, t, j, t);
                    if let Some(v) = transform.as_deref_mut() {
                        swap_columns(v, t, j, 0);
                    }
                }
                None => unreachable!("pivot row and column cannot vanish"),
            }
        }
        if a[t][t].is_negative() {
            for x in a[t].iter_mut() {
                *x = -x.clone();
            }
        }
        diagonal.push(a[t][t].clone());
        t += 1;
    }
    diagonal
}

fn min_abs_entry(a: &[Vec<BigInt>], t: usize, ncols: usize) -> Option<(usize, usize)> {
    let mut best: Option<(BigInt, usize, usize)> = None;
    for (i, row) in a.iter().enumerate().skip(t) {
        for (j, x) in row.iter().enumerate().take(ncols).skip(t) {
            if !x.is_zero() && best.as_ref().map_or(true, |b| x.abs() < b.0) {
                best = Some((x.abs(), i, j));
            }
        }
    }
    best.map(|(_, i, j)| (i, j))
}

fn swap_columns(a: &mut [Vec<BigInt>], x: usize, y: usize, from_row: usize) {
    if x != y {
        for row in a.iter_mut().skip(from_row) {
            row.swap(x, y);
        }
    }
}

/// `row_dst -= q · row_src` on columns `from..ncols`.
fn row_axpy(a: &mut [Vec<BigInt>], dst: usize, src: usize, q: &BigInt, from: usize, ncols: usize) {
    for j in from..ncols {
        if !a[src][j].is_zero() {
            let delta = q * &a[src][j];
            a[dst][j] -= delta;
        }
    }
}

/// `col_dst -= q · col_src` on rows `from..`.
fn col_axpy(a: &mut [Vec<BigInt>], dst: usize, src: usize, q: &BigInt, from: usize) {
    for row in a.iter_mut().skip(from) {
        if !row[src].is_zero() {
            let delta = q * &row[src];
            row[dst] -= delta;
        }
    }
}

fn identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

/// The abelianization map of one presentation, able to compare classes of
/// individual words and test lattice membership.
#[derive(Clone, Debug)]
pub struct AbelianMap {
    col_of: HashMap<u32, usize>,
    rows: Vec<Vec<BigInt>>,
    diagonal: Vec<BigInt>,
    transform: Vec<Vec<BigInt>>,
    invariants: AbelianInvariants,
}

impl AbelianMap {
    /// Dense construction; intended for simplified presentations.
    pub fn new(presentation: &Presentation) -> Self {
        let gens = presentation.generators();
        let col_of: HashMap<u32, usize> = gens.iter().enumerate().map(|(i, &g)| (g, i)).collect();
        let rows: Vec<Vec<BigInt>> = presentation
            .relators()
            .iter()
            .map(|r| dense_row(r, &col_of, gens.len()))
            .collect();
        let mut transform = identity(gens.len());
        let diagonal = smith_diagonal(rows.clone(), gens.len(), Some(&mut transform));
        let invariants = AbelianInvariants::from_diagonal(gens.len(), &diagonal);
        Self {
            col_of,
            rows,
            diagonal,
            transform,
            invariants,
        }
    }

    pub fn invariants(&self) -> &AbelianInvariants {
        &self.invariants
    }

    /// Canonical coordinates of the word's class: torsion parts are reduced
    /// into `0..d`, free parts are left as they are.
    pub fn class(&self, word: &Word) -> Vec<BigInt> {
        let n = self.col_of.len();
        let x = dense_row(word, &self.col_of, n);
        let mut y = apply(&x, &self.transform);
        for (yi, d) in y.iter_mut().zip(&self.diagonal) {
            *yi = yi.mod_floor(d);
        }
        y
    }

    pub fn is_trivial(&self, word: &Word) -> bool {
        self.class(word).iter().all(Zero::is_zero)
    }

    /// Whether the class of `target` lies in the subgroup generated by the
    /// classes of `generators`.
    pub fn in_span(&self, generators: &[Word], target: &Word) -> bool {
        let n = self.col_of.len();
        let mut rows = self.rows.clone();
        rows.extend(generators.iter().map(|g| dense_row(g, &self.col_of, n)));
        let mut v = identity(n);
        let diagonal = smith_diagonal(rows, n, Some(&mut v));
        let y = apply(&dense_row(target, &self.col_of, n), &v);
        y.iter().enumerate().all(|(i, yi)| match diagonal.get(i) {
            Some(d) => yi.is_multiple_of(d),
            None => yi.is_zero(),
        })
    }
}

fn dense_row(word: &Word, col_of: &HashMap<u32, usize>, n: usize) -> Vec<BigInt> {
    let mut row = vec![BigInt::zero(); n];
    for l in word.letters() {
        row[col_of[&l.gen()]] += l.sign();
    }
    row
}

fn apply(x: &[BigInt], v: &[Vec<BigInt>]) -> Vec<BigInt> {
    let n = v.len();
    let mut y = vec![BigInt::zero(); n];
    for (i, xi) in x.iter().enumerate() {
        if xi.is_zero() {
            continue;
        }
        for (j, yj) in y.iter_mut().enumerate() {
            if !v[i][j].is_zero() {
                *yj += xi * &v[i][j];
            }
        }
    }
    y
}
