//! Rank of sparse matrices over `F_p` by incremental row reduction.
//!
//! Rows are inserted one at a time into an [`Echelon`]. Each stored pivot row
//! starts at its pivot column, which is unique among stored rows; a new row is
//! reduced by its leading entry until it either vanishes or exposes a fresh
//! pivot column. The set of pivot columns is therefore the set of leading
//! columns of a row echelon form of the span, and its complement indexes a
//! basis of the quotient space.

use std::collections::BTreeMap;

use super::field::Prime;

/// Sparse matrix over `F_p` given by `(row, col, value)` triplets.
#[derive(Debug, Clone)]
pub struct RankMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<(usize, usize, u64)>,
    prime: Prime,
}

impl RankMatrix {
    pub fn new(rows: usize, cols: usize, prime: Prime) -> Self {
        RankMatrix {
            rows,
            cols,
            entries: Vec::new(),
            prime,
        }
    }

    /// Add `value` to entry `(row, col)`. Panics on out-of-range indices.
    pub fn push(&mut self, row: usize, col: usize, value: u64) {
        assert!(row < self.rows && col < self.cols, "entry out of range");
        self.entries.push((row, col, value % self.prime.get()));
    }

    pub fn from_dense(data: &[Vec<u64>], cols: usize, prime: Prime) -> Self {
        let mut m = RankMatrix::new(data.len(), cols, prime);
        for (i, row) in data.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if v % prime.get() != 0 {
                    m.push(i, j, v);
                }
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    /// Rows as sorted sparse vectors, duplicate entries summed.
    fn sparse_rows(&self) -> Vec<Vec<(usize, u64)>> {
        let mut acc: Vec<BTreeMap<usize, u64>> = vec![BTreeMap::new(); self.rows];
        for &(r, c, v) in &self.entries {
            let e = acc[r].entry(c).or_insert(0);
            *e = self.prime.add(*e, v);
        }
        acc.into_iter()
            .map(|row| row.into_iter().filter(|&(_, v)| v != 0).collect())
            .collect()
    }
}

/// Exact rank of `m` over `F_p`.
pub fn rank_mod_p(m: &RankMatrix) -> usize {
    let mut ech = Echelon::new(m.cols, m.prime);
    for row in m.sparse_rows() {
        ech.insert(row);
    }
    ech.rank()
}

/// Incrementally built row echelon form over `F_p`.
#[derive(Debug, Clone)]
pub struct Echelon {
    cols: usize,
    prime: Prime,
    /// pivot column -> normalized row starting at that column
    pivots: Vec<Option<Vec<(usize, u64)>>>,
    rank: usize,
}

impl Echelon {
    pub fn new(cols: usize, prime: Prime) -> Self {
        Echelon {
            cols,
            prime,
            pivots: vec![None; cols],
            rank: 0,
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivots[col].is_some()
    }

    /// Columns that are not pivots, ascending.
    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.cols).filter(|&c| !self.is_pivot(c)).collect()
    }

    /// Insert a sparse row (sorted by column, nonzero values reduced mod p).
    /// Returns `true` when the rank grew.
    pub fn insert(&mut self, mut row: Vec<(usize, u64)>) -> bool {
        let p = self.prime;
        loop {
            let Some(&(lead, coeff)) = row.first() else {
                return false;
            };
            match &self.pivots[lead] {
                Some(pivot) => {
                    row = axpy(&row, pivot, p.neg(coeff), p);
                }
                None => {
                    let inv = p.inv(coeff).expect("nonzero leading coefficient");
                    for e in row.iter_mut() {
                        e.1 = p.mul(e.1, inv);
                    }
                    self.pivots[lead] = Some(row);
                    self.rank += 1;
                    return true;
                }
            }
        }
    }

    /// Insert a single standard basis vector.
    pub fn insert_unit(&mut self, col: usize) -> bool {
        self.insert(vec![(col, 1)])
    }
}

/// `row + scale * pivot`, both sorted sparse; zeros dropped.
fn axpy(row: &[(usize, u64)], pivot: &[(usize, u64)], scale: u64, p: Prime) -> Vec<(usize, u64)> {
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < pivot.len() {
        let take_row = j >= pivot.len() || (i < row.len() && row[i].0 < pivot[j].0);
        let take_piv = i >= row.len() || (j < pivot.len() && pivot[j].0 < row[i].0);
        if take_row {
            out.push(row[i]);
            i += 1;
        } else if take_piv {
            out.push((pivot[j].0, p.mul(scale, pivot[j].1)));
            j += 1;
        } else {
            let v = p.add(row[i].1, p.mul(scale, pivot[j].1));
            if v != 0 {
                out.push((row[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}
