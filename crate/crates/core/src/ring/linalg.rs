//! Sparse exact row echelon forms.
//!
//! Rows are sparse vectors with strictly ascending column indices. A row is
//! reduced against the echelon by its largest column, so the columns left
//! without a pivot are the smallest ones that span a complement of the row
//! space: callers choose the column numbering so that this gives the
//! representatives they want.

use crate::scalar::Field;

pub type SparseRow<F> = Vec<(usize, F)>;

/// Incrementally built row echelon form over an exact field.
#[derive(Clone, Debug)]
pub struct Echelon<F> {
    ncols: usize,
    pivots: Vec<Option<SparseRow<F>>>,
    rank: usize,
}

impl<F: Field> Echelon<F> {
    pub fn new(ncols: usize) -> Self {
        Echelon {
            ncols,
            pivots: vec![None; ncols],
            rank: 0,
        }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn has_pivot(&self, col: usize) -> bool {
        self.pivots[col].is_some()
    }

    /// Columns with no pivot, ascending.
    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.ncols).filter(|&c| self.pivots[c].is_none()).collect()
    }

    /// Reduces until the leading column has no pivot (or the row vanishes).
    pub fn reduce_leading(&self, mut row: SparseRow<F>) -> SparseRow<F> {
        while let Some((lead, coeff)) = row.last() {
            match &self.pivots[*lead] {
                Some(piv) => {
                    let c = coeff.clone();
                    row = axpy(&row, &c, piv);
                }
                None => break,
            }
        }
        row
    }

    /// Fully reduced normal form: no remaining entry sits in a pivot column.
    pub fn normal_form(&self, mut row: SparseRow<F>) -> SparseRow<F> {
        let mut done: SparseRow<F> = Vec::new();
        loop {
            row = self.reduce_leading(row);
            match row.pop() {
                Some(entry) => done.push(entry),
                None => break,
            }
        }
        done.reverse();
        done
    }

    /// Adds a row; returns whether it was independent of the current span.
    pub fn insert(&mut self, row: SparseRow<F>) -> bool {
        debug_assert!(row.windows(2).all(|w| w[0].0 < w[1].0));
        let row = self.reduce_leading(row);
        let Some((lead, coeff)) = row.last() else {
            return false;
        };
        let lead = *lead;
        let inv = coeff.inv();
        let normalized: SparseRow<F> = row
            .into_iter()
            .map(|(c, v)| (c, v * inv.clone()))
            .collect();
        self.pivots[lead] = Some(normalized);
        self.rank += 1;
        true
    }

    pub fn contains(&self, row: SparseRow<F>) -> bool {
        self.reduce_leading(row).is_empty()
    }
}

/// `a - c * b` for sparse rows.
fn axpy<F: Field>(a: &SparseRow<F>, c: &F, b: &SparseRow<F>) -> SparseRow<F> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i].clone());
            i += 1;
        } else if take_b {
            out.push((b[j].0, -(c.clone() * b[j].1.clone())));
            j += 1;
        } else {
            let v = a[i].1.clone() - c.clone() * b[j].1.clone();
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Rank of a list of sparse rows.
pub fn rank<F: Field>(ncols: usize, rows: impl IntoIterator<Item = SparseRow<F>>) -> usize {
    let mut e = Echelon::new(ncols);
    for r in rows {
        e.insert(r);
    }
    e.rank()
}

/// Dense rank by plain Gaussian elimination; used as an independent check.
pub fn dense_rank<F: Field>(mut m: Vec<Vec<F>>) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inv();
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone() * inv.clone();
                for k in c..cols {
                    let v = m[r][k].clone() * f.clone();
                    m[i][k] = m[i][k].clone() - v;
                }
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}
