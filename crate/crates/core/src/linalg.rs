//! Sparse exact linear algebra.
//!
//! Rows are kept fraction-free over the integers: eliminating with a pivot row
//! multiplies through by the pivot and divides the result by its content.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::Q;

pub type SparseVec = Vec<(usize, Q)>;
type IntRow = Vec<(usize, BigInt)>;

fn to_int_row(row: &[(usize, Q)]) -> IntRow {
    let mut lcm = BigInt::one();
    for (_, v) in row {
        lcm = lcm.lcm(v.denom());
    }
    let mut out: IntRow =
        row.iter().filter(|(_, v)| !v.is_zero()).map(|(c, v)| (*c, v.numer() * (&lcm / v.denom()))).collect();
    out.sort_by_key(|(c, _)| *c);
    // merge duplicate columns
    let mut merged: IntRow = Vec::with_capacity(out.len());
    for (c, v) in out {
        match merged.last_mut() {
            Some((lc, lv)) if *lc == c => *lv += v,
            _ => merged.push((c, v)),
        }
    }
    merged.retain(|(_, v)| !v.is_zero());
    normalize(&mut merged);
    merged
}

fn normalize(row: &mut IntRow) {
    if row.is_empty() {
        return;
    }
    let mut g = BigInt::zero();
    for (_, v) in row.iter() {
        g = g.gcd(v);
        if g.is_one() {
            break;
        }
    }
    if row[0].1.is_negative() {
        g = -g;
    }
    if !g.is_one() {
        for (_, v) in row.iter_mut() {
            *v = &*v / &g;
        }
    }
}

/// row := a*row - b*piv, where a is piv's entry at `col` and b is row's.
fn eliminate(row: &IntRow, piv: &IntRow, col: usize) -> IntRow {
    let a = &piv.iter().find(|(c, _)| *c == col).expect("pivot column").1;
    let b = &row.iter().find(|(c, _)| *c == col).expect("row column").1;
    let g = a.gcd(b);
    let (a, b) = (a / &g, b / &g);
    let mut out = Vec::with_capacity(row.len() + piv.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < piv.len() {
        let take_row = j >= piv.len() || (i < row.len() && row[i].0 < piv[j].0);
        let take_piv = i >= row.len() || (j < piv.len() && piv[j].0 < row[i].0);
        if take_row {
            out.push((row[i].0, &a * &row[i].1));
            i += 1;
        } else if take_piv {
            out.push((piv[j].0, -(&b * &piv[j].1)));
            j += 1;
        } else {
            let v = &a * &row[i].1 - &b * &piv[j].1;
            if !v.is_zero() {
                out.push((row[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out.retain(|(_, v)| !v.is_zero());
    normalize(&mut out);
    out
}

/// Incremental row echelon form keyed by leading column.
#[derive(Debug, Clone, Default)]
pub struct Echelon {
    pivots: BTreeMap<usize, IntRow>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivot_columns(&self) -> Vec<usize> {
        self.pivots.keys().copied().collect()
    }

    fn reduce_int(&self, mut row: IntRow) -> IntRow {
        let mut k = 0;
        while k < row.len() {
            let c = row[k].0;
            if let Some(p) = self.pivots.get(&c) {
                row = eliminate(&row, p, c);
                // entries before position k are untouched pivot-free columns
                k = row.partition_point(|(cc, _)| *cc < c);
            } else {
                k += 1;
            }
        }
        row
    }

    /// Adds a row; returns true if the rank grew.
    pub fn add_row(&mut self, row: &[(usize, Q)]) -> bool {
        let r = self.reduce_int(to_int_row(row));
        self.insert_reduced(r)
    }

    fn insert_reduced(&mut self, r: IntRow) -> bool {
        // leading column is not a pivot, since reduce_int cleared all pivot columns
        match r.first() {
            None => false,
            Some((c, _)) => {
                let c = *c;
                self.pivots.insert(c, r);
                true
            }
        }
    }

    /// True if `row` lies in the row space.
    pub fn contains(&self, row: &[(usize, Q)]) -> bool {
        self.reduce_int(to_int_row(row)).is_empty()
    }

    /// Reduced row echelon form, pivots normalized to 1, ordered by pivot column.
    pub fn rref(&self) -> Vec<(usize, SparseVec)> {
        let mut done: BTreeMap<usize, IntRow> = BTreeMap::new();
        for (&c, row) in self.pivots.iter().rev() {
            let mut row = row.clone();
            let mut k = 1;
            while k < row.len() {
                let cc = row[k].0;
                if let Some(p) = done.get(&cc) {
                    row = eliminate(&row, p, cc);
                    k = row.partition_point(|(x, _)| *x <= cc);
                } else {
                    k += 1;
                }
            }
            done.insert(c, row);
        }
        done.into_iter()
            .map(|(c, row)| {
                let lead = Q::from_integer(row[0].1.clone());
                let v = row.into_iter().map(|(cc, x)| (cc, Q::from_integer(x) / &lead)).collect();
                (c, v)
            })
            .collect()
    }

    /// Basis of {x : row·x = 0 for every row}, one vector per free column in
    /// increasing order, each with a 1 at its free column.
    pub fn nullspace(&self, ncols: usize) -> Vec<SparseVec> {
        let rref = self.rref();
        let pivot_set: std::collections::BTreeSet<usize> = rref.iter().map(|(c, _)| *c).collect();
        let mut by_free: BTreeMap<usize, SparseVec> = BTreeMap::new();
        for f in 0..ncols {
            if !pivot_set.contains(&f) {
                by_free.insert(f, vec![(f, Q::one())]);
            }
        }
        for (pc, row) in &rref {
            for (cc, v) in row.iter().skip(1) {
                if let Some(vec) = by_free.get_mut(cc) {
                    vec.push((*pc, -v.clone()));
                }
            }
        }
        by_free
            .into_values()
            .map(|mut v| {
                v.sort_by_key(|(c, _)| *c);
                v
            })
            .collect()
    }
}

pub fn rank(rows: &[SparseVec]) -> usize {
    let mut e = Echelon::new();
    for r in rows {
        e.add_row(r);
    }
    e.rank()
}

/// Nullspace of the matrix whose rows are given.
pub fn nullspace(rows: &[SparseVec], ncols: usize) -> Vec<SparseVec> {
    let mut e = Echelon::new();
    for r in rows {
        e.add_row(r);
    }
    e.nullspace(ncols)
}

/// Finds x with Σ_j x_j·columns[j] = rhs (free variables set to zero), or None
/// if the system is inconsistent.
pub fn solve(columns: &[SparseVec], rhs: &SparseVec) -> Option<Vec<Q>> {
    let n = columns.len();
    let mut by_coord: BTreeMap<usize, SparseVec> = BTreeMap::new();
    for (j, col) in columns.iter().enumerate() {
        for (k, v) in col {
            by_coord.entry(*k).or_default().push((j, v.clone()));
        }
    }
    for (k, v) in rhs {
        by_coord.entry(*k).or_default().push((n, v.clone()));
    }
    let mut e = Echelon::new();
    for row in by_coord.values() {
        e.add_row(row);
    }
    let rref = e.rref();
    let mut x = vec![Q::zero(); n];
    for (pc, row) in rref {
        if pc == n {
            return None;
        }
        if let Some((_, v)) = row.iter().find(|(c, _)| *c == n) {
            x[pc] = v.clone();
        }
    }
    Some(x)
}

/// Rank of A and of A augmented with b, for columns A and right-hand side b.
pub fn augmented_ranks(columns: &[SparseVec], rhs: &SparseVec) -> (usize, usize) {
    let n = columns.len();
    let mut by_coord: BTreeMap<usize, SparseVec> = BTreeMap::new();
    for (j, col) in columns.iter().enumerate() {
        for (k, v) in col {
            by_coord.entry(*k).or_default().push((j, v.clone()));
        }
    }
    let mut a = Echelon::new();
    for row in by_coord.values() {
        a.add_row(row);
    }
    for (k, v) in rhs {
        by_coord.entry(*k).or_default().push((n, v.clone()));
    }
    let mut ab = Echelon::new();
    for row in by_coord.values() {
        ab.add_row(row);
    }
    (a.rank(), ab.rank())
}
