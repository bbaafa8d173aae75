//! Exact linear algebra over the rationals: dense reduced row echelon form for
//! small systems and a sparse incremental echelon basis keyed by an arbitrary
//! ordered column type.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::Rational;

/// Reduces `rows` in place to reduced row echelon form and returns the pivot
/// columns. Zero rows are dropped.
pub fn rref(rows: &mut Vec<Vec<Rational>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = Rational::one() / &rows[r][c];
        for v in rows[r].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let factor = row[c].clone();
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    if !pv.is_zero() {
                        *v -= &factor * pv;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

/// Basis of `{v : A v = 0}` for a matrix given by rows with `ncols` columns.
pub fn nullspace(rows: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![Rational::zero(); ncols];
            v[fc] = Rational::one();
            for (row, &pc) in m.iter().zip(&pivots) {
                v[pc] = -row[fc].clone();
            }
            v
        })
        .collect()
}

/// One solution of `A x = b`, if any.
pub fn solve(rows: &[Vec<Rational>], rhs: &[Rational]) -> Option<Vec<Rational>> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut aug: Vec<Vec<Rational>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut row = r.clone();
            row.push(b.clone());
            row
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = vec![Rational::zero(); ncols];
    for (row, &pc) in aug.iter().zip(&pivots) {
        x[pc] = row[ncols].clone();
    }
    Some(x)
}

/// Sparse vector over an ordered column type; the pivot of a vector is its
/// smallest key.
pub type SparseVec<K> = BTreeMap<K, Rational>;

/// `target += factor * source`, dropping cancelled entries.
pub fn axpy<K: Ord + Clone>(target: &mut SparseVec<K>, factor: &Rational, source: &SparseVec<K>) {
    for (k, v) in source {
        let delta = factor * v;
        match target.get_mut(k) {
            Some(cur) => {
                *cur += delta;
                if cur.is_zero() {
                    target.remove(k);
                }
            }
            None => {
                if !delta.is_zero() {
                    target.insert(k.clone(), delta);
                }
            }
        }
    }
}

/// Incremental echelon basis: every stored row has a distinct pivot (its
/// smallest key) with coefficient one. Rows are not kept mutually reduced;
/// leading-term reduction is enough to decide membership.
#[derive(Clone, Debug)]
pub struct SparseEchelon<K: Ord + Clone> {
    rows: BTreeMap<K, SparseVec<K>>,
}

impl<K: Ord + Clone> Default for SparseEchelon<K> {
    fn default() -> Self {
        SparseEchelon { rows: BTreeMap::new() }
    }
}

impl<K: Ord + Clone> SparseEchelon<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> impl Iterator<Item = &SparseVec<K>> {
        self.rows.values()
    }

    /// Leading-term reduction; returns the remainder (zero iff `v` lies in the span).
    pub fn reduce(&self, mut v: SparseVec<K>) -> SparseVec<K> {
        while let Some((k, c)) = v.iter().next() {
            let Some(row) = self.rows.get(k) else { break };
            let factor = -c.clone();
            axpy(&mut v, &factor, row);
        }
        v
    }

    pub fn contains(&self, v: &SparseVec<K>) -> bool {
        self.reduce(v.clone()).is_empty()
    }

    /// Adds `v` to the span; returns the new row if `v` was independent.
    pub fn insert(&mut self, v: SparseVec<K>) -> Option<&SparseVec<K>> {
        let mut r = self.reduce(v);
        let (k, lead) = r.iter().next()?;
        let (k, inv) = (k.clone(), Rational::one() / lead);
        for val in r.values_mut() {
            *val *= &inv;
        }
        self.rows.insert(k.clone(), r);
        self.rows.get(&k)
    }

    /// Fully reduced canonical rows (reduced row echelon form), in pivot order.
    pub fn reduced_rows(&self) -> Vec<SparseVec<K>> {
        let keys: Vec<K> = self.rows.keys().cloned().collect();
        let mut out: BTreeMap<K, SparseVec<K>> = BTreeMap::new();
        for k in keys.iter().rev() {
            let mut row = self.rows[k].clone();
            let later: Vec<K> = row.keys().filter(|c| *c != k && out.contains_key(*c)).cloned().collect();
            for c in later {
                if let Some(coef) = row.get(&c).cloned() {
                    axpy(&mut row, &-coef, &out[&c]);
                }
            }
            out.insert(k.clone(), row);
        }
        out.into_values().collect()
    }

    /// Basis of the span intersected with the coordinate subspace of columns
    /// satisfying `keep`, which must be an upward-closed tail of the column
    /// order (all rejected columns precede all kept ones).
    pub fn tail_subspace(&self, keep: impl Fn(&K) -> bool) -> Vec<SparseVec<K>> {
        self.rows.iter().filter(|(k, _)| keep(k)).map(|(_, r)| r.clone()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;

    #[test]
    fn nullspace_of_rank_one() {
        let rows = vec![vec![int(1), int(2), int(3)]];
        let ns = nullspace(&rows, 3);
        assert_eq!(ns.len(), 2);
        for v in ns {
            let dot: Rational = rows[0].iter().zip(&v).map(|(a, b)| a * b).sum();
            assert!(dot.is_zero());
        }
    }

    #[test]
    fn solve_inconsistent() {
        let rows = vec![vec![int(1), int(1)], vec![int(2), int(2)]];
        assert!(solve(&rows, &[int(1), int(3)]).is_none());
        let x = solve(&rows, &[int(1), int(2)]).unwrap();
        assert_eq!(&x[0] + &x[1], int(1));
    }

    #[test]
    fn echelon_membership_and_canonical_rows() {
        let mut e: SparseEchelon<u32> = SparseEchelon::new();
        let v1: SparseVec<u32> = [(0, int(1)), (1, int(2))].into_iter().collect();
        let v2: SparseVec<u32> = [(1, int(1)), (2, int(1))].into_iter().collect();
        assert!(e.insert(v1.clone()).is_some());
        assert!(e.insert(v2.clone()).is_some());
        let mut sum = v1.clone();
        axpy(&mut sum, &int(3), &v2);
        assert!(e.contains(&sum));
        assert!(e.insert(sum).is_none());
        let rows = e.reduced_rows();
        assert_eq!(rows[0].get(&1), None);
        assert_eq!(rows[0].get(&2), Some(&int(-2)));
    }
}
