//! Sparse exact row reduction over Q with arbitrary ordered column keys.
//!
//! Rows are kept in reduced row echelon form at all times: every pivot is 1
//! and no pivot column appears in any other row. The reduced basis of a span
//! is therefore unique, whatever order the rows were inserted in.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::rational::Q;

pub type SparseRow<K> = BTreeMap<K, Q>;

#[derive(Debug, Clone)]
pub struct Echelon<K: Ord + Clone> {
    rows: BTreeMap<K, SparseRow<K>>,
}

impl<K: Ord + Clone> Default for Echelon<K> {
    fn default() -> Self {
        Self {
            rows: BTreeMap::new(),
        }
    }
}

impl<K: Ord + Clone> Echelon<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Residual of `row` after eliminating every pivot column.
    pub fn reduce(&self, mut row: SparseRow<K>) -> SparseRow<K> {
        let hits: Vec<K> = row
            .keys()
            .filter(|k| self.rows.contains_key(*k))
            .cloned()
            .collect();
        for k in hits {
            let Some(c) = row.get(&k).cloned() else {
                continue;
            };
            axpy(&mut row, &-c, &self.rows[&k]);
        }
        row
    }

    pub fn contains(&self, row: &SparseRow<K>) -> bool {
        self.reduce(row.clone()).is_empty()
    }

    /// Adds `row` to the span; returns whether the rank grew.
    pub fn insert(&mut self, row: SparseRow<K>) -> bool {
        let mut r = self.reduce(row);
        let Some((pivot, lead)) = r.iter().next().map(|(k, c)| (k.clone(), c.clone())) else {
            return false;
        };
        let inv = lead.recip();
        for c in r.values_mut() {
            *c *= &inv;
        }
        for other in self.rows.values_mut() {
            if let Some(c) = other.get(&pivot).cloned() {
                axpy(other, &-c, &r);
            }
        }
        r.insert(pivot.clone(), Q::one());
        self.rows.insert(pivot, r);
        true
    }

    pub fn pivots(&self) -> impl Iterator<Item = &K> {
        self.rows.keys()
    }

    /// Reduced rows ordered by pivot.
    pub fn rows(&self) -> impl Iterator<Item = (&K, &SparseRow<K>)> {
        self.rows.iter()
    }

    pub fn into_rows(self) -> Vec<SparseRow<K>> {
        self.rows.into_values().collect()
    }
}

/// `row += c * other`, pruning zeros.
pub fn axpy<K: Ord + Clone>(row: &mut SparseRow<K>, c: &Q, other: &SparseRow<K>) {
    if c.is_zero() {
        return;
    }
    for (k, v) in other {
        let e = row.entry(k.clone()).or_insert_with(Q::zero);
        *e += c * v;
        if e.is_zero() {
            row.remove(k);
        }
    }
}

pub fn span_rank<K: Ord + Clone>(rows: impl IntoIterator<Item = SparseRow<K>>) -> usize {
    let mut e = Echelon::new();
    for r in rows {
        e.insert(r);
    }
    e.rank()
}

/// Whether two families span the same subspace.
pub fn same_span<K: Ord + Clone>(a: &[SparseRow<K>], b: &[SparseRow<K>]) -> bool {
    let mut ea = Echelon::new();
    for r in a {
        ea.insert(r.clone());
    }
    let mut eb = Echelon::new();
    for r in b {
        eb.insert(r.clone());
    }
    ea.rank() == eb.rank() && b.iter().all(|r| ea.contains(r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn row(entries: &[(u32, i64)]) -> SparseRow<u32> {
        entries.iter().map(|&(k, v)| (k, q(v))).collect()
    }

    #[test]
    fn rank_and_dependence() {
        let mut e = Echelon::new();
        assert!(e.insert(row(&[(0, 1), (1, 2)])));
        assert!(!e.insert(row(&[(0, 2), (1, 4)])));
        assert!(e.insert(row(&[(1, 1)])));
        assert_eq!(e.rank(), 2);
        assert!(e.contains(&row(&[(0, 5)])));
        assert!(!e.contains(&row(&[(2, 1)])));
    }

    #[test]
    fn reduced_form_is_order_independent() {
        let rows = vec![row(&[(0, 1), (1, 1)]), row(&[(1, 1), (2, 3)]), row(&[(0, 2), (2, -1)])];
        let mut a = Echelon::new();
        for r in &rows {
            a.insert(r.clone());
        }
        let mut b = Echelon::new();
        for r in rows.iter().rev() {
            b.insert(r.clone());
        }
        assert_eq!(a.into_rows(), b.into_rows());
    }
}
