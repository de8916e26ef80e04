//! Exact dense linear algebra over the coefficient fields.

use crate::scalar::{FieldSpec, Scalar};

/// A row space kept in reduced echelon form; supports incremental rank
/// queries and membership tests.
pub struct RowSpace {
    field: FieldSpec,
    ncols: usize,
    /// Echelon rows, each normalized to a unit pivot, sorted by pivot column.
    rows: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl RowSpace {
    pub fn new(field: FieldSpec, ncols: usize) -> Self {
        RowSpace { field, ncols, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduce `row` against the current basis in place; returns the pivot
    /// column of the residue, if nonzero.
    fn reduce(&self, row: &mut [Scalar]) -> Option<usize> {
        for (r, &pc) in self.rows.iter().zip(&self.pivots) {
            if row[pc].is_zero() {
                continue;
            }
            let c = row[pc].clone();
            for (j, rj) in r.iter().enumerate() {
                if !rj.is_zero() {
                    row[j] = row[j].sub(&c.mul(rj));
                }
            }
        }
        row.iter().position(|x| !x.is_zero())
    }

    pub fn contains(&self, row: &[Scalar]) -> bool {
        let mut v = row.to_vec();
        self.reduce(&mut v).is_none()
    }

    /// Insert a row; returns true if it enlarged the span.
    pub fn insert(&mut self, row: Vec<Scalar>) -> bool {
        assert_eq!(row.len(), self.ncols);
        let mut v = row;
        let Some(pc) = self.reduce(&mut v) else { return false };
        let inv = v[pc].inv();
        for x in v.iter_mut() {
            if !x.is_zero() {
                *x = x.mul(&inv);
            }
        }
        // back-substitute into existing rows to stay fully reduced
        for r in self.rows.iter_mut() {
            if r[pc].is_zero() {
                continue;
            }
            let c = r[pc].clone();
            for (j, vj) in v.iter().enumerate() {
                if !vj.is_zero() {
                    r[j] = r[j].sub(&c.mul(vj));
                }
            }
        }
        let at = self.pivots.partition_point(|&q| q < pc);
        self.rows.insert(at, v);
        self.pivots.insert(at, pc);
        true
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }
}

/// Basis of the right kernel {x : A x = 0} of the matrix with the given
/// rows. Deterministic: free columns are taken in increasing order.
pub fn kernel_basis(field: FieldSpec, ncols: usize, rows: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    let mut rs = RowSpace::new(field, ncols);
    for r in rows {
        rs.insert(r.clone());
    }
    let pivot_set: std::collections::HashSet<usize> = rs.pivots.iter().copied().collect();
    let mut basis = Vec::new();
    for fc in 0..ncols {
        if pivot_set.contains(&fc) {
            continue;
        }
        let mut v = vec![field.zero(); ncols];
        v[fc] = field.one();
        for (r, &pc) in rs.rows.iter().zip(&rs.pivots) {
            if !r[fc].is_zero() {
                v[pc] = r[fc].neg();
            }
        }
        basis.push(v);
    }
    basis
}

pub fn matrix_rank(field: FieldSpec, ncols: usize, rows: &[Vec<Scalar>]) -> usize {
    let mut rs = RowSpace::new(field, ncols);
    for r in rows {
        rs.insert(r.clone());
    }
    rs.rank()
}

pub fn dot_is_zero(a: &[Scalar], b: &[Scalar]) -> bool {
    let mut acc: Option<Scalar> = None;
    for (x, y) in a.iter().zip(b) {
        if x.is_zero() || y.is_zero() {
            continue;
        }
        let t = x.mul(y);
        acc = Some(match acc {
            None => t,
            Some(s) => s.add(&t),
        });
    }
    acc.map_or(true, |s| s.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qrow(v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&x| FieldSpec::Q.from_i64(x)).collect()
    }

    #[test]
    fn rank_and_membership() {
        let mut rs = RowSpace::new(FieldSpec::Q, 3);
        assert!(rs.insert(qrow(&[1, 2, 3])));
        assert!(rs.insert(qrow(&[0, 1, 1])));
        assert!(!rs.insert(qrow(&[1, 3, 4])));
        assert_eq!(rs.rank(), 2);
        assert!(rs.contains(&qrow(&[2, 5, 7])));
        assert!(!rs.contains(&qrow(&[0, 0, 1])));
    }

    #[test]
    fn kernel_annihilates_rows() {
        let rows = vec![qrow(&[1, 2, 3, 4]), qrow(&[2, 4, 6, 8]), qrow(&[0, 1, 0, 1])];
        let k = kernel_basis(FieldSpec::Q, 4, &rows);
        // rank 2 => nullity 2
        assert_eq!(k.len(), 2);
        for v in &k {
            for r in &rows {
                assert!(dot_is_zero(r, v));
            }
        }
        // kernel vectors independent
        assert_eq!(matrix_rank(FieldSpec::Q, 4, &k), 2);
    }

    #[test]
    fn prime_field_rank_drops() {
        // rows dependent mod 2 but independent over Q
        let f2 = FieldSpec::Fp(2);
        let rows_q = vec![qrow(&[1, 3]), qrow(&[3, 1])];
        assert_eq!(matrix_rank(FieldSpec::Q, 2, &rows_q), 2);
        let rows_f2: Vec<Vec<Scalar>> = vec![
            [1, 3].iter().map(|&x| f2.from_i64(x)).collect(),
            [3, 1].iter().map(|&x| f2.from_i64(x)).collect(),
        ];
        assert_eq!(matrix_rank(f2, 2, &rows_f2), 1);
    }
}
