//! Dense exact linear algebra over a [`Field`].

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        Matrix {
            field,
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m[(i, i)] = field.one();
        }
        m
    }

    /// Builds a matrix from row vectors; all rows must have length `cols`.
    pub fn from_rows(field: Field, cols: usize, rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        let nrows = rows.len();
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(Matrix {
            field,
            rows: nrows,
            cols,
            data,
        })
    }

    pub fn from_i64(field: Field, rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&v| field.from_i64(v)).collect())
            .collect();
        Matrix::from_rows(field, cols, rows).expect("rectangular input")
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Matrix::zeros(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = self.field.zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += &(a * b);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn rank(&self) -> usize {
        rref(self).1.len()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Reduced row echelon form. The pivot in each column is the first row (from
/// the current position down) with a nonzero entry.
pub fn rref(m: &Matrix) -> (Matrix, Vec<usize>) {
    let mut rows = m.to_rows();
    let pivots = rref_rows(&mut rows, m.cols);
    let out = Matrix::from_rows(m.field, m.cols, rows).expect("shape preserved");
    (out, pivots)
}

/// In-place reduction of a list of rows of length `cols`. Returns the pivot columns;
/// the first `pivots.len()` rows are the nonzero rows of the result.
pub(crate) fn rref_rows(rows: &mut [Vec<Scalar>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].inv().expect("pivot is nonzero");
        if !inv.is_one() {
            for x in rows[r][c..].iter_mut() {
                *x = &*x * &inv;
            }
        }
        let (before, rest) = rows.split_at_mut(r);
        let (pivot_row, after) = rest.split_first_mut().expect("row r exists");
        for other in before.iter_mut().chain(after.iter_mut()) {
            let f = other[c].clone();
            if f.is_zero() {
                continue;
            }
            for (x, y) in other[c..].iter_mut().zip(&pivot_row[c..]) {
                if !y.is_zero() {
                    *x -= &(&f * y);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// A linear subspace of `K^ambient_dim`, stored as a reduced echelon basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    field: Field,
    ambient_dim: usize,
    basis: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(field: Field, ambient_dim: usize) -> Self {
        Subspace {
            field,
            ambient_dim,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(field: Field, ambient_dim: usize) -> Self {
        let rows = Matrix::identity(field, ambient_dim).to_rows();
        Subspace {
            field,
            ambient_dim,
            basis: rows,
            pivots: (0..ambient_dim).collect(),
        }
    }

    pub fn span(field: Field, ambient_dim: usize, vectors: Vec<Vec<Scalar>>) -> Result<Self> {
        let mut rows = vectors;
        if let Some(bad) = rows.iter().find(|v| v.len() != ambient_dim) {
            return Err(Error::DimensionMismatch {
                expected: ambient_dim,
                found: bad.len(),
            });
        }
        let pivots = rref_rows(&mut rows, ambient_dim);
        rows.truncate(pivots.len());
        Ok(Subspace {
            field,
            ambient_dim,
            basis: rows,
            pivots,
        })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Columns that are not pivots, ascending.
    pub fn free_columns(&self) -> Vec<usize> {
        let mut free = Vec::with_capacity(self.ambient_dim - self.dim());
        let mut p = self.pivots.iter().peekable();
        for c in 0..self.ambient_dim {
            if p.peek() == Some(&&c) {
                p.next();
            } else {
                free.push(c);
            }
        }
        free
    }

    /// The normal form of `v` modulo this subspace: the unique representative
    /// of `v + self` that vanishes on every pivot column.
    pub fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.ambient_dim);
        let mut out = v.to_vec();
        for (row, &c) in self.basis.iter().zip(&self.pivots) {
            let f = out[c].clone();
            if f.is_zero() {
                continue;
            }
            for (x, y) in out.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x -= &(&f * y);
                }
            }
        }
        out
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.reduce(v).iter().all(Scalar::is_zero)
    }

    /// Coordinates of the coset `v + self` in the basis returned by [`quotient_basis`].
    pub fn quotient_coordinates(&self, v: &[Scalar]) -> Vec<Scalar> {
        let r = self.reduce(v);
        self.free_columns()
            .into_iter()
            .map(|c| r[c].clone())
            .collect()
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                found: other.ambient_dim,
            });
        }
        let rows = self.basis.iter().chain(&other.basis).cloned().collect();
        Subspace::span(self.field, self.ambient_dim, rows)
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.ambient_dim == other.ambient_dim && self.basis.iter().all(|v| other.contains(v))
    }
}

/// `dim Σ V_i`.
pub fn subspace_sum_dim(spaces: &[Subspace]) -> Result<usize> {
    let Some(first) = spaces.first() else {
        return Ok(0);
    };
    let dim = first.ambient_dim;
    if let Some(bad) = spaces.iter().find(|s| s.ambient_dim != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: bad.ambient_dim,
        });
    }
    let rows = spaces
        .iter()
        .flat_map(|s| s.basis.iter().cloned())
        .collect();
    Ok(Subspace::span(first.field, dim, rows)?.dim())
}

/// Unit vectors at the non-pivot columns of `sub`, ascending. Their cosets form the
/// canonical basis of `K^ambient_dim / sub`.
pub fn quotient_basis(ambient_dim: usize, sub: &Subspace) -> Result<Vec<Vec<Scalar>>> {
    if sub.ambient_dim != ambient_dim {
        return Err(Error::DimensionMismatch {
            expected: ambient_dim,
            found: sub.ambient_dim,
        });
    }
    let f = sub.field;
    Ok(sub
        .free_columns()
        .into_iter()
        .map(|c| {
            let mut v = vec![f.zero(); ambient_dim];
            v[c] = f.one();
            v
        })
        .collect())
}

/// Coordinates of `v` in the span of the linearly independent `basis`, if it lies there.
pub(crate) fn solve_in_span(
    field: Field,
    basis: &[Vec<Scalar>],
    v: &[Scalar],
) -> Option<Vec<Scalar>> {
    let dim = v.len();
    let k = basis.len();
    // augmented system: columns are basis vectors, last column is v
    let mut rows: Vec<Vec<Scalar>> = (0..dim)
        .map(|r| {
            let mut row: Vec<Scalar> = basis.iter().map(|b| b[r].clone()).collect();
            row.push(v[r].clone());
            row
        })
        .collect();
    let pivots = rref_rows(&mut rows, k + 1);
    if pivots.last() == Some(&k) {
        return None;
    }
    let mut coords = vec![field.zero(); k];
    for (r, &c) in pivots.iter().enumerate() {
        coords[c] = rows[r][k].clone();
    }
    Some(coords)
}
