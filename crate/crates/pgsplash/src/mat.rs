//! Dense matrices over a finite field, with reduced row echelon form as the
//! canonical representative of a row space. Row vectors throughout.

use crate::gf::{Field, FieldElement};
use std::fmt;

/// Row-major matrix over a fixed field. The column count is carried even when
/// there are no rows, so empty row spaces keep their ambient dimension.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl Mat {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Mat {
        Mat {
            field: field.clone(),
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: &Field, n: usize) -> Mat {
        let mut m = Mat::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows(field: &Field, rows: &[Vec<FieldElement>]) -> Mat {
        let cols = rows.first().map(|r| r.len()).unwrap_or(0);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            for e in r {
                assert!(e.field() == field, "row entries not in the given field");
                data.push(e.index());
            }
        }
        Mat {
            field: field.clone(),
            rows: rows.len(),
            cols,
            data,
        }
    }

    /// Construct from raw element indices, row-major.
    pub fn from_raw(field: &Field, rows: usize, cols: usize, data: Vec<u32>) -> Mat {
        assert_eq!(data.len(), rows * cols);
        for &v in &data {
            assert!((v as u64) < field.order(), "element index out of range");
        }
        Mat {
            field: field.clone(),
            rows,
            cols,
            data,
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }
    pub fn nrows(&self) -> usize {
        self.rows
    }
    pub fn ncols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub(crate) fn at(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }
    #[inline]
    pub(crate) fn set_raw(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v;
    }

    pub fn get(&self, i: usize, j: usize) -> FieldElement {
        self.field.elem(self.at(i, j))
    }

    pub fn set(&mut self, i: usize, j: usize, v: &FieldElement) {
        assert!(v.field() == &self.field);
        self.set_raw(i, j, v.index());
    }

    pub(crate) fn row_raw(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub(crate) fn raw_data(&self) -> &[u32] {
        &self.data
    }

    pub fn row(&self, i: usize) -> Vec<FieldElement> {
        self.row_raw(i).iter().map(|&v| self.field.elem(v)).collect()
    }

    pub fn rows_iter(&self) -> impl Iterator<Item = Vec<FieldElement>> + '_ {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn transpose(&self) -> Mat {
        let mut out = Mat::zeros(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set_raw(j, i, self.at(i, j));
            }
        }
        out
    }

    pub fn stack(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.cols, "column mismatch");
        assert!(self.field == other.field);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Mat::from_raw(&self.field, self.rows + other.rows, self.cols, data)
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        assert!(self.field == other.field);
        let f = &self.field;
        let mut out = Mat::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.at(i, l);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = f.mul_idx(a, other.at(l, j));
                    let cur = out.at(i, j);
                    out.set_raw(i, j, f.add_idx(cur, prod));
                }
            }
        }
        out
    }

    /// v * M for a row vector v (raw indices).
    pub(crate) fn act_row(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.rows);
        let f = &self.field;
        let mut out = vec![0u32; self.cols];
        for (l, &a) in v.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for j in 0..self.cols {
                out[j] = f.add_idx(out[j], f.mul_idx(a, self.at(l, j)));
            }
        }
        out
    }

    pub fn act_row_elems(&self, v: &[FieldElement]) -> Vec<FieldElement> {
        let raw: Vec<u32> = v.iter().map(|e| e.index()).collect();
        self.act_row(&raw).into_iter().map(|i| self.field.elem(i)).collect()
    }

    /// M * v for a column vector v.
    pub fn act_col_elems(&self, v: &[FieldElement]) -> Vec<FieldElement> {
        assert_eq!(v.len(), self.cols);
        let f = &self.field;
        (0..self.rows)
            .map(|i| {
                let mut acc = 0u32;
                for (j, x) in v.iter().enumerate() {
                    acc = f.add_idx(acc, f.mul_idx(self.at(i, j), x.index()));
                }
                f.elem(acc)
            })
            .collect()
    }

    /// Entry-wise p^j-power Frobenius.
    pub fn map_frobenius(&self, pj: u64) -> Mat {
        let mut out = self.clone();
        for v in out.data.iter_mut() {
            *v = self.field.pow_idx(*v, pj);
        }
        out
    }

    /// In-place reduced row echelon form. Returns the pivot columns. Rows of
    /// zeros are removed, so `nrows` becomes the rank.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let f = self.field.clone();
        let mut pivots = Vec::new();
        let mut rank = 0usize;
        for col in 0..self.cols {
            let Some(pr) = (rank..self.rows).find(|&r| self.at(r, col) != 0) else {
                continue;
            };
            if pr != rank {
                for j in 0..self.cols {
                    let a = self.at(rank, j);
                    let b = self.at(pr, j);
                    self.set_raw(rank, j, b);
                    self.set_raw(pr, j, a);
                }
            }
            let inv = f.inv_idx(self.at(rank, col));
            for j in 0..self.cols {
                let v = f.mul_idx(self.at(rank, j), inv);
                self.set_raw(rank, j, v);
            }
            for r in 0..self.rows {
                if r != rank && self.at(r, col) != 0 {
                    let c = self.at(r, col);
                    for j in 0..self.cols {
                        let v = f.sub_idx(self.at(r, j), f.mul_idx(c, self.at(rank, j)));
                        self.set_raw(r, j, v);
                    }
                }
            }
            pivots.push(col);
            rank += 1;
            if rank == self.rows {
                break;
            }
        }
        self.data.truncate(rank * self.cols);
        self.rows = rank;
        pivots
    }

    pub fn rref(&self) -> Mat {
        let mut m = self.clone();
        m.rref_in_place();
        m
    }

    pub fn rank(&self) -> usize {
        self.rref().rows
    }

    /// Right kernel: canonical basis (in RREF) of { v : M v^T = 0 }.
    pub fn kernel(&self) -> Mat {
        let mut r = self.clone();
        let pivots = r.rref_in_place();
        let f = &self.field;
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut rows: Vec<Vec<u32>> = Vec::with_capacity(free.len());
        for &fc in &free {
            let mut v = vec![0u32; self.cols];
            v[fc] = 1;
            for (ri, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg_idx(r.at(ri, fc));
            }
            rows.push(v);
        }
        let data: Vec<u32> = rows.into_iter().flatten().collect();
        let mut m = Mat::from_raw(f, free.len(), self.cols, data);
        m.rref_in_place();
        m
    }

    pub fn inverse(&self) -> Option<Mat> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        let n = self.rows;
        let mut aug = Mat::zeros(&self.field, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set_raw(i, j, self.at(i, j));
            }
            aug.set_raw(i, n + i, 1);
        }
        let pivots = aug.rref_in_place();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        let mut out = Mat::zeros(&self.field, n, n);
        for i in 0..n {
            for j in 0..n {
                out.set_raw(i, j, aug.at(i, n + j));
            }
        }
        Some(out)
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    /// Solve x * M = b for a row vector x, if consistent.
    pub fn solve_row(&self, b: &[FieldElement]) -> Option<Vec<FieldElement>> {
        assert_eq!(b.len(), self.cols);
        let raw: Vec<u32> = b.iter().map(|e| e.index()).collect();
        self.solve_row_raw(&raw)
            .map(|v| v.into_iter().map(|i| self.field.elem(i)).collect())
    }

    pub(crate) fn solve_row_raw(&self, b: &[u32]) -> Option<Vec<u32>> {
        // transpose to solve M^T x^T = b^T by elimination on augmented matrix
        let n = self.rows;
        let m = self.cols;
        let f = &self.field;
        let mut aug = Mat::zeros(f, m, n + 1);
        for i in 0..m {
            for j in 0..n {
                aug.set_raw(i, j, self.at(j, i));
            }
            aug.set_raw(i, n, b[i]);
        }
        let pivots = aug.rref_in_place();
        if pivots.contains(&n) {
            return None; // inconsistent
        }
        let mut x = vec![0u32; n];
        for (ri, &pc) in pivots.iter().enumerate() {
            x[pc] = aug.at(ri, n);
        }
        Some(x)
    }

    /// True iff the row space of `other` is contained in the row space of
    /// self. Assumes self is in RREF.
    pub fn rowspace_contains(&self, other: &Mat) -> bool {
        assert_eq!(self.cols, other.cols);
        let f = &self.field;
        let pivots: Vec<usize> = {
            // recover pivot columns of an RREF matrix
            let mut p = Vec::with_capacity(self.rows);
            for i in 0..self.rows {
                let c = (0..self.cols).find(|&j| self.at(i, j) != 0).unwrap();
                p.push(c);
            }
            p
        };
        for r in 0..other.rows {
            let mut v: Vec<u32> = other.row_raw(r).to_vec();
            for (ri, &pc) in pivots.iter().enumerate() {
                if v[pc] != 0 {
                    let c = v[pc];
                    for j in 0..self.cols {
                        v[j] = f.sub_idx(v[j], f.mul_idx(c, self.at(ri, j)));
                    }
                }
            }
            if v.iter().any(|&x| x != 0) {
                return false;
            }
        }
        true
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for i in 0..self.rows {
            let row = self
                .row(i)
                .iter()
                .map(|e| e.to_string())
                .collect::<Vec<_>>()
                .join(" : ");
            writeln!(f, "  [{}]", row)?;
        }
        write!(f, "]")
    }
}
