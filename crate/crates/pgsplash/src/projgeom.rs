//! Points, subspaces and collineations of PG(m, F) over any constructed
//! field. Subspaces are kept in reduced row echelon form so that equality is
//! a plain comparison and deduplication works through hashing.

use crate::gf::{Field, FieldElement};
use crate::mat::Mat;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeomError {
    #[error("objects live in different ambient spaces")]
    AmbientMismatch,
    #[error("dimension mismatch: expected width {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

// ---------------------------------------------------------------------------
// Points
// ---------------------------------------------------------------------------

/// A point of PG(m, F): a nonzero homogeneous coordinate vector of length
/// m+1, normalized so its first nonzero coordinate is 1.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint {
    field: Field,
    coords: Vec<u32>,
}

impl ProjPoint {
    pub fn new(field: &Field, coords: &[FieldElement]) -> ProjPoint {
        let raw: Vec<u32> = coords
            .iter()
            .map(|e| {
                assert!(e.field() == field, "coordinate not in the given field");
                e.index()
            })
            .collect();
        ProjPoint::from_raw(field, raw)
    }

    pub(crate) fn from_raw(field: &Field, mut coords: Vec<u32>) -> ProjPoint {
        let lead = coords
            .iter()
            .position(|&c| c != 0)
            .expect("the zero vector is not a projective point");
        if coords[lead] != 1 {
            let inv = field.inv_idx(coords[lead]);
            for c in coords.iter_mut() {
                *c = field.mul_idx(*c, inv);
            }
        }
        ProjPoint {
            field: field.clone(),
            coords,
        }
    }

    /// Convenience constructor from small integers through Z -> GF(p).
    pub fn from_ints(field: &Field, coords: &[u64]) -> ProjPoint {
        let elems: Vec<FieldElement> = coords.iter().map(|&c| field.elem_from_int(c)).collect();
        ProjPoint::new(field, &elems)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Ambient width m+1.
    pub fn width(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> Vec<FieldElement> {
        self.coords.iter().map(|&c| self.field.elem(c)).collect()
    }

    pub(crate) fn raw(&self) -> &[u32] {
        &self.coords
    }

    /// A representative vector (the normalized one).
    pub fn rep(&self) -> Vec<FieldElement> {
        self.coords()
    }

    pub fn as_subspace(&self) -> ProjSubspace {
        ProjSubspace::from_raw_rows(&self.field, self.coords.len(), vec![self.coords.clone()])
    }
}

impl fmt::Debug for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Points print as "(c0:c1:...:cm)" with field elements as coefficient lists.
impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self
            .coords()
            .iter()
            .map(|e| e.to_string())
            .collect::<Vec<_>>()
            .join(":");
        write!(f, "({})", s)
    }
}

// ---------------------------------------------------------------------------
// Subspaces
// ---------------------------------------------------------------------------

/// A projective subspace of PG(m, F), stored as the unique RREF basis of the
/// underlying row space. The empty subspace (projective dimension -1) is the
/// matrix with zero rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ProjSubspace {
    basis: Mat,
}

impl ProjSubspace {
    pub fn from_mat(m: &Mat) -> ProjSubspace {
        ProjSubspace { basis: m.rref() }
    }

    pub(crate) fn from_raw_rows(field: &Field, cols: usize, rows: Vec<Vec<u32>>) -> ProjSubspace {
        let data: Vec<u32> = rows.iter().flatten().copied().collect();
        let m = Mat::from_raw(field, rows.len(), cols, data);
        ProjSubspace { basis: m.rref() }
    }

    pub fn empty(field: &Field, width: usize) -> ProjSubspace {
        ProjSubspace {
            basis: Mat::zeros(field, 0, width),
        }
    }

    /// The whole PG(m, F) with m = width-1.
    pub fn full(field: &Field, width: usize) -> ProjSubspace {
        ProjSubspace {
            basis: Mat::identity(field, width),
        }
    }

    pub fn field(&self) -> &Field {
        self.basis.field()
    }

    pub fn width(&self) -> usize {
        self.basis.ncols()
    }

    /// Projective dimension: row count - 1 (so -1 for the empty subspace).
    pub fn dim(&self) -> i64 {
        self.basis.nrows() as i64 - 1
    }

    pub fn basis(&self) -> &Mat {
        &self.basis
    }

    pub fn is_empty(&self) -> bool {
        self.basis.nrows() == 0
    }

    pub fn is_point(&self) -> bool {
        self.basis.nrows() == 1
    }

    pub fn as_point(&self) -> Option<ProjPoint> {
        if self.is_point() {
            Some(ProjPoint::from_raw(
                self.field(),
                self.basis.row_raw(0).to_vec(),
            ))
        } else {
            None
        }
    }

    pub fn contains_point(&self, p: &ProjPoint) -> bool {
        if p.width() != self.width() {
            return false;
        }
        let m = Mat::from_raw(p.field(), 1, p.width(), p.raw().to_vec());
        self.basis.rowspace_contains(&m)
    }

    pub fn contains(&self, other: &ProjSubspace) -> bool {
        self.width() == other.width() && self.basis.rowspace_contains(&other.basis)
    }

    /// Number of points: (|F|^(d+1) - 1)/(|F| - 1).
    pub fn point_count(&self) -> u64 {
        let q = self.field().order();
        let d1 = self.basis.nrows() as u32;
        (q.pow(d1) - 1) / (q - 1)
    }

    /// Pivot columns of the RREF basis.
    pub(crate) fn pivots(&self) -> Vec<usize> {
        (0..self.basis.nrows())
            .map(|i| (0..self.basis.ncols()).find(|&j| self.basis.at(i, j) != 0).unwrap())
            .collect()
    }

    /// Coefficients of a point over the RREF basis, read off at the pivot
    /// columns; None when the point is not in the subspace.
    pub fn coords_on(&self, p: &ProjPoint) -> Option<Vec<FieldElement>> {
        if !self.contains_point(p) {
            return None;
        }
        let f = self.field();
        Some(self.pivots().iter().map(|&c| f.elem(p.raw()[c])).collect())
    }

    /// The point with the given coefficients over the RREF basis.
    pub fn point_from_coords(&self, c: &[FieldElement]) -> ProjPoint {
        ProjPoint::from_raw(self.field(), self.vector_from_coords_raw(c))
    }

    /// The raw vector sum_i c_i * basis_row_i (no normalization).
    pub fn vector_from_coords(&self, c: &[FieldElement]) -> Vec<FieldElement> {
        let f = self.field();
        self.vector_from_coords_raw(c)
            .into_iter()
            .map(|i| f.elem(i))
            .collect()
    }

    fn vector_from_coords_raw(&self, c: &[FieldElement]) -> Vec<u32> {
        assert_eq!(c.len(), self.basis.nrows(), "coefficient count");
        let raw: Vec<u32> = c.iter().map(|e| e.index()).collect();
        self.basis.act_row(&raw)
    }

    /// All points, each exactly once, in a deterministic order: coefficient
    /// vectors over the RREF basis with first nonzero coordinate 1.
    pub fn points(&self) -> Vec<ProjPoint> {
        let f = self.field().clone();
        let q = f.order() as u32;
        let d1 = self.basis.nrows();
        let mut out = Vec::with_capacity(self.point_count() as usize);
        // first nonzero coefficient position j, then free coefficients
        for j in 0..d1 {
            let free = d1 - j - 1;
            let total = (q as u64).pow(free as u32);
            for code in 0..total {
                let mut coeff = vec![0u32; d1];
                coeff[j] = 1;
                let mut c = code;
                for t in 0..free {
                    coeff[j + 1 + t] = (c % q as u64) as u32;
                    c /= q as u64;
                }
                let v = self.basis.act_row(&coeff);
                out.push(ProjPoint::from_raw(&f, v));
            }
        }
        out
    }
}

impl fmt::Debug for ProjSubspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Subspaces print as their RREF row list.
impl fmt::Display for ProjSubspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.basis.nrows())
            .map(|i| {
                ProjPoint::from_raw(self.field(), self.basis.row_raw(i).to_vec()).to_string()
            })
            .collect();
        write!(f, "[{}]", rows.join(" "))
    }
}

// ---------------------------------------------------------------------------
// span / meet / dual
// ---------------------------------------------------------------------------

/// An object of PG(m, F) that contributes rows to a span.
pub enum SpanItem<'a> {
    Point(&'a ProjPoint),
    Subspace(&'a ProjSubspace),
}

impl<'a> From<&'a ProjPoint> for SpanItem<'a> {
    fn from(p: &'a ProjPoint) -> Self {
        SpanItem::Point(p)
    }
}
impl<'a> From<&'a ProjSubspace> for SpanItem<'a> {
    fn from(s: &'a ProjSubspace) -> Self {
        SpanItem::Subspace(s)
    }
}

/// Smallest subspace containing all the inputs.
pub fn span<'a, I>(field: &Field, width: usize, items: I) -> Result<ProjSubspace, GeomError>
where
    I: IntoIterator<Item = SpanItem<'a>>,
{
    let mut rows: Vec<Vec<u32>> = Vec::new();
    for it in items {
        match it {
            SpanItem::Point(p) => {
                if p.width() != width || p.field() != field {
                    return Err(GeomError::AmbientMismatch);
                }
                rows.push(p.raw().to_vec());
            }
            SpanItem::Subspace(s) => {
                if s.width() != width || s.field() != field {
                    return Err(GeomError::AmbientMismatch);
                }
                for i in 0..s.basis().nrows() {
                    rows.push(s.basis().row_raw(i).to_vec());
                }
            }
        }
    }
    Ok(ProjSubspace::from_raw_rows(field, width, rows))
}

pub fn span_points(points: &[ProjPoint]) -> Result<ProjSubspace, GeomError> {
    let first = points.first().expect("span of an empty point list");
    span(
        first.field(),
        first.width(),
        points.iter().map(SpanItem::Point),
    )
}

pub fn span_pair(a: &ProjSubspace, b: &ProjSubspace) -> Result<ProjSubspace, GeomError> {
    if a.width() != b.width() || a.field() != b.field() {
        return Err(GeomError::AmbientMismatch);
    }
    Ok(ProjSubspace::from_mat(&a.basis().stack(b.basis())))
}

/// Intersection of two subspaces.
pub fn meet(a: &ProjSubspace, b: &ProjSubspace) -> Result<ProjSubspace, GeomError> {
    if a.width() != b.width() || a.field() != b.field() {
        return Err(GeomError::AmbientMismatch);
    }
    let da = dual(a);
    let db = dual(b);
    let stacked = da.basis().stack(db.basis());
    Ok(ProjSubspace {
        basis: stacked.kernel(),
    })
}

/// Annihilator under the standard bilinear form sum x_i y_i. An involution;
/// dim(dual) = m - 1 - dim.
pub fn dual(s: &ProjSubspace) -> ProjSubspace {
    ProjSubspace {
        basis: s.basis().kernel(),
    }
}

/// All hyperplanes of PG(m, F), via duality.
pub fn hyperplanes(field: &Field, width: usize) -> Vec<ProjSubspace> {
    ProjSubspace::full(field, width)
        .points()
        .into_iter()
        .map(|p| dual(&p.as_subspace()))
        .collect()
}

/// All lines of PG(m, F) (projective dimension 1 subspaces).
pub fn lines(field: &Field, width: usize) -> Vec<ProjSubspace> {
    enumerate_subspaces(field, width, 2)
}

/// All subspaces with `rows` basis rows (projective dimension rows-1),
/// enumerated directly as RREF matrices grouped by pivot columns.
pub fn enumerate_subspaces(field: &Field, width: usize, rows: usize) -> Vec<ProjSubspace> {
    let mut out = Vec::new();
    for pivots in combinations(width, rows) {
        enumerate_with_pivots(field, width, &pivots, &mut |m| {
            out.push(ProjSubspace { basis: m });
        });
    }
    out
}

/// The pivot-column sets for RREF enumeration; exposed so that callers can
/// partition the work.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        // advance
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Enumerate every RREF matrix with the given pivot columns, invoking `f` on
/// each. Free entries are the cells right of a pivot that are not in a pivot
/// column.
pub fn enumerate_with_pivots<F: FnMut(Mat)>(
    field: &Field,
    width: usize,
    pivots: &[usize],
    f: &mut F,
) {
    let rows = pivots.len();
    let q = field.order();
    let mut free_cells: Vec<(usize, usize)> = Vec::new();
    for (r, &p) in pivots.iter().enumerate() {
        for c in p + 1..width {
            if !pivots.contains(&c) {
                free_cells.push((r, c));
            }
        }
    }
    let total = q.pow(free_cells.len() as u32);
    for code in 0..total {
        let mut m = Mat::zeros(field, rows, width);
        for (r, &p) in pivots.iter().enumerate() {
            m.set_raw(r, p, 1);
        }
        let mut c = code;
        for &(r, col) in &free_cells {
            m.set_raw(r, col, (c % q) as u32);
            c /= q;
        }
        f(m);
    }
}

/// Number of RREF matrices for one pivot set (q^#free); handy for partitioning.
pub fn pivot_block_size(field: &Field, width: usize, pivots: &[usize]) -> u64 {
    let mut free = 0u32;
    for (r, &p) in pivots.iter().enumerate() {
        let _ = r;
        for c in p + 1..width {
            if !pivots.contains(&c) {
                free += 1;
            }
        }
    }
    field.order().pow(free)
}

// ---------------------------------------------------------------------------
// Collineations
// ---------------------------------------------------------------------------

/// A collineation of PG(m, F): x -> phi(x) * M where phi is the p^j Frobenius
/// applied coordinate-wise. j = 0 gives a projectivity.
#[derive(Clone, PartialEq, Eq)]
pub struct Collineation {
    mat: Mat,
    frob: usize,
}

impl Collineation {
    pub fn new(mat: Mat, frob: usize) -> Collineation {
        assert!(mat.is_invertible(), "collineation matrix must be invertible");
        let h = total_frobenius_order(mat.field());
        Collineation {
            mat,
            frob: frob % h,
        }
    }

    pub fn projectivity(mat: Mat) -> Collineation {
        Collineation::new(mat, 0)
    }

    pub fn identity(field: &Field, width: usize) -> Collineation {
        Collineation {
            mat: Mat::identity(field, width),
            frob: 0,
        }
    }

    pub fn field(&self) -> &Field {
        self.mat.field()
    }
    pub fn width(&self) -> usize {
        self.mat.ncols()
    }
    pub fn matrix(&self) -> &Mat {
        &self.mat
    }
    pub fn frobenius_exponent(&self) -> usize {
        self.frob
    }
    pub fn is_projectivity(&self) -> bool {
        self.frob == 0
    }

    fn phi(&self, v: &[u32]) -> Vec<u32> {
        if self.frob == 0 {
            return v.to_vec();
        }
        let pj = self.field().p().pow(self.frob as u32);
        v.iter().map(|&c| self.field().pow_idx(c, pj)).collect()
    }

    pub fn apply_point(&self, p: &ProjPoint) -> Result<ProjPoint, GeomError> {
        if p.width() != self.width() || p.field() != self.field() {
            return Err(GeomError::DimensionMismatch {
                expected: self.width(),
                got: p.width(),
            });
        }
        let v = self.mat.act_row(&self.phi(p.raw()));
        Ok(ProjPoint::from_raw(self.field(), v))
    }

    pub fn apply_subspace(&self, s: &ProjSubspace) -> Result<ProjSubspace, GeomError> {
        if s.width() != self.width() || s.field() != self.field() {
            return Err(GeomError::DimensionMismatch {
                expected: self.width(),
                got: s.width(),
            });
        }
        let rows: Vec<Vec<u32>> = (0..s.basis().nrows())
            .map(|i| self.mat.act_row(&self.phi(s.basis().row_raw(i))))
            .collect();
        Ok(ProjSubspace::from_raw_rows(self.field(), s.width(), rows))
    }

    /// Apply a raw vector (no normalization): phi(v) * M.
    pub fn apply_vector(&self, v: &[FieldElement]) -> Vec<FieldElement> {
        let raw: Vec<u32> = v.iter().map(|e| e.index()).collect();
        self.mat
            .act_row(&self.phi(&raw))
            .into_iter()
            .map(|i| self.field().elem(i))
            .collect()
    }

    /// self followed by other.
    pub fn compose(&self, other: &Collineation) -> Collineation {
        assert!(self.field() == other.field() && self.width() == other.width());
        let pj = other.field().p().pow(other.frob as u32);
        let mat = self.mat.map_frobenius(pj).mul(&other.mat);
        let h = total_frobenius_order(self.field());
        Collineation {
            mat,
            frob: (self.frob + other.frob) % h,
        }
    }

    pub fn inverse(&self) -> Collineation {
        let h = total_frobenius_order(self.field());
        let jinv = (h - self.frob) % h;
        let minv = self.mat.inverse().expect("collineation matrix invertible");
        let pj = self.field().p().pow(jinv as u32);
        Collineation {
            mat: minv.map_frobenius(pj),
            frob: jinv,
        }
    }
}

impl fmt::Debug for Collineation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Collineation(frob=p^{}, mat={:?})", self.frob, self.mat)
    }
}

/// Order of the full automorphism group of the field over its prime field.
pub fn total_frobenius_order(field: &Field) -> usize {
    field.degree()
}

/// A uniformly random invertible width x width matrix (rejection sampling).
pub fn random_invertible<R: rand::Rng>(field: &Field, width: usize, rng: &mut R) -> Mat {
    loop {
        let data: Vec<u32> = (0..width * width)
            .map(|_| rng.random_range(0..field.order()) as u32)
            .collect();
        let m = Mat::from_raw(field, width, width, data);
        if m.is_invertible() {
            return m;
        }
    }
}

/// A random subspace with `rows` basis rows (rejection sampling on rank).
pub fn random_subspace<R: rand::Rng>(
    field: &Field,
    width: usize,
    rows: usize,
    rng: &mut R,
) -> Mat {
    loop {
        let data: Vec<u32> = (0..rows * width)
            .map(|_| rng.random_range(0..field.order()) as u32)
            .collect();
        let m = Mat::from_raw(field, rows, width, data).rref();
        if m.nrows() == rows {
            return m;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f8() -> Field {
        Field::new(2, 3, None).unwrap()
    }

    #[test]
    fn span_of_points() {
        let f = f8();
        let p = ProjPoint::from_ints(&f, &[1, 0, 0]);
        let q = ProjPoint::from_ints(&f, &[0, 1, 0]);
        let s = span_points(&[p.clone()]).unwrap();
        assert_eq!(s.dim(), 0);
        assert_eq!(s.as_point().unwrap(), p);
        let line = span_points(&[p.clone(), q.clone()]).unwrap();
        assert_eq!(line.dim(), 1);
        // the line x2 = 0
        for pt in line.points() {
            assert!(pt.coords()[2].is_zero());
        }
        let r = ProjPoint::from_ints(&f, &[0, 0, 1]);
        let plane = span_points(&[p, q, r]).unwrap();
        assert_eq!(plane.dim(), 2);
    }

    #[test]
    fn meet_examples() {
        let f = f8();
        let l1 = span_points(&[
            ProjPoint::from_ints(&f, &[1, 0, 0]),
            ProjPoint::from_ints(&f, &[0, 1, 0]),
        ])
        .unwrap();
        assert_eq!(meet(&l1, &l1).unwrap(), l1);
        let l2 = span_points(&[
            ProjPoint::from_ints(&f, &[1, 0, 0]),
            ProjPoint::from_ints(&f, &[0, 0, 1]),
        ])
        .unwrap();
        let m = meet(&l1, &l2).unwrap();
        assert_eq!(m.dim(), 0);
        assert_eq!(
            m.as_point().unwrap(),
            ProjPoint::from_ints(&f, &[1, 0, 0])
        );
        // point off a line in PG(3, 8)
        let line = ProjSubspace::from_raw_rows(&f, 4, vec![vec![1, 0, 0, 0], vec![0, 1, 0, 0]]);
        let pt = ProjPoint::from_ints(&f, &[0, 0, 1, 0]).as_subspace();
        assert_eq!(meet(&line, &pt).unwrap().dim(), -1);
    }

    #[test]
    fn dual_is_involution() {
        let f = f8();
        let h = span_points(&[
            ProjPoint::from_ints(&f, &[1, 0, 0]),
            ProjPoint::from_ints(&f, &[0, 1, 1]),
        ])
        .unwrap();
        let d = dual(&h);
        assert_eq!(d.dim(), 0); // dual of a hyperplane is a point
        assert_eq!(dual(&d), h);
    }

    #[test]
    fn point_counts() {
        let f = f8();
        assert_eq!(ProjSubspace::full(&f, 2).points().len(), 9); // PG(1,8)
        assert_eq!(ProjSubspace::full(&f, 3).points().len(), 73); // PG(2,8)
        assert!(ProjSubspace::empty(&f, 3).points().is_empty());
        // all distinct
        let pts = ProjSubspace::full(&f, 3).points();
        let set: std::collections::HashSet<_> = pts.iter().cloned().collect();
        assert_eq!(set.len(), 73);
    }

    #[test]
    fn collineation_actions() {
        let f = f8();
        let id = Collineation::identity(&f, 2);
        let p = ProjPoint::from_ints(&f, &[1, 1]);
        assert_eq!(id.apply_point(&p).unwrap(), p);

        // diag(1, lambda) on (1:t)
        let lam = f.elem(5);
        let t = f.elem(3);
        let mut d = Mat::identity(&f, 2);
        d.set(1, 1, &lam);
        let c = Collineation::projectivity(d);
        let pt = ProjPoint::new(&f, &[f.one(), t.clone()]);
        let img = c.apply_point(&pt).unwrap();
        assert_eq!(img, ProjPoint::new(&f, &[f.one(), &lam * &t]));

        // pure Frobenius
        let fr = Collineation::new(Mat::identity(&f, 2), 1);
        let alpha = f.poly_generator();
        let img = fr
            .apply_point(&ProjPoint::new(&f, &[f.one(), alpha.clone()]))
            .unwrap();
        assert_eq!(img, ProjPoint::new(&f, &[f.one(), alpha.pow(2)]));
    }

    #[test]
    fn collineation_compose_inverse() {
        let f = f8();
        let m1 = Mat::from_raw(&f, 2, 2, vec![1, 2, 3, 4]);
        let m2 = Mat::from_raw(&f, 2, 2, vec![0, 1, 1, 5]);
        let c1 = Collineation::new(m1, 1);
        let c2 = Collineation::new(m2, 2);
        let c = c1.compose(&c2);
        let p = ProjPoint::from_ints(&f, &[1, 6]);
        let via = c2.apply_point(&c1.apply_point(&p).unwrap()).unwrap();
        assert_eq!(c.apply_point(&p).unwrap(), via);
        let inv = c.inverse();
        assert_eq!(inv.apply_point(&via).unwrap(), p);
    }

    #[test]
    fn incidence_preserved() {
        let f = f8();
        let line = span_points(&[
            ProjPoint::from_ints(&f, &[1, 0, 3]),
            ProjPoint::from_ints(&f, &[0, 1, 5]),
        ])
        .unwrap();
        let m = Mat::from_raw(&f, 3, 3, vec![1, 2, 0, 0, 1, 4, 3, 0, 1]);
        let c = Collineation::new(m, 1);
        for p in ProjSubspace::full(&f, 3).points() {
            let lhs = line.contains_point(&p);
            let rhs = c
                .apply_subspace(&line)
                .unwrap()
                .contains_point(&c.apply_point(&p).unwrap());
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn subspace_enumeration_counts() {
        let f4 = Field::new(2, 2, None).unwrap();
        // lines of PG(2,4): q^2+q+1 = 21
        assert_eq!(lines(&f4, 3).len(), 21);
        // hyperplanes agree with duals
        assert_eq!(hyperplanes(&f4, 3).len(), 21);
        let f2 = Field::new(2, 1, None).unwrap();
        // Gaussian binomial [4 2]_2 = 35
        assert_eq!(enumerate_subspaces(&f2, 4, 2).len(), 35);
    }

    #[test]
    fn lattice_absorption() {
        let f = Field::new(2, 2, None).unwrap();
        let subs = enumerate_subspaces(&f, 3, 1);
        for a in subs.iter().take(8) {
            for b in subs.iter().take(8) {
                let s = span_pair(a, b).unwrap();
                let m = meet(a, &s).unwrap();
                assert_eq!(&m, a);
            }
        }
    }
}
