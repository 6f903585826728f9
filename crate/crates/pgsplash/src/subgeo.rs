//! q-subgeometries of PG(r-1, q^n): construction from basis matrices or
//! frames, their hyperplanes with ambient extensions, and the classification
//! of ambient lines as secant, tangent or external.

use crate::gf::{FieldElement, SubfieldEmbedding};
use crate::mat::Mat;
use crate::projgeom::{Collineation, ProjPoint, ProjSubspace};
use once_cell::sync::OnceCell;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SubgeoError {
    #[error("frame must consist of r+1 points with every r-subset independent")]
    DegenerateFrame,
    #[error("line lies in the extension of a hyperplane of the subgeometry")]
    LineInExtendedHyperplane,
    #[error("expected a line (projective dimension 1), got dimension {0}")]
    NotALine(i64),
}

/// Points of the GF(q)-row-span of the given ambient vectors (rows over the
/// big field), i.e. the set { <sum embed(c_i) rows_i> : c rational, nonzero },
/// sorted and deduplicated. This is the B(.) image of a rational subspace
/// written directly in the ambient space.
pub fn rational_span_points(emb: &SubfieldEmbedding, rows: &Mat) -> Vec<ProjPoint> {
    let target = emb.target();
    assert!(rows.field() == target);
    let width = rows.ncols();
    let small_full = ProjSubspace::full(emb.source(), rows.nrows());
    let mut out: Vec<ProjPoint> = Vec::with_capacity(small_full.point_count() as usize);
    for c in small_full.points() {
        let mut v = vec![0u32; width];
        for (i, ci) in c.raw().iter().enumerate() {
            if *ci == 0 {
                continue;
            }
            let e = emb.embed_idx(*ci);
            for j in 0..width {
                v[j] = target.add_idx(v[j], target.mul_idx(e, rows.at(i, j)));
            }
        }
        if v.iter().any(|&x| x != 0) {
            out.push(ProjPoint::from_raw(target, v));
        }
    }
    out.sort();
    out.dedup();
    out
}

/// The ambient extension (big-field span) of the GF(q)-row-span of `rows`.
pub fn extension(rows: &Mat) -> ProjSubspace {
    ProjSubspace::from_mat(rows)
}

struct SubgeoInner {
    emb: SubfieldEmbedding,
    basis: Mat,
    points: OnceCell<Vec<ProjPoint>>,
    hyperplanes: OnceCell<Vec<SubHyperplane>>,
}

/// A q-subgeometry of PG(r-1, q^n), given by an invertible ambient basis
/// matrix whose GF(q)-row-span (through the subfield embedding) defines the
/// point set. Two values compare equal iff their point sets agree; the basis
/// matrix is only determined up to a scalar times a GL(r, q) factor.
#[derive(Clone)]
pub struct Subgeometry(Arc<SubgeoInner>);

/// A hyperplane of a subgeometry: its point set inside the subgeometry and
/// its extension to a subspace of the ambient space.
#[derive(Clone)]
pub struct SubHyperplane {
    /// Dual coordinates over GF(q) with respect to the subgeometry basis.
    dual_vector: Vec<u32>,
    points: Vec<ProjPoint>,
    extension: ProjSubspace,
}

impl SubHyperplane {
    pub fn points(&self) -> &[ProjPoint] {
        &self.points
    }
    pub fn extension(&self) -> &ProjSubspace {
        &self.extension
    }
    pub fn dual_vector(&self) -> &[u32] {
        &self.dual_vector
    }
}

/// Position of a line relative to a subgeometry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LinePosition {
    /// The line meets the subgeometry in a full q-subline.
    Secant(Vec<ProjPoint>),
    /// The line meets the subgeometry in exactly one point, its centre.
    Tangent(ProjPoint),
    External,
}

impl Subgeometry {
    /// The subgeometry whose points have all coordinates in the embedded
    /// GF(q); basis matrix the identity.
    pub fn canonical(emb: &SubfieldEmbedding, r: usize) -> Subgeometry {
        Subgeometry::from_basis(emb, Mat::identity(emb.target(), r))
    }

    /// Subgeometry with the given invertible ambient basis matrix.
    pub fn from_basis(emb: &SubfieldEmbedding, basis: Mat) -> Subgeometry {
        assert!(basis.field() == emb.target(), "basis not over the big field");
        assert!(basis.is_invertible(), "subgeometry basis must be invertible");
        Subgeometry(Arc::new(SubgeoInner {
            emb: emb.clone(),
            basis,
            points: OnceCell::new(),
            hyperplanes: OnceCell::new(),
        }))
    }

    /// The unique q-subgeometry containing a frame of r+1 points in general
    /// position (every r-subset independent). The first r points become the
    /// basis rows, scaled so the last point is their sum.
    pub fn from_frame(
        emb: &SubfieldEmbedding,
        frame: &[ProjPoint],
    ) -> Result<Subgeometry, SubgeoError> {
        let target = emb.target();
        let r = frame.first().map(|p| p.width()).unwrap_or(0);
        if frame.len() != r + 1 {
            return Err(SubgeoError::DegenerateFrame);
        }
        let base = Mat::from_rows(
            target,
            &frame[..r].iter().map(|p| p.rep()).collect::<Vec<_>>(),
        );
        if !base.is_invertible() {
            return Err(SubgeoError::DegenerateFrame);
        }
        // unit point as a combination of the first r
        let lambda = base
            .solve_row(&frame[r].rep())
            .ok_or(SubgeoError::DegenerateFrame)?;
        if lambda.iter().any(|l| l.is_zero()) {
            return Err(SubgeoError::DegenerateFrame);
        }
        let rows: Vec<Vec<FieldElement>> = (0..r)
            .map(|i| {
                base.row(i)
                    .into_iter()
                    .map(|e| &e * &lambda[i])
                    .collect::<Vec<_>>()
            })
            .collect();
        Ok(Subgeometry::from_basis(emb, Mat::from_rows(target, &rows)))
    }

    pub fn emb(&self) -> &SubfieldEmbedding {
        &self.0.emb
    }
    pub fn basis(&self) -> &Mat {
        &self.0.basis
    }
    /// Rank r: the subgeometry is a copy of PG(r-1, q).
    pub fn rank(&self) -> usize {
        self.0.basis.nrows()
    }
    pub fn q(&self) -> u64 {
        self.0.emb.q()
    }
    pub fn n(&self) -> usize {
        self.0.emb.extension_degree()
    }
    pub fn ambient_width(&self) -> usize {
        self.0.basis.ncols()
    }

    /// Sorted point set; built lazily, exactly once.
    pub fn points(&self) -> &[ProjPoint] {
        self.0
            .points
            .get_or_init(|| rational_span_points(&self.0.emb, &self.0.basis))
    }

    pub fn contains(&self, p: &ProjPoint) -> bool {
        self.points().binary_search(p).is_ok()
    }

    /// The (q^r-1)/(q-1) hyperplanes of the subgeometry, each with its
    /// ambient extension.
    pub fn sub_hyperplanes(&self) -> &[SubHyperplane] {
        self.0.hyperplanes.get_or_init(|| {
            let emb = &self.0.emb;
            let source = emb.source();
            let r = self.rank();
            let mut out = Vec::new();
            for c in ProjSubspace::full(source, r).points() {
                let cmat = Mat::from_raw(source, 1, r, c.raw().to_vec());
                let kern = cmat.kernel(); // (r-1) x r over GF(q)
                let rows: Vec<Vec<u32>> = (0..kern.nrows())
                    .map(|i| {
                        let embedded: Vec<u32> =
                            kern.row_raw(i).iter().map(|&x| emb.embed_idx(x)).collect();
                        let m = Mat::from_raw(emb.target(), 1, r, embedded);
                        m.mul(&self.0.basis).row_raw(0).to_vec()
                    })
                    .collect();
                let data: Vec<u32> = rows.iter().flatten().copied().collect();
                let amb_rows = Mat::from_raw(emb.target(), rows.len(), self.ambient_width(), data);
                let points = rational_span_points(emb, &amb_rows);
                let ext = extension(&amb_rows);
                out.push(SubHyperplane {
                    dual_vector: c.raw().to_vec(),
                    points,
                    extension: ext,
                });
            }
            out
        })
    }

    /// Classify a line, failing when the line lies inside the extension of a
    /// hyperplane of the subgeometry (such lines have no splash).
    pub fn line_position(&self, line: &ProjSubspace) -> Result<LinePosition, SubgeoError> {
        if line.dim() != 1 {
            return Err(SubgeoError::NotALine(line.dim()));
        }
        for h in self.sub_hyperplanes() {
            if h.extension.contains(line) {
                return Err(SubgeoError::LineInExtendedHyperplane);
            }
        }
        let hits: Vec<ProjPoint> = line
            .points()
            .into_iter()
            .filter(|p| self.contains(p))
            .collect();
        match hits.len() {
            0 => Ok(LinePosition::External),
            1 => Ok(LinePosition::Tangent(hits.into_iter().next().unwrap())),
            _ => Ok(LinePosition::Secant(hits)),
        }
    }

    /// Image under a collineation: the basis transforms entry-wise Frobenius
    /// then matrix action, and rational coefficient vectors stay rational.
    pub fn apply(&self, c: &Collineation) -> Subgeometry {
        let pj = c.field().p().pow(c.frobenius_exponent() as u32);
        let basis = self.0.basis.map_frobenius(pj).mul(c.matrix());
        Subgeometry::from_basis(&self.0.emb, basis)
    }

    /// The expanded GF(q)-subspace underlying this subgeometry: the row span
    /// of the basis under GF(q)-coordinates, as an r-dimensional subspace of
    /// GF(q)^(r*n) in RREF.
    pub fn rational_subspace(&self) -> Mat {
        let emb = &self.0.emb;
        let n = emb.extension_degree();
        let r = self.rank();
        let w = self.ambient_width();
        let mut data: Vec<u32> = Vec::with_capacity(r * w * n);
        for i in 0..r {
            for j in 0..w {
                data.extend(emb.coords_idx(self.0.basis.at(i, j)));
            }
        }
        let mut m = Mat::from_raw(emb.source(), r, w * n, data);
        m.rref_in_place();
        m
    }
}

impl PartialEq for Subgeometry {
    fn eq(&self, other: &Self) -> bool {
        self.q() == other.q()
            && self.ambient_width() == other.ambient_width()
            && self.points() == other.points()
    }
}
impl Eq for Subgeometry {}

impl fmt::Debug for Subgeometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Subgeometry(q={}, n={}, r={}, basis={:?})",
            self.q(),
            self.n(),
            self.rank(),
            self.0.basis
        )
    }
}

/// The dual subgeometry: hyperplane extensions of `s` correspond to the
/// points of a q-subgeometry of the dual space, whose basis matrix is the
/// inverse transpose of the basis of `s`.
pub fn dual_subgeometry(s: &Subgeometry) -> Subgeometry {
    let binv = s.basis().inverse().expect("basis invertible").transpose();
    Subgeometry::from_basis(s.emb(), binv)
}

/// Check that each extended hyperplane meets the subgeometry exactly in the
/// hyperplane's own points (used by tests; the geometry guarantees it).
pub fn extension_is_exact(s: &Subgeometry, h: &SubHyperplane) -> bool {
    s.points()
        .iter()
        .filter(|p| h.extension().contains_point(p))
        .eq(h.points().iter())
}

// needed by line_position's secant case and by callers
pub use crate::projgeom::span_points;
