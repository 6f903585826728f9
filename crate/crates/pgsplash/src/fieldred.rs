//! Field reduction: the map sending points of PG(r-1, q^n) to (n-1)-subspaces
//! of PG(rn-1, q), the Desarguesian spread it produces, the B(.) operator
//! reading subsets of the small space back as point sets of the big one, and
//! linear sets on PG(r-1, q^n) with rank, weights and classification.

use crate::gf::{FieldElement, SubfieldEmbedding};
use crate::mat::Mat;
use crate::projgeom::{ProjPoint, ProjSubspace};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

/// theta_j = (q^j - 1)/(q - 1), the number of points of PG(j-1, q).
pub fn theta(q: u64, j: usize) -> u64 {
    (q.pow(j as u32) - 1) / (q - 1)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldRedError {
    #[error("the zero subspace defines no linear set")]
    ZeroSubspace,
    #[error("vector length {got} does not match the context (expected {expected})")]
    WidthMismatch { expected: usize, got: usize },
}

/// Shared context for one field reduction: the tower GF(q) < GF(q^n), the
/// number of components r, and the expansion GF(q^n)^r -> GF(q)^(rn) with
/// respect to the basis 1, alpha, ..., alpha^(n-1). All spread and linear-set
/// computations that should be comparable must share one context.
#[derive(Clone)]
pub struct ReductionContext {
    emb: SubfieldEmbedding,
    r: usize,
}

impl ReductionContext {
    pub fn new(emb: &SubfieldEmbedding, r: usize) -> ReductionContext {
        assert!(r >= 1);
        ReductionContext { emb: emb.clone(), r }
    }

    pub fn emb(&self) -> &SubfieldEmbedding {
        &self.emb
    }
    pub fn r(&self) -> usize {
        self.r
    }
    pub fn n(&self) -> usize {
        self.emb.extension_degree()
    }
    pub fn q(&self) -> u64 {
        self.emb.q()
    }
    /// The small field GF(q).
    pub fn small_field(&self) -> &crate::gf::Field {
        self.emb.source()
    }
    /// The big field GF(q^n).
    pub fn big_field(&self) -> &crate::gf::Field {
        self.emb.target()
    }
    /// Width of small-side vectors: r*n.
    pub fn small_width(&self) -> usize {
        self.r * self.n()
    }

    /// GF(q)-expansion of a vector in GF(q^n)^r, block per component.
    pub fn expand_vec(&self, v: &[FieldElement]) -> Vec<FieldElement> {
        assert_eq!(v.len(), self.r);
        let mut out = Vec::with_capacity(self.small_width());
        for x in v {
            out.extend(self.emb.coords(x));
        }
        out
    }

    /// Inverse of `expand_vec`.
    pub fn contract_vec(&self, w: &[FieldElement]) -> Vec<FieldElement> {
        assert_eq!(w.len(), self.small_width());
        let n = self.n();
        (0..self.r)
            .map(|i| self.emb.lift(&w[i * n..(i + 1) * n]))
            .collect()
    }

    pub(crate) fn expand_raw(&self, v: &[u32]) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.small_width());
        for &x in v {
            out.extend(self.emb.coords_idx(x));
        }
        out
    }

    pub(crate) fn contract_raw(&self, w: &[u32]) -> Vec<u32> {
        let n = self.n();
        (0..self.r)
            .map(|i| self.emb.lift_idx(&w[i * n..(i + 1) * n]))
            .collect()
    }

    /// Field reduction of a point: the (n-1)-dimensional subspace of
    /// PG(rn-1, q) spanned by the expansions of alpha^j * v; independent of
    /// the representative chosen.
    pub fn field_reduce_point(&self, x: &ProjPoint) -> SpreadElement {
        assert!(x.field() == self.big_field());
        assert_eq!(x.width(), self.r);
        let big = self.big_field();
        let alpha = big.poly_generator();
        let mut rows: Vec<Vec<u32>> = Vec::with_capacity(self.n());
        let mut scaled: Vec<u32> = x.raw().to_vec();
        for _ in 0..self.n() {
            rows.push(self.expand_raw(&scaled));
            for c in scaled.iter_mut() {
                *c = big.mul_idx(*c, alpha.index());
            }
        }
        let subspace = ProjSubspace::from_raw_rows(self.small_field(), self.small_width(), rows);
        SpreadElement {
            subspace,
            point: x.clone(),
        }
    }

    /// The full Desarguesian spread: images of all points of PG(r-1, q^n).
    pub fn desarguesian_spread(&self) -> Vec<SpreadElement> {
        ProjSubspace::full(self.big_field(), self.r)
            .points()
            .into_iter()
            .map(|p| self.field_reduce_point(&p))
            .collect()
    }

    /// The unique spread element through a small-side point, read back as a
    /// point of PG(r-1, q^n).
    pub fn spread_point_through(&self, p: &ProjPoint) -> ProjPoint {
        assert!(p.field() == self.small_field());
        let v = self.contract_raw(p.raw());
        ProjPoint::from_raw(self.big_field(), v)
    }

    /// B(T) for a small-side subspace T: the points of PG(r-1, q^n) whose
    /// spread element meets T. Sorted and deduplicated.
    pub fn b_operator(&self, t: &ProjSubspace) -> Vec<ProjPoint> {
        assert!(t.field() == self.small_field());
        assert_eq!(t.width(), self.small_width());
        let mut out: Vec<ProjPoint> = t
            .points()
            .into_iter()
            .map(|p| self.spread_point_through(&p))
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// B(T) for an arbitrary small-side point set.
    pub fn b_operator_points(&self, pts: &[ProjPoint]) -> Vec<ProjPoint> {
        let mut out: Vec<ProjPoint> = pts
            .iter()
            .map(|p| self.spread_point_through(p))
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// The linear set defined by a nonzero GF(q)-subspace U, given either in
    /// expanded small-side form (rows over GF(q), width r*n).
    pub fn linear_set(&self, u: &Mat) -> Result<LinearSet, FieldRedError> {
        if u.field() != self.small_field() {
            return Err(FieldRedError::WidthMismatch {
                expected: self.small_width(),
                got: u.ncols(),
            });
        }
        if u.ncols() != self.small_width() {
            return Err(FieldRedError::WidthMismatch {
                expected: self.small_width(),
                got: u.ncols(),
            });
        }
        let defining = u.rref();
        let rank = defining.nrows();
        if rank == 0 {
            return Err(FieldRedError::ZeroSubspace);
        }
        let sub = ProjSubspace::from_mat(&defining);
        let mut counts: BTreeMap<ProjPoint, u64> = BTreeMap::new();
        for p in sub.points() {
            let big = self.spread_point_through(&p);
            *counts.entry(big).or_insert(0) += 1;
        }
        let q = self.q();
        // counts are theta_w; invert to weights
        let mut weights: BTreeMap<ProjPoint, usize> = BTreeMap::new();
        for (p, c) in &counts {
            let mut w = 0usize;
            let mut theta = 0u64;
            while theta < *c {
                w += 1;
                theta = (q.pow(w as u32) - 1) / (q - 1);
            }
            assert_eq!(theta, *c, "point multiplicity is not a theta value");
            weights.insert(p.clone(), w);
        }
        let points: Vec<ProjPoint> = weights.keys().cloned().collect();
        Ok(LinearSet {
            ctx: self.clone(),
            rank,
            points,
            weights,
            defining,
        })
    }

    /// Linear set from GF(q)-generators given as vectors in GF(q^n)^r.
    pub fn linear_set_from_vectors(
        &self,
        gens: &[Vec<FieldElement>],
    ) -> Result<LinearSet, FieldRedError> {
        let rows: Vec<Vec<FieldElement>> = gens.iter().map(|v| self.expand_vec(v)).collect();
        let m = Mat::from_rows(self.small_field(), &rows);
        self.linear_set(&m)
    }
}

impl fmt::Debug for ReductionContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "F_{{{},{},{}}}",
            self.r,
            self.n(),
            self.q()
        )
    }
}

/// One element of the Desarguesian spread: an (n-1)-subspace of PG(rn-1, q)
/// together with the point of PG(r-1, q^n) it represents.
#[derive(Clone, PartialEq, Eq)]
pub struct SpreadElement {
    pub subspace: ProjSubspace,
    pub point: ProjPoint,
}

impl fmt::Debug for SpreadElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ~ {}", self.point, self.subspace)
    }
}

/// An F_q-linear set B(U) on PG(r-1, q^n), with its rank (the vector
/// dimension of U, which is the paper's projective rank), derived point set,
/// and weight map. Weights are stored as vector-space dimensions of
/// F(x) intersected with U, which again agree with the projective convention.
#[derive(Clone)]
pub struct LinearSet {
    ctx: ReductionContext,
    rank: usize,
    points: Vec<ProjPoint>,
    weights: BTreeMap<ProjPoint, usize>,
    defining: Mat,
}

/// Classification of a linear set by its weight multiset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LinearSetClass {
    /// Every point has weight one (rank >= 3 here; rank 2 reports Subline).
    Scattered,
    /// Rank r >= 3 with one point of weight r-1 (the head), the rest weight 1.
    Club { head: ProjPoint },
    /// Rank 2 with q+1 points of weight one.
    Subline,
    Other { profile: Vec<usize> },
}

impl LinearSet {
    pub fn ctx(&self) -> &ReductionContext {
        &self.ctx
    }
    pub fn rank(&self) -> usize {
        self.rank
    }
    pub fn points(&self) -> &[ProjPoint] {
        &self.points
    }
    pub fn weights(&self) -> &BTreeMap<ProjPoint, usize> {
        &self.weights
    }
    pub fn weight(&self, p: &ProjPoint) -> usize {
        self.weights.get(p).copied().unwrap_or(0)
    }
    /// The defining subspace U in expanded RREF form (provenance; equality of
    /// linear sets does not compare it).
    pub fn defining_subspace(&self) -> &Mat {
        &self.defining
    }

    /// Weight multiset, descending.
    pub fn weight_profile(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.weights.values().copied().collect();
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    }

    pub fn classify(&self) -> LinearSetClass {
        let profile = self.weight_profile();
        let all_one = profile.iter().all(|&w| w == 1);
        if self.rank == 2 && all_one {
            return LinearSetClass::Subline;
        }
        if all_one {
            return LinearSetClass::Scattered;
        }
        if self.rank >= 3 && profile[0] == self.rank - 1 && profile[1..].iter().all(|&w| w == 1)
        {
            let head = self
                .weights
                .iter()
                .find(|(_, &w)| w == self.rank - 1)
                .map(|(p, _)| p.clone())
                .unwrap();
            return LinearSetClass::Club { head };
        }
        LinearSetClass::Other { profile }
    }

    /// sum_x theta_{w(x)} = theta_rank, the partition of the points of PG(U)
    /// by spread elements.
    pub fn weight_identity_holds(&self) -> bool {
        let q = self.ctx.q();
        let theta = |w: usize| (q.pow(w as u32) - 1) / (q - 1);
        let lhs: u64 = self.weights.values().map(|&w| theta(w)).sum();
        lhs == theta(self.rank)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "rank": self.rank,
            "points": self.points.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
            "weights": self.weights.iter()
                .map(|(p, w)| (p.to_string(), *w))
                .collect::<BTreeMap<String, usize>>(),
        })
    }
}

/// Linear sets compare as (point set, weight map); the defining subspace is
/// provenance only.
impl PartialEq for LinearSet {
    fn eq(&self, other: &Self) -> bool {
        self.rank == other.rank && self.weights == other.weights
    }
}
impl Eq for LinearSet {}

impl fmt::Debug for LinearSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "LinearSet(rank {}, {} points, profile {:?})",
            self.rank,
            self.points.len(),
            self.weight_profile()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::{Field, SubfieldEmbedding};

    fn ctx(q: u64, n: usize, r: usize) -> ReductionContext {
        let (p, k) = crate::gf::prime_power(q).unwrap();
        let small = Field::new(p, k, None).unwrap();
        let big = Field::new(p, k * n, None).unwrap();
        let emb = SubfieldEmbedding::new(&small, &big).unwrap();
        ReductionContext::new(&emb, r)
    }

    #[test]
    fn reduce_coordinate_point() {
        let c = ctx(2, 2, 2);
        let x = ProjPoint::from_ints(c.big_field(), &[1, 0]);
        let se = c.field_reduce_point(&x);
        assert_eq!(se.subspace.dim(), 1);
        let b = se.subspace.basis();
        assert_eq!(b.row_raw(0), &[1, 0, 0, 0]);
        assert_eq!(b.row_raw(1), &[0, 1, 0, 0]);
    }

    #[test]
    fn representative_invariance() {
        let c = ctx(2, 3, 2);
        let big = c.big_field().clone();
        let x = ProjPoint::new(&big, &[big.elem(1), big.elem(5)]);
        let se1 = c.field_reduce_point(&x);
        // scale the representative by lambda != 0: same subspace
        for lam in 1..8u32 {
            let v = vec![big.elem(lam), &big.elem(lam) * &big.elem(5)];
            let y = ProjPoint::new(&big, &v);
            assert_eq!(c.field_reduce_point(&y).subspace, se1.subspace);
        }
    }

    #[test]
    fn spread_partitions() {
        // 9 pairwise-disjoint planes of PG(5,2) covering all 63 points
        let c = ctx(2, 3, 2);
        let spread = c.desarguesian_spread();
        assert_eq!(spread.len(), 9);
        let mut seen = std::collections::HashSet::new();
        for el in &spread {
            for p in el.subspace.points() {
                assert!(seen.insert(p), "spread elements overlap");
            }
        }
        assert_eq!(seen.len(), 63);

        assert_eq!(ctx(3, 2, 2).desarguesian_spread().len(), 10);
        assert_eq!(ctx(2, 2, 3).desarguesian_spread().len(), 21);
    }

    #[test]
    fn b_of_spread_element_roundtrip() {
        let c = ctx(2, 3, 2);
        for p in ProjSubspace::full(c.big_field(), 2).points() {
            let se = c.field_reduce_point(&p);
            let back = c.b_operator(&se.subspace);
            assert_eq!(back, vec![p]);
        }
    }

    #[test]
    fn b_of_everything_is_everything() {
        let c = ctx(2, 2, 2);
        let all = c.b_operator(&ProjSubspace::full(c.small_field(), 4));
        assert_eq!(all.len(), 5); // PG(1,4)
    }

    #[test]
    fn line_not_in_element_gives_subline() {
        // a line of PG(2n-1, q) inside no spread element meets q+1 elements
        let c = ctx(2, 2, 2);
        let elements: Vec<ProjSubspace> = c
            .desarguesian_spread()
            .into_iter()
            .map(|e| e.subspace)
            .collect();
        for l in crate::projgeom::lines(c.small_field(), 4) {
            let inside = elements.iter().any(|e| e.contains(&l));
            let b = c.b_operator(&l);
            if inside {
                assert_eq!(b.len(), 1);
            } else {
                assert_eq!(b.len(), 3); // q+1
            }
        }
    }

    #[test]
    fn canonical_subline_linear_set() {
        let c = ctx(2, 3, 2);
        let big = c.big_field().clone();
        let u = c
            .linear_set_from_vectors(&[
                vec![big.one(), big.zero()],
                vec![big.zero(), big.one()],
            ])
            .unwrap();
        assert_eq!(u.rank(), 2);
        assert_eq!(u.points().len(), 3);
        assert!(u.weights().values().all(|&w| w == 1));
        assert_eq!(u.classify(), LinearSetClass::Subline);
        assert!(u.weight_identity_holds());
    }

    #[test]
    fn single_spread_element_is_one_fat_point() {
        let c = ctx(2, 3, 2);
        let x = ProjPoint::from_ints(c.big_field(), &[1, 3]);
        let se = c.field_reduce_point(&x);
        let ls = c.linear_set(se.subspace.basis()).unwrap();
        assert_eq!(ls.rank(), 3); // n
        assert_eq!(ls.points().len(), 1);
        assert_eq!(ls.weight(&x), 3);
        assert!(matches!(ls.classify(), LinearSetClass::Other { .. }));
    }

    #[test]
    fn rank_three_club() {
        // U = <u, alpha u, v> in GF(8)^2: a club of rank 3 with head <u>
        let c = ctx(2, 3, 2);
        let big = c.big_field().clone();
        let alpha = big.poly_generator();
        let u = vec![big.one(), big.zero()];
        let au = vec![alpha.clone(), big.zero()];
        let v = vec![big.zero(), big.one()];
        let ls = c.linear_set_from_vectors(&[u, au, v]).unwrap();
        assert_eq!(ls.rank(), 3);
        assert_eq!(ls.points().len(), 5); // q^{r-1} + 1
        let head = ProjPoint::from_ints(&big, &[1, 0]);
        assert_eq!(ls.weight(&head), 2);
        assert_eq!(ls.classify(), LinearSetClass::Club { head });
        assert!(ls.weight_identity_holds());
    }

    #[test]
    fn scattered_classification() {
        // a rank-3 scattered set on PG(1,8): q^2+q+1 = 7 points of weight 1
        let c = ctx(2, 3, 2);
        let big = c.big_field().clone();
        let alpha = big.poly_generator();
        // <(1,0), (0,1), (alpha, alpha^2)> happens to be scattered; verify
        let ls = c
            .linear_set_from_vectors(&[
                vec![big.one(), big.zero()],
                vec![big.zero(), big.one()],
                vec![alpha.clone(), alpha.pow(2)],
            ])
            .unwrap();
        if ls.points().len() == 7 {
            assert_eq!(ls.classify(), LinearSetClass::Scattered);
        }
        assert!(ls.weight_identity_holds());
    }

    #[test]
    fn zero_subspace_rejected() {
        let c = ctx(2, 2, 2);
        let z = Mat::zeros(c.small_field(), 0, 4);
        assert_eq!(c.linear_set(&z).unwrap_err(), FieldRedError::ZeroSubspace);
    }

    #[test]
    fn expand_contract_roundtrip() {
        let c = ctx(3, 2, 2);
        let big = c.big_field().clone();
        for a in big.elements() {
            for b in [big.zero(), big.one(), big.elem(5)] {
                let v = vec![a.clone(), b.clone()];
                assert_eq!(c.contract_vec(&c.expand_vec(&v)), v);
            }
        }
    }
}
