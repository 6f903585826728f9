//! Field reduction PG(1, q^n) -> PG(2n-1, q): the Desarguesian spread, the
//! B(.) operator, and linear sets with their rank, weights and
//! classification.
//!
//! Run with: cargo run --example field_reduction

use pgsplash::fieldred::ReductionContext;
use pgsplash::gf::{Field, SubfieldEmbedding};
use pgsplash::projgeom::ProjPoint;

fn main() {
    let f2 = Field::new(2, 1, None).unwrap();
    let f8 = Field::new(2, 3, None).unwrap();
    let e = SubfieldEmbedding::new(&f2, &f8).unwrap();
    let ctx = ReductionContext::new(&e, 2);

    // the spread: 9 planes partitioning the 63 points of PG(5,2)
    let spread = ctx.desarguesian_spread();
    println!("D_{{2,3,2}}: {} elements of dimension {}", spread.len(), spread[0].subspace.dim());
    let covered: usize = spread.iter().map(|el| el.subspace.points().len()).sum();
    println!("covering {covered} points of PG(5,2)");

    // B inverts field reduction on points
    let x = ProjPoint::new(&f8, &[f8.one(), f8.elem(6)]);
    let se = ctx.field_reduce_point(&x);
    println!("\nF({x}) = {}", se.subspace);
    println!("B(F({x})) = {:?}", ctx.b_operator(&se.subspace));

    // the canonical subline as a rank-2 linear set
    let subline = ctx
        .linear_set_from_vectors(&[
            vec![f8.one(), f8.zero()],
            vec![f8.zero(), f8.one()],
        ])
        .unwrap();
    println!("\ncanonical subline: {subline:?} -> {:?}", subline.classify());

    // a rank-3 club: U = <u, alpha u, v>
    let alpha = f8.poly_generator();
    let club = ctx
        .linear_set_from_vectors(&[
            vec![f8.one(), f8.zero()],
            vec![alpha.clone(), f8.zero()],
            vec![f8.zero(), f8.one()],
        ])
        .unwrap();
    println!("\nrank-3 club: {club:?}");
    for (p, w) in club.weights() {
        println!("  weight of {p}: {w}");
    }
    println!("classification: {:?}", club.classify());
    println!("weight identity holds: {}", club.weight_identity_holds());
    println!("as JSON: {}", club.to_json());
}
