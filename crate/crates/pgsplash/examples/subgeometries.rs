//! q-subgeometries of PG(r-1, q^n): canonical copies, frames, hyperplane
//! extensions and the tangent/external classification of lines.
//!
//! Run with: cargo run --example subgeometries

use pgsplash::gf::{Field, SubfieldEmbedding};
use pgsplash::projgeom::{lines, ProjPoint};
use pgsplash::subgeo::{LinePosition, Subgeometry};

fn main() {
    let f2 = Field::new(2, 1, None).unwrap();
    let f8 = Field::new(2, 3, None).unwrap();
    let e = SubfieldEmbedding::new(&f2, &f8).unwrap();

    // the canonical Fano subplane of PG(2,8)
    let fano = Subgeometry::canonical(&e, 3);
    println!("Fano subplane of PG(2,8): {} points", fano.points().len());
    for p in fano.points() {
        print!("{p} ");
    }
    println!();

    // its 7 sub-lines, each extending to an ambient line
    println!("\nsub-hyperplanes (sub-lines) and extensions:");
    for h in fano.sub_hyperplanes().iter().take(3) {
        println!("  {:?} extends to {}", h.points(), h.extension());
    }
    println!("  ... {} in total", fano.sub_hyperplanes().len());

    // a subgeometry through a frame
    let frame = vec![
        ProjPoint::from_ints(&f8, &[1, 0, 0]),
        ProjPoint::new(&f8, &[f8.zero(), f8.elem(3), f8.zero()]),
        ProjPoint::from_ints(&f8, &[0, 0, 1]),
        ProjPoint::new(&f8, &[f8.one(), f8.elem(5), f8.elem(2)]),
    ];
    let s = Subgeometry::from_frame(&e, &frame).unwrap();
    println!("\nsubgeometry through a frame: {} points, equals Fano: {}", s.points().len(), s == fano);

    // classify every line of the plane
    let mut tangent = 0;
    let mut external = 0;
    let mut excluded = 0;
    for l in lines(&f8, 3) {
        match fano.line_position(&l) {
            Ok(LinePosition::Tangent(c)) => {
                if tangent == 0 {
                    println!("\nfirst tangent line {l} touches at {c}");
                }
                tangent += 1;
            }
            Ok(LinePosition::External) => external += 1,
            Ok(LinePosition::Secant(_)) => unreachable!("secant lines are excluded at r = 3"),
            Err(_) => excluded += 1,
        }
    }
    println!("of 73 lines: {tangent} tangent, {external} external, {excluded} extended sub-lines (no splash)");
}
