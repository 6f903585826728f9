//! Splashes of a subgeometry on a line: hyperplane counts, the defining
//! linear subspace, and the weight correspondence.
//!
//! Run with: cargo run --example splashes

use pgsplash::fieldred::theta;
use pgsplash::gf::{Field, SubfieldEmbedding};
use pgsplash::projgeom::lines;
use pgsplash::splash::compute_splash;
use pgsplash::subgeo::{LinePosition, Subgeometry};

fn main() {
    let f3 = Field::new(3, 1, None).unwrap();
    let f27 = Field::new(3, 3, None).unwrap();
    let e = SubfieldEmbedding::new(&f3, &f27).unwrap();
    let pi0 = Subgeometry::canonical(&e, 3);
    println!("subgeometry PG(2,3) inside PG(2,27): {} points", pi0.points().len());

    // pick one tangent and one external line
    let mut tangent = None;
    let mut external = None;
    for l in lines(&f27, 3) {
        match pi0.line_position(&l) {
            Ok(LinePosition::Tangent(_)) if tangent.is_none() => tangent = Some(l),
            Ok(LinePosition::External) if external.is_none() => external = Some(l),
            _ => {}
        }
        if tangent.is_some() && external.is_some() {
            break;
        }
    }

    let sp = compute_splash(&pi0, &tangent.unwrap()).unwrap();
    println!("\ntangent splash: {} points (1 + q^2), centre {}", sp.points().len(), sp.centre().unwrap());
    for (p, c) in sp.counts() {
        println!("  {p}: {c} hyperplanes");
    }
    // the splash is a linear set: B(U) = S with theta(weight) = count
    let u = sp.linear_subspace();
    let ls = sp.linear_set();
    println!("defining subspace U has rank {}", u.nrows());
    println!("classification: {:?}", ls.classify());
    for (p, w) in ls.weights() {
        println!("  {p}: weight {w} -> theta = {} hyperplanes", theta(3, *w));
    }

    let sp = compute_splash(&pi0, &external.unwrap()).unwrap();
    println!("\nexternal splash: {} points, every count 1: {}",
        sp.points().len(),
        sp.counts().values().all(|&c| c == 1));
    println!("scattered: {:?}", sp.linear_set().classify());
    println!("\nsplash record: {}", sp.to_json());
}
