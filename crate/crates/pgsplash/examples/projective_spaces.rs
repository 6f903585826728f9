//! Points, subspaces and collineations of PG(m, q): spans, meets, duality
//! and canonical forms.
//!
//! Run with: cargo run --example projective_spaces

use pgsplash::gf::Field;
use pgsplash::mat::Mat;
use pgsplash::projgeom::{
    dual, hyperplanes, lines, meet, span_points, Collineation, ProjPoint, ProjSubspace,
};

fn main() {
    let f8 = Field::new(2, 3, None).unwrap();

    // PG(2,8): 73 points, 73 lines
    let plane = ProjSubspace::full(&f8, 3);
    println!("PG(2,8): {} points, {} lines", plane.points().len(), lines(&f8, 3).len());

    // span and meet
    let p = ProjPoint::from_ints(&f8, &[1, 0, 0]);
    let q = ProjPoint::from_ints(&f8, &[0, 1, 0]);
    let line = span_points(&[p.clone(), q.clone()]).unwrap();
    println!("\nline through {p} and {q}: {line} (dim {})", line.dim());
    println!("its {} points: first three {:?}", line.point_count(), &line.points()[..3]);

    let other = span_points(&[
        ProjPoint::from_ints(&f8, &[1, 0, 0]),
        ProjPoint::from_ints(&f8, &[0, 0, 1]),
    ])
    .unwrap();
    let x = meet(&line, &other).unwrap();
    println!("meet with {other}: {x}");

    // duality: hyperplane <-> point, involution
    let d = dual(&line);
    println!("\ndual of the line: {d} (a point), double dual recovers it: {}", dual(&d) == line);
    println!("hyperplanes of PG(2,8): {}", hyperplanes(&f8, 3).len());

    // collineations: projectivity plus Frobenius
    let m = Mat::from_raw(&f8, 3, 3, vec![1, 2, 0, 0, 1, 4, 3, 0, 1]);
    let c = Collineation::new(m, 1); // x -> x^2 then the matrix
    let img = c.apply_subspace(&line).unwrap();
    println!("\nimage of the line under a semilinear collineation: {img}");
    let back = c.inverse().apply_subspace(&img).unwrap();
    println!("inverse recovers it: {}", back == line);

    // incidence is preserved
    let pt = line.points()[4].clone();
    println!(
        "incidence preserved at {pt}: {}",
        img.contains_point(&c.apply_point(&pt).unwrap())
    );
}
