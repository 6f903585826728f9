//! Exact counting of tangent splashes against brute-force enumeration, and
//! the uniqueness of the splash through an admissible point tuple.
//!
//! Run with: cargo run --example tangent_splash_census

use pgsplash::gf::{prime_power, Field, SubfieldEmbedding};
use pgsplash::projgeom::ProjPoint;
use pgsplash::splash::{
    count_tangent_splashes_per_centre, count_tangent_splashes_total, enumerate_tangent_splashes,
    gaussian_binomial, subline_through, tangent_splash_through, tuples_per_splash,
    uniqueness_tuple_count,
};

fn emb(q: u64, n: usize) -> SubfieldEmbedding {
    let (p, k) = prime_power(q).unwrap();
    let small = Field::new(p, k, None).unwrap();
    let big = Field::new(p, k * n, None).unwrap();
    SubfieldEmbedding::new(&small, &big).unwrap()
}

fn main() {
    for (q, n, r) in [(2u64, 3usize, 3usize), (3, 3, 3), (2, 4, 3)] {
        let e = emb(q, n);
        let per = count_tangent_splashes_per_centre(q, n, r).unwrap();
        let total = count_tangent_splashes_total(q, n, r).unwrap();
        println!("(q,n,r) = ({q},{n},{r})");
        println!("  subspace universe: {} rank-{r} subspaces of GF({q})^{}", gaussian_binomial(q, 2 * n, r), 2 * n);
        let centre = ProjPoint::from_ints(e.target(), &[1, 0]);
        let found_per = enumerate_tangent_splashes(&e, r, Some(&centre)).unwrap().len();
        let found_total = enumerate_tangent_splashes(&e, r, None).unwrap().len();
        println!("  per centre: formula {per}, enumeration {found_per}");
        println!("  total:      formula {total}, enumeration {found_total}");
        let k = uniqueness_tuple_count(q, n, r).unwrap();
        println!(
            "  proof identity: K = {k} admissible tuples = N * {}",
            tuples_per_splash(q, r)
        );
    }

    // uniqueness through a tuple: centre + three points in general position
    let e = emb(2, 3);
    let f8 = e.target().clone();
    let t = ProjPoint::from_ints(&f8, &[1, 0]);
    let u1 = ProjPoint::from_ints(&f8, &[0, 1]);
    let u2 = ProjPoint::from_ints(&f8, &[1, 1]);
    let alpha = f8.poly_generator();
    let u3 = ProjPoint::new(&f8, &[f8.one(), alpha]);
    println!("\nsubl(T,U1,U2) = {:?}", subline_through(&e, &t, &u1, &u2).unwrap().points());
    let sp = tangent_splash_through(&e, &t, &[u1, u2, u3]).unwrap();
    println!("unique tangent splash through T and the three points: {:?}", sp.points());
    println!("centre: {}", sp.centre().unwrap());
}
