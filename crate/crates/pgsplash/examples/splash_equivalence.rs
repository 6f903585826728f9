//! Projective equivalence of tangent splashes: witness search on the line,
//! the lift to an ambient collineation, and orbit censuses under PGL and
//! PGammaL.
//!
//! Run with: cargo run --example splash_equivalence

use pgsplash::equiv::{
    enumerate_pgammal2, enumerate_pgl2, extend_line_collineation, lift_line_equivalence,
    orbit_census, random_pgl2, splash_equivalence, LineGroup,
};
use pgsplash::gf::{prime_power, Field, SubfieldEmbedding};
use pgsplash::projgeom::{lines, ProjPoint};
use pgsplash::splash::{compute_splash, enumerate_tangent_splashes};
use pgsplash::subgeo::{LinePosition, Subgeometry};
use rand::SeedableRng;
use std::collections::BTreeSet;

fn emb(q: u64, n: usize) -> SubfieldEmbedding {
    let (p, k) = prime_power(q).unwrap();
    let small = Field::new(p, k, None).unwrap();
    let big = Field::new(p, k * n, None).unwrap();
    SubfieldEmbedding::new(&small, &big).unwrap()
}

fn main() {
    let e = emb(2, 3);
    let pi0 = Subgeometry::canonical(&e, 3);
    let line = lines(e.target(), 3)
        .into_iter()
        .find(|l| matches!(pi0.line_position(l), Ok(LinePosition::Tangent(_))))
        .unwrap();
    let s0 = compute_splash(&pi0, &line).unwrap().on_abstract_line();
    println!("fixed tangent splash on PG(1,8): {:?}", s0.points());

    // move it by a random projectivity and recover a witness
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
    let g = random_pgl2(e.target(), &mut rng);
    let g_bar = extend_line_collineation(&g, &line);
    let pi1 = pi0.apply(&g_bar);
    let s1 = compute_splash(&pi1, &line).unwrap().on_abstract_line();
    let theta = splash_equivalence(&s0, &s1, LineGroup::Pgl, None)
        .unwrap()
        .expect("equivalent by construction");
    println!("\nwitness theta found in PGL(2,8); maps S0 onto S1");

    // lift to an ambient collineation stabilizing the line
    let tau = lift_line_equivalence(&theta, &pi0, &pi1, &line).unwrap();
    println!(
        "lifted tau: stabilizes the line: {}, maps pi0 onto pi1: {}",
        tau.apply_subspace(&line).unwrap() == line,
        pi0.apply(&tau) == pi1
    );

    // orbit census of all rank-3 tangent splashes
    println!("\norbit censuses of rank-3 tangent splashes:");
    for (q, n) in [(2u64, 3usize), (2, 4)] {
        let e = emb(q, n);
        let sets: Vec<Vec<ProjPoint>> = enumerate_tangent_splashes(&e, 3, None)
            .unwrap()
            .iter()
            .map(|s| s.points().to_vec())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let pgl = enumerate_pgl2(e.target());
        let pgammal = enumerate_pgammal2(e.target());
        let census_pgl: Vec<usize> = orbit_census(&sets, &pgl).into_iter().map(|(_, k)| k).collect();
        let census_pgammal: Vec<usize> =
            orbit_census(&sets, &pgammal).into_iter().map(|(_, k)| k).collect();
        println!(
            "  PG(1,{}): {} distinct sets; PGL orbits {:?}; PGammaL orbits {:?}",
            q.pow(n as u32),
            sets.len(),
            census_pgl,
            census_pgammal
        );
    }
    println!("\n(multiple orbits at n = 4: projectively nonequivalent clubs exist there)");
}
