//! The subline characterization of clubs: closure under sublines through
//! the head pins down tangent splashes for q > 2, while at q = 2 the
//! condition is vacuous and the search for non-linear sets gives different
//! verdicts at n = 3 and n = 4.
//!
//! Run with: cargo run --example club_characterization

use pgsplash::gf::{Field, SubfieldEmbedding};
use pgsplash::projgeom::ProjPoint;
use pgsplash::splash::{
    closure_closed_sets, closure_test, enumerate_tangent_splashes, find_nonlinear_club_witness,
    subline_through,
};

fn emb(q: u64, k: usize, n: usize) -> SubfieldEmbedding {
    let small = Field::new(q, k, None).unwrap();
    let big = Field::new(q, k * n, None).unwrap();
    SubfieldEmbedding::new(&small, &big).unwrap()
}

fn main() {
    // q = 3: sublines through three points are 4-point sets
    let e = emb(3, 1, 3);
    let f27 = e.target().clone();
    let t = ProjPoint::from_ints(&f27, &[1, 0]);
    let p = ProjPoint::from_ints(&f27, &[0, 1]);
    let q_pt = ProjPoint::from_ints(&f27, &[1, 1]);
    let sl = subline_through(&e, &t, &p, &q_pt).unwrap();
    println!("subl_3({t}, {p}, {q_pt}) = {:?}", sl.points());

    // every tangent splash is closed under sublines through its centre
    let splashes = enumerate_tangent_splashes(&e, 3, Some(&t)).unwrap();
    println!("\n{} tangent splashes with centre {t} on PG(1,27)", splashes.len());
    let all_closed = splashes.iter().all(|s| {
        let a: Vec<ProjPoint> = s.points().iter().filter(|x| **x != t).cloned().collect();
        closure_test(&e, &t, &a)
    });
    println!("all closed under sublines through the centre: {all_closed}");

    // and conversely: the subline-closed 10-sets are exactly those splashes
    let closed = closure_closed_sets(&e, &t, 10);
    println!("subline-closed 10-sets containing {t}: {}", closed.len());
    let club_sets: std::collections::BTreeSet<Vec<ProjPoint>> =
        splashes.iter().map(|s| s.points().to_vec()).collect();
    println!(
        "every closed set is a tangent splash: {}",
        closed.iter().all(|s| club_sets.contains(s))
    );

    // q = 2: the closure condition is vacuous (sublines have 3 points), and
    // whether non-linear sets of size 2^{r-1}+1 exist depends on n
    let e8 = emb(2, 1, 3);
    println!(
        "\nPG(1,8): non-linear 5-set exists: {}",
        find_nonlinear_club_witness(&e8, 3).is_some()
    );
    println!("   (all C(9,5) = 126 subsets are clubs there: a coincidence of counts)");
    let e16 = emb(2, 1, 4);
    let (t2, a2) = find_nonlinear_club_witness(&e16, 3).unwrap();
    println!("PG(1,16): non-linear 5-set exists: true");
    println!("   witness: {t2} with {a2:?}");
    println!("   closure holds vacuously: {}", closure_test(&e16, &t2, &a2));
}
