//! Finite field towers GF(q) < GF(q^n): construction, Frobenius maps,
//! minimal polynomials, subfield embeddings and independence tests.
//!
//! Run with: cargo run --example field_towers

use pgsplash::gf::{independent_over_subfield, Field, SubfieldEmbedding};

fn main() {
    // GF(8) with its default modulus (the smallest irreducible cubic)
    let f8 = Field::new(2, 3, None).unwrap();
    println!("{f8:?}");
    println!("subfield orders of GF(8): {:?}", f8.subfield_orders());

    // explicit modulus x^3 + x + 1, and a reducible one rejected
    let same = Field::new(2, 3, Some(&[1, 1, 0, 1])).unwrap();
    println!("interned: same field object = {}", f8 == same);
    println!(
        "x^3 + 1 rejected: {}",
        Field::new(2, 3, Some(&[1, 0, 0, 1])).unwrap_err()
    );

    // arithmetic and Frobenius
    let a = f8.poly_generator(); // the class of x
    println!("\nalpha = {a}, alpha^2 = {}, alpha^{{-1}} = {}", a.pow(2), a.inverse().unwrap());
    let frob = a.frobenius(2).unwrap();
    println!("alpha^2 via Frobenius: {frob}");
    let mut back = a.clone();
    for _ in 0..3 {
        back = back.frobenius(2).unwrap();
    }
    println!("three applications return alpha: {}", back == a);

    // minimal polynomials over GF(2)
    for idx in [0u32, 1, 2, 3] {
        let z = f8.elem(idx);
        println!("min poly of {z} over GF(2): {}", z.minimal_polynomial(2).unwrap());
    }

    // GF(2)-independence inside GF(8)
    let items = [f8.one(), a.clone(), a.pow(2)];
    println!(
        "\n1, alpha, alpha^2 independent over GF(2): {}",
        independent_over_subfield(&items, 2).unwrap()
    );
    let dep = [f8.one(), a.clone(), &f8.one() + &a];
    println!(
        "1, alpha, 1+alpha independent over GF(2): {}",
        independent_over_subfield(&dep, 2).unwrap()
    );

    // a non-prime tower: GF(4) inside GF(16)
    let f4 = Field::new(2, 2, None).unwrap();
    let f16 = Field::new(2, 4, None).unwrap();
    let e = SubfieldEmbedding::new(&f4, &f16).unwrap();
    println!("\nGF(4) -> GF(16), extension degree {}", e.extension_degree());
    let zeta = f4.elem(2);
    let img = e.embed(&zeta);
    println!("zeta = {zeta} embeds as {img}; fixed by x -> x^4: {}", img.pow(4) == img);
    let y = f16.elem(13);
    let coords = e.coords(&y);
    println!(
        "coords of {y} over the basis 1, alpha: ({}, {}) -> lifts back: {}",
        coords[0],
        coords[1],
        e.lift(&coords) == y
    );
}
