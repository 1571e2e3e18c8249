//! Exact arithmetic in cyclotomic fields.

use charforge::cyclo::{Cyclotomic, Rational};

fn main() {
    let z3 = Cyclotomic::root(3, 1);
    let z4 = Cyclotomic::root(4, 1);

    // 1 + ζ3 + ζ3² = 0, kept in the reduced power basis.
    let sum = Cyclotomic::one() + z3.clone() + z3.clone() * z3.clone();
    println!("1 + z3 + z3^2 = {sum}");

    // Mixed conductors are lifted to the lcm: ζ3·ζ4 is a primitive 12th root.
    let z12 = z3.clone() * z4.clone();
    println!("z3 * z4 = {z12} (conductor {})", z12.conductor());

    // Rational results collapse to conductor 1.
    let i2 = z4.clone() * z4.clone();
    println!("i^2 = {i2}, rational: {}", i2.is_rational());

    // Complex conjugation and |x|².
    let x = Cyclotomic::from_integer(2) + z3.clone();
    println!("x = {x}, conj(x) = {}, |x|^2 = {}", x.conjugate(), x.norm_squared());
    let (re, im) = x.to_complex();
    println!("x ~ {re:.6} + {im:.6}i");

    // Scaling by a rational and parsing back the textual form.
    let half = x.scale(&Rational::new(1, 2));
    let text = half.to_string();
    let back: Cyclotomic = text.parse().expect("round trip");
    println!("x/2 = {text}, parses back equal: {}", back == half);

    // Reduction mod a prime q ≡ 1 (mod 12) with a chosen primitive 12th root.
    let q = 13;
    let root = (2..q).find(|&r| (1..12).all(|k| pow(r, k, q) != 1) && pow(r, 12, q) == 1).unwrap();
    println!("z12 mod {q} at root {root}: {:?}", z12.eval_mod(q, 12, root));
}

fn pow(b: u64, e: u64, m: u64) -> u64 {
    (0..e).fold(1, |acc, _| acc * b % m)
}
