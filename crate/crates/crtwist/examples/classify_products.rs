//! Which twisted products are extremal for their own unit weight.

use crtwist::extremal::{classify_twisted_product, twisted_product_is_extremal};
use crtwist::geom::{SeparableMetric, WeightFunction};
use crtwist::poly::{int, Polynomial};

fn tp(a: Vec<Polynomial>, b: &[i64]) -> crtwist::geom::TwistedProduct {
    let w = WeightFunction::product(int(b[0]), b[1..].iter().map(|&v| int(v)).collect());
    let SeparableMetric::TwistedProduct(t) = SeparableMetric::twisted_product(a, w) else { unreachable!() };
    t
}

fn main() {
    let x = |c: &[i64]| Polynomial::from_ints("x", c);
    let cases = [
        ("cubic surfaces, untwisted", tp(vec![x(&[1, 2, 0, -1]); 3], &[1, 0, 0, 0])),
        ("affine factors along the twist", tp(vec![x(&[1, 1]), x(&[2, -1]), x(&[1, 0, -1]), x(&[3, 1, 1])], &[1, 1, 1, 0, 0])),
        ("curved factor along the twist", tp(vec![x(&[1, 1]), x(&[2, -1]), x(&[1, 0, -1])], &[1, 1, 1, 0])),
    ];
    for (name, t) in cases {
        println!("{name}: {:?}, extremal = {}", classify_twisted_product(&t), twisted_product_is_extremal(&t).unwrap());
    }
}
