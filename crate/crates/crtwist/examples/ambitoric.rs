//! Splitting ambitoric data `A = S + P`, `B = S − P` with `S = p₁ p₂` (roots separating
//! harmonically), `deg P ≤ 4`,
//! and the conformal scalar curvature formula for each transvectant variant.

use crtwist::extremal::{ambitoric_conformal_scal, ambitoric_decompose, AmbitoricDecomposition};
use crtwist::poly::{harmonic_pairing, int, quadratic_pairing, PaperQuadratic, Polynomial};

fn main() {
    let x = |c: &[i64]| Polynomial::from_ints("x", c);
    let s = &x(&[1, 0, 1]) * &x(&[-1, 0, 1]);
    let p = x(&[1, 2, 0, -1]);
    let d = ambitoric_decompose(&(&s + &p), &(&s - &p)).unwrap();
    println!("{}", serde_json::to_string(&d).unwrap());

    if let AmbitoricDecomposition::Exact { p1, p2, p } = d {
        println!("harmonic <p1, p2> = {}, printed form = {}", harmonic_pairing(&p1, &p2), quadratic_pairing(&p1, &p2));
        let q = PaperQuadratic::new(int(3), int(0), int(1));
        for c in ambitoric_conformal_scal(&p1, &q, &p) {
            println!(
                "{:?}: w = {}  -f_w/f_q at (0.5, -0.3) = {:?}, scal = {:?}",
                c.variant,
                c.w,
                c.value(&q, 0.5, -0.3),
                c.scal(&q, 0.5, -0.3)
            );
        }
    }

    let quartic = x(&[-2, 0, 0, 0, 1]);
    println!("{:?}", ambitoric_decompose(&quartic, &quartic).unwrap());
}
