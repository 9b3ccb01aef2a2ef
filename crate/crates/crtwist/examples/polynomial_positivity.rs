//! Exact positivity on an interval and root isolation with Sturm sequences.

use crtwist::poly::{int, isolate_roots, positive_on_open_interval, rat, Polynomial, Positivity};

fn main() {
    let p = Polynomial::from_ints("z", &[1, 0, -1]);
    println!("{p} on (-1, 1): {:?}", positive_on_open_interval(&p, &int(-1), &int(1)).unwrap());

    // (1 - z²)(z + 1/2): a sign change at z = -1/2
    let q = &p * &Polynomial::new("z", vec![rat(1, 2), int(1)]);
    match positive_on_open_interval(&q, &int(-1), &int(1)).unwrap() {
        Positivity::HasRootAt(roots) => {
            for r in roots {
                println!("{q} vanishes in [{}, {}]", r.lo, r.hi);
            }
        }
        v => println!("{v:?}"),
    }

    let r = Polynomial::from_ints("z", &[-2, 0, 1]);
    for iv in isolate_roots(&r, &int(-2), &int(2), &rat(1, 1_000_000)) {
        println!("root of {r} in [{}, {}]", iv.lo, iv.hi);
    }
}
