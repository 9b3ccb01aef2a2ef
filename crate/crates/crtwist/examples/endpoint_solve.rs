//! Profiles from endpoint data: the cubic with `A(±1) = 0`, `A′(±1) = ∓2`, and the
//! weighted product profile with its positivity verdict.

use crtwist::extremal::{solve_endpoint_1d, solve_product_quintic, EndpointData};
use crtwist::poly::int;

fn main() {
    let cubic = solve_endpoint_1d(&EndpointData::standard(), 3).unwrap();
    println!("degree 3: {}", cubic.unique().unwrap());

    let quartic = solve_endpoint_1d(&EndpointData::standard(), 4).unwrap();
    println!("degree 4: {} + t·({})", quartic.particular, quartic.kernel[0]);

    let data = EndpointData::weighted(1, 1, 1);
    for b0 in [int(2), int(5), int(1000)] {
        let s = solve_product_quintic(2, &int(4), &b0, &data).unwrap();
        println!("m = 2, s_B = 4, b0 = {b0}: A = {}  {:?}", s.a, s.positivity);
    }
}
