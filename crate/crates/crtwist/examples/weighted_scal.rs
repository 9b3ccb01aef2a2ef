//! `Scal_{f,ν}` of the round sphere for the weight `f = z + 2`, and whether it is a Killing potential.

use crtwist::geom::{is_affine_in_momenta, scal, weighted_scal, SeparableMetric, WeightFunction};
use crtwist::poly::int;

fn main() {
    let sphere = SeparableMetric::sphere();
    let names = sphere.var_names();
    println!("Scal = {}", scal(&sphere).unwrap().format_with(&names));

    let f = WeightFunction::parse_affine("z + 2", 1).unwrap();
    for nu in [2, 3, 4] {
        let e = weighted_scal(&sphere, &f, &int(nu)).unwrap();
        let v = is_affine_in_momenta(&e, &sphere);
        println!("nu = {nu}: Scal_f = {}  ({v:?})", e.format_with(&names));
    }
}
