//! Symbolic `Scal_{f,ν}` against finite differences on a Calabi-ansatz metric.

use crtwist::geom::{probe_points, weighted_scal, SeparableMetric, WeightFunction};
use crtwist::oracle::{weighted_scal_at, DEFAULT_STEP};
use crtwist::poly::{int, RatFn, Polynomial};
use crtwist::geom::CalabiBundle1D;

fn main() {
    let metric = SeparableMetric::CalabiBundle1D(CalabiBundle1D {
        base_scal: int(2),
        base_dim: 1,
        a0: int(3),
        a1: int(1),
        a: RatFn::from_poly(Polynomial::from_ints("z", &[2, 0, -2])),
        interval: vec![int(-1), int(1)],
    });
    let f = WeightFunction::parse_affine("3 + z", 1).unwrap();
    let nu = int(4);
    let e = weighted_scal(&metric, &f, &nu).unwrap();
    println!("{:>8} {:>22} {:>22} {:>10}", "z", "symbolic", "finite diff", "rel err");
    for x in probe_points(&metric, 8) {
        let s = e.eval_f64(&x);
        let n = weighted_scal_at(&metric, &f, 4.0, &x, DEFAULT_STEP).unwrap();
        println!("{:>8.4} {s:>22.15} {n:>22.15} {:>10.2e}", x[0], (s - n).abs() / s.abs().max(1.0));
    }
}
