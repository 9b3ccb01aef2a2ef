//! Deciding existence of extremal Sasaki structures on ruled-surface contact manifolds.

use crtwist::extremal::verify;
use crtwist::poly::{int, rat};
use crtwist::ruled::{decide_existence, join_correspondence_check, join_parameters, RuledSurfaceSpec, SasakiJoinSpec};

fn main() {
    let spec = RuledSurfaceSpec::new(0, 2, int(3), int(2)).unwrap();
    let v = decide_existence(&spec).unwrap();
    println!("genus 0, ell 2, a 3, b 2: P = {}  {:?}", v.polynomial, v.status);
    let metric = spec.calabi_metric().unwrap();
    println!("  Calabi metric with A = P/(z+a) is (f_b, 4)-extremal: {}", verify(&metric, &spec.weight(), &int(4)).unwrap().is_extremal());

    let unstable = RuledSurfaceSpec::new(2, 1, rat(101, 100), rat(551427, 478763)).unwrap();
    println!("genus 2 near the critical curve: {:?}", decide_existence(&unstable).unwrap().status);

    let j = SasakiJoinSpec { k: 1, n: 3, ell: 2 };
    let params = join_parameters(&j).unwrap();
    println!("join (k, n, ell) = (1, 3, 2): w- = {}, w+ = {}, a = {}", params.w_minus, params.w_plus, params.a);
    let spec = RuledSurfaceSpec::new(0, 2, params.a.clone(), int(5)).unwrap();
    let report = join_correspondence_check(&spec, &j).unwrap();
    println!("  twisted profile {}", report.a_twisted);
    for c in report.checks {
        println!("  {} = {} (expected {})", c.name, c.actual, c.expected);
    }
}
