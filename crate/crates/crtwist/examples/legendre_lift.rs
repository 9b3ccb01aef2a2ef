//! Symplectic potential of `dz²/A + A dt²`, its differential lift and the envelope identity.

use crtwist::legendre::{differential_lift, projective_hessian, PotentialFunction};
use crtwist::poly::{int, Polynomial};

fn main() {
    let u = PotentialFunction::profile(Polynomial::from_ints("z", &[1, 0, -1]), int(-1), int(1)).unwrap();
    for z in [-0.8, -0.3, 0.0, 0.5, 0.9] {
        let l = differential_lift(&u, &[z]).unwrap();
        let v = u.value(&[z]).unwrap();
        let envelope = l[0] + z * l[1] - v;
        let h = projective_hessian(&u, &[z]).unwrap()[(0, 0)];
        println!("z = {z:5.2}  u = {v:.12}  L(u) = ({:.12}, {:.12})  <(1,z),L>-u = {envelope:.1e}  hess = {h:.12}", l[0], l[1]);
    }
}
