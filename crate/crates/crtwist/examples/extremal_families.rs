//! Members of the explicit `(f, ν)`-extremal families, each checked by `verify`.

use crtwist::extremal::{generate_family, verify, FamilyKind, FamilyParameters, SolutionFamily};
use crtwist::geom::WeightFunction;
use crtwist::poly::{int, rat, Polynomial};

fn x(c: &[i64]) -> Polynomial {
    Polynomial::from_ints("x", c)
}

fn show(kind: FamilyKind, m: usize, parameters: FamilyParameters) {
    let fam = SolutionFamily { kind, m, parameters: parameters.clone() };
    let metric = generate_family(kind, m, parameters).unwrap();
    let v = verify(&metric, &fam.designated_weight(), &fam.designated_nu()).unwrap();
    println!("{kind:?} (m = {m}): {}  c = {:?}", if v.is_extremal() { "extremal" } else { "not extremal" }, v.coeffs().unwrap_or(&[]).iter().map(|c| c.to_string()).collect::<Vec<_>>());
}

fn main() {
    show(FamilyKind::Cubic1D, 1, FamilyParameters::common(Polynomial::from_ints("z", &[1, 1, -1, -1])));
    show(FamilyKind::OrthotoricQ1, 2, FamilyParameters::common(x(&[1, 0, 2, 0, 1])).with_constants(vec![int(1), int(-1)], vec![int(2), int(3)]));
    show(FamilyKind::OrthotoricQXm, 3, FamilyParameters::common(x(&[0, 0, 0, 0, 0, 1])).with_constants(vec![int(1), int(2), int(3)], vec![]));

    let mut bf = FamilyParameters::common(x(&[1, 0, 0, 0, -1]));
    bf.q = Some(WeightFunction::polarized(vec![int(3), rat(1, 3), rat(-1, 5)]));
    show(FamilyKind::BochnerFlatCommonP, 2, bf);

    let mut pq = FamilyParameters::common(Polynomial::new("y", vec![int(3), int(-1), int(0), int(0), rat(1, 7), rat(-1, 9)]));
    pq.base = vec![x(&[1, 0, -1]), x(&[2, 1, -2])];
    pq.b = vec![int(3), int(1)];
    show(FamilyKind::ProductQuintic, 3, pq);
}
