mod common;

use common::{random_state, rng};
use ncprob::moments::random_scalar;
use ncprob::prelie::{
    bracket, magnus, magnus_inverse_check, magnus_iterated, magnus_report, normalize, prelie_product,
    star_product, FunctionalMonomial, InfinitesimalFunctional,
};
use ncprob::cumulants::{moments_to_cumulants, CumulantKind};
use ncprob::{Alphabet, LinComb, Model, MomentFunctional};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

const D: usize = 5;

fn random_functional(r: &mut ChaCha8Rng) -> InfinitesimalFunctional {
    let mut values = Vec::new();
    for u in Alphabet::letters(2).words_up_to(3).into_iter().skip(1) {
        if r.random_bool(0.4) {
            values.push((u, random_scalar(r)));
        }
    }
    InfinitesimalFunctional::from_values(2, D, values).unwrap()
}

fn associator(a: &InfinitesimalFunctional, b: &InfinitesimalFunctional, c: &InfinitesimalFunctional) -> InfinitesimalFunctional {
    let left = prelie_product(&prelie_product(a, b).unwrap(), c).unwrap();
    let right = prelie_product(a, &prelie_product(b, c).unwrap()).unwrap();
    &left - &right
}

#[test]
fn prelie_identity() {
    let mut r = rng(11);
    for _ in 0..50 {
        let (a, b, c) = (random_functional(&mut r), random_functional(&mut r), random_functional(&mut r));
        assert_eq!(associator(&a, &b, &c), associator(&a, &c, &b));
    }
}

#[test]
fn jacobi_identity() {
    let mut r = rng(12);
    for _ in 0..30 {
        let (a, b, c) = (random_functional(&mut r), random_functional(&mut r), random_functional(&mut r));
        let t1 = bracket(&a, &bracket(&b, &c).unwrap()).unwrap();
        let t2 = bracket(&b, &bracket(&c, &a).unwrap()).unwrap();
        let t3 = bracket(&c, &bracket(&a, &b).unwrap()).unwrap();
        assert!((&(&t1 + &t2) + &t3).is_zero());
    }
}

fn star_lin(
    x: &LinComb<FunctionalMonomial>,
    y: &LinComb<FunctionalMonomial>,
) -> LinComb<FunctionalMonomial> {
    let mut out = LinComb::zero();
    for (m1, a) in x.iter() {
        for (m2, b) in y.iter() {
            out += &star_product(m1, m2).unwrap().scale(&(a * b));
        }
    }
    out
}

#[test]
fn star_product_is_associative() {
    let mut r = rng(13);
    for round in 0..12 {
        let sizes = if round % 2 == 0 { [1, 1, 1] } else { [2, 1, 1] };
        let monos: Vec<LinComb<FunctionalMonomial>> = sizes
            .iter()
            .map(|&s| LinComb::basis(FunctionalMonomial::new((0..s).map(|_| random_functional(&mut r)).collect())))
            .collect();
        let left = star_lin(&star_lin(&monos[0], &monos[1]), &monos[2]);
        let right = star_lin(&monos[0], &star_lin(&monos[1], &monos[2]));
        assert_eq!(normalize(&left, D), normalize(&right, D), "round {round}");
    }
}

#[test]
fn magnus_routes_agree_on_random_functionals() {
    let mut r = rng(14);
    for _ in 0..5 {
        let v = random_functional(&mut r);
        assert_eq!(magnus(&v, D).unwrap(), magnus_iterated(&v, D).unwrap());
    }
}

#[test]
fn magnus_relates_cumulants() {
    for m in Model::ALL {
        assert!(magnus_report(&MomentFunctional::model(m), D).unwrap().all_hold(), "{m}");
    }
    for seed in 0..10 {
        assert!(magnus_report(&random_state(2, D, 3000 + seed), D).unwrap().all_hold(), "seed {seed}");
    }
    let phi = random_state(2, 4, 99);
    for kind in [CumulantKind::Free, CumulantKind::Boolean] {
        let c = moments_to_cumulants(kind, &phi, 4).unwrap();
        assert!(magnus_inverse_check(&c, 4).unwrap());
    }
    let h = moments_to_cumulants(CumulantKind::Monotone, &phi, 4).unwrap();
    assert!(magnus_inverse_check(&h, 4).is_err());
}
