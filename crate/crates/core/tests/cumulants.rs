mod common;

use std::collections::HashMap;

use common::{random_state, w};
use ncprob::cumulants::{
    cumulants_to_moments, mixed_cumulant_check, moments_to_cumulants, CumulantFunctional, CumulantKind,
};
use ncprob::scalar::{frac, int};
use ncprob::{Alphabet, FunctionalFile, Model, MomentFunctional, Scalar, Word, WordFunctional};
use num_traits::{One, Zero};

#[test]
fn round_trips_for_every_kind() {
    for seed in 0..20 {
        for generators in [1, 2] {
            let phi = random_state(generators, 6, 1000 + seed);
            for kind in CumulantKind::ALL {
                let c = moments_to_cumulants(kind, &phi, 6).unwrap();
                for u in Alphabet::letters(generators).words_up_to(6) {
                    assert_eq!(
                        cumulants_to_moments(&c, &u).unwrap(),
                        phi.value(&u).unwrap(),
                        "{} on {u}, seed {seed}",
                        kind.name()
                    );
                }
            }
        }
    }
}

#[test]
fn low_degree_agreement_and_nested_correction() {
    for seed in 0..10 {
        let phi = random_state(1, 3, 2000 + seed);
        let get = |k| moments_to_cumulants(k, &phi, 3).unwrap();
        let (c, r, b, h) = (
            get(CumulantKind::Classical),
            get(CumulantKind::Free),
            get(CumulantKind::Boolean),
            get(CumulantKind::Monotone),
        );
        for s in ["a", "aa"] {
            let v = c.value(&w(s)).unwrap();
            for f in [&r, &b, &h] {
                assert_eq!(f.value(&w(s)).unwrap(), v);
            }
        }
        let r1 = r.value(&w("a")).unwrap();
        let r2 = r.value(&w("aa")).unwrap();
        let r3 = r.value(&w("aaa")).unwrap();
        // The only nested partition of [3] is 13|2.
        assert_eq!(c.value(&w("aaa")).unwrap(), r3);
        assert_eq!(b.value(&w("aaa")).unwrap() - &r3, &r1 * &r2);
        assert_eq!(h.value(&w("aaa")).unwrap() - &r3, &r1 * &r2 * frac(1, 2));
    }
}

#[test]
fn files_round_trip() {
    let phi = random_state(2, 4, 7);
    let text = phi.to_file(4).unwrap().to_json();
    let back = MomentFunctional::from_file(&FunctionalFile::from_json(&text).unwrap()).unwrap();
    for u in Alphabet::letters(2).words_up_to(4) {
        assert_eq!(back.value(&u).unwrap(), phi.value(&u).unwrap());
    }
    let c = moments_to_cumulants(CumulantKind::Monotone, &phi, 4).unwrap();
    let file = FunctionalFile::from_json(&c.to_file().to_json()).unwrap();
    assert_eq!(CumulantFunctional::from_file(&file).unwrap(), c);
}

#[test]
fn semicircle_and_gaussian_moments() {
    let s = MomentFunctional::model(Model::Semicircle);
    let r = moments_to_cumulants(CumulantKind::Free, &s, 6).unwrap();
    let c = CumulantFunctional::from_fn(CumulantKind::Free, Alphabet::letters(1), 6, |u| {
        if u.len() == 2 { frac(1, 1) } else { frac(0, 1) }
    });
    assert_eq!(r, c);
    assert_eq!(s.value(&w("aaaaaa")).unwrap(), frac(5, 1));
}

/// Maximal runs of letters from one side of the split `{a} | {b}`.
fn runs(u: &Word) -> Vec<Word> {
    let mut out: Vec<Vec<u8>> = Vec::new();
    for &x in u.letters() {
        match out.last_mut() {
            Some(r) if r[0] == x => r.push(x),
            _ => out.push(vec![x]),
        }
    }
    out.into_iter().map(Word::new).collect()
}

/// Free product of two single-variable laws, from `φ(Π (r_i − φ(r_i))) = 0` on alternating runs.
fn free_product(ma: &[Scalar], mb: &[Scalar], u: &Word, memo: &mut HashMap<Word, Scalar>) -> Scalar {
    if let Some(v) = memo.get(u) {
        return v.clone();
    }
    let rs = runs(u);
    let value = if rs.len() <= 1 {
        match rs.first() {
            None => Scalar::one(),
            Some(r) if r.letters()[0] == 0 => ma[r.len()].clone(),
            Some(r) => mb[r.len()].clone(),
        }
    } else {
        let k = rs.len();
        let phis: Vec<Scalar> = rs.iter().map(|r| free_product(ma, mb, r, memo)).collect();
        let mut total = Scalar::zero();
        for mask in 0..(1u32 << k) - 1 {
            let mut kept = Vec::new();
            let mut coef = Scalar::one();
            for i in 0..k {
                if mask >> i & 1 == 1 {
                    kept.extend_from_slice(rs[i].letters());
                } else {
                    coef *= -&phis[i];
                }
            }
            total += coef * free_product(ma, mb, &Word::new(kept), memo);
        }
        -total
    };
    memo.insert(u.clone(), value.clone());
    value
}

fn two_generator_state(d: usize, mut f: impl FnMut(&Word) -> Scalar) -> MomentFunctional {
    let values: HashMap<Word, Scalar> = Alphabet::letters(2)
        .words_up_to(d)
        .into_iter()
        .map(|u| {
            let v = f(&u);
            (u, v)
        })
        .collect();
    MomentFunctional::table(Alphabet::letters(2), d, values).unwrap()
}

fn semicircle_moments(d: usize) -> Vec<Scalar> {
    (0..=d).map(|n| Model::Semicircle.moment(n)).collect()
}

#[test]
fn freeness_rule_in_degree_four() {
    let ma = [int(1), frac(1, 2), int(3), int(-1), int(5)];
    let mb = [int(1), frac(-2, 3), int(2), frac(1, 7), int(4)];
    let mut memo = HashMap::new();
    let abab = free_product(&ma, &mb, &w("abab"), &mut memo);
    let expected = &ma[1] * &ma[1] * &mb[2] + &ma[2] * &mb[1] * &mb[1] - &ma[1] * &ma[1] * &mb[1] * &mb[1];
    assert_eq!(abab, expected);
    assert_eq!(free_product(&ma, &mb, &w("aabb"), &mut memo), &ma[2] * &mb[2]);
    assert_eq!(free_product(&ma, &mb, &w("ab"), &mut memo), &ma[1] * &mb[1]);
}

#[test]
fn free_semicircles_have_no_mixed_free_cumulants() {
    let m = semicircle_moments(6);
    let mut memo = HashMap::new();
    let phi = two_generator_state(6, |u| free_product(&m, &m, u, &mut memo));
    assert_eq!(phi.value(&w("abab")).unwrap(), Scalar::zero());
    assert_eq!(phi.value(&w("abba")).unwrap(), int(1));
    assert!(mixed_cumulant_check(CumulantKind::Free, &phi, &[0], 4).unwrap());
    assert!(mixed_cumulant_check(CumulantKind::Free, &phi, &[0], 6).unwrap());
    assert!(!mixed_cumulant_check(CumulantKind::Classical, &phi, &[0], 4).unwrap());

    let perturbed = phi.with_values(&[(w("abab"), int(1))]).unwrap();
    assert!(!mixed_cumulant_check(CumulantKind::Free, &perturbed, &[0], 4).unwrap());
    let r = moments_to_cumulants(CumulantKind::Free, &perturbed, 4).unwrap();
    assert_eq!(cumulants_to_moments(&r, &w("abab")).unwrap(), int(1));
    assert!(r.words().any(|(u, v)| *u == w("abab") && *v == int(1)));
}

#[test]
fn free_products_of_random_laws() {
    for seed in 0..5 {
        let a = random_state(1, 5, 300 + seed);
        let b = random_state(1, 5, 400 + seed);
        let ma: Vec<Scalar> = (0..=5).map(|n| a.value(&Word::new(vec![0; n])).unwrap()).collect();
        let mb: Vec<Scalar> = (0..=5).map(|n| b.value(&Word::new(vec![0; n])).unwrap()).collect();
        let mut memo = HashMap::new();
        let phi = two_generator_state(5, |u| free_product(&ma, &mb, u, &mut memo));
        assert!(mixed_cumulant_check(CumulantKind::Free, &phi, &[0], 5).unwrap(), "seed {seed}");
    }
}

#[test]
fn tensor_and_boolean_products() {
    let g: Vec<Scalar> = (0..=6).map(|n| Model::Gaussian.moment(n)).collect();
    let s = semicircle_moments(6);
    let count = |u: &Word, x: u8| u.letters().iter().filter(|&&y| y == x).count();
    let tensor = two_generator_state(6, |u| &g[count(u, 0)] * &s[count(u, 1)]);
    assert!(mixed_cumulant_check(CumulantKind::Classical, &tensor, &[0], 4).unwrap());
    assert!(mixed_cumulant_check(CumulantKind::Classical, &tensor, &[0], 6).unwrap());
    assert!(!mixed_cumulant_check(CumulantKind::Free, &tensor, &[0], 4).unwrap());

    let boolean = two_generator_state(6, |u| {
        runs(u)
            .iter()
            .map(|r| if r.letters()[0] == 0 { g[r.len()].clone() } else { s[r.len()].clone() })
            .product()
    });
    assert!(mixed_cumulant_check(CumulantKind::Boolean, &boolean, &[0], 6).unwrap());
    assert!(!mixed_cumulant_check(CumulantKind::Free, &boolean, &[0], 4).unwrap());
}
