mod common;

use common::{random_centered, random_state, w};
use ncprob::scalar::{int, Scalar};
use ncprob::wick::{
    classical_wick, coassociativity_check, free_wick, free_wick_via_cumulants, wick_centered, wick_inversion,
    wick_product, Polynomial, SentenceState,
};
use ncprob::{Alphabet, LinComb, Sentence, Word, WordFunctional};
use num_traits::{One, Zero};

#[test]
fn appell_property_and_centering() {
    for seed in 0..5 {
        let phi = random_state(1, 8, 70 + seed);
        let moments: Vec<Scalar> = (0..=8).map(|k| phi.value(&Word(vec![0; k])).unwrap()).collect();
        for n in 1..=8 {
            let wn = classical_wick(&phi, n).unwrap();
            let prev = classical_wick(&phi, n - 1).unwrap();
            assert_eq!(wn.derivative(), prev.scale(&int(n as i64)), "n = {n}");
            assert!(wn.coeff(n).is_one());
            let expectation: Scalar = wn.terms().map(|(k, c)| c * &moments[k]).sum();
            assert!(expectation.is_zero(), "E W_{n} = {expectation}");
        }
        assert_eq!(classical_wick(&phi, 0).unwrap(), Polynomial::one());
    }
}

#[test]
fn wick_product_is_a_commutative_unital_algebra() {
    let phi = random_state(1, 8, 80);
    let p = Polynomial::from_coeffs(&[int(1), int(-2), int(3)]);
    let q = Polynomial::from_coeffs(&[int(0), int(5)]);
    let r = Polynomial::from_coeffs(&[int(2), int(0), int(1)]);
    let pq = wick_product(&phi, &p, &q).unwrap();
    assert_eq!(pq, wick_product(&phi, &q, &p).unwrap());
    assert_eq!(
        wick_product(&phi, &pq, &r).unwrap(),
        wick_product(&phi, &p, &wick_product(&phi, &q, &r).unwrap()).unwrap()
    );
    assert_eq!(wick_product(&phi, &Polynomial::one(), &p).unwrap(), p);
    let wx = classical_wick(&phi, 1).unwrap();
    assert_eq!(wick_product(&phi, &wx, &wx).unwrap(), classical_wick(&phi, 2).unwrap());
}

#[test]
fn double_coproduct_is_coassociative() {
    for u in Alphabet::letters(2).words_up_to(4).into_iter().skip(1) {
        assert!(coassociativity_check(&u).unwrap(), "{u}");
    }
}

#[test]
fn free_wick_is_centered_and_invertible() {
    for seed in 0..3 {
        let st = SentenceState::new(random_state(2, 5, 90 + seed));
        for u in Alphabet::letters(2).words_up_to(5) {
            assert!(wick_centered(&st, &u).unwrap(), "{u}");
            let e = free_wick(&st, &u).unwrap();
            assert!(e.result.coeff(&u).is_one());
            if u.len() <= 4 {
                assert!(wick_inversion(&st, &u).unwrap(), "{u}");
            }
        }
    }
}

#[test]
fn cumulant_form_agrees() {
    for seed in 0..5 {
        let st = SentenceState::new(random_state(2, 4, 100 + seed));
        for u in Alphabet::letters(2).words_up_to(4) {
            assert_eq!(free_wick(&st, &u).unwrap(), free_wick_via_cumulants(&st, &u).unwrap(), "{u}");
        }
    }
}

#[test]
fn centered_degree_two() {
    let phi = random_centered(2, 2, 110);
    let st = SentenceState::new(phi.clone());
    let e = free_wick_via_cumulants(&st, &w("ab")).unwrap();
    let mut want = LinComb::basis(w("ab"));
    want.add_term(Word::empty(), -phi.value(&w("ab")).unwrap());
    assert_eq!(e.result, want);
}

#[test]
fn phi_inverse_is_multiplicative_over_bars() {
    let st = SentenceState::new(random_state(2, 3, 120));
    for u in Alphabet::letters(2).words_up_to(3).into_iter().skip(1) {
        for v in Alphabet::letters(2).words_up_to(2).into_iter().skip(1) {
            let s = Sentence::new(vec![u.clone(), v.clone()]);
            let split = st.phi_inverse(&Sentence::single(u.clone())).unwrap()
                * st.phi_inverse(&Sentence::single(v.clone())).unwrap();
            assert_eq!(st.phi_inverse(&s).unwrap(), split, "{s}");
        }
    }
}
