//! Qubit spin observables, sequential measurements, Bell pairs and the
//! Bell card game.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

pub type CScalar = Complex64;
pub type Ket = [CScalar; 2];

pub const TOLERANCE: f64 = 1e-12;

/// `|+1⟩`, the first basis vector.
pub const UP: Ket = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
/// `|−1⟩`.
pub const DOWN: Ket = [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)];

/// `σ_{θ,φ} = n·σ` with `n = (sin θ cos φ, sin θ sin φ, cos θ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinObservable {
    pub theta: f64,
    pub phi: f64,
    pub matrix: [[CScalar; 2]; 2],
    /// Eigenvector for `+1`.
    pub psi: Ket,
    /// Eigenvector for `−1`.
    pub omega: Ket,
}

pub fn spin_observable(theta: f64, phi: f64) -> SpinObservable {
    let n1 = theta.sin() * phi.cos();
    let n2 = theta.sin() * phi.sin();
    let n3 = theta.cos();
    let phase = Complex64::from_polar(1.0, -phi);
    let (s, c) = (theta / 2.0).sin_cos();
    SpinObservable {
        theta,
        phi,
        matrix: [
            [Complex64::new(n3, 0.0), Complex64::new(n1, -n2)],
            [Complex64::new(n1, n2), Complex64::new(-n3, 0.0)],
        ],
        psi: [phase * c, Complex64::new(s, 0.0)],
        omega: [phase * s, Complex64::new(-c, 0.0)],
    }
}

impl SpinObservable {
    pub fn apply(&self, v: &Ket) -> Ket {
        [
            self.matrix[0][0] * v[0] + self.matrix[0][1] * v[1],
            self.matrix[1][0] * v[0] + self.matrix[1][1] * v[1],
        ]
    }

    /// The eigenvector for outcome `±1`.
    pub fn eigenvector(&self, outcome: i8) -> Ket {
        if outcome > 0 {
            self.psi
        } else {
            self.omega
        }
    }
}

pub fn inner(u: &Ket, v: &Ket) -> CScalar {
    u[0].conj() * v[0] + u[1].conj() * v[1]
}

pub fn norm_sqr(v: &Ket) -> f64 {
    inner(v, v).re
}

fn outcome_strings(len: usize) -> Vec<Vec<i8>> {
    (0..1usize << len)
        .map(|m| (0..len).map(|i| if m >> (len - 1 - i) & 1 == 0 { 1 } else { -1 }).collect())
        .collect()
}

fn outcome_label(outcomes: &[i8]) -> String {
    outcomes.iter().map(|&o| if o > 0 { '+' } else { '-' }).collect()
}

/// Probability of a sequence of `σ_{θ_i,0}` outcomes, projecting after each measurement.
pub fn sequence_probability(start: &Ket, angles: &[f64], outcomes: &[i8]) -> Result<f64> {
    let norm = norm_sqr(start);
    if (norm - 1.0).abs() > TOLERANCE {
        return Err(Error::NonUnitState(norm));
    }
    if angles.len() != outcomes.len() {
        return Err(Error::LengthMismatch {
            expected: angles.len(),
            got: outcomes.len(),
        });
    }
    let mut state = *start;
    let mut p = 1.0;
    for (&theta, &o) in angles.iter().zip(outcomes) {
        let e = spin_observable(theta, 0.0).eigenvector(o);
        p *= inner(&e, &state).norm_sqr();
        state = e;
    }
    Ok(p)
}

/// All `2^k` outcome probabilities, keyed by strings such as `"+-+"`.
pub fn sequential_probs(start: &Ket, angles: &[f64]) -> Result<BTreeMap<String, f64>> {
    outcome_strings(angles.len())
        .into_iter()
        .map(|o| Ok((outcome_label(&o), sequence_probability(start, angles, &o)?)))
        .collect()
}

/// `P(+,+,+) + P(+,−,+) − P(+,+)` from `|+1⟩`, the last without the middle measurement.
pub fn total_probability_defect(theta1: f64, theta2: f64, theta3: f64) -> f64 {
    let three = [theta1, theta2, theta3];
    let with_middle = sequence_probability(&UP, &three, &[1, 1, 1]).unwrap()
        + sequence_probability(&UP, &three, &[1, -1, 1]).unwrap();
    with_middle - sequence_probability(&UP, &[theta1, theta3], &[1, 1]).unwrap()
}

/// The same defect from the printed cosine/sine products.
pub fn total_probability_defect_closed_form(theta1: f64, theta2: f64, theta3: f64) -> f64 {
    let c = |x: f64| (x / 2.0).cos().powi(2);
    let s = |x: f64| (x / 2.0).sin().powi(2);
    c(theta1) * (c(theta2 - theta1) * c(theta3 - theta2) + s(theta2 - theta1) * s(theta3 - theta2) - c(theta3 - theta1))
}

fn tensor(u: &Ket, v: &Ket) -> [CScalar; 4] {
    [u[0] * v[0], u[0] * v[1], u[1] * v[0], u[1] * v[1]]
}

/// `(|−1⟩⊗|+1⟩ − |+1⟩⊗|−1⟩)/√2`.
pub fn bell_state() -> [CScalar; 4] {
    let a = tensor(&DOWN, &UP);
    let b = tensor(&UP, &DOWN);
    let r = std::f64::consts::FRAC_1_SQRT_2;
    [0, 1, 2, 3].map(|i| (a[i] - b[i]) * r)
}

/// `P(A_{θ1} = a, B_{θ2} = b)` indexed `[a][b]` with index 0 for `+1` and 1 for `−1`.
pub fn bell_joint(theta1: f64, theta2: f64) -> [[f64; 2]; 2] {
    let bell = bell_state();
    let a = spin_observable(theta1, 0.0);
    let b = spin_observable(theta2, 0.0);
    let mut table = [[0.0; 2]; 2];
    for (i, oa) in [1i8, -1].into_iter().enumerate() {
        for (j, ob) in [1i8, -1].into_iter().enumerate() {
            let v = tensor(&a.eigenvector(oa), &b.eigenvector(ob));
            let amp: CScalar = (0..4).map(|k| bell[k].conj() * v[k]).sum();
            table[i][j] = amp.norm_sqr();
        }
    }
    table
}

/// `P(A_{θ1} = B_{θ2}) = sin²((θ1−θ2)/2)`.
pub fn bell_agreement(theta1: f64, theta2: f64) -> f64 {
    let t = bell_joint(theta1, theta2);
    t[0][0] + t[1][1]
}

/// `E(A_{θ1} B_{θ2})` from the joint table; equals `−cos(θ1−θ2)`.
pub fn bell_correlation(theta1: f64, theta2: f64) -> f64 {
    let t = bell_joint(theta1, theta2);
    t[0][0] + t[1][1] - t[0][1] - t[1][0]
}

/// Angles `(θ1, θ'1, θ2, θ'2)`; the red card selects the unprimed angle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BellAngles {
    pub theta1: f64,
    pub theta1p: f64,
    pub theta2: f64,
    pub theta2p: f64,
}

impl BellAngles {
    pub fn new(theta1: f64, theta1p: f64, theta2: f64, theta2p: f64) -> Self {
        BellAngles {
            theta1,
            theta1p,
            theta2,
            theta2p,
        }
    }

    /// `(0, 2π/3, π, π/3)`.
    pub fn violating() -> Self {
        BellAngles::new(0.0, 2.0 * PI / 3.0, PI, PI / 3.0)
    }

    /// Parses four comma-separated angles such as `0,2pi/3,pi,pi/3`.
    pub fn parse(text: &str) -> Result<Self> {
        let v: Vec<f64> = text.split(',').map(parse_angle).collect::<Result<_>>()?;
        if v.len() != 4 {
            return Err(Error::LengthMismatch {
                expected: 4,
                got: v.len(),
            });
        }
        Ok(BellAngles::new(v[0], v[1], v[2], v[3]))
    }

    pub fn alice(&self, card: Card) -> f64 {
        match card {
            Card::Red => self.theta1,
            Card::Black => self.theta1p,
        }
    }

    pub fn bob(&self, card: Card) -> f64 {
        match card {
            Card::Red => self.theta2,
            Card::Black => self.theta2p,
        }
    }
}

/// Parses `pi`, `-pi/2`, `2pi/3`, `3*pi/4`, or a decimal number of radians.
pub fn parse_angle(text: &str) -> Result<f64> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::Parse(format!("invalid angle '{text}'"));
    if let Some((coef, rest)) = t.split_once("pi") {
        let coef = coef.strip_suffix('*').unwrap_or(coef);
        let k = match coef {
            "" | "+" => 1.0,
            "-" => -1.0,
            c => c.parse::<f64>().map_err(|_| bad())?,
        };
        let d = match rest {
            "" => 1.0,
            r => r
                .strip_prefix('/')
                .and_then(|x| x.parse::<f64>().ok())
                .filter(|x| *x != 0.0)
                .ok_or_else(bad)?,
        };
        Ok(k * PI / d)
    } else {
        t.parse::<f64>().ok().filter(|x| x.is_finite()).ok_or_else(bad)
    }
}

/// `ℬ = P(A_{θ'1}=B_{θ'2}) + P(A_{θ1}=B_{θ'2}) + P(A_{θ'1}=B_{θ2}) − P(A_{θ1}=B_{θ2})`, closed form.
pub fn bell_factor(a: &BellAngles) -> f64 {
    let s = |x: f64| (x / 2.0).sin().powi(2);
    s(a.theta1p - a.theta2p) + s(a.theta1 - a.theta2p) + s(a.theta1p - a.theta2) - s(a.theta1 - a.theta2)
}

/// The Bell factor assembled from the joint tables.
pub fn bell_factor_from_tables(a: &BellAngles) -> f64 {
    bell_agreement(a.theta1p, a.theta2p) + bell_agreement(a.theta1, a.theta2p) + bell_agreement(a.theta1p, a.theta2)
        - bell_agreement(a.theta1, a.theta2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Card {
    Red,
    Black,
}

impl Card {
    pub const ALL: [Card; 2] = [Card::Red, Card::Black];

    pub fn symbol(self) -> char {
        match self {
            Card::Red => 'R',
            Card::Black => 'N',
        }
    }
}

/// A deterministic local strategy: answers `±1` per card colour.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Strategy {
    pub a_r: i8,
    pub a_n: i8,
    pub b_r: i8,
    pub b_n: i8,
}

impl Strategy {
    /// `1[A_N=B_N] + 1[A_R=B_N] + 1[A_N=B_R] − 1[A_R=B_R]`.
    pub fn value(&self) -> i32 {
        let eq = |x: i8, y: i8| i32::from(x == y);
        eq(self.a_n, self.b_n) + eq(self.a_r, self.b_n) + eq(self.a_n, self.b_r) - eq(self.a_r, self.b_r)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassicalBound {
    pub min: i32,
    pub argmin: Vec<Strategy>,
    pub values: Vec<(Strategy, i32)>,
}

/// Enumerates the 16 deterministic local strategies.
pub fn classical_bound() -> ClassicalBound {
    let values: Vec<(Strategy, i32)> = (0..16u8)
        .map(|m| {
            let bit = |i: u8| if m >> i & 1 == 0 { 1 } else { -1 };
            let s = Strategy {
                a_r: bit(3),
                a_n: bit(2),
                b_r: bit(1),
                b_n: bit(0),
            };
            (s, s.value())
        })
        .collect();
    let min = values.iter().map(|(_, v)| *v).min().unwrap_or(0);
    let argmin = values.iter().filter(|(_, v)| *v == min).map(|(s, _)| *s).collect();
    ClassicalBound { min, argmin, values }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Trial {
    pub alice_card: Card,
    pub bob_card: Card,
    pub alice: i8,
    pub bob: i8,
}

/// Trial and agreement counts for one card pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct CellCount {
    pub trials: u64,
    pub agreements: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GameRecord {
    pub angles: BellAngles,
    pub seed: u64,
    pub trials: Vec<Trial>,
    /// Indexed `[alice card][bob card]`, red first.
    pub counts: [[CellCount; 2]; 2],
    pub empirical_factor: f64,
    pub standard_error: f64,
}

impl GameRecord {
    pub fn cell(&self, alice: Card, bob: Card) -> CellCount {
        self.counts[alice as usize][bob as usize]
    }

    pub fn agreement_rate(&self, alice: Card, bob: Card) -> f64 {
        let c = self.cell(alice, bob);
        if c.trials == 0 {
            0.0
        } else {
            c.agreements as f64 / c.trials as f64
        }
    }
}

fn play(angles: &BellAngles, seed: u64, index: u64) -> Trial {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let alice_card = if rng.random::<bool>() { Card::Red } else { Card::Black };
    let bob_card = if rng.random::<bool>() { Card::Red } else { Card::Black };
    let table = bell_joint(angles.alice(alice_card), angles.bob(bob_card));
    let u: f64 = rng.random();
    let (alice, bob) = if u < table[0][0] {
        (1, 1)
    } else if u < table[0][0] + table[0][1] {
        (1, -1)
    } else if u < table[0][0] + table[0][1] + table[1][0] {
        (-1, 1)
    } else {
        (-1, -1)
    };
    Trial {
        alice_card,
        bob_card,
        alice,
        bob,
    }
}

/// Plays the quantum card game; trial `i` draws from a ChaCha8 stream keyed by `(seed, i)`.
pub fn simulate_game(angles: &BellAngles, trials: u64, seed: u64) -> Result<GameRecord> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let record: Vec<Trial> = (0..trials).into_par_iter().map(|i| play(angles, seed, i)).collect();
    let mut counts = [[CellCount::default(); 2]; 2];
    for t in &record {
        let c = &mut counts[t.alice_card as usize][t.bob_card as usize];
        c.trials += 1;
        c.agreements += u64::from(t.alice == t.bob);
    }
    let rate = |c: CellCount| {
        if c.trials == 0 {
            0.0
        } else {
            c.agreements as f64 / c.trials as f64
        }
    };
    let (r, n) = (Card::Red as usize, Card::Black as usize);
    let empirical_factor =
        rate(counts[n][n]) + rate(counts[r][n]) + rate(counts[n][r]) - rate(counts[r][r]);
    let variance: f64 = counts
        .iter()
        .flatten()
        .filter(|c| c.trials > 0)
        .map(|&c| rate(c) * (1.0 - rate(c)) / c.trials as f64)
        .sum();
    Ok(GameRecord {
        angles: *angles,
        seed,
        trials: record,
        counts,
        empirical_factor,
        standard_error: variance.sqrt(),
    })
}
