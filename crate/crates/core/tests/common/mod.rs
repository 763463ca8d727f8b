#![allow(dead_code)]

use prescribed_ricci::{HomogeneousSpace, IndexSet, MetricCoefficients, TensorCoefficients};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

pub const F4: &str = "F4_SU3xSU2xU1";
pub const G2: &str = "G2_U2_long";
pub const E6: &str = "E6_Sp3xSp1";

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

/// A random space with `1..=max_s` summands, positive Killing coefficients
/// and a random sparse set of structure constants.
pub fn random_space(rng: &mut ChaCha8Rng, max_s: usize) -> HomogeneousSpace {
    let s = rng.random_range(1..=max_s);
    let mut dims: Vec<u32> = (0..s).map(|_| rng.random_range(1..=24)).collect();
    if dims.iter().sum::<u32>() < 3 {
        dims[0] += 2;
    }
    let killing: Vec<f64> = (0..s).map(|_| rng.random_range(0.25..2.0)).collect();
    let mut triples = Vec::new();
    for i in 1..=s {
        for j in i..=s {
            for k in j..=s {
                if rng.random_bool(0.4) {
                    triples.push(([i, j, k], rng.random_range(0.05..4.0)));
                }
            }
        }
    }
    HomogeneousSpace::new("random", dims, killing, &triples).unwrap()
}

pub fn random_positive(rng: &mut ChaCha8Rng, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..n).map(|_| (rng.random_range(lo.ln()..hi.ln())).exp()).collect()
}

/// Rescales `z` so that `sum d_i z_i = 1`.
pub fn normalized(space: &HomogeneousSpace, mut z: Vec<f64>) -> Vec<f64> {
    let total: f64 = z.iter().enumerate().map(|(i, v)| space.dim(i) * v).sum();
    z.iter_mut().for_each(|v| *v /= total);
    z
}

pub fn metric(v: Vec<f64>) -> MetricCoefficients {
    MetricCoefficients::new(v).unwrap()
}

pub fn tensor(v: Vec<f64>) -> TensorCoefficients {
    TensorCoefficients::new(v).unwrap()
}

/// Sum of the absolute values of the terms of `S(x)`, a natural scale for
/// rounding error in `S` and its derivatives.
pub fn term_magnitude(space: &HomogeneousSpace, x: &[f64]) -> f64 {
    let killing: f64 = (0..space.num_summands())
        .map(|i| (space.dim(i) * space.killing()[i] / x[i]).abs())
        .sum();
    let cubic: f64 = space
        .constants()
        .ordered()
        .iter()
        .map(|t| t.value * x[t.k] / (x[t.i] * x[t.j]))
        .sum();
    0.5 * killing + 0.25 * cubic
}

/// The slice functional on `{2,4}` of the F4 space as a function of the
/// `m_4` coefficient `v > 6 z_4`, the `m_2` coefficient being fixed by the
/// trace constraint.
pub fn psi(space: &HomogeneousSpace, z2: f64, z4: f64, v: f64) -> f64 {
    let y2 = 18.0 * z2 / (1.0 - 6.0 * z4 / v);
    let set = IndexSet::from_one_based([2, 4]).unwrap();
    prescribed_ricci::hat_scalar_curvature(space, set, &[y2, v]).unwrap()
}

/// Golden-section maximization of a unimodal function on `[a, b]`.
pub fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a) > 1e-13 * (a.abs() + b.abs()) {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

pub fn v0(z2: f64, z4: f64) -> f64 {
    6.0 * (z4 * z4 + 42.0 * z2 * z4 - 24.0 * z2 * z2).sqrt()
}
