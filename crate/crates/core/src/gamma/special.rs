//! Gamma, polygamma and Hurwitz zeta values in double precision.

use std::f64::consts::PI;

use crate::field::C;

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// `Γ(z)` by the Lanczos approximation with reflection for `Re z < 1/2`.
pub fn gamma(z: C) -> C {
    if z.re < 0.5 {
        let s = (z * PI).sin();
        return C::new(PI, 0.0) / (s * gamma(C::new(1.0, 0.0) - z));
    }
    let z = z - 1.0;
    let mut x = C::new(LANCZOS[0], 0.0);
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        x += *c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * t.powc(z + 0.5) * (-t).exp() * x
}

pub fn gamma_real(x: f64) -> f64 {
    gamma(C::new(x, 0.0)).re
}

const BERNOULLI_2K: [f64; 10] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
];

/// Digamma `ψ(x)` for real `x > 0`.
pub fn digamma(mut x: f64) -> f64 {
    let mut acc = 0.0;
    while x < 10.0 {
        acc -= 1.0 / x;
        x += 1.0;
    }
    let x2 = x * x;
    let mut s = x.ln() - 0.5 / x;
    let mut p = x2;
    for (k, b) in BERNOULLI_2K.iter().enumerate().take(7) {
        s -= b / (2.0 * (k + 1) as f64 * p);
        p *= x2;
    }
    acc + s
}

/// Hurwitz zeta `ζ(s, a)` for integer `s ≥ 2`, `a > 0`, by Euler–Maclaurin.
pub fn hurwitz_zeta(s: u32, a: f64) -> f64 {
    let n = 12usize;
    let sf = s as f64;
    let mut sum: f64 = (0..n).map(|k| (a + k as f64).powf(-sf)).sum();
    let x = a + n as f64;
    sum += x.powf(1.0 - sf) / (sf - 1.0) + 0.5 * x.powf(-sf);
    // Σ_j B_{2j}/(2j)! · s(s+1)…(s+2j-2) · x^{-s-2j+1}
    let mut rising = sf;
    let mut fact = 2.0;
    let mut xp = x.powf(-sf - 1.0);
    for (j, b) in BERNOULLI_2K.iter().enumerate() {
        sum += b / fact * rising * xp;
        let j = j as f64 + 1.0;
        rising *= (sf + 2.0 * j - 1.0) * (sf + 2.0 * j);
        fact *= (2.0 * j + 1.0) * (2.0 * j + 2.0);
        xp /= x * x;
    }
    sum
}

/// `ψ^{(k)}(x)`; `k = 0` is the digamma function.
pub fn polygamma(k: u32, x: f64) -> f64 {
    if k == 0 {
        return digamma(x);
    }
    let fact: f64 = (1..=k).map(f64::from).product();
    let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
    sign * fact * hurwitz_zeta(k + 1, x)
}

/// Taylor coefficients of `log Γ(a + x)` up to `x^depth`.
pub fn log_gamma_taylor(a: f64, depth: usize) -> Vec<f64> {
    let mut out = vec![gamma_real(a).ln()];
    let mut fact = 1.0;
    for k in 1..=depth {
        fact *= k as f64;
        out.push(polygamma(k as u32 - 1, a) / fact);
    }
    out
}
