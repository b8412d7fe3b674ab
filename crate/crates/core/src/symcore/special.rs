//! Special numbers consumed by the trace formulas.

use super::scalar::{rint, Rat};
use num_bigint::BigInt;
use num_traits::{One, Zero};

pub fn factorial(k: u32) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, j| acc * BigInt::from(j))
}

pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    acc
}

pub fn factorial_f64(k: u32) -> f64 {
    (1..=k).fold(1.0, |acc, j| acc * j as f64)
}

/// Bernoulli numbers with B₁ = −1/2, from Σ_{j≤m} C(m+1, j) B_j = 0.
pub fn bernoulli_table(kmax: u32) -> Vec<Rat> {
    let mut b: Vec<Rat> = Vec::with_capacity(kmax as usize + 1);
    b.push(Rat::one());
    for m in 1..=kmax {
        let mut s = Rat::zero();
        for (j, bj) in b.iter().enumerate() {
            s += Rat::from_integer(binomial(m + 1, j as u32)) * bj;
        }
        b.push(-s / rint(m as i64 + 1));
    }
    b
}

pub fn bernoulli(k: u32) -> Rat {
    bernoulli_table(k).pop().unwrap()
}

/// ζ(−k) for k ≥ 0.
pub fn zeta_neg(k: u32) -> Rat {
    if k == 0 {
        return Rat::new((-1).into(), 2.into());
    }
    -bernoulli(k + 1) / rint(k as i64 + 1)
}

/// Γ(b + 1/2)/√π = (2b)!/(4^b b!).
pub fn half_gamma_ratio(b: u32) -> Rat {
    Rat::new(factorial(2 * b), BigInt::from(4).pow(b) * factorial(b))
}

/// ∫_{S^{2n−1}} v^α dθ divided by π^n. Zero if any exponent is odd.
pub fn sphere_moment_pi(alpha: &[u16]) -> Rat {
    if alpha.iter().any(|a| a % 2 == 1) {
        return Rat::zero();
    }
    let n = alpha.len() as u32 / 2;
    let mut acc = rint(2);
    let mut half_total = 0u32;
    for &a in alpha {
        let b = a as u32 / 2;
        half_total += b;
        acc *= half_gamma_ratio(b);
    }
    acc / Rat::from_integer(factorial(half_total + n - 1))
}

/// ∫_{R^{2n}} v^α e^{−Q} dv divided by π^n; scale by λ^{−(|α|/2+n)} for e^{−λQ}.
pub fn gauss_moment_pi(alpha: &[u16]) -> Rat {
    if alpha.iter().any(|a| a % 2 == 1) {
        return Rat::zero();
    }
    alpha
        .iter()
        .fold(Rat::one(), |acc, &a| acc * half_gamma_ratio(a as u32 / 2))
}

/// Riemann ζ(s) for real s > 1 by Euler–Maclaurin summation.
pub fn zeta_pos(s: f64) -> f64 {
    let n = 20usize;
    let mut sum: f64 = (1..n).map(|k| (k as f64).powf(-s)).sum();
    let nf = n as f64;
    sum += nf.powf(1.0 - s) / (s - 1.0) + 0.5 * nf.powf(-s);
    let b = bernoulli_table(24);
    let mut rising = s; // s(s+1)...(s+2j-2)
    let mut fact = 2.0; // (2j)!
    for j in 1..=12u32 {
        let b2j = super::scalar::rat_to_f64(&b[2 * j as usize]);
        sum += b2j / fact * rising * nf.powf(-s - 2.0 * j as f64 + 1.0);
        rising *= (s + 2.0 * j as f64 - 1.0) * (s + 2.0 * j as f64);
        fact *= (2 * j + 1) as f64 * (2 * j + 2) as f64;
    }
    sum
}

/// Digamma at a positive integer: ψ(p) = −γ + H_{p−1}.
pub fn digamma_int(p: u32) -> f64 {
    const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
    -EULER_GAMMA + (1..p).map(|k| 1.0 / k as f64).sum::<f64>()
}
