use crate::error::{Error, Result};

/// Euler's constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// τ(n) for 0 ≤ n ≤ N (τ(0) = 0), by sieve.
pub fn divisor_coeffs(n: usize) -> Result<Vec<u32>> {
    if n == 0 {
        return Err(Error::Invalid("divisor_coeffs requires N ≥ 1".into()));
    }
    let mut tau = vec![0u32; n + 1];
    for d in 1..=n {
        for m in (d..=n).step_by(d) {
            tau[m] += 1;
        }
    }
    Ok(tau)
}

/// Σ_{n ≤ N} τ(n) by the hyperbola identity 2 Σ_{k ≤ √N} ⌊N/k⌋ − ⌊√N⌋².
pub fn divisor_summatory(n: u64) -> u64 {
    let s = n.isqrt();
    2 * (1..=s).map(|k| n / k).sum::<u64>() - s * s
}

/// Comparison of Σ_{n ≤ N} τ(n) with N log N + (2γ − 1)N.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DivisorAsymptotics {
    pub n: u64,
    pub sum: u64,
    pub main_term: f64,
    /// Δ(N) = sum − main term.
    pub remainder: f64,
    /// |Δ(N)| / √N.
    pub normalized: f64,
}

pub fn divisor_asymptotics(tau: &[u32]) -> DivisorAsymptotics {
    let n = (tau.len() - 1) as u64;
    let sum: u64 = tau.iter().map(|&t| t as u64).sum();
    let nf = n as f64;
    let main_term = nf * nf.ln() + (2.0 * EULER_GAMMA - 1.0) * nf;
    let remainder = sum as f64 - main_term;
    DivisorAsymptotics {
        n,
        sum,
        main_term,
        remainder,
        normalized: remainder.abs() / nf.sqrt(),
    }
}

/// Divisors of n in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}
