//! Poisson weights |Cₙ|² = e^{−λ} λⁿ / n! of a coherent state with λ = |α|².

/// ln(n!) for n = 0..len.
pub fn ln_factorials(len: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(len);
    let mut acc = 0.0;
    for n in 0..len {
        if n > 1 {
            acc += (n as f64).ln();
        }
        out.push(acc);
    }
    out
}

pub fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// Poisson probabilities for n = 0..len.
pub fn weights(lambda: f64, len: usize) -> Vec<f64> {
    if lambda == 0.0 {
        let mut w = vec![0.0; len];
        if len > 0 {
            w[0] = 1.0;
        }
        return w;
    }
    let ln_lambda = lambda.ln();
    ln_factorials(len)
        .iter()
        .enumerate()
        .map(|(n, lf)| (-lambda + n as f64 * ln_lambda - lf).exp())
        .collect()
}

/// Σ_{n ≥ start} of the Poisson probabilities, summed directly from the tail.
pub fn tail(lambda: f64, start: usize) -> f64 {
    if lambda == 0.0 {
        return if start == 0 { 1.0 } else { 0.0 };
    }
    let mut term = (-lambda + start as f64 * lambda.ln() - ln_factorial(start)).exp();
    let mut sum = 0.0;
    let mut n = start;
    loop {
        sum += term;
        n += 1;
        term *= lambda / n as f64;
        if (n as f64 > lambda && term <= sum * 1e-20) || term == 0.0 {
            break;
        }
        if n > start + 100_000 {
            break;
        }
    }
    sum
}

/// Smallest cutoff whose tail beyond it is at most `tol`.
pub fn required_cutoff(lambda: f64, tol: f64) -> usize {
    let mut n = 1;
    while tail(lambda, n) > tol {
        n += 1;
    }
    n
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_one() {
        for lambda in [0.0, 0.5, 4.0, 9.0, 36.0] {
            let s: f64 = weights(lambda, 200).iter().sum();
            assert!((s - 1.0).abs() < 1e-13, "{lambda}: {s}");
        }
    }

    #[test]
    fn tail_matches_complement() {
        for lambda in [1.0, 4.0, 9.0] {
            let head: f64 = weights(lambda, 12).iter().sum();
            assert!((tail(lambda, 12) - (1.0 - head)).abs() < 1e-14);
        }
    }

    #[test]
    fn tail_at_thirty_terms() {
        // λ = 4: P(30) = e^{-4} 4^30 / 30! ≈ 7.98e-17; the tail is of order 1e-17.
        let t = tail(4.0, 30);
        assert!(t > 5e-17 && t < 1.2e-16, "{t:e}");
        // λ = 9 leaves ≈ 3e-8 beyond 30.
        let t9 = tail(9.0, 30);
        assert!(t9 > 1e-8 && t9 < 1e-7, "{t9:e}");
        assert!(required_cutoff(9.0, 1e-12) > 30);
        assert!(required_cutoff(4.0, 1e-12) <= 30);
    }
}
