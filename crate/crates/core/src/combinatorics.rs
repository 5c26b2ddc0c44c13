//! Factorials, double factorials and friends, exact and in log space.

use num_bigint::BigUint;
use num_traits::One;

pub fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

/// `(n-1)!!` for even `n` (the number of perfect matchings of `n` points);
/// `1` for `n = 0`.
pub fn matchings(n: u64) -> BigUint {
    debug_assert!(n % 2 == 0);
    let mut acc = BigUint::one();
    let mut k = n.saturating_sub(1);
    while k > 1 {
        acc *= k;
        k -= 2;
    }
    acc
}

/// Falling factorial `(n)_k = n (n-1) ... (n-k+1)`; zero when `k > n`.
pub fn falling(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::ZERO;
    }
    ((n - k + 1)..=n).fold(BigUint::one(), |acc, j| acc * j)
}

/// `((n))_k = (n-1)!!/(n-k-1)!! = (n-1)(n-3)...(n-k+1)` for even `k`.
pub fn double_falling(n: u64, k: u64) -> BigUint {
    debug_assert!(k % 2 == 0);
    if k > n {
        return BigUint::ZERO;
    }
    let mut acc = BigUint::one();
    let mut j = 0;
    while j < k {
        acc *= n - 1 - j;
        j += 2;
    }
    acc
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::ZERO;
    }
    falling(n, k) / factorial(k)
}

/// `n! / prod(parts!)`; the parts must sum to `n`.
pub fn multinomial(parts: &[u64]) -> BigUint {
    let n: u64 = parts.iter().sum();
    parts
        .iter()
        .fold(factorial(n), |acc, &p| acc / factorial(p))
}

pub fn ln_factorial(n: u64) -> f64 {
    if n < 2 {
        0.0
    } else if n < 64 {
        (2..=n).map(|k| (k as f64).ln()).sum()
    } else {
        libm::lgamma(n as f64 + 1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert_eq!(factorial(5), BigUint::from(120u32));
        assert_eq!(matchings(6), BigUint::from(15u32));
        assert_eq!(matchings(0), BigUint::one());
        assert_eq!(falling(5, 2), BigUint::from(20u32));
        assert_eq!(falling(2, 3), BigUint::ZERO);
        assert_eq!(double_falling(6, 4), BigUint::from(15u32));
        assert_eq!(binomial(6, 3), BigUint::from(20u32));
        assert_eq!(multinomial(&[2, 1, 1]), BigUint::from(12u32));
    }

    #[test]
    fn ln_factorial_agrees_across_branches() {
        let exact: f64 = (2..=100u64).map(|k| (k as f64).ln()).sum();
        assert!((ln_factorial(100) - exact).abs() < 1e-9);
        assert!((ln_factorial(3) - 6f64.ln()).abs() < 1e-15);
    }
}
