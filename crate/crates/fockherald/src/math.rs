//! Small numeric helpers shared across modules.

/// n! as an f64. Exact for n <= 18, which covers every enumeration in this
/// crate (photon numbers stay at or below the oracle bound of 12).
pub(crate) fn factorial(n: u32) -> f64 {
    (1..=n).fold(1.0, |acc, i| acc * f64::from(i))
}

/// Binomial coefficient C(n, k) as an f64, computed multiplicatively so that
/// every intermediate value is an integer representable exactly.
pub(crate) fn binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * f64::from(n - i) / f64::from(i + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorial_small_values() {
        assert_eq!(factorial(0), 1.0);
        assert_eq!(factorial(1), 1.0);
        assert_eq!(factorial(5), 120.0);
        assert_eq!(factorial(12), 479_001_600.0);
    }

    #[test]
    fn binomial_matches_pascal() {
        for n in 0..16u32 {
            for k in 0..=n {
                let pascal = if k == 0 || k == n {
                    1.0
                } else {
                    binomial(n - 1, k - 1) + binomial(n - 1, k)
                };
                assert_eq!(binomial(n, k), pascal, "C({n},{k})");
            }
        }
        assert_eq!(binomial(3, 5), 0.0);
    }
}
