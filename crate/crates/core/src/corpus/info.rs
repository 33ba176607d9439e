//! Information yield of a partition: a split of n elements into r and
//! n - r tells log2 of C(n, r) bits about the final order.

use statrs::function::gamma::ln_gamma;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("split point {r} is outside 0..={n}")]
pub struct SplitOutOfRange {
    pub n: u64,
    pub r: u64,
}

fn ln_factorial(k: u64) -> f64 {
    ln_gamma(k as f64 + 1.0)
}

/// `log2(n! / (r! (n - r)!))`, through log-gamma so that no factorial is
/// ever formed.
pub fn info_yield(n: u64, r: u64) -> Result<f64, SplitOutOfRange> {
    if r > n {
        return Err(SplitOutOfRange { n, r });
    }
    if r == 0 || r == n {
        return Ok(0.0);
    }
    let nats = ln_factorial(n) - ln_factorial(r) - ln_factorial(n - r);
    Ok(nats / std::f64::consts::LN_2)
}

/// Yield of the best split over the mean yield when r is uniform on
/// `1..=n`. Tends to `2 ln 2` as n grows.
pub fn info_yield_ratio(n: u64) -> f64 {
    assert!(n >= 2, "the ratio needs at least two elements");
    let best = info_yield(n, n / 2).expect("n / 2 <= n");
    let mean = (1..=n).map(|r| info_yield(n, r).expect("r <= n")).sum::<f64>() / n as f64;
    best / mean
}

/// Every r maximizing the yield for n.
pub fn argmax_split(n: u64) -> Vec<u64> {
    let ys: Vec<f64> = (0..=n).map(|r| info_yield(n, r).expect("r <= n")).collect();
    let best = ys.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    // log-gamma rounding can separate C(n, r) and C(n, n - r) by an ulp
    let tol = 1e-9 * best.abs().max(1.0);
    (0..=n).filter(|&r| best - ys[r as usize] <= tol).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Exact binomial as an oracle for small n.
    fn binomial(n: u64, r: u64) -> f64 {
        (0..r).fold(1.0, |acc, k| acc * (n - k) as f64 / (k + 1) as f64)
    }

    #[test]
    fn matches_the_direct_binomial() {
        assert_eq!(info_yield(10, 0).unwrap(), 0.0);
        assert!((info_yield(4, 2).unwrap() - 6f64.log2()).abs() < 1e-12);
        for n in 1..60 {
            for r in 0..=n {
                let want = binomial(n, r).log2();
                assert!((info_yield(n, r).unwrap() - want).abs() < 1e-9, "{n} {r}");
            }
        }
        assert!(info_yield(3, 4).is_err());
    }

    #[test]
    fn symmetric_and_maximal_at_the_middle() {
        for n in [1, 2, 7, 100] {
            for r in 0..=n {
                assert!((info_yield(n, r).unwrap() - info_yield(n, n - r).unwrap()).abs() < 1e-9);
            }
            let arg = argmax_split(n);
            assert!(arg.contains(&(n / 2)) && arg.iter().all(|&r| r == n / 2 || r == n.div_ceil(2)), "{n} {arg:?}");
        }
    }

    #[test]
    fn ratio_exceeds_one_and_converges() {
        for n in 3..50 {
            assert!(info_yield_ratio(n) > 1.0);
        }
        let target = 2.0 * std::f64::consts::LN_2;
        assert!((info_yield_ratio(200_000) - target).abs() < (info_yield_ratio(1000) - target).abs());
    }
}
