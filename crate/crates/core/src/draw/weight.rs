use crate::error::{Error, Result};

/// The golden ratio.
pub const PHI: f64 = 1.618033988749894848;

/// log2 of the golden ratio: the exponent of the 2-tree ratio bound.
pub const LOG2_PHI: f64 = 0.6942419136306174;

/// Weight function constants for the 2-tree recursion.
#[derive(Clone, Copy, Debug)]
pub struct GoldenWeight {
    pub phi: f64,
    pub exponent: f64,
}

impl Default for GoldenWeight {
    fn default() -> Self {
        GoldenWeight {
            phi: PHI,
            exponent: LOG2_PHI,
        }
    }
}

/// f(n) = n^(log2 phi). Superadditive under the decomposition bounds:
/// f(x) + f(y) <= f(n) whenever x <= n/2 and y <= (n - x)/2 (or
/// symmetrically).
pub fn f_weight(n: u64) -> Result<f64> {
    if n < 1 {
        return Err(Error::InvalidSize("f is defined for n >= 1".into()));
    }
    Ok((n as f64).powf(LOG2_PHI))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_values() {
        assert_eq!(f_weight(1).unwrap(), 1.0);
        assert!((f_weight(2).unwrap() - PHI).abs() < 1e-12 * PHI);
        assert!(f_weight(0).is_err());
    }

    #[test]
    fn monotone() {
        let mut prev = 0.0;
        for n in 1..500 {
            let v = f_weight(n).unwrap();
            assert!(v > prev);
            prev = v;
        }
    }

    #[test]
    fn chan_superadditivity_exhaustive() {
        // f(x) + f(y) <= f(n) under the decomposition hypotheses, checked
        // exhaustively for n <= 200 at 1e-12 relative tolerance.
        for n in 1..=200u64 {
            let fn_ = f_weight(n).unwrap();
            for x in 1..=n {
                for y in 1..=n {
                    let first = 2 * x <= n && 2 * y <= n - x;
                    let second = 2 * y <= n && 2 * x <= n - y;
                    if first || second {
                        let sum = f_weight(x).unwrap() + f_weight(y).unwrap();
                        assert!(
                            sum <= fn_ * (1.0 + 1e-12),
                            "x={x} y={y} n={n}: {sum} > {fn_}"
                        );
                    }
                }
            }
        }
    }
}
