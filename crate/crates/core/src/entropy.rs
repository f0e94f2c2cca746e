//! Base-2 entropy primitives.
//!
//! All entropies in this crate are measured in bits, so the binary entropy of
//! a fair coin is exactly 1.

use crate::error::{Error, Result};

/// `-x log2 x` for `x` in `[0, 1]`, with the continuous extension `f(0) = 0`.
pub fn entropy_f(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain {
            value: x,
            domain: "[0, 1]",
        });
    }
    Ok(f(x))
}

/// Binary entropy `h(p) = f(p) + f(1 - p)` in bits.
pub fn binary_entropy(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain {
            value: p,
            domain: "[0, 1]",
        });
    }
    Ok(h(p))
}

/// Unchecked `-x log2 x`. Callers guarantee `x` is in `[0, 1]`.
#[inline]
pub(crate) fn f(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        -x * x.log2()
    }
}

/// Unchecked binary entropy.
#[inline]
pub(crate) fn h(p: f64) -> f64 {
    f(p) + f(1.0 - p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn f_endpoints_and_half() {
        assert_eq!(entropy_f(0.0).unwrap(), 0.0);
        assert_eq!(entropy_f(1.0).unwrap(), 0.0);
        assert_eq!(entropy_f(0.5).unwrap(), 0.5);
    }

    #[test]
    fn f_rejects_out_of_domain() {
        assert!(entropy_f(-1e-9).is_err());
        assert!(entropy_f(1.0 + 1e-9).is_err());
        assert!(entropy_f(f64::NAN).is_err());
    }

    #[test]
    fn binary_entropy_values() {
        assert_eq!(binary_entropy(0.5).unwrap(), 1.0);
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        let direct = -(0.1f64 * 0.1f64.log2()) - 0.9 * 0.9f64.log2();
        let via_f = entropy_f(0.1).unwrap() + entropy_f(0.9).unwrap();
        let h01 = binary_entropy(0.1).unwrap();
        assert!((h01 - direct).abs() < 1e-15);
        assert!((h01 - via_f).abs() < 1e-15);
        assert!((h01 - 0.468_995_593_589_281_2).abs() < 1e-15);
        assert!(binary_entropy(2.0).is_err());
    }

    proptest! {
        #[test]
        fn f_is_concave(x in 0.0f64..=1.0, y in 0.0f64..=1.0, t in 0.0f64..=1.0) {
            let mid = t * x + (1.0 - t) * y;
            let lhs = entropy_f(mid.clamp(0.0, 1.0)).unwrap();
            let rhs = t * entropy_f(x).unwrap() + (1.0 - t) * entropy_f(y).unwrap();
            prop_assert!(lhs >= rhs - 1e-12);
        }

        #[test]
        fn binary_entropy_symmetric(p in 0.0f64..=1.0) {
            // only pairs whose complement round-trips are exactly representable
            prop_assume!(1.0 - (1.0 - p) == p);
            prop_assert_eq!(binary_entropy(p).unwrap(), binary_entropy(1.0 - p).unwrap());
        }
    }
}
