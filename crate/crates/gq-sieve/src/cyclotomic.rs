//! Cyclotomic polynomials and their exact evaluation. Group orders of
//! the finite groups of Lie type factor as q^N times a product of
//! cyclotomic values, which is how the case data encodes them.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num::BigInt;

use crate::poly::IntPoly;

static CACHE: OnceLock<Mutex<HashMap<u32, IntPoly>>> = OnceLock::new();

/// The n-th cyclotomic polynomial, computed as (x^n - 1) divided by the
/// product of the lower cyclotomic polynomials at the divisors of n.
pub fn cyclotomic(n: u32) -> IntPoly {
    assert!(n >= 1, "cyclotomic index must be positive");
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().unwrap().get(&n) {
        return hit.clone();
    }
    let result = if n == 1 {
        IntPoly::from_i64(&[-1, 1])
    } else {
        let mut xn1 = IntPoly::monomial(BigInt::from(1), n as usize);
        xn1 = xn1.sub(&IntPoly::one());
        let mut divisor = IntPoly::one();
        for d in 1..n {
            if n % d == 0 {
                divisor = divisor.mul(&cyclotomic(d));
            }
        }
        xn1.div_exact(&divisor)
            .expect("cyclotomic factorization is exact")
    };
    cache.lock().unwrap().insert(n, result.clone());
    result
}

/// Exact value of the n-th cyclotomic polynomial at q.
pub fn phi_eval(n: u32, q: &BigInt) -> BigInt {
    cyclotomic(n).eval(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::big;

    #[test]
    fn small_cyclotomics_match_closed_forms() {
        assert_eq!(cyclotomic(1), IntPoly::from_i64(&[-1, 1]));
        assert_eq!(cyclotomic(2), IntPoly::from_i64(&[1, 1]));
        assert_eq!(cyclotomic(3), IntPoly::from_i64(&[1, 1, 1]));
        assert_eq!(cyclotomic(4), IntPoly::from_i64(&[1, 0, 1]));
        assert_eq!(cyclotomic(6), IntPoly::from_i64(&[1, -1, 1]));
        assert_eq!(cyclotomic(8), IntPoly::from_i64(&[1, 0, 0, 0, 1]));
        assert_eq!(cyclotomic(9), IntPoly::from_i64(&[1, 0, 0, 1, 0, 0, 1]));
        assert_eq!(cyclotomic(12), IntPoly::from_i64(&[1, 0, -1, 0, 1]));
    }

    #[test]
    fn phi_values() {
        assert_eq!(phi_eval(6, &big(3)), big(7));
        assert_eq!(phi_eval(12, &big(2)), big(13));
        assert_eq!(phi_eval(5, &big(2)), big(31));
    }

    #[test]
    fn product_over_divisors_of_six() {
        let mut prod = big(1);
        for d in [1u32, 2, 3, 6] {
            prod *= phi_eval(d, &big(2));
        }
        assert_eq!(prod, big(63));
    }

    #[test]
    fn product_identity_full_range() {
        // prod_{d | n} Phi_d(q) = q^n - 1 for n <= 30, q in 2..=9
        for n in 1u32..=30 {
            for q in 2i64..=9 {
                let mut prod = big(1);
                for d in 1..=n {
                    if n % d == 0 {
                        prod *= phi_eval(d, &big(q));
                    }
                }
                assert_eq!(prod, big(q).pow(n) - 1, "n={n} q={q}");
            }
        }
    }
}
