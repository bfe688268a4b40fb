use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

/// Arbitrary-precision signed integer used for binomials and subgroup indices.
pub type BigIntVal = BigInt;

pub fn factorial(n: u64) -> BigIntVal {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// `C(n, k)`, zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigIntVal {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `v_p(x)` by repeated division; `None` for zero.
pub fn p_adic_valuation(x: &BigIntVal, p: u64) -> Option<u32> {
    if x.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut v = 0;
    let mut y = x.clone();
    loop {
        let (q, r) = y.div_rem(&p);
        if !r.is_zero() {
            return Some(v);
        }
        y = q;
        v += 1;
    }
}

/// `v_p(n!)` via Legendre's digit-sum formula `(n - s_p(n)) / (p - 1)`.
pub fn legendre_valuation(n: u64, p: u64) -> u64 {
    let mut s = 0;
    let mut m = n;
    while m > 0 {
        s += m % p;
        m /= p;
    }
    (n - s) / (p - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert_eq!(binomial(5, 3), BigInt::from(10));
        assert_eq!(binomial(3, 5), BigInt::zero());
        assert_eq!(factorial(6), BigInt::from(720));
        assert_eq!(p_adic_valuation(&BigInt::from(48), 2), Some(4));
        assert_eq!(p_adic_valuation(&BigInt::zero(), 2), None);
    }

    #[test]
    fn legendre_matches_direct_factorization() {
        for p in [2u64, 3, 5, 7] {
            for n in 0..60 {
                let direct = p_adic_valuation(&factorial(n), p).unwrap() as u64;
                assert_eq!(legendre_valuation(n, p), direct, "n={n} p={p}");
            }
        }
    }
}
