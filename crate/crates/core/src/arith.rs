//! Small integer helpers shared by the other modules.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow};

pub fn gcd(a: u32, b: u32) -> u32 {
    a.gcd(&b)
}

/// Positive divisors of `n` in increasing order.
pub fn divisors(n: u32) -> Vec<u32> {
    (1..=n).filter(|d| n % d == 0).collect()
}

/// Prime factorization as `(p, e)` pairs with increasing `p`.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n) == vec![(n, 1)]
}

pub fn is_prime_power(n: u64) -> bool {
    factorize(n).len() == 1
}

/// Exponent of the prime `p` in `n` (`n > 0`).
pub fn ord(p: u64, mut n: u64) -> u32 {
    let mut e = 0;
    while n % p == 0 {
        n /= p;
        e += 1;
    }
    e
}

/// Number of prime factors of `n` counted with multiplicity.
pub fn omega_big(n: u64) -> u32 {
    factorize(n).iter().map(|&(_, e)| e).sum()
}

pub fn mobius(n: u64) -> i64 {
    let f = factorize(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Number of monic irreducible polynomials of degree `d` over `F_q`.
pub fn irreducible_count(q: &BigInt, d: u32) -> BigInt {
    let mut total = BigInt::from(0);
    for e in divisors(d) {
        let mu = mobius(e as u64);
        if mu != 0 {
            total += BigInt::from(mu) * Pow::pow(q, d / e);
        }
    }
    total / BigInt::from(d)
}

pub fn pow(base: &BigInt, exp: u32) -> BigInt {
    Pow::pow(base, exp)
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// `∏_{j=1}^{k} (base^j - 1)`.
pub fn q_factorial(base: &BigInt, k: u32) -> BigInt {
    let mut acc = BigInt::one();
    let mut power = BigInt::one();
    for _ in 0..k {
        power *= base;
        acc *= &power - BigInt::one();
    }
    acc
}

/// All vectors of `parts` non-negative integers summing to `total`, in
/// lexicographically decreasing order.
pub fn weak_compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    fn go(total: u32, parts: usize, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if parts == 1 {
            prefix.push(total);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for first in (0..=total).rev() {
            prefix.push(first);
            go(total - first, parts - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if parts > 0 {
        go(total, parts, &mut Vec::with_capacity(parts), &mut out);
    } else if total == 0 {
        out.push(Vec::new());
    }
    out
}

/// `C(n, k)`.
pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn necklace_counts() {
        let two = BigInt::from(2);
        let counts: Vec<_> = (1..=6).map(|d| irreducible_count(&two, d)).collect();
        let expected: Vec<BigInt> = [2, 1, 2, 3, 6, 9].iter().map(|&c| BigInt::from(c)).collect();
        assert_eq!(counts, expected);
        assert_eq!(irreducible_count(&BigInt::from(3), 2), BigInt::from(3));
    }

    #[test]
    fn compositions_and_q_factorials() {
        assert_eq!(weak_compositions(2, 2), vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
        assert_eq!(weak_compositions(0, 0), vec![Vec::<u32>::new()]);
        assert_eq!(q_factorial(&BigInt::from(3), 2), BigInt::from(16));
        assert_eq!(binomial(6, 2), BigInt::from(15));
    }

    #[test]
    fn factorization_helpers() {
        assert_eq!(factorize(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(omega_big(12), 3);
        assert!(is_prime_power(9));
        assert!(!is_prime_power(6));
        assert_eq!(ord(2, 24), 3);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
    }
}
