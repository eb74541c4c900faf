//! Truncated multivariate power series with exact rational coefficients.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::basefield::Rational;

/// A power series in a fixed set of variables where every exponent is
/// capped; terms beyond a cap are discarded as soon as they appear.
///
/// Exponent tuples are packed into a mixed-radix `u128`, so iteration
/// follows the packed order and is deterministic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedMultiSeries {
    caps: Vec<u32>,
    strides: Vec<u128>,
    terms: BTreeMap<u128, Rational>,
}

impl TruncatedMultiSeries {
    /// The constant series `1`. `None` if the exponent box does not fit the
    /// packed key.
    pub fn one(caps: Vec<u32>) -> Option<Self> {
        let mut strides = Vec::with_capacity(caps.len());
        let mut stride: u128 = 1;
        for &c in &caps {
            strides.push(stride);
            stride = stride.checked_mul(c as u128 + 1)?;
        }
        let mut terms = BTreeMap::new();
        terms.insert(0, Rational::from_integer(1.into()));
        Some(TruncatedMultiSeries { caps, strides, terms })
    }

    pub fn caps(&self) -> &[u32] {
        &self.caps
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn exponent(&self, key: u128, axis: usize) -> u32 {
        ((key / self.strides[axis]) % (self.caps[axis] as u128 + 1)) as u32
    }

    fn pack(&self, exps: &[u32]) -> Option<u128> {
        if exps.len() != self.caps.len() || exps.iter().zip(&self.caps).any(|(e, c)| e > c) {
            return None;
        }
        Some(exps.iter().zip(&self.strides).map(|(&e, &s)| e as u128 * s).sum())
    }

    /// Multiplies by `Σ_ν c_ν · (∏_{a ∈ axes} Z_a)^ν`, where `coeffs[ν] = c_ν`.
    pub fn mul_monomial_series(&mut self, axes: &[usize], coeffs: &[Rational]) {
        let step: u128 = axes.iter().map(|&a| self.strides[a]).sum();
        let mut out: BTreeMap<u128, Rational> = BTreeMap::new();
        for (&key, value) in &self.terms {
            let room = axes
                .iter()
                .map(|&a| self.caps[a] - self.exponent(key, a))
                .min()
                .unwrap_or(0) as usize;
            for (nu, c) in coeffs.iter().enumerate().take(room + 1) {
                if c.is_zero() {
                    continue;
                }
                let slot = out.entry(key + nu as u128 * step).or_insert_with(Rational::zero);
                *slot += value * c;
            }
        }
        out.retain(|_, v| !v.is_zero());
        self.terms = out;
    }

    /// Drops every term whose exponents fail `keep`.
    pub fn retain(&mut self, mut keep: impl FnMut(&[u32]) -> bool) {
        let caps = self.caps.clone();
        let strides = self.strides.clone();
        let mut exps = vec![0u32; caps.len()];
        self.terms.retain(|&k, _| {
            for a in 0..caps.len() {
                exps[a] = ((k / strides[a]) % (caps[a] as u128 + 1)) as u32;
            }
            keep(&exps)
        });
    }

    pub fn coefficient(&self, exps: &[u32]) -> Rational {
        self.pack(exps)
            .and_then(|k| self.terms.get(&k).cloned())
            .unwrap_or_else(Rational::zero)
    }

    /// Terms as `(exponents, coefficient)` in packed order.
    pub fn terms(&self) -> impl Iterator<Item = (Vec<u32>, &Rational)> + '_ {
        self.terms.iter().map(move |(&k, v)| {
            let exps = (0..self.caps.len()).map(|a| self.exponent(k, a)).collect();
            (exps, v)
        })
    }
}

/// Product of two univariate truncated series, keeping degrees `≤ cap`.
pub fn mul_truncated(a: &[Rational], b: &[Rational], cap: usize) -> Vec<Rational> {
    let len = (a.len() + b.len()).saturating_sub(1).min(cap + 1);
    let mut out = vec![Rational::zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        for (j, y) in b.iter().enumerate().take(len - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// `a^k` truncated at degree `cap`.
pub fn pow_truncated(a: &[Rational], k: u32, cap: usize) -> Vec<Rational> {
    let mut acc = vec![Rational::from_integer(1.into())];
    for _ in 0..k {
        acc = mul_truncated(&acc, a, cap);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn int(n: i64) -> Rational {
        Rational::from_integer(BigInt::from(n))
    }

    #[test]
    fn binomial_square() {
        // (1 + XY)^2 with caps X ≤ 2, Y ≤ 1
        let mut s = TruncatedMultiSeries::one(vec![2, 1]).unwrap();
        s.mul_monomial_series(&[0, 1], &[int(1), int(1)]);
        s.mul_monomial_series(&[0, 1], &[int(1), int(1)]);
        assert_eq!(s.coefficient(&[0, 0]), int(1));
        assert_eq!(s.coefficient(&[1, 1]), int(2));
        // truncated by the cap on Y
        assert_eq!(s.coefficient(&[2, 2]), int(0));
        assert_eq!(s.len(), 2);
    }

    #[test]
    fn univariate_truncation() {
        let a = vec![int(1), int(1)];
        assert_eq!(pow_truncated(&a, 3, 10), vec![int(1), int(3), int(3), int(1)]);
        assert_eq!(pow_truncated(&a, 3, 1), vec![int(1), int(3)]);
    }

    #[test]
    fn terms_unpack() {
        let mut s = TruncatedMultiSeries::one(vec![3, 2, 2]).unwrap();
        s.mul_monomial_series(&[0, 2], &[int(1), int(5)]);
        let t: Vec<_> = s.terms().map(|(e, c)| (e, c.clone())).collect();
        assert_eq!(t, vec![(vec![0, 0, 0], int(1)), (vec![1, 0, 1], int(5))]);
    }
}
