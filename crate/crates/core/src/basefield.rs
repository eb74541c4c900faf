//! The base field `K` together with its distinguished place `∞`.
//!
//! A base field is described by exactly the data that the mass formula and
//! its constant-extension analogues consume: the constant field size `q`,
//! the numerator `P(T)` of the zeta function, the degree of `∞`, and an
//! optional explicit `#Pic(A)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith;
use crate::error::{Error, Result};

/// Exact rational number; every mass, zeta value and local factor is one.
pub type Rational = BigRational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BaseKind {
    /// `K = F_q(T)` with `P(T) = 1`.
    Rational,
    /// Arbitrary `K`, given through its L-polynomial.
    Custom,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BaseField {
    kind: BaseKind,
    q: BigInt,
    /// Coefficients of `P(T)`, constant term first.
    l_poly: Vec<BigInt>,
    infinity_degree: u32,
    pic_override: Option<BigInt>,
}

impl BaseField {
    pub fn rational(q: u64, infinity_degree: u32) -> Result<Self> {
        let base = BaseField {
            kind: BaseKind::Rational,
            q: BigInt::from(q),
            l_poly: vec![BigInt::one()],
            infinity_degree,
            pic_override: None,
        };
        base.checked()
    }

    pub fn custom(
        q: u64,
        l_poly: Vec<i64>,
        infinity_degree: u32,
        pic_override: Option<u64>,
    ) -> Result<Self> {
        let base = BaseField {
            kind: BaseKind::Custom,
            q: BigInt::from(q),
            l_poly: l_poly.into_iter().map(BigInt::from).collect(),
            infinity_degree,
            pic_override: pic_override.map(BigInt::from),
        };
        base.checked()
    }

    fn checked(self) -> Result<Self> {
        let violations = self.validate();
        if violations.is_empty() {
            Ok(self)
        } else {
            Err(Error::InvalidSpec(violations))
        }
    }

    pub fn kind(&self) -> BaseKind {
        self.kind
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }

    pub fn l_poly(&self) -> &[BigInt] {
        &self.l_poly
    }

    pub fn infinity_degree(&self) -> u32 {
        self.infinity_degree
    }

    pub fn pic_override(&self) -> Option<&BigInt> {
        self.pic_override.as_ref()
    }

    /// Genus of `K`, i.e. half the degree of `P(T)`.
    pub fn genus(&self) -> usize {
        (self.l_poly.len() - 1) / 2
    }

    pub fn validate(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.q < BigInt::from(2) {
            out.push(format!("base.q: {} is smaller than 2", self.q));
        } else if let Some(q) = self.q.to_u64() {
            if !arith::is_prime_power(q) {
                out.push(format!("base.q: {q} is not a prime power"));
            }
        }
        if self.infinity_degree == 0 {
            out.push("base.infinity_degree: must be positive".to_string());
        }
        match self.l_poly.first() {
            Some(c) if c.is_one() => {}
            _ => out.push("base.l_polynomial: constant term must be 1".to_string()),
        }
        if !self.l_poly.is_empty() && (self.l_poly.len() - 1) % 2 != 0 {
            out.push(format!(
                "base.l_polynomial: degree {} is odd",
                self.l_poly.len() - 1
            ));
        }
        if self.kind == BaseKind::Rational && self.l_poly != [BigInt::one()] {
            out.push("base.l_polynomial: a rational function field has P(T) = 1".to_string());
        }
        if let Some(p) = &self.pic_override {
            if !p.is_positive() {
                out.push("base.pic_order: must be positive".to_string());
            }
        }
        out
    }

    /// Non-fatal remarks about the descriptor: a failed functional equation
    /// and use of the default `#Pic(A)` convention outside the genus-0,
    /// `deg ∞ = 1` case.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !self.satisfies_functional_equation() {
            out.push("L-polynomial does not satisfy q^g P(1/(qT)) = T^{-2g} P(T)".to_string());
        }
        if self.pic_override.is_none() && (self.infinity_degree > 1 || self.genus() > 0) {
            out.push(format!(
                "#Pic(A) taken as P(1)·deg ∞ = {}",
                self.pic_order()
            ));
        }
        out
    }

    /// Checks `c_{2g-k} = q^{g-k} c_k` for `0 ≤ k ≤ g`.
    pub fn satisfies_functional_equation(&self) -> bool {
        let g = self.genus();
        (0..=g).all(|k| {
            let lhs = &self.l_poly[2 * g - k];
            let rhs = &self.l_poly[k] * arith::pow(&self.q, (g - k) as u32);
            *lhs == rhs
        })
    }

    /// `P(x)`.
    pub fn eval_l_poly(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.l_poly.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// `ζ_K(-i) = P(q^i) / ((1 - q^i)(1 - q^{i+1}))`.
    pub fn zeta_at_negative(&self, i: u32) -> Rational {
        let qi = arith::pow(&self.q, i);
        let qi1 = &qi * &self.q;
        let one = BigInt::one();
        Rational::new(self.eval_l_poly(&qi), (&one - &qi) * (&one - qi1))
    }

    /// `#Pic(A)`: the override when present, else `P(1)·deg ∞`.
    pub fn pic_order(&self) -> BigInt {
        match &self.pic_override {
            Some(p) => p.clone(),
            None => self.eval_l_poly(&BigInt::one()) * BigInt::from(self.infinity_degree),
        }
    }

    /// The constant field extension `L_s = K·F_{q^s}`.
    ///
    /// The reciprocal roots of `P` are raised to the `s`-th power through
    /// Newton's identities. An explicit `#Pic(A)` does not carry over to
    /// `L_s` unless `s = 1`.
    pub fn constant_extension(&self, s: u32) -> Result<BaseField> {
        if s == 1 {
            return Ok(self.clone());
        }
        if arith::gcd(s, self.infinity_degree) != 1 {
            return Err(Error::ExtensionNotSupported {
                s,
                infinity_degree: self.infinity_degree,
            });
        }
        Ok(BaseField {
            kind: self.kind,
            q: arith::pow(&self.q, s),
            l_poly: power_reciprocal_roots(&self.l_poly, s),
            infinity_degree: self.infinity_degree,
            pic_override: None,
        })
    }
}

/// Given `P(T) = ∏(1 - α_i T)`, returns the coefficients of `∏(1 - α_i^s T)`.
fn power_reciprocal_roots(l_poly: &[BigInt], s: u32) -> Vec<BigInt> {
    let deg = l_poly.len() - 1;
    if deg == 0 {
        return vec![BigInt::one()];
    }
    let sign = |k: usize| if k % 2 == 0 { BigInt::one() } else { -BigInt::one() };
    // elementary symmetric functions of the α_i
    let e: Vec<BigInt> = (0..=deg).map(|k| sign(k) * &l_poly[k]).collect();

    let top = deg * s as usize;
    let mut p = vec![BigInt::zero(); top + 1];
    for k in 1..=top {
        let mut acc = BigInt::zero();
        for i in 1..k.min(deg + 1) {
            acc += sign(i - 1) * &e[i] * &p[k - i];
        }
        if k <= deg {
            acc += sign(k - 1) * BigInt::from(k) * &e[k];
        }
        p[k] = acc;
    }

    let p_new: Vec<BigInt> = (0..=deg).map(|k| p[k * s as usize].clone()).collect();
    let mut e_new = vec![Rational::one(); deg + 1];
    for k in 1..=deg {
        let mut acc = Rational::zero();
        for i in 1..=k {
            acc += Rational::from(sign(i - 1) * &p_new[i]) * &e_new[k - i];
        }
        e_new[k] = acc / Rational::from(BigInt::from(k));
    }
    e_new
        .into_iter()
        .enumerate()
        .map(|(k, ek)| {
            assert!(ek.is_integer(), "Newton inversion produced a non-integer coefficient");
            sign(k) * ek.to_integer()
        })
        .collect()
}
