//! Definite central simple algebras `D/K` given by their local invariants.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;

use crate::arith;
use crate::basefield::{BaseField, BaseKind};
use crate::error::{Error, Result};

pub const INFINITY_LABEL: &str = "infinity";

/// Local data of `D` at one place `v`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Place {
    pub label: String,
    /// `deg v` over the constant field of the base.
    pub degree: u32,
    /// `d_v`, the index of the local division algebra.
    pub local_index: u32,
    /// `κ_v` with `inv_v(D) = κ_v / d_v`; absent on derived places.
    pub invariant_num: Option<i64>,
}

impl Place {
    pub fn new(label: impl Into<String>, degree: u32, local_index: u32) -> Self {
        Place {
            label: label.into(),
            degree,
            local_index,
            invariant_num: None,
        }
    }

    pub fn with_invariant(label: impl Into<String>, degree: u32, kappa: i64, local_index: u32) -> Self {
        Place {
            invariant_num: Some(kappa),
            ..Place::new(label, degree, local_index)
        }
    }

    pub fn is_ramified(&self) -> bool {
        self.local_index > 1
    }

    /// `N(v) = q^{deg v}`.
    pub fn norm(&self, q: &BigInt) -> BigInt {
        arith::pow(q, self.degree)
    }

    /// `ℓ_{s,v} = gcd(s, deg v)`, the number of places of `L_s` above `v`.
    pub fn split_count(&self, s: u32) -> u32 {
        arith::gcd(s, self.degree)
    }

    /// `t_{s,v} = gcd(s / ℓ_{s,v}, d_v)`.
    pub fn capacity_gain(&self, s: u32) -> u32 {
        arith::gcd(s / self.split_count(s), self.local_index)
    }

    /// `d'_v = d_v / t_{s,v}`, the local index of `D'_s` above `v`.
    pub fn derived_index(&self, s: u32) -> u32 {
        self.local_index / self.capacity_gain(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AlgebraSpec {
    pub base: BaseField,
    /// `n`, with `dim_K D = n²`.
    pub degree: u32,
    /// Places with `d_v > 1` or carrying order data; every other place has
    /// `d_v = 1`.
    pub finite_places: Vec<Place>,
    pub infinity: Place,
}

impl AlgebraSpec {
    pub fn new(base: BaseField, degree: u32, finite_places: Vec<Place>, infinity: Place) -> Self {
        AlgebraSpec {
            base,
            degree,
            finite_places,
            infinity,
        }
    }

    /// Validates and returns the spec, or every violation found.
    pub fn checked(self) -> Result<Self> {
        let violations = self.validate();
        if violations.is_empty() {
            Ok(self)
        } else {
            Err(Error::InvalidSpec(violations))
        }
    }

    /// `m_v = n / d_v`.
    pub fn capacity(&self, place: &Place) -> u32 {
        self.degree / place.local_index
    }

    pub fn place(&self, label: &str) -> Option<&Place> {
        if label == INFINITY_LABEL {
            return Some(&self.infinity);
        }
        self.finite_places.iter().find(|p| p.label == label)
    }

    pub fn places(&self) -> impl Iterator<Item = &Place> {
        self.finite_places.iter().chain(std::iter::once(&self.infinity))
    }

    pub fn ramified_places(&self) -> impl Iterator<Item = &Place> {
        self.places().filter(|p| p.is_ramified())
    }

    pub fn ensure_definite(&self) -> Result<()> {
        if self.infinity.local_index != self.degree {
            return Err(Error::NotDefinite {
                local_index: self.infinity.local_index,
                degree: self.degree,
            });
        }
        Ok(())
    }

    pub fn validate(&self) -> Vec<String> {
        let mut out = self.base.validate();
        let n = self.degree;
        if n == 0 {
            out.push("degree: must be positive".to_string());
            return out;
        }
        if self.infinity.label != INFINITY_LABEL {
            out.push(format!("infinity: label must be `{INFINITY_LABEL}`"));
        }
        if self.infinity.degree != self.base.infinity_degree() {
            out.push(format!(
                "infinity: degree {} differs from base.infinity_degree {}",
                self.infinity.degree,
                self.base.infinity_degree()
            ));
        }
        if self.infinity.local_index != n {
            out.push(format!(
                "infinity: d_∞ = {} but the algebra is definite only if d_∞ = n = {n}",
                self.infinity.local_index
            ));
        }

        let mut seen = BTreeSet::new();
        for p in self.places() {
            let at = format!("place `{}`", p.label);
            if !seen.insert(p.label.as_str()) {
                out.push(format!("{at}: duplicate label"));
            }
            if p.degree == 0 {
                out.push(format!("{at}: degree must be positive"));
            }
            if p.local_index == 0 || n % p.local_index != 0 {
                out.push(format!("{at}: local index {} does not divide n = {n}", p.local_index));
            }
            if let Some(k) = p.invariant_num {
                if k.gcd(&(p.local_index as i64)) != 1 {
                    out.push(format!("{at}: gcd(κ = {k}, d = {}) ≠ 1", p.local_index));
                }
            }
        }
        if self.finite_places.iter().any(|p| p.label == INFINITY_LABEL) {
            out.push(format!("finite places: `{INFINITY_LABEL}` is reserved"));
        }

        // reciprocity is checked whenever the user provided Hasse invariants
        if self.places().any(|p| p.invariant_num.is_some()) {
            let mut sum = Ratio::<i64>::from_integer(0);
            for p in self.places() {
                match p.invariant_num {
                    Some(k) if p.local_index > 0 => sum += Ratio::new(k, p.local_index as i64),
                    None if p.is_ramified() => {
                        out.push(format!("place `{}`: ramified but has no invariant", p.label))
                    }
                    _ => {}
                }
            }
            if !sum.is_integer() {
                out.push(format!("reciprocity: Σ inv_v(D) = {sum} is not an integer"));
            }
        }

        if self.base.kind() == BaseKind::Rational {
            let mut by_degree: BTreeMap<u32, usize> = BTreeMap::new();
            for p in self.finite_places.iter().filter(|p| p.degree > 0) {
                *by_degree.entry(p.degree).or_default() += 1;
            }
            for (d, count) in by_degree {
                let available = arith::irreducible_count(self.base.q(), d);
                if BigInt::from(count) > available {
                    out.push(format!(
                        "places: {count} places of degree {d} listed but F_{}[T] has only {available}",
                        self.base.q()
                    ));
                }
            }
        }
        out
    }

    /// `s₀ = [F_D : F_K]`, computed prime by prime.
    pub fn constant_field_degree(&self) -> u32 {
        let n = self.degree;
        let mut s0 = 1u32;
        for (p, e) in arith::factorize(n as u64) {
            let mut exponent = e;
            for v in self.places() {
                let m = self.capacity(v) as u64;
                let m_ord = arith::ord(p, m);
                if arith::ord(p, arith::gcd(v.degree, n) as u64) > m_ord {
                    exponent = exponent.min(m_ord);
                }
            }
            s0 *= (p as u32).pow(exponent);
        }
        s0
    }

    /// Whether `L_s` embeds in `D`: `ℓ_{s,v} | m_v` at every place.
    pub fn embedding_possible(&self, s: u32) -> bool {
        self.places()
            .all(|v| self.capacity(v) % v.split_count(s) == 0)
    }

    /// Depth `μ(D/K, s)`: the number of prime factors of `s₀ / s`.
    pub fn depth(&self, s: u32) -> u32 {
        arith::omega_big((self.constant_field_degree() / s) as u64)
    }

    /// The centralizer `D'_s` of `L_s` in `D`, as an algebra over `L_s`.
    ///
    /// A finite place `v` splits into `ℓ_{s,v}` places labelled `v#1..v#ℓ`;
    /// derived places with `d' = 1` are omitted.
    pub fn centralizer(&self, s: u32) -> Result<AlgebraSpec> {
        self.centralizer_keeping(s, |_| false)
    }

    /// Like [`centralizer`](Self::centralizer), but keeps the derived places
    /// of every `v` for which `keep(v)` holds even when `d' = 1`.
    pub fn centralizer_keeping(&self, s: u32, keep: impl Fn(&Place) -> bool) -> Result<AlgebraSpec> {
        let s0 = self.constant_field_degree();
        if s == 0 || s0 % s != 0 {
            return Err(Error::InvalidDivisor { s, s0 });
        }
        if s == 1 {
            return Ok(self.clone());
        }
        let base = self.base.constant_extension(s)?;
        let mut finite_places = Vec::new();
        for v in &self.finite_places {
            let ell = v.split_count(s);
            let t = v.capacity_gain(s);
            let m = self.capacity(v);
            assert!(
                (m / ell) % (s / (ell * t)) == 0,
                "s/(ℓt) must divide m_v/ℓ at place {}",
                v.label
            );
            let d = v.local_index / t;
            if d == 1 && !keep(v) {
                continue;
            }
            for w in 1..=ell {
                finite_places.push(Place::new(derived_label(&v.label, w), v.degree / ell, d));
            }
        }
        let infinity = Place::new(INFINITY_LABEL, self.infinity.degree, self.degree / s);
        Ok(AlgebraSpec {
            base,
            degree: self.degree / s,
            finite_places,
            infinity,
        })
    }
}

pub fn derived_label(label: &str, w: u32) -> String {
    format!("{label}#{w}")
}
