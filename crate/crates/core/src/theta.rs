//! Local factors `Θ_v(D/K, s, f⃗_v)`.
//!
//! Two independent evaluations are provided: a direct sum over the stream
//! of `Ω_v` ([`theta_enum`]) and the coefficient extraction from the
//! product generating function ([`theta_genfun`]).

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::algebra::Place;
use crate::arith;
use crate::basefield::Rational;
use crate::omega::LocalShape;
use crate::orders::local_unit_index;
use crate::series::{pow_truncated, TruncatedMultiSeries};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum ThetaEngine {
    Enum,
    #[default]
    GenFun,
}

impl std::str::FromStr for ThetaEngine {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "enum" => Ok(ThetaEngine::Enum),
            "genfun" => Ok(ThetaEngine::GenFun),
            other => Err(format!("unknown theta engine `{other}`")),
        }
    }
}

/// Cardinality of the residue field of `Δ'_w` for `w | v`:
/// `N(v)^{d'_v s / ℓ_{s,v}}`.
pub fn residue_norm(q: &BigInt, place: &Place, s: u32) -> BigInt {
    let exp = place.degree * place.derived_index(s) * s / place.split_count(s);
    arith::pow(q, exp)
}

pub fn theta(engine: ThetaEngine, q: &BigInt, place: &Place, f: &[u32], s: u32) -> Rational {
    match engine {
        ThetaEngine::Enum => theta_enum(q, place, f, s),
        ThetaEngine::GenFun => theta_genfun(q, place, f, s),
    }
}

pub fn theta_enum(q: &BigInt, place: &Place, f: &[u32], s: u32) -> Rational {
    match LocalShape::new(place, f, s) {
        Some(shape) => theta_enum_shape(&shape, &residue_norm(q, place, s)),
        None => Rational::zero(),
    }
}

pub fn theta_genfun(q: &BigInt, place: &Place, f: &[u32], s: u32) -> Rational {
    match LocalShape::new(place, f, s) {
        Some(shape) => theta_genfun_shape(&shape, &residue_norm(q, place, s)),
        None => Rational::zero(),
    }
}

/// `Σ_{Ω} ∏_w 𝒯'_w(f⃗_{w,*})` where every `𝒯'_w` is a unit index for a
/// residue field of size `norm`.
pub fn theta_enum_shape(shape: &LocalShape, norm: &BigInt) -> Rational {
    let mut iter = shape.iter();
    let len = shape.slice_len();
    let mut cache = SliceCache::new(shape.slice_total, len);
    let mut values: Vec<SliceValue> = Vec::new();
    let mut sum = ExactSum::default();
    let mut factors: Vec<usize> = Vec::with_capacity(shape.splits as usize);
    while iter.advance() {
        factors.clear();
        for slice in iter.current().chunks(len) {
            let index = cache.index(slice, || {
                values.push(SliceValue::new(local_unit_index(norm, 1, slice)));
                values.len() - 1
            });
            factors.push(index);
        }
        sum.add_product(factors.iter().map(|&k| &values[k]));
    }
    Rational::from_integer(sum.total())
}

/// Maps each slice to the position of its unit index in a value table.
enum SliceCache {
    /// Slices packed in base `m + 1` when the packed range is small.
    Direct { radix: usize, slots: Vec<u32> },
    Hashed(HashMap<Vec<u32>, usize>),
}

impl SliceCache {
    const DIRECT_LIMIT: usize = 1 << 22;

    fn new(slice_total: u32, len: usize) -> Self {
        let radix = slice_total as usize + 1;
        let range = (0..len).try_fold(1usize, |acc, _| acc.checked_mul(radix));
        match range {
            Some(size) if size <= Self::DIRECT_LIMIT => SliceCache::Direct {
                radix,
                slots: vec![u32::MAX; size],
            },
            _ => SliceCache::Hashed(HashMap::new()),
        }
    }

    fn index(&mut self, slice: &[u32], insert: impl FnOnce() -> usize) -> usize {
        match self {
            SliceCache::Direct { radix, slots } => {
                let key = slice.iter().fold(0usize, |acc, &x| acc * *radix + x as usize);
                if slots[key] == u32::MAX {
                    slots[key] = insert() as u32;
                }
                slots[key] as usize
            }
            SliceCache::Hashed(map) => match map.get(slice) {
                Some(&k) => k,
                None => {
                    let k = insert();
                    map.insert(slice.to_vec(), k);
                    k
                }
            },
        }
    }
}

/// Coefficient of `∏ X_w^{m^{(s)}} ∏ Y_i^{f_i^{(s)}}` in `∏_{w,i} F(X_w Y_i)^t`,
/// rescaled by `[∏_{k ≤ m^{(s)}} (norm^k - 1)]^ℓ`.
pub fn theta_genfun_shape(shape: &LocalShape, norm: &BigInt) -> Rational {
    let m = shape.slice_total;
    let ell = shape.splits as usize;
    let r = shape.rows as usize;
    let coeffs: Vec<Rational> = (0..=m)
        .map(|nu| Rational::new(BigInt::from(1), arith::q_factorial(norm, nu)))
        .collect();
    let factor = pow_truncated(&coeffs, shape.columns, m as usize);

    let mut caps = vec![m; ell];
    caps.extend_from_slice(&shape.row_totals);
    let mut series = TruncatedMultiSeries::one(caps).expect("exponent box too large to pack");
    for w in 0..ell {
        for i in 0..r {
            series.mul_monomial_series(&[w, ell + i], &factor);
        }
        // X_w receives no further factors
        series.retain(|e| e[w] == m);
    }
    let mut target = vec![m; ell];
    target.extend_from_slice(&shape.row_totals);
    let scale = arith::pow(&arith::q_factorial(norm, m), shape.splits);
    series.coefficient(&target) * Rational::from_integer(scale)
}

/// An integral unit index, with a machine-word copy when it fits.
struct SliceValue {
    small: Option<u128>,
    big: BigInt,
}

impl SliceValue {
    fn new(value: Rational) -> Self {
        assert!(value.is_integer(), "unit index {value} is not integral");
        let big = value.to_integer();
        SliceValue { small: big.to_u128(), big }
    }
}

#[derive(Default)]
struct ExactSum {
    small: u128,
    big: BigInt,
}

impl ExactSum {
    fn add_product<'a>(&mut self, factors: impl Iterator<Item = &'a SliceValue> + Clone) {
        let fast = factors
            .clone()
            .try_fold(1u128, |acc, v| v.small.and_then(|x| acc.checked_mul(x)));
        match fast {
            Some(p) => match self.small.checked_add(p) {
                Some(total) => self.small = total,
                None => {
                    self.big += BigInt::from(self.small) + BigInt::from(p);
                    self.small = 0;
                }
            },
            None => {
                let p: BigInt = factors.map(|v| &v.big).product();
                self.big += p;
            }
        }
    }

    fn total(self) -> BigInt {
        self.big + BigInt::from(self.small)
    }
}
