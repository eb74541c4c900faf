//! Hereditary orders: invariant vectors, local unit indices and genera.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use crate::algebra::{AlgebraSpec, Place, INFINITY_LABEL};
use crate::arith;
use crate::basefield::{BaseField, Rational};
use crate::error::{Error, Result};

/// A hereditary `A`-order, up to the data its class number depends on.
///
/// Invariant vectors are stored in canonical rotation; places whose order
/// is maximal are not stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OrderSpec {
    algebra: AlgebraSpec,
    invariants: BTreeMap<String, Vec<u32>>,
}

/// Structural identity of an order: base, degree and the multiset of
/// non-trivial local data. Labels do not participate.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrderKey {
    base: BaseField,
    degree: u32,
    infinity: (u32, u32),
    places: Vec<(u32, u32, Vec<u32>)>,
}

impl OrderSpec {
    pub fn maximal(algebra: AlgebraSpec) -> Result<Self> {
        Self::new(algebra, BTreeMap::<String, Vec<u32>>::new())
    }

    pub fn new<I, S>(algebra: AlgebraSpec, invariants: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, Vec<u32>)>,
        S: Into<String>,
    {
        let mut violations = algebra.validate();
        let mut stored = BTreeMap::new();
        for (label, f) in invariants {
            let label = label.into();
            let at = format!("order.invariants.{label}");
            let Some(place) = algebra.finite_places.iter().find(|p| p.label == label) else {
                if label == INFINITY_LABEL {
                    violations.push(format!("{at}: ∞ carries no order data"));
                } else {
                    violations.push(format!("{at}: no such place in the algebra"));
                }
                continue;
            };
            if f.is_empty() || f.contains(&0) {
                violations.push(format!("{at}: entries must be positive and non-empty"));
                continue;
            }
            let m = algebra.capacity(place);
            let sum: u32 = f.iter().sum();
            if sum != m {
                violations.push(format!("{at}: entries sum to {sum} but m_v = {m}"));
                continue;
            }
            if f.len() > 1 {
                stored.insert(label, normalize_invariant(&f));
            }
        }
        if !violations.is_empty() {
            return Err(Error::InvalidSpec(violations));
        }
        Ok(OrderSpec {
            algebra,
            invariants: stored,
        })
    }

    pub fn algebra(&self) -> &AlgebraSpec {
        &self.algebra
    }

    pub fn base(&self) -> &BaseField {
        &self.algebra.base
    }

    /// `f⃗_v`, defaulting to `(m_v)`.
    pub fn invariant(&self, place: &Place) -> Vec<u32> {
        self.invariants
            .get(&place.label)
            .cloned()
            .unwrap_or_else(|| vec![self.algebra.capacity(place)])
    }

    /// Non-maximal invariant vectors keyed by place label.
    pub fn invariants(&self) -> &BTreeMap<String, Vec<u32>> {
        &self.invariants
    }

    pub fn is_maximal_at(&self, place: &Place) -> bool {
        !self.invariants.contains_key(&place.label)
    }

    /// The order with every local invariant made maximal.
    pub fn to_maximal(&self) -> OrderSpec {
        OrderSpec {
            algebra: self.algebra.clone(),
            invariants: BTreeMap::new(),
        }
    }

    pub fn key(&self) -> OrderKey {
        let mut places: Vec<_> = self
            .algebra
            .finite_places
            .iter()
            .filter(|p| p.is_ramified() || !self.is_maximal_at(p))
            .map(|p| (p.degree, p.local_index, self.invariant(p)))
            .collect();
        places.sort();
        OrderKey {
            base: self.algebra.base.clone(),
            degree: self.algebra.degree,
            infinity: (self.algebra.infinity.degree, self.algebra.infinity.local_index),
            places,
        }
    }
}

/// Lexicographically smallest cyclic rotation.
pub fn normalize_invariant(f: &[u32]) -> Vec<u32> {
    (0..f.len())
        .map(|k| f[k..].iter().chain(&f[..k]).copied().collect::<Vec<_>>())
        .min()
        .unwrap_or_default()
}

/// `[GL_m(O_Δ) : R_v^×] = ∏_{i≤m}(N^{di}-1) / ∏_i ∏_{j≤f_i}(N^{dj}-1)` with
/// `m = Σ f_i`. Zero entries are allowed and contribute nothing.
pub fn local_unit_index(norm: &BigInt, d: u32, f: &[u32]) -> Rational {
    let base = arith::pow(norm, d);
    let m: u32 = f.iter().sum();
    let den = f
        .iter()
        .fold(BigInt::from(1), |acc, &fi| acc * arith::q_factorial(&base, fi));
    Rational::new(arith::q_factorial(&base, m), den)
}

/// Local isomorphism types of right ideals at the places where the order
/// is not maximal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct GenusVector(pub BTreeMap<String, Vec<u32>>);

/// `g⃗_v` with its zero entries removed.
pub fn genus_reduce(g: &[u32]) -> Result<Vec<u32>> {
    let reduced: Vec<u32> = g.iter().copied().filter(|&x| x > 0).collect();
    if reduced.is_empty() {
        return Err(Error::EmptyGenus(format!("{g:?}")));
    }
    Ok(reduced)
}

/// All genera of right ideals of `order`, as the product over non-maximal
/// places of the weak compositions of `m_v` into `r_v` parts.
pub fn enumerate_genera(order: &OrderSpec) -> Vec<GenusVector> {
    let mut genera = vec![GenusVector::default()];
    for (label, f) in order.invariants() {
        let m: u32 = f.iter().sum();
        let choices = arith::weak_compositions(m, f.len());
        genera = genera
            .into_iter()
            .flat_map(|g| {
                choices.iter().map(move |c| {
                    let mut next = g.clone();
                    next.0.insert(label.clone(), c.clone());
                    next
                })
            })
            .collect();
    }
    genera
}

/// Number of genera, `∏_v C(m_v + r_v - 1, r_v - 1)`.
pub fn genus_count(order: &OrderSpec) -> BigInt {
    order
        .invariants()
        .values()
        .map(|f| {
            let m: u32 = f.iter().sum();
            let r = f.len() as u32;
            arith::binomial(m + r - 1, r - 1)
        })
        .product()
}

/// The left order of the ideals of the given genus.
pub fn genus_order(order: &OrderSpec, genus: &GenusVector) -> Result<OrderSpec> {
    let mut invariants = Vec::new();
    for (label, g) in &genus.0 {
        invariants.push((label.clone(), genus_reduce(g)?));
    }
    OrderSpec::new(order.algebra().clone(), invariants)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::INFINITY_LABEL;
    use proptest::prelude::*;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    fn iwahori_quaternion() -> OrderSpec {
        let a = AlgebraSpec::new(
            BaseField::rational(3, 1).unwrap(),
            2,
            vec![Place::with_invariant("T", 1, 1, 2), Place::with_invariant("T+1", 1, 0, 1)],
            Place::with_invariant(INFINITY_LABEL, 1, 1, 2),
        );
        OrderSpec::new(a, [("T+1", vec![1, 1])]).unwrap()
    }

    #[test]
    fn rotations() {
        assert_eq!(normalize_invariant(&[1, 2]), vec![1, 2]);
        assert_eq!(normalize_invariant(&[2, 1]), vec![1, 2]);
        assert_eq!(normalize_invariant(&[3, 1, 3, 1]), vec![1, 3, 1, 3]);
        assert_eq!(normalize_invariant(&[2, 1, 3]), vec![1, 3, 2]);
    }

    #[test]
    fn unit_indices() {
        let nine = BigInt::from(9);
        assert_eq!(local_unit_index(&nine, 1, &[4]), rat(1, 1));
        assert_eq!(local_unit_index(&nine, 1, &[1, 1]), rat(10, 1));
        assert_eq!(local_unit_index(&nine, 1, &[2, 0]), rat(1, 1));
        for q in [2i64, 3, 4, 5] {
            assert_eq!(local_unit_index(&BigInt::from(q), 1, &[1, 1]), rat(q + 1, 1));
        }
    }

    #[test]
    fn iwahori_index_counts_flags() {
        // [GL_2(F_q) : B(F_q)] = #P^1(F_q), counted by listing lines in F_q^2
        for q in [2u64, 3] {
            let mut lines = std::collections::BTreeSet::new();
            for x in 0..q {
                for y in 0..q {
                    if (x, y) == (0, 0) {
                        continue;
                    }
                    // normalize so that the first non-zero coordinate is 1
                    let lead = if x != 0 { x } else { y };
                    let inv = (1..q).find(|k| k * lead % q == 1).unwrap();
                    lines.insert((x * inv % q, y * inv % q));
                }
            }
            let got = local_unit_index(&BigInt::from(q), 1, &[1, 1]);
            assert_eq!(got, rat(lines.len() as i64, 1));
        }
    }

    #[test]
    fn genus_reduction() {
        assert_eq!(genus_reduce(&[3, 6, 0, 1, 0]).unwrap(), vec![3, 6, 1]);
        assert_eq!(genus_reduce(&[4]).unwrap(), vec![4]);
        assert_eq!(genus_reduce(&[0, 2, 0]).unwrap(), vec![2]);
        assert!(matches!(genus_reduce(&[0, 0]), Err(Error::EmptyGenus(_))));
    }

    #[test]
    fn genera_of_an_iwahori_order() {
        let order = iwahori_quaternion();
        let genera = enumerate_genera(&order);
        let vectors: Vec<_> = genera.iter().map(|g| g.0["T+1"].clone()).collect();
        assert_eq!(vectors, vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
        assert_eq!(genus_count(&order), BigInt::from(3));
        let maximal = OrderSpec::maximal(order.algebra().clone()).unwrap();
        assert_eq!(enumerate_genera(&maximal), vec![GenusVector::default()]);
    }

    #[test]
    fn rejects_bad_invariants() {
        let a = iwahori_quaternion().algebra().clone();
        let err = OrderSpec::new(a.clone(), [("T+1", vec![1, 2])]).unwrap_err();
        assert!(format!("{err}").contains("T+1"));
        assert!(OrderSpec::new(a.clone(), [("T+7", vec![1, 1])]).is_err());
        assert!(OrderSpec::new(a, [("T+1", vec![2, 0])]).is_err());
    }

    #[test]
    fn maximal_entries_are_not_stored() {
        let a = iwahori_quaternion().algebra().clone();
        let o = OrderSpec::new(a.clone(), [("T+1", vec![2])]).unwrap();
        assert_eq!(o, OrderSpec::maximal(a).unwrap());
    }

    proptest! {
        #[test]
        fn unit_index_is_symmetric_and_at_least_one(
            f in proptest::collection::vec(0u32..4, 1..5),
            n in 2u32..6,
            d in 1u32..3,
            shift in 0usize..5,
        ) {
            let norm = BigInt::from(n);
            let value = local_unit_index(&norm, d, &f);
            let mut g = f.clone();
            g.rotate_left(shift % f.len());
            g.reverse();
            prop_assert_eq!(&value, &local_unit_index(&norm, d, &g));
            prop_assert!(value >= rat(1, 1));
            let nonzero = f.iter().filter(|&&x| x > 0).count();
            prop_assert_eq!(value == rat(1, 1), nonzero <= 1);
        }

        #[test]
        fn genus_reduce_keeps_the_sum(g in proptest::collection::vec(0u32..4, 1..6)) {
            prop_assume!(g.iter().any(|&x| x > 0));
            let r = genus_reduce(&g).unwrap();
            prop_assert_eq!(r.iter().sum::<u32>(), g.iter().sum::<u32>());
            prop_assert!(r.iter().all(|&x| x > 0));
        }
    }
}
