//! The mass formula for hereditary orders.

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::algebra::{AlgebraSpec, Place};
use crate::arith;
use crate::basefield::Rational;
use crate::error::Result;
use crate::orders::{local_unit_index, OrderSpec};

/// `𝒯_v = ∏_{1 ≤ i ≤ n-1, d_v ∤ i} (N(v)^i - 1)`.
pub fn ramified_factor(q: &BigInt, n: u32, place: &Place) -> BigInt {
    let norm = place.norm(q);
    (1..n)
        .filter(|i| i % place.local_index != 0)
        .map(|i| arith::pow(&norm, i) - BigInt::one())
        .product()
}

/// `Mass(D/K, R) = #Pic(A)/(q-1) · ∏ζ_K(-i) · ∏_S 𝒯_v · ∏_{S'} 𝒯'_v`.
///
/// `S` contains every ramified place including `∞`; `S'` every place where
/// the order is not maximal. A place in both contributes both factors.
pub fn mass_hereditary(order: &OrderSpec) -> Result<Rational> {
    let algebra = order.algebra();
    algebra.ensure_definite()?;
    let base = &algebra.base;
    let q = base.q();
    let n = algebra.degree;

    let mut mass = Rational::new(base.pic_order(), q - BigInt::one());
    for i in 1..n {
        mass *= base.zeta_at_negative(i);
    }
    for v in algebra.ramified_places() {
        mass *= Rational::from(ramified_factor(q, n, v));
    }
    for v in &algebra.finite_places {
        if !order.is_maximal_at(v) {
            let index = local_unit_index(&v.norm(q), v.local_index, &order.invariant(v));
            assert!(index >= Rational::one());
            mass *= index;
        }
    }
    assert!(mass.is_positive(), "mass must be positive, got {mass}");
    Ok(mass)
}

pub fn mass_maximal(algebra: &AlgebraSpec) -> Result<Rational> {
    mass_hereditary(&OrderSpec::maximal(algebra.clone())?)
}

/// `Mass(D'_s / L_s)` of a maximal order in the centralizer of `L_s`.
pub fn mass_maximal_subalgebra(order: &OrderSpec, s: u32) -> Result<Rational> {
    mass_maximal(&order.algebra().centralizer(s)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::INFINITY_LABEL;
    use crate::basefield::BaseField;
    use crate::error::Error;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    fn dvg() -> OrderSpec {
        OrderSpec::maximal(AlgebraSpec::new(
            BaseField::rational(3, 1).unwrap(),
            4,
            vec![
                Place::with_invariant("T", 1, 1, 4),
                Place::with_invariant("T+1", 1, 1, 2),
                Place::with_invariant("T+2", 1, 1, 2),
            ],
            Place::with_invariant(INFINITY_LABEL, 1, -1, 4),
        ))
        .unwrap()
    }

    #[test]
    fn golden_mass() {
        assert_eq!(mass_hereditary(&dvg()).unwrap(), rat(169, 5));
    }

    #[test]
    fn golden_subalgebra_masses() {
        assert_eq!(mass_maximal_subalgebra(&dvg(), 2).unwrap(), rat(1, 80));
        assert_eq!(mass_maximal_subalgebra(&dvg(), 4).unwrap(), rat(1, 80));
        assert_eq!(mass_maximal_subalgebra(&dvg(), 1).unwrap(), rat(169, 5));
    }

    #[test]
    fn degree_one_algebra() {
        let a = AlgebraSpec::new(
            BaseField::rational(5, 1).unwrap(),
            1,
            vec![],
            Place::new(INFINITY_LABEL, 1, 1),
        );
        assert_eq!(mass_maximal(&a).unwrap(), rat(1, 4));
    }

    #[test]
    fn refinement_multiplies_by_the_unit_index() {
        let a = AlgebraSpec::new(
            BaseField::rational(3, 1).unwrap(),
            2,
            vec![Place::with_invariant("T", 1, 1, 2), Place::with_invariant("T+1", 1, 0, 1)],
            Place::with_invariant(INFINITY_LABEL, 1, 1, 2),
        );
        let max = mass_maximal(&a).unwrap();
        let iwahori = OrderSpec::new(a, [("T+1", vec![1, 1])]).unwrap();
        assert_eq!(mass_hereditary(&iwahori).unwrap(), max * rat(4, 1));
    }

    #[test]
    fn indefinite_is_rejected() {
        let a = AlgebraSpec::new(
            BaseField::rational(3, 1).unwrap(),
            2,
            vec![],
            Place::new(INFINITY_LABEL, 1, 1),
        );
        let order = OrderSpec::maximal(a).map(|o| mass_hereditary(&o));
        assert!(matches!(order, Err(Error::InvalidSpec(_)) | Ok(Err(Error::NotDefinite { .. }))));
    }
}
