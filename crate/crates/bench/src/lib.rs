//! Shared fixtures for the benchmarks.

use hcn_core::{AlgebraSpec, BaseField, OrderSpec, Place, INFINITY_LABEL};

/// The degree-4 algebra over `F_3(T)` ramified at `T`, `T+1`, `T+2`, `∞`.
pub fn dvg_order() -> OrderSpec {
    OrderSpec::maximal(AlgebraSpec::new(
        BaseField::rational(3, 1).expect("valid base"),
        4,
        vec![
            Place::with_invariant("T", 1, 1, 4),
            Place::with_invariant("T+1", 1, 1, 2),
            Place::with_invariant("T+2", 1, 1, 2),
        ],
        Place::with_invariant(INFINITY_LABEL, 1, -1, 4),
    ))
    .expect("valid order")
}

/// A degree-6 algebra with an Iwahori-type order at a split place.
pub fn refined_order() -> OrderSpec {
    let algebra = AlgebraSpec::new(
        BaseField::rational(2, 1).expect("valid base"),
        6,
        vec![
            Place::with_invariant("T", 1, 1, 2),
            Place::with_invariant("T+1", 1, 0, 1),
            Place::with_invariant("T^2+T+1", 2, 1, 3),
        ],
        Place::with_invariant(INFINITY_LABEL, 1, 1, 6),
    );
    OrderSpec::new(
        algebra,
        [("T", vec![1, 2]), ("T+1", vec![1, 1, 1, 1, 1, 1]), ("T^2+T+1", vec![1, 1])],
    )
    .expect("valid order")
}
