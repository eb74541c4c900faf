//! Random valid definite specifications for property checks.

#![allow(dead_code)]

use hcn_core::arith;
use hcn_core::{AlgebraSpec, BaseField, OrderSpec, Place, INFINITY_LABEL};
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use rand::Rng;

pub struct SpecRange {
    pub qs: &'static [u64],
    pub degrees: &'static [u32],
    pub infinity_degrees: &'static [u32],
    pub max_places: usize,
    pub max_place_degree: u32,
}

pub const WIDE: SpecRange = SpecRange {
    qs: &[2, 3, 4, 5],
    degrees: &[2, 3, 4, 5, 6],
    infinity_degrees: &[1, 1, 1, 2],
    max_places: 4,
    max_place_degree: 3,
};

/// A uniformly random composition of `m` into positive parts.
pub fn random_composition<R: Rng>(rng: &mut R, m: u32) -> Vec<u32> {
    let mut parts = vec![1u32];
    for _ in 1..m {
        if rng.gen_bool(0.5) {
            parts.push(1);
        } else {
            *parts.last_mut().unwrap() += 1;
        }
    }
    parts
}

pub fn random_order<R: Rng>(rng: &mut R, range: &SpecRange) -> OrderSpec {
    loop {
        if let Some(order) = try_random_order(rng, range) {
            return order;
        }
    }
}

fn try_random_order<R: Rng>(rng: &mut R, range: &SpecRange) -> Option<OrderSpec> {
    let q = *range.qs.choose(rng).unwrap();
    let n = *range.degrees.choose(rng).unwrap();
    let delta = *range.infinity_degrees.choose(rng).unwrap();
    let base = BaseField::rational(q, delta).ok()?;

    let count = rng.gen_range(0..=range.max_places);
    let mut used = vec![0u64; range.max_place_degree as usize + 1];
    let mut places = Vec::new();
    let mut invariants = Vec::new();
    // Σ κ_v / d_v scaled by n
    let mut total = 0i64;
    for i in 0..count {
        let deg = rng.gen_range(1..=range.max_place_degree);
        let available = arith::irreducible_count(base.q(), deg).to_u64().unwrap();
        if used[deg as usize] >= available {
            continue;
        }
        used[deg as usize] += 1;
        let d = *arith::divisors(n).choose(rng).unwrap();
        let kappa = if d == 1 {
            0
        } else {
            let coprime: Vec<i64> = (1..d as i64).filter(|k| k.gcd(&(d as i64)) == 1).collect();
            *coprime.choose(rng).unwrap()
        };
        total += kappa * (n / d) as i64;
        let label = format!("P{i}");
        invariants.push((label.clone(), random_composition(rng, n / d)));
        places.push(Place::with_invariant(label, deg, kappa, d));
    }
    let kappa_inf = (-total).rem_euclid(n as i64);
    if kappa_inf.gcd(&(n as i64)) != 1 {
        return None;
    }
    let infinity = Place::with_invariant(INFINITY_LABEL, delta, kappa_inf, n);
    let algebra = AlgebraSpec::new(base, n, places, infinity);
    Some(OrderSpec::new(algebra, invariants).expect("generator produced an invalid spec"))
}

pub fn describe(order: &OrderSpec) -> String {
    let a = order.algebra();
    let places: Vec<String> = a
        .finite_places
        .iter()
        .map(|v| format!("{}(deg {}, d {}, f {:?})", v.label, v.degree, v.local_index, order.invariant(v)))
        .collect();
    format!(
        "q={} n={} deg∞={} [{}]",
        a.base.q(),
        a.degree,
        a.infinity.degree,
        places.join(", ")
    )
}
