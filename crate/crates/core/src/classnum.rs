//! Weight class numbers `h_s`, total class numbers, optimal embedding
//! counts, and the transfer principle between `D/K` and `D'_s/L_s`.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::algebra::{derived_label, Place};
use crate::arith;
use crate::basefield::Rational;
use crate::error::{Error, Result};
use crate::massform::{mass_hereditary, mass_maximal};
use crate::omega::{enumerate_omega, OmegaElement};
use crate::orders::{enumerate_genera, genus_count, genus_order, GenusVector, OrderKey, OrderSpec};
use crate::theta::{theta, ThetaEngine};

pub const DEFAULT_BUDGET: u64 = 1_000_000;

/// Data attached to one weight `s | s₀`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightEntry {
    pub h: BigInt,
    /// `Mass(D'_s/L_s) · ∏_v Θ_v(D/K, s, f⃗_v)`.
    pub rhs: Rational,
    pub derived_mass: Rational,
    /// `Θ_v` for every listed finite place; unlisted places contribute `1`.
    pub theta: BTreeMap<String, Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassNumberReport {
    pub s0: u32,
    pub mass: Rational,
    pub per_s: BTreeMap<u32, WeightEntry>,
    pub h_total: BigInt,
    pub genera: Option<GeneraReport>,
}

impl ClassNumberReport {
    pub fn h(&self, s: u32) -> Option<&BigInt> {
        self.per_s.get(&s).map(|e| &e.h)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenusClassNumber {
    pub genus: GenusVector,
    pub reduced: BTreeMap<String, Vec<u32>>,
    pub h: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneraReport {
    pub per_genus: Vec<GenusClassNumber>,
    pub total: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransferReport {
    pub s: u32,
    pub s2: u32,
    /// `s · h_{s'}(D/K, 𝐟⃗)`
    pub lhs: BigInt,
    /// `Σ_{Ω(D/K,s,𝐟⃗)} h_{s'/s}(D'_s/L_s, 𝐟⃗_*^o)`
    pub rhs: BigInt,
    pub summands: u64,
    pub equal: bool,
}

/// Evaluates class numbers with a fixed `Θ` engine and work budget.
///
/// Reports are memoized by the structural key of the order, so repeated
/// derived orders inside [`transfer_check`](Self::transfer_check) are
/// computed once.
#[derive(Debug)]
pub struct ClassNumberEngine {
    engine: ThetaEngine,
    budget: u64,
    memo: Mutex<HashMap<OrderKey, Arc<ClassNumberReport>>>,
}

impl Default for ClassNumberEngine {
    fn default() -> Self {
        ClassNumberEngine::new(ThetaEngine::default(), DEFAULT_BUDGET)
    }
}

impl ClassNumberEngine {
    pub fn new(engine: ThetaEngine, budget: u64) -> Self {
        ClassNumberEngine {
            engine,
            budget,
            memo: Mutex::new(HashMap::new()),
        }
    }

    pub fn theta_engine(&self) -> ThetaEngine {
        self.engine
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    /// `Θ_v(D/K, s, f⃗_v)` for every listed finite place.
    pub fn thetas(&self, order: &OrderSpec, s: u32) -> BTreeMap<String, Rational> {
        let algebra = order.algebra();
        let q = algebra.base.q();
        algebra
            .finite_places
            .par_iter()
            .map(|v| (v.label.clone(), theta(self.engine, q, v, &order.invariant(v), s)))
            .collect()
    }

    /// Runs the depth-ordered recursion over the divisors of `s₀`.
    pub fn weight_class_numbers(&self, order: &OrderSpec) -> Result<Arc<ClassNumberReport>> {
        let key = order.key();
        if let Some(hit) = self.memo.lock().unwrap().get(&key) {
            return Ok(hit.clone());
        }
        let report = Arc::new(self.compute(order)?);
        self.memo.lock().unwrap().entry(key).or_insert_with(|| report.clone());
        Ok(report)
    }

    fn compute(&self, order: &OrderSpec) -> Result<ClassNumberReport> {
        let algebra = order.algebra();
        algebra.ensure_definite()?;
        let q = algebra.base.q().clone();
        let s0 = algebra.constant_field_degree();
        let mass = mass_hereditary(order)?;

        let mut weights = arith::divisors(s0);
        // increasing depth; larger s first within a depth
        weights.sort_by_key(|&s| (algebra.depth(s), std::cmp::Reverse(s)));

        let unit_order = |s: u32| arith::pow(&q, s) - BigInt::one();
        let mut per_s: BTreeMap<u32, WeightEntry> = BTreeMap::new();
        for s in weights {
            let derived_mass = mass_maximal(&algebra.centralizer(s)?)?;
            let theta = self.thetas(order, s);
            let rhs = theta.values().fold(derived_mass.clone(), |acc, t| acc * t);
            let tail = per_s
                .iter()
                .filter(|(&s2, _)| s2 > s && s2 % s == 0)
                .fold(Rational::zero(), |acc, (&s2, e)| {
                    acc + Rational::new(e.h.clone(), unit_order(s2))
                });
            let s_big = BigInt::from(s);
            let h = Rational::new(unit_order(s), s_big.clone())
                * (&rhs - tail * Rational::from_integer(s_big));
            if !h.is_integer() || h.is_negative() {
                return Err(Error::IntegralityViolation { s, value: h.to_string() });
            }
            per_s.insert(
                s,
                WeightEntry {
                    h: h.to_integer(),
                    rhs,
                    derived_mass,
                    theta,
                },
            );
        }
        debug_assert_eq!(per_s[&1].rhs, mass);
        let h_total = per_s.values().map(|e| &e.h).sum();
        Ok(ClassNumberReport {
            s0,
            mass,
            per_s,
            h_total,
            genera: None,
        })
    }

    pub fn class_number(&self, order: &OrderSpec) -> Result<BigInt> {
        Ok(self.weight_class_numbers(order)?.h_total.clone())
    }

    /// `E(D/K, s, 𝐟⃗) = s · Σ_{s | s' | s₀} h_{s'}`.
    pub fn embedding_count(&self, order: &OrderSpec, s: u32) -> Result<BigInt> {
        let report = self.weight_class_numbers(order)?;
        if s == 0 || report.s0 % s != 0 {
            return Err(Error::InvalidDivisor { s, s0: report.s0 });
        }
        let sum: BigInt = report
            .per_s
            .iter()
            .filter(|(&s2, _)| s2 % s == 0)
            .map(|(_, e)| &e.h)
            .sum();
        Ok(sum * BigInt::from(s))
    }

    /// Evaluates both sides of `s · h_{s'}(D/K) = Σ_Ω h_{s'/s}(D'_s/L_s)`,
    /// recomputing every summand from scratch on its derived order.
    pub fn transfer_check(&self, order: &OrderSpec, s: u32, s2: u32) -> Result<TransferReport> {
        let report = self.weight_class_numbers(order)?;
        let s0 = report.s0;
        if s == 0 || s0 % s != 0 {
            return Err(Error::InvalidDivisor { s, s0 });
        }
        if s2 == 0 || s2 % s != 0 || s0 % s2 != 0 {
            return Err(Error::InvalidDivisor { s: s2, s0 });
        }
        let lhs = report.h(s2).cloned().unwrap_or_default() * BigInt::from(s);

        let algebra = order.algebra();
        let local: Vec<(&Place, Vec<OmegaElement>)> = algebra
            .finite_places
            .iter()
            .map(|v| (v, enumerate_omega(v, &order.invariant(v), s).collect()))
            .collect();
        let summands = local
            .iter()
            .fold(BigInt::one(), |acc, (_, elems)| acc * BigInt::from(elems.len()));
        if summands > BigInt::from(self.budget) {
            return Err(Error::BudgetExceeded {
                needed: summands.to_string(),
                budget: self.budget,
            });
        }
        let summands: u64 = summands.try_into().expect("bounded by the budget");
        let derived_algebra = algebra.centralizer_keeping(s, |_| true)?;
        let level = s2 / s;

        let rhs = (0..summands)
            .into_par_iter()
            .map(|index| {
                let mut rest = index;
                let mut invariants = Vec::new();
                for (v, elems) in &local {
                    let e = &elems[(rest % elems.len() as u64) as usize];
                    rest /= elems.len() as u64;
                    for w in 0..e.splits as usize {
                        // L_1 = K keeps the original labels
                        let label = if s == 1 {
                            v.label.clone()
                        } else {
                            derived_label(&v.label, w as u32 + 1)
                        };
                        invariants.push((label, e.flatten_strip(w)));
                    }
                }
                let mut derived = derived_algebra.clone();
                derived.finite_places.retain(|p| {
                    p.is_ramified()
                        || invariants.iter().any(|(l, f)| *l == p.label && f.len() > 1)
                });
                let derived = OrderSpec::new(derived, invariants.into_iter().filter(|(_, f)| f.len() > 1))?;
                let sub = self.weight_class_numbers(&derived)?;
                Ok(sub.h(level).cloned().unwrap_or_default())
            })
            .collect::<Result<Vec<BigInt>>>()?
            .into_iter()
            .sum::<BigInt>();

        Ok(TransferReport {
            s,
            s2,
            equal: lhs == rhs,
            lhs,
            rhs,
            summands,
        })
    }

    /// Class numbers of every genus of right ideals and their total.
    pub fn total_class_number_genera(&self, order: &OrderSpec) -> Result<GeneraReport> {
        let count = genus_count(order);
        if count > BigInt::from(self.budget) {
            return Err(Error::BudgetExceeded {
                needed: count.to_string(),
                budget: self.budget,
            });
        }
        let mut per_genus = Vec::new();
        let mut total = BigInt::zero();
        for genus in enumerate_genera(order) {
            let reduced_order = genus_order(order, &genus)?;
            let h = self.class_number(&reduced_order)?;
            total += &h;
            let reduced = order
                .invariants()
                .keys()
                .map(|label| {
                    let place = order.algebra().place(label).expect("listed place");
                    (label.clone(), reduced_order.invariant(place))
                })
                .collect();
            per_genus.push(GenusClassNumber { genus, reduced, h });
        }
        Ok(GeneraReport { per_genus, total })
    }
}

/// Closed formula for prime `n`: `(q-1)·Mass` plus the contribution of the
/// classes with unit group `F_{q^n}^×`.
pub fn prime_degree_class_number(order: &OrderSpec) -> Result<BigInt> {
    let algebra = order.algebra();
    let n = algebra.degree;
    if !arith::is_prime(n as u64) {
        return Err(Error::NotPrimeDegree(n));
    }
    let base = &algebra.base;
    let q = base.q();
    let one = BigInt::one();
    let mut h = mass_hereditary(order)? * Rational::from_integer(q - &one);

    let eps = |v: &Place| v.degree % n != 0;
    let ramified_ok = algebra.ramified_places().all(eps);
    let refined: Vec<&Place> = algebra
        .finite_places
        .iter()
        .filter(|v| !order.is_maximal_at(v))
        .collect();
    if ramified_ok && refined.iter().all(|v| !eps(v)) {
        let qn = arith::pow(q, n);
        let pic = base.constant_extension(n)?.pic_order();
        let nn = BigInt::from(n);
        let mut term = Rational::new(&qn - q, &qn - &one) * Rational::new(pic, &nn * &nn);
        term *= Rational::from_integer(arith::pow(&nn, algebra.ramified_places().count() as u32));
        for v in refined {
            let f = order.invariant(v);
            let multinomial = f
                .iter()
                .fold(arith::factorial(n), |acc, &fi| acc / arith::factorial(fi));
            term *= Rational::from_integer(multinomial);
        }
        h += term;
    }
    if !h.is_integer() || h.is_negative() {
        return Err(Error::IntegralityViolation { s: n, value: h.to_string() });
    }
    Ok(h.to_integer())
}

pub fn weight_class_numbers(order: &OrderSpec) -> Result<Arc<ClassNumberReport>> {
    ClassNumberEngine::default().weight_class_numbers(order)
}

pub fn class_number(order: &OrderSpec) -> Result<BigInt> {
    ClassNumberEngine::default().class_number(order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{AlgebraSpec, INFINITY_LABEL};
    use crate::basefield::BaseField;

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

    fn quaternion(q: u64, ramified: &[(&str, u32)], refined: &[(&str, u32, Vec<u32>)]) -> OrderSpec {
        let mut places: Vec<Place> = ramified
            .iter()
            .map(|&(l, d)| Place::with_invariant(l, d, 1, 2))
            .collect();
        places.extend(refined.iter().map(|(l, d, _)| Place::with_invariant(*l, *d, 0, 1)));
        let kappa = if ramified.len() % 2 == 0 { 1 } else { -1 };
        let a = AlgebraSpec::new(
            BaseField::rational(q, 1).unwrap(),
            2,
            places,
            Place::with_invariant(INFINITY_LABEL, 1, kappa, 2),
        );
        OrderSpec::new(a, refined.iter().map(|(l, _, f)| (*l, f.clone()))).unwrap()
    }

    fn int(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn golden_weight_class_numbers() {
        for engine in [ThetaEngine::Enum, ThetaEngine::GenFun] {
            let e = ClassNumberEngine::new(engine, DEFAULT_BUDGET);
            let r = e.weight_class_numbers(&dvg()).unwrap();
            assert_eq!(r.s0, 4);
            assert_eq!(r.h(4), Some(&int(4)));
            assert_eq!(r.h(2), Some(&int(14)));
            assert_eq!(r.h(1), Some(&int(64)));
            assert_eq!(r.h_total, int(82));
        }
    }

    #[test]
    fn golden_embedding_counts() {
        let e = ClassNumberEngine::default();
        assert_eq!(e.embedding_count(&dvg(), 4).unwrap(), int(16));
        assert_eq!(e.embedding_count(&dvg(), 2).unwrap(), int(36));
        assert_eq!(e.embedding_count(&dvg(), 1).unwrap(), int(82));
        assert!(matches!(e.embedding_count(&dvg(), 3), Err(Error::InvalidDivisor { .. })));
    }

    #[test]
    fn golden_transfer() {
        let e = ClassNumberEngine::default();
        for (s, s2) in [(1, 1), (1, 2), (1, 4), (2, 2), (2, 4), (4, 4)] {
            let t = e.transfer_check(&dvg(), s, s2).unwrap();
            assert!(t.equal, "{t:?}");
        }
        let t = e.transfer_check(&dvg(), 2, 2).unwrap();
        assert_eq!(t.lhs, int(28));
    }

    #[test]
    fn transfer_respects_budget() {
        let e = ClassNumberEngine::new(ThetaEngine::GenFun, 10);
        assert!(matches!(e.transfer_check(&dvg(), 2, 2), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn s0_one_collapses_to_the_mass() {
        // quaternion algebra ramified at a degree-2 place and ∞ of degree 1
        let o = quaternion(3, &[("T^2+1", 2)], &[]);
        let r = weight_class_numbers(&o).unwrap();
        assert_eq!(r.s0, 1);
        assert_eq!(Rational::from_integer(r.h_total.clone()), r.mass.clone() * Rational::from_integer(int(2)));
    }

    #[test]
    fn prime_degree_formula_matches_recursion() {
        let cases = vec![
            quaternion(3, &[("T", 1)], &[]),
            quaternion(2, &[("T", 1)], &[("T^2+T+1", 2, vec![1, 1])]),
            quaternion(3, &[("T", 1)], &[("T+1", 1, vec![1, 1])]),
            quaternion(5, &[("T", 1), ("T+1", 1), ("T+2", 1)], &[]),
        ];
        for o in cases {
            assert_eq!(prime_degree_class_number(&o).unwrap(), class_number(&o).unwrap());
        }
        assert!(matches!(prime_degree_class_number(&dvg()), Err(Error::NotPrimeDegree(4))));
    }

    #[test]
    fn genera_of_an_iwahori_order() {
        let o = quaternion(3, &[("T", 1)], &[("T+1", 1, vec![1, 1])]);
        let g = ClassNumberEngine::default().total_class_number_genera(&o).unwrap();
        assert_eq!(g.per_genus.len(), 3);
        let h: Vec<_> = g.per_genus.iter().map(|x| x.h.clone()).collect();
        let maximal = class_number(&o.to_maximal()).unwrap();
        assert_eq!(h[0], maximal);
        assert_eq!(h[2], maximal);
        assert_eq!(h[1], class_number(&o).unwrap());
        assert_eq!(g.total, &h[0] + &h[1] + &h[2]);
    }
}
