#![allow(dead_code)]

use std::collections::BTreeMap;

use wqt_core::cartan::{build_root_data, RootData};
use wqt_core::coeff::{rat, FactoredCoeff, Rat};
use wqt_core::engine::{expand, ExpansionConfig, FieldExpansion};
use wqt_core::monomial::Monomial;

pub fn rd(token: &str) -> RootData {
    build_root_data(token.parse().unwrap())
}

pub fn m(text: &str) -> Monomial {
    text.parse().unwrap()
}

pub fn run(token: &str, start: &str) -> FieldExpansion {
    expand(&rd(token), &m(start), &ExpansionConfig::default()).unwrap()
}

/// Evaluates an orbit-free coefficient at exact rational q and t.
pub fn eval_qt(c: &FactoredCoeff, q: (i64, i64), t: (i64, i64)) -> Rat {
    c.eval(&rat(q.0, q.1), &rat(t.0, t.1), &BTreeMap::new())
        .unwrap()
}

pub const EXAMPLE1_START: &str = "Y[1](q^0 t^0) * Y[1](q^-2 t^0) * Y[1](q^0 t^2)";

/// Closed forms of the nontrivial coefficients of the three-variable sl2
/// field, rewritten over canonical binomials 1 - q^a t^b.
///
/// lambda1 = (q^4 t^2 - 1)(q^2 - t^2) / [(q^4 - t^2)(q^2 t^2 - 1)]
///         = q^-2 (1 - q^4 t^2)(1 - q^-2 t^2) / [(1 - q^-4 t^2)(1 - q^2 t^2)]
pub fn lambda1() -> FactoredCoeff {
    FactoredCoeff::one()
        .mul_qt(-2, 0)
        .mul_binomial_num(4, 2)
        .unwrap()
        .mul_binomial_num(-2, 2)
        .unwrap()
        .mul_binomial_den(-4, 2)
        .unwrap()
        .mul_binomial_den(2, 2)
        .unwrap()
}

/// lambda2 = (q^2 t^4 - 1)(q^2 - t^2) / [(q^2 - t^4)(q^2 t^2 - 1)]
///         = (1 - q^2 t^4)(1 - q^-2 t^2) / [(1 - q^-2 t^4)(1 - q^2 t^2)]
pub fn lambda2() -> FactoredCoeff {
    FactoredCoeff::one()
        .mul_binomial_num(2, 4)
        .unwrap()
        .mul_binomial_num(-2, 2)
        .unwrap()
        .mul_binomial_den(-2, 4)
        .unwrap()
        .mul_binomial_den(2, 2)
        .unwrap()
}

/// lambda3 = (q^2 + 1)(t^2 + 1)(q^2 - t^2)^2 / [(q^4 - t^2)(q^2 - t^4)]
///         = q^-2 (1 - q^4)(1 - t^4)(1 - q^-2 t^2)^2
///           / [(1 - q^2)(1 - t^2)(1 - q^-4 t^2)(1 - q^-2 t^4)]
pub fn lambda3() -> FactoredCoeff {
    FactoredCoeff::one()
        .mul_qt(-2, 0)
        .mul_binomial_num(4, 0)
        .unwrap()
        .mul_binomial_num(0, 4)
        .unwrap()
        .mul_binomial_num(-2, 2)
        .unwrap()
        .mul_binomial_num(-2, 2)
        .unwrap()
        .mul_binomial_den(2, 0)
        .unwrap()
        .mul_binomial_den(0, 2)
        .unwrap()
        .mul_binomial_den(-4, 2)
        .unwrap()
        .mul_binomial_den(-2, 4)
        .unwrap()
}

/// Middle coefficient of the two-variable interpolating sl2 field:
/// (q + q^-1)(q t^-1 - q^-1 t) / (q^2 t^-1 - q^-2 t)
/// = q^-2 (1 - q^4)(1 - q^-2 t^2) / [(1 - q^2)(1 - q^-4 t^2)]
pub fn interpolating_middle() -> FactoredCoeff {
    FactoredCoeff::one()
        .mul_qt(-2, 0)
        .mul_binomial_num(4, 0)
        .unwrap()
        .mul_binomial_num(-2, 2)
        .unwrap()
        .mul_binomial_den(2, 0)
        .unwrap()
        .mul_binomial_den(-4, 2)
        .unwrap()
}
