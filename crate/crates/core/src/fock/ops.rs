//! Operations built on the circle products.

use num_bigint::BigInt;
use num_traits::One;

use super::{nth_product, Monomial, State};
use crate::diffalg::{DiffPoly, Var};
use crate::error::{Error, Result};
use crate::rational::{factorial, Q};

/// Right-nested Wick product :a₁(:a₂(⋯a_k):):.
pub fn wick(factors: &[State]) -> Result<State> {
    let (last, init) = factors.split_last().ok_or_else(|| Error::Precondition("wick of an empty list".into()))?;
    let mut acc = last.clone();
    for f in init.iter().rev() {
        acc = nth_product(f, &acc, -1);
    }
    Ok(acc)
}

/// ∂a = a∘₋₂|0⟩.
pub fn derivative(a: &State) -> State {
    nth_product(a, &State::vacuum(), -2)
}

/// ∂ as the mode-raising derivation φ(-k-1) ↦ (k+1)φ(-k-2).
pub fn derivative_by_modes(a: &State) -> State {
    let mut out = State::zero();
    for (mono, c) in a.terms() {
        for k in 0..mono.len() {
            let mut modes = mono.0.clone();
            let md = modes[k];
            modes[k].m = md.m - 1;
            let factor = Q::from_integer(BigInt::from(-md.m));
            if let Some((neg, m)) = Monomial::canonicalize(modes) {
                let v = c * &factor;
                out.add_term(m, if neg { -v } else { v });
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gradings {
    /// None if the state is not weight-homogeneous.
    pub weight: Option<i64>,
    pub charge: Option<i64>,
    pub degree: usize,
}

pub fn gradings(a: &State) -> Gradings {
    let uniform = |f: &dyn Fn(&Monomial) -> i64| -> Option<i64> {
        let mut it = a.terms().map(|(m, _)| f(m));
        match it.next() {
            None => Some(0),
            Some(first) => it.all(|x| x == first).then_some(first),
        }
    };
    Gradings { weight: uniform(&|m| m.weight()), charge: uniform(&|m| m.charge()), degree: a.degree() }
}

/// Image in the degree-r graded piece: φ(-k-1) ↦ φ_k / k!; shorter monomials drop.
pub fn symbol(a: &State, r: usize) -> Result<DiffPoly> {
    if a.degree() > r {
        return Err(Error::Precondition(format!("symbol at degree {r} of a state of degree {}", a.degree())));
    }
    let mut out = DiffPoly::zero();
    for (mono, c) in a.terms() {
        if mono.len() != r {
            continue;
        }
        let mut denom = BigInt::one();
        let vars: Vec<Var> = mono
            .modes()
            .iter()
            .map(|md| {
                let k = (-md.m - 1) as u32;
                denom *= factorial(k as u64);
                Var::sym(md.gen, k)
            })
            .collect();
        let coeff = c / Q::from_integer(denom);
        out.add_product(&vars, &coeff);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Commutation {
    pub ok: bool,
    /// Least failing n and the nonzero product.
    pub witness: Option<(i32, State)>,
}

/// Checks a∘ₙb = 0 for 0 ≤ n < wt(a)+wt(b).
pub fn commutes(a: &State, b: &State) -> Commutation {
    let top = a.max_weight() + b.max_weight() - 1;
    for n in 0..=top {
        let p = nth_product(a, b, n as i32);
        if !p.is_zero() {
            return Commutation { ok: false, witness: Some((n as i32, p)) };
        }
    }
    Commutation { ok: true, witness: None }
}
