//! Normal ordering of symbols and the quantum-correction descent.

use std::collections::HashMap;

use num_traits::One;

use super::poly::{DiffPoly, Var};
use crate::error::{Error, Result};
use crate::fock::{derivative, gradings, symbol, wick, Mode, State};
use crate::linalg::{self, SparseVec};
use crate::rational::{factorial, Q};

/// A strong generator: its variable (order 0) and the state it names.
#[derive(Clone, Debug)]
pub struct GenSymbol {
    pub var: Var,
    pub state: State,
}

impl GenSymbol {
    pub fn new(var: Var, state: State) -> Self {
        GenSymbol { var: var.with_order(0), state }
    }
}

fn state_of_var(v: &Var, gens: &[GenSymbol]) -> Result<State> {
    if let Some(g) = v.generator() {
        let s = State::from_modes(
            &[Mode { gen: g, m: -(v.order as i32) - 1 }],
            Q::from_integer(factorial(v.order as u64)),
        )?;
        return Ok(s);
    }
    let base = v.with_order(0);
    let g = gens
        .iter()
        .find(|g| g.var == base)
        .ok_or_else(|| Error::Precondition(format!("variable `{v}` is neither a symbol nor a listed generator")))?;
    let mut s = g.state.clone();
    for _ in 0..v.order {
        s = derivative(&s);
    }
    Ok(s)
}

/// Replaces products by right-nested Wick products of ∂^k-generators.
pub fn normal_order(p: &DiffPoly) -> Result<State> {
    normal_order_with(p, &[])
}

/// As `normal_order`, with listed generator variables standing for their states.
pub fn normal_order_with(p: &DiffPoly, gens: &[GenSymbol]) -> Result<State> {
    let mut cache: HashMap<Var, State> = HashMap::new();
    let mut out = State::zero();
    for (m, c) in p.terms() {
        let mut factors = Vec::with_capacity(m.degree());
        for v in m.vars() {
            if !cache.contains_key(v) {
                cache.insert(v.clone(), state_of_var(v, gens)?);
            }
            factors.push(cache[v].clone());
        }
        let s = if factors.is_empty() { State::vacuum() } else { wick(&factors)? };
        out.add_scaled(&s, c);
    }
    Ok(out)
}

struct GenData {
    sym: DiffPoly,
    degree: usize,
    weight: i64,
    odd: bool,
}

fn gen_data(gens: &[GenSymbol]) -> Result<Vec<GenData>> {
    gens.iter()
        .map(|g| {
            let gr = gradings(&g.state);
            let weight = gr
                .weight
                .ok_or_else(|| Error::Precondition(format!("generator `{}` is not weight-homogeneous", g.var)))?;
            let odd = g
                .state
                .parity()
                .ok_or_else(|| Error::Precondition(format!("generator `{}` has mixed parity", g.var)))?;
            if odd != g.var.is_odd() {
                return Err(Error::Precondition(format!("generator `{}` parity disagrees with its state", g.var)));
            }
            Ok(GenData { sym: symbol(&g.state, gr.degree)?, degree: gr.degree, weight, odd })
        })
        .collect()
}

fn classical_image(p: &DiffPoly, gens: &[GenSymbol], data: &[GenData]) -> Result<DiffPoly> {
    p.substitute(|v| {
        if v.generator().is_some() {
            return Ok(DiffPoly::var(v.clone()));
        }
        let base = v.with_order(0);
        let i = gens
            .iter()
            .position(|g| g.var == base)
            .ok_or_else(|| Error::Precondition(format!("variable `{v}` is not a listed generator")))?;
        Ok(data[i].sym.apply_d_n(v.order))
    })
}

/// Writes `target` (a symbol of the given degree and weight) as a polynomial in
/// the generator variables and their derivatives. Err carries (rank A, rank A|b).
pub fn express_in_generators(
    target: &DiffPoly,
    gens: &[GenSymbol],
    degree: usize,
    weight: i64,
) -> Result<std::result::Result<DiffPoly, (usize, usize)>> {
    let data = gen_data(gens)?;
    express_with(target, gens, &data, degree, weight)
}

fn express_with(
    target: &DiffPoly,
    gens: &[GenSymbol],
    data: &[GenData],
    degree: usize,
    weight: i64,
) -> Result<std::result::Result<DiffPoly, (usize, usize)>> {
    // multisets of (generator, derivative order) with matching degree and weight
    let mut factors = Vec::new();
    for (gi, g) in data.iter().enumerate() {
        if g.degree == 0 {
            continue;
        }
        for k in 0..=weight.max(0) as u32 {
            if g.weight + k as i64 <= weight {
                factors.push((gi, k));
            }
        }
    }
    let mut combos: Vec<Vec<(usize, u32)>> = Vec::new();
    fn rec(
        factors: &[(usize, u32)],
        data: &[GenData],
        start: usize,
        w_left: i64,
        d_left: usize,
        cur: &mut Vec<(usize, u32)>,
        out: &mut Vec<Vec<(usize, u32)>>,
    ) {
        if d_left == 0 {
            if w_left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for idx in start..factors.len() {
            let (gi, k) = factors[idx];
            let g = &data[gi];
            let fw = g.weight + k as i64;
            if fw > w_left || g.degree > d_left {
                continue;
            }
            cur.push((gi, k));
            rec(factors, data, if g.odd { idx + 1 } else { idx }, w_left - fw, d_left - g.degree, cur, out);
            cur.pop();
        }
    }
    rec(&factors, data, 0, weight, degree, &mut Vec::new(), &mut combos);
    let mut index: HashMap<super::poly::PMono, usize> = HashMap::new();
    let mut columns: Vec<SparseVec> = Vec::new();
    let mut derivs: HashMap<(usize, u32), DiffPoly> = HashMap::new();
    for combo in &combos {
        let mut acc = DiffPoly::one();
        for &(gi, k) in combo {
            let d = derivs.entry((gi, k)).or_insert_with(|| data[gi].sym.apply_d_n(k)).clone();
            acc = acc.mul(&d);
        }
        let col = acc
            .terms()
            .map(|(m, c)| {
                let l = index.len();
                (*index.entry(m.clone()).or_insert(l), c.clone())
            })
            .collect();
        columns.push(col);
    }
    let rhs: SparseVec = target
        .terms()
        .map(|(m, c)| {
            let l = index.len();
            (*index.entry(m.clone()).or_insert(l), c.clone())
        })
        .collect();
    match linalg::solve(&columns, &rhs) {
        Some(x) => {
            let mut out = DiffPoly::zero();
            for (combo, c) in combos.iter().zip(x) {
                let vars: Vec<Var> = combo.iter().map(|&(gi, k)| gens[gi].var.with_order(k)).collect();
                out.add_product(&vars, &c);
            }
            Ok(Ok(out))
        }
        None => Ok(Err(linalg::augmented_ranks(&columns, &rhs))),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Correction {
    pub degree: usize,
    pub poly: DiffPoly,
}

/// Outcome of a descent.
#[derive(Clone, Debug)]
pub struct Descent {
    pub terms: Vec<Correction>,
    /// For a relation, the normal ordering of all terms (zero on success);
    /// for a lift, the state minus the normal ordering of all terms.
    pub residual: State,
    /// Degree, symbol and (rank A, rank A|b) where no generator expression exists.
    pub stuck: Option<(usize, DiffPoly, (usize, usize))>,
}

impl Descent {
    pub fn completed(&self) -> bool {
        self.stuck.is_none()
    }
}

type Stuck = Option<(usize, DiffPoly, (usize, usize))>;

/// Peels symbols off q from degree `cur` down; returns the generator
/// expressions found and where it got stuck, if anywhere.
fn descend(mut q: State, mut cur: usize, gens: &[GenSymbol], data: &[GenData]) -> Result<(Vec<Correction>, Stuck)> {
    let weight = match gradings(&q).weight {
        Some(w) => w,
        None => return Err(Error::Precondition("descent needs a weight-homogeneous state".into())),
    };
    if q.degree() > cur {
        return Err(Error::Internal(format!("state of degree {} above the filtration level {cur}", q.degree())));
    }
    let mut found = Vec::new();
    while !q.is_zero() {
        let s = symbol(&q, cur)?;
        if s.is_zero() {
            cur -= 1;
            continue;
        }
        match express_with(&s, gens, data, cur, weight)? {
            Ok(c) => {
                q = q.minus(&normal_order_with(&c, gens)?);
                if q.degree() >= cur && !symbol(&q, cur)?.is_zero() {
                    return Err(Error::Internal(format!("symbol at degree {cur} did not cancel")));
                }
                found.push(Correction { degree: cur, poly: c });
            }
            Err(ranks) => return Ok((found, Some((cur, s, ranks)))),
        }
        if cur == 0 {
            break;
        }
        cur -= 1;
    }
    Ok((found, None))
}

fn filtration_degree(p: &DiffPoly, gens: &[GenSymbol], data: &[GenData]) -> usize {
    p.terms()
        .map(|(m, _)| {
            m.vars()
                .iter()
                .map(|v| {
                    if v.generator().is_some() {
                        1
                    } else {
                        let base = v.with_order(0);
                        gens.iter().position(|g| g.var == base).map(|i| data[i].degree).unwrap_or(0)
                    }
                })
                .sum::<usize>()
        })
        .max()
        .unwrap_or(0)
}

/// Quantum correction of a classical relation p among generator symbols.
/// The first term is p itself; the normal orderings of all terms sum to zero.
pub fn quantum_correct(p: &DiffPoly, gens: &[GenSymbol]) -> Result<Descent> {
    let data = gen_data(gens)?;
    if p.is_zero() {
        return Ok(Descent { terms: Vec::new(), residual: State::zero(), stuck: None });
    }
    let classical = classical_image(p, gens, &data)?;
    if !classical.is_zero() {
        return Err(Error::Precondition(format!("`{p}` is not a classical relation")));
    }
    let d = filtration_degree(p, gens, &data);
    if d == 0 {
        return Err(Error::Precondition("relation of filtration degree 0".into()));
    }
    let q = normal_order_with(p, gens)?;
    let (found, stuck) = descend(q, d - 1, gens, &data)?;
    let mut terms = vec![Correction { degree: d, poly: p.clone() }];
    terms.extend(found.into_iter().map(|c| Correction { degree: c.degree, poly: c.poly.scaled(&-Q::one()) }));
    let mut residual = State::zero();
    for t in &terms {
        residual.add_scaled(&normal_order_with(&t.poly, gens)?, &Q::one());
    }
    Ok(Descent { terms, residual, stuck })
}

/// Expresses a state degree by degree as a normally ordered polynomial in the
/// generators; a stuck step shows it is not one.
pub fn lift_descent(state: &State, gens: &[GenSymbol]) -> Result<Descent> {
    let data = gen_data(gens)?;
    let (terms, stuck) = descend(state.clone(), state.degree(), gens, &data)?;
    let mut residual = state.clone();
    for t in &terms {
        residual = residual.minus(&normal_order_with(&t.poly, gens)?);
    }
    Ok(Descent { terms, residual, stuck })
}
