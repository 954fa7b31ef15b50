//! Mode actions and the iterate recursion for circle products.

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use num_traits::One;

use super::{contraction, GeneratorId, Mode, Monomial, State};
use crate::rational::{binom, Q};

/// Which creation mode the recursion strips from the left factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Strip {
    First,
    Last,
    /// Index `seed mod len`.
    Indexed(u32),
}

impl Strip {
    fn pick(self, len: usize) -> usize {
        match self {
            Strip::First => 0,
            Strip::Last => len - 1,
            Strip::Indexed(s) => s as usize % len,
        }
    }
}

const DEFAULT_CACHE_CAP: usize = 1 << 20;

type Key = (Monomial, Monomial, i32, Strip);

thread_local! {
    static CACHE: RefCell<HashMap<Key, Rc<State>>> = RefCell::new(HashMap::new());
    static CACHE_CAP: usize = std::env::var("FREEFIELD_CACHE_CAP")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_CACHE_CAP);
}

/// Drops this thread's memo table.
pub fn clear_cache() {
    CACHE.with(|c| c.borrow_mut().clear());
}

pub fn cache_len() -> usize {
    CACHE.with(|c| c.borrow().len())
}

fn apply_mode_mono(gen: GeneratorId, m: i32, mono: &Monomial, coeff: &Q, out: &mut State) {
    let modes = mono.modes();
    if m <= -1 {
        let mode = Mode { gen, m };
        let pos = modes.partition_point(|x| *x < mode);
        if gen.is_odd() && modes.get(pos) == Some(&mode) {
            return;
        }
        let neg = gen.is_odd() && modes[..pos].iter().filter(|x| x.gen.is_odd()).count() % 2 == 1;
        let mut new = mono.0.clone();
        new.insert(pos, mode);
        out.add_term(Monomial(new), if neg { -coeff.clone() } else { coeff.clone() });
    } else {
        let mut odd_before = 0usize;
        for (k, md) in modes.iter().enumerate() {
            if md.m + m == -1 {
                let c = contraction(gen, md.gen);
                if c != 0 {
                    let neg = (gen.is_odd() && odd_before % 2 == 1) != (c < 0);
                    let mut new = mono.0.clone();
                    new.remove(k);
                    out.add_term(Monomial(new), if neg { -coeff.clone() } else { coeff.clone() });
                }
            }
            if md.gen.is_odd() {
                odd_before += 1;
            }
        }
    }
}

/// φ(m) acting on a state: creation for m ≤ -1, contraction for m ≥ 0.
pub fn apply_mode(gen: GeneratorId, m: i32, s: &State) -> State {
    let mut out = State::zero();
    for (mono, c) in s.terms() {
        apply_mode_mono(gen, m, mono, c, &mut out);
    }
    out
}

fn any_contraction(a: &Monomial, b: &Monomial) -> bool {
    a.modes().iter().any(|x| b.modes().iter().any(|y| contraction(x.gen, y.gen) != 0))
}

fn product_mono(a: &Monomial, b: &Monomial, n: i32, strip: Strip) -> Rc<State> {
    if a.is_empty() {
        return Rc::new(if n == -1 { State::from_monomial(b.clone(), Q::one()) } else { State::zero() });
    }
    if a.weight() + b.weight() - n as i64 - 1 < 0 || (n >= 0 && !any_contraction(a, b)) {
        return Rc::new(State::zero());
    }
    let key = (a.clone(), b.clone(), n, strip);
    if let Some(hit) = CACHE.with(|c| c.borrow().get(&key).cloned()) {
        return hit;
    }
    let result = Rc::new(product_uncached(a, b, n, strip));
    CACHE.with(|c| {
        let mut c = c.borrow_mut();
        if c.len() >= CACHE_CAP.with(|cap| *cap) {
            c.clear();
        }
        c.insert(key, result.clone());
    });
    result
}

fn product_uncached(a: &Monomial, b: &Monomial, n: i32, strip: Strip) -> State {
    let k = strip.pick(a.len());
    let phi = a.modes()[k];
    let mut rest = a.0.clone();
    rest.remove(k);
    let rest = Monomial(rest);
    // a = ± φ(m0)·rest after pulling φ to the front
    let odd_before = a.modes()[..k].iter().filter(|x| x.gen.is_odd()).count();
    let lead_neg = phi.gen.is_odd() && odd_before % 2 == 1;
    let m0 = phi.m;
    let mut out = State::zero();

    // Σ_j (-1)^j C(m0,j) φ(m0-j) (rest ∘_{n+j} b)
    let first_bound = rest.weight() + b.weight() - 1 - n as i64;
    for j in 0..=first_bound.max(-1) {
        let inner = product_mono(&rest, b, n + j as i32, strip);
        if inner.is_zero() {
            continue;
        }
        let mut c = binom(m0 as i64, j as u64);
        if j % 2 == 1 {
            c = -c;
        }
        out.add_scaled(&apply_mode(phi.gen, m0 - j as i32, &inner), &c);
    }

    // - Σ_j (-1)^j C(m0,j) (-1)^{m0} (-1)^{|φ||rest|} rest ∘_{m0+n-j} (φ(j) b)
    let depth = b.modes().iter().filter(|y| contraction(phi.gen, y.gen) != 0).map(|y| -y.m - 1).max();
    if let Some(depth) = depth {
        let rest_odd = rest.is_odd();
        for j in 0..=depth {
            let mut t = State::zero();
            apply_mode_mono(phi.gen, j, b, &Q::one(), &mut t);
            if t.is_zero() {
                continue;
            }
            let mut c = binom(m0 as i64, j as u64);
            let flips = j as i64 + m0 as i64 + i64::from(phi.gen.is_odd() && rest_odd) + 1;
            if flips % 2 != 0 {
                c = -c;
            }
            for (mt, ct) in t.terms() {
                let r = product_mono(&rest, mt, m0 + n - j, strip);
                if !r.is_zero() {
                    out.add_scaled(&r, &(&c * ct));
                }
            }
        }
    }
    if lead_neg {
        out = out.neg();
    }
    out
}

/// a∘ₙb with the default first-mode recursion.
pub fn nth_product(a: &State, b: &State, n: i32) -> State {
    nth_product_with(a, b, n, Strip::First)
}

/// a∘ₙb, stripping the creation mode chosen by `strip` at each recursion step.
pub fn nth_product_with(a: &State, b: &State, n: i32, strip: Strip) -> State {
    let mut out = State::zero();
    for (ma, ca) in a.terms() {
        for (mb, cb) in b.terms() {
            let r = product_mono(ma, mb, n, strip);
            if !r.is_zero() {
                out.add_scaled(&r, &(ca * cb));
            }
        }
    }
    out
}
