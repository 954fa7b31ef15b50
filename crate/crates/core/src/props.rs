//! Seeded property checks for the circle-product engine.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::Error;
use crate::fock::{
    derivative, derivative_by_modes, gradings, nth_product, nth_product_with, wick, State, Strip, SystemSpec,
};
use crate::rational::{binom, factorial, q, Q};
use crate::sampling::Sampler;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Property {
    SkewSymmetry,
    CommutatorFormula,
    PullOff,
    DerivationLaws,
    GradingAdditivity,
    FiltrationBounds,
}

impl Property {
    pub const ALL: [Property; 6] = [
        Property::SkewSymmetry,
        Property::CommutatorFormula,
        Property::PullOff,
        Property::DerivationLaws,
        Property::GradingAdditivity,
        Property::FiltrationBounds,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Property::SkewSymmetry => "skew_symmetry",
            Property::CommutatorFormula => "commutator_formula",
            Property::PullOff => "pull_off",
            Property::DerivationLaws => "derivation_laws",
            Property::GradingAdditivity => "grading_additivity",
            Property::FiltrationBounds => "filtration_bounds",
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Property {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Property::ALL.into_iter().find(|p| p.name() == s).ok_or_else(|| Error::Parse(format!("unknown property `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropOutcome {
    pub property: Property,
    pub samples: usize,
    pub failures: usize,
    /// Samples whose checked products were not all zero.
    pub nontrivial: usize,
    /// Description of the first failing instance.
    pub witness: Option<String>,
}

impl PropOutcome {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

// small states keep each sample cheap while still mixing parities and depths
const TERMS: usize = 2;
const MAX_LEN: usize = 3;
const MAX_DEPTH: i32 = 3;

/// Failure description (if any) and whether the instance was nontrivial.
type Check = (Option<String>, bool);

fn sign(odd: bool) -> Q {
    if odd {
        q(-1)
    } else {
        q(1)
    }
}

fn parity(s: &State) -> bool {
    s.parity().unwrap_or(false)
}

fn deriv_pow(a: &State, j: u32) -> State {
    (0..j).fold(a.clone(), |acc, _| derivative(&acc))
}

fn skew(s: &mut Sampler) -> Check {
    let a = s.homogeneous(TERMS, MAX_LEN, MAX_DEPTH);
    let b = s.homogeneous(TERMS, MAX_LEN, MAX_DEPTH);
    let n = s.rng().gen_range(-2..=2);
    let lhs = nth_product(&a, &b, n);
    let eps = sign(parity(&a) && parity(&b));
    let top = (a.max_weight() + b.max_weight()).max(0) as u32 + 1;
    let mut rhs = State::zero();
    for j in 0..=top {
        let t = nth_product(&b, &a, n + j as i32);
        if t.is_zero() {
            continue;
        }
        let c = sign((n + j as i32 + 1).rem_euclid(2) == 1) / Q::from_integer(factorial(j as u64));
        rhs.add_scaled(&deriv_pow(&t, j), &c);
    }
    let rhs = rhs.scaled(&eps);
    ((lhs != rhs).then(|| format!("a = {a}; b = {b}; n = {n}")), !lhs.is_zero())
}

fn commutator(s: &mut Sampler) -> Check {
    let a = s.homogeneous(TERMS, MAX_LEN, MAX_DEPTH);
    let b = s.homogeneous(TERMS, MAX_LEN, MAX_DEPTH);
    let c = s.state(TERMS, MAX_LEN, MAX_DEPTH);
    let m = s.rng().gen_range(0..=2);
    let n = s.rng().gen_range(0..=2);
    let eps = sign(parity(&a) && parity(&b));
    let lhs =
        nth_product(&a, &nth_product(&b, &c, n), m).minus(&nth_product(&b, &nth_product(&a, &c, m), n).scaled(&eps));
    let mut rhs = State::zero();
    for j in 0..=m {
        let ab = nth_product(&a, &b, j);
        rhs.add_scaled(&nth_product(&ab, &c, m + n - j), &binom(m as i64, j as u64));
    }
    ((lhs != rhs).then(|| format!("a = {a}; b = {b}; c = {c}; m = {m}; n = {n}")), !rhs.is_zero())
}

fn pull_off(s: &mut Sampler) -> Check {
    let a = s.state(TERMS, MAX_LEN, MAX_DEPTH);
    let b = s.state(TERMS, MAX_LEN, MAX_DEPTH);
    let n = s.rng().gen_range(-3..=3);
    let seed: u32 = s.rng().gen();
    let first = nth_product_with(&a, &b, n, Strip::First);
    let ok = [Strip::Last, Strip::Indexed(seed)].into_iter().all(|st| nth_product_with(&a, &b, n, st) == first);
    ((!ok).then(|| format!("a = {a}; b = {b}; n = {n}; seed = {seed}")), !first.is_zero())
}

fn derivation(s: &mut Sampler) -> Check {
    let a = s.state(TERMS, MAX_LEN, MAX_DEPTH);
    let b = s.state(TERMS, MAX_LEN, MAX_DEPTH);
    let n = s.rng().gen_range(-3..=3);
    let (da, db) = (derivative(&a), derivative(&b));
    let leibniz = derivative(&nth_product(&a, &b, n)) == nth_product(&da, &b, n).plus(&nth_product(&a, &db, n));
    let shift = nth_product(&da, &b, n) == nth_product(&a, &b, n - 1).scaled(&q(-n as i64));
    let wick_rule = derivative(&wick(&[a.clone(), b.clone()]).expect("two factors"))
        == wick(&[da.clone(), b.clone()]).expect("two factors").plus(&wick(&[a.clone(), db]).expect("two factors"));
    let modes = da == derivative_by_modes(&a);
    let ok = leibniz && shift && wick_rule && modes;
    let fail = (!ok).then(|| {
        format!("a = {a}; b = {b}; n = {n}; leibniz {leibniz}, shift {shift}, wick {wick_rule}, modes {modes}")
    });
    (fail, !nth_product(&a, &b, n).is_zero())
}

fn grading(s: &mut Sampler) -> Check {
    let a = s.homogeneous(TERMS, MAX_LEN, MAX_DEPTH);
    let b = s.homogeneous(TERMS, MAX_LEN, MAX_DEPTH);
    let n = s.rng().gen_range(-3..=3);
    let p = nth_product(&a, &b, n);
    let (ga, gb, gp) = (gradings(&a), gradings(&b), gradings(&p));
    let weight_ok = p.is_zero() || gp.weight == Some(ga.weight.unwrap() + gb.weight.unwrap() - n as i64 - 1);
    // charge is checked on single monomials, which always carry one charge
    let ma = s.monomial(MAX_LEN, MAX_DEPTH);
    let mb = s.monomial(MAX_LEN, MAX_DEPTH);
    let pm = nth_product(&ma, &mb, n);
    let charge_ok =
        pm.is_zero() || gradings(&pm).charge == Some(gradings(&ma).charge.unwrap() + gradings(&mb).charge.unwrap());
    let ok = weight_ok && charge_ok;
    ((!ok).then(|| format!("a = {a}; b = {b}; monomials {ma}, {mb}; n = {n}")), !p.is_zero())
}

fn filtration(s: &mut Sampler) -> Check {
    let a = s.state(TERMS, MAX_LEN, MAX_DEPTH);
    let b = s.state(TERMS, MAX_LEN, MAX_DEPTH);
    let n = s.rng().gen_range(-3..=3);
    let p = nth_product(&a, &b, n);
    let bound = a.degree() + b.degree();
    let ok = p.is_zero() || if n < 0 { p.degree() <= bound } else { p.degree() + 2 <= bound };
    ((!ok).then(|| format!("a = {a}; b = {b}; n = {n}; degree {}", p.degree())), !p.is_zero())
}

/// Runs `samples` seeded instances of one property on the given system.
pub fn run_property(property: Property, sys: SystemSpec, seed: u64, samples: usize) -> PropOutcome {
    // each property gets its own stream so adding one never shifts another
    let mut sampler = Sampler::new(sys, seed ^ ((property as u64 + 1) << 32));
    let check: fn(&mut Sampler) -> Check = match property {
        Property::SkewSymmetry => skew,
        Property::CommutatorFormula => commutator,
        Property::PullOff => pull_off,
        Property::DerivationLaws => derivation,
        Property::GradingAdditivity => grading,
        Property::FiltrationBounds => filtration,
    };
    let mut failures = 0;
    let mut nontrivial = 0;
    let mut witness = None;
    for _ in 0..samples {
        let (fail, busy) = check(&mut sampler);
        nontrivial += busy as usize;
        if let Some(w) = fail {
            failures += 1;
            witness.get_or_insert(w);
        }
    }
    PropOutcome { property, samples, failures, nontrivial, witness }
}
