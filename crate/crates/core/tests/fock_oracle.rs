// Circle products checked against a direct mode-algebra model of the Fock space.

use std::collections::BTreeMap;

use freefield::fock::{
    beta, bfield, cfield, derivative, gamma, nth_product, wick, GeneratorId, Kind, Mode, State, SystemSpec,
};
use freefield::rational::{binom, q, Q};
use freefield::sampling::Sampler;
use num_traits::{One, Zero};
use proptest::prelude::*;

type Word = Vec<(GeneratorId, i32)>;

/// Fock vectors as combinations of creation words kept in a fixed order.
#[derive(Clone, Debug, Default, PartialEq)]
struct Vecs(BTreeMap<Word, Q>);

fn order_key(x: &(GeneratorId, i32)) -> (u8, u16, u8, u16, i32) {
    let sector = x.0.kind.is_odd() as u8;
    let kind = match x.0.kind {
        Kind::Beta => 0,
        Kind::Gamma => 1,
        Kind::B => 2,
        Kind::C => 3,
    };
    (sector, x.0.copy, kind, x.0.index, x.1)
}

fn bracket(a: GeneratorId, b: GeneratorId) -> i64 {
    if a.copy != b.copy || a.index != b.index {
        return 0;
    }
    match (a.kind, b.kind) {
        (Kind::Beta, Kind::Gamma) => 1,
        (Kind::Gamma, Kind::Beta) => -1,
        (Kind::B, Kind::C) | (Kind::C, Kind::B) => 1,
        _ => 0,
    }
}

impl Vecs {
    fn add(&mut self, w: Word, c: Q) {
        // bubble into order, tracking odd swaps; repeated odd mode kills the word
        let mut w = w;
        let mut neg = false;
        for i in 0..w.len() {
            for j in (i + 1..w.len()).rev() {
                if order_key(&w[j - 1]) > order_key(&w[j]) {
                    if w[j - 1].0.is_odd() && w[j].0.is_odd() {
                        neg = !neg;
                    }
                    w.swap(j - 1, j);
                }
            }
        }
        if w.windows(2).any(|p| p[0] == p[1] && p[0].0.is_odd()) {
            return;
        }
        let c = if neg { -c } else { c };
        let e = self.0.entry(w).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.0.retain(|_, v| !v.is_zero());
        }
    }

    fn plus(&mut self, o: &Vecs, c: &Q) {
        for (w, v) in &o.0 {
            self.add(w.clone(), v * c);
        }
    }

    fn depth(&self) -> i32 {
        self.0.keys().flat_map(|w| w.iter().map(|x| -x.1)).max().unwrap_or(0)
    }
}

/// The mode φ(k) of a generator acting on a vector.
fn mode(g: GeneratorId, k: i32, v: &Vecs) -> Vecs {
    let mut out = Vecs::default();
    for (w, c) in &v.0 {
        if k < 0 {
            let mut nw = vec![(g, k)];
            nw.extend(w.iter().cloned());
            out.add(nw, c.clone());
        } else {
            let mut odd_seen = 0;
            for (i, x) in w.iter().enumerate() {
                let b = bracket(g, x.0);
                if b != 0 && k + x.1 == -1 {
                    let mut nw = w.clone();
                    nw.remove(i);
                    let s = if g.is_odd() && odd_seen % 2 == 1 { -b } else { b };
                    out.add(nw, c * q(s));
                }
                if x.0.is_odd() {
                    odd_seen += 1;
                }
            }
        }
    }
    out
}

/// Field of the state φ(-p-1)|0⟩, which is ∂^pφ/p!, acting by its n-th mode.
fn field_mode(g: GeneratorId, p: i32, n: i32, v: &Vecs) -> Vecs {
    // (∂^p φ / p!)_(n) = (-1)^p C(n, p) φ(n - p)
    let c = binom(n as i64, p as u64) * q(if p % 2 == 0 { 1 } else { -1 });
    if c.is_zero() {
        return Vecs::default();
    }
    let mut out = Vecs::default();
    out.plus(&mode(g, n - p, v), &c);
    out
}

/// :AB:_(n) for A = φ(-p-1), B = ψ(-r-1).
fn quadratic_mode(a: (GeneratorId, i32), b: (GeneratorId, i32), n: i32, v: &Vecs) -> Vecs {
    let eps = if a.0.is_odd() && b.0.is_odd() { -Q::one() } else { Q::one() };
    let bound = v.depth() + n.abs() + a.1 + b.1 + 4;
    let mut out = Vecs::default();
    for k in -bound..bound {
        if k < 0 {
            let inner = field_mode(b.0, b.1, n - 1 - k, v);
            out.plus(&field_mode(a.0, a.1, k, &inner), &Q::one());
        } else {
            let inner = field_mode(a.0, a.1, k, v);
            out.plus(&field_mode(b.0, b.1, n - 1 - k, &inner), &eps);
        }
    }
    out
}

fn to_vecs(s: &State) -> Vecs {
    let mut out = Vecs::default();
    for (m, c) in s.terms() {
        out.add(m.modes().iter().map(|md| (md.gen, md.m)).collect(), c.clone());
    }
    out
}

fn mono(modes: &[(GeneratorId, i32)]) -> State {
    let ms: Vec<Mode> = modes.iter().map(|&(gen, m)| Mode { gen, m }).collect();
    State::from_modes(&ms, Q::one()).unwrap()
}

#[test]
fn basic_contractions() {
    assert_eq!(nth_product(&beta(1, 1), &gamma(1, 1), 0), State::vacuum());
    assert_eq!(nth_product(&gamma(1, 1), &beta(1, 1), 0), State::vacuum().neg());
    assert_eq!(nth_product(&bfield(1, 1), &cfield(1, 1), 0), State::vacuum());
    assert_eq!(nth_product(&cfield(1, 1), &bfield(1, 1), 0), State::vacuum());
    assert!(nth_product(&beta(1, 1), &gamma(1, 2), 0).is_zero());
    assert!(nth_product(&beta(1, 1), &gamma(2, 1), 0).is_zero());
    assert!(nth_product(&beta(1, 1), &gamma(1, 1), 1).is_zero());
}

#[test]
fn fermion_square_vanishes() {
    let b = bfield(1, 1);
    assert!(wick(&[b.clone(), b]).unwrap().is_zero());
    let c = cfield(2, 1);
    let d = cfield(1, 1);
    assert_eq!(wick(&[c.clone(), d.clone()]).unwrap(), wick(&[d, c]).unwrap().neg());
}

#[test]
fn derivative_of_generator() {
    let g = GeneratorId::new(Kind::Gamma, 1, 1);
    assert_eq!(derivative(&gamma(1, 1)), mono(&[(g, -2)]));
    assert_eq!(derivative(&derivative(&gamma(1, 1))), mono(&[(g, -3)]).scaled(&q(2)));
}

#[test]
fn wick_of_two_generators_is_creation_word() {
    let b = GeneratorId::new(Kind::Beta, 1, 1);
    let g = GeneratorId::new(Kind::Gamma, 1, 2);
    assert_eq!(wick(&[beta(1, 1), gamma(1, 2)]).unwrap(), mono(&[(b, -1), (g, -1)]));
}

#[test]
fn text_round_trip_example() {
    let s = wick(&[beta(1, 2), derivative(&gamma(1, 2))]).unwrap().plus(&cfield(1, 1).scaled(&q(-3)));
    let t = s.to_string();
    assert_eq!(t.parse::<State>().unwrap(), s);
    assert_eq!("0".parse::<State>().unwrap(), State::zero());
    assert_eq!("1/1 * |0>".parse::<State>().unwrap(), State::vacuum());
    assert!("1/1 * g[s1,b,1](-1)".parse::<State>().is_err());
    assert!("1/1 * g[s1,beta,1](0)".parse::<State>().is_err());
}

fn system() -> SystemSpec {
    SystemSpec::new(Some((1, 2)), Some((1, 1))).unwrap()
}

fn gen_strategy() -> impl Strategy<Value = GeneratorId> {
    let gens = system().generators();
    (0..gens.len()).prop_map(move |i| gens[i])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn single_generator_modes_match_oracle(
        g in gen_strategy(), p in 0i32..3, n in -3i32..4, seed in any::<u64>()
    ) {
        let mut s = Sampler::new(system(), seed);
        let v = s.state(3, 3, 3);
        let a = mono(&[(g, -p - 1)]);
        let engine = to_vecs(&nth_product(&a, &v, n));
        prop_assert_eq!(engine, field_mode(g, p, n, &to_vecs(&v)));
    }

    #[test]
    fn quadratic_modes_match_oracle(
        g1 in gen_strategy(), g2 in gen_strategy(), p in 0i32..2, r in 0i32..2,
        n in -3i32..4, seed in any::<u64>()
    ) {
        let mut s = Sampler::new(system(), seed);
        let v = s.state(2, 3, 3);
        let a = mono(&[(g1, -p - 1), (g2, -r - 1)]);
        prop_assume!(!a.is_zero());
        // the engine stores :AB: in canonical order; the oracle reads the sorted word back
        let (m, c) = a.terms().next().unwrap();
        let md = m.modes();
        let (x, y) = ((md[0].gen, -md[0].m - 1), (md[1].gen, -md[1].m - 1));
        let mut expected = Vecs::default();
        expected.plus(&quadratic_mode(x, y, n, &to_vecs(&v)), c);
        prop_assert_eq!(to_vecs(&nth_product(&a, &v, n)), expected);
    }

    #[test]
    fn text_round_trip(seed in any::<u64>()) {
        let mut s = Sampler::new(system(), seed);
        let v = s.state(4, 4, 4);
        prop_assert_eq!(v.to_string().parse::<State>().unwrap(), v);
    }
}
