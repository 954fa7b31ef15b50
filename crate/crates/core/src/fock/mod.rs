//! Free-field Fock states and the circle-product engine.

mod engine;
mod ops;
mod text;

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::rational::Q;

pub use engine::{apply_mode, cache_len, clear_cache, nth_product, nth_product_with, Strip};
pub use ops::{commutes, derivative, derivative_by_modes, gradings, symbol, wick, Commutation, Gradings};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sector {
    Bose,
    Fermi,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Kind {
    Beta,
    Gamma,
    B,
    C,
}

impl Kind {
    pub fn is_odd(self) -> bool {
        matches!(self, Kind::B | Kind::C)
    }

    pub fn sector(self) -> Sector {
        if self.is_odd() {
            Sector::Fermi
        } else {
            Sector::Bose
        }
    }

    /// Conformal weight: 1 for β and b, 0 for γ and c.
    pub fn weight(self) -> i64 {
        match self {
            Kind::Beta | Kind::B => 1,
            Kind::Gamma | Kind::C => 0,
        }
    }

    pub fn charge(self) -> i64 {
        match self {
            Kind::Beta | Kind::B => -1,
            Kind::Gamma | Kind::C => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Kind::Beta => "beta",
            Kind::Gamma => "gamma",
            Kind::B => "b",
            Kind::C => "c",
        }
    }

    pub fn from_name(s: &str) -> Option<Kind> {
        match s {
            "beta" => Some(Kind::Beta),
            "gamma" => Some(Kind::Gamma),
            "b" => Some(Kind::B),
            "c" => Some(Kind::C),
            _ => None,
        }
    }
}

/// One free-field generator: kind, copy j and coordinate index i (both 1-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GeneratorId {
    pub kind: Kind,
    pub copy: u16,
    pub index: u16,
}

impl GeneratorId {
    pub fn new(kind: Kind, copy: usize, index: usize) -> Self {
        GeneratorId { kind, copy: copy as u16, index: index as u16 }
    }

    pub fn is_odd(self) -> bool {
        self.kind.is_odd()
    }

    fn key(self) -> (Sector, u16, Kind, u16) {
        (self.kind.sector(), self.copy, self.kind, self.index)
    }
}

impl PartialOrd for GeneratorId {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for GeneratorId {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.key().cmp(&other.key())
    }
}

impl fmt::Display for GeneratorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let slot = if self.is_odd() { 'e' } else { 's' };
        write!(f, "g[{slot}{},{},{}]", self.copy, self.kind.name(), self.index)
    }
}

/// φ∘₀ψ for generators. Universal: only matching copy and index pair up.
pub fn contraction(a: GeneratorId, b: GeneratorId) -> i32 {
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

/// Creation mode φ(m), m ≤ -1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mode {
    pub gen: GeneratorId,
    pub m: i32,
}

impl Mode {
    pub fn weight(self) -> i64 {
        (-self.m as i64 - 1) + self.gen.kind.weight()
    }
}

pub type Modes = SmallVec<[Mode; 6]>;

/// Canonically sorted creation monomial; empty is the vacuum.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(pub Modes);

impl Monomial {
    pub fn vacuum() -> Self {
        Monomial(SmallVec::new())
    }

    pub fn modes(&self) -> &[Mode] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn weight(&self) -> i64 {
        self.0.iter().map(|m| m.weight()).sum()
    }

    pub fn charge(&self) -> i64 {
        self.0.iter().map(|m| m.gen.kind.charge()).sum()
    }

    pub fn odd_count(&self) -> usize {
        self.0.iter().filter(|m| m.gen.is_odd()).count()
    }

    pub fn is_odd(&self) -> bool {
        self.odd_count() % 2 == 1
    }

    /// Sorts an arbitrary product of creation modes. Returns the Koszul sign
    /// (true = negative) or None when an odd mode repeats.
    pub fn canonicalize(mut modes: Modes) -> Option<(bool, Monomial)> {
        let mut neg = false;
        // insertion sort, counting odd transpositions
        for i in 1..modes.len() {
            let mut k = i;
            while k > 0 && modes[k - 1] > modes[k] {
                if modes[k - 1].gen.is_odd() && modes[k].gen.is_odd() {
                    neg = !neg;
                }
                modes.swap(k - 1, k);
                k -= 1;
            }
        }
        for w in modes.windows(2) {
            if w[0] == w[1] && w[0].gen.is_odd() {
                return None;
            }
        }
        Some((neg, Monomial(modes)))
    }
}

/// Exact linear combination of canonical monomials.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct State {
    terms: BTreeMap<Monomial, Q>,
}

impl State {
    pub fn zero() -> Self {
        State::default()
    }

    pub fn vacuum() -> Self {
        Self::from_monomial(Monomial::vacuum(), Q::one())
    }

    pub fn scalar(c: Q) -> Self {
        Self::from_monomial(Monomial::vacuum(), c)
    }

    pub fn from_monomial(m: Monomial, c: Q) -> Self {
        let mut s = State::zero();
        s.add_term(m, c);
        s
    }

    /// Single generator field φ = φ(-1)|0⟩.
    pub fn generator(g: GeneratorId) -> Self {
        Self::from_monomial(Monomial(smallvec::smallvec![Mode { gen: g, m: -1 }]), Q::one())
    }

    /// Product of creation modes applied to the vacuum, left to right.
    pub fn from_modes(modes: &[Mode], c: Q) -> Result<Self> {
        if let Some(bad) = modes.iter().find(|m| m.m > -1) {
            return Err(Error::Precondition(format!("mode {}({}) is not a creation mode", bad.gen, bad.m)));
        }
        Ok(match Monomial::canonicalize(modes.iter().copied().collect()) {
            None => State::zero(),
            Some((neg, mono)) => Self::from_monomial(mono, if neg { -c } else { c }),
        })
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &State, c: &Q) {
        if c.is_zero() {
            return;
        }
        for (m, v) in &other.terms {
            self.add_term(m.clone(), v * c);
        }
    }

    pub fn scaled(&self, c: &Q) -> State {
        let mut s = State::zero();
        s.add_scaled(self, c);
        s
    }

    pub fn neg(&self) -> State {
        self.scaled(&-Q::one())
    }

    pub fn plus(&self, other: &State) -> State {
        let mut s = self.clone();
        s.add_scaled(other, &Q::one());
        s
    }

    pub fn minus(&self, other: &State) -> State {
        let mut s = self.clone();
        s.add_scaled(other, &-Q::one());
        s
    }

    /// Coefficient of the vacuum.
    pub fn vacuum_coeff(&self) -> Q {
        self.coeff(&Monomial::vacuum())
    }

    /// Restriction to monomials satisfying `keep`.
    pub fn filter(&self, keep: impl Fn(&Monomial) -> bool) -> State {
        State { terms: self.terms.iter().filter(|(m, _)| keep(m)).map(|(m, c)| (m.clone(), c.clone())).collect() }
    }

    pub fn max_weight(&self) -> i64 {
        self.terms.keys().map(|m| m.weight()).max().unwrap_or(0)
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(|m| m.len()).max().unwrap_or(0)
    }

    /// Parity if every monomial has the same parity.
    pub fn parity(&self) -> Option<bool> {
        let mut it = self.terms.keys().map(|m| m.is_odd());
        let first = it.next()?;
        it.all(|p| p == first).then_some(first)
    }

    /// Splits into weight-homogeneous components.
    pub fn weight_components(&self) -> BTreeMap<i64, State> {
        let mut out: BTreeMap<i64, State> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.weight()).or_default().add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn generators(&self) -> impl Iterator<Item = GeneratorId> + '_ {
        self.terms.keys().flat_map(|m| m.0.iter().map(|md| md.gen))
    }
}

/// Declaration of a βγ / bc / mixed system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SystemSpec {
    /// (n, m): m copies of C^n carrying β, γ.
    pub bosonic: Option<(usize, usize)>,
    /// (n, r): r copies of C^n carrying b, c.
    pub fermionic: Option<(usize, usize)>,
}

impl SystemSpec {
    pub fn new(bosonic: Option<(usize, usize)>, fermionic: Option<(usize, usize)>) -> Result<Self> {
        let nonempty = |d: Option<(usize, usize)>| d.map(|(n, m)| n > 0 && m > 0).unwrap_or(false);
        if !nonempty(bosonic) && !nonempty(fermionic) {
            return Err(Error::Parameter("empty system: no generators".into()));
        }
        let clean = |d: Option<(usize, usize)>| d.filter(|(n, m)| *n > 0 && *m > 0);
        Ok(SystemSpec { bosonic: clean(bosonic), fermionic: clean(fermionic) })
    }

    pub fn generators(&self) -> Vec<GeneratorId> {
        let mut out = Vec::new();
        if let Some((n, m)) = self.bosonic {
            for j in 1..=m {
                for kind in [Kind::Beta, Kind::Gamma] {
                    for i in 1..=n {
                        out.push(GeneratorId::new(kind, j, i));
                    }
                }
            }
        }
        if let Some((n, r)) = self.fermionic {
            for j in 1..=r {
                for kind in [Kind::B, Kind::C] {
                    for i in 1..=n {
                        out.push(GeneratorId::new(kind, j, i));
                    }
                }
            }
        }
        out
    }

    pub fn contains(&self, g: GeneratorId) -> bool {
        let dims = if g.is_odd() { self.fermionic } else { self.bosonic };
        dims.map(|(n, m)| g.copy >= 1 && (g.copy as usize) <= m && g.index >= 1 && (g.index as usize) <= n)
            .unwrap_or(false)
    }

    /// Contraction table entry, zero outside the system.
    pub fn contraction(&self, a: GeneratorId, b: GeneratorId) -> i32 {
        if self.contains(a) && self.contains(b) {
            contraction(a, b)
        } else {
            0
        }
    }

    pub fn supports(&self, s: &State) -> bool {
        s.generators().all(|g| self.contains(g))
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&text::format_state(self))
    }
}

impl std::str::FromStr for State {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        text::parse_state(s)
    }
}

/// Shorthands for single generator fields.
pub fn beta(copy: usize, index: usize) -> State {
    State::generator(GeneratorId::new(Kind::Beta, copy, index))
}

pub fn gamma(copy: usize, index: usize) -> State {
    State::generator(GeneratorId::new(Kind::Gamma, copy, index))
}

pub fn bfield(copy: usize, index: usize) -> State {
    State::generator(GeneratorId::new(Kind::B, copy, index))
}

pub fn cfield(copy: usize, index: usize) -> State {
    State::generator(GeneratorId::new(Kind::C, copy, index))
}

/// All canonical monomials over the system's generators with the given weight
/// and at most `max_len` modes.
pub fn enumerate_monomials(sys: &SystemSpec, weight: i64, max_len: usize) -> Vec<Monomial> {
    let mut modes: Vec<Mode> = Vec::new();
    for g in sys.generators() {
        for m in 1..=(weight + 1) {
            let md = Mode { gen: g, m: -(m as i32) };
            if md.weight() <= weight {
                modes.push(md);
            }
        }
    }
    modes.sort();
    fn rec(modes: &[Mode], start: usize, w_left: i64, len_left: usize, cur: &mut Modes, out: &mut Vec<Monomial>) {
        if w_left == 0 {
            out.push(Monomial(cur.clone()));
        }
        if len_left == 0 {
            return;
        }
        for idx in start..modes.len() {
            let md = modes[idx];
            let w = md.weight();
            if w > w_left {
                continue;
            }
            cur.push(md);
            rec(modes, if md.gen.is_odd() { idx + 1 } else { idx }, w_left - w, len_left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(&modes, 0, weight, max_len, &mut Modes::new(), &mut out);
    out.sort();
    out.dedup();
    out
}
