use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::fock::{GeneratorId, Kind, Sector};
use crate::rational::{fmt_q_full, parse_q, Q};

/// Base name of a differential variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Name {
    /// Symbol of a free-field generator family (kind, copy).
    Sym { kind: Kind, copy: u16 },
    /// Jet coordinate or generator label.
    Free { label: Arc<str>, odd: bool },
}

impl Name {
    pub fn free(label: &str) -> Self {
        Name::Free { label: Arc::from(label), odd: false }
    }

    pub fn free_odd(label: &str) -> Self {
        Name::Free { label: Arc::from(label), odd: true }
    }

    pub fn is_odd(&self) -> bool {
        match self {
            Name::Sym { kind, .. } => kind.is_odd(),
            Name::Free { odd, .. } => *odd,
        }
    }
}

impl Ord for Name {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Name::Sym { kind: k1, copy: c1 }, Name::Sym { kind: k2, copy: c2 }) => {
                (k1.sector(), c1, k1).cmp(&(k2.sector(), c2, k2))
            }
            (Name::Sym { .. }, Name::Free { .. }) => Ordering::Less,
            (Name::Free { .. }, Name::Sym { .. }) => Ordering::Greater,
            (Name::Free { label: l1, odd: o1 }, Name::Free { label: l2, odd: o2 }) => (l1, o1).cmp(&(l2, o2)),
        }
    }
}

impl PartialOrd for Name {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Name::Sym { kind, copy } => {
                let slot = if kind.sector() == Sector::Fermi { 'e' } else { 's' };
                write!(f, "{slot}{copy}.{}", kind.name())
            }
            Name::Free { label, odd } => {
                if *odd {
                    write!(f, "@{label}")
                } else {
                    write!(f, "{label}")
                }
            }
        }
    }
}

/// Variable name[j]^(order).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var {
    pub name: Name,
    pub j: u16,
    pub order: u32,
}

impl Var {
    pub fn new(name: Name, j: usize, order: u32) -> Self {
        Var { name, j: j as u16, order }
    }

    /// Symbol variable φ_k of generator φ.
    pub fn sym(g: GeneratorId, k: u32) -> Self {
        Var { name: Name::Sym { kind: g.kind, copy: g.copy }, j: g.index, order: k }
    }

    pub fn is_odd(&self) -> bool {
        self.name.is_odd()
    }

    pub fn with_order(&self, order: u32) -> Var {
        Var { name: self.name.clone(), j: self.j, order }
    }

    /// Generator behind a symbol variable.
    pub fn generator(&self) -> Option<GeneratorId> {
        match &self.name {
            Name::Sym { kind, copy } => Some(GeneratorId { kind: *kind, copy: *copy, index: self.j }),
            Name::Free { .. } => None,
        }
    }

    /// Conformal weight of a symbol variable (order plus generator weight); jet order otherwise.
    pub fn weight(&self) -> i64 {
        let base = match &self.name {
            Name::Sym { kind, .. } => kind.weight(),
            Name::Free { .. } => 0,
        };
        self.order as i64 + base
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]^({})", self.name, self.j, self.order)
    }
}

/// Sorted product of variables, repeats allowed for even ones.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PMono(pub SmallVec<[Var; 6]>);

impl PMono {
    pub fn one() -> Self {
        PMono(SmallVec::new())
    }

    pub fn vars(&self) -> &[Var] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn jet_weight(&self) -> i64 {
        self.0.iter().map(|v| v.order as i64).sum()
    }

    pub fn weight(&self) -> i64 {
        self.0.iter().map(|v| v.weight()).sum()
    }

    pub fn is_odd(&self) -> bool {
        self.0.iter().filter(|v| v.is_odd()).count() % 2 == 1
    }

    /// Sorts a product of factors; sign flag and None when an odd factor repeats.
    pub fn from_factors(mut f: SmallVec<[Var; 6]>) -> Option<(bool, PMono)> {
        let mut neg = false;
        for i in 1..f.len() {
            let mut k = i;
            while k > 0 && f[k - 1] > f[k] {
                if f[k - 1].is_odd() && f[k].is_odd() {
                    neg = !neg;
                }
                f.swap(k - 1, k);
                k -= 1;
            }
        }
        if f.windows(2).any(|w| w[0] == w[1] && w[0].is_odd()) {
            return None;
        }
        Some((neg, PMono(f)))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct DiffPoly {
    terms: BTreeMap<PMono, Q>,
}

impl DiffPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        let mut p = Self::zero();
        p.add_term(PMono::one(), c);
        p
    }

    pub fn var(v: Var) -> Self {
        let mut p = Self::zero();
        p.add_term(PMono(smallvec::smallvec![v]), Q::one());
        p
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

    pub fn terms(&self) -> impl Iterator<Item = (&PMono, &Q)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &PMono) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    pub fn add_term(&mut self, m: PMono, c: Q) {
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

    /// Adds c·(v₁v₂⋯v_k) for factors in the given order.
    pub fn add_product(&mut self, factors: &[Var], c: &Q) {
        if let Some((neg, m)) = PMono::from_factors(factors.iter().cloned().collect()) {
            self.add_term(m, if neg { -c.clone() } else { c.clone() });
        }
    }

    pub fn add_scaled(&mut self, other: &DiffPoly, c: &Q) {
        if c.is_zero() {
            return;
        }
        for (m, v) in &other.terms {
            self.add_term(m.clone(), v * c);
        }
    }

    pub fn scaled(&self, c: &Q) -> DiffPoly {
        let mut p = DiffPoly::zero();
        p.add_scaled(self, c);
        p
    }

    pub fn plus(&self, o: &DiffPoly) -> DiffPoly {
        let mut p = self.clone();
        p.add_scaled(o, &Q::one());
        p
    }

    pub fn minus(&self, o: &DiffPoly) -> DiffPoly {
        let mut p = self.clone();
        p.add_scaled(o, &-Q::one());
        p
    }

    pub fn mul(&self, o: &DiffPoly) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &o.terms {
                let f: SmallVec<[Var; 6]> = a.0.iter().chain(b.0.iter()).cloned().collect();
                if let Some((neg, m)) = PMono::from_factors(f) {
                    let c = ca * cb;
                    out.add_term(m, if neg { -c } else { c });
                }
            }
        }
        out
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    /// Jet weight if homogeneous.
    pub fn jet_weight(&self) -> Option<i64> {
        let mut it = self.terms.keys().map(|m| m.jet_weight());
        let first = it.next().unwrap_or(0);
        it.all(|w| w == first).then_some(first)
    }

    /// Symbol (conformal) weight if homogeneous.
    pub fn weight(&self) -> Option<i64> {
        let mut it = self.terms.keys().map(|m| m.weight());
        let first = it.next().unwrap_or(0);
        it.all(|w| w == first).then_some(first)
    }

    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(|m| m.degree());
        let first = it.next().unwrap_or(0);
        it.all(|w| w == first).then_some(first)
    }

    pub fn variables(&self) -> impl Iterator<Item = &Var> {
        self.terms.keys().flat_map(|m| m.0.iter())
    }

    /// Even derivation determined on variables by `f`, whose images must have
    /// the parity of their argument.
    pub fn derivation<F>(&self, f: F) -> DiffPoly
    where
        F: Fn(&Var) -> Vec<(Var, Q)>,
    {
        let mut out = DiffPoly::zero();
        for (m, c) in &self.terms {
            for pos in 0..m.0.len() {
                for (w, cw) in f(&m.0[pos]) {
                    let mut fac = m.0.clone();
                    fac[pos] = w;
                    if let Some((neg, nm)) = PMono::from_factors(fac) {
                        let v = c * &cw;
                        out.add_term(nm, if neg { -v } else { v });
                    }
                }
            }
        }
        out
    }

    /// The derivation D: name[j]^(i) ↦ name[j]^(i+1).
    pub fn apply_d(&self) -> DiffPoly {
        self.derivation(|v| vec![(v.with_order(v.order + 1), Q::one())])
    }

    pub fn apply_d_n(&self, k: u32) -> DiffPoly {
        (0..k).fold(self.clone(), |p, _| p.apply_d())
    }

    /// Ring map sending each variable to `f(var)` (factors substituted in order).
    pub fn substitute<F>(&self, f: F) -> Result<DiffPoly>
    where
        F: Fn(&Var) -> Result<DiffPoly>,
    {
        let mut out = DiffPoly::zero();
        for (m, c) in &self.terms {
            let mut acc = DiffPoly::constant(c.clone());
            for v in m.0.iter() {
                acc = acc.mul(&f(v)?);
            }
            out.add_scaled(&acc, &Q::one());
        }
        Ok(out)
    }
}

impl fmt::Display for DiffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let terms: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                if m.0.is_empty() {
                    format!("{} * 1", fmt_q_full(c))
                } else {
                    let body: Vec<String> = m.0.iter().map(|v| v.to_string()).collect();
                    format!("{} * {}", fmt_q_full(c), body.join(" "))
                }
            })
            .collect();
        f.write_str(&terms.join(" + "))
    }
}

fn parse_var(tok: &str) -> Result<Var> {
    let bad = || Error::Parse(format!("bad variable `{tok}`"));
    let (name, rest) = tok.split_once('[').ok_or_else(bad)?;
    let (j, rest) = rest.split_once(']').ok_or_else(bad)?;
    let order = rest.strip_prefix("^(").and_then(|r| r.strip_suffix(')')).ok_or_else(bad)?;
    let j: u16 = j.parse().map_err(|_| bad())?;
    let order: u32 = order.parse().map_err(|_| bad())?;
    let name = if let Some((slot, kind)) = name.split_once('.') {
        let kind = Kind::from_name(kind).ok_or_else(bad)?;
        let (s, copy) = slot.split_at(1.min(slot.len()));
        let expected = if kind.is_odd() { "e" } else { "s" };
        if s != expected {
            return Err(bad());
        }
        Name::Sym { kind, copy: copy.parse().map_err(|_| bad())? }
    } else if let Some(label) = name.strip_prefix('@') {
        if label.is_empty() {
            return Err(bad());
        }
        Name::free_odd(label)
    } else {
        if name.is_empty() {
            return Err(bad());
        }
        Name::free(name)
    };
    Ok(Var { name, j, order })
}

impl std::str::FromStr for DiffPoly {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut out = DiffPoly::zero();
        if s == "0" {
            return Ok(out);
        }
        for term in s.split(" + ") {
            let (c, body) = term.split_once(" * ").ok_or_else(|| Error::Parse(format!("bad term `{term}`")))?;
            let c = parse_q(c)?;
            let body = body.trim();
            let vars: Vec<Var> =
                if body == "1" { Vec::new() } else { body.split_whitespace().map(parse_var).collect::<Result<_>>()? };
            out.add_product(&vars, &c);
        }
        Ok(out)
    }
}
