//! Weyl algebra D(V) in normal form x'^α ∂^β, the classical τ maps, and
//! zero-mode checks linking Fock states to differential operators on O(V).

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::fock::{gradings, nth_product, GeneratorId, Kind, Mode, State};
use crate::liealg::{LieAlgebraSpec, LieKind};
use crate::rational::{binom, factorial, fmt_q_full, parse_q, q, Q};

/// Coordinate x'_{i,j}: index i within copy j (both 1-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WVar {
    pub i: u16,
    pub j: u16,
}

impl WVar {
    pub fn new(i: usize, j: usize) -> Self {
        WVar { i: i as u16, j: j as u16 }
    }
}

type Powers = SmallVec<[(WVar, u32); 4]>;

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WMono {
    pub x: Powers,
    pub d: Powers,
}

impl WMono {
    pub fn degree(&self) -> u32 {
        self.x.iter().chain(self.d.iter()).map(|(_, e)| *e).sum()
    }
}

fn mul_powers(a: &Powers, b: &Powers) -> Powers {
    let mut out: BTreeMap<WVar, u32> = a.iter().copied().collect();
    for (v, e) in b {
        *out.entry(*v).or_insert(0) += e;
    }
    out.into_iter().filter(|(_, e)| *e > 0).collect()
}

fn pow_of(p: &Powers, v: WVar) -> u32 {
    p.iter().find(|(w, _)| *w == v).map(|(_, e)| *e).unwrap_or(0)
}

fn lower(p: &Powers, k: &BTreeMap<WVar, u32>) -> Powers {
    p.iter().map(|(v, e)| (*v, e - k.get(v).copied().unwrap_or(0))).filter(|(_, e)| *e > 0).collect()
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct WeylElement {
    terms: BTreeMap<WMono, Q>,
}

impl WeylElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        let mut w = Self::zero();
        w.add_term(WMono::default(), c);
        w
    }

    pub fn x(i: usize, j: usize) -> Self {
        let mut w = Self::zero();
        w.add_term(WMono { x: smallvec::smallvec![(WVar::new(i, j), 1)], d: Powers::new() }, Q::one());
        w
    }

    pub fn d(i: usize, j: usize) -> Self {
        let mut w = Self::zero();
        w.add_term(WMono { x: Powers::new(), d: smallvec::smallvec![(WVar::new(i, j), 1)] }, Q::one());
        w
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&WMono, &Q)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, m: WMono, c: Q) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m.clone()).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add_scaled(&mut self, o: &WeylElement, c: &Q) {
        if c.is_zero() {
            return;
        }
        for (m, v) in &o.terms {
            self.add_term(m.clone(), v * c);
        }
    }

    pub fn scaled(&self, c: &Q) -> Self {
        let mut w = Self::zero();
        w.add_scaled(self, c);
        w
    }

    pub fn plus(&self, o: &WeylElement) -> Self {
        let mut w = self.clone();
        w.add_scaled(o, &Q::one());
        w
    }

    pub fn minus(&self, o: &WeylElement) -> Self {
        let mut w = self.clone();
        w.add_scaled(o, &-Q::one());
        w
    }

    /// Bernstein degree |α| + |β| (max over terms; 0 for zero).
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    /// True if no ∂ factor occurs.
    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(|m| m.d.is_empty())
    }

    /// Product in normal form: ∂^b x'^c = Σ_k C(b,k) C(c,k) k! x'^{c-k} ∂^{b-k} per variable.
    pub fn mul(&self, o: &WeylElement) -> WeylElement {
        let mut out = WeylElement::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                // variables shared between m1.d and m2.x
                let shared: Vec<(WVar, u32)> =
                    m1.d.iter()
                        .filter_map(|(v, b)| {
                            let c = pow_of(&m2.x, *v);
                            (c > 0).then_some((*v, (*b).min(c)))
                        })
                        .collect();
                let mut ks = vec![0u32; shared.len()];
                loop {
                    let mut coeff = c1 * c2;
                    let mut kmap = BTreeMap::new();
                    for (idx, (v, _)) in shared.iter().enumerate() {
                        let k = ks[idx];
                        let b = pow_of(&m1.d, *v) as i64;
                        let c = pow_of(&m2.x, *v) as i64;
                        coeff *= binom(b, k as u64) * binom(c, k as u64) * Q::from_integer(factorial(k as u64));
                        kmap.insert(*v, k);
                    }
                    let x = mul_powers(&m1.x, &lower(&m2.x, &kmap));
                    let d = mul_powers(&lower(&m1.d, &kmap), &m2.d);
                    out.add_term(WMono { x, d }, coeff);
                    // odometer over k vectors
                    let mut pos = 0;
                    loop {
                        if pos == shared.len() {
                            break;
                        }
                        if ks[pos] < shared[pos].1 {
                            ks[pos] += 1;
                            break;
                        }
                        ks[pos] = 0;
                        pos += 1;
                    }
                    if pos == shared.len() {
                        break;
                    }
                }
            }
        }
        out
    }

    pub fn commutator(&self, o: &WeylElement) -> WeylElement {
        self.mul(o).minus(&o.mul(self))
    }

    /// Action on a polynomial in x' (∂ acting by differentiation).
    pub fn apply(&self, poly: &WeylElement) -> Result<WeylElement> {
        if !poly.is_polynomial() {
            return Err(Error::Precondition("Weyl action needs a polynomial argument".into()));
        }
        let prod = self.mul(poly);
        // the ∂ parts annihilate the constant 1
        let mut out = WeylElement::zero();
        for (m, c) in prod.terms() {
            if m.d.is_empty() {
                out.add_term(m.clone(), c.clone());
            }
        }
        Ok(out)
    }
}

impl fmt::Display for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let terms: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut parts = Vec::new();
                for (v, e) in &m.x {
                    parts.push(format!("x'[{},{}]^{}", v.i, v.j, e));
                }
                for (v, e) in &m.d {
                    parts.push(format!("d[{},{}]^{}", v.i, v.j, e));
                }
                if parts.is_empty() {
                    parts.push("1".into());
                }
                format!("{} * {}", fmt_q_full(c), parts.join(" "))
            })
            .collect();
        f.write_str(&terms.join(" + "))
    }
}

impl std::str::FromStr for WeylElement {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut out = WeylElement::zero();
        if s == "0" {
            return Ok(out);
        }
        for term in s.split(" + ") {
            let (c, body) = term.split_once(" * ").ok_or_else(|| Error::Parse(format!("bad term `{term}`")))?;
            let mut w = WeylElement::constant(parse_q(c)?);
            let body = body.trim();
            if body != "1" {
                // factors in x' then d order multiply to the normal-form monomial
                let mut xs = Powers::new();
                let mut ds = Powers::new();
                for tok in body.split_whitespace() {
                    let bad = || Error::Parse(format!("bad Weyl factor `{tok}`"));
                    let (head, rest) = tok.split_once('[').ok_or_else(bad)?;
                    let (idx, exp) = rest.split_once("]^").ok_or_else(bad)?;
                    let (i, j) = idx.split_once(',').ok_or_else(bad)?;
                    let v = WVar { i: i.parse().map_err(|_| bad())?, j: j.parse().map_err(|_| bad())? };
                    let e: u32 = exp.parse().map_err(|_| bad())?;
                    if e == 0 {
                        return Err(bad());
                    }
                    match head {
                        "x'" if ds.is_empty() => xs = mul_powers(&xs, &smallvec::smallvec![(v, e)]),
                        "d" => ds = mul_powers(&ds, &smallvec::smallvec![(v, e)]),
                        _ => return Err(bad()),
                    }
                }
                let mut m = WeylElement::zero();
                m.add_term(WMono { x: xs, d: ds }, Q::one());
                w = w.mul(&m);
            }
            out.add_scaled(&w, &Q::one());
        }
        Ok(out)
    }
}

/// Which classical map to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TauShape {
    /// A acting on each of m copies of C^n: τ(ξ) = -Σ_j Σ_{i,k} ρ(ξ)_{ki} x'_{i,j} ∂_{k,j}.
    Left { n: usize, m: usize },
    /// gl_m acting on copies: τ'(ξ) = -Σ_i Σ_{a,c} ρ(ξ)_{ac} x'_{i,c} ∂_{i,a}.
    RightGl { n: usize, m: usize },
    /// sp_2m partner of SO_n on (C^n)^m.
    SpPrime { n: usize, m: usize },
    /// Split so_2m partner of Sp_2n on (C^{2n})^m; `n` is half the module dimension.
    SoPrime { n: usize, m: usize },
}

pub fn tau_maps(a: &LieAlgebraSpec, shape: TauShape) -> Result<Vec<WeylElement>> {
    let mut out = Vec::with_capacity(a.dim());
    match shape {
        TauShape::Left { n, m } => {
            if a.std_dim() != n {
                return Err(Error::Dimension(format!("module dimension {} vs shape n = {n}", a.std_dim())));
            }
            for be in &a.basis {
                let mut w = WeylElement::zero();
                for j in 1..=m {
                    for k in 0..n {
                        for i in 0..n {
                            let c = be.mat.get(k, i);
                            if !c.is_zero() {
                                w.add_scaled(&WeylElement::x(i + 1, j).mul(&WeylElement::d(k + 1, j)), &-c.clone());
                            }
                        }
                    }
                }
                out.push(w);
            }
        }
        TauShape::RightGl { n, m } => {
            if a.std_dim() != m {
                return Err(Error::Dimension(format!("module dimension {} vs shape m = {m}", a.std_dim())));
            }
            for be in &a.basis {
                let mut w = WeylElement::zero();
                for i in 1..=n {
                    for aa in 0..m {
                        for c in 0..m {
                            let v = be.mat.get(aa, c);
                            if !v.is_zero() {
                                w.add_scaled(&WeylElement::x(i, c + 1).mul(&WeylElement::d(i, aa + 1)), &-v.clone());
                            }
                        }
                    }
                }
                out.push(w);
            }
        }
        TauShape::SpPrime { n, m } | TauShape::SoPrime { n, m } => {
            let sp = matches!(shape, TauShape::SpPrime { .. });
            let expected = if sp { LieKind::Sp } else { LieKind::SoSplit };
            if a.kind != expected || a.rank.0 != m {
                return Err(Error::Dimension(format!("shape needs {expected} of half rank {m}")));
            }
            let dim = if sp { n } else { 2 * n };
            let shift = if sp { Q::new(BigInt::from(n), BigInt::from(2)) } else { q(n as i64) };
            for be in &a.basis {
                let (t, jk) = be.label.split_at(1);
                let digits: Vec<usize> = jk.chars().map(|c| c.to_digit(10).unwrap() as usize).collect();
                let (j, k) = (digits[0], digits[1]);
                let mut w = WeylElement::zero();
                match t {
                    "B" => {
                        for i in 1..=dim {
                            w = w.plus(&WeylElement::x(i, j).mul(&WeylElement::x(i, k)));
                        }
                    }
                    "C" => {
                        for i in 1..=dim {
                            w = w.plus(&WeylElement::d(i, j).mul(&WeylElement::d(i, k)));
                        }
                    }
                    "S" | "D" => {
                        let f = |i: usize, c: usize| if t == "S" { WeylElement::x(i, c) } else { WeylElement::d(i, c) };
                        for i in 1..=n {
                            w = w.plus(&f(i, j).mul(&f(i + n, k))).minus(&f(i + n, j).mul(&f(i, k)));
                        }
                    }
                    "A" => {
                        for i in 1..=dim {
                            w = w.plus(&WeylElement::x(i, j).mul(&WeylElement::d(i, k)));
                        }
                        if j == k {
                            w = w.plus(&WeylElement::constant(shift.clone()));
                        }
                    }
                    _ => return Err(Error::Internal(format!("unexpected basis label {}", be.label))),
                }
                out.push(w);
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DetKind {
    /// det[∂/∂x'_{i,j}], the classical partner of the β determinant.
    D,
    /// det[x'_{i,j}], the partner of the γ determinant.
    X,
}

/// Commutative determinant over rows 1..=n and the column set J.
pub fn classical_dets(n: usize, cols: &[usize], kind: DetKind) -> Result<WeylElement> {
    if cols.len() != n {
        return Err(Error::Parameter(format!("need {n} column indices, got {}", cols.len())));
    }
    let mut sorted = cols.to_vec();
    sorted.sort();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Parameter("repeated column index".into()));
    }
    let entry = |i: usize, j: usize| match kind {
        DetKind::D => WeylElement::d(i, j),
        DetKind::X => WeylElement::x(i, j),
    };
    let mut out = WeylElement::zero();
    let mut perm: Vec<usize> = (0..n).collect();
    fn rec(p: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
        if k == p.len() {
            f(p);
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            rec(p, k + 1, f);
            p.swap(k, i);
        }
    }
    rec(&mut perm, 0, &mut |p| {
        let inv = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
        let mut t = WeylElement::one();
        for (r, &c) in p.iter().enumerate() {
            t = t.mul(&entry(r + 1, cols[c]));
        }
        out.add_scaled(&t, &if inv % 2 == 0 { Q::one() } else { -Q::one() });
    });
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylInvariance {
    pub ok: bool,
    /// Index of the first non-commuting τ(ξ) and the commutator.
    pub witness: Option<(usize, WeylElement)>,
}

pub fn weyl_invariance(w: &WeylElement, taus: &[WeylElement]) -> WeylInvariance {
    for (i, t) in taus.iter().enumerate() {
        let c = t.commutator(w);
        if !c.is_zero() {
            return WeylInvariance { ok: false, witness: Some((i, c)) };
        }
    }
    WeylInvariance { ok: true, witness: None }
}

fn encode(poly: &WeylElement) -> Result<State> {
    let mut out = State::zero();
    for (m, c) in poly.terms() {
        if !m.d.is_empty() {
            return Err(Error::Precondition("zero-mode argument must be a polynomial in x'".into()));
        }
        let mut modes = Vec::new();
        for (v, e) in &m.x {
            for _ in 0..*e {
                modes.push(Mode { gen: GeneratorId { kind: Kind::Gamma, copy: v.j, index: v.i }, m: -1 });
            }
        }
        out.add_scaled(&State::from_modes(&modes, Q::one())?, c);
    }
    Ok(out)
}

fn decode(s: &State) -> Result<WeylElement> {
    let mut out = WeylElement::zero();
    for (m, c) in s.terms() {
        let mut xs = Powers::new();
        for md in m.modes() {
            if md.gen.kind != Kind::Gamma || md.m != -1 {
                return Err(Error::Internal(format!("zero mode left the weight-0 space: {s}")));
            }
            xs = mul_powers(&xs, &smallvec::smallvec![(WVar { i: md.gen.index, j: md.gen.copy }, 1)]);
        }
        out.add_term(WMono { x: xs, d: Powers::new() }, c.clone());
    }
    Ok(out)
}

/// Zero mode a(wt a - 1) acting on O(V), realized on Π γ(-1)|0⟩ states.
pub fn zhu_zero_mode(a: &State, poly: &WeylElement) -> Result<WeylElement> {
    let v = encode(poly)?;
    let mut out = WeylElement::zero();
    for (w, comp) in a.weight_components() {
        let img = nth_product(&comp, &v, (w - 1) as i32);
        out = out.plus(&decode(&img)?);
    }
    Ok(out)
}

/// (a*b, a∘b) = (Σ_j C(m,j) a∘_{j-1}b, Σ_j C(m,j) a∘_{j-2}b) for a of weight m.
pub fn zhu_products(a: &State, b: &State) -> Result<(State, State)> {
    let m = gradings(a)
        .weight
        .ok_or_else(|| Error::Precondition("Zhu products need a weight-homogeneous left factor".into()))?;
    let mut star = State::zero();
    let mut circ = State::zero();
    for j in 0..=m.max(0) {
        let c = binom(m, j as u64);
        star.add_scaled(&nth_product(a, b, j as i32 - 1), &c);
        circ.add_scaled(&nth_product(a, b, j as i32 - 2), &c);
    }
    Ok((star, circ))
}

/// All monomials in x'_{i,j} (i ≤ n, j ≤ m) of degree ≤ deg.
pub fn test_monomials(n: usize, m: usize, deg: u32) -> Vec<WeylElement> {
    let vars: Vec<(usize, usize)> = (1..=n).flat_map(|i| (1..=m).map(move |j| (i, j))).collect();
    let mut out = Vec::new();
    fn rec(vars: &[(usize, usize)], start: usize, left: u32, cur: WeylElement, out: &mut Vec<WeylElement>) {
        out.push(cur.clone());
        if left == 0 {
            return;
        }
        for k in start..vars.len() {
            let (i, j) = vars[k];
            rec(vars, k, left - 1, cur.mul(&WeylElement::x(i, j)), out);
        }
    }
    rec(&vars, 0, deg, WeylElement::one(), &mut out);
    out
}

/// If the zero mode of a differs from the operator w by a scalar c on every
/// test polynomial, returns c.
pub fn scalar_discrepancy(a: &State, w: &WeylElement, tests: &[WeylElement]) -> Result<Option<Q>> {
    let mut c: Option<Q> = None;
    for t in tests {
        let diff = zhu_zero_mode(a, t)?.minus(&w.apply(t)?);
        if diff.is_zero() {
            if let Some(cv) = &c {
                if !cv.is_zero() && !t.is_zero() {
                    return Ok(None);
                }
            } else if !t.is_zero() {
                c = Some(Q::zero());
            }
            continue;
        }
        // diff must equal λ·t
        let (m, v) = t.terms().next().ok_or_else(|| Error::Internal("zero test polynomial".into()))?;
        let lam = diff.terms().find(|(mm, _)| *mm == m).map(|(_, x)| x / v);
        match lam {
            Some(l) if diff == t.scaled(&l) => match &c {
                None => c = Some(l),
                Some(cv) if *cv == l => {}
                _ => return Ok(None),
            },
            _ => return Ok(None),
        }
    }
    Ok(c)
}
