//! Currents, conformal vectors and generator families built as Fock states.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::fock::{
    commutes, enumerate_monomials, nth_product, wick, GeneratorId, Kind, Mode, Monomial, State, SystemSpec,
};
use crate::liealg::{self, Element, LieAlgebraSpec, LieKind};
use crate::linalg::{self, Echelon, SparseVec};
use crate::rational::{q, Q};

pub fn build_system(bosonic: Option<(usize, usize)>, fermionic: Option<(usize, usize)>) -> Result<SystemSpec> {
    SystemSpec::new(bosonic, fermionic)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    /// Acting on the coordinate index within each copy.
    Left,
    /// Acting on the copy index (the transposed module).
    Right,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FormKind {
    Trace,
    Normalized,
}

#[derive(Clone, Debug)]
pub struct CurrentFamily {
    pub name: String,
    pub algebra: LieAlgebraSpec,
    pub carrier: SystemSpec,
    /// One current per basis element.
    pub currents: Vec<State>,
    pub form: FormKind,
    pub level: Option<Q>,
}

impl CurrentFamily {
    pub fn current_of(&self, x: &Element) -> State {
        let mut s = State::zero();
        for (c, t) in x.iter().zip(&self.currents) {
            s.add_scaled(t, c);
        }
        s
    }

    pub fn form_value(&self, x: &Element, y: &Element) -> Q {
        match self.form {
            FormKind::Trace => self.algebra.trace_form(x, y),
            FormKind::Normalized => self.algebra.normalized_form(x, y),
        }
    }

    pub fn labels(&self) -> Vec<String> {
        self.algebra.basis.iter().map(|b| b.label.clone()).collect()
    }
}

fn g(kind: Kind, copy: usize, index: usize) -> GeneratorId {
    GeneratorId::new(kind, copy, index)
}

/// :φψ: for two generator fields.
fn pair(a: GeneratorId, b: GeneratorId) -> State {
    State::from_modes(&[Mode { gen: a, m: -1 }, Mode { gen: b, m: -1 }], Q::one()).expect("creation modes")
}

/// θ^ξ for every basis element: -Σ:γ β^{ρ(ξ)}: on βγ copies, +Σ:b^{ρ(ξ)} c: on bc copies.
pub fn theta(a: &LieAlgebraSpec, sys: &SystemSpec, side: Side) -> Result<CurrentFamily> {
    if a.is_super() {
        return Err(Error::Parameter("theta needs an even Lie algebra; use the mixed gl(r|s) family".into()));
    }
    let d = a.std_dim();
    for (label, dims) in [("bosonic", sys.bosonic), ("fermionic", sys.fermionic)] {
        if let Some((n, m)) = dims {
            let acted = if side == Side::Left { n } else { m };
            if acted != d {
                return Err(Error::Dimension(format!(
                    "{label} part has {acted} {} but the module has dimension {d}",
                    if side == Side::Left { "coordinates" } else { "copies" }
                )));
            }
        }
    }
    let mut currents = Vec::with_capacity(a.dim());
    for be in &a.basis {
        let m = &be.mat;
        let mut s = State::zero();
        for k in 0..d {
            for i in 0..d {
                let c = m.get(k, i);
                if c.is_zero() {
                    continue;
                }
                let (k1, i1) = (k + 1, i + 1);
                if let Some((n, copies)) = sys.bosonic {
                    match side {
                        Side::Left => {
                            for j in 1..=copies {
                                s.add_scaled(&pair(g(Kind::Gamma, j, i1), g(Kind::Beta, j, k1)), &-c.clone());
                            }
                        }
                        Side::Right => {
                            for idx in 1..=n {
                                s.add_scaled(&pair(g(Kind::Gamma, i1, idx), g(Kind::Beta, k1, idx)), &-c.clone());
                            }
                        }
                    }
                }
                if let Some((n, copies)) = sys.fermionic {
                    match side {
                        Side::Left => {
                            for j in 1..=copies {
                                s.add_scaled(&pair(g(Kind::B, j, k1), g(Kind::C, j, i1)), c);
                            }
                        }
                        Side::Right => {
                            for idx in 1..=n {
                                s.add_scaled(&pair(g(Kind::B, k1, idx), g(Kind::C, i1, idx)), c);
                            }
                        }
                    }
                }
            }
        }
        currents.push(s);
    }
    Ok(CurrentFamily {
        name: "theta".into(),
        algebra: a.clone(),
        carrier: *sys,
        currents,
        form: FormKind::Trace,
        level: None,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineFailure {
    pub left: String,
    pub right: String,
    pub n: i32,
    pub product: State,
    pub expected: State,
}

#[derive(Clone, Debug)]
pub struct AffineReport {
    pub level: Option<Q>,
    pub closure_ok: bool,
    pub failures: Vec<AffineFailure>,
}

/// Checks the affine OPE on all basis pairs and measures the level against the
/// family's declared form.
pub fn verify_affine(f: &mut CurrentFamily) -> AffineReport {
    let a = &f.algebra;
    let d = a.dim();
    let labels = f.labels();
    let mut failures = Vec::new();
    let mut level: Option<Q> = None;
    let mut level_ok = true;
    for i in 0..d {
        for j in 0..d {
            let (xi, eta) = (a.unit_vector(i), a.unit_vector(j));
            let p0 = nth_product(&f.currents[i], &f.currents[j], 0);
            let expected0 = f.current_of(&a.bracket(&xi, &eta));
            if p0 != expected0 {
                failures.push(AffineFailure {
                    left: labels[i].clone(),
                    right: labels[j].clone(),
                    n: 0,
                    product: p0,
                    expected: expected0,
                });
            }
            let p1 = nth_product(&f.currents[i], &f.currents[j], 1);
            let b = f.form_value(&xi, &eta);
            let scalar = p1.vacuum_coeff();
            let scalar_only = p1.filter(|m| !m.is_empty()).is_zero();
            let consistent = scalar_only
                && if b.is_zero() {
                    scalar.is_zero()
                } else {
                    let lam = &scalar / &b;
                    match &level {
                        None => {
                            level = Some(lam);
                            true
                        }
                        Some(l) => *l == lam,
                    }
                };
            if !consistent {
                level_ok = false;
                let expected = match &level {
                    Some(l) => State::scalar(l * &b),
                    None => State::zero(),
                };
                failures.push(AffineFailure {
                    left: labels[i].clone(),
                    right: labels[j].clone(),
                    n: 1,
                    product: p1,
                    expected,
                });
            }
            for n in 2..=3 {
                let p = nth_product(&f.currents[i], &f.currents[j], n);
                if !p.is_zero() {
                    failures.push(AffineFailure {
                        left: labels[i].clone(),
                        right: labels[j].clone(),
                        n,
                        product: p,
                        expected: State::zero(),
                    });
                }
            }
        }
    }
    if level.is_none() && level_ok {
        level = Some(Q::zero());
    }
    f.level = if level_ok { level.clone() } else { None };
    AffineReport { level: f.level.clone(), closure_ok: failures.is_empty(), failures }
}

fn inverse(m: &[Vec<Q>]) -> Option<Vec<Vec<Q>>> {
    let n = m.len();
    let cols: Vec<SparseVec> =
        (0..n).map(|j| (0..n).filter(|&i| !m[i][j].is_zero()).map(|i| (i, m[i][j].clone())).collect()).collect();
    let mut out = vec![vec![Q::zero(); n]; n];
    for k in 0..n {
        let x = linalg::solve(&cols, &vec![(k, Q::one())])?;
        for (j, v) in x.into_iter().enumerate() {
            out[j][k] = v;
        }
    }
    Some(out)
}

/// L = 1/(2(k+h∨)) Σ G^{ξη} :θ^ξ θ^η: with G the Gram matrix of the normalized form.
pub fn sugawara(f: &CurrentFamily, k: &Q) -> Result<State> {
    let a = &f.algebra;
    let h = a
        .dual_coxeter()
        .ok_or_else(|| Error::Precondition(format!("Sugawara needs a simple algebra, got {}", a.kind)))?;
    let denom = k + &h;
    if denom.is_zero() {
        return Err(Error::Precondition(format!(
            "critical level: the Sugawara construction requires k != -h∨ (k = {k})"
        )));
    }
    let gram = a.gram(true);
    let ginv = inverse(&gram).ok_or_else(|| Error::Internal("degenerate normalized form".into()))?;
    let mut l = State::zero();
    for i in 0..a.dim() {
        for j in 0..a.dim() {
            if ginv[i][j].is_zero() {
                continue;
            }
            let w = wick(&[f.currents[i].clone(), f.currents[j].clone()])?;
            l.add_scaled(&w, &ginv[i][j]);
        }
    }
    Ok(l.scaled(&(Q::one() / (q(2) * denom))))
}

/// Central charge k·dim(g)/(k+h∨).
pub fn sugawara_central_charge(a: &LieAlgebraSpec, k: &Q) -> Option<Q> {
    let h = a.dual_coxeter()?;
    let den = k + &h;
    (!den.is_zero()).then(|| k * q(a.dim() as i64) / den)
}

#[derive(Clone, Debug)]
pub struct ConformalData {
    pub l_s: Option<State>,
    pub l_e: Option<State>,
    pub e: Option<State>,
}

/// L_S = Σ:β∂γ:, L_E = -Σ:b∂c:, e = Σ:βγ:.
pub fn conformal_and_charge(sys: &SystemSpec) -> Result<ConformalData> {
    let mut out = ConformalData { l_s: None, l_e: None, e: None };
    if let Some((n, m)) = sys.bosonic {
        let mut l = State::zero();
        let mut e = State::zero();
        for j in 1..=m {
            for i in 1..=n {
                let be = State::generator(g(Kind::Beta, j, i));
                let ga = State::generator(g(Kind::Gamma, j, i));
                l.add_scaled(&wick(&[be.clone(), crate::fock::derivative(&ga)])?, &Q::one());
                e.add_scaled(&wick(&[be, ga])?, &Q::one());
            }
        }
        out.l_s = Some(l);
        out.e = Some(e);
    }
    if let Some((n, r)) = sys.fermionic {
        let mut l = State::zero();
        for j in 1..=r {
            for i in 1..=n {
                let b = State::generator(g(Kind::B, j, i));
                let c = State::generator(g(Kind::C, j, i));
                l.add_scaled(&wick(&[b, crate::fock::derivative(&c)])?, &-Q::one());
            }
        }
        out.l_e = Some(l);
    }
    Ok(out)
}

/// The charge element as a one-dimensional abelian current family.
pub fn charge_family(sys: &SystemSpec) -> Result<CurrentFamily> {
    let e =
        conformal_and_charge(sys)?.e.ok_or_else(|| Error::Parameter("charge element needs a bosonic part".into()))?;
    Ok(CurrentFamily {
        name: "charge_e".into(),
        algebra: liealg::make_algebra(LieKind::Gl, (1, 0))?,
        carrier: *sys,
        currents: vec![e],
        form: FormKind::Trace,
        level: None,
    })
}

/// Determinant of a square matrix of fields, expanded over permutations with
/// Wick products along rows.
pub fn det_states(matrix: &[Vec<State>]) -> Result<State> {
    let n = matrix.len();
    if matrix.iter().any(|r| r.len() != n) {
        return Err(Error::Dimension("determinant of a non-square matrix".into()));
    }
    let mut perm: Vec<usize> = (0..n).collect();
    let mut out = State::zero();
    permute(&mut perm, 0, &mut |p| {
        let inversions = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
        let factors: Vec<State> = (0..n).map(|r| matrix[r][p[r]].clone()).collect();
        let w = if factors.is_empty() { Ok(State::vacuum()) } else { wick(&factors) };
        if let Ok(w) = w {
            out.add_scaled(&w, &if inversions % 2 == 0 { Q::one() } else { -Q::one() });
        }
    });
    Ok(out)
}

fn permute(p: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, f);
        p.swap(k, i);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DetSide {
    Beta,
    Gamma,
}

/// det[φ^{x_{row, col}}] over the given row indices (coordinates) and column
/// indices (copies), φ = β or γ.
pub fn minor_family(sys: &SystemSpec, rows: &[usize], cols: &[usize], side: DetSide) -> Result<State> {
    let (n, m) = sys.bosonic.ok_or_else(|| Error::Parameter("determinants need a bosonic part".into()))?;
    if rows.len() != cols.len() {
        return Err(Error::Dimension(format!("{} rows but {} columns", rows.len(), cols.len())));
    }
    let distinct = |v: &[usize]| {
        let mut s = v.to_vec();
        s.sort();
        s.windows(2).all(|w| w[0] != w[1])
    };
    if !distinct(rows) || !distinct(cols) {
        return Err(Error::Parameter("repeated index in determinant".into()));
    }
    if rows.iter().any(|&r| r == 0 || r > n) || cols.iter().any(|&c| c == 0 || c > m) {
        return Err(Error::Parameter("determinant index out of range".into()));
    }
    let kind = match side {
        DetSide::Beta => Kind::Beta,
        DetSide::Gamma => Kind::Gamma,
    };
    let matrix: Vec<Vec<State>> =
        rows.iter().map(|&r| cols.iter().map(|&c| State::generator(g(kind, c, r))).collect()).collect();
    det_states(&matrix)
}

/// D_J (β) or D'_J (γ): full-height determinant on the columns J.
pub fn det_family(sys: &SystemSpec, cols: &[usize], side: DetSide) -> Result<State> {
    let n = sys.bosonic.map(|(n, _)| n).unwrap_or(0);
    if cols.len() != n {
        return Err(Error::Parameter(format!("need {n} column indices, got {}", cols.len())));
    }
    let rows: Vec<usize> = (1..=n).collect();
    minor_family(sys, &rows, cols, side)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum QuadGroup {
    /// SO_n acting on S((C^n)^m); family valued in sp_2m.
    So,
    /// Sp_2n acting on S((C^{2n})^m); family valued in so_2m.
    Sp,
}

/// Quadratic currents for the Howe partner of SO_n or Sp_2n.
pub fn quad_family(group: QuadGroup, sys: &SystemSpec) -> Result<CurrentFamily> {
    if sys.fermionic.is_some() {
        return Err(Error::Parameter("quadratic families live in a pure βγ system".into()));
    }
    let (dim, m) = sys.bosonic.ok_or_else(|| Error::Parameter("missing bosonic part".into()))?;
    let ga = |copy: usize, i: usize| g(Kind::Gamma, copy, i);
    let be = |copy: usize, i: usize| g(Kind::Beta, copy, i);
    let (algebra, name) = match group {
        QuadGroup::So => (liealg::build_algebra(LieKind::Sp, (m, 0))?, "quad_so"),
        QuadGroup::Sp => {
            if dim % 2 != 0 {
                return Err(Error::Dimension(format!("Sp needs an even-dimensional module, got {dim}")));
            }
            (liealg::make_algebra(LieKind::SoSplit, (m, 0))?, "quad_sp")
        }
    };
    let mut currents = Vec::new();
    for be_el in &algebra.basis {
        let label = &be_el.label;
        let (t, jk) = label.split_at(1);
        let digits: Vec<usize> = jk.chars().map(|c| c.to_digit(10).unwrap() as usize).collect();
        let (j, k) = (digits[0], digits[1]);
        let mut s = State::zero();
        match (group, t) {
            (QuadGroup::So, "B") => {
                for i in 1..=dim {
                    s.add_scaled(&pair(ga(j, i), ga(k, i)), &Q::one());
                }
            }
            (QuadGroup::So, "C") => {
                for i in 1..=dim {
                    s.add_scaled(&pair(be(j, i), be(k, i)), &Q::one());
                }
            }
            (QuadGroup::Sp, "S") | (QuadGroup::Sp, "D") => {
                let f = if t == "S" { ga } else { be };
                let h = dim / 2;
                for i in 1..=h {
                    s.add_scaled(&pair(f(j, i), f(k, i + h)), &Q::one());
                    s.add_scaled(&pair(f(j, i + h), f(k, i)), &-Q::one());
                }
            }
            (_, "A") => {
                for i in 1..=dim {
                    s.add_scaled(&pair(ga(j, i), be(k, i)), &Q::one());
                }
            }
            _ => return Err(Error::Internal(format!("unexpected basis label {label}"))),
        }
        currents.push(s);
    }
    Ok(CurrentFamily { name: name.into(), algebra, carrier: *sys, currents, form: FormKind::Normalized, level: None })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BcWhich {
    Psi,
    D,
    Dprime,
    E,
    Eprime,
    F,
    Fprime,
    PsiBetaGamma,
    PsiBetaC,
    PsiBGamma,
}

impl BcWhich {
    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "psi" => BcWhich::Psi,
            "D" => BcWhich::D,
            "Dprime" => BcWhich::Dprime,
            "E" => BcWhich::E,
            "Eprime" => BcWhich::Eprime,
            "F" => BcWhich::F,
            "Fprime" => BcWhich::Fprime,
            "psi_bg" => BcWhich::PsiBetaGamma,
            "psi_betac" => BcWhich::PsiBetaC,
            "psi_bgamma" => BcWhich::PsiBGamma,
            _ => return None,
        })
    }
}

/// Generator families of the sl_2 commutants in bc and bcβγ systems with
/// two-dimensional copies. Returns labeled states.
pub fn bc_family(sys: &SystemSpec, which: BcWhich) -> Result<Vec<(String, State)>> {
    let r = match sys.fermionic {
        Some((2, r)) => r,
        Some((n, _)) => return Err(Error::Dimension(format!("bc copies must be 2-dimensional, got {n}"))),
        None => 0,
    };
    let s_ = match sys.bosonic {
        Some((2, s)) => s,
        Some((n, _)) => return Err(Error::Dimension(format!("βγ copies must be 2-dimensional, got {n}"))),
        None => 0,
    };
    let need = |ok: bool, what: &str| {
        if ok {
            Ok(())
        } else {
            Err(Error::Parameter(format!("family {what} needs the corresponding slots")))
        }
    };
    let b = |k: usize, a: usize| g(Kind::B, k, a);
    let c = |k: usize, a: usize| g(Kind::C, k, a);
    let be = |k: usize, a: usize| g(Kind::Beta, k, a);
    let ga = |k: usize, a: usize| g(Kind::Gamma, k, a);
    let sum2 = |x: &dyn Fn(usize) -> GeneratorId, y: &dyn Fn(usize) -> GeneratorId, sign: i64| {
        pair(x(1), y(1)).plus(&pair(x(2), y(2)).scaled(&q(sign)))
    };
    let mut out = Vec::new();
    match which {
        BcWhich::Psi => {
            need(r > 0, "psi")?;
            for i in 1..=r {
                for j in 1..=r {
                    out.push((format!("psi_bc[{i},{j}]"), sum2(&|a| b(i, a), &|a| c(j, a), 1)));
                }
            }
        }
        BcWhich::D | BcWhich::Dprime => {
            need(r > 0, "D")?;
            let f = if which == BcWhich::D { b } else { c };
            for k in 1..=r {
                for l in k..=r {
                    let s = pair(f(k, 1), f(l, 2)).plus(&pair(f(l, 1), f(k, 2)));
                    let tag = if which == BcWhich::D { "D" } else { "Dprime" };
                    out.push((format!("{tag}[{k},{l}]"), s));
                }
            }
        }
        BcWhich::E | BcWhich::Eprime => {
            need(r > 0 && s_ > 0, "E")?;
            for i in 1..=s_ {
                for k in 1..=r {
                    let s = if which == BcWhich::E {
                        pair(be(i, 1), b(k, 2)).minus(&pair(be(i, 2), b(k, 1)))
                    } else {
                        pair(ga(i, 1), c(k, 2)).minus(&pair(ga(i, 2), c(k, 1)))
                    };
                    let tag = if which == BcWhich::E { "E" } else { "Eprime" };
                    out.push((format!("{tag}[{i},{k}]"), s));
                }
            }
        }
        BcWhich::F | BcWhich::Fprime => {
            need(s_ > 0, "F")?;
            let f = if which == BcWhich::F { be } else { ga };
            for i in 1..=s_ {
                for j in i + 1..=s_ {
                    let s = pair(f(i, 1), f(j, 2)).minus(&pair(f(j, 1), f(i, 2)));
                    let tag = if which == BcWhich::F { "F" } else { "Fprime" };
                    out.push((format!("{tag}[{i},{j}]"), s));
                }
            }
        }
        BcWhich::PsiBetaGamma => {
            need(s_ > 0, "psi_bg")?;
            for i in 1..=s_ {
                for j in 1..=s_ {
                    out.push((format!("psi_bg[{i},{j}]"), sum2(&|a| be(i, a), &|a| ga(j, a), 1)));
                }
            }
        }
        BcWhich::PsiBetaC => {
            need(r > 0 && s_ > 0, "psi_betac")?;
            for i in 1..=s_ {
                for k in 1..=r {
                    out.push((format!("psi_betac[{i},{k}]"), sum2(&|a| be(i, a), &|a| c(k, a), 1)));
                }
            }
        }
        BcWhich::PsiBGamma => {
            need(r > 0 && s_ > 0, "psi_bgamma")?;
            for k in 1..=r {
                for i in 1..=s_ {
                    out.push((format!("psi_bgamma[{k},{i}]"), sum2(&|a| b(k, a), &|a| ga(i, a), 1)));
                }
            }
        }
    }
    Ok(out)
}

/// The ψ block of a bcβγ system as gl(r|s) currents: indices 1..r are bc
/// copies, r+1..r+s are βγ copies, and e_PQ ↦ ε_Q Σ_a :Φ_{P,a} Ψ_{Q,a}: with
/// Φ ∈ {b, β}, Ψ ∈ {c, γ} and ε_Q = -1 on βγ copies.
pub fn mixed_glrs(sys: &SystemSpec) -> Result<CurrentFamily> {
    let r = sys.fermionic.map(|(_, r)| r).unwrap_or(0);
    let s_ = sys.bosonic.map(|(_, s)| s).unwrap_or(0);
    let n = sys.fermionic.or(sys.bosonic).map(|(n, _)| n).unwrap_or(0);
    if let (Some((a, _)), Some((b, _))) = (sys.fermionic, sys.bosonic) {
        if a != b {
            return Err(Error::Dimension("bc and βγ copies must have equal dimension".into()));
        }
    }
    let algebra = liealg::make_algebra(LieKind::GlSuper, (r, s_))?;
    let phi = |p: usize, a: usize| if p <= r { g(Kind::B, p, a) } else { g(Kind::Beta, p - r, a) };
    let psi = |p: usize, a: usize| if p <= r { g(Kind::C, p, a) } else { g(Kind::Gamma, p - r, a) };
    let mut currents = Vec::new();
    for p in 1..=r + s_ {
        for qq in 1..=r + s_ {
            let eps = if qq <= r { Q::one() } else { -Q::one() };
            let mut st = State::zero();
            for a in 1..=n {
                st.add_scaled(&pair(phi(p, a), psi(qq, a)), &eps);
            }
            currents.push(st);
        }
    }
    Ok(CurrentFamily {
        name: "mixed_glrs".into(),
        algebra,
        carrier: *sys,
        currents,
        form: FormKind::Trace,
        level: None,
    })
}

/// The ψ_bc family of E((C²)^m) as right gl_m currents.
pub fn bc_psi_family(sys: &SystemSpec) -> Result<CurrentFamily> {
    let (_, r) = sys.fermionic.ok_or_else(|| Error::Parameter("bc_psi needs a bc part".into()))?;
    let algebra = liealg::make_algebra(LieKind::Gl, (r, 0))?;
    let fermi_only = SystemSpec::new(None, sys.fermionic)?;
    let mut f = theta(&algebra, &fermi_only, Side::Right)?;
    f.name = "bc_psi".into();
    f.carrier = *sys;
    Ok(f)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommutantCheck {
    pub ok: bool,
    /// (basis label, n, nonzero product) at the first failure.
    pub witness: Option<(String, i32, State)>,
}

/// v ∈ Com(F) at the generator level: θ^ξ∘ₙ v = 0 for all ξ and 0 ≤ n ≤ wt(v).
pub fn commutant_check(v: &State, f: &CurrentFamily) -> CommutantCheck {
    let labels = f.labels();
    for (i, t) in f.currents.iter().enumerate() {
        let c = commutes(t, v);
        if let Some((n, p)) = c.witness {
            return CommutantCheck { ok: false, witness: Some((labels[i].clone(), n, p)) };
        }
    }
    CommutantCheck { ok: true, witness: None }
}

/// Eigenvalue of θ^H∘₀ on each generator, when it acts diagonally.
fn diagonal_charges(f: &CurrentFamily) -> Vec<HashMap<GeneratorId, Q>> {
    let gens = f.carrier.generators();
    f.currents
        .iter()
        .filter_map(|t| {
            let mut map = HashMap::new();
            for &gen in &gens {
                let s = State::generator(gen);
                let img = nth_product(t, &s, 0);
                let lam = img.coeff(s.terms().next().unwrap().0);
                if img != s.scaled(&lam) {
                    return None;
                }
                map.insert(gen, lam);
            }
            Some(map)
        })
        .collect()
}

/// States of the given weight and at most `max_len` modes annihilated by all
/// θ^ξ∘ₙ, n ≥ 0. Returns a basis.
pub fn commutant_space(f: &CurrentFamily, weight: i64, max_len: usize, cap: usize) -> Result<Vec<State>> {
    let charges = diagonal_charges(f);
    let monos: Vec<Monomial> = enumerate_monomials(&f.carrier, weight, max_len)
        .into_iter()
        .filter(|m| {
            charges.iter().all(|ch| {
                let s: Q = m.modes().iter().map(|md| ch[&md.gen].clone()).sum();
                s.is_zero()
            })
        })
        .collect();
    if monos.len() > cap {
        return Err(Error::Resource { cap: "component_cap", needed: monos.len(), limit: cap });
    }
    let mut row_index: HashMap<(usize, i64, Monomial), usize> = HashMap::new();
    let mut rows: Vec<SparseVec> = Vec::new();
    for (col, m) in monos.iter().enumerate() {
        let v = State::from_monomial(m.clone(), Q::one());
        for (xi, t) in f.currents.iter().enumerate() {
            for n in 0..=weight {
                let img = nth_product(t, &v, n as i32);
                for (om, c) in img.terms() {
                    let idx = *row_index.entry((xi, n, om.clone())).or_insert_with(|| {
                        rows.push(Vec::new());
                        rows.len() - 1
                    });
                    rows[idx].push((col, c.clone()));
                }
            }
        }
    }
    Ok(linalg::nullspace(&rows, monos.len())
        .into_iter()
        .map(|v| {
            let mut s = State::zero();
            for (c, x) in v {
                s.add_term(monos[c].clone(), x);
            }
            s
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftSearch {
    pub unknowns: usize,
    pub equations: usize,
    pub rank: usize,
    pub rank_augmented: usize,
}

impl LiftSearch {
    pub fn feasible(&self) -> bool {
        self.rank == self.rank_augmented
    }
}

/// Searches for a correction v', a combination of monomials of the given
/// weight and length ≤ max_len, with θ^ξ∘ₙ(v + v') = 0 for all ξ and
/// 0 ≤ n ≤ top_mode.
pub fn lift_search(
    v: &State,
    f: &CurrentFamily,
    weight: i64,
    max_len: usize,
    top_mode: i32,
    cap: usize,
) -> Result<LiftSearch> {
    let monos = enumerate_monomials(&f.carrier, weight, max_len);
    if monos.len() > cap {
        return Err(Error::Resource { cap: "component_cap", needed: monos.len(), limit: cap });
    }
    let mut index: BTreeMap<(usize, i32, Monomial), usize> = BTreeMap::new();
    let mut cols: Vec<SparseVec> = Vec::new();
    let image = |s: &State, index: &mut BTreeMap<(usize, i32, Monomial), usize>| -> SparseVec {
        let mut col = Vec::new();
        for (xi, t) in f.currents.iter().enumerate() {
            for n in 0..=top_mode {
                for (om, c) in nth_product(t, s, n).terms() {
                    let l = index.len();
                    col.push((*index.entry((xi, n, om.clone())).or_insert(l), c.clone()));
                }
            }
        }
        col
    };
    for m in &monos {
        let c = image(&State::from_monomial(m.clone(), Q::one()), &mut index);
        cols.push(c);
    }
    let rhs: SparseVec = image(v, &mut index).into_iter().map(|(k, c)| (k, -c)).collect();
    let (rank, rank_augmented) = linalg::augmented_ranks(&cols, &rhs);
    Ok(LiftSearch { unknowns: monos.len(), equations: index.len(), rank, rank_augmented })
}

/// Rank of a list of states as vectors.
pub fn state_rank(states: &[State]) -> usize {
    let mut index: BTreeMap<Monomial, usize> = BTreeMap::new();
    let mut e = Echelon::new();
    for s in states {
        let row: SparseVec = s
            .terms()
            .map(|(m, c)| {
                let l = index.len();
                (*index.entry(m.clone()).or_insert(l), c.clone())
            })
            .collect();
        e.add_row(&row);
    }
    e.rank()
}
