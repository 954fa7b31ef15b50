//! One function per task kind. Each returns an `Outcome`; engine errors
//! become per-task errors in the runner.

use rayon::prelude::*;
use serde_json::{json, Value};

use freefield::constructions::{
    bc_family, bc_psi_family, charge_family, commutant_check, commutant_space, conformal_and_charge, det_family,
    det_states, lift_search, mixed_glrs, quad_family, sugawara, sugawara_central_charge, theta, verify_affine, BcWhich,
    CurrentFamily, DetSide, FormKind, QuadGroup, Side,
};
use freefield::diffalg::{
    generated_span_exact, invariant_basis_exact, lie_jet_action, lift_descent, normal_order_with, quantum_correct,
    Block, BlockRep, DiffPoly, GenSymbol, JetAction, Name, Var,
};
use freefield::fock::{derivative, gradings, nth_product, symbol, wick, GeneratorId, Kind, State, SystemSpec};
use freefield::liealg::{make_algebra, LieKind};
use freefield::props::{run_property, Property};
use freefield::rational::{parse_q, q};
use freefield::sampling::Sampler;
use freefield::weyl::{classical_dets, test_monomials, zhu_products, zhu_zero_mode, DetKind};

use crate::error::{HarnessError, Result};
use crate::report::{rational, Outcome};
use crate::scenario::{Bounds, DetSideName, FamilyRef, FormName, GroupConfig, RepName, Scenario, StateRef, Task};

/// Highest mode index checked on sampled states in the equivariance check.
const EQUIVARIANCE_TOP_MODE: u32 = 2;
/// Shape of sampled states: (terms, max modes, max mode depth).
const EQUIVARIANCE_SHAPE: (usize, usize, i32) = (3, 3, 3);
const STAR_SHAPE: (usize, usize, i32) = (2, 2, 2);
/// Failures listed in a report before the rest are only counted.
const MAX_WITNESSES: usize = 5;

pub struct Ctx<'a> {
    pub scenario: &'a Scenario,
    pub sys: SystemSpec,
    pub bounds: Bounds,
}

fn config(msg: impl Into<String>) -> HarnessError {
    HarnessError::Config(msg.into())
}

impl Ctx<'_> {
    fn group(&self, explicit: Option<GroupConfig>) -> Result<GroupConfig> {
        explicit
            .or(self.scenario.group)
            .ok_or_else(|| config("task needs a group (scenario `group` or an explicit `algebra`)"))
    }

    fn bosonic(&self) -> Result<(usize, usize)> {
        self.sys.bosonic.ok_or_else(|| config("task needs a bosonic system"))
    }

    pub fn family(&self, r: &FamilyRef) -> Result<CurrentFamily> {
        Ok(match r {
            FamilyRef::Theta { algebra, side } => {
                let g = self.group(*algebra)?;
                let side: Side = side.unwrap_or(g.side).into();
                let alg = g.algebra()?;
                let mut f = theta(&alg, &self.sys, side)?;
                f.name =
                    format!("theta[{}{}{}]", alg.kind, alg.std_dim(), if side == Side::Right { ",right" } else { "" });
                f
            }
            FamilyRef::ChargeE => charge_family(&self.sys)?,
            FamilyRef::QuadSo => quad_family(QuadGroup::So, &self.sys)?,
            FamilyRef::QuadSp => quad_family(QuadGroup::Sp, &self.sys)?,
            FamilyRef::BcPsi => bc_psi_family(&self.sys)?,
            FamilyRef::MixedGlrs => mixed_glrs(&self.sys)?,
        })
    }

    pub fn states(&self, r: &StateRef) -> Result<Vec<(String, State)>> {
        Ok(match r {
            StateRef::Text { text, label } => {
                let s: State = text.parse()?;
                if !self.sys.supports(&s) {
                    return Err(config(format!("state `{text}` uses generators outside the system")));
                }
                vec![(label.clone().unwrap_or_else(|| text.clone()), s)]
            }
            StateRef::Det { cols, side } => {
                let (side, tag) = match side {
                    DetSideName::Beta => (DetSide::Beta, "D"),
                    DetSideName::Gamma => (DetSide::Gamma, "Dprime"),
                };
                vec![(format!("{tag}{cols:?}"), det_family(&self.sys, cols, side)?)]
            }
            StateRef::Currents { family } => {
                let f = self.family(family)?;
                f.labels().into_iter().map(|l| format!("{}:{l}", f.name)).zip(f.currents).collect()
            }
            StateRef::Bc { which } => {
                let w = BcWhich::parse(which).ok_or_else(|| config(format!("unknown bc family `{which}`")))?;
                bc_family(&self.sys, w)?
            }
            StateRef::ChargeE => {
                let e = conformal_and_charge(&self.sys)?.e.ok_or_else(|| config("charge needs a bosonic part"))?;
                vec![("e".into(), e)]
            }
            StateRef::Sugawara { family, level } => {
                let f = self.family(family)?;
                vec![(format!("L[{}]", f.name), sugawara(&f, &parse_q(level)?)?)]
            }
        })
    }
}

pub fn run(ctx: &Ctx, task: &Task) -> Result<Outcome> {
    match task {
        Task::VerifyAffine { family, form, expect_level, .. } => affine(ctx, family, *form, expect_level.as_deref()),
        Task::CommutantCheck { against, states, .. } => commutant(ctx, against, states),
        Task::CommutantSpace { against, .. } => commutant_dims(ctx, against),
        Task::CounterexampleSec4 { cols, cols_prime, .. } => {
            charge_identity(ctx, cols.as_deref(), cols_prime.as_deref())
        }
        Task::CounterexampleSo4 { weight, max_len, top_mode, .. } => so4(ctx, *weight, *max_len, *top_mode),
        Task::JetCompare { algebra, blocks, equivariance, .. } => jet_compare(ctx, *algebra, blocks, *equivariance),
        Task::ZhuCheck { cols, test_degree, .. } => zhu(ctx, cols.as_deref(), *test_degree),
        Task::QuantumCorrect { .. } => quantum(ctx),
        Task::SugawaraCheck { family, level, .. } => sugawara_check(ctx, family, level),
        Task::PropertySuite { properties, .. } => properties_task(ctx, properties),
        Task::HoweCommutation { left, right, .. } => howe(ctx, left, right),
    }
}

fn affine(ctx: &Ctx, family: &FamilyRef, form: Option<FormName>, expect: Option<&str>) -> Result<Outcome> {
    let mut f = ctx.family(family)?;
    if let Some(form) = form {
        f.form = match form {
            FormName::Trace => FormKind::Trace,
            FormName::Normalized => FormKind::Normalized,
        };
    }
    let expect = expect.map(parse_q).transpose()?;
    let r = verify_affine(&mut f);
    let mut o = Outcome::default();
    let form_name = match f.form {
        FormKind::Trace => "trace",
        FormKind::Normalized => "normalized",
    };
    o.measure("family", f.name.clone());
    o.measure("algebra", format!("{}{:?}", f.algebra.kind, f.algebra.rank));
    o.measure("closure", r.closure_ok);
    o.measure("form", form_name);
    o.measure("failures", r.failures.len());
    if let Some(l) = &r.level {
        o.measure("level", rational(l));
        let c = f.algebra.normalization();
        let (lt, ln) = match f.form {
            FormKind::Trace => (l.clone(), l / &c),
            FormKind::Normalized => (l * &c, l.clone()),
        };
        o.measure("level_trace_form", rational(&lt));
        o.measure("level_normalized_form", rational(&ln));
    }
    for fl in r.failures.iter().take(MAX_WITNESSES) {
        o.witness(json!({
            "left": fl.left, "right": fl.right, "n": fl.n,
            "product": fl.product.to_string(), "expected": fl.expected.to_string(),
        }));
    }
    let level_ok = match (&expect, &r.level) {
        (None, _) => true,
        (Some(e), Some(l)) => e == l,
        (Some(_), None) => false,
    };
    o.ok = r.closure_ok && level_ok;
    o.summary = match (&r.level, r.closure_ok) {
        (Some(l), true) => format!("{} closes at level {l} ({form_name} form)", f.name),
        _ => format!("{} fails affine closure at {} basis pairs", f.name, r.failures.len()),
    };
    if let (Some(e), false) = (&expect, level_ok) {
        o.summary.push_str(&format!("; expected level {e}"));
    }
    Ok(o)
}

fn commutant(ctx: &Ctx, against: &FamilyRef, refs: &[StateRef]) -> Result<Outcome> {
    let f = ctx.family(against)?;
    let mut states = Vec::new();
    for r in refs {
        states.extend(ctx.states(r)?);
    }
    let mut o = Outcome::default();
    let mut failed = Vec::new();
    for (label, s) in &states {
        let c = commutant_check(s, &f);
        if let Some((xi, n, p)) = c.witness {
            if failed.len() < MAX_WITNESSES {
                o.witness(json!({"state": label, "xi": xi, "n": n, "product": p.to_string()}));
            }
            failed.push(label.clone());
        }
    }
    o.measure("against", f.name.clone());
    o.measure("checked", states.len());
    o.measure("failed", failed.clone());
    o.ok = failed.is_empty();
    o.summary = if o.ok {
        format!("{} states commute with {}", states.len(), f.name)
    } else {
        format!("{} of {} states fail to commute with {}", failed.len(), states.len(), f.name)
    };
    Ok(o)
}

fn commutant_dims(ctx: &Ctx, against: &FamilyRef) -> Result<Outcome> {
    let f = ctx.family(against)?;
    let b = ctx.bounds;
    let dims = (0..=b.max_weight as i64)
        .map(|w| commutant_space(&f, w, b.max_degree as usize, b.component_cap).map(|v| v.len()))
        .collect::<freefield::Result<Vec<usize>>>()?;
    let mut o = Outcome {
        ok: dims.first() == Some(&1) && dims[1..].iter().all(|&d| d == 0),
        summary: format!(
            "commutant of {} by weight 0..={} (at most {} modes): {dims:?}",
            f.name, b.max_weight, b.max_degree
        ),
        ..Default::default()
    };
    o.measure("against", f.name.clone());
    o.measure("dims", dims);
    Ok(o)
}

fn charge_identity(ctx: &Ctx, cols: Option<&[usize]>, cols_prime: Option<&[usize]>) -> Result<Outcome> {
    let (n, _) = ctx.bosonic()?;
    let default: Vec<usize> = (1..=n).collect();
    let cols = cols.unwrap_or(&default);
    let cols_prime = cols_prime.unwrap_or(&default);
    let e = conformal_and_charge(&ctx.sys)?.e.ok_or_else(|| config("needs a bosonic part"))?;
    let d = det_family(&ctx.sys, cols, DetSide::Beta)?;
    let dp = det_family(&ctx.sys, cols_prime, DetSide::Gamma)?;
    let lhs = nth_product(&e, &wick(&[d.clone(), derivative(&dp)])?, 1);
    let ddp = wick(&[d.clone(), dp.clone()])?;
    let d0 = nth_product(&d, &dp, 0);
    let nq = q(n as i64);
    let literal = ddp.minus(&d0.scaled(&nq));
    let corrected = ddp.scaled(&nq).minus(&derivative(&d0).scaled(&nq));
    let literal_ok = lhs == literal;
    let corrected_ok = lhs == corrected;
    let degrees_ok = ddp.degree() == 2 * n && d0.degree() + 2 <= 2 * n;
    let weight = |s: &State| gradings(s).weight.map(Value::from).unwrap_or(Value::Null);

    let mut o = Outcome::default();
    o.measure("n", n);
    o.measure("literal_identity", literal_ok);
    o.measure("corrected_identity", corrected_ok);
    o.measure("degree_claims", degrees_ok);
    o.measure("degree_wick", ddp.degree());
    o.measure("degree_circle0", d0.degree());
    o.measure("weight_lhs", weight(&lhs));
    o.measure("weight_wick", weight(&ddp));
    o.measure("weight_circle0", weight(&d0));
    if !literal_ok {
        o.witness(json!({"identity": "literal", "lhs_minus_rhs": lhs.minus(&literal).to_string()}));
    }
    o.ok = literal_ok && degrees_ok;
    o.summary = if literal_ok {
        format!("identity holds for n = {n}; degree claims {}", if degrees_ok { "hold" } else { "fail" })
    } else {
        format!(
            "literal identity fails for n = {n} (lhs weight {}, D o0 D' weight {}); \
             corrected form e o1 (:D dD':) = n :DD': - n d(D o0 D') {}; degree claims {}",
            weight(&lhs),
            weight(&d0),
            if corrected_ok { "holds" } else { "fails" },
            if degrees_ok { "hold" } else { "fail" }
        )
    };
    Ok(o)
}

/// The 4×4 determinant with columns γ^{copy 1}, β^{copy 1}, γ^{copy 2}, β^{copy 2}.
fn mixed_det(n: usize) -> Result<State> {
    let col = |kind: Kind, c: usize| -> Vec<State> {
        (1..=n).map(|i| State::generator(GeneratorId::new(kind, c, i))).collect()
    };
    let cols = [col(Kind::Gamma, 1), col(Kind::Beta, 1), col(Kind::Gamma, 2), col(Kind::Beta, 2)];
    let mat: Vec<Vec<State>> = (0..n).map(|r| (0..4).map(|c| cols[c][r].clone()).collect()).collect();
    Ok(det_states(&mat)?)
}

fn so4(ctx: &Ctx, weight: i64, max_len: usize, top_mode: i32) -> Result<Outcome> {
    let (n, m) = ctx.bosonic()?;
    if n != 4 || m < 2 || ctx.sys.fermionic.is_some() {
        return Err(config("the SO_4 counterexample needs the pure system S((C^4)^m), m >= 2"));
    }
    let so4 = make_algebra(LieKind::So, (4, 0))?;
    let f = theta(&so4, &ctx.sys, Side::Left)?;
    let d = mixed_det(n)?;
    let invariant = commutant_check(&d, &f).ok;
    let r = lift_search(&d, &f, weight, max_len, top_mode, ctx.bounds.component_cap)?;

    // classical side: the symbol of D is not a polynomial in the quadratic invariants
    let quad = quad_family(QuadGroup::So, &ctx.sys)?;
    let gens: Vec<GenSymbol> = quad
        .labels()
        .iter()
        .zip(&quad.currents)
        .map(|(l, s)| GenSymbol::new(Var::new(Name::free(l), 1, 0), s.clone()))
        .collect();
    let descent = lift_descent(&d, &gens)?;

    let mut o = Outcome::default();
    o.measure("degree_d", d.degree());
    o.measure("d_in_commutant", invariant);
    o.measure("unknowns", r.unknowns);
    o.measure("equations", r.equations);
    o.measure("rank", r.rank);
    o.measure("rank_augmented", r.rank_augmented);
    o.measure("feasible", r.feasible());
    if let Some((deg, _, (a, ab))) = &descent.stuck {
        o.measure("quadratic_descent_stuck_at", *deg);
        o.measure("quadratic_descent_ranks", vec![*a, *ab]);
    }
    o.ok = !r.feasible() && !invariant;
    o.summary = format!(
        "no correction of weight {weight} with at most {max_len} modes: rank {} vs augmented rank {} \
         over {} unknowns and {} equations ({})",
        r.rank,
        r.rank_augmented,
        r.unknowns,
        r.equations,
        if r.feasible() { "feasible" } else { "infeasible" }
    );
    Ok(o)
}

fn jet_compare(
    ctx: &Ctx,
    algebra: Option<GroupConfig>,
    blocks: &[crate::scenario::BlockConfig],
    equivariance: bool,
) -> Result<Outcome> {
    let g = ctx.group(algebra)?;
    let alg = g.algebra()?;
    let blocks: Vec<Block> = blocks
        .iter()
        .map(|b| Block {
            name: if b.odd { Name::free_odd(&b.name) } else { Name::free(&b.name) },
            rep: match b.rep {
                RepName::Std => BlockRep::Std,
                RepName::Dual => BlockRep::Dual,
            },
        })
        .collect();
    let act = JetAction::new(alg.clone(), blocks)?;
    let b = ctx.bounds;
    let cap = b.component_cap;
    let degrees: Vec<usize> = (1..=b.max_degree as usize).collect();
    let gens: Vec<DiffPoly> = degrees
        .par_iter()
        .map(|&e| invariant_basis_exact(&act, 0, e, cap))
        .collect::<freefield::Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    let cells: Vec<(u32, usize)> = (0..=b.max_weight).flat_map(|w| degrees.iter().map(move |&e| (w, e))).collect();
    let dims = cells
        .par_iter()
        .map(|&(w, e)| {
            let inv = invariant_basis_exact(&act, w, e, cap)?.len();
            let gen = generated_span_exact(&gens, w, e, cap)?.len();
            Ok((w, e, inv, gen))
        })
        .collect::<freefield::Result<Vec<_>>>()?;
    let mismatches: Vec<&(u32, usize, usize, usize)> = dims.iter().filter(|c| c.2 != c.3).collect();

    let mut o = Outcome::default();
    o.measure("algebra", format!("{}{}", alg.kind, alg.std_dim()));
    o.measure("weight0_generators", gens.len());
    o.measure(
        "dims",
        dims.iter()
            .map(|(w, e, i, g)| json!({"weight": w, "degree": e, "invariant": i, "generated": g}))
            .collect::<Vec<_>>(),
    );
    for (w, e, i, gd) in mismatches.iter().take(MAX_WITNESSES) {
        o.witness(json!({"weight": w, "degree": e, "invariant": i, "generated": gd}));
    }
    o.ok = mismatches.is_empty();
    o.summary = format!(
        "{} bidegrees up to weight {} and degree {}: {} mismatches",
        dims.len(),
        b.max_weight,
        b.max_degree,
        mismatches.len()
    );
    if equivariance {
        let (samples, failures) = equivariance_check(ctx, &alg, &mut o)?;
        o.measure("equivariance_samples", samples);
        o.measure("equivariance_failures", failures);
        o.ok &= failures == 0;
        o.summary.push_str(&format!("; symbol map equivariant on {samples} samples with {failures} failures"));
    }
    Ok(o)
}

/// σ(θ^ξ∘_r a) = ξt^r·σ(a) on seeded samples of the βγ part.
fn equivariance_check(ctx: &Ctx, alg: &freefield::liealg::LieAlgebraSpec, o: &mut Outcome) -> Result<(usize, usize)> {
    let (n, m) = ctx.bosonic()?;
    let sys = SystemSpec::new(Some((n, m)), None)?;
    let f = theta(alg, &sys, Side::Left)?;
    let mut blocks = Vec::new();
    for j in 1..=m as u16 {
        blocks.push(Block { name: Name::Sym { kind: Kind::Beta, copy: j }, rep: BlockRep::Std });
        blocks.push(Block { name: Name::Sym { kind: Kind::Gamma, copy: j }, rep: BlockRep::Dual });
    }
    let act = JetAction::new(alg.clone(), blocks)?;
    let mut s = Sampler::new(sys, ctx.bounds.seed);
    let (terms, len, depth) = EQUIVARIANCE_SHAPE;
    let mut failures = 0;
    for _ in 0..ctx.bounds.samples {
        let st = s.state(terms, len, depth);
        let d = st.degree();
        let sym = symbol(&st, d)?;
        let mut bad = None;
        'basis: for i in 0..alg.dim() {
            for r in 0..=EQUIVARIANCE_TOP_MODE {
                let lhs = symbol(&nth_product(&f.currents[i], &st, r as i32), d)?;
                if lhs != lie_jet_action(&act, &alg.unit_vector(i), r, &sym) {
                    bad = Some((alg.basis[i].label.clone(), r));
                    break 'basis;
                }
            }
        }
        if let Some((xi, r)) = bad {
            if failures < MAX_WITNESSES {
                o.witness(json!({"state": st.to_string(), "xi": xi, "r": r}));
            }
            failures += 1;
        }
    }
    Ok((ctx.bounds.samples, failures))
}

fn zhu(ctx: &Ctx, cols: Option<&[usize]>, test_degree: u32) -> Result<Outcome> {
    let (n, m) = ctx.bosonic()?;
    let default: Vec<usize> = (1..=n).collect();
    let cols = cols.unwrap_or(&default);
    let dj = det_family(&ctx.sys, cols, DetSide::Beta)?;
    let dpj = det_family(&ctx.sys, cols, DetSide::Gamma)?;
    let wd = classical_dets(n, cols, DetKind::D)?;
    let wx = classical_dets(n, cols, DetKind::X)?;
    let tests = test_monomials(n, m, test_degree);
    let mut o = Outcome::default();
    let mut d_bad = 0;
    let mut dp_bad = 0;
    for t in &tests {
        if zhu_zero_mode(&dj, t)? != wd.apply(t)? {
            d_bad += 1;
        }
        if zhu_zero_mode(&dpj, t)? != wx.apply(t)? {
            dp_bad += 1;
        }
    }
    let mut s = Sampler::new(SystemSpec::new(Some((n, m)), None)?, ctx.bounds.seed);
    let (terms, len, depth) = STAR_SHAPE;
    let mut star_bad = 0;
    for _ in 0..ctx.bounds.samples {
        let a = s.homogeneous(terms, len, depth);
        let b = s.homogeneous(terms, len, depth);
        let (star, _) = zhu_products(&a, &b)?;
        for t in &tests {
            if zhu_zero_mode(&star, t)? != zhu_zero_mode(&a, &zhu_zero_mode(&b, t)?)? {
                if star_bad < MAX_WITNESSES {
                    o.witness(json!({"a": a.to_string(), "b": b.to_string(), "test": t.to_string()}));
                }
                star_bad += 1;
                break;
            }
        }
    }
    o.measure("test_polynomials", tests.len());
    o.measure("d_mismatches", d_bad);
    o.measure("dprime_mismatches", dp_bad);
    o.measure("star_samples", ctx.bounds.samples);
    o.measure("star_failures", star_bad);
    o.ok = d_bad == 0 && dp_bad == 0 && star_bad == 0;
    o.summary = format!(
        "zero modes of D{cols:?} and D'{cols:?} against the derivative and coordinate determinants on {} \
         polynomials of degree <= {test_degree}: {} mismatches; star product on {} samples: {star_bad} failures",
        tests.len(),
        d_bad + dp_bad,
        ctx.bounds.samples
    );
    Ok(o)
}

fn permutations(n: usize) -> Vec<(Vec<usize>, bool)> {
    fn rec(p: &mut Vec<usize>, k: usize, odd: bool, out: &mut Vec<(Vec<usize>, bool)>) {
        if k == p.len() {
            out.push((p.clone(), odd));
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            rec(p, k + 1, odd ^ (i != k), out);
            p.swap(k, i);
        }
    }
    let mut out = Vec::new();
    rec(&mut (0..n).collect(), 0, false, &mut out);
    out
}

fn quantum(ctx: &Ctx) -> Result<Outcome> {
    let (n, m) = ctx.bosonic()?;
    if n != m || ctx.sys.fermionic.is_some() {
        return Err(config("quantum_correct needs S((C^n)^n)"));
    }
    let gl = make_algebra(LieKind::Gl, (m, 0))?;
    let right = theta(&gl, &ctx.sys, Side::Right)?;
    let free = |s: &str| Var::new(Name::free(s), 1, 0);
    let mut gens = Vec::new();
    for a in 1..=m {
        for b in 1..=m {
            let idx = gl.index_of(&format!("e{a}{b}")).expect("gl basis label");
            gens.push(GenSymbol::new(free(&format!("q{a}{b}")), right.currents[idx].clone()));
        }
    }
    let cols: Vec<usize> = (1..=n).collect();
    gens.push(GenSymbol::new(free("d"), det_family(&ctx.sys, &cols, DetSide::Beta)?));
    gens.push(GenSymbol::new(free("dp"), det_family(&ctx.sys, &cols, DetSide::Gamma)?));
    let v = |s: String| DiffPoly::var(free(&s));
    let mut det_q = DiffPoly::zero();
    for (p, odd) in permutations(m) {
        let mut t = DiffPoly::constant(if odd { q(-1) } else { q(1) });
        for (a, b) in p.iter().enumerate() {
            t = t.mul(&v(format!("q{}{}", a + 1, b + 1)));
        }
        det_q = det_q.plus(&t);
    }
    let p = v("d".into()).mul(&v("dp".into())).minus(&det_q);
    let out = quantum_correct(&p, &gens)?;
    let mut total = State::zero();
    for t in &out.terms {
        total = total.plus(&normal_order_with(&t.poly, &gens)?);
    }
    let top_ok = out.terms.first().map(|t| t.poly == p) == Some(true);
    let mut o = Outcome::default();
    o.measure("relation", p.to_string());
    o.measure("completed", out.completed());
    o.measure("top_symbol_is_relation", top_ok);
    o.measure("reexpanded_zero", total.is_zero());
    o.measure(
        "terms",
        out.terms.iter().map(|t| json!({"degree": t.degree, "poly": t.poly.to_string()})).collect::<Vec<_>>(),
    );
    if let Some((deg, s, (a, ab))) = &out.stuck {
        o.witness(json!({"stuck_degree": deg, "symbol": s.to_string(), "ranks": [a, ab]}));
    }
    if !total.is_zero() {
        o.witness(json!({"residual": total.to_string()}));
    }
    o.ok = out.completed() && top_ok && total.is_zero();
    o.summary = format!(
        "{} terms, lowest correction degree {}, re-expansion {}",
        out.terms.len(),
        out.terms.last().map(|t| t.degree).unwrap_or(0),
        if total.is_zero() { "vanishes" } else { "does not vanish" }
    );
    Ok(o)
}

fn sugawara_check(ctx: &Ctx, family: &FamilyRef, level: &str) -> Result<Outcome> {
    let f = ctx.family(family)?;
    let k = parse_q(level)?;
    let l = sugawara(&f, &k)?;
    let c = sugawara_central_charge(&f.algebra, &k).ok_or_else(|| config("central charge undefined"))?;
    let checks: Vec<(&str, bool)> = vec![
        ("L o0 L = dL", nth_product(&l, &l, 0) == derivative(&l)),
        ("L o1 L = 2L", nth_product(&l, &l, 1) == l.scaled(&q(2))),
        ("L o2 L = 0", nth_product(&l, &l, 2).is_zero()),
        ("L o3 L = c/2", nth_product(&l, &l, 3) == State::scalar(&c / q(2))),
        (
            "currents primary of weight one",
            f.currents.iter().all(|j| {
                nth_product(&l, j, 0) == derivative(j)
                    && &nth_product(&l, j, 1) == j
                    && (2..=3).all(|n| nth_product(&l, j, n).is_zero())
            }),
        ),
    ];
    let mut o = Outcome::default();
    o.measure("level", rational(&k));
    o.measure("central_charge", rational(&c));
    for (name, ok) in &checks {
        o.measure(name, *ok);
        if !ok {
            o.witness(json!({ "failed": name }));
        }
    }
    o.ok = checks.iter().all(|c| c.1);
    o.summary = format!(
        "Sugawara vector of {} at k = {k}: c = {c}; {} of {} relations hold",
        f.name,
        checks.iter().filter(|c| c.1).count(),
        checks.len()
    );
    Ok(o)
}

fn properties_task(ctx: &Ctx, names: &[String]) -> Result<Outcome> {
    let props: Vec<Property> = if names.is_empty() {
        Property::ALL.to_vec()
    } else {
        names.iter().map(|s| s.parse()).collect::<freefield::Result<_>>()?
    };
    let outs: Vec<_> =
        props.par_iter().map(|&p| run_property(p, ctx.sys, ctx.bounds.seed, ctx.bounds.samples)).collect();
    let mut o = Outcome::default();
    for out in &outs {
        o.measure(
            out.property.name(),
            json!({"samples": out.samples, "failures": out.failures, "nontrivial": out.nontrivial}),
        );
        if let Some(w) = &out.witness {
            o.witness(json!({"property": out.property.name(), "witness": w}));
        }
    }
    let bad: Vec<&str> = outs.iter().filter(|p| !p.passed() || p.nontrivial == 0).map(|p| p.property.name()).collect();
    o.ok = bad.is_empty();
    o.summary = if o.ok {
        format!("{} properties on {} samples each: no failures", outs.len(), ctx.bounds.samples)
    } else {
        format!("failing or vacuous: {}", bad.join(", "))
    };
    Ok(o)
}

fn howe(ctx: &Ctx, left: &FamilyRef, right: &FamilyRef) -> Result<Outcome> {
    let l = ctx.family(left)?;
    let r = ctx.family(right)?;
    let mut o = Outcome::default();
    let mut bad = 0;
    for (label, s) in r.labels().iter().zip(&r.currents) {
        if let Some((xi, n, p)) = commutant_check(s, &l).witness {
            if bad < MAX_WITNESSES {
                o.witness(json!({"state": label, "xi": xi, "n": n, "product": p.to_string()}));
            }
            bad += 1;
        }
    }
    let pairs = l.currents.len() * r.currents.len();
    o.measure("pairs", pairs);
    o.measure("noncommuting", bad);
    o.ok = bad == 0;
    o.summary = format!("{} x {}: {pairs} current pairs, {bad} fail to commute", l.name, r.name);
    Ok(o)
}
