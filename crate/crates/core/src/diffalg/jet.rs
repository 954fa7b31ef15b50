//! Jet rings, the g[t]-action and bounded-bidegree invariant computations.

use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;
use smallvec::SmallVec;

use super::poly::{DiffPoly, Name, PMono, Var};
use crate::error::{Error, Result};
use crate::liealg::{Element, LieAlgebraSpec, Mat};
use crate::linalg::{self, Echelon, SparseVec};
use crate::rational::{factorial, Q};

/// Default limit on monomials in one bidegree component.
pub const DEFAULT_COMPONENT_CAP: usize = 250_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BlockRep {
    Std,
    Dual,
}

/// A family of variables name[1..=dim] carrying the standard or dual module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub name: Name,
    pub rep: BlockRep,
}

#[derive(Clone, Debug)]
pub struct JetAction {
    pub algebra: LieAlgebraSpec,
    pub blocks: Vec<Block>,
}

impl JetAction {
    pub fn new(algebra: LieAlgebraSpec, blocks: Vec<Block>) -> Result<Self> {
        if algebra.basis.iter().any(|b| b.odd) {
            return Err(Error::Parameter("jet action needs an even Lie algebra".into()));
        }
        Ok(JetAction { algebra, blocks })
    }

    pub fn dim(&self) -> usize {
        self.algebra.std_dim()
    }

    fn block_index(&self, name: &Name) -> Option<usize> {
        self.blocks.iter().position(|b| &b.name == name)
    }

    fn matrix(&self, xi: &Element, rep: BlockRep) -> Mat {
        match rep {
            BlockRep::Std => self.algebra.rep_of(xi),
            BlockRep::Dual => self.algebra.rep_of(xi).transpose().scale(&-Q::from_integer(1.into())),
        }
    }
}

fn lambda(i: u32, r: u32) -> Q {
    Q::from_integer(factorial(i as u64) / factorial((i - r) as u64))
}

fn act_with(mats: &[Mat], action: &JetAction, r: u32, p: &DiffPoly) -> DiffPoly {
    p.derivation(|v| {
        let Some(bi) = action.block_index(&v.name) else {
            return Vec::new();
        };
        if v.order < r {
            return Vec::new();
        }
        let lam = lambda(v.order, r);
        let m = &mats[bi];
        let j = v.j as usize - 1;
        (0..m.n)
            .filter(|k| !m.get(*k, j).is_zero())
            .map(|k| (Var { name: v.name.clone(), j: (k + 1) as u16, order: v.order - r }, m.get(k, j) * &lam))
            .collect()
    })
}

/// ξt^r as a derivation: v^(i) ↦ i!/(i-r)!·(ξ·v)^(i-r).
pub fn lie_jet_action(action: &JetAction, xi: &Element, r: u32, p: &DiffPoly) -> DiffPoly {
    let mats: Vec<Mat> = action.blocks.iter().map(|b| action.matrix(xi, b.rep)).collect();
    act_with(&mats, action, r, p)
}

/// {D^i f : 0 ≤ i ≤ m} for each f, grouped by f.
pub fn jet_ideal(fs: &[DiffPoly], m: u32) -> Result<Vec<DiffPoly>> {
    let mut out = Vec::new();
    for f in fs {
        if f.jet_weight() != Some(0) {
            return Err(Error::Precondition(format!("jet generator `{f}` is not at jet weight 0")));
        }
        let mut g = f.clone();
        for _ in 0..=m {
            let next = g.apply_d();
            out.push(std::mem::replace(&mut g, next));
        }
    }
    Ok(out)
}

fn enumerate_monomials(vars: &[Var], weight: i64, degree: usize, cap: usize) -> Result<Vec<PMono>> {
    fn rec(
        vars: &[Var],
        start: usize,
        weight_left: i64,
        deg_left: usize,
        cur: &mut SmallVec<[Var; 6]>,
        out: &mut Vec<PMono>,
        cap: usize,
    ) -> Result<()> {
        if deg_left == 0 {
            if weight_left == 0 {
                if out.len() >= cap {
                    return Err(Error::Resource { cap: "component_cap", needed: out.len() + 1, limit: cap });
                }
                out.push(PMono(cur.clone()));
            }
            return Ok(());
        }
        for idx in start..vars.len() {
            let v = &vars[idx];
            let w = v.order as i64;
            if w > weight_left {
                continue;
            }
            // remaining factors have order ≥ 0, so weight_left - w must stay ≥ 0
            cur.push(v.clone());
            let next = if v.is_odd() { idx + 1 } else { idx };
            rec(vars, next, weight_left - w, deg_left - 1, cur, out, cap)?;
            cur.pop();
        }
        Ok(())
    }
    let mut out = Vec::new();
    let mut cur = SmallVec::new();
    rec(vars, 0, weight, degree, &mut cur, &mut out, cap)?;
    Ok(out)
}

/// Basis of the joint kernel of all ξt^r (ξ in the basis, 0 ≤ r ≤ n) on the
/// span of monomials of jet weight n and degree exactly e.
pub fn invariant_basis_exact(action: &JetAction, n: u32, e: usize, cap: usize) -> Result<Vec<DiffPoly>> {
    let dim = action.dim();
    let mut vars = Vec::new();
    for b in &action.blocks {
        for j in 1..=dim {
            for order in 0..=n {
                vars.push(Var { name: b.name.clone(), j: j as u16, order });
            }
        }
    }
    vars.sort();
    let algebra = &action.algebra;
    let d = algebra.dim();
    let mats: Vec<Vec<Mat>> = (0..d)
        .map(|i| {
            let xi = algebra.unit_vector(i);
            action.blocks.iter().map(|b| action.matrix(&xi, b.rep)).collect()
        })
        .collect();
    // torus weights from diagonal basis elements
    let diagonal: Vec<usize> = (0..d).filter(|&i| algebra.rep(i).is_diagonal()).collect();
    let torus = |m: &PMono| -> bool {
        diagonal.iter().all(|&t| {
            let mut s = Q::zero();
            for v in m.vars() {
                if let Some(bi) = action.block_index(&v.name) {
                    let j = v.j as usize - 1;
                    s += mats[t][bi].get(j, j);
                }
            }
            s.is_zero()
        })
    };
    let monos = enumerate_monomials(&vars, n as i64, e, cap)?;
    let mut sectors: BTreeMap<Vec<usize>, Vec<PMono>> = BTreeMap::new();
    for m in monos.into_iter().filter(|m| torus(m)) {
        let mut key = vec![0usize; action.blocks.len()];
        for v in m.vars() {
            if let Some(bi) = action.block_index(&v.name) {
                key[bi] += 1;
            }
        }
        sectors.entry(key).or_default().push(m);
    }
    let mut out = Vec::new();
    for monos in sectors.into_values() {
        let mut row_index: HashMap<(usize, u32, PMono), usize> = HashMap::new();
        let mut rows: Vec<SparseVec> = Vec::new();
        for (col, m) in monos.iter().enumerate() {
            let p = {
                let mut p = DiffPoly::zero();
                p.add_term(m.clone(), Q::from_integer(1.into()));
                p
            };
            for (xi, xmats) in mats.iter().enumerate() {
                for r in 0..=n {
                    let img = act_with(xmats, action, r, &p);
                    for (om, c) in img.terms() {
                        let key = (xi, r, om.clone());
                        let idx = *row_index.entry(key).or_insert_with(|| {
                            rows.push(Vec::new());
                            rows.len() - 1
                        });
                        rows[idx].push((col, c.clone()));
                    }
                }
            }
        }
        for v in linalg::nullspace(&rows, monos.len()) {
            let mut p = DiffPoly::zero();
            for (c, x) in v {
                p.add_term(monos[c].clone(), x);
            }
            out.push(p);
        }
    }
    Ok(out)
}

/// Invariants at jet weight n over all degrees 0..=d.
pub fn invariant_basis(action: &JetAction, n: u32, d: usize, cap: usize) -> Result<Vec<DiffPoly>> {
    let mut out = Vec::new();
    for e in 0..=d {
        out.extend(invariant_basis_exact(action, n, e, cap)?);
    }
    Ok(out)
}

fn rref_basis(polys: &[DiffPoly]) -> Vec<DiffPoly> {
    let mut index: BTreeMap<PMono, usize> = BTreeMap::new();
    for p in polys {
        for (m, _) in p.terms() {
            let l = index.len();
            index.entry(m.clone()).or_insert(l);
        }
    }
    // column order follows monomial order for a deterministic echelon form
    let ordered: Vec<PMono> = index.keys().cloned().collect();
    let pos: BTreeMap<&PMono, usize> = ordered.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut ech = Echelon::new();
    for p in polys {
        let row: SparseVec = p.terms().map(|(m, c)| (pos[m], c.clone())).collect();
        ech.add_row(&row);
    }
    ech.rref()
        .into_iter()
        .map(|(_, row)| {
            let mut p = DiffPoly::zero();
            for (c, v) in row {
                p.add_term(ordered[c].clone(), v);
            }
            p
        })
        .collect()
}

/// Span at jet weight n and degree exactly e of products of D-derivatives of
/// the generators, as a reduced echelon basis.
pub fn generated_span_exact(gens: &[DiffPoly], n: u32, e: usize, cap: usize) -> Result<Vec<DiffPoly>> {
    let mut info = Vec::new();
    for g in gens {
        let w = g
            .jet_weight()
            .ok_or_else(|| Error::Precondition(format!("generator `{g}` is not jet-weight homogeneous")))?;
        let dg = g
            .homogeneous_degree()
            .ok_or_else(|| Error::Precondition(format!("generator `{g}` is not degree homogeneous")))?;
        let odd = g.terms().next().map(|(m, _)| m.is_odd()).unwrap_or(false);
        if g.is_zero() || dg == 0 {
            continue;
        }
        info.push((w, dg, odd));
    }
    let gens_nz: Vec<&DiffPoly> = gens.iter().filter(|g| !g.is_zero() && g.degree() > 0).collect();
    // factor list (generator, derivative order) with weight ≤ n
    let mut factors: Vec<(usize, u32)> = Vec::new();
    for (gi, (w, _, _)) in info.iter().enumerate() {
        for k in 0..=n {
            if *w + k as i64 <= n as i64 {
                factors.push((gi, k));
            }
        }
    }
    let mut derivs: HashMap<(usize, u32), DiffPoly> = HashMap::new();
    let mut products = Vec::new();
    let mut count = 0usize;
    fn rec(
        factors: &[(usize, u32)],
        info: &[(i64, usize, bool)],
        start: usize,
        w_left: i64,
        d_left: usize,
        cur: &mut Vec<(usize, u32)>,
        out: &mut Vec<Vec<(usize, u32)>>,
        count: &mut usize,
        cap: usize,
    ) -> Result<()> {
        if d_left == 0 {
            if w_left == 0 {
                *count += 1;
                if *count > cap {
                    return Err(Error::Resource { cap: "component_cap", needed: *count, limit: cap });
                }
                out.push(cur.clone());
            }
            return Ok(());
        }
        for idx in start..factors.len() {
            let (gi, k) = factors[idx];
            let (w, dg, odd) = info[gi];
            let fw = w + k as i64;
            if fw > w_left || dg > d_left {
                continue;
            }
            cur.push((gi, k));
            let next = if odd { idx + 1 } else { idx };
            rec(factors, info, next, w_left - fw, d_left - dg, cur, out, count, cap)?;
            cur.pop();
        }
        Ok(())
    }
    let mut combos = Vec::new();
    let mut cur = Vec::new();
    rec(&factors, &info, 0, n as i64, e, &mut cur, &mut combos, &mut count, cap)?;
    for combo in combos {
        let mut acc = DiffPoly::one();
        for &(gi, k) in &combo {
            let d = derivs.entry((gi, k)).or_insert_with(|| gens_nz[gi].apply_d_n(k)).clone();
            acc = acc.mul(&d);
        }
        if !acc.is_zero() {
            products.push(acc);
        }
    }
    Ok(rref_basis(&products))
}

pub fn generated_span(gens: &[DiffPoly], n: u32, d: usize, cap: usize) -> Result<Vec<DiffPoly>> {
    let mut out = Vec::new();
    for e in 0..=d {
        out.extend(generated_span_exact(gens, n, e, cap)?);
    }
    Ok(out)
}
