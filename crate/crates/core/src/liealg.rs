//! Classical (super) Lie algebras through their standard representations.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg;
use crate::rational::{frac, q, Q};

/// Dense square matrix with rational entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat {
    pub n: usize,
    pub data: Vec<Q>,
}

impl Mat {
    pub fn zero(n: usize) -> Self {
        Mat { n, data: vec![Q::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m.set(i, i, Q::one());
        }
        m
    }

    /// Matrix unit e_{ab} (0-based).
    pub fn unit(n: usize, a: usize, b: usize) -> Self {
        let mut m = Self::zero(n);
        m.set(a, b, Q::one());
        m
    }

    pub fn get(&self, i: usize, j: usize) -> &Q {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Q) {
        self.data[i * self.n + j] = v;
    }

    pub fn add(&self, o: &Mat) -> Mat {
        Mat { n: self.n, data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, o: &Mat) -> Mat {
        Mat { n: self.n, data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect() }
    }

    pub fn scale(&self, c: &Q) -> Mat {
        Mat { n: self.n, data: self.data.iter().map(|a| a * c).collect() }
    }

    pub fn mul(&self, o: &Mat) -> Mat {
        let n = self.n;
        let mut out = Mat::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        out.data[i * n + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> Mat {
        let mut out = Mat::zero(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn trace(&self) -> Q {
        (0..self.n).map(|i| self.get(i, i).clone()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| i == j || self.get(i, j).is_zero()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LieKind {
    Gl,
    Sl,
    So,
    Sp,
    /// so_2m preserving the split form [[0, I], [I, 0]].
    SoSplit,
    GlSuper,
}

impl fmt::Display for LieKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            LieKind::Gl => "gl",
            LieKind::Sl => "sl",
            LieKind::So => "so",
            LieKind::Sp => "sp",
            LieKind::SoSplit => "so_split",
            LieKind::GlSuper => "glsuper",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug)]
pub struct BasisElement {
    pub label: String,
    pub odd: bool,
    pub mat: Mat,
}

/// Element in basis coordinates.
pub type Element = Vec<Q>;

#[derive(Clone, Debug)]
pub struct LieAlgebraSpec {
    pub kind: LieKind,
    /// n for gl/sl/so, the half rank m for sp_2m and so_split_2m, (r, s) for gl(r|s).
    pub rank: (usize, usize),
    pub basis: Vec<BasisElement>,
    /// structure[i][j] = [b_i, b_j] in coordinates.
    pub structure: Vec<Vec<Element>>,
    /// Even/odd grading of the standard module rows, for gl(r|s).
    pub row_parity: Vec<bool>,
}

impl LieAlgebraSpec {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Dimension of the standard module.
    pub fn std_dim(&self) -> usize {
        self.basis.first().map(|b| b.mat.n).unwrap_or(0)
    }

    pub fn is_super(&self) -> bool {
        self.kind == LieKind::GlSuper
    }

    pub fn rep(&self, i: usize) -> &Mat {
        &self.basis[i].mat
    }

    pub fn rep_of(&self, x: &Element) -> Mat {
        let mut m = Mat::zero(self.std_dim());
        for (c, b) in x.iter().zip(&self.basis) {
            if !c.is_zero() {
                m = m.add(&b.mat.scale(c));
            }
        }
        m
    }

    /// ρ*(ξ) = -ρ(ξ)ᵀ, or minus the supertranspose for gl(r|s).
    pub fn dual_rep(&self, i: usize) -> Mat {
        let m = &self.basis[i].mat;
        let n = m.n;
        let mut out = Mat::zero(n);
        for a in 0..n {
            for b in 0..n {
                let v = m.get(b, a);
                if v.is_zero() {
                    continue;
                }
                // supertranspose: (Xᵗ)_{ab} = (-1)^{(|a|+|b|)|b|} X_{ba}
                let pa = self.row_parity[a];
                let pb = self.row_parity[b];
                let neg = (pa ^ pb) && pb;
                let v = if neg { -v.clone() } else { v.clone() };
                out.set(a, b, -v);
            }
        }
        out
    }

    pub fn unit_vector(&self, i: usize) -> Element {
        let mut v = vec![Q::zero(); self.dim()];
        v[i] = Q::one();
        v
    }

    pub fn parity_of(&self, x: &Element) -> Option<bool> {
        let mut p = None;
        for (c, b) in x.iter().zip(&self.basis) {
            if !c.is_zero() {
                match p {
                    None => p = Some(b.odd),
                    Some(q) if q != b.odd => return None,
                    _ => {}
                }
            }
        }
        Some(p.unwrap_or(false))
    }

    /// Coordinates of a matrix in the span of the basis.
    pub fn coords(&self, m: &Mat) -> Option<Element> {
        let cols: Vec<linalg::SparseVec> = self.basis.iter().map(|b| sparse_of(&b.mat)).collect();
        linalg::solve(&cols, &sparse_of(m)).filter(|x| {
            let back = self.rep_of(x);
            back == *m
        })
    }

    pub fn bracket(&self, x: &Element, y: &Element) -> Element {
        let mut out = vec![Q::zero(); self.dim()];
        for (i, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let ab = a * b;
                for (k, c) in self.structure[i][j].iter().enumerate() {
                    if !c.is_zero() {
                        out[k] += &ab * c;
                    }
                }
            }
        }
        out
    }

    /// B(ξ, η) = Tr(ρ(ξ)ρ(η)), supertrace for gl(r|s).
    pub fn trace_form(&self, x: &Element, y: &Element) -> Q {
        let p = self.rep_of(x).mul(&self.rep_of(y));
        self.supertrace(&p)
    }

    pub fn supertrace(&self, m: &Mat) -> Q {
        (0..m.n).map(|i| if self.row_parity[i] { -m.get(i, i).clone() } else { m.get(i, i).clone() }).sum()
    }

    /// Factor c with normalized form = c·trace_form: Killing/(2h∨) per simple factor.
    pub fn normalization(&self) -> Q {
        match self.kind {
            LieKind::So | LieKind::SoSplit => frac(1, 2),
            _ => q(1),
        }
    }

    pub fn normalized_form(&self, x: &Element, y: &Element) -> Q {
        self.normalization() * self.trace_form(x, y)
    }

    pub fn dual_coxeter(&self) -> Option<Q> {
        let (n, _) = self.rank;
        match self.kind {
            LieKind::Sl => Some(q(n as i64)),
            LieKind::So => Some(q(n as i64 - 2)),
            LieKind::SoSplit => Some(q(2 * n as i64 - 2)),
            LieKind::Sp => Some(q(n as i64 + 1)),
            _ => None,
        }
    }

    pub fn gram(&self, normalized: bool) -> Vec<Vec<Q>> {
        let d = self.dim();
        (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        let t = self.trace_form(&self.unit_vector(i), &self.unit_vector(j));
                        if normalized {
                            t * self.normalization()
                        } else {
                            t
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// Killing form Tr(ad ξ ad η) (super trace of ad for gl(r|s)).
    pub fn killing(&self, x: &Element, y: &Element) -> Q {
        let mut t = Q::zero();
        for k in 0..self.dim() {
            let e = self.unit_vector(k);
            let v = self.bracket(x, &self.bracket(y, &e));
            let s = if self.basis[k].odd { -v[k].clone() } else { v[k].clone() };
            t += s;
        }
        t
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.basis.iter().position(|b| b.label == label)
    }
}

pub(crate) fn sparse_of(m: &Mat) -> linalg::SparseVec {
    m.data.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(i, v)| (i, v.clone())).collect()
}

/// Matrix super-commutator XY - (-1)^{|X||Y|} YX.
pub fn super_commutator(x: &Mat, xo: bool, y: &Mat, yo: bool) -> Mat {
    let xy = x.mul(y);
    let yx = y.mul(x);
    if xo && yo {
        xy.add(&yx)
    } else {
        xy.sub(&yx)
    }
}

fn elem(label: String, mat: Mat) -> BasisElement {
    BasisElement { label, odd: false, mat }
}

/// Builds the algebra; sp_2m needs m ≥ 2 here (symplectic dimension at least 4).
pub fn make_algebra(kind: LieKind, params: (usize, usize)) -> Result<LieAlgebraSpec> {
    if kind == LieKind::Sp && params.0 < 2 {
        return Err(Error::Parameter("sp needs even dimension >= 4".into()));
    }
    build_algebra(kind, params)
}

/// As `make_algebra`, but also accepts sp_2 (= sl_2 in symplectic form), which
/// the SO_n quadratic family with a single copy needs.
pub fn build_algebra(kind: LieKind, params: (usize, usize)) -> Result<LieAlgebraSpec> {
    let (n, s) = params;
    let mut row_parity = Vec::new();
    let basis = match kind {
        LieKind::Gl => {
            if n < 1 {
                return Err(Error::Parameter("gl_n needs n >= 1".into()));
            }
            let mut b = Vec::new();
            for a in 0..n {
                for c in 0..n {
                    b.push(elem(format!("e{}{}", a + 1, c + 1), Mat::unit(n, a, c)));
                }
            }
            b
        }
        LieKind::Sl => {
            if n < 2 {
                return Err(Error::Parameter("sl_n needs n >= 2".into()));
            }
            if n == 2 {
                vec![
                    elem("x".into(), Mat::unit(2, 0, 1)),
                    elem("y".into(), Mat::unit(2, 1, 0)),
                    elem("h".into(), Mat::unit(2, 0, 0).sub(&Mat::unit(2, 1, 1))),
                ]
            } else {
                let mut b = Vec::new();
                for a in 0..n {
                    for c in 0..n {
                        if a != c {
                            b.push(elem(format!("e{}{}", a + 1, c + 1), Mat::unit(n, a, c)));
                        }
                    }
                }
                for a in 0..n - 1 {
                    b.push(elem(format!("h{}", a + 1), Mat::unit(n, a, a).sub(&Mat::unit(n, a + 1, a + 1))));
                }
                b
            }
        }
        LieKind::So => {
            if n < 3 {
                return Err(Error::Parameter("so_n needs n >= 3".into()));
            }
            let mut b = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    b.push(elem(format!("f{}{}", i + 1, j + 1), Mat::unit(n, i, j).sub(&Mat::unit(n, j, i))));
                }
            }
            b
        }
        LieKind::Sp => {
            let m = n;
            if m < 1 {
                return Err(Error::Parameter("sp_2m needs m >= 1".into()));
            }
            let d = 2 * m;
            let mut b = Vec::new();
            for j in 0..m {
                for k in j..m {
                    let x = Mat::unit(d, j, k + m).add(&Mat::unit(d, k, j + m));
                    b.push(elem(format!("B{}{}", j + 1, k + 1), x));
                }
            }
            for j in 0..m {
                for k in j..m {
                    let x = Mat::unit(d, j + m, k).add(&Mat::unit(d, k + m, j)).scale(&q(-1));
                    b.push(elem(format!("C{}{}", j + 1, k + 1), x));
                }
            }
            for j in 0..m {
                for k in 0..m {
                    b.push(elem(format!("A{}{}", j + 1, k + 1), Mat::unit(d, j, k).sub(&Mat::unit(d, k + m, j + m))));
                }
            }
            b
        }
        LieKind::SoSplit => {
            let m = n;
            if m < 1 {
                return Err(Error::Parameter("split so_2m needs m >= 1".into()));
            }
            let d = 2 * m;
            let mut b = Vec::new();
            for j in 0..m {
                for k in j + 1..m {
                    b.push(elem(format!("S{}{}", j + 1, k + 1), Mat::unit(d, j, k + m).sub(&Mat::unit(d, k, j + m))));
                }
            }
            for j in 0..m {
                for k in j + 1..m {
                    b.push(elem(format!("D{}{}", j + 1, k + 1), Mat::unit(d, j + m, k).sub(&Mat::unit(d, k + m, j))));
                }
            }
            for j in 0..m {
                for k in 0..m {
                    b.push(elem(format!("A{}{}", j + 1, k + 1), Mat::unit(d, j, k).sub(&Mat::unit(d, k + m, j + m))));
                }
            }
            b
        }
        LieKind::GlSuper => {
            let (r, s) = (n, s);
            if r + s < 1 {
                return Err(Error::Parameter("gl(r|s) needs r + s >= 1".into()));
            }
            let d = r + s;
            row_parity = (0..d).map(|i| i >= r).collect();
            let mut b = Vec::new();
            for p in 0..d {
                for c in 0..d {
                    b.push(BasisElement {
                        label: format!("E{}{}", p + 1, c + 1),
                        odd: row_parity[p] ^ row_parity[c],
                        mat: Mat::unit(d, p, c),
                    });
                }
            }
            b
        }
    };
    let dim_std = basis[0].mat.n;
    if row_parity.is_empty() {
        row_parity = vec![false; dim_std];
    }
    let mut spec = LieAlgebraSpec { kind, rank: params, basis, structure: Vec::new(), row_parity };
    let d = spec.dim();
    let mut structure = vec![vec![Vec::new(); d]; d];
    for i in 0..d {
        for j in 0..d {
            let bi = &spec.basis[i];
            let bj = &spec.basis[j];
            let c = super_commutator(&bi.mat, bi.odd, &bj.mat, bj.odd);
            structure[i][j] = spec.coords(&c).ok_or_else(|| {
                Error::Internal(format!("{kind} bracket [{}, {}] leaves the span", bi.label, bj.label))
            })?;
        }
    }
    spec.structure = structure;
    Ok(spec)
}

/// Symplectic form [[0, I], [-I, 0]] on C^{2m}.
pub fn symplectic_form(m: usize) -> Mat {
    let mut j = Mat::zero(2 * m);
    for i in 0..m {
        j.set(i, i + m, Q::one());
        j.set(i + m, i, -Q::one());
    }
    j
}

/// Split symmetric form [[0, I], [I, 0]] on C^{2m}.
pub fn split_form(m: usize) -> Mat {
    let mut j = Mat::zero(2 * m);
    for i in 0..m {
        j.set(i, i + m, Q::one());
        j.set(i + m, i, Q::one());
    }
    j
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dims() {
        assert_eq!(make_algebra(LieKind::Sl, (2, 0)).unwrap().dim(), 3);
        assert_eq!(make_algebra(LieKind::So, (3, 0)).unwrap().dim(), 3);
        assert_eq!(make_algebra(LieKind::Sp, (2, 0)).unwrap().dim(), 10);
        assert_eq!(make_algebra(LieKind::SoSplit, (2, 0)).unwrap().dim(), 6);
        assert_eq!(make_algebra(LieKind::GlSuper, (1, 1)).unwrap().dim(), 4);
        assert!(make_algebra(LieKind::So, (2, 0)).is_err());
        assert!(make_algebra(LieKind::Sp, (1, 0)).is_err());
    }

    #[test]
    fn sl2_bracket() {
        let a = make_algebra(LieKind::Sl, (2, 0)).unwrap();
        let xy = a.bracket(&a.unit_vector(0), &a.unit_vector(1));
        assert_eq!(xy, a.unit_vector(2));
        assert_eq!(a.trace_form(&a.unit_vector(2), &a.unit_vector(2)), q(2));
    }
}
