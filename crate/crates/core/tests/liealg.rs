use freefield::liealg::{
    build_algebra, make_algebra, split_form, super_commutator, symplectic_form, LieAlgebraSpec, LieKind, Mat,
};
use freefield::rational::{q, Q};
use num_traits::Zero;

fn zoo() -> Vec<LieAlgebraSpec> {
    let specs = [
        (LieKind::Gl, (1, 0)),
        (LieKind::Gl, (2, 0)),
        (LieKind::Gl, (3, 0)),
        (LieKind::Sl, (2, 0)),
        (LieKind::Sl, (3, 0)),
        (LieKind::So, (3, 0)),
        (LieKind::So, (4, 0)),
        (LieKind::So, (5, 0)),
        (LieKind::Sp, (2, 0)),
        (LieKind::Sp, (3, 0)),
        (LieKind::SoSplit, (2, 0)),
        (LieKind::SoSplit, (3, 0)),
        (LieKind::GlSuper, (1, 1)),
        (LieKind::GlSuper, (2, 1)),
    ];
    let mut out: Vec<_> = specs.iter().map(|&(k, p)| make_algebra(k, p).unwrap()).collect();
    out.push(build_algebra(LieKind::Sp, (1, 0)).unwrap());
    out
}

fn sub(x: &[Q], y: &[Q]) -> Vec<Q> {
    x.iter().zip(y).map(|(a, b)| a - b).collect()
}

fn add(x: &[Q], y: &[Q]) -> Vec<Q> {
    x.iter().zip(y).map(|(a, b)| a + b).collect()
}

fn scale(x: &[Q], c: &Q) -> Vec<Q> {
    x.iter().map(|a| a * c).collect()
}

#[test]
fn dimensions() {
    let dim = |k, p| make_algebra(k, p).unwrap().dim();
    assert_eq!(dim(LieKind::Gl, (3, 0)), 9);
    assert_eq!(dim(LieKind::Sl, (3, 0)), 8);
    assert_eq!(dim(LieKind::So, (5, 0)), 10);
    assert_eq!(dim(LieKind::Sp, (2, 0)), 10);
    assert_eq!(dim(LieKind::Sp, (3, 0)), 21);
    assert_eq!(dim(LieKind::SoSplit, (3, 0)), 15);
    assert_eq!(dim(LieKind::GlSuper, (2, 1)), 9);
    assert_eq!(build_algebra(LieKind::Sp, (1, 0)).unwrap().dim(), 3);
    assert!(make_algebra(LieKind::Sp, (1, 0)).is_err());
}

#[test]
fn super_jacobi_on_basis_triples() {
    for a in zoo() {
        let d = a.dim();
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let (x, y, z) = (a.unit_vector(i), a.unit_vector(j), a.unit_vector(k));
                    let eps = if a.basis[i].odd && a.basis[j].odd { q(-1) } else { q(1) };
                    let lhs = a.bracket(&x, &a.bracket(&y, &z));
                    let rhs = add(&a.bracket(&a.bracket(&x, &y), &z), &scale(&a.bracket(&y, &a.bracket(&x, &z)), &eps));
                    assert!(sub(&lhs, &rhs).iter().all(Q::is_zero), "{} {i} {j} {k}", a.kind);
                }
            }
        }
    }
}

#[test]
fn standard_module_is_a_representation() {
    for a in zoo() {
        for i in 0..a.dim() {
            for j in 0..a.dim() {
                let br = a.bracket(&a.unit_vector(i), &a.unit_vector(j));
                let m = super_commutator(a.rep(i), a.basis[i].odd, a.rep(j), a.basis[j].odd);
                assert_eq!(a.rep_of(&br), m, "{} {i} {j}", a.kind);
            }
        }
    }
}

#[test]
fn trace_form_is_invariant() {
    for a in zoo() {
        let d = a.dim();
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let (x, y, z) = (a.unit_vector(i), a.unit_vector(j), a.unit_vector(k));
                    assert_eq!(
                        a.trace_form(&a.bracket(&x, &y), &z),
                        a.trace_form(&x, &a.bracket(&y, &z)),
                        "{} {i} {j} {k}",
                        a.kind
                    );
                }
            }
        }
    }
}

#[test]
fn dual_module_pairs_to_zero() {
    for a in zoo().into_iter().filter(|a| !a.is_super()) {
        for i in 0..a.dim() {
            let sum = a.dual_rep(i).transpose().add(a.rep(i));
            assert!(sum.is_zero(), "{} {i}", a.kind);
            for j in 0..a.dim() {
                let br = a.bracket(&a.unit_vector(i), &a.unit_vector(j));
                let m = a.dual_rep(i).mul(&a.dual_rep(j)).sub(&a.dual_rep(j).mul(&a.dual_rep(i)));
                let img = a.rep_of(&br).transpose().scale(&q(-1));
                assert_eq!(m, img);
            }
        }
    }
}

#[test]
fn super_dual_is_a_representation() {
    for a in zoo().into_iter().filter(|a| a.is_super()) {
        for i in 0..a.dim() {
            for j in 0..a.dim() {
                let br = a.bracket(&a.unit_vector(i), &a.unit_vector(j));
                let mut img = Mat::zero(a.std_dim());
                for (k, c) in br.iter().enumerate() {
                    if !c.is_zero() {
                        img = img.add(&a.dual_rep(k).scale(c));
                    }
                }
                let m = super_commutator(&a.dual_rep(i), a.basis[i].odd, &a.dual_rep(j), a.basis[j].odd);
                assert_eq!(m, img, "{i} {j}");
            }
        }
    }
}

#[test]
fn classical_forms_are_preserved() {
    for a in zoo() {
        let n = a.std_dim();
        let form = match a.kind {
            LieKind::So => Mat::identity(n),
            LieKind::Sp => symplectic_form(n / 2),
            LieKind::SoSplit => split_form(n / 2),
            _ => continue,
        };
        for i in 0..a.dim() {
            let x = a.rep(i);
            assert!(x.transpose().mul(&form).add(&form.mul(x)).is_zero(), "{} {i}", a.kind);
        }
    }
}

#[test]
fn killing_is_twice_dual_coxeter_times_normalized_form() {
    for a in zoo() {
        let Some(h) = a.dual_coxeter() else { continue };
        for i in 0..a.dim() {
            for j in 0..a.dim() {
                let (x, y) = (a.unit_vector(i), a.unit_vector(j));
                assert_eq!(a.killing(&x, &y), q(2) * &h * a.normalized_form(&x, &y), "{} {i} {j}", a.kind);
            }
        }
    }
}

#[test]
fn sl2_basis_and_brackets() {
    let a = make_algebra(LieKind::Sl, (2, 0)).unwrap();
    let (x, y, h) = (a.index_of("x").unwrap(), a.index_of("y").unwrap(), a.index_of("h").unwrap());
    let br = a.bracket(&a.unit_vector(x), &a.unit_vector(y));
    assert_eq!(br, a.unit_vector(h));
    let br = a.bracket(&a.unit_vector(h), &a.unit_vector(x));
    assert_eq!(br, scale(&a.unit_vector(x), &q(2)));
    assert_eq!(a.dual_coxeter(), Some(q(2)));
}

#[test]
fn coords_recovers_basis_combinations() {
    let a = make_algebra(LieKind::Sp, (2, 0)).unwrap();
    let x: Vec<Q> = (0..a.dim()).map(|i| q(i as i64 - 3)).collect();
    assert_eq!(a.coords(&a.rep_of(&x)), Some(x));
    assert_eq!(a.coords(&Mat::identity(4)), None);
}
