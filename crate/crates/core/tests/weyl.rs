use freefield::constructions::{build_system, det_family, quad_family, theta, DetSide, QuadGroup, Side};
use freefield::fock::{beta, gamma, State};
use freefield::liealg::{build_algebra, make_algebra, LieKind};
use freefield::rational::{frac, q, Q};
use freefield::sampling::Sampler;
use freefield::weyl::{
    classical_dets, scalar_discrepancy, tau_maps, test_monomials, weyl_invariance, zhu_products, zhu_zero_mode,
    DetKind, TauShape, WeylElement,
};
use num_traits::Zero;
use proptest::prelude::*;

fn x(i: usize, j: usize) -> WeylElement {
    WeylElement::x(i, j)
}

fn d(i: usize, j: usize) -> WeylElement {
    WeylElement::d(i, j)
}

fn constant_term(w: &WeylElement) -> Q {
    w.terms().find(|(m, _)| m.x.is_empty() && m.d.is_empty()).map(|(_, c)| c.clone()).unwrap_or_else(Q::zero)
}

#[test]
fn normal_ordering_examples() {
    assert_eq!(d(1, 1).mul(&x(1, 1)), x(1, 1).mul(&d(1, 1)).plus(&WeylElement::one()));
    let e = x(1, 1).mul(&d(1, 1));
    let sq = x(1, 1).mul(&x(1, 1)).mul(&d(1, 1)).mul(&d(1, 1));
    assert_eq!(e.mul(&e), sq.plus(&e));
    assert!(d(1, 1).mul(&x(2, 1)).minus(&x(2, 1).mul(&d(1, 1))).is_zero());
}

#[test]
fn text_form() {
    let w = x(1, 2).mul(&d(2, 1)).scaled(&frac(-3, 2)).plus(&WeylElement::constant(q(5)));
    let s = w.to_string();
    assert_eq!(s.parse::<WeylElement>().unwrap(), w);
    assert_eq!("1/1 * x'[1,1]^2 d[1,1]^1".parse::<WeylElement>().unwrap(), x(1, 1).mul(&x(1, 1)).mul(&d(1, 1)));
    assert!("1/1 * d[1,1]^1 x'[1,1]^1".parse::<WeylElement>().is_err());
}

fn weyl_strategy(max_deg: u32) -> impl Strategy<Value = WeylElement> {
    let factor = (0usize..2, 1usize..3, 1usize..3);
    let mono = prop::collection::vec(factor, 0..=max_deg as usize);
    prop::collection::vec((mono, -3i64..4), 1..4).prop_map(|terms| {
        let mut out = WeylElement::zero();
        for (fs, c) in terms {
            let mut m = WeylElement::constant(q(c));
            for (kind, i, j) in fs {
                m = m.mul(&if kind == 0 { x(i, j) } else { d(i, j) });
            }
            out = out.plus(&m);
        }
        out
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn bernstein_degree_bounds(u in weyl_strategy(2), v in weyl_strategy(3)) {
        let p = u.mul(&v);
        prop_assert!(p.is_zero() || p.degree() <= u.degree() + v.degree());
        let c = u.commutator(&v);
        prop_assert!(c.is_zero() || c.degree() + 2 <= u.degree() + v.degree());
    }

    #[test]
    fn product_is_associative(u in weyl_strategy(2), v in weyl_strategy(2), w in weyl_strategy(2)) {
        prop_assert_eq!(u.mul(&v).mul(&w), u.mul(&v.mul(&w)));
    }

    #[test]
    fn weyl_text_round_trip(u in weyl_strategy(3)) {
        prop_assert_eq!(u.to_string().parse::<WeylElement>().unwrap(), u);
    }
}

fn assert_homomorphism(a: &freefield::liealg::LieAlgebraSpec, taus: &[WeylElement]) {
    for i in 0..a.dim() {
        for j in 0..a.dim() {
            let br = a.bracket(&a.unit_vector(i), &a.unit_vector(j));
            let mut img = WeylElement::zero();
            for (k, c) in br.iter().enumerate() {
                img.add_scaled(&taus[k], c);
            }
            assert_eq!(taus[i].commutator(&taus[j]), img, "{} {i} {j}", a.kind);
        }
    }
}

#[test]
fn tau_maps_are_homomorphisms() {
    let sl2 = make_algebra(LieKind::Sl, (2, 0)).unwrap();
    assert_homomorphism(&sl2, &tau_maps(&sl2, TauShape::Left { n: 2, m: 2 }).unwrap());
    let gl3 = make_algebra(LieKind::Gl, (3, 0)).unwrap();
    assert_homomorphism(&gl3, &tau_maps(&gl3, TauShape::RightGl { n: 2, m: 3 }).unwrap());
    for m in 1..=2 {
        let sp = build_algebra(LieKind::Sp, (m, 0)).unwrap();
        assert_homomorphism(&sp, &tau_maps(&sp, TauShape::SpPrime { n: 3, m }).unwrap());
        let so = make_algebra(LieKind::SoSplit, (m, 0)).unwrap();
        assert_homomorphism(&so, &tau_maps(&so, TauShape::SoPrime { n: 2, m }).unwrap());
    }
}

#[test]
fn tau_prime_constant_shifts() {
    let sp = make_algebra(LieKind::Sp, (2, 0)).unwrap();
    let taus = tau_maps(&sp, TauShape::SpPrime { n: 3, m: 2 }).unwrap();
    assert_eq!(constant_term(&taus[sp.index_of("A11").unwrap()]), frac(3, 2));
    assert_eq!(constant_term(&taus[sp.index_of("A12").unwrap()]), q(0));
    let so = make_algebra(LieKind::SoSplit, (2, 0)).unwrap();
    let taus = tau_maps(&so, TauShape::SoPrime { n: 2, m: 2 }).unwrap();
    assert_eq!(constant_term(&taus[so.index_of("A22").unwrap()]), q(2));
}

#[test]
fn howe_partners_commute_classically() {
    let so3 = make_algebra(LieKind::So, (3, 0)).unwrap();
    let left = tau_maps(&so3, TauShape::Left { n: 3, m: 2 }).unwrap();
    let sp = make_algebra(LieKind::Sp, (2, 0)).unwrap();
    for t in tau_maps(&sp, TauShape::SpPrime { n: 3, m: 2 }).unwrap() {
        assert!(weyl_invariance(&t, &left).ok);
    }
}

#[test]
fn determinants_and_invariance() {
    let d2 = classical_dets(2, &[1, 3], DetKind::X).unwrap();
    let expected = x(1, 1).mul(&x(2, 3)).minus(&x(1, 3).mul(&x(2, 1)));
    assert_eq!(d2, expected);
    assert!(classical_dets(2, &[1, 1], DetKind::X).is_err());
    let sl2 = make_algebra(LieKind::Sl, (2, 0)).unwrap();
    let taus = tau_maps(&sl2, TauShape::Left { n: 2, m: 3 }).unwrap();
    for kind in [DetKind::X, DetKind::D] {
        assert!(weyl_invariance(&classical_dets(2, &[1, 2], kind).unwrap(), &taus).ok);
    }
    let gl2 = make_algebra(LieKind::Gl, (2, 0)).unwrap();
    let taus = tau_maps(&gl2, TauShape::Left { n: 2, m: 3 }).unwrap();
    assert!(!weyl_invariance(&d2, &taus).ok);
    let res = weyl_invariance(&x(1, 1), &tau_maps(&sl2, TauShape::Left { n: 2, m: 1 }).unwrap());
    assert!(!res.ok);
    assert!(res.witness.is_some());
}

#[test]
fn zero_modes_of_generators() {
    for t in test_monomials(2, 2, 3) {
        assert_eq!(zhu_zero_mode(&gamma(2, 1), &t).unwrap(), x(1, 2).mul(&t));
        assert_eq!(zhu_zero_mode(&beta(2, 1), &t).unwrap(), d(1, 2).apply(&t).unwrap());
    }
}

#[test]
fn zero_modes_of_determinants() {
    for n in 2..=3 {
        let sys = build_system(Some((n, n)), None).unwrap();
        let cols: Vec<usize> = (1..=n).collect();
        let dj = det_family(&sys, &cols, DetSide::Beta).unwrap();
        let dpj = det_family(&sys, &cols, DetSide::Gamma).unwrap();
        let wd = classical_dets(n, &cols, DetKind::D).unwrap();
        let wx = classical_dets(n, &cols, DetKind::X).unwrap();
        for t in test_monomials(n, n, 3) {
            assert_eq!(zhu_zero_mode(&dj, &t).unwrap(), wd.apply(&t).unwrap());
            assert_eq!(zhu_zero_mode(&dpj, &t).unwrap(), wx.apply(&t).unwrap());
        }
    }
}

#[test]
fn currents_match_tau_up_to_scalars() {
    let sys = build_system(Some((2, 2)), None).unwrap();
    let sl2 = make_algebra(LieKind::Sl, (2, 0)).unwrap();
    let f = theta(&sl2, &sys, Side::Left).unwrap();
    let taus = tau_maps(&sl2, TauShape::Left { n: 2, m: 2 }).unwrap();
    let tests = test_monomials(2, 2, 3);
    for (c, t) in f.currents.iter().zip(&taus) {
        assert_eq!(scalar_discrepancy(c, t, &tests).unwrap(), Some(q(0)));
    }
    // the sp partner of SO_3: zero modes differ from τ' only on the diagonal A_jj, by -n/2
    let sys = build_system(Some((3, 2)), None).unwrap();
    let fam = quad_family(QuadGroup::So, &sys).unwrap();
    let taus = tau_maps(&fam.algebra, TauShape::SpPrime { n: 3, m: 2 }).unwrap();
    let tests = test_monomials(3, 2, 3);
    for (i, (c, t)) in fam.currents.iter().zip(&taus).enumerate() {
        let label = &fam.algebra.basis[i].label;
        let diag = label.starts_with('A') && label[1..2] == label[2..3];
        let want = if diag { frac(-3, 2) } else { q(0) };
        assert_eq!(scalar_discrepancy(c, t, &tests).unwrap(), Some(want), "{label}");
    }
}

#[test]
fn star_product_basics() {
    let b = beta(1, 1).plus(&gamma(1, 2));
    let (star, _) = zhu_products(&State::vacuum(), &b).unwrap();
    assert_eq!(star, b);
    assert!(zhu_products(&beta(1, 1).plus(&gamma(1, 1)), &b).is_err());
}

#[test]
fn star_product_acts_as_composition() {
    let sys = build_system(Some((2, 2)), None).unwrap();
    let mut s = Sampler::new(sys, 17);
    let tests = test_monomials(2, 2, 3);
    for _ in 0..50 {
        let a = s.homogeneous(2, 2, 2);
        let b = s.homogeneous(2, 2, 2);
        let (star, _) = zhu_products(&a, &b).unwrap();
        for t in &tests {
            let lhs = zhu_zero_mode(&star, t).unwrap();
            let rhs = zhu_zero_mode(&a, &zhu_zero_mode(&b, t).unwrap()).unwrap();
            assert_eq!(lhs, rhs, "a = {a}; b = {b}; q = {t}");
        }
    }
}

#[test]
fn circle_product_with_conformal_vector_acts_by_zero() {
    let sys = build_system(Some((2, 1)), None).unwrap();
    let l = freefield::constructions::conformal_and_charge(&sys).unwrap().l_s.unwrap();
    let tests = test_monomials(2, 1, 3);
    let mut s = Sampler::new(sys, 23);
    for _ in 0..20 {
        let b = s.homogeneous(2, 2, 2);
        let (_, circ) = zhu_products(&l, &b).unwrap();
        for t in &tests {
            assert!(zhu_zero_mode(&circ, t).unwrap().is_zero(), "b = {b}");
        }
    }
}
