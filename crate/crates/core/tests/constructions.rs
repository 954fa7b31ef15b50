use freefield::constructions::{
    bc_family, bc_psi_family, build_system, charge_family, commutant_check, commutant_space, conformal_and_charge,
    det_family, mixed_glrs, quad_family, sugawara, sugawara_central_charge, theta, verify_affine, BcWhich, DetSide,
    FormKind, QuadGroup, Side,
};
use freefield::fock::{beta, derivative, nth_product, State};
use freefield::liealg::{make_algebra, LieKind};
use freefield::rational::{frac, q, Q};

fn level_of(f: &mut freefield::constructions::CurrentFamily) -> Q {
    let r = verify_affine(f);
    assert!(r.closure_ok, "{}: {:?}", f.name, r.failures.first());
    r.level.unwrap()
}

#[test]
fn sl2_levels_in_bosonic_and_fermionic_systems() {
    let sl2 = make_algebra(LieKind::Sl, (2, 0)).unwrap();
    for m in 1..=3 {
        let mut f = theta(&sl2, &build_system(Some((2, m)), None).unwrap(), Side::Left).unwrap();
        assert_eq!(level_of(&mut f), q(-(m as i64)));
        let mut f = theta(&sl2, &build_system(None, Some((2, m))).unwrap(), Side::Left).unwrap();
        assert_eq!(level_of(&mut f), q(m as i64));
    }
}

#[test]
fn theta_is_a_homomorphism_on_basis_pairs() {
    let gl3 = make_algebra(LieKind::Gl, (3, 0)).unwrap();
    let f = theta(&gl3, &build_system(Some((3, 1)), Some((3, 1))).unwrap(), Side::Left).unwrap();
    for i in 0..gl3.dim() {
        for j in 0..gl3.dim() {
            let br = gl3.bracket(&gl3.unit_vector(i), &gl3.unit_vector(j));
            assert_eq!(nth_product(&f.currents[i], &f.currents[j], 0), f.current_of(&br));
        }
    }
}

#[test]
fn quadratic_family_levels() {
    for m in 1..=2 {
        let mut f = quad_family(QuadGroup::So, &build_system(Some((3, m)), None).unwrap()).unwrap();
        assert_eq!(level_of(&mut f), frac(-3, 2));
        let mut f = quad_family(QuadGroup::Sp, &build_system(Some((4, m)), None).unwrap()).unwrap();
        assert_eq!(level_of(&mut f), q(-4));
        f.form = FormKind::Trace;
        assert_eq!(level_of(&mut f), q(-2));
    }
}

#[test]
fn charge_ope() {
    for n in 1..=3 {
        for m in 1..=3 {
            let sys = build_system(Some((n, m)), None).unwrap();
            let e = conformal_and_charge(&sys).unwrap().e.unwrap();
            assert_eq!(nth_product(&e, &e, 1), State::scalar(q(-((n * m) as i64))));
            assert!(nth_product(&e, &e, 0).is_zero());
            let mut f = charge_family(&sys).unwrap();
            assert_eq!(level_of(&mut f), q(-((n * m) as i64)));
        }
    }
}

#[test]
fn charge_commutes_with_sl_currents() {
    let sys = build_system(Some((3, 2)), None).unwrap();
    let sl3 = make_algebra(LieKind::Sl, (3, 0)).unwrap();
    let f = theta(&sl3, &sys, Side::Left).unwrap();
    let e = conformal_and_charge(&sys).unwrap().e.unwrap();
    assert!(commutant_check(&e, &f).ok);
}

#[test]
fn sugawara_vector_for_sl2() {
    let sys = build_system(Some((2, 1)), None).unwrap();
    let sl2 = make_algebra(LieKind::Sl, (2, 0)).unwrap();
    let f = theta(&sl2, &sys, Side::Left).unwrap();
    let k = q(-1);
    let l = sugawara(&f, &k).unwrap();
    let c = sugawara_central_charge(&sl2, &k).unwrap();
    assert_eq!(c, q(-3));
    assert_eq!(nth_product(&l, &l, 0), derivative(&l));
    assert_eq!(nth_product(&l, &l, 1), l.scaled(&q(2)));
    assert!(nth_product(&l, &l, 2).is_zero());
    assert_eq!(nth_product(&l, &l, 3), State::scalar(c / q(2)));
    for j in &f.currents {
        assert_eq!(nth_product(&l, j, 0), derivative(j));
        assert_eq!(&nth_product(&l, j, 1), j);
        assert!(nth_product(&l, j, 2).is_zero());
    }
    assert!(sugawara(&f, &q(-2)).is_err());
}

#[test]
fn determinants_commute_with_sl_but_not_gl() {
    let sys = build_system(Some((2, 3)), None).unwrap();
    let sl2 = make_algebra(LieKind::Sl, (2, 0)).unwrap();
    let gl2 = make_algebra(LieKind::Gl, (2, 0)).unwrap();
    let fs = theta(&sl2, &sys, Side::Left).unwrap();
    let fg = theta(&gl2, &sys, Side::Left).unwrap();
    for side in [DetSide::Beta, DetSide::Gamma] {
        let d = det_family(&sys, &[1, 3], side).unwrap();
        assert!(commutant_check(&d, &fs).ok);
        assert!(!commutant_check(&d, &fg).ok);
    }
    let r = commutant_check(&beta(1, 1), &fs);
    assert!(!r.ok);
    let (_, n, p) = r.witness.unwrap();
    assert_eq!(n, 0);
    assert!(!p.is_zero());
}

#[test]
fn bc_families_commute_with_sl2() {
    let sl2 = make_algebra(LieKind::Sl, (2, 0)).unwrap();
    let sys = build_system(None, Some((2, 2))).unwrap();
    let f = theta(&sl2, &sys, Side::Left).unwrap();
    for which in [BcWhich::Psi, BcWhich::D, BcWhich::Dprime] {
        for (label, s) in bc_family(&sys, which).unwrap() {
            assert!(commutant_check(&s, &f).ok, "{label}");
        }
    }
    let mut psi = bc_psi_family(&sys).unwrap();
    assert_eq!(level_of(&mut psi), q(2));
    assert!(BcWhich::parse("frobnicate").is_none());
}

#[test]
fn mixed_block_closes_as_superalgebra_currents() {
    for (r, s) in [(1, 1), (2, 1)] {
        let sys = build_system(Some((2, s)), Some((2, r))).unwrap();
        let mut f = mixed_glrs(&sys).unwrap();
        assert_eq!(level_of(&mut f), q(2));
    }
}

#[test]
fn gl_commutant_is_trivial_in_low_weight() {
    for n in 2..=3 {
        let gl = make_algebra(LieKind::Gl, (n, 0)).unwrap();
        let f = theta(&gl, &build_system(Some((n, 1)), None).unwrap(), Side::Left).unwrap();
        let dims: Vec<usize> = (0..=3).map(|w| commutant_space(&f, w, 4, 1_000_000).unwrap().len()).collect();
        assert_eq!(dims, vec![1, 0, 0, 0]);
    }
}
