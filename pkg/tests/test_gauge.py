import random
from fractions import Fraction

import pytest

from segreode.errors import DomainError
from segreode.gauge import (ScalarGauge, companion_gauge,
                            conjugation_residual, divergence_report,
                            formal_fundamental, formal_solution_coeffs,
                            gauge_chi_tau, linear_family,
                            monodromy_at_infinity, poincare_dulac, reversion,
                            riccati_check, to_system, transform_ode_by_gauge)
from segreode.odes import P0Ode
from segreode.scalars import GaussRational
from segreode.series import ULaurent, USeries

from conftest import rnd_fraction

G = GaussRational
ZERO, ONE = G(0), G(1)
TWO_I = G(0, 2)


def test_to_system_model_matrices():
    sys_ = to_system(linear_family(1, trunc=20))
    assert sys_.pole == 4
    assert sys_.A.coeff_matrix(0) == ((ZERO, ZERO), (ZERO, TWO_I))
    assert sys_.A.coeff_matrix(1) == ((ZERO, ONE), (ZERO, ZERO))
    assert sys_.A.coeff_matrix(2) == ((ZERO, ZERO), (ZERO, ZERO))
    assert sys_.A.coeff_matrix(3) == ((ZERO, ZERO), (ONE, G(-1)))


def test_to_system_gamma_zero():
    sys_ = to_system(linear_family(0, trunc=20))
    assert sys_.A.coeff_matrix(3) == ((ZERO, ZERO), (ZERO, G(-1)))


def test_to_system_flat_m2():
    z = USeries.zero(trunc=12)
    flat2 = P0Ode(2, z, z, z, z, z, z)
    sys_ = to_system(flat2)
    # u = z'w gives the (0, w; 0, w)/w^2 record, which pole-minimizes to
    # the Fuchsian (0, 1; 0, 1)/w form
    assert sys_.pole == 1
    assert sys_.A[0, 1].equal_mod(USeries.constant(1, trunc=10), 10)
    assert sys_.A[1, 1].equal_mod(USeries.constant(1, trunc=10), 10)
    assert sys_.A[0, 0].is_zero() and sys_.A[1, 0].is_zero()


def test_to_system_rejects_nonlinear():
    ode = linear_family(1, trunc=16)
    bad = P0Ode(4, USeries.monomial(1, 1, trunc=16), ode.B,
                ode.C, ode.D, ode.E, ode.F)
    with pytest.raises(DomainError):
        to_system(bad)


def test_poincare_dulac_reproduces_steps_and_normal_form():
    sys_ = to_system(linear_family(1, trunc=24))
    pd = poincare_dulac(sys_, 16)
    # first homological step: entry 1/(2i) in the (1,2) slot
    h1 = pd.step_matrix(1)
    assert h1 == ((ZERO, ONE / TWO_I), (ZERO, ZERO))
    # degree-3 step: entry -gamma/(2i) in the (2,1) slot, gamma = 1
    h3 = pd.step_matrix(3)
    assert h3 == ((ZERO, ZERO), (G(-1) / TWO_I, ZERO))
    # normal form: diag(0, 2i)/w^4 + diag(0, -1)/w, nothing else
    nf = pd.normal_form
    assert nf.A[0, 0].is_zero() and nf.A[0, 1].is_zero() and nf.A[1, 0].is_zero()
    assert nf.A[1, 1] == USeries("w", 17, {0: TWO_I, 3: G(-1)})
    assert pd.residues == ((3, (ZERO, G(-1))),)
    assert pd.obstructions == ()


def test_poincare_dulac_conjugation_identity():
    for gamma in (0, 1, Fraction(-2, 3)):
        sys_ = to_system(linear_family(gamma, trunc=20))
        pd = poincare_dulac(sys_, 12)
        assert conjugation_residual(sys_, pd).is_zero()


def test_formal_solution_recurrence_values():
    a = formal_solution_coeffs(1, 8)
    assert a[0] == ONE
    assert a[1] == G(0, Fraction(1, 2))
    assert a[2] == G(Fraction(-1, 8))
    b = formal_solution_coeffs(0, 8)
    assert all(x == (ONE if k == 0 else ZERO) for k, x in enumerate(b))


def test_formal_fundamental_consistency():
    fhat, ghat = formal_fundamental(1, 14)
    assert fhat.coeff(0) == ONE and ghat.coeff(1) == ONE
    # the gauge's (1,1) entry must equal the recurrence solution
    pd = poincare_dulac(to_system(linear_family(1, trunc=20)), 16)
    assert pd.gauge[0, 0].equal_mod(fhat, 13)
    # u-component consistency: gauge (2,1) entry = w^3 fhat'
    assert pd.gauge[1, 0].equal_mod(fhat.derivative().shift_up(3), 13)


def test_formal_fundamental_gamma_zero_is_exactly_trivial():
    fhat, ghat = formal_fundamental(0, 12)
    assert fhat == USeries.constant(1, trunc=12)
    assert ghat == USeries.monomial(1, 1, trunc=12)


def test_second_solution_solves_ode():
    # ghat * w^-1 * exp(-2i/(3 w^3)) is a formal solution: after dividing
    # the exponential out, the Laurent-coefficient residual must vanish.
    gamma = 1
    fhat, ghat = formal_fundamental(gamma, 14)
    ode = linear_family(gamma, trunc=18)
    P, Q = ode.first_order_coeffs()
    gt = ULaurent(ghat, 1)                      # ghat / w
    p_exp = ULaurent.monomial(-4, TWO_I, trunc=18)   # (e^...)'/e^... = 2i w^-4
    lhs = (gt.derivative().derivative()
           + gt.derivative() * p_exp * 2
           + gt * (p_exp.derivative() + p_exp * p_exp))
    rhs = P * (gt.derivative() + gt * p_exp) + Q * gt
    assert (lhs - rhs).truncate_abs(7).is_zero()


def test_gauge_chi_tau_shapes():
    for gamma in (1, 5, Fraction(-2, 3)):
        fhat, ghat = formal_fundamental(gamma, 14)
        g = gauge_chi_tau(fhat, ghat)
        assert g.f.coeff(0) == ONE
        dev = g.g - USeries.monomial(1, 1, "w", g.g.trunc)
        assert dev.is_zero() or dev.order() >= 5
        assert g.normalized_class_order() >= 4
    # identity data gives the identity gauge
    fhat = USeries.constant(1, trunc=12)
    ghat = USeries.monomial(1, 1, trunc=12)
    assert gauge_chi_tau(fhat, ghat).is_identity()


def test_tau_deviation_order_exactly_five():
    fhat, ghat = formal_fundamental(1, 14)
    g = gauge_chi_tau(fhat, ghat)
    assert (g.g - USeries.monomial(1, 1, "w", g.g.trunc)).order() == 5


def test_reversion_and_compose():
    rng = random.Random(5)
    for _ in range(6):
        g = USeries("w", 14, {1: 1, **{d: rnd_fraction(rng) for d in range(2, 6)}})
        h = reversion(g)
        assert g.eval_at(h).equal_mod(USeries.monomial(1, 1, trunc=14))
        assert h.eval_at(g).equal_mod(USeries.monomial(1, 1, trunc=14))


def test_gauge_group_laws():
    rng = random.Random(6)
    def rand_gauge():
        f = USeries("w", 12, {0: 1, **{d: rnd_fraction(rng) for d in (1, 2, 3)}})
        g = USeries("w", 12, {1: 1, **{d: rnd_fraction(rng) for d in (2, 3)}})
        return ScalarGauge(f, g)
    for _ in range(4):
        F, Gg = rand_gauge(), rand_gauge()
        FGinv = F.compose(Gg).inverse()
        GinvFinv = Gg.inverse().compose(F.inverse())
        assert FGinv.f.equal_mod(GinvFinv.f, 10)
        assert FGinv.g.equal_mod(GinvFinv.g, 10)
        Fid = F.compose(F.inverse())
        assert Fid.f.equal_mod(USeries.constant(1, trunc=10), 10)
        assert Fid.g.equal_mod(USeries.monomial(1, 1, trunc=10), 10)


def test_transform_identity_and_scaling():
    ode = linear_family(1, trunc=16)
    ident = ScalarGauge.identity("w", 16)
    moved = transform_ode_by_gauge(ode, ident, target=ode)
    assert moved.matches_target()
    # (z, 2w) preserves the flat ODE
    z = USeries.zero(trunc=16)
    flat = P0Ode(1, z, z, z, z, z, z)
    doubler = ScalarGauge(USeries.constant(1, trunc=16),
                          USeries.monomial(1, 2, trunc=16))
    moved = transform_ode_by_gauge(flat, doubler, target=flat)
    assert moved.matches_target()


def test_transform_functoriality():
    ode = linear_family(1, trunc=16)
    f1 = ScalarGauge(USeries("w", 16, {0: 1, 2: Fraction(1, 2)}),
                     USeries("w", 16, {1: 1, 3: Fraction(-1, 3)}))
    f2 = ScalarGauge(USeries("w", 16, {0: 1, 1: Fraction(1, 3)}),
                     USeries("w", 16, {1: 1, 2: Fraction(1, 4)}))
    once = transform_ode_by_gauge(ode, f2)
    # chain: pulling back along f2 then f1 equals pulling along f2 o f1
    mid = _as_linear_ode(once, 16)
    twice = transform_ode_by_gauge(mid, f1)
    composed = transform_ode_by_gauge(ode, f2.compose(f1))
    assert (twice.P - composed.P).truncate_abs(8).is_zero()
    assert (twice.Q - composed.Q).truncate_abs(8).is_zero()


def _as_linear_ode(moved, trunc):
    m = max(moved.P.pole, 1)
    m = max(m, (moved.Q.pole + 1) // 2)
    B = (moved.P * ULaurent.monomial(m, 1, trunc=trunc)).body
    E = (moved.Q * ULaurent.monomial(2 * m, 1, trunc=trunc)).body
    assert (moved.P * ULaurent.monomial(m, 1, trunc=trunc)).pole == 0
    assert (moved.Q * ULaurent.monomial(2 * m, 1, trunc=trunc)).pole == 0
    z = USeries.zero(trunc=B.trunc)
    return P0Ode(m, z, B, z, z, E, z)


def test_gauge_straightens_family_to_base():
    for gamma in (1, Fraction(-2, 3)):
        fhat, ghat = formal_fundamental(gamma, 16)
        gau = gauge_chi_tau(fhat, ghat)
        target = linear_family(gamma, trunc=20)
        base = linear_family(0, trunc=20)
        moved = transform_ode_by_gauge(base, gau, target=target)
        assert moved.matches_target()


def test_riccati_witnesses():
    E0 = linear_family(0, trunc=16)
    E1 = linear_family(1, trunc=16)
    p = ULaurent.monomial(-4, TWO_I, trunc=16)
    assert riccati_check(E0, p).ok
    rep = riccati_check(E1, p)
    assert not rep.ok
    assert rep.residual.pole == 4
    assert rep.residual.body.equal_mod(USeries.constant(1, trunc=16))
    zero_witness = ULaurent.zero(trunc=16)
    assert riccati_check(E0, zero_witness).ok    # the constant solution


def test_divergence_certificate():
    rep = divergence_report(1, 60)
    assert rep.coeffs[1] == G(0, Fraction(1, 2))
    assert rep.coeffs[2] == G(Fraction(-1, 8))
    assert rep.certificate_ok and rep.min_margin >= 1
    rep2 = divergence_report(Fraction(-2, 3), 60)
    assert rep2.certificate_ok
    with pytest.raises(DomainError):
        divergence_report(0, 60)
    with pytest.raises(DomainError):
        divergence_report(1, 6)


def test_divergence_parity_reality():
    # for real parameters the solution coefficients alternate between
    # real (even index) and purely imaginary (odd index)
    for gamma in (1, Fraction(5, 2)):
        a = formal_solution_coeffs(gamma, 40)
        for k, q in enumerate(a):
            assert q.im == 0 if k % 2 == 0 else q.re == 0


def test_monodromy_trivial_family():
    for gamma in (0, 1, 5):
        rep = monodromy_at_infinity(to_system(linear_family(gamma, trunc=16)))
        assert rep.trivial
        assert rep.eigenvalues == (G(0), G(1))
        assert rep.obstructions == ()
        nf = rep.normal_form
        assert nf.pole == 1
        assert nf.A[0, 0].is_zero() and nf.A[0, 1].is_zero() \
            and nf.A[1, 0].is_zero()
        assert nf.A[1, 1].equal_mod(USeries.constant(1, "t", 16), rep.order)


def test_companion_gauge_basics():
    ident = ScalarGauge.identity("w", 14)
    assert companion_gauge(ident, 3).is_identity()
    F = ScalarGauge(USeries.constant(1, trunc=14), USeries.monomial(1, 2, trunc=14))
    Gc = companion_gauge(F, 1)
    assert Gc.f.equal_mod(USeries.constant(1, trunc=12), 10)
    assert Gc.g.equal_mod(USeries.monomial(1, 2, trunc=12), 10)


def _twin_equations_hold(F, Gc, m, order):
    Fi, Gi = F.inverse(), Gc.inverse()
    f, g = Fi.f, Fi.g
    lam, mu = Gi.f, Gi.g
    if not g.equal_mod(mu, order):
        return False
    lhs = g.derivative().shift_up(m)
    rhs = mu.pow_int(m) * f * lam
    return (lhs - rhs).truncate(order).is_zero()


def test_companion_gauge_random(rng):
    for trial in range(10):
        m = rng.choice((1, 2, 3, 4))
        f = USeries("w", 14, {0: 1, **{d: rnd_fraction(rng) for d in (1, 2, 4)}})
        g = USeries("w", 14, {1: 1, **{d: rnd_fraction(rng)
                                       for d in (m + 1, m + 2)}})
        F = ScalarGauge(f, g)
        Gc = companion_gauge(F, m)
        assert _twin_equations_hold(F, Gc, m, 10)
        back = companion_gauge(Gc, m)
        assert back.f.equal_mod(F.f, 9) and back.g.equal_mod(F.g, 9)


def test_companion_of_family_gauge_is_conjugate():
    fhat, ghat = formal_fundamental(1, 16)
    F = gauge_chi_tau(fhat, ghat)
    Gc = companion_gauge(F, 4)
    assert Gc.f.equal_mod(F.f.conjugate(), Gc.f.trunc - 1)
    assert Gc.g.equal_mod(F.g.conjugate(), Gc.g.trunc - 1)
