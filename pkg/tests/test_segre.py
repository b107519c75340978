from fractions import Fraction

import pytest

from segreode.errors import DomainError, InternalInconsistencyError
from segreode.odes import P0Ode, validate_p0
from segreode.scalars import GaussRational, I
from segreode.segre import (AdmissiblePhi, RealStructureData, build_real,
                            dual_phi_full, dual_phi_lowjet, extract_real,
                            family_residual, reality_check, recover_ode,
                            recovered_to_ode, solve_phi)
from segreode.series import TriSeries, USeries

T = 12
TRUNCS = (5, 5, 12)


def family_data(gamma, trunc=T):
    return RealStructureData(a=USeries.constant(1, trunc=trunc),
                             b=USeries(trunc=trunc,
                                       terms={4: GaussRational(Fraction(gamma))}),
                             c=USeries.zero(trunc=trunc), m=4)


def test_build_real_matches_closed_form():
    ode = build_real(family_data(1))
    assert ode.A.is_zero() and ode.C.is_zero() and ode.D.is_zero() \
        and ode.F.is_zero()
    assert ode.B == USeries(trunc=T, terms={0: GaussRational(0, 2),
                                            3: GaussRational(-4)})
    assert ode.E == USeries.monomial(4, 1, trunc=T)


def test_build_real_tiny_cases():
    z = USeries.zero(trunc=T)
    flat = build_real(RealStructureData(a=z, b=z, c=z, m=1))
    assert flat.B == USeries.constant(-1, trunc=T)
    for n in "ACDEF":
        assert getattr(flat, n).is_zero()
    one_a = build_real(RealStructureData(a=USeries.constant(1, trunc=T),
                                         b=z, c=z, m=1))
    assert one_a.B == USeries.constant(GaussRational(-1, 2), trunc=T)
    assert one_a.E.is_zero()


def test_build_real_rejects_complex_ab():
    z = USeries.zero(trunc=T)
    with pytest.raises(DomainError):
        build_real(RealStructureData(a=USeries.constant(I, trunc=T), b=z, c=z, m=1))


def test_solve_phi_model_slice():
    phi = solve_phi(build_real(family_data(1)), 4, 1, TRUNCS)
    want = USeries(trunc=T, terms={0: 1, 3: GaussRational(0, Fraction(3, 2))})
    assert phi.slice(2, 2) == want
    assert phi.phi.coeff(1, 1, 0) == GaussRational(1)


def test_solve_phi_flat():
    z = USeries.zero(trunc=T)
    flat = build_real(RealStructureData(a=z, b=z, c=z, m=1))
    phi = solve_phi(flat, 1, 1, TRUNCS)
    assert phi.phi == TriSeries.monomial(1, 1, 0, 1, ("z", "xi", "eta"), TRUNCS)
    assert family_residual(flat, phi).is_zero()


def test_solve_phi_low_slices_vanish(structure_samples):
    for data in structure_samples[:6]:
        phi = solve_phi(build_real(data), data.m, 1, TRUNCS)
        for (k, l, j), q in phi.phi.terms():
            assert (k == 1 and l == 1 and j == 0) or (k >= 2 and l >= 2)


def test_solve_phi_rejects_invalid():
    ode = build_real(family_data(1))
    bad = P0Ode(4, USeries.monomial(1, 1, trunc=T), ode.B, ode.C, ode.D,
                ode.E, ode.F)
    assert validate_p0(bad)
    with pytest.raises(DomainError):
        solve_phi(bad, 4, 1, TRUNCS)
    with pytest.raises(DomainError):
        solve_phi(ode, 2, 1, TRUNCS)


def test_solve_phi_negative_sign_is_conjugate_path():
    ode = build_real(family_data(1))
    neg = solve_phi(ode, 4, -1, TRUNCS)
    pos = solve_phi(ode.conjugate(), 4, 1, TRUNCS)
    assert neg.sign == -1
    assert neg.phi == pos.phi.conjugate()
    assert family_residual(ode, neg).is_zero()


def test_recover_roundtrip_model():
    ode = build_real(family_data(1))
    phi = solve_phi(ode, 4, 1, TRUNCS)
    A, B, E, F = recover_ode(phi)
    assert A.is_zero() and F.is_zero()
    assert B == ode.B
    assert E.equal_mod(ode.E)


def test_recover_flat_convention():
    phi = AdmissiblePhi(1, 1, TriSeries.monomial(1, 1, 0, 1,
                                                 ("z", "xi", "eta"), TRUNCS))
    A, B, E, F = recover_ode(phi)
    assert A.is_zero() and E.is_zero() and F.is_zero()
    assert B == USeries.constant(-1, trunc=T)


def test_roundtrip_random(structure_samples):
    for data in structure_samples[:8]:
        ode = build_real(data)
        phi = solve_phi(ode, data.m, 1, TRUNCS)
        rec = recovered_to_ode(phi)
        for n in "ABCDEF":
            assert getattr(rec, n).equal_mod(getattr(ode, n)), (n, data.m)


def test_family_residual_zero_random(structure_samples):
    for data in structure_samples[:8]:
        ode = build_real(data)
        phi = solve_phi(ode, data.m, 1, TRUNCS)
        assert family_residual(ode, phi).is_zero()


def test_dual_lowjet_model_and_m1():
    phi = solve_phi(build_real(family_data(1)), 4, 1, TRUNCS)
    low = dual_phi_lowjet(phi)
    assert low[(2, 2)] == USeries(trunc=T, terms={
        0: 1, 3: GaussRational(0, Fraction(-3, 2))})
    flat = AdmissiblePhi(1, 1, TriSeries.monomial(1, 1, 0, 1,
                                                  ("z", "xi", "eta"), TRUNCS))
    low1 = dual_phi_lowjet(flat)
    assert all(s.is_zero() for s in low1.values())


def test_dual_full_flat_m1():
    flat = AdmissiblePhi(1, 1, TriSeries.monomial(1, 1, 0, 1,
                                                  ("z", "xi", "eta"), TRUNCS))
    dual = dual_phi_full(flat)
    assert dual.sign == -1
    assert dual.phi == flat.phi.truncate(dual.phi.truncs)


def test_dual_full_involution_and_lowjet(structure_samples):
    for data in structure_samples[:5]:
        ode = build_real(data)
        phi = solve_phi(ode, data.m, 1, TRUNCS)
        dual = dual_phi_full(phi)
        assert dual.sign == -1
        low = dual_phi_lowjet(phi)
        for key, ser in low.items():
            got = dual.phi.slice_eta(*key, var="w")
            assert got.equal_mod(ser), (key, data.m)
        back = dual_phi_full(dual)
        assert back.sign == 1
        assert back.phi == phi.phi.truncate(back.phi.truncs)


def test_reality_check_passes_on_builds(structure_samples):
    for data in structure_samples[:6]:
        assert reality_check(build_real(data), data.m, truncs=TRUNCS).ok


def test_reality_check_negative_sign():
    ode = build_real(family_data(1))
    rep = reality_check(ode, 4, sign=-1, truncs=TRUNCS)
    assert rep.ok


def test_reality_detects_imaginary_perturbation():
    ode = build_real(family_data(1))
    pert = P0Ode(4, ode.A, ode.B, ode.C, ode.D,
                 ode.E + USeries.monomial(5, GaussRational(0, 1), trunc=T), ode.F)
    rep = reality_check(pert, 4, truncs=TRUNCS)
    assert not rep.ok
    assert (3, 3) in [m.slice for m in rep.mismatches]


def test_extract_real_roundtrip(structure_samples):
    for data in structure_samples[:8]:
        ode = build_real(data)
        got, failures = extract_real(ode)
        assert not failures
        assert got.m == data.m
        assert got.a.equal_mod(data.a)
        assert got.b.equal_mod(data.b)
        assert got.c.equal_mod(data.c)


def test_extract_real_detects_imaginary_gamma():
    data = RealStructureData(a=USeries.constant(1, trunc=T),
                             b=USeries.zero(trunc=T),
                             c=USeries.zero(trunc=T), m=4)
    ode = build_real(data)
    bad = P0Ode(4, ode.A, ode.B, ode.C, ode.D,
                USeries.monomial(4, I, trunc=T), ode.F)
    got, failures = extract_real(bad)
    assert got is None
    assert any("must be real" in f.condition for f in failures)


def test_admissibility_guard():
    bad = TriSeries(("z", "xi", "eta"), TRUNCS, {(1, 1, 0): 1, (2, 0, 0): 1})
    with pytest.raises(InternalInconsistencyError):
        AdmissiblePhi(4, 1, bad).check_admissible()


def test_reality_stable_under_real_scaling_of_b(structure_samples):
    data = structure_samples[1]
    scaled = RealStructureData(a=data.a, b=data.b * Fraction(2, 3),
                               c=data.c, m=data.m)
    assert reality_check(build_real(scaled), data.m, truncs=TRUNCS).ok
