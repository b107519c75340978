"""Admissible Segre families: the parametric Cauchy problem and real structure.

A family  w = eta * exp(s * i * eta^(m-1) * phi(z, xi, eta))  with
s = +-1 and phi = z*xi + sum_{k,l>=2} phi_kl(eta) z^k xi^l is solved
from the inverse ODE of a validated sextuple by Picard iteration on the
integrated Cauchy problem; each sweep extends the correct z-jet by at
least one order, so truncs[0] - 2 sweeps suffice.

Variable naming follows the family convention: the second and third
TriSeries variables are the antiholomorphic parameters.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError, InternalInconsistencyError
from .odes import P0Ode, validate_p0
from .scalars import GaussRational, I
from .series import TriSeries, USeries

PHI_VARS = ("z", "xi", "eta")


@dataclass(frozen=True)
class AdmissiblePhi:
    """Solved family datum phi with its order m and exponent sign."""

    m: int
    sign: int
    phi: TriSeries

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise DomainError("sign must be +1 or -1")

    @property
    def truncs(self):
        return self.phi.truncs

    def slice(self, k, l) -> USeries:
        return self.phi.slice_eta(k, l, var="w")

    def check_admissible(self):
        """Enforce the normalization: phi = z*xi + sum_{k,l>=2} phi_kl z^k xi^l."""
        tz, tx, _ = self.phi.truncs
        for (k, l, j), q in self.phi.terms():
            if k == 1 and l == 1 and j == 0:
                if q != GaussRational(1):
                    raise InternalInconsistencyError("(1,1) slice must be 1")
                continue
            if k < 2 or l < 2:
                raise InternalInconsistencyError(
                    f"admissibility violated at monomial {(k, l, j)}")
        if tz >= 2 and tx >= 2 and self.phi.coeff(1, 1, 0) != GaussRational(1):
            raise InternalInconsistencyError("missing z*xi leading term")

    def family(self) -> TriSeries:
        """The graph series w = eta * exp(sign*i*eta^(m-1)*phi)."""
        psi = self.phi.mul_monomial(0, 0, self.m - 1) * (I * self.sign)
        return psi.exp().mul_monomial(0, 0, 1)


@dataclass(frozen=True)
class RealStructureData:
    """Classification datum (a, b real series; c complex; order m)."""

    a: USeries
    b: USeries
    c: USeries
    m: int

    def validate(self):
        if self.m < 1:
            raise DomainError("m must be a positive integer")
        if not self.a.is_real():
            raise DomainError("series a must have real coefficients")
        if not self.b.is_real():
            raise DomainError("series b must have real coefficients")


def solve_phi(ode: P0Ode, m: int, sign: int = 1,
              truncs=(5, 5, 12)) -> AdmissiblePhi:
    """Unique admissible family associated with a validated sextuple.

    Solves the second-order Cauchy problem equivalent to substituting
    the family into the inverse ODE, with phi(0) = 0 and the z-slope
    pinned to xi.  Negative-sign families are obtained from the
    positive family of the conjugated ODE (single code path).
    """
    bad = validate_p0(ode)
    if bad:
        raise DomainError("solve_phi needs a valid sextuple: "
                          + "; ".join(map(str, bad)))
    if m < ode.m:
        raise DomainError(f"family order {m} below ODE order {ode.m}")
    if sign == -1:
        pos = solve_phi(ode.conjugate(), m, 1, truncs)
        return AdmissiblePhi(m, -1, pos.phi.conjugate())

    ode = ode.rescale_order(m)
    tz, tx, te = truncs
    A, B, C, D, E, F = (getattr(ode, n) for n in ("A", "B", "C", "D", "E", "F"))

    zxi = TriSeries.monomial(1, 1, 0, 1, PHI_VARS, truncs)
    phi = zxi
    for _ in range(max(tz - 1, 1)):
        rhs = _findphi_rhs(phi, m, A, B, C, D, E, F)
        new = zxi + rhs.integrate_z(2).truncate(truncs)
        if new == phi:
            break
        phi = new

    result = AdmissiblePhi(m, 1, phi)
    result.check_admissible()
    return result


def _findphi_rhs(phi, m, A, B, C, D, E, F):
    """Right-hand side of the solved-for second z-derivative of phi."""
    truncs = phi.truncs
    psi = phi.mul_monomial(0, 0, m - 1) * I
    exppsi = psi.exp()
    W = exppsi.mul_monomial(0, 0, 1)           # eta * e^(i eta^(m-1) phi)
    powers = _power_table(W)

    phid = phi.derivative(0).truncate(truncs)
    phid2 = phid * phid
    phid3 = phid2 * phid

    zmono = TriSeries.monomial(1, 0, 0, 1, PHI_VARS, truncs)
    eta_m1 = TriSeries.monomial(0, 0, m - 1, 1, PHI_VARS, truncs)

    lin = _eval_with_table(A, powers, truncs) * zmono + _eval_with_table(B, powers, truncs)
    term1 = (eta_m1 + lin * _scaled_exp(psi, 1 - m)) * phid2 * (-I)

    if C.is_zero() and D.is_zero() and E.is_zero() and F.is_zero():
        return term1
    cubic = (_eval_with_table(C, powers, truncs) * zmono.pow_int(3)
             + _eval_with_table(D, powers, truncs) * zmono.pow_int(2)
             + _eval_with_table(E, powers, truncs) * zmono
             + _eval_with_table(F, powers, truncs))
    term2 = cubic * _scaled_exp(psi, 2 - 2 * m) * phid3
    return term1 + term2


def _scaled_exp(psi, k):
    if k == 0:
        return TriSeries.constant(1, psi.vars, psi.truncs)
    return (psi * k).exp()


def _power_table(W):
    """[W^0, W^1, ...] until the power vanishes in the ring."""
    table = [TriSeries.constant(1, W.vars, W.truncs)]
    cur = table[0]
    while True:
        cur = cur * W
        if cur.is_zero():
            return table
        table.append(cur)


def _eval_with_table(series: USeries, powers, truncs):
    """series(W) using a precomputed power table of W."""
    acc = TriSeries.zero(PHI_VARS, truncs)
    for d, q in series.terms():
        if d >= len(powers):
            break
        acc = acc + powers[d] * q
    return acc


def recover_ode(phi: AdmissiblePhi):
    """(A, B, E, F) read off the low slices of an admissible family.

    Together with the two structural relations this pins the whole
    sextuple; ``to_ode`` completes C and D accordingly.
    """
    m, s = phi.m, phi.sign
    p22, p23 = phi.slice(2, 2), phi.slice(2, 3)
    p32, p33 = phi.slice(3, 2), phi.slice(3, 3)
    F = p23 * 2
    A = p32 * (6 * I * s)
    B = p22 * (2 * I * s) - USeries.monomial(m - 1, 1, "w", p22.trunc)
    E = (p33 * 6
         + p22.shift_up(m - 1) * (2 * I * s * (m - 1))
         - p22 * p22 * 8
         - p22.derivative().shift_up(m) * (2 * I * s))
    return A, B, E, F


def recovered_to_ode(phi: AdmissiblePhi) -> P0Ode:
    A, B, E, F = recover_ode(phi)
    trunc = min(x.trunc for x in (A, B, E, F))
    C = (A * A * Fraction(-1, 9)).truncate(trunc)
    D = ((A.derivative().shift_up(phi.m) - A.shift_up(phi.m - 1) * phi.m
          - A * B) * Fraction(1, 3)).truncate(trunc)
    return P0Ode(phi.m, A.truncate(trunc), B.truncate(trunc), C, D,
                 E.truncate(trunc), F.truncate(trunc))


def dual_phi_lowjet(phi: AdmissiblePhi):
    """The four lowest dual slices, from the closed-form exchange relations.

    The w^(2m-2) structural term enters with a minus sign: that choice
    (and only that choice) makes the four relations consistent with the
    defining equation of the dual family and with the real-structure
    classification, as the cross-checks against ``dual_phi_full``
    enforce in the test suite.
    """
    if phi.sign != 1:
        raise DomainError("dual_phi_lowjet expects a positive family")
    m = phi.m
    p22, p33 = phi.slice(2, 2), phi.slice(3, 3)
    trunc = p22.trunc
    s22 = p22 - USeries.monomial(m - 1, I * (m - 1), "w", trunc)
    s32 = phi.slice(2, 3)
    s23 = phi.slice(3, 2)
    s33 = (p33
           - USeries.monomial(2 * m - 2, GaussRational(Fraction(3, 2)) * (m - 1) ** 2,
                              "w", trunc)
           - p22.shift_up(m - 1) * (2 * I * (m - 1))
           - p22.derivative().shift_up(m) * I)
    return {(2, 2): s22, (2, 3): s23, (3, 2): s32,
            (3, 3): s33.truncate(min(s33.trunc, trunc))}


def dual_phi_full(phi: AdmissiblePhi) -> AdmissiblePhi:
    """Dual family: swap graph variables against parameters and re-solve.

    Solves  eta = w * exp(s*i*w^(m-1)*phi(xi, z, w))  for w by fixed-point
    iteration in the series ring; every sweep extends the correct jet by
    two (z, xi)-orders.  The result carries the opposite sign and loses m
    orders of eta-truncation (one to the leading factor, m-1 to the
    exponent normalization).
    """
    m, s = phi.m, phi.sign
    truncs = phi.phi.truncs
    swapped = phi.phi.swap_zx().relabel(PHI_VARS)  # phi(xi, z, .) as a series
    eta = TriSeries.monomial(0, 0, 1, 1, PHI_VARS, truncs)
    w = eta
    sweeps = (truncs[0] + truncs[1]) // 2 + 2
    for _ in range(sweeps):
        phi_at_w = swapped.subst_eta(w)
        expo = (phi_at_w * w.pow_int(m - 1)) * (-I * s)
        new = (expo.exp()).mul_monomial(0, 0, 1)
        if new == w:
            break
        w = new
    else:
        raise InternalInconsistencyError("dual fixed point did not stabilize")

    unit = w.divide_eta(1)
    logu = unit.log()
    star = logu.divide_eta(m - 1) * (1 / (-I * s))
    out = AdmissiblePhi(m, -s, star)
    out.check_admissible()
    return out


@dataclass(frozen=True)
class SliceMismatch:
    slice: tuple
    first_degree: int
    difference: USeries


@dataclass(frozen=True)
class RealityReport:
    ok: bool
    mismatches: tuple
    checked_order: int

    def __str__(self):
        if self.ok:
            return f"real structure confirmed to order {self.checked_order}"
        what = ", ".join(f"{m.slice} at degree {m.first_degree}"
                         for m in self.mismatches)
        return f"real structure fails on slices: {what}"


def reality_check(ode: P0Ode, m: int, sign: int = 1,
                  truncs=(5, 5, 12)) -> RealityReport:
    """Dual-equals-conjugate criterion on the four decisive slices.

    The family has a real structure iff the conjugated family is also a
    dual one, which for admissible families reduces to the four slice
    identities; mismatching slices are reported with their first failing
    degree in the coefficient variable.
    """
    if sign == -1:
        return reality_check(ode.conjugate(), m, 1, truncs)
    phi = solve_phi(ode, m, 1, truncs)
    dual = dual_phi_lowjet(phi)
    mism = []
    checked = None
    for key, dser in sorted(dual.items()):
        cser = phi.slice(*key).conjugate()
        diff = cser - dser
        checked = diff.trunc if checked is None else min(checked, diff.trunc)
        if not diff.is_zero():
            mism.append(SliceMismatch(key, diff.order(), diff))
    return RealityReport(not mism, tuple(mism), checked)


def build_real(data: RealStructureData, trunc=None) -> P0Ode:
    """Sextuple with an m-positive real structure from (a, b, c, m).

    A = 3c, B = 2ia - m w^(m-1), C = -A^2/9, D = w^m c' - 2iac,
    E = b + i w^m a', F = i * conj(c).  The C entry follows the
    structural relation (the alternative reading conj(c)^2 differs only
    in sign conventions when c is nonzero and never occurs with c = 0).
    """
    data.validate()
    a, b, c, m = data.a, data.b, data.c, data.m
    if trunc is None:
        trunc = min(a.trunc, b.trunc, c.trunc)
    a, b, c = a.truncate(trunc), b.truncate(trunc), c.truncate(trunc)
    A = c * 3
    B = a * (2 * I) - USeries.monomial(m - 1, m, "w", trunc)
    C = A * A * Fraction(-1, 9)
    D = c.derivative().shift_up(m).truncate(trunc) - a * c * (2 * I)
    E = b + a.derivative().shift_up(m).truncate(trunc) * I
    F = c.conjugate() * I
    ode = P0Ode(m, A, B, C, D, E, F)
    assert not validate_p0(ode)
    return ode


@dataclass(frozen=True)
class ExtractFailure:
    condition: str
    witness: USeries

    def __str__(self):
        return f"extract_real: {self.condition} (witness {self.witness!r})"


def extract_real(ode: P0Ode, truncs_margin=0):
    """Invert the real-structure formulas; data or failure diagnostics.

    Returns (RealStructureData, []) on success, (None, failures) with
    the violated conditions otherwise.
    """
    bad = validate_p0(ode)
    if bad:
        return None, [ExtractFailure(str(v), getattr(ode, "C")) for v in bad]
    m = ode.m
    failures = []
    c = ode.A * Fraction(1, 3)
    a = (ode.B + USeries.monomial(m - 1, m, "w", ode.trunc)) * (1 / (2 * I))
    if not a.is_real():
        failures.append(ExtractFailure("a = (B + m w^(m-1))/(2i) must be real",
                                       a.imag_part()))
    b = ode.E - a.derivative().shift_up(m).truncate(ode.trunc) * I
    if not b.is_real():
        failures.append(ExtractFailure("b = E - i w^m a' must be real",
                                       b.imag_part()))
    rF = ode.F - c.conjugate() * I
    if not rF.is_zero():
        failures.append(ExtractFailure("F = i conj(c)", rF))
    rD = ode.D - (c.derivative().shift_up(m).truncate(ode.trunc)
                  - a * c * (2 * I))
    if not rD.is_zero():
        failures.append(ExtractFailure("D = w^m c' - 2iac", rD))
    if failures:
        return None, failures
    return RealStructureData(a=a.truncate(b.trunc), b=b, c=c.truncate(b.trunc),
                             m=m), []


def family_residual(ode: P0Ode, phi: AdmissiblePhi) -> TriSeries:
    """Inverse-ODE residual of the solved family, cleared of denominators.

    Substitutes W = eta e^(s i eta^(m-1) phi) into the interchanged ODE
    and multiplies through by W^(2m); the returned series is zero
    exactly when the family solves the inverse ODE modulo truncation
    (certified up to 2m lost eta-orders from the clearing factor).
    """
    m = phi.m
    ode = ode.rescale_order(m)
    truncs = phi.phi.truncs
    W = phi.family()
    powers = _power_table(W)
    Wp = W.derivative(0).truncate(truncs)
    Wpp = Wp.derivative(0).truncate(truncs)
    Wm = W.pow_int(m)
    W2m = Wm * Wm
    zmono = TriSeries.monomial(1, 0, 0, 1, PHI_VARS, truncs)

    lin = (_eval_with_table(ode.A, powers, truncs) * zmono
           + _eval_with_table(ode.B, powers, truncs))
    cubic = (_eval_with_table(ode.C, powers, truncs) * zmono.pow_int(3)
             + _eval_with_table(ode.D, powers, truncs) * zmono.pow_int(2)
             + _eval_with_table(ode.E, powers, truncs) * zmono
             + _eval_with_table(ode.F, powers, truncs))
    return W2m * Wpp + Wm * lin * Wp * Wp + cubic * Wp * Wp * Wp
