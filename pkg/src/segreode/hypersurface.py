"""Defining-series jets of nonminimal hypersurfaces and tangency checks.

A solved admissible family becomes a hypersurface jet by identifying
the antiholomorphic parameters with the conjugate coordinates:
w = rho(z, zbar, wbar) = wbar * exp(s*i*wbar^(m-1) * phi(z, zbar, wbar)).
Everything here stays in the exact trivariate ring; the real defining
equation is never formed.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError
from .scalars import GaussRational
from .segre import AdmissiblePhi
from .series import TriSeries

HYPER_VARS = ("z", "zbar", "wbar")


@dataclass(frozen=True)
class HyperJet:
    m: int
    sign: int
    rho: TriSeries

    @property
    def truncs(self):
        return self.rho.truncs

    def signature_ok(self):
        """Leading shape wbar + s*i*wbar^m z zbar + O(z^2 zbar^2)."""
        if self.rho.coeff(0, 0, 1) != GaussRational(1):
            return False
        want = GaussRational(0, 1) * self.sign
        return self.rho.coeff(1, 1, self.m) == want


def build_hypersurface(phi: AdmissiblePhi) -> HyperJet:
    """Expand the defining series of the hypersurface behind a family."""
    phi.check_admissible()
    rho = phi.family().relabel(HYPER_VARS)
    jet = HyperJet(phi.m, phi.sign, rho)
    if not jet.signature_ok():
        raise DomainError("family did not produce an admissible defining series")
    return jet


@dataclass(frozen=True)
class RealityWitness:
    monomial: tuple
    value: GaussRational


@dataclass(frozen=True)
class RealityResult:
    ok: bool
    witness: RealityWitness
    truncs: tuple

    def __str__(self):
        if self.ok:
            return f"reality condition holds modulo truncations {self.truncs}"
        (k, l, j), v = self.witness.monomial, self.witness.value
        return (f"reality fails first at z^{k} zbar^{l} w^{j}"
                f" with coefficient {v}")


def reality_verify(jet: HyperJet) -> RealityResult:
    """Functional identity w = rho(z, zbar, conj(rho)(zbar, z, w)).

    Composes the defining series with its coefficient-conjugated,
    argument-swapped self; the result must be the bare monomial w.
    Composition depth eats nothing in the z/zbar axes and is exact in
    the third axis; first failing monomial (graded-lex order) is the
    witness.
    """
    rho = jet.rho
    inner = rho.conjugate().swap_zx().relabel(HYPER_VARS)
    composed = rho.subst_eta(inner)
    w_mono = TriSeries.monomial(0, 0, 1, 1, HYPER_VARS, composed.truncs)
    diff = composed - w_mono
    if diff.is_zero():
        return RealityResult(True, None, composed.truncs)
    key = min(diff.coeffs, key=lambda kk: (sum(_unpack3(kk)), _unpack3(kk)))
    k, l, j = _unpack3(key)
    return RealityResult(False, RealityWitness((k, l, j), diff.coeff(k, l, j)),
                         composed.truncs)


def _unpack3(key):
    from .series import unpack
    return unpack(key)


class BiPoly:
    """Polynomial in (z, w) with Gaussian-rational coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, terms=None):
        self.coeffs = {}
        for (i, j), q in (terms or {}).items():
            q = GaussRational(0) + q
            if not q.is_zero():
                self.coeffs[(i, j)] = q

    @classmethod
    def zero(cls):
        return cls()

    def __add__(self, other):
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            s = out.get(k, GaussRational(0)) + v
            if s.is_zero():
                out.pop(k, None)
            else:
                out[k] = s
        return BiPoly(out)

    def __sub__(self, other):
        return self + other.scale(GaussRational(-1))

    def scale(self, q):
        return BiPoly({k: v * q for k, v in self.coeffs.items()})

    def __mul__(self, other):
        out = {}
        for (i1, j1), v1 in self.coeffs.items():
            for (i2, j2), v2 in other.coeffs.items():
                k = (i1 + i2, j1 + j2)
                out[k] = out.get(k, GaussRational(0)) + v1 * v2
        return BiPoly(out)

    def d_z(self):
        return BiPoly({(i - 1, j): v * i for (i, j), v in self.coeffs.items() if i})

    def d_w(self):
        return BiPoly({(i, j - 1): v * j for (i, j), v in self.coeffs.items() if j})

    def conjugate(self):
        return BiPoly({k: v.conjugate() for k, v in self.coeffs.items()})

    def is_zero(self):
        return not self.coeffs

    def __eq__(self, other):
        return isinstance(other, BiPoly) and self.coeffs == other.coeffs

    __hash__ = None

    def max_w_degree(self):
        return max((j for _, j in self.coeffs), default=0)

    def eval_series(self, zfac: TriSeries, wfac: TriSeries) -> TriSeries:
        """Evaluate with z -> zfac, w -> wfac (TriSeries substitution)."""
        wpow = {0: zfac.ring_one()}
        for j in range(1, self.max_w_degree() + 1):
            wpow[j] = wpow[j - 1] * wfac
        acc = TriSeries.zero(zfac.vars, zfac.truncs)
        for (i, j), q in sorted(self.coeffs.items()):
            acc = acc + zfac.pow_int(i) * wpow[j] * q
        return acc

    def __repr__(self):
        if not self.coeffs:
            return "0"
        bits = []
        for (i, j), q in sorted(self.coeffs.items()):
            mono = "*".join(s for s in
                            ("z" if i == 1 else f"z^{i}" if i else "",
                             "w" if j == 1 else f"w^{j}" if j else "") if s)
            bits.append(q.as_factor_str() + ("*" + mono if mono else ""))
        return " + ".join(bits)


@dataclass(frozen=True)
class HoloField:
    """Holomorphic vector field fz d/dz + fw d/dw with polynomial parts."""

    fz: BiPoly
    fw: BiPoly

    def __add__(self, other):
        return HoloField(self.fz + other.fz, self.fw + other.fw)

    def scale(self, q):
        return HoloField(self.fz.scale(q), self.fw.scale(q))

    def apply(self, h: BiPoly) -> BiPoly:
        return self.fz * h.d_z() + self.fw * h.d_w()

    def commutator(self, other: "HoloField") -> "HoloField":
        return HoloField(self.apply(other.fz) - other.apply(self.fz),
                         self.apply(other.fw) - other.apply(self.fw))


@dataclass(frozen=True)
class TangencyResult:
    ok: bool
    residual: TriSeries

    def residual_order(self):
        return self.residual.min_total_order()

    def __str__(self):
        if self.ok:
            return "field is tangent modulo truncation"
        return f"tangency fails at total order {self.residual_order()}"


def tangency_check(jet: HyperJet, X: HoloField) -> TangencyResult:
    """Real-part tangency of X along the hypersurface jet.

    Applies X + conj(X) to the complex defining function w - rho and
    eliminates w through the graph itself; the restricted series must
    vanish.  Linear over real scalars, and closed under commutators
    (at two fewer orders), which the property tests exercise.
    """
    rho = jet.rho
    truncs = rho.truncs
    z_fac = TriSeries.monomial(1, 0, 0, 1, HYPER_VARS, truncs)
    zb_fac = TriSeries.monomial(0, 1, 0, 1, HYPER_VARS, truncs)
    wb_fac = TriSeries.monomial(0, 0, 1, 1, HYPER_VARS, truncs)

    rho_z = rho.derivative(0).truncate(truncs)
    rho_zb = rho.derivative(1).truncate(truncs)
    rho_wb = rho.derivative(2).truncate(truncs)

    fz_on = X.fz.eval_series(z_fac, rho)
    fw_on = X.fw.eval_series(z_fac, rho)
    fzbar = X.fz.conjugate().eval_series(zb_fac, wb_fac)
    fwbar = X.fw.conjugate().eval_series(zb_fac, wb_fac)

    residual = fw_on - fz_on * rho_z - fzbar * rho_zb - fwbar * rho_wb
    return TangencyResult(residual.is_zero(), residual)


def sphere_pushforward_fields():
    """The four polynomial fields tangent to the order-four model.

    Real scalar multiples of the sphere algebra's push-forwards through
    (z, w) -> (sqrt(2) z, exp(-2i/(3 w^3))): the rotations i z d/dz and
    2 w^4 d/dw, and the two quadratic fields, scaled by sqrt(2) to stay
    Gaussian-rational (tangency is preserved under real scaling).  The
    d/dw components carry w^4 / (2i) from inverting the derivative of
    the exponential coordinate.
    """
    i1 = GaussRational(0, 1)
    X1 = HoloField(BiPoly({(1, 0): i1}), BiPoly())
    X2 = HoloField(BiPoly(), BiPoly({(0, 4): GaussRational(2)}))
    X5 = HoloField(BiPoly({(0, 0): GaussRational(1), (2, 0): GaussRational(-2)}),
                   BiPoly({(1, 4): i1}))
    X6 = HoloField(BiPoly({(0, 0): i1, (2, 0): GaussRational(0, 2)}),
                   BiPoly({(1, 4): GaussRational(1)}))
    return X1, X2, X5, X6
