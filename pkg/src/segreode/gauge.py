"""Formal machinery for the linear one-parameter family at order four.

Covers the first-order system form, degreewise Poincare-Dulac
normalization (irregular and Fuchsian flavors), the formal fundamental
pair (fhat, ghat), the scalar gauge built from it, exact transport of
linear ODEs under gauge maps, Riccati witnesses, the divergence
certificate for the unique formal solution, monodromy classification
through the Fuchsian point at infinity, and the coupled companion
gauge.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError, InternalInconsistencyError, StructureError
from .odes import P0Ode
from .scalars import GaussRational, I, gauss_sqrt_exact
from .segre import RealStructureData, build_real
from .series import ULaurent, USeries


class Mat2:
    """2x2 matrix of USeries sharing variable and truncation."""

    __slots__ = ("a",)

    def __init__(self, rows):
        self.a = tuple(tuple(r) for r in rows)
        if len(self.a) != 2 or any(len(r) != 2 for r in self.a):
            raise StructureError("Mat2 needs 2x2 entries")

    @classmethod
    def identity(cls, var="w", trunc=16):
        one = USeries.constant(1, var, trunc)
        zero = USeries.zero(var, trunc)
        return cls(((one, zero), (zero, one)))

    @classmethod
    def zero(cls, var="w", trunc=16):
        z = USeries.zero(var, trunc)
        return cls(((z, z), (z, z)))

    @classmethod
    def from_consts(cls, entries, var="w", trunc=16):
        return cls(tuple(tuple(USeries.constant(GaussRational(0) + e, var, trunc)
                               for e in row) for row in entries))

    def __getitem__(self, ij):
        return self.a[ij[0]][ij[1]]

    def __add__(self, other):
        return Mat2(tuple(tuple(self.a[i][j] + other.a[i][j] for j in range(2))
                          for i in range(2)))

    def __sub__(self, other):
        return Mat2(tuple(tuple(self.a[i][j] - other.a[i][j] for j in range(2))
                          for i in range(2)))

    def __mul__(self, other):
        if isinstance(other, Mat2):
            return Mat2(tuple(
                tuple(sum((self.a[i][k] * other.a[k][j] for k in range(2)),
                          start=self.a[i][0] * 0) for j in range(2))
                for i in range(2)))
        return Mat2(tuple(tuple(self.a[i][j] * other for j in range(2))
                          for i in range(2)))

    def map(self, fn):
        return Mat2(tuple(tuple(fn(e) for e in row) for row in self.a))

    def derivative(self):
        return self.map(lambda e: e.derivative())

    def truncate(self, n):
        return self.map(lambda e: e.truncate(n))

    def coeff_matrix(self, k):
        """Degree-k coefficients as a 2x2 tuple of GaussRational."""
        return tuple(tuple(self.a[i][j].coeff(k) for j in range(2))
                     for i in range(2))

    def det(self):
        return self.a[0][0] * self.a[1][1] - self.a[0][1] * self.a[1][0]

    def inverse(self):
        dinv = self.det().invert_unit()
        return Mat2(((self.a[1][1] * dinv, -self.a[0][1] * dinv),
                     (-self.a[1][0] * dinv, self.a[0][0] * dinv)))

    def is_zero(self):
        return all(e.is_zero() for row in self.a for e in row)

    def __eq__(self, other):
        if not isinstance(other, Mat2):
            return NotImplemented
        return self.a == other.a

    __hash__ = None

    def __repr__(self):
        return f"Mat2({self.a[0][0]!r}, {self.a[0][1]!r}; {self.a[1][0]!r}, {self.a[1][1]!r})"


@dataclass(frozen=True)
class LinSystem:
    """First-order system y' = w^(-pole) A(w) y."""

    pole: int
    A: Mat2

    @property
    def var(self):
        return self.A[0, 0].var

    def max_degree(self):
        degs = [max(e.coeffs, default=-1) for row in self.A.a for e in row]
        return max(degs)

    def normalized(self) -> "LinSystem":
        """Divide common w-powers out of the matrix to minimize the pole."""
        orders = [e.order() for row in self.A.a for e in row if not e.is_zero()]
        if not orders:
            return LinSystem(1, self.A)
        d = min(min(orders), self.pole - 1)
        if d <= 0:
            return self
        return LinSystem(self.pole - d, self.A.map(lambda e: e.divide_monomial(d)))


def to_system(ode: P0Ode) -> LinSystem:
    """Rewrite a linear sextuple as a first-order system via u = z' w^(m-1).

    The raw matrix is assembled at pole m+1 and then pole-minimized;
    for the order-four family this lands on pole 4 with the cubic
    matrix polynomial A0 + A1 w + A3 w^3.
    """
    if not ode.is_linear():
        raise DomainError("to_system expects a linear sextuple (A=C=D=F=0)")
    m, trunc, var = ode.m, ode.trunc, ode.var
    zero = USeries.zero(var, trunc)
    w2 = USeries.monomial(2, 1, var, trunc)
    lower_right = (ode.B.shift_up(1) + USeries.monomial(m, m - 1, var, trunc + 1)
                   ).truncate(trunc)
    raw = Mat2(((zero, w2), (ode.E, lower_right)))
    return LinSystem(m + 1, raw).normalized()


@dataclass(frozen=True)
class PDStep:
    kind: str          # "offdiag" | "diag"
    target_degree: int
    order: int         # degree of the elementary gauge factor
    matrix: tuple      # 2x2 GaussRational entries of the factor


@dataclass(frozen=True)
class PDResult:
    normal_form: LinSystem
    gauge: Mat2
    steps: tuple
    residues: tuple        # (degree, (d1, d2)) diagonal terms kept for k < pole
    obstructions: tuple    # Fuchsian resonant entries that could not be removed
    order: int

    def step_matrix(self, degree, kind="offdiag"):
        for s in self.steps:
            if s.target_degree == degree and s.kind == kind:
                return s.matrix
        return None


def poincare_dulac(sys: LinSystem, order: int) -> PDResult:
    """Degreewise normalization y = H(w) ynew with H(0) = I.

    Nonresonant irregular case (pole >= 2, distinct leading
    eigenvalues): off-diagonal degree-k terms die through the
    homological equation [A0, H_k] = -B_k; diagonal terms of degree
    k >= pole die through a lagged diagonal factor of order k-pole+1
    whose derivative term lands at degree k.  Degrees below the pole
    keep their diagonal parts: those are the formal residues.

    Fuchsian case (pole = 1): the derivative term acts at the same
    degree, the solvability divisor becomes lambda_i - lambda_j - k,
    and integer eigenvalue differences produce genuine resonances;
    nonzero resonant entries are reported as obstructions and left in
    the normal form.
    """
    lead = sys.A.coeff_matrix(0)
    if lead[0][1] or lead[1][0]:
        raise DomainError("leading matrix must be diagonal (diagonalize first)")
    lam = (lead[0][0], lead[1][1])
    p = sys.pole
    if p >= 2 and lam[0] == lam[1]:
        raise DomainError("irregular case needs distinct leading eigenvalues")

    var = sys.var
    trunc = min(e.trunc for row in sys.A.a for e in row)
    cur = sys.A
    gauge = Mat2.identity(var, trunc)
    steps, residues, obstructions = [], [], []

    for k in range(1, order + 1):
        B = cur.coeff_matrix(k)
        H = [[GaussRational(0), GaussRational(0)], [GaussRational(0), GaussRational(0)]]
        # off-diagonal (and, in the Fuchsian case, diagonal) homological solve
        for i in range(2):
            for j in range(2):
                div = lam[i] - lam[j] - (k if p == 1 else 0)
                if i == j and p != 1:
                    continue
                if div.is_zero():
                    if not B[i][j].is_zero():
                        obstructions.append((k, (i, j), B[i][j]))
                    continue
                H[i][j] = -B[i][j] / div
        if any(H[i][j] for i in range(2) for j in range(2)):
            cur, gauge = _apply_factor(cur, gauge, H, k, p, trunc)
            steps.append(PDStep("offdiag" if p != 1 else "fuchsian", k, k,
                                tuple(tuple(r) for r in H)))
        if p >= 2:
            B = cur.coeff_matrix(k)
            diag = (B[0][0], B[1][1])
            if k >= p:
                if diag[0] or diag[1]:
                    jord = k - p + 1
                    S = [[diag[0] / jord, GaussRational(0)],
                         [GaussRational(0), diag[1] / jord]]
                    cur, gauge = _apply_factor(cur, gauge, S, jord, p, trunc)
                    steps.append(PDStep("diag", k, jord, tuple(tuple(r) for r in S)))
            elif diag[0] or diag[1]:
                residues.append((k, diag))

    nf = LinSystem(p, cur.truncate(min(trunc, order + 1)))
    return PDResult(nf, gauge, tuple(steps), tuple(residues),
                    tuple(obstructions), order)


def _apply_factor(cur, gauge, H, k, pole, trunc):
    """Conjugate by T = I + H w^k:  cur <- T^-1 (cur T - w^pole T')."""
    var = cur.a[0][0].var
    Hmat = Mat2.from_consts(H, var, trunc).map(lambda e: e.shift_up(k).truncate(trunc))
    T = Mat2.identity(var, trunc) + Hmat
    # w^pole * T' has entries k * H * w^(k + pole - 1)
    Dterm = Mat2.from_consts(H, var, trunc).map(
        lambda e: (e * k).shift_up(k + pole - 1).truncate(trunc))
    new = T.inverse() * (cur * T - Dterm)
    return new, gauge * T


def conjugation_residual(sys: LinSystem, pd: PDResult) -> Mat2:
    """A H - w^p H' - H N, identically zero for a correct normalization."""
    H = pd.gauge
    N = pd.normal_form.A
    wp = sys.pole
    lhs = sys.A * H - H.derivative().map(lambda e: e.shift_up(wp)) - H * N
    return lhs.map(lambda e: e.truncate(min(e.trunc, pd.order + 1)))


def linear_family(gamma, m=4, trunc=20) -> P0Ode:
    """The one-parameter linear sextuple (a, b, c) = (1, gamma*w^m, 0)."""
    g = gamma if isinstance(gamma, GaussRational) else GaussRational(Fraction(gamma))
    data = RealStructureData(a=USeries.constant(1, "w", trunc),
                             b=USeries.monomial(m, g, "w", trunc) if not g.is_zero()
                             else USeries.zero("w", trunc),
                             c=USeries.zero("w", trunc), m=m)
    if not g.is_real():
        # keep builder contract honest: b must be real
        raise DomainError("family parameter must be real")
    return build_real(data)


def formal_solution_coeffs(gamma, count):
    """Exact coefficients of the unique formal solution with value 1.

    a_{k+3} = k a_k/(2i) - gamma a_{k+2}/(2i(k+3)), seeded a_0 = 1;
    this is the order-by-order substitution of a power series into the
    order-four linear family.
    """
    g = gamma if isinstance(gamma, GaussRational) else GaussRational(Fraction(gamma))
    two_i = 2 * I
    a = [GaussRational(1)]
    for n in range(count - 1):
        # a_{n+1} = [ (n-2)(n+1) a_{n-2} - g a_n ] / (2i (n+1))
        prev = a[n - 2] if n >= 2 else GaussRational(0)
        a.append((prev * ((n - 2) * (n + 1)) - g * a[n]) / (two_i * (n + 1)))
    return a


def formal_fundamental(gamma, order):
    """(fhat, ghat): the formal solution pair of the order-four family.

    fhat is the unique power-series solution with fhat(0) = 1 (from the
    coefficient recurrence); ghat is the upper-right entry of the
    Poincare-Dulac gauge, scaled monic in its linear term, so that
    ghat * w^-1 * exp(-2i/(3w^3)) completes the formal fundamental
    system.
    """
    fhat = USeries("w", order, dict(enumerate(formal_solution_coeffs(gamma, order))))
    ode = linear_family(gamma, trunc=order + 6)
    pd = poincare_dulac(to_system(ode), order + 2)
    graw = pd.gauge[0, 1]
    lead = graw.coeff(1)
    if lead.is_zero():
        raise InternalInconsistencyError("gauge entry lost its linear term")
    ghat = (graw * (1 / lead)).truncate(order)
    return fhat, ghat


@dataclass(frozen=True)
class ScalarGauge:
    """(z, w) -> (z f(w), g(w)) with f a unit and g a coordinate change."""

    f: USeries
    g: USeries

    def __post_init__(self):
        if self.f.constant_term().is_zero():
            raise DomainError("gauge factor f must be a unit")
        if not self.g.constant_term().is_zero() or self.g.coeff(1).is_zero():
            raise DomainError("gauge map g must fix 0 with nonzero slope")

    @classmethod
    def identity(cls, var="w", trunc=16):
        return cls(USeries.constant(1, var, trunc), USeries.monomial(1, 1, var, trunc))

    @property
    def var(self):
        return self.g.var

    def normalized_class_order(self):
        """Largest m with f(0) = 1 and g = w + O(w^(m+1)); None otherwise."""
        if self.f.constant_term() != GaussRational(1):
            return None
        dev = self.g - USeries.monomial(1, 1, self.var, self.g.trunc)
        o = dev.order()
        if self.g.coeff(1) != GaussRational(1):
            return None
        return (self.g.trunc if o is None else o) - 1

    def is_identity(self):
        return (self.f - 1).is_zero() and \
            (self.g - USeries.monomial(1, 1, self.var, self.g.trunc)).is_zero()

    def compose(self, inner: "ScalarGauge") -> "ScalarGauge":
        """self after inner: (z, w) -> self(inner(z, w))."""
        return ScalarGauge(inner.f * self.f.eval_at(inner.g),
                           self.g.eval_at(inner.g))

    def inverse(self) -> "ScalarGauge":
        ginv = reversion(self.g)
        finv = self.f.eval_at(ginv).invert_unit()
        return ScalarGauge(finv, ginv)


def reversion(g: USeries) -> USeries:
    """Compositional inverse of g = c w + ... with c != 0, by Newton steps."""
    c = g.coeff(1)
    if not g.constant_term().is_zero() or c.is_zero():
        raise DomainError("reversion needs g(0) = 0 and g'(0) != 0")
    h = USeries.monomial(1, 1 / c, g.var, g.trunc)
    w = USeries.monomial(1, 1, g.var, g.trunc)
    steps = max(1, g.trunc.bit_length() + 1)
    for _ in range(steps):
        err = g.eval_at(h) - w
        if err.is_zero():
            break
        h = h - err * g.derivative().eval_at(h).invert_unit()
    return h


def gauge_chi_tau(fhat: USeries, ghat: USeries) -> ScalarGauge:
    """The straightening gauge (chi, tau) built from the fundamental pair.

    chi = 1/fhat and tau = w (1 - (3/2i) w^3 log(ghat/(w fhat)))^(-1/3),
    principal branch; the output lies in the class with g = w + O(w^5).
    """
    if fhat.constant_term() != GaussRational(1):
        raise DomainError("fhat must have constant term 1")
    if not ghat.constant_term().is_zero() or ghat.coeff(1) != GaussRational(1):
        raise DomainError("ghat must be w + O(w^2)")
    chi = fhat.invert_unit()
    ratio = ghat.divide_monomial(1) * chi
    arg = 1 + (ratio.log() * GaussRational(0, Fraction(3, 2))).shift_up(3)
    tau = arg.truncate(arg.trunc - 1).pow_binomial(Fraction(-1, 3)).shift_up(1)
    tau = tau.truncate(min(tau.trunc, chi.trunc + 1))
    return ScalarGauge(chi, tau)


@dataclass(frozen=True)
class TransformedOde:
    """z'' = P z' + Q z carried back through a gauge, plus residual data."""

    P: ULaurent
    Q: ULaurent
    residual_P: ULaurent = None
    residual_Q: ULaurent = None

    def matches_target(self):
        if self.residual_P is None:
            return None
        return self.residual_P.is_zero() and self.residual_Q.is_zero()

    def residual_order(self):
        if self.residual_P is None:
            return None
        orders = [r.order() for r in (self.residual_P, self.residual_Q)
                  if r.order() is not None]
        return min(orders) if orders else None


def transform_ode_by_gauge(ode: P0Ode, gauge: ScalarGauge, target: P0Ode = None,
                           direction: str = "pullback") -> TransformedOde:
    """Exact chain-rule transport of a linear ODE along (z,w) -> (zf, g).

    ``pullback``: ode lives in the image coordinates; the result is the
    ODE its solutions satisfy upstream.  ``pushforward`` transports the
    ODE downstream (pullback along the inverse gauge).  With a target
    supplied, coefficientwise residuals are attached.
    """
    if direction == "pushforward":
        return transform_ode_by_gauge(ode, gauge.inverse(), target, "pullback")
    if direction != "pullback":
        raise DomainError("direction must be 'pullback' or 'pushforward'")
    if not ode.is_linear():
        raise DomainError("gauge transport implemented for linear sextuples")
    f, g = gauge.f, gauge.g
    P, Q = ode.first_order_coeffs()
    fp = f.derivative()
    fpp = fp.derivative()
    gp = g.derivative()
    gpp = gp.derivative()
    finv = f.invert_unit()
    gpinv = gp.invert_unit()
    Pg = _laurent_compose(P, g)
    Qg = _laurent_compose(Q, g)
    lf = ULaurent.from_series(fp * finv)         # f'/f
    lg = ULaurent.from_series(gpp * gpinv)       # g''/g'
    gpL = ULaurent.from_series(gp)
    Pnew = lf * (-2) + lg + gpL * Pg
    Qnew = (ULaurent.from_series(fpp * finv) * (-1) + lf * lg + gpL * Pg * lf
            + gpL * gpL * Qg)
    rP = rQ = None
    if target is not None:
        tP, tQ = target.first_order_coeffs()
        rP = Pnew - tP
        rQ = Qnew - tQ
    return TransformedOde(Pnew, Qnew, rP, rQ)


def _laurent_compose(L: ULaurent, g: USeries) -> ULaurent:
    """L(g) for g = (unit) * w: body(g) divided by g^pole."""
    body_at = L.body.eval_at(g)
    return ULaurent.from_series(body_at) * ULaurent.from_series(g).pow_int(-L.pole)


@dataclass(frozen=True)
class RiccatiReport:
    ok: bool
    residual: ULaurent

    def __str__(self):
        if self.ok:
            return "logarithmic-derivative witness solves the ODE exactly"
        return f"fails: residual {self.residual!r}"


def riccati_check(ode: P0Ode, p: ULaurent) -> RiccatiReport:
    """Does z with z'/z = p solve the linear ODE?  Exact Riccati residual.

    residual = P p + Q - p' - p^2, zero iff exp(integral of p) is a
    formal solution of z'' = P z' + Q z.
    """
    if not ode.is_linear():
        raise DomainError("riccati_check expects a linear sextuple")
    P, Q = ode.first_order_coeffs()
    residual = P * p + Q - p.derivative() - p * p
    return RiccatiReport(residual.is_zero(), residual)


@dataclass(frozen=True)
class DivergenceReport:
    gamma: GaussRational
    coeffs: tuple
    k_onset: int
    certificate_ok: bool
    first_violation: int
    min_margin: Fraction    # min of |a_{k+3}|^2 * 16 / (k^2 |a_k|^2), k >= onset

    def table(self, upto=12):
        return [(k, str(a)) for k, a in enumerate(self.coeffs[:upto])]


def divergence_report(gamma, count=60, k_onset=10) -> DivergenceReport:
    """Exact factorial-growth certificate for the formal solution.

    Runs the coefficient recurrence to ``count`` terms and checks
    |a_{k+3}| / |a_k| >= k/4 for every k >= k_onset with a_k != 0, as
    exact squared-modulus comparisons.  The dominant term of the
    recurrence drives the true ratio like k/2, so k/4 is a safe exact
    threshold; a certificate pass witnesses that the series has zero
    radius of convergence.
    """
    g = gamma if isinstance(gamma, GaussRational) else GaussRational(Fraction(gamma))
    if g.is_zero():
        raise DomainError("the parameter-zero family has the constant solution;"
                          " nothing diverges")
    if count < 12:
        raise DomainError("need at least 12 coefficients for the certificate")
    a = formal_solution_coeffs(g, count + 1)
    ok = True
    first_violation = -1
    min_margin = None
    for k in range(k_onset, count - 2):
        ak2 = a[k].abs2()
        if not ak2:
            continue
        margin = a[k + 3].abs2() * 16 / (ak2 * k * k)
        if min_margin is None or margin < min_margin:
            min_margin = margin
        if margin < 1:
            ok = False
            if first_violation < 0:
                first_violation = k
    return DivergenceReport(g, tuple(a), k_onset, ok, first_violation,
                            min_margin if min_margin is not None else Fraction(0))


@dataclass(frozen=True)
class MonodromyReport:
    residue: tuple
    eigenvalues: tuple
    normal_form: LinSystem
    obstructions: tuple
    trivial: bool
    order: int

    def __str__(self):
        ev = ", ".join(str(e) for e in self.eigenvalues)
        verdict = "trivial" if self.trivial else "NOT shown trivial"
        return (f"residue eigenvalues {{{ev}}}; monodromy {verdict}"
                f" (checked to order {self.order})")


def monodromy_at_infinity(sys: LinSystem, order=10) -> MonodromyReport:
    """Classify the monodromy through the Fuchsian point w = infinity.

    Substituting t = 1/w turns a pole-p system with matrix polynomial of
    degree <= p-1 into t y' = M(t) y with residue M(0) = -A_{p-1}.  The
    residue is diagonalized exactly, the Fuchsian normalization is run
    with empirical resonance detection, and the monodromy is reported
    trivial only when the computed normal form is the diagonal Euler
    system with integer eigenvalues and the obstruction list is empty.
    The only other singularity of such a system is w = 0, so triviality
    transfers to the irregular point.
    """
    p = sys.pole
    deg = sys.max_degree()
    if deg > p - 1:
        raise DomainError("matrix degree exceeds pole-1: infinity is not Fuchsian")
    trunc = min(e.trunc for row in sys.A.a for e in row)
    # t y' = M(t) y with M = -sum_k A_k t^(p-1-k)
    entries = [[dict() for _ in range(2)] for _ in range(2)]
    for i in range(2):
        for j in range(2):
            for d, q in sys.A[i, j].terms():
                entries[i][j][p - 1 - d] = -q
    M = Mat2(tuple(tuple(USeries("t", trunc, entries[i][j]) for j in range(2))
                   for i in range(2)))
    R = M.coeff_matrix(0)
    lam, P = _diagonalize_exact(R)
    if P is not None:
        Pinv = _const_inverse(P)
        Mc = Mat2.from_consts(P, "t", trunc)
        Mcinv = Mat2.from_consts(Pinv, "t", trunc)
        M = Mcinv * M * Mc
    pd = poincare_dulac(LinSystem(1, M), order)
    nf = pd.normal_form
    euler = all(nf.A[i, j].equal_mod(
        USeries.constant(lam[i], "t", trunc) if i == j else USeries.zero("t", trunc),
        order) for i in range(2) for j in range(2))
    integer_ev = all(e.is_integer() for e in lam)
    trivial = euler and integer_ev and not pd.obstructions
    return MonodromyReport(R, lam, nf, pd.obstructions, trivial, order)


def _diagonalize_exact(R):
    """Eigenvalues (sorted) and eigenvector matrix of a 2x2, or (lam, None)."""
    a, b = R[0][0], R[0][1]
    c, d = R[1][0], R[1][1]
    if b.is_zero() and c.is_zero():
        return (a, d), None
    tr, det = a + d, a * d - b * c
    disc = tr * tr - 4 * det
    root = gauss_sqrt_exact(disc)
    if root is None:
        raise DomainError("residue eigenvalues are not Gaussian rational")
    l1 = (tr + root) / 2
    l2 = (tr - root) / 2
    if l1 == l2:
        raise DomainError("repeated residue eigenvalue: not diagonalizable here")
    if (l2.re, l2.im) < (l1.re, l1.im):
        l1, l2 = l2, l1
    cols = []
    for lam in (l1, l2):
        if not b.is_zero():
            v = (b, lam - a)
        elif not c.is_zero():
            v = (lam - d, c)
        else:
            v = (GaussRational(1), GaussRational(0)) if lam == a else \
                (GaussRational(0), GaussRational(1))
        lead = v[0] if not v[0].is_zero() else v[1]
        cols.append((v[0] / lead, v[1] / lead))
    P = ((cols[0][0], cols[1][0]), (cols[0][1], cols[1][1]))
    return (l1, l2), P


def _const_inverse(P):
    det = P[0][0] * P[1][1] - P[0][1] * P[1][0]
    if det.is_zero():
        raise InternalInconsistencyError("eigenvector matrix is singular")
    return ((P[1][1] / det, -P[0][1] / det),
            (-P[1][0] / det, P[0][0] / det))


def companion_gauge(F: ScalarGauge, m: int) -> ScalarGauge:
    """The unique parameter-side gauge coupled to F on a foliated graph.

    With (zf, g) the components of the inverse of F, the coupling
    conditions pin mu = g and lambda = eta^m g' / (g^m f); the companion
    is the inverse of (xi lambda, mu).  Applying the construction to the
    companion (roles swapped) returns F: the two conditions are
    literally symmetric under the swap.
    """
    if m < 1:
        raise DomainError("class order m must be >= 1")
    Finv = F.inverse()
    f, g = Finv.f, Finv.g
    unit = g.divide_monomial(1)          # g / eta
    lam = g.derivative() * (unit.pow_int(m) * f).invert_unit()
    lam = lam.truncate(min(lam.trunc, f.trunc - 1))
    mu = g.truncate(lam.trunc + 1)
    return ScalarGauge(lam, mu).inverse()
