"""Exact truncated power/Laurent series over Gaussian rationals.

Storage model: a series keeps a sparse dict of Gaussian-*integer*
coefficient pairs together with one shared positive denominator, so the
hot Cauchy products (see :mod:`segreode.backend`) run on plain integers
and the rational reduction (content gcd) happens once per operation.
Coefficient access converts to :class:`~segreode.scalars.GaussRational`
on demand.

Truncation is an explicit attribute: a ``USeries`` with ``trunc = N``
is an exact representative of a function modulo ``w**N``; binary
operations take the componentwise minimum of the operand truncations,
derivatives lower it by one.
"""

from __future__ import annotations

import math
from fractions import Fraction

from . import backend
from .errors import DomainError, PrecisionError, StructureError
from .scalars import GaussRational

SHIFT1 = 42
SHIFT2 = 21
MASK = (1 << 21) - 1

assert backend.get_kernels()["python"].SHIFT1 == SHIFT1


def pack(k, l, j):
    return (k << SHIFT1) | (l << SHIFT2) | j


def unpack(key):
    return key >> SHIFT1, (key >> SHIFT2) & MASK, key & MASK


def _scalar_triple(q):
    """Any scalar-like -> (a, b, d) with value (a + b*i)/d, d > 0."""
    if isinstance(q, GaussRational):
        d = q.re.denominator * q.im.denominator // math.gcd(
            q.re.denominator, q.im.denominator
        )
        return (q.re.numerator * (d // q.re.denominator),
                q.im.numerator * (d // q.im.denominator), d)
    if isinstance(q, int):
        return (q, 0, 1)
    if isinstance(q, Fraction):
        return (q.numerator, 0, q.denominator)
    raise StructureError(f"not a scalar: {q!r}")


def _content_normalize(coeffs, den):
    """Reduce (coeffs, den) to primitive form; drops stored zero pairs."""
    if den < 0:
        raise AssertionError("denominator must stay positive")
    g = den
    for a, b in coeffs.values():
        if g == 1:
            break
        g = math.gcd(g, math.gcd(a, b))
    if not coeffs:
        return coeffs, 1
    if g > 1:
        coeffs = {k: (a // g, b // g) for k, (a, b) in coeffs.items()}
        den //= g
    return coeffs, den


def _merge_scaled(c1, s1, c2, s2):
    out = {}
    for k, (a, b) in c1.items():
        out[k] = (a * s1, b * s1)
    for k, (a, b) in c2.items():
        cur = out.get(k)
        if cur is None:
            out[k] = (a * s2, b * s2)
        else:
            re, im = cur[0] + a * s2, cur[1] + b * s2
            if re or im:
                out[k] = (re, im)
            else:
                del out[k]
    return out


def _scale_coeffs(coeffs, a, b):
    """Multiply every pair by the Gaussian integer a + b*i."""
    if b == 0:
        if a == 1:
            return dict(coeffs)
        return {k: (x * a, y * a) for k, (x, y) in coeffs.items()}
    return {k: (x * a - y * b, x * b + y * a) for k, (x, y) in coeffs.items()}


def _binom_coeffs(e: Fraction, n: int):
    """binom(e, k) for k = 0..n-1, exact."""
    out = [Fraction(1)]
    for k in range(1, n):
        out.append(out[-1] * (e - (k - 1)) / k)
    return out


class USeries:
    """Truncated power series in one variable over Q(i)."""

    __slots__ = ("var", "trunc", "coeffs", "den")

    def __init__(self, var="w", trunc=16, terms=None):
        self.var = var
        self.trunc = int(trunc)
        cf = {}
        if terms:
            den = 1
            for d, q in terms.items():
                if d < 0:
                    raise StructureError("negative degree in USeries (use ULaurent)")
                a, b, dq = _scalar_triple(q)
                if (a or b) and d < self.trunc:
                    den_new = den * dq // math.gcd(den, dq)
                    if den_new != den:
                        s = den_new // den
                        cf = {k: (x * s, y * s) for k, (x, y) in cf.items()}
                        den = den_new
                    s = den // dq
                    cf[d] = (a * s, b * s)
            cf, den = _content_normalize(cf, den)
            self.coeffs, self.den = cf, den
        else:
            self.coeffs, self.den = {}, 1

    @classmethod
    def _raw(cls, var, trunc, coeffs, den):
        s = cls.__new__(cls)
        s.var, s.trunc = var, trunc
        s.coeffs, s.den = _content_normalize(coeffs, den)
        return s

    @classmethod
    def zero(cls, var="w", trunc=16):
        return cls(var, trunc)

    @classmethod
    def constant(cls, q, var="w", trunc=16):
        return cls(var, trunc, {0: q if isinstance(q, GaussRational) else GaussRational(q)})

    @classmethod
    def monomial(cls, deg, q=1, var="w", trunc=16):
        return cls(var, trunc, {deg: q if isinstance(q, GaussRational) else GaussRational(q)})

    @classmethod
    def from_list(cls, items, var="w", trunc=16):
        return cls(var, trunc, {d: q for d, q in enumerate(items)})

    # -- inspection ----------------------------------------------------

    def coeff(self, d) -> GaussRational:
        pair = self.coeffs.get(d)
        if pair is None:
            return GaussRational(0)
        return GaussRational(Fraction(pair[0], self.den), Fraction(pair[1], self.den))

    def terms(self):
        for d in sorted(self.coeffs):
            yield d, self.coeff(d)

    def is_zero(self):
        return not self.coeffs

    def order(self):
        """Smallest stored degree, or None for the (truncated) zero series."""
        return min(self.coeffs) if self.coeffs else None

    def constant_term(self):
        return self.coeff(0)

    def __eq__(self, other):
        if not isinstance(other, USeries):
            return NotImplemented
        return (self.var == other.var and self.trunc == other.trunc
                and self.den == other.den and self.coeffs == other.coeffs)

    __hash__ = None

    def equal_mod(self, other, n=None):
        """Coefficientwise equality up to degree n (default: common trunc)."""
        lim = min(self.trunc, other.trunc)
        if n is not None:
            lim = min(lim, n)
        return (self - other).truncate(lim).is_zero()

    # -- ring operations -------------------------------------------------

    def _check(self, other):
        if self.var != other.var:
            raise StructureError(f"variable mismatch: {self.var} vs {other.var}")

    def __add__(self, other):
        if isinstance(other, (int, Fraction, GaussRational)):
            other = USeries.constant(GaussRational(0) + other, self.var, self.trunc)
        if not isinstance(other, USeries):
            return NotImplemented
        self._check(other)
        trunc = min(self.trunc, other.trunc)
        g = math.gcd(self.den, other.den)
        den = self.den // g * other.den
        cf = _merge_scaled(self.coeffs, den // self.den, other.coeffs, den // other.den)
        cf = {k: v for k, v in cf.items() if k < trunc}
        return USeries._raw(self.var, trunc, cf, den)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other if isinstance(other, USeries) else GaussRational(0) - other)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return USeries._raw(self.var, self.trunc,
                            {k: (-a, -b) for k, (a, b) in self.coeffs.items()}, self.den)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, GaussRational)):
            a, b, d = _scalar_triple(other)
            if a == 0 and b == 0:
                return USeries.zero(self.var, self.trunc)
            return USeries._raw(self.var, self.trunc,
                                _scale_coeffs(self.coeffs, a, b), self.den * d)
        if not isinstance(other, USeries):
            return NotImplemented
        self._check(other)
        trunc = min(self.trunc, other.trunc)
        cf = backend.mul1(self.coeffs, other.coeffs, trunc)
        return USeries._raw(self.var, trunc, cf, self.den * other.den)

    __rmul__ = __mul__

    def truncate(self, n):
        n = min(n, self.trunc)
        return USeries._raw(self.var, n,
                            {k: v for k, v in self.coeffs.items() if k < n}, self.den)

    def derivative(self):
        cf = {k - 1: (k * a, k * b) for k, (a, b) in self.coeffs.items() if k > 0}
        return USeries._raw(self.var, self.trunc - 1, cf, self.den)

    def shift_up(self, n):
        """Multiply by var**n exactly (truncation grows with the shift)."""
        return USeries._raw(self.var, self.trunc + n,
                            {k + n: v for k, v in self.coeffs.items()}, self.den)

    def divide_monomial(self, n):
        """Exact division by var**n; DomainError if a lower term survives."""
        if any(k < n for k in self.coeffs):
            raise DomainError(f"series not divisible by {self.var}^{n}")
        return USeries._raw(self.var, self.trunc - n,
                            {k - n: v for k, v in self.coeffs.items()}, self.den)

    def conjugate(self):
        return USeries._raw(self.var, self.trunc,
                            {k: (a, -b) for k, (a, b) in self.coeffs.items()}, self.den)

    def is_real(self):
        return all(b == 0 for _, b in self.coeffs.values())

    def imag_part(self):
        return USeries._raw(self.var, self.trunc,
                            {k: (b, 0) for k, (a, b) in self.coeffs.items() if b}, self.den)

    def real_part(self):
        return USeries._raw(self.var, self.trunc,
                            {k: (a, 0) for k, (a, b) in self.coeffs.items() if a}, self.den)

    # -- analytic-style operations ---------------------------------------

    def invert_unit(self):
        """Multiplicative inverse; requires a nonzero constant term."""
        c0 = self.constant_term()
        if c0.is_zero():
            raise DomainError("invert_unit: constant term is zero")
        inv = USeries.constant(1 / c0, self.var, self.trunc)
        # Newton iteration x -> x(2 - s x): doubles the correct order.
        order = 1
        while order < self.trunc:
            inv = inv * (2 - self * inv)
            order *= 2
        return inv

    def exp(self):
        if not self.constant_term().is_zero():
            raise DomainError("exp: nonzero constant term")
        return _exp_impl(self, USeries.constant(1, self.var, self.trunc))

    def log(self):
        if self.constant_term() != GaussRational(1):
            raise DomainError("log: constant term must be 1")
        return _log_impl(self, USeries.zero(self.var, self.trunc))

    def pow_binomial(self, e):
        """(1 + t)**e for exact rational e; constant term must be 1."""
        if self.constant_term() != GaussRational(1):
            raise DomainError("pow_binomial: constant term must be 1")
        return _pow_binomial_impl(self, Fraction(e), USeries.zero(self.var, self.trunc))

    def pow_int(self, n):
        if n < 0:
            return self.invert_unit().pow_int(-n)
        result = USeries.constant(1, self.var, self.trunc)
        base = self
        while n:
            if n & 1:
                result = result * base
            base_needed = n >> 1
            if base_needed:
                base = base * base
            n >>= 1
        return result

    def eval_at(self, t):
        """Composition self(t); t needs zero constant term.

        Sound whenever t**self.trunc vanishes in t's ring; univariate
        arguments are truncated down to the honest composition order
        (self.trunc times the valuation of t), trivariate arguments must
        already satisfy the bound (the callers over-allocate).
        """
        if not t.constant_term().is_zero():
            raise DomainError("eval_at: argument must have zero constant term")
        if isinstance(t, USeries) and not t.is_zero():
            t = t.truncate(self.trunc * t.order())
        one = t.ring_one()
        acc = one * self.coeff(0)
        power = one
        for k in range(1, self.trunc):
            power = power * t
            if power.is_zero():
                return acc
            c = self.coeff(k)
            if not c.is_zero():
                acc = acc + power * c
        if not (power * t).is_zero():
            raise PrecisionError(
                "eval_at: composition not determined at this truncation")
        return acc

    def ring_one(self):
        return USeries.constant(1, self.var, self.trunc)

    def __repr__(self):
        if not self.coeffs:
            return f"O({self.var}^{self.trunc})"
        parts = [_term_str(d, q, self.var) for d, q in self.terms()]
        return " + ".join(parts) + f" + O({self.var}^{self.trunc})"


def _exp_impl(t, one_ring):
    # Horner on exp(t) = sum t^n / n!
    nmax = _nilpotency_bound(t)
    acc = one_ring * Fraction(1, math.factorial(nmax))
    for n in range(nmax - 1, -1, -1):
        acc = acc * t + one_ring * Fraction(1, math.factorial(n))
    return acc


def _log_impl(s, zero_ring):
    # Horner form: log(1+t) = t(1 + t(-1/2 + t(1/3 + ...)))
    t = s - s.ring_one()
    nmax = _nilpotency_bound(t)
    acc = zero_ring
    for n in range(nmax, 0, -1):
        acc = acc * t + t.ring_one() * Fraction((-1) ** (n + 1), n)
    return acc * t


def _pow_binomial_impl(s, e, zero_ring):
    t = s - s.ring_one()
    nmax = _nilpotency_bound(t)
    binoms = _binom_coeffs(e, nmax + 1)
    acc = zero_ring
    for n in range(nmax, -1, -1):
        acc = acc * t + t.ring_one() * binoms[n]
    return acc


def _nilpotency_bound(t):
    """Smallest n with t**n == 0 guaranteed by the valuation of t."""
    o = t.min_total_order()
    if o is None:
        return 1
    if o == 0:
        raise DomainError("argument must have positive valuation")
    return t.total_degree_cap() // o + 1


# -- mixins giving USeries/TriSeries the shared valuation interface ------

def _us_min_total_order(self):
    return self.order()


def _us_total_degree_cap(self):
    return max(self.trunc - 1, 0)


USeries.min_total_order = _us_min_total_order
USeries.total_degree_cap = _us_total_degree_cap


def _term_str(d, q, var):
    if d == 0:
        return str(q) if not (q.re and q.im) else f"({q})"
    mono = var if d == 1 else f"{var}^{d}"
    from .scalars import GaussRational as _G
    if q == _G(1):
        return mono
    if q == _G(-1):
        return f"-{mono}"
    return f"{q.as_factor_str()}*{mono}"


class ULaurent:
    """body / var**pole with pole >= 0 kept minimal."""

    __slots__ = ("pole", "body")

    def __init__(self, body: USeries, pole: int = 0):
        if pole < 0:
            body = body.shift_up(-pole)
            pole = 0
        v = body.order()
        if v is None:
            pole = 0
        else:
            drop = min(v, pole)
            if drop:
                body = body.divide_monomial(drop)
                pole -= drop
        self.pole = pole
        self.body = body

    @classmethod
    def zero(cls, var="w", trunc=16):
        return cls(USeries.zero(var, trunc), 0)

    @classmethod
    def monomial(cls, deg, q=1, var="w", trunc=16):
        if deg >= 0:
            return cls(USeries.monomial(deg, q, var, trunc), 0)
        return cls(USeries.monomial(0, q, var, trunc), -deg)

    @classmethod
    def from_series(cls, us: USeries):
        return cls(us, 0)

    @property
    def var(self):
        return self.body.var

    def coeff(self, d) -> GaussRational:
        return self.body.coeff(d + self.pole)

    def terms(self):
        for d, q in self.body.terms():
            yield d - self.pole, q

    def is_zero(self):
        return self.body.is_zero()

    def order(self):
        o = self.body.order()
        return None if o is None else o - self.pole

    def trunc_abs(self):
        """Validity bound: the series is exact below degree trunc_abs."""
        return self.body.trunc - self.pole

    def __eq__(self, other):
        if not isinstance(other, ULaurent):
            return NotImplemented
        return self.pole == other.pole and self.body == other.body

    __hash__ = None

    def _align(self, other):
        p = max(self.pole, other.pole)
        return p, self.body.shift_up(p - self.pole), other.body.shift_up(p - other.pole)

    def __add__(self, other):
        if isinstance(other, (int, Fraction, GaussRational)):
            other = ULaurent(USeries.constant(GaussRational(0) + other,
                                              self.var, self.body.trunc), 0)
        if not isinstance(other, ULaurent):
            return NotImplemented
        p, b1, b2 = self._align(other)
        return ULaurent(b1 + b2, p)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, ULaurent):
            return self + (-other)
        return self + (GaussRational(0) - other)

    def __neg__(self):
        return ULaurent(-self.body, self.pole)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, GaussRational)):
            return ULaurent(self.body * other, self.pole)
        if isinstance(other, USeries):
            other = ULaurent.from_series(other)
        if not isinstance(other, ULaurent):
            return NotImplemented
        return ULaurent(self.body * other.body, self.pole + other.pole)

    __rmul__ = __mul__

    def derivative(self):
        # d/dw (b / w^p) = (b' w - p b) / w^(p+1)
        num = self.body.derivative().shift_up(1) - self.body * self.pole
        return ULaurent(num, self.pole + 1)

    def invert(self):
        if self.is_zero():
            raise DomainError("cannot invert the zero Laurent series")
        v = self.body.order()
        unit = self.body.divide_monomial(v)
        return ULaurent(unit.invert_unit().shift_up(self.pole), v)

    def pow_int(self, n):
        if n == 0:
            return ULaurent(USeries.constant(1, self.var, self.body.trunc), 0)
        if n < 0:
            return self.invert().pow_int(-n)
        return ULaurent(self.body.pow_int(n), self.pole * n)

    def truncate_abs(self, n):
        return ULaurent(self.body.truncate(n + self.pole), self.pole)

    def conjugate(self):
        return ULaurent(self.body.conjugate(), self.pole)

    def __repr__(self):
        if self.is_zero():
            return f"O({self.var}^{self.trunc_abs()})"
        parts = [_term_str(d, q, self.var) for d, q in self.terms()]
        return " + ".join(parts) + f" + O({self.var}^{self.trunc_abs()})"


class TriSeries:
    """Truncated series in three variables over Q(i).

    The first variable is the distinguished "ODE variable" (derivative
    and Cauchy-problem axis); the second and third act as parameters.
    Exponent triples are packed into single integers (see pack/unpack).
    """

    __slots__ = ("vars", "truncs", "coeffs", "den")

    def __init__(self, vars=("z", "xi", "eta"), truncs=(6, 6, 12), terms=None):
        self.vars = tuple(vars)
        self.truncs = tuple(int(t) for t in truncs)
        if len(self.vars) != 3 or len(self.truncs) != 3:
            raise StructureError("TriSeries needs exactly three variables")
        cf, den = {}, 1
        if terms:
            tz, tx, te = self.truncs
            for (k, l, j), q in terms.items():
                if k >= tz or l >= tx or j >= te:
                    continue
                a, b, dq = _scalar_triple(q)
                if a == 0 and b == 0:
                    continue
                den_new = den * dq // math.gcd(den, dq)
                if den_new != den:
                    s = den_new // den
                    cf = {kk: (x * s, y * s) for kk, (x, y) in cf.items()}
                    den = den_new
                s = den // dq
                cf[pack(k, l, j)] = (a * s, b * s)
        self.coeffs, self.den = _content_normalize(cf, den)

    @classmethod
    def _raw(cls, vars, truncs, coeffs, den):
        s = cls.__new__(cls)
        s.vars, s.truncs = tuple(vars), tuple(truncs)
        s.coeffs, s.den = _content_normalize(coeffs, den)
        return s

    @classmethod
    def zero(cls, vars=("z", "xi", "eta"), truncs=(6, 6, 12)):
        return cls(vars, truncs)

    @classmethod
    def constant(cls, q, vars=("z", "xi", "eta"), truncs=(6, 6, 12)):
        return cls(vars, truncs, {(0, 0, 0): q})

    @classmethod
    def monomial(cls, k, l, j, q=1, vars=("z", "xi", "eta"), truncs=(6, 6, 12)):
        return cls(vars, truncs, {(k, l, j): q})

    # -- inspection ----------------------------------------------------

    def coeff(self, k, l, j) -> GaussRational:
        pair = self.coeffs.get(pack(k, l, j))
        if pair is None:
            return GaussRational(0)
        return GaussRational(Fraction(pair[0], self.den), Fraction(pair[1], self.den))

    def terms(self):
        for key in sorted(self.coeffs):
            k, l, j = unpack(key)
            yield (k, l, j), self.coeff(k, l, j)

    def is_zero(self):
        return not self.coeffs

    def constant_term(self):
        return self.coeff(0, 0, 0)

    def min_total_order(self):
        if not self.coeffs:
            return None
        return min(sum(unpack(k)) for k in self.coeffs)

    def total_degree_cap(self):
        return sum(t - 1 for t in self.truncs)

    def __eq__(self, other):
        if not isinstance(other, TriSeries):
            return NotImplemented
        return (self.vars == other.vars and self.truncs == other.truncs
                and self.den == other.den and self.coeffs == other.coeffs)

    __hash__ = None

    # -- ring operations -------------------------------------------------

    def _check(self, other):
        if self.vars != other.vars:
            raise StructureError(f"variable mismatch: {self.vars} vs {other.vars}")

    def __add__(self, other):
        if isinstance(other, (int, Fraction, GaussRational)):
            other = TriSeries.constant(GaussRational(0) + other, self.vars, self.truncs)
        if not isinstance(other, TriSeries):
            return NotImplemented
        self._check(other)
        truncs = tuple(min(a, b) for a, b in zip(self.truncs, other.truncs))
        g = math.gcd(self.den, other.den)
        den = self.den // g * other.den
        cf = _merge_scaled(self.coeffs, den // self.den, other.coeffs, den // other.den)
        tz, tx, te = truncs
        cf = {k: v for k, v in cf.items()
              if (k >> SHIFT1) < tz and ((k >> SHIFT2) & MASK) < tx and (k & MASK) < te}
        return TriSeries._raw(self.vars, truncs, cf, den)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, TriSeries):
            return self + (-other)
        return self + (GaussRational(0) - other)

    def __neg__(self):
        return TriSeries._raw(self.vars, self.truncs,
                              {k: (-a, -b) for k, (a, b) in self.coeffs.items()},
                              self.den)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, GaussRational)):
            a, b, d = _scalar_triple(other)
            if a == 0 and b == 0:
                return TriSeries.zero(self.vars, self.truncs)
            return TriSeries._raw(self.vars, self.truncs,
                                  _scale_coeffs(self.coeffs, a, b), self.den * d)
        if not isinstance(other, TriSeries):
            return NotImplemented
        self._check(other)
        truncs = tuple(min(a, b) for a, b in zip(self.truncs, other.truncs))
        cf = backend.mul3(self.coeffs, other.coeffs, *truncs)
        return TriSeries._raw(self.vars, truncs, cf, self.den * other.den)

    __rmul__ = __mul__

    def truncate(self, truncs):
        truncs = tuple(min(a, b) for a, b in zip(self.truncs, truncs))
        tz, tx, te = truncs
        cf = {k: v for k, v in self.coeffs.items()
              if (k >> SHIFT1) < tz and ((k >> SHIFT2) & MASK) < tx and (k & MASK) < te}
        return TriSeries._raw(self.vars, truncs, cf, self.den)

    def mul_monomial(self, k, l, j):
        """Ring multiplication by a monomial (truncations unchanged)."""
        tz, tx, te = self.truncs
        shift = pack(k, l, j)
        cf = {}
        for key, v in self.coeffs.items():
            nk = key + shift
            if (nk >> SHIFT1) < tz and ((nk >> SHIFT2) & MASK) < tx and (nk & MASK) < te:
                cf[nk] = v
        return TriSeries._raw(self.vars, self.truncs, cf, self.den)

    def divide_eta(self, n):
        """Exact division by the third variable to the n-th power."""
        if any((key & MASK) < n for key in self.coeffs):
            raise DomainError(f"series not divisible by {self.vars[2]}^{n}")
        cf = {key - n: v for key, v in self.coeffs.items()}
        tz, tx, te = self.truncs
        return TriSeries._raw(self.vars, (tz, tx, te - n), cf, self.den)

    def derivative(self, axis=0):
        shift = (SHIFT1, SHIFT2, 0)[axis]
        cf = {}
        for key, (a, b) in self.coeffs.items():
            e = key >> SHIFT1 if axis == 0 else (key >> shift) & MASK
            if e:
                cf[key - (1 << shift)] = (e * a, e * b)
        truncs = list(self.truncs)
        truncs[axis] -= 1
        return TriSeries._raw(self.vars, tuple(truncs), cf, self.den)

    def integrate_z(self, times=1):
        """Antiderivative in the first variable, zero integration constants."""
        out = self
        for _ in range(times):
            scale = math.lcm(*range(1, out.truncs[0] + 2))
            cf = {}
            for key, (a, b) in out.coeffs.items():
                k = key >> SHIFT1
                s = scale // (k + 1)
                cf[key + (1 << SHIFT1)] = (a * s, b * s)
            tz, tx, te = out.truncs
            out = TriSeries._raw(out.vars, (tz + 1, tx, te), cf, out.den * scale)
        return out

    def swap_zx(self):
        """Exchange the first two variables (exponents, truncations, names)."""
        cf = {}
        for key, v in self.coeffs.items():
            k, l, j = unpack(key)
            cf[pack(l, k, j)] = v
        tz, tx, te = self.truncs
        return TriSeries._raw((self.vars[1], self.vars[0], self.vars[2]),
                              (tx, tz, te), cf, self.den)

    def relabel(self, vars):
        return TriSeries._raw(vars, self.truncs, dict(self.coeffs), self.den)

    def conjugate(self):
        return TriSeries._raw(self.vars, self.truncs,
                              {k: (a, -b) for k, (a, b) in self.coeffs.items()},
                              self.den)

    # -- composition ------------------------------------------------------

    def subst_eta(self, t: "TriSeries"):
        """Substitute t for the third variable.

        Treats self as a polynomial in eta with (z, xi)-coefficients and
        accumulates with forward powers of t; t must vanish at the origin.
        """
        self._checkcompat(t)
        if not t.constant_term().is_zero():
            raise DomainError("subst_eta: substitute must vanish at the origin")
        te = self.truncs[2]
        buckets = {}
        for key, v in self.coeffs.items():
            j = key & MASK
            buckets.setdefault(j, {})[key - j] = v
        truncs = tuple(min(a, b) for a, b in zip(self.truncs, t.truncs))
        acc = TriSeries.zero(t.vars, truncs)
        power = TriSeries.constant(1, t.vars, truncs)
        for j in range(te):
            if j:
                power = power * t
                if power.is_zero():
                    break
            bucket = buckets.get(j)
            if bucket:
                cj = TriSeries._raw(t.vars, truncs, dict(bucket), self.den)
                acc = acc + cj * power
        else:
            if not (power * t).is_zero():
                raise PrecisionError(
                    "subst_eta: composition not determined at this truncation")
        return acc

    def _checkcompat(self, other):
        if len(other.vars) != 3:
            raise StructureError("subst_eta target must be trivariate")

    # -- slices -------------------------------------------------------------

    def slice_eta(self, k, l, var="w"):
        """The (k, l) slice as a univariate series in the third variable."""
        cf = {}
        for key, v in self.coeffs.items():
            kk, ll, j = unpack(key)
            if kk == k and ll == l:
                cf[j] = v
        return USeries._raw(var, self.truncs[2], cf, self.den)

    def exp(self):
        if not self.constant_term().is_zero():
            raise DomainError("exp: nonzero constant term")
        return _exp_impl(self, TriSeries.constant(1, self.vars, self.truncs))

    def log(self):
        if self.constant_term() != GaussRational(1):
            raise DomainError("log: constant term must be 1")
        return _log_impl(self, TriSeries.zero(self.vars, self.truncs))

    def pow_binomial(self, e):
        if self.constant_term() != GaussRational(1):
            raise DomainError("pow_binomial: constant term must be 1")
        return _pow_binomial_impl(self, Fraction(e), TriSeries.zero(self.vars, self.truncs))

    def pow_int(self, n):
        if n < 0:
            return self.invert_unit().pow_int(-n)
        result = TriSeries.constant(1, self.vars, self.truncs)
        base = self
        while n:
            if n & 1:
                result = result * base
            if n >> 1:
                base = base * base
            n >>= 1
        return result

    def invert_unit(self):
        c0 = self.constant_term()
        if c0.is_zero():
            raise DomainError("invert_unit: constant term is zero")
        inv = TriSeries.constant(1 / c0, self.vars, self.truncs)
        order = 1
        cap = self.total_degree_cap() + 1
        while order < cap:
            inv = inv * (2 - self * inv)
            order *= 2
        return inv

    def ring_one(self):
        return TriSeries.constant(1, self.vars, self.truncs)

    def __repr__(self):
        items = list(self.terms())
        parts = []
        for (k, l, j), q in items[:14]:
            mono = "*".join(
                (v if e == 1 else f"{v}^{e}")
                for v, e in zip(self.vars, (k, l, j)) if e
            )
            parts.append(q.as_factor_str() + ("*" + mono if mono else ""))
        body = " + ".join(parts) if parts else "0"
        if len(items) > 14:
            body += " + ..."
        return f"<TriSeries {body} ; truncs={self.truncs}>"
