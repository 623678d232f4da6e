"""Exact truncated-series arithmetic.

Three layers, all over arbitrary-precision rationals:

* ``WindingPoly`` -- Laurent polynomials in the winding marker ``s``.
* ``QSeries``     -- truncated Laurent series in ``r`` (one r-unit is a third
  of a q-unit, so every exponent that arises in the theta-type series is an
  integer) with ``WindingPoly`` coefficients.
* ``TSeries``     -- truncated power series in the length marker ``t`` with
  ``WindingPoly`` coefficients.

Every value is immutable and every operation is a pure function, so instances
can be shared freely.  Truncation orders are tracked through all arithmetic
and never silently raised.  Divisions that the surrounding theory promises to
be exact are *checked*: a nonzero remainder raises ``NonExactDivision`` rather
than producing a wrong series.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Callable, Iterable, Iterator


class NonExactDivision(ArithmeticError):
    """A division that should have been remainder-free was not."""


class NonUnitLeadingCoefficient(ArithmeticError):
    """Series inversion/division needs a single-term invertible leading coefficient."""


class NotInvertible(ArithmeticError):
    """Series reversion needs zero constant term and invertible linear term."""


class NegativeTExponent(ArithmeticError):
    """A substitution produced a pole in t."""


# ---------------------------------------------------------------------------
# integer convolution kernel
# ---------------------------------------------------------------------------

_PACK_CUTOFF = 1024  # len(a)*len(b) above which packed multiplication wins


def conv_ints(a: list[int], b: list[int], n_out: int | None = None) -> list[int]:
    """Convolution of two integer sequences, optionally truncated.

    Large products are routed through a packed big-integer multiply
    (Kronecker substitution with balanced digits), which is far faster in
    CPython than a coefficient-by-coefficient loop.
    """
    la, lb = len(a), len(b)
    if la == 0 or lb == 0:
        return []
    full = la + lb - 1
    n = full if n_out is None else min(n_out, full)
    if n <= 0:
        return []
    if la * lb <= _PACK_CUTOFF or min(la, lb) == 1:
        out = [0] * n
        if lb < la:
            a, b, la, lb = b, a, lb, la
        for i in range(min(la, n)):
            ai = a[i]
            if not ai:
                continue
            hi = min(lb, n - i)
            for j in range(hi):
                out[i + j] += ai * b[j]
        return out
    return _conv_packed(a, b)[:n]


def _conv_packed(a: list[int], b: list[int]) -> list[int]:
    amax = max(max(a), -min(a))
    bmax = max(max(b), -min(b))
    if amax == 0 or bmax == 0:
        return [0] * (len(a) + len(b) - 1)
    slot = amax.bit_length() + bmax.bit_length() + min(len(a), len(b)).bit_length() + 2
    slot = (slot + 7) & ~7
    sb = slot // 8
    z = _pack_balanced(a, sb) * _pack_balanced(b, sb)
    return _unpack_balanced(z, sb, len(a) + len(b) - 1)


def _pack_balanced(c: list[int], sb: int) -> int:
    zero = bytes(sb)
    pos = bytearray()
    neg = bytearray()
    for x in c:
        if x >= 0:
            pos += x.to_bytes(sb, "little")
            neg += zero
        else:
            pos += zero
            neg += (-x).to_bytes(sb, "little")
    return int.from_bytes(bytes(pos), "little") - int.from_bytes(bytes(neg), "little")


def _unpack_balanced(z: int, sb: int, n: int) -> list[int]:
    negate = z < 0
    if negate:
        z = -z
    raw = z.to_bytes(n * sb + sb, "little")
    half = 1 << (sb * 8 - 1)
    full = 1 << (sb * 8)
    out = [0] * n
    carry = 0
    for i in range(n):
        d = int.from_bytes(raw[i * sb : (i + 1) * sb], "little") + carry
        if d >= half:
            d -= full
            carry = 1
        else:
            carry = 0
        out[i] = -d if negate else d
    return out


# ---------------------------------------------------------------------------
# Laurent polynomials in the winding marker
# ---------------------------------------------------------------------------


def _normalize(off: int, nums: list[int], den: int) -> tuple[int, tuple[int, ...], int]:
    lo = 0
    hi = len(nums)
    while hi > lo and nums[hi - 1] == 0:
        hi -= 1
    while lo < hi and nums[lo] == 0:
        lo += 1
    if lo == hi:
        return 0, (), 1
    nums = nums[lo:hi]
    off += lo
    g = den
    for x in nums:
        g = gcd(g, x)
        if g == 1:
            break
    if den < 0:
        g = -g
    if g != 1:
        den //= g
        nums = [x // g for x in nums]
    return off, tuple(nums), den


class WindingPoly:
    """Laurent polynomial in ``s`` with exact rational coefficients.

    Stored as an integer coefficient vector over a common positive
    denominator, in canonical form: no zero coefficients at either end and
    ``gcd(coefficients, denominator) == 1``.  The zero polynomial has an
    empty vector.
    """

    __slots__ = ("off", "nums", "den")

    def __init__(self, off: int, nums: list[int] | tuple[int, ...], den: int = 1):
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        self.off, self.nums, self.den = _normalize(off, list(nums), den)

    # -- construction -------------------------------------------------

    @classmethod
    def zero(cls) -> WindingPoly:
        return _WP_ZERO

    @classmethod
    def one(cls) -> WindingPoly:
        return _WP_ONE

    @classmethod
    def monomial(cls, exp: int, coeff: Fraction | int = 1) -> WindingPoly:
        c = Fraction(coeff)
        if c == 0:
            return _WP_ZERO
        return cls(exp, [c.numerator], c.denominator)

    @classmethod
    def constant(cls, coeff: Fraction | int) -> WindingPoly:
        return cls.monomial(0, coeff)

    @classmethod
    def from_dict(cls, d: dict[int, Fraction | int]) -> WindingPoly:
        items = {e: Fraction(c) for e, c in d.items() if c != 0}
        if not items:
            return _WP_ZERO
        lo = min(items)
        hi = max(items)
        den = 1
        for c in items.values():
            den = den * c.denominator // gcd(den, c.denominator)
        nums = [0] * (hi - lo + 1)
        for e, c in items.items():
            nums[e - lo] = c.numerator * (den // c.denominator)
        return cls(lo, nums, den)

    # -- inspection ---------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.nums

    def __bool__(self) -> bool:
        return bool(self.nums)

    @property
    def min_exp(self) -> int:
        if not self.nums:
            raise ValueError("zero polynomial has no exponents")
        return self.off

    @property
    def max_exp(self) -> int:
        if not self.nums:
            raise ValueError("zero polynomial has no exponents")
        return self.off + len(self.nums) - 1

    def items(self) -> Iterator[tuple[int, Fraction]]:
        for i, x in enumerate(self.nums):
            if x:
                yield self.off + i, Fraction(x, self.den)

    def as_dict(self) -> dict[int, Fraction]:
        return dict(self.items())

    def coefficient(self, exp: int) -> Fraction:
        i = exp - self.off
        if 0 <= i < len(self.nums):
            return Fraction(self.nums[i], self.den)
        return Fraction(0)

    def monomial_parts(self) -> tuple[int, Fraction] | None:
        """``(exponent, coefficient)`` if this is a single term, else None."""
        if len(self.nums) != 1:
            return None
        return self.off, Fraction(self.nums[0], self.den)

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other: WindingPoly) -> WindingPoly:
        if not isinstance(other, WindingPoly):
            return NotImplemented
        if not self.nums:
            return other
        if not other.nums:
            return self
        lo = min(self.off, other.off)
        hi = max(self.off + len(self.nums), other.off + len(other.nums))
        da, db = self.den, other.den
        g = gcd(da, db)
        den = da // g * db
        ma, mb = den // da, den // db
        nums = [0] * (hi - lo)
        for i, x in enumerate(self.nums):
            nums[self.off - lo + i] = x * ma
        for i, x in enumerate(other.nums):
            nums[other.off - lo + i] += x * mb
        return WindingPoly(lo, nums, den)

    def __neg__(self) -> WindingPoly:
        if not self.nums:
            return self
        p = WindingPoly.__new__(WindingPoly)
        p.off, p.nums, p.den = self.off, tuple(-x for x in self.nums), self.den
        return p

    def __sub__(self, other: WindingPoly) -> WindingPoly:
        return self + (-other)

    def __mul__(self, other: WindingPoly | Fraction | int) -> WindingPoly:
        if isinstance(other, WindingPoly):
            if not self.nums or not other.nums:
                return _WP_ZERO
            nums = conv_ints(list(self.nums), list(other.nums))
            return WindingPoly(self.off + other.off, nums, self.den * other.den)
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    __rmul__ = __mul__

    def scale(self, c: Fraction | int) -> WindingPoly:
        c = Fraction(c)
        if c == 0 or not self.nums:
            return _WP_ZERO
        return WindingPoly(self.off, [x * c.numerator for x in self.nums], self.den * c.denominator)

    def shift(self, d: int) -> WindingPoly:
        """Multiply by ``s**d``."""
        if not self.nums or d == 0:
            return self
        p = WindingPoly.__new__(WindingPoly)
        p.off, p.nums, p.den = self.off + d, self.nums, self.den
        return p

    def exact_div(self, divisor: WindingPoly) -> WindingPoly:
        """Exact polynomial quotient; raises :class:`NonExactDivision`."""
        if divisor.is_zero:
            raise ZeroDivisionError("division by zero polynomial")
        if self.is_zero:
            return self
        dn = [Fraction(x, divisor.den) for x in divisor.nums]
        rem = [Fraction(x, self.den) for x in self.nums]
        qlen = len(rem) - len(dn) + 1
        if qlen <= 0:
            raise NonExactDivision(f"degree of {self!r} below degree of divisor")
        lead = dn[-1]
        quot = [Fraction(0)] * qlen
        for i in range(qlen - 1, -1, -1):
            c = rem[i + len(dn) - 1] / lead
            quot[i] = c
            if c:
                for j, dj in enumerate(dn):
                    rem[i + j] -= c * dj
        if any(rem):
            raise NonExactDivision(f"remainder {rem} dividing by {divisor!r}")
        return WindingPoly.from_dict(
            {self.off - divisor.off + i: c for i, c in enumerate(quot)}
        )

    @staticmethod
    def linear_combination(terms: Iterable[tuple[WindingPoly, Fraction | int]]) -> WindingPoly:
        """Sum of ``poly * scalar`` computed in one pass."""
        entries = []
        den = 1
        lo = None
        hi = None
        for p, c in terms:
            c = Fraction(c)
            if c == 0 or not p.nums:
                continue
            d = p.den * c.denominator
            entries.append((p, c.numerator, d))
            den = den * d // gcd(den, d)
            lo = p.off if lo is None else min(lo, p.off)
            hi = p.off + len(p.nums) if hi is None else max(hi, p.off + len(p.nums))
        if lo is None:
            return _WP_ZERO
        nums = [0] * (hi - lo)
        for p, cn, d in entries:
            m = cn * (den // d)
            base = p.off - lo
            for i, x in enumerate(p.nums):
                nums[base + i] += x * m
        return WindingPoly(lo, nums, den)

    # -- evaluation and display ----------------------------------------

    def __call__(self, s: complex) -> complex:
        if not self.nums:
            return 0j
        acc = 0j
        for x in reversed(self.nums):
            acc = acc * s + x
        return acc * s ** self.off / self.den

    def evaluate_exact(self, s: Fraction | int) -> Fraction:
        s = Fraction(s)
        acc = Fraction(0)
        for x in reversed(self.nums):
            acc = acc * s + x
        return acc * s ** self.off / self.den

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, WindingPoly):
            return NotImplemented
        return (self.off, self.nums, self.den) == (other.off, other.nums, other.den)

    def __hash__(self) -> int:
        return hash((self.off, self.nums, self.den))

    def __repr__(self) -> str:
        if not self.nums:
            return "WindingPoly(0)"
        parts = []
        for e, c in self.items():
            if e == 0:
                parts.append(f"{c}")
            elif e == 1:
                parts.append(f"{c}*s")
            else:
                parts.append(f"{c}*s^{e}")
        return "WindingPoly(" + " + ".join(parts) + ")"


_WP_ZERO = WindingPoly(0, ())
_WP_ONE = WindingPoly(0, (1,))
WP_S = WindingPoly(1, (1,))


def wp_exact_div(numerator: WindingPoly, divisor: WindingPoly) -> WindingPoly:
    """Checked exact division of Laurent polynomials in ``s``."""
    return numerator.exact_div(divisor)


def _as_poly(c) -> WindingPoly:
    if isinstance(c, WindingPoly):
        return c
    return WindingPoly.constant(c)


# ---------------------------------------------------------------------------
# rational power-series helpers (plain Fraction lists, dense from exponent 0)
# ---------------------------------------------------------------------------


def _fr_clear(a: list[Fraction]) -> tuple[list[int], int]:
    den = 1
    for c in a:
        den = den * c.denominator // gcd(den, c.denominator)
    return [c.numerator * (den // c.denominator) for c in a], den


def _fr_mul(a: list[Fraction], b: list[Fraction], n: int) -> list[Fraction]:
    """Product of rational series, keeping coefficients 0..n-1."""
    na, da = _fr_clear(a[:n])
    nb, db = _fr_clear(b[:n])
    nums = conv_ints(na, nb, n)
    den = da * db
    out = [Fraction(x, den) for x in nums]
    out.extend([Fraction(0)] * (n - len(out)))
    return out


def _fr_inv(a: list[Fraction], n: int) -> list[Fraction]:
    if not a or a[0] == 0:
        raise NotInvertible("constant term is zero")
    inv0 = 1 / a[0]
    out = [inv0] + [Fraction(0)] * (n - 1)
    for m in range(1, n):
        acc = Fraction(0)
        for k in range(1, min(m, len(a) - 1) + 1):
            if a[k]:
                acc += a[k] * out[m - k]
        out[m] = -acc * inv0
    return out


def _fr_pow(a: list[Fraction], e: int, n: int) -> list[Fraction]:
    res = [Fraction(1)] + [Fraction(0)] * (n - 1)
    base = a[:n]
    while e:
        if e & 1:
            res = _fr_mul(res, base, n)
        e >>= 1
        if e:
            base = _fr_mul(base, base, n)
    return res


def _fr_compose(outer: list[Fraction], inner: list[Fraction], n: int) -> list[Fraction]:
    """outer(inner(t)) to order n-1; inner must have zero constant term."""
    if inner and inner[0] != 0:
        raise ValueError("inner series must have zero constant term")
    res = [Fraction(0)] * n
    for c in reversed(outer):
        res = _fr_mul(res, inner, n)
        res[0] += c
    return res


# ---------------------------------------------------------------------------
# truncated Laurent series in r
# ---------------------------------------------------------------------------


class QSeries:
    """Truncated Laurent series in ``r`` with ``WindingPoly`` coefficients.

    ``coeffs`` maps r-exponent to a nonzero coefficient; everything beyond
    ``trunc`` is unknown (O(r^(trunc+1))).  Exponents may be negative.
    """

    __slots__ = ("coeffs", "trunc")

    def __init__(self, coeffs: dict[int, WindingPoly], trunc: int):
        self.coeffs = {e: c for e, c in coeffs.items() if e <= trunc and not c.is_zero}
        self.trunc = trunc

    @classmethod
    def zero(cls, trunc: int) -> QSeries:
        return cls({}, trunc)

    @classmethod
    def monomial(cls, exp: int, coeff, trunc: int) -> QSeries:
        return cls({exp: _as_poly(coeff)}, trunc)

    @property
    def min_exp(self) -> int | None:
        return min(self.coeffs) if self.coeffs else None

    def _eff_min(self) -> int:
        return min(self.coeffs) if self.coeffs else self.trunc + 1

    def coefficient(self, exp: int) -> WindingPoly:
        if exp > self.trunc:
            raise ValueError(f"r^{exp} is beyond truncation order {self.trunc}")
        return self.coeffs.get(exp, _WP_ZERO)

    def truncate(self, trunc: int) -> QSeries:
        if trunc >= self.trunc:
            return self
        return QSeries(self.coeffs, trunc)

    # -- ring operations -----------------------------------------------

    def __add__(self, other: QSeries) -> QSeries:
        t = min(self.trunc, other.trunc)
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            cur = out.get(e)
            out[e] = c if cur is None else cur + c
        return QSeries(out, t)

    def __neg__(self) -> QSeries:
        return QSeries({e: -c for e, c in self.coeffs.items()}, self.trunc)

    def __sub__(self, other: QSeries) -> QSeries:
        return self + (-other)

    def __mul__(self, other: QSeries) -> QSeries:
        if not isinstance(other, QSeries):
            return NotImplemented
        t = min(self.trunc + other._eff_min(), other.trunc + self._eff_min())
        buckets: dict[int, list[WindingPoly]] = {}
        for i, pa in self.coeffs.items():
            for j, pb in other.coeffs.items():
                e = i + j
                if e <= t:
                    buckets.setdefault(e, []).append(pa * pb)
        out = {}
        for e, lst in buckets.items():
            out[e] = lst[0] if len(lst) == 1 else WindingPoly.linear_combination(
                (p, 1) for p in lst
            )
        return QSeries(out, t)

    def scale(self, c) -> QSeries:
        p = _as_poly(c)
        if p.is_zero:
            return QSeries.zero(self.trunc)
        mono = p.monomial_parts()
        if mono is not None:
            j, fr = mono
            if j == 0:
                return QSeries({e: q.scale(fr) for e, q in self.coeffs.items()}, self.trunc)
            return QSeries(
                {e: q.shift(j).scale(fr) for e, q in self.coeffs.items()}, self.trunc
            )
        return QSeries({e: q * p for e, q in self.coeffs.items()}, self.trunc)

    def shift_r(self, d: int) -> QSeries:
        """Multiply by ``r**d``."""
        return QSeries({e + d: c for e, c in self.coeffs.items()}, self.trunc + d)

    def map_coefficients(self, fn: Callable[[WindingPoly], WindingPoly]) -> QSeries:
        return QSeries({e: fn(c) for e, c in self.coeffs.items()}, self.trunc)

    def exact_div_poly(self, divisor: WindingPoly) -> QSeries:
        """Divide every r-coefficient exactly by a polynomial in ``s``."""
        return self.map_coefficients(lambda c: c.exact_div(divisor))

    # -- inversion and division ----------------------------------------

    def _lead_monomial(self) -> tuple[int, int, Fraction]:
        if not self.coeffs:
            raise NonUnitLeadingCoefficient("cannot invert the zero series")
        m = min(self.coeffs)
        mono = self.coeffs[m].monomial_parts()
        if mono is None:
            raise NonUnitLeadingCoefficient(
                f"leading coefficient {self.coeffs[m]!r} at r^{m} is not a monomial"
            )
        return m, mono[0], mono[1]

    def invert(self, order: int | None = None) -> QSeries:
        """Multiplicative inverse; needs a monomial leading coefficient."""
        m, lj, lc = self._lead_monomial()
        t = self.trunc - 2 * m
        if order is not None:
            t = min(t, order)
        inv_lead = WindingPoly.monomial(-lj, 1 / lc)
        out = {-m: inv_lead}
        for e in range(-m + 1, t + 1):
            terms = []
            for j, pb in self.coeffs.items():
                if j == m:
                    continue
                x = out.get(e + m - j)
                if x is not None:
                    terms.append((pb * x, 1))
            if terms:
                acc = WindingPoly.linear_combination(terms)
                if not acc.is_zero:
                    out[e] = (-acc).shift(-lj).scale(1 / lc)
        return QSeries(out, t)

    def div(self, other: QSeries, order: int | None = None) -> QSeries:
        """Series quotient self/other via long division.

        Cheaper than ``other.invert()`` followed by a multiply when ``other``
        is sparse.  Same precondition on the leading coefficient.
        """
        mb, lj, lc = other._lead_monomial()
        ms = self._eff_min()
        t = min(self.trunc - mb, other.trunc - 2 * mb + ms)
        if order is not None:
            t = min(t, order)
        if not self.coeffs:
            return QSeries.zero(t)
        qmin = ms - mb
        out: dict[int, WindingPoly] = {}
        for e in range(qmin, t + 1):
            terms = []
            cur = self.coeffs.get(e + mb)
            if cur is not None:
                terms.append((cur, 1))
            for j, pb in other.coeffs.items():
                if j == mb:
                    continue
                x = out.get(e + mb - j)
                if x is not None:
                    terms.append((pb * x, -1))
            if terms:
                acc = WindingPoly.linear_combination(terms)
                if not acc.is_zero:
                    out[e] = acc.shift(-lj).scale(1 / lc)
        return QSeries(out, t)

    # -- substitution ---------------------------------------------------

    def substitute_t(self, r_of_t: TSeries) -> TSeries:
        """Compose with ``r = r_of_t(t)``; see :func:`qs_substitute_t`."""
        return qs_substitute_t(self, r_of_t)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, QSeries):
            return NotImplemented
        return self.trunc == other.trunc and self.coeffs == other.coeffs

    def __repr__(self) -> str:
        parts = [f"r^{e}: {c!r}" for e, c in sorted(self.coeffs.items())[:6]]
        more = "" if len(self.coeffs) <= 6 else ", ..."
        return f"QSeries({{{', '.join(parts)}{more}}}, trunc={self.trunc})"


def qs_invert(a: QSeries) -> QSeries:
    """Inverse of a truncated Laurent series with monomial leading coefficient."""
    return a.invert()


# ---------------------------------------------------------------------------
# truncated power series in t
# ---------------------------------------------------------------------------


class TSeries:
    """Truncated power series in ``t`` with ``WindingPoly`` coefficients."""

    __slots__ = ("coeffs", "trunc")

    def __init__(self, coeffs: Iterable, trunc: int | None = None):
        cs = [_as_poly(c) for c in coeffs]
        if trunc is None:
            trunc = len(cs) - 1
        if trunc < 0:
            raise ValueError("truncation order must be >= 0")
        cs = cs[: trunc + 1]
        cs.extend([_WP_ZERO] * (trunc + 1 - len(cs)))
        self.coeffs = tuple(cs)
        self.trunc = trunc

    @classmethod
    def zero(cls, trunc: int) -> TSeries:
        return cls([], trunc)

    @classmethod
    def one(cls, trunc: int) -> TSeries:
        return cls([_WP_ONE], trunc)

    @classmethod
    def identity(cls, trunc: int) -> TSeries:
        return cls([_WP_ZERO, _WP_ONE], trunc)

    @classmethod
    def from_fractions(cls, values: Iterable[Fraction | int], trunc: int | None = None) -> TSeries:
        return cls([WindingPoly.constant(v) for v in values], trunc)

    def coefficient(self, n: int) -> WindingPoly:
        if n > self.trunc:
            raise ValueError(f"t^{n} is beyond truncation order {self.trunc}")
        if n < 0:
            return _WP_ZERO
        return self.coeffs[n]

    @property
    def is_rational(self) -> bool:
        return self._rational_or_none() is not None

    def rational_list(self) -> list[Fraction]:
        out = []
        for c in self.coeffs:
            if c.is_zero:
                out.append(Fraction(0))
            else:
                mono = c.monomial_parts()
                if mono is None or mono[0] != 0:
                    raise ValueError(f"coefficient {c!r} is not a pure rational")
                out.append(mono[1])
        return out

    def valuation(self) -> int | None:
        for n, c in enumerate(self.coeffs):
            if not c.is_zero:
                return n
        return None

    def truncate(self, trunc: int) -> TSeries:
        if trunc >= self.trunc:
            return self
        return TSeries(self.coeffs[: trunc + 1], trunc)

    # -- arithmetic -----------------------------------------------------

    def __add__(self, other: TSeries) -> TSeries:
        t = min(self.trunc, other.trunc)
        return TSeries([self.coeffs[n] + other.coeffs[n] for n in range(t + 1)], t)

    def __neg__(self) -> TSeries:
        return TSeries([-c for c in self.coeffs], self.trunc)

    def __sub__(self, other: TSeries) -> TSeries:
        return self + (-other)

    def __mul__(self, other: TSeries) -> TSeries:
        if not isinstance(other, TSeries):
            return NotImplemented
        va = self.valuation()
        vb = other.valuation()
        eva = va if va is not None else self.trunc + 1
        evb = vb if vb is not None else other.trunc + 1
        t = min(self.trunc + evb, other.trunc + eva)
        if va is None or vb is None:
            return TSeries.zero(t)
        ra = self._rational_or_none()
        rb = other._rational_or_none()
        if ra is not None and rb is not None:
            vals = _fr_mul(ra, rb, t + 1)
            return TSeries.from_fractions(vals, t)
        out: list[list[tuple[WindingPoly, int]]] = [[] for _ in range(t + 1)]
        for i in range(va, min(self.trunc, t - vb) + 1):
            ci = self.coeffs[i]
            if ci.is_zero:
                continue
            for j in range(vb, min(other.trunc, t - i) + 1):
                cj = other.coeffs[j]
                if not cj.is_zero:
                    out[i + j].append((ci * cj, 1))
        return TSeries(
            [WindingPoly.linear_combination(lst) if lst else _WP_ZERO for lst in out], t
        )

    def _rational_or_none(self) -> list[Fraction] | None:
        out = []
        for c in self.coeffs:
            if c.is_zero:
                out.append(Fraction(0))
                continue
            mono = c.monomial_parts()
            if mono is None or mono[0] != 0:
                return None
            out.append(mono[1])
        return out

    def scale(self, c) -> TSeries:
        p = _as_poly(c)
        return TSeries([q * p for q in self.coeffs], self.trunc)

    def invert(self, order: int | None = None) -> TSeries:
        """Inverse of a series whose constant term is an invertible monomial."""
        c0 = self.coeffs[0]
        mono = c0.monomial_parts()
        if mono is None:
            raise NotInvertible(f"constant coefficient {c0!r} is not invertible")
        t = self.trunc if order is None else min(order, self.trunc)
        ra = self._rational_or_none()
        if ra is not None:
            return TSeries.from_fractions(_fr_inv(ra, t + 1), t)
        j0, f0 = mono
        inv0 = WindingPoly.monomial(-j0, 1 / f0)
        out = [inv0] + [_WP_ZERO] * t
        for m in range(1, t + 1):
            terms = []
            for k in range(1, m + 1):
                ck = self.coeffs[k]
                if not ck.is_zero and not out[m - k].is_zero:
                    terms.append((ck * out[m - k], -1))
            if terms:
                out[m] = WindingPoly.linear_combination(terms) * inv0
        return TSeries(out, t)

    # -- evaluation -----------------------------------------------------

    def evaluate(self, t: complex, s: complex = 1.0) -> complex:
        acc = 0j
        for c in reversed(self.coeffs):
            acc = acc * t + c(s)
        return acc

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TSeries):
            return NotImplemented
        return self.trunc == other.trunc and self.coeffs == other.coeffs

    def __repr__(self) -> str:
        parts = [f"t^{n}: {c!r}" for n, c in enumerate(self.coeffs[:5]) if not c.is_zero]
        return f"TSeries([{', '.join(parts)}...], trunc={self.trunc})"


# ---------------------------------------------------------------------------
# reversion
# ---------------------------------------------------------------------------


def ts_revert(f: TSeries) -> TSeries:
    """Compositional inverse of a rational series ``f = c1*t + ...``.

    Returns ``g`` with ``f(g(t)) = t`` up to the truncation order of ``f``.
    Uses Newton iteration with order doubling; when the support of ``f`` lies
    on a sublattice ``1 + d*Z`` the work is done on the compressed series.
    """
    try:
        fr = f.rational_list()
    except ValueError as exc:
        raise NotInvertible(f"reversion needs pure rational coefficients: {exc}") from exc
    if not fr or fr[0] != 0:
        raise NotInvertible("constant term must be zero")
    if f.trunc < 1 or fr[1] == 0:
        raise NotInvertible("linear coefficient must be invertible")
    support = [e for e, c in enumerate(fr) if c and e > 1]
    d = 0
    for e in support:
        d = gcd(d, e - 1)
    if d == 0:
        d = max(f.trunc, 1)
    nh = (f.trunc - 1) // d + 1
    h = [fr[1 + j * d] for j in range(nh)]
    u = _revert_unit(h, d, nh)
    out = [Fraction(0)] * (f.trunc + 1)
    for j, c in enumerate(u):
        if 1 + j * d <= f.trunc:
            out[1 + j * d] = c
    return TSeries.from_fractions(out, f.trunc)


def _revert_unit(h: list[Fraction], d: int, n: int) -> list[Fraction]:
    """Solve u(w) * h(w * u(w)**d) = 1 to order n-1 by Newton iteration."""
    hp = [k * c for k, c in enumerate(h)][1:] or [Fraction(0)]
    u = [1 / h[0]]
    order = 1
    while order < n:
        order = min(2 * order, n)
        u = u + [Fraction(0)] * (order - len(u))
        omega = _fr_pow(u, d, order)
        omega = [Fraction(0)] + omega[: order - 1]  # times w
        h_at = _fr_compose(h, omega, order)
        f_val = _fr_mul(u, h_at, order)
        f_val[0] -= 1
        if any(f_val):
            hp_at = _fr_compose(hp, omega, order)
            deriv = [a + d * b for a, b in zip(h_at, _fr_mul(omega, hp_at, order))]
            corr = _fr_mul(f_val, _fr_inv(deriv, order), order)
            u = [a - b for a, b in zip(u, corr)]
    return u[:n]


# ---------------------------------------------------------------------------
# substitution r -> r(t)
# ---------------------------------------------------------------------------


def qs_substitute_t(a: QSeries, r_of_t: TSeries) -> TSeries:
    """Exact composition ``a(r_of_t(t))`` as a truncated series in ``t``.

    ``r_of_t`` must be a rational series with zero constant term.  Negative
    r-exponents in ``a`` are admitted as long as the composed series has no
    pole in ``t``; otherwise :class:`NegativeTExponent` is raised.
    """
    rv = r_of_t.rational_list()
    if rv and rv[0] != 0:
        raise ValueError("substitution series must have zero constant term")
    val = next((i for i, c in enumerate(rv) if c), None)
    t_out = min(a.trunc, r_of_t.trunc)
    if not a.coeffs:
        return TSeries.zero(t_out)
    if val is None:
        raise ValueError("cannot substitute the zero series")
    n = t_out + 1
    exps = sorted(a.coeffs)
    # r = t^val * w with w a unit; negative exponents shift targets down, so
    # unit powers must be carried a little past t_out to reach them all.
    nn = n + max(0, -val * exps[0])
    w = rv[val:] + [Fraction(0)] * val
    pow_cache: dict[int, list[Fraction]] = {}

    def w_pow(e: int) -> list[Fraction]:
        p = pow_cache.get(e)
        if p is None:
            p = _fr_pow(w, e, nn) if e >= 0 else _fr_pow(_fr_inv(w, nn), -e, nn)
            pow_cache[e] = p
        return p

    out: list[list[tuple[WindingPoly, Fraction]]] = [[] for _ in range(n)]
    neg: dict[int, list[tuple[WindingPoly, Fraction]]] = {}
    e0 = exps[0]
    cur = w_pow(e0)
    cur_exp = e0
    for e in exps:
        if e != cur_exp:
            cur = _fr_mul(cur, w_pow(e - cur_exp), nn)
            cur_exp = e
        shift = val * e
        ce = a.coeffs[e]
        for j, frc in enumerate(cur):
            if not frc:
                continue
            tgt = shift + j
            if tgt < 0:
                neg.setdefault(tgt, []).append((ce, frc))
            elif tgt < n:
                out[tgt].append((ce, frc))
    for tgt, lst in neg.items():
        residue = WindingPoly.linear_combination(lst)
        if not residue.is_zero:
            raise NegativeTExponent(
                f"composed series has nonzero coefficient {residue!r} at t^{tgt}"
            )
    return TSeries(
        [WindingPoly.linear_combination(lst) if lst else _WP_ZERO for lst in out],
        t_out,
    )
