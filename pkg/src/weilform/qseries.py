"""Exact truncated Laurent series in q^(1/denom) with rational coefficients.

A FracQSeries stores integer "scaled" exponents e (true exponent e/denom) and
an exclusive truncation bound: every coefficient at a scaled exponent >= trunc
is unknown.  ``trunc=None`` marks an exact (finite) series.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Mapping, Union

from .arith import divisor_sigma_table, divisors, lcm_all

Number = Union[int, Fraction]

_SCHOOLBOOK_LIMIT = 24
_DENSE_FILL = 0.25


def _min_trunc(a: int | None, b: int | None) -> int | None:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def _convolve(a: list[int], b: list[int], length: int) -> list[int]:
    """First ``length`` coefficients of the product of two integer polynomials."""
    a = a[:length]
    b = b[:length]
    if not a or not b:
        return [0] * length
    if min(len(a), len(b)) <= _SCHOOLBOOK_LIMIT:
        out = [0] * length
        if len(a) > len(b):
            a, b = b, a
        for i, x in enumerate(a):
            if x:
                for j in range(min(len(b), length - i)):
                    out[i + j] += x * b[j]
        return out
    # Kronecker substitution: pack each polynomial into one big integer.
    bound = max(abs(x) for x in a) * max(abs(y) for y in b) * min(len(a), len(b))
    bits = bound.bit_length() + 2
    # Signed digits: each output digit is recovered as the balanced residue.
    product = _pack(a, bits) * _pack(b, bits)
    return _unpack(product, bits, length, 1 << (bits - 1))


def _pack(coeffs: list[int], shift: int) -> int:
    value = 0
    for c in reversed(coeffs):
        value = (value << shift) + c
    return value


def _unpack(value: int, shift: int, length: int, half: int) -> list[int]:
    mask = (1 << shift) - 1
    out = []
    for _ in range(length):
        digit = value & mask
        if digit >= half:
            digit -= 1 << shift
        out.append(digit)
        value = (value - digit) >> shift
    return out


def _unit_power(g: list[tuple[int, Fraction | int]], r: int, length: int) -> list:
    """Coefficients 0..length-1 of (1 + g)^r where g = sum c_k x^k, k >= 1.

    Uses the J.C.P. Miller recurrence, so the cost is O(length * len(g)).
    """
    integral = all(isinstance(c, int) or c.denominator == 1 for _, c in g)
    out: list = [1] + [0] * (length - 1)
    if integral:
        gi = [(k, int(c)) for k, c in g if k < length]
        for n in range(1, length):
            s = 0
            for k, c in gi:
                if k > n:
                    break
                s += ((r + 1) * k - n) * c * out[n - k]
            value, rem = divmod(s, n)
            if rem:
                raise ArithmeticError("non-integral power coefficient")
            out[n] = value
        return out
    gf = [(k, Fraction(c)) for k, c in g if k < length]
    for n in range(1, length):
        s = Fraction(0)
        for k, c in gf:
            if k > n:
                break
            s += ((r + 1) * k - n) * c * out[n - k]
        out[n] = s / n
    return out


class FracQSeries:
    """Immutable truncated Laurent series in q^(1/denom)."""

    __slots__ = ("_denom", "_coeffs", "_trunc")

    def __init__(
        self,
        coeffs: Mapping[int, Number] | None = None,
        trunc: int | None = None,
        denom: int = 1,
    ):
        if denom < 1:
            raise ValueError("denom must be positive")
        clean: dict[int, Fraction] = {}
        for e, c in (coeffs or {}).items():
            if int(e) != e:
                raise ValueError("scaled exponents must be integers")
            c = Fraction(c)
            if c and (trunc is None or e < trunc):
                clean[int(e)] = c
        self._init(clean, trunc, denom)

    def _init(self, coeffs: dict[int, Fraction], trunc: int | None, denom: int) -> None:
        g = denom
        if trunc is not None:
            g = gcd(g, trunc)
        for e in coeffs:
            if g == 1:
                break
            g = gcd(g, e)
        if g > 1:
            coeffs = {e // g: c for e, c in coeffs.items()}
            trunc = None if trunc is None else trunc // g
            denom //= g
        self._denom = denom
        self._coeffs = dict(sorted(coeffs.items()))
        self._trunc = trunc

    @classmethod
    def _raw(cls, coeffs: dict[int, Fraction], trunc: int | None, denom: int) -> "FracQSeries":
        obj = object.__new__(cls)
        obj._init(coeffs, trunc, denom)
        return obj

    # -- constructors --------------------------------------------------------

    @classmethod
    def from_terms(cls, terms: Mapping[Number, Number], trunc: Number | None = None) -> "FracQSeries":
        """Build from true (possibly fractional) exponents."""
        exps = [Fraction(e) for e in terms]
        if trunc is not None:
            exps.append(Fraction(trunc))
        denom = lcm_all(e.denominator for e in exps) if exps else 1
        coeffs = {int(Fraction(e) * denom): c for e, c in terms.items()}
        t = None if trunc is None else int(Fraction(trunc) * denom)
        return cls(coeffs, t, denom)

    @classmethod
    def zero(cls, trunc: Number | None = None) -> "FracQSeries":
        return cls.from_terms({}, trunc)

    @classmethod
    def monomial(cls, exponent: Number = 0, coeff: Number = 1, trunc: Number | None = None) -> "FracQSeries":
        return cls.from_terms({exponent: coeff}, trunc)

    # -- accessors -----------------------------------------------------------

    @property
    def denom(self) -> int:
        return self._denom

    @property
    def coeffs(self) -> dict[int, Fraction]:
        return dict(self._coeffs)

    @property
    def trunc(self) -> int | None:
        return self._trunc

    @property
    def precision(self) -> Fraction | None:
        """True-exponent truncation bound (None for exact series)."""
        return None if self._trunc is None else Fraction(self._trunc, self._denom)

    def is_zero(self) -> bool:
        return not self._coeffs

    def is_exact(self) -> bool:
        return self._trunc is None

    def valuation(self) -> Fraction | None:
        if not self._coeffs:
            return None
        return Fraction(next(iter(self._coeffs)), self._denom)

    def leading_coefficient(self) -> Fraction:
        if not self._coeffs:
            raise ValueError("zero series has no leading coefficient")
        return next(iter(self._coeffs.values()))

    def coefficient(self, exponent: Number) -> Fraction:
        e = Fraction(exponent)
        if self._trunc is not None and e >= Fraction(self._trunc, self._denom):
            raise ValueError(f"coefficient of q^{e} lies beyond the truncation O(q^{self.precision})")
        scaled = e * self._denom
        if scaled.denominator != 1:
            return Fraction(0)
        return self._coeffs.get(int(scaled), Fraction(0))

    __getitem__ = coefficient

    def items(self) -> list[tuple[Fraction, Fraction]]:
        return [(Fraction(e, self._denom), c) for e, c in self._coeffs.items()]

    def __len__(self) -> int:
        return len(self._coeffs)

    # -- structural operations -------------------------------------------------

    def truncate(self, bound: Number) -> "FracQSeries":
        b = Fraction(bound)
        if self._trunc is not None and b >= Fraction(self._trunc, self._denom):
            return self
        denom = lcm_all([self._denom, b.denominator])
        f = denom // self._denom
        t = int(b * denom)
        return FracQSeries._raw({e * f: c for e, c in self._coeffs.items() if e * f < t}, t, denom)

    def rescale(self, m: int) -> "FracQSeries":
        """Substitute q -> q^m."""
        if m < 1:
            raise ValueError("rescale factor must be a positive integer")
        t = None if self._trunc is None else self._trunc * m
        return FracQSeries._raw({e * m: c for e, c in self._coeffs.items()}, t, self._denom)

    def shift(self, exponent: Number) -> "FracQSeries":
        """Multiply by q^exponent."""
        s = Fraction(exponent)
        denom = lcm_all([self._denom, s.denominator])
        f = denom // self._denom
        k = int(s * denom)
        t = None if self._trunc is None else self._trunc * f + k
        return FracQSeries._raw({e * f + k: c for e, c in self._coeffs.items()}, t, denom)

    def with_denom(self, denom: int) -> tuple[dict[int, Fraction], int | None]:
        """Coefficients and truncation rewritten over a multiple of the denominator."""
        if denom % self._denom:
            raise ValueError("target denominator must be a multiple")
        f = denom // self._denom
        t = None if self._trunc is None else self._trunc * f
        return {e * f: c for e, c in self._coeffs.items()}, t

    # -- arithmetic ------------------------------------------------------------

    @staticmethod
    def _coerce(x) -> "FracQSeries":
        if isinstance(x, FracQSeries):
            return x
        if isinstance(x, (int, Fraction)):
            return FracQSeries._raw({0: Fraction(x)} if x else {}, None, 1)
        return NotImplemented

    def _unify(self, other: "FracQSeries"):
        denom = self._denom * other._denom // gcd(self._denom, other._denom)
        a, ta = self.with_denom(denom)
        b, tb = other.with_denom(denom)
        return denom, a, ta, b, tb

    def __add__(self, other):
        other = FracQSeries._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        denom, a, ta, b, tb = self._unify(other)
        t = _min_trunc(ta, tb)
        out = dict(a)
        for e, c in b.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        if t is not None:
            out = {e: c for e, c in out.items() if e < t}
        return FracQSeries._raw(out, t, denom)

    __radd__ = __add__

    def __neg__(self) -> "FracQSeries":
        return FracQSeries._raw({e: -c for e, c in self._coeffs.items()}, self._trunc, self._denom)

    def __sub__(self, other):
        other = FracQSeries._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = FracQSeries._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def scale(self, c: Number) -> "FracQSeries":
        c = Fraction(c)
        if not c:
            return FracQSeries._raw({}, self._trunc, self._denom)
        return FracQSeries._raw({e: v * c for e, v in self._coeffs.items()}, self._trunc, self._denom)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, FracQSeries):
            return NotImplemented
        return _mul(self, other)

    __rmul__ = __mul__

    def inverse(self) -> "FracQSeries":
        if not self._coeffs:
            raise ZeroDivisionError("inverse of a zero series")
        v = next(iter(self._coeffs))
        c = self._coeffs[v]
        if len(self._coeffs) == 1 and self._trunc is None:
            return FracQSeries._raw({-v: 1 / c}, None, self._denom)
        if self._trunc is None:
            raise ValueError("inverse of an exact non-monomial series needs a truncation")
        return self._unit_pow(-1)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(1 / Fraction(other))
        if not isinstance(other, FracQSeries):
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = FracQSeries._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, n: int) -> "FracQSeries":
        if int(n) != n:
            raise ValueError("only integer powers are supported")
        n = int(n)
        if n == 0:
            return FracQSeries._raw({0: Fraction(1)}, None, 1)
        if not self._coeffs:
            if n < 0:
                raise ZeroDivisionError("negative power of a zero series")
            t = None if self._trunc is None else self._trunc * n
            return FracQSeries._raw({}, t, self._denom)
        if self._trunc is None:
            if n < 0:
                return self.inverse() ** (-n)
            result, base = None, self
            while n:
                if n & 1:
                    result = base if result is None else result * base
                n >>= 1
                if n:
                    base = base * base
            return result
        return self._unit_pow(n)

    def _unit_pow(self, n: int) -> "FracQSeries":
        """Power of a truncated series with nonzero leading term via Miller's recurrence."""
        items = list(self._coeffs.items())
        v, c = items[0]
        stride = 0
        for e, _ in items[1:]:
            stride = gcd(stride, e - v)
        rel = self._trunc - v
        if stride == 0:
            stride = rel
        length = _ceil_div(rel, stride)
        g = [((e - v) // stride, x / c) for e, x in items[1:]]
        powers = _unit_power(g, n, length)
        lead = c**n
        out = {n * v + i * stride: lead * p for i, p in enumerate(powers) if p}
        return FracQSeries._raw(out, n * v + rel, self._denom)

    # -- comparison, hashing, printing ----------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = FracQSeries._coerce(other)
        if not isinstance(other, FracQSeries):
            return NotImplemented
        return (
            self._denom == other._denom
            and self._trunc == other._trunc
            and self._coeffs == other._coeffs
        )

    def __hash__(self) -> int:
        return hash((self._denom, self._trunc, tuple(self._coeffs.items())))

    def agrees_with(self, other: "FracQSeries", bound: Number | None = None) -> bool:
        """Coefficientwise agreement below ``bound`` (default: the common precision)."""
        limits = [p for p in (self.precision, other.precision) if p is not None]
        if bound is not None:
            limits.append(Fraction(bound))
        if not limits:
            return self == other
        b = min(limits)
        return self.truncate(b) - other.truncate(b) == FracQSeries.zero(b)

    def __repr__(self) -> str:
        return f"FracQSeries({self})"

    def __str__(self) -> str:
        parts: list[str] = []
        for e, c in self.items():
            mono = _render_power(e)
            if not mono:
                body = str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}*{mono}"
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(("+ " if c > 0 else "- ") + body)
        if self._trunc is not None:
            tail = f"O({_render_power(self.precision) or 'q^0'})"
            parts.append(("+ " if parts else "") + tail)
        return " ".join(parts) if parts else "0"

    # -- serialization ---------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "denom": self._denom,
            "terms": [[e, str(c)] for e, c in self._coeffs.items()],
            "trunc": self._trunc,
        }

    @classmethod
    def from_json(cls, payload: Mapping) -> "FracQSeries":
        try:
            denom = int(payload["denom"])
            trunc = payload["trunc"]
            terms = {int(e): Fraction(c) for e, c in payload["terms"]}
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed series payload: {exc}") from None
        return cls(terms, None if trunc is None else int(trunc), denom)


def _render_power(e: Fraction) -> str:
    if e == 0:
        return ""
    if e == 1:
        return "q"
    if e.denominator == 1:
        return f"q^{e.numerator}"
    return f"q^({e})"


def _mul(a: FracQSeries, b: FracQSeries) -> FracQSeries:
    denom, ca, ta, cb, tb = a._unify(b)
    va = next(iter(ca)) if ca else ta
    vb = next(iter(cb)) if cb else tb
    # Truncation of the product; an exact zero contributes no bound.
    bounds = []
    if tb is not None and va is not None:
        bounds.append(va + tb)
    if ta is not None and vb is not None:
        bounds.append(vb + ta)
    t = min(bounds) if bounds else None
    if not ca or not cb:
        return FracQSeries._raw({}, t, denom)
    stride = 0
    for e in ca:
        stride = gcd(stride, e - va)
    for e in cb:
        stride = gcd(stride, e - vb)
    if stride == 0:
        c = ca[va] * cb[vb]
        e = va + vb
        return FracQSeries._raw({e: c} if t is None or e < t else {}, t, denom)
    base = va + vb
    if t is None:
        length = (next(reversed(ca)) - va) // stride + (next(reversed(cb)) - vb) // stride + 1
    else:
        length = _ceil_div(t - base, stride)
    if length <= 0:
        return FracQSeries._raw({}, t, denom)
    span_a = min(length, (next(reversed(ca)) - va) // stride + 1)
    span_b = min(length, (next(reversed(cb)) - vb) // stride + 1)
    dense = len(ca) > _DENSE_FILL * span_a and len(cb) > _DENSE_FILL * span_b
    if dense and min(span_a, span_b) > _SCHOOLBOOK_LIMIT:
        da = lcm_all(c.denominator for c in ca.values())
        db = lcm_all(c.denominator for c in cb.values())
        arr_a = [0] * span_a
        for e, c in ca.items():
            i = (e - va) // stride
            if i < span_a:
                arr_a[i] = c.numerator * (da // c.denominator)
        arr_b = [0] * span_b
        for e, c in cb.items():
            i = (e - vb) // stride
            if i < span_b:
                arr_b[i] = c.numerator * (db // c.denominator)
        conv = _convolve(arr_a, arr_b, length)
        scale = da * db
        out = {base + i * stride: Fraction(x, scale) for i, x in enumerate(conv) if x}
        return FracQSeries._raw(out, t, denom)
    out: dict[int, Fraction] = {}
    items_b = list(cb.items())
    for ea, xa in ca.items():
        for eb, xb in items_b:
            e = ea + eb
            if t is not None and e >= t:
                break
            out[e] = out.get(e, 0) + xa * xb
    return FracQSeries._raw({e: c for e, c in out.items() if c}, t, denom)


# -- generators -------------------------------------------------------------------


def product_expand(exponents: Mapping[int, Number], weyl: Number, order: int) -> FracQSeries:
    """q^weyl * prod_{1 <= n < order} (1 - q^n)^(e_n), known to O(q^(weyl + order))."""
    if order < 1:
        raise ValueError("order must be at least 1")
    missing = [n for n in range(1, order) if n not in exponents]
    if missing:
        raise ValueError(f"exponent e_n missing for n = {missing[0]}")
    e = {n: Fraction(exponents[n]) for n in range(1, order)}
    integral = all(x.denominator == 1 for x in e.values())
    # log-derivative: q F'/F = -sum_n sigma_n q^n with sigma_n = sum_{d | n} d e_d
    sigma = [0] * order
    for d in range(1, order):
        if e[d]:
            de = d * (int(e[d]) if integral else e[d])
            for m in range(d, order, d):
                sigma[m] += de
    terms = [(k, s) for k, s in enumerate(sigma) if k and s]
    f: list = [1] + [0] * (order - 1)
    for n in range(1, order):
        s = 0
        for k, sk in terms:
            if k > n:
                break
            s += sk * f[n - k]
        if integral:
            value, rem = divmod(-s, n)
            if rem:
                raise ArithmeticError("non-integral product coefficient")
            f[n] = value
        else:
            f[n] = Fraction(-s) / n
    series = FracQSeries({n: c for n, c in enumerate(f) if c}, order, 1)
    return series.shift(weyl)


def extract_exponents(f: FracQSeries, order: int | None = None) -> tuple[Fraction, dict[int, Fraction]]:
    """Recover (weyl, e_n) with f = q^weyl * prod (1 - q^n)^(e_n), for n below the order."""
    if f.is_zero():
        raise ValueError("cannot factor a zero series")
    weyl = f.valuation()
    if f.leading_coefficient() != 1:
        raise ValueError("leading coefficient must be 1")
    g = f.shift(-weyl)
    if g.denom != 1:
        raise ValueError("series is not q^weyl times a power series in q")
    limit = g.trunc if g.trunc is not None else max(g.coeffs) + 1
    if order is not None:
        limit = min(limit, order)
    b = [g.coefficient(n) for n in range(limit)]
    # L = q g'/g = sum L_n q^n with n b_n = sum_{k=1}^n L_k b_{n-k}
    L = [Fraction(0)] * limit
    e: dict[int, Fraction] = {}
    for n in range(1, limit):
        s = n * b[n]
        for k in range(1, n):
            if b[n - k]:
                s -= L[k] * b[n - k]
        L[n] = s
        # L_n = -sum_{d | n} d e_d
        acc = -L[n]
        for d in divisors(n):
            if d < n:
                acc -= d * e[d]
        e[n] = acc / n
    return weyl, e


@lru_cache(maxsize=64)
def _euler_product(order: int) -> FracQSeries:
    """prod_{n >= 1} (1 - q^n) known to O(q^order)."""
    return product_expand({n: 1 for n in range(1, order)}, 0, order)


def eta(scale: int = 1, order: int = 50) -> FracQSeries:
    """q^(scale/24) prod (1 - q^(scale n)) with the product known to O(q^order)."""
    if scale < 1 or order < 1:
        raise ValueError("scale and order must be positive")
    k = _ceil_div(order, scale)
    body = _euler_product(k).rescale(scale).truncate(order)
    return body.shift(Fraction(scale, 24))


def eta_quotient(r: Mapping[int, int], order: int) -> FracQSeries:
    """prod_d eta(d tau)^(r_d), known to relative precision O(q^order)."""
    weyl = Fraction(sum(d * x for d, x in r.items()), 24)
    result = FracQSeries({0: 1}, order, 1)
    for d, x in sorted(r.items()):
        if not x:
            continue
        k = _ceil_div(order, d)
        part = (_euler_product(k) ** x).rescale(d)
        result = result * part
    return result.shift(weyl)


def theta(order: int) -> FracQSeries:
    """Jacobi theta sum_{n in Z} q^(n^2) to O(q^order)."""
    if order < 1:
        raise ValueError("order must be at least 1")
    coeffs = {0: Fraction(1)}
    n = 1
    while n * n < order:
        coeffs[n * n] = Fraction(2)
        n += 1
    return FracQSeries(coeffs, order, 1)


_EISENSTEIN_FACTOR = {4: 240, 6: -504, 8: 480, 10: -264, 14: -24}


def eisenstein_series(weight: int, order: int) -> FracQSeries:
    """Normalized level-one Eisenstein series E_k = 1 - (2k/B_k) sum sigma_{k-1}(n) q^n."""
    if weight not in _EISENSTEIN_FACTOR:
        raise ValueError(f"unsupported Eisenstein weight {weight}")
    c = _EISENSTEIN_FACTOR[weight]
    sig = divisor_sigma_table(weight - 1, order)
    coeffs = {0: Fraction(1)}
    coeffs.update({n: Fraction(c * sig[n]) for n in range(1, order)})
    return FracQSeries(coeffs, order, 1)


def j_invariant(order: int) -> FracQSeries:
    """Klein's j = E4^3/Delta, known to O(q^order)."""
    if order < 1:
        raise ValueError("order must be at least 1")
    e4 = eisenstein_series(4, order + 1)
    delta = eta(1, order + 2) ** 24
    return (e4**3 / delta).truncate(order)


def series_sum(terms: Iterable[FracQSeries]) -> FracQSeries:
    out = None
    for t in terms:
        out = t if out is None else out + t
    return out if out is not None else FracQSeries.zero()
