"""Exact real scalars of the form sum(q_k * sqrt(k)).

Every amplitude that shows up in the measurement protocols is a rational
combination of square roots of integers.  A :class:`RadicalScalar` keeps
those as a sparse map ``{k: q_k}`` with ``k`` squarefree and ``q_k`` a
nonzero :class:`fractions.Fraction`.  Because the square roots of distinct
squarefree integers are linearly independent over the rationals, two scalars
are equal exactly when their maps are equal.

>>> half_root2 = sqrt_int(2) / 2
>>> half_root2 * half_root2
RadicalScalar('1/2')
>>> str(sqrt_int(12))
'2*sqrt(3)'
"""

from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt, sqrt
import numbers

from .errors import NonMonomialNorm, NotMonomial

__all__ = [
    "RadicalScalar",
    "sqrt_int",
    "sqrt_rational",
    "invert_monomial",
    "to_float",
    "as_scalar",
    "ZERO",
    "ONE",
]


@lru_cache(maxsize=4096)
def _split_square(n):
    """Return ``(c, d)`` with ``n == c*c*d`` and ``d`` squarefree."""
    c, d = 1, n
    p = 2
    while p * p <= d:
        pp = p * p
        while d % pp == 0:
            d //= pp
            c *= p
        p += 1 if p == 2 else 2
    return c, d


@lru_cache(maxsize=4096)
def _mul_keys(a, b):
    # sqrt(a)*sqrt(b) for squarefree a, b: with g = gcd(a, b) the cofactors
    # a/g, b/g are coprime to each other and to g, so the product is squarefree.
    g = gcd(a, b)
    return g, (a // g) * (b // g)


class RadicalScalar:
    """Immutable exact real number ``sum(q_k * sqrt(k))``.

    Construct with :func:`sqrt_int`, :func:`as_scalar` or from a mapping of
    squarefree keys to rationals.  Supports ``+ - *``, division by monomials,
    ``==``/``hash`` on the canonical form, and ``float()``.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms=None):
        clean = {}
        if terms:
            for k, q in terms.items():
                if not isinstance(k, int) or k < 1:
                    raise ValueError(f"radical key must be a positive integer, got {k!r}")
                if type(q) is not Fraction:
                    q = Fraction(q)
                if q == 0:
                    continue
                c, d = _split_square(k)
                if c != 1:
                    q *= c
                clean[d] = clean.get(d, 0) + q
            clean = {k: q for k, q in clean.items() if q != 0}
        self._terms = clean
        self._hash = None

    @classmethod
    def _from_canonical(cls, terms):
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @property
    def terms(self):
        """Copy of the canonical ``{squarefree key: Fraction}`` map."""
        return dict(self._terms)

    def items(self):
        return sorted(self._terms.items())

    def is_zero(self):
        return not self._terms

    def is_monomial(self):
        return len(self._terms) == 1

    def is_rational(self):
        return not self._terms or (len(self._terms) == 1 and 1 in self._terms)

    def rational_value(self):
        """The value as a Fraction; raises ``ValueError`` if irrational."""
        if not self._terms:
            return Fraction(0)
        if self.is_rational():
            return self._terms[1]
        raise ValueError(f"{self} is not rational")

    # -- arithmetic -----------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if not other._terms:
            return self
        if not self._terms:
            return other
        out = dict(self._terms)
        for k, q in other._terms.items():
            s = out.get(k, 0) + q
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return RadicalScalar._from_canonical(out)

    __radd__ = __add__

    def __neg__(self):
        return RadicalScalar._from_canonical({k: -q for k, q in self._terms.items()})

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        out = {}
        for ka, qa in self._terms.items():
            for kb, qb in other._terms.items():
                g, k = _mul_keys(ka, kb)
                q = qa * qb
                if g != 1:
                    q *= g
                s = out.get(k, 0) + q
                if s:
                    out[k] = s
                else:
                    out.pop(k, None)
        return RadicalScalar._from_canonical(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        try:
            inv = invert_monomial(other)
        except NotMonomial as exc:
            raise type(exc)(f"cannot divide by non-monomial {other}") from None
        return self * inv

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other / self

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        out, base = ONE, self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- comparison / conversion ----------------------------------------

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            # rational values hash like the equal Fraction/int
            if self.is_rational():
                self._hash = hash(self.rational_value())
            else:
                self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self._terms)

    def sign(self):
        """-1, 0 or 1.  Exact when the scalar is monomial, float-based otherwise."""
        if not self._terms:
            return 0
        if len(self._terms) == 1:
            (q,) = self._terms.values()
            return 1 if q > 0 else -1
        return 1 if float(self) > 0 else -1

    def __float__(self):
        return to_float(self)

    def __repr__(self):
        return f"RadicalScalar({str(self)!r})"

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for i, (k, q) in enumerate(sorted(self._terms.items())):
            mag = _render_monomial(k, abs(q))
            if i == 0:
                parts.append(mag if q > 0 else "-" + mag)
            else:
                parts.append((" + " if q > 0 else " - ") + mag)
        return "".join(parts)


def _render_monomial(k, q):
    if k == 1:
        return str(q)
    if q == 1:
        return f"sqrt({k})"
    return f"{q}*sqrt({k})"


def _coerce(x):
    if isinstance(x, RadicalScalar):
        return x
    if isinstance(x, (numbers.Rational)):
        q = Fraction(x)
        return RadicalScalar._from_canonical({1: q} if q else {})
    return NotImplemented


def as_scalar(x):
    """Coerce an int, Fraction, or ``'p/q'`` string to a RadicalScalar."""
    if isinstance(x, str):
        x = Fraction(x)
    out = _coerce(x)
    if out is NotImplemented:
        raise TypeError(f"cannot convert {type(x).__name__} to RadicalScalar")
    return out


ZERO = RadicalScalar()
ONE = RadicalScalar({1: 1})


def sqrt_int(n):
    """Exact ``sqrt(n)`` for a positive integer, reduced to ``c*sqrt(d)``."""
    if not isinstance(n, numbers.Integral) or n < 1:
        raise ValueError(f"sqrt_int needs a positive integer, got {n!r}")
    c, d = _split_square(int(n))
    return RadicalScalar._from_canonical({d: Fraction(c)})


def sqrt_rational(x):
    """Exact square root of a non-negative rational scalar.

    ``sqrt(p/q) == sqrt(p*q)/q``, always a monomial.  Raises
    :class:`NonMonomialNorm` if ``x`` is not rational and ``ValueError`` if
    it is negative.
    """
    x = as_scalar(x) if not isinstance(x, RadicalScalar) else x
    if not x.is_rational():
        raise NonMonomialNorm(f"sqrt({x}) has no exact monomial form")
    q = x.rational_value()
    if q < 0:
        raise ValueError(f"sqrt of negative value {q}")
    if q == 0:
        return ZERO
    root = isqrt(q.numerator * q.denominator)
    if root * root == q.numerator * q.denominator:
        return RadicalScalar._from_canonical({1: Fraction(root, q.denominator)})
    return sqrt_int(q.numerator * q.denominator) * Fraction(1, q.denominator)


def invert_monomial(a):
    """Exact reciprocal of a single-term scalar ``q*sqrt(k)``: ``sqrt(k)/(q*k)``."""
    a = a if isinstance(a, RadicalScalar) else as_scalar(a)
    if len(a._terms) != 1:
        raise NotMonomial(f"reciprocal needs exactly one term, got {a}")
    ((k, q),) = a._terms.items()
    return RadicalScalar._from_canonical({k: 1 / (q * k)})


def to_float(a):
    total = 0.0
    for k, q in a._terms.items():
        total += float(q) * (sqrt(k) if k != 1 else 1.0)
    return total
