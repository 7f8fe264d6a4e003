"""Exact scalar arithmetic.

Two kinds of scalars appear throughout this package:

* exact rationals (``BigRat``, an alias for :class:`fractions.Fraction`,
  backed by Python's arbitrary-precision integers), and
* elements of the free commutative polynomial ring

      Q[gamma, zeta2, zeta3, zeta4, ...]

  modelled by :class:`TransScalar`.  ``gamma`` is the Euler-Mascheroni
  constant and ``zetak`` the value of the zeta function at the integer
  ``k >= 2``, both kept as opaque formal generators.  No algebraic
  relations between the generators are imposed (``zeta4`` is *not*
  rewritten as a multiple of ``zeta2**2``), so an equality of
  ``TransScalar`` values is a genuinely stronger statement than a
  numerical coincidence.

Each generator carries a weight: ``gamma`` has weight 1 and ``zetak``
weight ``k``.  The weight of a monomial is the weighted sum of its
exponents; it is used by callers to track how transcendental a
coefficient may be.

Numeric evaluation substitutes high-precision values of the generators
(via mpmath) and is exposed through :meth:`TransScalar.evaluate`.  The
supported precision cap is ``EVAL_DIGITS_CAP`` decimal digits.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import cmp_to_key

import mpmath

BigRat = Fraction

#: Largest number of decimal digits accepted by evaluate()/evaluate_str().
EVAL_DIGITS_CAP = 1000

_GAMMA_GEN = 0  # generator id of the Euler constant; zeta(k) uses id k >= 2


def factorial(n: int) -> int:
    """Exact n! for n >= 0."""
    if n < 0:
        raise ValueError("factorial requires n >= 0, got %r" % (n,))
    return math.factorial(n)


def binomial(n: int, k: int) -> int:
    """Exact binomial coefficient; zero when k > n."""
    if n < 0 or k < 0:
        raise ValueError("binomial requires nonnegative arguments")
    return math.comb(n, k)


def _as_fraction(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError("expected an int or Fraction, got %r" % type(x).__name__)


def _mono_mul(a, b):
    """Merge two monomial keys (sorted tuples of (generator, exponent))."""
    out = dict(a)
    for g, e in b:
        out[g] = out.get(g, 0) + e
    return tuple(sorted(out.items()))


def _mono_degree(mono):
    return sum(e for _, e in mono)


def _mono_weight(mono):
    return sum((1 if g == _GAMMA_GEN else g) * e for g, e in mono)


def _mono_cmp(a, b):
    """Graded lexicographic order on (gamma, zeta2, zeta3, ...) exponents."""
    da, db = _mono_degree(a), _mono_degree(b)
    if da != db:
        return -1 if da < db else 1
    ea, eb = dict(a), dict(b)
    for g in sorted(set(ea) | set(eb)):
        xa, xb = ea.get(g, 0), eb.get(g, 0)
        if xa != xb:
            return -1 if xa < xb else 1
    return 0


_MONO_KEY = cmp_to_key(_mono_cmp)


def _mono_str(mono):
    if not mono:
        return ""
    parts = []
    for g, e in mono:
        name = "gamma" if g == _GAMMA_GEN else "zeta%d" % g
        parts.append(name if e == 1 else "%s^%d" % (name, e))
    return "*".join(parts)


class TransScalar:
    """Element of the formal ring Q[gamma, zeta2, zeta3, ...].

    Stored as a sparse map from monomials to nonzero rational
    coefficients.  Instances are immutable; all arithmetic returns new
    values, and zero coefficients are never stored.

    Construction normally goes through :data:`GAMMA`, :func:`zeta` and
    :meth:`from_value`; the raw constructor accepts a mapping from
    monomial keys to rationals and normalises it.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms=None):
        data = {}
        if terms:
            for mono, coeff in terms.items():
                coeff = _as_fraction(coeff)
                if coeff:
                    data[mono] = data.get(mono, Fraction(0)) + coeff
                    if not data[mono]:
                        del data[mono]
        object.__setattr__(self, "_terms", data)

    def __setattr__(self, name, value):
        raise AttributeError("TransScalar is immutable")

    @classmethod
    def from_value(cls, x) -> "TransScalar":
        """Embed an int or Fraction as a constant."""
        q = _as_fraction(x)
        return cls({(): q} if q else {})

    @classmethod
    def _raw(cls, data) -> "TransScalar":
        obj = cls.__new__(cls)
        object.__setattr__(obj, "_terms", data)
        return obj

    # -- inspection --------------------------------------------------

    def terms(self):
        """Iterate (monomial, coefficient) pairs in graded-lex order."""
        for mono in sorted(self._terms, key=_MONO_KEY):
            yield mono, self._terms[mono]

    def coefficient(self, mono) -> Fraction:
        return self._terms.get(tuple(sorted(mono)), Fraction(0))

    def rational_part(self) -> Fraction:
        return self._terms.get((), Fraction(0))

    @property
    def is_rational(self) -> bool:
        return all(not m for m in self._terms)

    def max_weight(self) -> int:
        """Largest weight among the stored monomials (0 for the zero scalar)."""
        return max((_mono_weight(m) for m in self._terms), default=0)

    def term_weights(self):
        return sorted({_mono_weight(m) for m in self._terms})

    def involves_gamma(self) -> bool:
        return any(any(g == _GAMMA_GEN for g, _ in m) for m in self._terms)

    def __bool__(self):
        return bool(self._terms)

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    # -- ring operations ---------------------------------------------

    @staticmethod
    def _coerce(other):
        if isinstance(other, TransScalar):
            return other
        if isinstance(other, (int, Fraction)):
            return TransScalar.from_value(other)
        return None

    def __add__(self, other):
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        data = dict(self._terms)
        for mono, coeff in rhs._terms.items():
            acc = data.get(mono, Fraction(0)) + coeff
            if acc:
                data[mono] = acc
            else:
                data.pop(mono, None)
        return TransScalar._raw(data)

    __radd__ = __add__

    def __neg__(self):
        return TransScalar._raw({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return self + (-rhs)

    def __rsub__(self, other):
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return rhs + (-self)

    def __mul__(self, other):
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        data = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in rhs._terms.items():
                mono = _mono_mul(m1, m2)
                acc = data.get(mono, Fraction(0)) + c1 * c2
                if acc:
                    data[mono] = acc
                else:
                    data.pop(mono, None)
        return TransScalar._raw(data)

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("TransScalar powers must be nonnegative integers")
        out = TransScalar.from_value(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return self._terms == rhs._terms

    def __ne__(self, other):
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    # -- exact division ----------------------------------------------

    def leading_term(self):
        if not self._terms:
            raise ValueError("zero scalar has no leading term")
        mono = max(self._terms, key=_MONO_KEY)
        return mono, self._terms[mono]

    def exact_div(self, divisor) -> "TransScalar":
        """Exact quotient self / divisor in the polynomial ring.

        Raises ValueError when the division leaves a remainder.  Used to
        invert multiplicative sequences, where numerators are known to be
        exact multiples of the leading s-coefficients.
        """
        if isinstance(divisor, (int, Fraction)):
            q = _as_fraction(divisor)
            if not q:
                raise ZeroDivisionError("division of TransScalar by zero")
            return TransScalar._raw({m: c / q for m, c in self._terms.items()})
        if not isinstance(divisor, TransScalar):
            raise TypeError("cannot divide TransScalar by %r" % type(divisor).__name__)
        if not divisor:
            raise ZeroDivisionError("division of TransScalar by zero")
        lead_m, lead_c = divisor.leading_term()
        lead_d = dict(lead_m)
        rem = self
        out = {}
        while rem:
            rm, rc = rem.leading_term()
            quo = dict(rm)
            for g, e in lead_d.items():
                quo[g] = quo.get(g, 0) - e
                if quo[g] < 0:
                    raise ValueError("not exactly divisible: %s by %s" % (self, divisor))
                if quo[g] == 0:
                    del quo[g]
            qmono = tuple(sorted(quo.items()))
            qcoeff = rc / lead_c
            out[qmono] = out.get(qmono, Fraction(0)) + qcoeff
            rem = rem - TransScalar({qmono: qcoeff}) * divisor
        return TransScalar(out)

    # -- numeric evaluation ------------------------------------------

    def evaluate(self, digits: int):
        """Numeric value with the generators replaced by their constants.

        Accurate to roughly ``10**(1 - digits)`` relatively; mpmath
        supplies gamma and zeta(k) for every k >= 2.
        """
        if not isinstance(digits, int) or digits < 1:
            raise ValueError("digits must be a positive integer")
        if digits > EVAL_DIGITS_CAP:
            raise ValueError("digits=%d exceeds the supported cap %d" % (digits, EVAL_DIGITS_CAP))
        with mpmath.workdps(digits + 15):
            total = mpmath.mpf(0)
            for mono, coeff in self._terms.items():
                val = mpmath.mpf(coeff.numerator) / coeff.denominator
                for g, e in mono:
                    base = mpmath.euler if g == _GAMMA_GEN else mpmath.zeta(g)
                    val *= base ** e
                total += val
            return +total

    def evaluate_str(self, digits: int) -> str:
        """Decimal string of evaluate(), rounded to ``digits`` significant digits."""
        val = self.evaluate(digits)
        return mpmath.nstr(val, digits)

    # -- printing ----------------------------------------------------

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for mono in sorted(self._terms, key=_MONO_KEY, reverse=True):
            coeff = self._terms[mono]
            ms = _mono_str(mono)
            if not ms:
                body = str(abs(coeff))
            elif abs(coeff) == 1:
                body = ms
            else:
                body = "%s*%s" % (abs(coeff), ms)
            if not parts:
                parts.append(body if coeff > 0 else "-" + body)
            else:
                parts.append(("+ " if coeff > 0 else "- ") + body)
        return " ".join(parts)

    def __repr__(self):
        return "TransScalar(%s)" % self


#: The formal Euler-Mascheroni generator.
GAMMA = TransScalar({((_GAMMA_GEN, 1),): 1})

ZERO = TransScalar()
ONE = TransScalar.from_value(1)


def zeta(k: int) -> TransScalar:
    """The formal generator zeta(k), k >= 2."""
    if not isinstance(k, int) or k < 2:
        raise ValueError("zeta generators are indexed by integers k >= 2")
    return TransScalar({((k, 1),): 1})


def as_scalar(x) -> TransScalar:
    """Promote an int/Fraction to TransScalar; pass TransScalar through."""
    if isinstance(x, TransScalar):
        return x
    return TransScalar.from_value(x)
