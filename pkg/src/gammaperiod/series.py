"""Truncated multivariate formal power series.

A :class:`TruncSeries` is a sparse polynomial in ``nvars`` variables kept
only up to a fixed total degree ``order``; every operation truncates its
result back to that degree.  Coefficients live in a pluggable exact
coefficient ring: ints, :class:`fractions.Fraction` and
:class:`gammaperiod.exactnum.TransScalar` all work, and may be mixed
(the scalar types promote each other under ``+`` and ``*``).

Mixing different truncation orders or variable counts is an error, never
an implicit minimum; silent precision loss is the bug class this module
is designed against.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

from .exactnum import TransScalar, factorial

_SCALAR_TYPES = (int, Fraction, TransScalar)


class LinForm:
    """Integer linear form a_1*v_1 + ... + a_r*v_r (no constant term)."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        cs = tuple(int(c) for c in coeffs)
        if any(not isinstance(c, int) for c in coeffs):
            raise TypeError("LinForm coefficients must be integers")
        object.__setattr__(self, "coeffs", cs)

    def __setattr__(self, name, value):
        raise AttributeError("LinForm is immutable")

    def __len__(self):
        return len(self.coeffs)

    def __eq__(self, other):
        return isinstance(other, LinForm) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __call__(self, values):
        return sum(c * v for c, v in zip(self.coeffs, values))

    def __str__(self):
        return " + ".join("%d*v%d" % (c, k + 1) for k, c in enumerate(self.coeffs) if c) or "0"


def _exp_key(exps):
    return (sum(exps), exps)


class TruncSeries:
    """Multivariate power series truncated at a total degree.

    Terms are a sparse map from exponent tuples to nonzero coefficients.
    Exponent tuples have length ``nvars`` and total degree at most
    ``order``; iteration order is graded lexicographic for determinism.
    """

    __slots__ = ("nvars", "order", "_terms")

    def __init__(self, nvars: int, order: int, terms=None):
        if nvars < 1:
            raise ValueError("nvars must be >= 1")
        if order < 0:
            raise ValueError("order must be >= 0")
        data = {}
        if terms:
            for exps, coeff in terms.items():
                exps = tuple(exps)
                if len(exps) != nvars or any(e < 0 for e in exps):
                    raise ValueError("bad exponent vector %r for nvars=%d" % (exps, nvars))
                if sum(exps) > order:
                    raise ValueError("exponent %r exceeds truncation order %d" % (exps, order))
                if coeff:
                    data[exps] = data[exps] + coeff if exps in data else coeff
                    if not data[exps]:
                        del data[exps]
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "_terms", data)

    def __setattr__(self, name, value):
        raise AttributeError("TruncSeries is immutable")

    @classmethod
    def _raw(cls, nvars, order, data):
        obj = cls.__new__(cls)
        object.__setattr__(obj, "nvars", nvars)
        object.__setattr__(obj, "order", order)
        object.__setattr__(obj, "_terms", data)
        return obj

    @classmethod
    def constant(cls, value, nvars: int, order: int) -> "TruncSeries":
        zero = (0,) * nvars
        return cls(nvars, order, {zero: value} if value else {})

    @classmethod
    def one(cls, nvars: int, order: int) -> "TruncSeries":
        return cls.constant(1, nvars, order)

    @classmethod
    def zero(cls, nvars: int, order: int) -> "TruncSeries":
        return cls(nvars, order, {})

    @classmethod
    def variable(cls, index: int, nvars: int, order: int) -> "TruncSeries":
        if not 0 <= index < nvars:
            raise ValueError("variable index out of range")
        if order < 1:
            raise ValueError("order must be >= 1 to hold a variable")
        exps = tuple(1 if i == index else 0 for i in range(nvars))
        return cls(nvars, order, {exps: 1})

    # -- inspection ----------------------------------------------------

    def sorted_terms(self):
        for exps in sorted(self._terms, key=_exp_key):
            yield exps, self._terms[exps]

    def coefficient(self, exps):
        exps = tuple(exps)
        if len(exps) != self.nvars:
            raise ValueError("exponent vector has wrong length")
        return self._terms.get(exps, 0)

    @property
    def constant_term(self):
        return self._terms.get((0,) * self.nvars, 0)

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    # -- helpers -------------------------------------------------------

    def _check_compat(self, other):
        if self.nvars != other.nvars or self.order != other.order:
            raise ValueError(
                "incompatible series: (nvars=%d, order=%d) vs (nvars=%d, order=%d)"
                % (self.nvars, self.order, other.nvars, other.order)
            )

    def map_coefficients(self, fn) -> "TruncSeries":
        return TruncSeries(self.nvars, self.order, {e: fn(c) for e, c in self._terms.items()})

    # -- ring operations -------------------------------------------------

    def __add__(self, other):
        if isinstance(other, TruncSeries):
            self._check_compat(other)
            data = dict(self._terms)
            for exps, coeff in other._terms.items():
                acc = data.get(exps, 0) + coeff
                if acc:
                    data[exps] = acc
                else:
                    data.pop(exps, None)
            return TruncSeries._raw(self.nvars, self.order, data)
        if isinstance(other, _SCALAR_TYPES):
            return self + TruncSeries.constant(other, self.nvars, self.order)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return TruncSeries._raw(self.nvars, self.order, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        if isinstance(other, TruncSeries):
            self._check_compat(other)
            return self + (-other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, TruncSeries):
            self._check_compat(other)
            a, b = self._terms, other._terms
            if len(a) > len(b):
                a, b = b, a
            order = self.order
            data = {}
            bdeg = [(e, sum(e), c) for e, c in b.items()]
            for e1, c1 in a.items():
                d1 = sum(e1)
                for e2, d2, c2 in bdeg:
                    if d1 + d2 > order:
                        continue
                    exps = tuple(x + y for x, y in zip(e1, e2))
                    acc = data.get(exps, 0) + c1 * c2
                    if acc:
                        data[exps] = acc
                    else:
                        data.pop(exps, None)
            return TruncSeries._raw(self.nvars, self.order, data)
        if not isinstance(other, _SCALAR_TYPES):
            return NotImplemented
        if not other:
            return TruncSeries.zero(self.nvars, self.order)
        return TruncSeries._raw(
            self.nvars, self.order, {e: other * c for e, c in self._terms.items()}
        )

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("series powers must be nonnegative integers")
        out = TruncSeries.one(self.nvars, self.order)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base if n > 1 else base
            n >>= 1
        return out

    def __eq__(self, other):
        if not isinstance(other, TruncSeries):
            return NotImplemented
        if self.nvars != other.nvars or self.order != other.order:
            return False
        return not (self - other)

    def __ne__(self, other):
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    # -- calculus ---------------------------------------------------------

    def derivative(self, var: int) -> "TruncSeries":
        """Formal partial derivative; the truncation order drops by one."""
        if not 0 <= var < self.nvars:
            raise ValueError("variable index %d out of range" % var)
        if self.order < 1:
            raise ValueError("cannot differentiate a series of order 0")
        data = {}
        for exps, coeff in self._terms.items():
            e = exps[var]
            if e == 0:
                continue
            new = exps[:var] + (e - 1,) + exps[var + 1 :]
            data[new] = e * coeff
        return TruncSeries(self.nvars, self.order - 1, data)

    def exp(self) -> "TruncSeries":
        """Truncated exponential; requires constant term zero."""
        if self.constant_term:
            raise ValueError("exp requires a series with constant term 0")
        out = TruncSeries.one(self.nvars, self.order)
        power = TruncSeries.one(self.nvars, self.order)
        for j in range(1, self.order + 1):
            power = power * self
            if not power:
                break
            out = out + power * Fraction(1, factorial(j))
        return out

    def log(self) -> "TruncSeries":
        """Truncated logarithm; requires constant term one."""
        if self.constant_term != 1:
            raise ValueError("log requires a series with constant term 1")
        u = self - 1
        out = TruncSeries.zero(self.nvars, self.order)
        power = TruncSeries.one(self.nvars, self.order)
        for j in range(1, self.order + 1):
            power = power * u
            if not power:
                break
            out = out + power * Fraction(-1 if j % 2 == 0 else 1, j)
        return out

    # -- substitution -----------------------------------------------------

    def compose_linform(self, form: LinForm, nvars: int, order=None) -> "TruncSeries":
        """Substitute the single variable by an integer linear form.

        The series must be univariate; the result lives in ``nvars``
        variables and is truncated at ``order`` (the input order by
        default).
        """
        if self.nvars != 1:
            raise ValueError("compose_linform requires a univariate series")
        if len(form) != nvars:
            raise ValueError("linear form has %d coefficients, expected %d" % (len(form), nvars))
        if order is None:
            order = self.order
        lin = TruncSeries(
            nvars,
            order,
            {
                tuple(1 if i == k else 0 for i in range(nvars)): c
                for k, c in enumerate(form.coeffs)
                if c and order >= 1
            },
        )
        out = TruncSeries.zero(nvars, order)
        power = TruncSeries.one(nvars, order)
        for m in range(0, min(self.order, order) + 1):
            if m:
                power = power * lin
                if not power:
                    break
            c = self._terms.get((m,))
            if c:
                out = out + power * c
        return out

    # -- slicing ------------------------------------------------------------

    def homogeneous_part(self, degree: int) -> "TruncSeries":
        """Terms of exact total degree ``degree`` (same truncation order)."""
        if degree < 0 or degree > self.order:
            raise ValueError("degree out of range")
        data = {e: c for e, c in self._terms.items() if sum(e) == degree}
        return TruncSeries._raw(self.nvars, self.order, data)

    def truncate(self, order: int) -> "TruncSeries":
        """Forget terms above ``order`` (which must not exceed the current one)."""
        if order > self.order:
            raise ValueError("cannot raise the truncation order")
        data = {e: c for e, c in self._terms.items() if sum(e) <= order}
        return TruncSeries._raw(self.nvars, order, data)

    # -- serialization ------------------------------------------------------

    def to_json_obj(self):
        return {
            "nvars": self.nvars,
            "order": self.order,
            "terms": [
                {"exponents": list(e), "coeff": str(c)} for e, c in self.sorted_terms()
            ],
        }

    def __str__(self):
        if not self._terms:
            return "0"
        names = (
            ["z"]
            if self.nvars == 1
            else ["x%d" % (i + 1) for i in range(self.nvars)]
        )
        parts = []
        for exps, coeff in self.sorted_terms():
            mono = "*".join(
                names[i] if e == 1 else "%s^%d" % (names[i], e)
                for i, e in enumerate(exps)
                if e
            )
            cs = str(coeff)
            if mono:
                body = mono if cs == "1" else "(%s)*%s" % (cs, mono)
            else:
                body = "(%s)" % cs if " " in cs else cs
            parts.append(body)
        return " + ".join(parts) + " + O(%d)" % (self.order + 1)

    def __repr__(self):
        return "TruncSeries(nvars=%d, order=%d, %d terms)" % (
            self.nvars,
            self.order,
            len(self._terms),
        )


def elementary_symmetric(i: int, nvars: int, order: int) -> TruncSeries:
    """The elementary symmetric polynomial e_i in ``nvars`` variables."""
    if i < 0 or i > nvars:
        raise ValueError("e_%d undefined in %d variables" % (i, nvars))
    if i == 0:
        return TruncSeries.one(nvars, order)
    data = {}
    for subset in combinations(range(nvars), i):
        exps = tuple(1 if k in subset else 0 for k in range(nvars))
        data[exps] = 1
    return TruncSeries(nvars, order, data)
