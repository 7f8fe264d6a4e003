"""Multiplicative sequences of characteristic power series.

Given a univariate power series Q(z) with Q(0) = 1, the associated
multiplicative sequence is the family of weighted-homogeneous
polynomials Q_k(c_1, ..., c_k), deg c_i = i, characterised by

    product_i Q(x_i)  =  sum_k Q_k(e_1, ..., e_k)

where the x_i are formal Chern roots and e_i their elementary symmetric
polynomials.  ``mult_seq`` computes Q_k by expanding the left side with
exactly k roots (enough, by stability) and rewriting the symmetric
degree-k part in the e_i basis by leading-term elimination.

The series of interest here is Q(z) = 1/Gamma(1+z), whose expansion

    log Gamma(1+z) = -gamma*z + sum_{i>=2} (-1)^i zeta(i) z^i / i

brings the Euler constant and zeta values into the coefficients; see
``loggamma_series``.  The s-sequence extracted by ``s_sequence`` from

    1 - z (d/dz) log Q(z) = sum_i (-1)^i s_i z^i

gives the coefficient of c_k in Q_k; for the Gamma series s_1 = gamma
and s_k = zeta(k) for k >= 2, all nonzero, so the triangular system
Q_1, ..., Q_d can be solved back for c_1, ..., c_d
(``chern_from_mult_seq``).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exactnum import GAMMA, TransScalar, as_scalar, zeta
from .series import LinForm, TruncSeries, elementary_symmetric


class NonInvertibleSequenceError(ValueError):
    """Raised when some s_i vanishes and the sequence cannot be inverted."""


def loggamma_series(order: int) -> TruncSeries:
    """log Gamma(1+z) as a univariate series over Q[gamma, zeta...]."""
    terms = {(1,): -GAMMA} if order >= 1 else {}
    for i in range(2, order + 1):
        sign = 1 if i % 2 == 0 else -1
        terms[(i,)] = zeta(i) * Fraction(sign, i)
    return TruncSeries(1, order, terms)


def inv_gamma_series(order: int) -> TruncSeries:
    """1/Gamma(1+z) as a univariate series, the Gamma-sequence generator."""
    return (-loggamma_series(order)).exp()


def s_sequence(q: TruncSeries, upto: int):
    """The scalars s_0..s_upto of a characteristic series.

    Defined through 1 - z (d/dz) log q(z) = sum (-1)^i s_i z^i; the
    coefficient extraction reduces to s_i = (-1)^(i+1) * i * [z^i] log q.
    """
    if q.nvars != 1:
        raise ValueError("s_sequence requires a univariate series")
    if q.constant_term != 1:
        raise ValueError("characteristic series must have constant term 1")
    if q.order < upto:
        raise ValueError("series order %d too small for s_%d" % (q.order, upto))
    lq = q.log()
    out = [as_scalar(1)]
    for i in range(1, upto + 1):
        coeff = lq.coefficient((i,))
        sign = -1 if i % 2 == 0 else 1
        out.append(as_scalar(coeff * Fraction(sign * i)))
    return out


@dataclass(frozen=True)
class MultSeqPolynomial:
    """Weighted-homogeneous polynomial Q_k in formal symbols c_1..c_k.

    ``terms`` maps exponent tuples (a_1, ..., a_k) over (c_1, ..., c_k)
    to TransScalar coefficients; every stored monomial satisfies
    sum i*a_i = degree.
    """

    degree: int
    terms: dict

    def __post_init__(self):
        clean = {}
        for exps, coeff in self.terms.items():
            exps = tuple(exps)
            if len(exps) != self.degree:
                raise ValueError("exponent tuple %r must have length %d" % (exps, self.degree))
            if sum((i + 1) * a for i, a in enumerate(exps)) != self.degree:
                raise ValueError("monomial %r is not weighted-homogeneous" % (exps,))
            coeff = as_scalar(coeff)
            if coeff:
                clean[exps] = coeff
        object.__setattr__(self, "terms", clean)

    def sorted_terms(self):
        for exps in sorted(self.terms, reverse=True):
            yield exps, self.terms[exps]

    def coefficient(self, exps) -> TransScalar:
        return self.terms.get(tuple(exps), TransScalar())

    def coefficient_of_ck(self) -> TransScalar:
        """Coefficient of the lone top symbol c_k."""
        exps = tuple(0 if i < self.degree - 1 else 1 for i in range(self.degree))
        return self.coefficient(exps)

    def without_c1(self) -> "MultSeqPolynomial":
        """Specialisation c_1 = 0 (the Calabi-Yau case)."""
        kept = {e: c for e, c in self.terms.items() if e[0] == 0}
        return MultSeqPolynomial(self.degree, kept)

    def drop_top_symbol(self) -> "MultSeqPolynomial":
        """Remove the pure c_k monomial, leaving the lower-symbol part."""
        exps = tuple(0 if i < self.degree - 1 else 1 for i in range(self.degree))
        kept = {e: c for e, c in self.terms.items() if e != exps}
        return MultSeqPolynomial(self.degree, kept)

    def evaluate(self, values):
        """Substitute ring elements for c_1..c_k.

        ``values`` must supply at least as many entries as the largest
        symbol actually used; entries for unused symbols are ignored, so
        placeholders (e.g. None) are fine there.
        """
        total = 0
        for exps, coeff in self.sorted_terms():
            term = coeff
            for i, e in enumerate(exps):
                if e:
                    term = term * (values[i] ** e)
            total = term + total
        return total

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, MultSeqPolynomial):
            return NotImplemented
        return self.degree == other.degree and self.terms == other.terms

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for exps, coeff in self.sorted_terms():
            mono = "*".join(
                "c%d" % (i + 1) if e == 1 else "c%d^%d" % (i + 1, e)
                for i, e in enumerate(exps)
                if e
            )
            cs = str(coeff)
            if cs == "1":
                parts.append(mono)
            elif cs == "-1":
                parts.append("-%s" % mono)
            elif " " in cs or cs.startswith("-"):
                parts.append("(%s)*%s" % (cs, mono))
            else:
                parts.append("%s*%s" % (cs, mono))
        return " + ".join(parts)

    def to_json_obj(self):
        return {
            "degree": self.degree,
            "symbols": ["c%d" % (i + 1) for i in range(self.degree)],
            "terms": [
                {"exponents": list(e), "coeff": str(c)} for e, c in self.sorted_terms()
            ],
        }


def mult_seq(q: TruncSeries, k: int) -> MultSeqPolynomial:
    """Degree-k polynomial of the multiplicative sequence of q.

    Expands product_{i<=k} q(x_i) to total degree k and rewrites the
    symmetric part in elementary symmetric polynomials; k roots suffice
    by the stability of multiplicative sequences.
    """
    if q.nvars != 1:
        raise ValueError("mult_seq requires a univariate characteristic series")
    if q.constant_term != 1:
        raise ValueError("characteristic series must have constant term 1")
    if k < 1:
        raise ValueError("degree k must be >= 1")
    if q.order < k:
        raise ValueError("series order %d too small for degree %d" % (q.order, k))
    qk = q.truncate(k)
    prod = TruncSeries.one(k, k)
    for i in range(k):
        unit = LinForm(tuple(1 if j == i else 0 for j in range(k)))
        prod = prod * qk.compose_linform(unit, k)
    work = dict(prod.homogeneous_part(k)._terms)

    e_cache = {}

    def e_series(i):
        if i not in e_cache:
            e_cache[i] = elementary_symmetric(i, k, k)
        return e_cache[i]

    result = {}
    guard = 0
    while work:
        guard += 1
        if guard > 100000:
            raise RuntimeError("symmetric reduction failed to terminate")
        lam = max(work)
        if any(lam[i] < lam[i + 1] for i in range(k - 1)):
            raise RuntimeError("leading monomial %r is not a partition; input not symmetric" % (lam,))
        coeff = work[lam]
        e_exps = tuple(lam[i] - lam[i + 1] for i in range(k - 1)) + (lam[k - 1],)
        expansion = TruncSeries.one(k, k)
        for i, m in enumerate(e_exps):
            if m:
                expansion = expansion * e_series(i + 1) ** m
        for exps, c in expansion.homogeneous_part(k)._terms.items():
            acc = work.get(exps, 0) - coeff * c
            if acc:
                work[exps] = acc
            else:
                work.pop(exps, None)
        result[e_exps] = coeff
    return MultSeqPolynomial(k, {e: as_scalar(c) for e, c in result.items()})


def gamma_seq_calabi_yau(k: int) -> MultSeqPolynomial:
    """Q_k of the 1/Gamma(1+z) sequence with c_1 specialised to zero."""
    if k < 2:
        raise ValueError("the Calabi-Yau specialisation needs k >= 2")
    return mult_seq(inv_gamma_series(k), k).without_c1()


def _divide_by_scalar(value, s: TransScalar):
    if isinstance(value, TransScalar):
        return value.exact_div(s)
    if isinstance(value, (int, Fraction)):
        return TransScalar.from_value(value).exact_div(s)
    if hasattr(value, "map_coefficients"):
        return value.map_coefficients(lambda c: _divide_by_scalar(c, s))
    raise TypeError("cannot divide %r by a TransScalar" % type(value).__name__)


def chern_from_mult_seq(q: TruncSeries, values):
    """Recover c_1..c_d from the values of Q_1..Q_d.

    ``values`` are the evaluations of the sequence polynomials in any
    commutative ring whose scalars admit exact division by the s_i
    (TransScalar values, truncated series, cohomology classes).  Solves
    the triangular system Q_i = s_i c_i + (polynomial in c_1..c_{i-1}).
    """
    d = len(values)
    s = s_sequence(q, d)
    for i in range(1, d + 1):
        if not s[i]:
            raise NonInvertibleSequenceError("s_%d = 0: sequence not invertible" % i)
    recovered = []
    for i in range(1, d + 1):
        rest = mult_seq(q, i).drop_top_symbol()
        num = values[i - 1]
        if rest:
            num = num - rest.evaluate(recovered + [None])
        recovered.append(_divide_by_scalar(num, s[i]))
    return recovered


def apply_mult_seq(poly: MultSeqPolynomial, chern: "ChernVector"):
    """Evaluate Q_k at the entries of a Chern vector."""
    if poly.degree > chern.dimension:
        raise ValueError(
            "degree overflow: Q_%d needs c_%d but the Chern vector stops at c_%d"
            % (poly.degree, poly.degree, chern.dimension)
        )
    if not poly:
        return 0
    return poly.evaluate(chern.classes)


@dataclass(frozen=True)
class ChernVector:
    """Chern classes c_1..c_d of a manifold (or formal stand-ins).

    ``classes[i]`` holds c_{i+1}; entries are cohomology classes in the
    ambient ring, or any ring elements when used formally.
    """

    dimension: int
    classes: tuple

    def __post_init__(self):
        object.__setattr__(self, "classes", tuple(self.classes))
        if len(self.classes) != self.dimension:
            raise ValueError("expected %d classes, got %d" % (self.dimension, len(self.classes)))

    def chern_class(self, i: int):
        if not 1 <= i <= self.dimension:
            raise ValueError("c_%d out of range" % i)
        return self.classes[i - 1]
