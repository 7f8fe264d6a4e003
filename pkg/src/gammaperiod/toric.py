"""Reflexive Fano polytopes, fans, and the toric cohomology ring.

The combinatorial input is a full-dimensional lattice polytope whose
vertices serve, for valid inputs, as the rays of the face fan; each
facet spans a maximal cone.  ``validate_fano`` checks the four defining
conditions (integral vertices, the origin as unique interior lattice
point, facet vertex sets that are Z-bases, facets at lattice distance
one) and reports each with a witness instead of raising.

On top of a validated fan the module builds:

* the relation lattice of the rays lifted to height one, and a basis of
  it selected from wall relations (``mori_basis``) so that every wall
  relation is a nonnegative integer combination of the basis;
* the rational cohomology ring in Stanley-Reisner presentation.  The d
  divisor symbols whose rays form the lexicographically first maximal
  cone are eliminated through the linear relations; what remains is
  reduced degree-by-degree against the substituted Stanley-Reisner
  generators, so every class has a unique normal form and the top
  degree is one-dimensional.  Intersection numbers are normalised by
  declaring each maximal-cone monomial to be the point class.

The anticanonical hypersurface enters through its total Chern class
expansion  (1+D_1)...(1+D_p) / (1+D_1+...+D_p)  truncated at the
ambient dimension, and integration over it multiplies by the divisor
sum before taking the top intersection number.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from math import gcd

from .exactnum import TransScalar
from .linalg import (
    det_int,
    hnf_basis,
    integer_kernel,
    invert_unimodular,
    primitive_vector,
    rational_rank,
    rref,
    solve_rational,
)
from .multiseq import ChernVector

_BOX_POINT_LIMIT = 2_000_000


class PolytopeFormatError(ValueError):
    """Malformed polytope input (file parsing and schema problems)."""


class NonSimplicialFacetError(ValueError):
    """A facet has more vertices than the dimension; no face fan."""


class WallBasisError(ValueError):
    """Wall relations do not contain a usable lattice basis."""


class RingConsistencyError(RuntimeError):
    """Internal cohomology-ring sanity check failed."""


def _dot(u, v):
    return sum(a * b for a, b in zip(u, v))


# ---------------------------------------------------------------------------
# polytopes and validation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LatticePolytope:
    """Full-dimensional lattice polytope given by its vertex list."""

    dimension: int
    vertices: tuple

    def __post_init__(self):
        verts = []
        for v in self.vertices:
            v = tuple(v)
            if len(v) != self.dimension:
                raise ValueError("vertex %r does not have dimension %d" % (v, self.dimension))
            if any(not isinstance(x, int) for x in v):
                raise ValueError("vertex %r has non-integer coordinates" % (v,))
            verts.append(v)
        object.__setattr__(self, "vertices", tuple(verts))

    @property
    def nvertices(self):
        return len(self.vertices)


@dataclass(frozen=True)
class Facet:
    """Supporting hyperplane <normal, x> = value with outer primitive normal."""

    normal: tuple
    value: int
    vertex_indices: tuple


@dataclass
class ConditionResult:
    key: str
    passed: bool
    detail: str


@dataclass
class FanoValidationReport:
    conditions: list
    convention: str

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.conditions)

    def condition(self, key: str) -> ConditionResult:
        for c in self.conditions:
            if c.key == key:
                return c
        raise KeyError(key)

    def to_json_obj(self):
        return {
            "passed": self.passed,
            "convention": self.convention,
            "conditions": [
                {"key": c.key, "passed": c.passed, "detail": c.detail}
                for c in self.conditions
            ],
        }


def facets_of(polytope: LatticePolytope):
    """All facets, found by exhausting d-subsets of vertices (desk scale)."""
    d = polytope.dimension
    verts = polytope.vertices
    found = {}
    if d == 1:
        for i, v in enumerate(verts):
            u = primitive_vector(v)
            c = _dot(u, v)
            vals = [_dot(u, w) for w in verts]
            if all(x <= c for x in vals):
                idx = tuple(i2 for i2, x in enumerate(vals) if x == c)
                found[(tuple(u), c)] = Facet(tuple(u), c, idx)
        return sorted(found.values(), key=lambda f: (f.normal, f.value))
    for subset in combinations(range(len(verts)), d):
        pts = [verts[i] for i in subset]
        rows = [[pts[i][j] - pts[0][j] for j in range(d)] for i in range(1, d)]
        ker = integer_kernel(rows)
        if len(ker) != 1:
            continue  # affinely degenerate subset
        u = primitive_vector(ker[0])
        c = _dot(u, pts[0])
        vals = [_dot(u, v) for v in verts]
        if all(x <= c for x in vals):
            pass
        elif all(x >= c for x in vals):
            u = tuple(-x for x in u)
            c = -c
            vals = [-x for x in vals]
        else:
            continue
        key = (tuple(u), c)
        if key not in found:
            idx = tuple(i for i, x in enumerate(vals) if x == c)
            found[key] = Facet(tuple(u), c, idx)
    return sorted(found.values(), key=lambda f: (f.normal, f.value))


def _interior_lattice_points(polytope, facets):
    d = polytope.dimension
    lows = [min(v[j] for v in polytope.vertices) for j in range(d)]
    highs = [max(v[j] for v in polytope.vertices) for j in range(d)]
    count = 1
    for lo, hi in zip(lows, highs):
        count *= hi - lo + 1
        if count > _BOX_POINT_LIMIT:
            raise ValueError("bounding box too large for interior-point enumeration")
    pts = []
    for pt in product(*(range(lo, hi + 1) for lo, hi in zip(lows, highs))):
        if all(_dot(f.normal, pt) < f.value for f in facets):
            pts.append(pt)
    return pts


def validate_fano(polytope: LatticePolytope) -> FanoValidationReport:
    """Check the four Fano-polytope conditions, with witnesses.

    Failures are report entries, never exceptions.  The facet functional
    convention is recorded: facets are normalised with primitive *outer*
    normals, so the lattice-distance-one condition reads value == +1;
    inputs stated with inner normals at level -1 describe the same
    polytope and validate identically.
    """
    conditions = []
    d = polytope.dimension
    verts = polytope.vertices

    distinct = len(set(verts)) == len(verts)
    full_dim = rational_rank([list(v) for v in verts]) == d if verts else False
    detail_a = []
    if not distinct:
        detail_a.append("repeated vertices")
    if not full_dim:
        detail_a.append("vertices span a proper subspace")
    conditions.append(
        ConditionResult(
            "a_lattice_vertices",
            distinct and full_dim,
            "; ".join(detail_a) or "integral, distinct, full-dimensional",
        )
    )

    facets = facets_of(polytope) if (distinct and full_dim) else []

    if facets:
        origin_interior = all(f.value > 0 for f in facets)
        if origin_interior:
            interior = _interior_lattice_points(polytope, facets)
            passed_b = interior == [(0,) * d]
            detail_b = (
                "origin is the unique interior lattice point"
                if passed_b
                else "interior lattice points: %s" % (interior[:8],)
            )
        else:
            passed_b = False
            worst = min(facets, key=lambda f: f.value)
            detail_b = "origin not strictly interior (facet %s at value %d)" % (
                worst.normal,
                worst.value,
            )
        conditions.append(ConditionResult("b_origin_interior", passed_b, detail_b))

        bad_c = []
        for f in facets:
            if len(f.vertex_indices) != d:
                bad_c.append("facet %s has %d vertices" % (f.normal, len(f.vertex_indices)))
                continue
            mat = [list(verts[i]) for i in f.vertex_indices]
            dv = det_int(mat)
            if abs(dv) != 1:
                bad_c.append("facet %s has vertex determinant %d" % (f.normal, dv))
        conditions.append(
            ConditionResult(
                "c_facet_bases",
                not bad_c,
                "; ".join(bad_c[:4]) or "every facet vertex set is a Z-basis",
            )
        )

        bad_d = [
            "facet %s at lattice distance %d" % (f.normal, abs(f.value))
            for f in facets
            if abs(f.value) != 1
        ]
        conditions.append(
            ConditionResult(
                "d_facet_level_one",
                not bad_d,
                "; ".join(bad_d[:4]) or "every facet functional has |value| = 1",
            )
        )
    else:
        conditions.append(ConditionResult("b_origin_interior", False, "no facet data"))
        conditions.append(ConditionResult("c_facet_bases", False, "no facet data"))
        conditions.append(ConditionResult("d_facet_level_one", False, "no facet data"))

    return FanoValidationReport(
        conditions,
        convention="facets normalised with primitive outer normals; "
        "distance-one condition checked as |value| = 1",
    )


# ---------------------------------------------------------------------------
# fans
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FanData:
    """Complete simplicial fan: primitive rays plus maximal cones.

    Rays are indexed from 0; maximal cones are sorted index tuples.  The
    relation-lattice slot 0 is reserved for the origin marker, so vectors
    in the relation lattice have length ``nrays + 1``.
    """

    dim: int
    rays: tuple
    max_cones: tuple

    def __post_init__(self):
        object.__setattr__(self, "rays", tuple(tuple(r) for r in self.rays))
        object.__setattr__(
            self, "max_cones", tuple(sorted(tuple(sorted(c)) for c in self.max_cones))
        )
        for c in self.max_cones:
            if len(c) != self.dim:
                raise ValueError("maximal cone %r is not simplicial of dimension %d" % (c, self.dim))

    @property
    def nrays(self):
        return len(self.rays)

    def cone_matrix(self, cone):
        return [[self.rays[i][j] for i in cone] for j in range(self.dim)]

    def cone_contains(self, cone, vec) -> bool:
        sol = solve_rational(self.cone_matrix(cone), list(vec))
        return sol is not None and all(x >= 0 for x in sol)

    def cone_spanned_by(self, ray_set) -> bool:
        s = set(ray_set)
        return any(s <= set(c) for c in self.max_cones)

    def containing_cone(self, vec):
        for idx, cone in enumerate(self.max_cones):
            if self.cone_contains(cone, vec):
                return idx
        return None


def fan_from_polytope(polytope: LatticePolytope) -> FanData:
    """Face fan of a Fano polytope: rays are vertices, cones are facets."""
    facets = facets_of(polytope)
    for f in facets:
        if len(f.vertex_indices) != polytope.dimension:
            raise NonSimplicialFacetError(
                "facet %s has %d vertices in dimension %d"
                % (f.normal, len(f.vertex_indices), polytope.dimension)
            )
    for v in polytope.vertices:
        g = 0
        for x in v:
            g = gcd(g, abs(x))
        if g != 1:
            raise ValueError("vertex %r is not a primitive lattice vector" % (v,))
    return FanData(
        polytope.dimension,
        polytope.vertices,
        tuple(f.vertex_indices for f in facets),
    )


# ---------------------------------------------------------------------------
# relation lattice and Mori basis
# ---------------------------------------------------------------------------


def relation_lattice(fan: FanData):
    """Canonical Z-basis of the relations among the height-one lifted rays.

    Vectors have length nrays + 1, slot 0 belonging to the origin marker;
    membership means  sum_i l_i * ray_i = 0  and  sum_{i>=0} l_i = 0.
    Rows are Hermite-reduced and oriented so that l_0 <= 0.
    """
    d, p = fan.dim, fan.nrays
    rows = [[0] + [fan.rays[i][j] for i in range(p)] for j in range(d)]
    rows.append([1] * (p + 1))
    kernel = integer_kernel(rows)
    basis = hnf_basis(kernel)
    oriented = []
    for vec in basis:
        if vec[0] > 0:
            vec = tuple(-x for x in vec)
        oriented.append(vec)
    return tuple(sorted(oriented))


def wall_relations(fan: FanData):
    """Primitive relation of the d+1 rays around each wall of the fan.

    Each relation is oriented to be positive on the two rays off the
    wall and lifted to the relation lattice (slot 0 balancing the sum).
    """
    d, p = fan.dim, fan.nrays
    rels = set()
    for c1, c2 in combinations(fan.max_cones, 2):
        shared = set(c1) & set(c2)
        if len(shared) != d - 1:
            continue
        involved = sorted(set(c1) | set(c2))
        matrix = [[fan.rays[i][j] for i in involved] for j in range(d)]
        kernel = integer_kernel(matrix)
        if len(kernel) != 1:
            continue
        v = primitive_vector(kernel[0])
        off = sorted(set(involved) - shared)
        pos = {ray: k for k, ray in enumerate(involved)}
        if v[pos[off[0]]] < 0:
            v = tuple(-x for x in v)
        if v[pos[off[0]]] <= 0 or v[pos[off[1]]] <= 0:
            raise WallBasisError(
                "wall between cones %r and %r has a non-convex relation %r" % (c1, c2, v)
            )
        rel = [0] * (p + 1)
        for k, ray in enumerate(involved):
            rel[ray + 1] = v[k]
        rel[0] = -sum(v)
        rels.add(tuple(rel))
    return sorted(rels)


@dataclass(frozen=True)
class MoriBasis:
    """Basis l^(1)..l^(r) of the relation lattice chosen from wall relations.

    Each vector (l_0, ..., l_p) has l_0 <= 0, and every wall relation is
    a nonnegative integer combination of the basis, which is what makes
    the mirror coordinates below sum over a simplicial cone.
    """

    vectors: tuple

    def __post_init__(self):
        object.__setattr__(self, "vectors", tuple(tuple(v) for v in self.vectors))

    @property
    def r(self):
        return len(self.vectors)

    @property
    def p(self):
        return len(self.vectors[0]) - 1 if self.vectors else 0

    def gamma_argument(self, i: int):
        """Coefficients (l_i^(1), ..., l_i^(r)) of slot i across the basis."""
        return tuple(v[i] for v in self.vectors)

    def pairing(self, m):
        """The lattice vector sum_k m_k l^(k) (length p+1)."""
        out = [0] * (self.p + 1)
        for k, mk in enumerate(m):
            if mk:
                for i, li in enumerate(self.vectors[k]):
                    out[i] += mk * li
        return tuple(out)

    def coordinates_of(self, vec):
        """Integer coordinates of a relation vector in this basis, or None."""
        cols = [list(v) for v in self.vectors]
        sol = solve_rational([[cols[k][i] for k in range(self.r)] for i in range(self.p + 1)], list(vec))
        if sol is None or any(x.denominator != 1 for x in sol):
            return None
        coords = tuple(int(x) for x in sol)
        if self.pairing(coords) != tuple(vec):
            return None
        return coords


def _coords_in_basis(basis, vec):
    rows = [[basis[k][i] for k in range(len(basis))] for i in range(len(vec))]
    sol = solve_rational(rows, list(vec))
    if sol is None:
        return None
    return sol


def mori_basis(fan: FanData, override=None) -> MoriBasis:
    """Select a relation-lattice basis from the wall relations.

    The selected vectors must form a Z-basis (unimodular change of basis
    against the Hermite basis of the relation lattice) with every wall
    relation a nonnegative integer combination of them; otherwise the
    summation cone underlying the mirror coordinates is not simplicial
    and a WallBasisError is raised.  ``override`` supplies the basis
    directly (it is validated the same way).
    """
    d, p = fan.dim, fan.nrays
    r = p - d
    lattice = relation_lattice(fan)
    if len(lattice) != r:
        raise RingConsistencyError(
            "relation lattice has rank %d, expected %d" % (len(lattice), r)
        )
    walls = wall_relations(fan)
    if override is not None:
        chosen = [tuple(int(x) for x in v) for v in override]
        if len(chosen) != r:
            raise WallBasisError("override supplies %d vectors, expected %d" % (len(chosen), r))
    else:
        chosen = None
        for combo in combinations(walls, r):
            coords = []
            ok = True
            for w in combo:
                sol = _coords_in_basis(lattice, w)
                if sol is None or any(x.denominator != 1 for x in sol):
                    ok = False
                    break
                coords.append([int(x) for x in sol])
            if not ok:
                continue
            if abs(det_int(coords)) == 1:
                chosen = list(combo)
                break
        if chosen is None:
            raise WallBasisError(
                "assumption not verifiable: no subset of the %d wall relations "
                "is a lattice basis of the relation lattice" % len(walls)
            )

    coord_rows = []
    for v in chosen:
        sol = _coords_in_basis(lattice, v)
        if sol is None or any(x.denominator != 1 for x in sol):
            raise WallBasisError("vector %r is not in the relation lattice" % (v,))
        coord_rows.append([int(x) for x in sol])
    if abs(det_int(coord_rows)) != 1:
        raise WallBasisError("selected vectors are not a Z-basis of the relation lattice")

    basis = MoriBasis(tuple(chosen))
    for v in basis.vectors:
        if v[0] > 0:
            raise WallBasisError("basis vector %r has positive origin slot" % (v,))
    for w in walls:
        coords = basis.coordinates_of(w)
        if coords is None or any(c < 0 for c in coords):
            raise WallBasisError(
                "wall relation %r is not a nonnegative combination of the basis" % (w,)
            )
    return basis


def divisors_in_J_basis(fan: FanData, basis: MoriBasis):
    """The p x r integer matrix expressing D_i = sum_k l_i^(k) J_k."""
    return [list(basis.gamma_argument(i + 1)) for i in range(fan.nrays)]


# ---------------------------------------------------------------------------
# cohomology ring
# ---------------------------------------------------------------------------


def _monomials_of_degree(nvars, degree):
    """Exponent tuples of the given total degree, descending lex order."""
    out = []

    def rec(prefix, remaining, slots):
        if slots == 1:
            out.append(prefix + (remaining,))
            return
        for e in range(remaining, -1, -1):
            rec(prefix + (e,), remaining - e, slots - 1)

    rec((), degree, nvars)
    return out


class CohClass:
    """Cohomology class in normal form.

    Terms live on exponent tuples over the ring's non-eliminated divisor
    variables; coefficients are rationals or TransScalars.  Arithmetic
    keeps classes in normal form and silently drops degrees above the
    ambient dimension, where the ring vanishes.
    """

    __slots__ = ("ring", "_terms")

    def __init__(self, ring, terms):
        data = {}
        for exps, coeff in terms.items():
            if coeff:
                data[tuple(exps)] = coeff
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "_terms", data)

    def __setattr__(self, name, value):
        raise AttributeError("CohClass is immutable")

    def sorted_terms(self):
        for exps in sorted(self._terms, key=lambda e: (sum(e), e)):
            yield exps, self._terms[exps]

    def __bool__(self):
        return bool(self._terms)

    def degrees(self):
        return sorted({sum(e) for e in self._terms})

    def degree_part(self, k) -> "CohClass":
        return CohClass(self.ring, {e: c for e, c in self._terms.items() if sum(e) == k})

    def map_coefficients(self, fn) -> "CohClass":
        return CohClass(self.ring, {e: fn(c) for e, c in self._terms.items()})

    def _check_ring(self, other):
        if self.ring is not other.ring:
            raise ValueError("classes from different cohomology rings")

    def __add__(self, other):
        if isinstance(other, CohClass):
            self._check_ring(other)
            data = dict(self._terms)
            for e, c in other._terms.items():
                acc = data.get(e, 0) + c
                if acc:
                    data[e] = acc
                else:
                    data.pop(e, None)
            return CohClass(self.ring, data)
        if isinstance(other, (int, Fraction, TransScalar)):
            if not other:
                return self
            return self + self.ring.constant(other)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return CohClass(self.ring, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, CohClass):
            self._check_ring(other)
            ring = self.ring
            raw = {}
            for e1, c1 in self._terms.items():
                d1 = sum(e1)
                for e2, c2 in other._terms.items():
                    if d1 + sum(e2) > ring.dim:
                        continue
                    e = tuple(a + b for a, b in zip(e1, e2))
                    acc = raw.get(e, 0) + c1 * c2
                    if acc:
                        raw[e] = acc
                    else:
                        raw.pop(e, None)
            data = {}
            for e, c in raw.items():
                for se, sc in ring.monomial_normal_form(e).items():
                    acc = data.get(se, 0) + c * sc
                    if acc:
                        data[se] = acc
                    else:
                        data.pop(se, None)
            return CohClass(ring, data)
        if isinstance(other, (int, Fraction, TransScalar)):
            if not other:
                return self.ring.zero()
            return CohClass(self.ring, {e: other * c for e, c in self._terms.items()})
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("class powers must be nonnegative integers")
        out = self.ring.one()
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, TransScalar)):
            other = self.ring.constant(other)
        if not isinstance(other, CohClass):
            return NotImplemented
        if self.ring is not other.ring:
            return False
        return not (self - other)

    def __ne__(self, other):
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    def __str__(self):
        if not self._terms:
            return "0"
        names = self.ring.variable_names
        parts = []
        for exps, coeff in self.sorted_terms():
            mono = "*".join(
                names[i] if e == 1 else "%s^%d" % (names[i], e)
                for i, e in enumerate(exps)
                if e
            )
            cs = str(coeff)
            if not mono:
                parts.append("(%s)" % cs if " " in cs else cs)
            elif cs == "1":
                parts.append(mono)
            elif " " in cs or cs.startswith("-"):
                parts.append("(%s)*%s" % (cs, mono))
            else:
                parts.append("%s*%s" % (cs, mono))
        return " + ".join(parts)

    def __repr__(self):
        return "CohClass(%s)" % self


class CohRing:
    """Rational cohomology ring of the smooth complete toric variety.

    Presented as Q[D_1..D_p] / (linear relations + Stanley-Reisner).
    The divisors of the lexicographically first maximal cone are
    eliminated via the linear relations; the remaining variables are
    reduced against the substituted Stanley-Reisner generators with a
    fixed graded-lex elimination order, giving canonical normal forms.
    """

    def __init__(self, fan: FanData):
        self.fan = fan
        self.dim = fan.dim
        d, p = fan.dim, fan.nrays
        self.sigma0 = fan.max_cones[0]
        G = fan.cone_matrix(self.sigma0)
        if abs(det_int(G)) != 1:
            raise RingConsistencyError("reference cone %r is not unimodular" % (self.sigma0,))
        Ginv = invert_unimodular(G)
        self.remaining = tuple(i for i in range(p) if i not in self.sigma0)
        self.nvars = len(self.remaining)
        self.variable_names = ["D%d" % (i + 1) for i in self.remaining]
        pos = {ray: k for k, ray in enumerate(self.remaining)}

        # linear form of each divisor over the remaining variables
        self._divisor_forms = {}
        for k, i in enumerate(self.remaining):
            self._divisor_forms[i] = {self._unit(k): 1}
        for j, e in enumerate(self.sigma0):
            form = {}
            for i in self.remaining:
                coeff = -_dot(Ginv[j], fan.rays[i])
                if coeff:
                    form[self._unit(pos[i])] = coeff
            self._divisor_forms[e] = form

        self._min_nonfaces = self._minimal_nonfaces()
        self._tables = self._build_tables()
        self._nf_cache = {}

        top_std = self.standard_monomials(d)
        if len(top_std) != 1:
            raise RingConsistencyError(
                "top degree is %d-dimensional, expected 1" % len(top_std)
            )
        self.top_monomial = top_std[0]
        self._point_value = self._calibrate()
        self._hyper = None

    # -- construction helpers ----------------------------------------

    def _unit(self, k):
        return tuple(1 if i == k else 0 for i in range(self.nvars))

    def _minimal_nonfaces(self):
        fan = self.fan
        p = fan.nrays
        out = []
        for size in range(2, fan.dim + 2):
            for subset in combinations(range(p), size):
                if fan.cone_spanned_by(subset):
                    continue
                if all(
                    fan.cone_spanned_by(subset[:k] + subset[k + 1 :])
                    for k in range(size)
                ):
                    out.append(subset)
        return tuple(out)

    def _poly_mul(self, a, b):
        out = {}
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                acc = out.get(e, 0) + c1 * c2
                if acc:
                    out[e] = acc
                else:
                    out.pop(e, None)
        return out

    def _build_tables(self):
        d = self.dim
        gens = []
        for S in self._min_nonfaces:
            if len(S) > d:
                continue
            poly = {(0,) * self.nvars: 1}
            for i in S:
                poly = self._poly_mul(poly, self._divisor_forms[i])
            gens.append((len(S), poly))
        tables = {}
        self._standard = {0: [(0,) * self.nvars]}
        for k in range(1, d + 1):
            mons = _monomials_of_degree(self.nvars, k)
            index = {m: i for i, m in enumerate(mons)}
            rows = []
            for deg_g, poly in gens:
                if deg_g > k:
                    continue
                for shift in _monomials_of_degree(self.nvars, k - deg_g):
                    row = [0] * len(mons)
                    for e, c in poly.items():
                        row[index[tuple(a + b for a, b in zip(e, shift))]] += c
                    rows.append(row)
            table = {}
            if rows:
                reduced, pivots = rref(rows)
                for rr, pc in zip(reduced, pivots):
                    table[mons[pc]] = {
                        mons[j]: -rr[j] for j in range(len(mons)) if j != pc and rr[j]
                    }
            tables[k] = table
            self._standard[k] = [m for m in mons if m not in table]
        return tables

    def _calibrate(self):
        values = set()
        for cone in self.fan.max_cones:
            cls = self.one()
            for i in cone:
                cls = cls * self.divisor(i)
            coeff = cls._terms.get(self.top_monomial, 0)
            if not coeff:
                raise RingConsistencyError("maximal cone %r monomial reduced to zero" % (cone,))
            values.add(Fraction(coeff))
        if len(values) != 1:
            raise RingConsistencyError(
                "maximal-cone monomials disagree after reduction: %s" % sorted(values)
            )
        return 1 / values.pop()

    # -- public surface -----------------------------------------------

    def standard_monomials(self, degree):
        return list(self._standard.get(degree, []))

    def monomial_normal_form(self, exps):
        """Normal form of a raw monomial over the remaining variables."""
        exps = tuple(exps)
        if sum(exps) > self.dim:
            return {}
        cached = self._nf_cache.get(exps)
        if cached is None:
            expr = self._tables.get(sum(exps), {}).get(exps)
            cached = {exps: Fraction(1)} if expr is None else dict(expr)
            self._nf_cache[exps] = cached
        return cached

    def zero(self) -> CohClass:
        return CohClass(self, {})

    def one(self) -> CohClass:
        return CohClass(self, {(0,) * self.nvars: 1})

    def constant(self, value) -> CohClass:
        return CohClass(self, {(0,) * self.nvars: value} if value else {})

    def divisor(self, i: int) -> CohClass:
        """The class of the i-th toric divisor (0-based ray index)."""
        if not 0 <= i < self.fan.nrays:
            raise ValueError("divisor index %d out of range" % i)
        return CohClass(self, dict(self._divisor_forms[i]))

    def reduce(self, divisor_terms) -> CohClass:
        """Normal form of a polynomial given over all p divisor symbols.

        ``divisor_terms`` maps exponent tuples of length p to
        coefficients; degrees above the ambient dimension reduce to 0.
        """
        total = self.zero()
        for exps, coeff in divisor_terms.items():
            if len(exps) != self.fan.nrays:
                raise ValueError("divisor exponent tuple must have length %d" % self.fan.nrays)
            if sum(exps) > self.dim:
                continue
            cls = self.constant(coeff)
            for i, e in enumerate(exps):
                for _ in range(e):
                    cls = cls * self.divisor(i)
            total = total + cls
        return total

    def hypersurface_class(self) -> CohClass:
        """The anticanonical class D_1 + ... + D_p."""
        if self._hyper is None:
            total = self.zero()
            for i in range(self.fan.nrays):
                total = total + self.divisor(i)
            self._hyper = total
        return self._hyper

    def intersection_number(self, cls: CohClass):
        """Integral over the toric variety of a pure top-degree class."""
        if not cls:
            return Fraction(0)
        if cls.degrees() != [self.dim]:
            raise ValueError(
                "intersection numbers need a pure degree-%d class, got degrees %s"
                % (self.dim, cls.degrees())
            )
        coeff = cls._terms.get(self.top_monomial, 0)
        return coeff * self._point_value

    def integrate_over_hypersurface(self, cls: CohClass):
        """Integral over the anticanonical hypersurface of a degree d-1 class."""
        if cls and cls.degrees() != [self.dim - 1]:
            raise ValueError(
                "hypersurface integration needs a pure degree-%d class, got degrees %s"
                % (self.dim - 1, cls.degrees())
            )
        if not cls:
            return Fraction(0)
        return self.intersection_number(cls * self.hypersurface_class())

    def class_from_series(self, univariate, cls: CohClass) -> CohClass:
        """Substitute a nilpotent class into a univariate power series."""
        if univariate.nvars != 1:
            raise ValueError("expected a univariate series")
        if (0,) * self.nvars in cls._terms:
            raise ValueError("substituted class must have no degree-0 part")
        total = self.zero()
        power = self.one()
        for m in range(0, min(univariate.order, self.dim) + 1):
            if m:
                power = power * cls
                if not power:
                    break
            c = univariate.coefficient((m,))
            if c:
                total = total + power * c
        return total


def intersection_number(ring: CohRing, cls: CohClass):
    return ring.intersection_number(cls)


def integrate_over_V(ring: CohRing, cls: CohClass):
    return ring.integrate_over_hypersurface(cls)


def chern_class_hypersurface(ring: CohRing, up_to=None) -> ChernVector:
    """Chern data of the anticanonical hypersurface as ambient classes.

    Expands (1+D_1)...(1+D_p)/(1+D_1+...+D_p), the denominator inverted
    as a geometric series, and returns the degree parts c_1..c_up_to
    (default: the ambient dimension; parts above dim V - 1 are the
    formal continuation of the expansion).  The degree-1 part must
    vanish, which is the Calabi-Yau check.
    """
    d = ring.dim
    if up_to is None:
        up_to = d
    if not 1 <= up_to <= d:
        raise ValueError("up_to must lie in 1..%d" % d)
    total = ring.one()
    for i in range(ring.fan.nrays):
        total = total * (ring.one() + ring.divisor(i))
    s = ring.hypersurface_class()
    inv = ring.one()
    power = ring.one()
    for _ in range(d):
        power = power * (-s)
        if not power:
            break
        inv = inv + power
    full = total * inv
    parts = [full.degree_part(k) for k in range(1, up_to + 1)]
    if parts[0]:
        raise RingConsistencyError(
            "degree-1 part of the hypersurface Chern expansion is %s, expected 0" % parts[0]
        )
    return ChernVector(up_to, parts)


def j_basis_classes(ring: CohRing, basis: MoriBasis):
    """Cohomology classes J_1..J_r dual to the Mori basis.

    Solves sum_i beta_i l_i^(k) = delta_(jk); any rational solution
    represents the same class because the kernel of the coordinate map
    is exactly the span of the linear relations.
    """
    fan = ring.fan
    r = basis.r
    rows = [[basis.vectors[k][i + 1] for i in range(fan.nrays)] for k in range(r)]
    out = []
    for k in range(r):
        rhs = [1 if j == k else 0 for j in range(r)]
        beta = solve_rational(rows, rhs)
        if beta is None:
            raise RingConsistencyError("Mori coordinate system is degenerate")
        cls = ring.zero()
        for i, b in enumerate(beta):
            if b:
                cls = cls + ring.divisor(i) * b
        out.append(cls)
    return out


# ---------------------------------------------------------------------------
# bundled geometry context and input files
# ---------------------------------------------------------------------------


@dataclass
class Geometry:
    """Everything derived from one polytope, built once and shared."""

    name: str
    polytope: LatticePolytope
    validation: FanoValidationReport
    fan: FanData
    relation_basis: tuple
    mori: MoriBasis
    ring: CohRing
    _j_classes: list = field(default=None, repr=False)
    _chern: ChernVector = field(default=None, repr=False)

    @classmethod
    def from_polytope(cls, polytope, name="polytope", mori_override=None) -> "Geometry":
        validation = validate_fano(polytope)
        if not validation.passed:
            failed = [c.key for c in validation.conditions if not c.passed]
            raise ValueError("polytope failed validation on: %s" % ", ".join(failed))
        fan = fan_from_polytope(polytope)
        lattice = relation_lattice(fan)
        mori = mori_basis(fan, override=mori_override)
        ring = CohRing(fan)
        return cls(name, polytope, validation, fan, lattice, mori, ring)

    @property
    def ambient_dim(self):
        return self.fan.dim

    @property
    def hypersurface_dim(self):
        return self.fan.dim - 1

    @property
    def nparams(self):
        return self.mori.r

    def j_classes(self):
        if self._j_classes is None:
            self._j_classes = j_basis_classes(self.ring, self.mori)
        return self._j_classes

    def chern(self) -> ChernVector:
        if self._chern is None:
            self._chern = chern_class_hypersurface(self.ring)
        return self._chern


def polytope_from_obj(data) -> tuple:
    """Build (LatticePolytope, extras) from a parsed input mapping."""
    if not isinstance(data, dict):
        raise PolytopeFormatError("input must be a mapping with dimension and vertices")
    try:
        dim = data["dimension"]
        vertices = data["vertices"]
    except KeyError as exc:
        raise PolytopeFormatError("missing required field %s" % exc) from exc
    if not isinstance(dim, int) or dim < 1:
        raise PolytopeFormatError("dimension must be a positive integer")
    if not isinstance(vertices, list) or not vertices:
        raise PolytopeFormatError("vertices must be a nonempty list")
    verts = []
    for idx, v in enumerate(vertices):
        if not isinstance(v, list) or len(v) != dim:
            raise PolytopeFormatError("vertex #%d must be a list of %d integers" % (idx, dim))
        if any(not isinstance(x, int) or isinstance(x, bool) for x in v):
            raise PolytopeFormatError("vertex #%d has non-integer entries" % idx)
        verts.append(tuple(v))
    order = data.get("ray_order")
    if order is not None:
        if sorted(order) != list(range(len(verts))):
            raise PolytopeFormatError("ray_order must be a permutation of 0..%d" % (len(verts) - 1))
        verts = [verts[i] for i in order]
    override = data.get("mori_basis_override")
    if override is not None:
        if not isinstance(override, list) or any(
            not isinstance(v, list) or len(v) != len(verts) + 1 for v in override
        ):
            raise PolytopeFormatError(
                "mori_basis_override must be a list of vectors of length %d" % (len(verts) + 1)
            )
    extras = {
        "name": data.get("name"),
        "mori_basis_override": override,
        "expected": data.get("expected"),
    }
    try:
        poly = LatticePolytope(dim, tuple(verts))
    except ValueError as exc:
        raise PolytopeFormatError(str(exc)) from exc
    return poly, extras


def load_polytope_file(path) -> tuple:
    """Parse a polytope input file (JSON, or TOML by extension)."""
    text = None
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise PolytopeFormatError("cannot read %s: %s" % (path, exc)) from exc
    if str(path).endswith(".toml"):
        import tomllib

        try:
            data = tomllib.loads(text)
        except tomllib.TOMLDecodeError as exc:
            raise PolytopeFormatError("TOML parse error in %s: %s" % (path, exc)) from exc
    else:
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise PolytopeFormatError(
                "JSON parse error in %s at line %d: %s" % (path, exc.lineno, exc.msg)
            ) from exc
    return polytope_from_obj(data)
