"""Polynomial integrands and their derivative tensors.

Matrix arguments are flattened row-major and symmetric-tensor arguments use
the ``(i <= j, k)`` layout of :mod:`quasiaffine.operators`, so an integrand
from the zoo can be fed straight into a check against the matching operator.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations, permutations
from math import factorial
from typing import Mapping, Sequence

from .algebra import SparsePoly, as_rational
from .reports import DimensionError


class IntegrandError(ValueError):
    """Malformed integrand data or unknown zoo entry."""


@dataclass(frozen=True, eq=False)
class PolyIntegrand:
    """A polynomial ``f: R^d -> R``."""

    d: int
    poly: SparsePoly
    name: str = ""

    def __post_init__(self):
        if self.d < 1:
            raise IntegrandError("d must be positive")
        if self.poly.nvars != self.d:
            raise IntegrandError(f"polynomial has {self.poly.nvars} variables, integrand has d = {self.d}")

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyIntegrand):
            return NotImplemented
        return self.d == other.d and self.poly == other.poly

    def __hash__(self) -> int:
        return hash((self.d, self.poly))

    def __repr__(self) -> str:
        return f"<PolyIntegrand {self.name or '?'}: d={self.d}, degree {self.degree}>"

    @property
    def degree(self) -> int:
        return self.poly.degree

    def __call__(self, x: Sequence) -> Fraction:
        return self.poly.evaluate(x)

    def scaled(self, c) -> PolyIntegrand:
        return PolyIntegrand(self.d, self.poly * as_rational(c), name=self.name)

    def shifted(self, shift: Sequence) -> PolyIntegrand:
        return PolyIntegrand(self.d, self.poly.shifted(shift), name=self.name)

    def to_json(self) -> dict:
        return {"d": self.d, "name": self.name, "terms": self.poly.to_json()}

    @classmethod
    def from_json(cls, data: Mapping) -> PolyIntegrand:
        if not isinstance(data, Mapping) or "d" not in data or "terms" not in data:
            raise IntegrandError("integrand JSON needs fields 'd' and 'terms'")
        try:
            d = int(data["d"])
            poly = SparsePoly.from_json(d, data["terms"])
        except (TypeError, ValueError) as exc:
            raise IntegrandError(str(exc)) from exc
        return cls(d, poly, name=str(data.get("name", "")))

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)


def _distinct_orderings(index: tuple[int, ...]) -> list[tuple[int, ...]]:
    return sorted(set(permutations(index)))


@dataclass(frozen=True, eq=False)
class DerivativeTensor:
    """``D^r f`` stored by sorted index tuples; zero components are omitted."""

    r: int
    base: PolyIntegrand
    components: Mapping[tuple[int, ...], SparsePoly]

    @property
    def d(self) -> int:
        return self.base.d

    @property
    def is_zero(self) -> bool:
        return not self.components

    def component(self, index: Sequence[int]) -> SparsePoly:
        return self.components.get(tuple(sorted(index)), SparsePoly.zero(self.d))

    @cached_property
    def expansion(self) -> tuple[list[tuple[int, ...]], list[tuple[int, ...]], list[int]]:
        """``(keys, ordered, owner)``: every ordered tuple and the stored key it belongs to."""
        keys = list(self.components)
        ordered, owner = [], []
        for s, key in enumerate(keys):
            for t in _distinct_orderings(key):
                ordered.append(t)
                owner.append(s)
        return keys, ordered, owner


def derivative_tensor(f: PolyIntegrand, r: int) -> DerivativeTensor:
    if r < 1:
        raise ValueError("derivative order must be at least 1")
    comps: dict[tuple[int, ...], SparsePoly] = {}
    if r <= f.degree:
        # differentiate along sorted index tuples, reusing the shared prefixes
        level = {(): f.poly}
        for _ in range(r):
            nxt = {}
            for idx, p in level.items():
                start = idx[-1] if idx else 0
                for i in range(start, f.d):
                    q = p.diff(i)
                    if q:
                        nxt[idx + (i,)] = q
            level = nxt
        comps = dict(sorted(level.items()))
    return DerivativeTensor(r, f, comps)


def apply_tensor(T: DerivativeTensor, x: Sequence, vectors: Sequence[Sequence]) -> Fraction:
    """``D^r f(x)[v_1, ..., v_r]``, summing each stored component over its orderings."""
    if len(vectors) != T.r:
        raise DimensionError(f"need {T.r} vectors, got {len(vectors)}")
    if len(x) != T.d or any(len(v) != T.d for v in vectors):
        raise DimensionError(f"all arguments must have length d = {T.d}")
    vecs = [[as_rational(a) for a in v] for v in vectors]
    x = [as_rational(a) for a in x]
    total = Fraction(0)
    for key, poly in T.components.items():
        weight = Fraction(0)
        for t in _distinct_orderings(key):
            term = Fraction(1)
            for j, i in enumerate(t):
                term *= vecs[j][i]
                if not term:
                    break
            weight += term
        if weight:
            total += weight * poly.evaluate(x)
    return total


def taylor_value(f: PolyIntegrand, x: Sequence, h: Sequence) -> Fraction:
    """``sum_r D^r f(x)[h, ..., h] / r!``, which equals ``f(x + h)`` exactly."""
    total = f(x)
    for r in range(1, max(f.degree, 0) + 1):
        total += apply_tensor(derivative_tensor(f, r), x, [h] * r) / factorial(r)
    return total


def homogeneous_parts(f: PolyIntegrand) -> list[PolyIntegrand]:
    return [PolyIntegrand(f.d, p, name=f"{f.name}[deg {k}]") for k, p in f.poly.homogeneous_parts().items()]


# --------------------------------------------------------------------------
# zoo
# --------------------------------------------------------------------------


def _det_poly(nvars: int, index: Sequence[Sequence[int]]) -> SparsePoly:
    """Leibniz expansion of the determinant of the square matrix of variable indices."""
    n = len(index)
    terms: dict[tuple[int, ...], Fraction] = {}
    for perm in permutations(range(n)):
        sign = 1
        for a, b in combinations(range(n), 2):
            if perm[a] > perm[b]:
                sign = -sign
        exps = [0] * nvars
        for row, col in enumerate(perm):
            exps[index[row][col]] += 1
        key = tuple(exps)
        terms[key] = terms.get(key, Fraction(0)) + sign
    return SparsePoly(nvars, terms)


def minor(n_rows: int, n_cols: int, rows: Sequence[int], cols: Sequence[int]) -> PolyIntegrand:
    """Minor of an ``n_rows x n_cols`` matrix (row-major) on the given rows and columns."""
    rows, cols = list(rows), list(cols)
    if len(rows) != len(cols) or not rows:
        raise IntegrandError("a minor needs equally many (and at least one) rows and columns")
    if len(set(rows)) != len(rows) or len(set(cols)) != len(cols):
        raise IntegrandError("minor rows and columns must be distinct")
    if not all(0 <= i < n_rows for i in rows) or not all(0 <= j < n_cols for j in cols):
        raise IntegrandError("minor index out of range")
    d = n_rows * n_cols
    index = [[i * n_cols + j for j in cols] for i in rows]
    return PolyIntegrand(d, _det_poly(d, index), name=f"minor({n_rows}x{n_cols};rows={rows};cols={cols})")


def all_minors(n_rows: int, n_cols: int, size: int) -> list[PolyIntegrand]:
    return [
        minor(n_rows, n_cols, rs, cs)
        for rs in combinations(range(n_rows), size)
        for cs in combinations(range(n_cols), size)
    ]


def det(n: int) -> PolyIntegrand:
    f = minor(n, n, range(n), range(n))
    return PolyIntegrand(f.d, f.poly, name=f"det({n})")


def dot(d: int) -> PolyIntegrand:
    """``f(a, b) = a . b`` on ``R^d x R^d``."""
    terms = {}
    for i in range(d):
        e = [0] * (2 * d)
        e[i] = e[d + i] = 1
        terms[tuple(e)] = Fraction(1)
    return PolyIntegrand(2 * d, SparsePoly(2 * d, terms), name=f"dot({d})")


def norm_squared(d: int) -> PolyIntegrand:
    terms = {}
    for i in range(d):
        e = [0] * d
        e[i] = 2
        terms[tuple(e)] = Fraction(1)
    return PolyIntegrand(d, SparsePoly(d, terms), name=f"normSquared({d})")


def bco_l() -> PolyIntegrand:
    """Signed ``S_3`` sum ``sum sgn(s) u_{s1,xx} u_{s2,xy} u_{s3,yy}`` on ``hessian(2, 3)`` outputs.

    In the pair-major layout this is the determinant of the 3x3 matrix whose
    row ``p`` (xx, xy, yy) and column ``k`` (component) hold coordinate ``3p + k``.
    """
    index = [[3 * p + k for k in range(3)] for p in range(3)]
    return PolyIntegrand(9, _det_poly(9, index), name="bcoL")


def trace(n: int) -> PolyIntegrand:
    d = n * n
    terms = {}
    for i in range(n):
        e = [0] * d
        e[i * n + i] = 1
        terms[tuple(e)] = Fraction(1)
    return PolyIntegrand(d, SparsePoly(d, terms), name=f"trace({n})")


INTEGRAND_ZOO = {
    "minor": (lambda n_rows, n_cols, rows, cols: minor(n_rows, n_cols, rows, cols), ("n_rows", "n_cols", "rows", "cols")),
    "det": (det, ("n",)),
    "dot": (dot, ("d",)),
    "bcoL": (bco_l, ()),
    "normSquared": (norm_squared, ("d",)),
    "trace": (trace, ("n",)),
}


def zoo_integrand(name: str, **params) -> PolyIntegrand:
    try:
        ctor, allowed = INTEGRAND_ZOO[name]
    except KeyError:
        raise IntegrandError(f"unknown zoo integrand {name!r}; known: {', '.join(sorted(INTEGRAND_ZOO))}") from None
    unknown = set(params) - set(allowed)
    missing = set(allowed) - set(params)
    if unknown or missing:
        raise IntegrandError(f"{name} expects parameters {allowed}")
    return ctor(**params)
