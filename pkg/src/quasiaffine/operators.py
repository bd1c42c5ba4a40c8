"""Homogeneous constant-coefficient differential operators and their symbols.

An operator ``u -> sum_{|alpha| = k} A_alpha d^alpha u`` is stored by its
coefficient matrices. Everything here works with the Fourier symbol
``A[xi] = sum xi^alpha A_alpha``; constant rank and spanning are probed on
finite frequency grids, while the composition identity of a potential pair is
checked symbolically.

Coordinate layouts shared with :mod:`quasiaffine.integrands`:

* ``grad(N, m)``: ``N x m`` matrices, ``(grad u)_{ij} = d_i u_j`` at ``i*m + j``;
* ``hessian(N, m)``: pairs ``i <= j`` in lexicographic order, then the
  component, i.e. ``d_i d_j u_k`` at ``pair_index(i, j)*m + k``;
* ``div_matrix(N, d)``: ``d x N`` matrices, ``(div u)_i = sum_j d_j u_{ij}``;
* ``curl(N, m)``: one output per pair ``a < b`` and component ``j``:
  ``d_a V_{bj} - d_b V_{aj}``.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, reduce
from itertools import combinations, combinations_with_replacement, product
from math import comb, gcd, prod
from typing import Iterable, Mapping, Sequence

from .algebra import (
    EchelonBasis,
    MultiIndex,
    RatMatrix,
    SparsePoly,
    Vector,
    as_rational,
    column_space,
    common_denominator,
    nullspace,
    rank,
)
from .reports import CheckReport, DimensionError, PairWitness, Verdict

DEFAULT_SEED = 20190917
DEFAULT_BOX = 2
DEFAULT_RANDOM_BOX = 9
DEFAULT_RANDOM_COUNT = 32


class OperatorError(ValueError):
    """Malformed operator data."""


@dataclass(frozen=True, eq=False)
class HomOperator:
    """``sum_{|alpha| = order} A_alpha d^alpha`` from ``R^in_dim`` to ``R^out_dim``.

    Zero coefficient matrices are dropped; at least one must remain.
    """

    base_dim: int
    in_dim: int
    out_dim: int
    order: int
    terms: Mapping[MultiIndex, RatMatrix]
    name: str = ""

    def __post_init__(self):
        for attr in ("base_dim", "in_dim", "out_dim", "order"):
            if int(getattr(self, attr)) < 1:
                raise OperatorError(f"{attr} must be a positive integer")
        clean = {}
        for alpha, mat in self.terms.items():
            alpha = tuple(int(a) for a in alpha)
            if len(alpha) != self.base_dim or any(a < 0 for a in alpha):
                raise OperatorError(f"multi-index {alpha} is not a valid index in {self.base_dim} variables")
            if sum(alpha) != self.order:
                raise OperatorError(
                    f"non-homogeneous: multi-index {alpha} has order {sum(alpha)}, expected {self.order}"
                )
            if not isinstance(mat, RatMatrix):
                mat = RatMatrix.from_rows(mat)
            if (mat.rows, mat.cols) != (self.out_dim, self.in_dim):
                raise OperatorError(
                    f"coefficient of {alpha} is {mat.rows}x{mat.cols}, expected {self.out_dim}x{self.in_dim}"
                )
            if alpha in clean:
                mat = clean[alpha] + mat
            clean[alpha] = mat
        clean = {a: clean[a] for a in sorted(clean) if not clean[a].is_zero}
        if not clean:
            raise OperatorError("zero operator: every coefficient matrix vanishes")
        object.__setattr__(self, "terms", clean)

    def __eq__(self, other) -> bool:
        if not isinstance(other, HomOperator):
            return NotImplemented
        return (
            (self.base_dim, self.in_dim, self.out_dim, self.order)
            == (other.base_dim, other.in_dim, other.out_dim, other.order)
            and self.terms == other.terms
        )

    def __hash__(self) -> int:
        return hash((self.base_dim, self.in_dim, self.out_dim, self.order, tuple(self.terms.items())))

    def __repr__(self) -> str:
        label = self.name or "HomOperator"
        return f"<{label}: N={self.base_dim}, R^{self.in_dim} -> R^{self.out_dim}, order {self.order}>"

    # symbols ----------------------------------------------------------------

    def _check_xi(self, xi: Sequence) -> None:
        if len(xi) != self.base_dim:
            raise DimensionError(f"frequency has {len(xi)} coordinates, operator has N = {self.base_dim}")

    def symbol(self, xi: Sequence) -> RatMatrix:
        """``A[xi]`` as an exact ``out_dim x in_dim`` matrix."""
        self._check_xi(xi)
        xi = [as_rational(v) for v in xi]
        acc = [[Fraction(0)] * self.in_dim for _ in range(self.out_dim)]
        for alpha, mat in self.terms.items():
            c = prod((x**a for x, a in zip(xi, alpha) if a), start=Fraction(1))
            if c:
                for i, row in enumerate(mat.entries):
                    for j, v in enumerate(row):
                        if v:
                            acc[i][j] += c * v
        return RatMatrix.from_rows(acc)

    @cached_property
    def integer_terms(self) -> tuple[int, tuple[tuple[MultiIndex, tuple[tuple[int, ...], ...]], ...]]:
        """``(L, terms)`` with every coefficient matrix multiplied by ``L`` to be integral."""
        scale = common_denominator(v for m in self.terms.values() for r in m.entries for v in r)
        terms = tuple(
            (alpha, tuple(tuple(int(v * scale) for v in r) for r in m.entries))
            for alpha, m in self.terms.items()
        )
        return scale, terms

    def integer_symbol(self, xi: Sequence[int]) -> list[list[int]]:
        """``L * A[xi]`` for an integer frequency, with ``L`` from :attr:`integer_terms`."""
        acc = [[0] * self.in_dim for _ in range(self.out_dim)]
        for alpha, mat in self.integer_terms[1]:
            c = 1
            for x, a in zip(xi, alpha):
                if a:
                    c *= x**a
            if c:
                for i, row in enumerate(mat):
                    acc_i = acc[i]
                    for j, v in enumerate(row):
                        if v:
                            acc_i[j] += c * v
        return acc

    @cached_property
    def symbol_polys(self) -> tuple[tuple[SparsePoly, ...], ...]:
        """Entries of ``A[xi]`` as polynomials in ``xi``."""
        entries = [[{} for _ in range(self.in_dim)] for _ in range(self.out_dim)]
        for alpha, mat in self.terms.items():
            for i, row in enumerate(mat.entries):
                for j, v in enumerate(row):
                    if v:
                        entries[i][j][alpha] = v
        return tuple(tuple(SparsePoly(self.base_dim, e) for e in row) for row in entries)

    @cached_property
    def max_exponents(self) -> tuple[int, ...]:
        """Largest power of each ``xi_c`` occurring in the symbol."""
        return tuple(max(alpha[c] for alpha in self.terms) for c in range(self.base_dim))

    # serialization ----------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "N": self.base_dim,
            "inDim": self.in_dim,
            "outDim": self.out_dim,
            "order": self.order,
            "terms": [{"alpha": list(a), "matrix": m.to_json()} for a, m in self.terms.items()],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> HomOperator:
        if not isinstance(data, Mapping):
            raise OperatorError("operator JSON must be an object")
        for key in ("N", "inDim", "outDim", "order", "terms"):
            if key not in data:
                raise OperatorError(f"missing field {key!r}")
        try:
            N, in_dim, out_dim, order = (int(data[k]) for k in ("N", "inDim", "outDim", "order"))
        except (TypeError, ValueError) as exc:
            raise OperatorError(f"dimension fields must be integers: {exc}") from exc
        terms: dict[MultiIndex, RatMatrix] = {}
        for idx, term in enumerate(data["terms"]):
            try:
                alpha = tuple(int(a) for a in term["alpha"])
                rows = term["matrix"]
            except (KeyError, TypeError, ValueError) as exc:
                raise OperatorError(f"term {idx}: {exc}") from exc
            if len(rows) != out_dim:
                raise OperatorError(f"term {idx}: matrix has {len(rows)} rows, expected outDim = {out_dim}")
            for i, r in enumerate(rows):
                if len(r) != in_dim:
                    raise OperatorError(
                        f"term {idx}: matrix row {i} has length {len(r)}, expected inDim = {in_dim}"
                    )
            try:
                mat = RatMatrix.from_json(rows)
            except (ValueError, TypeError) as exc:
                raise OperatorError(f"term {idx}: {exc}") from exc
            if sum(alpha) != order:
                raise OperatorError(
                    f"term {idx}: non-homogeneous, |alpha| = {sum(alpha)} but order = {order}"
                )
            if alpha in terms:
                mat = terms[alpha] + mat
            terms[alpha] = mat
        return cls(N, in_dim, out_dim, order, terms, name=str(data.get("name", "")))

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)


def symbol_at(op: HomOperator, xi: Sequence) -> RatMatrix:
    return op.symbol(xi)


def adjoint(op: HomOperator) -> HomOperator:
    """``(-1)^k sum A_alpha^T d^alpha``; an involution."""
    sign = -1 if op.order % 2 else 1
    name = op.name[len("adjoint("):-1] if op.name.startswith("adjoint(") else f"adjoint({op.name})"
    return HomOperator(
        op.base_dim,
        op.out_dim,
        op.in_dim,
        op.order,
        {a: m.transpose().scale(sign) for a, m in op.terms.items()},
        name=name,
    )


def block_diag(*ops: HomOperator, name: str = "") -> HomOperator:
    """Act with each operator on its own block of coordinates."""
    if not ops:
        raise OperatorError("block_diag needs at least one operator")
    N, k = ops[0].base_dim, ops[0].order
    for op in ops:
        if op.base_dim != N:
            raise DimensionError("all blocks must share the base dimension")
        if op.order != k:
            raise OperatorError("blocks of different orders would not be homogeneous")
    in_dim = sum(op.in_dim for op in ops)
    out_dim = sum(op.out_dim for op in ops)
    alphas = sorted({a for op in ops for a in op.terms})
    terms = {}
    for a in alphas:
        rows = [[Fraction(0)] * in_dim for _ in range(out_dim)]
        r0 = c0 = 0
        for op in ops:
            m = op.terms.get(a)
            if m is not None:
                for i, row in enumerate(m.entries):
                    rows[r0 + i][c0:c0 + op.in_dim] = row
            r0 += op.out_dim
            c0 += op.in_dim
        terms[a] = RatMatrix.from_rows(rows)
    return HomOperator(N, in_dim, out_dim, k, terms, name=name or "block_diag(" + ", ".join(o.name for o in ops) + ")")


def pair_operator(a1: HomOperator, b1: HomOperator) -> HomOperator:
    """``(u, v) -> (a1 u, b1* v)``, the annihilator of a div-curl type pairing."""
    return block_diag(a1, adjoint(b1), name=f"pair({a1.name}, {b1.name})")


def composition_terms(a: HomOperator, b: HomOperator) -> dict[MultiIndex, RatMatrix]:
    """Nonzero coefficients of ``a o b``, i.e. of the polynomial matrix ``A[xi] B[xi]``."""
    if a.in_dim != b.out_dim:
        raise DimensionError(f"A acts on R^{a.in_dim} but B maps into R^{b.out_dim}")
    if a.base_dim != b.base_dim:
        raise DimensionError("A and B live on tori of different dimension")
    out: dict[MultiIndex, RatMatrix] = {}
    for alpha, ma in a.terms.items():
        for beta, mb in b.terms.items():
            key = tuple(x + y for x, y in zip(alpha, beta))
            prod_m = ma @ mb
            out[key] = out[key] + prod_m if key in out else prod_m
    return {k: out[k] for k in sorted(out) if not out[k].is_zero}


# --------------------------------------------------------------------------
# frequency samples and grids
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class FrequencySample:
    xi: Vector
    kernel_basis: tuple[Vector, ...]

    @property
    def dim(self) -> int:
        return len(self.kernel_basis)


def _nonzero(xi: Sequence) -> tuple[Fraction, ...]:
    xi = tuple(as_rational(v) for v in xi)
    if not any(xi):
        raise ValueError("the zero frequency is not allowed")
    return xi


def kernel_sample(op: HomOperator, xi: Sequence) -> FrequencySample:
    xi = _nonzero(xi)
    return FrequencySample(xi, tuple(nullspace(op.symbol(xi))))


def image_sample(op: HomOperator, xi: Sequence) -> list[Vector]:
    return column_space(op.symbol(_nonzero(xi)))


def normalize_direction(v: Sequence[int]) -> tuple[int, ...]:
    """Primitive representative with a positive first nonzero entry."""
    g = reduce(gcd, (abs(int(a)) for a in v), 0)
    if g == 0:
        raise ValueError("the zero vector has no direction")
    out = [int(a) // g for a in v]
    if next(a for a in out if a) < 0:
        out = [-a for a in out]
    return tuple(out)


@dataclass(frozen=True)
class SampleGrid:
    """Pairwise non-proportional nonzero primitive integer frequencies."""

    points: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        pts = tuple(tuple(int(a) for a in p) for p in self.points)
        if not pts:
            raise ValueError("a sample grid needs at least one point")
        n = len(pts[0])
        seen = set()
        for p in pts:
            if len(p) != n:
                raise DimensionError("grid points have different lengths")
            d = normalize_direction(p)
            if d in seen:
                raise ValueError(f"grid point {p} is proportional to an earlier point")
            seen.add(d)
        object.__setattr__(self, "points", pts)

    @property
    def base_dim(self) -> int:
        return len(self.points[0])

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    @classmethod
    def from_points(cls, points: Iterable[Sequence[int]]) -> SampleGrid:
        """Normalize and deduplicate arbitrary nonzero integer points."""
        out, seen = [], set()
        for p in points:
            d = normalize_direction(p)
            if d not in seen:
                seen.add(d)
                out.append(d)
        return cls(tuple(out))


def box_directions(N: int, box: int = DEFAULT_BOX) -> list[tuple[int, ...]]:
    """Primitive directions in ``[-box, box]^N`` up to sign, standard basis first."""
    dirs = {normalize_direction(p) for p in product(range(-box, box + 1), repeat=N) if any(p)}
    return sorted(dirs, key=lambda v: (sum(abs(a) for a in v), [-a for a in v]))


def random_grid(N: int, count: int, seed: int = DEFAULT_SEED, box: int = DEFAULT_RANDOM_BOX,
                exclude: Iterable[Sequence[int]] = ()) -> list[tuple[int, ...]]:
    rng = random.Random(seed)
    seen = {normalize_direction(p) for p in exclude}
    out = []
    budget = 200 * max(count, 1)
    while len(out) < count and budget:
        budget -= 1
        v = [rng.randint(-box, box) for _ in range(N)]
        if not any(v):
            continue
        d = normalize_direction(v)
        if d not in seen:
            seen.add(d)
            out.append(d)
    return out


def default_grid(N: int, seed: int = DEFAULT_SEED, random_count: int = DEFAULT_RANDOM_COUNT) -> SampleGrid:
    """Box directions in ``[-2, 2]^N`` plus seeded random ones from ``[-9, 9]^N``."""
    base = box_directions(N)
    extra = random_grid(N, random_count, seed=seed, exclude=base)
    return SampleGrid(tuple(base + extra))


# --------------------------------------------------------------------------
# probes
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class RankReport:
    verdict: str
    common_rank: int | None
    witness: tuple[tuple[tuple[int, ...], int], tuple[tuple[int, ...], int]] | None
    grid_size: int

    @property
    def constant(self) -> bool:
        return self.witness is None

    def to_json(self) -> dict:
        out = {"verdict": self.verdict, "gridSize": self.grid_size}
        if self.witness is None:
            out["commonRank"] = self.common_rank
        else:
            out["witness"] = [{"xi": list(xi), "rank": r} for xi, r in self.witness]
        return out


def constant_rank_probe(op: HomOperator, grid: SampleGrid) -> RankReport:
    """Ranks of ``op[xi]`` over the grid: differing ranks refute constant rank."""
    if grid.base_dim != op.base_dim:
        raise DimensionError("grid and operator have different base dimensions")
    first = None
    for xi in grid:
        rk = rank(op.integer_symbol(xi))
        if first is None:
            first = (xi, rk)
        elif rk != first[1]:
            return RankReport("NOT-CONSTANT-RANK", None, (first, (xi, rk)), len(grid))
    return RankReport("PROBABLE-CONSTANT-RANK", first[1], None, len(grid))


@dataclass(frozen=True)
class SpanReport:
    side: str
    spans: bool
    span_dim: int
    target_dim: int
    grid_size: int

    @property
    def definitive(self) -> bool:
        return self.spans

    def to_json(self) -> dict:
        return {
            "side": self.side,
            "spans": self.spans,
            "spanDim": self.span_dim,
            "targetDim": self.target_dim,
            "gridSize": self.grid_size,
            "definitive": self.spans,
        }


def spanning_probe(op: HomOperator, grid: SampleGrid, side: str = "kernel") -> SpanReport:
    """Accumulate ``ker op[xi]`` (``side="kernel"``) or ``im op[xi]`` (``side="image"``)."""
    if side not in ("kernel", "image"):
        raise ValueError("side must be 'kernel' or 'image'")
    if grid.base_dim != op.base_dim:
        raise DimensionError("grid and operator have different base dimensions")
    dim = op.in_dim if side == "kernel" else op.out_dim
    acc = EchelonBasis(dim)
    for xi in grid:
        vecs = nullspace(op.integer_symbol(xi)) if side == "kernel" else column_space(op.integer_symbol(xi))
        for v in vecs:
            acc.add(v)
        if acc.full:
            break
    return SpanReport(side, acc.full, acc.rank, dim, len(grid))


def verify_potential_pair(a: HomOperator, b: HomOperator, grid: SampleGrid) -> CheckReport:
    """Certify that ``b`` is a potential of ``a``.

    (i) ``A[xi] B[xi]`` is expanded symbolically and must be the zero
    polynomial matrix; (ii) at every grid frequency
    ``rank B[xi] == in_dim(A) - rank A[xi]``, i.e. the image fills the kernel.
    """
    terms = composition_terms(a, b)
    cert = []
    if terms:
        entries: dict[tuple[int, int], dict[MultiIndex, Fraction]] = {}
        for alpha, m in terms.items():
            for i, row in enumerate(m.entries):
                for j, v in enumerate(row):
                    if v:
                        entries.setdefault((i, j), {})[alpha] = v
        entry = min(entries)
        mono = min(entries[entry])
        w = PairWitness("composition", entry=entry, monomial=mono, coefficient=entries[entry][mono])
        cert.append(f"A[xi]B[xi] has {len(entries)} nonzero polynomial entries")
        return CheckReport(Verdict.FAIL, witness=w, certificate=cert, check="verify-pair")
    cert.append(
        f"A[xi]B[xi] expanded symbolically over {len(a.terms)}x{len(b.terms)} coefficient products: identically zero"
    )
    if grid.base_dim != a.base_dim:
        raise DimensionError("grid and operators have different base dimensions")
    for xi in grid:
        ra = rank(a.integer_symbol(xi))
        rb = rank(b.integer_symbol(xi))
        if rb != a.in_dim - ra:
            w = PairWitness("rank", frequency=tuple(Fraction(v) for v in xi), rank_a=ra, rank_b=rb)
            cert.append(f"image of B[xi] is strictly smaller than ker A[xi] at xi = {xi}")
            return CheckReport(Verdict.FAIL, witness=w, certificate=cert, check="verify-pair")
    cert.append(f"rank B[xi] = dim - rank A[xi] on all {len(grid)} grid frequencies")
    return CheckReport(Verdict.PASS, certificate=cert, check="verify-pair")


# --------------------------------------------------------------------------
# zoo
# --------------------------------------------------------------------------


def _unit(n: int, i: int) -> MultiIndex:
    e = [0] * n
    e[i] = 1
    return tuple(e)


def _build(N, in_dim, out_dim, order, entries, name) -> HomOperator:
    """``entries`` maps alpha -> list of (row, col, value)."""
    terms = {}
    for alpha, triples in entries.items():
        rows = [[0] * in_dim for _ in range(out_dim)]
        for i, j, v in triples:
            rows[i][j] += v
        terms[alpha] = RatMatrix.from_rows(rows)
    return HomOperator(N, in_dim, out_dim, order, terms, name=name)


def pair_index(N: int, i: int, j: int) -> int:
    """Position of the pair ``(min, max)`` among ``i <= j`` pairs in lexicographic order."""
    i, j = min(i, j), max(i, j)
    return list(combinations_with_replacement(range(N), 2)).index((i, j))


def grad(N: int, m: int = 1) -> HomOperator:
    entries: dict = {}
    for i in range(N):
        for j in range(m):
            entries.setdefault(_unit(N, i), []).append((i * m + j, j, 1))
    return _build(N, m, N * m, 1, entries, f"grad(N={N},m={m})")


def hessian(N: int, m: int = 1) -> HomOperator:
    pairs = list(combinations_with_replacement(range(N), 2))
    entries: dict = {}
    for p, (i, j) in enumerate(pairs):
        alpha = tuple(int(c == i) + int(c == j) for c in range(N))
        for k in range(m):
            entries.setdefault(alpha, []).append((p * m + k, k, 1))
    return _build(N, m, len(pairs) * m, 2, entries, f"hessian(N={N},m={m})")


def curl(N: int, m: int = 1) -> HomOperator:
    if N < 2:
        raise OperatorError("curl needs N >= 2")
    pairs = list(combinations(range(N), 2))
    entries: dict = {}
    for p, (a, b) in enumerate(pairs):
        for j in range(m):
            out = p * m + j
            entries.setdefault(_unit(N, a), []).append((out, b * m + j, 1))
            entries.setdefault(_unit(N, b), []).append((out, a * m + j, -1))
    return _build(N, N * m, len(pairs) * m, 1, entries, f"curl(N={N},m={m})")


def curl2() -> HomOperator:
    op = curl(2, 1)
    return HomOperator(op.base_dim, op.in_dim, op.out_dim, op.order, op.terms, name="curl2")


def hessian_curl(N: int, m: int = 1) -> HomOperator:
    """First-order annihilator of :func:`hessian`: ``d_l V_(ij)k - d_j V_(il)k``."""
    if N < 2:
        raise OperatorError("hessian_curl needs N >= 2")
    n_pairs = comb(N + 1, 2)
    outs = [(i, j, l) for i in range(N) for j, l in combinations(range(N), 2)]
    entries: dict = {}
    for o, (i, j, l) in enumerate(outs):
        for k in range(m):
            row = o * m + k
            entries.setdefault(_unit(N, l), []).append((row, pair_index(N, i, j) * m + k, 1))
            entries.setdefault(_unit(N, j), []).append((row, pair_index(N, i, l) * m + k, -1))
    return _build(N, n_pairs * m, len(outs) * m, 1, entries, f"hessian_curl(N={N},m={m})")


def div_matrix(N: int, d: int = 1) -> HomOperator:
    entries: dict = {}
    for i in range(d):
        for j in range(N):
            entries.setdefault(_unit(N, j), []).append((i, i * N + j, 1))
    return _build(N, d * N, d, 1, entries, f"div_matrix(N={N},d={d})")


def div(N: int) -> HomOperator:
    op = div_matrix(N, 1)
    return HomOperator(op.base_dim, op.in_dim, op.out_dim, op.order, op.terms, name=f"div(N={N})")


def div_potential(N: int, d: int = 1) -> HomOperator:
    """Row-wise ``curl*``: a first-order potential of :func:`div_matrix`."""
    row = adjoint(curl(N, 1))
    return block_diag(*([row] * d), name=f"div_potential(N={N},d={d})")


def div_curl_annihilator(N: int, m: int = 1) -> HomOperator:
    """``(u, v) -> (curl u, grad* v)`` on pairs of ``N x m`` fields."""
    op = pair_operator(curl(N, m), grad(N, m))
    return HomOperator(op.base_dim, op.in_dim, op.out_dim, op.order, op.terms,
                       name=f"div_curl_annihilator(N={N},m={m})")


def div_curl_potential(N: int, m: int = 1) -> HomOperator:
    """Potential of :func:`div_curl_annihilator`: ``(p, q) -> (grad p, curl* q)``."""
    return block_diag(grad(N, m), adjoint(curl(N, m)), name=f"div_curl_potential(N={N},m={m})")


OPERATOR_ZOO = {
    "grad": (grad, ("N", "m")),
    "hessian": (hessian, ("N", "m")),
    "curl": (curl, ("N", "m")),
    "curl2": (curl2, ()),
    "hessian_curl": (hessian_curl, ("N", "m")),
    "div_matrix": (div_matrix, ("N", "d")),
    "div": (div, ("N",)),
    "div_potential": (div_potential, ("N", "d")),
    "div_curl_annihilator": (div_curl_annihilator, ("N", "m")),
    "div_curl_potential": (div_curl_potential, ("N", "m")),
}


def zoo_operator(name: str, **params) -> HomOperator:
    try:
        ctor, allowed = OPERATOR_ZOO[name]
    except KeyError:
        raise OperatorError(f"unknown zoo operator {name!r}; known: {', '.join(sorted(OPERATOR_ZOO))}") from None
    unknown = set(params) - set(allowed)
    if unknown:
        raise OperatorError(f"{name} does not take parameter(s) {sorted(unknown)}; expects {allowed}")
    return ctor(**{k: int(v) for k, v in params.items()})
