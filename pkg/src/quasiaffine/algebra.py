"""Exact arithmetic over the rationals.

Sparse multivariate polynomials with :class:`fractions.Fraction` coefficients,
small dense rational matrices, and an incrementally maintained reduced row
echelon basis that backs every rank / kernel / span computation in the package.
Nothing in here ever touches floating point.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Iterable, Iterator, Mapping, Sequence

Rational = Fraction
MultiIndex = tuple[int, ...]
Vector = tuple[Fraction, ...]


def as_rational(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction.

    Floats are rejected on purpose: a float has already been rounded.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational literal: {value!r}") from exc
    raise TypeError(f"cannot use {type(value).__name__} as an exact rational")


def format_rational(q: Fraction) -> str:
    """``"p/q"`` with the sign on the numerator, ``"p"`` when q == 1."""
    q = as_rational(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def as_vector(values: Iterable) -> Vector:
    return tuple(as_rational(v) for v in values)


def common_denominator(values: Iterable[Fraction]) -> int:
    return reduce(lcm, (Fraction(v).denominator for v in values), 1)


def integer_scaled(values: Sequence[Fraction]) -> tuple[list[int], int]:
    """Return ``(ints, D)`` with ``ints[i] == values[i] * D`` and ``D > 0``."""
    den = common_denominator(values)
    return [int(v * den) for v in values], den


def primitive_integer_vector(values: Sequence[Fraction]) -> list[int]:
    """Positive rational multiple of ``values`` with coprime integer entries."""
    ints, _ = integer_scaled(values)
    g = reduce(gcd, ints, 0)
    if g == 0:
        return ints
    return [v // g for v in ints]


# --------------------------------------------------------------------------
# Sparse polynomials
# --------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SparsePoly:
    """Polynomial in ``nvars`` variables, stored as exponent tuple -> coefficient.

    Zero coefficients are never stored and keys iterate in lexicographic
    order, so two equal polynomials serialize identically.
    """

    nvars: int
    terms: Mapping[MultiIndex, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        if self.nvars < 0:
            raise ValueError("nvars must be non-negative")
        clean = {}
        for exps, coeff in self.terms.items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != self.nvars:
                raise ValueError(
                    f"exponent vector {exps} has length {len(exps)}, expected {self.nvars}"
                )
            if any(e < 0 for e in exps):
                raise ValueError(f"negative exponent in {exps}")
            coeff = as_rational(coeff)
            if coeff:
                clean[exps] = clean.get(exps, Fraction(0)) + coeff
        clean = {k: clean[k] for k in sorted(clean) if clean[k]}
        object.__setattr__(self, "terms", clean)

    # constructors -----------------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> SparsePoly:
        return cls(nvars, {})

    @classmethod
    def constant(cls, nvars: int, value) -> SparsePoly:
        return cls(nvars, {(0,) * nvars: as_rational(value)})

    @classmethod
    def variable(cls, nvars: int, index: int) -> SparsePoly:
        if not 0 <= index < nvars:
            raise IndexError(f"variable {index} out of range for {nvars} variables")
        exps = [0] * nvars
        exps[index] = 1
        return cls(nvars, {tuple(exps): Fraction(1)})

    @classmethod
    def monomial(cls, exponents: Sequence[int], coeff=1) -> SparsePoly:
        return cls(len(exponents), {tuple(exponents): as_rational(coeff)})

    # basic protocol ---------------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, SparsePoly):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == SparsePoly.constant(self.nvars, other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.nvars, tuple(self.terms.items())))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __iter__(self) -> Iterator[tuple[MultiIndex, Fraction]]:
        return iter(self.terms.items())

    def __len__(self) -> int:
        return len(self.terms)

    def __repr__(self) -> str:
        if not self.terms:
            return f"SparsePoly({self.nvars}, 0)"
        parts = []
        for exps, c in self.terms.items():
            mono = "*".join(
                f"x{i}" if e == 1 else f"x{i}^{e}" for i, e in enumerate(exps) if e
            )
            parts.append(f"{format_rational(c)}*{mono}" if mono else format_rational(c))
        return f"SparsePoly({self.nvars}, {' + '.join(parts)})"

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, index: int) -> int:
        """Degree in one variable; -1 for the zero polynomial."""
        return max((e[index] for e in self.terms), default=-1)

    def coefficient(self, exponents: Sequence[int]) -> Fraction:
        return self.terms.get(tuple(exponents), Fraction(0))

    # arithmetic -------------------------------------------------------------

    def _check(self, other: SparsePoly):
        if other.nvars != self.nvars:
            raise ValueError(
                f"variable count mismatch: {self.nvars} vs {other.nvars}"
            )

    def _coerce(self, other) -> SparsePoly:
        if isinstance(other, SparsePoly):
            self._check(other)
            return other
        return SparsePoly.constant(self.nvars, other)

    def __add__(self, other) -> SparsePoly:
        other = self._coerce(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, Fraction(0)) + v
        return SparsePoly(self.nvars, out)

    __radd__ = __add__

    def __neg__(self) -> SparsePoly:
        return SparsePoly(self.nvars, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other) -> SparsePoly:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> SparsePoly:
        return self._coerce(other) - self

    def __mul__(self, other) -> SparsePoly:
        if not isinstance(other, SparsePoly):
            c = as_rational(other)
            return SparsePoly(self.nvars, {k: c * v for k, v in self.terms.items()})
        self._check(other)
        out: dict[MultiIndex, Fraction] = {}
        for ka, va in self.terms.items():
            for kb, vb in other.terms.items():
                k = tuple(a + b for a, b in zip(ka, kb))
                out[k] = out.get(k, Fraction(0)) + va * vb
        return SparsePoly(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> SparsePoly:
        if n < 0:
            raise ValueError("negative powers are not polynomials")
        result = SparsePoly.constant(self.nvars, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # calculus and evaluation ------------------------------------------------

    def evaluate(self, point: Sequence) -> Fraction:
        if len(point) != self.nvars:
            raise ValueError(
                f"point has {len(point)} coordinates, polynomial has {self.nvars} variables"
            )
        pt = [as_rational(p) for p in point]
        total = Fraction(0)
        for exps, c in self.terms.items():
            term = c
            for p, e in zip(pt, exps):
                if e:
                    term *= p**e
            total += term
        return total

    def evaluate_int(self, point: Sequence[int]) -> Fraction:
        """Faster evaluation at an integer point (the coefficients may still be rational)."""
        total = Fraction(0)
        for exps, c in self.terms.items():
            m = 1
            for p, e in zip(point, exps):
                if e:
                    m *= p**e
            if m:
                total += c * m
        return total

    def diff(self, index: int) -> SparsePoly:
        if not 0 <= index < self.nvars:
            raise IndexError(f"variable {index} out of range for {self.nvars} variables")
        out = {}
        for exps, c in self.terms.items():
            e = exps[index]
            if e:
                k = list(exps)
                k[index] = e - 1
                out[tuple(k)] = c * e
        return SparsePoly(self.nvars, out)

    def homogeneous_parts(self) -> dict[int, SparsePoly]:
        buckets: dict[int, dict[MultiIndex, Fraction]] = {}
        for exps, c in self.terms.items():
            buckets.setdefault(sum(exps), {})[exps] = c
        return {deg: SparsePoly(self.nvars, t) for deg, t in sorted(buckets.items())}

    def shifted(self, shift: Sequence) -> SparsePoly:
        """The polynomial ``x -> p(x + shift)``."""
        if len(shift) != self.nvars:
            raise ValueError("shift length does not match variable count")
        subs = [
            SparsePoly.variable(self.nvars, i) + as_rational(s) for i, s in enumerate(shift)
        ]
        return self.compose(subs)

    def compose(self, substitutions: Sequence[SparsePoly]) -> SparsePoly:
        """Substitute ``x_i -> substitutions[i]`` (all in a common ring)."""
        if len(substitutions) != self.nvars:
            raise ValueError("need one substitution per variable")
        if not substitutions:
            return self
        target = substitutions[0].nvars
        out = SparsePoly.zero(target)
        powers: dict[tuple[int, int], SparsePoly] = {}
        for exps, c in self.terms.items():
            term = SparsePoly.constant(target, c)
            for i, e in enumerate(exps):
                if e:
                    if (i, e) not in powers:
                        powers[(i, e)] = substitutions[i] ** e
                    term = term * powers[(i, e)]
            out = out + term
        return out

    # serialization ----------------------------------------------------------

    def to_json(self) -> list[dict]:
        return [
            {"exponents": list(k), "coeff": format_rational(v)} for k, v in self.terms.items()
        ]

    @classmethod
    def from_json(cls, nvars: int, records: Iterable[Mapping]) -> SparsePoly:
        terms: dict[MultiIndex, Fraction] = {}
        for i, rec in enumerate(records):
            try:
                exps = tuple(int(e) for e in rec["exponents"])
                coeff = as_rational(rec["coeff"])
            except (KeyError, TypeError, ValueError) as exc:
                raise ValueError(f"term {i}: {exc}") from exc
            if len(exps) != nvars:
                raise ValueError(f"term {i}: exponents have length {len(exps)}, expected {nvars}")
            terms[exps] = terms.get(exps, Fraction(0)) + coeff
        return cls(nvars, terms)


def poly_eval(p: SparsePoly, point: Sequence) -> Fraction:
    return p.evaluate(point)


def poly_diff(p: SparsePoly, variable: int) -> SparsePoly:
    return p.diff(variable)


# --------------------------------------------------------------------------
# Matrices
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class RatMatrix:
    """Dense ``rows x cols`` matrix of Fractions, stored row-major as tuples."""

    rows: int
    cols: int
    entries: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise ValueError("matrix dimensions must be positive")
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ValueError(f"entries are not a {self.rows}x{self.cols} array")
        object.__setattr__(
            self, "entries", tuple(tuple(as_rational(v) for v in r) for r in self.entries)
        )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> RatMatrix:
        rows = [list(r) for r in rows]
        if not rows or not rows[0]:
            raise ValueError("matrix must have at least one row and one column")
        width = len(rows[0])
        for i, r in enumerate(rows):
            if len(r) != width:
                raise ValueError(f"row {i} has length {len(r)}, expected {width}")
        return cls(len(rows), width, tuple(tuple(r) for r in rows))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> RatMatrix:
        return cls(rows, cols, tuple((Fraction(0),) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, n: int) -> RatMatrix:
        return cls.from_rows([[int(i == j) for j in range(n)] for i in range(n)])

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self.entries[i][j]

    @property
    def is_zero(self) -> bool:
        return not any(any(r) for r in self.entries)

    def row(self, i: int) -> Vector:
        return self.entries[i]

    def column(self, j: int) -> Vector:
        return tuple(r[j] for r in self.entries)

    def transpose(self) -> RatMatrix:
        return RatMatrix(self.cols, self.rows, tuple(zip(*self.entries)))

    @property
    def T(self) -> RatMatrix:
        return self.transpose()

    def scale(self, c) -> RatMatrix:
        c = as_rational(c)
        return RatMatrix(self.rows, self.cols, tuple(tuple(c * v for v in r) for r in self.entries))

    def __add__(self, other: RatMatrix) -> RatMatrix:
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch in matrix sum")
        return RatMatrix(
            self.rows,
            self.cols,
            tuple(tuple(a + b for a, b in zip(ra, rb)) for ra, rb in zip(self.entries, other.entries)),
        )

    def __neg__(self) -> RatMatrix:
        return self.scale(-1)

    def __matmul__(self, other):
        if isinstance(other, RatMatrix):
            if self.cols != other.rows:
                raise ValueError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
            cols = list(zip(*other.entries))
            return RatMatrix(
                self.rows,
                other.cols,
                tuple(tuple(sum((a * b for a, b in zip(r, c)), Fraction(0)) for c in cols) for r in self.entries),
            )
        vec = [as_rational(v) for v in other]
        if len(vec) != self.cols:
            raise ValueError(f"vector of length {len(vec)} does not match {self.cols} columns")
        return tuple(sum((a * b for a, b in zip(r, vec)), Fraction(0)) for r in self.entries)

    def to_json(self) -> list[list[str]]:
        return [[format_rational(v) for v in r] for r in self.entries]

    @classmethod
    def from_json(cls, data: Sequence[Sequence]) -> RatMatrix:
        return cls.from_rows([[as_rational(v) for v in r] for r in data])


def block_diagonal(blocks: Sequence[RatMatrix]) -> RatMatrix:
    rows = sum(b.rows for b in blocks)
    cols = sum(b.cols for b in blocks)
    out = [[Fraction(0)] * cols for _ in range(rows)]
    r0 = c0 = 0
    for b in blocks:
        for i in range(b.rows):
            for j in range(b.cols):
                out[r0 + i][c0 + j] = b.entries[i][j]
        r0 += b.rows
        c0 += b.cols
    return RatMatrix.from_rows(out)


# --------------------------------------------------------------------------
# Echelon machinery
# --------------------------------------------------------------------------


class EchelonBasis:
    """Reduced row echelon basis of a growing subspace of Q^dim.

    Every stored row has a unit pivot and zeros in the pivot columns of all
    other rows, so reduction against the basis is order independent and the
    final basis is the canonical RREF of the span.
    """

    def __init__(self, dim: int):
        self.dim = dim
        self._rows: dict[int, list[Fraction]] = {}

    def __len__(self) -> int:
        return len(self._rows)

    @property
    def rank(self) -> int:
        return len(self._rows)

    @property
    def pivots(self) -> list[int]:
        return sorted(self._rows)

    @property
    def full(self) -> bool:
        return len(self._rows) == self.dim

    def reduce(self, vec: Sequence) -> list[Fraction]:
        v = [as_rational(a) for a in vec]
        if len(v) != self.dim:
            raise ValueError(f"vector of length {len(v)} in a space of dimension {self.dim}")
        for piv, row in self._rows.items():
            c = v[piv]
            if c:
                for j, b in enumerate(row):
                    if b:
                        v[j] -= c * b
        return v

    def contains(self, vec: Sequence) -> bool:
        return not any(self.reduce(vec))

    def add(self, vec: Sequence) -> bool:
        """Insert ``vec``; return False if it was already in the span."""
        v = self.reduce(vec)
        piv = next((j for j, a in enumerate(v) if a), None)
        if piv is None:
            return False
        inv = 1 / v[piv]
        v = [a * inv for a in v]
        for row in self._rows.values():
            c = row[piv]
            if c:
                for j, b in enumerate(v):
                    if b:
                        row[j] -= c * b
        self._rows[piv] = v
        return True

    def basis(self) -> list[Vector]:
        return [tuple(self._rows[p]) for p in sorted(self._rows)]


def rref(rows: Sequence[Sequence], ncols: int | None = None) -> tuple[list[Vector], list[int]]:
    """Canonical RREF rows (zero rows dropped) and pivot columns."""
    if ncols is None:
        if not rows:
            raise ValueError("ncols is required for an empty row list")
        ncols = len(rows[0])
    eb = EchelonBasis(ncols)
    for r in rows:
        eb.add(r)
        if eb.full:
            break
    return eb.basis(), eb.pivots


def _as_rows(M) -> tuple[list[Sequence], int]:
    if isinstance(M, RatMatrix):
        return list(M.entries), M.cols
    rows = [list(r) for r in M]
    if not rows:
        raise ValueError("empty matrix")
    return rows, len(rows[0])


def rank(M) -> int:
    rows, ncols = _as_rows(M)
    return len(rref(rows, ncols)[0])


def nullspace(M) -> list[Vector]:
    """Canonical basis of ``ker M``: the RREF of the kernel, each row led by 1."""
    rows, ncols = _as_rows(M)
    reduced, pivots = rref(rows, ncols)
    pivot_set = set(pivots)
    free = [j for j in range(ncols) if j not in pivot_set]
    if not free:
        return []
    kernel = EchelonBasis(ncols)
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for r, p in zip(reduced, pivots):
            v[p] = -r[f]
        kernel.add(v)
    return kernel.basis()


def column_space(M) -> list[Vector]:
    """Canonical RREF basis of the column space."""
    if isinstance(M, RatMatrix):
        cols = [M.column(j) for j in range(M.cols)]
        dim = M.rows
    else:
        rows, ncols = _as_rows(M)
        cols = [tuple(r[j] for r in rows) for j in range(ncols)]
        dim = len(rows)
    return rref(cols, dim)[0]


def span_basis(vectors: Iterable[Sequence], dim: int) -> list[Vector]:
    return rref(list(vectors), dim)[0]


def independent_row_indices(rows: Sequence[Sequence[int]], ncols: int) -> list[int]:
    """Indices of a maximal linearly independent subset of ``rows`` (greedy, in order)."""
    eb = EchelonBasis(ncols)
    picked = []
    for i, r in enumerate(rows):
        if eb.add(r):
            picked.append(i)
            if eb.full:
                break
    return picked
