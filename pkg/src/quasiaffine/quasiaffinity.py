"""Deciders for quasiaffinity of polynomial integrands.

All three checks reduce to the same primitive: a symmetric multilinear form
``D^r f(x)[v_1, ..., v_r]`` whose slot vectors are polynomial in some
parameters, and which must vanish identically. The form is evaluated on a
tensor-product integer grid with ``deg + 1`` points per variable, which
certifies the zero polynomial by interpolation; directions that enter
multilinearly are restricted to basis vectors instead of being gridded.

The x-grid is handled once per order: the component polynomials of
``D^r f`` are evaluated on it and only a spanning subset of the rows is kept.
That is exact, since the form vanishes at every grid x iff it vanishes on
rows spanning the row space.
"""

from __future__ import annotations

import logging
import random
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from math import prod
from typing import Iterator, Sequence

from . import kernels
from .algebra import (
    EchelonBasis,
    RatMatrix,
    SparsePoly,
    as_rational,
    common_denominator,
    format_rational,
    nullspace,
    primitive_integer_vector,
)
from .integrands import DerivativeTensor, PolyIntegrand, apply_tensor, derivative_tensor
from .operators import DEFAULT_SEED, HomOperator, SampleGrid
from .reports import CheckReport, DimensionError, Verdict, Witness

logger = logging.getLogger(__name__)

DEFAULT_MAX_EVALS = 10**7
DEFAULT_TRIALS = 20
RANDOM_RANGE = 10**6
CHUNK = 4096


class DegreeWarning(UserWarning):
    """A checked integrand has degree above its dimension (so it cannot be quasiaffine)."""


@dataclass(frozen=True)
class CheckConfig:
    mode: str = "exact"
    max_evals: int = DEFAULT_MAX_EVALS
    trials: int = DEFAULT_TRIALS
    seed: int = DEFAULT_SEED
    workers: int = 1
    minimize: bool = True

    def __post_init__(self):
        if self.mode not in ("exact", "randomized"):
            raise ValueError("mode must be 'exact' or 'randomized'")
        if self.max_evals < 1 or self.trials < 1:
            raise ValueError("max_evals and trials must be positive")


# --------------------------------------------------------------------------
# shared machinery
# --------------------------------------------------------------------------


def _bounded_points(bounds: Sequence[int]) -> Iterator[tuple[int, ...]]:
    """All points of ``prod range(b + 1)``, by increasing coordinate sum."""
    n = len(bounds)

    def rec(i, remaining):
        if i == n - 1:
            if remaining <= bounds[i]:
                yield (remaining,)
            return
        for v in range(min(bounds[i], remaining) + 1):
            for rest in rec(i + 1, remaining - v):
                yield (v,) + rest

    if n == 0:
        yield ()
        return
    for s in range(sum(bounds) + 1):
        yield from rec(0, s)


@dataclass
class _XRows:
    """Spanning rows of the component-evaluation matrix of ``D^r f`` on its x-grid."""

    rows: list[list[int]]
    points: list[tuple[int, ...]]
    cardinality: int
    degrees: list[int]
    int_comps: list[list[tuple[tuple[int, ...], int]]]


def _eval_int_poly(terms, point) -> int:
    total = 0
    for exps, c in terms:
        m = c
        for p, e in zip(point, exps):
            if e:
                m *= p**e
                if not m:
                    break
        total += m
    return total


def _x_rows(T: DerivativeTensor) -> _XRows:
    keys, _, _ = T.expansion
    comps = [T.components[k] for k in keys]
    den = common_denominator(c for p in comps for _, c in p)
    int_comps = [[(e, int(c * den)) for e, c in p] for p in comps]
    degrees = [max(p.degree_in(i) for p in comps) for i in range(T.d)]
    cardinality = prod(g + 1 for g in degrees)
    monos = sorted({e for p in comps for e, _ in p})
    where = {e: i for i, e in enumerate(monos)}
    coeff_basis = EchelonBasis(len(monos))
    for p in comps:
        v = [Fraction(0)] * len(monos)
        for e, c in p:
            v[where[e]] = c
        coeff_basis.add(v)
    target = coeff_basis.rank
    eb = EchelonBasis(len(comps))
    rows, points = [], []
    for pt in _bounded_points(degrees):
        row = [_eval_int_poly(ic, pt) for ic in int_comps]
        if eb.add(row):
            rows.append(row)
            points.append(pt)
            if eb.rank == target:
                break
    return _XRows(rows, points, cardinality, degrees, int_comps)


def _columns(op: HomOperator, xi: Sequence[int]) -> list[list[int]]:
    """Integer columns of ``L * op[xi]`` (one per input basis vector)."""
    sym = op.integer_symbol(xi)
    return [list(col) for col in zip(*sym)]


def _unit(n: int, i: int) -> tuple[Fraction, ...]:
    return tuple(Fraction(int(j == i)) for j in range(n))


def _scan(xr: _XRows, T: DerivativeTensor, items: Iterator, width: int, workers: int):
    """Feed ``(meta, slots)`` items to the kernel in chunks; return ``(meta, combo, row)`` of the first hit."""
    _, ordered, owner = T.expansion
    batch_meta, batch_slots = [], []

    def flush():
        if not batch_slots:
            return None
        hit = kernels.first_nonzero(xr.rows, owner, ordered, batch_slots, workers=workers)
        if hit is None:
            return None
        p, combo, row, _ = hit
        return batch_meta[p], combo, row

    for meta, slots in items:
        batch_meta.append(meta)
        batch_slots.append(slots)
        if len(batch_slots) >= CHUNK:
            found = flush()
            if found:
                return found
            batch_meta, batch_slots = [], []
    return flush()


def _decode_combo(combo: int, width: int, r: int) -> list[int]:
    out = []
    for _ in range(r):
        out.append(combo % width)
        combo //= width
    return out[::-1]


def _degree_note(f: PolyIntegrand, cert: list[str]) -> None:
    if f.degree > f.d:
        msg = f"degree {f.degree} exceeds d = {f.d}; such an integrand cannot be quasiaffine"
        warnings.warn(msg, DegreeWarning, stacklevel=3)
        cert.append(msg)


def max_order(B: HomOperator) -> int:
    """Highest order ``r`` that has to be checked: ``min(k_B, N) + 1``."""
    return min(B.order, B.base_dim) + 1


# --------------------------------------------------------------------------
# the potential-side criterion
# --------------------------------------------------------------------------


def _potential_value(f: PolyIntegrand, B: HomOperator, r: int, x, xis, lambdas, ws) -> Fraction:
    """Exact form value for a dependent tuple ``(xi_1..xi_{r-1}, sum lambda_i xi_i)``."""
    T = derivative_tensor(f, r)
    eta = [sum((l * xi[c] for l, xi in zip(lambdas, xis)), Fraction(0)) for c in range(B.base_dim)]
    freqs = list(xis) + [eta]
    vecs = [B.symbol(xi) @ w for xi, w in zip(freqs, ws)]
    return apply_tensor(T, x, vecs)


def _minimize_potential(f, B, r, x, xis, lambdas, ws):
    x, lambdas = list(x), list(lambdas)
    xis = [list(xi) for xi in xis]

    def value():
        return _potential_value(f, B, r, x, xis, lambdas, ws)

    for vec in [lambdas] + xis + [x]:
        for i in range(len(vec)):
            if vec[i]:
                old, vec[i] = vec[i], Fraction(0)
                if not value():
                    vec[i] = old
    return x, xis, lambdas, value()


def _potential_witness(f, B, r, x, xis, lambdas, ws, minimize) -> Witness:
    x = [Fraction(v) for v in x]
    xis = [[Fraction(v) for v in xi] for xi in xis]
    lambdas = [Fraction(v) for v in lambdas]
    if minimize:
        x, xis, lambdas, value = _minimize_potential(f, B, r, x, xis, lambdas, ws)
    else:
        value = _potential_value(f, B, r, x, xis, lambdas, ws)
    if not value:
        raise AssertionError("kernel reported a nonzero value that exact re-evaluation does not reproduce")
    eta = tuple(sum((l * xi[c] for l, xi in zip(lambdas, xis)), Fraction(0)) for c in range(B.base_dim))
    return Witness(
        kind="potential",
        r=r,
        x=tuple(x),
        frequencies=tuple(tuple(xi) for xi in xis) + (eta,),
        directions=tuple(tuple(w) for w in ws),
        value=value,
        lambdas=tuple(lambdas),
    )


def _check_dims(f: PolyIntegrand, d: int, what: str) -> None:
    if f.d != d:
        raise DimensionError(f"integrand acts on R^{f.d} but the {what} lives in R^{d}")


def quasiaffine_check(f: PolyIntegrand, B: HomOperator, config: CheckConfig | None = None) -> CheckReport:
    """Decide the bounded-order potential criterion for ``f`` against the potential ``B``.

    For each ``2 <= r <= min(k_B, N) + 1`` the polynomial
    ``D^r f(x)[B[xi_1]w_1, ..., B[xi_{r-1}]w_{r-1}, B[sum lambda_i xi_i]w_r]``
    must vanish identically in ``(x, xi, lambda, w)``. In exact mode ``w``
    runs over standard basis vectors and ``(x, xi, lambda)`` over an
    interpolation grid; in randomized mode every variable is drawn from
    ``[-10^6, 10^6]`` ``config.trials`` times per order.
    """
    config = config or CheckConfig()
    _check_dims(f, B.out_dim, "potential's target")
    cert: list[str] = []
    _degree_note(f, cert)
    check = "check-quasiaffine"
    top = max_order(B)
    orders = list(range(2, top + 1))
    if f.degree <= 1:
        cert.append("f is affine; every derivative of order >= 2 vanishes")
        return CheckReport(Verdict.PASS, orders, certificate=cert, mode=config.mode, check=check)
    cert.append(f"orders 2..{top} from the bound min(k_B, N) + 1 with k_B = {B.order}, N = {B.base_dim}")
    inconclusive = False
    for r in orders:
        T = derivative_tensor(f, r)
        if T.is_zero:
            cert.append(f"r = {r}: D^{r} f is identically zero (degree {f.degree})")
            continue
        if config.mode == "randomized":
            w = _random_potential(f, B, T, r, config)
            if w is not None:
                cert.append(f"r = {r}: nonzero at a random point; dependent frequency tuple refutes quasiaffinity")
                return CheckReport(Verdict.FAIL, orders, witness=w, certificate=cert, mode=config.mode, check=check)
            cert.append(f"r = {r} identity: {config.trials} random evaluations in [-10^6, 10^6], all zero")
            continue
        outcome = _exact_potential(f, B, T, r, config, cert)
        if isinstance(outcome, Witness):
            return CheckReport(Verdict.FAIL, orders, witness=outcome, certificate=cert, mode=config.mode, check=check)
        inconclusive |= outcome is None
    if inconclusive:
        verdict = Verdict.INCONCLUSIVE
    elif config.mode == "randomized":
        verdict = Verdict.PROBABLE_PASS
    else:
        verdict = Verdict.PASS
    return CheckReport(verdict, orders, certificate=cert, mode=config.mode, check=check)


def _exact_potential(f, B, T, r, config, cert):
    """True if the order-``r`` identity holds, a Witness if not, None if over budget."""
    N, m = B.base_dim, B.in_dim
    n_free = r - 1
    xi_axes = [2 * e for e in B.max_exponents]
    lam_axes = [B.order] * n_free
    xi_card = prod(a + 1 for a in xi_axes)
    x_degrees = [max(p.degree_in(i) for p in T.components.values()) for i in range(f.d)]
    x_card = prod(g + 1 for g in x_degrees)
    total = x_card * xi_card**n_free * (B.order + 1) ** n_free * m**r
    if total > config.max_evals:
        cert.append(
            f"r = {r}: interpolation grid needs {total} evaluations > ceiling {config.max_evals}; "
            "not attempted (use randomized mode)"
        )
        return None
    xr = _x_rows(T)
    xi_points = list(product(*(range(a + 1) for a in xi_axes)))
    lam_points = list(product(*(range(a + 1) for a in lam_axes)))
    col_cache: dict[tuple[int, ...], list[list[int]]] = {}

    def cols(xi):
        got = col_cache.get(xi)
        if got is None:
            got = col_cache[xi] = _columns(B, xi)
        return got

    def items():
        for xis in product(xi_points, repeat=n_free):
            if any(not any(xi) for xi in xis):
                continue  # B[0] = 0 kills the slot
            head = [cols(xi) for xi in xis]
            for lam in lam_points:
                eta = tuple(sum(l * xi[c] for l, xi in zip(lam, xis)) for c in range(N))
                if not any(eta):
                    continue
                yield (xis, lam), head + [cols(eta)]

    if kernels.BACKEND == "cython" and _slot_bound(B, xi_axes, n_free) < 2**62:
        found = _scan_batches(xr, T, _potential_batches(B, xi_points, lam_points, n_free), config.workers)
    else:
        found = _scan(xr, T, items(), m, config.workers)
    grid_desc = (
        f"x-grid {'x'.join(str(g + 1) for g in xr.degrees)} ({xr.cardinality} points, "
        f"{len(xr.rows)} spanning rows), xi-grid {'x'.join(str(a + 1) for a in xi_axes)} per frequency, "
        f"lambda-grid {B.order + 1}^{n_free}, w over {m} basis vectors per slot"
    )
    if found is None:
        cert.append(f"r = {r} identity with dependent frequencies: zero on {grid_desc}")
        return True
    meta, combo, row = found
    if isinstance(meta[1], int):
        head, j, l = meta
        xis = tuple(xi_points[h] for h in head) + (xi_points[j],)
        lam = lam_points[l]
    else:
        xis, lam = meta
    ws = [_unit(m, i) for i in _decode_combo(combo, m, r)]
    cert.append(f"r = {r} identity with dependent frequencies: nonzero on {grid_desc}")
    return _potential_witness(f, B, r, xr.points[row], xis, lam, ws, config.minimize)


def _slot_bound(B: HomOperator, xi_axes, n_free: int) -> int:
    """Upper bound on any integer slot entry built from the potential grid."""
    top = max(xi_axes, default=0) * B.order * n_free
    weight = sum(abs(v) for _, mat in B.integer_terms[1] for row in mat for v in row)
    return weight * max(top, 1) ** B.order


def _potential_batches(B: HomOperator, xi_points, lam_points, n_free: int):
    """Vectorized twin of the item generator in :func:`_exact_potential`.

    Yields ``(meta, V)`` with ``V[p, j, w]`` the slot vectors; the leading
    ``n_free - 1`` frequencies are looped over, the last frequency and the
    lambdas are laid out row-major, so item order matches the scalar path.
    """
    import numpy as np

    terms = [(alpha, np.array(mat, dtype=np.int64).T) for alpha, mat in B.integer_terms[1]]

    def columns(P):
        out = np.zeros(P.shape[:-1] + (B.in_dim, B.out_dim), dtype=np.int64)
        for alpha, matT in terms:
            c = np.ones(P.shape[:-1], dtype=np.int64)
            for k, a in enumerate(alpha):
                if a:
                    c = c * P[..., k] ** a
            out += c[..., None, None] * matT
        return out

    X = np.array(xi_points, dtype=np.int64)
    Lam = np.array(lam_points, dtype=np.int64)
    cols_all = columns(X)
    nonzero = X.any(axis=1)
    for head in product(range(len(xi_points)), repeat=n_free - 1):
        if not all(nonzero[h] for h in head):
            continue
        partial = np.zeros((len(lam_points), B.base_dim), dtype=np.int64)
        for i, h in enumerate(head):
            partial += Lam[:, i, None] * X[h]
        eta = partial[None, :, :] + Lam[None, :, -1, None] * X[:, None, :]
        mask = nonzero[:, None] & eta.any(axis=2)
        j_idx, l_idx = np.nonzero(mask)
        if not len(j_idx):
            continue
        P = len(j_idx)
        parts = [np.broadcast_to(cols_all[h], (P,) + cols_all.shape[1:]) for h in head]
        V = np.stack(parts + [cols_all[j_idx], columns(eta[j_idx, l_idx])], axis=1)
        yield (head, j_idx, l_idx), V


def _scan_batches(xr: _XRows, T: DerivativeTensor, batches, workers: int):
    """Array counterpart of :func:`_scan` for :func:`_potential_batches`."""
    _, ordered, owner = T.expansion
    for (head, j_idx, l_idx), V in batches:
        hit = kernels.first_nonzero(xr.rows, owner, ordered, V, workers=workers)
        if hit is not None:
            p, combo, row, _ = hit
            meta = (head, int(j_idx[p]), int(l_idx[p]))
            return meta, combo, row
    return None


def _random_int_vec(rng: random.Random, n: int) -> list[int]:
    return [rng.randint(-RANDOM_RANGE, RANDOM_RANGE) for _ in range(n)]


def _random_potential(f, B, T, r, config) -> Witness | None:
    rng = random.Random(f"{config.seed}:potential:{r}")
    keys, ordered, owner = T.expansion
    comps = [T.components[k] for k in keys]
    den = common_denominator(c for p in comps for _, c in p)
    int_comps = [[(e, int(c * den)) for e, c in p] for p in comps]
    N, m = B.base_dim, B.in_dim
    for _ in range(config.trials):
        x = _random_int_vec(rng, f.d)
        xis = [tuple(_random_int_vec(rng, N)) for _ in range(r - 1)]
        lam = _random_int_vec(rng, r - 1)
        ws = [_random_int_vec(rng, m) for _ in range(r)]
        eta = tuple(sum(l * xi[c] for l, xi in zip(lam, xis)) for c in range(N))
        freqs = xis + [eta]
        slots = [[[sum(row[j] * w[j] for j in range(m)) for row in B.integer_symbol(xi)]] for xi, w in zip(freqs, ws)]
        rows = [[_eval_int_poly(ic, x) for ic in int_comps]]
        if kernels.first_nonzero(rows, owner, ordered, [slots], workers=1) is not None:
            wsq = [tuple(Fraction(v) for v in w) for w in ws]
            return _potential_witness(f, B, r, x, xis, lam, wsq, config.minimize)
    return None


# --------------------------------------------------------------------------
# cone affinity
# --------------------------------------------------------------------------


def _cone_value(f, B, x, xi, w) -> Fraction:
    v = B.symbol(xi) @ w
    return apply_tensor(derivative_tensor(f, 2), x, [v, v])


def _cone_witness(f, B, x, xi, w, minimize) -> Witness:
    x = [Fraction(v) for v in x]
    xi = [Fraction(v) for v in xi]
    w = [Fraction(v) for v in w]
    if minimize:
        for vec in (xi, w, x):
            for i in range(len(vec)):
                if vec[i]:
                    old, vec[i] = vec[i], Fraction(0)
                    if not _cone_value(f, B, x, xi, w):
                        vec[i] = old
    value = _cone_value(f, B, x, xi, w)
    if not value:
        raise AssertionError("kernel reported a nonzero value that exact re-evaluation does not reproduce")
    return Witness(kind="cone", r=2, x=tuple(x), frequencies=(tuple(xi),), directions=(tuple(w),), value=value)


def lambda_affine_check(f: PolyIntegrand, B: HomOperator, config: CheckConfig | None = None) -> CheckReport:
    """Decide affinity of ``f`` along the cone ``{B[xi] w}``.

    The identity ``D^2 f(x)[B[xi]w, B[xi]w] == 0`` is checked on an
    interpolation grid in ``(x, xi, w)`` (``w`` is quadratic, so it is gridded
    with three points per coordinate rather than reduced to a basis).
    """
    config = config or CheckConfig()
    _check_dims(f, B.out_dim, "potential's target")
    cert: list[str] = []
    _degree_note(f, cert)
    check = "check-lambda-affine"
    if f.degree <= 1:
        cert.append("f is affine; D^2 f vanishes")
        return CheckReport(Verdict.PASS, [2], certificate=cert, mode=config.mode, check=check)
    T = derivative_tensor(f, 2)
    m = B.in_dim
    if config.mode == "randomized":
        rng = random.Random(f"{config.seed}:cone")
        for _ in range(config.trials):
            x = _random_int_vec(rng, f.d)
            xi = _random_int_vec(rng, B.base_dim)
            w = _random_int_vec(rng, m)
            if _cone_value(f, B, x, xi, w):
                cert.append("second derivative along a random cone direction is nonzero")
                return CheckReport(
                    Verdict.FAIL, [2], witness=_cone_witness(f, B, x, xi, w, config.minimize),
                    certificate=cert, mode=config.mode, check=check,
                )
        cert.append(f"cone identity: {config.trials} random evaluations in [-10^6, 10^6], all zero")
        return CheckReport(Verdict.PROBABLE_PASS, [2], certificate=cert, mode=config.mode, check=check)

    xi_axes = [2 * e for e in B.max_exponents]
    x_degrees = [max(p.degree_in(i) for p in T.components.values()) for i in range(f.d)]
    total = prod(g + 1 for g in x_degrees) * prod(a + 1 for a in xi_axes) * 3**m
    if total > config.max_evals:
        cert.append(
            f"cone identity needs {total} evaluations > ceiling {config.max_evals}; not attempted (use randomized mode)"
        )
        return CheckReport(Verdict.INCONCLUSIVE, [2], certificate=cert, mode=config.mode, check=check)
    xr = _x_rows(T)

    def items():
        for xi in product(*(range(a + 1) for a in xi_axes)):
            if not any(xi):
                continue
            sym = B.integer_symbol(xi)
            for w in product(range(3), repeat=m):
                if not any(w):
                    continue
                v = [sum(row[j] * w[j] for j in range(m)) for row in sym]
                if any(v):
                    yield (xi, w), [[v], [v]]

    found = _scan(xr, T, items(), 1, config.workers)
    grid_desc = (
        f"x-grid {'x'.join(str(g + 1) for g in xr.degrees)} ({xr.cardinality} points, {len(xr.rows)} spanning rows), "
        f"xi-grid {'x'.join(str(a + 1) for a in xi_axes)}, w-grid 3^{m}"
    )
    if found is None:
        cert.append(f"cone identity D^2 f(x)[B[xi]w, B[xi]w] = 0: zero on {grid_desc}")
        return CheckReport(Verdict.PASS, [2], certificate=cert, mode=config.mode, check=check)
    (xi, w), _, row = found
    cert.append(f"cone identity D^2 f(x)[B[xi]w, B[xi]w] = 0: nonzero on {grid_desc}")
    witness = _cone_witness(f, B, xr.points[row], xi, w, config.minimize)
    return CheckReport(Verdict.FAIL, [2], witness=witness, certificate=cert, mode=config.mode, check=check)


# --------------------------------------------------------------------------
# necessary conditions from the annihilator side
# --------------------------------------------------------------------------


def _dependent_tuples(points: Sequence[tuple[int, ...]], r: int) -> Iterator[tuple[tuple[int, ...], ...]]:
    """``(xi, xi)`` for r = 2; otherwise r-1 distinct points and a signed sum of them."""
    if r == 2:
        for xi in points:
            yield (xi, xi)
        return
    N = len(points[0])
    for combo in combinations(points, r - 1):
        for signs in product((1, -1), repeat=r - 2):
            coeffs = (1,) + signs
            eta = tuple(sum(s * xi[c] for s, xi in zip(coeffs, combo)) for c in range(N))
            if any(eta):
                yield combo + (eta,)


def annihilator_value(f: PolyIntegrand, x, vectors) -> Fraction:
    return apply_tensor(derivative_tensor(f, len(vectors)), x, vectors)


def quasiaffine_necessary_from_a(
    f: PolyIntegrand,
    A: HomOperator,
    grid: SampleGrid,
    r_max: int = 3,
    config: CheckConfig | None = None,
) -> CheckReport:
    """Sampled necessary condition using kernels of the annihilator ``A``.

    For every sampled dependent tuple and every choice of kernel basis
    vectors ``v_i in ker A[xi_i]`` the form ``D^r f(x)[v_1..v_r]`` must vanish
    identically in ``x``. A nonzero value refutes quasiaffinity outright;
    passing only says the sampled conditions hold.
    """
    config = config or CheckConfig()
    _check_dims(f, A.in_dim, "annihilator's domain")
    if grid.base_dim != A.base_dim:
        raise DimensionError("grid and operator have different base dimensions")
    cert: list[str] = []
    check = "check-from-annihilator"
    orders = list(range(2, max(r_max, 1) + 1))
    if f.degree <= 1:
        cert.append("f is affine; all conditions hold vacuously")
        return CheckReport(Verdict.NECESSARY_CONDITIONS_HOLD, orders, certificate=cert, mode="exact", check=check)
    kernel_cache: dict[tuple[int, ...], list[list[int]]] = {}

    def kernel(xi):
        got = kernel_cache.get(xi)
        if got is None:
            got = kernel_cache[xi] = [primitive_integer_vector(v) for v in nullspace(A.integer_symbol(xi))]
        return got

    points = list(grid.points)
    inconclusive = False
    for r in orders:
        T = derivative_tensor(f, r)
        if T.is_zero:
            cert.append(f"r = {r}: D^{r} f is identically zero")
            continue
        tuples = list(_dependent_tuples(points, r))
        usable = [t for t in tuples if all(kernel(xi) for xi in t)]
        x_degrees = [max(p.degree_in(i) for p in T.components.values()) for i in range(f.d)]
        x_card = prod(g + 1 for g in x_degrees)
        total = x_card * sum(prod(len(kernel(xi)) for xi in t) for t in usable)
        if total > config.max_evals:
            cert.append(f"r = {r}: {total} evaluations > ceiling {config.max_evals}; not attempted")
            inconclusive = True
            continue
        xr = _x_rows(T)
        width = max((len(kernel(xi)) for t in usable for xi in t), default=0)
        zero = [0] * f.d

        def items():
            for t in usable:
                yield t, [kernel(xi) + [zero] * (width - len(kernel(xi))) for xi in t]

        found = _scan(xr, T, items(), width, config.workers)
        desc = f"{len(usable)} dependent tuples, x-grid {xr.cardinality} points ({len(xr.rows)} spanning rows)"
        if found is None:
            cert.append(f"r = {r}: zero for all kernel-basis choices on {desc}")
            continue
        t, combo, row = found
        picks = _decode_combo(combo, width, r)
        vecs = [tuple(Fraction(a) for a in kernel(xi)[i]) for xi, i in zip(t, picks)]
        x = tuple(Fraction(a) for a in xr.points[row])
        value = annihilator_value(f, x, vecs)
        if not value:
            raise AssertionError("kernel reported a nonzero value that exact re-evaluation does not reproduce")
        witness = Witness(
            kind="annihilator",
            r=r,
            x=x,
            frequencies=tuple(tuple(Fraction(a) for a in xi) for xi in t),
            directions=tuple(vecs),
            value=value,
        )
        cert.append(f"r = {r}: nonzero on {desc}; definitive refutation")
        return CheckReport(Verdict.FAIL, orders, witness=witness, certificate=cert, mode="exact", check=check)
    cert.append(f"grid-relative: {len(points)} sampled frequencies")
    verdict = Verdict.INCONCLUSIVE if inconclusive else Verdict.NECESSARY_CONDITIONS_HOLD
    return CheckReport(verdict, orders, certificate=cert, mode="exact", check=check)


# --------------------------------------------------------------------------
# quadratic forms vanishing on the cone
# --------------------------------------------------------------------------


@dataclass
class QuadBasis:
    d: int
    forms: list[RatMatrix]
    rejected: list[RatMatrix] = field(default_factory=list)
    certificate: list[str] = field(default_factory=list)

    @property
    def definitive(self) -> bool:
        """With nothing rejected the sampled solution space equals the exact one."""
        return not self.rejected

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "forms": [q.to_json() for q in self.forms],
            "rejected": [q.to_json() for q in self.rejected],
            "certificate": list(self.certificate),
        }


def quadratic_integrand(Q: RatMatrix, name: str = "") -> PolyIntegrand:
    """``x -> x^T Q x`` for a symmetric ``Q``."""
    d = Q.rows
    terms = {}
    for a in range(d):
        for b in range(a, d):
            c = Q[a, b] if a == b else Q[a, b] + Q[b, a]
            if c:
                e = [0] * d
                e[a] += 1
                e[b] += 1
                terms[tuple(e)] = c
    return PolyIntegrand(d, SparsePoly(d, terms), name=name)


def quadratic_vanishing_basis(B: HomOperator, grid: SampleGrid, confirm: bool = True) -> QuadBasis:
    """Symmetric ``Q`` with ``B[xi]^T Q B[xi] = 0`` at every grid frequency.

    Each solution is a quadratic form vanishing on the sampled part of the
    cone (with full polarization in ``w``). Basis forms are then confirmed
    exactly by :func:`lambda_affine_check`; unconfirmed ones are set aside.
    """
    if grid.base_dim != B.base_dim:
        raise DimensionError("grid and operator have different base dimensions")
    d, m = B.out_dim, B.in_dim
    pairs = [(a, b) for a in range(d) for b in range(a, d)]
    eb = EchelonBasis(len(pairs))
    n_eq = 0
    for xi in grid:
        S = B.integer_symbol(xi)
        for i in range(m):
            for j in range(i, m):
                row = [
                    S[a][i] * S[b][j] + (S[b][i] * S[a][j] if a != b else 0)
                    for a, b in pairs
                ]
                n_eq += 1
                eb.add(row)
        if eb.full:
            break
    cert = [f"{n_eq} polarized equations from {len(grid)} grid frequencies, rank {eb.rank} of {len(pairs)} unknowns"]
    basis = nullspace(eb.basis()) if eb.rank else [
        tuple(Fraction(int(i == j)) for j in range(len(pairs))) for i in range(len(pairs))
    ]
    forms, rejected = [], []
    for q in basis:
        rows = [[Fraction(0)] * d for _ in range(d)]
        for (a, b), v in zip(pairs, q):
            rows[a][b] = rows[b][a] = v
        Q = RatMatrix.from_rows(rows)
        if confirm and not lambda_affine_check(quadratic_integrand(Q), B).passed:
            rejected.append(Q)
        else:
            forms.append(Q)
    if confirm:
        cert.append(f"{len(forms)} forms confirmed by the exact cone identity, {len(rejected)} rejected")
    return QuadBasis(d, forms, rejected, cert)


# convenience re-export for callers that only need the value of a witness
def witness_value(f: PolyIntegrand, operator: HomOperator | None, witness: Witness) -> Fraction:
    """Recompute a witness value exactly from its data."""
    if witness.kind == "potential":
        vecs = [operator.symbol(xi) @ w for xi, w in zip(witness.frequencies, witness.directions)]
    elif witness.kind == "cone":
        v = operator.symbol(witness.frequencies[0]) @ witness.directions[0]
        vecs = [v, v]
    elif witness.kind == "annihilator":
        if operator is not None:
            for xi, v in zip(witness.frequencies, witness.directions):
                if any(operator.symbol(xi) @ v):
                    raise ValueError(f"direction {[format_rational(a) for a in v]} is not in ker A[xi]")
        vecs = list(witness.directions)
    else:
        raise ValueError(f"unknown witness kind {witness.kind!r}")
    if len(vecs) != witness.r:
        raise ValueError("witness slot count does not match its order")
    return apply_tensor(derivative_tensor(f, witness.r), [as_rational(a) for a in witness.x], vecs)
