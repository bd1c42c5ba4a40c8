"""Shared hypothesis strategies and the invariant-suite registry."""

from __future__ import annotations

import functools
import random
from fractions import Fraction

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from quasiaffine.algebra import SparsePoly
from quasiaffine.integrands import PolyIntegrand, det

INVARIANT_EXAMPLES = 1000

# test name -> number of completed example runs
EXAMPLE_COUNTS: dict[str, int] = {}


def invariant(fn):
    """Run the ``@given`` test ``fn`` with INVARIANT_EXAMPLES cases and count them."""
    import pytest

    name = f"{fn.__module__}::{fn.__name__}"
    EXAMPLE_COUNTS.setdefault(name, 0)
    wrapped = settings(
        max_examples=INVARIANT_EXAMPLES,
        deadline=None,
        suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large, HealthCheck.filter_too_much],
        database=None,
        derandomize=True,
    )(fn)
    inner = wrapped.hypothesis.inner_test

    @functools.wraps(inner)
    def counted(*args, **kwargs):
        out = inner(*args, **kwargs)
        EXAMPLE_COUNTS[name] += 1
        return out

    wrapped.hypothesis.inner_test = counted
    return pytest.mark.invariant(wrapped)


small_ints = st.integers(-6, 6)
rationals = st.fractions(min_value=-8, max_value=8, max_denominator=6)


def int_vectors(n, lo=-5, hi=5):
    return st.lists(st.integers(lo, hi), min_size=n, max_size=n)


def nonzero_int_vectors(n, lo=-4, hi=4):
    return int_vectors(n, lo, hi).filter(any)


def rat_vectors(n):
    return st.lists(rationals, min_size=n, max_size=n)


@st.composite
def matrices(draw, max_rows=4, max_cols=5, entries=small_ints):
    rows = draw(st.integers(1, max_rows))
    cols = draw(st.integers(1, max_cols))
    # low-rank structure shows up more often when rows repeat
    base = [draw(st.lists(entries, min_size=cols, max_size=cols)) for _ in range(rows)]
    if rows > 1 and draw(st.booleans()):
        i, j = draw(st.integers(0, rows - 1)), draw(st.integers(0, rows - 1))
        c = draw(st.integers(-2, 2))
        base[i] = [a + c * b for a, b in zip(base[i], base[j])] if i != j else base[i]
    return base


@st.composite
def polys(draw, nvars, max_degree=3, max_terms=5, coeffs=rationals):
    n = draw(st.integers(0, max_terms))
    terms: dict = {}
    for _ in range(n):
        exps = draw(st.lists(st.integers(0, max_degree), min_size=nvars, max_size=nvars))
        while sum(exps) > max_degree:
            k = max(range(nvars), key=lambda i: exps[i])
            exps[k] -= 1
        terms[tuple(exps)] = terms.get(tuple(exps), Fraction(0)) + draw(coeffs)
    return SparsePoly(nvars, terms)


@st.composite
def integrands(draw, d, max_degree=3, max_terms=5):
    return PolyIntegrand(d, draw(polys(d, max_degree, max_terms)), name="random")


@st.composite
def mixed_2x2_integrands(draw, max_degree=3):
    """Affine part plus a multiple of det, sometimes perturbed: both verdicts occur often."""
    base = draw(polys(4, 1, 4))
    c = draw(rationals)
    poly = base + det(2).poly * c
    if draw(st.booleans()):
        poly = poly + draw(polys(4, max_degree, 2))
    return PolyIntegrand(4, poly, name="mixed")


def seeded_mixed_2x2(rng: random.Random, max_degree: int) -> PolyIntegrand:
    """Deterministic counterpart of :func:`mixed_2x2_integrands` for seeded suites."""
    def rat():
        return Fraction(rng.randint(-5, 5), rng.randint(1, 3))

    def rand_poly(deg, n):
        terms = {}
        for _ in range(n):
            e = [0] * 4
            for _ in range(rng.randint(0, deg)):
                e[rng.randrange(4)] += 1
            terms[tuple(e)] = terms.get(tuple(e), Fraction(0)) + rat()
        return SparsePoly(4, terms)

    poly = rand_poly(1, 4) + det(2).poly * rat()
    if rng.random() < 0.5:
        poly = poly + rand_poly(max_degree, rng.randint(1, 3))
    return PolyIntegrand(4, poly, name="seeded")


def field_family(N: int, m: int, d: int, count: int, seed: int, enriched: bool = False):
    """Seeded ``(shift, field)`` test cases; the enriched family adds one- and two-mode fields."""
    from quasiaffine.torus import random_field

    rng = random.Random(seed)
    out = []
    for i in range(count):
        shift = tuple(Fraction(rng.randint(-3, 3), rng.randint(1, 2)) for _ in range(d))
        n_modes = (1 + i % 4) if enriched else 3
        out.append((shift, random_field(N, m, n_modes, seed=f"{seed}:{i}", max_freq=2 if enriched else 1)))
    return out


def torus_invariant(f, B, family) -> tuple[bool, object]:
    """``(all means equal f(shift), first violating case or None)``."""
    from quasiaffine.torus import torus_defect

    for shift, fld in family:
        if torus_defect(f, shift, B, fld):
            return False, (shift, fld)
    return True, None
