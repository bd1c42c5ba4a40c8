"""Exact trigonometric polynomials on the torus and the averaging oracle.

A test field is a finite sum of ``w cos(2 pi lambda . y)`` and
``w sin(2 pi lambda . y)`` modes. Internally everything is a sum of complex
exponentials ``c_lambda e^{2 pi i lambda . y}`` with Gaussian-rational
coefficients, so products are exact convolutions of frequency maps and the
torus mean is just the zero-frequency coefficient.

Applying an operator uses the symbol-normalized convention: the coefficient
at frequency ``mu`` is mapped to ``(-i)^(k mod 2) B[mu] c_mu``. For even
order this keeps cos modes as cos modes with amplitude ``B[lambda] w``; for
odd order cos becomes sin and sin becomes ``-cos``. Literal differentiation
differs from this only by the positive constant ``(2 pi)^k`` and a global sign.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Mapping, Sequence

import numpy as np

from . import kernels
from .algebra import as_rational, format_rational
from .integrands import PolyIntegrand, bco_l
from .operators import DEFAULT_SEED, HomOperator, hessian
from .reports import DimensionError

SUPPORT_LIMIT = 10**6

Freq = tuple[int, ...]
Gauss = tuple[Fraction, Fraction]


class TorusError(ValueError):
    """Malformed field data or an expansion exceeding the support guard."""


@dataclass(frozen=True)
class TrigMode:
    lam: Freq
    phase: str
    amplitude: tuple[Fraction, ...]

    def __post_init__(self):
        if self.phase not in ("cos", "sin"):
            raise TorusError(f"phase must be 'cos' or 'sin', got {self.phase!r}")
        if not any(self.lam):
            raise TorusError("mode frequency must be nonzero (fields are zero-mean)")

    def to_json(self) -> dict:
        return {
            "lambda": list(self.lam),
            "phase": self.phase,
            "amplitude": [format_rational(a) for a in self.amplitude],
        }


@dataclass(frozen=True)
class TrigField:
    """Zero-mean field on ``T_N`` with values in ``R^m``."""

    N: int
    m: int
    modes: tuple[TrigMode, ...] = ()

    def __post_init__(self):
        for mode in self.modes:
            if len(mode.lam) != self.N:
                raise DimensionError(f"mode frequency {mode.lam} does not have length N = {self.N}")
            if len(mode.amplitude) != self.m:
                raise DimensionError(f"mode amplitude has length {len(mode.amplitude)}, expected {self.m}")

    @classmethod
    def build(cls, N: int, m: int, modes: Sequence[tuple[Sequence[int], str, Sequence]]) -> TrigField:
        return cls(N, m, tuple(
            TrigMode(tuple(int(c) for c in lam), phase, tuple(as_rational(a) for a in amp))
            for lam, phase, amp in modes
        ))

    def translated(self, shift: Sequence) -> TrigField:
        """Field ``y -> phi(y + t)`` for a quarter-period shift ``t`` in ``(Z/4)^N``.

        Only shifts with ``4 t`` integral keep the modes in cos/sin form with
        rational amplitudes, which is all the invariance tests need.
        """
        quarters = [as_rational(t) * 4 for t in shift]
        if any(q.denominator != 1 for q in quarters):
            raise TorusError("translation must be a multiple of 1/4 in every coordinate")
        out = []
        for mode in self.modes:
            turn = sum(int(q) * l for q, l in zip(quarters, mode.lam)) % 4
            # cos(a + turn*pi/2) and sin(a + turn*pi/2) in terms of cos a, sin a
            phase, sign = {
                ("cos", 0): ("cos", 1), ("cos", 1): ("sin", -1), ("cos", 2): ("cos", -1), ("cos", 3): ("sin", 1),
                ("sin", 0): ("sin", 1), ("sin", 1): ("cos", 1), ("sin", 2): ("sin", -1), ("sin", 3): ("cos", -1),
            }[(mode.phase, turn)]
            out.append(TrigMode(mode.lam, phase, tuple(sign * a for a in mode.amplitude)))
        return TrigField(self.N, self.m, tuple(out))

    def to_json(self) -> dict:
        return {"N": self.N, "m": self.m, "modes": [mode.to_json() for mode in self.modes]}

    @classmethod
    def from_json(cls, data: Mapping, N: int | None = None, m: int | None = None) -> TrigField:
        if not isinstance(data, Mapping) or not isinstance(data.get("modes"), list):
            raise TorusError("field JSON needs a 'modes' list")
        modes = []
        for i, rec in enumerate(data["modes"]):
            try:
                modes.append((rec["lambda"], rec.get("phase", "cos"), rec["amplitude"]))
            except (KeyError, TypeError):
                raise TorusError(f"mode {i}: needs 'lambda' and 'amplitude'") from None
        N = data.get("N", N if N is not None else (len(modes[0][0]) if modes else None))
        m = data.get("m", m if m is not None else (len(modes[0][2]) if modes else None))
        if N is None or m is None:
            raise TorusError("an empty field needs explicit 'N' and 'm'")
        try:
            return cls.build(int(N), int(m), modes)
        except (TypeError, ValueError) as exc:
            if isinstance(exc, (TorusError, DimensionError)):
                raise
            raise TorusError(str(exc)) from exc

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)


def _gmul(a: Gauss, b: Gauss) -> Gauss:
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


@dataclass
class TrigPoly:
    """``sum_lambda c_lambda e^{2 pi i lambda . y}`` with vector coefficients."""

    N: int
    value_dim: int
    coeffs: dict[Freq, tuple[Gauss, ...]] = field(default_factory=dict)

    def __post_init__(self):
        self.coeffs = {
            k: tuple(v) for k, v in sorted(self.coeffs.items()) if any(c[0] or c[1] for c in v)
        }

    @property
    def support(self) -> list[Freq]:
        return list(self.coeffs)

    def coeff(self, lam: Sequence[int]) -> tuple[Gauss, ...]:
        zero = (Fraction(0), Fraction(0))
        return self.coeffs.get(tuple(lam), (zero,) * self.value_dim)

    def is_real(self) -> bool:
        for lam, c in self.coeffs.items():
            twin = self.coeff(tuple(-a for a in lam))
            if any(a[0] != b[0] or a[1] != -b[1] for a, b in zip(c, twin)):
                return False
        return True

    def mean(self) -> tuple[Fraction, ...]:
        c = self.coeff((0,) * self.N)
        if any(a[1] for a in c):
            raise TorusError("zero-frequency coefficient is not real")
        return tuple(a[0] for a in c)

    @property
    def max_frequency(self) -> int:
        return max((abs(a) for lam in self.coeffs for a in lam), default=0)

    def evaluate_grid(self, n: int) -> np.ndarray:
        """Float values on the uniform ``n^N`` grid, shape ``(value_dim, n, ..., n)``."""
        axes = np.meshgrid(*([np.arange(n) / n] * self.N), indexing="ij")
        out = np.zeros((self.value_dim,) + (n,) * self.N)
        for lam, c in self.coeffs.items():
            phase = 2 * np.pi * sum(l * ax for l, ax in zip(lam, axes))
            cos, sin = np.cos(phase), np.sin(phase)
            for j, (re, im) in enumerate(c):
                out[j] += float(re) * cos - float(im) * sin
        return out

    def to_json(self) -> dict:
        return {
            "N": self.N,
            "valueDim": self.value_dim,
            "coefficients": [
                {"lambda": list(lam), "re": [format_rational(a[0]) for a in c], "im": [format_rational(a[1]) for a in c]}
                for lam, c in self.coeffs.items()
            ],
        }


def field_to_trig(fld: TrigField) -> TrigPoly:
    half = Fraction(1, 2)
    acc: dict[Freq, list[Gauss]] = {}
    zero = (Fraction(0), Fraction(0))

    def add(lam, vec):
        slot = acc.setdefault(lam, [zero] * fld.m)
        for j, g in enumerate(vec):
            slot[j] = (slot[j][0] + g[0], slot[j][1] + g[1])

    for mode in fld.modes:
        neg = tuple(-a for a in mode.lam)
        if mode.phase == "cos":
            add(mode.lam, [(a * half, Fraction(0)) for a in mode.amplitude])
            add(neg, [(a * half, Fraction(0)) for a in mode.amplitude])
        else:
            add(mode.lam, [(Fraction(0), -a * half) for a in mode.amplitude])
            add(neg, [(Fraction(0), a * half) for a in mode.amplitude])
    return TrigPoly(fld.N, fld.m, {k: tuple(v) for k, v in acc.items()})


def apply_symbol(B: HomOperator, fld: TrigField) -> TrigPoly:
    """``B`` applied to the field in the symbol-normalized convention."""
    if fld.m != B.in_dim or fld.N != B.base_dim:
        raise DimensionError(
            f"field is R^{fld.m}-valued on T_{fld.N}; operator expects R^{B.in_dim} on T_{B.base_dim}"
        )
    src = field_to_trig(fld)
    rot = (Fraction(1), Fraction(0)) if B.order % 2 == 0 else (Fraction(0), Fraction(-1))
    out = {}
    for lam, c in src.coeffs.items():
        S = B.symbol(lam)
        vec = []
        for i in range(B.out_dim):
            re = sum((S[i, j] * c[j][0] for j in range(B.in_dim)), Fraction(0))
            im = sum((S[i, j] * c[j][1] for j in range(B.in_dim)), Fraction(0))
            vec.append(_gmul(rot, (re, im)))
        out[lam] = tuple(vec)
    return TrigPoly(B.base_dim, B.out_dim, out)


# --------------------------------------------------------------------------
# scalar series in packed integer form
# --------------------------------------------------------------------------


@dataclass
class _Packing:
    N: int
    bound: int

    @property
    def width(self) -> int:
        return 2 * self.bound + 1

    @property
    def offset(self) -> int:
        return sum(self.bound * self.width**c for c in range(self.N))

    def pack(self, lam: Freq) -> int:
        return sum((a + self.bound) * self.width**c for c, a in enumerate(lam))

    def unpack(self, key: int) -> Freq:
        out = []
        for _ in range(self.N):
            key, digit = divmod(key, self.width)
            out.append(digit - self.bound)
        return tuple(out)


class _Series:
    """``(1 / den) * sum data[key] e_key`` with Gaussian-integer ``data``."""

    __slots__ = ("den", "data")

    def __init__(self, den: int, data: dict[int, tuple[int, int]]):
        g = den
        for re, im in data.values():
            g = gcd(g, re, im)
            if g == 1:
                break
        g = g or 1
        self.den = den // g
        self.data = {k: (re // g, im // g) for k, (re, im) in data.items()} if g > 1 else data

    def mul(self, other: _Series, offset: int) -> _Series:
        data = kernels.convolve(self.data, other.data, offset)
        if len(data) > SUPPORT_LIMIT:
            raise TorusError(f"expansion exceeds the support guard of {SUPPORT_LIMIT} frequencies")
        return _Series(self.den * other.den, data)

    def add_scaled(self, other: _Series, c: Fraction) -> _Series:
        num, den = c.numerator, c.denominator
        new_den = self.den * other.den * den
        a = other.den * den
        b = self.den * num
        data = {k: (re * a, im * a) for k, (re, im) in self.data.items()}
        for k, (re, im) in other.data.items():
            old = data.get(k, (0, 0))
            data[k] = (old[0] + re * b, old[1] + im * b)
        return _Series(new_den, {k: v for k, v in data.items() if v[0] or v[1]})


def _to_series(pk: _Packing, coeffs: Mapping[Freq, Gauss], constant: Fraction) -> _Series:
    items = dict(coeffs)
    zero = (0,) * pk.N
    re0, im0 = items.get(zero, (Fraction(0), Fraction(0)))
    items[zero] = (re0 + constant, im0)
    den = 1
    for re, im in items.values():
        den = den * re.denominator // gcd(den, re.denominator)
        den = den * im.denominator // gcd(den, im.denominator)
    data = {pk.pack(lam): (int(re * den), int(im * den)) for lam, (re, im) in items.items() if re or im}
    return _Series(den, data)


def compose_integrand(f: PolyIntegrand, shift: Sequence, u: TrigPoly) -> TrigPoly:
    """Exact expansion of ``y -> f(shift + u(y))``."""
    if not (f.d == u.value_dim == len(shift)):
        raise DimensionError(f"integrand has d = {f.d}, field has {u.value_dim} components, shift has {len(shift)}")
    shift = [as_rational(s) for s in shift]
    bound = max(max(f.degree, 1) * u.max_frequency, 1)
    pk = _Packing(u.N, bound)
    offset = pk.offset
    comps = [_to_series(pk, {lam: c[j] for lam, c in u.coeffs.items()}, shift[j]) for j in range(f.d)]
    one = _Series(1, {pk.pack((0,) * u.N): (1, 0)})
    powers: dict[tuple[int, int], _Series] = {}

    def power(j: int, e: int) -> _Series:
        if e == 0:
            return one
        got = powers.get((j, e))
        if got is None:
            got = powers[(j, e)] = comps[j] if e == 1 else power(j, e - 1).mul(comps[j], offset)
        return got

    total = _Series(1, {})
    for exps, c in f.poly:
        term = one
        for j, e in enumerate(exps):
            if e:
                term = term.mul(power(j, e), offset)
        total = total.add_scaled(term, c)
    coeffs = {
        pk.unpack(k): ((Fraction(re, total.den), Fraction(im, total.den)),)
        for k, (re, im) in total.data.items()
    }
    return TrigPoly(u.N, 1, coeffs)


def torus_average(f: PolyIntegrand, shift: Sequence, B: HomOperator, fld: TrigField) -> Fraction:
    """Exact mean of ``f(shift + B phi)`` over the torus."""
    return compose_integrand(f, shift, apply_symbol(B, fld)).mean()[0]


def torus_defect(f: PolyIntegrand, shift: Sequence, B: HomOperator, fld: TrigField) -> Fraction:
    """``mean f(shift + B phi) - f(shift)``; zero for every field iff quasiaffine."""
    return torus_average(f, shift, B, fld) - f(shift)


# --------------------------------------------------------------------------
# fields
# --------------------------------------------------------------------------


def random_field(
    N: int,
    m: int,
    n_modes: int = 3,
    *,
    seed: int | str = DEFAULT_SEED,
    max_freq: int = 2,
    max_amp: int = 3,
) -> TrigField:
    """Seeded field with ``n_modes`` modes, frequencies in ``[-max_freq, max_freq]^N``."""
    rng = random.Random(seed)
    modes = []
    while len(modes) < n_modes:
        lam = tuple(rng.randint(-max_freq, max_freq) for _ in range(N))
        if not any(lam):
            continue
        amp = tuple(Fraction(rng.randint(-max_amp, max_amp), rng.randint(1, 2)) for _ in range(m))
        modes.append(TrigMode(lam, rng.choice(("cos", "sin")), amp))
    return TrigField(N, m, tuple(modes))


def bco_field() -> TrigField:
    """Unit cos modes on ``(1,0)``, ``(0,1)``, ``(1,1)`` for components 1, 2, 3."""
    return TrigField.build(2, 3, [
        ((1, 0), "cos", (1, 0, 0)),
        ((0, 1), "cos", (0, 1, 0)),
        ((1, 1), "cos", (0, 0, 1)),
    ])


@dataclass(frozen=True)
class TorusBundle:
    integrand: PolyIntegrand
    operator: HomOperator
    field: TrigField
    shift: tuple[Fraction, ...]

    def average(self) -> Fraction:
        return torus_average(self.integrand, self.shift, self.operator, self.field)

    def to_json(self) -> dict:
        return {
            "integrand": self.integrand.to_json(),
            "operator": self.operator.to_json(),
            "field": self.field.to_json(),
            "shift": [format_rational(s) for s in self.shift],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> TorusBundle:
        try:
            f = PolyIntegrand.from_json(data["integrand"])
            B = HomOperator.from_json(data["operator"])
            fld = TrigField.from_json(data["field"], N=B.base_dim, m=B.in_dim)
            shift = tuple(as_rational(s) for s in data.get("shift", [0] * f.d))
        except KeyError as exc:
            raise TorusError(f"bundle JSON is missing {exc}") from None
        return cls(f, B, fld, shift)


def bco_bundle() -> TorusBundle:
    return TorusBundle(bco_l(), hessian(2, 3), bco_field(), (Fraction(0),) * 9)


BUNDLE_ZOO = {"bco": bco_bundle}
