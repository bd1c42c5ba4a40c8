"""Verdicts, witnesses and the JSON report format shared by all checks."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any

from .algebra import as_rational, format_rational


class Verdict(str, Enum):
    PASS = "PASS"
    FAIL = "FAIL"
    INCONCLUSIVE = "INCONCLUSIVE"
    PROBABLE_PASS = "PROBABLE-PASS"
    NECESSARY_CONDITIONS_HOLD = "NECESSARY-CONDITIONS-HOLD"

    def __str__(self) -> str:
        return self.value


class DimensionError(ValueError):
    """Operator / integrand / vector sizes do not fit together."""


def _vec_out(v) -> list[str]:
    return [format_rational(a) for a in v]


def _vec_in(v) -> tuple[Fraction, ...]:
    return tuple(as_rational(a) for a in v)


@dataclass(frozen=True)
class Witness:
    """A concrete point where a defining multilinear identity is nonzero.

    ``kind`` tells how the slot vectors are rebuilt:

    * ``"potential"``: slot ``j`` is ``B[frequencies[j]] @ directions[j]``;
    * ``"annihilator"``: ``directions[j]`` already lies in ``ker A[frequencies[j]]``;
    * ``"cone"``: both slots are ``B[frequencies[0]] @ directions[0]``.
    """

    kind: str
    r: int
    x: tuple[Fraction, ...]
    frequencies: tuple[tuple[Fraction, ...], ...]
    directions: tuple[tuple[Fraction, ...], ...]
    value: Fraction
    lambdas: tuple[Fraction, ...] = ()

    def to_json(self) -> dict[str, Any]:
        out = {
            "kind": self.kind,
            "r": self.r,
            "x": _vec_out(self.x),
            "frequencies": [_vec_out(f) for f in self.frequencies],
            "directions": [_vec_out(w) for w in self.directions],
            "value": format_rational(self.value),
        }
        if self.lambdas:
            out["lambdas"] = _vec_out(self.lambdas)
        return out

    @classmethod
    def from_json(cls, data: dict[str, Any]) -> Witness:
        return cls(
            kind=data["kind"],
            r=int(data["r"]),
            x=_vec_in(data["x"]),
            frequencies=tuple(_vec_in(f) for f in data["frequencies"]),
            directions=tuple(_vec_in(w) for w in data["directions"]),
            value=as_rational(data["value"]),
            lambdas=_vec_in(data.get("lambdas", ())),
        )


@dataclass(frozen=True)
class PairWitness:
    """Why an (annihilator, potential) pair was rejected.

    ``kind == "composition"``: entry ``entry`` of ``A[xi] B[xi]`` has the
    nonzero coefficient ``coefficient`` on the monomial ``xi^monomial``.
    ``kind == "rank"``: at ``frequency`` the ranks violate
    ``rank B[xi] == dim - rank A[xi]``.
    """

    kind: str
    entry: tuple[int, int] = (0, 0)
    monomial: tuple[int, ...] = ()
    coefficient: Fraction = Fraction(0)
    frequency: tuple[Fraction, ...] = ()
    rank_a: int = 0
    rank_b: int = 0

    def to_json(self) -> dict[str, Any]:
        if self.kind == "composition":
            return {
                "kind": self.kind,
                "entry": list(self.entry),
                "monomial": list(self.monomial),
                "coefficient": format_rational(self.coefficient),
            }
        return {
            "kind": self.kind,
            "frequency": _vec_out(self.frequency),
            "rankA": self.rank_a,
            "rankB": self.rank_b,
        }

    @classmethod
    def from_json(cls, data: dict[str, Any]) -> PairWitness:
        if data["kind"] == "composition":
            return cls(
                kind="composition",
                entry=tuple(int(i) for i in data["entry"]),
                monomial=tuple(int(e) for e in data["monomial"]),
                coefficient=as_rational(data["coefficient"]),
            )
        return cls(
            kind=data["kind"],
            frequency=_vec_in(data["frequency"]),
            rank_a=int(data["rankA"]),
            rank_b=int(data["rankB"]),
        )


def witness_from_json(data: dict[str, Any]) -> Witness | PairWitness:
    if data.get("kind") in ("composition", "rank"):
        return PairWitness.from_json(data)
    return Witness.from_json(data)


@dataclass
class CheckReport:
    verdict: Verdict
    checked_orders: list[int] = field(default_factory=list)
    witness: Witness | PairWitness | None = None
    certificate: list[str] = field(default_factory=list)
    mode: str = "exact"
    check: str = ""

    def __post_init__(self):
        self.verdict = Verdict(self.verdict)
        if self.verdict is Verdict.FAIL and self.witness is None:
            raise ValueError("a FAIL report needs a witness")
        if self.verdict is not Verdict.FAIL and self.witness is not None:
            raise ValueError("only FAIL reports carry a witness")

    @property
    def passed(self) -> bool:
        return self.verdict is Verdict.PASS

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "check": self.check,
            "verdict": self.verdict.value,
            "checkedOrders": list(self.checked_orders),
            "certificate": list(self.certificate),
            "mode": self.mode,
        }
        if self.witness is not None:
            out["witness"] = self.witness.to_json()
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, data: dict[str, Any]) -> CheckReport:
        witness = data.get("witness")
        return cls(
            verdict=Verdict(data["verdict"]),
            checked_orders=[int(r) for r in data.get("checkedOrders", [])],
            witness=witness_from_json(witness) if witness else None,
            certificate=list(data.get("certificate", [])),
            mode=data.get("mode", "exact"),
            check=data.get("check", ""),
        )

    def render(self) -> str:
        lines = [f"{self.check or 'check'}: {self.verdict.value} (mode: {self.mode})"]
        if self.checked_orders:
            lines.append("orders checked: " + ", ".join(str(r) for r in self.checked_orders))
        for note in self.certificate:
            lines.append(f"  - {note}")
        if isinstance(self.witness, PairWitness):
            lines.append("witness: " + json.dumps(self.witness.to_json(), sort_keys=True))
        elif self.witness is not None:
            w = self.witness
            lines.append(f"witness ({w.kind}, r = {w.r}): value {format_rational(w.value)}")
            lines.append(f"  x = ({', '.join(_vec_out(w.x))})")
            for i, xi in enumerate(w.frequencies, 1):
                lines.append(f"  xi_{i} = ({', '.join(_vec_out(xi))})")
            if w.lambdas:
                lines.append(f"  lambda = ({', '.join(_vec_out(w.lambdas))})")
            for i, d in enumerate(w.directions, 1):
                lines.append(f"  w_{i} = ({', '.join(_vec_out(d))})")
        return "\n".join(lines)
