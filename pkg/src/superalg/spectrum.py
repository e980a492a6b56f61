"""Sorted energy/multiplicity tables shared by the algebraic and numerical routes."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .polycore import Surd, is_exact

__all__ = ["Level", "SpectrumTable", "encode_scalar", "decode_scalar"]

DEFAULT_MERGE_RTOL = 1e-9


def encode_scalar(x) -> dict | float:
    """JSON form of a scalar; exact values keep their exact text."""
    if isinstance(x, (Fraction, int)) and not isinstance(x, bool):
        return {"value": float(x), "exact": str(Fraction(x))}
    if isinstance(x, Surd):
        return {"value": float(x), "exact": str(x)}
    return float(x)


def decode_scalar(obj):
    if isinstance(obj, dict):
        s = Surd.parse(obj["exact"])
        return s.rational() if s.is_rational else s
    return float(obj)


def _same(a, b, rtol: float) -> bool:
    if is_exact(a) and is_exact(b):
        return a == b
    a, b = float(a), float(b)
    return abs(a - b) <= rtol * max(1.0, abs(a), abs(b))


@dataclass
class Level:
    energy: object
    multiplicity: int
    provenance: str = "algebraic"
    branches: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "E": encode_scalar(self.energy),
            "mult": self.multiplicity,
            "provenance": self.provenance,
            "branches": list(self.branches),
        }

    @classmethod
    def from_dict(cls, d: dict) -> Level:
        return cls(decode_scalar(d["E"]), int(d["mult"]), d.get("provenance", "algebraic"),
                   tuple(d.get("branches", ())))


@dataclass
class SpectrumTable:
    """Energies in ascending order with degeneracies.

    Energies that agree (exactly for exact scalars, to ``merge_rtol`` relative
    otherwise) are coalesced and their multiplicities summed.
    """

    levels: list[Level] = field(default_factory=list)

    @classmethod
    def from_entries(
        cls,
        entries: Iterable[tuple[object, int] | tuple[object, int, str]],
        provenance: str = "algebraic",
        merge_rtol: float = DEFAULT_MERGE_RTOL,
    ) -> SpectrumTable:
        items = []
        for e in entries:
            E, mult = e[0], e[1]
            branch = e[2] if len(e) > 2 else None
            items.append((E, mult, branch))
        items.sort(key=lambda t: float(t[0]))
        levels: list[Level] = []
        for E, mult, branch in items:
            if levels and _same(levels[-1].energy, E, merge_rtol):
                lv = levels[-1]
                lv.multiplicity += mult
                if branch is not None:
                    lv.branches = lv.branches + (branch,)
            else:
                levels.append(Level(E, mult, provenance, (branch,) if branch is not None else ()))
        return cls(levels)

    def __len__(self):
        return len(self.levels)

    def __iter__(self):
        return iter(self.levels)

    def __getitem__(self, k):
        return self.levels[k]

    @property
    def energies(self) -> list:
        return [lv.energy for lv in self.levels]

    @property
    def multiplicities(self) -> list[int]:
        return [lv.multiplicity for lv in self.levels]

    @property
    def total_states(self) -> int:
        return sum(self.multiplicities)

    def truncate(self, e_max) -> SpectrumTable:
        return SpectrumTable([lv for lv in self.levels if lv.energy <= e_max])

    def first(self, k: int) -> SpectrumTable:
        return SpectrumTable(self.levels[:k])

    def shifted(self, c) -> SpectrumTable:
        return SpectrumTable([Level(lv.energy + c, lv.multiplicity, lv.provenance, lv.branches)
                              for lv in self.levels])

    def pairs(self) -> list[tuple[float, int]]:
        return [(float(lv.energy), lv.multiplicity) for lv in self.levels]

    def to_dict(self) -> list[dict]:
        return [lv.to_dict() for lv in self.levels]

    @classmethod
    def from_dict(cls, rows: list[dict]) -> SpectrumTable:
        return cls([Level.from_dict(r) for r in rows])
