"""Exact rotation theory for degree-one graph maps, with Fraction-valued results."""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Tuple

from . import _core
from ._core import RotkitError

__all__ = [
    "Model",
    "RotkitError",
    "chi",
    "decompose",
    "check_decomposition",
    "rho_exact",
    "rho_enclosure",
]

_Pair = Tuple[Fraction, Fraction]


def _text(value) -> str:
    return str(Fraction(value))


def _points(points: Iterable[Sequence]) -> list:
    return [(_text(x), _text(y)) for x, y in points]


def _interval(raw: dict) -> dict:
    out = dict(raw)
    out["min"] = Fraction(raw["min"])
    out["max"] = Fraction(raw["max"])
    return out


class Model:
    """A lifted graph with its Markov map, loaded from a model file."""

    def __init__(self, core: _core.Model):
        self._core = core

    @classmethod
    def load(cls, path: str) -> "Model":
        return cls(_core.Model.load(str(path)))

    @classmethod
    def parse(cls, text: str) -> "Model":
        return cls(_core.Model.parse(text))

    @property
    def name(self) -> str:
        return self._core.name

    @property
    def points(self) -> list:
        return self._core.point_names()

    def rotation_set(self) -> dict:
        return _interval(self._core.rotation_set())

    def rotation_set_of_power(self, n: int) -> dict:
        return _interval(self._core.rotation_set_of_power(n))

    def transitive(self) -> bool:
        return self._core.transitive()

    def analyze(self, horizon: int = 256, qmax: int = 12, seed: int = 0) -> dict:
        return json.loads(self._core.analyze_json(horizon, qmax, seed))

    def periods(self, rho, n_max: int, budget: int = 1_000_000) -> dict:
        rho = Fraction(rho)
        return json.loads(self._core.periods_json(rho.numerator, rho.denominator, n_max, budget))

    def orbit(self, point: str, steps: int = 200) -> dict:
        return json.loads(self._core.orbit_json(point, steps))

    def dot(self) -> str:
        return self._core.dot()


def chi(t) -> int:
    return _core.chi(_text(t))


def decompose(N: int, m: int) -> list:
    return _core.decompose(N, m)


def check_decomposition(N: int, m: int, parts: Sequence[int]) -> str:
    """Empty string when valid, otherwise the first violated condition."""
    return _core.check_decomposition(N, m, list(parts))


def rho_exact(points: Iterable[Sequence], qmax: int = 12) -> Optional[Fraction]:
    """Rotation number of the PL lift through `points` on [0, 1], if its denominator is at most qmax."""
    value = _core.rho_exact(_points(points), qmax)
    return None if value is None else Fraction(value)


def rho_enclosure(points: Iterable[Sequence], n: int) -> _Pair:
    lo, hi = _core.rho_enclosure(_points(points), n)
    return Fraction(lo), Fraction(hi)
