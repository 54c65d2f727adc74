"""Weight functions, profiles and the max-min classification of a word."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import IntEnum
from typing import Hashable, Mapping, Sequence

from ..core.words import Word, format_key


class MaxMinClass(IntEnum):
    """Ordered so that a stronger class compares greater."""

    NONE = 0
    UNIQUE_MIN = 1
    UNIQUE_MAX_MIN = 2
    STRONG = 3

    @property
    def label(self) -> str:
        return _LABELS[self]

    @classmethod
    def from_label(cls, text: str) -> MaxMinClass:
        for k, v in _LABELS.items():
            if v == text or k.name.lower() == text.replace("-", "_"):
                return k
        raise ValueError(f"unknown class {text!r}; expected one of {sorted(_LABELS.values())}")


_LABELS = {
    MaxMinClass.NONE: "none",
    MaxMinClass.UNIQUE_MIN: "unique-min",
    MaxMinClass.UNIQUE_MAX_MIN: "unique-max-min",
    MaxMinClass.STRONG: "strong-unique-max-min",
}


class WeightError(ValueError):
    pass


@dataclass(frozen=True)
class WeightFunction:
    values: Mapping[Hashable, int] = field(hash=False)

    def __post_init__(self):
        vals = dict(self.values)
        if not vals:
            raise WeightError("a weight function needs at least one letter")
        g = 0
        for v in vals.values():
            if int(v) != v:
                raise WeightError("weights must be integers")
            g = math.gcd(g, int(v))
        if g != 1:
            raise WeightError(f"weights must have gcd 1, got gcd {g}")
        object.__setattr__(self, "values", vals)

    @classmethod
    def constant(cls, letters: Sequence[Hashable]) -> WeightFunction:
        return cls({x: 1 for x in letters})

    @property
    def strict(self) -> bool:
        return all(v != 0 for v in self.values.values())

    def __getitem__(self, x):
        return self.values[x]

    def negated(self) -> WeightFunction:
        return WeightFunction({x: -v for x, v in self.values.items()})

    def is_constant_one(self) -> bool:
        return all(v == 1 for v in self.values.values())

    def as_dict(self) -> dict:
        return {format_key(x): v for x, v in self.values.items()}


@dataclass(frozen=True)
class Profile:
    values: tuple[int, ...]

    @property
    def admissible(self) -> bool:
        return self.values[-1] == 0

    def __len__(self):
        return len(self.values)


def profile(word: Word, theta: WeightFunction | Mapping) -> Profile:
    vals = theta.values if isinstance(theta, WeightFunction) else theta
    out = [0]
    for s in word:
        try:
            out.append(out[-1] + s.exp * vals[s.name])
        except KeyError:
            raise WeightError(f"no weight given for letter {format_key(s.name)}") from None
    return Profile(tuple(out))


@dataclass(frozen=True)
class Extremum:
    """One extreme of the cyclic profile. ``positions`` are in ``1..r``."""

    value: int
    positions: tuple[int, ...]
    unique: bool
    plateau: tuple[int, int] | None  # (k, k+1) when the extreme is exactly an adjacent pair
    reduced: bool | None  # only meaningful when unique
    letters: frozenset | None

    def as_dict(self) -> dict:
        return {
            "value": self.value,
            "positions": list(self.positions),
            "unique": self.unique,
            "plateau": list(self.plateau) if self.plateau else None,
            "reduced": self.reduced,
            "letters": sorted(format_key(x) for x in self.letters) if self.letters else None,
        }


@dataclass(frozen=True)
class ExtremumReport:
    profile: Profile
    strict: bool
    maximum: Extremum
    minimum: Extremum
    strong: bool
    plateau_repeats_letter: bool  # a plateau with x_k == x_{k+2}; flagged, not handled

    @property
    def M(self) -> int:
        return self.maximum.value

    @property
    def m(self) -> int:
        return self.minimum.value

    @property
    def has_unique_min(self) -> bool:
        return self.strict and self.minimum.unique and bool(self.minimum.reduced)

    @property
    def has_unique_max_min(self) -> bool:
        return self.has_unique_min and self.maximum.unique and bool(self.maximum.reduced)

    @property
    def achieved(self) -> MaxMinClass:
        if self.has_unique_max_min:
            return MaxMinClass.STRONG if self.strong else MaxMinClass.UNIQUE_MAX_MIN
        if self.has_unique_min:
            return MaxMinClass.UNIQUE_MIN
        return MaxMinClass.NONE

    def as_dict(self) -> dict:
        return {
            "profile": list(self.profile.values),
            "strict": self.strict,
            "max": self.maximum.as_dict(),
            "min": self.minimum.as_dict(),
            "strong": self.strong,
            "class": self.achieved.label,
            "plateau_repeats_letter": self.plateau_repeats_letter,
        }


def reduced_at(word: Word, j: int) -> bool:
    """``x_j^{e_j} != x_{j+1}^{-e_{j+1}}`` with indices mod ``r`` (1-based)."""
    r = len(word)
    a, b = word[(j - 1) % r], word[j % r]
    return not (a.name == b.name and a.exp == -b.exp)


def letters_at(word: Word, j: int) -> frozenset:
    r = len(word)
    return frozenset({word[(j - 1) % r].name, word[j % r].name})


def _extremum(word: Word, phi: Sequence[int], sign: int) -> Extremum:
    r = len(word)
    vals = phi[1 : r + 1]
    best = max(vals) if sign > 0 else min(vals)
    positions = tuple(j for j in range(1, r + 1) if vals[j - 1] == best)
    unique = len(positions) == 1
    plateau = None
    if len(positions) == 2:
        a, b = positions
        if b - a == 1:
            plateau = (a, b)
        elif a == 1 and b == r:
            plateau = (r, 1)
    if unique:
        k = positions[0]
        return Extremum(best, positions, True, None, reduced_at(word, k), letters_at(word, k))
    return Extremum(best, positions, False, plateau, None, None)


def classify(word: Word, theta: WeightFunction) -> ExtremumReport:
    """Extremes of the cyclic profile of ``word`` under an admissible ``theta``.

    Positions range over ``1..r``; position ``r`` doubles as the basepoint
    since ``phi(0) == phi(r)``.
    """
    if len(word) < 1:
        raise WeightError("cannot classify the empty word")
    prof = profile(word, theta)
    if not prof.admissible:
        raise WeightError(
            f"weight function is not admissible: total weight {prof.values[-1]} != 0"
        )
    phi = prof.values
    mx = _extremum(word, phi, +1)
    mn = _extremum(word, phi, -1)
    strong = bool(mx.letters and mn.letters and mx.letters & mn.letters)
    r = len(word)
    repeats = False
    for ext in (mx, mn):
        if ext.plateau:
            k = ext.plateau[0]
            # the flat step is x_{k+1}; compare its neighbours x_k and x_{k+2}
            if word[(k - 1) % r].name == word[(k + 1) % r].name:
                repeats = True
    return ExtremumReport(prof, theta.strict, mx, mn, strong, repeats)
