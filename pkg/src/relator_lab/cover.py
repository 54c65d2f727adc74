"""Levelled paths in the line-shaped 2-complex of groups over Z.

Vertices are the integers. A letter ``x^eps`` read at level ``n`` is the edge
from ``n`` to ``n + eps*theta(x)``; a coefficient ``h`` read at level ``n`` is
a loop in the vertex group ``H_n``. Nothing is materialized beyond the values
a caller builds.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Iterable, Mapping, Union

from .core.words import Coeff, SignedLetter, format_key


@dataclass(frozen=True)
class LevelledEdge:
    level: int
    letter: SignedLetter
    weight: int  # theta of the underlying letter

    @property
    def start(self) -> int:
        return self.level

    @property
    def end(self) -> int:
        return self.level + self.letter.exp * self.weight

    def inverse(self) -> LevelledEdge:
        return LevelledEdge(self.end, self.letter.inverse(), self.weight)

    def __str__(self) -> str:
        base = f"({self.level},{format_key(self.letter.name)})"
        return base if self.letter.exp == 1 else base + "^-1"


@dataclass(frozen=True)
class LevelledCoeff:
    level: int
    value: Hashable

    @property
    def start(self) -> int:
        return self.level

    @property
    def end(self) -> int:
        return self.level

    def inverse(self, group) -> LevelledCoeff:
        return LevelledCoeff(self.level, group.inv(self.value))


Item = Union[LevelledEdge, LevelledCoeff]


@dataclass(frozen=True)
class LevelledPath:
    start: int
    items: tuple[Item, ...] = ()

    def __post_init__(self):
        at = self.start
        for it in self.items:
            if it.start != at:
                raise ValueError(f"path breaks at {it}: expected start {at}, got {it.start}")
            at = it.end

    @property
    def end(self) -> int:
        return self.items[-1].end if self.items else self.start

    @property
    def closed(self) -> bool:
        return self.end == self.start

    def levels(self) -> list[int]:
        """Vertices visited, starting with ``start``."""
        return [self.start] + [it.end for it in self.items]

    def __len__(self) -> int:
        return len(self.items)


def _weight(theta, name) -> int:
    vals = theta if isinstance(theta, Mapping) else theta.values
    return vals[name]


def lift(n: int, alpha: Iterable, theta) -> LevelledPath:
    """Read ``alpha`` (signed letters and :class:`Coeff` items) from level ``n``."""
    at = n
    items: list[Item] = []
    for a in alpha:
        if isinstance(a, SignedLetter):
            e = LevelledEdge(at, a, _weight(theta, a.name))
            items.append(e)
            at = e.end
        elif isinstance(a, Coeff):
            items.append(LevelledCoeff(at, a.value))
        else:
            raise TypeError(f"cannot lift {a!r}")
    return LevelledPath(n, tuple(items))


def translate(i: int, path: LevelledPath) -> LevelledPath:
    def move(it: Item) -> Item:
        if isinstance(it, LevelledEdge):
            return LevelledEdge(it.level + i, it.letter, it.weight)
        return LevelledCoeff(it.level + i, it.value)

    return LevelledPath(path.start + i, tuple(move(it) for it in path.items))


def project(path: LevelledPath) -> list:
    return [it.letter if isinstance(it, LevelledEdge) else Coeff(it.value) for it in path.items]


def theta_sum(alpha: Iterable, theta: Mapping) -> int:
    return sum(a.exp * _weight(theta, a.name) for a in alpha if isinstance(a, SignedLetter))
