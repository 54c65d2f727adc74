"""Finite generation of the kernel of a weight function (Brown's criterion).

For a non-strict admissible weight the extremes are read in a widened sense:
a maximum may be a single position or a plateau ``phi(k) = phi(k+1)`` with
every other position strictly lower, and dually for the minimum.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..core.words import Word
from .profile import WeightError, WeightFunction, profile


@dataclass(frozen=True)
class WidenedExtreme:
    value: int
    positions: tuple[int, ...]
    ok: bool  # a single position or an adjacent (cyclic) pair


def _widened(vals: list[int], sign: int) -> WidenedExtreme:
    r = len(vals)
    best = max(vals) if sign > 0 else min(vals)
    pos = tuple(j for j in range(1, r + 1) if vals[j - 1] == best)
    if len(pos) == 1:
        return WidenedExtreme(best, pos, True)
    if len(pos) == 2:
        a, b = pos
        adjacent = b - a == 1 or (a == 1 and b == r)
        return WidenedExtreme(best, pos, adjacent)
    return WidenedExtreme(best, pos, False)


def widened_extremes(word: Word, theta: WeightFunction) -> tuple[WidenedExtreme, WidenedExtreme]:
    phi = profile(word, theta).values[1:]
    return _widened(list(phi), +1), _widened(list(phi), -1)


def brown_kernel_fg(word: Word, theta: WeightFunction, alphabet_size: int) -> bool:
    """Whether the kernel of the map to Z induced by ``theta`` is finitely generated."""
    word = Word(word)
    if not word or not word.is_cyclically_reduced():
        raise WeightError("Brown's criterion needs a nonempty cyclically reduced word")
    if alphabet_size < 2:
        raise WeightError("Brown's criterion needs an alphabet of at least two letters")
    prof = profile(word, theta)
    if not prof.admissible:
        raise WeightError(f"weight function is not admissible: total weight {prof.values[-1]} != 0")
    if alphabet_size != 2:
        return False
    hi, lo = widened_extremes(word, theta)
    return hi.ok and lo.ok
