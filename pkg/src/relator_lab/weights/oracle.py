"""Brute-force class oracle over a box of integer weights.

Deliberately shares no code with :mod:`.search` or :func:`.profile.classify`:
every condition is re-derived from the definitions and evaluated for all
weights in ``{-B..B}`` minus zero at once with numpy.
"""

from __future__ import annotations

import itertools
import math
from functools import lru_cache

import numpy as np

from ..core.words import Word
from .profile import MaxMinClass


@lru_cache(maxsize=16)
def _grid(n: int, bound: int) -> np.ndarray:
    vals = [v for v in range(-bound, bound + 1) if v != 0]
    rows = [t for t in itertools.product(vals, repeat=n) if math.gcd(*t) == 1]
    return np.array(rows, dtype=np.int64).reshape(len(rows), n)


def oracle_search(word: Word, target: MaxMinClass | str, bound: int = 4, max_letters: int = 6) -> dict | None:
    """First weight (in grid order) reaching ``target``, as ``{letter: weight}``."""
    if isinstance(target, str):
        target = MaxMinClass.from_label(target)
    word = Word(word)
    letters = list(word.letters())
    n, r = len(letters), len(word)
    if n > max_letters:
        raise ValueError(f"oracle limited to {max_letters} letters")
    if r < 2:
        return None
    idx = {x: i for i, x in enumerate(letters)}
    steps = np.zeros((r, n), dtype=np.int64)
    for i, s in enumerate(word):
        steps[i, idx[s.name]] = s.exp
    grid = _grid(n, bound)
    phi = np.cumsum(grid @ steps.T, axis=1)  # phi[t, j-1] = phi(j) for j in 1..r
    ok = phi[:, -1] == 0

    # reducedness at j (1-based): x_j^e != x_{j+1}^{-e}, cyclically
    red = np.array(
        [
            not (word[j - 1].name == word[j % r].name and word[j - 1].exp == -word[j % r].exp)
            for j in range(1, r + 1)
        ]
    )
    pair = [{word[j - 1].name, word[j % r].name} for j in range(1, r + 1)]
    meets = np.array([[bool(pair[a] & pair[b]) for b in range(r)] for a in range(r)])

    lo = phi.min(axis=1)
    lcount = (phi == lo[:, None]).sum(axis=1)
    larg = phi.argmin(axis=1)
    ok &= (lcount == 1) & red[larg]
    if target >= MaxMinClass.UNIQUE_MAX_MIN:
        hi = phi.max(axis=1)
        hcount = (phi == hi[:, None]).sum(axis=1)
        harg = phi.argmax(axis=1)
        ok &= (hcount == 1) & red[harg]
        if target == MaxMinClass.STRONG:
            ok &= meets[harg, larg]
    hits = np.flatnonzero(ok)
    if hits.size == 0:
        return None
    return {x: int(v) for x, v in zip(letters, grid[hits[0]])}
