"""Certificate search: does some admissible strict weight function put a word
into a given max-min class?

For fixed extreme positions ``(k, l)`` and a fixed sign pattern of the
weights, the question is a homogeneous system of strict linear inequalities
plus one equation. By homogeneity, ``> 0`` may be replaced by ``>= 1``; the
system is then decided exactly by :func:`feasible_point`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Hashable, Sequence

from ..core.words import Word
from .feasibility import feasible_point, integer_direction
from .profile import (
    ExtremumReport,
    MaxMinClass,
    WeightFunction,
    classify,
    letters_at,
    reduced_at,
)

DEFAULT_SIGN_CAP = 2**16


class SearchCapped(RuntimeError):
    pass


@dataclass(frozen=True)
class MaxMinCertificate:
    theta: WeightFunction
    k: int | None
    l: int
    achieved: MaxMinClass
    target: MaxMinClass
    verified: bool
    report: ExtremumReport

    def as_dict(self) -> dict:
        return {
            "theta": self.theta.as_dict(),
            "k": self.k,
            "l": self.l,
            "class": self.achieved.label,
            "target": self.target.label,
            "verified": self.verified,
            "profile": list(self.report.profile.values),
        }


def certify(word: Word, theta: WeightFunction, target: MaxMinClass) -> MaxMinCertificate | None:
    """Wrap ``theta`` as a certificate if it reaches ``target`` on ``word``."""
    prof_ok = sum(s.exp * theta[s.name] for s in word) == 0
    if not prof_ok:
        return None
    rep = classify(word, theta)
    if rep.achieved < target:
        return None
    k = rep.maximum.positions[0] if rep.maximum.unique else None
    return MaxMinCertificate(theta, k, rep.minimum.positions[0], rep.achieved, target, True, rep)


def _cumulative(word: Word, letters: Sequence[Hashable]) -> list[list[int]]:
    """``c[j]`` with ``phi(j) = c[j] . theta`` for ``j = 0..r``."""
    idx = {x: i for i, x in enumerate(letters)}
    rows = [[0] * len(letters)]
    for s in word:
        row = list(rows[-1])
        row[idx[s.name]] += s.exp
        rows.append(row)
    return rows


def search_certificate(
    word: Word,
    target: MaxMinClass | str = MaxMinClass.UNIQUE_MAX_MIN,
    alphabet: Sequence[Hashable] | None = None,
    sign_cap: int = DEFAULT_SIGN_CAP,
    prefer_constant: bool = True,
) -> MaxMinCertificate | None:
    """Return a verified certificate for ``target`` or ``None`` if none exists.

    The constant weight ``1`` is tried first; otherwise candidates are scanned
    in lexicographic ``(k, l, sign pattern)`` order and the first feasible one
    wins, so the result is deterministic.
    """
    if isinstance(target, str):
        target = MaxMinClass.from_label(target)
    if target == MaxMinClass.NONE:
        raise ValueError("target class must be one of unique-min, unique-max-min, strong")
    word = Word(word)
    r = len(word)
    if r < 1:
        raise ValueError("word must be nonempty")
    letters = list(word.letters())
    extra = [x for x in (alphabet or ()) if x not in letters]
    n = len(letters)
    if 2**n > sign_cap:
        raise SearchCapped(f"search capped: {2**n} sign patterns exceed the cap {sign_cap}")

    def finish(vals: Sequence[int]) -> MaxMinCertificate:
        theta = WeightFunction({**dict(zip(letters, vals)), **{x: 1 for x in extra}})
        cert = certify(word, theta, target)
        if cert is None:
            raise AssertionError("feasible point failed to certify (solver bug)")
        return cert

    if prefer_constant:
        cert = certify(word, WeightFunction.constant(letters + extra), target)
        if cert is not None:
            return cert
    if r < 2:
        return None

    c = _cumulative(word, letters)
    total = c[r]
    exps = [s.exp for s in word]
    pos = {x: i for i, x in enumerate(letters)}
    step_letter = [pos[s.name] for s in word]
    reduced = [None] + [reduced_at(word, j) for j in range(1, r + 1)]
    patterns = list(itertools.product((1, -1), repeat=n))

    def step_sign(j: int, sigma) -> int:  # j in 1..r; step j goes phi(j-1) -> phi(j)
        i = (j - 1) % r
        return exps[i] * sigma[step_letter[i]]

    def diff_ok(d: Sequence[int], sigma) -> bool:
        # d . theta > 0 is impossible if every term is <= 0 under the signs
        return any(di * sg > 0 for di, sg in zip(d, sigma))

    def solve(k: int | None, l: int, sigma) -> list[int] | None:
        ineqs = []
        if k is not None:
            for j in range(1, r + 1):
                if j != k:
                    d = [a - b for a, b in zip(c[k], c[j])]
                    if not diff_ok(d, sigma):
                        return None
                    ineqs.append((d, 1))
        for j in range(1, r + 1):
            if j != l:
                d = [a - b for a, b in zip(c[j], c[l])]
                if not diff_ok(d, sigma):
                    return None
                ineqs.append((d, 1))
        for i, sg in enumerate(sigma):
            row = [0] * n
            row[i] = sg
            ineqs.append((row, 1))
        sol = feasible_point(n, ineqs, [(total, 0)])
        return None if sol is None else integer_direction(sol)

    if target == MaxMinClass.UNIQUE_MIN:
        for l in range(1, r + 1):
            if not reduced[l]:
                continue
            for sigma in patterns:
                if step_sign(l, sigma) > 0 or step_sign(l + 1, sigma) < 0:
                    continue
                sol = solve(None, l, sigma)
                if sol is not None:
                    return finish(sol)
        return None

    for k in range(1, r + 1):
        if not reduced[k]:
            continue
        for l in range(1, r + 1):
            if l == k or not reduced[l]:
                continue
            if target == MaxMinClass.STRONG and not (letters_at(word, k) & letters_at(word, l)):
                continue
            for sigma in patterns:
                if step_sign(k, sigma) < 0 or step_sign(k + 1, sigma) > 0:
                    continue
                if step_sign(l, sigma) > 0 or step_sign(l + 1, sigma) < 0:
                    continue
                sol = solve(k, l, sigma)
                if sol is not None:
                    return finish(sol)
    return None


def best_class(word: Word, alphabet=None, sign_cap: int = DEFAULT_SIGN_CAP) -> tuple[MaxMinClass, MaxMinCertificate | None]:
    """The strongest class for which a certificate exists, with that certificate."""
    for target in (MaxMinClass.STRONG, MaxMinClass.UNIQUE_MAX_MIN, MaxMinClass.UNIQUE_MIN):
        cert = search_certificate(word, target, alphabet, sign_cap)
        if cert is not None:
            return target, cert
    return MaxMinClass.NONE, None
