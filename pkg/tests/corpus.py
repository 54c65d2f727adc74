"""Deterministic random corpora shared by the module tests and the acceptance suite."""

from __future__ import annotations

import random

from relator_lab.core import (
    Coeff,
    CyclicGroup,
    RelativePresentation,
    SignedLetter,
    TrivialGroup,
    Word,
    from_atoms,
    symmetric_group_table,
)
from relator_lab.weights import MaxMinClass, search_certificate

GROUPS = (TrivialGroup(), CyclicGroup(2), symmetric_group_table(3))


def random_m_presentations(count: int = 100, seed: int = 5, max_len: int = 10) -> list[RelativePresentation]:
    """One-relator presentations whose skeleton has the unique max-min property.

    Skeletons are cyclically reduced, use at least two letters and have length
    at most ``max_len``; coefficients are uniform in ``H``.
    """
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        H = rng.choice(GROUPS)
        letters = ["x", "y", "z"][: rng.randint(2, 3)]
        W = Word(SignedLetter(rng.choice(letters), rng.choice((1, -1))) for _ in range(rng.randint(2, max_len)))
        if not W.is_cyclically_reduced() or len(W.letters()) < 2:
            continue
        if search_certificate(W, MaxMinClass.UNIQUE_MAX_MIN) is None:
            continue
        R = from_atoms([a for s in W for a in (s, Coeff(rng.choice(H.elements())))], H)
        out.append(RelativePresentation(tuple(letters), H, (R,)))
    return out


def word_pool(P: RelativePresentation) -> list:
    return [SignedLetter(x, e) for x in P.alphabet for e in (1, -1)] + [Coeff(h) for h in P.group.elements()]
