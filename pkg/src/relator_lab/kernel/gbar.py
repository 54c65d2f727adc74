"""Normal forms in ``G-bar = (H * F0) x| Z`` and the embedding of ``G``.

An element is a pair ``(u, p)`` with ``u`` in normal form in ``H * F0`` and
``p`` the exponent-sum coordinate; ``(u, p)(v, q) = (u . mu^p(v), p + q)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from ..core.freeprod import FPElement
from ..core.words import Coeff, SignedLetter, Word
from ..cover import LevelledCoeff
from .construction import S, KernelData, KernelDepthError, kletter


@dataclass(frozen=True)
class GBarElement:
    u: FPElement
    n: int

    def format(self, kd: KernelData) -> str:
        return f"({kd.carrier.format(self.u)}, {self.n})"


IDENTITY = GBarElement(FPElement(), 0)


def gbar_mul(kd: KernelData, a: GBarElement, b: GBarElement) -> GBarElement:
    return GBarElement(kd.carrier.normalize([a.u, kd.mu_bar(b.u, a.n)]), a.n + b.n)


def gbar_inv(kd: KernelData, a: GBarElement) -> GBarElement:
    return GBarElement(kd.mu_bar(kd.carrier.inv(a.u), -a.n), -a.n)


def _atoms(word) -> list:
    if isinstance(word, FPElement):
        return word.atoms()
    if isinstance(word, str):
        return list(Word.parse(word))
    return list(word)


def needed_levels(kd: KernelData, word) -> list[int]:
    """Levels of ``(n, e)`` that embedding ``word`` will touch: an ``e`` read at
    exponent-sum prefix ``p`` uses level ``p``, an ``e^-1`` uses ``p - 1``."""
    p, out = 0, []
    for a in _atoms(word):
        if isinstance(a, SignedLetter):
            if a.name == kd.e:
                out.append(p if a.exp == 1 else p - 1)
            p += a.exp
    return out


def generator_image(kd: KernelData, a) -> GBarElement:
    car = kd.carrier
    if isinstance(a, Coeff):
        return GBarElement(kd.iso_forward(LevelledCoeff(0, a.value)), 0)
    if not isinstance(a, SignedLetter):
        raise TypeError(f"cannot embed {a!r}")
    if a.name == kd.f:
        g = GBarElement(car.identity, 1)
    else:
        g = GBarElement(kd.iso_forward(kletter(0, a.name)), 1)
    return g if a.exp == 1 else gbar_inv(kd, g)


def embed_G(kd: KernelData, word) -> GBarElement:
    """Image in ``G-bar`` of a word in the letters and coefficients of ``kd.P``.

    Equal to folding :func:`gbar_mul` over the generator images, but each
    factor ``mu^p(u)`` is emitted once and the whole product is normalized in a
    single pass.
    """
    atoms = _atoms(word)
    lo, hi = kd.level_range()
    for lvl in needed_levels(kd, atoms):
        if not lo <= lvl <= hi:
            raise KernelDepthError(lvl, lo, hi)
    car = kd.carrier
    pieces: list = []
    p = 0
    for a in atoms:
        if isinstance(a, Coeff):
            pieces.append(kd.mu_bar(kd.iso_forward(LevelledCoeff(0, a.value)), p))
            continue
        if not isinstance(a, SignedLetter):
            raise TypeError(f"cannot embed {a!r}")
        if a.name not in kd.P.alphabet:
            raise KeyError(f"letter {a.name!r} is not in the alphabet")
        if a.name != kd.f:
            at = p if a.exp == 1 else p - 1
            if a.name == kd.e:
                img = kd.iso_e(at)
            else:
                img = kd.mu_bar(kd.iso_forward(kletter(0, a.name)), at)
            pieces.append(img if a.exp == 1 else car.inv(img))
        p += a.exp
    return GBarElement(car.normalize(pieces), p)


def embed_G_folded(kd: KernelData, word) -> GBarElement:
    """Reference version of :func:`embed_G` that multiplies step by step."""
    out = IDENTITY
    for a in _atoms(word):
        out = gbar_mul(kd, out, generator_image(kd, a))
    return out


def gbar_equal(kd: KernelData, w1, w2) -> bool:
    return embed_G(kd, w1) == embed_G(kd, w2)


def retract_Gbar(kd: KernelData, g: GBarElement) -> list:
    """A word in ``G`` for ``g``: ``s -> f``, ``x -> x f^-1``, ``h -> h``,
    ``(i, e) -> f^i e f^-(i+1)``, followed by ``f^n``."""
    f = kd.f
    out: list = []

    def fpow(k):
        return [SignedLetter(f, 1 if k > 0 else -1)] * abs(k)

    for a in g.u.atoms():
        if isinstance(a, Coeff):
            out.append(a)
            continue
        if a.name == S:
            piece = [SignedLetter(f, 1)]
        elif a.name[0] == "x":
            piece = [SignedLetter(a.name[1], 1), SignedLetter(f, -1)]
        else:
            i = a.name[1]
            piece = fpow(i) + [SignedLetter(kd.e, 1)] + fpow(-(i + 1))
        if a.exp == -1:
            piece = [s.inverse() for s in reversed(piece)]
        out.extend(piece)
    out.extend(fpow(g.n))
    return _reduce_mixed(out)


def _reduce_mixed(atoms: Iterable) -> list:
    stack: list = []
    for a in atoms:
        if stack and isinstance(a, SignedLetter) and isinstance(stack[-1], SignedLetter) and stack[-1] == a.inverse():
            stack.pop()
        else:
            stack.append(a)
    return stack
