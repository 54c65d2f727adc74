"""A word-problem solver assembled from the embedding pipeline and the kernel.

``G = <x, H; R>`` splits as ``G' * Psi`` with ``Psi`` free on the letters that
do not occur in ``R``. ``G'`` embeds (through the retraction pair from
:func:`to_strong`) into a strong presentation, and that group embeds into
``G-bar`` where elements have canonical normal forms. When the profile spans
a single step the relator can simply be solved for ``e``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable

from ..core.freeprod import FPElement, FreeProduct
from ..core.homs import apply_hom
from ..core.relators import RelativePresentation, restrict_alphabet
from ..core.words import Coeff, SignedLetter, Word, free_reduce
from ..embed import StrongResult, to_strong
from .construction import DEFAULT_MAX_LEVEL, KernelData, extremes
from .gbar import IDENTITY, GBarElement, embed_G, gbar_inv, gbar_mul, needed_levels, retract_Gbar


class TrivialCase:
    """``M - m = 1``: ``R = U e^eps V`` with one ``e``, so ``e = (U^-1 V^-1)^eps``
    and the group is free on ``x - {e}`` times ``H``."""

    def __init__(self, P: RelativePresentation, e: Hashable):
        self.P, self.e = P, e
        self.carrier = FreeProduct(P.group)
        atoms = P.relator.atoms()
        idx = [i for i, a in enumerate(atoms) if isinstance(a, SignedLetter) and a.name == e]
        if len(idx) != 1:
            raise ValueError("trivial case expects exactly one occurrence of e")
        i = idx[0]
        car = self.carrier
        U, V, eps = car.normalize(atoms[:i]), car.normalize(atoms[i + 1 :]), atoms[i].exp
        self.e_image = car.power(car.normalize([car.inv(U), car.inv(V)]), eps)

    def embed(self, atoms) -> FPElement:
        car = self.carrier
        out = []
        for a in atoms:
            if isinstance(a, SignedLetter) and a.name == self.e:
                out.append(self.e_image if a.exp == 1 else car.inv(self.e_image))
            else:
                out.append(a)
        return car.normalize(out)

    identity = FPElement()

    def mul(self, a, b):
        return self.carrier.normalize([a, b])

    def inv(self, a):
        return self.carrier.inv(a)


class KernelCase:
    def __init__(self, kd: KernelData):
        self.kd = kd

    identity = IDENTITY

    def embed(self, atoms) -> GBarElement:
        return embed_G(self.kd, atoms)

    def mul(self, a, b):
        return gbar_mul(self.kd, a, b)

    def inv(self, a):
        return gbar_inv(self.kd, a)


@dataclass(frozen=True)
class NormalForm:
    """Alternating syllables of ``G' * Psi``: ``('G', element)`` and ``('F', Word)``."""

    syllables: tuple

    @property
    def is_identity(self) -> bool:
        return not self.syllables


class WordProblem:
    def __init__(self, P: RelativePresentation, max_level: int = DEFAULT_MAX_LEVEL):
        self.P = P
        P1, _ = restrict_alphabet(P)
        self.core_presentation = P1
        self.free_letters = tuple(x for x in P.alphabet if x not in P1.alphabet)
        self.strong: StrongResult = to_strong(P1)
        Ps = self.strong.presentation
        ext = extremes(Ps, self.strong.e)
        self.trivial = ext.trivial
        if ext.trivial:
            self.kernel = None
            self.solver = TrivialCase(Ps, self.strong.e)
        else:
            self.kernel = KernelData(Ps, self.strong.e, max_level=max_level)
            self.solver = KernelCase(self.kernel)

    def _core(self, atoms) -> object:
        img = apply_hom(self.strong.pair.mu, atoms)
        return self.solver.embed(img.atoms())

    def normal_form(self, word) -> NormalForm:
        atoms = _atoms(word, self.P)
        free = set(self.free_letters)
        runs: list = []  # ("G", atoms) / ("F", atoms)
        for a in atoms:
            kind = "F" if isinstance(a, SignedLetter) and a.name in free else "G"
            if runs and runs[-1][0] == kind:
                runs[-1][1].append(a)
            else:
                runs.append((kind, [a]))
        stack: list = []
        for kind, items in runs:
            val = self._core(items) if kind == "G" else free_reduce(items)
            self._push(stack, kind, val)
        return NormalForm(tuple(stack))

    def _push(self, stack: list, kind: str, val) -> None:
        if kind == "G":
            if val == self.solver.identity:
                return
            if stack and stack[-1][0] == "G":
                merged = self.solver.mul(stack[-1][1], val)
                stack.pop()
                if merged != self.solver.identity:
                    stack.append(("G", merged))
                return
            stack.append(("G", val))
        else:
            if not val:
                return
            if stack and stack[-1][0] == "F":
                merged = free_reduce(tuple(stack[-1][1]) + tuple(val))
                stack.pop()
                if merged:
                    self._push(stack, "F", merged)
                return
            stack.append(("F", Word(val)))

    def equal(self, w1, w2) -> bool:
        """Whether ``w1 = w2`` in ``G``, decided as triviality of ``w1 w2^-1``."""
        a1, a2 = _atoms(w1, self.P), _atoms(w2, self.P)
        return self.is_trivial(a1 + _inverse_atoms(a2, self.P.group))

    def is_trivial(self, word) -> bool:
        """Whether ``word`` is trivial in ``G``.

        Agrees with comparing :meth:`normal_form` against the identity, but each
        core syllable is first conjugated by a power of ``f`` that centres its
        ``e``-levels on the window, which keeps the images short.
        """
        atoms = _atoms(word, self.P)
        free = set(self.free_letters)
        stack: list = []  # ("G", atoms) / ("F", Word), alternating and nontrivial
        runs: list = []
        for a in atoms:
            kind = "F" if isinstance(a, SignedLetter) and a.name in free else "G"
            if runs and runs[-1][0] == kind:
                runs[-1][1].append(a)
            else:
                runs.append((kind, [a]))
        for kind, items in runs:
            self._push_lazy(stack, kind, list(items))
        return not stack

    def _push_lazy(self, stack: list, kind: str, items: list) -> None:
        if kind == "G":
            if stack and stack[-1][0] == "G":
                items = stack.pop()[1] + items
            if not self._core_trivial(items):
                stack.append(("G", items))
            return
        if stack and stack[-1][0] == "F":
            items = list(stack.pop()[1]) + items
        w = free_reduce(items)
        if w:
            stack.append(("F", w))

    def _core_trivial(self, atoms: list) -> bool:
        img = apply_hom(self.strong.pair.mu, atoms).atoms()
        if sum(a.exp for a in img if isinstance(a, SignedLetter)) != 0:
            return False  # nonzero exponent sum: nontrivial image in Z
        if self.kernel is None:
            return self.solver.embed(img) == self.solver.identity
        kd = self.kernel
        levels = needed_levels(kd, img)
        if levels:
            lo, hi = min(levels), max(levels)
            mid = (kd.m + kd.M) // 2  # a window level
            c = mid - (lo + hi) // 2
            f = kd.f
            conj = [SignedLetter(f, 1 if c > 0 else -1)] * abs(c)
            img = conj + img + [s.inverse() for s in reversed(conj)]
        return embed_G(kd, img) == IDENTITY

    def retract(self, g: GBarElement) -> list:
        """A word in the original letters for an element of the core ``G-bar``."""
        if self.kernel is None:
            raise ValueError("no G-bar in the trivial case")
        w = retract_Gbar(self.kernel, g)
        return apply_hom(self.strong.pair.rho, w).atoms()


def _inverse_atoms(atoms: list, group) -> list:
    return [a.inverse() if isinstance(a, SignedLetter) else Coeff(group.inv(a.value)) for a in reversed(atoms)]


def _atoms(word, P: RelativePresentation) -> list:
    if isinstance(word, FPElement):
        return word.atoms()
    if isinstance(word, str):
        return list(Word.parse(word))
    out = list(word)
    for a in out:
        if isinstance(a, SignedLetter):
            if a.name not in P.alphabet:
                raise KeyError(f"letter {a.name!r} is not in the alphabet")
        elif isinstance(a, Coeff):
            if not P.group.contains(a.value):
                raise ValueError(f"{a.value!r} is not an element of the coefficient group")
        else:
            raise TypeError(f"cannot read {a!r} as a word atom")
    return out
