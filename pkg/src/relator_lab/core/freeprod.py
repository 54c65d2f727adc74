"""Normal forms in ``H * F`` with ``F`` free on an arbitrary hashable basis."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Iterable, Sequence, Union

from .groups import CoefficientGroup
from .words import Coeff, SignedLetter, Word, format_key

Atom = Union[SignedLetter, Coeff]


@dataclass(frozen=True)
class FPElement:
    """Alternating syllables: :class:`Coeff` (never the identity) and nonempty
    reduced :class:`Word` values. The empty tuple is the identity."""

    syllables: tuple = ()

    def __bool__(self) -> bool:
        return bool(self.syllables)

    def atoms(self) -> list[Atom]:
        out: list[Atom] = []
        for syl in self.syllables:
            if isinstance(syl, Coeff):
                out.append(syl)
            else:
                out.extend(syl)
        return out

    def free_length(self) -> int:
        return sum(len(s) for s in self.syllables if not isinstance(s, Coeff))

    def letters(self) -> set:
        return {a.name for s in self.syllables if not isinstance(s, Coeff) for a in s}


class FreeProduct:
    """The carrier ``H * F``. ``basis`` is optional; when given, letters are checked."""

    def __init__(self, group: CoefficientGroup, basis: Iterable[Hashable] | None = None):
        self.group = group
        self.basis = None if basis is None else frozenset(basis)

    identity = FPElement()

    def normalize(self, raw: Iterable) -> FPElement:
        """Reduce a mixed sequence of letters and coefficients to normal form.

        Accepts :class:`SignedLetter`, :class:`Coeff`, :class:`Word` and
        :class:`FPElement` items (the latter two are spliced in).
        """
        H = self.group
        stack: list = []  # entries: Coeff or list[SignedLetter]
        for atom in _flatten(raw):
            if isinstance(atom, Coeff):
                h = atom.value
                if H.is_identity(h):
                    continue
                if stack and isinstance(stack[-1], Coeff):
                    c = H.mul(stack[-1].value, h)
                    if H.is_identity(c):
                        stack.pop()
                    else:
                        stack[-1] = Coeff(c)
                else:
                    stack.append(Coeff(h))
            else:
                if self.basis is not None and atom.name not in self.basis:
                    raise KeyError(f"letter {format_key(atom.name)} not in basis")
                if stack and not isinstance(stack[-1], Coeff):
                    top = stack[-1]
                    last = top[-1]
                    if last.name == atom.name and last.exp == -atom.exp:
                        top.pop()
                        if not top:
                            stack.pop()
                    else:
                        top.append(atom)
                else:
                    stack.append([atom])
        return FPElement(tuple(s if isinstance(s, Coeff) else Word(s) for s in stack))

    def mul(self, *elements) -> FPElement:
        return self.normalize(elements)

    def inv(self, a: FPElement) -> FPElement:
        H = self.group
        out = []
        for syl in reversed(a.syllables):
            out.append(Coeff(H.inv(syl.value)) if isinstance(syl, Coeff) else syl.inverse())
        return FPElement(tuple(out))

    def power(self, a: FPElement, n: int) -> FPElement:
        if n < 0:
            a, n = self.inv(a), -n
        return self.normalize([a] * n)

    def conj(self, g: FPElement, a: FPElement) -> FPElement:
        """``g a g^-1``."""
        return self.normalize([g, a, self.inv(g)])

    def letter(self, name: Hashable, exp: int = 1) -> FPElement:
        return FPElement((Word([SignedLetter(name, exp)]),))

    def coeff(self, h) -> FPElement:
        return self.identity if self.group.is_identity(h) else FPElement((Coeff(h),))

    def cyclic_conjugates(self, a: FPElement) -> list[FPElement]:
        atoms = a.atoms()
        out = []
        for i in range(max(1, len(atoms))):
            out.append(self.normalize(atoms[i:] + atoms[:i]))
        return list(dict.fromkeys(out))

    def format(self, a: FPElement) -> str:
        if not a.syllables:
            return "1"
        parts = []
        for syl in a.syllables:
            if isinstance(syl, Coeff):
                parts.append("{" + self.group.format_element(syl.value) + "}")
            else:
                parts.append(_format_word(syl))
        return " ".join(parts)


def _format_word(w: Sequence[SignedLetter]) -> str:
    # collapse runs into powers for readability: s s s -> s^3
    out = []
    i = 0
    while i < len(w):
        j = i
        while j < len(w) and w[j] == w[i]:
            j += 1
        n = (j - i) * w[i].exp
        base = format_key(w[i].name)
        out.append(base if n == 1 else f"{base}^{n}")
        i = j
    return " ".join(out)


def _flatten(raw: Iterable):
    for item in raw:
        if isinstance(item, FPElement):
            yield from item.atoms()
        elif isinstance(item, Word):
            yield from item
        elif isinstance(item, (SignedLetter, Coeff)):
            yield item
        else:
            raise TypeError(f"cannot place {item!r} in a free product word")


def fp_normalize(raw: Iterable, group: CoefficientGroup, basis=None) -> FPElement:
    return FreeProduct(group, basis).normalize(raw)
