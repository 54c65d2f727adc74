"""Relative relators ``x1^e1 h1 x2^e2 h2 ... xr^er hr`` and presentations."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Iterable, Sequence

from .groups import CoefficientGroup
from .words import Coeff, SignedLetter, Word, format_key


@dataclass(frozen=True)
class RelativeRelator:
    """Terms ``(letter, coefficient)``; coefficient slots may hold the identity."""

    terms: tuple[tuple[SignedLetter, Hashable], ...]

    def __post_init__(self):
        if not self.terms:
            raise ValueError("a relative relator needs at least one letter (r >= 1)")
        for s, _ in self.terms:
            if not isinstance(s, SignedLetter) or s.exp not in (1, -1):
                raise ValueError(f"bad term letter {s!r}")

    @property
    def length(self) -> int:
        return len(self.terms)

    def skeleton(self) -> Word:
        return Word(s for s, _ in self.terms)

    def atoms(self) -> list:
        out: list = []
        for s, h in self.terms:
            out.append(s)
            out.append(Coeff(h))
        return out

    def letters(self) -> tuple:
        return self.skeleton().letters()

    def coefficients(self) -> tuple:
        return tuple(h for _, h in self.terms)

    def rotate(self, i: int) -> RelativeRelator:
        i %= len(self.terms)
        return RelativeRelator(self.terms[i:] + self.terms[:i])

    def inverse(self, group: CoefficientGroup) -> RelativeRelator:
        """``R^-1`` rotated to begin with a letter (a cyclic conjugate by ``h_r``)."""
        atoms = []
        for a in reversed(self.atoms()):
            atoms.append(a.inverse() if isinstance(a, SignedLetter) else Coeff(group.inv(a.value)))
        return from_atoms(atoms, group)

    def rename(self, mapping: dict) -> RelativeRelator:
        return RelativeRelator(
            tuple((SignedLetter(mapping.get(s.name, s.name), s.exp), h) for s, h in self.terms)
        )

    def format(self, group: CoefficientGroup) -> str:
        parts = []
        for s, h in self.terms:
            parts.append(str(s))
            if not group.is_identity(h):
                parts.append("{" + group.format_element(h) + "}")
        return " ".join(parts)


def from_atoms(atoms: Iterable, group: CoefficientGroup) -> RelativeRelator:
    """Pack a mixed sequence into relator form.

    Adjacent coefficients are multiplied in ``H``. Coefficients preceding the
    first letter are moved to the final slot, which replaces the relator by a
    cyclic conjugate; both generate the same normal closure.
    """
    lead = group.identity
    terms: list[list] = []
    for a in atoms:
        if isinstance(a, Coeff):
            if terms:
                terms[-1][1] = group.mul(terms[-1][1], a.value)
            else:
                lead = group.mul(lead, a.value)
        elif isinstance(a, SignedLetter):
            terms.append([a, group.identity])
        else:
            raise TypeError(f"unexpected relator atom {a!r}")
    if not terms:
        raise ValueError("relator has no letters")
    terms[-1][1] = group.mul(terms[-1][1], lead)
    return RelativeRelator(tuple((s, h) for s, h in terms))


def relator(spec: Sequence, group: CoefficientGroup | None = None) -> RelativeRelator:
    """Convenience builder from ``[('x', 1), h, ('y', -1), ...]``-style lists.

    Bare strings are letters with exponent ``+1``; ``'x^-1'`` inverts; tuples
    ``(name, exp)`` are letters; anything wrapped in :class:`Coeff` is a coefficient.
    """
    from .groups import TrivialGroup

    group = group or TrivialGroup()
    atoms = []
    for item in spec:
        if isinstance(item, Coeff):
            atoms.append(item)
        elif isinstance(item, SignedLetter):
            atoms.append(item)
        elif isinstance(item, str):
            atoms.extend(Word.parse(item))
        elif isinstance(item, tuple) and len(item) == 2 and item[1] in (1, -1):
            atoms.append(SignedLetter(*item))
        else:
            raise TypeError(f"cannot interpret {item!r}")
    return from_atoms(atoms, group)


@dataclass(frozen=True)
class RelativePresentation:
    alphabet: tuple[Hashable, ...]
    group: CoefficientGroup
    relators: tuple[RelativeRelator, ...]

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(self, "relators", tuple(self.relators))
        if len(set(self.alphabet)) != len(self.alphabet):
            raise ValueError("alphabet letters must be distinct")
        if not self.relators:
            raise ValueError("a relative presentation needs at least one relator")
        known = set(self.alphabet)
        for R in self.relators:
            for s, h in R.terms:
                if s.name not in known:
                    raise ValueError(f"letter {format_key(s.name)} is not in the alphabet")
                if not self.group.contains(h):
                    raise ValueError(f"coefficient {h!r} is not an element of {self.group.describe()}")

    @property
    def relator(self) -> RelativeRelator:
        if len(self.relators) != 1:
            raise ValueError("presentation is not one-relator")
        return self.relators[0]

    def with_relator(self, R: RelativeRelator, alphabet=None) -> RelativePresentation:
        return RelativePresentation(alphabet or self.alphabet, self.group, (R,))

    def format(self) -> str:
        rels = "; ".join(R.format(self.group) for R in self.relators)
        letters = ", ".join(format_key(x) for x in self.alphabet)
        return f"<{letters}, {self.group.describe() if _printable(self.group) else 'H'}; {rels}>"


def _printable(group) -> bool:
    try:
        group.describe()
        return True
    except ValueError:
        return False


def substitute(S: RelativeRelator, z: Hashable, R: RelativeRelator, group: CoefficientGroup) -> RelativeRelator:
    """Replace every ``z^{±1}`` in ``S`` by ``R^{±1}``, carrying coefficients along."""
    s_letters = set(S.letters())
    if z not in s_letters:
        raise ValueError(f"substitution variable {format_key(z)} does not occur in S")
    clash = (s_letters - {z}) & set(R.letters())
    if clash:
        names = ", ".join(sorted(format_key(c) for c in clash))
        raise ValueError(f"alphabet collision between S and R: {names}")
    if z in R.letters():
        raise ValueError(f"substitution variable {format_key(z)} occurs in R")
    fwd = R.atoms()
    back = []
    for a in reversed(fwd):
        back.append(a.inverse() if isinstance(a, SignedLetter) else Coeff(group.inv(a.value)))
    atoms: list = []
    for a in S.atoms():
        if isinstance(a, SignedLetter) and a.name == z:
            atoms.extend(fwd if a.exp == 1 else back)
        else:
            atoms.append(a)
    return from_atoms(atoms, group)


def power(R: RelativeRelator, n: int) -> RelativeRelator:
    if n < 1:
        raise ValueError("power exponent must be >= 1")
    return RelativeRelator(R.terms * n)


def restrict_alphabet(P: RelativePresentation) -> tuple[RelativePresentation, int]:
    """Drop letters that occur in no relator; return the free rank removed."""
    used = set()
    for R in P.relators:
        used.update(R.letters())
    alphabet = tuple(x for x in P.alphabet if x in used)
    return RelativePresentation(alphabet, P.group, P.relators), len(P.alphabet) - len(alphabet)
