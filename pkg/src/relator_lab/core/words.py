"""Letters, signed letters and free-group words.

Letter names are usually strings, but any hashable key works: the kernel
construction reuses these types for free bases whose generators are tagged
tuples such as ``('e', 3)``.
"""

from __future__ import annotations

import re
from typing import Hashable, Iterable, NamedTuple


class SignedLetter(NamedTuple):
    name: Hashable
    exp: int

    def inverse(self) -> SignedLetter:
        return SignedLetter(self.name, -self.exp)

    def __str__(self) -> str:
        base = format_key(self.name)
        return base if self.exp == 1 else f"{base}^-1"


class Coeff(NamedTuple):
    """A coefficient-group element sitting inside a mixed sequence."""

    value: Hashable


def letter(name: Hashable, exp: int = 1) -> SignedLetter:
    if exp not in (1, -1):
        raise ValueError(f"exponent must be +1 or -1, got {exp!r}")
    return SignedLetter(name, exp)


def format_key(key: Hashable) -> str:
    if isinstance(key, str):
        return key
    if isinstance(key, tuple) and key:
        tag = key[0]
        if tag == "s":
            return "s"
        if tag == "e":
            return f"({key[1]},{format_key(key[2]) if len(key) > 2 else 'e'})"
        if tag == "x":
            return format_key(key[1])
        if tag == "k":  # a levelled letter (n, x) of the kernel presentation
            return f"({key[1]},{format_key(key[2])})"
    return repr(key)


class Word(tuple):
    """An immutable sequence of :class:`SignedLetter`; not necessarily reduced."""

    __slots__ = ()

    def __new__(cls, syllables: Iterable[SignedLetter] = ()):
        items = []
        for s in syllables:
            if not isinstance(s, SignedLetter):
                s = letter(*s)
            elif s.exp not in (1, -1):
                raise ValueError(f"exponent must be +1 or -1 in {s!r}")
            items.append(s)
        return super().__new__(cls, items)

    def inverse(self) -> Word:
        return Word(s.inverse() for s in reversed(self))

    def __add__(self, other) -> Word:
        return Word(tuple(self) + tuple(other))

    def __mul__(self, n: int) -> Word:
        return Word(tuple(self) * n)

    def __getitem__(self, item):
        got = tuple.__getitem__(self, item)
        return Word(got) if isinstance(item, slice) else got

    def letters(self) -> tuple:
        """Distinct letter names in order of first occurrence."""
        return tuple(dict.fromkeys(s.name for s in self))

    def exponent_sum(self, name: Hashable) -> int:
        return sum(s.exp for s in self if s.name == name)

    def is_reduced(self) -> bool:
        return all(a.name != b.name or a.exp == b.exp for a, b in zip(self, self[1:]))

    def is_cyclically_reduced(self) -> bool:
        if not self.is_reduced():
            return False
        return len(self) < 2 or self[0] != self[-1].inverse()

    def rotate(self, i: int) -> Word:
        if not self:
            return self
        i %= len(self)
        return Word(tuple(self)[i:] + tuple(self)[:i])

    def __str__(self) -> str:
        return " ".join(str(s) for s in self) if self else "1"

    def __repr__(self) -> str:
        return f"Word({str(self)!r})"

    @classmethod
    def parse(cls, text: str) -> Word:
        """Parse ``"x y^-1 x^2"``; ``1`` or the empty string is the empty word."""
        out: list[SignedLetter] = []
        for tok in text.split():
            if tok == "1":
                continue
            m = _TOKEN.fullmatch(tok)
            if not m:
                raise ValueError(f"bad word token {tok!r}")
            name, power = m.group(1), int(m.group(2) or 1)
            sign = 1 if power > 0 else -1
            out.extend([SignedLetter(name, sign)] * abs(power))
        return cls(out)


_TOKEN = re.compile(r"([A-Za-z][A-Za-z0-9_']*)(?:\^(-?\d+))?")


def free_reduce(word: Iterable[SignedLetter]) -> Word:
    """Freely reduce by cancelling adjacent ``x x^-1`` pairs until none remain."""
    stack: list[SignedLetter] = []
    for s in word:
        if stack and stack[-1].name == s.name and stack[-1].exp == -s.exp:
            stack.pop()
        else:
            stack.append(s)
    return Word(stack)


def cyclic_reduce(word: Iterable[SignedLetter]) -> Word:
    w = list(free_reduce(word))
    i, j = 0, len(w) - 1
    while i < j and w[i].name == w[j].name and w[i].exp == -w[j].exp:
        i += 1
        j -= 1
    return Word(w[i : j + 1])
