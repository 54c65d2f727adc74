"""Coefficient groups: the group ``H`` adjoined to the free letters.

Elements are plain hashable values in a canonical form, so equality of
elements is ``==``. Each realization can parse and format element literals
used by the presentation language.
"""

from __future__ import annotations

import itertools
import random
import re
from abc import ABC, abstractmethod
from pathlib import Path
from typing import Hashable, Iterable, Sequence


class GroupError(ValueError):
    pass


class InfiniteGroupError(GroupError):
    pass


class CoefficientGroup(ABC):
    kind: str = "abstract"

    @property
    @abstractmethod
    def identity(self) -> Hashable: ...

    @abstractmethod
    def mul(self, a, b): ...

    @abstractmethod
    def inv(self, a): ...

    @abstractmethod
    def contains(self, a) -> bool: ...

    @abstractmethod
    def generators(self) -> tuple: ...

    @abstractmethod
    def parse_element(self, text: str): ...

    @abstractmethod
    def format_element(self, a) -> str: ...

    @abstractmethod
    def describe(self) -> str:
        """The group expression in the presentation language."""

    @property
    def order(self) -> int | None:
        return None

    @property
    def is_finite(self) -> bool:
        return self.order is not None

    def elements(self) -> list:
        raise InfiniteGroupError(f"{self.describe()} is infinite")

    def is_identity(self, a) -> bool:
        return a == self.identity

    def prod(self, items: Iterable) -> Hashable:
        out = self.identity
        for a in items:
            out = self.mul(out, a)
        return out

    def power(self, a, n: int):
        if n < 0:
            a, n = self.inv(a), -n
        out = self.identity
        for _ in range(n):
            out = self.mul(out, a)
        return out

    def probes(self, limit: int = 24) -> list:
        """A small deterministic sample of elements for spot checks."""
        if self.is_finite and self.order <= limit:
            return self.elements()
        gens = list(self.generators())
        out = [self.identity] + gens + [self.inv(g) for g in gens]
        for a, b in itertools.product(gens, repeat=2):
            out.append(self.mul(a, b))
        return list(dict.fromkeys(out))[:limit]

    def check_axioms(self, samples: int = 200, seed: int = 0) -> None:
        """Exact identity/inverse laws on probes; associativity spot-checked."""
        pts = self.elements() if self.is_finite and self.order <= 64 else self.probes()
        for a in pts:
            if self.mul(self.identity, a) != a or self.mul(a, self.identity) != a:
                raise GroupError(f"identity law fails at {self.format_element(a)}")
            if self.mul(a, self.inv(a)) != self.identity:
                raise GroupError(f"inverse law fails at {self.format_element(a)}")
        rng = random.Random(seed)
        for _ in range(samples):
            a, b, c = (rng.choice(pts) for _ in range(3))
            if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)):
                raise GroupError("associativity fails")

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.describe()}>"


class TrivialGroup(CoefficientGroup):
    kind = "trivial"

    @property
    def identity(self):
        return 0

    def mul(self, a, b):
        return 0

    def inv(self, a):
        return 0

    def contains(self, a):
        return a == 0

    def generators(self):
        return ()

    @property
    def order(self):
        return 1

    def elements(self):
        return [0]

    def parse_element(self, text):
        if text.strip() not in ("1", "0", ""):
            raise GroupError(f"trivial group has no element {text!r}")
        return 0

    def format_element(self, a):
        return "1"

    def describe(self):
        return "trivial"

    def __eq__(self, other):
        return isinstance(other, TrivialGroup)

    def __hash__(self):
        return hash("trivial")


class CyclicGroup(CoefficientGroup):
    """``Z(n)`` for ``n >= 1``; ``n == 0`` gives the infinite cyclic group ``Z``."""

    kind = "cyclic"

    def __init__(self, n: int = 0):
        if n < 0:
            raise GroupError("cyclic order must be nonnegative")
        self.n = n

    @property
    def identity(self):
        return 0

    def _norm(self, a):
        return a % self.n if self.n else a

    def mul(self, a, b):
        return self._norm(a + b)

    def inv(self, a):
        return self._norm(-a)

    def contains(self, a):
        return isinstance(a, int) and (self.n == 0 or 0 <= a < self.n)

    def generators(self):
        return () if self.n == 1 else (self._norm(1),)

    @property
    def order(self):
        return self.n or None

    def elements(self):
        if not self.n:
            return super().elements()
        return list(range(self.n))

    def parse_element(self, text):
        try:
            return self._norm(int(text.strip()))
        except ValueError:
            raise GroupError(f"expected an integer literal, got {text!r}") from None

    def format_element(self, a):
        return str(a)

    def describe(self):
        return f"Z({self.n})" if self.n else "Z"

    def __eq__(self, other):
        return isinstance(other, CyclicGroup) and other.n == self.n

    def __hash__(self):
        return hash(("cyclic", self.n))


class TableGroup(CoefficientGroup):
    """A finite group given by its multiplication table on ``0..n-1``."""

    kind = "table"

    def __init__(self, table: Sequence[Sequence[int]], path: str | None = None):
        n = len(table)
        rows = [tuple(int(v) for v in row) for row in table]
        if n == 0 or any(len(row) != n for row in rows):
            raise GroupError("multiplication table must be square and nonempty")
        full = set(range(n))
        for i, row in enumerate(rows):
            if set(row) != full:
                raise GroupError(f"row {i} is not a permutation of 0..{n - 1}")
        for j in range(n):
            if {rows[i][j] for i in range(n)} != full:
                raise GroupError(f"column {j} is not a permutation of 0..{n - 1}")
        ids = [i for i in range(n) if rows[i] == tuple(range(n))]
        if not ids or any(rows[j][ids[0]] != j for j in range(n)):
            raise GroupError("table has no two-sided identity")
        self.table = tuple(rows)
        self.path = path
        self._id = ids[0]
        self._inv = tuple(rows[a].index(self._id) for a in range(n))
        if n <= 40:
            for a, b, c in itertools.product(range(n), repeat=3):
                if rows[rows[a][b]][c] != rows[a][rows[b][c]]:
                    raise GroupError(f"table is not associative at ({a},{b},{c})")
        else:
            self.check_axioms()
        self._gens = self._greedy_generators()

    def _greedy_generators(self) -> tuple:
        gens: list[int] = []
        span = {self._id}
        for a in range(len(self.table)):
            if a in span:
                continue
            gens.append(a)
            span = self._closure(gens)
        return tuple(gens)

    def _closure(self, gens) -> set:
        seen = {self._id}
        frontier = [self._id]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = self.table[x][g]
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return seen

    @property
    def identity(self):
        return self._id

    def mul(self, a, b):
        return self.table[a][b]

    def inv(self, a):
        return self._inv[a]

    def contains(self, a):
        return isinstance(a, int) and 0 <= a < len(self.table)

    def generators(self):
        return self._gens

    @property
    def order(self):
        return len(self.table)

    def elements(self):
        return list(range(len(self.table)))

    def parse_element(self, text):
        try:
            a = int(text.strip())
        except ValueError:
            raise GroupError(f"expected an element index, got {text!r}") from None
        if not self.contains(a):
            raise GroupError(f"element index {a} out of range 0..{len(self.table) - 1}")
        return a

    def format_element(self, a):
        return str(a)

    def describe(self):
        if self.path is None:
            raise GroupError("table group without a source file cannot be printed")
        return f"table {self.path}"

    def __eq__(self, other):
        return isinstance(other, TableGroup) and other.table == self.table

    def __hash__(self):
        return hash(("table", self.table))

    @classmethod
    def from_file(cls, path: str | Path, display: str | None = None) -> TableGroup:
        lines = [
            ln.split("#", 1)[0].strip() for ln in Path(path).read_text().splitlines()
        ]
        lines = [ln for ln in lines if ln]
        if not lines or not re.fullmatch(r"order\s+\d+", lines[0]):
            raise GroupError(f"{path}: expected header line 'order n'")
        n = int(lines[0].split()[1])
        rows = [ln.replace(",", " ").split() for ln in lines[1:]]
        if len(rows) != n:
            raise GroupError(f"{path}: expected {n} rows, found {len(rows)}")
        return cls(rows, path=display if display is not None else str(path))


def parse_cycles(text: str, degree: int) -> tuple[int, ...]:
    """Cycle notation on points ``0..degree-1``: ``(0 1 2)(3 4)``; ``()`` is the identity."""
    img = list(range(degree))
    text = text.strip()
    if not re.fullmatch(r"(\(\s*(\d+[\s,]*)*\))+", text):
        raise GroupError(f"bad cycle notation {text!r}")
    for cyc in re.findall(r"\(([^)]*)\)", text):
        pts = [int(p) for p in cyc.replace(",", " ").split()]
        if len(set(pts)) != len(pts) or any(not 0 <= p < degree for p in pts):
            raise GroupError(f"bad cycle ({cyc}) for degree {degree}")
        perm = list(range(degree))
        for a, b in zip(pts, pts[1:] + pts[:1]):
            perm[a] = b
        # right-to-left composition matches the usual reading of cycle products
        img = [perm[i] for i in img]
    return tuple(img)


def format_cycles(p: Sequence[int]) -> str:
    seen = set()
    out = []
    for start in range(len(p)):
        if start in seen or p[start] == start:
            continue
        cyc = [start]
        seen.add(start)
        j = p[start]
        while j != start:
            cyc.append(j)
            seen.add(j)
            j = p[j]
        out.append("(" + " ".join(map(str, cyc)) + ")")
    return "".join(out) or "()"


def compose(p: Sequence[int], q: Sequence[int]) -> tuple[int, ...]:
    """``p`` then ``q`` (acting on the right): ``i -> q[p[i]]``."""
    return tuple(q[i] for i in p)


def perm_inverse(p: Sequence[int]) -> tuple[int, ...]:
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


class PermutationGroup(CoefficientGroup):
    """A finite group given by permutation images of its generators."""

    kind = "perm"

    def __init__(self, degree: int, gens: Sequence[Sequence[int]], limit: int = 50_000):
        self.degree = degree
        self._gens = tuple(tuple(g) for g in gens)
        for g in self._gens:
            if sorted(g) != list(range(degree)):
                raise GroupError(f"{g} is not a permutation of degree {degree}")
        ident = tuple(range(degree))
        seen = {ident: None}
        frontier = [ident]
        while frontier:
            nxt = []
            for x in frontier:
                for g in self._gens:
                    y = compose(x, g)
                    if y not in seen:
                        seen[y] = None
                        nxt.append(y)
                        if len(seen) > limit:
                            raise GroupError("permutation group too large to enumerate")
            frontier = nxt
        self._elements = sorted(seen)
        self._set = set(self._elements)

    @property
    def identity(self):
        return tuple(range(self.degree))

    def mul(self, a, b):
        return compose(a, b)

    def inv(self, a):
        return perm_inverse(a)

    def contains(self, a):
        return a in self._set

    def generators(self):
        return self._gens

    @property
    def order(self):
        return len(self._elements)

    def elements(self):
        return list(self._elements)

    def parse_element(self, text):
        p = parse_cycles(text, self.degree)
        if p not in self._set:
            raise GroupError(f"{text} is not in the group")
        return p

    def format_element(self, a):
        return format_cycles(a)

    def describe(self):
        return f"perm({self.degree}: " + ", ".join(format_cycles(g) for g in self._gens) + ")"

    def __eq__(self, other):
        return isinstance(other, PermutationGroup) and other._set == self._set

    def __hash__(self):
        return hash(("perm", self.degree, len(self._elements)))


class FreeGroup(CoefficientGroup):
    """Free group of rank ``k`` on ``g1..gk``; elements are reduced tuples of ``(i, ±1)``."""

    kind = "free"

    def __init__(self, rank: int):
        if rank < 0:
            raise GroupError("rank must be nonnegative")
        self.rank = rank

    @property
    def identity(self):
        return ()

    def mul(self, a, b):
        a = list(a)
        for s in b:
            if a and a[-1][0] == s[0] and a[-1][1] == -s[1]:
                a.pop()
            else:
                a.append(s)
        return tuple(a)

    def inv(self, a):
        return tuple((i, -e) for i, e in reversed(a))

    def contains(self, a):
        if not isinstance(a, tuple):
            return False
        if any(not (1 <= i <= self.rank and e in (1, -1)) for i, e in a):
            return False
        return all(x[0] != y[0] or x[1] == y[1] for x, y in zip(a, a[1:]))

    def generators(self):
        return tuple(((i, 1),) for i in range(1, self.rank + 1))

    @property
    def order(self):
        return 1 if self.rank == 0 else None

    def elements(self):
        if self.rank == 0:
            return [()]
        return super().elements()

    def parse_element(self, text):
        out = ()
        for tok in text.split():
            if tok == "1":
                continue
            m = re.fullmatch(r"g(\d+)(?:\^(-?\d+))?", tok)
            if not m or not 1 <= int(m.group(1)) <= self.rank:
                raise GroupError(f"bad free-group token {tok!r} (rank {self.rank})")
            i, p = int(m.group(1)), int(m.group(2) or 1)
            out = self.mul(out, (((i, 1 if p > 0 else -1),) * abs(p)))
        return out

    def format_element(self, a):
        if not a:
            return "1"
        return " ".join(f"g{i}" if e == 1 else f"g{i}^-1" for i, e in a)

    def describe(self):
        return f"free({self.rank})"

    def __eq__(self, other):
        return isinstance(other, FreeGroup) and other.rank == self.rank

    def __hash__(self):
        return hash(("free", self.rank))


class FreeProductGroup(CoefficientGroup):
    """``H1 * H2 * ...``; elements are alternating tuples of ``(factor, element)``."""

    kind = "product"

    def __init__(self, factors: Sequence[CoefficientGroup]):
        flat: list[CoefficientGroup] = []
        for f in factors:
            flat.extend(f.factors if isinstance(f, FreeProductGroup) else [f])
        if len(flat) < 2:
            raise GroupError("a free product needs at least two factors")
        self.factors = tuple(flat)

    @property
    def identity(self):
        return ()

    def _push(self, stack: list, idx: int, a) -> None:
        f = self.factors[idx]
        if f.is_identity(a):
            return
        if stack and stack[-1][0] == idx:
            c = f.mul(stack[-1][1], a)
            if f.is_identity(c):
                stack.pop()
            else:
                stack[-1] = (idx, c)
        else:
            stack.append((idx, a))

    def mul(self, a, b):
        stack = list(a)
        for idx, x in b:
            self._push(stack, idx, x)
        return tuple(stack)

    def inv(self, a):
        return tuple((i, self.factors[i].inv(x)) for i, x in reversed(a))

    def inject(self, idx: int, a):
        return () if self.factors[idx].is_identity(a) else ((idx, a),)

    def contains(self, a):
        if not isinstance(a, tuple):
            return False
        for j, syl in enumerate(a):
            if not (isinstance(syl, tuple) and len(syl) == 2):
                return False
            i, x = syl
            if not (0 <= i < len(self.factors)) or not self.factors[i].contains(x):
                return False
            if self.factors[i].is_identity(x) or (j and a[j - 1][0] == i):
                return False
        return True

    def generators(self):
        return tuple(((i, g),) for i, f in enumerate(self.factors) for g in f.generators())

    @property
    def order(self):
        nontrivial = [f for f in self.factors if f.order != 1]
        return 1 if not nontrivial else (nontrivial[0].order if len(nontrivial) == 1 else None)

    def elements(self):
        if self.order is None:
            return super().elements()
        out = [()]
        for i, f in enumerate(self.factors):
            if f.order != 1:
                out = [self.inject(i, x) for x in f.elements()]
        return out

    def parse_element(self, text):
        text = text.strip()
        if text in ("", "1"):
            return ()
        out = ()
        for piece in text.split("."):
            m = re.fullmatch(r"\s*(\d+)\s*:(.*)", piece)
            if not m:
                raise GroupError(f"free-product literal pieces look like 'i:literal', got {piece!r}")
            i = int(m.group(1)) - 1
            if not 0 <= i < len(self.factors):
                raise GroupError(f"factor index {i + 1} out of range")
            out = self.mul(out, self.inject(i, self.factors[i].parse_element(m.group(2))))
        return out

    def format_element(self, a):
        if not a:
            return "1"
        return " . ".join(f"{i + 1}:{self.factors[i].format_element(x)}" for i, x in a)

    def describe(self):
        return " * ".join(f.describe() for f in self.factors)

    def __eq__(self, other):
        return isinstance(other, FreeProductGroup) and other.factors == self.factors

    def __hash__(self):
        return hash(("product", self.factors))


def symmetric_group_table(n: int) -> TableGroup:
    """Multiplication table of ``S_n`` on lexicographically ordered permutations."""
    perms = sorted(itertools.permutations(range(n)))
    index = {p: i for i, p in enumerate(perms)}
    table = [[index[compose(p, q)] for q in perms] for p in perms]
    return TableGroup(table)
