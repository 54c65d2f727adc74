"""Finite-quotient search and the conjugacy-witness transfer.

Homomorphisms ``G -> S_d`` are found by backtracking over letter images in
the symmetric group, combined with homomorphisms ``tau: H -> S_d``. The last
letter in the enumeration order is handled in bulk: for a fixed assignment of
the other letters, every candidate image is tested at once through the
multiplication table of ``S_d``. Negative results mean "none within bound"
and nothing more.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Hashable, Iterable, Iterator, Sequence

import numpy as np

from .core.groups import CoefficientGroup, CyclicGroup, FreeGroup, compose, format_cycles, perm_inverse
from .core.homs import apply_hom
from .core.relators import RelativePresentation
from .core.words import Coeff, SignedLetter, Word, format_key
from .embed import RetractionPair

DEFAULT_DEGREE_BOUND = 5
DEFAULT_NODE_BUDGET = 5_000_000

Perm = tuple


class QuotientError(ValueError):
    pass


class CatalogRequired(QuotientError):
    """An infinite coefficient group needs a user-supplied catalog of finite images."""


class OracleRequired(QuotientError):
    pass


# -- symmetric groups --------------------------------------------------------


class SymmetricGroup:
    """``S_d`` with elements in lexicographic order and a dense product table."""

    def __init__(self, degree: int):
        self.degree = degree
        self.elements: list[Perm] = list(itertools.permutations(range(degree)))
        self.index = {p: i for i, p in enumerate(self.elements)}
        n = len(self.elements)
        table = np.empty((n, n), dtype=np.int32)
        for i, p in enumerate(self.elements):
            for j, q in enumerate(self.elements):
                table[i, j] = self.index[compose(p, q)]
        self.table = table
        self.inv = np.array([self.index[perm_inverse(p)] for p in self.elements], dtype=np.int32)
        self.identity = self.index[tuple(range(degree))]
        self.orders = np.array([_order(p) for p in self.elements], dtype=np.int32)
        # one representative per cycle type: consecutive cycles, longest first
        self.class_reps = sorted(self.index[_cycle_type_rep(t, degree)] for t in _partitions(degree))

    def __len__(self) -> int:
        return len(self.elements)

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def embed(self, p: Perm) -> int:
        """Index of ``p`` (of degree at most ``self.degree``, padded with fixed points)."""
        return self.index[tuple(p) + tuple(range(len(p), self.degree))]


@lru_cache(maxsize=None)
def symmetric_group(degree: int) -> SymmetricGroup:
    if degree < 1:
        raise QuotientError("degree must be at least 1")
    return SymmetricGroup(degree)


def _order(p: Perm) -> int:
    k, q, ident = 1, tuple(p), tuple(range(len(p)))
    while q != ident:
        q = compose(q, p)
        k += 1
    return k


def _partitions(n: int, largest: int | None = None) -> Iterator[tuple[int, ...]]:
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for k in range(min(n, largest), 0, -1):
        for rest in _partitions(n - k, k):
            yield (k,) + rest


def _cycle_type_rep(parts: Sequence[int], degree: int) -> Perm:
    img = list(range(degree))
    at = 0
    for k in parts:
        for i in range(k):
            img[at + i] = at + (i + 1) % k
        at += k
    return tuple(img)


# -- coefficient homomorphisms -----------------------------------------------


@dataclass(frozen=True)
class CoefficientHom:
    """``tau: H -> S_degree``. ``image`` maps an element of ``H`` to a permutation."""

    degree: int
    image: Callable[[Hashable], Perm] = field(compare=False)
    label: str = ""


def _element_words(H: CoefficientGroup) -> dict:
    """Each element of a finite ``H`` as a word in ``H.generators()``, by BFS."""
    gens = H.generators()
    words = {H.identity: ()}
    frontier = [H.identity]
    while frontier:
        nxt = []
        for a in frontier:
            for k, g in enumerate(gens):
                b = H.mul(a, g)
                if b not in words:
                    words[b] = words[a] + (k,)
                    nxt.append(b)
        frontier = nxt
    return words


def finite_catalog(H: CoefficientGroup, degree: int) -> list[CoefficientHom]:
    """All homomorphisms from a finite ``H`` to ``S_degree``, in a fixed order."""
    if not H.is_finite:
        raise CatalogRequired(f"{H.describe()} is infinite: supply a catalog of finite images")
    Sd = symmetric_group(degree)
    gens = H.generators()
    words = _element_words(H)
    elems = list(words)
    gen_orders = []
    for g in gens:
        k, x = 1, g
        while not H.is_identity(x):
            x = H.mul(x, g)
            k += 1
        gen_orders.append(k)
    choices = [[i for i in range(len(Sd)) if k % int(Sd.orders[i]) == 0] for k in gen_orders]
    out = []
    for combo in itertools.product(*choices):
        img = {}
        for a in elems:
            cur = Sd.identity
            for k in words[a]:
                cur = Sd.mul(cur, combo[k])
            img[a] = cur
        if all(img[H.mul(a, g)] == Sd.mul(img[a], combo[k]) for a in elems for k, g in enumerate(gens)):
            perms = {a: Sd.elements[i] for a, i in img.items()}
            label = ", ".join(f"{H.format_element(g)}->{format_cycles(Sd.elements[c])}" for g, c in zip(gens, combo))
            out.append(CoefficientHom(degree, perms.__getitem__, label or "trivial"))
    return out


def free_catalog(H: CoefficientGroup, degree: int) -> list[CoefficientHom]:
    """Every homomorphism from ``Z`` or ``free(k)`` to ``S_degree``: any choice of
    generator images. Offered as an explicit catalog for infinite ``H``."""
    Sd = symmetric_group(degree)
    if isinstance(H, CyclicGroup) and H.n == 0:
        rank = 1
    elif isinstance(H, FreeGroup):
        rank = H.rank
    else:
        raise QuotientError(f"no generator-image catalog for {H.describe()}")
    out = []
    for combo in itertools.product(Sd.elements, repeat=rank):
        out.append(CoefficientHom(degree, _free_image(H, combo), ", ".join(map(format_cycles, combo)) or "trivial"))
    return out


def _free_image(H, combo: tuple) -> Callable:
    degree = len(combo[0]) if combo else 0
    inverses = [perm_inverse(p) for p in combo]

    def image(h) -> Perm:
        cur = tuple(range(degree))
        pieces = [(1, 1 if h >= 0 else -1)] * abs(h) if isinstance(H, CyclicGroup) else h
        for i, e in pieces:
            cur = compose(cur, combo[i - 1] if e == 1 else inverses[i - 1])
        return cur

    return image


def coefficient_homs(H: CoefficientGroup, degree: int, catalog: Iterable[CoefficientHom] | None) -> list[CoefficientHom]:
    if catalog is not None:
        return [c for c in catalog if c.degree <= degree]
    if H.is_finite:
        return finite_catalog(H, degree)
    raise CatalogRequired(f"{H.describe()} is infinite: supply a catalog of finite images")


# -- enumeration -------------------------------------------------------------


@dataclass(frozen=True)
class QuotientHom:
    degree: int
    letters: dict  # letter -> permutation
    tau: CoefficientHom

    def image(self, atoms: Iterable) -> Perm:
        cur = tuple(range(self.degree))
        for a in atoms:
            if isinstance(a, Coeff):
                p = _pad(self.tau.image(a.value), self.degree)
            else:
                p = self.letters[a.name]
                if a.exp == -1:
                    p = perm_inverse(p)
            cur = compose(cur, p)
        return cur


def _pad(p: Perm, degree: int) -> Perm:
    return tuple(p) + tuple(range(len(p), degree))


@dataclass
class EnumerationStats:
    nodes: int = 0
    partial: bool = False
    degree_reached: int = 0


def _compile(atoms, letter_pos: dict, tau_idx: Callable) -> list:
    """Tokens ``('c', index)`` for coefficients and ``('x', pos, exp)`` for letters."""
    out = []
    for a in atoms:
        if isinstance(a, Coeff):
            out.append(("c", tau_idx(a.value)))
        else:
            out.append(("x", letter_pos[a.name], a.exp))
    return out


def _eval_bulk(Sd: SymmetricGroup, tokens: list, fixed: list, last: int, cand: np.ndarray) -> np.ndarray:
    """Image of a compiled word for every candidate image of letter ``last``."""
    cur = np.full(len(cand), Sd.identity, dtype=np.int32)
    const = Sd.identity
    table = Sd.table
    cand_inv = Sd.inv[cand]
    for tok in tokens:
        if tok[0] == "c":
            const = table[const, tok[1]]
        elif tok[1] != last:
            const = table[const, fixed[tok[1]] if tok[2] == 1 else Sd.inv[fixed[tok[1]]]]
        else:
            if const != Sd.identity:
                cur = table[cur, const]
                const = Sd.identity
            cur = table[cur, cand if tok[2] == 1 else cand_inv]
    if const != Sd.identity:
        cur = table[cur, const]
    return cur


def enumerate_homs(
    P: RelativePresentation,
    degree_bound: int = DEFAULT_DEGREE_BOUND,
    catalog: Iterable[CoefficientHom] | None = None,
    node_budget: int = DEFAULT_NODE_BUDGET,
    stats: EnumerationStats | None = None,
    query: Sequence | None = None,
) -> Iterator[QuotientHom]:
    """Homomorphisms ``G(P) -> S_d`` for ``d = 1..degree_bound``, cumulatively.

    Assignments are taken up to simultaneous conjugation: the first nontrivial
    generator image (coefficient generators first, then letters) is a cycle-type
    representative. With ``query`` given, only homomorphisms that do not kill it
    are produced. When the node budget runs out ``stats.partial`` is set and the
    stream stops.
    """
    stats = stats if stats is not None else EnumerationStats()
    catalog = list(catalog) if catalog is not None else None
    if catalog is None and not P.group.is_finite:
        raise CatalogRequired(f"{P.group.describe()} is infinite: supply a catalog of finite images")
    letters = list(P.alphabet)
    pos = {x: i for i, x in enumerate(letters)}
    rel_atoms = [R.atoms() for R in P.relators]
    H = P.group
    for d in range(1, degree_bound + 1):
        stats.degree_reached = d
        Sd = symmetric_group(d)
        reps = np.array(Sd.class_reps, dtype=np.int32)
        everything = np.arange(len(Sd), dtype=np.int32)
        for tau in coefficient_homs(H, d, catalog):
            tau_idx = lambda h, tau=tau: Sd.embed(tau.image(h))  # noqa: E731
            tau_trivial = all(Sd.embed(tau.image(g)) == Sd.identity for g in H.generators()) if H.is_finite else False
            if catalog is None and not tau_trivial:
                g0 = next(Sd.embed(tau.image(g)) for g in H.generators() if Sd.embed(tau.image(g)) != Sd.identity)
                if g0 not in Sd.class_reps:
                    continue  # a conjugate of this tau appears with a representative instead
            rel_tokens = [_compile(a, pos, tau_idx) for a in rel_atoms]
            q_tokens = _compile(query, pos, tau_idx) if query is not None else None
            if not letters:
                ok = all(_const_eval(Sd, t, []) == Sd.identity for t in rel_tokens)
                if ok and (q_tokens is None or _const_eval(Sd, q_tokens, []) != Sd.identity):
                    stats.nodes += 1
                    yield QuotientHom(d, {}, tau)
                continue
            last = len(letters) - 1
            for fixed in _heads(Sd, last, reps, everything, free_start=tau_trivial):
                if stats.nodes >= node_budget:
                    stats.partial = True
                    return
                all_trivial = tau_trivial and all(f == Sd.identity for f in fixed)
                cand = reps if all_trivial else everything
                stats.nodes += len(cand)
                mask = np.ones(len(cand), dtype=bool)
                for t in rel_tokens:
                    mask &= _eval_bulk(Sd, t, fixed, last, cand) == Sd.identity
                    if not mask.any():
                        break
                if q_tokens is not None and mask.any():
                    mask &= _eval_bulk(Sd, q_tokens, fixed, last, cand) != Sd.identity
                for i in np.flatnonzero(mask):
                    imgs = {x: Sd.elements[f] for x, f in zip(letters[:last], fixed)}
                    imgs[letters[last]] = Sd.elements[int(cand[i])]
                    yield QuotientHom(d, imgs, tau)


def _heads(Sd: SymmetricGroup, k: int, reps, everything, free_start: bool) -> Iterator[list]:
    """Images of the first ``k`` letters; while everything so far is trivial the
    next image ranges over cycle-type representatives only."""
    if k == 0:
        yield []
        return

    def rec(prefix: list, trivial: bool):
        if len(prefix) == k:
            yield list(prefix)
            return
        for c in (reps if trivial else everything):
            c = int(c)
            prefix.append(c)
            yield from rec(prefix, trivial and c == Sd.identity)
            prefix.pop()

    yield from rec([], free_start)


def _const_eval(Sd: SymmetricGroup, tokens, fixed) -> int:
    cur = Sd.identity
    for tok in tokens:
        if tok[0] == "c":
            cur = Sd.mul(cur, tok[1])
        else:
            f = fixed[tok[1]]
            cur = Sd.mul(cur, f if tok[2] == 1 else int(Sd.inv[f]))
    return cur


# -- separation --------------------------------------------------------------


@dataclass(frozen=True)
class FiniteQuotientWitness:
    target: str
    degree: int
    letters: dict
    tau: CoefficientHom
    coefficient_images: dict  # coefficients occurring in relators and query
    query_image: Perm
    checks: tuple[str, ...]

    def hom(self) -> QuotientHom:
        return QuotientHom(self.degree, self.letters, self.tau)

    def verify(self, P: RelativePresentation, query) -> bool:
        """Recompute every relator image and the query image with plain tuples."""
        h = self.hom()
        ident = tuple(range(self.degree))
        return all(h.image(R.atoms()) == ident for R in P.relators) and h.image(query) != ident

    def as_dict(self, group: CoefficientGroup) -> dict:
        return {
            "target": self.target,
            "letters": {format_key(x): format_cycles(p) for x, p in self.letters.items()},
            "tau": self.tau.label,
            "coefficients": {group.format_element(h): format_cycles(p) for h, p in self.coefficient_images.items()},
            "query_image": format_cycles(self.query_image),
            "checks": list(self.checks),
        }


@dataclass(frozen=True)
class SeparationResult:
    """``status`` is ``found``, ``none-within-bound``, ``trivial-in-G`` or ``partial``."""

    status: str
    witness: FiniteQuotientWitness | None
    degree_bound: int
    nodes: int
    precheck: str  # "nontrivial", "trivial", "asserted" or "unavailable: ..."

    @property
    def found(self) -> bool:
        return self.witness is not None


def _atoms(word, P: RelativePresentation) -> list:
    if isinstance(word, str):
        return list(Word.parse(word))
    out = list(word)
    for a in out:
        if isinstance(a, SignedLetter) and a.name not in P.alphabet:
            raise KeyError(f"letter {a.name!r} is not in the alphabet")
    return out


def _precheck(P: RelativePresentation, atoms: list) -> str:
    from .kernel import KernelError, WordProblem
    from .embed import EmbedError

    if len(P.relators) != 1:
        return "unavailable: more than one relator"
    try:
        trivial = WordProblem(P).is_trivial(atoms)
    except (EmbedError, KernelError, ValueError) as exc:
        return f"unavailable: {exc}"
    return "trivial" if trivial else "nontrivial"


def separate(
    P: RelativePresentation,
    word,
    degree_bound: int = DEFAULT_DEGREE_BOUND,
    catalog: Iterable[CoefficientHom] | None = None,
    node_budget: int = DEFAULT_NODE_BUDGET,
    assume_nontrivial: bool = False,
) -> SeparationResult:
    """First homomorphism to a finite symmetric group that does not kill ``word``.

    Unless ``assume_nontrivial`` is set, the word problem is consulted first and
    a word trivial in ``G`` is reported as such without searching.
    """
    atoms = _atoms(word, P)
    precheck = "asserted" if assume_nontrivial else _precheck(P, atoms)
    if precheck == "trivial":
        return SeparationResult("trivial-in-G", None, degree_bound, 0, precheck)
    stats = EnumerationStats()
    for h in enumerate_homs(P, degree_bound, catalog, node_budget, stats, query=atoms):
        coeffs = {}
        for a in [*atoms, *(x for R in P.relators for x in R.atoms())]:
            if isinstance(a, Coeff):
                if not P.group.is_identity(a.value):
                    coeffs[a.value] = _pad(h.tau.image(a.value), h.degree)
        checks = [f"{R.format(P.group)} -> ()" for R in P.relators]
        q = h.image(atoms)
        checks.append(f"query -> {format_cycles(q)}")
        w = FiniteQuotientWitness(f"S{h.degree}", h.degree, dict(h.letters), h.tau, coeffs, q, tuple(checks))
        if not w.verify(P, atoms):  # the bulk evaluation and plain tuples must agree
            raise QuotientError("internal error: witness failed re-verification")
        return SeparationResult("found", w, degree_bound, stats.nodes, precheck)
    status = "partial" if stats.partial else "none-within-bound"
    return SeparationResult(status, None, degree_bound, stats.nodes, precheck)


# -- conjugacy transfer ------------------------------------------------------


@dataclass(frozen=True)
class TransferResult:
    rho_b: tuple
    relation: str
    passed: bool


def transfer_conjugacy(
    pair: RetractionPair,
    b,
    c,
    d,
    i: int = 1,
    j: int = 1,
    oracle: Callable[[list, list], bool] | None = None,
) -> TransferResult:
    """Push a conjugator ``b`` of the big group through ``rho`` and check
    ``rho(b) c^i rho(b)^-1 = d^j`` in the small group with ``oracle``."""
    if oracle is None:
        raise OracleRequired("transfer_conjugacy needs an equality oracle for the small group")
    small = pair.small
    group = small.group
    rb = apply_hom(pair.rho, _atoms(b, pair.big)).atoms()
    cw, dw = _atoms(c, small), _atoms(d, small)
    lhs = rb + _power(cw, i, group) + _inverse(rb, group)
    rhs = _power(dw, j, group)
    passed = bool(oracle(lhs, rhs))
    rb_text = " ".join(str(a) if isinstance(a, SignedLetter) else "{" + group.format_element(a.value) + "}" for a in rb)
    return TransferResult(tuple(rb), f"rho(b) = {rb_text or '1'}; rho(b) c^{i} rho(b)^-1 = d^{j}", passed)


def _inverse(atoms: list, group) -> list:
    return [a.inverse() if isinstance(a, SignedLetter) else Coeff(group.inv(a.value)) for a in reversed(atoms)]


def _power(atoms: list, n: int, group) -> list:
    base = atoms if n >= 0 else _inverse(atoms, group)
    return list(base) * abs(n)
