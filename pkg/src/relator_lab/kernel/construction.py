"""Kernel of the exponent-sum map for a strong presentation under the constant weight.

Given ``<x, H; R>`` whose skeleton has a unique maximum and minimum under
``theta = 1`` with a letter ``e`` adjacent to both, the kernel ``K`` of
``x -> 1, h -> 0`` is presented on levelled letters ``(n, x)`` (``x != f``)
and copies ``H_n`` by the relators ``R_n``, obtained by lifting ``R`` to level
``n`` and collapsing the tree formed by the ``f``-edges. Adjoining a stable
letter ``s`` gives an HNN extension which is isomorphic to ``H * F0``, with
``F0`` free on ``x - {e, f}``, ``s`` and the window letters ``(i, e)`` for
``m+1 <= i <= M-1``.

Kernel words are tuples of :class:`SignedLetter` over keys ``('k', n, x)``
(the letter ``(n, x)``) and ``('s',)``, together with :class:`LevelledCoeff`
items ``(n, h)``. Elements of ``H * F0`` are :class:`FPElement` values over the
keys ``('x', x)``, ``('s',)`` and ``('e', i, e)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping, Sequence

from ..core.freeprod import FPElement, FreeProduct
from ..core.relators import RelativePresentation, RelativeRelator
from ..core.words import Coeff, SignedLetter, format_key
from ..cover import LevelledCoeff, LevelledEdge, lift
from ..weights.profile import MaxMinClass, WeightFunction, classify

S = ("s",)
DEFAULT_MAX_LEVEL = 64
DEFAULT_MAX_IMAGE = 250_000  # free length of a single (n, e) image


class KernelError(ValueError):
    pass


class KernelDepthError(KernelError):
    def __init__(self, level: int, lo: int, hi: int):
        super().__init__(f"level {level} is outside the supported range {lo}..{hi}; raise max_level")
        self.level = level


class KernelBudgetError(KernelError):
    def __init__(self, level: int, size: int, budget: int):
        super().__init__(
            f"image of ({level},e) has free length {size} > budget {budget}; raise max_image"
        )
        self.level = level


def kletter(n: int, x: Hashable, exp: int = 1) -> SignedLetter:
    return SignedLetter(("k", n, x), exp)


def stable(exp: int = 1) -> SignedLetter:
    return SignedLetter(S, exp)


def format_kword(items: Sequence, group) -> str:
    if not items:
        return "1"
    parts = []
    for it in items:
        if isinstance(it, LevelledCoeff):
            parts.append(f"({it.level},{group.format_element(it.value)})")
        else:
            parts.append(str(it))
    return " ".join(parts)


def kinverse(items: Sequence, group) -> tuple:
    out = []
    for it in reversed(items):
        out.append(it.inverse(group) if isinstance(it, LevelledCoeff) else it.inverse())
    return tuple(out)


def kshift(items: Sequence, k: int) -> tuple:
    """The shift automorphism applied ``k`` times: every level moves by ``k``."""
    out = []
    for it in items:
        if isinstance(it, LevelledCoeff):
            out.append(LevelledCoeff(it.level + k, it.value))
        elif it.name == S:
            out.append(it)
        else:
            _, n, x = it.name
            out.append(kletter(n + k, x, it.exp))
    return tuple(out)


@dataclass(frozen=True)
class Extremes:
    M: int
    m: int
    trivial: bool
    e: Hashable
    f: Hashable | None


def _check_strong(P: RelativePresentation, e: Hashable):
    W = P.relator.skeleton()
    rep = classify(W, WeightFunction.constant(P.alphabet))
    if rep.achieved != MaxMinClass.STRONG:
        raise KernelError("presentation is not strong unique-max-min under the constant weight")
    if e not in rep.maximum.letters or e not in rep.minimum.letters:
        raise KernelError(f"letter {format_key(e)} does not occur at both extremes")
    unused = set(P.alphabet) - set(W.letters())
    if unused:
        raise KernelError("restrict the alphabet to the letters occurring in the relator first")
    return rep


def choose_f(alphabet: Iterable[Hashable], e: Hashable) -> Hashable:
    """Lexicographically smallest letter other than ``e`` (by printed name)."""
    rest = [x for x in alphabet if x != e]
    if not rest:
        raise KernelError("need a letter other than e")
    return min(rest, key=lambda x: (format_key(x), repr(x)))


def extremes(P: RelativePresentation, e: Hashable) -> Extremes:
    """Extreme values of the profile at the input basepoint, and the choice of ``f``."""
    rep = _check_strong(P, e)
    trivial = rep.M - rep.m == 1
    return Extremes(rep.M, rep.m, trivial, e, choose_f(P.alphabet, e))


@dataclass(frozen=True)
class Normalization:
    inverted: bool
    rotation: int  # applied after inversion, in terms
    relator: RelativeRelator


def normalize(P: RelativePresentation, e: Hashable) -> Normalization:
    """Rotate (and if needed invert) ``R`` to begin with ``e`` climbing into the
    unique maximum, so that its lift from level 0 peaks at level 1."""
    H = P.group
    for inverted, R in ((False, P.relator), (True, P.relator.inverse(H))):
        for i in range(R.length):
            Q = R.rotate(i)
            s = Q.terms[0][0]
            if s != SignedLetter(e, 1):
                continue
            rep = classify(Q.skeleton(), WeightFunction.constant(P.alphabet))
            if rep.maximum.unique and rep.maximum.positions[0] == 1:
                return Normalization(inverted, i, Q)
    raise KernelError("could not bring the relator to normal position (not strong?)")


def collapse_items(path_items: Iterable, f: Hashable) -> tuple:
    """Delete tree edges ``(n, f)^{±1}`` and rewrite ``(i, x^-1)`` as ``(i-1, x)^-1``."""
    out = []
    for it in path_items:
        if isinstance(it, LevelledCoeff):
            out.append(it)
            continue
        assert isinstance(it, LevelledEdge)
        x, exp = it.letter.name, it.letter.exp
        if x == f:
            continue
        out.append(kletter(it.level if exp == 1 else it.level - 1, x, exp))
    return tuple(out)


@dataclass(frozen=True)
class CollapsedRelator:
    n: int
    items: tuple
    lead: SignedLetter
    alpha: tuple
    middle: SignedLetter
    beta: tuple


class KernelData:
    """The kernel construction for one strong presentation.

    ``alpha_patch`` replaces selected ``alpha_n`` segments inside the
    isomorphism (and only there); it exists for mutation tests.
    """

    def __init__(
        self,
        P: RelativePresentation,
        e: Hashable,
        f: Hashable | None = None,
        max_level: int = DEFAULT_MAX_LEVEL,
        alpha_patch: Mapping[int, Sequence] | None = None,
        max_image: int = DEFAULT_MAX_IMAGE,
    ):
        ext = extremes(P, e)
        if ext.trivial:
            raise KernelError("trivial case M - m = 1: use the free-product solver")
        self.P = P
        self.H = P.group
        self.e = e
        self.f = f if f is not None else ext.f
        if self.f == e or self.f not in P.alphabet:
            raise KernelError("f must be a letter of the alphabet other than e")
        self.max_level = max_level
        self.max_image = max_image
        self.alpha_patch = dict(alpha_patch or {})
        self.input_extremes = ext
        norm = normalize(P, e)
        self.normalization = norm
        self.R = norm.relator
        self._memo: dict = {}
        self._collapsed: dict = {}
        self.M = 1
        self.m = 1 - (ext.M - ext.m)
        self._decompose()
        self.others = tuple(x for x in P.alphabet if x not in (e, self.f))
        self.window = tuple(range(self.m + 1, self.M))
        self.carrier = FreeProduct(self.H)

    # -- decomposition of (0, R) ------------------------------------------------
    def _decompose(self):
        R, e, H = self.R, self.e, self.H
        terms = R.terms
        r = len(terms)
        rep = classify(R.skeleton(), WeightFunction.constant(self.P.alphabet))
        l = rep.minimum.positions[0]
        xl, xl1 = terms[l - 1][0], terms[l % r][0]
        if xl1 == SignedLetter(e, 1):
            eps, b, hp = 1, xl.name, terms[l - 1][1]
        elif xl == SignedLetter(e, -1):
            eps, b, hp = -1, xl1.name, H.inv(terms[l - 1][1])
        else:
            raise KernelError("internal: e is not adjacent to the minimum")
        self.l = l
        self.epsilon = eps
        self.a = terms[1][0].name
        self.b = b
        self.h = terms[0][1]
        self.h_prime = hp
        path = lift(0, R.atoms(), WeightFunction.constant(self.P.alphabet))
        items = path.items  # letter, coeff, letter, coeff, ...
        # gamma0: coefficient of term 2, then terms 3..l-1; delta0: coefficient of
        # term l+1, then terms l+2..r
        self.gamma0 = tuple(items[3 : 2 * (l - 1)])
        self.delta0 = tuple(items[2 * l + 1 :])
        lo, hi = self.m + 1, self.M - 1
        for it in self.gamma0 + self.delta0:
            if not (lo <= it.start <= hi and lo <= it.end <= hi):
                raise KernelError("internal: gamma0/delta0 leave the range m+1..M-1")
        c0 = self.collapse(0)
        self.R0 = c0

    # -- collapsed relators -----------------------------------------------------
    def lift(self, n: int):
        return lift(n, self.R.atoms(), WeightFunction.constant(self.P.alphabet))

    def collapse(self, n: int) -> CollapsedRelator:
        if n in self._collapsed:
            return self._collapsed[n]
        items = tuple(i for i in collapse_items(self.lift(n).items, self.f)
                      if not (isinstance(i, LevelledCoeff) and self.H.is_identity(i.value)))
        lead = kletter(n + self.M - 1, self.e, 1)
        if not items or items[0] != lead:
            raise KernelError(f"internal: R_{n} does not start with {lead}")
        mids = [j for j, it in enumerate(items)
                if isinstance(it, SignedLetter) and it.name == ("k", n + self.m, self.e)]
        if len(mids) != 1 or items[mids[0]].exp != self.epsilon:
            raise KernelError(f"internal: R_{n} has no unique ({n + self.m},e)^eps")
        j = mids[0]
        alpha, beta = items[1:j], items[j + 1 :]
        for it in alpha + beta:
            if isinstance(it, SignedLetter) and it.name[0] == "k" and it.name[2] == self.e:
                lvl = it.name[1]
                if lvl <= n + self.m or lvl >= n + self.M - 1:
                    raise KernelError(f"internal: R_{n} violates the e-level exclusion at level {lvl}")
        out = CollapsedRelator(n, items, lead, alpha, items[j], beta)
        self._collapsed[n] = out
        return out

    def alpha(self, n: int) -> tuple:
        if n in self.alpha_patch:
            return tuple(self.alpha_patch[n])
        return self.collapse(n).alpha

    def beta(self, n: int) -> tuple:
        return self.collapse(n).beta

    def with_alpha_patch(self, patch: Mapping[int, Sequence]) -> KernelData:
        return KernelData(self.P, self.e, self.f, self.max_level, {**self.alpha_patch, **patch}, self.max_image)

    # -- the isomorphism K-bar -> H * F0 ----------------------------------------
    def f0_basis(self) -> tuple:
        return (S,) + tuple(("x", x) for x in self.others) + tuple(("e", i, self.e) for i in self.window)

    def _s_conj(self, n: int, middle: list) -> FPElement:
        return self.carrier.normalize([stable(1)] * n + middle + [stable(-1)] * n if n >= 0
                                      else [stable(-1)] * (-n) + middle + [stable(1)] * (-n))

    def level_range(self) -> tuple[int, int]:
        return self.m - self.max_level, self.M + self.max_level

    def iso_e(self, i: int) -> FPElement:
        lo, hi = self.level_range()
        if not lo <= i <= hi:
            raise KernelDepthError(i, lo, hi)
        if i in self._memo:
            return self._memo[i]
        if self.m + 1 <= i <= self.M - 1:
            img = self.carrier.letter(("e", i, self.e))
        elif i >= self.M:
            for j in range(self.M, i):  # fill lower levels first; no deep recursion
                self.iso_e(j)
            k = i - self.M
            car = self.carrier
            img = car.normalize([
                car.inv(self.map_items(self.beta(k + 1))),
                car.power(self.iso_e(k + 1 + self.m), -self.epsilon),
                car.inv(self.map_items(self.alpha(k + 1))),
            ])
        else:
            for j in range(self.m, i, -1):
                self.iso_e(j)
            k = self.m - i
            car = self.carrier
            inner = car.normalize([
                self.map_items(self.beta(-k)),
                self.iso_e(-k + self.M - 1),
                self.map_items(self.alpha(-k)),
            ])
            img = car.power(inner, -self.epsilon)
        if img.free_length() > self.max_image:
            raise KernelBudgetError(i, img.free_length(), self.max_image)
        self._memo[i] = img
        return img

    def iso_forward(self, gen) -> FPElement:
        """Image of one kernel generator (a letter, ``s`` or a levelled coefficient)."""
        car = self.carrier
        if isinstance(gen, LevelledCoeff):
            if self.H.is_identity(gen.value):
                return car.identity
            return self._s_conj(gen.level, [Coeff(gen.value)])
        if isinstance(gen, SignedLetter):
            img = self.iso_forward(gen.name)
            return img if gen.exp == 1 else car.inv(img)
        if gen == S:
            return car.letter(S)
        tag, n, x = gen
        if tag != "k":
            raise KernelError(f"not a kernel generator: {gen!r}")
        if x == self.f:
            raise KernelError("f-edges form the collapsed tree and are not generators")
        if x == self.e:
            return self.iso_e(n)
        if x not in self.others:
            raise KernelError(f"unknown letter {format_key(x)}")
        return self._s_conj(n, [SignedLetter(("x", x), 1)])

    def map_items(self, items: Iterable) -> FPElement:
        return self.carrier.normalize([self.iso_forward(it) for it in items])

    def iso_inverse(self, gen) -> tuple:
        """Image of an ``H * F0`` generator as a kernel word."""
        if isinstance(gen, Coeff):
            return (LevelledCoeff(0, gen.value),)
        if isinstance(gen, SignedLetter):
            w = self.iso_inverse(gen.name)
            return w if gen.exp == 1 else kinverse(w, self.H)
        if gen == S:
            return (stable(1),)
        if gen[0] == "x":
            return (kletter(0, gen[1]),)
        if gen[0] == "e":
            return (kletter(gen[1], self.e),)
        raise KernelError(f"not an H * F0 generator: {gen!r}")

    # -- the shift on H * F0 ------------------------------------------------------
    def mu_bar(self, u: FPElement, p: int) -> FPElement:
        """The shift automorphism ``p`` times, transported to ``H * F0``."""
        if p == 0 or not u.syllables:
            return u
        car = self.carrier
        pieces = []
        for a in u.atoms():
            if isinstance(a, Coeff):
                pieces.append(self._s_conj(p, [a]))
            elif a.name == S:
                pieces.append(a)
            elif a.name[0] == "x":
                pieces.append(self._s_conj(p, [SignedLetter(a.name, 1)]) if a.exp == 1
                              else car.inv(self._s_conj(p, [SignedLetter(a.name, 1)])))
            else:
                img = self.iso_e(a.name[1] + p)
                pieces.append(img if a.exp == 1 else car.inv(img))
        return car.normalize(pieces)

    def summary(self) -> dict:
        fmt = self.H.format_element
        return {
            "e": format_key(self.e),
            "f": format_key(self.f),
            "M": self.M,
            "m": self.m,
            "epsilon": self.epsilon,
            "a": format_key(self.a),
            "b": format_key(self.b),
            "h": fmt(self.h),
            "h_prime": fmt(self.h_prime),
            "normalization": {"inverted": self.normalization.inverted, "rotation": self.normalization.rotation},
            "normalized_relator": self.R.format(self.H),
            "gamma0": format_kword(self.gamma0_k(), self.H),
            "delta0": format_kword(self.delta0_k(), self.H),
            "R0": format_kword(self.R0.items, self.H),
            "alpha0": format_kword(self.R0.alpha, self.H),
            "beta0": format_kword(self.R0.beta, self.H),
            "F0": [format_key(g) for g in self.f0_basis()],
        }

    def gamma0_k(self) -> tuple:
        return tuple(i for i in _as_k(self.gamma0) if not (isinstance(i, LevelledCoeff) and self.H.is_identity(i.value)))

    def delta0_k(self) -> tuple:
        return tuple(i for i in _as_k(self.delta0) if not (isinstance(i, LevelledCoeff) and self.H.is_identity(i.value)))


def _as_k(items):
    out = []
    for it in items:
        if isinstance(it, LevelledEdge):
            out.append(kletter(it.level if it.letter.exp == 1 else it.level - 1, it.letter.name, it.letter.exp))
        else:
            out.append(it)
    return tuple(out)


def decompose(P: RelativePresentation, e: Hashable, **kw) -> KernelData:
    return KernelData(P, e, **kw)


def collapse(kd: KernelData, n: int) -> CollapsedRelator:
    return kd.collapse(n)


def iso_forward(kd: KernelData, gen) -> FPElement:
    return kd.iso_forward(gen)


def iso_inverse(kd: KernelData, gen) -> tuple:
    return kd.iso_inverse(gen)


@dataclass(frozen=True)
class HNNWindow:
    """A finite window of the HNN presentation: relators ``R_n`` for ``|n| <= N``
    and the conjugation relators ``s (n,z) s^-1 (n+1,z)^-1`` for ``-N <= n < N``."""

    N: int
    relators: tuple
    conjugations: tuple = field(default=())

    def shift(self, items: Sequence, k: int = 1) -> tuple:
        return kshift(items, k)


def conjugation_relator(n: int, z, group) -> tuple:
    """``s (n,z) s^-1 (n+1,z)^-1`` for a letter name ``z`` or a coefficient ``Coeff(h)``."""
    if isinstance(z, Coeff):
        a, b = LevelledCoeff(n, z.value), LevelledCoeff(n + 1, group.inv(z.value))
    else:
        a, b = kletter(n, z), kletter(n + 1, z, -1)
    return (stable(1), a, stable(-1), b)


def hnn_presentation(kd: KernelData, N: int = 3) -> HNNWindow:
    if N < 1:
        raise KernelError("window must be at least 1")
    rels = tuple(kd.collapse(n) for n in range(-N, N + 1))
    conj = []
    for n in range(-N, N):
        for x in kd.others:
            conj.append(conjugation_relator(n, x, kd.H))
        for h in kd.H.generators():
            conj.append(conjugation_relator(n, Coeff(h), kd.H))
    return HNNWindow(N, rels, tuple(conj))


@dataclass(frozen=True)
class IsoCheck:
    kind: str  # V1 | V2 | V3
    item: str
    ok: bool
    image: str


@dataclass(frozen=True)
class IsoReport:
    N: int
    checks: tuple[IsoCheck, ...]

    @property
    def passed(self) -> bool:
        return all(c.ok for c in self.checks)

    def passed_kind(self, kind: str) -> bool:
        return all(c.ok for c in self.checks if c.kind == kind)

    def failures(self) -> list[IsoCheck]:
        return [c for c in self.checks if not c.ok]

    def as_dict(self) -> dict:
        return {
            "window": self.N,
            "passed": self.passed,
            **{k: self.passed_kind(k) for k in ("V1", "V2", "V3")},
            "counts": {k: sum(1 for c in self.checks if c.kind == k) for k in ("V1", "V2", "V3")},
            "failures": [{"check": c.kind, "item": c.item, "image": c.image} for c in self.failures()],
        }


def verify_iso(kd: KernelData, N: int = 3) -> IsoReport:
    """V1: images of the relators ``R_n`` vanish; V2: images of the conjugation
    relators vanish; V3: forward after inverse is the identity on generators.

    The relators are recomputed from the lift, so a patched ``alpha_n`` used by
    the isomorphism is caught by V1.
    """
    car = kd.carrier
    checks = []
    win = hnn_presentation(kd, N)
    for c in win.relators:
        fresh = collapse_items(kd.lift(c.n).items, kd.f)
        try:
            img = kd.map_items(fresh)
            checks.append(IsoCheck("V1", f"R_{c.n}", not img.syllables, car.format(img)))
        except KernelError as exc:
            checks.append(IsoCheck("V1", f"R_{c.n}", False, str(exc)))
    for rel in win.conjugations:
        img = kd.map_items(rel)
        checks.append(IsoCheck("V2", format_kword(rel, kd.H), not img.syllables, car.format(img)))
    gens = [SignedLetter(g, 1) for g in kd.f0_basis()] + [Coeff(h) for h in kd.H.generators()]
    for g in gens:
        back = kd.map_items(kd.iso_inverse(g))
        want = car.normalize([g])
        label = format_key(g.name) if isinstance(g, SignedLetter) else kd.H.format_element(g.value)
        checks.append(IsoCheck("V3", label, back == want, car.format(back)))
    return IsoReport(N, tuple(checks))
