"""Embedding rewritings with explicit retractions.

``stretch`` turns a max-min certificate for an arbitrary weight into one for
the constant weight by splitting letters; ``strengthen`` forces a shared
letter ``e`` onto both extremes. Each returns the new presentation together
with a retraction ``rho`` (big to small) and its section ``mu``, and both are
checked: ``rho(mu(g)) = g`` on generators and coefficient probes, and each
map sends relators to relators.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Mapping

from .core.freeprod import FreeProduct
from .core.groups import CyclicGroup, FreeProductGroup
from .core.homs import Homomorphism, apply_hom, compose, identity_hom, verify_hom
from .core.relators import RelativePresentation, RelativeRelator, from_atoms
from .core.words import Coeff, SignedLetter, Word, format_key
from .weights.profile import MaxMinClass, WeightFunction, classify
from .weights.search import MaxMinCertificate, certify, search_certificate


class EmbedError(ValueError):
    pass


class NoCertificate(EmbedError):
    """The presentation is not in M_H as far as the certificate search can tell."""


@dataclass(frozen=True)
class RoundtripCheck:
    item: str
    ok: bool
    detail: str = ""


@dataclass(frozen=True)
class RetractionPair:
    rho: Homomorphism  # big -> small
    mu: Homomorphism  # small -> big
    verified: bool = False
    checks: tuple[RoundtripCheck, ...] = ()

    @property
    def small(self) -> RelativePresentation:
        return self.mu.source

    @property
    def big(self) -> RelativePresentation:
        return self.mu.target

    def failures(self) -> list[RoundtripCheck]:
        return [c for c in self.checks if not c.ok]

    def as_dict(self) -> dict:
        car = FreeProduct(self.small.group)
        bigcar = FreeProduct(self.big.group)
        return {
            "verified": self.verified,
            "mu": {format_key(x): bigcar.format(v) for x, v in self.mu.images.items()},
            "rho": {format_key(x): car.format(v) for x, v in self.rho.images.items()},
            "failures": [c.item + (": " + c.detail if c.detail else "") for c in self.failures()],
        }


def verify_pair(rho: Homomorphism, mu: Homomorphism) -> RetractionPair:
    """Check ``rho . mu = id`` on generators and probes, ``mu`` fixing ``H``,
    and that both maps send relators to relators."""
    small = mu.source
    car = FreeProduct(small.group)
    bigcar = FreeProduct(mu.target.group)
    checks = []
    for x in small.alphabet:
        g = car.letter(x)
        try:
            back = apply_hom(rho, apply_hom(mu, g))
        except KeyError as exc:
            checks.append(RoundtripCheck(f"rho(mu({format_key(x)}))", False, str(exc)))
            continue
        checks.append(RoundtripCheck(f"rho(mu({format_key(x)}))", back == g, car.format(back)))
    for h in small.group.probes():
        c = car.coeff(h)
        img = apply_hom(mu, c)
        checks.append(RoundtripCheck(f"mu({small.group.format_element(h)})", img == bigcar.coeff(h), bigcar.format(img)))
        back = apply_hom(rho, img)
        checks.append(RoundtripCheck(f"rho(mu({small.group.format_element(h)}))", back == c, car.format(back)))
    for name, hom in (("rho", rho), ("mu", mu)):
        rep = verify_hom(hom)
        for c in rep.checks:
            checks.append(RoundtripCheck(f"{name} relator {c.index}", c.outcome != "fail", c.outcome))
    ok = all(c.ok for c in checks)
    return RetractionPair(rho, mu, ok, tuple(checks))


def identity_pair(P: RelativePresentation) -> RetractionPair:
    idp = identity_hom(P)
    return verify_pair(idp, idp)


def compose_pairs(outer: RetractionPair, inner: RetractionPair) -> RetractionPair:
    """``inner`` embeds ``G0`` in ``G1``, ``outer`` embeds ``G1`` in ``G2``."""
    if outer.small.alphabet != inner.big.alphabet:
        raise EmbedError("retraction pairs do not chain")
    rho = compose(inner.rho, outer.rho)
    mu = compose(outer.mu, inner.mu)
    return verify_pair(rho, mu)


def _fresh(base: str, taken: set) -> str:
    if base not in taken:
        return base
    k = 2
    while f"{base}_{k}" in taken:
        k += 1
    return f"{base}_{k}"


def _rewrite(R: RelativeRelator, images: Mapping[Hashable, Word], group) -> RelativeRelator:
    atoms: list = []
    for s, h in R.terms:
        w = images[s.name]
        atoms.extend(w if s.exp == 1 else w.inverse())
        atoms.append(Coeff(h))
    return from_atoms(atoms, group)


def _pair_from_words(
    small: RelativePresentation,
    big_alphabet: tuple,
    mu_words: Mapping[Hashable, Word],
    rho_words: Mapping[Hashable, Word],
    label: str,
) -> tuple[RelativePresentation, RetractionPair]:
    H = small.group
    big = RelativePresentation(big_alphabet, H, tuple(_rewrite(R, mu_words, H) for R in small.relators))
    car_big, car_small = FreeProduct(H), FreeProduct(H)
    mu = Homomorphism(small, big, {x: car_big.normalize(w) for x, w in mu_words.items()}, name=f"mu_{label}")
    rho = Homomorphism(big, small, {x: car_small.normalize(w) for x, w in rho_words.items()}, name=f"rho_{label}")
    return big, verify_pair(rho, mu)


@dataclass(frozen=True)
class Stage:
    name: str
    presentation: RelativePresentation
    pair: RetractionPair
    notes: tuple[str, ...] = ()
    theta: WeightFunction | None = None

    def as_dict(self) -> dict:
        out = {
            "stage": self.name,
            "presentation": self.presentation.format(),
            "pair_verified": self.pair.verified,
            "notes": list(self.notes),
        }
        if self.theta is not None:
            out["theta"] = self.theta.as_dict()
        return out


def stretch(P: RelativePresentation, cert: MaxMinCertificate) -> tuple[RelativePresentation, RetractionPair, tuple[str, ...]]:
    """Split each letter ``y`` with ``|theta(y)| > 1`` into ``y_1 ... y_t``.

    Letters of negative weight are first replaced by their inverses (the map
    is its own inverse, so it folds into ``mu`` and ``rho``). Returns the new
    presentation, the pair and a tuple of provenance notes.
    """
    if not cert.verified or cert.achieved < MaxMinClass.UNIQUE_MAX_MIN:
        raise EmbedError("stretch needs a verified certificate of class unique-max-min or better")
    W = P.relator.skeleton()
    if certify(W, cert.theta, MaxMinClass.UNIQUE_MAX_MIN) is None:
        raise EmbedError("certificate does not verify on this relator")
    theta = cert.theta
    taken = set(format_key(x) for x in P.alphabet)
    notes = []
    mu_words: dict = {}
    rho_words: dict = {}
    big_alphabet: list = []
    for x in P.alphabet:
        t = theta.values.get(x, 1)
        sign = 1 if t > 0 else -1
        if sign < 0:
            notes.append(f"{format_key(x)} -> {format_key(x)}^-1 (negative weight)")
        if abs(t) == 1:
            big_alphabet.append(x)
            mu_words[x] = Word([SignedLetter(x, sign)])
            rho_words[x] = Word([SignedLetter(x, sign)])
            continue
        parts = []
        for i in range(1, abs(t) + 1):
            base = f"{format_key(x)}_{i}"
            name = _fresh(base, taken)
            if name != base:
                notes.append(f"fresh name {base} taken, using {name}")
            taken.add(name)
            parts.append(name)
        big_alphabet.extend(parts)
        w = Word(SignedLetter(y, 1) for y in parts)
        mu_words[x] = w if sign > 0 else w.inverse()
        rho_words[parts[0]] = Word([SignedLetter(x, sign)])
        for y in parts[1:]:
            rho_words[y] = Word()
        notes.append(f"{format_key(x)} -> {' '.join(parts)}" + ("" if sign > 0 else " (inverted)"))
    big, pair = _pair_from_words(P, tuple(big_alphabet), mu_words, rho_words, "stretch")
    return big, pair, tuple(notes)


def extreme_letters(word: Word) -> tuple[Hashable, Hashable, Hashable, Hashable]:
    """``(a, b, c, d)``: letters before/after the unique max and before/after
    the unique min under the constant weight."""
    rep = classify(word, WeightFunction.constant(word.letters()))
    if rep.achieved < MaxMinClass.UNIQUE_MAX_MIN:
        raise EmbedError("skeleton is not unique-max-min under the constant weight")
    r = len(word)
    k, l = rep.maximum.positions[0], rep.minimum.positions[0]
    return word[(k - 1) % r].name, word[k % r].name, word[(l - 1) % r].name, word[l % r].name


def strengthen(P: RelativePresentation) -> tuple[RelativePresentation, RetractionPair, Hashable | None, tuple[str, ...]]:
    """Insert a letter ``e`` next to both extremes.

    Returns ``(P_hat, pair, e, notes)``; when the extreme letter sets already
    meet, ``P`` comes back unchanged with the identity pair and ``e = None``.
    """
    W = P.relator.skeleton()
    ones = WeightFunction.constant(P.alphabet)
    if sum(s.exp for s in W) != 0:
        raise EmbedError("strengthen needs the constant weight to be admissible")
    rep = classify(W, ones)
    if rep.achieved < MaxMinClass.UNIQUE_MAX_MIN:
        raise EmbedError("strengthen needs a skeleton with the unique max-min property under the constant weight")
    if rep.strong:
        return P, identity_pair(P), None, ("extreme letter sets already meet",)
    a, b, c, d = extreme_letters(W)
    taken = set(format_key(x) for x in P.alphabet)
    notes = [f"max letters {format_key(a)}, {format_key(b)}; min letters {format_key(c)}, {format_key(d)}"]
    e = _fresh("e", taken)
    if e != "e":
        notes.append(f"fresh name e taken, using {e}")
    taken.add(e)

    def L(x, exp=1):
        return SignedLetter(x, exp)

    mu_words: dict = {a: Word([L(e), L(a)]), b: Word([L(b), L(e)]), c: Word([L(e), L(c)]), d: Word([L(d), L(e)])}
    rho_words: dict = {a: Word([L(a)]), b: Word([L(b)]), c: Word([L(c)]), d: Word([L(d)]), e: Word()}
    big_alphabet: list = [a, b, c, d, e]
    for y in P.alphabet:
        if y in (a, b, c, d):
            continue
        names = []
        for i in (1, 2):
            base = f"{format_key(y)}_{i}"
            name = _fresh(base, taken)
            if name != base:
                notes.append(f"fresh name {base} taken, using {name}")
            taken.add(name)
            names.append(name)
        y1, y2 = names
        mu_words[y] = Word([L(y1), L(y2)])
        rho_words[y1] = Word([L(y)])
        rho_words[y2] = Word()
        big_alphabet.extend(names)
    big, pair = _pair_from_words(P, tuple(big_alphabet), mu_words, rho_words, "strengthen")
    return big, pair, e, tuple(notes)


def designated_e(word: Word, alphabet) -> Hashable:
    """First letter, in declaration order, shared by both extreme letter sets."""
    rep = classify(word, WeightFunction.constant(word.letters()))
    if rep.achieved != MaxMinClass.STRONG:
        raise EmbedError("skeleton is not strong unique-max-min under the constant weight")
    shared = rep.maximum.letters & rep.minimum.letters
    return next(x for x in alphabet if x in shared)


@dataclass(frozen=True)
class StrongResult:
    """Output of :func:`to_strong`: a presentation in the strong class under
    the constant weight, with ``e`` on both extremes, and the composite pair."""

    source: RelativePresentation
    presentation: RelativePresentation
    pair: RetractionPair
    e: Hashable
    chain: tuple[Stage, ...] = field(default=())
    certificate: MaxMinCertificate | None = None

    def as_dict(self) -> dict:
        return {
            "e": format_key(self.e),
            "presentation": self.presentation.format(),
            "stages": [s.as_dict() for s in self.chain],
            "pair": self.pair.as_dict(),
        }


def to_strong(P: RelativePresentation, sign_cap: int | None = None) -> StrongResult:
    """Search, then stretch, then strengthen, skipping stages that are not needed."""
    W = P.relator.skeleton()
    kwargs = {} if sign_cap is None else {"sign_cap": sign_cap}
    cert = search_certificate(W, MaxMinClass.UNIQUE_MAX_MIN, alphabet=P.alphabet, **kwargs)
    if cert is None:
        raise NoCertificate("not in M_H (as far as the search can tell): no unique max-min certificate")
    chain = [Stage("input", P, identity_pair(P), theta=cert.theta)]
    cur, pair = P, chain[0].pair
    if not cert.theta.is_constant_one():
        cur, p, notes = stretch(cur, cert)
        chain.append(Stage("stretch", cur, p, notes, cert.theta))
        pair = p
    big, p, e, notes = strengthen(cur)
    if e is None:
        e = designated_e(cur.relator.skeleton(), cur.alphabet)
    else:
        chain.append(Stage("strengthen", big, p, notes))
        pair = compose_pairs(p, pair) if len(chain) > 2 else p
        cur = big
    if len(chain) == 1:
        chain[0] = Stage("input", P, pair, ("already strong under the constant weight",), cert.theta)
    return StrongResult(P, cur, pair, e, tuple(chain), cert)


def absorb_plateau(P: RelativePresentation, theta: WeightFunction) -> tuple[RelativePresentation, Hashable]:
    """Turn a plateau extreme into a genuine one by moving the flat letter into
    the coefficients: the letter ``z = x_{k+1}`` is deleted from the alphabet and
    ``H`` becomes ``H * <z>``. Only the case ``x_k != x_{k+2}`` is supported.
    """
    W = P.relator.skeleton()
    rep = classify(W, theta)
    r = len(W)
    plateau = rep.maximum.plateau or rep.minimum.plateau
    if plateau is None:
        raise EmbedError("no plateau at either extreme")
    k = plateau[0]
    if W[(k - 1) % r].name == W[(k + 1) % r].name:
        raise EmbedError("plateau with x_k = x_{k+2} is not supported")
    z = W[k % r].name
    H = P.group
    H2 = FreeProductGroup([H, CyclicGroup(0)])
    zi = len(H2.factors) - 1
    lift = (lambda h: h) if isinstance(H, FreeProductGroup) else (lambda h: H2.inject(0, h))
    atoms: list = []
    for s, h in P.relator.terms:
        if s.name == z:
            atoms.append(Coeff(H2.inject(zi, s.exp)))
        else:
            atoms.append(s)
        atoms.append(Coeff(lift(h)))
    R2 = from_atoms(atoms, H2)
    return RelativePresentation(tuple(x for x in P.alphabet if x != z), H2, (R2,)), z


__all__ = [
    "EmbedError",
    "NoCertificate",
    "RetractionPair",
    "RoundtripCheck",
    "Stage",
    "StrongResult",
    "absorb_plateau",
    "compose_pairs",
    "designated_e",
    "extreme_letters",
    "identity_pair",
    "stretch",
    "strengthen",
    "to_strong",
    "verify_pair",
]
