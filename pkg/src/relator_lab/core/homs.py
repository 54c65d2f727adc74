"""Homomorphisms between relative presentations, given on generators."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable, Hashable, Iterable, Mapping

from .freeprod import FPElement, FreeProduct
from .relators import RelativePresentation, RelativeRelator
from .words import Coeff, SignedLetter, format_key


class UndefinedGeneratorError(KeyError):
    def __init__(self, name):
        super().__init__(name)
        self.name = name

    def __str__(self):
        return f"homomorphism is not defined on generator {format_key(self.name)}"


@dataclass(frozen=True)
class Homomorphism:
    """Letters of ``source`` go to elements of ``target.group * F(target.alphabet)``.

    ``coefficient_map`` defaults to the identity on ``H``.
    """

    source: RelativePresentation
    target: RelativePresentation
    images: Mapping[Hashable, FPElement] = field(hash=False)
    coefficient_map: Callable | None = field(default=None, hash=False, compare=False)
    verified: bool = False
    name: str = ""

    @property
    def carrier(self) -> FreeProduct:
        return FreeProduct(self.target.group)

    def image_of_coeff(self, h):
        return h if self.coefficient_map is None else self.coefficient_map(h)


def as_atoms(element) -> list:
    if isinstance(element, FPElement):
        return element.atoms()
    if isinstance(element, RelativeRelator):
        return element.atoms()
    return list(element)


def apply_hom(hom: Homomorphism, element) -> FPElement:
    carrier = hom.carrier
    pieces: list = []
    for a in as_atoms(element):
        if isinstance(a, Coeff):
            pieces.append(Coeff(hom.image_of_coeff(a.value)))
        elif isinstance(a, SignedLetter):
            try:
                img = hom.images[a.name]
            except KeyError:
                raise UndefinedGeneratorError(a.name) from None
            pieces.append(img if a.exp == 1 else carrier.inv(img))
        else:
            raise TypeError(f"cannot apply a homomorphism to {a!r}")
    return carrier.normalize(pieces)


def identity_hom(P: RelativePresentation) -> Homomorphism:
    car = FreeProduct(P.group)
    return Homomorphism(P, P, {x: car.letter(x) for x in P.alphabet}, name="id", verified=True)


def compose(outer: Homomorphism, inner: Homomorphism) -> Homomorphism:
    """``outer ∘ inner``: apply ``inner`` first."""
    images = {x: apply_hom(outer, img) for x, img in inner.images.items()}
    cmaps = [m for m in (inner.coefficient_map, outer.coefficient_map) if m is not None]
    cmap = None
    if cmaps:
        f, g = inner.image_of_coeff, outer.image_of_coeff
        cmap = lambda h: g(f(h))  # noqa: E731
    name = f"{outer.name}∘{inner.name}" if outer.name and inner.name else ""
    return Homomorphism(inner.source, outer.target, images, cmap, name=name)


@dataclass(frozen=True)
class RelatorCheck:
    index: int
    outcome: str  # exact | cyclic | inverse | inverse-cyclic | identity | fail
    image: str


@dataclass(frozen=True)
class HomReport:
    passed: bool
    checks: tuple[RelatorCheck, ...]
    hom: Homomorphism

    def as_dict(self) -> dict:
        return {
            "passed": self.passed,
            "relators": [{"index": c.index, "outcome": c.outcome, "image": c.image} for c in self.checks],
        }


def match_relator(carrier: FreeProduct, image: FPElement, targets: Iterable[RelativeRelator]) -> str:
    """How ``image`` relates to some target relator: exact, a cyclic permutation,
    the inverse (possibly cyclically permuted), the identity, or ``fail``."""
    if not image.syllables:
        return "identity"
    for T in targets:
        t = carrier.normalize(T.atoms())
        if image == t:
            return "exact"
        if image == carrier.inv(t):
            return "inverse"
        if image in carrier.cyclic_conjugates(t):
            return "cyclic"
        if image in carrier.cyclic_conjugates(carrier.inv(t)):
            return "inverse-cyclic"
    return "fail"


def verify_hom(hom: Homomorphism) -> HomReport:
    """Well-definedness check: each source relator must go to a target relator
    (up to cyclic permutation and inversion) or to the identity."""
    carrier = hom.carrier
    checks = []
    for i, R in enumerate(hom.source.relators):
        try:
            img = apply_hom(hom, R)
        except UndefinedGeneratorError as exc:
            checks.append(RelatorCheck(i, "fail", str(exc)))
            continue
        outcome = match_relator(carrier, img, hom.target.relators)
        checks.append(RelatorCheck(i, outcome, carrier.format(img)))
    passed = all(c.outcome != "fail" for c in checks)
    return HomReport(passed, tuple(checks), replace(hom, verified=passed))
