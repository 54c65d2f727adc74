"""Words, coefficient groups, relative relators and free-product normal forms."""

from .freeprod import FPElement, FreeProduct, fp_normalize
from .groups import (
    CoefficientGroup,
    CyclicGroup,
    FreeGroup,
    FreeProductGroup,
    GroupError,
    InfiniteGroupError,
    PermutationGroup,
    TableGroup,
    TrivialGroup,
    symmetric_group_table,
)
from .homs import (
    HomReport,
    Homomorphism,
    UndefinedGeneratorError,
    apply_hom,
    compose,
    identity_hom,
    verify_hom,
)
from .relators import (
    RelativePresentation,
    RelativeRelator,
    from_atoms,
    power,
    relator,
    restrict_alphabet,
    substitute,
)
from .words import Coeff, SignedLetter, Word, cyclic_reduce, free_reduce, letter

__all__ = [name for name in dir() if not name.startswith("_")]
