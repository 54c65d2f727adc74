"""Kernel presentation, HNN extension, the isomorphism with ``H * F0`` and word problem."""

from .construction import (
    DEFAULT_MAX_IMAGE,
    DEFAULT_MAX_LEVEL,
    CollapsedRelator,
    Extremes,
    HNNWindow,
    IsoCheck,
    IsoReport,
    KernelBudgetError,
    KernelData,
    KernelDepthError,
    KernelError,
    Normalization,
    choose_f,
    collapse,
    collapse_items,
    conjugation_relator,
    decompose,
    extremes,
    format_kword,
    hnn_presentation,
    iso_forward,
    iso_inverse,
    kletter,
    kshift,
    normalize,
    stable,
    verify_iso,
)
from .gbar import IDENTITY, GBarElement, embed_G, gbar_equal, gbar_inv, gbar_mul, needed_levels, retract_Gbar
from .wordproblem import NormalForm, TrivialCase, WordProblem

__all__ = [name for name in dir() if not name.startswith("_")]
