"""Exact rational linear feasibility by Fourier-Motzkin elimination.

Constraints are ``a . x >= b`` (inequalities) and ``a . x == b`` (equations)
with rational data. :func:`feasible_point` returns an exact rational
solution or ``None``. No floating point is used anywhere.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

Row = tuple[tuple[int, ...], int]


class FeasibilityError(ValueError):
    pass


def _int_row(coeffs: Sequence, rhs) -> Row:
    """Scale a rational row to coprime integers (a positive rescaling)."""
    vals = [Fraction(c) for c in coeffs] + [Fraction(rhs)]
    den = 1
    for v in vals:
        den = den * v.denominator // math.gcd(den, v.denominator)
    ints = [int(v * den) for v in vals]
    return _reduce(tuple(ints[:-1]), ints[-1])


def _reduce(coeffs: tuple[int, ...], rhs: int) -> Row:
    g = 0
    for c in coeffs:
        g = math.gcd(g, c)
    if g > 1:
        # for ">=" rows dividing by g and rounding the bound up would tighten
        # over the integers; over the rationals only exact division is sound
        if rhs % g == 0:
            return tuple(c // g for c in coeffs), rhs // g
        return coeffs, rhs
    return coeffs, rhs


def _key(row: Row) -> tuple[tuple[int, ...], Fraction]:
    coeffs, rhs = row
    g = 0
    for c in coeffs:
        g = math.gcd(g, c)
    if g == 0:
        return coeffs, Fraction(rhs)
    return tuple(c // g for c in coeffs), Fraction(rhs, g)


def _dedupe(rows: list[Row]) -> list[Row]:
    best: dict[tuple, tuple[Fraction, Row]] = {}
    for row in rows:
        k, b = _key(row)
        if k not in best or b > best[k][0]:
            best[k] = (b, row)
    return [row for _, row in best.values()]


def _pick_value(lo: Fraction | None, hi: Fraction | None) -> Fraction:
    """A value in ``[lo, hi]``, preferring the integer of least magnitude."""
    if lo is None and hi is None:
        return Fraction(0)
    if lo is None:
        return Fraction(min(0, math.floor(hi)))
    if hi is None:
        return Fraction(max(0, math.ceil(lo)))
    if lo <= 0 <= hi:
        return Fraction(0)
    cand = math.ceil(lo) if lo > 0 else math.floor(hi)
    if lo <= cand <= hi:
        return Fraction(cand)
    return (lo + hi) / 2


def feasible_point(
    nvars: int,
    inequalities: Sequence[tuple[Sequence, object]] = (),
    equations: Sequence[tuple[Sequence, object]] = (),
) -> list[Fraction] | None:
    ineqs = [_int_row(a, b) for a, b in inequalities]
    eqs = [_int_row(a, b) for a, b in equations]
    for a, _ in ineqs + eqs:
        if len(a) != nvars:
            raise FeasibilityError(f"row of length {len(a)} for {nvars} variables")

    # Eliminate the equations by cross-multiplication. Each pivot row is kept
    # for back-substitution: x_p = (b - sum_{j != p} a_j x_j) / a_p.
    pivots: list[tuple[int, Row]] = []
    while eqs:
        coeffs, rhs = eqs.pop()
        p = next((j for j, c in enumerate(coeffs) if c != 0), None)
        if p is None:
            if rhs != 0:
                return None
            continue
        ap = coeffs[p]
        sgn = 1 if ap > 0 else -1

        def sub(row: Row, coeffs=coeffs, rhs=rhs, p=p, ap=ap, sgn=sgn) -> Row:
            c, r = row
            f = c[p]
            if f == 0:
                return row
            # multiply by |ap| (positive, keeps ">=" direction) and cancel x_p
            a = abs(ap)
            k = f * sgn
            return _reduce(tuple(a * ci - k * ai for ci, ai in zip(c, coeffs)), a * r - k * rhs)

        eqs = [sub(e) for e in eqs]
        ineqs = [sub(i) for i in ineqs]
        pivots.append((p, (coeffs, rhs)))

    pivot_vars = {p for p, _ in pivots}
    free = [j for j in range(nvars) if j not in pivot_vars]

    # Fourier-Motzkin on the remaining variables; each stage keeps the rows
    # that bounded the eliminated variable.
    stages: list[tuple[int, list[Row]]] = []
    rows = _dedupe(ineqs)
    remaining = list(free)
    while remaining:
        def cost(j):
            pos = sum(1 for c, _ in rows if c[j] > 0)
            neg = sum(1 for c, _ in rows if c[j] < 0)
            return pos * neg - pos - neg

        j = min(remaining, key=lambda v: (cost(v), v))
        remaining.remove(j)
        pos = [r for r in rows if r[0][j] > 0]
        neg = [r for r in rows if r[0][j] < 0]
        keep = [r for r in rows if r[0][j] == 0]
        stages.append((j, pos + neg))
        for cp, bp in pos:
            for cn, bn in neg:
                fp, fn = cp[j], -cn[j]
                coeffs = tuple(fn * a + fp * b for a, b in zip(cp, cn))
                keep.append(_reduce(coeffs, fn * bp + fp * bn))
        rows = _dedupe(keep)
        for c, b in rows:
            if b > 0 and not any(c):
                return None
    for c, b in rows:
        if b > 0:  # all coefficients are zero here
            return None

    x: list[Fraction | None] = [None] * nvars
    for j, bounds in reversed(stages):
        lo = hi = None
        for c, b in bounds:
            rest = sum(ci * x[i] for i, ci in enumerate(c) if i != j and ci != 0)
            val = Fraction(b - rest) / c[j]
            if c[j] > 0:
                lo = val if lo is None or val > lo else lo
            else:
                hi = val if hi is None or val < hi else hi
        if lo is not None and hi is not None and lo > hi:
            raise FeasibilityError("inconsistent back-substitution (solver bug)")
        x[j] = _pick_value(lo, hi)
    for p, (coeffs, rhs) in reversed(pivots):
        rest = sum(c * x[i] for i, c in enumerate(coeffs) if i != p and c != 0)
        x[p] = Fraction(rhs - rest) / coeffs[p]
    sol = [Fraction(v) for v in x]
    if not satisfies(sol, inequalities, equations):
        raise FeasibilityError("computed point violates the system (solver bug)")
    return sol


def satisfies(x: Sequence, inequalities=(), equations=()) -> bool:
    for a, b in inequalities:
        if sum(Fraction(ai) * xi for ai, xi in zip(a, x)) < Fraction(b):
            return False
    for a, b in equations:
        if sum(Fraction(ai) * xi for ai, xi in zip(a, x)) != Fraction(b):
            return False
    return True


def integer_direction(x: Sequence[Fraction]) -> list[int]:
    """Clear denominators and divide by the gcd (a positive rescaling)."""
    den = 1
    for v in x:
        den = den * Fraction(v).denominator // math.gcd(den, Fraction(v).denominator)
    ints = [int(Fraction(v) * den) for v in x]
    g = 0
    for v in ints:
        g = math.gcd(g, v)
    return [v // g for v in ints] if g else ints
