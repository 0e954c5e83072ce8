"""Minimum-redundancy parameter selection.

Closed forms for the CNA and (for five sizes) the KA, the O(N log N) grid
search over KA parameters, brute-force sweeps for the non-contiguous NA and
KMA, and a thin wrapper over the exhaustive MRA search.

Tie-breaking is the same everywhere: maximize the objective, then minimize
the regularizer (computed with the largest aperture among the tied
candidates), then take the lexicographically smallest position tuple.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from decimal import Decimal
from fractions import Fraction
from typing import Callable, Iterable, Optional, Union

from . import mra
from .coarray import SensorArray, contiguous_dof, sum_coarray, varsigma
from .constructions import (
    KloveParams,
    NestedParams,
    cna,
    cna_count,
    ka,
    kma,
    nested,
)

Params = Union[NestedParams, KloveParams, SensorArray]


@dataclass(frozen=True)
class SearchOutcome:
    params: Params
    array: SensorArray
    aperture: int
    contiguous_dof: int
    varsigma: Decimal
    objective_trace: Optional[list] = field(default=None, repr=False, compare=False)


@dataclass(frozen=True)
class ClosedFormTrace:
    alpha: int
    beta: Fraction
    k_residue: int
    m: int


def _select(candidates: Iterable[tuple[int, Params, SensorArray]]) -> tuple[int, Params, SensorArray, Decimal]:
    """Best ``(objective, params, array)`` under the shared tie-break."""
    best_obj = None
    tied: list[tuple[Params, SensorArray]] = []
    for obj, params, arr in candidates:
        if best_obj is None or obj > best_obj:
            best_obj, tied = obj, [(params, arr)]
        elif obj == best_obj:
            tied.append((params, arr))
    if best_obj is None:
        raise ValueError("no feasible candidate")
    ref = max(a.aperture() for _, a in tied)
    params, arr = min(tied, key=lambda t: (varsigma(t[1], ref), t[1].positions))
    return best_obj, params, arr, varsigma(arr, ref)


def solve_two_var(z: float, g: Callable[[int], Optional[int]],
                  f: Callable[[int, int], float], max_shift: Optional[int] = None) -> tuple[int, int]:
    """Integer maximizer of a concave ``f(x, g(x))`` from its relaxed optimum.

    Starts at ``x = round(z)`` (halves round up) and scans ``k = 0, -1, +1,
    -2, +2, ...`` for the first ``x + k >= 0`` where ``g`` is defined
    (returns non-None). When both signs of ``|k|`` are feasible the larger
    ``f`` wins. ``|k|`` is capped at ``floor(z) + 1`` unless ``max_shift``
    is given.
    """
    x0 = max(math.floor(z + 0.5), 0)
    cap = max_shift if max_shift is not None else math.floor(z) + 1
    for m in range(0, cap + 1):
        options = []
        for k in ((0,) if m == 0 else (-m, m)):
            x = x0 + k
            if x < 0:
                continue
            y = g(x)
            if y is not None:
                options.append((f(x, y), -len(options), x, y))
        if options:
            _, _, x, y = max(options)
            return x, y
    raise ValueError("no feasible integer point within the scan range")


# --- CNA ----------------------------------------------------------------------

def cna_trace(n: int) -> ClosedFormTrace:
    k = n % 4
    alpha = (k + 1) % 4 - 1
    return ClosedFormTrace(alpha=alpha, beta=Fraction((alpha - 1) ** 2, 8), k_residue=k, m=(n - k) // 4)


def cna_opt(n: int) -> tuple[NestedParams, ClosedFormTrace]:
    """Closed-form minimum-redundancy CNA parameters for ``n`` sensors."""
    if n < 1:
        raise ValueError("need at least one sensor")
    t = cna_trace(n)
    return NestedParams((n - t.alpha) // 4, (n + t.alpha) // 2), t


def cna_opt_aperture(n: int) -> int:
    t = cna_trace(n)
    L = Fraction(n * n + 6 * n - 7, 8) - t.beta
    assert L.denominator == 1
    return int(L)


def cna_opt_unit_spacings(n: int) -> int:
    """``S(1) = (N - α)/2``; holds when both CNA parameters are positive."""
    return (n - cna_trace(n).alpha) // 2


def cna_two_var(n: int) -> NestedParams:
    """CNA parameters via the generic two-variable integer program."""
    def g(x):
        y = n - 2 * x
        return y if y >= 1 else None

    x, y = solve_two_var((n - 1) / 4, g, lambda a, b: a * b + a + b)
    return NestedParams(x, y)


# --- KA -----------------------------------------------------------------------

def ka_r_aperture(n1: int, n2: int, n3: int) -> int:
    return (n1 + 1) * (n3 * (n1 + n2) + 3 * n2 + 3) - 5


def _ka_grid(n: int):
    """Yield ``(n1, n3, n2 or None)`` for every grid point visited."""
    for n1 in range((n - 2) // 4 + 1):
        for n3 in range((n - 4 * n1) // (n1 + 1) + 1):
            rest = n - (n1 + 1) * n3 - 4 * n1
            n2 = rest // 2 if rest % 2 == 0 and rest >= 2 else None
            yield n1, n3, n2


def ka_r_grid(n: int, trace: bool = False) -> SearchOutcome:
    """Minimum-redundancy KA parameters by grid search over ``(N1, N3)``.

    The aperture comes from the closed form; the regularizer is evaluated only
    when a candidate ties the incumbent aperture.
    """
    if n < 2:
        raise ValueError("need at least two sensors")
    best: Optional[KloveParams] = None
    best_L = -1
    best_arr: Optional[SensorArray] = None
    best_vs: Optional[Decimal] = None
    log = [] if trace else None
    for n1, n3, n2 in _ka_grid(n):
        if n2 is None:
            continue
        L = ka_r_aperture(n1, n2, n3)
        if log is not None:
            log.append((n1, n2, n3, L))
        if L < best_L:
            continue
        p = KloveParams(n1, n2, n3)
        if L > best_L:
            best, best_L, best_arr, best_vs = p, L, None, None
            continue
        # tie on aperture: fall back to the regularizer
        if best_arr is None:
            best_arr = ka(best)
            best_vs = varsigma(best_arr)
        arr = ka(p)
        vs = varsigma(arr)
        if (vs, arr.positions) < (best_vs, best_arr.positions):
            best, best_arr, best_vs = p, arr, vs
    if best is None:
        raise ValueError(f"no feasible KA with {n} sensors")
    if best_arr is None:
        best_arr = ka(best)
        best_vs = varsigma(best_arr)
    return SearchOutcome(best, best_arr, best_L, 2 * best_L + 1, best_vs, log)


KA_R_CLOSED_FORM_SIZES = (20, 43, 66, 112, 250)


def ka_r_closed(n: int) -> Optional[KloveParams]:
    """Closed-form KA parameters, defined only for the five sizes where the
    relaxed optimum is integral."""
    if n not in KA_R_CLOSED_FORM_SIZES:
        return None
    return KloveParams((n + 3) // 23, 5 * (n + 3) // 23, (9 * n - 42) // (n + 26))


def ka_r_closed_aperture(n: int) -> Fraction:
    return Fraction(3 * n * n + 18 * n - 19, 23)


def grid_size_bound(n: int) -> tuple[int, float]:
    """Number of grid points the KA search visits, and its analytic bound."""
    if n < 2:
        raise ValueError("need at least two sensors")
    actual = sum((n - 4 * n1) // (n1 + 1) + 1 for n1 in range((n - 2) // 4 + 1))
    bound = (n + 4) * math.log(n / 2 + 2) - 3 * (n + 2) / 4
    return actual, bound


# --- NA / KMA (non-contiguous sum co-arrays) --------------------------------------

def _h(arr: SensorArray) -> int:
    return contiguous_dof(sum_coarray(arr))[0]


def na_opt(n: int) -> SearchOutcome:
    """NA parameters with ``n`` sensors maximizing the contiguous DoFs."""
    if n < 2:
        raise ValueError("need at least two sensors")

    def cands():
        for n1 in range(0, n + 1):
            p = NestedParams(n1, n - n1)
            arr = nested(p)
            yield _h(arr), p, arr

    h, p, arr, vs = _select(cands())
    return SearchOutcome(p, arr, arr.aperture(), h, vs)


def kma_count(p: KloveParams) -> int:
    return cna_count(p.nested) + p.n3 * (p.n1 + 1)


def kma_opt(n: int, aperture: Optional[int] = None) -> SearchOutcome:
    """KMA parameters with ``n`` sensors maximizing the contiguous DoFs,
    optionally restricted to a fixed aperture."""
    if n < 2:
        raise ValueError("need at least two sensors")

    def cands():
        for n1 in range(0, n + 1):
            for n2 in range(0, n + 1):
                if n1 == n2 == 0:
                    continue
                rest = n - cna_count(NestedParams(n1, n2))
                if rest < 0 or rest % (n1 + 1):
                    continue
                p = KloveParams(n1, n2, rest // (n1 + 1))
                arr = kma(p)
                if aperture is not None and arr.aperture() != aperture:
                    continue
                yield _h(arr), p, arr

    h, p, arr, vs = _select(cands())
    return SearchOutcome(p, arr, arr.aperture(), h, vs)


def cna_sweep_outcome(n: int) -> SearchOutcome:
    p, _ = cna_opt(n)
    arr = cna(p)
    return SearchOutcome(p, arr, arr.aperture(), 2 * arr.aperture() + 1, varsigma(arr))


# --- MRA --------------------------------------------------------------------------

def mra_search(n: int, restricted: bool = False, limit: int = mra.DEFAULT_LIMIT) -> SearchOutcome:
    """Exhaustive (restricted) minimum-redundancy array for ``n`` sensors."""
    res = mra.exhaustive_search(n, restricted=restricted, limit=limit)
    ref = max(a.aperture() for a in res.ties)
    return SearchOutcome(res.array, res.array, res.array.aperture(), res.contiguous_dof,
                         varsigma(res.array, ref), list(res.ties))
