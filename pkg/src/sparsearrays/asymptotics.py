"""Closed-form scaling rows and asymptotic figures of merit.

Each family is summarized by two limits: the redundancy ``R∞`` and the
co-array filling ratio ``F∞`` (contiguous DoFs over the full span
``2L + 1``). Some of these are only known up to bounds, so ratios against
the restricted MRA are computed with interval arithmetic.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

INF = math.inf


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    @classmethod
    def point(cls, x) -> "Interval":
        return cls(float(x), float(x))

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    def __mul__(self, other: "Interval") -> "Interval":
        prods = [_mul(a, b) for a in (self.lo, self.hi) for b in (other.lo, other.hi)]
        return Interval(min(prods), max(prods))

    def inverse(self) -> "Interval":
        return Interval(_div(1.0, self.hi), _div(1.0, self.lo))

    def __truediv__(self, other: "Interval") -> "Interval":
        return self * other.inverse()

    def sqrt(self) -> "Interval":
        return Interval(math.sqrt(self.lo), math.sqrt(self.hi))

    def clip(self, lo: float = -INF, hi: float = INF) -> "Interval":
        return Interval(min(max(self.lo, lo), hi), min(max(self.hi, lo), hi))

    def format(self, digits: int = 2) -> str:
        def f(x):
            return "inf" if x == INF else f"{x:.{digits}f}"
        return f(self.lo) if f(self.lo) == f(self.hi) else f"{f(self.lo)}-{f(self.hi)}"


def _mul(a: float, b: float) -> float:
    # 0 * inf shows up only for degenerate families; treat it as 0
    if a == 0 or b == 0:
        return 0.0
    return a * b


def _div(a: float, b: float) -> float:
    if b == 0:
        return INF
    if b == INF:
        return 0.0
    return a / b


@dataclass(frozen=True)
class AsymptoticConstants:
    """``R∞`` and ``F∞`` of one family; bounds as exact strings plus floats."""
    name: str
    r_lo: float
    r_hi: float
    f_lo: float
    f_hi: float
    r_text: str
    f_text: str
    contiguous_sum: bool

    @property
    def r(self) -> Interval:
        return Interval(self.r_lo, self.r_hi)

    @property
    def f(self) -> Interval:
        return Interval(self.f_lo, self.f_hi)


R_MRA_LOWER = 11 / (7 + math.sqrt(5))
R_MRA_UPPER = Fraction(23, 12)
MRA_LOWER = 1 / 0.917
MRA_UPPER = Fraction(147, 85)

CONSTANTS: dict[str, AsymptoticConstants] = {
    c.name: c for c in (
        AsymptoticConstants("MRA", MRA_LOWER, float(MRA_UPPER), 0.5, 1.0,
                            "1/0.917 .. 147/85", "1/2 .. 1", False),
        AsymptoticConstants("NA", 2.0, 2.0, 0.5, 0.5, "2", "1/2", False),
        AsymptoticConstants("KMA", 1.75, 1.75, 7 / 11, 7 / 11, "7/4", "7/11", False),
        AsymptoticConstants("R-MRA", R_MRA_LOWER, float(R_MRA_UPPER), 1.0, 1.0,
                            "11/(7+sqrt(5)) .. 23/12", "1", True),
        AsymptoticConstants("RRA", INF, INF, 1.0, 1.0, "inf", "1", True),
        AsymptoticConstants("CNA", 2.0, 2.0, 1.0, 1.0, "2", "1", True),
        AsymptoticConstants("KA_S", 2.0, 2.0, 1.0, 1.0, "2", "1", True),
        AsymptoticConstants("KA_R", float(R_MRA_UPPER), float(R_MRA_UPPER), 1.0, 1.0, "23/12", "1", True),
    )
}

RATIO_COLUMNS = ("H_N", "H_L", "N_H", "N_L", "L_H", "L_N")
"""Limits of H, N and L relative to a reference family, with the quantity
held growing named second (``H_N`` is ``H/H_ref`` as ``N → ∞``)."""


def relative_ratios(a: AsymptoticConstants, ref: AsymptoticConstants) -> dict[str, Interval]:
    """Asymptotic ratios of family ``a`` to ``ref``.

    With ``H ≈ N²/(2R)`` and ``H ≈ 2FL``:

    * equal N: ``H/H_ref = R_ref/R``, ``L/L_ref = (R_ref/R)(F_ref/F)``
    * equal L: ``H/H_ref = F/F_ref``, ``N/N_ref = sqrt((R/R_ref)(F/F_ref))``
    * equal H: ``N/N_ref = sqrt(R/R_ref)``, ``L/L_ref = F_ref/F``
    """
    if a.name == ref.name:
        one = Interval.point(1)
        return {c: one for c in RATIO_COLUMNS}
    r_ratio = a.r / ref.r
    f_ratio = a.f / ref.f
    out = {
        "H_N": r_ratio.inverse(),
        "H_L": f_ratio,
        "N_H": r_ratio.sqrt(),
        "N_L": (r_ratio * f_ratio).sqrt(),
        "L_H": f_ratio.inverse(),
        "L_N": (r_ratio * f_ratio).inverse(),
    }
    if a.name == "MRA" and ref.name == "R-MRA":
        # an R-MRA is feasible for the MRA problem, so the MRA dominates it
        out["H_N"] = out["H_N"].clip(lo=1)
        out["N_H"] = out["N_H"].clip(hi=1)
        out["N_L"] = out["N_L"].clip(hi=1)
        out["L_H"] = out["L_H"].clip(lo=1)
        out["L_N"] = out["L_N"].clip(lo=1)
    return out


def asymptotic_table(reference: str = "R-MRA") -> list[dict]:
    ref = CONSTANTS[reference]
    rows = []
    for c in CONSTANTS.values():
        row = {"array": c.name, "R_inf": c.r_text, "F_inf": c.f_text}
        row.update({k: v for k, v in relative_ratios(c, ref).items()})
        rows.append(row)
    return rows


# --- closed-form scaling rows -------------------------------------------------

@dataclass(frozen=True)
class ScalingRow:
    """Representative formulas for the parameters maximizing ``H``.

    ``None`` marks an entry with no closed form. Callables take ``N`` (or
    ``L`` for ``sensors``) and return exact fractions, or a float where a
    square root is involved.
    """
    name: str
    symmetric: bool
    contiguous_sum: bool
    h_text: str
    total_text: str
    aperture_text: str
    sensors_text: str
    unit_spacings_text: str
    h: Optional[Callable[[int], Fraction]] = None
    aperture: Optional[Callable[[int], Fraction]] = None
    sensors: Optional[Callable[[int], float]] = None
    unit_spacings: Optional[Callable[[int], Fraction]] = None


def _F(p, q=1):
    return Fraction(p, q)


SCALING_ROWS: tuple[ScalingRow, ...] = (
    ScalingRow("MRA", False, False, "n/a", "n/a", ">= (H-1)/2 and <= H", "n/a", ">= 1"),
    ScalingRow("NA", False, False, "(N^2+2N-4)/4", "H+N/2-1", "(N^2+4N)/4", "sqrt(4L+5)-1", "N/2",
               h=lambda n: _F(n * n + 2 * n - 4, 4), aperture=lambda n: _F(n * n + 4 * n, 4),
               sensors=lambda L: math.sqrt(4 * L + 5) - 1, unit_spacings=lambda n: _F(n, 2)),
    ScalingRow("KMA", False, False, "(2N^2+8N+1)/7", "H+6N/7+O(1)", "(11N^2+16N-61)/49",
               "(7*sqrt(11L+15)-8)/11", "2(N+2)/7",
               h=lambda n: _F(2 * n * n + 8 * n + 1, 7), aperture=lambda n: _F(11 * n * n + 16 * n - 61, 49),
               sensors=lambda L: (7 * math.sqrt(11 * L + 15) - 8) / 11, unit_spacings=lambda n: _F(2 * (n + 2), 7)),
    ScalingRow("R-MRA", False, True, "n/a", "H", "(H-1)/2", "n/a", ">= 2"),
    ScalingRow("RRA", True, True, "30N-706", "H", "15N-353", "(L+353)/15", "10",
               h=lambda n: _F(30 * n - 706), aperture=lambda n: _F(15 * n - 353),
               sensors=lambda L: (L + 353) / 15, unit_spacings=lambda n: _F(10)),
    ScalingRow("CNA", True, True, "(N^2+6N-3)/4", "H", "(N^2+6N-7)/8", "2*sqrt(2)*sqrt(L+2)-3", "N/2-1/2",
               h=lambda n: _F(n * n + 6 * n - 3, 4), aperture=lambda n: _F(n * n + 6 * n - 7, 8),
               sensors=lambda L: 2 * math.sqrt(2) * math.sqrt(L + 2) - 3, unit_spacings=lambda n: _F(n - 1, 2)),
    ScalingRow("KA_S", True, True, "(N^2+10N-83)/4", "H", "(N^2+10N-87)/8", "2*sqrt(2)*sqrt(L+14)-5", "8",
               h=lambda n: _F(n * n + 10 * n - 83, 4), aperture=lambda n: _F(n * n + 10 * n - 87, 8),
               sensors=lambda L: 2 * math.sqrt(2) * math.sqrt(L + 14) - 5, unit_spacings=lambda n: _F(8)),
    ScalingRow("KA_R", True, True, "(6N^2+36N-15)/23", "H", "(3N^2+18N-19)/23", "sqrt(23/3)*sqrt(L+2)-3",
               "4N/23+12/23",
               h=lambda n: _F(6 * n * n + 36 * n - 15, 23), aperture=lambda n: _F(3 * n * n + 18 * n - 19, 23),
               sensors=lambda L: math.sqrt(23 / 3) * math.sqrt(L + 2) - 3,
               unit_spacings=lambda n: _F(4 * n + 12, 23)),
)


def scaling_row(name: str) -> ScalingRow:
    for r in SCALING_ROWS:
        if r.name == name:
            return r
    raise KeyError(name)
