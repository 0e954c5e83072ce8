"""Parametric array constructions and the symmetric-generator conditions.

Covers the ULA, Nested Array (NA), Concatenated Nested Array (CNA),
Kløve-Mossige generator (KMA), Kløve Array (KA), Reduced Redundancy Array
(RRA) and the symmetric combinator ``G ∪ (max G - G + λ)``.
"""
from __future__ import annotations

from dataclasses import dataclass

from .coarray import (
    SensorArray,
    diff_coarray,
    first_hole,
    lowest_zero_bit,
    sum_coarray,
    sum_mask,
)


@dataclass(frozen=True)
class NestedParams:
    n1: int
    n2: int

    def __post_init__(self):
        if self.n1 < 0 or self.n2 < 0:
            raise ValueError("nested parameters must be non-negative")


@dataclass(frozen=True)
class KloveParams:
    n1: int
    n2: int
    n3: int

    def __post_init__(self):
        if min(self.n1, self.n2, self.n3) < 0:
            raise ValueError("Kløve parameters must be non-negative")
        if self.n1 == 0 and self.n2 == 0:
            raise ValueError("undefined for n1 = n2 = 0")

    @property
    def nested(self) -> NestedParams:
        return NestedParams(self.n1, self.n2)


@dataclass(frozen=True)
class ShiftedGenerator:
    generator: SensorArray
    shift: int

    def __post_init__(self):
        if self.shift < 0:
            raise ValueError("shift must be non-negative")
        if not self.generator.is_normalized:
            raise ValueError("generator must start at 0")

    @property
    def aperture(self) -> int:
        return self.generator.positions[-1] + self.shift


@dataclass(frozen=True)
class RraParams:
    prefix: SensorArray
    suffix: SensorArray
    mid_spacing: int
    total_sensors: int


def _range(start: int, step: int, stop: int) -> list[int]:
    """Inclusive ``{start:step:stop}``; a zero step yields ``{start}``."""
    if step == 0:
        return [start] if stop >= start else []
    return list(range(start, stop + 1, step))


def ula(n: int) -> SensorArray:
    if n < 1:
        raise ValueError("ULA needs at least one sensor")
    return SensorArray(tuple(range(n)))


def _nested_parts(p: NestedParams) -> tuple[list[int], list[int]]:
    d1 = list(range(p.n1))
    d2 = _range(0, p.n1 + 1, (p.n2 - 1) * (p.n1 + 1))
    return d1, d2


def nested(p: NestedParams) -> SensorArray:
    """Nested array ``D1 ∪ (D2 + N1)``."""
    d1, d2 = _nested_parts(p)
    pos = set(d1) | {x + p.n1 for x in d2}
    if not pos:
        raise ValueError("empty array")
    return SensorArray.of(pos)


def cna(p: NestedParams) -> SensorArray:
    """Concatenated nested array: dense ULA, sparse ULA, dense ULA."""
    d1, d2 = _nested_parts(p)
    tail = p.n2 * (p.n1 + 1)
    pos = set(d1) | {x + p.n1 for x in d2} | {x + tail for x in d1}
    if not pos:
        raise ValueError("empty array")
    return SensorArray.of(pos)


def cna_aperture(p: NestedParams) -> int:
    return (p.n1 + 1) * (p.n2 + 1) - 2


def cna_count(p: NestedParams) -> int:
    return p.n1 if p.n2 == 0 else 2 * p.n1 + p.n2


def cna_unit_spacings(p: NestedParams) -> int:
    if p.n2 == 0:
        return p.n1 - 1
    if p.n1 == 0:
        return p.n2 - 1
    return 2 * p.n1


def _klove_mid(p: KloveParams, cna_max: int) -> list[int]:
    """The sparse middle section ``D3`` before its offset."""
    base = _range(0, p.n1, p.n1 * p.n1)
    period = p.n1 * p.n1 + cna_max + 1
    return [b + (i - 1) * period for i in range(1, p.n3 + 1) for b in base]


def kma(p: KloveParams) -> SensorArray:
    """Kløve-Mossige generator ``D_CNA ∪ (D3 + 2 max D_CNA + 1)``."""
    core = cna(p.nested)
    m = core.positions[-1]
    return core.union(x + 2 * m + 1 for x in _klove_mid(p, m))


def ka(p: KloveParams) -> SensorArray:
    """Kløve array: two CNAs joined by ``N3`` sub-sampled ULAs."""
    core = cna(p.nested)
    m = core.positions[-1]
    mid = (x + 2 * m + 1 for x in _klove_mid(p, m))
    tail_offset = (p.n3 + 2) * m + p.n3 * (p.n1 * p.n1 + 1) + 1
    return core.union(mid, (x + tail_offset for x in core))


def ka_aperture(p: KloveParams) -> int:
    if p.n2 < 1:
        return ka(p).aperture()
    return (p.n1 + 1) * (p.n3 * (p.n1 + p.n2) + 3 * p.n2 + 3) - 5


def ka_count(p: KloveParams) -> int:
    if p.n2 < 1:
        return len(ka(p))
    return 2 * (2 * p.n1 + p.n2) + p.n3 * (p.n1 + 1)


def ka_unit_spacings(p: KloveParams) -> int:
    """Closed-form ``S(1)`` of the KA (valid for ``n2 >= 1``)."""
    if p.n1 == 0 and p.n2 == 1:
        return p.n3 + 1
    if p.n1 == 0:
        return 2 * (p.n2 - 1)
    if p.n1 == 1:
        return p.n3 + 4
    return 4 * p.n1


def symmetrize(g: ShiftedGenerator) -> SensorArray:
    """``G ∪ (max G - G + λ)``."""
    top = g.generator.positions[-1] + g.shift
    return g.generator.union(top - x for x in g.generator)


def rra(p: RraParams) -> SensorArray:
    """Prefix, uniform mid-section with spacing ``M``, suffix."""
    n_p, n_s, n = len(p.prefix), len(p.suffix), p.total_sensors
    if p.mid_spacing < 1:
        raise ValueError("mid spacing must be positive")
    if not (p.prefix.is_normalized and p.suffix.is_normalized):
        raise ValueError("prefix and suffix must start at 0")
    steps = n - n_p - n_s + 1
    if steps < 0:
        raise ValueError("inconsistent counts: too few sensors for prefix and suffix")
    mid = [i * p.mid_spacing for i in range(steps + 1)]
    pmax = p.prefix.positions[-1]
    out = p.prefix.union(
        (x + pmax for x in mid),
        (x + pmax + mid[-1] for x in p.suffix),
    )
    if len(out) != n:
        raise ValueError(f"inconsistent counts: construction yields {len(out)} sensors, not {n}")
    return out


# --- contiguity conditions for the symmetric construction ------------------

def check_conditions(g: ShiftedGenerator) -> tuple[bool, bool]:
    """Evaluate the two set inclusions that together are equivalent to a
    contiguous sum co-array of :func:`symmetrize` ``(g)``.

    Returns ``(c1, c2)`` where

    * c1: ``(G-G) ∪ (G+G-L) ∪ (L-(G+G)) ⊇ {0..max G}``
    * c2: ``G+G ⊇ {0..λ-1}``
    """
    gp = g.generator.positions
    gmax = gp[-1]
    L = gmax + g.shift
    sums = sum_mask(gp)
    diffs = set(diff_coarray(g.generator).elements)
    covered = set(diffs)
    s = sums
    while s:
        low = s & -s
        v = low.bit_length() - 1
        covered.add(v - L)
        covered.add(L - v)
        s ^= low
    c1 = all(v in covered for v in range(gmax + 1))
    c2 = lowest_zero_bit(sums) >= g.shift
    return c1, c2


@dataclass(frozen=True)
class SufficientConditions:
    c1_diff_contiguous: bool
    c1_sum_contiguous_small_shift: bool
    c2_shift_at_most_1: bool
    c2_shift_at_most_3_with_unit_pair: bool
    c2_sum_contiguous_shift_bounded: bool

    @property
    def c1(self) -> bool:
        return self.c1_diff_contiguous or self.c1_sum_contiguous_small_shift

    @property
    def c2(self) -> bool:
        return (self.c2_shift_at_most_1 or self.c2_shift_at_most_3_with_unit_pair
                or self.c2_sum_contiguous_shift_bounded)


def sufficient_conditions(g: ShiftedGenerator) -> SufficientConditions:
    """Cheap shortcuts that each imply one of the two conditions.

    The ``λ <= 3`` shortcut requires ``{0, 1} ⊆ G``; a generator such as
    ``{0, 2, 3}`` has two or more sensors but ``1 ∉ G + G``.
    """
    gen = g.generator
    gmax = gen.positions[-1]
    lam = g.shift
    diff_ok = diff_coarray(gen).is_contiguous()
    sum_ok = sum_coarray(gen).is_contiguous()
    return SufficientConditions(
        c1_diff_contiguous=diff_ok,
        c1_sum_contiguous_small_shift=sum_ok and lam <= gmax + 1,
        c2_shift_at_most_1=lam <= 1,
        c2_shift_at_most_3_with_unit_pair=lam <= 3 and len(gen) >= 2 and 1 in gen,
        c2_sum_contiguous_shift_bounded=sum_ok and lam <= 2 * gmax + 1,
    )


def na_first_hole(p: NestedParams) -> int:
    """First hole of the NA sum co-array, i.e. the largest admissible shift
    of the symmetric nested array."""
    if p.n1 + p.n2 < 1:
        raise ValueError("need n1 + n2 >= 1")
    if p.n1 == 0 or p.n2 == 0:
        return 2 * (p.n1 + p.n2) - 1
    return p.n2 * (p.n1 + 1) + p.n1


def kma_first_hole(p: KloveParams) -> int:
    """First hole of the KMA sum co-array in closed form."""
    g_max = kma(p).positions[-1]
    if p.n1 + p.n2 == 1 or p.n3 == 0:
        # ULA, or the generator is just a CNA (contiguous sum co-array)
        return 2 * g_max + 1
    c = cna_aperture(p.nested)
    h = p.n3 * (c + 1 + p.n1 * p.n1) + 2 * c + 1
    # with n1 = 1 the extra representation of h + 1 does not exist
    if p.n1 >= 2 and p.n2 == 1:
        return h + 1
    return h


def cna_shift(p: NestedParams, k: int) -> int:
    """Shift making the symmetric NA coincide with a CNA, ``k in 0..N2``."""
    return (p.n1 + 1) * k + p.n1


def ka_shift(p: KloveParams, k: int) -> int:
    """Shift ``λ`` for which ``symmetrize(kma(p), λ) == ka(n1, n2, n3 + k)``.

    The step in ``k`` is one period of the middle section, ``max D_CNA + N1² + 1``.
    """
    c = cna_aperture(p.nested)
    return 2 * c + 1 + (c + p.n1 * p.n1 + 1) * k


def sum_first_hole(d: SensorArray) -> int:
    return first_hole(sum_coarray(d))


# --- name-based dispatch (CLI and config files) ----------------------------

CONSTRUCTIONS = ("ula", "nested", "cna", "kma", "ka", "rra", "symmetric")


def build(kind: str, **params) -> SensorArray:
    """Build an array from a construction name and keyword parameters.

    ``ula`` takes ``n``; ``nested``/``cna`` take ``n1, n2``; ``kma``/``ka``
    take ``n1, n2, n3``; ``symmetric`` takes ``generator`` (positions) and
    ``shift``; ``rra`` takes ``prefix``, ``suffix``, ``mid_spacing`` and
    ``n``. Unknown or missing parameters raise ``ValueError``.
    """
    def take(*names):
        missing = [k for k in names if params.get(k) is None]
        extra = [k for k, v in params.items() if v is not None and k not in names]
        if missing or extra:
            raise ValueError(f"{kind} expects parameters {', '.join(names)}"
                             + (f"; missing {', '.join(missing)}" if missing else "")
                             + (f"; unexpected {', '.join(extra)}" if extra else ""))
        return [params[k] for k in names]

    if kind == "ula":
        (n,) = take("n")
        return ula(int(n))
    if kind in ("nested", "cna"):
        n1, n2 = take("n1", "n2")
        p = NestedParams(int(n1), int(n2))
        return nested(p) if kind == "nested" else cna(p)
    if kind in ("kma", "ka"):
        n1, n2, n3 = take("n1", "n2", "n3")
        p = KloveParams(int(n1), int(n2), int(n3))
        return kma(p) if kind == "kma" else ka(p)
    if kind == "symmetric":
        gen, shift = take("generator", "shift")
        return symmetrize(ShiftedGenerator(SensorArray.of(gen), int(shift)))
    if kind == "rra":
        pre, suf, m, n = take("prefix", "suffix", "mid_spacing", "n")
        return rra(RraParams(SensorArray.of(pre), SensorArray.of(suf), int(m), int(n)))
    raise ValueError(f"unknown construction {kind!r}; expected one of {', '.join(CONSTRUCTIONS)}")
