"""Sensor arrays, their sum/difference co-arrays and scalar figures of merit.

Positions are non-negative integers in units of the base inter-sensor
spacing. Set algebra runs on Python ``int`` bitsets for apertures up to
``DENSE_LIMIT`` and on sorted numpy vectors above that.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

DENSE_LIMIT = 10**6
MAX_POSITION = 2**31


class CoArrayKind(str, enum.Enum):
    SUM = "sum"
    DIFFERENCE = "difference"


@dataclass(frozen=True)
class SensorArray:
    """Physical linear array as a strictly increasing tuple of positions.

    Use :meth:`of` to build one from an arbitrary iterable (duplicates are
    dropped and the positions sorted); the plain constructor validates.
    """

    positions: tuple[int, ...]

    def __post_init__(self):
        pos = tuple(int(p) for p in self.positions)
        object.__setattr__(self, "positions", pos)
        for a, b in zip(pos, pos[1:]):
            if b <= a:
                raise ValueError("positions must be strictly increasing")
        if pos and pos[0] < 0:
            raise ValueError("positions must be non-negative")
        if pos and pos[-1] > MAX_POSITION:
            raise ValueError(f"positions above {MAX_POSITION} are not supported")

    @classmethod
    def of(cls, positions: Iterable[int]) -> "SensorArray":
        return cls(tuple(sorted({int(p) for p in positions})))

    def __len__(self):
        return len(self.positions)

    def __iter__(self):
        return iter(self.positions)

    def __contains__(self, item):
        return item in self._set

    @property
    def _set(self) -> frozenset:
        # cached lazily; dataclass is frozen so go through object.__setattr__
        try:
            return self.__dict__["_cached_set"]
        except KeyError:
            s = frozenset(self.positions)
            object.__setattr__(self, "_cached_set", s)
            return s

    @property
    def n(self) -> int:
        return len(self.positions)

    def aperture(self) -> int:
        if not self.positions:
            raise ValueError("empty array")
        return self.positions[-1] - self.positions[0]

    @property
    def is_normalized(self) -> bool:
        return bool(self.positions) and self.positions[0] == 0

    def normalized(self) -> "SensorArray":
        if not self.positions:
            raise ValueError("empty array")
        p0 = self.positions[0]
        return SensorArray(tuple(p - p0 for p in self.positions))

    def shifted(self, offset: int) -> "SensorArray":
        return SensorArray(tuple(p + offset for p in self.positions))

    def mirrored(self) -> "SensorArray":
        """Return ``max(D) - D``."""
        top = self.positions[-1]
        return SensorArray(tuple(top - p for p in reversed(self.positions)))

    def union(self, *others: Iterable[int]) -> "SensorArray":
        out = set(self.positions)
        for o in others:
            out.update(o)
        return SensorArray.of(out)

    def __str__(self):
        return "{" + ",".join(map(str, self.positions)) + "}"


@dataclass(frozen=True)
class CoArray:
    """Virtual array: sorted set of (possibly negative) integer positions."""

    elements: tuple[int, ...]
    kind: CoArrayKind

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(int(e) for e in self.elements))
        object.__setattr__(self, "kind", CoArrayKind(self.kind))

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, item):
        try:
            s = self.__dict__["_cached_set"]
        except KeyError:
            s = frozenset(self.elements)
            object.__setattr__(self, "_cached_set", s)
        return item in s

    def is_contiguous(self) -> bool:
        e = self.elements
        return bool(e) and e[-1] - e[0] + 1 == len(e)

    def shifted(self, offset: int) -> "CoArray":
        return CoArray(tuple(x + offset for x in self.elements), self.kind)


# --- bitset helpers -------------------------------------------------------

def _mask(positions: Iterable[int]) -> int:
    m = 0
    for p in positions:
        m |= 1 << p
    return m


def _bits(mask: int) -> np.ndarray:
    """Indices of set bits of a non-negative int, ascending."""
    if mask == 0:
        return np.zeros(0, dtype=np.int64)
    raw = mask.to_bytes((mask.bit_length() + 7) // 8, "little")
    bits = np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="little")
    return np.flatnonzero(bits).astype(np.int64)


def _sumset(a: Sequence[int], b: Sequence[int]) -> np.ndarray:
    """Sorted set {x + y} for non-negative sorted inputs."""
    if max(a[-1], b[-1]) <= DENSE_LIMIT:
        mb = _mask(b)
        acc = 0
        for x in a:
            acc |= mb << x
        return _bits(acc)
    av = np.asarray(a, dtype=np.int64)
    bv = np.asarray(b, dtype=np.int64)
    return np.unique(np.add.outer(av, bv).ravel())


def sum_mask(positions: Sequence[int]) -> int:
    """Bitset of ``D + D`` for small non-negative position sets."""
    m = _mask(positions)
    acc = 0
    for p in positions:
        acc |= m << p
    return acc


def lowest_zero_bit(mask: int) -> int:
    return (~mask & (mask + 1)).bit_length() - 1


# --- co-arrays ------------------------------------------------------------

def sum_coarray(d: SensorArray) -> CoArray:
    """Sum co-array ``{d_n + d_m}`` over all ordered pairs."""
    if not d.positions:
        raise ValueError("empty array")
    p = d.positions
    return CoArray(tuple(_sumset(p, p).tolist()), CoArrayKind.SUM)


def diff_coarray(d: SensorArray) -> CoArray:
    """Difference co-array ``{d_n - d_m}``; symmetric about zero."""
    if not d.positions:
        raise ValueError("empty array")
    p = d.positions
    top = p[-1]
    mirror = [top - x for x in reversed(p)]
    elems = _sumset(p, mirror) - top
    return CoArray(tuple(elems.tolist()), CoArrayKind.DIFFERENCE)


def contiguous_dof(c: CoArray) -> tuple[int, int]:
    """Length ``h`` and start ``s`` of the longest run of consecutive
    integers in ``c``. Ties go to the smallest ``s``."""
    if not c.elements:
        raise ValueError("empty co-array")
    e = np.asarray(c.elements, dtype=np.int64)
    breaks = np.flatnonzero(np.diff(e) != 1)
    starts = np.concatenate(([0], breaks + 1))
    ends = np.concatenate((breaks, [len(e) - 1]))
    lengths = ends - starts + 1
    i = int(np.argmax(lengths))  # argmax returns the first maximum
    return int(lengths[i]), int(e[starts[i]])


def first_hole(c: CoArray) -> int:
    """Smallest non-negative integer missing from ``c``."""
    e = np.asarray(c.elements, dtype=np.int64)
    e = e[e >= 0]
    # e is sorted and unique, so e[i] == i on the covered prefix
    miss = np.flatnonzero(e != np.arange(len(e)))
    return int(miss[0]) if len(miss) else len(e)


def weights(d: SensorArray) -> tuple[int, ...]:
    """``S(1), ..., S(L)``: number of unordered sensor pairs at each
    displacement. ``S(0)`` is not included."""
    if not d.positions:
        raise ValueError("empty array")
    L = d.aperture()
    if L == 0:
        return ()
    p = np.asarray(d.positions, dtype=np.int64)
    iu = np.triu_indices(len(p), k=1)
    diffs = (p[None, :] - p[:, None])[iu]
    counts = np.bincount(diffs, minlength=L + 1)
    return tuple(int(x) for x in counts[1:])


def _digits(n: int) -> int:
    # floor(log10 n) + 1 without floating point
    return len(str(n))


def varsigma_from_weights(w: Sequence[int], reference_aperture: int) -> Decimal:
    """Exact regularizer value given the weight table ``S(1..L)``."""
    if not w:
        return Decimal(0)
    if reference_aperture < len(w):
        raise ValueError("reference aperture must be at least the array aperture")
    k = _digits(reference_aperture)
    # S(d) <= L - d + 1 <= L_ref < 10**k, so each weight fits in k digits
    text = "".join(f"{s:0{k}d}" for s in w).rstrip("0")
    # built from a string so no context rounding is involved
    return Decimal("0." + text) if text else Decimal(0)


def varsigma(d: SensorArray, reference_aperture: int | None = None) -> Decimal:
    """Closely-spaced-sensor regularizer as an exact :class:`~decimal.Decimal`.

    ``reference_aperture`` fixes the digit width per displacement and should
    be the largest aperture among the candidates being compared. It defaults
    to the array's own aperture.
    """
    L = d.aperture()
    if L == 0:
        return Decimal(0)
    ref = L if reference_aperture is None else reference_aperture
    return varsigma_from_weights(weights(d), ref)


def is_symmetric(d: SensorArray) -> bool:
    """True iff ``D == max(D) - D``."""
    if not d.positions:
        raise ValueError("empty array")
    return d.mirrored().positions == d.normalized().positions


def check_necessary_sensors(d: SensorArray, kind: CoArrayKind | str = CoArrayKind.SUM) -> bool:
    """Whether ``d`` contains the end sensors that a contiguous co-array of
    the given kind requires."""
    kind = CoArrayKind(kind)
    if len(d) < 2:
        raise ValueError("need at least two sensors")
    if not d.is_normalized:
        raise ValueError("array must start at 0")
    L = d.aperture()
    if kind is CoArrayKind.SUM:
        return all(x in d for x in (0, 1, L - 1, L))
    return all(x in d for x in (0, 1, L)) or all(x in d for x in (0, L - 1, L))


@dataclass(frozen=True)
class ArrayMetrics:
    n_sensors: int
    aperture: int
    contiguous_dof: int
    offset: int
    first_hole: int
    redundancy: Fraction
    total_dof: int
    weights: tuple[int, ...]
    varsigma: Decimal
    symmetric: bool

    def weight(self, d: int) -> int:
        if d < 1:
            raise ValueError("weights are defined for d >= 1")
        return self.weights[d - 1] if d <= len(self.weights) else 0

    @property
    def sum_contiguous(self) -> bool:
        return self.first_hole == 2 * self.aperture + 1

    def as_dict(self) -> dict:
        return {
            "n_sensors": self.n_sensors,
            "aperture": self.aperture,
            "contiguous_dof": self.contiguous_dof,
            "offset": self.offset,
            "first_hole": self.first_hole,
            "redundancy": f"{self.redundancy.numerator}/{self.redundancy.denominator}",
            "total_dof": self.total_dof,
            "weights": list(self.weights),
            "varsigma": str(self.varsigma),
            "symmetric": self.symmetric,
        }


def redundancy(n_sensors: int, h: int) -> Fraction:
    return Fraction(n_sensors * (n_sensors + 1), 2 * h)


def metrics(d: SensorArray, reference_aperture: int | None = None) -> ArrayMetrics:
    """All figures of merit of a normalized array."""
    if not d.positions:
        raise ValueError("empty array")
    if not d.is_normalized:
        raise ValueError("array must start at 0")
    sc = sum_coarray(d)
    h, s = contiguous_dof(sc)
    w = weights(d)
    L = d.aperture()
    ref = L if reference_aperture is None else reference_aperture
    return ArrayMetrics(
        n_sensors=len(d),
        aperture=L,
        contiguous_dof=h,
        offset=s,
        first_hole=first_hole(sc),
        redundancy=redundancy(len(d), h),
        total_dof=len(sc),
        weights=w,
        varsigma=varsigma_from_weights(w, ref) if L else Decimal(0),
        symmetric=is_symmetric(d),
    )
