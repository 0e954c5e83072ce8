"""Single-snapshot active sensing and greedy sparse recovery.

The matched-filtered snapshot of an ``N``-sensor array is a vector of
length ``N²`` whose noiseless part lives on the sum co-array: rows
``(n, m)`` and ``(m, n)``, and more generally any two rows with equal
``d_n + d_m``, are identical. :class:`VirtualDictionary` exploits this by
collapsing each group of equal rows into one row weighted by the square
root of its multiplicity, which leaves every correlation and least-squares
fit of OMP unchanged while shrinking the dictionary from ``N²`` to
``|D + D|`` rows.
"""
from __future__ import annotations

import json
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from .coarray import SensorArray

log = logging.getLogger(__name__)

RIDGE_SCALE = 1e-10
SINGULAR_RCOND = 1e-12


@dataclass(frozen=True)
class Scene:
    angles: np.ndarray
    coefficients: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.angles, dtype=float)
        g = np.asarray(self.coefficients, dtype=complex)
        if a.ndim != 1 or a.shape != g.shape:
            raise ValueError("angles and coefficients must be 1-D of equal length")
        if np.any(np.diff(a) <= 0):
            raise ValueError("angles must be strictly increasing")
        if np.any(np.abs(a) > 90):
            raise ValueError("angles must lie in [-90, 90] degrees")
        if not np.allclose(np.abs(g), 1.0, atol=1e-12):
            raise ValueError("coefficients must have unit modulus")
        object.__setattr__(self, "angles", a)
        object.__setattr__(self, "coefficients", g)

    @property
    def k_count(self) -> int:
        return len(self.angles)


def random_phases(k: int, rng: np.random.Generator) -> np.ndarray:
    """``z/|z|`` with ``z ~ CN(0, 1)``, i.e. uniformly random phases."""
    z = rng.standard_normal(k) + 1j * rng.standard_normal(k)
    return z / np.abs(z)


def uniform_grid(v: int, lo: float = -75.0, hi: float = 75.0) -> np.ndarray:
    if v < 1:
        raise ValueError("grid needs at least one point")
    if not (-90 <= lo <= hi <= 90):
        raise ValueError("grid must lie within [-90, 90] degrees")
    return np.linspace(lo, hi, v)


def snap_to_grid(angles: Sequence[float], grid: np.ndarray) -> np.ndarray:
    """Nearest grid point for each angle (lower index on exact ties)."""
    angles = np.asarray(angles, dtype=float)
    idx = np.clip(np.searchsorted(grid, angles), 1, len(grid) - 1)
    left, right = grid[idx - 1], grid[idx]
    idx = np.where(angles - left <= right - angles, idx - 1, idx)
    out = grid[idx]
    if len(np.unique(out)) != len(out):
        raise ValueError("grid too coarse: two angles snap to the same point")
    return out


@dataclass(frozen=True)
class MeasurementModel:
    array: SensorArray
    grid: np.ndarray
    delta: float = 0.5

    def __post_init__(self):
        g = np.asarray(self.grid, dtype=float)
        if g.ndim != 1 or len(g) == 0 or np.any(np.diff(g) <= 0):
            raise ValueError("grid must be a strictly increasing 1-D sequence")
        if np.any(np.abs(g) > 90):
            raise ValueError("grid must lie within [-90, 90] degrees")
        object.__setattr__(self, "grid", g)


@dataclass(frozen=True)
class Measurement:
    x: np.ndarray
    noise_variance: float


@dataclass(frozen=True)
class OmpResult:
    support: np.ndarray
    estimated_angles: np.ndarray
    coefficients: np.ndarray
    residual_norm: float
    residual_history: tuple[float, ...] = ()
    regularized: bool = False


def _phase(positions: np.ndarray, angles_deg: np.ndarray, delta: float) -> np.ndarray:
    s = np.sin(np.deg2rad(np.asarray(angles_deg, dtype=float)))
    return np.exp(2j * np.pi * delta * np.outer(positions, s))


def steering_matrix(m: MeasurementModel, angles: Sequence[float]) -> np.ndarray:
    """``N × len(angles)`` matrix with entries ``exp(j 2π d_n δ sin φ)``."""
    angles = np.asarray(angles, dtype=float)
    if np.any(np.abs(angles) > 90):
        raise ValueError("angles must lie in [-90, 90] degrees")
    return _phase(np.asarray(m.array.positions, dtype=float), angles, m.delta)


def khatri_rao(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Columnwise Kronecker product; row ``n*N + m`` is ``a[n] * b[m]``."""
    return (a[:, None, :] * b[None, :, :]).reshape(a.shape[0] * b.shape[0], a.shape[1])


def khatri_rao_dictionary(m: MeasurementModel, angles: Optional[Sequence[float]] = None) -> np.ndarray:
    """Full ``N² × V`` dictionary ``A ⊙ A`` on the model grid (or ``angles``)."""
    a = steering_matrix(m, m.grid if angles is None else angles)
    return khatri_rao(a, a)


@dataclass(frozen=True)
class VirtualDictionary:
    """Dictionary on the sum co-array.

    ``row_group[r]`` maps each of the ``N²`` physical rows to its virtual
    position index; ``matrix`` rows are ``sqrt(c_v) exp(j 2π v δ sin φ)``.
    """
    positions: np.ndarray
    multiplicity: np.ndarray
    row_group: np.ndarray
    matrix: np.ndarray
    grid: np.ndarray

    @classmethod
    def build(cls, m: MeasurementModel) -> "VirtualDictionary":
        d = np.asarray(m.array.positions, dtype=np.int64)
        sums = (d[:, None] + d[None, :]).ravel()
        positions, row_group, mult = np.unique(sums, return_inverse=True, return_counts=True)
        mat = np.sqrt(mult)[:, None] * _phase(positions.astype(float), m.grid, m.delta)
        return cls(positions, mult, row_group, mat, m.grid)

    def reduce(self, x: np.ndarray) -> tuple[np.ndarray, float]:
        """Weighted group means of ``x`` and the within-group residual energy
        that no dictionary column can explain."""
        sums = np.zeros(len(self.positions), dtype=complex)
        np.add.at(sums, self.row_group, x)
        means = sums / self.multiplicity
        within = float(np.sum(np.abs(x - means[self.row_group]) ** 2))
        return np.sqrt(self.multiplicity) * means, within


def simulate(m: MeasurementModel, s: Scene, snr_db: Optional[float],
             seed: Union[int, np.random.SeedSequence, np.random.Generator, None]) -> Measurement:
    """Snapshot ``x = (A ⊙ A) γ + n`` with white circular Gaussian noise.

    ``snr_db`` is the scene SNR ``K / σ²`` in dB; ``None`` means noiseless.
    """
    a = steering_matrix(m, s.angles)
    x = khatri_rao(a, a) @ s.coefficients
    if snr_db is None or math.isinf(snr_db):
        return Measurement(x, 0.0)
    sigma2 = s.k_count * 10.0 ** (-snr_db / 10.0)
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    noise = rng.standard_normal(x.shape) + 1j * rng.standard_normal(x.shape)
    return Measurement(x + math.sqrt(sigma2 / 2) * noise, sigma2)


def _refit(phi: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, bool]:
    """Least squares ``min ||y - phi g||``, ridge-regularized when ``phi``
    is numerically rank deficient."""
    g, _, _, sv = np.linalg.lstsq(phi, y, rcond=None)
    if phi.shape[1] <= phi.shape[0] and sv[-1] > SINGULAR_RCOND * sv[0]:
        return g, False
    gram = phi.conj().T @ phi
    lam = RIDGE_SCALE * np.real(np.trace(gram)) / gram.shape[0]
    g = np.linalg.solve(gram + lam * np.eye(gram.shape[0]), phi.conj().T @ y)
    return g, True


def omp(x: Union[Measurement, np.ndarray], dictionary: Union[np.ndarray, VirtualDictionary], k: int,
        grid: Optional[np.ndarray] = None) -> OmpResult:
    """Orthogonal matching pursuit with ``k`` selections.

    ``dictionary`` is either an explicit matrix (then ``grid`` gives the
    column angles, defaulting to the column indices) or a
    :class:`VirtualDictionary`. Each step picks the column with the largest
    normalized correlation with the residual, lowest index on ties, then
    refits all selected coefficients.
    """
    vec = x.x if isinstance(x, Measurement) else np.asarray(x, dtype=complex)
    if isinstance(dictionary, VirtualDictionary):
        y, floor = dictionary.reduce(vec)
        phi = dictionary.matrix
        grid = dictionary.grid
    else:
        y, floor, phi = vec, 0.0, np.asarray(dictionary)
        if grid is None:
            grid = np.arange(phi.shape[1], dtype=float)
    v = phi.shape[1]
    if not 1 <= k <= v:
        raise ValueError(f"k must be in 1..{v}")
    col_norm = np.linalg.norm(phi, axis=0)
    col_norm[col_norm == 0] = np.inf
    support: list[int] = []
    r = y.copy()
    g = np.zeros(0, dtype=complex)
    history = []
    regularized = False
    for _ in range(k):
        # |r^H phi| equals |phi^H r| and avoids materializing phi^H
        score = np.abs(r.conj() @ phi) / col_norm
        score[support] = -1.0
        support.append(int(np.argmax(score)))
        sub = phi[:, support]
        g, flagged = _refit(sub, y)
        regularized |= flagged
        r = y - sub @ g
        history.append(math.sqrt(float(np.vdot(r, r).real) + floor))
    order = np.argsort(grid[support], kind="stable")
    supp = np.asarray(support)[order]
    return OmpResult(supp, grid[supp], g[order], history[-1], tuple(history), regularized)


def rmse(est: Union[OmpResult, Sequence[float]], truth: Union[Scene, Sequence[float]]) -> float:
    """Root-mean-square angle error in degrees after sorting both lists."""
    e = np.sort(np.asarray(est.estimated_angles if isinstance(est, OmpResult) else est, dtype=float))
    t = np.sort(np.asarray(truth.angles if isinstance(truth, Scene) else truth, dtype=float))
    if e.shape != t.shape:
        raise ValueError("estimate and truth must have the same number of angles")
    return float(np.sqrt(np.mean((e - t) ** 2)))


# --- Monte Carlo experiment ------------------------------------------------

@dataclass(frozen=True)
class ArraySpec:
    name: str
    array: SensorArray


@dataclass(frozen=True)
class ExperimentConfig:
    arrays: tuple[ArraySpec, ...]
    seed: int
    trials: int = 1000
    grid_size: int = 10_000
    grid_lo: float = -75.0
    grid_hi: float = 75.0
    snrs_db: tuple[Optional[float], ...] = (None, 5.0)
    n_scatterers: int = 65
    angle_lo: float = -60.0
    angle_hi: float = 60.0
    delta: float = 0.5
    spectra_trials: int = 1
    threads: int = 1

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be positive")
        if not self.arrays:
            raise ValueError("at least one array is required")
        if self.n_scatterers < 1 or self.n_scatterers > self.grid_size:
            raise ValueError("need 1 <= scatterers <= grid size")
        if self.threads < 1:
            raise ValueError("threads must be positive")


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    rows: list[dict] = field(default_factory=list)
    spectra: list[dict] = field(default_factory=list)

    def mean_rmse(self) -> dict[tuple[str, Optional[float]], float]:
        acc: dict = {}
        for r in self.rows:
            acc.setdefault((r["array"], r["snr_db"]), []).append(r["rmse"])
        return {key: float(np.mean(v)) for key, v in acc.items()}

    def write_csv(self, path) -> None:
        import csv
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["trial", "array", "snr_db", "rmse"])
            for r in self.rows:
                w.writerow([r["trial"], r["array"], snr_label(r["snr_db"]), repr(r["rmse"])])

    def write_spectra(self, path) -> None:
        with open(path, "w") as fh:
            json.dump({"schema_version": "1", "spectra": self.spectra}, fh, indent=1)


def snr_label(snr_db: Optional[float]) -> str:
    return "inf" if snr_db is None else repr(float(snr_db))


def _trial(cfg: ExperimentConfig, dicts: list[VirtualDictionary], models: list[MeasurementModel],
           true_angles: np.ndarray, t: int) -> tuple[list[dict], list[dict]]:
    # every (trial, array, snr) cell draws from its own stream, so results do
    # not depend on thread scheduling; scatterer phases are shared per trial
    phases = random_phases(cfg.n_scatterers, np.random.default_rng(np.random.SeedSequence([cfg.seed, t, 0])))
    scene = Scene(true_angles, phases)
    rows, spectra = [], []
    for ai, (spec, model, vd) in enumerate(zip(cfg.arrays, models, dicts)):
        for si, snr in enumerate(cfg.snrs_db):
            ss = np.random.SeedSequence([cfg.seed, t, 1, ai, si])
            meas = simulate(model, scene, snr, ss)
            res = omp(meas, vd, cfg.n_scatterers)
            err = rmse(res, scene)
            rows.append({"trial": t, "array": spec.name, "snr_db": snr, "rmse": err,
                         "regularized": res.regularized})
            if t < cfg.spectra_trials:
                spectra.append({
                    "trial": t, "array": spec.name, "snr": snr_label(snr),
                    "positions": list(spec.array.positions),
                    "true_angles": scene.angles.tolist(),
                    "estimated_angles": res.estimated_angles.tolist(),
                    "support": res.support.tolist(),
                    "magnitude": np.abs(res.coefficients).tolist(),
                })
    return rows, spectra


def run_experiment(cfg: ExperimentConfig) -> ExperimentResult:
    """Monte Carlo RMSE of OMP angle estimates for each array and SNR.

    The scatterers are equally spaced in ``[angle_lo, angle_hi]`` and snapped
    to the estimation grid; their phases are random per trial.
    """
    grid = uniform_grid(cfg.grid_size, cfg.grid_lo, cfg.grid_hi)
    true_angles = snap_to_grid(np.linspace(cfg.angle_lo, cfg.angle_hi, cfg.n_scatterers), grid)
    models = [MeasurementModel(s.array, grid, cfg.delta) for s in cfg.arrays]
    dicts = [VirtualDictionary.build(m) for m in models]
    result = ExperimentResult(cfg)
    trials = range(cfg.trials)
    if cfg.threads == 1:
        outs = [_trial(cfg, dicts, models, true_angles, t) for t in trials]
    else:
        with ThreadPoolExecutor(cfg.threads) as ex:
            outs = list(ex.map(lambda t: _trial(cfg, dicts, models, true_angles, t), trials))
    for rows, spectra in outs:
        result.rows.extend(rows)
        result.spectra.extend(spectra)
    n_reg = sum(r["regularized"] for r in result.rows)
    if n_reg:
        log.info("%d of %d fits needed the ridge fallback", n_reg, len(result.rows))
    return result


def config_from_dict(data: dict, threads: Optional[int] = None) -> ExperimentConfig:
    """Experiment configuration from a parsed JSON document.

    Arrays are given either by construction, ``{"name": ..., "kind": "ka",
    "params": {"n1": 2, "n2": 5, "n3": 1}}``, or explicitly as
    ``{"name": ..., "positions": [...]}``. SNRs are numbers in dB or the
    string ``"inf"`` for noiseless.
    """
    from .constructions import build

    if not isinstance(data, dict):
        raise ValueError("config must be a JSON object")
    known = {"arrays", "seed", "trials", "grid", "snr_db", "scatterers", "delta", "spectra_trials", "threads"}
    unknown = set(data) - known
    if unknown:
        raise ValueError(f"unknown config keys: {', '.join(sorted(unknown))}")
    specs = []
    for i, a in enumerate(data.get("arrays") or []):
        name = a.get("name", f"array{i}")
        if "positions" in a:
            arr = SensorArray.of(a["positions"])
        elif "kind" in a:
            arr = build(a["kind"], **a.get("params", {}))
        else:
            raise ValueError(f"array {name!r} needs 'positions' or 'kind'")
        specs.append(ArraySpec(name, arr))
    if "seed" not in data:
        raise ValueError("config must set 'seed'")
    grid = data.get("grid", {})
    scat = data.get("scatterers", {})
    snrs = tuple(None if (s is None or str(s).lower() in ("inf", "none")) else float(s)
                 for s in data.get("snr_db", ["inf", 5.0]))
    return ExperimentConfig(
        arrays=tuple(specs),
        seed=int(data["seed"]),
        trials=int(data.get("trials", 1000)),
        grid_size=int(grid.get("size", 10_000)),
        grid_lo=float(grid.get("lo", -75.0)),
        grid_hi=float(grid.get("hi", 75.0)),
        snrs_db=snrs,
        n_scatterers=int(scat.get("count", 65)),
        angle_lo=float(scat.get("lo", -60.0)),
        angle_hi=float(scat.get("hi", 60.0)),
        delta=float(data.get("delta", 0.5)),
        spectra_trials=int(data.get("spectra_trials", 1)),
        threads=int(threads if threads is not None else data.get("threads", 1)),
    )
