"""Acceptance suite. Each check is recorded through the ``criterion``
fixture, and a per-criterion PASS/FAIL summary is printed at the end of the
run. Expected values come from brute-force oracles in ``oracles.py`` or are
the published figures quoted inline.
"""
import time
from fractions import Fraction

import numpy as np
import pytest

import oracles
from sparsearrays.coarray import SensorArray, diff_coarray, metrics, sum_coarray
from sparsearrays.constructions import (
    KloveParams,
    NestedParams,
    ShiftedGenerator,
    check_conditions,
    cna,
    ka,
    kma,
    kma_first_hole,
    nested,
    symmetrize,
)
from sparsearrays.optimize import cna_opt, grid_size_bound, ka_r_grid, mra_search
from sparsearrays.sensing import ArraySpec, ExperimentConfig, run_experiment


# 1 -------------------------------------------------------------------------------

def test_cna_closed_form_optimal(criterion):
    t0 = time.perf_counter()
    bad = []
    for n in range(2, 201):
        p, _ = cna_opt(n)
        sweep = max(max(oracles.cna(a, n - 2 * a)) for a in range(n // 2 + 1) if a + (n - 2 * a) > 0)
        if 2 * p.n1 + p.n2 != n or cna(p).aperture() != sweep:
            bad.append(n)
    dt = time.perf_counter() - t0
    criterion(1, "closed-form CNA aperture equals sweep maximum, N = 2..200", not bad, f"mismatches {bad[:5]}")
    criterion(1, "runtime < 5 s", dt < 5.0, f"{dt:.2f} s")


# 2 -------------------------------------------------------------------------------

@pytest.mark.parametrize("n", [20, 43, 66, 112, 250])
def test_ka_closed_form_parameters(criterion, n):
    t0 = time.perf_counter()
    out = ka_r_grid(n)
    dt = time.perf_counter() - t0
    # integer division is exact only if the closed form is integral; check that too
    expected = (Fraction(n + 3, 23), Fraction(5 * (n + 3), 23), Fraction(9 * n - 42, n + 26))
    got = (out.params.n1, out.params.n2, out.params.n3)
    criterion(2, f"N={n}: parameters {got} vs {tuple(str(e) for e in expected)}",
              tuple(Fraction(g) for g in got) == expected)
    L = Fraction(3 * n * n + 18 * n - 19, 23)
    criterion(2, f"N={n}: aperture {out.aperture} == {L}",
              out.aperture == L and out.array.aperture() == L and len(out.array) == n)
    criterion(2, f"N={n}: runtime < 1 s", dt < 1.0, f"{dt:.3f} s")


# 3 -------------------------------------------------------------------------------

def test_contiguity_suites(criterion):
    t0 = time.perf_counter()
    bad = []
    for n1 in range(6):
        for n2 in range(6):
            for n3 in range(6):
                if n1 == n2 == 0:
                    continue
                p = KloveParams(n1, n2, n3)
                a = ka(p)
                if set(sum_coarray(a).elements) != set(range(2 * a.aperture() + 1)):
                    bad.append(("ka", p))
                g = kma(p)
                if not diff_coarray(g).is_contiguous():
                    bad.append(("kma", p))
    for n1 in range(7):
        for n2 in range(7):
            if n1 == n2 == 0:
                continue
            p = NestedParams(n1, n2)
            c = cna(p)
            if set(sum_coarray(c).elements) != set(range(2 * c.aperture() + 1)):
                bad.append(("cna", p))
            d = nested(p)
            if set(diff_coarray(d).elements) != set(range(-d.aperture(), d.aperture() + 1)):
                bad.append(("nested", p))
    dt = time.perf_counter() - t0
    criterion(3, "KA/CNA sum and KMA/NA difference co-arrays contiguous", not bad, f"failures {bad[:5]}")
    criterion(3, "runtime < 10 s", dt < 10.0, f"{dt:.2f} s")


# 4 -------------------------------------------------------------------------------

def test_kma_first_hole_oracle(criterion):
    bad = []
    branches = {"generator is a ULA or CNA": 0, "n2 = 1, n1 >= 2": 0, "general": 0}
    for n1 in range(6):
        for n2 in range(6):
            for n3 in range(6):
                if n1 == n2 == 0:
                    continue
                p = KloveParams(n1, n2, n3)
                if n1 + n2 == 1 or n3 == 0:
                    branches["generator is a ULA or CNA"] += 1
                elif n1 >= 2 and n2 == 1:
                    branches["n2 = 1, n1 >= 2"] += 1
                else:
                    branches["general"] += 1
                if kma_first_hole(p) != oracles.first_hole(oracles.sumset(oracles.kma(n1, n2, n3))):
                    bad.append(p)
    criterion(4, "closed-form first hole equals brute force on {0..5}^3", not bad, f"mismatches {bad[:5]}")
    criterion(4, "all case branches exercised", all(branches.values()), str(branches))


# 5 -------------------------------------------------------------------------------

def test_symmetric_conditions_equivalence(criterion):
    rng = np.random.default_rng(20240501)
    bad = []
    checked = 0
    for _ in range(500):
        mask = rng.random(12) < rng.uniform(0.1, 0.9)
        g = [0] + [i + 1 for i in range(12) if mask[i]]
        gen = SensorArray(tuple(g))
        for lam in range(2 * max(g) + 3):
            c1, c2 = check_conditions(ShiftedGenerator(gen, lam))
            s = oracles.symmetric(g, lam)
            contiguous = oracles.is_interval(oracles.sumset(s), 0, 2 * max(s))
            if (c1 and c2) != contiguous:
                bad.append((g, lam))
            checked += 1
    criterion(5, f"conditions <=> contiguous sum co-array ({checked} cases)", not bad, f"{bad[:3]}")


# 6 -------------------------------------------------------------------------------

def test_eight_sensor_restricted_mra(criterion):
    t0 = time.perf_counter()
    out = mra_search(8, restricted=True)
    dt = time.perf_counter() - t0
    criterion(6, "N=8 restricted: H=27, {0,1,2,5,8,11,12,13}",
              out.contiguous_dof == 27 and out.array.positions == (0, 1, 2, 5, 8, 11, 12, 13), str(out.array))
    criterion(6, "N=8 restricted runtime < 60 s", dt < 60, f"{dt:.2f} s")


def test_eight_sensor_general_mra(criterion):
    h_oracle, _ = oracles.max_first_hole(8)
    t0 = time.perf_counter()
    out = mra_search(8)
    dt = time.perf_counter() - t0
    criterion(6, f"N=8 general: H={h_oracle} (oracle), {{0,1,3,5,7,8,17,18}}",
              out.contiguous_dof == h_oracle and out.array.positions == (0, 1, 3, 5, 7, 8, 17, 18), str(out.array))
    criterion(6, "N=8 general runtime < 60 s", dt < 60, f"{dt:.2f} s")


def test_seven_sensor_restricted_mra(criterion):
    out = mra_search(7, restricted=True)
    criterion(6, "N=7 restricted yields {0,1,2,5,8,9,10}",
              out.array.positions == (0, 1, 2, 5, 8, 9, 10),
              f"got {out.array}; tie set has {len(out.objective_trace)} arrays")


# 7 -------------------------------------------------------------------------------

@pytest.mark.parametrize("n", [10, 100, 1000, 10_000])
def test_grid_visit_bound(criterion, n):
    actual, bound = grid_size_bound(n)
    criterion(7, f"N={n}: visited {actual} <= {bound:.1f}", actual <= bound)


# 8 -------------------------------------------------------------------------------

def test_redundancy_approaches_limit(criterion):
    rs = []
    for k in range(1, 21):
        n = 23 * k + 9
        a = ka(KloveParams((n - 9) // 23, 5 * ((n - 9) // 23), 9))
        m = metrics(a)
        assert len(a) == n and m.sum_contiguous
        rs.append(m.redundancy)
    criterion(8, "R < 23/12 for k = 1..20", all(r < Fraction(23, 12) for r in rs), f"max {float(max(rs)):.5f}")
    criterion(8, "R(k=20) > R(k=1)", rs[-1] > rs[0], f"R(1)={float(rs[0]):.5f}, R(20)={float(rs[-1]):.5f}")
    drops = [k + 1 for k in range(len(rs) - 1) if not rs[k + 1] > rs[k]]
    criterion(8, "R strictly increasing over k = 1..20", not drops,
              f"R(k+1) <= R(k) at k = {drops}; R(1)={float(rs[0]):.5f}, R(2)={float(rs[1]):.5f}")


# 9 -------------------------------------------------------------------------------

def _figures(arr):
    s = arr.positions
    return len(s), s[-1], oracles.longest_run(oracles.sumset(s))[0]


KMA_MATCHED = KloveParams(3, 7, 1)


@pytest.mark.parametrize("family,params,expected", [
    ("kma", (1, 5, 5), (17, 70, 101)),
    ("kma", (3, 7, 1), (17, 70, 101)),
    ("ka", (2, 5, 1), (21, 70, 141)),
])
def test_experiment_array_figures(criterion, family, params, expected):
    arr = (kma if family == "kma" else ka)(KloveParams(*params))
    got = _figures(arr)
    criterion(9, f"{family}{params} has (N, L, H) = {expected}", got == expected, f"oracle gives {got}")


def _ordering(criterion, kma_params, label):
    cfg = ExperimentConfig(
        arrays=(ArraySpec("KMA", kma(kma_params)), ArraySpec("KA_R", ka(KloveParams(2, 5, 1)))),
        seed=2020, trials=50, grid_size=2001, snrs_db=(None, 5.0),
    )
    t0 = time.perf_counter()
    mean = run_experiment(cfg).mean_rmse()
    dt = time.perf_counter() - t0
    for snr in (None, 5.0):
        name = "inf" if snr is None else f"{snr:g} dB"
        criterion(9, f"{label}, SNR {name}: RMSE KA_R < KMA",
                  mean[("KA_R", snr)] < mean[("KMA", snr)],
                  f"KA_R {mean[('KA_R', snr)]:.3f} deg, KMA {mean[('KMA', snr)]:.3f} deg")
    criterion(9, f"{label}: runtime < 5 min", dt < 300, f"{dt:.1f} s")


def test_experiment_ordering_matched_kma(criterion):
    _ordering(criterion, KMA_MATCHED, "V=2001, 50 trials, kma(3,7,1)")


def test_experiment_ordering_literal_kma(criterion):
    _ordering(criterion, KloveParams(1, 5, 5), "V=2001, 50 trials, kma(1,5,5)")


@pytest.mark.slow
def test_experiment_full_scale(criterion):
    cfg = ExperimentConfig(
        arrays=(ArraySpec("KMA", kma(KMA_MATCHED)), ArraySpec("KA_R", ka(KloveParams(2, 5, 1)))),
        seed=2020, trials=1000, grid_size=10_000, snrs_db=(None, 5.0),
    )
    mean = run_experiment(cfg).mean_rmse()
    published = {("KA_R", None): 4.2, ("KMA", None): 8.6, ("KA_R", 5.0): 7.9, ("KMA", 5.0): 16.2}
    for snr in (None, 5.0):
        criterion(9, f"full scale, SNR {snr}: RMSE KA_R < KMA", mean[("KA_R", snr)] < mean[("KMA", snr)])
    # magnitudes are a soft gate: reported, not asserted
    for key, ref in published.items():
        val = mean[key]
        ok = abs(val - ref) <= 0.5 * ref
        print(f"soft gate {key}: {val:.2f} deg vs published {ref} deg -> {'within' if ok else 'outside'} 50%")


# 10 ------------------------------------------------------------------------------

@pytest.mark.parametrize("n,positions,r", [(1, (0,), Fraction(1)), (2, (0, 1), Fraction(1)),
                                           (3, (0, 1, 2), Fraction(6, 5))])
def test_perfect_arrays(criterion, n, positions, r):
    out = mra_search(n, restricted=True)
    got_r = metrics(out.array).redundancy
    criterion(10, f"N={n}: {positions} with R={r}", out.array.positions == positions and got_r == r,
              f"got {out.array}, R={got_r}")
