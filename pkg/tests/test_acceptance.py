"""Exit criteria of the build, one test per criterion.

Each test appends a PASS/FAIL line that is echoed in the terminal summary.
"""

import itertools
import math
import time

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from cqpolar import capacity as cap
from cqpolar.channel import BpskChannel, QubitEmbedding, codeword_state
from cqpolar.classical import bhattacharyya_profile, induce_dmc, InducedDmc, Receiver, simulate_dmc
from cqpolar.cli import main
from cqpolar.construction import (exact_profile, exact_split_fidelity, exact_split_sqrt_fidelity,
                                  polarized_fraction, proposition1_bound, select_information_set,
                                  split_channel_holevo, surrogate_profile)
from cqpolar.decoder import (SCMeasurement, exact_block_error, path_probability, povm_element,
                             simulate_quantum)


def report(number, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:2d}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def test_01_capacity_ordering():
    t0 = time.perf_counter()
    worst = math.inf
    ok = True
    for e in np.geomspace(1e-4, 1.0, 50):
        hom, c1, cinf, ult = cap.homodyne_capacity(e), cap.dolinar_capacity(e), cap.holevo_bpsk(e), cap.g(e)
        ok &= hom < c1 < cinf < ult
        worst = min(worst, c1 - hom, cinf - c1, ult - cinf)
    dt = time.perf_counter() - t0
    report(1, ok and dt < 1.0, f"C_hom < C_1 < C_inf < g on 50-pt grid (min gap {worst:.3e}, {dt:.3f} s)")


def test_02_photon_efficiency_asymptotes():
    e1 = 1e-4
    dolinar_nats = cap.dolinar_capacity(e1) * math.log(2) / e1
    err1 = abs(dolinar_nats - 2.0) / 2.0
    e2 = 1e-3
    holevo_nats = cap.holevo_bpsk(e2) * math.log(2) / e2
    target = -math.log(e2) + 1 + e2 * math.log(e2)
    err2 = abs(holevo_nats - target) / target
    report(2, err1 <= 0.01 and err2 <= 0.005,
           f"C_1/E = {dolinar_nats:.5f} nats/photon (rel err {err1:.2e} <= 1e-2); "
           f"C_inf/E = {holevo_nats:.5f} vs {target:.5f} (rel err {err2:.2e} <= 5e-3)")


def test_03_helstrom_equals_dolinar():
    t0 = time.perf_counter()
    worst = 0.0
    for e in (0.01, 0.1, 0.25, 1.0):
        code = select_information_set(exact_profile(1, QubitEmbedding.from_energy(e)), K=1, energy=e)
        closed = 0.5 * (1 - math.sqrt(1 - math.exp(-4 * e)))
        worst = max(worst, abs(exact_block_error(code) - closed))
    dt = time.perf_counter() - t0
    report(3, worst <= 1e-10 and dt < 1.0, f"max |P_e - Dolinar| = {worst:.2e} <= 1e-10 ({dt:.3f} s)")


def test_04_split_channel_oracle():
    t0 = time.perf_counter()
    e = 0.25
    emb = QubitEmbedding.from_energy(e)
    plus = exact_split_fidelity(2, 1, emb)
    err = abs(plus - math.exp(-4 * e) ** 2)
    f = math.exp(-2 * e)
    minus = exact_split_sqrt_fidelity(2, 0, emb)
    dt = time.perf_counter() - t0
    report(4, err <= 1e-8 and minus <= 2 * f - f * f + 1e-9 and dt < 5.0,
           f"F(plus) err {err:.2e} <= 1e-8; sqrt F(minus) = {minus:.6f} <= {2 * f - f * f:.6f} ({dt:.3f} s)")


def test_05_chain_rule():
    t0 = time.perf_counter()
    emb = QubitEmbedding.from_energy(0.25)
    iw = cap.holevo_bpsk(0.25)
    errs = {n: abs(sum(split_channel_holevo(n, i, emb) for i in range(n)) - n * iw) for n in (2, 4)}
    dt = time.perf_counter() - t0
    report(5, max(errs.values()) <= 1e-6 and dt < 30.0,
           f"sum_i I(W_N^(i)) - N I(W): N=2 {errs[2]:.1e}, N=4 {errs[4]:.1e} <= 1e-6 ({dt:.2f} s)")


def test_06_proposition1_bound():
    t0 = time.perf_counter()
    prof = exact_profile(8, QubitEmbedding.from_energy(0.25))
    parts, ok = [], True
    for k in (1, 2, 3):
        code = select_information_set(prof, K=k, energy=0.25)
        pe = exact_block_error(code, frozen_average="all")
        bound = proposition1_bound(code, clamp=False)
        ok &= pe <= bound
        parts.append(f"K={k}: {pe:.4g} <= {bound:.4g}")
    dt = time.perf_counter() - t0
    report(6, ok and dt < 600.0, f"N=8 frozen-averaged P_e vs bound: {'; '.join(parts)} ({dt:.2f} s)")


def test_07_povm_completeness():
    emb = QubitEmbedding.from_energy(0.25)
    rng = np.random.default_rng(2024)
    states = [v / np.linalg.norm(v) for v in rng.normal(size=(5, 4))]
    worst = 0.0
    for k in (1, 2):
        code = select_information_set(exact_profile(2, emb), K=k, energy=0.25)
        meas = SCMeasurement(2, emb)
        blocks = [code.block(m) for m in itertools.product((0, 1), repeat=k)]
        mixed = sum(np.trace(povm_element(b, code, meas)) / 4 for b in blocks)
        worst = max(worst, abs(mixed - 1))
        for phi in states:
            worst = max(worst, abs(sum(path_probability(phi, b, code, meas) for b in blocks) - 1))
    report(7, worst <= 1e-9, f"max |sum_u Tr(Lambda_u sigma) - 1| = {worst:.2e} <= 1e-9")


def test_08_monte_carlo_consistency():
    code = select_information_set(exact_profile(4, QubitEmbedding.from_energy(0.25)), K=2, energy=0.25)
    exact = exact_block_error(code)
    res = simulate_quantum(code, 10_000, seed=20240601)
    sigma = math.sqrt(exact * (1 - exact) / res.trials)
    z = (res.block_error - exact) / sigma
    report(8, abs(z) <= 3 and res.anomalies == 0,
           f"N=4 K=2: MC {res.block_error:.4f} vs exact {exact:.4f} ({z:+.2f} sigma, |z| <= 3)")


def test_09_polarization_trend():
    t0 = time.perf_counter()
    iw = cap.holevo_bpsk(0.25)
    fracs = [polarized_fraction(surrogate_profile(1 << n, math.exp(-0.5)), 0.45) for n in (6, 8, 10, 12, 14)]
    monotone = all(b >= a for a, b in zip(fracs, fracs[1:]))
    capped = max(fracs) <= iw + 1e-9
    dt = time.perf_counter() - t0
    report(9, monotone and capped and dt < 5.0,
           f"fractions {', '.join(f'{x:.5f}' for x in fracs)}; nondecreasing={monotone}; "
           f"<= I(W)={iw:.4f}: {capped} ({dt:.2f} s)")


def test_10_classical_arm():
    worst = max(abs(induce_dmc(BpskChannel(e), "DOLINAR").bhattacharyya - math.exp(-2 * e))
                for e in np.geomspace(1e-4, 1.0, 50))
    z0 = 2 * math.sqrt(0.05 * 0.95)
    dmc = InducedDmc("BSC", 0.05, Receiver.DOLINAR, z0)
    code = select_information_set(bhattacharyya_profile(8, z0), K=4)
    union = float(code.profile.sqrt_f[list(code.info_set)].sum())
    res = simulate_dmc(dmc, code, 100_000, seed=7)
    report(10, worst <= 1e-12 and res.block_error <= union,
           f"max |Z0 - e^-2E| = {worst:.1e}; BSC(0.05) N=8 K=4 block error {res.block_error:.4f} "
           f"<= sum Z_i = {union:.4f}")


def test_11_reproducibility(tmp_path):
    code = tmp_path / "code.txt"
    main(["construct", "--N", "4", "--E", "0.25", "--K", "2", "--mode", "EXACT", "--out", str(code)])
    logs = {}
    for threads in ("1", "4"):
        sim = tmp_path / f"sim{threads}.csv"
        main(["simulate", "--code", str(code), "--arm", "QUANTUM_MC", "--trials", "2000", "--seed", "99",
              "--threads", threads, "--trial-log", str(sim), "--out", str(tmp_path / "r.csv")])
        cls = tmp_path / f"cls{threads}.csv"
        main(["simulate", "--code", str(code), "--arm", "CLASSICAL_MC", "--trials", "2000", "--seed", "99",
              "--threads", threads, "--trial-log", str(cls), "--out", str(tmp_path / "r.csv")])
        prefix = tmp_path / f"cmp{threads}"
        main(["compare", "--E", "0.25", "--N", "4", "--K", "2", "--trials", "1000", "--seed", "99",
              "--threads", threads, "--trial-log", str(prefix), "--out", str(tmp_path / "c.csv")])
        logs[threads] = [sim.read_bytes(), cls.read_bytes()] + [
            (tmp_path / f"cmp{threads}.{arm}.csv").read_bytes() for arm in ("quantum", "dolinar", "homodyne", "kennedy")]
    same = all(a == b for a, b in zip(logs["1"], logs["4"]))
    report(11, same and all(len(x) > 100 for x in logs["1"]),
           f"{len(logs['1'])} trial logs byte-identical across --threads 1 / 4: {same}")
