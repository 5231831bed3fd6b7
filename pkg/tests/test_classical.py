import itertools
import math

import numpy as np
import pytest

from cqpolar.channel import BpskChannel
from cqpolar.classical import (InducedDmc, Receiver, bhattacharyya_profile, check_node,
                               classical_sc_decode, construct_classical, induce_dmc, simulate_classical,
                               simulate_dmc)
from cqpolar.construction import FidelityProfile, select_information_set, surrogate_profile
from cqpolar.transform import encode


def bsc(p):
    return InducedDmc("BSC", p, Receiver.DOLINAR, 2 * math.sqrt(p * (1 - p)))


def all_blocks(n):
    return np.array(list(itertools.product((0, 1), repeat=n)), dtype=np.uint8)


def sc_by_enumeration(llr, code):
    """SC rule from its definition: decide u[i] by summing likelihoods over all
    completions of the already-decided prefix."""
    n = code.N
    words = encode(all_blocks(n))
    loglik = (0.5 * (1 - 2 * words.astype(float)) * llr).sum(axis=1)  # up to a constant
    blocks = all_blocks(n)
    u_hat = np.zeros(n, dtype=np.uint8)
    frozen = dict(zip(code.frozen_set, code.frozen_values))
    for i in range(n):
        if i in frozen:
            u_hat[i] = frozen[i]
            continue
        match = np.all(blocks[:, :i] == u_hat[:i], axis=1)
        score = [np.logaddexp.reduce(loglik[match & (blocks[:, i] == b)]) for b in (0, 1)]
        u_hat[i] = 0 if score[0] >= score[1] else 1
    return u_hat


# -- induced channels ---------------------------------------------------------------

def test_dolinar_zero_energy():
    dmc = induce_dmc(BpskChannel(0.0), "DOLINAR")
    assert dmc.kind == "BSC" and dmc.crossover == 0.5 and dmc.bhattacharyya == 1.0


def test_dolinar_bhattacharyya_identity():
    for e in np.geomspace(1e-4, 5, 50):
        assert induce_dmc(BpskChannel(e), Receiver.DOLINAR).bhattacharyya == pytest.approx(
            math.exp(-2 * e), abs=1e-12)


def test_kennedy_is_z_channel():
    dmc = induce_dmc(BpskChannel(0.25), "KENNEDY")
    assert dmc.kind == "Z"
    assert dmc.crossover == pytest.approx(math.exp(-1), abs=1e-16)
    assert np.allclose(dmc.transition, [[1 - math.exp(-1), math.exp(-1)], [0, 1]])
    w = dmc.transition
    assert dmc.bhattacharyya == pytest.approx(np.sqrt(w[0] * w[1]).sum(), abs=1e-15)


def test_homodyne_worse_than_dolinar():
    ch = BpskChannel(0.25)
    assert induce_dmc(ch, "HOMODYNE").crossover > induce_dmc(ch, "DOLINAR").crossover


def test_bhattacharyya_profiles():
    assert not bhattacharyya_profile(32, 0.0).sqrt_f.any()
    z = 0.4
    assert np.allclose(bhattacharyya_profile(2, z).sqrt_f, [2 * z - z * z, z * z])
    for e in (0.01, 0.25, 2.0):
        ch = BpskChannel(e)
        z0 = induce_dmc(ch, "DOLINAR").bhattacharyya
        assert np.allclose(bhattacharyya_profile(256, z0).sqrt_f,
                           surrogate_profile(256, ch.overlap()).sqrt_f, atol=1e-12, rtol=0)


# -- decoding ---------------------------------------------------------------------------

def test_check_node_stable_and_exact():
    grid = np.linspace(-40, 40, 161)
    a, b = np.meshgrid(grid, grid)
    out = check_node(a, b)
    assert np.all(np.isfinite(out))
    a, b = np.meshgrid(np.linspace(-8, 8, 33), np.linspace(-8, 8, 33))
    direct = 2 * np.arctanh(np.tanh(a / 2) * np.tanh(b / 2))
    assert np.allclose(check_node(a, b), direct, atol=1e-9)


@pytest.mark.parametrize("n_bits,K", [(2, 2), (4, 2), (8, 4)])
def test_noiseless_llrs_recover_message(n_bits, K):
    code = select_information_set(surrogate_profile(n_bits, 0.5), K=K)
    for m in all_blocks(K):
        x = encode(code.block(m))
        llr = np.where(x == 0, 40.0, -40.0)
        assert np.array_equal(classical_sc_decode(llr, code), code.block(m))


def test_n2_hand_case_matches_ml():
    code = select_information_set(FidelityProfile(np.zeros(2), "EXACT"), K=2)
    llr = np.array([-0.7, 2.1])
    words = encode(all_blocks(2))
    ml = all_blocks(2)[np.argmax((0.5 * (1 - 2 * words.astype(float)) * llr).sum(axis=1))]
    assert np.array_equal(classical_sc_decode(llr, code), ml)


@pytest.mark.parametrize("n_bits,K", [(2, 1), (4, 2), (4, 4), (8, 3), (8, 5)])
def test_sc_matches_enumeration_oracle(n_bits, K):
    rng = np.random.default_rng(n_bits * 10 + K)
    code = select_information_set(surrogate_profile(n_bits, 0.6), K=K, frozen="random", seed=K)
    llrs = rng.normal(0.5, 2.0, (40, n_bits))
    batch = classical_sc_decode(llrs, code)
    for llr, got in zip(llrs, batch):
        assert np.array_equal(got, sc_by_enumeration(llr, code))


@pytest.mark.parametrize("n_bits", [2, 4])
def test_z_channel_llrs_rank_codewords_like_likelihood(n_bits):
    dmc = induce_dmc(BpskChannel(0.1), "KENNEDY")
    w = dmc.transition
    words = encode(all_blocks(n_bits))
    for y in all_blocks(n_bits):
        lik = np.prod(w[words, y], axis=1)
        llr = dmc.llr(y)
        score = (0.5 * (1 - 2 * words.astype(float)) * llr).sum(axis=1)
        feasible = lik > 0
        assert np.argmax(score) == np.argmax(lik)
        # every feasible word outscores every infeasible one
        if (~feasible).any():
            assert score[feasible].min() > score[~feasible].max()


def test_z_channel_sc_matches_enumeration():
    dmc = induce_dmc(BpskChannel(0.1), "KENNEDY")
    code = select_information_set(surrogate_profile(4, dmc.bhattacharyya), K=2)
    for y in all_blocks(4):
        assert np.array_equal(classical_sc_decode(dmc.llr(y), code), sc_by_enumeration(dmc.llr(y), code))


# -- Monte Carlo --------------------------------------------------------------------------

def test_noiseless_channel_zero_errors():
    code = select_information_set(surrogate_profile(8, 0.5), K=4)
    res = simulate_dmc(bsc(0.0), code, 500, seed=1)
    assert res.errors == 0 and res.bit_error == 0.0


def test_useless_channel_guesses():
    K = 3
    code = select_information_set(surrogate_profile(8, 1.0), K=K)
    res = simulate_dmc(bsc(0.5), code, 4000, seed=2)
    p = 1 - 2 ** -K
    assert abs(res.block_error - p) <= 3 * math.sqrt(p * (1 - p) / res.trials)


def test_bsc_union_bound_small():
    dmc = bsc(0.05)
    code = select_information_set(bhattacharyya_profile(8, dmc.bhattacharyya), K=4)
    res = simulate_dmc(dmc, code, 5000, seed=3)
    assert res.block_error <= code.profile.sqrt_f[list(code.info_set)].sum()


def test_simulation_reproducible_across_threads():
    ch = BpskChannel(0.25)
    code = construct_classical(ch, "KENNEDY", 8, 3)
    a = simulate_classical(ch, "KENNEDY", code, 1500, seed=5, threads=1)
    b = simulate_classical(ch, "KENNEDY", code, 1500, seed=5, threads=4)
    key = lambda r: (r.trial, r.seed, r.message, r.decoded, r.success)
    assert [key(r) for r in a.records] == [key(r) for r in b.records]
    assert "z_channel_construction" in code.metadata
