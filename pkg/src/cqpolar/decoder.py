"""Exact simulation of the quantum successive-cancellation decoder.

For every information index ``i`` the decoder measures the received
codeword with the Helstrom test between the two averaged states
rho(u_hat[:i] + 0) and rho(u_hat[:i] + 1), keeps the post-measurement state
and moves on.  Only the projector block matching the decoded prefix is
ever built; the classical prefix register itself is not materialized.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .channel import QubitEmbedding, codeword_state, codeword_states
from .construction import N_EXACT, PolarCode, averaged_state_factor, check_exact_size
from .exceptions import GuardError, NumericAnomaly, ParameterError
from .quantum import HelstromProjector, helstrom
from .report import TrialRecord, bits
from .rng import run_trials, trial_rng
from .transform import encode

K_EXACT = 12
#: Squared norms at or below this count as a collapsed (zero-probability) branch.
ZERO_NORM = 1e-300


def decision_projectors(i: int, prefix, n_bits: int, embedding: QubitEmbedding, *,
                        fixed=None, max_n: int = N_EXACT):
    """(Pi_0, Pi_1) deciding u[i] after the decoded bits ``prefix`` = u_hat[:i].

    ``fixed`` optionally pins later positions (e.g. known frozen bits) when
    forming the averaged states; by default every later bit is randomized.
    """
    check_exact_size(n_bits, max_n)
    prefix = tuple(int(b) for b in prefix)
    if len(prefix) != i or not 0 <= i < n_bits:
        raise ParameterError(f"prefix for index {i} must have length {i}")
    a0 = averaged_state_factor(prefix + (0,), n_bits, embedding, fixed=fixed, max_n=max_n)
    a1 = averaged_state_factor(prefix + (1,), n_bits, embedding, fixed=fixed, max_n=max_n)
    pi0 = helstrom(a0 @ a0.T, a1 @ a1.T)
    return pi0, pi0.complement()


class SCMeasurement:
    """Helstrom tests of one (N, embedding) pair with a bounded LRU cache.

    With ``condition_on_frozen`` the averaged states fix every later frozen
    bit to its value in ``code`` instead of randomizing it.  That variant
    is offered for experimentation only; the default follows the plain
    averaged-state definition.
    """

    def __init__(self, n_bits: int, embedding: QubitEmbedding, *, code: PolarCode | None = None,
                 condition_on_frozen: bool = False, cache_size: int = 4096, max_n: int = N_EXACT):
        check_exact_size(n_bits, max_n)
        self.n_bits = n_bits
        self.embedding = embedding
        self.max_n = max_n
        self._fixed = None
        if condition_on_frozen:
            if code is None:
                raise ParameterError("conditioning on frozen bits needs the code")
            self._fixed = dict(zip(code.frozen_set, (int(b) for b in code.frozen_values)))
        self._cached = lru_cache(maxsize=cache_size)(self._build)

    def _build(self, i, prefix):
        return decision_projectors(i, prefix, self.n_bits, self.embedding, fixed=self._fixed,
                                   max_n=self.max_n)

    def projectors(self, i: int, prefix) -> tuple[HelstromProjector, HelstromProjector]:
        return self._cached(i, tuple(int(b) for b in prefix))

    def cache_info(self):
        return self._cached.cache_info()


def _embedding_for(code: PolarCode, embedding):
    if embedding is not None:
        return embedding
    if code.energy is None:
        raise ParameterError("code carries no energy; pass an embedding")
    return QubitEmbedding.from_energy(code.energy)


def _measurement_for(code, embedding, measurement):
    if measurement is not None:
        if measurement.n_bits != code.N:
            raise ParameterError("measurement block length does not match the code")
        return measurement
    return SCMeasurement(code.N, _embedding_for(code, embedding))


@dataclass(frozen=True)
class DecodeTrace:
    """Outcome of one sequential decoding run.

    ``step_probs[k]`` is the probability of the outcome actually observed at
    the k-th information index; ``p0`` the probability of outcome 0 there;
    ``norms`` the squared norm of the unnormalized state after each step.
    """

    decoded: np.ndarray
    step_probs: tuple
    p0: tuple
    norms: tuple
    success: bool | None

    @property
    def min_step_prob(self) -> float:
        return min(self.step_probs, default=1.0)


def sc_decode(received, code: PolarCode, rng: np.random.Generator, *, embedding=None,
              measurement: SCMeasurement | None = None, transmitted=None) -> DecodeTrace:
    """Run the sequential measurements on the pure state ``received``.

    Frozen indices are not measured.  Each information index samples its
    outcome with ``rng`` and collapses the state onto the observed branch.
    """
    meas = _measurement_for(code, embedding, measurement)
    phi = np.asarray(received, dtype=float).copy()
    if phi.size != 1 << code.N:
        raise ParameterError("received state has the wrong dimension")
    u_hat = np.zeros(code.N, dtype=np.uint8)
    frozen = dict(zip(code.frozen_set, code.frozen_values))
    info = set(code.info_set)
    step_probs, p0s, norms = [], [], []
    norm = float(phi @ phi)
    for i in range(code.N):
        if i not in info:
            u_hat[i] = frozen[i]
            continue
        pi0, pi1 = meas.projectors(i, u_hat[:i])
        proj0 = pi0.apply(phi)
        p0 = float(proj0 @ proj0) / norm
        p1 = 1.0 - p0
        outcome = 0 if rng.random() < p0 else 1
        new = proj0 if outcome == 0 else pi1.apply(phi)
        new_norm = float(new @ new)
        if new_norm <= ZERO_NORM:
            raise NumericAnomaly(f"zero-norm branch sampled at index {i}")
        u_hat[i] = outcome
        step_probs.append(p0 if outcome == 0 else p1)
        p0s.append(p0)
        phi = new / np.sqrt(new_norm)
        norm = 1.0
        norms.append(new_norm)
    success = None
    if transmitted is not None:
        idx = list(code.info_set)
        success = bool(np.array_equal(u_hat[idx], np.asarray(transmitted, dtype=np.uint8)[idx]))
    return DecodeTrace(u_hat, tuple(step_probs), tuple(p0s), tuple(norms), success)


def path_probability(state, block, code: PolarCode, measurement: SCMeasurement) -> float:
    """<phi| Lambda_block |phi> for the pure state ``state`` (need not be a codeword)."""
    phi = np.asarray(state, dtype=float)
    block = np.asarray(block, dtype=np.uint8)
    for i in code.info_set:
        pi0, pi1 = measurement.projectors(i, block[:i])
        phi = (pi0 if block[i] == 0 else pi1).apply(phi)
    return float(phi @ phi)


def povm_element(block, code: PolarCode, measurement: SCMeasurement) -> np.ndarray:
    """Lambda_block = M^T M with M the ordered product of the decision projectors."""
    block = np.asarray(block, dtype=np.uint8)
    m = np.eye(1 << code.N)
    for i in code.info_set:
        pi0, pi1 = measurement.projectors(i, block[:i])
        m = (pi0 if block[i] == 0 else pi1).matrix() @ m
    return m.T @ m


def exact_success_prob(block, code: PolarCode, embedding=None, *,
                       measurement: SCMeasurement | None = None) -> float:
    """Tr{Lambda_u rho_u} for the full input block u^N (frozen positions included)."""
    meas = _measurement_for(code, embedding, measurement)
    block = np.asarray(block, dtype=np.uint8)
    state = codeword_state(encode(block), meas.embedding)
    return path_probability(state, block, code, meas)


def _messages(k):
    return np.array(list(itertools.product((0, 1), repeat=k)), dtype=np.uint8).reshape(1 << k, k)


def exact_block_error(code: PolarCode, embedding=None, *, frozen_average: str = "none",
                      samples: int = 16, seed: int = 0, condition_on_frozen: bool = False,
                      max_k: int = K_EXACT, threads: int = 1) -> float:
    """1 - 2^-K sum_{u_A} Tr{Lambda_u rho_u}.

    ``frozen_average`` is ``"none"`` (the code's frozen values), ``"all"``
    (every assignment of A^c) or ``"sample"`` (``samples`` seeded random
    assignments).  Sums run in a fixed order, so the result does not depend
    on ``threads``.
    """
    if code.K > max_k:
        raise GuardError(f"exact block error limited to K <= {max_k}, got K = {code.K}")
    embedding = _embedding_for(code, embedding)
    check_exact_size(code.N)
    n_frozen = code.N - code.K
    if frozen_average == "none":
        assignments = [code.frozen_values]
    elif frozen_average == "all":
        assignments = list(_messages(n_frozen))
    elif frozen_average == "sample":
        rng = np.random.default_rng(seed)
        assignments = list(rng.integers(0, 2, (samples, n_frozen), dtype=np.uint8))
    else:
        raise ParameterError(f"unknown frozen_average {frozen_average!r}")

    shared = None if condition_on_frozen else SCMeasurement(code.N, embedding)
    messages = _messages(code.K)

    def one_assignment(j):
        sub = code.with_frozen(assignments[j])
        meas = shared or SCMeasurement(code.N, embedding, code=sub, condition_on_frozen=True)
        blocks = np.array([sub.block(m) for m in messages])
        states = codeword_states(encode(blocks), embedding)
        return sum(path_probability(s, b, sub, meas) for s, b in zip(states, blocks))

    per = run_trials(one_assignment, len(assignments), threads=threads, chunk=1)
    success = sum(per) / (len(assignments) * len(messages))
    return float(min(1.0, max(0.0, 1.0 - success)))


def quantum_trial(code: PolarCode, measurement: SCMeasurement, seed: int, trial: int) -> TrialRecord:
    """One Monte Carlo trial: random message, exact received state, sampled decoding."""
    rng = trial_rng(seed, trial)
    message = rng.integers(0, 2, code.K, dtype=np.uint8)
    block = code.block(message)
    state = codeword_state(encode(block), measurement.embedding)
    trace = sc_decode(state, code, rng, measurement=measurement, transmitted=block)
    decoded = trace.decoded[list(code.info_set)]
    return TrialRecord(trial, seed, bits(message), bits(decoded), bool(trace.success), trace.min_step_prob)


@dataclass(frozen=True)
class MonteCarloResult:
    records: list
    anomalies: int

    @property
    def trials(self) -> int:
        return len(self.records)

    @property
    def errors(self) -> int:
        return sum(not r.success for r in self.records)

    @property
    def block_error(self) -> float:
        return self.errors / self.trials if self.records else float("nan")


def simulate_quantum(code: PolarCode, trials: int, seed: int, *, embedding=None,
                     threads: int = 1) -> MonteCarloResult:
    if trials < 1:
        raise ParameterError("trials must be >= 1")
    meas = _measurement_for(code, embedding, None)

    def run(t):
        try:
            return quantum_trial(code, meas, seed, t)
        except NumericAnomaly:
            return None

    out = run_trials(run, trials, threads=threads)
    records = [r for r in out if r is not None]
    return MonteCarloResult(records, len(out) - len(records))
