"""Classical polar code over the DMC induced by symbol-by-symbol
detection of the BPSK pulses (Dolinar, homodyne or Kennedy receiver)."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import capacity
from .channel import BpskChannel
from .construction import FidelityProfile, PolarCode, bhattacharyya_recursion, ConstructionMode
from .exceptions import ParameterError
from .report import TrialRecord, bits
from .rng import run_trials, trial_rng
from .transform import bit_reversal, encode, log2_length

LLR_CLAMP = 40.0


class Receiver(str, enum.Enum):
    DOLINAR = "DOLINAR"
    HOMODYNE = "HOMODYNE"
    KENNEDY = "KENNEDY"


@dataclass(frozen=True)
class InducedDmc:
    """Binary-input binary-output channel; ``transition[x, y]`` = P(y | x).

    For the Kennedy Z-channel, input 0 is displaced to |2 sqrt(E)> and
    input 1 to vacuum: a click (y = 0) proves x = 0, while no click (y = 1)
    happens for x = 0 with probability ``crossover``.
    """

    kind: str
    crossover: float
    source: Receiver
    bhattacharyya: float

    @property
    def transition(self) -> np.ndarray:
        p = self.crossover
        if self.kind == "BSC":
            return np.array([[1.0 - p, p], [p, 1.0 - p]])
        return np.array([[1.0 - p, p], [0.0, 1.0]])

    def llr(self, y) -> np.ndarray:
        """Clamped log P(y|0)/P(y|1) for received symbols ``y``."""
        w = self.transition
        with np.errstate(divide="ignore", invalid="ignore"):
            table = np.log(w[0]) - np.log(w[1])
        table = np.nan_to_num(table, nan=0.0, posinf=LLR_CLAMP, neginf=-LLR_CLAMP)
        return np.clip(table[np.asarray(y, dtype=np.int64)], -LLR_CLAMP, LLR_CLAMP)

    def capacity(self) -> float:
        if self.kind == "BSC":
            return capacity.bsc_capacity(self.crossover)
        return capacity.z_channel_capacity(self.crossover)


def induce_dmc(channel: BpskChannel, receiver: Receiver | str) -> InducedDmc:
    receiver = Receiver(receiver)
    e = channel.effective_energy
    if receiver is Receiver.KENNEDY:
        c = capacity.kennedy_crossover(e)
        return InducedDmc("Z", c, receiver, math.sqrt(c))
    p = capacity.dolinar_pe(e) if receiver is Receiver.DOLINAR else capacity.homodyne_pe(e)
    return InducedDmc("BSC", p, receiver, min(1.0, 2.0 * math.sqrt(p * (1.0 - p))))


def bhattacharyya_profile(n_bits: int, z0: float) -> FidelityProfile:
    return FidelityProfile(bhattacharyya_recursion(n_bits, z0), ConstructionMode.SURROGATE_UPPER)


def check_node(a, b):
    """2 atanh(tanh(a/2) tanh(b/2)) in a form that cannot overflow."""
    return (np.sign(a) * np.sign(b) * np.minimum(np.abs(a), np.abs(b))
            + np.log1p(np.exp(-np.abs(a + b))) - np.log1p(np.exp(-np.abs(a - b))))


def _sc(llr, frozen_mask, frozen_vals):
    """Natural-order SC for x = v F^{(x)n}; returns (v_hat, x_hat), batch-first."""
    n = llr.shape[1]
    if n == 1:
        if frozen_mask[0]:
            v = np.full((llr.shape[0], 1), frozen_vals[0], dtype=np.uint8)
        else:
            v = (llr < 0).astype(np.uint8)
        return v, v.copy()
    h = n // 2
    la, lb = llr[:, :h], llr[:, h:]
    va, wa = _sc(check_node(la, lb), frozen_mask[:h], frozen_vals[:h])
    lb2 = lb + np.where(wa == 1, -la, la)
    vb, wb = _sc(lb2, frozen_mask[h:], frozen_vals[h:])
    return np.hstack([va, vb]), np.hstack([wa ^ wb, wb])


def classical_sc_decode(llr, code: PolarCode) -> np.ndarray:
    """SC estimate of u^N from channel LLRs (one block or a batch of rows).

    x = u B_N F^{(x)n} = (u F^{(x)n}) B_N, so bit-reversing the LLRs lets the
    natural-order recursion decide u[0], u[1], ... in index order.
    """
    llr = np.asarray(llr, dtype=float)
    single = llr.ndim == 1
    llr = np.atleast_2d(llr)
    if llr.shape[1] != code.N:
        raise ParameterError("LLR length does not match the code")
    log2_length(code.N)
    llr = np.clip(llr, -LLR_CLAMP, LLR_CLAMP)[:, bit_reversal(code.N)]
    frozen_mask = ~code.info_mask
    frozen_vals = np.zeros(code.N, dtype=np.uint8)
    frozen_vals[list(code.frozen_set)] = code.frozen_values
    u_hat, _ = _sc(llr, frozen_mask, frozen_vals)
    return u_hat[0] if single else u_hat


def construct_classical(channel: BpskChannel, receiver: Receiver | str, n_bits: int, K: int) -> PolarCode:
    """TARGET_RATE code on the Bhattacharyya profile of the induced DMC."""
    from .construction import select_information_set

    dmc = induce_dmc(channel, receiver)
    code = select_information_set(bhattacharyya_profile(n_bits, dmc.bhattacharyya), K=K,
                                  energy=channel.energy)
    code.metadata["receiver"] = dmc.source.value
    if dmc.kind == "Z":
        code.metadata["z_channel_construction"] = "Bhattacharyya sqrt(crossover), not discussed by theory"
    return code


@dataclass(frozen=True)
class ClassicalResult:
    records: list
    bit_errors: int
    info_bits: int

    @property
    def trials(self) -> int:
        return len(self.records)

    @property
    def errors(self) -> int:
        return sum(not r.success for r in self.records)

    @property
    def block_error(self) -> float:
        return self.errors / self.trials

    @property
    def bit_error(self) -> float:
        return self.bit_errors / self.info_bits if self.info_bits else 0.0


def _draw(code, seed, t):
    rng = trial_rng(seed, t)
    return rng.integers(0, 2, code.K, dtype=np.uint8), rng.random(code.N)


def simulate_dmc(dmc: InducedDmc, code: PolarCode, trials: int, seed: int, *,
                 threads: int = 1) -> ClassicalResult:
    """Monte Carlo block/bit error of classical SC decoding over ``dmc``.

    Trial ``t`` draws its message and channel noise from ``trial_rng(seed, t)``;
    encoding and decoding then run on the whole batch.
    """
    if trials < 1:
        raise ParameterError("trials must be >= 1")
    w = dmc.transition
    flip = np.array([w[0, 1], w[1, 0]])  # P(y != x | x)
    draws = run_trials(lambda t: _draw(code, seed, t), trials, threads=threads)
    messages = np.array([d[0] for d in draws]).reshape(trials, code.K)
    noise = np.array([d[1] for d in draws])
    blocks = np.zeros((trials, code.N), dtype=np.uint8)
    blocks[:, list(code.info_set)] = messages
    blocks[:, list(code.frozen_set)] = code.frozen_values
    x = encode(blocks)
    received = x ^ (noise < flip[x]).astype(np.uint8)
    u_hat = classical_sc_decode(dmc.llr(received), code)
    decoded = u_hat[:, list(code.info_set)]
    wrong = decoded != messages
    records = [TrialRecord(t, seed, bits(messages[t]), bits(decoded[t]), not wrong[t].any(), float("nan"))
               for t in range(trials)]
    return ClassicalResult(records, int(wrong.sum()), trials * code.K)


def simulate_classical(channel: BpskChannel, receiver: Receiver | str, code: PolarCode, trials: int,
                       seed: int, *, threads: int = 1) -> ClassicalResult:
    return simulate_dmc(induce_dmc(channel, receiver), code, trials, seed, threads=threads)
