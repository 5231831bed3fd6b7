"""BPSK coherent-state channel and its exact real embedding.

The two received pulses |+sqrt(E)> and |-sqrt(E)> span a two-dimensional
subspace of the single-mode Fock space.  In the symmetric/antisymmetric
basis of that subspace both states have real coordinates

    |psi_0> = (c, +s),   |psi_1> = (c, -s),

with c**2 - s**2 equal to the overlap e^{-2E}.  Every later computation
(codeword states, averaged states, projectors) lives in the N-fold tensor
power of this real plane, so nothing below needs complex arithmetic.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .exceptions import ParameterError

#: Effective energies above this clamp the overlap to exactly zero.
ENERGY_GUARD = 50.0


@dataclass(frozen=True)
class BpskChannel:
    """Pure-loss channel fed with equal-energy BPSK coherent states.

    ``energy`` is the mean transmitted photon number per pulse and
    ``eta`` the transmissivity; only their product matters.
    """

    energy: float
    eta: float = 1.0

    def __post_init__(self):
        if not (self.energy >= 0.0) or not math.isfinite(self.energy):
            raise ParameterError(f"energy must be a finite number >= 0, got {self.energy!r}")
        if not (0.0 < self.eta <= 1.0):
            raise ParameterError(f"eta must lie in (0, 1], got {self.eta!r}")

    @property
    def effective_energy(self) -> float:
        return self.eta * self.energy

    def overlap(self) -> float:
        return overlap(self)

    def fidelity(self) -> float:
        return overlap(self) ** 2

    def embedding(self) -> "QubitEmbedding":
        return QubitEmbedding.from_overlap(overlap(self))


def overlap(channel: BpskChannel) -> float:
    """Inner product <psi_0|psi_1> = exp(-2 eta E) of the received pulses."""
    e = channel.effective_energy
    if e > ENERGY_GUARD:
        warnings.warn(
            f"effective energy {e:g} exceeds {ENERGY_GUARD:g}; overlap clamped to 0",
            RuntimeWarning,
            stacklevel=2,
        )
        return 0.0
    return math.exp(-2.0 * e)


def fidelity(channel: BpskChannel) -> float:
    return overlap(channel) ** 2


@dataclass(frozen=True)
class QubitEmbedding:
    c: float
    s: float

    @classmethod
    def from_overlap(cls, gamma: float) -> "QubitEmbedding":
        if not (0.0 <= gamma <= 1.0):
            raise ParameterError(f"overlap must lie in [0, 1], got {gamma!r}")
        return cls(math.sqrt((1.0 + gamma) / 2.0), math.sqrt((1.0 - gamma) / 2.0))

    @classmethod
    def from_energy(cls, energy: float, eta: float = 1.0) -> "QubitEmbedding":
        return BpskChannel(energy, eta).embedding()

    @property
    def gamma(self) -> float:
        return self.c * self.c - self.s * self.s


def embed_symbol(bit: int, embedding: QubitEmbedding) -> np.ndarray:
    if bit not in (0, 1):
        raise ParameterError(f"bit must be 0 or 1, got {bit!r}")
    return np.array([embedding.c, embedding.s if bit == 0 else -embedding.s])


def _check_block_length(n_symbols: int) -> int:
    if n_symbols < 1 or n_symbols & (n_symbols - 1):
        raise ParameterError(f"block length must be a power of two, got {n_symbols}")
    return n_symbols.bit_length() - 1


def codeword_state(x, embedding: QubitEmbedding) -> np.ndarray:
    """Tensor product |psi_{x_1}> (x) ... (x) |psi_{x_N}> as a length-2^N vector.

    Symbol 0 is the most significant tensor factor, matching ``np.kron``.
    """
    x = np.asarray(x, dtype=np.int64).ravel()
    _check_block_length(x.size)
    state = np.ones(1)
    for bit in x:
        state = np.kron(state, embed_symbol(int(bit), embedding))
    return state


def codeword_states(words, embedding: QubitEmbedding) -> np.ndarray:
    """Codeword states for a batch of words, one row per word.

    Uses the closed form psi_x[b] = c^(N-|b|) s^|b| (-1)^(x.b), where b runs
    over basis labels (MSB = first symbol).  Equal to stacking
    :func:`codeword_state` over the rows of ``words``.
    """
    words = np.atleast_2d(np.asarray(words, dtype=np.int64))
    n_symbols = words.shape[1]
    _check_block_length(n_symbols)
    labels = _basis_bits(n_symbols)  # (2^N, N)
    weight = labels.sum(axis=1)
    magnitude = embedding.c ** (n_symbols - weight) * embedding.s ** weight
    parity = (words @ labels.T) & 1
    return np.where(parity == 1, -magnitude, magnitude)


def _basis_bits(n_symbols: int) -> np.ndarray:
    idx = np.arange(1 << n_symbols)
    shifts = np.arange(n_symbols - 1, -1, -1)
    return ((idx[:, None] >> shifts) & 1).astype(np.int64)


def hamming_distance(x, y) -> int:
    return int(np.count_nonzero(np.asarray(x) != np.asarray(y)))
