"""Polar transform x = u G_N with G_N = B_N F^{(x)n}, F = [[1, 0], [1, 1]].

Bit indices are 0-based: the u_1..u_N of the usual notation are u[0]..u[N-1].
The bit-reversal permutation B_N is applied first, then n XOR butterfly
stages.
"""

from __future__ import annotations

import numpy as np

from .exceptions import ParameterError


def log2_length(n_bits: int) -> int:
    if n_bits < 1 or n_bits & (n_bits - 1):
        raise ParameterError(f"block length must be a power of two, got {n_bits}")
    return n_bits.bit_length() - 1


def bit_reversal(n_bits: int) -> np.ndarray:
    """Index map j -> j with its n-bit binary expansion reversed (an involution)."""
    n = log2_length(n_bits)
    perm = np.zeros(n_bits, dtype=np.int64)
    idx = np.arange(n_bits)
    for k in range(n):
        perm |= ((idx >> k) & 1) << (n - 1 - k)
    return perm


def encode(u) -> np.ndarray:
    """Encode one block (shape (N,)) or a batch of blocks (shape (M, N)) over GF(2)."""
    u = np.asarray(u)
    if u.ndim not in (1, 2):
        raise ParameterError("encode expects a 1-D block or a 2-D batch of blocks")
    if u.size and not np.all((u == 0) | (u == 1)):
        raise ParameterError("encode expects binary input")
    n_bits = u.shape[-1]
    n = log2_length(n_bits)
    x = u[..., bit_reversal(n_bits)].astype(np.uint8)
    lead = x.shape[:-1]
    half = n_bits
    for _ in range(n):
        half //= 2
        blocks = x.reshape(*lead, n_bits // (2 * half), 2, half)
        blocks[..., 0, :] ^= blocks[..., 1, :]
    return x
