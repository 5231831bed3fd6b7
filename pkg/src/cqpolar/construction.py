"""Per-index fidelity profiles, information-set selection and the
error bound 2 sqrt(sum_A sqrt(F_i) / 2) for classical-quantum polar codes.

Indices are 0-based.  Index ``i`` of a length-N code corresponds to the
synthesized channel seen by ``u[i]`` given ``u[:i]``, with ``u[i+1:]``
uniformly random.  Its binary expansion (MSB first) lists the branches
taken from the raw channel: bit 0 -> "minus", bit 1 -> "plus".
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .channel import QubitEmbedding, codeword_states
from .exceptions import GuardError, ParameterError
from .quantum import sqrt_fidelity, sqrt_fidelity_factored, von_neumann_entropy
from .transform import encode, log2_length

N_EXACT = 8
TIE_DECIMALS = 12
N_EXACT_MAX = 10

#: Printed into code files; the minus-branch constant is not fixed by the theory.
MINUS_BRANCH_NOTE = "f <- min(1, 2f - f^2), q = 2"


class ConstructionMode(str, enum.Enum):
    EXACT = "EXACT"
    SURROGATE_UPPER = "SURROGATE_UPPER"


@dataclass(frozen=True, eq=False)
class FidelityProfile:
    """sqrt(F) of every synthesized channel, exact or an upper bound."""

    sqrt_f: np.ndarray
    mode: ConstructionMode

    def __post_init__(self):
        arr = np.asarray(self.sqrt_f, dtype=float)
        log2_length(arr.size)
        if np.any((arr < 0.0) | (arr > 1.0)):
            raise ParameterError("sqrt-fidelity entries must lie in [0, 1]")
        arr.setflags(write=False)
        object.__setattr__(self, "sqrt_f", arr)
        object.__setattr__(self, "mode", ConstructionMode(self.mode))

    @property
    def N(self) -> int:
        return self.sqrt_f.size

    def __eq__(self, other):
        if not isinstance(other, FidelityProfile):
            return NotImplemented
        return self.mode == other.mode and np.array_equal(self.sqrt_f, other.sqrt_f)


def check_exact_size(n_bits: int, max_n: int = N_EXACT) -> None:
    if max_n > N_EXACT_MAX:
        raise GuardError(f"N_exact may be raised to at most {N_EXACT_MAX}, got {max_n}")
    if n_bits > max_n:
        raise GuardError(f"exact computation limited to N <= {max_n}, got N = {n_bits}")


# -- surrogate recursion ---------------------------------------------------

def bhattacharyya_recursion(n_bits: int, z0: float) -> np.ndarray:
    """Upper bounds from z -> (min(1, 2z - z^2), z^2), unrolled over log2(N) levels."""
    n = log2_length(n_bits)
    if not 0.0 <= z0 <= 1.0:
        raise ParameterError(f"initial parameter must lie in [0, 1], got {z0!r}")
    z = np.array([float(z0)])
    for _ in range(n):
        nxt = np.empty(2 * z.size)
        nxt[0::2] = np.minimum(1.0, 2.0 * z - z * z)
        nxt[1::2] = z * z
        z = nxt
    return z


def surrogate_profile(n_bits: int, sqrt_f0: float) -> FidelityProfile:
    return FidelityProfile(bhattacharyya_recursion(n_bits, sqrt_f0), ConstructionMode.SURROGATE_UPPER)


# -- exact averaged states ---------------------------------------------------

def _completions(prefix, n_bits, fixed=None):
    """All u^N extending ``prefix``; ``fixed`` pins later positions to given bits."""
    prefix = [int(b) for b in prefix]
    free = [k for k in range(len(prefix), n_bits) if not (fixed and k in fixed)]
    rows = np.zeros((1 << len(free), n_bits), dtype=np.uint8)
    rows[:, : len(prefix)] = prefix
    if fixed:
        for k, b in fixed.items():
            if k >= len(prefix):
                rows[:, k] = b
    if free:
        rows[:, free] = np.array(list(itertools.product((0, 1), repeat=len(free))), dtype=np.uint8)
    return rows


def averaged_state_factor(prefix, n_bits: int, embedding: QubitEmbedding, *, fixed=None,
                          max_n: int = N_EXACT) -> np.ndarray:
    """Matrix A (2^N x M) with A A^T the uniform mixture over completions of ``prefix``."""
    check_exact_size(n_bits, max_n)
    if not 1 <= len(prefix) <= n_bits:
        raise ParameterError(f"prefix length must lie in [1, {n_bits}], got {len(prefix)}")
    words = encode(_completions(prefix, n_bits, fixed))
    states = codeword_states(words, embedding)
    return states.T / math.sqrt(states.shape[0])


def exact_averaged_state(prefix, n_bits: int, embedding: QubitEmbedding, *, fixed=None,
                         max_n: int = N_EXACT) -> np.ndarray:
    """Density matrix averaged uniformly over all suffixes after ``prefix``."""
    a = averaged_state_factor(prefix, n_bits, embedding, fixed=fixed, max_n=max_n)
    return a @ a.T


def _prefixes(length):
    return itertools.product((0, 1), repeat=length)


def exact_split_sqrt_fidelity(n_bits: int, i: int, embedding: QubitEmbedding, *,
                              method: str = "factored", max_n: int = N_EXACT) -> float:
    """sqrt F of the split channel for ``u[i]``, averaged over the classical prefix register.

    ``method="dense"`` goes through full density matrices; ``"factored"``
    uses their low-rank square-root factors.  Both give the same number.
    """
    check_exact_size(n_bits, max_n)
    if not 0 <= i < n_bits:
        raise ParameterError(f"index must lie in [0, {n_bits}), got {i}")
    total = 0.0
    for prefix in _prefixes(i):
        a0 = averaged_state_factor(prefix + (0,), n_bits, embedding, max_n=max_n)
        a1 = averaged_state_factor(prefix + (1,), n_bits, embedding, max_n=max_n)
        if method == "factored":
            total += sqrt_fidelity_factored(a0, a1)
        elif method == "dense":
            total += sqrt_fidelity(a0 @ a0.T, a1 @ a1.T)
        else:
            raise ParameterError(f"unknown method {method!r}")
    return min(1.0, total / (1 << i))


def exact_split_fidelity(n_bits: int, i: int, embedding: QubitEmbedding, **kw) -> float:
    return exact_split_sqrt_fidelity(n_bits, i, embedding, **kw) ** 2


def exact_profile(n_bits: int, embedding: QubitEmbedding, *, max_n: int = N_EXACT) -> FidelityProfile:
    vals = [exact_split_sqrt_fidelity(n_bits, i, embedding, max_n=max_n) for i in range(n_bits)]
    return FidelityProfile(np.array(vals), ConstructionMode.EXACT)


def split_channel_holevo(n_bits: int, i: int, embedding: QubitEmbedding, *, max_n: int = N_EXACT) -> float:
    """Symmetric Holevo information of the split channel for ``u[i]`` (bits).

    The classical prefix register makes the state block diagonal, so the
    information is the prefix average of per-block Holevo quantities.
    """
    check_exact_size(n_bits, max_n)
    total = 0.0
    for prefix in _prefixes(i):
        r0 = exact_averaged_state(prefix + (0,), n_bits, embedding, max_n=max_n)
        r1 = exact_averaged_state(prefix + (1,), n_bits, embedding, max_n=max_n)
        total += (von_neumann_entropy(0.5 * (r0 + r1))
                  - 0.5 * von_neumann_entropy(r0) - 0.5 * von_neumann_entropy(r1))
    return total / (1 << i)


# -- codes -------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class PolarCode:
    """Information set, frozen values (over A^c in index order) and the profile used."""

    info_set: tuple
    frozen_values: np.ndarray
    profile: FidelityProfile
    energy: float | None = None
    rule: str = ""
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        info = tuple(sorted(int(i) for i in self.info_set))
        n_bits = self.profile.N
        if len(set(info)) != len(info) or any(not 0 <= i < n_bits for i in info):
            raise ParameterError("information set must hold distinct indices in [0, N)")
        frozen = np.asarray(self.frozen_values, dtype=np.uint8).ravel()
        if frozen.size != n_bits - len(info) or np.any(frozen > 1):
            raise ParameterError(f"need {n_bits - len(info)} binary frozen values, got {frozen.size}")
        frozen.setflags(write=False)
        object.__setattr__(self, "info_set", info)
        object.__setattr__(self, "frozen_values", frozen)

    @property
    def N(self) -> int:
        return self.profile.N

    @property
    def K(self) -> int:
        return len(self.info_set)

    @property
    def rate(self) -> float:
        return self.K / self.N

    @property
    def frozen_set(self) -> tuple:
        info = set(self.info_set)
        return tuple(i for i in range(self.N) if i not in info)

    @property
    def info_mask(self) -> np.ndarray:
        mask = np.zeros(self.N, dtype=bool)
        mask[list(self.info_set)] = True
        return mask

    def block(self, message) -> np.ndarray:
        """Full u^N carrying ``message`` (length K) on A and the frozen values on A^c."""
        message = np.asarray(message, dtype=np.uint8).ravel()
        if message.size != self.K:
            raise ParameterError(f"message must have {self.K} bits, got {message.size}")
        u = np.zeros(self.N, dtype=np.uint8)
        u[list(self.info_set)] = message
        u[list(self.frozen_set)] = self.frozen_values
        return u

    def with_frozen(self, frozen_values) -> "PolarCode":
        return PolarCode(self.info_set, frozen_values, self.profile, self.energy, self.rule,
                         dict(self.metadata))

    def same_structure(self, other: "PolarCode") -> bool:
        return (self.info_set == other.info_set
                and np.array_equal(self.frozen_values, other.frozen_values)
                and self.profile == other.profile
                and self.energy == other.energy)


def select_information_set(profile: FidelityProfile, *, K: int | None = None,
                           beta: float | None = None, frozen: str = "zero",
                           seed: int | None = None, energy: float | None = None) -> PolarCode:
    """Pick A by target size ``K`` (smallest sqrt F, ties to lower index) or by
    the threshold sqrt F < 2^(-N^beta).

    ``frozen`` is ``"zero"`` or ``"random"`` (seeded by ``seed``).
    """
    if (K is None) == (beta is None):
        raise ParameterError("give exactly one of K (target rate) or beta (threshold)")
    sf = profile.sqrt_f
    if K is not None:
        if not 0 <= K <= profile.N:
            raise ParameterError(f"K must lie in [0, {profile.N}], got {K}")
        # values equal to ~1e-12 are ties; those go to the lower index
        info = np.sort(np.argsort(np.round(sf, TIE_DECIMALS), kind="stable")[:K])
        rule = f"TARGET_RATE({K})"
    else:
        if not 0.0 < beta < 0.5:
            raise ParameterError(f"beta must lie in (0, 1/2), got {beta!r}")
        info = np.flatnonzero(sf < threshold(profile.N, beta))
        rule = f"THRESHOLD({beta!r})"
    n_frozen = profile.N - len(info)
    if frozen == "zero":
        values = np.zeros(n_frozen, dtype=np.uint8)
    elif frozen == "random":
        values = np.random.default_rng(seed).integers(0, 2, n_frozen, dtype=np.uint8)
    else:
        raise ParameterError(f"frozen must be 'zero' or 'random', got {frozen!r}")
    meta = {"empty_info_set": "true"} if len(info) == 0 else {}
    return PolarCode(tuple(int(i) for i in info), values, profile, energy, rule, meta)


def threshold(n_bits: int, beta: float) -> float:
    return 2.0 ** (-(n_bits ** beta))


def polarized_fraction(profile: FidelityProfile, beta: float) -> float:
    """Fraction of indices with sqrt F < 2^(-N^beta)."""
    if not 0.0 < beta < 0.5:
        raise ParameterError(f"beta must lie in (0, 1/2), got {beta!r}")
    return float(np.mean(profile.sqrt_f < threshold(profile.N, beta)))


def proposition1_bound(code: PolarCode, *, clamp: bool = True) -> float:
    """2 sqrt(sum_{i in A} sqrt(F_i) / 2), the frozen-averaged block-error bound."""
    raw = 2.0 * math.sqrt(0.5 * float(np.sum(code.profile.sqrt_f[list(code.info_set)])))
    return min(1.0, raw) if clamp else raw


# -- code file -----------------------------------------------------------------

def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def format_code(code: PolarCode) -> str:
    lines = [
        f"N={code.N}",
        f"K={code.K}",
        f"mode={code.profile.mode.value}",
        "A=" + ",".join(str(i) for i in code.info_set),
        "frozen=" + "".join(str(int(b)) for b in code.frozen_values),
        "sqrt_f=" + ",".join(_fmt(v) for v in code.profile.sqrt_f),
    ]
    if code.energy is not None:
        lines.append(f"E={_fmt(code.energy)}")
    if code.rule:
        lines.append(f"rule={code.rule}")
    for key in sorted(code.metadata):
        lines.append(f"# {key}={code.metadata[key]}")
    if code.profile.mode is ConstructionMode.SURROGATE_UPPER:
        lines.append(f"# minus_branch={MINUS_BRANCH_NOTE}")
    raw = proposition1_bound(code, clamp=False)
    lines.append(f"# proposition1_bound={_fmt(min(1.0, raw))} raw={_fmt(raw)}")
    return "\n".join(lines) + "\n"


def parse_code(text: str) -> PolarCode:
    fields, meta = {}, {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            key, sep, val = line[1:].strip().partition("=")
            if sep and key.strip() not in ("proposition1_bound", "minus_branch"):
                meta[key.strip()] = val.strip()
            continue
        key, sep, val = line.partition("=")
        if not sep:
            raise ParameterError(f"code file line {lineno}: expected key=value, got {line!r}")
        fields[key.strip()] = val.strip()
    missing = {"N", "K", "mode", "A", "frozen", "sqrt_f"} - fields.keys()
    if missing:
        raise ParameterError(f"code file lacks fields: {', '.join(sorted(missing))}")
    try:
        n_bits, k = int(fields["N"]), int(fields["K"])
        info = tuple(int(t) for t in fields["A"].split(",") if t)
        frozen = [int(ch) for ch in fields["frozen"]]
        sqrt_f = np.array([float(t) for t in fields["sqrt_f"].split(",") if t])
        energy = float(fields["E"]) if "E" in fields else None
    except ValueError as exc:
        raise ParameterError(f"malformed code file: {exc}") from exc
    if sqrt_f.size != n_bits or len(info) != k:
        raise ParameterError("code file N/K disagree with sqrt_f/A lengths")
    if fields["mode"] not in ConstructionMode.__members__:
        raise ParameterError(f"unknown construction mode {fields['mode']!r}")
    profile = FidelityProfile(sqrt_f, fields["mode"])
    return PolarCode(info, frozen, profile, energy, fields.get("rule", ""), meta)


def write_code(code: PolarCode, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_code(code))


def read_code(path) -> PolarCode:
    with open(path, encoding="utf-8") as fh:
        return parse_code(fh.read())
