"""Capacities and error probabilities of the binary optical alphabets.

All entropies are in bits.  Efficiencies are reported per photon both in
bits and in nats.
"""

from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.special import erfc, xlogy

from .exceptions import ParameterError

LN2 = math.log(2.0)

# Prior search interval and tolerance for every optimized capacity.
PRIOR_BOUNDS = (1e-9, 0.5)
PRIOR_XTOL = 1e-10
_GRID_POINTS = 161


class Scheme(str, enum.Enum):
    ULT = "ULT"
    BPSK_HOLEVO = "BPSK_HOLEVO"
    BPSK_DOLINAR = "BPSK_DOLINAR"
    BPSK_HOMODYNE = "BPSK_HOMODYNE"
    KENNEDY = "KENNEDY"
    KENNEDY_EQUIPRIOR = "KENNEDY_EQUIPRIOR"
    OOK_DD = "OOK_DD"
    OOK_HOLEVO = "OOK_HOLEVO"
    PPM_DD = "PPM_DD"
    PPM_HOLEVO = "PPM_HOLEVO"


@dataclass(frozen=True)
class CapacityPoint:
    scheme: Scheme
    energy: float
    value: float

    @property
    def bits_per_photon(self) -> float:
        return self.value / self.energy

    @property
    def nats_per_photon(self) -> float:
        return self.value * LN2 / self.energy


def _check_energy(energy):
    if not energy >= 0.0:
        raise ParameterError(f"energy must be >= 0, got {energy!r}")


def _check_probability(p, name="probability"):
    if not 0.0 <= p <= 1.0:
        raise ParameterError(f"{name} must lie in [0, 1], got {p!r}")


def h2(p):
    """Binary entropy in bits with 0 log 0 = 0."""
    p = np.asarray(p, dtype=float)
    out = -(xlogy(p, p) + xlogy(1.0 - p, 1.0 - p)) / LN2
    return float(out) if out.ndim == 0 else out


def g(x: float) -> float:
    """Holevo capacity g(x) = (1+x)log2(1+x) - x log2 x of the pure-loss channel."""
    if not x >= 0.0:
        raise ParameterError(f"g(x) requires x >= 0, got {x!r}")
    return float((xlogy(1.0 + x, 1.0 + x) - xlogy(x, x)) / LN2)


def dolinar_pe(energy: float) -> float:
    """Helstrom error for equiprior BPSK, reached by the Dolinar receiver."""
    _check_energy(energy)
    # 1 - sqrt(1 - e^{-4E}) loses all digits at small E; use the product form.
    f = math.exp(-4.0 * energy)
    return 0.5 * f / (1.0 + math.sqrt(1.0 - f))


def homodyne_pe(energy: float) -> float:
    _check_energy(energy)
    return float(0.5 * erfc(math.sqrt(2.0 * energy)))


def kennedy_crossover(energy: float) -> float:
    _check_energy(energy)
    return math.exp(-4.0 * energy)


def kennedy_pe(energy: float) -> float:
    return 0.5 * kennedy_crossover(energy)


def bsc_capacity(p: float) -> float:
    _check_probability(p, "crossover")
    return 1.0 - h2(p)


def z_channel_mi(crossover: float, prior: float) -> float:
    """I(X;Y) of the Z-channel where input 1 (used with probability ``prior``)
    is read as 0 with probability ``crossover`` and input 0 is noiseless."""
    _check_probability(crossover, "crossover")
    _check_probability(prior, "prior")
    return float(h2(prior * (1.0 - crossover)) - prior * h2(crossover))


def _maximize_prior(objective, bounds=PRIOR_BOUNDS):
    """Maximize a scalar objective over the prior.

    A log-spaced scan brackets the maximum before bounded Brent refinement,
    so objectives whose peak sits near p ~ 1e-3 are not missed.
    """
    lo, hi = bounds
    grid = np.geomspace(lo, hi, _GRID_POINTS)
    values = np.array([objective(p) for p in grid])
    k = int(np.argmax(values))
    a, b = grid[max(k - 1, 0)], grid[min(k + 1, grid.size - 1)]
    res = minimize_scalar(lambda p: -objective(p), bounds=(a, b), method="bounded",
                          options={"xatol": PRIOR_XTOL})
    if -res.fun >= values[k]:
        return float(-res.fun), float(res.x)
    return float(values[k]), float(grid[k])


def z_channel_capacity(crossover: float, prior: float | None = None) -> float:
    """Mutual information at ``prior``, or the capacity when ``prior`` is None."""
    if prior is not None:
        return z_channel_mi(crossover, prior)
    return z_channel_optimum(crossover)[0]


def z_channel_optimum(crossover: float) -> tuple[float, float]:
    _check_probability(crossover, "crossover")
    if crossover == 1.0:
        return 0.0, 0.5
    return _maximize_prior(lambda p: z_channel_mi(crossover, p))


def holevo_binary_ensemble(prior: float, gamma: float) -> float:
    """Von Neumann entropy of p|psi_0><psi_0| + (1-p)|psi_1><psi_1|, <psi_0|psi_1> = gamma."""
    _check_probability(prior, "prior")
    _check_probability(gamma, "overlap")
    mix = prior * (1.0 - prior) * (1.0 - gamma * gamma)
    # smaller eigenvalue 1/2 - sqrt(1/4 - mix), written without cancellation
    small = mix / (0.5 + math.sqrt(max(0.25 - mix, 0.0)))
    return h2(small)


def holevo_bpsk(energy: float) -> float:
    """Holevo capacity of equiprior BPSK, H2[(1 + e^{-2E})/2]."""
    _check_energy(energy)
    return h2(-0.5 * math.expm1(-2.0 * energy))


def dolinar_capacity(energy: float) -> float:
    return bsc_capacity(dolinar_pe(energy))


def homodyne_capacity(energy: float) -> float:
    return bsc_capacity(homodyne_pe(energy))


def kennedy_capacity(energy: float, prior: float | None = None) -> float:
    return z_channel_capacity(kennedy_crossover(energy), prior)


def ook_dd_optimum(energy: float) -> tuple[float, float]:
    """(capacity, optimal pulse prior) for OOK with photon counting."""
    _check_energy(energy)
    if energy == 0.0:
        return 0.0, 0.0
    return _maximize_prior(lambda p: z_channel_mi(math.exp(-energy / p), p))


def ook_holevo_optimum(energy: float) -> tuple[float, float]:
    """(Holevo capacity, optimal pulse prior) of the OOK alphabet {|0>, |sqrt(E/p)>}."""
    _check_energy(energy)
    if energy == 0.0:
        return 0.0, 0.0
    return _maximize_prior(lambda p: holevo_binary_ensemble(p, math.exp(-0.5 * energy / p)))


def ook_dd_capacity(energy: float) -> float:
    return ook_dd_optimum(energy)[0]


def ook_holevo_capacity(energy: float) -> float:
    return ook_holevo_optimum(energy)[0]


def _check_ppm_order(q):
    if not isinstance(q, (int, np.integer)) or q < 2 or q & (q - 1):
        raise ParameterError(f"PPM order must be a power of two >= 2, got {q!r}")


def ppm_dd_capacity(q: int, energy: float) -> float:
    """Bits per slot of q-ary PPM with photon counting (no-click = erasure)."""
    _check_ppm_order(q)
    _check_energy(energy)
    return -math.expm1(-q * energy) * math.log2(q) / q


def ppm_holevo_capacity(q: int, energy: float) -> float:
    """Bits per slot: entropy of the uniform PPM mixture divided by q."""
    _check_ppm_order(q)
    _check_energy(energy)
    gamma = math.exp(-q * energy)
    big = (1.0 + (q - 1) * gamma) / q
    small = (1.0 - gamma) / q
    entropy = -(xlogy(big, big) + (q - 1) * xlogy(small, small)) / LN2
    return float(entropy) / q


#: Orders scanned when no PPM order is fixed.
PPM_ORDERS = tuple(2 ** k for k in range(1, 17))


def _best_ppm(fn, energy, q):
    if q is not None:
        return fn(q, energy)
    return max(fn(order, energy) for order in PPM_ORDERS)


def capacity(scheme: Scheme | str, energy: float, *, ppm_order: int | None = None) -> float:
    """Bits per channel use (per slot for PPM) of ``scheme`` at mean energy ``energy``.

    PPM schemes take the best order in :data:`PPM_ORDERS` unless ``ppm_order`` is given.
    """
    scheme = Scheme(scheme)
    if scheme is Scheme.ULT:
        return g(energy)
    if scheme is Scheme.BPSK_HOLEVO:
        return holevo_bpsk(energy)
    if scheme is Scheme.BPSK_DOLINAR:
        return dolinar_capacity(energy)
    if scheme is Scheme.BPSK_HOMODYNE:
        return homodyne_capacity(energy)
    if scheme is Scheme.KENNEDY:
        return kennedy_capacity(energy)
    if scheme is Scheme.KENNEDY_EQUIPRIOR:
        return kennedy_capacity(energy, 0.5)
    if scheme is Scheme.OOK_DD:
        return ook_dd_capacity(energy)
    if scheme is Scheme.OOK_HOLEVO:
        return ook_holevo_capacity(energy)
    if scheme is Scheme.PPM_DD:
        return _best_ppm(ppm_dd_capacity, energy, ppm_order)
    return _best_ppm(ppm_holevo_capacity, energy, ppm_order)


def efficiency_table(energies: Iterable[float], schemes: Sequence[Scheme | str] = tuple(Scheme),
                     *, ppm_order: int | None = None) -> list[CapacityPoint]:
    """Capacity points for every (scheme, E), scheme-major order."""
    energies = [float(e) for e in energies]
    if any(not e > 0.0 for e in energies):
        raise ParameterError("efficiency table energies must all be > 0")
    return [
        CapacityPoint(Scheme(s), e, capacity(s, e, ppm_order=ppm_order))
        for s in schemes
        for e in energies
    ]


CSV_HEADER = ("scheme", "E", "bits_per_use", "bits_per_photon", "nats_per_photon")


def fmt(x: float) -> str:
    """17 significant digits; round-trips every double."""
    return format(float(x), ".17g")


def write_capacity_csv(points: Iterable[CapacityPoint], fh) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for pt in points:
        writer.writerow([pt.scheme.value, fmt(pt.energy), fmt(pt.value),
                         fmt(pt.bits_per_photon), fmt(pt.nats_per_photon)])
