"""
Capacity of the pure-loss channel at low photon number
======================================================

BPSK with a joint (collective) receiver beats any symbol-by-symbol
receiver, and the gap widens as the mean photon number drops.
"""

import numpy as np

from cqpolar import capacity as cap

# photon information efficiency, bits per photon
grid = np.geomspace(1e-4, 1.0, 9)
print(f"{'E':>8} {'homodyne':>9} {'dolinar':>9} {'holevo':>9} {'ultimate':>9}")
for e in grid:
    row = [cap.homodyne_capacity(e), cap.dolinar_capacity(e), cap.holevo_bpsk(e), cap.g(e)]
    print(f"{e:8.1e} " + " ".join(f"{c / e:9.3f}" for c in row))

# the Dolinar receiver saturates at 2 nats/photon, the Holevo rate keeps growing like ln(1/E)
e = 1e-4
print("C_1/E  (nats):", cap.dolinar_capacity(e) * np.log(2) / e)
print("C_inf/E (nats):", cap.holevo_bpsk(e) * np.log(2) / e)

# OOK and PPM for reference
for pt in cap.efficiency_table([1e-3], [cap.Scheme.OOK_DD, cap.Scheme.PPM_DD, cap.Scheme.PPM_HOLEVO]):
    print(f"{pt.scheme.value:>12}: {pt.bits_per_photon:.3f} bits/photon")
