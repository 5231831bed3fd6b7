"""
Quantum versus classical polar codes
====================================

Every symbol-by-symbol receiver turns the channel into a binary DMC.
A classical polar code over that DMC is the baseline.
"""

from cqpolar import BpskChannel, Receiver, induce_dmc
from cqpolar.classical import construct_classical, simulate_classical

E, N, K = 0.25, 8, 2
ch = BpskChannel(E)
for rx in Receiver:
    dmc = induce_dmc(ch, rx)
    code = construct_classical(ch, rx, N, K)
    res = simulate_classical(ch, rx, code, 20_000, seed=3)
    print(f"{rx.value:>9}: {dmc.kind} p={dmc.crossover:.4f} Z0={dmc.bhattacharyya:.4f} "
          f"C={dmc.capacity():.4f}  block error {res.block_error:.4f}")

# the same comparison from the command line:
#   cqpolar compare --E 0.25 --N 8 --K 2 --trials 20000 --seed 3
