# A classical demon with a fair die.
#
# Low rolls (1, 2, 3) are turned upside down (7 - k); high rolls are left
# alone. The roll loses log 2 of entropy and a one-bit memory of "flipped or
# not" gains exactly log 2.

import math

import numpy as np

from maxwell_demon.classical import (
    ConditionalMap,
    FiniteDistribution,
    Partition,
    build_classical_dilation,
    pushforward,
)
from maxwell_demon.scenarios import DIE_BLOCKS, DIE_PHI

p = FiniteDistribution.uniform(6)
cm = ConditionalMap(DIE_PHI, Partition(DIE_BLOCKS))
q = pushforward(p, cm)
print("q =", np.round(q.p, 4))

dil = build_classical_dilation(p, cm, j0=0)
for i in range(6):
    k, j = dil.big_phi[(i, 0)]
    print(f"face {i + 1} -> face {k + 1}, memory {'flipped' if j else 'kept'}")
print("joint Q:\n", np.round(dil.q12, 4))
print(f"H(p)={p.entropy():.6f}  H(q)={q.entropy():.6f}  H(Q2)={dil.q2.entropy():.6f}"
      f"  log 2={math.log(2):.6f}")
