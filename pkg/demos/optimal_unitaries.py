# How low can the conditional action push the entropy?
#
# For fixed rho and projectors, rotating each branch so its eigenvectors
# (sorted by weight) line up with one common basis gives the smallest output
# entropy we know of. Here it is compared against Haar-random choices.

import numpy as np

from maxwell_demon.dilation import conditional_entropy, optimal_unitaries
from maxwell_demon.sampling import haar_unitary, make_rng, random_density
from maxwell_demon.states import vn_entropy

rng = make_rng(5)
for _ in range(5):
    rho = random_density(4, rng)
    a = haar_unitary(4, rng)
    ps = [a[:, :2] @ a[:, :2].conj().T, a[:, 2:] @ a[:, 2:].conj().T]
    s_opt = conditional_entropy(rho, ps, optimal_unitaries(rho, ps))
    fams = haar_unitary(4, rng, size=1000).reshape(500, 2, 4, 4)
    best = min(conditional_entropy(rho, ps, fam) for fam in fams)
    print(f"S0={vn_entropy(rho):.4f}  aligned={s_opt:.6f}  best sampled={best:.6f}")
