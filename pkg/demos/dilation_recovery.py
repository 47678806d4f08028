# From an instrument back to its conditional-action form and a dilation.
#
# A random Maxwell instrument is written out as Kraus operators, the
# projectors and unitaries are recovered from those alone, and the standard
# dilation is checked against the instrument on random states.

import numpy as np

from maxwell_demon.dilation import build_standard_dilation, entropy_balance, verify_dilation
from maxwell_demon.errors import NotMaxwell
from maxwell_demon.instruments import recover_maxwell_form, sqrt_instrument
from maxwell_demon.sampling import make_rng, random_density, random_maxwell_instrument

rng = make_rng(2024)
instr, ps, us = random_maxwell_instrument(4, 3, rng)
rp, ru = recover_maxwell_form(instr)
print("projector error:", max(np.linalg.norm(a - b) for a, b in zip(rp, ps)))
print("unitary error on ranges:",
      max(np.linalg.norm((a - b) @ p) for a, b, p in zip(ru, us, ps)))

spec = build_standard_dilation(rp, ru)
print("ancilla dimension:", spec.ancilla_dim)
print(verify_dilation(spec, instr, trials=50, seed=1))

bal = entropy_balance(spec, instr, random_density(4, rng))
for key, val in bal.slacks().items():
    print(f"  {key:<22} {val: .3e}")  # all <= 0

# an unsharp measurement is not a conditional action
f = np.diag([0.2, 0.5, 0.5, 0.9])
try:
    recover_maxwell_form(sqrt_instrument([f, np.eye(4) - f]))
except NotMaxwell as exc:
    print("rejected:", exc.reason)
