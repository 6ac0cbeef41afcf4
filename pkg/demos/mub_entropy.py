"""Mutually unbiased bases from the net, the sum of squared probabilities,
and the Renyi entropy bound, for random states and rotation eigenstates."""
import numpy as np

from qphase.mub_entropy import average_entropy_report, mub_from_net
from qphase.pipeline import build_setup
from qphase.rotinv_states import eigenstates_by_projection
from qphase.wigner_net import random_pure_state

rng = np.random.default_rng(1)
for n in (1, 2, 3):
    setup = build_setup(n)
    M = mub_from_net(setup.net)
    print(f"n={n}: {len(M)} bases, unbiasedness defect {M.unbiasedness_deviation():.1e}")
    reps = [average_entropy_report(M, random_pure_state(setup.d, rng)) for _ in range(5)]
    print("  random states: sum p^2 =", [round(r.design_sum, 12) for r in reps])
    print("  average entropy - bound:", [round(r.average - r.bound, 4) for r in reps])
    fam = eigenstates_by_projection(setup.unitary)
    eig = [average_entropy_report(M, v) for v in fam.eigenstates]
    print("  eigenstates at the bound:", all(r.equality for r in eig),
          f"(bound {eig[0].bound:.5f})")
