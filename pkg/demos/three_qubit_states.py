"""The eight rotation eigenstates for three qubits: which one has a
nonnegative Wigner function, its centre value, and its product-state form."""
import numpy as np

from qphase.pipeline import example_setup
from qphase.rotinv_states import (build_plus_minus_state, coherent_lattice,
                                  eigenstates_by_projection, positive_member, positivity_scan)
from qphase.wigner_net import max_center_value, wigner

setup = example_setup("three_qubit")
print("frame rule:", setup.frame_rule)
fam = eigenstates_by_projection(setup.unitary)
for label, positive, lowest in positivity_scan(fam, setup.net):
    print(f"  label {label}: min W = {lowest:+.4f}{'  <- nonnegative' if positive else ''}")

psi = positive_member(fam, setup.net)
W = wigner(setup.net, psi)
print(f"\nvalue at the origin: {W.values[0, 0]:.5f}  (upper bound {max_center_value(setup.net):.5f})")

fit = build_plus_minus_state(fam, setup.net)
print("plus-minus fit:", fit.to_json())

lattice = coherent_lattice(psi, setup.basis)
centres = [wigner(setup.net, s).values[v.q.bits, v.p.bits] for v, s in lattice.items()]
print(f"{len(lattice)} translated copies, centre values in [{min(centres):.5f}, {max(centres):.5f}]")
print("spread of centre values:", np.ptp(centres))
