"""Build the rotationally covariant net for one qubit and look at a few
Wigner functions."""
import numpy as np

from qphase.pipeline import build_setup
from qphase.rotinv_states import xyz_eigenstates
from qphase.wigner_net import covariance_check, max_center_value, wigner

setup = build_setup(1)
print(setup.describe())
up, down = xyz_eigenstates()
for name, state in [("|0>", np.array([1, 0])), ("X+Y+Z up", up), ("X+Y+Z down", down)]:
    W = wigner(setup.net, state)
    print(f"\n{name}:\n{W.to_csv()}", end="")

print("\nlargest possible value at a point:", max_center_value(setup.net))
print(covariance_check(setup.net, rng=np.random.default_rng(0)).to_json())
