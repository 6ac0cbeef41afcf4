"""A unitary that moves Pauli strings the way a phase-space rotation moves points."""
import numpy as np

from qphase.finite_field import FieldBasis, FieldSpec
from qphase.pauli_ops import clifford_for, conjugation_image, verify_clifford
from qphase.phase_space import PhasePoint, all_points
from qphase.pipeline import TWO_QUBIT_UNITARY, two_qubit_rotation

spec = FieldSpec.default(2)
basis = FieldBasis.from_bits(spec, (2, 3))
R = two_qubit_rotation(spec)

U = clifford_for(R, basis)
np.set_printoptions(precision=3, suppress=True)
print("synthesised U:\n", U.matrix)
print("worst phase defect over all 16 points:", verify_clifford(U.matrix, R, basis))

print("\nhand-written fixture:")
w, phase = conjugation_image(TWO_QUBIT_UNITARY, PhasePoint.from_bits(spec, 1, 0), basis)
print("  T(1,0) -> phase", phase, "times T", w)
for v in all_points(spec)[:6]:
    print(f"  T{v} -> T{conjugation_image(U.matrix, v, basis)[0]}   R{v} = {R(v)}")
