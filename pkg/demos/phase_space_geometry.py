"""Lines, striations and circles of the 4 x 4 phase space, and a rotation
that runs around every circle."""
from qphase.finite_field import FieldSpec
from qphase.phase_space import (QuadraticForm, all_circles, all_striations, map_order,
                                primitive_rotation, striation_permutation)

spec = FieldSpec.default(2)
for st in all_striations(spec):
    pts = [sorted(x.bits for x in ln.points) for ln in st.lines]
    print(f"striation {st.index} direction {st.direction}: {pts[0]} ...")

w = spec.element(2)
form = QuadraticForm(spec.one, w)
for c, pts in all_circles(form).items():
    print(f"circle Q = {c}: {sorted(x.bits for x in pts)}")

R = primitive_rotation(w)
print("\nR =", R.to_json(), "order", map_order(R))
print("striation cycle:", striation_permutation(R))

x = next(iter(all_circles(form)[1]))
orbit = [x]
for _ in range(4):
    orbit.append(R(orbit[-1]))
print("orbit of", x, "->", orbit)
