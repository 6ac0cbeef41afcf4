"""GF(2^n) arithmetic: tables for GF(4), a self-dual basis, and coordinates."""
from qphase.finite_field import FieldSpec, expand, find_self_dual_basis

gf4 = FieldSpec.default(2)
w = gf4.element(2)
print("w * w =", (w * w).bits, "(w + 1)")
print("1 / w =", w.inv().bits)

print("\nmultiplication table of GF(4):")
for x in gf4.elements():
    print("  ", [(x * y).bits for y in gf4.elements()])

for n in range(1, 5):
    spec = FieldSpec.default(n)
    basis = find_self_dual_basis(spec)
    print(f"\nGF({spec.order}) modulus {spec.modulus:#b}, self-dual basis {basis.masks}")
    print("  traces:", [x.trace().bits for x in spec.elements()])
    print("  coordinates of 1:", expand(spec.one, basis))
