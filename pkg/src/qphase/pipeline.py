"""Assembles field, basis, form, rotation, unitary and net into one setup,
and holds the fixed worked examples for one, two and three qubits."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .finite_field import FieldBasis, FieldSpec, find_self_dual_basis
from .pauli_ops import CliffordUnitary
from .phase_space import (LinearMap, QuadraticForm, default_form,
                          is_primitive_rotation, rotation_for_form)
from .wigner_net import QuantumNet, build_net, select_generating_unitary

# Two-qubit rotation unitary for R = [[1, 1], [w+1, w]] with basis (w, w+1).
TWO_QUBIT_UNITARY = 0.5 * np.array([
    [1, 1j, 1j, -1],
    [1j, 1, -1, 1j],
    [1, 1j, -1j, 1],
    [-1j, -1, -1, 1j],
], dtype=complex)


def two_qubit_rotation(spec: Optional[FieldSpec] = None) -> LinearMap:
    """[[1, 1], [w + 1, w]] over GF(4)."""
    spec = spec or FieldSpec.default(2)
    return LinearMap.from_bits(spec, [[1, 1], [3, 2]])


def three_qubit_rotation(spec: Optional[FieldSpec] = None) -> LinearMap:
    """[[b^3, b^6], [b^6, b^5]] over GF(8) with b^3 + b^2 + 1 = 0."""
    spec = spec or FieldSpec(3, 0b1101)
    b = spec.generator
    return LinearMap(b ** 3, b ** 6, b ** 6, b ** 5)


def three_qubit_form(spec: Optional[FieldSpec] = None) -> QuadraticForm:
    """q^2 + qp + p^2."""
    spec = spec or FieldSpec(3, 0b1101)
    return QuadraticForm(spec.one, spec.one)


@dataclass(frozen=True, eq=False)
class Setup:
    spec: FieldSpec
    basis: FieldBasis
    form: QuadraticForm
    rotation: LinearMap
    unitary: CliffordUnitary
    frame_rule: str
    net: QuantumNet

    @property
    def n(self) -> int:
        return self.spec.n

    @property
    def d(self) -> int:
        return self.spec.order

    def describe(self) -> dict:
        return {
            "field": self.spec.to_json(),
            "basis": list(self.basis.masks),
            "dual_basis": list(self.basis.dual.masks),
            "form": self.form.to_json(),
            "rotation": self.rotation.to_json(),
            "frame_rule": self.frame_rule,
        }


def build_setup(n: int, modulus: Optional[int] = None, form_a: Optional[int] = None,
                form_b: Optional[int] = None, basis: Optional[Sequence[int]] = None,
                rotation: Optional[LinearMap] = None, frame: str = "auto") -> Setup:
    """Defaults: the default modulus, the smallest self-dual basis, the form
    (1, b) with b the smallest primitive coefficient, its closed-form rotation."""
    spec = FieldSpec(n, modulus) if modulus is not None else FieldSpec.default(n)
    fb = FieldBasis.from_bits(spec, basis) if basis is not None else find_self_dual_basis(spec)
    a = spec.element(form_a) if form_a is not None else None
    b = spec.element(form_b) if form_b is not None else None
    form = default_form(spec, a, b)
    R = rotation if rotation is not None else rotation_for_form(form)
    if not is_primitive_rotation(R, form):
        raise ValueError("rotation is not primitive for the chosen form")
    U, rule = select_generating_unitary(R, fb, frame)
    net = build_net(R, U, fb, form)
    return Setup(spec, fb, form, R, U, rule, net)


def example_setup(section: str) -> Setup:
    """one_qubit, two_qubit or three_qubit worked example."""
    if section == "one_qubit":
        return build_setup(1)
    if section == "two_qubit":
        spec = FieldSpec.default(2)
        return build_setup(2, form_a=1, form_b=2, basis=(2, 3),
                           rotation=two_qubit_rotation(spec))
    if section == "three_qubit":
        spec = FieldSpec(3, 0b1101)
        return build_setup(3, modulus=0b1101, form_a=1, form_b=1,
                           rotation=three_qubit_rotation(spec))
    raise ValueError(f"unknown section {section!r}")
