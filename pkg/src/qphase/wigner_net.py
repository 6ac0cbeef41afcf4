"""Rotationally covariant quantum net, phase-point operators and the
discrete Wigner function.

Vertical lines q = q0 carry computational basis states |expand(q0)>; every
other line is R^k(vertical line) and carries U^k applied to that state.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from .finite_field import FieldBasis, expand
from .pauli_ops import (CliffordUnitary, basis_index, clifford_for,
                        pauli_frames, translation_matrix, transversal_rotation,
                        verify_clifford)
from .phase_space import (Line, LinearMap, PhasePoint, QuadraticForm,
                          all_points, all_striations, is_primitive_rotation,
                          map_order, striation_index_of)


class NetError(ValueError):
    pass


class DensityMatrixError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class QuantumNet:
    """Line -> rank-1 projector assignment.

    ``vectors[i][j]`` is the state on line ``striations[i].lines[j]``.
    """

    rotation: LinearMap
    unitary: CliffordUnitary
    basisQ: FieldBasis
    striations: tuple
    vectors: np.ndarray  # (d+1, d, d): striation, line, amplitude
    phase_points: np.ndarray  # (d, d, d, d): A(alpha) indexed [q, p]

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    @property
    def spec(self):
        return self.basisQ.spec

    def projector(self, line: Line) -> np.ndarray:
        i = striation_index_of(line.direction)
        j = self.striations[i].lines.index(line)
        v = self.vectors[i, j]
        return np.outer(v, v.conj())

    def projectors(self) -> np.ndarray:
        """(d+1, d, d, d) projector array indexed by striation, line."""
        v = self.vectors
        return np.einsum("sla,slb->slab", v, v.conj())

    def lines(self):
        for st in self.striations:
            yield from st.lines

    def A(self, alpha: PhasePoint) -> np.ndarray:
        return self.phase_points[alpha.q.bits, alpha.p.bits]


def build_net(R: LinearMap, U: CliffordUnitary, basisQ: FieldBasis,
              form: Optional[QuadraticForm] = None) -> QuantumNet:
    """Assign states to all d(d+1) lines from the vertical striation.

    ``form`` is only used to confirm R is primitive; without it the
    striation orbit of R is checked instead.
    """
    spec = basisQ.spec
    d = spec.order
    if form is not None and not is_primitive_rotation(R, form):
        raise NetError("R is not a primitive rotation of the given form")
    if map_order(R) != d + 1:
        raise NetError("R must have order d + 1")
    if U.map != R:
        verify_clifford(U.matrix, R, basisQ, points=_generators(spec))

    striations = all_striations(spec)
    vertical = striations[0].lines
    vectors = np.zeros((d + 1, d, d), dtype=complex)
    filled = np.zeros((d + 1, d), dtype=bool)
    Uk = np.eye(d, dtype=complex)
    Rk = LinearMap.identity(spec)
    for _ in range(d + 1):
        for line in vertical:
            ket = np.zeros(d, dtype=complex)
            q0 = line.c  # vertical lines are canonical 1*q + 0*p = c
            ket[basis_index(expand(q0, basisQ))] = 1
            image = Rk.map_line(line)
            i = striation_index_of(image.direction)
            j = striations[i].lines.index(image)
            if filled[i, j]:
                raise NetError("R does not cycle the striations")
            vectors[i, j] = Uk @ ket
            filled[i, j] = True
        Uk = U.matrix @ Uk
        Rk = R @ Rk
    if not filled.all():  # pragma: no cover
        raise NetError("striation orbit of R misses some lines")

    proj = np.einsum("sla,slb->slab", vectors, vectors.conj())
    A = proj[np.arange(d + 1)[:, None, None], line_index_table(spec)].sum(axis=0)
    A -= np.eye(d, dtype=complex)
    return QuantumNet(R, U, basisQ, tuple(striations), vectors, A)


@lru_cache(maxsize=None)
def line_index_table(spec) -> np.ndarray:
    """idx[i, q, p]: position within striation i of the line through (q, p).

    Vertical lines are ordered by q, sloped lines p = s q + c by c.
    """
    d = spec.order
    idx = np.zeros((d + 1, d, d), dtype=np.intp)
    for q in spec.elements():
        idx[0, q.bits, :] = q.bits
        for s_ in spec.elements():
            sq = s_ * q
            for p in spec.elements():
                idx[1 + s_.bits, q.bits, p.bits] = (p + sq).bits
    idx.setflags(write=False)
    return idx


def _generators(spec):
    return [PhasePoint(spec.one, spec.zero), PhasePoint(spec.zero, spec.one)]


def phase_point_operator(net: QuantumNet, alpha: PhasePoint) -> np.ndarray:
    """A(alpha) = sum of Q(line) over the d+1 lines through alpha, minus I."""
    return net.A(alpha)


def validate_density_matrix(rho: np.ndarray, atol: float = 1e-10) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise DensityMatrixError("density matrix must be square")
    if np.max(np.abs(rho - rho.conj().T)) > atol:
        raise DensityMatrixError("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1) > atol:
        raise DensityMatrixError("density matrix does not have unit trace")
    if np.linalg.eigvalsh(rho).min() < -atol:
        raise DensityMatrixError("density matrix is not positive semidefinite")
    return rho


def as_density(state: np.ndarray) -> np.ndarray:
    state = np.asarray(state, dtype=complex)
    if state.ndim == 1:
        return np.outer(state, state.conj())
    return state


@dataclass(frozen=True, eq=False)
class WignerFunction:
    """values[q, p] indexed by the field masks of the point."""

    values: np.ndarray
    state: np.ndarray

    @property
    def d(self) -> int:
        return self.values.shape[0]

    def __getitem__(self, alpha: PhasePoint) -> float:
        return float(self.values[alpha.q.bits, alpha.p.bits])

    def to_json(self) -> dict:
        return {"d": self.d, "values": self.values.tolist()}

    def to_csv(self) -> str:
        rows = ["q\\p," + ",".join(str(p) for p in range(self.d))]
        for q in range(self.d):
            rows.append(f"{q}," + ",".join(repr(float(x)) for x in self.values[q]))
        return "\n".join(rows) + "\n"


def wigner(net: QuantumNet, rho: np.ndarray) -> WignerFunction:
    """W(alpha) = Tr[rho A(alpha)] / d.  A 1-D input is taken as a pure state."""
    rho = validate_density_matrix(as_density(rho))
    d = net.dim
    vals = np.einsum("qpab,ba->qp", net.phase_points, rho).real / d
    return WignerFunction(vals, rho)


def line_probability(net: QuantumNet, rho: np.ndarray, i: int, j: int) -> float:
    v = net.vectors[i, j]
    return float(np.real(v.conj() @ rho @ v))


def max_center_value(net: QuantumNet, alpha: Optional[PhasePoint] = None) -> float:
    """Largest eigenvalue of A(alpha)/d: the maximum of W(alpha) over all states."""
    if alpha is None:
        alpha = PhasePoint(net.spec.zero, net.spec.zero)
    return float(np.linalg.eigvalsh(net.A(alpha)).max() / net.dim)


def random_pure_state(d: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=d) + 1j * rng.normal(size=d)
    return v / np.linalg.norm(v)


def random_density_matrix(d: int, rng: np.random.Generator, rank: Optional[int] = None) -> np.ndarray:
    rank = d if rank is None else rank
    G = rng.normal(size=(d, rank)) + 1j * rng.normal(size=(d, rank))
    rho = G @ G.conj().T
    return rho / np.trace(rho).real


@dataclass
class CovarianceReport:
    translation_deviation: float
    rotation_deviation: float
    reconstruction_deviation: float
    n_states: int

    @property
    def max_deviation(self) -> float:
        return max(self.translation_deviation, self.rotation_deviation,
                   self.reconstruction_deviation)

    def to_json(self) -> dict:
        return {"translation": self.translation_deviation,
                "rotation": self.rotation_deviation,
                "reconstruction": self.reconstruction_deviation,
                "n_states": self.n_states}


def covariance_check(net: QuantumNet, states=None, rng: Optional[np.random.Generator] = None,
                     n_states: int = 20) -> CovarianceReport:
    """Max deviations of W_{T rho T^+}(alpha + v) = W_rho(alpha),
    W_{U rho U^+}(R alpha) = W_rho(alpha) and rho = sum W(alpha) A(alpha)."""
    d = net.dim
    spec = net.spec
    if states is None:
        rng = np.random.default_rng(0) if rng is None else rng
        states = [random_pure_state(d, rng) for _ in range(n_states)]
    points = all_points(spec)
    U = net.unitary.matrix
    R = net.rotation
    rot_idx = [(R(a).q.bits, R(a).p.bits) for a in points]
    rq, rp = (np.array(c).reshape(d, d) for c in zip(*rot_idx))
    translations = [(v.q.bits, v.p.bits, translation_matrix(v, net.basisQ)) for v in points]
    grid = np.arange(d)
    trans = dev_rot = dev_rec = 0.0
    for state in states:
        rho = as_density(state)
        W = wigner(net, rho).values
        Wr = wigner(net, U @ rho @ U.conj().T).values
        dev_rot = max(dev_rot, float(np.max(np.abs(Wr[rq, rp] - W))))
        for vq, vp, T in translations:
            Wt = wigner(net, T @ rho @ T.conj().T).values
            # point addition is XOR on the bit masks
            shifted = Wt[np.ix_(grid ^ vq, grid ^ vp)]
            trans = max(trans, float(np.max(np.abs(shifted - W))))
        recon = np.einsum("qp,qpab->ab", W, net.phase_points)
        dev_rec = max(dev_rec, float(np.max(np.abs(recon - rho))))
    return CovarianceReport(trans, dev_rot, dev_rec, len(states))


FRAME_RULES = ("auto", "transversal", "max-center", "canonical")


def select_generating_unitary(R: LinearMap, basisQ: FieldBasis, rule: str = "auto"
                              ) -> tuple[CliffordUnitary, str]:
    """Pick one of the d^2 unitaries U T_w realizing R.

    "transversal": the frame commuting with V^(x)n (exists when R commutes
    with (q, p) -> (q + p, q), e.g. the form q^2 + qp + p^2 at odd n, and the
    basis is self-dual).  "max-center": the frame whose net has the largest
    max_center_value, first in point order on ties.  "canonical": the gauge of
    :func:`clifford_for`.  "auto" tries transversal, then max-center.
    Returns the unitary and the rule that produced it.
    """
    if rule not in FRAME_RULES:
        raise ValueError(f"unknown frame rule {rule!r}; expected one of {FRAME_RULES}")
    base = clifford_for(R, basisQ)
    if rule == "canonical":
        return base, "canonical"
    frames = pauli_frames(base)
    if rule in ("auto", "transversal"):
        V = transversal_rotation(basisQ.spec.n)
        for _, U in frames:
            if np.max(np.abs(U.matrix @ V - V @ U.matrix)) < 1e-9:
                return U, "transversal"
        if rule == "transversal":
            raise NetError("no Pauli frame commutes with the transversal rotation")
    best, best_val = None, -np.inf
    for _, U in frames:
        val = _origin_max_eigenvalue(U.matrix)
        if val > best_val + 1e-9:
            best, best_val = U, val
    return best, "max-center"


def _origin_max_eigenvalue(U: np.ndarray) -> float:
    """max_center_value at the origin without building the net: the lines
    through the origin carry U^k |0...0>, k = 0..d."""
    d = U.shape[0]
    ket = np.zeros(d, dtype=complex)
    ket[0] = 1
    A = -np.eye(d, dtype=complex)
    for _ in range(d + 1):
        A += np.outer(ket, ket.conj())
        ket = U @ ket
    return float(np.linalg.eigvalsh(A).max() / d)
