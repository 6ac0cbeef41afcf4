"""Pauli strings T_(q,p) indexed by phase-space points, and Clifford
unitaries realizing unit-determinant linear maps of the phase space.

Qubit 1 is the leftmost tensor factor, so the computational basis index of
the bit string (x_1, ..., x_n) is sum_i x_i 2^(n-i).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache, reduce
from typing import Sequence

import numpy as np

from .finite_field import FieldBasis, combine, expand
from .phase_space import LinearMap, PhasePoint, all_points

ATOL = 1e-10


class NotCliffordError(ValueError):
    pass


class UnsupportedMapError(ValueError):
    pass


def pauli_x() -> np.ndarray:
    return np.array([[0, 1], [1, 0]], dtype=complex)


def pauli_z() -> np.ndarray:
    return np.array([[1, 0], [0, -1]], dtype=complex)


def pauli_y() -> np.ndarray:
    return np.array([[0, -1j], [1j, 0]], dtype=complex)


_I2 = np.eye(2, dtype=complex)
_X = pauli_x()
_Z = pauli_z()
_XZ = _X @ _Z


def kron_all(factors: Sequence[np.ndarray]) -> np.ndarray:
    """Tensor product, first factor leftmost; vectors or matrices."""
    return reduce(np.kron, [np.asarray(f, dtype=complex) for f in factors])


@lru_cache(maxsize=None)
def _pauli_string(xbits: tuple[int, ...], zbits: tuple[int, ...]) -> np.ndarray:
    table = {(0, 0): _I2, (1, 0): _X, (0, 1): _Z, (1, 1): _XZ}
    m = kron_all([table[xz] for xz in zip(xbits, zbits)])
    m.setflags(write=False)
    return m


def pauli_string(xbits: Sequence[int], zbits: Sequence[int]) -> np.ndarray:
    """X^x1 Z^z1 (x) ... (x) X^xn Z^zn (read-only array)."""
    return _pauli_string(tuple(int(b) for b in xbits), tuple(int(b) for b in zbits))


def point_bits(v: PhasePoint, basis: FieldBasis) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """(x, z): q expanded in ``basis``, p expanded in its dual."""
    return expand(v.q, basis), expand(v.p, basis.dual)


def point_from_bits(xbits: Sequence[int], zbits: Sequence[int],
                    basis: FieldBasis) -> PhasePoint:
    return PhasePoint(combine(xbits, basis), combine(zbits, basis.dual))


def basis_index(bits: Sequence[int]) -> int:
    idx = 0
    for b in bits:
        idx = (idx << 1) | int(b)
    return idx


@dataclass(frozen=True, eq=False)
class TranslationOperator:
    point: PhasePoint
    matrix: np.ndarray
    basisQ: FieldBasis
    basisP: FieldBasis


def translation_matrix(v: PhasePoint, basis: FieldBasis) -> np.ndarray:
    x, z = point_bits(v, basis)
    return pauli_string(x, z)


def translation(v: PhasePoint, basisQ: FieldBasis) -> TranslationOperator:
    return TranslationOperator(v, translation_matrix(v, basisQ), basisQ, basisQ.dual)


def hermitian_phase(v: PhasePoint, basis: FieldBasis) -> complex:
    """i^m, m = number of qubits carrying XZ; i^m T_v is Hermitian."""
    x, z = point_bits(v, basis)
    m = sum(a & b for a, b in zip(x, z))
    return 1j ** m


def symplectic_product(u: PhasePoint, v: PhasePoint) -> int:
    """trace(q_u p_v + p_u q_v): 0 if T_u, T_v commute, 1 if they anticommute."""
    return (u.q * v.p + u.p * v.q).trace().bits


def weyl_commutation_sign(u: PhasePoint, v: PhasePoint, basisQ: FieldBasis) -> int:
    """s with T_u T_v = s T_v T_u, read off the matrices."""
    tu = translation_matrix(u, basisQ)
    tv = translation_matrix(v, basisQ)
    left, right = tu @ tv, tv @ tu
    if np.allclose(left, right, atol=ATOL):
        return 1
    if np.allclose(left, -right, atol=ATOL):
        return -1
    raise NotCliffordError("Pauli strings neither commute nor anticommute")  # pragma: no cover


def conjugation_image(U: np.ndarray, v: PhasePoint, basisQ: FieldBasis,
                      atol: float = 1e-8) -> tuple[PhasePoint, complex]:
    """Find (w, phase) with U T_v U^dagger = phase * T_w."""
    d = U.shape[0]
    n = basisQ.spec.n
    M = U @ translation_matrix(v, basisQ) @ U.conj().T
    # T_w sends |x> to row 0 only from column x, so row 0 fixes the X part;
    # the Z part is then found by overlap Tr[T_w^dagger M] / d.
    col = int(np.argmax(np.abs(M[0])))
    xbits = [(col >> (n - 1 - i)) & 1 for i in range(n)]
    for zidx in range(d):
        zbits = [(zidx >> (n - 1 - i)) & 1 for i in range(n)]
        overlap = np.vdot(pauli_string(xbits, zbits), M) / d
        if abs(abs(overlap) - 1) < atol:
            return point_from_bits(xbits, zbits, basisQ), complex(overlap)
    raise NotCliffordError("conjugate is not proportional to any translation operator")


# ---------------------------------------------------------------------------
# binary symplectic representation and tableau synthesis

def symplectic_matrix(L: LinearMap, basis: FieldBasis) -> np.ndarray:
    """2n x 2n GF(2) matrix of L on (x_1..x_n, z_1..z_n) coordinates.

    Column j < n is the image of X_j = T_(b_j, 0); column n + j the image of
    Z_j = T_(0, b*_j).
    """
    n = basis.spec.n
    S = np.zeros((2 * n, 2 * n), dtype=np.uint8)
    for j, g in enumerate(generator_points(basis)):
        x, z = point_bits(L(g), basis)
        S[:n, j] = x
        S[n:, j] = z
    return S


def generator_points(basis: FieldBasis) -> list[PhasePoint]:
    """Points of X_1..X_n then Z_1..Z_n."""
    zero = basis.spec.zero
    xs = [PhasePoint(b, zero) for b in basis]
    zs = [PhasePoint(zero, b) for b in basis.dual]
    return xs + zs


def is_symplectic(S: np.ndarray) -> bool:
    n = S.shape[0] // 2
    J = np.zeros_like(S)
    J[:n, n:] = np.eye(n, dtype=S.dtype)
    J[n:, :n] = np.eye(n, dtype=S.dtype)
    return bool(np.array_equal((S.T.astype(int) @ J @ S) % 2, J))


def _apply_gate_to_tableau(T: np.ndarray, gate: tuple) -> None:
    """Left-multiply the images in T (columns) by the gate's symplectic action."""
    n = T.shape[0] // 2
    kind = gate[0]
    if kind == "h":
        j = gate[1]
        T[[j, n + j]] = T[[n + j, j]]
    elif kind == "s":
        j = gate[1]
        T[n + j] ^= T[j]
    elif kind == "sx":
        j = gate[1]
        T[j] ^= T[n + j]
    elif kind == "cx":
        c, t = gate[1], gate[2]
        T[t] ^= T[c]
        T[n + c] ^= T[n + t]
    else:  # pragma: no cover
        raise ValueError(kind)


def synthesize_symplectic(S: np.ndarray) -> list[tuple]:
    """Gate list g_1..g_m with M_gm ... M_g1 S = I (signs ignored).

    Qubit by qubit: the X-image is swept to X_j with single-qubit gates and
    CNOTs, then the Z-image is swept to Z_j with gates that fix X_j.
    """
    if not is_symplectic(S):
        raise UnsupportedMapError("matrix is not symplectic")
    n = S.shape[0] // 2
    T = S.copy() % 2
    gates: list[tuple] = []

    def emit(g):
        gates.append(g)
        _apply_gate_to_tableau(T, g)

    for j in range(n):
        # X-image: make every component pure X
        for k in range(j, n):
            x, z = T[k, j], T[n + k, j]
            if x and z:
                emit(("s", k))
            elif z:
                emit(("h", k))
        support = [k for k in range(j, n) if T[k, j]]
        if j not in support:
            emit(("cx", support[0], j))
        for k in range(j + 1, n):
            if T[k, j]:
                emit(("cx", j, k))
        # Z-image: pure Z off qubit j, then fold into qubit j
        col = n + j
        for k in range(j + 1, n):
            x, z = T[k, col], T[n + k, col]
            if x and z:
                emit(("s", k))
                emit(("h", k))
            elif x:
                emit(("h", k))
        for k in range(j + 1, n):
            if T[n + k, col]:
                emit(("cx", k, j))
        if T[j, col]:
            emit(("sx", j))
    if not np.array_equal(T, np.eye(2 * n, dtype=T.dtype)):  # pragma: no cover
        raise UnsupportedMapError("tableau reduction did not reach the identity")
    return gates


_H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
_S = np.diag([1, 1j])
_SX = _H @ _S @ _H


def gate_matrix(gate: tuple, n: int) -> np.ndarray:
    kind = gate[0]
    if kind in ("h", "s", "sx"):
        single = {"h": _H, "s": _S, "sx": _SX}[kind]
        factors = [_I2] * n
        factors[gate[1]] = single
        return kron_all(factors)
    c, t = gate[1], gate[2]
    d = 1 << n
    M = np.zeros((d, d), dtype=complex)
    for idx in range(d):
        cbit = (idx >> (n - 1 - c)) & 1
        out = idx ^ (cbit << (n - 1 - t))
        M[out, idx] = 1
    return M


def circuit_unitary(gates: Sequence[tuple], n: int) -> np.ndarray:
    """U = G_1^dagger G_2^dagger ... G_m^dagger, whose symplectic is S."""
    d = 1 << n
    U = np.eye(d, dtype=complex)
    for g in gates:
        U = U @ gate_matrix(g, n).conj().T
    return U


def fix_global_phase(U: np.ndarray, atol: float = 1e-12) -> np.ndarray:
    """Rescale so the first nonzero entry (row-major) is real and positive."""
    flat = U.ravel()
    idx = int(np.argmax(np.abs(flat) > atol))
    ph = flat[idx] / abs(flat[idx])
    return U / ph


@dataclass(frozen=True, eq=False)
class CliffordUnitary:
    matrix: np.ndarray
    map: LinearMap
    basisQ: FieldBasis

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def power(self, k: int) -> np.ndarray:
        return np.linalg.matrix_power(self.matrix, k)


def clifford_for(L: LinearMap, basisQ: FieldBasis) -> CliffordUnitary:
    """Unitary U with U T_u U^dagger proportional to T_(L u).

    Gauge: each generator X_j, Z_j is sent to +1 times the Hermitian Pauli
    string i^m T_(L g); the remaining global phase makes the first nonzero
    entry real positive.  This pins U uniquely.
    """
    if L.det() != L.spec.one:
        raise UnsupportedMapError(f"det(L) = {L.det().bits}, need 1")
    n = basisQ.spec.n
    S = symplectic_matrix(L, basisQ)
    U0 = circuit_unitary(synthesize_symplectic(S), n)
    gens = generator_points(basisQ)
    # c must anticommute with exactly the generators whose sign is wrong
    cx = [0] * n
    cz = [0] * n
    for j, g in enumerate(gens):
        w, phase = conjugation_image(U0, g, basisQ)
        sign = phase / hermitian_phase(w, basisQ)
        if abs(sign + 1) < 1e-8:
            if j < n:
                cz[j] = 1  # Z_j in c flips the image of X_j
            else:
                cx[j - n] = 1
        elif abs(sign - 1) > 1e-8:  # pragma: no cover
            raise NotCliffordError("generator image is not Hermitian")
    U = U0 @ pauli_string(cx, cz)
    return CliffordUnitary(fix_global_phase(U), L, basisQ)


def verify_clifford(U: np.ndarray, L: LinearMap, basisQ: FieldBasis,
                    points=None) -> float:
    """Largest |phase| defect over the checked points; raises on a wrong image."""
    worst = 0.0
    for u in points if points is not None else all_points(L.spec):
        w, phase = conjugation_image(U, u, basisQ)
        if w != L(u):
            raise NotCliffordError(f"T{u} maps to T{w}, expected T{L(u)}")
        worst = max(worst, abs(abs(phase) - 1))
    return worst


def is_unitary(M: np.ndarray, atol: float = 1e-12) -> bool:
    return bool(np.max(np.abs(M.conj().T @ M - np.eye(M.shape[0]))) < atol)


def matrix_to_json(M: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(M)]


def vector_to_json(v: np.ndarray) -> list:
    return [[float(z.real), float(z.imag)] for z in np.asarray(v)]


def transversal_rotation(n: int) -> np.ndarray:
    """V^(x)n with V = (I - iX - iY - iZ)/2, the 120 degree Bloch rotation
    about (1, 1, 1) taking X -> Y -> Z -> X on every qubit."""
    V = (_I2 - 1j * (_X + pauli_y() + _Z)) / 2
    return kron_all([V] * n)


def pauli_frames(U: CliffordUnitary) -> list[tuple[PhasePoint, CliffordUnitary]]:
    """All d^2 unitaries U T_w realizing the same map, each in the standard gauge."""
    out = []
    for w in all_points(U.map.spec):
        M = fix_global_phase(U.matrix @ translation_matrix(w, U.basisQ))
        out.append((w, CliffordUnitary(M, U.map, U.basisQ)))
    return out
