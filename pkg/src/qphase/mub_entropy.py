"""Mutually unbiased bases from the net, probability tables, the 2-design
sum and order-2 Renyi entropies."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .pauli_ops import CliffordUnitary
from .wigner_net import QuantumNet

EQUALITY_TOL = 1e-9


class StateError(ValueError):
    pass


class MubError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class MubSet:
    """bases[i, j] is the unit vector |ij>: outcome j of measurement i."""

    bases: np.ndarray

    @property
    def d(self) -> int:
        return self.bases.shape[1]

    def __len__(self) -> int:
        return self.bases.shape[0]

    def overlaps(self) -> np.ndarray:
        """|<ij|kl>|^2 as an array indexed [i, j, k, l]."""
        g = np.einsum("ija,kla->ijkl", self.bases.conj(), self.bases)
        return np.abs(g) ** 2

    def gram_deviation(self) -> float:
        """Largest deviation from orthonormality inside any basis."""
        eye = np.eye(self.d)
        return max(float(np.max(np.abs(B.conj() @ B.T - eye))) for B in self.bases)

    def unbiasedness_deviation(self) -> float:
        ov = self.overlaps()
        m = len(self)
        worst = 0.0
        for i in range(m):
            for k in range(m):
                if i != k:
                    worst = max(worst, float(np.max(np.abs(ov[i, :, k, :] - 1 / self.d))))
        return worst

    def projectors(self) -> np.ndarray:
        return np.einsum("ija,ijb->ijab", self.bases, self.bases.conj())


def mub_from_net(net: QuantumNet) -> MubSet:
    return MubSet(net.vectors.copy())


def mub_by_cycling(U: CliffordUnitary, atol: float = 1e-8) -> MubSet:
    """Basis k = columns of U^k, k = 0..d."""
    M = U.matrix
    d = M.shape[0]
    top = np.linalg.matrix_power(M, d + 1)
    c = top[0, 0]
    if abs(abs(c) - 1) > atol or np.max(np.abs(top - c * np.eye(d))) > atol:
        raise MubError("U^(d+1) is not proportional to the identity")
    bases = np.zeros((d + 1, d, d), dtype=complex)
    Uk = np.eye(d, dtype=complex)
    for k in range(d + 1):
        bases[k] = Uk.T  # row j = U^k |j>
        Uk = M @ Uk
    mubs = MubSet(bases)
    if mubs.unbiasedness_deviation() > atol:
        raise MubError("powers of U do not generate mutually unbiased bases")
    return mubs


def _check_pure(psi: np.ndarray, atol: float = 1e-10) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    if psi.ndim != 1:
        raise StateError("expected a state vector; mixed states have no design identity")
    if abs(np.linalg.norm(psi) - 1) > atol:
        raise StateError("state vector is not normalized")
    return psi


def probability_table(M: MubSet, psi: np.ndarray) -> np.ndarray:
    """p[i, j] = |<psi|ij>|^2 for a normalized pure state."""
    psi = _check_pure(psi)
    return np.abs(M.bases.conj() @ psi) ** 2


def mixed_probability_table(M: MubSet, rho: np.ndarray) -> np.ndarray:
    """<ij|rho|ij>; used only to show the design identity needs purity."""
    return np.einsum("ija,ab,ijb->ij", M.bases.conj(), rho, M.bases).real


def design_sum(table: np.ndarray) -> float:
    """Sum of squared probabilities; equals 2 for a pure state and a complete MUB set."""
    return float(np.sum(np.asarray(table) ** 2))


def renyi_entropy(row, atol: float = 1e-10) -> float:
    """-log2 sum_j p_j^2."""
    row = np.asarray(row, dtype=float)
    if np.any(row < -atol) or abs(row.sum() - 1) > atol:
        raise StateError("not a probability distribution")
    return float(-np.log2(np.sum(row ** 2)))


def entropy_bound(d: int) -> float:
    return float(np.log2(d + 1) - 1)


@dataclass
class EntropyReport:
    probabilities: np.ndarray
    renyi_per_basis: np.ndarray
    average: float
    bound: float
    design_sum: float
    tolerance: float = EQUALITY_TOL

    @property
    def spread(self) -> float:
        return float(self.renyi_per_basis.max() - self.renyi_per_basis.min())

    @property
    def constant(self) -> bool:
        return self.spread < self.tolerance

    @property
    def at_bound(self) -> bool:
        return abs(self.average - self.bound) < self.tolerance

    @property
    def equality(self) -> bool:
        return self.constant and self.at_bound

    def to_json(self) -> dict:
        return {
            "probabilities": self.probabilities.tolist(),
            "renyi_per_basis": self.renyi_per_basis.tolist(),
            "average": self.average,
            "bound": self.bound,
            "design_sum": self.design_sum,
            "equality": self.equality,
        }


def average_entropy_report(M: MubSet, psi: np.ndarray) -> EntropyReport:
    table = probability_table(M, psi)
    renyi = np.array([renyi_entropy(row) for row in table])
    return EntropyReport(table, renyi, float(renyi.mean()), entropy_bound(M.d),
                         design_sum(table))


def same_projectors(a: MubSet, b: MubSet, atol: float = 1e-9) -> bool:
    """True if the two sets contain the same rank-1 projectors, in any order."""
    va = a.bases.reshape(-1, a.d)
    vb = b.bases.reshape(-1, b.d)
    if va.shape != vb.shape:
        return False
    ov = np.abs(va.conj() @ vb.T) ** 2
    return bool(np.all(ov.max(axis=1) > 1 - atol) and np.all(ov.max(axis=0) > 1 - atol))
