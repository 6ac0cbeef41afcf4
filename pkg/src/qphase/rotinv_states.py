"""Rotationally invariant states: eigenstates of the unitary realizing a
primitive rotation, and the certificates built on them."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .finite_field import FieldBasis
from .mub_entropy import MubSet, average_entropy_report
from .pauli_ops import CliffordUnitary, kron_all, pauli_x, pauli_y, pauli_z, translation_matrix
from .phase_space import PhasePoint, QuadraticForm, all_circles, all_points
from .wigner_net import QuantumNet, wigner

POSITIVITY_TOL = 1e-9
CONSTANCY_TOL = 1e-9


class RotInvError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class RotInvFamily:
    """Eigenvectors of U with their labels k: U v = mu_k v,
    mu_k = c^(1/(d+1)) exp(2 pi i k / (d+1)), c = U^(d+1)[0, 0]."""

    unitary: CliffordUnitary
    global_phase: complex
    labels: tuple[int, ...]
    eigenvalues: np.ndarray
    eigenstates: np.ndarray  # rows are the states
    ranks: dict = field(default_factory=dict)

    @property
    def degenerate(self) -> bool:
        return any(r > 1 for r in self.ranks.values())

    def __len__(self) -> int:
        return len(self.labels)

    def residuals(self) -> np.ndarray:
        U = self.unitary.matrix
        return np.array([np.linalg.norm(U @ v - mu * v)
                         for v, mu in zip(self.eigenstates, self.eigenvalues)])


def _pivoted_orthonormal_columns(P: np.ndarray, rank: int) -> list[np.ndarray]:
    """Gram-Schmidt on the columns of P, largest remaining norm first;
    each vector gets its first significant entry real and positive."""
    cols = P.copy()
    out = []
    for _ in range(rank):
        norms = np.linalg.norm(cols, axis=0)
        j = int(np.argmax(norms))
        v = cols[:, j] / norms[j]
        for u in out:
            v = v - np.vdot(u, v) * u
        v /= np.linalg.norm(v)
        lead = v[np.argmax(np.abs(v) > 1e-9)]
        v = v * (abs(lead) / lead)
        out.append(v)
        cols = cols - np.outer(v, v.conj() @ cols)
    return out


def eigenstates_by_projection(U: CliffordUnitary, atol: float = 1e-8) -> RotInvFamily:
    """Spectral projectors P_k = (1/(d+1)) sum_j mu_k^(-j) U^j of a unitary of order d+1."""
    M = U.matrix
    d = M.shape[0]
    m = d + 1
    top = np.linalg.matrix_power(M, m)
    c = complex(top[0, 0])
    if abs(abs(c) - 1) > atol or np.max(np.abs(top - c * np.eye(d))) > atol:
        raise RotInvError("U^(d+1) is not proportional to the identity")
    root = np.exp(1j * np.angle(c) / m)
    powers = [np.eye(d, dtype=complex)]
    for _ in range(m - 1):
        powers.append(M @ powers[-1])
    labels, mus, states, ranks = [], [], [], {}
    for k in range(m):
        mu = root * np.exp(2j * np.pi * k / m)
        P = sum(mu ** (-j) * powers[j] for j in range(m)) / m
        rank = int(round(np.trace(P).real))
        if rank == 0:
            continue
        ranks[k] = rank
        for v in _pivoted_orthonormal_columns(P, rank):
            labels.append(k)
            mus.append(mu)
            states.append(v)
    if len(states) != d:  # pragma: no cover
        raise RotInvError("spectral projectors do not resolve the identity")
    return RotInvFamily(U, c, tuple(labels), np.array(mus), np.array(states), ranks)


@dataclass
class ConstancyReport:
    circle_values: list  # per state: {c: (min, max)}
    max_spread: float
    tolerance: float = CONSTANCY_TOL

    @property
    def passed(self) -> bool:
        return self.max_spread < self.tolerance

    def to_json(self) -> dict:
        return {"max_spread": self.max_spread, "tolerance": self.tolerance,
                "passed": self.passed,
                "circle_values": [{str(c): v for c, v in cv.items()} for cv in self.circle_values]}


def wigner_constancy_check(states, net: QuantumNet, form: QuadraticForm) -> ConstancyReport:
    """Spread of W over each circle, per state.  ``states`` may be a family,
    or an iterable of vectors / density matrices."""
    if isinstance(states, RotInvFamily):
        states = states.eigenstates
    circles = all_circles(form)
    per_state, worst = [], 0.0
    for state in states:
        W = wigner(net, state).values
        values = {}
        for c, pts in circles.items():
            vals = [W[x.q.bits, x.p.bits] for x in pts]
            values[c] = [float(min(vals)), float(max(vals))]
            worst = max(worst, max(vals) - min(vals))
        per_state.append(values)
    return ConstancyReport(per_state, float(worst))


def positivity_scan(family: RotInvFamily, net: QuantumNet, tol: float = POSITIVITY_TOL):
    """[(label, is_positive, min W)] in family order."""
    out = []
    for k, v in zip(family.labels, family.eigenstates):
        w_min = float(wigner(net, v).values.min())
        out.append((k, w_min >= -tol, w_min))
    return out


def positive_member(family: RotInvFamily, net: QuantumNet) -> np.ndarray:
    hits = [v for v, (_, pos, _) in zip(family.eigenstates, positivity_scan(family, net)) if pos]
    if len(hits) != 1:
        raise RotInvError(f"expected one nonnegative Wigner function, found {len(hits)}")
    return hits[0]


def xyz_eigenstates() -> tuple[np.ndarray, np.ndarray]:
    """Eigenvectors of X + Y + Z for +sqrt(3) and -sqrt(3), first entry real positive."""
    _, V = np.linalg.eigh(pauli_x() + pauli_y() + pauli_z())
    out = []
    for v in (V[:, 1], V[:, 0]):
        lead = v[np.argmax(np.abs(v) > 1e-12)]
        out.append(v * abs(lead) / lead)
    return out[0], out[1]


@dataclass
class PlusMinusFit:
    state: np.ndarray
    phase: float  # fitted relative phase of the |---> term
    swapped: bool  # True if |+> is the -sqrt(3) eigenvector of X + Y + Z
    overlap: float  # |<target|state>|^2

    def to_json(self) -> dict:
        return {"phase": self.phase, "swapped": self.swapped, "overlap": self.overlap,
                "fitted_parameters": ["phase", "swapped"]}


def fit_plus_minus_form(target: np.ndarray, threshold: float = 1 - 1e-6) -> PlusMinusFit:
    """Fit sqrt(1/3)|+++> + sqrt(2/3) e^(i phi)|---> to ``target``.

    Free parameters: which eigenvector of X + Y + Z plays |+>, and the
    relative phase phi, whose optimum is analytic: for amplitudes
    a = sqrt(1/3)<t|+++>, b = sqrt(2/3)<t|--->, |a + b e^(i phi)| peaks
    at phi = arg a - arg b.
    """
    target = np.asarray(target, dtype=complex)
    if target.shape != (8,):
        raise RotInvError("the fit needs a three-qubit state vector")
    up, down = xyz_eigenstates()
    best = None
    for swapped in (False, True):
        plus, minus = (down, up) if swapped else (up, down)
        ppp = kron_all([plus] * 3)
        mmm = kron_all([minus] * 3)
        a = np.sqrt(1 / 3) * np.vdot(target, ppp)
        b = np.sqrt(2 / 3) * np.vdot(target, mmm)
        phi = float(np.angle(a) - np.angle(b)) if abs(b) > 0 else 0.0
        phi = float(np.angle(np.exp(1j * phi)))
        state = np.sqrt(1 / 3) * ppp + np.sqrt(2 / 3) * np.exp(1j * phi) * mmm
        ov = float(abs(np.vdot(target, state)) ** 2)
        if best is None or ov > best.overlap:
            best = PlusMinusFit(state, phi, swapped, ov)
    if best.overlap <= threshold:
        raise RotInvError(f"best plus-minus form overlap {best.overlap:.9f} below threshold")
    return best


def build_plus_minus_state(family: RotInvFamily, net: QuantumNet,
                     threshold: float = 1 - 1e-6) -> PlusMinusFit:
    """plus-minus form state matched to the family's single positive-Wigner member."""
    return fit_plus_minus_form(positive_member(family, net), threshold)


def coherent_lattice(psi0: np.ndarray, basisQ: FieldBasis) -> dict[PhasePoint, np.ndarray]:
    """T_v |psi0> for every phase-space point v."""
    psi0 = np.asarray(psi0, dtype=complex)
    if abs(np.linalg.norm(psi0) - 1) > 1e-10:
        raise RotInvError("psi0 is not normalized")
    return {v: translation_matrix(v, basisQ) @ psi0 for v in all_points(basisQ.spec)}


@dataclass
class MinimalityEntry:
    label: int
    average: float
    bound: float
    spread: float
    minimal: bool

    def to_json(self) -> dict:
        return dict(label=self.label, average=self.average, bound=self.bound,
                    spread=self.spread, minimal=self.minimal)


def entropy_minimality_certificate(states, M: MubSet, labels=None) -> list[MinimalityEntry]:
    """MINIMAL iff per-basis Renyi entropies are constant and their mean
    sits on log2(d+1) - 1, both within 1e-9."""
    if isinstance(states, RotInvFamily):
        labels = states.labels
        states = states.eigenstates
    states = list(states)
    if labels is None:
        labels = list(range(len(states)))
    out = []
    for k, v in zip(labels, states):
        rep = average_entropy_report(M, v)
        out.append(MinimalityEntry(int(k), rep.average, rep.bound, rep.spread, rep.equality))
    return out
