import numpy as np
import pytest

from conftest import example, setup_for
from qphase.finite_field import FieldSpec, find_self_dual_basis
from qphase.mub_entropy import mub_from_net
from qphase.pauli_ops import CliffordUnitary, kron_all, pauli_x, pauli_y, pauli_z
from qphase.phase_space import LinearMap, PhasePoint, all_points
from qphase.rotinv_states import (
    RotInvError, build_plus_minus_state, coherent_lattice, eigenstates_by_projection,
    entropy_minimality_certificate, fit_plus_minus_form, positive_member, positivity_scan,
    wigner_constancy_check, xyz_eigenstates,
)
from qphase.wigner_net import wigner

SETUPS = {
    "n1": lambda: setup_for(1),
    "n2": lambda: setup_for(2),
    "n3": lambda: setup_for(3),
    "three_qubit": lambda: example("three_qubit"),
    "two_qubit": lambda: example("two_qubit"),
}


@pytest.fixture(params=list(SETUPS), ids=list(SETUPS))
def setup(request):
    return SETUPS[request.param]()


def origin(spec):
    return PhasePoint(spec.zero, spec.zero)


# --- family ------------------------------------------------------------------

def test_family_is_complete_eigenbasis(setup):
    fam = eigenstates_by_projection(setup.unitary)
    d = setup.d
    assert len(fam) == d
    assert fam.residuals().max() < 1e-9
    V = fam.eigenstates
    assert np.allclose(V.conj() @ V.T, np.eye(d), atol=1e-10)
    assert sum(fam.ranks.values()) == d
    assert all(0 <= k <= d for k in fam.labels)


def test_spectral_projectors_resolve_identity(setup):
    U = setup.unitary.matrix
    d = setup.d
    c = np.linalg.matrix_power(U, d + 1)[0, 0]
    root = np.exp(1j * np.angle(c) / (d + 1))
    powers = [np.linalg.matrix_power(U, j) for j in range(d + 1)]
    Ps = []
    for k in range(d + 1):
        mu = root * np.exp(2j * np.pi * k / (d + 1))
        Ps.append(sum(mu ** (-j) * powers[j] for j in range(d + 1)) / (d + 1))
    assert np.allclose(sum(Ps), np.eye(d), atol=1e-9)
    for k, Pk in enumerate(Ps):
        for l, Pl in enumerate(Ps):
            assert np.allclose(Pk @ Pl, Pk if k == l else 0, atol=1e-9)


def test_spectra_are_non_degenerate_for_built_setups():
    for n in (1, 2, 3, 4):
        fam = eigenstates_by_projection(setup_for(n).unitary)
        assert not fam.degenerate
        assert len(set(fam.labels)) == 1 << n


def test_identity_unitary_is_flagged_degenerate():
    s = FieldSpec.default(2)
    U = CliffordUnitary(np.eye(4, dtype=complex), LinearMap.identity(s), find_self_dual_basis(s))
    fam = eigenstates_by_projection(U)
    assert fam.degenerate and fam.ranks == {0: 4}
    assert np.allclose(fam.eigenstates.conj() @ fam.eigenstates.T, np.eye(4))


def test_projection_requires_finite_order():
    s = FieldSpec.default(1)
    H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
    with pytest.raises(RotInvError):
        eigenstates_by_projection(CliffordUnitary(H, LinearMap.identity(s), find_self_dual_basis(s)))


def test_one_qubit_family_is_xyz_eigenbasis():
    fam = eigenstates_by_projection(setup_for(1).unitary)
    up, down = xyz_eigenstates()
    S = pauli_x() + pauli_y() + pauli_z()
    assert np.allclose(S @ up, np.sqrt(3) * up) and np.allclose(S @ down, -np.sqrt(3) * down)
    for v in fam.eigenstates:
        assert max(abs(np.vdot(v, w)) ** 2 for w in (up, down)) > 1 - 1e-10


# --- constancy, positivity ----------------------------------------------------

def test_constant_on_circles(setup):
    fam = eigenstates_by_projection(setup.unitary)
    rep = wigner_constancy_check(fam, setup.net, setup.form)
    assert rep.passed and rep.max_spread < 1e-9
    assert len(rep.circle_values) == setup.d
    assert len(rep.circle_values[0]) == setup.d - 1


def test_maximally_mixed_control_is_constant_and_positive():
    setup = setup_for(3)
    rep = wigner_constancy_check([np.eye(8) / 8], setup.net, setup.form)
    assert rep.max_spread < 1e-15
    W = wigner(setup.net, np.eye(8) / 8).values
    assert abs(W.min() - 1 / 64) < 1e-15


def test_computational_state_is_not_constant():
    setup = setup_for(2)
    ket = np.zeros(4)
    ket[1] = 1
    assert not wigner_constancy_check([ket], setup.net, setup.form).passed


@pytest.mark.parametrize("name,count", [("n1", 1), ("three_qubit", 1)])
def test_exactly_one_positive_member(name, count):
    setup = SETUPS[name]()
    scan = positivity_scan(eigenstates_by_projection(setup.unitary), setup.net)
    assert sum(p for _, p, _ in scan) == count
    for _, pos, m in scan:
        assert pos == (m >= -1e-9)


def test_two_qubit_scan_reports_without_asserting():
    setup = setup_for(2)
    scan = positivity_scan(eigenstates_by_projection(setup.unitary), setup.net)
    assert len(scan) == 4
    assert all(isinstance(m, float) for _, _, m in scan)


def test_positive_member_requires_uniqueness():
    setup = setup_for(2)
    fam = eigenstates_by_projection(setup.unitary)
    if sum(p for _, p, _ in positivity_scan(fam, setup.net)) != 1:
        with pytest.raises(RotInvError):
            positive_member(fam, setup.net)


# --- centre value bound ------------------------------------------------------

def test_family_attains_max_center(setup):
    from qphase.wigner_net import max_center_value
    fam = eigenstates_by_projection(setup.unitary)
    best = max(wigner(setup.net, v)[origin(setup.spec)] for v in fam.eigenstates)
    assert abs(best - max_center_value(setup.net)) < 1e-9


# --- plus-minus state ----------------------------------------------------------

def test_plus_minus_reconstruction():
    setup = example("three_qubit")
    fam = eigenstates_by_projection(setup.unitary)
    fit = build_plus_minus_state(fam, setup.net)
    assert fit.overlap > 1 - 1e-6
    psi = fit.state
    up, down = xyz_eigenstates()
    plus = down if fit.swapped else up
    assert abs(abs(np.vdot(kron_all([plus] * 3), psi)) - np.sqrt(1 / 3)) < 1e-6
    assert abs(wigner(setup.net, psi)[origin(setup.spec)] - 0.319) < 5e-4
    # the fitted state is itself an eigenvector of U
    U = setup.unitary.matrix
    lam = np.vdot(psi, U @ psi)
    assert np.linalg.norm(U @ psi - lam * psi) < 1e-6
    assert set(fit.to_json()["fitted_parameters"]) == {"phase", "swapped"}


def test_plus_minus_fit_rejects_far_state():
    ket = np.zeros(8, dtype=complex)
    ket[3] = 1
    with pytest.raises(RotInvError):
        fit_plus_minus_form(ket)
    with pytest.raises(RotInvError):
        fit_plus_minus_form(np.ones(4) / 2)


def test_plus_minus_fit_recovers_planted_phase():
    up, down = xyz_eigenstates()
    phi = 1.234
    target = (np.sqrt(1 / 3) * kron_all([down] * 3)
              + np.sqrt(2 / 3) * np.exp(1j * phi) * kron_all([up] * 3))
    fit = fit_plus_minus_form(target * np.exp(0.7j))
    assert fit.swapped and abs(fit.phase - phi) < 1e-9 and fit.overlap > 1 - 1e-12


# --- coherent lattice ---------------------------------------------------------

def test_coherent_lattice_three_qubit():
    setup = example("three_qubit")
    psi0 = positive_member(eigenstates_by_projection(setup.unitary), setup.net)
    lattice = coherent_lattice(psi0, setup.basis)
    assert len(lattice) == 64
    assert np.allclose(lattice[origin(setup.spec)], psi0)
    W0 = wigner(setup.net, psi0).values
    for v, state in lattice.items():
        W = wigner(setup.net, state).values
        assert abs(W[v.q.bits, v.p.bits] - 0.319) < 5e-4
        for a in all_points(setup.spec)[::5]:
            b = a + v
            assert abs(W[b.q.bits, b.p.bits] - W0[a.q.bits, a.p.bits]) < 1e-10


def test_coherent_lattice_rejects_unnormalised():
    with pytest.raises(RotInvError):
        coherent_lattice(np.ones(2), setup_for(1).basis)


# --- entropy minimality --------------------------------------------------------

@pytest.mark.parametrize("n,avg", [(1, 0.584962500721156), (3, 2.169925001442312)])
def test_all_members_minimal(n, avg):
    setup = setup_for(n) if n == 1 else example("three_qubit")
    M = mub_from_net(setup.net)
    cert = entropy_minimality_certificate(eigenstates_by_projection(setup.unitary), M)
    assert len(cert) == 1 << n
    for e in cert:
        assert e.minimal and abs(e.average - avg) < 1e-9 and e.spread < 1e-9


def test_computational_states_not_minimal():
    setup = setup_for(3)
    M = mub_from_net(setup.net)
    cert = entropy_minimality_certificate(np.eye(8), M)
    assert not any(e.minimal for e in cert)
    assert cert[0].to_json()["label"] == 0
