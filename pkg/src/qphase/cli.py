"""Command line front end: field-info, reproduce, certify.

Exit codes: 0 all checks pass, 1 some check failed, 2 configuration error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .finite_field import (FieldBasis, FieldError, FieldSpec, dual_basis,
                           find_self_dual_basis, is_self_dual)
from .mub_entropy import (average_entropy_report, design_sum, entropy_bound,
                          mub_by_cycling, mub_from_net, probability_table,
                          same_projectors)
from .pauli_ops import (conjugation_image, is_unitary, kron_all, pauli_x,
                        pauli_z, translation_matrix, verify_clifford,
                        generator_points)
from .phase_space import (PhasePoint, all_circles, all_points, is_primitive_rotation,
                          map_order, primitive_rotation)
from .pipeline import (TWO_QUBIT_UNITARY, Setup, build_setup, example_setup,
                       three_qubit_form, three_qubit_rotation, two_qubit_rotation)
from .rotinv_states import (build_plus_minus_state, eigenstates_by_projection,
                            entropy_minimality_certificate, positivity_scan,
                            wigner_constancy_check, xyz_eigenstates)
from .wigner_net import (covariance_check, max_center_value, random_pure_state,
                         wigner)

SCHEMA = "1.0"
SECTIONS = ("one_qubit", "two_qubit", "three_qubit")
SECTION_N = {"one_qubit": 1, "two_qubit": 2, "three_qubit": 3}


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    n: int
    modulus_bits: Optional[int] = None
    form_a: Optional[int] = None
    form_b: Optional[int] = None
    basis: Optional[tuple[int, ...]] = None  # None -> self-dual
    output_format: str = "json"
    output_path: Optional[str] = None
    seed: int = 0
    frame: str = "auto"
    tolerances: dict = field(default_factory=dict)

    def __post_init__(self):
        if not 1 <= self.n <= 4:
            raise ConfigError(f"--n must be between 1 and 4, got {self.n}")
        try:
            spec = (FieldSpec(self.n, self.modulus_bits) if self.modulus_bits is not None
                    else FieldSpec.default(self.n))
            if self.basis is not None:
                FieldBasis.from_bits(spec, self.basis)
        except FieldError as exc:
            raise ConfigError(str(exc)) from exc

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "modulus_bits": self.modulus_bits,
            "form_a": self.form_a,
            "form_b": self.form_b,
            "basis": "self-dual" if self.basis is None else list(self.basis),
            "seed": self.seed,
            "frame": self.frame,
            "tolerances": dict(sorted(self.tolerances.items())),
        }


@dataclass
class Check:
    name: str
    value: object
    tolerance: Optional[float]
    passed: bool
    target: object = None

    def to_json(self) -> dict:
        return {"name": self.name, "value": self.value, "target": self.target,
                "tolerance": self.tolerance, "passed": bool(self.passed)}


class Checks:
    def __init__(self, overrides: Optional[dict] = None):
        self.items: list[Check] = []
        self.overrides = overrides or {}

    def _tol(self, name, tol):
        return float(self.overrides.get(name, tol))

    def close(self, name, value, target, tol):
        tol = self._tol(name, tol)
        value, target = float(value), float(target)
        self.items.append(Check(name, value, tol, abs(value - target) <= tol, target))

    def below(self, name, value, tol):
        tol = self._tol(name, tol)
        self.items.append(Check(name, float(value), tol, float(value) < tol, 0.0))

    def at_least(self, name, value, floor, tol=0.0):
        tol = self._tol(name, tol)
        self.items.append(Check(name, float(value), tol, float(value) >= floor - tol, float(floor)))

    def equal(self, name, value, target):
        self.items.append(Check(name, value, None, value == target, target))

    def flag(self, name, ok, value=None):
        self.items.append(Check(name, value if value is not None else bool(ok), None, bool(ok)))

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.items)


def _origin(spec):
    return PhasePoint(spec.zero, spec.zero)


def _net_checks(chk: Checks, setup: Setup) -> None:
    net = setup.net
    d = setup.d
    M = mub_from_net(net)
    chk.equal("mub.count", len(M), d + 1)
    chk.below("net.orthonormality", M.gram_deviation(), 1e-10)
    chk.below("mub.unbiasedness", M.unbiasedness_deviation(), 1e-10)
    ov = M.overlaps()
    off = np.array([ov[i, :, k, :] for i in range(d + 1) for k in range(d + 1) if i != k])
    chk.close("mub.overlap_min", off.min(), 1 / d, 1e-10)
    chk.close("mub.overlap_max", off.max(), 1 / d, 1e-10)
    # translational covariance on the generators suffices: T_(u+v) ~ T_u T_v
    worst = 0.0
    lines = [ln for st in net.striations for ln in st.lines]
    for v in generator_points(setup.basis):
        T = translation_matrix(v, setup.basis)
        for ln in lines:
            lhs = net.projector(ln.translate(v))
            rhs = T @ net.projector(ln) @ T.conj().T
            worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    chk.below("net.translation_covariance", worst, 1e-10)
    A = net.phase_points.reshape(d * d, d, d)
    gram = np.einsum("xab,yba->xy", A, A).real
    chk.below("phase_point.orthogonality", float(np.max(np.abs(gram - d * np.eye(d * d)))), 1e-9)
    chk.below("phase_point.trace", float(np.max(np.abs(np.einsum("xaa->x", A) - 1))), 1e-10)


def _family_checks(chk: Checks, setup: Setup, report: dict) -> dict:
    net = setup.net
    fam = eigenstates_by_projection(setup.unitary)
    M = mub_from_net(net)
    chk.equal("family.size", len(fam), setup.d)
    chk.below("family.eigen_residual", float(fam.residuals().max()), 1e-9)
    const = wigner_constancy_check(fam, net, setup.form)
    chk.below("family.circle_constancy", const.max_spread, 1e-9)
    cert = entropy_minimality_certificate(fam, M)
    chk.flag("family.all_minimal", all(e.minimal for e in cert))
    scan = positivity_scan(fam, net)
    report["entropy_table"] = [e.to_json() for e in cert]
    report["positivity_scan"] = [{"label": k, "positive": bool(p), "min_value": m}
                                 for k, p, m in scan]
    report["degenerate_spectrum"] = fam.degenerate
    centers = [wigner(net, v)[_origin(setup.spec)] for v in fam.eigenstates]
    mcv = max_center_value(net)
    report["max_center_value"] = mcv
    chk.close("center.family_max_equals_bound", max(centers), mcv, 1e-9)
    per_point = [max_center_value(net, a) for a in all_points(setup.spec)]
    chk.below("center.point_independence", max(per_point) - min(per_point), 1e-10)
    return {"family": fam, "scan": scan, "centers": centers, "mubs": M}


def certify(config: RunConfig) -> dict:
    setup = build_setup(config.n, config.modulus_bits, config.form_a, config.form_b,
                        config.basis, frame=config.frame)
    rng = np.random.default_rng(config.seed)
    chk = Checks(config.tolerances)
    report: dict = {"schema": SCHEMA, "command": "certify", "config": config.to_json(),
                    "setup": setup.describe()}
    spec, d = setup.spec, setup.d
    B = setup.basis
    gram = (B.gram() if is_self_dual(B) else
            np.array([[(bi * bj).trace().bits for bj in B.dual] for bi in B]))
    chk.flag("field.dual_basis", bool(np.array_equal(gram, np.eye(spec.n))))
    chk.flag("field.frobenius", all(x ** d == x for x in spec.elements()))
    circles = all_circles(setup.form)
    chk.flag("phase_space.circles", len(circles) == d - 1
             and all(len(c) == d + 1 for c in circles.values()))
    chk.flag("rotation.primitive", is_primitive_rotation(setup.rotation, setup.form))
    chk.equal("rotation.order", map_order(setup.rotation), d + 1)
    U = setup.unitary.matrix
    chk.flag("clifford.unitary", is_unitary(U, 1e-10))
    chk.below("clifford.conjugation", verify_clifford(U, setup.rotation, B), 1e-10)
    top = np.linalg.matrix_power(U, d + 1)
    chk.below("clifford.finite_order", float(np.max(np.abs(top - top[0, 0] * np.eye(d)))), 1e-8)
    _net_checks(chk, setup)
    M = mub_from_net(setup.net)
    chk.flag("mub.cycling_agrees", same_projectors(M, mub_by_cycling(setup.unitary)))

    states = [random_pure_state(d, rng) for _ in range(100)]
    sums = [design_sum(probability_table(M, s)) for s in states]
    gaps = [average_entropy_report(M, s).average - entropy_bound(d) for s in states]
    report["design_sum_extrema"] = [min(sums), max(sums)]
    chk.below("design_sum.max_deviation", max(abs(s - 2) for s in sums), 1e-10)
    chk.at_least("entropy.bound_gap_min", min(gaps), 0.0, 1e-10)
    _family_checks(chk, setup, report)
    cov = covariance_check(setup.net, states=states[:20])
    report["covariance"] = cov.to_json()
    chk.below("covariance.translation", cov.translation_deviation, 1e-9)
    chk.below("covariance.rotation", cov.rotation_deviation, 1e-9)
    chk.below("covariance.reconstruction", cov.reconstruction_deviation, 1e-9)
    report["checks"] = [c.to_json() for c in chk.items]
    report["passed"] = chk.passed
    return report


def reproduce(section: str, config: RunConfig) -> dict:
    setup = example_setup(section)
    chk = Checks(config.tolerances)
    report: dict = {"schema": SCHEMA, "command": "reproduce", "section": section,
                    "config": config.to_json(), "setup": setup.describe()}
    spec = setup.spec
    net = setup.net
    if section == "one_qubit":
        info = _family_checks(chk, setup, report)
        fam = info["family"]
        up, down = xyz_eigenstates()
        worst = min(max(abs(np.vdot(e, v)) ** 2 for e in (up, down)) for v in fam.eigenstates)
        chk.close("one_qubit.family_is_xyz_eigenbasis", worst, 1.0, 1e-10)
        chk.equal("one_qubit.positive_count", sum(p for _, p, _ in info["scan"]), 1)
        M = info["mubs"]
        for k, v in zip(fam.labels, fam.eigenstates):
            rep = average_entropy_report(M, v)
            chk.close(f"one_qubit.average_entropy[{k}]", rep.average, np.log2(3) - 1, 1e-9)
    elif section == "two_qubit":
        B = setup.basis
        R = two_qubit_rotation(spec)
        chk.flag("two_qubit.closed_form_rotation", primitive_rotation(spec.element(2)) == R)
        chk.equal("two_qubit.rotation_order", map_order(R), 5)
        X, Z = pauli_x(), pauli_z()
        Uf = TWO_QUBIT_UNITARY
        lhs = Uf @ kron_all([X, X]) @ Uf.conj().T
        rhs = 1j * kron_all([X, X @ Z])
        chk.below("two_qubit.conjugation_identity", float(np.max(np.abs(lhs - rhs))), 1e-12)
        w, phase = conjugation_image(Uf, PhasePoint.from_bits(spec, 1, 0), B)
        chk.equal("two_qubit.conjugation_image_point", w.to_json(), [1, 3])
        chk.below("two_qubit.conjugation_image_phase", abs(phase - 1j), 1e-12)
        chk.below("two_qubit.fixture_realizes_rotation", verify_clifford(Uf, R, B), 1e-10)
        _net_checks(chk, setup)
        _family_checks(chk, setup, report)
    elif section == "three_qubit":
        R = three_qubit_rotation(spec)
        chk.flag("three_qubit.primitive_rotation", is_primitive_rotation(R, three_qubit_form(spec)))
        chk.equal("three_qubit.rotation_order", map_order(R), 9)
        info = _family_checks(chk, setup, report)
        fam, scan = info["family"], info["scan"]
        chk.equal("three_qubit.circle_count", len(all_circles(setup.form)), 7)
        chk.equal("three_qubit.positive_count", sum(p for _, p, _ in scan), 1)
        pos = [v for v, (_, p, _) in zip(fam.eigenstates, scan) if p]
        if len(pos) == 1:
            center = wigner(net, pos[0])[_origin(spec)]
            chk.close("three_qubit.center_value", center, 0.319, 5e-4)
            fit = build_plus_minus_state(fam, net, threshold=0.0)
            report["plus_minus_fit"] = fit.to_json()
            chk.at_least("three_qubit.plus_minus_overlap", fit.overlap, 1 - 1e-6)
            up, down = xyz_eigenstates()
            plus = down if fit.swapped else up
            chk.close("three_qubit.plus_amplitude",
                      abs(np.vdot(kron_all([plus] * 3), fit.state)), np.sqrt(1 / 3), 1e-6)
        chk.close("three_qubit.max_center_value", report["max_center_value"], 0.319, 5e-4)
    else:
        raise ConfigError(f"unknown section {section!r}")
    report["checks"] = [c.to_json() for c in chk.items]
    report["passed"] = chk.passed
    return report


def _poly_text(bits: int) -> str:
    terms = [("1" if k == 0 else "g" if k == 1 else f"g^{k}")
             for k in reversed(range(bits.bit_length())) if bits >> k & 1]
    return " + ".join(terms) or "0"


def field_info(config: RunConfig) -> dict:
    spec = (FieldSpec(config.n, config.modulus_bits) if config.modulus_bits is not None
            else FieldSpec.default(config.n))
    basis = (FieldBasis.from_bits(spec, config.basis) if config.basis is not None
             else find_self_dual_basis(spec))
    gen = spec.generator
    info = {
        "schema": SCHEMA,
        "command": "field-info",
        "field": spec.to_json(),
        "order": spec.order,
        "generator_relation": f"g^{spec.n} = {_poly_text((gen ** spec.n).bits)}",
        "basis": list(basis.masks),
        "dual_basis": list(dual_basis(basis).masks),
        "self_dual": is_self_dual(basis),
        "trace": [x.trace().bits for x in spec.elements()],
        "passed": True,
    }
    if spec.n <= 2:
        info["add_table"] = [[(x + y).bits for y in spec.elements()] for x in spec.elements()]
        info["mul_table"] = [[(x * y).bits for y in spec.elements()] for x in spec.elements()]
    return info


def _to_builtin(obj):
    if isinstance(obj, dict):
        return {str(k): _to_builtin(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_to_builtin(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _to_builtin(obj.tolist())
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj


def render(report: dict, fmt: str) -> str:
    report = _to_builtin(report)
    if fmt == "json":
        return json.dumps(report, indent=2, sort_keys=True) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if "checks" in report:
        writer.writerow(["name", "value", "target", "tolerance", "passed"])
        for c in report["checks"]:
            writer.writerow([c["name"], json.dumps(c["value"]), json.dumps(c["target"]),
                             c["tolerance"], c["passed"]])
    else:
        writer.writerow(["key", "value"])
        for k in sorted(report):
            writer.writerow([k, json.dumps(report[k])])
    return buf.getvalue()


def _parse_basis(text: str):
    if text == "self-dual":
        return None
    try:
        return tuple(int(x, 0) for x in text.split(","))
    except ValueError as exc:
        raise ConfigError(f"bad --basis {text!r}") from exc


def _parse_tol(items):
    out = {}
    for item in items or []:
        key, _, val = item.partition("=")
        try:
            out[key] = float(val)
        except ValueError as exc:
            raise ConfigError(f"bad --tol {item!r}") from exc
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qphase", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, n_required=True):
        p.add_argument("--n", type=int, required=n_required)
        p.add_argument("--modulus", type=lambda s: int(s, 0), default=None)
        p.add_argument("--form-a", type=lambda s: int(s, 0), default=None)
        p.add_argument("--form-b", type=lambda s: int(s, 0), default=None)
        p.add_argument("--basis", default="self-dual")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--frame", default="auto",
                       choices=["auto", "transversal", "max-center", "canonical"])
        p.add_argument("--format", choices=["json", "csv"], default="json")
        p.add_argument("--out", default=None)
        p.add_argument("--tol", action="append", metavar="CHECK=VALUE")

    common(sub.add_parser("field-info", help="field tables, basis and dual basis"))
    rp = sub.add_parser("reproduce", help="run a worked example end to end")
    rp.add_argument("section", choices=SECTIONS)
    common(rp, n_required=False)
    common(sub.add_parser("certify", help="sweep every invariant for one n"))
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and 2
    try:
        n = args.n
        if args.command == "reproduce":
            expected = SECTION_N[args.section]
            if n is None:
                n = expected
            elif n != expected:
                raise ConfigError(f"section {args.section} needs --n {expected}")
        config = RunConfig(n=n, modulus_bits=args.modulus, form_a=args.form_a,
                           form_b=args.form_b, basis=_parse_basis(args.basis),
                           output_format=args.format, output_path=args.out,
                           seed=args.seed, frame=args.frame,
                           tolerances=_parse_tol(args.tol))
        if args.command == "field-info":
            report = field_info(config)
        elif args.command == "reproduce":
            report = reproduce(args.section, config)
        else:
            report = certify(config)
    except (ConfigError, FieldError, ValueError) as exc:
        print(f"qphase: configuration error: {exc}", file=sys.stderr)
        return 2
    text = render(report, config.output_format)
    if config.output_path:
        with open(config.output_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if report["passed"] else 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
