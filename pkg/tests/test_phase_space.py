import itertools

import pytest
from hypothesis import given, settings, strategies as st

from qphase.finite_field import FieldSpec
from qphase.phase_space import (
    Line, LinearMap, PhasePoint, PhaseSpaceError, QuadraticForm, all_circles, all_lines,
    all_points, all_striations, apply_map, circle, companion_map, default_form,
    find_primitive_rotation, is_primitive_rotation, is_rotation, map_order,
    primitive_rotation, rotation_for_form, striation_index_of, striation_permutation,
    translate_line,
)
from qphase.pipeline import three_qubit_form, three_qubit_rotation, two_qubit_rotation

SPECS = [FieldSpec.default(n) for n in range(1, 5)]


@pytest.fixture(params=SPECS, ids=lambda s: f"d{s.order}")
def spec(request):
    return request.param


def P(spec, q, p):
    return PhasePoint.from_bits(spec, q, p)


# --- lines and striations ----------------------------------------------

def test_striation_counts(spec):
    d = spec.order
    sts = all_striations(spec)
    assert len(sts) == d + 1
    for s in sts:
        assert len(s.lines) == d
        assert all(len(ln.points) == d for ln in s.lines)


def test_striation_partitions_space(spec):
    everything = set(all_points(spec))
    for s in all_striations(spec):
        union = set()
        for ln in s.lines:
            assert not (union & ln.points)
            union |= ln.points
        assert union == everything
        assert sum(ln.contains(P(spec, 0, 0)) for ln in s.lines) == 1


def test_striation_order_vertical_first(spec):
    sts = all_striations(spec)
    assert all(ln.b.bits == 0 for ln in sts[0].lines)
    assert [ln.c.bits for ln in sts[0].lines] == list(range(spec.order))
    for i, s in enumerate(sts[1:]):
        assert s.direction == P(spec, 1, i)
        assert striation_index_of(s.direction) == s.index == i + 1


def test_lines_are_canonical_and_distinct(spec):
    lines = all_lines(spec)
    assert len(set(lines)) == spec.order * (spec.order + 1)
    for ln in lines:
        lead = ln.a if ln.a else ln.b
        assert lead.bits == 1


def test_line_canonicalisation_equates_scalings():
    s = FieldSpec.default(2)
    w = s.element(2)
    assert Line(w, w * w, w) == Line(s.one, w, s.one)


def test_zero_normal_rejected():
    s = FieldSpec.default(2)
    with pytest.raises(PhaseSpaceError):
        Line(s.zero, s.zero, s.one)


@pytest.mark.parametrize("d", [2, 4])
def test_incidence_axioms(d):
    spec = FieldSpec.default(d.bit_length() - 1)
    lines = all_lines(spec)
    for x, y in itertools.combinations(all_points(spec), 2):
        assert sum(1 for ln in lines if x in ln and y in ln) == 1
    for l1, l2 in itertools.combinations(lines, 2):
        common = l1.points & l2.points
        assert len(common) == (0 if l1.is_parallel(l2) else 1)


def test_incidence_axioms_d16_sampled():
    spec = FieldSpec.default(4)
    lines = all_lines(spec)
    pts = all_points(spec)
    for x, y in zip(pts[::7], pts[3::11]):
        if x != y:
            assert sum(1 for ln in lines if x in ln and y in ln) == 1
    for l1, l2 in zip(lines[::5], lines[2::9]):
        if l1 != l2:
            assert len(l1.points & l2.points) == (0 if l1.is_parallel(l2) else 1)


def test_translate_line_examples():
    s = FieldSpec.default(1)
    vert0 = Line(s.one, s.zero, s.zero)
    assert translate_line(vert0, P(s, 1, 0)) == Line(s.one, s.zero, s.one)
    assert translate_line(vert0, P(s, 0, 0)) == vert0


def test_translation_is_pointwise_and_involutive(spec):
    for ln in all_lines(spec)[:: max(1, spec.order // 2)]:
        for v in all_points(spec)[::3]:
            moved = translate_line(ln, v)
            assert moved.points == frozenset(x + v for x in ln.points)
            assert moved.is_parallel(ln)
            assert translate_line(moved, v) == ln


# --- circles -------------------------------------------------------------

def test_single_circle_for_d2():
    s = FieldSpec.default(1)
    form = QuadraticForm(s.one, s.one)
    assert circle(form, s.one) == {P(s, 1, 0), P(s, 0, 1), P(s, 1, 1)}


def test_d4_unit_circle_by_enumeration():
    s = FieldSpec.default(2)
    w = s.element(2)
    form = QuadraticForm(s.one, w)
    expected = set()
    for x in all_points(s):
        q, p = x.q, x.p
        if q * q + q * p + w * p * p == s.one:
            expected.add(x)
    c1 = circle(form, s.one)
    assert c1 == expected
    assert len(c1) == 5 and P(s, 1, 0) in c1
    assert sorted(x.bits for x in c1) == [(0, 2), (1, 0), (1, 3), (2, 2), (2, 3)]


def test_circle_zero_rejected():
    s = FieldSpec.default(2)
    with pytest.raises(PhaseSpaceError):
        circle(default_form(s), s.zero)


def test_degenerate_form_rejected():
    s = FieldSpec.default(2)
    with pytest.raises(PhaseSpaceError):
        QuadraticForm(s.zero, s.zero)


def test_circle_partition(spec):
    form = default_form(spec)
    circles = all_circles(form)
    assert len(circles) == spec.order - 1
    union = set()
    for pts in circles.values():
        assert len(pts) == spec.order + 1
        assert not (union & pts)
        union |= pts
    assert union == set(all_points(spec)) - {P(spec, 0, 0)}


def test_three_qubit_circles():
    form = three_qubit_form()
    circles = all_circles(form)
    assert len(circles) == 7
    assert all(len(c) == 9 for c in circles.values())


# --- maps -------------------------------------------------------------------

def test_two_qubit_rotation_examples():
    s = FieldSpec.default(2)
    R = two_qubit_rotation(s)
    assert apply_map(R, P(s, 1, 0)) == P(s, 1, 3)
    assert apply_map(LinearMap.identity(s), P(s, 2, 3)) == P(s, 2, 3)
    L = companion_map(s.element(2))
    assert apply_map(L, P(s, 0, 1)) == P(s, 2, 0)


def test_rotation_checks_two_qubit():
    s = FieldSpec.default(2)
    form = QuadraticForm(s.one, s.element(2))
    R = two_qubit_rotation(s)
    assert is_rotation(R, form)
    assert is_primitive_rotation(R, form)
    assert is_rotation(LinearMap.identity(s), form)
    assert not is_primitive_rotation(LinearMap.identity(s), form)
    assert not is_rotation(LinearMap.from_bits(s, [[1, 0], [0, 0]]), form)


def test_primitive_rotation_matches_two_qubit_fixture():
    s = FieldSpec.default(2)
    R = primitive_rotation(s.element(2))
    assert R == two_qubit_rotation(s)
    assert R.to_json() == [[1, 1], [3, 2]]
    assert map_order(R) == 5
    assert R.det() == s.one


def test_three_qubit_rotation():
    R = three_qubit_rotation()
    assert is_primitive_rotation(R, three_qubit_form())
    assert map_order(R) == 9
    assert R.to_json() == [[5, 6], [6, 3]]


def test_three_qubit_form_not_from_primitive_polynomial_but_search_works():
    form = three_qubit_form()
    R = find_primitive_rotation(form)
    assert is_primitive_rotation(R, form)
    assert R.det() == form.spec.one


@pytest.mark.parametrize("n,order", [(1, 3), (2, 15), (3, 63), (4, 255)])
def test_companion_map_order(n, order):
    from qphase.finite_field import smallest_primitive_b
    s = FieldSpec.default(n)
    b = smallest_primitive_b(s)
    L = companion_map(b)
    assert map_order(L) == order
    assert L.det() == b


def test_gf2_examples():
    s = FieldSpec.default(1)
    assert companion_map(s.one).to_json() == [[1, 1], [1, 0]]
    R = primitive_rotation(s.one)
    assert R.to_json() == [[1, 1], [1, 0]]
    assert map_order(R) == 3


def test_non_primitive_b_rejected():
    s = FieldSpec.default(2)
    for bad in (0, 1):
        with pytest.raises(PhaseSpaceError):
            companion_map(s.element(bad))
        with pytest.raises(PhaseSpaceError):
            primitive_rotation(s.element(bad))


def test_map_order_identity_and_singular():
    s = FieldSpec.default(3)
    assert map_order(LinearMap.identity(s)) == 1
    with pytest.raises(PhaseSpaceError):
        map_order(LinearMap.from_bits(s, [[1, 1], [1, 1]]))


def test_closed_form_equals_companion_power(spec):
    from qphase.finite_field import is_primitive_quadratic
    d = spec.order
    for b in spec.elements():
        if is_primitive_quadratic(b):
            R = primitive_rotation(b)
            assert R == companion_map(b) ** (d - 1)
            assert R.det() == spec.one
            assert map_order(R) == d + 1
            assert is_primitive_rotation(R, QuadraticForm(spec.one, b))


def test_primitive_rotation_cycles_striations(spec):
    R = rotation_for_form(default_form(spec))
    perm = striation_permutation(R)
    seen, i = [], 0
    for _ in range(spec.order + 1):
        seen.append(i)
        i = perm[i]
    assert i == 0 and sorted(seen) == list(range(spec.order + 1))


def test_rotations_form_a_group(spec):
    form = default_form(spec)
    R = rotation_for_form(form)
    for k in range(1, spec.order + 1):
        assert is_rotation(R ** k, form)
        assert is_rotation((R ** k).inverse(), form)
        assert is_rotation(R ** k @ R.inverse(), form)


@settings(max_examples=60, deadline=None)
@given(n=st.integers(1, 4), data=st.data())
def test_map_action_is_linear(n, data):
    s = FieldSpec.default(n)
    mask = st.integers(0, s.order - 1)
    L = LinearMap.from_bits(s, [[data.draw(mask), data.draw(mask)],
                                [data.draw(mask), data.draw(mask)]])
    x = P(s, data.draw(mask), data.draw(mask))
    y = P(s, data.draw(mask), data.draw(mask))
    c = s.element(data.draw(mask))
    assert L(x + y) == L(x) + L(y)
    assert L(x.scale(c)) == L(x).scale(c)


def test_map_line_matches_pointwise(spec):
    R = rotation_for_form(default_form(spec))
    for ln in all_lines(spec)[::3]:
        assert R.map_line(ln).points == frozenset(R(x) for x in ln.points)


def test_json_shapes():
    s = FieldSpec.default(2)
    assert P(s, 2, 3).to_json() == [2, 3]
    st0 = all_striations(s)[0].to_json()
    assert st0["index"] == 0 and len(st0["lines"]) == 4
