"""Geometry of the d x d phase space GF(d)^2: points, lines, striations,
circles, and the linear maps acting on them."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Optional

from .finite_field import (FieldElement, FieldSpec,
                           is_irreducible_quadratic, is_primitive_quadratic)


class PhaseSpaceError(ValueError):
    pass


@dataclass(frozen=True)
class PhasePoint:
    q: FieldElement
    p: FieldElement

    def __post_init__(self):
        if self.q.spec != self.p.spec:
            raise PhaseSpaceError("q and p belong to different fields")

    @property
    def spec(self) -> FieldSpec:
        return self.q.spec

    @classmethod
    def from_bits(cls, spec: FieldSpec, q: int, p: int) -> "PhasePoint":
        return cls(spec.element(q), spec.element(p))

    def __add__(self, other: "PhasePoint") -> "PhasePoint":
        return PhasePoint(self.q + other.q, self.p + other.p)

    __sub__ = __add__

    def scale(self, c: FieldElement) -> "PhasePoint":
        return PhasePoint(c * self.q, c * self.p)

    def is_origin(self) -> bool:
        return not self.q and not self.p

    @property
    def bits(self) -> tuple[int, int]:
        return (self.q.bits, self.p.bits)

    def to_json(self) -> list[int]:
        return [self.q.bits, self.p.bits]

    def __repr__(self) -> str:
        return f"({self.q.bits}, {self.p.bits})"


def all_points(spec: FieldSpec) -> list[PhasePoint]:
    """All d^2 points, q-major in mask order."""
    return [PhasePoint(q, p) for q in spec.elements() for p in spec.elements()]


def origin(spec: FieldSpec) -> PhasePoint:
    return PhasePoint(spec.zero, spec.zero)


@dataclass(frozen=True)
class Line:
    """The solution set of a*q + b*p = c, stored in canonical form.

    Canonical: the first nonzero coefficient of (a, b) is 1.
    """

    a: FieldElement
    b: FieldElement
    c: FieldElement

    def __post_init__(self):
        if not self.a and not self.b:
            raise PhaseSpaceError("a line needs (a, b) != (0, 0)")
        lead = self.a if self.a else self.b
        if lead.bits != 1:
            s = lead.inv()
            object.__setattr__(self, "a", s * self.a)
            object.__setattr__(self, "b", s * self.b)
            object.__setattr__(self, "c", s * self.c)

    @property
    def spec(self) -> FieldSpec:
        return self.a.spec

    @classmethod
    def through(cls, point: PhasePoint, direction: PhasePoint) -> "Line":
        """The line {point + t*direction : t in GF(d)}."""
        if direction.is_origin():
            raise PhaseSpaceError("direction must be nonzero")
        # normal (a, b) = (dp, dq) is orthogonal to direction (dq, dp) in char 2
        a, b = direction.p, direction.q
        return cls(a, b, a * point.q + b * point.p)

    def contains(self, x: PhasePoint) -> bool:
        return self.a * x.q + self.b * x.p == self.c

    __contains__ = contains

    @cached_property
    def points(self) -> frozenset[PhasePoint]:
        spec = self.spec
        if self.b:
            binv = self.b.inv()
            pts = [PhasePoint(q, binv * (self.c + self.a * q)) for q in spec.elements()]
        else:
            q0 = self.c / self.a
            pts = [PhasePoint(q0, p) for p in spec.elements()]
        return frozenset(pts)

    @property
    def direction(self) -> PhasePoint:
        """Canonical direction vector (b, a) scaled so its leading entry is 1."""
        return _canonical_direction(PhasePoint(self.b, self.a))

    def is_parallel(self, other: "Line") -> bool:
        return self.a == other.a and self.b == other.b

    def translate(self, v: PhasePoint) -> "Line":
        return Line(self.a, self.b, self.c + self.a * v.q + self.b * v.p)

    def to_json(self) -> list[int]:
        return [self.a.bits, self.b.bits, self.c.bits]

    def __repr__(self) -> str:
        return f"Line({self.a.bits}q + {self.b.bits}p = {self.c.bits})"


def _canonical_direction(v: PhasePoint) -> PhasePoint:
    lead = v.q if v.q else v.p
    return v.scale(lead.inv())


def translate_line(line: Line, v: PhasePoint) -> Line:
    return line.translate(v)


@dataclass(frozen=True)
class Striation:
    """d parallel lines, ordered by the mask of their intercept."""

    index: int
    direction: PhasePoint
    lines: tuple[Line, ...]

    def line_containing(self, x: PhasePoint) -> Line:
        for line in self.lines:
            if x in line:
                return line
        raise PhaseSpaceError("striation does not cover the point")  # pragma: no cover

    def to_json(self) -> dict:
        return {"index": self.index, "lines": [ln.to_json() for ln in self.lines]}


def all_striations(spec: FieldSpec) -> list[Striation]:
    """Vertical striation (q = const) first, then slopes p = s*q + c in s-mask order.

    Inside each striation lines are ordered by the intercept c in mask order:
    the line q = c for the vertical striation, p = s*q + c otherwise.
    """
    one, zero = spec.one, spec.zero
    out = [Striation(0, PhasePoint(zero, one),
                     tuple(Line(one, zero, c) for c in spec.elements()))]
    for s in spec.elements():
        lines = tuple(Line(s, one, c) for c in spec.elements())
        out.append(Striation(len(out), PhasePoint(one, s), lines))
    return out


def all_lines(spec: FieldSpec) -> list[Line]:
    return [line for st in all_striations(spec) for line in st.lines]


def striation_index_of(direction: PhasePoint) -> int:
    """Index in :func:`all_striations` of the striation with this direction."""
    d = _canonical_direction(direction)
    if not d.q:
        return 0
    return 1 + d.p.bits


@dataclass(frozen=True)
class QuadraticForm:
    """Q(q, p) = q^2 + a*q*p + b*p^2 with x^2 + a*x + b irreducible."""

    a: FieldElement
    b: FieldElement

    def __post_init__(self):
        if not is_irreducible_quadratic(self.a, self.b):
            raise PhaseSpaceError(
                f"x^2 + {self.a.bits}x + {self.b.bits} has a root; circles degenerate")

    @property
    def spec(self) -> FieldSpec:
        return self.a.spec

    def __call__(self, x: PhasePoint) -> FieldElement:
        return x.q * x.q + self.a * x.q * x.p + self.b * x.p * x.p

    def to_json(self) -> dict:
        return {"a": self.a.bits, "b": self.b.bits}


def circle(form: QuadraticForm, c: FieldElement) -> frozenset[PhasePoint]:
    if not c:
        raise PhaseSpaceError("c must be nonzero; Q = 0 only at the origin")
    return frozenset(x for x in all_points(form.spec) if form(x) == c)


def all_circles(form: QuadraticForm) -> dict[int, frozenset[PhasePoint]]:
    """Circles keyed by the mask of their level value c."""
    spec = form.spec
    groups: dict[int, set[PhasePoint]] = {c.bits: set() for c in spec.nonzero()}
    for x in all_points(spec):
        v = form(x)
        if v:
            groups[v.bits].add(x)
    return {c: frozenset(pts) for c, pts in groups.items()}


@dataclass(frozen=True)
class LinearMap:
    """2x2 matrix [[m11, m12], [m21, m22]] acting on column vectors (q, p)."""

    m11: FieldElement
    m12: FieldElement
    m21: FieldElement
    m22: FieldElement

    @property
    def spec(self) -> FieldSpec:
        return self.m11.spec

    @classmethod
    def identity(cls, spec: FieldSpec) -> "LinearMap":
        return cls(spec.one, spec.zero, spec.zero, spec.one)

    @classmethod
    def from_bits(cls, spec: FieldSpec, rows) -> "LinearMap":
        (a, b), (c, d) = rows
        return cls(spec.element(a), spec.element(b), spec.element(c), spec.element(d))

    def det(self) -> FieldElement:
        return self.m11 * self.m22 + self.m12 * self.m21

    def __call__(self, x: PhasePoint) -> PhasePoint:
        return PhasePoint(self.m11 * x.q + self.m12 * x.p,
                          self.m21 * x.q + self.m22 * x.p)

    def __matmul__(self, other: "LinearMap") -> "LinearMap":
        return LinearMap(
            self.m11 * other.m11 + self.m12 * other.m21,
            self.m11 * other.m12 + self.m12 * other.m22,
            self.m21 * other.m11 + self.m22 * other.m21,
            self.m21 * other.m12 + self.m22 * other.m22,
        )

    def __pow__(self, k: int) -> "LinearMap":
        if k < 0:
            return self.inverse() ** (-k)
        result, base = LinearMap.identity(self.spec), self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def inverse(self) -> "LinearMap":
        det = self.det()
        if not det:
            raise PhaseSpaceError("map is singular")
        s = det.inv()
        return LinearMap(s * self.m22, s * self.m12, s * self.m21, s * self.m11)

    def is_identity(self) -> bool:
        return self == LinearMap.identity(self.spec)

    def map_line(self, line: Line) -> Line:
        """Image of a line; requires an invertible map."""
        pts = iter(line.points)
        x0 = next(pts)
        x1 = next(pts)
        return Line.through(self(x0), self(x1) - self(x0))

    def to_json(self) -> list[list[int]]:
        return [[self.m11.bits, self.m12.bits], [self.m21.bits, self.m22.bits]]

    def __repr__(self) -> str:
        return f"LinearMap({self.to_json()})"


def apply_map(L: LinearMap, x: PhasePoint) -> PhasePoint:
    return L(x)


def map_order(L: LinearMap) -> int:
    """Least k >= 1 with L^k = I.  Orders in GL(2, d) never exceed d^2 - 1."""
    if not L.det():
        raise PhaseSpaceError("map_order of a singular map")
    ident = LinearMap.identity(L.spec)
    d = L.spec.order
    power = L
    for k in range(1, d * d):
        if power == ident:
            return k
        power = power @ L
    raise PhaseSpaceError("order exceeds d^2 - 1")  # pragma: no cover


def is_rotation(L: LinearMap, form: QuadraticForm) -> bool:
    """L is invertible and Q(Lx) = Q(x) at every point; then each circle maps onto itself."""
    if not L.det():
        return False
    return all(form(L(x)) == form(x) for x in all_points(form.spec))


def is_primitive_rotation(L: LinearMap, form: QuadraticForm) -> bool:
    if not is_rotation(L, form):
        return False
    d = form.spec.order
    # each orbit through a nonzero point must sweep its whole (d+1)-point circle
    for pts in all_circles(form).values():
        x0 = next(iter(pts))
        orbit = {x0}
        x = L(x0)
        while x != x0:
            orbit.add(x)
            x = L(x)
        if orbit != pts:
            return False
    return map_order(L) == d + 1


def companion_map(b: FieldElement) -> LinearMap:
    """L = [[1, b], [1, 0]] for primitive x^2 + x + b; cycles all nonzero points."""
    if not is_primitive_quadratic(b):
        raise PhaseSpaceError(f"x^2 + x + {b.bits} is not primitive")
    spec = b.spec
    return LinearMap(spec.one, b, spec.one, spec.zero)


def primitive_rotation(b: FieldElement) -> LinearMap:
    """R = L^(d-1) = [[1, 1], [b^-1, b^-1 + 1]] for the companion map L of b."""
    if not is_primitive_quadratic(b):
        raise PhaseSpaceError(f"x^2 + x + {b.bits} is not primitive")
    spec = b.spec
    binv = b.inv()
    return LinearMap(spec.one, spec.one, binv, binv + spec.one)


def find_primitive_rotation(form: QuadraticForm) -> LinearMap:
    """Deterministic search for a primitive rotation of an arbitrary form.

    A rotation is fixed by the images u, v of (1, 0) and (0, 1); being an
    isometry it sends them to the circles Q = 1 and Q = b and keeps the polar
    form B(u, v) = a.  Candidates are scanned in point order.
    """
    spec = form.spec
    e1 = PhasePoint(spec.one, spec.zero)
    e2 = PhasePoint(spec.zero, spec.one)

    def polar(x: PhasePoint, y: PhasePoint) -> FieldElement:
        return form(x + y) + form(x) + form(y)

    target = polar(e1, e2)
    cu = sorted(circle(form, form(e1)), key=lambda x: x.bits)
    cv = sorted(circle(form, form(e2)), key=lambda x: x.bits)
    for u in cu:
        for v in cv:
            if polar(u, v) != target:
                continue
            L = LinearMap(u.q, v.q, u.p, v.p)
            if L.det() == spec.one and is_primitive_rotation(L, form):
                return L
    raise PhaseSpaceError("no primitive rotation for this form")  # pragma: no cover


def default_form(spec: FieldSpec, a: Optional[FieldElement] = None,
                 b: Optional[FieldElement] = None) -> QuadraticForm:
    """Form (1, b) with b the smallest mask making x^2 + x + b primitive,
    unless coefficients are given explicitly."""
    from .finite_field import smallest_primitive_b

    if a is None:
        a = spec.one
    if b is None:
        b = smallest_primitive_b(spec)
    return QuadraticForm(a, b)


def rotation_for_form(form: QuadraticForm) -> LinearMap:
    """The closed-form rotation when the form is (1, b) with b primitive, else a search."""
    if form.a == form.spec.one and is_primitive_quadratic(form.b):
        return primitive_rotation(form.b)
    return find_primitive_rotation(form)


def striation_permutation(L: LinearMap) -> list[int]:
    """perm[i] = index of the striation that L sends striation i onto."""
    return [striation_index_of(L(st.direction)) for st in all_striations(L.spec)]
