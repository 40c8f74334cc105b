"""The symplectic generalized quadrangle W(q).

Vectors and points are tuples of field-element codes. A point is stored as
its normalized representative (leftmost nonzero coordinate equal to 1), a
line as the reduced row echelon form of any spanning pair. Everything
downstream addresses points and lines by their integer index in the
lexicographic orders fixed here.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Sequence, Tuple

from .fq import FieldSpec, make_field

Vec = Tuple[int, ...]


class GeometryError(ValueError):
    pass


def symplectic_form(F: FieldSpec, u: Sequence[int], v: Sequence[int]) -> int:
    """u0*v3 + u1*v2 - u2*v1 - u3*v0, so that (e_i, e_{3-i}) = 1 for i = 0, 1."""
    add, mul, sub = F.add, F.mul, F.sub
    plus = add[mul[u[0]][v[3]]][mul[u[1]][v[2]]]
    minus = add[mul[u[2]][v[1]]][mul[u[3]][v[0]]]
    return sub(plus, minus)


def scale(F: FieldSpec, s: int, v: Sequence[int]) -> Vec:
    row = F.mul[s]
    return tuple(row[x] for x in v)


def axpy(F: FieldSpec, s: int, x: Sequence[int], y: Sequence[int]) -> Vec:
    """s*x + y."""
    row, add = F.mul[s], F.add
    return tuple(add[row[a]][b] for a, b in zip(x, y))


def normalize(F: FieldSpec, v: Sequence[int]) -> Vec:
    """Scale so the leftmost nonzero coordinate is 1."""
    for x in v:
        if x:
            return scale(F, F.inv[x], v)
    raise GeometryError("the zero vector is not a projective point")


def rref(F: FieldSpec, rows: Sequence[Sequence[int]]) -> Tuple[Vec, ...]:
    """Reduced row echelon form, zero rows dropped."""
    rows = [list(r) for r in rows]
    n = len(rows[0]) if rows else 0
    out: List[List[int]] = []
    for c in range(n):
        piv = next((r for r in rows if r[c]), None)
        if piv is None:
            continue
        rows.remove(piv)
        piv = list(scale(F, F.inv[piv[c]], piv))
        rows = [list(axpy(F, F.neg[r[c]], piv, r)) if r[c] else r for r in rows]
        out = [list(axpy(F, F.neg[r[c]], piv, r)) if r[c] else r for r in out]
        out.append(piv)
    return tuple(tuple(r) for r in out)


def line_key(F: FieldSpec, u: Sequence[int], v: Sequence[int]) -> Tuple[Vec, Vec]:
    """Canonical RREF basis of the 2-space spanned by u and v."""
    basis = rref(F, [u, v])
    if len(basis) != 2:
        raise GeometryError("spanning vectors are linearly dependent")
    return basis


@dataclass(frozen=True)
class IsoLine:
    basis: Tuple[Vec, Vec]
    points: Tuple[int, ...]


@dataclass(frozen=True, eq=False)
class Quadrangle:
    """Points, totally isotropic lines and the distinguished flag (p0, l0)."""

    field: FieldSpec
    points: List[Vec] = field(repr=False)
    lines: List[IsoLine] = field(repr=False)
    point_index: Dict[Vec, int] = field(repr=False)
    line_index: Dict[Tuple[Vec, Vec], int] = field(repr=False)
    lines_through: List[Tuple[int, ...]] = field(repr=False)
    p0: int
    l0: int
    P1: Tuple[int, ...] = field(repr=False)
    L1: Tuple[int, ...] = field(repr=False)

    @property
    def q(self) -> int:
        return self.field.q

    def on(self, p: int, l: int) -> bool:
        return p in self.lines[l].points

    def meet(self, l: int, m: int) -> Tuple[int, ...]:
        """Common points of two lines."""
        return tuple(sorted(set(self.lines[l].points) & set(self.lines[m].points)))

    def form(self, p: int, r: int) -> int:
        return symplectic_form(self.field, self.points[p], self.points[r])


def projective_points(F: FieldSpec) -> List[Vec]:
    q = F.q
    pts = []
    for lead in range(4):
        for tail in itertools.product(range(q), repeat=3 - lead):
            pts.append((0,) * lead + (1,) + tail)
    pts.sort()
    return pts


def _isotropic_rref_pairs(F: FieldSpec):
    """All 2x4 RREF matrices whose rows span a totally isotropic plane."""
    q = F.q
    for i, j in itertools.combinations(range(4), 2):
        free1 = [c for c in range(i + 1, 4) if c != j]
        free2 = list(range(j + 1, 4))
        for vals1 in itertools.product(range(q), repeat=len(free1)):
            r1 = [0] * 4
            r1[i] = 1
            for c, x in zip(free1, vals1):
                r1[c] = x
            for vals2 in itertools.product(range(q), repeat=len(free2)):
                r2 = [0] * 4
                r2[j] = 1
                for c, x in zip(free2, vals2):
                    r2[c] = x
                if symplectic_form(F, r1, r2) == 0:
                    yield tuple(r1), tuple(r2)


@lru_cache(maxsize=8)
def build_quadrangle(spec: FieldSpec) -> Quadrangle:
    F = spec
    points = projective_points(F)
    point_index = {v: k for k, v in enumerate(points)}

    bases = sorted(_isotropic_rref_pairs(F), key=lambda b: b[0] + b[1])
    lines = []
    for r1, r2 in bases:
        # r2 is already normalized, and r1 + s*r2 keeps r1's leading 1
        members = [point_index[r2]] + [point_index[axpy(F, s, r2, r1)] for s in range(F.q)]
        lines.append(IsoLine((r1, r2), tuple(sorted(members))))
    line_index = {ln.basis: k for k, ln in enumerate(lines)}

    through: List[List[int]] = [[] for _ in points]
    for k, ln in enumerate(lines):
        for p in ln.points:
            through[p].append(k)

    e0, e1 = (1, 0, 0, 0), (0, 1, 0, 0)
    p0 = point_index[e0]
    l0 = line_index[line_key(F, e0, e1)]
    P1 = tuple(k for k, v in enumerate(points) if symplectic_form(F, v, e0) != 0)
    l0_points = set(lines[l0].points)
    L1 = tuple(k for k, ln in enumerate(lines) if l0_points.isdisjoint(ln.points))

    return Quadrangle(
        field=F,
        points=points,
        lines=lines,
        point_index=point_index,
        line_index=line_index,
        lines_through=[tuple(t) for t in through],
        p0=p0,
        l0=l0,
        P1=P1,
        L1=L1,
    )


def quadrangle(q: int) -> Quadrangle:
    return build_quadrangle(make_field(q))


def perp(G: Quadrangle, p: int) -> Tuple[int, ...]:
    """Points collinear with p, p included."""
    F, v = G.field, G.points[p]
    return tuple(k for k, w in enumerate(G.points) if symplectic_form(F, v, w) == 0)


def quadrangle_trace(G: Quadrangle, p: int, l: int) -> int:
    """The unique line through p meeting l, for p not on l."""
    if G.on(p, l):
        raise GeometryError(f"point {p} lies on line {l}")
    target = set(G.lines[l].points)
    hits = [m for m in G.lines_through[p] if not target.isdisjoint(G.lines[m].points)]
    if len(hits) != 1:
        raise AssertionError(f"quadrangle property fails at point {p}, line {l}: {hits}")
    return hits[0]


def dump_points(G: Quadrangle) -> str:
    return "".join(" ".join(map(str, v)) + "\n" for v in G.points)


def dump_lines(G: Quadrangle) -> str:
    """One line per row: the eight RREF basis codes."""
    return "".join(" ".join(map(str, ln.basis[0] + ln.basis[1])) + "\n" for ln in G.lines)
