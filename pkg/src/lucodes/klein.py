"""Plücker coordinates and the equivalence of (P1, L1) with the affine LU(3,q) geometry.

A point of P1 is written (a:b:c:1). A line of L1, scaled so that p23 = 1,
has Plücker coordinates (z^2+xy : x : z : -z : y : 1) and is labelled by
the triple (x, y, z). The point lies on the line iff

    z = -c*y + b   and   x = c*z - a,

and the substitution (a,b,c) -> (-c,b,a), (x,y,z) -> (y,z,-x) turns these
into the defining equations y = a*x + b, z = a*y + c of H(3,q).
"""

from __future__ import annotations

import itertools
import json
from dataclasses import asdict, dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .fq import FieldSpec
from .geometry import GeometryError, IsoLine, Quadrangle, build_quadrangle, line_key, normalize, scale
from .incidence import AffineTriple, build_geometric, build_h3q, lu_incident, triple_index

PLUECKER_PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))


def pluecker_raw(F: FieldSpec, u: Sequence[int], v: Sequence[int]) -> Tuple[int, ...]:
    """The six minors u_i v_j - u_j v_i, unscaled."""
    mul, sub = F.mul, F.sub
    return tuple(sub(mul[u[i]][v[j]], mul[u[j]][v[i]]) for i, j in PLUECKER_PAIRS)


def pluecker(F: FieldSpec, line) -> Tuple[int, ...]:
    """Canonical Plücker 6-tuple of a line (IsoLine or a pair of spanning vectors)."""
    u, v = line.basis if isinstance(line, IsoLine) else line
    coords = pluecker_raw(F, u, v)
    if not any(coords):
        raise GeometryError("spanning vectors are linearly dependent")
    return normalize(F, coords)


def on_klein_quadric(F: FieldSpec, pc: Sequence[int]) -> bool:
    p01, p02, p03, p12, p13, p23 = pc
    mul, add, sub = F.mul, F.add, F.sub
    return add[sub(mul[p01][p23], mul[p02][p13])][mul[p03][p12]] == 0


def is_isotropic_pluecker(F: FieldSpec, pc: Sequence[int]) -> bool:
    return pc[2] == F.neg[pc[3]]


def point_to_affine(F: FieldSpec, v: Sequence[int]) -> AffineTriple:
    if v[3] == 0:
        raise GeometryError(f"point {tuple(v)} is not in P1 (x3 = 0)")
    a, b, c, _ = scale(F, F.inv[v[3]], v)
    return (a, b, c)


def affine_to_point(F: FieldSpec, t: Sequence[int]) -> Tuple[int, ...]:
    """Normalized representative of (a:b:c:1)."""
    return normalize(F, (t[0], t[1], t[2], 1))


def line_to_affine(F: FieldSpec, line) -> AffineTriple:
    pc = pluecker(F, line)
    if pc[5] == 0:
        raise GeometryError("line meets l0 (p23 = 0), so it is not in L1")
    p01, p02, p03, p12, p13, _ = scale(F, F.inv[pc[5]], pc)
    x, y, z = p02, p13, p03
    if p01 != F.add[F.mul[z][z]][F.mul[x][y]] or p12 != F.neg[z]:
        raise AssertionError(f"Plücker coordinates {pc} of an L1 line break the parametrization")
    return (x, y, z)


def affine_to_line(F: FieldSpec, t: Sequence[int]) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    """RREF key of the L1 line with triple t, rebuilt from two of its points.

    For c = 0 and c = 1 the point (a:b:c:1) with b = z + c*y, a = c*z - x
    satisfies both incidence equations.
    """
    x, y, z = t
    pts = []
    for c in (0, 1):
        b = F.add[z][F.mul[c][y]]
        a = F.sub(F.mul[c][z], x)
        pts.append((a, b, c, 1))
    return line_key(F, *pts)


def incident_affine(F: FieldSpec, point: Sequence[int], line: Sequence[int]) -> bool:
    a, b, c = point
    x, y, z = line
    return z == F.sub(b, F.mul[c][y]) and x == F.sub(F.mul[c][z], a)


def change_of_coords(F: FieldSpec, point: Sequence[int], line: Sequence[int]) -> Tuple[AffineTriple, AffineTriple]:
    a, b, c = point
    x, y, z = line
    return (F.neg[c], b, a), (y, z, F.neg[x])


def _det3(F: FieldSpec, m) -> int:
    mul, add, sub = F.mul, F.add, F.sub

    def d2(a, b, c, d):
        return sub(mul[a][d], mul[b][c])

    t0 = mul[m[0][0]][d2(m[1][1], m[1][2], m[2][1], m[2][2])]
    t1 = mul[m[0][1]][d2(m[1][0], m[1][2], m[2][0], m[2][2])]
    t2 = mul[m[0][2]][d2(m[1][0], m[1][1], m[2][0], m[2][1])]
    return add[sub(t0, t1)][t2]


def minors_vanish(F: FieldSpec, point: Sequence[int], u: Sequence[int], v: Sequence[int]) -> bool:
    """All four 3x3 minors of the matrix with rows point, u, v are zero."""
    rows = (point, u, v)
    for cols in itertools.combinations(range(4), 3):
        if _det3(F, [[r[c] for c in cols] for r in rows]):
            return False
    return True


@dataclass
class EquivalenceReport:
    """Outcome of comparing M(P1, L1) with the transpose of H(3,q).

    ``point_perm[i]`` is the column of H(3,q) (a P* index) matching the i-th
    row of M(P1, L1); ``line_perm[j]`` is the row of H(3,q) (an L* index)
    matching its j-th column.
    """

    q: int
    passed: bool
    point_perm: List[int] = field(repr=False)
    line_perm: List[int] = field(repr=False)
    mismatch: Optional[Tuple[int, int]] = None
    message: str = ""

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)


def _is_permutation(perm: Sequence[int], n: int) -> bool:
    return len(perm) == n and sorted(perm) == list(range(n))


def equivalence_check(F: FieldSpec, G: Optional[Quadrangle] = None) -> EquivalenceReport:
    G = G or build_quadrangle(F)
    n = F.q ** 3
    point_perm = []
    line_perm = []
    for p in G.P1:
        pt, _ = change_of_coords(F, point_to_affine(F, G.points[p]), (0, 0, 0))
        point_perm.append(triple_index(F, pt))
    for l in G.L1:
        _, ln = change_of_coords(F, (0, 0, 0), line_to_affine(F, G.lines[l]))
        line_perm.append(triple_index(F, ln))

    report = EquivalenceReport(F.q, False, point_perm, line_perm)
    if not (_is_permutation(point_perm, n) and _is_permutation(line_perm, n)):
        report.message = "coordinate maps are not bijections onto F_q^3"
        return report

    M = build_geometric(G, "P1", "L1").matrix.to_dense()
    H = build_h3q(F).matrix.to_dense()
    expected = H.T[np.ix_(point_perm, line_perm)]
    bad = np.argwhere(M != expected)
    if bad.size:
        i, j = (int(x) for x in bad[0])
        report.mismatch = (G.P1[i], G.L1[j])
        report.message = f"point {G.P1[i]} / line {G.L1[j]}: M={int(M[i, j])}, H={int(expected[i, j])}"
        return report
    report.passed = True
    return report
