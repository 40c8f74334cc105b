"""Incidence matrices of (P, L), its restrictions, and the affine LU(3,q) matrix H(3,q)."""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from .fq import FieldSpec
from .geometry import Quadrangle
from .gf2 import BitMatrix

AffineTriple = Tuple[int, int, int]


@dataclass(frozen=True)
class IncidenceSystem:
    """``matrix[i, j] == 1`` iff ``row_labels[i]`` is incident with ``col_labels[j]``."""

    row_labels: Tuple
    col_labels: Tuple
    matrix: BitMatrix

    @property
    def shape(self) -> Tuple[int, int]:
        return self.matrix.shape


def point_set(G: Quadrangle, which: str) -> Tuple[int, ...]:
    if which == "P":
        return tuple(range(len(G.points)))
    if which == "P1":
        return G.P1
    raise ValueError(f"unknown point set {which!r}")


def line_set(G: Quadrangle, which: str) -> Tuple[int, ...]:
    if which == "L":
        return tuple(range(len(G.lines)))
    if which == "L1":
        return G.L1
    raise ValueError(f"unknown line set {which!r}")


def build_geometric(G: Quadrangle, rows: str = "P", cols: str = "L") -> IncidenceSystem:
    """Points-by-lines incidence matrix for rows in {P, P1} and cols in {L, L1}."""
    row_labels = point_set(G, rows)
    col_labels = line_set(G, cols)
    row_pos = {p: i for i, p in enumerate(row_labels)}
    dense = np.zeros((len(row_labels), len(col_labels)), dtype=np.uint8)
    for j, l in enumerate(col_labels):
        for p in G.lines[l].points:
            i = row_pos.get(p)
            if i is not None:
                dense[i, j] = 1
    return IncidenceSystem(row_labels, col_labels, BitMatrix.from_dense(dense))


def affine_triples(F: FieldSpec) -> List[AffineTriple]:
    """F_q^3 in lexicographic code order; triple (u, v, w) sits at u*q^2 + v*q + w."""
    return list(itertools.product(range(F.q), repeat=3))


def triple_index(F: FieldSpec, t: Sequence[int]) -> int:
    q = F.q
    return (t[0] * q + t[1]) * q + t[2]


def lu_incident(F: FieldSpec, point: Sequence[int], line: Sequence[int]) -> bool:
    """(a,b,c) on [x,y,z] iff y = a*x + b and z = a*y + c."""
    a, b, c = point
    x, y, z = line
    add, mul = F.add, F.mul
    return y == add[mul[a][x]][b] and z == add[mul[a][y]][c]


def build_h3q(F: FieldSpec) -> IncidenceSystem:
    """H(3,q): rows are lines [x,y,z], columns are points (a,b,c)."""
    q = F.q
    triples = affine_triples(F)
    dense = np.zeros((q ** 3, q ** 3), dtype=np.uint8)
    for row, (x, y, z) in enumerate(triples):
        # a is free; b and c are then forced
        for a in range(q):
            b = F.sub(y, F.mul[a][x])
            c = F.sub(z, F.mul[a][y])
            dense[row, triple_index(F, (a, b, c))] = 1
    labels = tuple(triples)
    return IncidenceSystem(labels, labels, BitMatrix.from_dense(dense))


def weights(S: IncidenceSystem) -> Tuple[Counter, Counter]:
    """Row- and column-weight multisets as ``{weight: count}``."""
    M = S.matrix
    return Counter(M.row_weights().tolist()), Counter(M.col_weights().tolist())


def dump_matrix(M: BitMatrix) -> str:
    """Rows of 0/1 characters, newline-terminated."""
    dense = M.to_dense()
    return "".join("".join("1" if x else "0" for x in row) + "\n" for row in dense)


def load_matrix(text: str) -> BitMatrix:
    rows = [ln.strip() for ln in text.splitlines() if ln.strip()]
    return BitMatrix.from_dense(np.array([[ch == "1" for ch in r] for r in rows], dtype=np.uint8))
