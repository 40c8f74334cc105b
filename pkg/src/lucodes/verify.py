"""Machine checks of the 2-rank formulas and the lemmas behind them.

Every check here is a direct computation on the quadrangle built in
:mod:`lucodes.geometry`; nothing is inferred from the formulas being
checked. Vectors over the point set P are ``uint8`` (GF(2)) or ``int64``
(integer counts) numpy arrays indexed by point index.
"""

from __future__ import annotations

import random
import time
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .fq import make_field, prime_power
from .geometry import Quadrangle, build_quadrangle, perp, quadrangle
from .gf2 import EchelonBasis, in_span, kernel_support_dim, rank, vectors_rank
from .incidence import build_geometric


class VerificationError(ValueError):
    pass


# ---------------------------------------------------------------- formulas

def _even_power_sum(n: int) -> int:
    """s_n = r^n + r'^n for the roots r, r' of x^2 - x - 4."""
    s_prev, s = 2, 1
    if n == 0:
        return s_prev
    for _ in range(n - 1):
        s_prev, s = s, s + 4 * s_prev
    return s


def expected_rank_PL(q: int) -> int:
    """2-rank of M(P, L): (q^3+2q^2+q+2)/2 for odd q, 1 + s_{2t} for q = 2^t."""
    p, t = prime_power(q)
    if p == 2:
        return 1 + _even_power_sum(2 * t)
    return (q ** 3 + 2 * q ** 2 + q + 2) // 2


def _require_odd(q: int) -> None:
    p, _ = prime_power(q)
    if p == 2:
        raise VerificationError(f"no closed formula is known for even q = {q}")


def expected_rank_P1L1(q: int) -> int:
    _require_odd(q)
    return (q ** 3 + 2 * q ** 2 - 3 * q + 2) // 2


def expected_dim_lu3(q: int) -> int:
    _require_odd(q)
    return (q ** 3 - 2 * q ** 2 + 3 * q - 2) // 2


def lower_bound_lu3(q: int) -> int:
    return q ** 3 - expected_rank_PL(q) + 2 * q


def is_odd(q: int) -> bool:
    return prime_power(q)[0] != 2


# ---------------------------------------------------------------- vectors

@lru_cache(maxsize=8)
def _dense(G: Quadrangle) -> np.ndarray:
    """Point-by-line incidence over the integers."""
    M = build_geometric(G, "P", "L").matrix.to_dense().astype(np.int64)
    M.setflags(write=False)
    return M


@lru_cache(maxsize=8)
def _meets(G: Quadrangle) -> np.ndarray:
    """Boolean line-by-line matrix: distinct lines sharing a point."""
    M = _dense(G)
    A = (M.T @ M) > 0
    np.fill_diagonal(A, False)
    A.setflags(write=False)
    return A


def chi_line(G: Quadrangle, l: int) -> np.ndarray:
    v = np.zeros(len(G.points), dtype=np.uint8)
    v[list(G.lines[l].points)] = 1
    return v


def chi_point(G: Quadrangle, p: int) -> np.ndarray:
    v = np.zeros(len(G.points), dtype=np.uint8)
    v[p] = 1
    return v


def lines_meeting(G: Quadrangle, l: int) -> np.ndarray:
    """Indices of the lines other than l that share a point with l."""
    return np.flatnonzero(_meets(G)[l])


def allone_counts(G: Quadrangle, l: int) -> np.ndarray:
    """Integer sum of the characteristic vectors of all lines meeting l."""
    return _dense(G)[:, lines_meeting(G, l)].sum(axis=1)


def check_allone(G: Quadrangle, l: int) -> bool:
    return bool(np.all(allone_counts(G, l) % 2 == 1))


def allone_counts_ok(G: Quadrangle, l: int) -> bool:
    """Counts are q on l and 1 off l."""
    counts = allone_counts(G, l)
    expected = np.ones(len(G.points), dtype=np.int64)
    expected[list(G.lines[l].points)] = G.q
    return bool(np.array_equal(counts, expected))


def l0_meet_point(G: Quadrangle, l: int) -> int:
    """The point where l meets l0; raises unless l != l0 meets it in one point."""
    common = G.meet(l, G.l0)
    if l == G.l0 or len(common) != 1:
        raise VerificationError(f"line {l} is l0 or does not meet l0 in a single point")
    return common[0]


def compute_phi(G: Quadrangle, l: int) -> np.ndarray:
    """Integer sum of the characteristic vectors of the L1 lines meeting l."""
    l0_meet_point(G, l)
    L1_mask = np.zeros(len(G.lines), dtype=bool)
    L1_mask[list(G.L1)] = True
    cols = np.flatnonzero(_meets(G)[l] & L1_mask)
    return _dense(G)[:, cols].sum(axis=1)


def phi_table(G: Quadrangle, l: int) -> np.ndarray:
    """Predicted values of compute_phi: 0 at p, q on l - p, 0 on p-perp - l, 1 elsewhere."""
    p = l0_meet_point(G, l)
    out = np.ones(len(G.points), dtype=np.int64)
    out[list(perp(G, p))] = 0
    out[list(G.lines[l].points)] = G.q
    out[p] = 0
    return out


def check_phi(G: Quadrangle, l: int) -> bool:
    return bool(np.array_equal(compute_phi(G, l), phi_table(G, l)))


def qualifying_lines(G: Quadrangle) -> List[int]:
    """Lines other than l0 meeting l0 (in exactly one point)."""
    return [int(m) for m in lines_meeting(G, G.l0)]


@lru_cache(maxsize=8)
def _L1_span(G: Quadrangle) -> EchelonBasis:
    span = EchelonBasis()
    for l in G.L1:
        span.add(chi_line(G, l))
    return span


def check_linediffs(G: Quadrangle, p: int, l: int, l2: int) -> bool:
    """chi_l + chi_l2 lies in C(P, L1), for lines l, l2 != l0 through p on l0."""
    if p not in G.lines[G.l0].points:
        raise VerificationError(f"point {p} is not on l0")
    for m in (l, l2):
        if m == G.l0 or not G.on(p, m):
            raise VerificationError(f"line {m} is l0 or does not pass through {p}")
    v = chi_line(G, l) ^ chi_line(G, l2)
    return _L1_span(G).contains(v)


def linediff_pairs(G: Quadrangle, p: int) -> List[Tuple[int, int]]:
    through = [m for m in G.lines_through[p] if m != G.l0]
    return [(a, b) for i, a in enumerate(through) for b in through[i:]]


def _matrix_PL1(G: Quadrangle):
    return build_geometric(G, "P", "L1").matrix


def kernel_dims(G: Quadrangle) -> Tuple[int, int]:
    """(dim of ker pi_P1 in C(P,L), dim of ker pi_P1 in C(P,L1)).

    Also confirms that X is an independent subset of the first space and,
    for odd q, that the q-1 differences chi_l - chi_l' are an independent
    subset of the second.
    """
    S = perp(G, G.p0)
    M_PL = build_geometric(G, "P", "L").matrix
    M_PL1 = _matrix_PL1(G)
    d_all = kernel_support_dim(M_PL, S)
    d_L1 = kernel_support_dim(M_PL1, S)

    outside = np.ones(len(G.points), dtype=bool)
    outside[list(S)] = False
    X = list(G.lines_through[G.p0])
    X_vecs = [chi_line(G, l) for l in X]
    assert all(not v[outside].any() for v in X_vecs)
    assert vectors_rank(X_vecs) == len(X)
    assert d_all >= len(X)

    if is_odd(G.q):
        X0 = [l for l in X if l != G.l0]
        base = chi_line(G, X0[0])
        diffs = [base ^ chi_line(G, l) for l in X0[1:]]
        assert vectors_rank(diffs) == len(diffs) == G.q - 1
        assert all(in_span(v, M_PL1) for v in diffs)
    return d_all, d_L1


# ------------------------------------------------------------- basis sets

@dataclass
class BasisSets:
    X: List[int]
    X0: List[int]
    Y: List[int]
    Z: List[int]


def build_basis_sets(G: Quadrangle) -> BasisSets:
    X = sorted(G.lines_through[G.p0])
    X0 = [l for l in X if l != G.l0]
    Y = []
    for p in G.lines[G.l0].points:
        if p != G.p0:
            Y.append(min(m for m in G.lines_through[p] if m != G.l0))

    P1 = list(G.P1)
    span = EchelonBasis()
    Z = [l for l in G.L1 if span.add(chi_line(G, l)[P1])]
    return BasisSets(X, X0, Y, Z)


def check_basis_sets(G: Quadrangle, B: BasisSets) -> Dict[str, bool]:
    P1 = list(G.P1)
    return {
        "disjoint": not (set(B.X) & set(B.Y) or set(B.X) & set(B.Z) or set(B.Y) & set(B.Z)),
        "X_in_kernel": all(not chi_line(G, l)[P1].any() for l in B.X),
        "sizes": len(B.X) == G.q + 1 and len(B.X0) == G.q and len(B.Y) == G.q,
        "Z_is_basis": len(B.Z) == rank(build_geometric(G, "P1", "L1").matrix),
    }


def check_independence_and_span(G: Quadrangle, B: BasisSets) -> Tuple[bool, bool]:
    vecs = [chi_line(G, l) for l in B.Z + B.X0 + B.Y]
    r = vectors_rank(vecs)
    full = rank(build_geometric(G, "P", "L").matrix)
    return r == len(B.Z) + 2 * G.q, r == full


def check_phi_sum_identity(G: Quadrangle) -> bool:
    """Sum of Phi over X0, mod 2, is the all-ones vector plus chi_{l0}."""
    X0 = [l for l in G.lines_through[G.p0] if l != G.l0]
    total = sum(compute_phi(G, l) for l in X0) % 2
    target = (1 + chi_line(G, G.l0).astype(np.int64)) % 2
    return bool(np.array_equal(total, target))


# ---------------------------------------------------------------- reports

@dataclass
class RankReport:
    q: int
    computed_rank_PL: int
    expected_rank_PL: int
    computed_rank_P1L1: int
    expected_rank_P1L1: Optional[int]
    computed_dim_LU: int
    expected_dim_LU: Optional[int]
    lower_bound_LU: int
    pass_rank_PL: bool
    pass_rank_P1L1: Optional[bool]
    pass_dim_LU: Optional[bool]
    pass_lower_bound: bool
    bound_attained: bool
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        flags = [self.pass_rank_PL, self.pass_rank_P1L1, self.pass_dim_LU, self.pass_lower_bound]
        return all(f for f in flags if f is not None)


def rank_report(q: int, G: Optional[Quadrangle] = None) -> RankReport:
    start = time.perf_counter()
    G = G or quadrangle(q)
    r_pl = rank(build_geometric(G, "P", "L").matrix)
    r_11 = rank(build_geometric(G, "P1", "L1").matrix)
    dim = q ** 3 - r_11
    odd = is_odd(q)
    exp_pl = expected_rank_PL(q)
    exp_11 = expected_rank_P1L1(q) if odd else None
    exp_dim = expected_dim_lu3(q) if odd else None
    bound = lower_bound_lu3(q)
    return RankReport(
        q=q,
        computed_rank_PL=r_pl,
        expected_rank_PL=exp_pl,
        computed_rank_P1L1=r_11,
        expected_rank_P1L1=exp_11,
        computed_dim_LU=dim,
        expected_dim_LU=exp_dim,
        lower_bound_LU=bound,
        pass_rank_PL=r_pl == exp_pl,
        pass_rank_P1L1=(r_11 == exp_11) if odd else None,
        pass_dim_LU=(dim == exp_dim) if odd else None,
        pass_lower_bound=dim >= bound,
        bound_attained=dim == bound,
        seconds=round(time.perf_counter() - start, 3),
    )


def _sample(items: Sequence[int], sample: Optional[int], seed: int) -> List[int]:
    items = list(items)
    if sample is None or sample >= len(items):
        return items
    return sorted(random.Random(seed).sample(items, sample))


def lemma_report(q: int, sample: Optional[int] = None, seed: int = 0) -> Dict[str, dict]:
    """Run every lemma check at q.

    ``sample`` caps the number of lines used for the per-line checks; None
    means exhaustive. Entries carry ``passed`` (bool) and ``applies``
    (False when the statement is only claimed for odd q, in which case the
    outcome is reported but not required).
    """
    G = quadrangle(q)
    odd = is_odd(q)
    out: Dict[str, dict] = {}

    def record(name, passed, applies=True, **extra):
        out[name] = {"passed": bool(passed), "applies": applies, **extra}

    lines = _sample(range(len(G.lines)), sample, seed)
    record("line_sum_counts", all(allone_counts_ok(G, l) for l in lines), lines_checked=len(lines))
    record("line_sum_allone", all(check_allone(G, l) for l in lines), applies=odd, lines_checked=len(lines))

    qual = _sample(qualifying_lines(G), sample, seed)
    record("phi_table", all(check_phi(G, l) for l in qual), lines_checked=len(qual))

    pairs = [(p, a, b) for p in G.lines[G.l0].points for a, b in linediff_pairs(G, p)]
    record("line_differences", all(check_linediffs(G, *t) for t in pairs), applies=odd, pairs_checked=len(pairs))

    d_all, d_L1 = kernel_dims(G)
    record("kernel_dim_L", d_all == q + 1, applies=odd, value=d_all)
    record("kernel_dim_L1", d_L1 == q - 1, applies=odd, value=d_L1)

    B = build_basis_sets(G)
    sets_ok = check_basis_sets(G, B)
    record("basis_sets", all(sets_ok.values()), **sets_ok)
    indep, spans = check_independence_and_span(G, B)
    record("independence", indep)
    record("span", spans, applies=odd)
    record("phi_sum_identity", check_phi_sum_identity(G), applies=odd)
    return out


def lemmas_passed(report: Dict[str, dict]) -> bool:
    return all(entry["passed"] for entry in report.values() if entry["applies"])


def run_suite(q: int, suite: str = "all", sample: Optional[int] = None, seed: int = 0) -> dict:
    """JSON-ready verification block for one q."""
    if suite not in ("all", "lemmas", "formulas"):
        raise ValueError(f"unknown suite {suite!r}")
    make_field(q)
    block: dict = {"q": q, "suite": suite}
    passed = True
    start = time.perf_counter()
    if suite in ("all", "formulas"):
        rr = rank_report(q)
        block["ranks"] = asdict(rr)
        passed &= rr.passed
    if suite in ("all", "lemmas"):
        lr = lemma_report(q, sample=sample, seed=seed)
        block["lemmas"] = lr
        passed &= lemmas_passed(lr)
    block["seconds"] = round(time.perf_counter() - start, 3)
    block["passed"] = bool(passed)
    return block
