import numpy as np
import pytest

from lucodes.fq import make_field
from lucodes.geometry import quadrangle
from lucodes.gf2 import BitMatrix
from lucodes.incidence import build_geometric, build_h3q
from lucodes.ldpc import (
    CSV_HEADER,
    CodeSpec,
    alist_text,
    bec_peel_decode,
    bitflip_decode,
    code_from_h3q,
    export_alist,
    import_alist,
    parse_alist,
    results_csv,
    simulate,
)
from lucodes.verify import expected_dim_lu3


@pytest.fixture(scope="module")
def lu3():
    return code_from_h3q(make_field(3))


@pytest.mark.parametrize("q, k", [(3, 8), (5, 44)])
def test_code_dimension(q, k):
    C = code_from_h3q(make_field(q), transpose=True)
    assert (C.n, C.k) == (q ** 3, k)


def test_untransposed_same_dimension():
    C = code_from_h3q(make_field(3), transpose=False)
    assert (C.n, C.k) == (27, 8)


@pytest.mark.parametrize("q", [3, 5, 7, 9])
def test_dimension_matches_formula(q):
    assert code_from_h3q(make_field(q)).k == expected_dim_lu3(q)


def test_alist_header_q2():
    text = alist_text(build_h3q(make_field(2)).matrix.transpose())
    lines = text.splitlines()
    assert lines[0] == "8 8" and lines[1] == "2 2"
    assert lines[2].split() == ["2"] * 8
    assert text.endswith("\n") and len(lines) == 4 + 8 + 8


def test_alist_hand_example():
    H = BitMatrix.from_dense([[1, 1, 0], [0, 1, 1]])
    assert alist_text(H) == "3 2\n2 2\n1 2 1\n2 2\n1 0\n1 2\n2 0\n1 2\n2 3\n"


@pytest.mark.parametrize("q", [2, 3, 4])
@pytest.mark.parametrize("which", ["H3Q", "PL", "P1L1", "PL1", "P1L"])
def test_alist_round_trip(q, which, tmp_path):
    if which == "H3Q":
        H = build_h3q(make_field(q)).matrix
    else:
        rows, cols = {"PL": ("P", "L"), "P1L1": ("P1", "L1"), "PL1": ("P", "L1"), "P1L": ("P1", "L")}[which]
        H = build_geometric(quadrangle(q), rows, cols).matrix
    path = export_alist(H, tmp_path / f"{which}.alist")
    assert import_alist(path) == H
    assert import_alist(path).transpose() == H.transpose()


def test_alist_rejects_zero_matrix():
    with pytest.raises(ValueError):
        alist_text(BitMatrix.zeros(4, 4))


def test_alist_io_error(tmp_path):
    with pytest.raises(OSError, match="missing"):
        export_alist(BitMatrix.identity(3), tmp_path / "missing" / "x.alist")


def test_parse_alist_malformed():
    with pytest.raises(ValueError):
        parse_alist("3 2\n2 2\n1 2 1\n2 2\n1 0\n1 2\n")
    with pytest.raises(ValueError):
        parse_alist("3 2\n2 2\n1 2 1\n2 2\n1 0\n1 2\n2 0\n1 3\n2 3\n")


def _nullspace(H):
    """Nullspace basis of a dense 0/1 matrix by plain Gauss-Jordan over GF(2)."""
    A = np.array(H, dtype=np.uint8) % 2
    m, n = A.shape
    pivots, r = [], 0
    for c in range(n):
        hit = next((i for i in range(r, m) if A[i, c]), None)
        if hit is None:
            continue
        A[[r, hit]] = A[[hit, r]]
        for i in range(m):
            if i != r and A[i, c]:
                A[i] ^= A[r]
        pivots.append(c)
        r += 1
    basis = []
    for f in (c for c in range(n) if c not in pivots):
        v = np.zeros(n, dtype=np.uint8)
        v[f] = 1
        for i, c in enumerate(pivots):
            v[c] = A[i, f]
        basis.append(v)
    return np.array(basis)


def test_nullspace_oracle_dimension(lu3):
    N = _nullspace(lu3.dense)
    assert N.shape == (8, 27)
    assert not ((lu3.dense.astype(np.int64) @ N.T) % 2).any()


def test_bitflip_codeword_unchanged(lu3):
    N = _nullspace(lu3.dense)
    rng = np.random.default_rng(0)
    for _ in range(50):
        c = (rng.integers(0, 2, len(N)) @ N % 2).astype(np.uint8)
        x, ok = bitflip_decode(lu3, c)
        assert ok and np.array_equal(x, c)


def test_bitflip_zero_word(lu3):
    x, ok = bitflip_decode(lu3, np.zeros(27, dtype=np.uint8))
    assert ok and not x.any()


def test_columns_share_at_most_one_check(lu3):
    H = lu3.dense.astype(np.int64)
    overlap = H.T @ H
    np.fill_diagonal(overlap, 0)
    assert overlap.max() == 1


def test_single_error_sweep_q3(lu3):
    # the flipped bit sees all 3 of its checks unsatisfied; any other bit shares
    # at most one check with it, so 1 of 3 is not a majority: one round corrects
    outcomes = []
    for j in range(27):
        e = np.zeros(27, dtype=np.uint8)
        e[j] = 1
        x, ok = bitflip_decode(lu3, e, max_iters=1)
        outcomes.append(ok and not x.any())
    assert outcomes == [True] * 27


def test_bitflip_errors(lu3):
    with pytest.raises(ValueError):
        bitflip_decode(lu3, np.zeros(26))
    with pytest.raises(ValueError):
        bitflip_decode(lu3, np.zeros(27), max_iters=0)


def test_bitflip_tie_does_not_flip():
    # both bits have degree 2 and see exactly one unsatisfied check: a tie, so nothing flips
    H = BitMatrix.from_dense([[1, 1], [1, 0], [0, 1]])
    C = CodeSpec.from_parity_check(H)
    x, ok = bitflip_decode(C, [1, 1])
    assert not ok and list(x) == [1, 1]


def test_bec_no_erasures(lu3):
    word, left = bec_peel_decode(lu3, np.zeros(27, dtype=bool))
    assert left == 0 and not word.any()


def test_bec_all_erased(lu3):
    _, left = bec_peel_decode(lu3, np.ones(27, dtype=bool))
    assert left == 27


def test_bec_single_erasure(lu3):
    for j in range(27):
        mask = np.zeros(27, dtype=bool)
        mask[j] = True
        _, left = bec_peel_decode(lu3, mask)
        assert left == 0


def test_bec_recovers_nonzero_codeword(lu3):
    c = _nullspace(lu3.dense)[0]
    mask = np.zeros(27, dtype=bool)
    mask[np.flatnonzero(c)[0]] = True
    mask[5] = True
    word, left = bec_peel_decode(lu3, mask, received=np.where(mask, 1 - c, c))
    assert left == 0 and np.array_equal(word, c)


def test_simulate_noiseless(lu3):
    for ch in ("bsc", "bec"):
        r = simulate(lu3, ch, 0.0, 25, seed=1)
        assert r.bit_errors == r.frame_errors == 0


def test_simulate_full_erasure(lu3):
    r = simulate(lu3, "bec", 1.0, 12, seed=4)
    assert r.frame_errors == 12 and r.bit_errors == 12 * 27


def test_simulate_reproducible(lu3):
    a = simulate(lu3, "bsc", 0.1, 200, seed=99)
    b = simulate(lu3, "bsc", 0.1, 200, seed=99)
    assert a == b
    assert a.bit_errors <= a.trials * a.n and a.frame_errors <= a.trials


def test_simulate_rejects_bad_input(lu3):
    with pytest.raises(ValueError):
        simulate(lu3, "awgn", 0.1, 1, 0)
    with pytest.raises(ValueError):
        simulate(lu3, "bsc", 1.5, 1, 0)
    with pytest.raises(ValueError):
        simulate(lu3, "bsc", 0.1, 0, 0)


def test_ber_monotone_q5():
    C = code_from_h3q(make_field(5))
    low = simulate(C, "bsc", 0.001, 2000, seed=2024)
    high = simulate(C, "bsc", 0.05, 2000, seed=2024)
    assert low.ber < high.ber


def test_converged_implies_zero_syndrome(lu3):
    rng = np.random.default_rng(11)
    for _ in range(300):
        y = (rng.random(27) < 0.15).astype(np.uint8)
        x, ok = bitflip_decode(lu3, y)
        if ok:
            assert not lu3.syndrome(x).any()


def test_results_csv(lu3):
    text = results_csv([simulate(lu3, "bsc", 0.0, 3, seed=5)])
    header, row = text.splitlines()
    assert header == ",".join(CSV_HEADER) == "channel,param,trials,seed,bit_errors,frame_errors"
    assert row == "bsc,0.0,3,5,0,0"
