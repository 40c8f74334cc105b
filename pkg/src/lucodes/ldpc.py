"""LDPC plumbing for the LU(3,q) parity-check matrices.

Decoders work on dense 0/1 ``uint8`` arrays; at the block lengths involved
(q^3 bits) that is simpler and faster than anything sparse.

Simulation noise comes from numpy's ``PCG64`` generator, seeded per trial
with ``SeedSequence([seed, trial])``, so every trial is reproducible on its
own and results do not depend on evaluation order.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Tuple

import numpy as np

from .fq import FieldSpec
from .gf2 import BitMatrix, rank
from .incidence import build_h3q

CSV_HEADER = ("channel", "param", "trials", "seed", "bit_errors", "frame_errors")


@dataclass(frozen=True)
class CodeSpec:
    """Binary linear code given by a parity-check matrix."""

    H: BitMatrix
    n: int
    k: int
    dense: np.ndarray = field(repr=False, compare=False)

    @classmethod
    def from_parity_check(cls, H: BitMatrix) -> "CodeSpec":
        dense = H.to_dense()
        dense.setflags(write=False)
        return cls(H, H.n_cols, H.n_cols - rank(H), dense)

    def syndrome(self, word) -> np.ndarray:
        return (self.dense.astype(np.int64) @ np.asarray(word, dtype=np.int64)) % 2


def code_from_h3q(F: FieldSpec, transpose: bool = True) -> CodeSpec:
    """LU(3,q) with parity-check matrix H(3,q), or its transpose (the default)."""
    H = build_h3q(F).matrix
    return CodeSpec.from_parity_check(H.transpose() if transpose else H)


# ------------------------------------------------------------------ alist

def alist_text(H: BitMatrix) -> str:
    dense = H.to_dense()
    m, n = dense.shape
    if m == 0 or n == 0 or not dense.any():
        raise ValueError("alist export needs a matrix with at least one nonzero entry")
    col_w = dense.sum(axis=0)
    row_w = dense.sum(axis=1)
    max_c, max_r = int(col_w.max()), int(row_w.max())

    def padded(idx, width):
        vals = [str(int(i) + 1) for i in idx] + ["0"] * (width - len(idx))
        return " ".join(vals)

    out = [f"{n} {m}", f"{max_c} {max_r}", " ".join(map(str, col_w)), " ".join(map(str, row_w))]
    out += [padded(np.flatnonzero(dense[:, j]), max_c) for j in range(n)]
    out += [padded(np.flatnonzero(dense[i]), max_r) for i in range(m)]
    return "\n".join(out) + "\n"


def export_alist(H: BitMatrix, path) -> Path:
    path = Path(path)
    text = alist_text(H)
    try:
        path.write_text(text)
    except OSError as exc:
        raise OSError(f"cannot write alist file {path}: {exc}") from exc
    return path


def parse_alist(text: str) -> BitMatrix:
    rows = [[int(x) for x in ln.split()] for ln in text.splitlines() if ln.strip()]
    n, m = rows[0]
    col_w = rows[2]
    row_w = rows[3]
    if len(col_w) != n or len(row_w) != m or len(rows) != 4 + n + m:
        raise ValueError("malformed alist: section sizes do not match the header")
    dense = np.zeros((m, n), dtype=np.uint8)
    for j in range(n):
        for i in rows[4 + j][: col_w[j]]:
            dense[i - 1, j] = 1
    for i in range(m):
        cols = [c - 1 for c in rows[4 + n + i][: row_w[i]]]
        if sorted(cols) != np.flatnonzero(dense[i]).tolist():
            raise ValueError(f"malformed alist: row {i + 1} disagrees with the column lists")
    return BitMatrix.from_dense(dense)


def import_alist(path) -> BitMatrix:
    return parse_alist(Path(path).read_text())


# --------------------------------------------------------------- decoders

def bitflip_decode(C: CodeSpec, received, max_iters: int = 50) -> Tuple[np.ndarray, bool]:
    """Parallel hard-decision bit flipping.

    Each round flips every bit for which strictly more than half of its
    checks are unsatisfied; ties never flip. Stops on a zero syndrome, when
    no bit qualifies, or after ``max_iters`` rounds.
    """
    x = np.array(received, dtype=np.uint8).reshape(-1)
    if x.size != C.n:
        raise ValueError(f"received word has length {x.size}, code length is {C.n}")
    if max_iters < 1:
        raise ValueError("max_iters must be at least 1")
    H = C.dense.astype(np.int64)
    degree = H.sum(axis=0)
    for _ in range(max_iters):
        s = (H @ x) % 2
        if not s.any():
            return x, True
        unsat = H.T @ s
        flip = 2 * unsat > degree
        if not flip.any():
            break
        x ^= flip.astype(np.uint8)
    return x, not ((H @ x) % 2).any()


def bec_peel_decode(C: CodeSpec, erased, received=None) -> Tuple[np.ndarray, int]:
    """Peel erasures through checks that see exactly one erased bit.

    ``received`` holds the known bit values (erased positions are ignored);
    it defaults to the all-zero word. Returns the filled word and the number
    of erasures left at the fixpoint.
    """
    erased = np.array(erased, dtype=bool).reshape(-1)
    if erased.size != C.n:
        raise ValueError(f"erasure mask has length {erased.size}, code length is {C.n}")
    x = np.zeros(C.n, dtype=np.uint8) if received is None else np.array(received, dtype=np.uint8).reshape(-1)
    x[erased] = 0
    H = C.dense.astype(np.int64)
    while erased.any():
        counts = H @ erased
        ready = np.flatnonzero(counts == 1)
        if ready.size == 0:
            break
        for c in ready:
            row = H[c].astype(bool)
            target = np.flatnonzero(row & erased)
            if target.size != 1:
                continue  # already resolved earlier in this round
            x[target[0]] = int(x[row & ~erased].sum() % 2)
            erased[target[0]] = False
    return x, int(erased.sum())


# ------------------------------------------------------------- simulation

@dataclass(frozen=True)
class SimResult:
    channel: str
    param: float
    trials: int
    seed: int
    n: int
    bit_errors: int
    frame_errors: int

    @property
    def ber(self) -> float:
        return self.bit_errors / (self.trials * self.n)

    @property
    def fer(self) -> float:
        return self.frame_errors / self.trials

    def csv_row(self) -> tuple:
        return (self.channel, self.param, self.trials, self.seed, self.bit_errors, self.frame_errors)


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, trial])))


def simulate(
    C: CodeSpec,
    channel: str,
    param: float,
    trials: int,
    seed: int,
    max_iters: int = 50,
) -> SimResult:
    """Send the all-zero codeword over a BSC(p) or BEC(eps) and tally residual errors."""
    channel = channel.lower()
    if channel not in ("bsc", "bec"):
        raise ValueError(f"unknown channel {channel!r}")
    if not 0.0 <= param <= 1.0:
        raise ValueError("channel parameter must lie in [0, 1]")
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if not 0 <= seed < 2 ** 64:
        raise ValueError("seed must be an unsigned 64-bit integer")

    bit_errors = frame_errors = 0
    for trial in range(trials):
        hit = trial_rng(seed, trial).random(C.n) < param
        if channel == "bsc":
            estimate, _ = bitflip_decode(C, hit.astype(np.uint8), max_iters)
            wrong = int(estimate.sum())
        else:
            _, wrong = bec_peel_decode(C, hit)
        bit_errors += wrong
        frame_errors += wrong > 0
    return SimResult(channel, float(param), trials, seed, C.n, bit_errors, frame_errors)


def results_csv(results) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in results:
        writer.writerow(r.csv_row())
    return buf.getvalue()
