"""Construction and verification of MDR RAID-6 codes.

An MDR code over k data disks is described by k+1 square binary matrices
B_1..B_{k+1} of side r plus one repair strategy per basic disk.  The Q
column of a stripe is sum(B_i d_i) over the k data columns and the row
parity column; equivalently Q = sum(A_i d_i) with generator sub-matrices
A_i = B_i + B_{k+1}.  The family is built by a doubling recursion from a
one-data-disk seed, giving r = 2^k rows.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .f2 import BitMatrix, IndexSet

# B matrices are r x r bit-packed, so memory grows as 4^k; k = 12 keeps a
# full family under ~30 MB.
DEFAULT_MAX_K = 12


@dataclass(frozen=True)
class RepairStrategy:
    """Row sets read to rebuild one basic disk.

    q_rows: rows read from the Q disk; basic_rows: rows read from every
    surviving basic disk.  Both have exactly r/2 members (the equality
    case of the repair-I/O lower bound).
    """

    q_rows: IndexSet
    basic_rows: IndexSet

    def __post_init__(self) -> None:
        r = self.q_rows.universe
        if self.basic_rows.universe != r:
            raise ValueError("strategy row sets use different universes")
        if r % 2:
            raise ValueError("strategy universe must be even")
        if len(self.q_rows) != r // 2 or len(self.basic_rows) != r // 2:
            raise ValueError("strategy row sets must each contain r/2 rows")


@dataclass(frozen=True)
class MdrCode:
    """A (k, r) RAID-6 code in B-matrix form, immutable once built."""

    k: int
    r: int
    b_matrices: tuple[BitMatrix, ...]
    strategies: tuple[RepairStrategy, ...] | None = None

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ValueError("k must be at least 1")
        if self.r < 2 or self.r % 2:
            raise ValueError("r must be a positive even number")
        if len(self.b_matrices) != self.k + 1:
            raise ValueError(f"expected {self.k + 1} B matrices, got {len(self.b_matrices)}")
        for b in self.b_matrices:
            if (b.rows, b.cols) != (self.r, self.r):
                raise ValueError("every B matrix must be r x r")
        if self.strategies is not None:
            if len(self.strategies) != self.k + 1:
                raise ValueError(f"expected {self.k + 1} repair strategies")
            for s in self.strategies:
                if s.q_rows.universe != self.r:
                    raise ValueError("strategy universe must equal r")


def initial_code() -> MdrCode:
    """The one-data-disk, two-row seed code of the doubling recursion."""
    b1 = BitMatrix.from_rows([[0, 1], [0, 0]])
    b2 = BitMatrix.from_rows([[0, 0], [1, 0]])
    s1 = RepairStrategy(IndexSet.of([1], 2), IndexSet.of([1], 2))
    s2 = RepairStrategy(IndexSet.of([2], 2), IndexSet.of([2], 2))
    return MdrCode(1, 2, (b1, b2), (s1, s2))


def generator_submatrices(code: MdrCode) -> tuple[BitMatrix, ...]:
    """A_i = B_i + B_{k+1} for i in [k]."""
    last = code.b_matrices[-1]
    return tuple(b + last for b in code.b_matrices[:-1])


def verify_mds(code: MdrCode) -> bool:
    """True iff B_i + B_j is non-singular for every pair, i.e. any two
    erasures are decodable."""
    mats = code.b_matrices
    for a, b in itertools.combinations(mats, 2):
        if not (a + b).is_nonsingular():
            return False
    return True


def verify_repair_optimal(code: MdrCode) -> bool:
    """Check the optimal-repair block condition for every basic disk.

    Disk i is rebuildable from rows basic_rows of the survivors plus rows
    q_rows of Q iff B_i restricted to (q_rows, complement(basic_rows)) is
    non-singular while the same restriction of every other B_j is zero.
    """
    if code.strategies is None:
        raise ValueError("code carries no repair strategies")
    for i, strat in enumerate(code.strategies):
        rows = strat.q_rows
        cols = strat.basic_rows.complement()
        for j, b in enumerate(code.b_matrices):
            block = b.submatrix(rows, cols)
            if j == i:
                if not block.is_nonsingular():
                    return False
            elif not block.is_zero:
                return False
    return True


def satisfies_p1(code: MdrCode) -> bool:
    """B_i non-singular for i in [k-1] (needed to keep extending)."""
    return all(b.is_nonsingular() for b in code.b_matrices[: code.k - 1])


def satisfies_p2(code: MdrCode) -> bool:
    """Every strategy reads the same rows from Q and from the basic disks."""
    if code.strategies is None:
        return False
    return all(s.q_rows == s.basic_rows for s in code.strategies)


def extend(code: MdrCode) -> MdrCode:
    """Double a repair-optimal (k, r) code into a (k+1, 2r) one.

    B'_i = diag(B_i + B_{k+1}, B_i + B_{k+1}) for the first k matrices;
    the two new matrices place an identity in the upper-right and
    lower-left quadrants.  Strategies double by mirroring each row set
    into both halves; the two new disks take one half each.
    """
    if not (verify_mds(code) and satisfies_p1(code) and satisfies_p2(code)
            and verify_repair_optimal(code)):
        raise ValueError("input code fails the extension preconditions")
    k, r = code.k, code.r
    zero = BitMatrix.zeros(r, r)
    eye = BitMatrix.identity(r)
    last = code.b_matrices[-1]
    new_b = [
        BitMatrix.from_blocks([[b + last, zero], [zero, b + last]])
        for b in code.b_matrices[:-1]
    ]
    new_b.append(BitMatrix.from_blocks([[zero, eye], [zero, zero]]))
    new_b.append(BitMatrix.from_blocks([[zero, zero], [eye, zero]]))

    new_strats = []
    for strat in code.strategies[:-1]:
        doubled = IndexSet.of(
            [x for x in strat.q_rows] + [x + r for x in strat.q_rows], 2 * r
        )
        new_strats.append(RepairStrategy(doubled, doubled))
    upper = IndexSet.of(range(1, r + 1), 2 * r)
    lower = IndexSet.of(range(r + 1, 2 * r + 1), 2 * r)
    new_strats.append(RepairStrategy(upper, upper))
    new_strats.append(RepairStrategy(lower, lower))

    out = MdrCode(k + 1, 2 * r, tuple(new_b), tuple(new_strats))
    # Re-verify instead of trusting the doubling argument: construction bugs
    # surface here instead of corrupting downstream codecs.
    if not (verify_mds(out) and verify_repair_optimal(out)):
        raise ValueError("extension produced an invalid code")
    return out


@lru_cache(maxsize=None)
def _construct(k: int) -> MdrCode:
    code = initial_code()
    for _ in range(k - 1):
        code = extend(code)
    return code


def construct(k: int, *, max_k: int = DEFAULT_MAX_K) -> MdrCode:
    """Build the canonical (k, 2^k) MDR code by repeated extension.

    Each extension level re-verifies the output, so cost grows roughly
    8x per level: k=8 is sub-second, the k=12 ceiling takes minutes.
    """
    if not 1 <= k <= max_k:
        raise ValueError(f"k must be in [1, {max_k}], got {k}")
    return _construct(k)


def is_recursive_mdr(code: MdrCode) -> bool:
    """True iff the code equals the canonical recursion output for its k."""
    if code.k > DEFAULT_MAX_K or code.r != 1 << code.k:
        return False
    return code == _construct(code.k)


# -- code-description documents ------------------------------------------

DOCUMENT_VERSION = 1


def code_to_document(code: MdrCode) -> dict:
    """Lossless structured-document form (JSON-serializable)."""
    doc: dict = {
        "version": DOCUMENT_VERSION,
        "k": code.k,
        "r": code.r,
        "b_matrices": [b.to_bitstrings() for b in code.b_matrices],
    }
    if code.strategies is None:
        doc["strategies"] = None
    else:
        doc["strategies"] = [
            {"q_rows": list(s.q_rows), "basic_rows": list(s.basic_rows)}
            for s in code.strategies
        ]
    return doc


def code_from_document(doc: dict) -> MdrCode:
    """Parse and validate a code document.

    Untrusted documents are only accepted when the two-erasure (MDS)
    property holds; strategies are optional and, when present, must pass
    the optimal-repair check.
    """
    if doc.get("version") != DOCUMENT_VERSION:
        raise ValueError(f"unsupported document version {doc.get('version')!r}")
    k, r = doc["k"], doc["r"]
    mats = tuple(BitMatrix.from_bitstrings(rows) for rows in doc["b_matrices"])
    strategies = None
    if doc.get("strategies") is not None:
        strategies = tuple(
            RepairStrategy(
                IndexSet.of(s["q_rows"], r), IndexSet.of(s["basic_rows"], r)
            )
            for s in doc["strategies"]
        )
    code = MdrCode(k, r, mats, strategies)
    if not verify_mds(code):
        raise ValueError("document describes a code without the MDS property")
    if strategies is not None and not verify_repair_optimal(code):
        raise ValueError("document strategies fail the optimal-repair check")
    return code
