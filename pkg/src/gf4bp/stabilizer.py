"""Stabilizer codes over GF(4): Pauli strings, syndromes, EA canonicalization
and code constructions.

Pauli operators are phase-free throughout: an n-qubit operator is its vector
of GF(4) symbols (see gf4) and operator products are entrywise GF(4) sums.
Entanglement-assisted codes keep the c receiver-held ebit columns after the
n_sent transmitted columns; channel errors never touch ebit columns, so any
error string has identity there.

The binary symplectic representation maps column j of a symbol vector to the
bit pair (x_j, z_j) with X=(1,0), Z=(0,1), Y=(1,1); rank and membership
questions reduce to GF(2) linear algebra in that picture.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import gf4


class NonCommutingRowsError(ValueError):
    """A generator set that is supposed to commute does not."""


def as_values(pauli) -> np.ndarray:
    """Coerce a Pauli string ('IXZY' text or value sequence) to GF(4) values."""
    if isinstance(pauli, str):
        return gf4.pauli_to_values(pauli)
    values = np.asarray(pauli, dtype=np.uint8)
    if values.size and values.max() > 3:
        raise ValueError("GF(4) values must lie in 0..3")
    return values


def to_symplectic(values: np.ndarray) -> np.ndarray:
    """Binary symplectic image [x-bits | z-bits] along the last axis."""
    values = np.asarray(values, dtype=np.uint8)
    return np.concatenate([values & 1, values >> 1], axis=-1)


def symplectic_products(vec: np.ndarray, rows: np.ndarray) -> np.ndarray:
    """Commutation parities (0/1) of one Pauli vector against many rows."""
    vx = (vec & 1).astype(np.int64)
    vz = (vec >> 1).astype(np.int64)
    rx = (rows & 1).astype(np.int64)
    rz = (rows >> 1).astype(np.int64)
    return ((rx @ vz + rz @ vx) % 2).astype(np.uint8)


def commutes(p, q) -> int:
    """+1 if two equal-length Pauli strings commute, -1 if they anticommute."""
    u = as_values(p)
    v = as_values(q)
    return 1 if gf4.trace_inner_product(u, v) == 0 else -1


def gf2_row_reduce(matrix: np.ndarray):
    """Row-reduce a binary matrix over GF(2).

    Returns (reduced_rows, pivot_columns); reduced_rows has one row per
    pivot and is in reduced row-echelon form.
    """
    m = np.array(matrix, dtype=np.uint8) % 2
    n_rows, n_cols = m.shape
    pivots = []
    r = 0
    for c in range(n_cols):
        hits = np.nonzero(m[r:, c])[0]
        if hits.size == 0:
            continue
        pivot = r + hits[0]
        if pivot != r:
            m[[r, pivot]] = m[[pivot, r]]
        others = np.nonzero(m[:, c])[0]
        others = others[others != r]
        m[others] ^= m[r]
        pivots.append(c)
        r += 1
        if r == n_rows:
            break
    return m[:r], np.array(pivots, dtype=np.intp)


def _in_gf2_span(reduced: np.ndarray, pivots: np.ndarray, vec: np.ndarray) -> bool:
    v = vec.astype(np.uint8).copy()
    for row, c in zip(reduced, pivots):
        if v[c]:
            v ^= row
    return not v.any()


@dataclass(eq=False)
class StabilizerCode:
    """An m-generator stabilizer over n_sent + n_ebits qubits.

    checks holds GF(4) values; rows must be nonzero and mutually commuting.
    Redundant (dependent) rows are allowed.
    """

    checks: np.ndarray
    n_sent: int
    n_ebits: int = 0

    def __post_init__(self):
        checks = np.asarray(self.checks, dtype=np.uint8)
        if checks.ndim != 2 or checks.shape[0] == 0:
            raise ValueError("check matrix must be a nonempty 2-D array")
        if checks.size and checks.max() > 3:
            raise ValueError("check entries must be GF(4) values 0..3")
        if self.n_sent + self.n_ebits != checks.shape[1]:
            raise ValueError(
                f"n_sent + n_ebits = {self.n_sent + self.n_ebits} does not match "
                f"{checks.shape[1]} columns"
            )
        if not checks.any(axis=1).all():
            raise ValueError("every generator row must be nonzero")
        self.checks = checks
        self._check_commutation()

    def _check_commutation(self):
        x = (self.checks & 1).astype(np.int64)
        z = (self.checks >> 1).astype(np.int64)
        gram = (x @ z.T + z @ x.T) % 2
        if gram.any():
            i, j = np.argwhere(gram)[0]
            raise NonCommutingRowsError(
                f"generators {i} and {j} anticommute"
            )

    @property
    def n_total(self) -> int:
        return self.checks.shape[1]

    @property
    def n_checks(self) -> int:
        return self.checks.shape[0]

    @cached_property
    def rank(self) -> int:
        """Number of independent generators (GF(2) symplectic rank)."""
        reduced, _ = gf2_row_reduce(to_symplectic(self.checks))
        return reduced.shape[0]

    @cached_property
    def logical_k(self) -> int:
        """Encoded qubits: n_sent - (independent generators - ebits)."""
        return self.n_sent - self.rank + self.n_ebits

    @cached_property
    def _span_basis(self):
        return gf2_row_reduce(to_symplectic(self.checks))

    @cached_property
    def _sent_bits(self):
        sent = self.checks[:, : self.n_sent]
        return (sent & 1).astype(np.int64), (sent >> 1).astype(np.int64)

    def row_pauli(self, index: int) -> str:
        return gf4.values_to_pauli(self.checks[index])

    def embed_sent(self, e_sent) -> np.ndarray:
        """Pad an error on the transmitted qubits with identity ebit columns."""
        values = as_values(e_sent)
        if values.shape != (self.n_sent,):
            raise ValueError(f"expected length {self.n_sent}, got {values.shape}")
        full = np.zeros(self.n_total, dtype=np.uint8)
        full[: self.n_sent] = values
        return full


def syndrome(code: StabilizerCode, error) -> np.ndarray:
    """Syndrome of an error: entry c is +1 iff generator c commutes with it."""
    values = as_values(error)
    if values.shape != (code.n_total,):
        raise ValueError(
            f"error length {values.shape} does not match {code.n_total} columns"
        )
    parity = symplectic_products(values, code.checks)
    return (1 - 2 * parity.astype(np.int64)).astype(np.int8)


def quaternary_to_pauli(h: np.ndarray) -> np.ndarray:
    """Stack a k' x n quaternary check matrix into 2k' generator candidates.

    Returns the GF(4) matrix [h; omega*h]; the rows are read as Pauli
    strings via the standard identification.
    """
    h = np.asarray(h, dtype=np.uint8)
    if h.ndim != 2:
        raise ValueError("check matrix must be 2-D")
    return np.concatenate([h, gf4.MUL_TABLE[gf4.OMEGA, h]], axis=0)


def ea_canonicalize(gens: np.ndarray):
    """Bring generators to canonical form by symplectic Gram-Schmidt.

    Returns (canonical, pair_count): the first 2*pair_count rows form
    anticommuting pairs (row 2i with row 2i+1), the remaining rows commute
    with everything.  Every output row is a product of input rows, so the
    generated group is unchanged.  Raises ValueError on dependent input rows.
    """
    gens = np.asarray(gens, dtype=np.uint8)
    if gens.ndim != 2 or gens.shape[0] == 0:
        raise ValueError("generator matrix must be a nonempty 2-D array")
    if not gens.any(axis=1).all():
        raise ValueError("every generator row must be nonzero")
    reduced, _ = gf2_row_reduce(to_symplectic(gens))
    if reduced.shape[0] < gens.shape[0]:
        raise ValueError(
            f"generators are dependent: rank {reduced.shape[0]} < {gens.shape[0]} rows"
        )

    remaining = [row.copy() for row in gens]
    pairs = []
    commuting = []
    while remaining:
        g = remaining.pop(0)
        if not remaining:
            commuting.append(g)
            break
        parities = symplectic_products(g, np.array(remaining))
        hits = np.nonzero(parities)[0]
        if hits.size == 0:
            commuting.append(g)
            continue
        h = remaining.pop(int(hits[0]))
        # Sweep the pair out of every remaining generator:
        # r -> r * g^<r,h> * h^<r,g> commutes with both g and h.
        if remaining:
            rest = np.array(remaining)
            coeff_g = symplectic_products(h, rest)
            coeff_h = symplectic_products(g, rest)
            rest ^= coeff_g[:, None] * g
            rest ^= coeff_h[:, None] * h
            remaining = [row for row in rest]
        pairs.append((g, h))

    ordered = [row for pair in pairs for row in pair] + commuting
    return np.array(ordered, dtype=np.uint8), len(pairs)


def extend_with_ebits(gens: np.ndarray, pair_count: int) -> StabilizerCode:
    """Append ebit columns that make a canonicalized set commute.

    Pair row 2i gets X in ebit column i, pair row 2i+1 gets Z there; rows
    already commuting get identity.
    """
    gens = np.asarray(gens, dtype=np.uint8)
    m, n = gens.shape
    if pair_count < 0 or 2 * pair_count > m:
        raise ValueError(f"pair_count {pair_count} out of range for {m} rows")
    extended = np.zeros((m, n + pair_count), dtype=np.uint8)
    extended[:, :n] = gens
    for i in range(pair_count):
        extended[2 * i, n + i] = gf4.ONE
        extended[2 * i + 1, n + i] = gf4.OMEGA
    return StabilizerCode(extended, n_sent=n, n_ebits=pair_count)


def construction_b(circulant_first_row, rows_to_keep=None) -> StabilizerCode:
    """Dual-containing CSS code from a circulant: H0 = [C, C^T], rows kept.

    circulant_first_row is the first row of the (n/2 x n/2) binary circulant
    C (row i is the first row cyclically shifted right by i).  X-type
    generators come from the kept rows of H0, Z-type generators from the
    same rows with entries mapped to omega.
    """
    first = np.asarray(circulant_first_row, dtype=np.uint8) % 2
    if first.ndim != 1 or first.size == 0:
        raise ValueError("first row must be a nonempty bit vector")
    if not first.any():
        raise ValueError("circulant first row must be nonzero")
    size = first.size
    circ = np.array([np.roll(first, shift) for shift in range(size)], dtype=np.uint8)
    h0 = np.concatenate([circ, circ.T], axis=1)

    if rows_to_keep is None:
        keep = np.arange(size)
    else:
        keep = np.unique(np.asarray(list(rows_to_keep), dtype=np.intp))
        if keep.size == 0:
            raise ValueError("rows_to_keep must not be empty")
        if keep.min() < 0 or keep.max() >= size:
            raise ValueError(f"row indices must lie in 0..{size - 1}")
    h = h0[keep]

    product = (h.astype(np.int64) @ h.astype(np.int64).T) % 2
    if product.any():
        raise ValueError("kept rows are not dual-containing (H @ H^T != 0)")

    x_rows = h * gf4.ONE
    z_rows = h * gf4.OMEGA
    checks = np.concatenate([x_rows, z_rows], axis=0).astype(np.uint8)
    return StabilizerCode(checks, n_sent=2 * size, n_ebits=0)


def group_membership(error, code: StabilizerCode) -> bool:
    """Whether a phase-free Pauli lies in the group generated by the checks."""
    values = as_values(error)
    if values.shape != (code.n_total,):
        raise ValueError(
            f"error length {values.shape} does not match {code.n_total} columns"
        )
    reduced, pivots = code._span_basis
    return _in_gf2_span(reduced, pivots, to_symplectic(values))


def build_code_4_1_1() -> StabilizerCode:
    """The worked [[4, 1; 1]] EA code (one ebit column, held by the receiver)."""
    rows = ["XZXIX", "XXIXZ", "YZZXI", "ZXXYI"]
    checks = np.array([gf4.pauli_to_values(row) for row in rows])
    return StabilizerCode(checks, n_sent=4, n_ebits=1)
