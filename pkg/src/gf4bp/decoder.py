"""GF(4) sum-product decoding on a stabilizer code's Tanner graph.

Messages are probability 4-vectors over the error symbols (I, X, Z, Y),
updated with a flooding schedule: all check-to-qubit messages, then all
qubit-to-check messages and beliefs, then a hard decision whose syndrome is
tested against the target every iteration.  Ebit columns are excluded from
the graph since receiver-held qubits are error-free.

A check constrains the GF(4) inner product of the incident symbols with the
row entries to the trace-0 classes {0, 1} (syndrome +1) or the trace-1
classes {omega, omega_bar} (syndrome -1).  check_update() evaluates the
message by the direct Klein-group convolution of the mapped neighbor
distributions.  Because the trace is additive, the same message also equals
(1 + s_c * kappa * D) / 4 with kappa the commute sign of the candidate
symbol against the row entry and D the product of (commute mass - anticommute
mass) over the other neighbors; the vectorized inner loop of decode() uses
that form, and the two are tested against each other.

All probability vectors are clamped to MSG_FLOOR before normalization, which
prevents the all-zero product collapse.
"""

from dataclasses import dataclass

import numpy as np

from . import gf4
from .stabilizer import StabilizerCode

MSG_FLOOR = 1e-30

#: KAPPA[s, e] = +1 if symbol e commutes with row entry s, else -1.
KAPPA = np.array(
    [
        [1.0 - 2.0 * gf4.TRACE_TABLE[gf4.MUL_TABLE[e, gf4.CONJ_TABLE[s]]] for e in range(4)]
        for s in range(4)
    ]
)

_XOR_IDX = np.array([[x ^ y for y in range(4)] for x in range(4)])


def _normalize(arr: np.ndarray) -> np.ndarray:
    arr = np.maximum(arr, MSG_FLOOR)
    return arr / arr.sum(axis=-1, keepdims=True)


def _exclusive_prod(a: np.ndarray) -> np.ndarray:
    """Per-slot product over axis 1 excluding the slot itself."""
    pref = np.ones_like(a)
    suf = np.ones_like(a)
    if a.shape[1] > 1:
        np.cumprod(a[:, :-1], axis=1, out=pref[:, 1:])
        np.cumprod(a[:, :0:-1], axis=1, out=suf[:, -2::-1])
    return pref * suf


class TannerGraph:
    """Edge structure between checks and transmitted qubits.

    Edges exist where a check row has a nonzero entry on a sender column.
    Edges are stored check-major; padded index tables allow the flooding
    updates to run as dense numpy operations (pad slots point at a sentinel
    edge whose message is all-ones).
    """

    def __init__(self, code: StabilizerCode):
        sent = code.checks[:, : code.n_sent]
        self.n_checks, self.n_qubits = sent.shape
        check_idx, qubit_idx = np.nonzero(sent)
        self.edge_check = check_idx.astype(np.intp)
        self.edge_qubit = qubit_idx.astype(np.intp)
        self.edge_entry = sent[check_idx, qubit_idx].astype(np.intp)
        n_edges = self.edge_check.size
        self.n_edges = n_edges

        check_deg = np.bincount(self.edge_check, minlength=self.n_checks)
        self.check_deg = check_deg
        self._check_start = np.concatenate([[0], np.cumsum(check_deg)]).astype(np.intp)
        self._dmax = int(check_deg.max()) if n_edges else 0
        self.check_slots = np.full((self.n_checks, self._dmax), n_edges, dtype=np.intp)
        pos_in_check = np.arange(n_edges) - self._check_start[self.edge_check]
        self.check_slots[self.edge_check, pos_in_check] = np.arange(n_edges)
        self._edge_check_slot = self.edge_check * self._dmax + pos_in_check

        qubit_deg = np.bincount(self.edge_qubit, minlength=self.n_qubits)
        self.qubit_deg = qubit_deg
        self._cmax = int(qubit_deg.max()) if n_edges else 0
        order = np.argsort(self.edge_qubit, kind="stable")
        starts = np.concatenate([[0], np.cumsum(qubit_deg)]).astype(np.intp)
        pos_sorted = np.arange(n_edges) - starts[self.edge_qubit[order]]
        self.qubit_slots = np.full((self.n_qubits, self._cmax), n_edges, dtype=np.intp)
        self.qubit_slots[self.edge_qubit[order], pos_sorted] = order
        pos_in_qubit = np.empty(n_edges, dtype=np.intp)
        pos_in_qubit[order] = pos_sorted
        self._edge_qubit_slot = self.edge_qubit * self._cmax + pos_in_qubit

        self.kappa = KAPPA[self.edge_entry]

        self._hx = (sent & 1).astype(np.int64)
        self._hz = (sent >> 1).astype(np.int64)

    def check_qubits(self, check: int) -> np.ndarray:
        """Sender qubits incident to a check, in column order."""
        lo, hi = self._check_start[check], self._check_start[check + 1]
        return self.edge_qubit[lo:hi]

    def check_entries(self, check: int) -> np.ndarray:
        lo, hi = self._check_start[check], self._check_start[check + 1]
        return self.edge_entry[lo:hi]

    def syndrome_signs(self, e_values: np.ndarray) -> np.ndarray:
        """Syndrome (+1/-1 per check) of an error on the transmitted qubits."""
        ex = (e_values & 1).astype(np.int64)
        ez = (e_values >> 1).astype(np.int64)
        parity = (self._hx @ ez + self._hz @ ex) % 2
        return 1 - 2 * parity


@dataclass
class DecodeOutcome:
    """Hard decision on the transmitted qubits plus convergence bookkeeping.

    iterations counts BP iterations actually run (a decode that matches the
    syndrome at iteration t reports t); for feedback decoding it accumulates
    over all rounds.
    """

    error: np.ndarray
    converged: bool
    iterations: int

    @property
    def error_pauli(self) -> str:
        return gf4.values_to_pauli(self.error)


def klein_convolve(p: np.ndarray, t: np.ndarray) -> np.ndarray:
    """Convolution of two distributions under GF(4) addition."""
    return (np.asarray(p)[None, :] * np.asarray(t)[_XOR_IDX]).sum(axis=1)


def check_update(target_entry, other_entries, other_messages, s_c) -> np.ndarray:
    """Check-to-qubit message by direct GF(4) convolution.

    Maps each incoming distribution over E_q' to the distribution of
    x_q' = E_q'_hat * conj(S_cq'_hat), convolves them under GF(4) addition
    into the partial-sum distribution p, splits p by syndrome into the
    allowed trace classes and reads the message out through the target
    entry's bijection.
    """
    if s_c not in (1, -1):
        raise ValueError(f"syndrome value must be +1 or -1, got {s_c}")
    if target_entry not in (1, 2, 3):
        raise ValueError("check entry on the target qubit must be nonzero")
    p = np.array([1.0, 0.0, 0.0, 0.0])
    for entry, message in zip(other_entries, other_messages, strict=True):
        if entry not in (1, 2, 3):
            raise ValueError("check entries on neighbor qubits must be nonzero")
        t = np.empty(4)
        t[gf4.MUL_TABLE[np.arange(4), gf4.CONJ_TABLE[entry]]] = np.asarray(message, float)
        p = klein_convolve(p, t)
    comm = (p[0] + p[1]) / 2.0
    anti = (p[2] + p[3]) / 2.0
    if s_c == 1:
        p_q = np.array([comm, comm, anti, anti])
    else:
        p_q = np.array([anti, anti, comm, comm])
    return _normalize(p_q[gf4.MUL_TABLE[np.arange(4), gf4.CONJ_TABLE[target_entry]]])


def qubit_update(prior, incoming) -> np.ndarray:
    """Qubit-to-check message: prior times all other incoming messages."""
    out = np.asarray(prior, float).copy()
    for message in incoming:
        out *= np.asarray(message, float)
    return _normalize(out)


def compute_beliefs(priors, incoming_per_qubit) -> np.ndarray:
    """Beliefs b_q = normalize(prior_q * prod of incoming check messages)."""
    priors = np.asarray(priors, float)
    beliefs = priors.copy()
    for q, incoming in enumerate(incoming_per_qubit):
        for message in incoming:
            beliefs[q] *= np.asarray(message, float)
    return _normalize(beliefs)


def hard_decision(beliefs: np.ndarray) -> np.ndarray:
    """Per-qubit argmax with deterministic tie-break in the order I, X, Z, Y."""
    return np.argmax(beliefs, axis=-1).astype(np.uint8)


def _vector_check_messages(
    graph: TannerGraph, msg_q2c: np.ndarray, sigma_edge: np.ndarray
) -> np.ndarray:
    """All check-to-qubit messages at once via the parity form."""
    commute_mass = msg_q2c[:, 0] + msg_q2c[np.arange(graph.n_edges), graph.edge_entry]
    d = 2.0 * commute_mass - msg_q2c.sum(axis=1)
    d_ext = np.append(d, 1.0)
    padded = d_ext[graph.check_slots]
    d_excl = _exclusive_prod(padded).reshape(-1)[graph._edge_check_slot]
    return _normalize(0.25 * (1.0 + (sigma_edge * d_excl)[:, None] * graph.kappa))


def decode(
    code: StabilizerCode,
    target_syndrome,
    priors,
    max_iter: int = 90,
    graph: TannerGraph | None = None,
    on_iteration=None,
    halt: bool = True,
) -> DecodeOutcome:
    """Run flooding sum-product decoding against a target syndrome.

    priors has shape (n_sent, 4).  Stops as soon as the hard decision's
    syndrome matches the target (unless halt=False, which always runs
    max_iter iterations); non-convergence is a normal outcome, reported in
    the converged flag.  on_iteration(t, beliefs), if given, is called once
    per iteration with freshly allocated belief arrays.
    """
    if graph is None:
        graph = TannerGraph(code)
    target = np.asarray(target_syndrome, dtype=np.int64).ravel()
    if target.shape != (graph.n_checks,):
        raise ValueError(
            f"syndrome length {target.shape} does not match {graph.n_checks} checks"
        )
    if not np.all(np.abs(target) == 1):
        raise ValueError("syndrome entries must be +1 or -1")
    if max_iter < 1:
        raise ValueError("max_iter must be at least 1")
    pri = np.asarray(priors, dtype=float)
    if pri.shape != (graph.n_qubits, 4):
        raise ValueError(
            f"priors shape {pri.shape} does not match ({graph.n_qubits}, 4)"
        )
    pri = _normalize(pri)

    sigma_edge = target.astype(float)[graph.edge_check]
    ones_row = np.ones((1, 4))
    msg_q2c = pri[graph.edge_qubit]
    e_hat = hard_decision(pri)
    matched = False
    for iteration in range(1, max_iter + 1):
        m_c2q = _vector_check_messages(graph, msg_q2c, sigma_edge)
        m_ext = np.concatenate([m_c2q, ones_row], axis=0)
        gathered = m_ext[graph.qubit_slots]
        beliefs = _normalize(pri * gathered.prod(axis=1))
        extrinsic = pri[:, None, :] * _exclusive_prod(gathered)
        msg_q2c = _normalize(extrinsic.reshape(-1, 4)[graph._edge_qubit_slot])
        e_hat = hard_decision(beliefs)
        if on_iteration is not None:
            on_iteration(iteration, beliefs)
        matched = bool(np.array_equal(graph.syndrome_signs(e_hat), target))
        if halt and matched:
            return DecodeOutcome(error=e_hat, converged=True, iterations=iteration)
    return DecodeOutcome(error=e_hat, converged=matched, iterations=max_iter)
