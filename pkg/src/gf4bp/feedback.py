"""Feedback outer loops around the standard decoder.

Two strategies are implemented on top of plain BP:

* pc08: random perturbation of the priors of every qubit touching a chosen
  frustrated check (non-identity entries scaled by 1 + delta * U[0,1] and
  renormalized), then BP is restarted for t_pert iterations.
* enhanced: the prior of one chosen qubit of a frustrated check is replaced
  by a distribution built from the check entry, the frustration pattern and
  the channel, biasing the qubit toward (or away from) anticommuting with
  the check entry.

Each round restarts BP from scratch with the adjusted priors.  A round that
converges ends the procedure (the adjusted prior is not restored).  Any
other round is rolled back bit-exactly: if the chosen check is still
frustrated another qubit of the same check is tried next, and if the check
became satisfied but the full syndrome still mismatches, the round's output
replaces the working output and another frustrated check is chosen.  Every
tried qubit entry counts against the n_a budget.
"""

from dataclasses import dataclass

import numpy as np

from .decoder import DecodeOutcome, TannerGraph, decode
from .stabilizer import StabilizerCode

STRATEGIES = ("standard", "pc08", "enhanced")


def default_n_a(n_sent: int) -> int:
    """Feedback budget by code length: n/5, n/10 or n/40, rounded down."""
    if n_sent < 300:
        return n_sent // 5
    if n_sent < 1000:
        return n_sent // 10
    return n_sent // 40


@dataclass(frozen=True)
class FeedbackConfig:
    strategy: str
    t_pert: int = 40
    n_a: int | None = None  # None: default_n_a(code length)
    delta: float = 0.1

    def __post_init__(self):
        if self.strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {self.strategy!r}")
        if self.t_pert < 1:
            raise ValueError("t_pert must be at least 1")
        if self.n_a is not None and self.n_a < 0:
            raise ValueError("n_a must be nonnegative")
        if self.delta < 0:
            raise ValueError("delta must be nonnegative")


@dataclass
class AdjustmentRecord:
    """Audit trail of one feedback round (replayable)."""

    check: int
    qubit: int
    qubits_touched: np.ndarray
    applied: np.ndarray  # (len(qubits_touched), 4) priors installed this round
    outcome: str  # "converged" | "check_satisfied" | "restored"
    iterations: int = 0


def frustrated_checks(code: StabilizerCode, target, e_out, graph=None) -> np.ndarray:
    """Indices of checks whose target syndrome disagrees with e_out's."""
    if graph is None:
        graph = TannerGraph(code)
    target = np.asarray(target, dtype=np.int64)
    signs = graph.syndrome_signs(np.asarray(e_out, dtype=np.uint8))
    return np.nonzero(signs != target)[0]


def enhanced_reset(entry: int, s_c: int, sc_dot_eout: int, p_identity: float) -> np.ndarray:
    """Reset distribution for a qubit of a frustrated check.

    entry is the check's GF(4) symbol on the qubit (nonzero).  When
    s_c = -1 and the output commutes with the check, the qubit is biased
    toward anticommuting with the entry; in the opposite frustration pattern
    it is biased toward commuting.
    """
    if entry not in (1, 2, 3):
        raise ValueError("check entry on the chosen qubit must be X, Z or Y")
    if (s_c, sc_dot_eout) not in ((-1, 1), (1, -1)):
        raise ValueError(
            f"({s_c}, {sc_dot_eout}) is not a frustrated pattern; "
            "expected (-1, +1) or (+1, -1)"
        )
    if s_c == -1:
        share_identity = (1.0 - p_identity) / 2.0
        share_others = p_identity / 2.0
    else:
        share_identity = p_identity / 2.0
        share_others = (1.0 - p_identity) / 2.0
    reset = np.full(4, share_others)
    reset[0] = share_identity
    reset[entry] = share_identity
    return reset


def pc08_perturb(prior, delta: float, rng: np.random.Generator) -> np.ndarray:
    """Scale the non-identity entries by 1 + delta * U[0,1], renormalize."""
    if delta < 0:
        raise ValueError("delta must be nonnegative")
    out = np.asarray(prior, dtype=float).copy()
    out[1:] *= 1.0 + delta * rng.random(3)
    return out / out.sum()


def feedback_round(
    code: StabilizerCode,
    target,
    priors: np.ndarray,
    check: int,
    qubit: int,
    config: FeedbackConfig,
    rng: np.random.Generator | None = None,
    graph: TannerGraph | None = None,
    channel_p_identity: np.ndarray | None = None,
    current_e_out: np.ndarray | None = None,
    on_iteration=None,
):
    """Run one feedback adjustment for (check, qubit) and a fresh BP restart.

    Returns (outcome, priors_after, record).  priors is not modified;
    priors_after is the adjusted matrix when the round converged (the
    terminal readout keeps it) and the original otherwise.
    """
    if graph is None:
        graph = TannerGraph(code)
    if config.strategy not in ("pc08", "enhanced"):
        raise ValueError("feedback rounds need strategy pc08 or enhanced")
    target = np.asarray(target, dtype=np.int64)
    priors = np.asarray(priors, dtype=float)

    if config.strategy == "enhanced":
        if current_e_out is None:
            raise ValueError("enhanced rounds need the current decoder output")
        entry_positions = graph.check_qubits(check)
        slot = np.nonzero(entry_positions == qubit)[0]
        if slot.size == 0:
            raise ValueError(f"qubit {qubit} is not connected to check {check}")
        entry = int(graph.check_entries(check)[slot[0]])
        s_c = int(target[check])
        sc_dot = int(graph.syndrome_signs(current_e_out)[check])
        p_identity = (
            float(channel_p_identity[qubit])
            if channel_p_identity is not None
            else float(priors[qubit, 0])
        )
        touched = np.array([qubit])
        applied = enhanced_reset(entry, s_c, sc_dot, p_identity)[None, :]
    else:
        if rng is None:
            raise ValueError("pc08 rounds need a random stream")
        touched = graph.check_qubits(check).copy()
        applied = np.array(
            [pc08_perturb(priors[q], config.delta, rng) for q in touched]
        )

    adjusted = priors.copy()
    adjusted[touched] = applied
    outcome = decode(
        code,
        target,
        adjusted,
        max_iter=config.t_pert,
        graph=graph,
        on_iteration=on_iteration,
    )

    if outcome.converged:
        verdict = "converged"
        priors_after = adjusted
    elif int(graph.syndrome_signs(outcome.error)[check]) != int(target[check]):
        verdict = "restored"
        priors_after = priors
    else:
        verdict = "check_satisfied"
        priors_after = priors
    record = AdjustmentRecord(
        check=int(check),
        qubit=int(qubit),
        qubits_touched=touched,
        applied=applied,
        outcome=verdict,
        iterations=outcome.iterations,
    )
    return outcome, priors_after, record


def feedback_decode(
    code: StabilizerCode,
    target,
    priors: np.ndarray,
    config: FeedbackConfig,
    max_iter: int = 90,
    rng: np.random.Generator | None = None,
    graph: TannerGraph | None = None,
    on_iteration=None,
):
    """Standard BP followed by up to n_a feedback adjustments.

    Returns (outcome, records).  The outcome's iteration count accumulates
    the initial run and every feedback round; failure (converged=False) is a
    normal result once the budget is exhausted.
    """
    if config.strategy not in ("pc08", "enhanced"):
        raise ValueError("feedback_decode needs strategy pc08 or enhanced")
    if graph is None:
        graph = TannerGraph(code)
    if rng is None:
        rng = np.random.default_rng(0)
    target = np.asarray(target, dtype=np.int64)
    priors = np.asarray(priors, dtype=float)
    p_identity = priors[:, 0].copy()

    outcome = decode(
        code, target, priors, max_iter=max_iter, graph=graph, on_iteration=on_iteration
    )
    total_iterations = outcome.iterations
    records: list[AdjustmentRecord] = []
    if outcome.converged:
        return outcome, records

    budget = config.n_a if config.n_a is not None else default_n_a(graph.n_qubits)
    used = 0
    current = priors
    e_out = outcome.error
    while used < budget:
        frustrated = frustrated_checks(code, target, e_out, graph=graph)
        if frustrated.size == 0:
            break
        check = int(rng.choice(frustrated))
        candidates = list(graph.check_qubits(check))
        if not candidates:
            break  # frustrated check with no sender qubits can never be fixed
        rng.shuffle(candidates)
        satisfied = False
        for qubit in candidates:
            if used >= budget:
                break
            used += 1
            round_out, current, record = feedback_round(
                code,
                target,
                current,
                check,
                int(qubit),
                config,
                rng=rng,
                graph=graph,
                channel_p_identity=p_identity,
                current_e_out=e_out,
                on_iteration=on_iteration,
            )
            total_iterations += round_out.iterations
            records.append(record)
            if record.outcome == "converged":
                return (
                    DecodeOutcome(
                        error=round_out.error,
                        converged=True,
                        iterations=total_iterations,
                    ),
                    records,
                )
            if record.outcome == "check_satisfied":
                e_out = round_out.error
                satisfied = True
                break
        if not satisfied and used >= budget:
            break
    return (
        DecodeOutcome(error=e_out, converged=False, iterations=total_iterations),
        records,
    )
