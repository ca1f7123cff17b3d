import numpy as np
import pytest

from gf4bp.channel import DepolarizingChannel, priors as channel_priors, substream
from gf4bp.decoder import TannerGraph, decode
from gf4bp.feedback import (
    FeedbackConfig,
    default_n_a,
    enhanced_reset,
    feedback_decode,
    feedback_round,
    frustrated_checks,
    pc08_perturb,
)
from gf4bp.stabilizer import build_code_4_1_1, syndrome

TARGET = np.array([-1, 1, 1, 1])


@pytest.fixture
def code411():
    return build_code_4_1_1()


@pytest.fixture
def priors411():
    return channel_priors(DepolarizingChannel(0.1), 4)


def test_default_n_a_tiers():
    assert default_n_a(126) == 25
    assert default_n_a(810) == 81
    assert default_n_a(1720) == 43
    assert default_n_a(4) == 0


def test_config_validation():
    with pytest.raises(ValueError):
        FeedbackConfig(strategy="nope")
    with pytest.raises(ValueError):
        FeedbackConfig(strategy="pc08", t_pert=0)
    with pytest.raises(ValueError):
        FeedbackConfig(strategy="pc08", n_a=-1)
    with pytest.raises(ValueError):
        FeedbackConfig(strategy="pc08", delta=-0.5)


def test_frustrated_checks(code411):
    # a matching output frustrates nothing
    e = code411.embed_sent("IIZX")
    assert frustrated_checks(code411, TARGET, e[:4]).size == 0
    # IYII has syndrome (-1,-1,-1,-1): checks 2..4 (0-based 1..3) disagree
    iyii = np.array([0, 3, 0, 0], dtype=np.uint8)
    assert frustrated_checks(code411, TARGET, iyii).tolist() == [1, 2, 3]
    # the all-identity output only violates the first check
    assert frustrated_checks(code411, TARGET, np.zeros(4, dtype=np.uint8)).tolist() == [0]


def test_enhanced_reset_branches():
    # entry X, s_c=-1, output commutes: bias toward anticommuting
    reset = enhanced_reset(1, -1, 1, 0.9)
    assert np.allclose(reset, [0.05, 0.05, 0.45, 0.45])
    # entry X, s_c=+1, output anticommutes: bias toward commuting
    reset = enhanced_reset(1, 1, -1, 0.9)
    assert np.allclose(reset, [0.45, 0.45, 0.05, 0.05])
    # entry Z shares with Z instead of X
    reset = enhanced_reset(2, -1, 1, 0.9)
    assert np.allclose(reset, [0.05, 0.45, 0.05, 0.45])


def test_enhanced_reset_properties():
    rng = np.random.default_rng(51)
    for _ in range(50):
        entry = int(rng.integers(1, 4))
        s_c, dot = (-1, 1) if rng.random() < 0.5 else (1, -1)
        p_identity = float(rng.random())
        reset = enhanced_reset(entry, s_c, dot, p_identity)
        assert abs(reset.sum() - 1.0) < 1e-15
        assert reset[0] == reset[entry]
        others = [i for i in (1, 2, 3) if i != entry]
        assert reset[others[0]] == reset[others[1]]
        if s_c == -1 and p_identity > 0.5:
            assert reset[others[0]] + reset[others[1]] == pytest.approx(p_identity)
            assert reset[others[0]] + reset[others[1]] > 0.5


def test_enhanced_reset_rejects_bad_inputs():
    with pytest.raises(ValueError):
        enhanced_reset(0, -1, 1, 0.9)
    with pytest.raises(ValueError):
        enhanced_reset(1, 1, 1, 0.9)
    with pytest.raises(ValueError):
        enhanced_reset(1, -1, -1, 0.9)


def test_pc08_perturb():
    prior = np.array([0.9, 1 / 30, 1 / 30, 1 / 30])
    rng = substream(1, 2, 3)
    assert np.allclose(pc08_perturb(prior, 0.0, rng), prior)

    class OnesRng:
        def random(self, size):
            return np.ones(size)

    perturbed = pc08_perturb(prior, 1.0, OnesRng())
    expected = np.array([0.9, 1 / 15, 1 / 15, 1 / 15]) / 1.1
    assert np.allclose(perturbed, expected)

    rng = substream(5, 6)
    for _ in range(20):
        out = pc08_perturb(prior, 0.7, rng)
        assert out[0] < prior[0]  # identity mass shrinks after renormalizing
        assert abs(out.sum() - 1.0) < 1e-12


def test_enhanced_round_case_study(code411, priors411):
    # standard BP fails; the detected error IYII leaves checks 2..4
    # frustrated, and resetting qubit 4 via frustrated check 2 converges to
    # the true error IIZX in three iterations
    first = decode(code411, TARGET, priors411, max_iter=88)
    assert not first.converged
    assert first.error_pauli == "IYII"
    assert frustrated_checks(code411, TARGET, first.error).tolist() == [1, 2, 3]
    config = FeedbackConfig(strategy="enhanced", t_pert=40)
    outcome, priors_after, record = feedback_round(
        code411, TARGET, priors411, check=1, qubit=3, config=config,
        channel_p_identity=priors411[:, 0], current_e_out=first.error,
    )
    assert outcome.converged
    assert outcome.iterations == 3
    assert outcome.error_pauli == "IIZX"
    assert record.outcome == "converged"
    assert np.allclose(priors_after[3], [0.45, 0.45, 0.05, 0.05])
    assert np.allclose(priors_after[:3], priors411[:3])


def test_pc08_round_case_study_fails(code411, priors411):
    first = decode(code411, TARGET, priors411, max_iter=90)
    config = FeedbackConfig(strategy="pc08", t_pert=40, delta=1.0)
    failures = 0
    for seed in range(40):
        outcome, priors_after, record = feedback_round(
            code411, TARGET, priors411, check=1, qubit=0, config=config,
            rng=substream(seed, 0), current_e_out=first.error,
        )
        if not outcome.converged:
            failures += 1
            assert priors_after is priors411 or np.array_equal(priors_after, priors411)
    assert failures == 40
    # the pc08 round perturbs every qubit of the chosen check
    _, _, record = feedback_round(
        code411, TARGET, priors411, check=1, qubit=0, config=config,
        rng=substream(0, 0), current_e_out=first.error,
    )
    assert record.qubits_touched.tolist() == [0, 1, 3]


def test_failed_round_restores_priors_bit_exactly(code411, priors411):
    first = decode(code411, TARGET, priors411, max_iter=90)
    config = FeedbackConfig(strategy="pc08", t_pert=5, delta=1.0)
    before = priors411.copy()
    _, priors_after, record = feedback_round(
        code411, TARGET, priors411, check=1, qubit=0, config=config,
        rng=substream(8, 1), current_e_out=first.error,
    )
    assert record.outcome in ("restored", "check_satisfied")
    assert np.array_equal(priors_after, before)
    assert np.array_equal(priors411, before)


def test_feedback_decode_zero_budget_equals_standard(code411, priors411):
    plain = decode(code411, TARGET, priors411, max_iter=90)
    for strategy in ("pc08", "enhanced"):
        config = FeedbackConfig(strategy=strategy, n_a=0)
        outcome, records = feedback_decode(
            code411, TARGET, priors411, config, max_iter=90, rng=substream(0, 0)
        )
        assert records == []
        assert outcome.converged == plain.converged
        assert outcome.iterations == plain.iterations
        assert outcome.error.tolist() == plain.error.tolist()


def test_feedback_decode_enhanced_finds_valid_output(code411, priors411):
    config = FeedbackConfig(strategy="enhanced", t_pert=40, n_a=12)
    outcome, records = feedback_decode(
        code411, TARGET, priors411, config, max_iter=90, rng=substream(123, 0)
    )
    assert outcome.converged
    full = code411.embed_sent(outcome.error)
    assert syndrome(code411, full).tolist() == TARGET.tolist()
    assert len(records) <= 12
    assert outcome.iterations == 90 + sum(r.iterations for r in records)


def test_feedback_decode_budget_respected(code411, priors411):
    config = FeedbackConfig(strategy="pc08", t_pert=10, n_a=5, delta=1.0)
    outcome, records = feedback_decode(
        code411, TARGET, priors411, config, max_iter=90, rng=substream(9, 9)
    )
    assert len(records) <= 5
    assert outcome.iterations == 90 + sum(r.iterations for r in records)


def test_feedback_decode_replayable(code411, priors411):
    config = FeedbackConfig(strategy="pc08", t_pert=15, n_a=6, delta=0.5)

    def run():
        return feedback_decode(
            code411, TARGET, priors411, config, max_iter=90, rng=substream(77, 3)
        )

    (out_a, rec_a), (out_b, rec_b) = run(), run()
    assert out_a.error.tolist() == out_b.error.tolist()
    assert out_a.iterations == out_b.iterations
    assert len(rec_a) == len(rec_b)
    for a, b in zip(rec_a, rec_b):
        assert (a.check, a.qubit, a.outcome, a.iterations) == (
            b.check, b.qubit, b.outcome, b.iterations,
        )
        assert np.array_equal(a.applied, b.applied)


def test_feedback_decode_requires_feedback_strategy(code411, priors411):
    with pytest.raises(ValueError):
        feedback_decode(
            code411, TARGET, priors411, FeedbackConfig(strategy="standard"),
            rng=substream(0, 0),
        )
