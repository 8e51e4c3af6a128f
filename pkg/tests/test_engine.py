import random
from dataclasses import replace

import pytest
from hypothesis import given
from hypothesis import strategies as st

from singularity_metric.engine import (
    InvalidMatrixError,
    PosteriorTable,
    batch_posterior,
    fast_metric,
    run,
    singularity_metric,
    trajectory,
)
from singularity_metric.evidence import AssessmentMatrix, Evidence, Sort, canonical_dataset, canonical_schedule
from oracles import exact_matrix_chains, exact_metric, random_matrix


def _table(finals):
    from singularity_metric.engine import Trajectory

    trs = tuple(Trajectory(f"S{i}", (f,)) for i, f in enumerate(finals, start=1))
    return PosteriorTable(tuple(t.sort_id for t in trs), ("Ev1",), trs, tuple(finals), 0.0)


class TestTrajectoryExamples:
    def test_holism(self):
        t = trajectory("S1", canonical_dataset())
        assert [round(p, 5) for p in t.posteriors] == [0.5, 0.75, 0.92308, 0.92308, 0.92308, 0.92308, 0.92308]
        assert t.final == pytest.approx(12 / 13, rel=1e-15)

    def test_proactivity_flat(self):
        assert trajectory("S7", canonical_dataset()).posteriors == (0.5,) * 7

    def test_learning(self):
        t = trajectory("S3", canonical_dataset())
        assert [round(p, 5) for p in t.posteriors] == [0.5, 0.9, 0.98077, 0.99897, 0.99897, 0.99897, 0.99897]

    def test_accepts_sort_object(self):
        m = canonical_dataset()
        assert trajectory(m.sorts[0], m) == trajectory("S1", m)

    def test_unknown_sort(self):
        with pytest.raises(KeyError):
            trajectory("S42", canonical_dataset())

    def test_invalid_matrix_rejected(self):
        with pytest.raises(InvalidMatrixError) as err:
            trajectory("S1", canonical_dataset().with_cell("S1", "Ev1", "magic"))
        assert len(err.value.violations) == 1


class TestAgainstExactOracle:
    def test_canonical_chain_matches_exact_rationals(self):
        m = canonical_dataset()
        table = run(m)
        exact = exact_matrix_chains(m)
        for tr in table.trajectories:
            assert tr.posteriors == pytest.approx([float(x) for x in exact[tr.sort_id]], rel=1e-13)
        assert table.metric == pytest.approx(float(exact_metric(m)), rel=1e-14)

    @given(st.integers(0, 2**32))
    def test_random_matrices(self, seed):
        m = random_matrix(random.Random(seed))
        table = run(m)
        exact = exact_matrix_chains(m)
        for tr in table.trajectories:
            assert tr.posteriors == pytest.approx([float(x) for x in exact[tr.sort_id]], rel=1e-12)


class TestBatch:
    def test_examples(self):
        m = canonical_dataset()
        assert batch_posterior("S1", m) == pytest.approx(12 / 13, rel=1e-15)
        assert batch_posterior("S9", m) == pytest.approx(0.6, rel=1e-15)
        assert batch_posterior("S8", m) == 0.5

    @given(st.integers(0, 2**32))
    def test_sequential_equals_batch(self, seed):
        m = random_matrix(random.Random(seed))
        for sid in m.sort_ids:
            assert trajectory(sid, m).final == pytest.approx(batch_posterior(sid, m), rel=1e-12)


class TestRun:
    def test_canonical_metric(self):
        t = run(canonical_dataset())
        assert t.metric == pytest.approx(0.8344988, abs=5e-8)
        assert t.finals == tuple(tr.final for tr in t.trajectories)
        assert t.cell("S2", "Ev1") == pytest.approx(0.85)

    def test_single_sort_all_irrelevant(self):
        m = AssessmentMatrix(
            (Sort("S1", "only"),),
            tuple(Evidence(f"Ev{k}", "e") for k in (1, 2, 3)),
            {("S1", f"Ev{k}"): "irrelevant" for k in (1, 2, 3)},
            canonical_schedule(),
        )
        assert run(m).metric == 0.5

    def test_no_evidence_leaves_prior(self):
        m = AssessmentMatrix((Sort("S1", "a"), Sort("S2", "b")), (), {}, canonical_schedule())
        table = run(m)
        assert table.finals == (0.5, 0.5)
        assert table.metric == 0.5

    def test_invalid_matrix_carries_violations(self):
        m = canonical_dataset()
        cells = dict(m.cells)
        del cells[("S3", "Ev5")]
        with pytest.raises(InvalidMatrixError) as err:
            run(replace(m, cells=cells))
        assert err.value.violations == ["missing cell (S3, Ev5)"]

    def test_deterministic(self):
        assert run(canonical_dataset()) == run(canonical_dataset())

    def test_fast_metric_agrees(self):
        m = canonical_dataset()
        assert fast_metric(m) == run(m).metric

    def test_weighted_metric(self):
        m = canonical_dataset()
        t = run(m, weights=[1] * 9)
        assert t.metric == pytest.approx(run(m).metric, rel=1e-15)
        t2 = run(m, weights=[1] + [0] * 8)
        assert t2.metric == pytest.approx(12 / 13)
        with pytest.raises(ValueError):
            run(m, weights=[1, 2])

    @given(st.integers(0, 2**32))
    def test_bounds_and_monotone(self, seed):
        m = random_matrix(random.Random(seed))
        t = run(m)
        for tr in t.trajectories:
            seq = (0.5, *tr.posteriors)
            assert all(b >= a for a, b in zip(seq, seq[1:]))
        assert min(t.finals) - 1e-15 <= t.metric <= max(t.finals) + 1e-15
        assert 0.5 <= t.metric < 1

    @given(st.integers(0, 2**32), st.data())
    def test_irrelevant_column_changes_nothing(self, seed, data):
        m = random_matrix(random.Random(seed))
        pos = data.draw(st.integers(0, len(m.evidences)))
        new = Evidence("EvX", "nothing")
        cells = dict(m.cells)
        cells.update({(sid, "EvX"): "irrelevant" for sid in m.sort_ids})
        m2 = replace(m, evidences=m.evidences[:pos] + (new,) + m.evidences[pos:], cells=cells)
        t, t2 = run(m), run(m2)
        assert t2.finals == t.finals
        assert t2.metric == t.metric

    @given(st.integers(0, 2**32), st.randoms(use_true_random=False))
    def test_permutation_invariance(self, seed, rnd):
        m = random_matrix(random.Random(seed))
        evs = list(m.evidences)
        rnd.shuffle(evs)
        shuffled = replace(m, evidences=tuple(evs))
        for a, b in zip(run(m).finals, run(shuffled).finals):
            assert b == pytest.approx(a, rel=1e-12)


class TestSingularityMetric:
    def test_displayed_finals(self):
        finals = [0.92308, 0.999997, 0.99897, 0.99982, 0.99351, 0.99512, 0.5, 0.5, 0.6]
        assert singularity_metric(_table(finals)) == pytest.approx(0.8344997, abs=5e-8)

    def test_constant_finals(self):
        assert singularity_metric(_table([0.5] * 9)) == 0.5
        assert singularity_metric(_table([1.0] * 4)) == 1.0
