import numpy as np
import pytest

from siegel.configuration import Configuration
from siegel.simplicial import build_complex
from siegel.verification import (
    Stratum,
    cube_sample,
    jacobian_rank,
    orthant_sample,
    rigidity_check,
)


def test_rigidity_identity(example):
    r = rigidity_check(example, example, range(5), n_samples=3)
    assert r.passed and r.diagram_residual < 1e-10 and r.direct_residual < 1e-12


@pytest.mark.parametrize("perm", [[1, 0, 3, 2, 4], [2, 3, 0, 1, 4], [0, 1, 3, 2, 4]])
def test_rigidity_permutations(example, perm, gen):
    r = rigidity_check(example, example.permuted(perm), perm, n_samples=4, gen=gen)
    assert r.isomorphism and r.passed, r


def test_rigidity_rejects_non_isomorphism(example):
    with pytest.raises(ValueError):
        rigidity_check(example, example, [0, 2, 1, 3, 4])


def test_rigidity_rejects_inadmissible(example):
    bad = Configuration.from_rows([[0, 0, 1, -1], [1, -1, 0, 0]])
    with pytest.raises(ValueError):
        rigidity_check(bad, bad, range(4))


def test_segment_rank_zero():
    A = Configuration.from_rows([[1, -1]])
    c = jacobian_rank(A, Stratum("orthant"), [0.5, 0.5])
    assert c.expected_rank == 0 and c.rank == 0 and c.passed


def test_example_strata(example, gen):
    K = build_complex(example)
    for F in K.sorted_maximal():
        for _ in range(2):
            c = jacobian_rank(example, Stratum("cube", F), cube_sample(gen, example, F))
            assert c.passed and c.rank == 2 and c.margin >= 1e-4
    c = jacobian_rank(example, Stratum("orthant"), orthant_sample(gen, example))
    assert c.passed and c.rank == 2


def test_stratum_checks(example):
    with pytest.raises(ValueError):
        Stratum("sphere")
    with pytest.raises(ValueError):
        jacobian_rank(example, Stratum("cube", [0, 1]), [0.5, 0.5, 1, 1, 1])
    with pytest.raises(ValueError):
        jacobian_rank(example, Stratum("cube", [0, 2]), [0.5, 0.5, 0.5, 1, 1])
    with pytest.raises(ValueError):
        jacobian_rank(example, Stratum("orthant"), np.ones(5))


def test_corpus_ranks(small_corpus, gen):
    for A in small_corpus[:8]:
        F = build_complex(A).sorted_maximal()[0]
        c = jacobian_rank(A, Stratum("cube", F), cube_sample(gen, A, F))
        assert c.passed and c.rank == A.m - A.d - 1
