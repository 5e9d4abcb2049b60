from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, strategies as st

from oracles import caratheodory_origin_in_hull, lp_origin_in_hull, sympy_rank, sympy_row_equivalent
from siegel.configuration import (
    Configuration,
    NotCenteredError,
    admissibility,
    augmented_rank,
    configurations_row_equivalent,
    gale_dual,
    gale_transform,
    siegel_membership,
    verify_gale_pair,
)
from siegel.corpus import COUNTER_V
from siegel.geometry import origin_in_hull
from siegel.rational import RationalMatrix

F = Fraction
COUNTER_A = Configuration.from_rows([[0, 0, 1, -1], [1, -1, 0, 0]])
EXAMPLE_V = RationalMatrix.from_rows([[0, 0, -1, 1, 0], [6, -9, 2, 0, 1]])


def test_example_admissible(example):
    rep = admissibility(example)
    assert rep.siegel and rep.weak_hyperbolicity and rep.centered
    assert rep.siegel_certificate.verify(example.columns)


def test_counterexample_violation():
    rep = admissibility(COUNTER_A)
    assert rep.siegel and not rep.weak_hyperbolicity
    I = rep.violating
    assert len(I) == 2 <= COUNTER_A.d
    assert rep.violating_certificate.verify(COUNTER_A.subtuple(I))
    # both {1,2} and {3,4} (1-based) violate; the first in lexicographic order is reported
    assert I == (0, 1)
    assert origin_in_hull(COUNTER_A.subtuple((2, 3))) is not None


def test_zero_dimensional():
    A = Configuration(0, 4, tuple(() for _ in range(4)))
    rep = admissibility(A)
    assert rep.siegel and rep.weak_hyperbolicity and rep.centered


def test_augmented_rank(example):
    assert augmented_rank(example, range(5)) == 3
    assert augmented_rank(example, [2, 3]) == 1
    assert augmented_rank(COUNTER_A, [0, 1]) == 2


def test_gale_transform_example(example):
    A = gale_transform(EXAMPLE_V)
    assert configurations_row_equivalent(A, example)
    assert sympy_row_equivalent(A.rows, example.rows)


def test_gale_transform_counterexample():
    A = gale_transform(RationalMatrix.from_rows(COUNTER_V))
    assert sympy_row_equivalent(A.rows, COUNTER_A.rows)
    assert not admissibility(A).admissible


def test_gale_transform_trivial():
    A = gale_transform(RationalMatrix.from_rows([[-1, 1]]))
    assert A.d == 0 and A.m == 2


def test_gale_transform_rank_check():
    with pytest.raises(ValueError):
        gale_transform(EXAMPLE_V, d=1)


def test_gale_dual_example(example):
    V = gale_dual(example)
    assert verify_gale_pair(example, V)
    assert verify_gale_pair(example, EXAMPLE_V)
    assert V == EXAMPLE_V


def test_gale_dual_segment():
    V = gale_dual(Configuration.from_rows([[1, -1]]))
    assert V.rows == 0 and V.cols == 2


def test_gale_dual_requires_centering():
    with pytest.raises(NotCenteredError):
        gale_dual(Configuration.from_rows([[1, -1, 1]]))


def test_double_gale_on_corpus(small_corpus):
    for A in small_corpus:
        V = gale_dual(A)
        assert verify_gale_pair(A, V)
        B = gale_transform(V)
        assert sympy_row_equivalent(B.rows, A.rows)


def test_siegel_membership_examples(example):
    assert siegel_membership(example, [1, 1, 1, 1, 1])[0]
    assert not siegel_membership(example, [1, 1, 0, 0, 1])[0]
    ok, cert = siegel_membership(example, [0, 1, 1, 1, 1])
    assert ok and cert.verify(example.columns)
    lam = cert.lam
    assert lam[0] == 0 and lam[1] == F(1, 2) and lam[2] + lam[3] == F(1, 3) and lam[4] == F(1, 6)


def test_siegel_membership_size_mismatch(example):
    with pytest.raises(ValueError):
        siegel_membership(example, [1, 1])


def test_threshold_controls_support(example):
    z = np.array([1e-12, 1, 1, 1, 1])
    from siegel.configuration import as_point
    assert as_point(z).support == (0, 1, 2, 3, 4)
    assert as_point(z, 1e-9).support == (1, 2, 3, 4)


@given(st.lists(st.booleans(), min_size=5, max_size=5),
       st.lists(st.floats(0.1, 10), min_size=5, max_size=5),
       st.lists(st.floats(0, 6.28), min_size=5, max_size=5))
def test_membership_depends_on_support_only(example, mask, mods, phases):
    z = np.array(mods) * np.exp(1j * np.array(phases)) * np.array(mask)
    ok, _ = siegel_membership(example, z)
    sup = [i for i in range(5) if mask[i]]
    expected = bool(sup) and caratheodory_origin_in_hull(example.subtuple(sup))
    assert ok == expected


def test_hull_subsets_have_full_augmented_rank(small_corpus):
    for A in small_corpus[:8]:
        for k in range(1, A.m + 1):
            for I in combinations(range(A.m), k):
                if lp_origin_in_hull(A.subtuple(I)):
                    assert k >= A.d + 1
                    assert augmented_rank(A, I) == A.d + 1
                    assert sympy_rank([list(c) + [1] for c in A.subtuple(I)]) == A.d + 1
