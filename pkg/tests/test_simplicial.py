import pytest

from oracles import brute_force_complex, scipy_hull
from siegel.configuration import Configuration, gale_dual
from siegel.simplicial import (
    SimplicialComplex,
    build_complex,
    link,
    realize_polytope,
    star,
    verify_isomorphism,
)

CYCLE = SimplicialComplex.from_faces(5, [[0, 2], [2, 1], [1, 3], [3, 0]])


def test_zero_dimensional_simplex_boundary():
    K = build_complex(Configuration(0, 4, tuple(() for _ in range(4))))
    assert K.sorted_maximal() == [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]]


def test_example_is_four_cycle(example):
    K = build_complex(example)
    assert K == CYCLE
    assert 4 not in K.vertices
    assert set(K.faces()) == brute_force_complex(example.float_columns, 5)


def test_segment():
    K = build_complex(Configuration.from_rows([[1, -1]]))
    assert K.maximal_faces == frozenset({frozenset()})


def test_requires_admissible():
    with pytest.raises(ValueError):
        build_complex(Configuration.from_rows([[0, 0, 1, -1], [1, -1, 0, 0]]))


def test_complex_matches_brute_force_on_corpus(small_corpus):
    for A in small_corpus:
        K = build_complex(A)
        faces = set(K.faces())
        assert faces == brute_force_complex(A.float_columns, A.m)
        assert all(len(f) <= A.m - A.d - 1 for f in faces)
        for f in faces:
            assert all(f - {i} in faces for i in f)


def test_link_and_star(example):
    assert link(CYCLE, [0]) == SimplicialComplex.from_faces(5, [[2], [3]])
    assert link(CYCLE, []) == CYCLE
    K = build_complex(example)
    lk = link(K, [0])
    h = realize_polytope(example).hull
    facets_at_1 = [f for f in h.facet_vertex_sets() if 0 in f]
    assert lk.vertices == frozenset().union(*facets_at_1) - {0} == {2, 3}
    st_ = star(CYCLE, [0])
    assert st_.sorted_maximal() == [[0, 2], [0, 3]]
    assert frozenset({2}) in st_  # downward closure
    with pytest.raises(ValueError):
        link(CYCLE, [0, 1])


def test_isomorphisms(example):
    K = build_complex(example)
    assert verify_isomorphism(K, K, [0, 1, 2, 3, 4])
    # 1 -> 3 -> 2 -> 4 -> 1 (1-based)
    assert verify_isomorphism(CYCLE, CYCLE, [2, 3, 1, 0, 4])
    assert not verify_isomorphism(CYCLE, CYCLE, [0, 2, 1, 3, 4])
    perm = [3, 0, 4, 2, 1]
    K2 = build_complex(example.permuted(perm))
    assert verify_isomorphism(K, K2, perm)
    with pytest.raises(ValueError):
        verify_isomorphism(K, K, [0, 0, 1, 2, 3])


def test_permutation_equivariance(small_corpus, gen):
    for A in small_corpus[:10]:
        perm = [int(i) for i in gen.permutation(A.m)]
        assert build_complex(A.permuted(perm)) == build_complex(A).relabel(perm)


def test_realize_example(example):
    r = realize_polytope(example)
    assert r.vertex_indices == (0, 1, 2, 3) and r.interior_indices == (4,)
    assert r.boundary == build_complex(example)


def test_realize_segment():
    r = realize_polytope(Configuration.from_rows([[1, -1]]))
    assert r.dim == 0


def test_realize_matches_qhull(small_corpus):
    for A in small_corpus:
        r = realize_polytope(A)
        K = build_complex(A)
        assert r.boundary == K
        V = gale_dual(A)
        if V.rows >= 1:
            verts, facets = scipy_hull(V.columns())
            assert verts == set(r.vertex_indices)
            assert {frozenset(i for i in f if i in verts) for f in facets} == set(K.maximal_faces)
        assert set(r.vertex_indices) == {i for i in range(A.m) if frozenset({i}) in K}


def test_json_roundtrip():
    doc = CYCLE.to_json()
    assert [1, 3] in doc["maximal_faces"]
    assert SimplicialComplex.from_json(doc) == CYCLE
