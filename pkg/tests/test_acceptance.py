"""Acceptance criteria 1-9.  Each test records one PASS/FAIL line that is
printed in the terminal summary."""

import math
import time

import numpy as np
import pytest

from acceptance_log import record
from oracles import brute_force_complex, sympy_row_equivalent
from siegel.configuration import (
    Configuration,
    admissibility,
    gale_dual,
    gale_transform,
    verify_gale_pair,
)
from siegel.corpus import EXAMPLE, COUNTER_V, configuration_corpus, off_complex_targets, random_point, stratum_point
from siegel.leaf import chart, chart_invert, flow, minimize, retract, xap_residual
from siegel.projection import escape_check, mac_contains, project_combinatorial, project_plimit, sweep
from siegel.rational import RationalMatrix
from siegel.simplicial import SimplicialComplex, build_complex, realize_polytope, verify_isomorphism
from siegel.verification import Stratum, cube_sample, jacobian_rank, orthant_sample, rigidity_check

EXAMPLE_V = RationalMatrix.from_rows([[0, 0, -1, 1, 0], [6, -9, 2, 0, 1]])
CYCLE = SimplicialComplex.from_faces(5, [[0, 2], [2, 1], [1, 3], [3, 0]])


@pytest.fixture(scope="module")
def corpus():
    return configuration_corpus(100, seed=0)


def test_criterion_1_example_pipeline():
    t = time.perf_counter()
    a = admissibility(EXAMPLE)
    V = gale_dual(EXAMPLE)
    real = realize_polytope(EXAMPLE)
    K = build_complex(EXAMPLE)
    dt = time.perf_counter() - t
    checks = {
        "admissible+centered": a.siegel and a.weak_hyperbolicity and a.centered,
        "dual verifies": verify_gale_pair(EXAMPLE, EXAMPLE_V) and V == EXAMPLE_V,
        "vertices/interior": real.vertex_indices == (0, 1, 2, 3) and real.interior_indices == (4,),
        "4-cycle": K == CYCLE and set(K.faces()) == brute_force_complex(EXAMPLE.float_columns, 5),
        "boundary iso": verify_isomorphism(real.boundary, K, range(5)),
        "runtime<1s": dt < 1.0,
    }
    ok = all(checks.values())
    record("1", ok, f"{dt:.3f}s " + " ".join(f"{k}={v}" for k, v in checks.items()))
    assert ok, checks


def test_criterion_2_counterexample_pipeline():
    t = time.perf_counter()
    B = gale_transform(RationalMatrix.from_rows(COUNTER_V))
    rep = admissibility(B)
    dt = time.perf_counter() - t
    row_eq = sympy_row_equivalent(B.rows, [[0, 0, 1, -1], [1, -1, 0, 0]])
    ok = row_eq and not rep.weak_hyperbolicity and len(rep.violating) == 2 and dt < 1.0
    record("2", ok, f"{dt:.3f}s row-equivalent={row_eq} violating I={[i + 1 for i in rep.violating]}")
    assert ok


def test_criterion_3_closed_form():
    A = Configuration.from_rows([[1, -1]])
    errs = [abs(minimize(A, [1, math.e ** 2], p).T[0] - 1) for p in (1, 1.5, 2, 3, 10, 100, 1024)]
    x = retract(A, [1, math.e ** 2], 2).coords
    xerr = float(np.abs(x - 2 ** -0.5).max())
    ok = max(errs) < 1e-10 and xerr < 1e-10
    record("3", ok, f"max|T_p-1|={max(errs):.2e} retract err={xerr:.2e} (tol 1e-10)")
    assert ok


def test_criterion_4_residual_certification(corpus):
    gen = np.random.default_rng(4)
    t = time.perf_counter()
    res = equiv = idem = 0.0
    sandwich = True
    for A in corpus:
        for _ in range(10):
            z = random_point(gen, A.m)
            p = float(gen.choice([1.0, 1.5, 2.0, 3.0, 8.0, 32.0]))
            lm = minimize(A, z, p)
            res = max(res, lm.residual)
            T0 = gen.normal(size=A.d)
            equiv = max(equiv, float(np.abs(minimize(A, flow(A, z, T0), p).T - (lm.T - T0)).max()))
            x = retract(A, z, p)
            idem = max(idem, float(np.abs(retract(A, x, p).coords - x.coords).max()))
            f = flow(A, z, gen.normal(size=A.d)).moduli
            n1, npn = f.sum(), (f ** p).sum() ** (1 / p)
            sandwich &= bool(npn <= n1 * (1 + 1e-12) and n1 <= A.m ** (1 - 1 / p) * npn * (1 + 1e-12))
    dt = time.perf_counter() - t
    ok = res < 1e-10 and equiv < 1e-8 and idem < 1e-8 and sandwich and dt < 30
    record("4", ok, f"{dt:.1f}s residual={res:.2e} equivariance={equiv:.2e} "
                    f"idempotence={idem:.2e} sandwich={sandwich} (1000 solves)")
    assert ok


def test_criterion_5_chart_round_trip(corpus):
    gen = np.random.default_rng(5)
    worst = 0.0
    for A in corpus:
        for _ in range(10):
            z = random_point(gen, A.m)
            p = float(gen.choice([1.0, 2.0, 3.0, 8.0]))
            x, T, r = chart_invert(A, z, p)
            worst = max(worst, float(np.abs(chart(A, x, T, r).coords - z).max() / np.abs(z).max()))
    ok = worst < 1e-9
    record("5", ok, f"max relative error={worst:.2e} (tol 1e-9)")
    assert ok


def test_criterion_6_projection_cross_oracle(corpus):
    gen = np.random.default_rng(6)
    dT = dy = recon = 0.0
    inside = 0
    cases = [(corpus[k % 100], False) for k in range(50)] + [(corpus[(7 * k) % 100], True) for k in range(10)]
    for A, on_stratum in cases:
        K = build_complex(A)
        z = stratum_point(gen, A) if on_stratum else random_point(gen, A.m)
        a = project_combinatorial(A, z)
        b = project_plimit(A, z)
        dT = max(dT, float(np.abs(a.T_inf - b.T_inf).max()))
        dy = max(dy, float(np.abs(a.y.coords - b.y.coords).max()))
        recon = max(recon, a.reconstruction_error,
                    float(np.abs(b.r * flow(A, z, b.T_inf).coords - b.y.coords).max()))
        inside += mac_contains(K, a.y, 1e-8).inside and mac_contains(K, b.y, 1e-8).inside
    ok = dT < 1e-6 and dy < 1e-4 and recon < 1e-9 and inside == len(cases)
    record("6", ok, f"|dT|={dT:.2e} (1e-6) |dy|={dy:.2e} (1e-4) recon={recon:.2e} "
                    f"in MAC {inside}/{len(cases)}")
    assert ok


def test_criterion_7a_sup_norm_lower_bound(corpus):
    gen = np.random.default_rng(7)
    bad = 0
    n = 0
    for A in corpus:
        for row in sweep(A, random_point(gen, A.m)):
            n += 1
            bad += row.x_inf < A.m ** (-1 / row.p) - 1e-12
    record("7a", bad == 0, f"||x_p||_inf >= m^(-1/p): {n - bad}/{n} sweep rows")
    assert bad == 0


def test_criterion_7b_escape(corpus):
    gen = np.random.default_rng(7)
    worst = None
    for A in corpus:
        z = random_point(gen, A.m)
        hits = sum(escape_check(A, z, t) for t in off_complex_targets(A))
        worst = hits if worst is None else min(worst, hits)
    record("7b", worst >= 5, f"fewest escapes per configuration={worst} (need 5)")
    assert worst >= 5


def test_criterion_7c_limit_at_1024(corpus):
    """Left red: ``1 - ||x_p||_inf`` decays like ``ln(1/lambda_max)/p`` where
    ``lambda_max`` is the largest limiting softmax weight, which exceeds
    1e-3 at p = 1024 whenever ``lambda_max < e^-1.024``."""
    gen = np.random.default_rng(7)
    gaps = []
    for A in corpus:
        for _ in range(3):
            gaps.append(abs(sweep(A, random_point(gen, A.m))[-1].x_inf - 1))
    ex = [abs(sweep(EXAMPLE, random_point(gen, 5))[-1].x_inf - 1) for _ in range(200)]
    bad = sum(g >= 1e-3 for g in gaps)
    ok = bad == 0
    record("7c", ok, f"| ||x_1024||_inf - 1 | < 1e-3: corpus {len(gaps) - bad}/{len(gaps)} "
                     f"(max {max(gaps):.2e}); example {sum(g < 1e-3 for g in ex)}/200 (max {max(ex):.2e})")
    assert ok, f"{bad} of {len(gaps)} corpus points above 1e-3 (max {max(gaps):.3e})"


def test_criterion_8_rigidity():
    gen = np.random.default_rng(8)
    worst = 0.0
    ok = True
    for _ in range(10):
        perm = [int(i) for i in gen.permutation(5)]
        r = rigidity_check(EXAMPLE, EXAMPLE.permuted(perm), perm, n_samples=10, gen=gen, tol=1e-8)
        worst = max(worst, r.diagram_residual)
        ok &= r.passed
    record("8", ok, f"10 permutations, max round-trip residual={worst:.2e} (tol 1e-8)")
    assert ok


def test_criterion_9_jacobian(corpus):
    gen = np.random.default_rng(9)
    count = bad = 0
    margin = 1.0
    n_strata = 0
    for A in corpus:
        strata = [Stratum("cube", F) for F in build_complex(A).sorted_maximal()] + [Stratum("orthant")]
        for S in strata:
            n_strata += 1
            for _ in range(5):
                y = cube_sample(gen, A, S.face) if S.kind == "cube" else orthant_sample(gen, A)
                c = jacobian_rank(A, S, y)
                count += 1
                bad += not (c.passed and c.rank == A.m - A.d - 1)
                margin = min(margin, c.margin)
    ok = bad == 0 and margin >= 1e-4
    record("9", ok, f"{n_strata} strata x 5 samples, rank failures={bad}, "
                    f"min sigma_r/sigma_1={margin:.3f} (need 1e-4)")
    assert ok
