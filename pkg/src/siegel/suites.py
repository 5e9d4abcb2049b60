"""Bundled invariant batteries, one per module, with JSON reports."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .configuration import (
    Configuration,
    admissibility,
    configurations_row_equivalent,
    gale_dual,
    gale_transform,
    verify_gale_pair,
)
from .corpus import EXAMPLE, COUNTER_V, configuration_corpus, off_complex_targets, random_point, rng, stratum_point
from .leaf import chart, chart_invert, flow, minimize, retract, xap_residual
from .projection import escape_check, mac_contains, project_combinatorial, project_plimit, sweep
from .rational import RationalMatrix
from .simplicial import SimplicialComplex, build_complex, realize_polytope
from .verification import Stratum, cube_sample, jacobian_rank, orthant_sample, rigidity_check

__all__ = ["SUITES", "SuiteReport", "run_suite"]


@dataclass
class SuiteReport:
    suite: str
    seed: int
    checks: list[dict] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c["passed"] for c in self.checks)

    def check(self, name: str, ok: bool, value=None, tolerance=None):
        self.checks.append({"name": name, "passed": bool(ok), "value": value, "tolerance": tolerance})

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "seed": self.seed,
            "passed": self.passed,
            "checks": self.checks,
        }


def _admissibility(rep: SuiteReport, gen, corpus):
    a = admissibility(EXAMPLE)
    rep.check("example admissible and centered", a.admissible and a.centered)
    rep.check("example Siegel certificate verifies",
              a.siegel_certificate.verify(EXAMPLE.columns))
    V = gale_dual(EXAMPLE)
    expected = RationalMatrix.from_rows([[0, 0, -1, 1, 0], [6, -9, 2, 0, 1]], 5)
    rep.check("example dual tuple", V == expected)
    B = gale_transform(RationalMatrix.from_rows(COUNTER_V, 4))
    rep.check("counterexample transform row-equivalent",
              configurations_row_equivalent(B, Configuration.from_rows([[0, 0, 1, -1], [1, -1, 0, 0]])))
    b = admissibility(B)
    rep.check("counterexample violates weak hyperbolicity",
              not b.weak_hyperbolicity and b.violating is not None and len(b.violating) == 2)
    ok = all(admissibility(A).admissible and verify_gale_pair(A, gale_dual(A)) for A in corpus)
    rep.check("corpus admissible with verified dual tuples", ok, len(corpus))


def _combinatorics(rep: SuiteReport, gen, corpus):
    K = build_complex(EXAMPLE)
    cycle = SimplicialComplex.from_faces(5, [[0, 2], [2, 1], [1, 3], [3, 0]])
    rep.check("example K_A is the 4-cycle", K == cycle)
    real = realize_polytope(EXAMPLE)
    rep.check("example vertices and interior",
              real.vertex_indices == (0, 1, 2, 3) and real.interior_indices == (4,))
    bad = 0
    for A in corpus:
        try:
            realize_polytope(A)
        except Exception:  # noqa: BLE001 - any failure counts against the check
            bad += 1
    rep.check("corpus boundary(P_A) equals K_A", bad == 0, bad)


def _minimization(rep: SuiteReport, gen, corpus):
    A1 = Configuration.from_rows([[1, -1]])
    errs = [abs(minimize(A1, [1, math.e ** 2], p).T[0] - 1) for p in (1, 1.5, 2, 3, 10, 100, 1024)]
    rep.check("closed form T_p = 1", max(errs) < 1e-10, max(errs), 1e-10)
    res = equiv = idem = roundtrip = 0.0
    sandwich = True
    for A in corpus:
        z = random_point(gen, A.m)
        p = float(gen.choice([1.0, 1.5, 2.0, 3.0, 8.0]))
        lm = minimize(A, z, p)
        res = max(res, lm.residual)
        T0 = gen.normal(size=A.d)
        equiv = max(equiv, float(np.abs(minimize(A, flow(A, z, T0), p).T - (lm.T - T0)).max()))
        x = retract(A, z, p)
        idem = max(idem, float(np.abs(retract(A, x, p).coords - x.coords).max()))
        xx, T, r = chart_invert(A, z, p)
        rel = np.abs(chart(A, xx, T, r).coords - z).max() / np.abs(z).max()
        roundtrip = max(roundtrip, float(rel))
        f = flow(A, z, gen.normal(size=A.d))
        n1 = np.abs(f.coords).sum()
        npn = (np.abs(f.coords) ** p).sum() ** (1 / p)
        bound = A.m ** (1 - 1 / p)
        sandwich &= npn <= n1 * (1 + 1e-12) and n1 <= bound * npn * (1 + 1e-12)
        sandwich &= max(xap_residual(A, x, p)) < 1e-9
    rep.check("residual", res < 1e-10, res, 1e-10)
    rep.check("equivariance", equiv < 1e-8, equiv, 1e-8)
    rep.check("idempotence", idem < 1e-8, idem, 1e-8)
    rep.check("chart round trip (relative)", roundtrip < 1e-9, roundtrip, 1e-9)
    rep.check("Hoelder sandwich and X_A(p) membership", sandwich)


def _projection(rep: SuiteReport, gen, corpus):
    dT = dy = recon = 0.0
    inside = True
    for k, A in enumerate(corpus):
        K = build_complex(A)
        z = random_point(gen, A.m) if k % 4 else stratum_point(gen, A)
        a = project_combinatorial(A, z)
        b = project_plimit(A, z)
        dT = max(dT, float(np.abs(a.T_inf - b.T_inf).max()))
        dy = max(dy, float(np.abs(a.y.coords - b.y.coords).max()))
        recon = max(recon, a.reconstruction_error)
        inside &= mac_contains(K, a.y).inside and mac_contains(K, b.y).inside
    rep.check("projectors agree in T", dT < 1e-6, dT, 1e-6)
    rep.check("projectors agree in y", dy < 1e-4, dy, 1e-4)
    rep.check("reconstruction r F(z, T) = y", recon < 1e-9, recon, 1e-9)
    rep.check("outputs lie in the moment-angle complex", inside)
    A = corpus[0]
    z = random_point(gen, A.m)
    escaped = sum(escape_check(A, z, t) for t in off_complex_targets(A))
    rep.check("escape from off-complex boxes", escaped >= 5, escaped, 5)
    rows = sweep(A, z)
    rep.check("sup-norm lower bound m^(-1/p)", all(r.x_inf >= A.m ** (-1 / r.p) - 1e-12 for r in rows))


def _rigidity(rep: SuiteReport, gen, corpus):
    worst = 0.0
    ok = True
    for _ in range(5):
        perm = [int(i) for i in gen.permutation(EXAMPLE.m)]
        r = rigidity_check(EXAMPLE, EXAMPLE.permuted(perm), perm, n_samples=5, gen=gen)
        worst = max(worst, r.diagram_residual)
        ok &= r.passed
    rep.check("example under column permutations", ok, worst, 1e-8)
    swap = [0, 1, 3, 2, 4]
    r = rigidity_check(EXAMPLE, EXAMPLE.permuted(swap), swap, n_samples=5, gen=gen)
    rep.check("duplicate-column swap", r.passed, r.diagram_residual, 1e-8)


def _jacobian(rep: SuiteReport, gen, corpus):
    bad = 0
    margin = 1.0
    count = 0
    for A in [EXAMPLE] + corpus:
        K = build_complex(A)
        certs = [jacobian_rank(A, Stratum("cube", F), cube_sample(gen, A, F))
                 for F in K.sorted_maximal()[:2]]
        certs.append(jacobian_rank(A, Stratum("orthant"), orthant_sample(gen, A)))
        for c in certs:
            count += 1
            bad += not c.passed
            margin = min(margin, c.margin)
    rep.check("rank equals m - d - 1 (certified at sample points only)", bad == 0, bad)
    rep.check("smallest retained singular value ratio", margin >= 1e-4, margin, 1e-4)


SUITES = {
    "admissibility": _admissibility,
    "combinatorics": _combinatorics,
    "minimization": _minimization,
    "projection": _projection,
    "rigidity": _rigidity,
    "jacobian": _jacobian,
}


def run_suite(name: str, seed: int | None = None, corpus_size: int = 12) -> SuiteReport:
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    gen = rng(seed)
    seed_used = int(gen.bit_generator.seed_seq.entropy)
    corpus = configuration_corpus(corpus_size, seed=seed_used)
    rep = SuiteReport(name, seed_used)
    t = time.perf_counter()
    SUITES[name](rep, gen, corpus)
    rep.seconds = round(time.perf_counter() - t, 3)
    return rep
