"""End-to-end acceptance run: nine exhaustive checks plus the overall time budget.

Each criterion returns a :class:`CriterionResult`; ``run_acceptance`` shares
one :class:`Workspace` so the Heisenberg census and its operators are built once.
"""
from __future__ import annotations

import time
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .braces import (
    Brace,
    clear_validation_cache,
    enumerate_braces,
    inverse_identity_witness,
    lambda_action_witness,
    trivial_brace,
    two_sided_inverse_witness,
    validate_brace,
)
from .errors import InternalConsistencyError
from .groups import abelian_group, cyclic_group, group_automorphisms
from .heisenberg import (
    HeisenbergCodec,
    LinearMap3,
    build_heisenberg_brace,
    census,
    census_operators,
    linear_to_carrier,
)
from .matched_pairs import (
    double_brace,
    factor_ideal_criterion,
    mp_from_enhanced_rbo,
    transport_matches_double,
    transported_brace,
    validate_mp_braces,
)
from .post import validate_post_brace
from .rota_baxter import (
    adjoint_action,
    enhance_property_witness,
    enumerate_relative_rbos,
    factorization_data,
    factorizations,
    factorize,
    graph_is_subbrace,
    induce_post_brace,
    trivial_action,
    validate_relative_rbo,
    validate_two_sided_rbo,
)
from .ybe import derived_solution, flip, rrbo_solutions, solution_from_brace

TIME_BUDGET = 300.0
RANDOM_MAPS = 1000
RANDOM_SEED = 20240611
# abelian groups of order at most 9, as invariant-factor lists
SMALL_ABELIAN = ((1,), (2,), (3,), (4,), (2, 2), (5,), (6,), (7,), (8,), (2, 4), (2, 2, 2), (9,), (3, 3))


@dataclass
class CriterionResult:
    number: int
    title: str
    ok: bool
    detail: str
    elapsed: float = 0.0

    def line(self, timing: bool = False) -> str:
        out = f"criterion {self.number} {self.title}: {'PASS' if self.ok else 'FAIL'} ({self.detail})"
        return out + (f" [{self.elapsed:.2f}s]" if timing else "")


def brace_representatives(orders: tuple[int, ...]) -> list[Brace]:
    """One brace per isomorphism class on the abelian group with these invariant factors.

    Two braces on the same dot group are isomorphic iff a dot automorphism
    carries one circ table to the other, so orbits under Aut(dot) are enough.
    """
    dot = abelian_group(*orders)
    auts = group_automorphisms(dot)
    seen: set[bytes] = set()
    reps = []
    for brace in enumerate_braces(dot):
        key = brace.c.tobytes()
        if key in seen:
            continue
        reps.append(brace)
        for sigma in auts:
            s = np.asarray(sigma)
            si = np.argsort(s)
            seen.add(s[brace.c[np.ix_(si, si)]].astype(brace.c.dtype).tobytes())
    return reps


class Workspace:
    """Shared structures for the criteria, built lazily."""

    def __init__(self, p: int = 3):
        self.p = p

    @cached_property
    def heisenberg(self) -> tuple[Brace, HeisenbergCodec]:
        return build_heisenberg_brace(self.p)

    @cached_property
    def action(self):
        return adjoint_action(self.heisenberg[0])

    @cached_property
    def operators(self):
        return census_operators(self.p)

    @cached_property
    def enhanced(self):
        return [(m, rbo) for m, label, rbo in self.operators if rbo.enhanced]

    @cached_property
    def small_braces(self) -> list[Brace]:
        return [b for orders in SMALL_ABELIAN for b in brace_representatives(orders)]

    @cached_property
    def solution_corpus(self) -> list[tuple[str, Brace]]:
        corpus = [(f"trivial Z{n}", trivial_brace(cyclic_group(n))) for n in range(2, 9)]
        corpus.append((f"Heisenberg p={self.p}", self.heisenberg[0]))
        corpus += [(f"descendent {m.rows}", rbo.descendent) for m, _, rbo in self.operators]
        return corpus


def _timed(number: int, title: str, fn, ws: Workspace) -> CriterionResult:
    start = time.perf_counter()
    ok, detail = fn(ws)
    return CriterionResult(number, title, ok, detail, time.perf_counter() - start)


def heisenberg_validity(ws: Workspace) -> tuple[bool, str]:
    start = time.perf_counter()
    failures = []
    for p in (3, 5, 7):
        build_heisenberg_brace.cache_clear()
        clear_validation_cache()
        brace, _ = build_heisenberg_brace(p)
        report = validate_brace(brace.d, brace.c, "brace")
        if not (report.ok and report["two_sided"].ok):
            failures.append(f"p={p}: {report.first_failure() or 'not two-sided'}")
    elapsed = time.perf_counter() - start
    if elapsed >= 10:
        failures.append(f"took {elapsed:.1f}s")
    return not failures, "; ".join(failures) or "p=3,5,7 two-sided braces"


def census_agreement(ws: Workspace) -> tuple[bool, str]:
    t0 = time.perf_counter()
    brute = census(ws.p, brute_force=True, pruned=False)
    t1 = time.perf_counter()
    pruned = census(ws.p, brute_force=False, pruned=True)
    t2 = time.perf_counter()
    problems = []
    for name, c in (("brute force", brute), ("pruned", pruned)):
        if not (c.rbo_sets_agree and c.enhanced_sets_agree):
            problems.append(f"{name} disagrees with the classifier")
        if c.enhanced_count != 9:
            problems.append(f"{name} enhanced count {c.enhanced_count}")
    if brute.counts != pruned.counts or brute.rbo_count != pruned.rbo_count:
        problems.append("paths disagree")
    if t1 - t0 >= 60 or t2 - t1 >= 5:
        problems.append(f"runtime {t1 - t0:.1f}s / {t2 - t1:.1f}s")
    counts = ", ".join(f"{k} {v}" for k, v in brute.counts.items())
    return not problems, "; ".join(problems) or f"{counts}; {brute.rbo_count} operators"


def brace_solutions(ws: Workspace) -> tuple[bool, str]:
    for name, brace in ws.solution_corpus:
        try:
            solution_from_brace(brace)
        except InternalConsistencyError as exc:
            return False, f"{name}: {exc}"
    return True, f"{len(ws.solution_corpus)} braces"


def post_brace_solutions_check(ws: Workspace) -> tuple[bool, str]:
    brace, codec = ws.heisenberg
    n = brace.n
    x, y = np.divmod(np.arange(n * n), n)
    X = codec.coords()
    checked = 0
    for m, label, rbo in ws.operators:
        sols = rrbo_solutions(rbo)
        w = sols.omega_bar
        if np.unique(w).size != n * n or not np.array_equal(w[sols.R1.R], sols.R2.R[w]):
            return False, f"omega_bar fails for {m.rows}"
        if rbo.enhanced:
            bx, yc = X[rbo.B[x]], X[y]
            br = (bx[:, 0] * yc[:, 1] - bx[:, 1] * yc[:, 0]) % codec.p
            yy = yc.copy()
            yy[:, 2] -= br
            closed = x * n + codec.encode_array(yy)
            if not np.array_equal(w, closed):
                return False, f"closed form differs for {m.rows}"
            checked += 1
    return True, f"{len(ws.operators)} operators, {checked} closed forms"


def iff_pairs(ws: Workspace) -> tuple[bool, str]:
    G, _ = ws.heisenberg
    action = ws.action
    rng = np.random.default_rng(RANDOM_SEED)
    maps = [rbo.B for _, _, rbo in ws.operators]
    for mat in rng.integers(0, ws.p, size=(RANDOM_MAPS, 3, 3)):
        maps.append(linear_to_carrier(LinearMap3(tuple(map(tuple, mat.tolist())), ws.p), ws.p).array())
    graph_bad = factor_bad = 0
    for B in maps:
        report = validate_relative_rbo(action, B)
        graph_bad += graph_is_subbrace(action, B) != report.ok
        enhanced = report.ok and report["enhanced"].ok
        factor_bad += factor_ideal_criterion(G, G, action, B) != enhanced
    ok = graph_bad == 0 and factor_bad == 0
    return ok, f"{len(maps)} maps, disagreements graph {graph_bad}, factor {factor_bad}"


def unique_factorization(ws: Workspace) -> tuple[bool, str]:
    G, _ = ws.heisenberg
    for m, rbo in ws.enhanced:
        data = factorization_data(rbo)
        for a in range(G.n):
            ap, am = factorize(rbo, a)
            found = factorizations(rbo, data, a)
            if found != [(ap, am)]:
                return False, f"{m.rows}: element {a} has factorizations {found}"
            if G.c[ap, G.cinv[am]] != a or G.d[G.dinv[am], ap] != a:
                return False, f"{m.rows}: identities fail at {a}"
    return True, f"{len(ws.enhanced)} operators x {G.n} elements"


def matched_pair_doubles(ws: Workspace) -> tuple[bool, str]:
    for m, rbo in ws.enhanced:
        mp = mp_from_enhanced_rbo(rbo)
        report = validate_mp_braces(mp.G, mp.H, mp.sigma, mp.theta)
        if not (report.ok and report.exhaustive):
            return False, f"{m.rows}: {report.first_failure() or 'non-exhaustive'}"
        tb = transported_brace(mp.G, mp.H, rbo.action, rbo.B)
        if not transport_matches_double(tb, double_brace(mp)):
            return False, f"{m.rows}: double differs from the transported brace"
    return True, f"{len(ws.enhanced)} enhanced operators"


def structural_identities(ws: Workspace) -> tuple[bool, str]:
    braces = [b for _, b in ws.solution_corpus] + ws.small_braces
    for brace in braces:
        checks = {
            "inverse identity": inverse_identity_witness(brace),
            "lambda action": lambda_action_witness(brace),
        }
        if brace.two_sided:
            checks["two-sided inverse identity"] = two_sided_inverse_witness(brace)
        if derived_solution(solution_from_brace(brace)) != flip(brace.n):
            checks["derived = flip"] = (0,)
        for name, hit in checks.items():
            if hit is not None:
                return False, f"{name} fails on a brace of order {brace.n} at {hit}"
    for m, label, rbo in ws.operators:
        report = validate_post_brace(rbo.H, rbo.rhd)
        if not (report["unit_left"].ok and report["unit_right"].ok):
            return False, f"post-brace unit law fails for {m.rows}"
        induce_post_brace(rbo)
    for m, rbo in ws.enhanced:
        if enhance_property_witness(rbo.action, rbo.B) is not None:
            return False, f"enhance property fails for {m.rows}"
        report = validate_two_sided_rbo(rbo.G, rbo.B)
        if not report["b_circ_B"].ok:
            return False, f"a o B(a) = B(a) . a fails for {m.rows}"
    return True, f"{len(braces)} braces, {len(ws.operators)} post-braces, {len(ws.enhanced)} enhanced"


def dual_enumeration(ws: Workspace) -> tuple[bool, str]:
    runs = 0
    for brace in ws.small_braces:
        actions = [trivial_action(brace, brace)]
        if brace.two_sided:
            actions.append(adjoint_action(brace))
        for action in actions:
            pruned = {r.image for r in enumerate_relative_rbos(action, prune=True)}
            brute = {r.image for r in enumerate_relative_rbos(action, prune=False)}
            runs += 1
            if pruned != brute:
                return False, f"order {brace.n}: pruned {len(pruned)} vs brute force {len(brute)}"
    return True, f"{len(ws.small_braces)} braces, {runs} actions"


CRITERIA = (
    (1, "heisenberg-validity", heisenberg_validity),
    (2, "census-agreement", census_agreement),
    (3, "brace-solutions", brace_solutions),
    (4, "post-brace-solutions", post_brace_solutions_check),
    (5, "iff-pairs", iff_pairs),
    (6, "unique-factorization", unique_factorization),
    (7, "matched-pair-double", matched_pair_doubles),
    (8, "structural-identities", structural_identities),
    (9, "dual-enumeration", dual_enumeration),
)


def run_criterion(number: int, ws: Workspace | None = None) -> CriterionResult:
    ws = ws or Workspace()
    for num, title, fn in CRITERIA:
        if num == number:
            return _timed(num, title, fn, ws)
    raise ValueError(f"no criterion {number}")


def run_acceptance(numbers=None, ws: Workspace | None = None) -> list[CriterionResult]:
    """Run the selected criteria (all by default); appends the time-budget line when all nine ran."""
    ws = ws or Workspace()
    start = time.perf_counter()
    selected = [c for c in CRITERIA if numbers is None or c[0] in numbers]
    results = [_timed(num, title, fn, ws) for num, title, fn in selected]
    if numbers is None:
        total = time.perf_counter() - start
        ok = all(r.ok for r in results) and total < TIME_BUDGET
        results.append(CriterionResult(10, "selftest", ok, f"criteria 1-9 within {TIME_BUDGET:.0f}s", total))
    return results
