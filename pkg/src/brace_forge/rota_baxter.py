"""Semi-trivial actions, relative Rota-Baxter operators and the two-sided factorization pipeline."""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import cached_property

import numba
import numpy as np

from .braces import (
    Brace,
    CarrierMap,
    brace_hom_witness,
    direct_product_brace,
    is_ideal,
    is_sub_brace,
    make_brace,
    quotient_brace,
    restrict,
    semidirect_tables,
    sub_brace_witness,
)
from .config import check_carrier
from .errors import AxiomError, InternalConsistencyError, KindError, StructureError
from .groups import IDX, GroupTable, abelian_generators, as_table, as_vector, first_false, scan
from .post import PostBrace, make_post_brace
from .report import Report


class SemiTrivialAction:
    """Phi: (G, o) -> Aut(H) as a table phi[a, h] = Phi(a)(h)."""

    def __init__(self, G: Brace, H: Brace, phi: np.ndarray):
        self.G, self.H = G, H
        phi = np.ascontiguousarray(phi, dtype=IDX)
        phi.setflags(write=False)
        self.phi = phi

    def __repr__(self):
        return f"SemiTrivialAction(|G|={self.G.n}, |H|={self.H.n})"

    @cached_property
    def is_trivial(self) -> bool:
        return bool((self.phi == np.arange(self.H.n)).all())

    @cached_property
    def semidirect(self) -> Brace:
        """H x|_Phi G, a brace by construction (index h*|G| + a)."""
        d, c = semidirect_tables(self.G, self.H, self.phi)
        return Brace(GroupTable(d, check=False), GroupTable(c, check=False), "brace")


def validate_semi_trivial_action(G: Brace, H: Brace, phi) -> Report:
    G.require_brace("a semi-trivial action")
    H.require_brace("a semi-trivial action")
    p = as_table(phi, G.n, H.n, values=H.n, what="action table")
    report = Report("semi-trivial action")
    ident = np.arange(H.n)
    if not report.add("permutation", first_false((np.sort(p, axis=1) == ident).all(axis=1))):
        return report
    report.add("dot_automorphism", scan(G.n, lambda a: p[a][H.d] == H.d[p[a][:, None], p[a][None, :]]))
    report.add("circ_automorphism", scan(G.n, lambda a: p[a][H.c] == H.c[p[a][:, None], p[a][None, :]]))
    report.add("unit", first_false(p[0] == ident))
    # Phi(a o b)(h) = Phi(a)(Phi(b)(h))
    report.add("multiplicative", scan(G.n, lambda a: p[G.c[a]] == p[a][p]))
    return report


def make_semi_trivial_action(G: Brace, H: Brace, phi) -> SemiTrivialAction:
    report = validate_semi_trivial_action(G, H, phi)
    if not report:
        raise AxiomError(report)
    return SemiTrivialAction(G, H, phi)


def trivial_action(G: Brace, H: Brace) -> SemiTrivialAction:
    G.require_brace("a semi-trivial action")
    H.require_brace("a semi-trivial action")
    return SemiTrivialAction(G, H, np.tile(np.arange(H.n, dtype=IDX), (G.n, 1)))


def adjoint_table(G: Brace) -> np.ndarray:
    """Ad[a, b] = a o b o a-bar."""
    return G.c[G.c, G.cinv[:, None]]


def adjoint_action(G: Brace) -> SemiTrivialAction:
    if not G.two_sided:
        raise KindError("the adjoint action needs a two-sided brace")
    return make_semi_trivial_action(G, G, adjoint_table(G))


def _translated_witness(action: SemiTrivialAction, B: np.ndarray):
    """First (a, h, k) with (B(h).a) o B(k) != B(h o Phi(B(h).a) k) . a."""
    G, H, phi = action.G, action.H, action.phi
    rows = np.arange(H.n)[:, None]

    def row_ok(a):
        x = G.d[B, a]
        lhs = G.c[x[:, None], B[None, :]]
        rhs = G.d[B[H.c[rows, phi[x]]], a]
        return lhs == rhs

    return scan(G.n, row_ok)


def _relative_verdicts(report: Report, action: SemiTrivialAction, B: np.ndarray) -> None:
    G, H, phi = action.G, action.H, action.phi
    rows = np.arange(H.n)[:, None]
    report.add("additive", first_false(G.d[B[:, None], B[None, :]] == B[H.d]))
    report.add("twisted", first_false(G.c[B[:, None], B[None, :]] == B[H.c[rows, phi[B]]]))
    report.add("enhanced", _translated_witness(action, B), informational=True)
    if report["enhanced"].ok and not report["twisted"].ok:
        raise InternalConsistencyError("translated identity holds but the twisted identity fails")


def validate_relative_rbo(action: SemiTrivialAction, B) -> Report:
    """Verdicts additive, twisted and (informational) enhanced, each with a witness."""
    b = as_vector(B, action.H.n, action.G.n, "operator")
    report = Report("relative rbo")
    _relative_verdicts(report, action, b)
    return report


class RelativeRBO:
    """A validated relative Rota-Baxter operator B: H -> G."""

    def __init__(self, action: SemiTrivialAction, B: np.ndarray, enhanced: bool):
        self.action = action
        b = np.ascontiguousarray(B, dtype=IDX)
        b.setflags(write=False)
        self.B = b
        self.enhanced = enhanced

    def __repr__(self):
        return f"RelativeRBO(B={self.B.tolist()}, enhanced={self.enhanced})"

    @property
    def G(self) -> Brace:
        return self.action.G

    @property
    def H(self) -> Brace:
        return self.action.H

    @property
    def image(self) -> tuple[int, ...]:
        return tuple(int(x) for x in self.B)

    def as_map(self) -> CarrierMap:
        return CarrierMap.of(self.B, self.G.n)

    @cached_property
    def rhd(self) -> np.ndarray:
        """h |>_B k = Phi(B(h))(k)."""
        return self.action.phi[self.B]

    @cached_property
    def descendent(self) -> Brace:
        circ = self.H.c[np.arange(self.H.n)[:, None], self.rhd]
        try:
            brace = make_brace(self.H.dot, GroupTable(circ, check=False), "brace")
        except AxiomError as exc:
            raise InternalConsistencyError(f"descendent structure is not a brace: {exc}") from None
        if brace_hom_witness(brace, self.G, self.B) is not None:
            raise InternalConsistencyError("B is not a brace hom out of the descendent brace")
        return brace


def make_relative_rbo(action: SemiTrivialAction, B) -> RelativeRBO:
    report = validate_relative_rbo(action, B)
    if not report:
        raise AxiomError(report)
    cls = TwoSidedRBO if _is_adjoint(action) else RelativeRBO
    return cls(action, as_vector(B, action.H.n, action.G.n), report["enhanced"].ok)


def is_relative_rbo(action: SemiTrivialAction, B) -> bool:
    return bool(validate_relative_rbo(action, B))


def enhance_property_witness(action: SemiTrivialAction, B) -> tuple[int, int] | None:
    """First (a, k) with a o B(k) != B(Phi(a) k) . a."""
    G, phi = action.G, action.phi
    b = as_vector(B, action.H.n, G.n, "operator")
    return first_false(G.c[:, b] == G.d[b[phi], np.arange(G.n)[:, None]])


def enhance_property_check(rbo: RelativeRBO) -> bool:
    if not rbo.enhanced:
        raise KindError("the enhance property is stated for enhanced operators")
    return enhance_property_witness(rbo.action, rbo.B) is None


def graph_subset(action: SemiTrivialAction, B) -> np.ndarray:
    b = as_vector(B, action.H.n, action.G.n, "operator")
    return np.arange(action.H.n, dtype=IDX) * action.G.n + b


def graph_is_subbrace(action: SemiTrivialAction, B) -> bool:
    """Closure of {(h, B(h))} in H x|_Phi G under both operations and inverses."""
    return is_sub_brace(action.semidirect, graph_subset(action, B))


def descendent_brace(rbo: RelativeRBO) -> Brace:
    return rbo.descendent


def induce_post_brace(rbo: RelativeRBO) -> PostBrace:
    pb = make_post_brace(rbo.H, rbo.rhd)
    if not np.array_equal(pb.sub_adjacent.c, rbo.descendent.c):
        raise InternalConsistencyError("sub-adjacent brace differs from the descendent brace")
    return pb


# -- two-sided braces with the adjoint action -------------------------------------------


class TwoSidedRBO(RelativeRBO):
    """A Rota-Baxter operator on a two-sided brace, acting on itself by Ad."""

    @cached_property
    def b_plus(self) -> np.ndarray:
        return self.G.c[np.arange(self.G.n), self.B]


def validate_two_sided_rbo(G: Brace, B) -> Report:
    action = adjoint_action(G)
    b = as_vector(B, G.n, G.n, "operator")
    report = Report("rbo")
    _relative_verdicts(report, action, b)
    if report.ok and report["enhanced"].ok:
        # b o B(b) = B(b) . b
        idx = np.arange(G.n)
        report.add("b_circ_B", first_false(G.c[idx, b] == G.d[b, idx]))
    return report


def make_two_sided_rbo(G: Brace, B) -> TwoSidedRBO:
    report = validate_two_sided_rbo(G, B)
    if not report:
        raise AxiomError(report)
    return TwoSidedRBO(adjoint_action(G), as_vector(B, G.n, G.n), report["enhanced"].ok)


def is_two_sided_rbo(G: Brace, B) -> bool:
    return bool(validate_two_sided_rbo(G, B))


def _require_enhanced(rbo: TwoSidedRBO, what: str) -> None:
    if not isinstance(rbo, TwoSidedRBO):
        raise KindError(f"{what} needs an operator on a two-sided brace")
    if not rbo.enhanced:
        raise KindError(f"{what} needs an enhanced operator")


def b_plus(rbo: TwoSidedRBO) -> CarrierMap:
    """B+(a) = a o B(a); a brace hom out of the descendent brace."""
    _require_enhanced(rbo, "B+")
    bp = rbo.b_plus
    if brace_hom_witness(rbo.descendent, rbo.G, bp) is not None:
        raise InternalConsistencyError("B+ is not a brace hom out of the descendent brace")
    return CarrierMap.of(bp, rbo.G.n)


@dataclass(frozen=True)
class FactorizationData:
    Gplus: tuple[int, ...]
    Gminus: tuple[int, ...]
    Kplus: tuple[int, ...]
    Kminus: tuple[int, ...]
    # Theta[i] = j: class i of Gminus/Kminus goes to class j of Gplus/Kplus;
    # classes are labelled as in quotient_brace (sorted smallest members)
    Theta: tuple[int, ...]
    GTheta: tuple[tuple[int, int], ...]
    PhiIso: tuple[tuple[int, int], ...]


def _image_and_kernel(f: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    return np.unique(f), np.flatnonzero(f == 0).astype(IDX)


def _local(subset: np.ndarray, n: int) -> np.ndarray:
    local = np.full(n, -1, dtype=IDX)
    local[subset] = np.arange(subset.size, dtype=IDX)
    return local


def factorization_data(rbo: TwoSidedRBO) -> FactorizationData:
    """Images, kernels, the Cayley transform and the graph brace of an enhanced operator."""
    _require_enhanced(rbo, "factorization data")
    G, B, n = rbo.G, rbo.B, rbo.G.n
    bp = b_plus(rbo).array()
    g_plus, k_minus = _image_and_kernel(bp)
    g_minus, k_plus = _image_and_kernel(B)
    desc = rbo.descendent
    for name, kernel in (("Ker B", k_plus), ("Ker B+", k_minus)):
        if not is_ideal(desc, kernel):
            raise InternalConsistencyError(f"{name} is not an ideal of the descendent brace")

    quotients = {}
    for name, sub, ker in (("plus", g_plus, k_plus), ("minus", g_minus, k_minus)):
        if sub_brace_witness(G, sub) is not None:
            raise InternalConsistencyError(f"image G{name} is not a sub-brace")
        if not np.isin(ker, sub).all():
            raise InternalConsistencyError(f"kernel K{name} is not inside G{name}")
        sub_brace, labels = restrict(G, sub)
        local = _local(labels, n)
        if not is_ideal(sub_brace, local[ker]):
            raise InternalConsistencyError(f"K{name} is not an ideal of G{name}")
        quotient, proj = quotient_brace(sub_brace, local[ker])
        cls = np.full(n, -1, dtype=IDX)
        cls[labels] = proj.array()
        quotients[name] = (quotient, cls)

    q_plus, cls_plus = quotients["plus"]
    q_minus, cls_minus = quotients["minus"]
    theta = np.full(q_minus.n, -1, dtype=IDX)
    for a in range(n):
        i, j = cls_minus[B[a]], cls_plus[bp[a]]
        if theta[i] < 0:
            theta[i] = j
        elif theta[i] != j:
            raise InternalConsistencyError(f"Cayley transform not well defined at a={a}")
    if q_minus.n != q_plus.n or np.unique(theta).size != q_plus.n:
        raise InternalConsistencyError("Cayley transform is not a bijection")
    if brace_hom_witness(q_minus, q_plus, theta) is not None:
        raise InternalConsistencyError("Cayley transform is not a brace hom")

    # (a+, a-) with Theta([a-]) = [a+], as pair indices in G x G
    plus_by_class = [g_plus[cls_plus[g_plus] == j] for j in range(q_plus.n)]
    g_theta = sorted((int(x), int(y)) for y in g_minus for x in plus_by_class[theta[cls_minus[y]]])
    product = direct_product_brace(G, G)
    pair_ids = [x * n + y for x, y in g_theta]
    if not is_sub_brace(product, pair_ids):
        raise InternalConsistencyError("G_Theta is not a sub-brace of G x G")
    phi_iso = bp.astype(np.int64) * n + B
    if sorted(phi_iso.tolist()) != pair_ids:
        raise InternalConsistencyError("a -> (B+(a), B(a)) is not a bijection onto G_Theta")
    if brace_hom_witness(desc, product, phi_iso) is not None:
        raise InternalConsistencyError("a -> (B+(a), B(a)) is not a brace hom")
    return FactorizationData(
        Gplus=tuple(map(int, g_plus)),
        Gminus=tuple(map(int, g_minus)),
        Kplus=tuple(map(int, k_plus)),
        Kminus=tuple(map(int, k_minus)),
        Theta=tuple(map(int, theta)),
        GTheta=tuple(g_theta),
        PhiIso=tuple((int(bp[a]), int(B[a])) for a in range(n)),
    )


def factorize(rbo: TwoSidedRBO, a: int) -> tuple[int, int]:
    """(a+, a-) = (B+(a), B(a)), with a = a+ o bar(a-) = a-^-1 . a+ checked."""
    _require_enhanced(rbo, "factorization")
    G = rbo.G
    if not 0 <= a < G.n:
        raise StructureError(f"element {a} outside 0..{G.n - 1}")
    ap, am = int(rbo.b_plus[a]), int(rbo.B[a])
    if G.c[ap, G.cinv[am]] != a or G.d[G.dinv[am], ap] != a:
        raise InternalConsistencyError(f"factorization identities fail at a={a}")
    return ap, am


def factorizations(rbo: TwoSidedRBO, data: FactorizationData, a: int) -> list[tuple[int, int]]:
    """Every (a+, a-) in G_Theta with a = a+ o bar(a-); uniqueness means length one."""
    G = rbo.G
    return [(x, y) for x, y in data.GTheta if G.c[x, G.cinv[y]] == a]


# -- enumeration -------------------------------------------------------------------------


def _additive_extension(dH, dG, gens, images, nH):
    """Extend generator images additively along the Cayley graph; None if inconsistent."""
    B = np.full(nH, -1, dtype=np.int64)
    B[0] = 0
    queue = [0]
    for x in queue:
        for g, img in zip(gens, images):
            y, v = int(dH[x, g]), int(dG[B[x], img])
            if B[y] < 0:
                B[y] = v
                queue.append(y)
            elif B[y] != v:
                return None
    return B


def _twisted_partial_ok(action: SemiTrivialAction, B: np.ndarray) -> bool:
    """Twisted identity on every pair where all three values of B are already known."""
    H, G, phi = action.H, action.G, action.phi
    dom = np.flatnonzero(B >= 0)
    if dom.size == H.n:
        return first_false(G.c[B[:, None], B[None, :]] == B[H.c[np.arange(H.n)[:, None], phi[B]]]) is None
    bh = B[dom]
    arg = H.c[dom[:, None], phi[bh][:, dom]]
    rhs = B[arg]
    known = rhs >= 0
    lhs = G.c[bh[:, None], bh[None, :]]
    return bool((lhs[known] == rhs[known]).all())


def _pruned_search(action: SemiTrivialAction) -> list[np.ndarray]:
    H, G = action.H, action.G
    gens = abelian_generators(H.dot)
    orders_H = H.dot.orders
    orders_G = G.dot.orders
    found: list[np.ndarray] = []

    def search(depth: int, images: list[int]):
        if depth == len(gens):
            B = _additive_extension(H.d, G.d, gens, images, H.n)
            if B is not None and (B >= 0).all() and _twisted_partial_ok(action, B):
                found.append(B.astype(IDX))
            return
        g = gens[depth]
        for img in range(G.n):
            # a hom sends g to an element whose order divides ord(g)
            if orders_H[g] % orders_G[img]:
                continue
            trial = images + [img]
            B = _additive_extension(H.d, G.d, gens[: depth + 1], trial, H.n)
            if B is None or not _twisted_partial_ok(action, B):
                continue
            search(depth + 1, trial)

    search(0, [])
    return found


# the two identities live in separate kernels: fused into one function the
# compiled loop ran about twenty times slower
@numba.njit(cache=True)
def _is_additive(B, dH, dG):
    n = B.shape[0]
    for h in range(n):
        for k in range(n):
            if dG[B[h], B[k]] != B[dH[h, k]]:
                return False
    return True


@numba.njit(cache=True)
def _is_twisted(B, cH, cG, phi):
    n = B.shape[0]
    for h in range(n):
        for k in range(n):
            if cG[B[h], B[k]] != B[cH[h, phi[B[h], k]]]:
                return False
    return True


@numba.njit(cache=True)
def _scan_top(dH, cH, dG, cG, phi, top, out, fill):
    """Odometer over maps with B[n-1] = top, digit 0 fastest."""
    nH, nG = dH.shape[0], dG.shape[0]
    B = np.zeros(nH, np.int64)
    B[nH - 1] = top
    count = 0
    while True:
        if _is_additive(B, dH, dG) and _is_twisted(B, cH, cG, phi):
            if fill:
                out[count, :] = B
            count += 1
        i = 0
        while i < nH - 1:
            B[i] += 1
            if B[i] < nG:
                break
            B[i] = 0
            i += 1
        if i == nH - 1:
            break
    return count


@numba.njit(cache=True)
def _brute_force_serial(dH, cH, dG, cG, phi, out):
    """Fill ``out`` with passing maps; returns the count, or -1 if ``out`` is too small."""
    nH, nG = dH.shape[0], dG.shape[0]
    count = 0
    B = np.zeros(nH, np.int64)
    while True:
        if _is_additive(B, dH, dG) and _is_twisted(B, cH, cG, phi):
            if count == out.shape[0]:
                return -1
            out[count, :] = B
            count += 1
        i = 0
        while i < nH:
            B[i] += 1
            if B[i] < nG:
                break
            B[i] = 0
            i += 1
        if i == nH:
            break
    return count


@numba.njit(parallel=True, cache=True)
def _brute_force_parallel(dH, cH, dG, cG, phi):
    # two passes over the top digit: count, then fill at fixed offsets
    nH, nG = dH.shape[0], dG.shape[0]
    counts = np.zeros(nG, np.int64)
    dummy = np.zeros((1, nH), np.int64)
    for top in numba.prange(nG):
        counts[top] = _scan_top(dH, cH, dG, cG, phi, top, dummy, False)
    offsets = np.zeros(nG + 1, np.int64)
    for top in range(nG):
        offsets[top + 1] = offsets[top] + counts[top]
    out = np.zeros((offsets[nG], nH), np.int64)
    for top in numba.prange(nG):
        _scan_top(dH, cH, dG, cG, phi, top, out[offsets[top]:offsets[top + 1]], True)
    return out


BRUTE_FORCE_LIMIT = 9**9


def brute_force_rbo_images(action: SemiTrivialAction) -> list[tuple[int, ...]]:
    """Every map H -> G satisfying both identities, by plain enumeration of all |G|^|H| maps."""
    H, G = action.H, action.G
    if G.n ** H.n > BRUTE_FORCE_LIMIT:
        raise StructureError(f"brute force over {G.n}^{H.n} maps exceeds {BRUTE_FORCE_LIMIT}")
    arrays = [np.ascontiguousarray(t, dtype=np.int64) for t in (H.d, H.c, G.d, G.c, action.phi)]
    with warnings.catch_warnings():
        # numba probes the TBB layer on first use and warns about old versions
        warnings.filterwarnings("ignore", message=".*TBB.*")
        threads = numba.get_num_threads()
    if threads > 1:
        out = _brute_force_parallel(*arrays)
    else:
        capacity = 1024
        while True:
            out = np.zeros((capacity, H.n), np.int64)
            count = _brute_force_serial(*arrays, out)
            if count >= 0:
                out = out[:count]
                break
            capacity *= 16
    return sorted(tuple(int(x) for x in row) for row in out)


def enumerate_relative_rbos(action: SemiTrivialAction, enhanced_only: bool = False,
                            prune: bool = True) -> list[RelativeRBO]:
    """All relative RBOs for the action, sorted by image sequence.

    The pruned search fixes B on generators of (H, .) and extends additively,
    dropping partial maps that already violate the twisted identity.
    """
    check_carrier(action.H.n, "operator domain")
    if prune:
        images = sorted(tuple(int(x) for x in B) for B in _pruned_search(action))
    else:
        images = brute_force_rbo_images(action)
    out = []
    for img in images:
        report = validate_relative_rbo(action, img)
        if not report:
            raise InternalConsistencyError(f"enumeration produced a non-operator {img}")
        if enhanced_only and not report["enhanced"].ok:
            continue
        cls = TwoSidedRBO if _is_adjoint(action) else RelativeRBO
        out.append(cls(action, np.asarray(img), report["enhanced"].ok))
    return out


def _is_adjoint(action: SemiTrivialAction) -> bool:
    G = action.G
    return (action.H is G and G.two_sided
            and np.array_equal(action.phi, adjoint_table(G)))
