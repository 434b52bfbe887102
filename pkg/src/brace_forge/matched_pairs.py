"""Matched pairs of groups and braces, their doubles, and the transported brace of a map H -> G.

Tables use the notation a -> h (``rharp``, into H) and a <- h (``lharp``, into G);
the circ-level pair is ``rharpd`` / ``lharpd``.  Pair carriers are indexed
h*|G| + a.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .braces import Brace, admits_factorization, brace_hom_witness, make_brace
from .config import EXHAUSTIVE_TUPLE_LIMIT
from .errors import AxiomError, BoundError, InternalConsistencyError, KindError
from .groups import IDX, GroupTable, as_table, first_false, invert, scan, validate_group
from .report import Report
from .rota_baxter import RelativeRBO, SemiTrivialAction, enhance_property_witness

DEFAULT_SAMPLES = 1 << 20
TUPLE_CHUNK = 1 << 20


@dataclass(frozen=True, eq=False)
class MatchedPairGroups:
    G: GroupTable
    H: GroupTable
    rharp: np.ndarray
    lharp: np.ndarray


def _mp_tables(G: GroupTable, H: GroupTable, rharp, lharp) -> tuple[np.ndarray, np.ndarray]:
    rh = as_table(rharp, G.n, H.n, values=H.n, what="rharp table")
    lh = as_table(lharp, G.n, H.n, values=G.n, what="lharp table")
    return rh, lh


def _mg_verdicts(report: Report, G: GroupTable, H: GroupTable, rh: np.ndarray, lh: np.ndarray,
                 prefix: str = "") -> None:
    g, h = G.table, H.table
    report.add(prefix + "mg1", first_false(rh[0] == np.arange(H.n)))
    # a -> (b -> h) = (a.b) -> h
    report.add(prefix + "mg2", scan(G.n, lambda a: rh[a][rh] == rh[g[a]]))
    # (a.b) <- h = (a <- (b -> h)) . (b <- h)
    report.add(prefix + "mg3", scan(G.n, lambda a: lh[g[a]] == g[lh[a][rh], lh]))
    report.add(prefix + "mg4", first_false(lh[:, 0] == np.arange(G.n)))
    # (a <- h) <- k = a <- (h.k)
    report.add(prefix + "mg5", scan(G.n, lambda a: lh[lh[a]] == lh[a][h]))
    # a -> (h.k) = (a -> h) . ((a <- h) -> k)
    report.add(prefix + "mg6", scan(G.n, lambda a: rh[a][h] == h[rh[a][:, None], rh[lh[a]]]))


def validate_mp_groups(G: GroupTable, H: GroupTable, rharp, lharp) -> Report:
    rh, lh = _mp_tables(G, H, rharp, lharp)
    report = Report("matched pair of groups")
    _mg_verdicts(report, G, H, rh, lh)
    return report


def make_mp_groups(G: GroupTable, H: GroupTable, rharp, lharp) -> MatchedPairGroups:
    report = validate_mp_groups(G, H, rharp, lharp)
    if not report:
        raise AxiomError(report)
    rh, lh = _mp_tables(G, H, rharp, lharp)
    return MatchedPairGroups(G, H, rh, lh)


def double_product_table(G: GroupTable, H: GroupTable, rharp, lharp) -> np.ndarray:
    """(h, a)(k, b) = (h . (a -> k), (a <- k) . b) on index h*|G| + a, unvalidated."""
    rh, lh = _mp_tables(G, H, rharp, lharp)
    nG = G.n
    x = np.arange(H.n * nG)
    hh, aa = np.divmod(x, nG)
    first = H.table[hh[:, None], rh[aa[:, None], hh[None, :]]]
    second = G.table[lh[aa[:, None], hh[None, :]], aa[None, :]]
    return (first * nG + second).astype(IDX)


def double_group(mp: MatchedPairGroups) -> GroupTable:
    table = double_product_table(mp.G, mp.H, mp.rharp, mp.lharp)
    report = validate_group(table)
    if not report:
        raise InternalConsistencyError(f"double of a matched pair is not a group: {report.first_failure()}")
    return GroupTable(table, check=False)


# -- matched pairs of braces --------------------------------------------------------------

VARIABLES = ("a", "b", "c", "h", "k", "t")


@dataclass(frozen=True, eq=False)
class MatchedPairBraces:
    G: Brace
    H: Brace
    rharp: np.ndarray
    lharp: np.ndarray
    rharpd: np.ndarray
    lharpd: np.ndarray

    @property
    def sigma(self) -> tuple[np.ndarray, np.ndarray]:
        return self.rharp, self.lharp

    @property
    def theta(self) -> tuple[np.ndarray, np.ndarray]:
        return self.rharpd, self.lharpd


class _Compat:
    """Both compatibility identities evaluated on arrays of tuples (a, b, c, h, k, t).

    The first identity is the G-component of the double-brace identity
    (h,a) o ((k,b).(t,c)) = ((h,a) o (k,b)) . (h,a)^-1 . ((h,a) o (t,c)); its
    printed form applies <- to a^-1 where the H-element w = a^-1 -> h^-1 is meant.
    The second identity is the H-component.
    """

    def __init__(self, G: Brace, H: Brace, rh, lh, rhd, lhd):
        self.G, self.H = G, H
        self.rh, self.lh, self.rhd, self.lhd = rh, lh, rhd, lhd

    def sides(self, a, b, c, h, k, t):
        G, H = self.G, self.H
        dG, cG, dH, cH = G.d, G.c, H.d, H.c
        rh, lh, rhd, lhd = self.rh, self.lh, self.rhd, self.lhd
        w = rh[G.dinv[a], H.dinv[h]]
        akb = cG[lhd[a, k], b]
        q = dG[lh[akb, w], G.dinv[lh[a, w]]]
        y_h = cH[h, rhd[a, t]]
        lhs1 = cG[lhd[a, dH[k, rh[b, t]]], dG[lh[b, t], c]]
        rhs1 = dG[lh[q, y_h], cG[lhd[a, t], c]]
        lhs2 = cH[h, rhd[a, dH[k, rh[b, t]]]]
        rhs2 = dH[dH[cH[h, rhd[a, k]], rh[akb, w]], rh[q, y_h]]
        return (lhs1, rhs1), (lhs2, rhs2)


def _active_variables(rh, lh, lhd, H_n: int, G_n: int) -> tuple[set[str], set[str]]:
    """Variables each identity can depend on, given which actions are trivial.

    Identity 1: with <- trivial, q <- y = q, so h drops; with <-' also trivial
    the sides become a o (b.c) and (a o b).a^-1.(a o c), so k and t drop.
    Identity 2 never involves c; with -> trivial, b drops.
    """
    lh_trivial = bool((lh == np.arange(G_n)[:, None]).all())
    lhd_trivial = bool((lhd == np.arange(G_n)[:, None]).all())
    rh_trivial = bool((rh == np.arange(H_n)[None, :]).all())
    first = set(VARIABLES)
    if lh_trivial:
        first.discard("h")
        if lhd_trivial:
            first -= {"k", "t"}
    second = set(VARIABLES) - {"c"}
    if rh_trivial:
        second.discard("b")
    return first, second


def _check_identity(compat: _Compat, which: int, active: list[str], sizes: dict[str, int],
                    sampled: bool, samples: int, seed: int):
    """Scan tuples over ``active`` (others fixed at 0); returns (witness, exhaustive)."""
    dims = [sizes[v] for v in active]
    total = int(np.prod(dims)) if dims else 1
    exhaustive = total <= EXHAUSTIVE_TUPLE_LIMIT
    if not exhaustive and not sampled:
        raise BoundError(f"compatibility check over {total} tuples exceeds {EXHAUSTIVE_TUPLE_LIMIT}; "
                         f"allow sampling (sampled=True, or --sampled on the command line)")
    rng = np.random.default_rng(seed)
    count = total if exhaustive else samples
    for start in range(0, count, TUPLE_CHUNK):
        size = min(TUPLE_CHUNK, count - start)
        if exhaustive:
            flat = np.arange(start, start + size)
            coords = np.unravel_index(flat, dims) if dims else ()
        else:
            coords = tuple(rng.integers(0, d, size) for d in dims)
        values = {v: np.zeros(size, dtype=np.int64) for v in VARIABLES}
        for v, arr in zip(active, coords):
            values[v] = np.asarray(arr, dtype=np.int64)
        lhs, rhs = compat.sides(*(values[v] for v in VARIABLES))[which]
        bad = np.flatnonzero(lhs != rhs)
        if bad.size:
            i = int(bad[0])
            return tuple(int(values[v][i]) for v in VARIABLES), exhaustive
    return None, exhaustive


def validate_mp_braces(G: Brace, H: Brace, sigma, theta, mode: str = "auto",
                       sampled: bool = False, samples: int = DEFAULT_SAMPLES, seed: int = 0) -> Report:
    """Matched-pair verdicts for the dot pair, the circ pair and both compatibility identities.

    ``mode='full'`` scans all |G|^3 |H|^3 tuples; ``'structured'`` drops the
    variables an identity cannot depend on (still exhaustive); ``'auto'`` uses
    full when it fits the tuple limit.  Above the limit ``sampled=True`` draws a
    seeded sample and the report is flagged non-exhaustive; otherwise BoundError.
    Witnesses are (a, b, c, h, k, t).
    """
    rh, lh = _mp_tables(G.dot, H.dot, *sigma)
    rhd, lhd = _mp_tables(G.circ, H.circ, *theta)
    report = Report("matched pair of braces")
    _mg_verdicts(report, G.dot, H.dot, rh, lh, prefix="sigma.")
    _mg_verdicts(report, G.circ, H.circ, rhd, lhd, prefix="theta.")
    sizes = {"a": G.n, "b": G.n, "c": G.n, "h": H.n, "k": H.n, "t": H.n}
    full = G.n**3 * H.n**3
    if mode == "auto":
        mode = "full" if full <= EXHAUSTIVE_TUPLE_LIMIT else "structured"
    if mode == "full":
        active = [list(VARIABLES), list(VARIABLES)]
    elif mode == "structured":
        first, second = _active_variables(rh, lh, lhd, H.n, G.n)
        active = [[v for v in VARIABLES if v in first], [v for v in VARIABLES if v in second]]
    else:
        raise ValueError(f"unknown mode {mode!r}")
    compat = _Compat(G, H, rh, lh, rhd, lhd)
    for which, name in enumerate(("compatible_1", "compatible_2")):
        witness, exhaustive = _check_identity(compat, which, active[which], sizes, sampled, samples, seed)
        report.add(name, witness)
        report.exhaustive = report.exhaustive and exhaustive
    return report


def make_mp_braces(G: Brace, H: Brace, sigma, theta, **options) -> MatchedPairBraces:
    report = validate_mp_braces(G, H, sigma, theta, **options)
    if not report:
        raise AxiomError(report)
    rh, lh = _mp_tables(G.dot, H.dot, *sigma)
    rhd, lhd = _mp_tables(G.circ, H.circ, *theta)
    return MatchedPairBraces(G, H, rh, lh, rhd, lhd)


def double_tables(G: Brace, H: Brace, sigma, theta) -> tuple[np.ndarray, np.ndarray]:
    return (double_product_table(G.dot, H.dot, *sigma),
            double_product_table(G.circ, H.circ, *theta))


def double_brace(mp: MatchedPairBraces, check: bool = True) -> Brace:
    d, c = double_tables(mp.G, mp.H, mp.sigma, mp.theta)
    dot, circ = GroupTable(d, check=False), GroupTable(c, check=False)
    if not check:
        return Brace(dot, circ, "brace")
    try:
        return make_brace(dot, circ, "brace")
    except AxiomError as exc:
        raise InternalConsistencyError(f"double of a matched pair is not a brace: {exc}") from None


# -- the transported brace ------------------------------------------------------------------


class TransportedBrace:
    """(H x G, bullet, star): the semidirect brace pulled back along xi_B(h, a) = (h, B(h).a).

    ``bullet`` and ``star`` are tables on pair indices h*|G| + a.  Their unit is
    (e_H, B(e_H)^-1), which is index 0 only when B(e_H) = e_G; ``brace`` swaps
    the unit into 0 and ``relabel`` records that swap.
    """

    def __init__(self, action: SemiTrivialAction, B):
        self.action = action
        G, H = action.G, action.H
        B = np.asarray(getattr(B, "image", B), dtype=IDX)
        if B.shape != (H.n,) or (B.size and (B.min() < 0 or B.max() >= G.n)):
            raise ValueError(f"B must be a map from {H.n} elements into {G.n}")
        self.B = B
        nG, N = G.n, G.n * H.n
        h, a = np.divmod(np.arange(N), nG)
        self.xi = (h * nG + G.d[B[h], a]).astype(IDX)
        self.xi_inv = invert(self.xi)
        S = action.semidirect
        self.bullet = self.xi_inv[S.d[self.xi[:, None], self.xi[None, :]]]
        self.star = self.xi_inv[S.c[self.xi[:, None], self.xi[None, :]]]
        self.unit = int(G.dinv[B[0]])
        relabel = np.arange(N, dtype=IDX)
        relabel[[0, self.unit]] = relabel[[self.unit, 0]]
        self.relabel = relabel

    @property
    def n(self) -> int:
        return self.bullet.shape[0]

    @cached_property
    def brace(self) -> Brace:
        s = self.relabel
        si = invert(s)
        d = s[self.bullet[np.ix_(si, si)]]
        c = s[self.star[np.ix_(si, si)]]
        return Brace(GroupTable(d, check=False), GroupTable(c, check=False), "brace")

    def closed_forms(self) -> tuple[np.ndarray, np.ndarray]:
        """bullet and star from their expanded formulas, computed independently of xi."""
        G, H, phi, B = self.action.G, self.action.H, self.action.phi, self.B
        nG = G.n
        h, a = np.divmod(np.arange(self.n), nG)
        hh, aa = h[:, None], a[:, None]
        kk, bb = h[None, :], a[None, :]
        hk = H.d[hh, kk]
        g1 = G.d[G.d[G.d[G.d[G.dinv[B[hk]], B[hh]], aa], B[kk]], bb]
        bullet = hk * nG + g1
        x = G.d[B[hh], aa]
        hs = H.c[hh, phi[x, kk]]
        g2 = G.d[G.dinv[B[hs]], G.c[x, G.d[B[kk], bb]]]
        star = hs * nG + g2
        return bullet.astype(IDX), star.astype(IDX)

    def inverse_formulas(self) -> tuple[np.ndarray, np.ndarray]:
        """Closed-form inverses in (., bullet) and (., star)."""
        G, H, phi, B = self.action.G, self.action.H, self.action.phi, self.B
        nG = G.n
        h, a = np.divmod(np.arange(self.n), nG)
        hi = H.dinv[h]
        # no trailing B(e_H) factor: with it the product lands on (e, e), not the unit
        inv1 = hi * nG + G.d[G.d[G.dinv[B[hi]], G.dinv[a]], G.dinv[B[h]]]
        x = G.d[B[h], a]
        phi_inv = np.stack([invert(row) for row in phi])
        k = phi_inv[x, H.cinv[h]]
        inv2 = k * nG + G.d[G.dinv[B[k]], G.cinv[x]]
        return inv1.astype(IDX), inv2.astype(IDX)

    def verify(self) -> None:
        """Raise InternalConsistencyError unless the literal and closed forms agree."""
        bullet, star = self.closed_forms()
        if not np.array_equal(bullet, self.bullet):
            raise InternalConsistencyError(f"bullet closed form differs at {first_false(bullet == self.bullet)}")
        if not np.array_equal(star, self.star):
            raise InternalConsistencyError(f"star closed form differs at {first_false(star == self.star)}")
        inv1, inv2 = self.inverse_formulas()
        x = np.arange(self.n)
        for name, table, inv in (("bullet", self.bullet, inv1), ("star", self.star, inv2)):
            if not ((table[x, inv] == self.unit).all() and (table[inv, x] == self.unit).all()):
                raise InternalConsistencyError(f"{name} inverse formula fails")
        if not ((self.bullet[self.unit] == x).all() and (self.star[self.unit] == x).all()):
            raise InternalConsistencyError("transported unit is not (e_H, B(e_H)^-1)")

    def factors(self) -> tuple[np.ndarray, np.ndarray]:
        """H x {e_G} and {e_H} x G in the relabelled carrier."""
        nG, nH = self.action.G.n, self.action.H.n
        left = self.relabel[np.arange(nH) * nG]
        right = self.relabel[np.arange(nG)]
        return np.sort(left), np.sort(right)


def transported_brace(G: Brace, H: Brace, phi, B, verify: bool = True) -> TransportedBrace:
    action = phi if isinstance(phi, SemiTrivialAction) else _action(G, H, phi)
    tb = TransportedBrace(action, B)
    if verify:
        tb.verify()
    return tb


def _action(G: Brace, H: Brace, phi) -> SemiTrivialAction:
    from .rota_baxter import make_semi_trivial_action

    return make_semi_trivial_action(G, H, phi)


def factor_ideal_criterion(G: Brace, H: Brace, phi, B) -> bool:
    """Does the transported brace factor through H x {e} and {e} x G?"""
    tb = transported_brace(G, H, phi, B, verify=False)
    left, right = tb.factors()
    return admits_factorization(tb.brace, left, right)


def mp_from_enhanced_rbo(rbo: RelativeRBO) -> MatchedPairBraces:
    """sigma trivial, theta = (Phi(a) h, a); checked, and its double matched with xi_B."""
    if not rbo.enhanced:
        raise KindError("the matched pair construction needs an enhanced operator")
    G, H, phi = rbo.G, rbo.H, rbo.action.phi
    ident_h = np.tile(np.arange(H.n, dtype=IDX), (G.n, 1))
    ident_g = np.tile(np.arange(G.n, dtype=IDX)[:, None], (1, H.n))
    sigma = (ident_h, ident_g)
    theta = (np.asarray(phi, dtype=IDX), ident_g)
    mp = make_mp_braces(G, H, sigma, theta)
    double = double_brace(mp, check=False)
    tb = transported_brace(G, H, rbo.action, rbo.B)
    if not transport_matches_double(tb, double):
        raise InternalConsistencyError("xi_B does not carry the transported brace onto the double")
    if enhance_property_witness(rbo.action, rbo.B) is not None:
        raise InternalConsistencyError("enhanced operator fails a o B(k) = B(Phi(a)k).a")
    return mp


def transport_matches_double(tb: TransportedBrace, double: Brace) -> bool:
    """Table equality after relabelling by xi_B, plus xi_B as an explicit brace hom."""
    xi, xi_inv = tb.xi, tb.xi_inv
    relabelled_d = xi[tb.bullet[np.ix_(xi_inv, xi_inv)]]
    relabelled_c = xi[tb.star[np.ix_(xi_inv, xi_inv)]]
    if not (np.array_equal(relabelled_d, double.d) and np.array_equal(relabelled_c, double.c)):
        return False
    if tb.unit != 0:
        return False
    return brace_hom_witness(tb.brace, double, xi) is None
