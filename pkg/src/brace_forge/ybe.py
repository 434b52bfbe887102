"""Set-theoretic Yang-Baxter solutions as flat tables over pair indices a*n + b."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .braces import Brace
from .errors import InternalConsistencyError, StructureError
from .groups import first_false, invert
from .post import PostBrace
from .report import Report
from .rota_baxter import RelativeRBO, induce_post_brace

TRIPLE_CHUNK = 1 << 20


def _bijection_witness(table: np.ndarray) -> tuple[int, ...] | None:
    """First (i, j) with table[i] == table[j]; for a self-map of a finite set this is bijectivity."""
    m = table.shape[0]
    seen = np.full(m, -1, dtype=np.int64)
    for i, v in enumerate(table.tolist()):
        if seen[v] >= 0:
            return int(seen[v]), i
        seen[v] = i
    return None


class BraidedMap:
    """A bijection R on pairs; R[a*n + b] = c*n + d means R(a, b) = (c, d)."""

    def __init__(self, n: int, R):
        R = np.asarray(R, dtype=np.int64).ravel()
        if R.shape[0] != n * n:
            raise StructureError(f"pair map needs {n * n} entries, got {R.shape[0]}")
        if R.size and (R.min() < 0 or R.max() >= n * n):
            raise StructureError(f"pair map entries must lie in 0..{n * n - 1}")
        hit = _bijection_witness(R)
        if hit is not None:
            i, j = hit
            raise StructureError(f"pair map is not a bijection: {divmod(i, n)} and {divmod(j, n)} "
                                 f"both go to {divmod(int(R[i]), n)}")
        R.setflags(write=False)
        self.n = n
        self.R = R

    def __repr__(self):
        return f"BraidedMap(n={self.n})"

    def __eq__(self, other):
        return isinstance(other, BraidedMap) and self.n == other.n and np.array_equal(self.R, other.R)

    def __call__(self, a: int, b: int) -> tuple[int, int]:
        return divmod(int(self.R[a * self.n + b]), self.n)

    @cached_property
    def first(self) -> np.ndarray:
        """first[a, b] = phi_a(b)."""
        return (self.R // self.n).reshape(self.n, self.n)

    @cached_property
    def second(self) -> np.ndarray:
        """second[a, b] = psi_b(a)."""
        return (self.R % self.n).reshape(self.n, self.n)

    def ybe_witness(self) -> tuple[int, int, int] | None:
        """First (a, b, c) with R12 R23 R12 != R23 R12 R23."""
        n, f, s = self.n, self.first, self.second

        def r12(x, y, z):
            return f[x, y], s[x, y], z

        def r23(x, y, z):
            return x, f[y, z], s[y, z]

        total = n**3
        for start in range(0, total, TRIPLE_CHUNK):
            t = np.arange(start, min(total, start + TRIPLE_CHUNK))
            x, rest = np.divmod(t, n * n)
            y, z = np.divmod(rest, n)
            lhs = r12(*r23(*r12(x, y, z)))
            rhs = r23(*r12(*r23(x, y, z)))
            ok = (lhs[0] == rhs[0]) & (lhs[1] == rhs[1]) & (lhs[2] == rhs[2])
            if not ok.all():
                i = int(np.flatnonzero(~ok)[0])
                return int(x[i]), int(y[i]), int(z[i])
        return None

    def involutive_witness(self) -> tuple[int, int] | None:
        hit = first_false(self.R[self.R] == np.arange(self.n * self.n))
        return None if hit is None else divmod(hit[0], self.n)

    def left_nondeg_witness(self) -> tuple[int] | None:
        return first_false((np.sort(self.first, axis=1) == np.arange(self.n)).all(axis=1))

    def right_nondeg_witness(self) -> tuple[int] | None:
        # psi_b is column b of second
        return first_false((np.sort(self.second, axis=0) == np.arange(self.n)[:, None]).all(axis=0))

    @cached_property
    def report(self) -> Report:
        report = Report("solution")
        report.add("ybe", self.ybe_witness())
        report.add("involutive", self.involutive_witness(), informational=True)
        report.add("left_nondeg", self.left_nondeg_witness(), informational=True)
        report.add("right_nondeg", self.right_nondeg_witness(), informational=True)
        return report

    @property
    def is_solution(self) -> bool:
        return self.report["ybe"].ok

    @property
    def involutive(self) -> bool:
        return self.report["involutive"].ok

    @property
    def left_nondeg(self) -> bool:
        return self.report["left_nondeg"].ok

    @property
    def right_nondeg(self) -> bool:
        return self.report["right_nondeg"].ok

    @property
    def nondegenerate(self) -> bool:
        return self.left_nondeg and self.right_nondeg


def pair_map(n: int, first: np.ndarray, second: np.ndarray) -> np.ndarray:
    return (np.asarray(first, dtype=np.int64) * n + np.asarray(second, dtype=np.int64)).ravel()


def check_braided(R, n: int | None = None) -> BraidedMap:
    """Wrap a pair table; non-bijective input raises StructureError."""
    if isinstance(R, BraidedMap):
        return R
    R = np.asarray(R).ravel()
    if n is None:
        n = int(round(R.shape[0] ** 0.5))
    return BraidedMap(n, R)


def flip(n: int) -> BraidedMap:
    a, b = np.divmod(np.arange(n * n), n)
    return BraidedMap(n, b * n + a)


def identity_map(n: int) -> BraidedMap:
    return BraidedMap(n, np.arange(n * n))


def _brace_pair_map(G: Brace) -> np.ndarray:
    lam = G.lam
    second = G.c[G.cinv[lam], G.c]
    return pair_map(G.n, lam, second)


def solution_from_brace(G: Brace) -> BraidedMap:
    """R_G(a, b) = (lambda_a(b), bar(lambda_a(b)) o a o b)."""
    G.require_brace("the involutive brace solution")
    R = BraidedMap(G.n, _brace_pair_map(G))
    bad = [v.name for v in R.report.verdicts if not v.ok]
    if bad:
        raise InternalConsistencyError(f"brace solution fails {bad}")
    return R


def solution_from_skew_brace(G: Brace) -> BraidedMap:
    """The same formula on a skew brace; a non-degenerate solution, not necessarily involutive."""
    R = BraidedMap(G.n, _brace_pair_map(G))
    if not (R.is_solution and R.nondegenerate):
        raise InternalConsistencyError("skew brace solution is not a non-degenerate solution")
    return R


def derived_solution(R: BraidedMap) -> BraidedMap:
    """R^d(a, b) = (phi_a psi_{phi_b^-1(a)}(b), a)."""
    if not R.left_nondeg:
        raise StructureError(f"derived solution needs left non-degeneracy; phi_{R.left_nondeg_witness()[0]} "
                             f"is not a bijection")
    n = R.n
    phi, second = R.first, R.second
    phi_inv = np.stack([invert(row) for row in phi])
    a, b = np.divmod(np.arange(n * n), n)
    c = phi_inv[b, a]
    # psi_c(b) = second component of R(b, c)
    first = phi[a, second[b, c]]
    return BraidedMap(n, first * n + a)


def drinfeld_witness(R: BraidedMap, Rp: BraidedMap, omega) -> tuple[int, int] | None:
    """First pair (a, b) with omega(R(a, b)) != R'(omega(a, b))."""
    w = np.asarray(omega, dtype=np.int64).ravel()
    if w.shape[0] != R.n * R.n or (w.size and (w.min() < 0 or w.max() >= Rp.n * Rp.n)):
        raise StructureError("omega must map pairs of the first carrier to pairs of the second")
    hit = first_false(w[R.R] == Rp.R[w])
    return None if hit is None else divmod(hit[0], R.n)


def is_drinfeld_hom(R: BraidedMap, Rp: BraidedMap, omega) -> bool:
    return drinfeld_witness(R, Rp, omega) is None


def is_drinfeld_iso(R: BraidedMap, Rp: BraidedMap, omega) -> bool:
    w = np.asarray(omega).ravel()
    return R.n == Rp.n and _bijection_witness(w) is None and is_drinfeld_hom(R, Rp, w)


def product_pair_map(f, n: int, m: int) -> np.ndarray:
    f = np.asarray(f, dtype=np.int64)
    a, b = np.divmod(np.arange(n * n), n)
    return f[a] * m + f[b]


def strict_hom(R: BraidedMap, Rp: BraidedMap, f) -> bool:
    """(f x f) R = R' (f x f)."""
    return is_drinfeld_hom(R, Rp, product_pair_map(f, R.n, Rp.n))


@dataclass(frozen=True)
class PostBraceSolutions:
    R1: BraidedMap
    R2: BraidedMap
    omega_bar: np.ndarray
    omega1: np.ndarray
    omega2: np.ndarray


def omega_from_lambda(lam: np.ndarray) -> np.ndarray:
    """(a, b) -> (lambda_a(b), a)."""
    n = lam.shape[0]
    a, b = np.divmod(np.arange(n * n), n)
    return lam[a, b].astype(np.int64) * n + a


def post_brace_solutions(pb: PostBrace) -> PostBraceSolutions:
    """R1 from (G, ., o), R2 from (G, ., *) and omega_bar = omega2^-1 omega1."""
    n = pb.n
    R1 = solution_from_brace(pb.brace)
    R2 = solution_from_brace(pb.sub_adjacent)
    w1 = omega_from_lambda(pb.brace.lam)
    w2 = omega_from_lambda(pb.sub_adjacent.lam)
    tau = flip(n)
    for name, w, R in (("omega1", w1, R1), ("omega2", w2, R2)):
        if not is_drinfeld_iso(R, tau, w):
            raise InternalConsistencyError(f"{name} does not intertwine its solution with the flip")
    w_bar = invert(w2)[w1]
    # closed form: (a, b) -> (a, (L_a)^-1(lambda_a(b))) with L the lambda-map of (., *)
    lam_star_inv = np.stack([invert(row) for row in pb.sub_adjacent.lam])
    a, b = np.divmod(np.arange(n * n), n)
    closed = a * n + lam_star_inv[a, pb.brace.lam[a, b]]
    if not np.array_equal(w_bar, closed):
        raise InternalConsistencyError("omega2^-1 omega1 differs from its closed form")
    if not is_drinfeld_iso(R1, R2, w_bar):
        raise InternalConsistencyError("omega_bar is not a Drinfel'd isomorphism R1 -> R2")
    return PostBraceSolutions(R1, R2, w_bar, w1, w2)


def rrbo_solutions(rbo: RelativeRBO) -> PostBraceSolutions:
    """The pair (R, R^B) on H from the induced post-brace."""
    return post_brace_solutions(induce_post_brace(rbo))
