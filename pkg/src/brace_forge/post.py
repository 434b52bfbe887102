"""Post-groups and post-braces with their sub-adjacent and companion structures."""
from __future__ import annotations

from functools import cached_property

import numpy as np

from .braces import Brace, brace_hom_witness, make_brace
from .errors import AxiomError, InternalConsistencyError
from .groups import IDX, GroupTable, as_table, as_vector, first_false, invert, scan
from .report import Report


class PostGroup:
    """A group (G, o) with a table rhd[a, b] = a |> b.  Built by make_post_group."""

    def __init__(self, circ: GroupTable, rhd: np.ndarray):
        self.circ = circ
        rhd = as_table(rhd, circ.n, circ.n, what="rhd table")
        rhd.setflags(write=False)
        self.rhd = rhd

    @property
    def n(self) -> int:
        return self.circ.n

    @cached_property
    def star(self) -> np.ndarray:
        """Sub-adjacent product a * b = a o (a |> b)."""
        return self.circ.table[np.arange(self.n)[:, None], self.rhd]

    @cached_property
    def dagger(self) -> np.ndarray:
        """dagger[a] = (L_a)^-1(circ inverse of a), the inverse of a for *."""
        out = np.empty(self.n, dtype=IDX)
        for a in range(self.n):
            out[a] = invert(self.rhd[a])[self.circ.inv[a]]
        return out

    @cached_property
    def star_group(self) -> GroupTable:
        return GroupTable(self.star, check=False)


class PostBrace(PostGroup):
    """A brace with a |> table distributing over the dot operation."""

    def __init__(self, brace: Brace, rhd: np.ndarray, sub_adjacent: Brace | None = None):
        super().__init__(brace.circ, rhd)
        self.brace = brace
        if sub_adjacent is None:
            sub_adjacent = Brace(brace.dot, GroupTable(self.star, check=False), "brace")
        self.sub_adjacent = sub_adjacent

    def __repr__(self):
        return f"PostBrace(n={self.n})"


def _post_group_verdicts(report: Report, c: np.ndarray, rhd: np.ndarray) -> None:
    n = c.shape[0]
    sorted_rows = np.sort(rhd, axis=1)
    hit = first_false((sorted_rows == np.arange(n)).all(axis=1))
    if not report.add("rhd_bijective", hit):
        return
    # a |> (b o c) = (a |> b) o (a |> c)
    report.add("rhd_automorphism", scan(n, lambda a: rhd[a][c] == c[rhd[a][:, None], rhd[a][None, :]]))
    # (a o (a |> b)) |> c = a |> (b |> c)
    star = c[np.arange(n)[:, None], rhd]
    report.add("weighted_associativity", scan(n, lambda a: rhd[star[a]] == rhd[a][rhd]))
    report.add("unit_right", first_false(rhd[:, 0] == 0))
    report.add("unit_left", first_false(rhd[0] == np.arange(n)))


def validate_post_group(circ, rhd) -> Report:
    circ = circ if isinstance(circ, GroupTable) else GroupTable(circ)
    t = as_table(rhd, circ.n, circ.n, what="rhd table")
    report = Report("post-group")
    _post_group_verdicts(report, circ.table, t)
    return report


def make_post_group(circ, rhd) -> PostGroup:
    circ = circ if isinstance(circ, GroupTable) else GroupTable(circ)
    report = validate_post_group(circ, rhd)
    if not report:
        raise AxiomError(report)
    return PostGroup(circ, rhd)


def validate_post_brace(brace: Brace, rhd) -> Report:
    brace.require_brace("a post-brace")
    t = as_table(rhd, brace.n, brace.n, what="rhd table")
    report = Report("post-brace")
    _post_group_verdicts(report, brace.c, t)
    if report["rhd_bijective"].ok:
        d = brace.d
        report.add("dot_distributive", scan(brace.n, lambda a: t[a][d] == d[t[a][:, None], t[a][None, :]]))
    return report


def make_post_brace(brace: Brace, rhd) -> PostBrace:
    report = validate_post_brace(brace, rhd)
    if not report:
        raise AxiomError(report)
    pb = PostBrace(brace, rhd)
    try:
        sub = make_brace(brace.dot, pb.star_group, "brace")
    except AxiomError as exc:
        raise InternalConsistencyError(f"sub-adjacent structure is not a brace: {exc}") from None
    pb.sub_adjacent = sub
    return pb


def trivial_post_brace(brace: Brace) -> PostBrace:
    n = brace.n
    return make_post_brace(brace, np.tile(np.arange(n, dtype=IDX), (n, 1)))


def sub_adjacent_brace(pb: PostBrace) -> Brace:
    return pb.sub_adjacent


def dagger_inverse(pg: PostGroup, a: int) -> int:
    x = int(pg.dagger[a])
    if pg.star[a, x] != 0 or pg.star[x, a] != 0:
        raise InternalConsistencyError(f"dagger of {a} is not a two-sided * inverse")
    return x


def companion_skew_brace(pg: PostGroup) -> Brace:
    """The skew brace (G, o, *)."""
    try:
        return make_brace(pg.circ, pg.star_group, "skew")
    except AxiomError as exc:
        raise InternalConsistencyError(f"companion structure is not a skew brace: {exc}") from None


def post_brace_hom_witness(src: PostBrace, dst: PostBrace, psi):
    f = as_vector(psi, src.n, dst.n, "post-brace map")
    hit = brace_hom_witness(src.brace, dst.brace, f)
    if hit is not None:
        return hit
    hit = first_false(f[src.rhd] == dst.rhd[np.ix_(f, f)])
    if hit is not None:
        return "rhd", hit
    if brace_hom_witness(src.sub_adjacent, dst.sub_adjacent, f) is not None:
        raise InternalConsistencyError("post-brace hom fails on the sub-adjacent braces")
    return None


def is_post_brace_hom(src: PostBrace, dst: PostBrace, psi) -> bool:
    return post_brace_hom_witness(src, dst, psi) is None
