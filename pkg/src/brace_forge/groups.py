"""Cayley-table groups on carriers {0, ..., n-1} with the identity pinned at 0."""
from __future__ import annotations

import hashlib
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .config import check_carrier
from .errors import AxiomError, BoundError, StructureError
from .report import Report

IDX = np.int32
SUBGROUP_SEARCH_LIMIT = 64

Permutation = tuple[int, ...]


def as_table(table, rows: int | None = None, cols: int | None = None, values: int | None = None,
             what: str = "table", check_range: bool = True) -> np.ndarray:
    """Coerce to a 2-d int array, checking shape and (optionally) entry range."""
    try:
        arr = np.asarray(table)
    except Exception as exc:  # ragged nested lists
        raise StructureError(f"{what}: not a rectangular table ({exc})") from None
    if arr.dtype == object or arr.ndim != 2:
        raise StructureError(f"{what}: expected a 2-d table, got shape {arr.shape}")
    if arr.size and not np.issubdtype(arr.dtype, np.integer):
        raise StructureError(f"{what}: entries must be integers")
    r, c = arr.shape
    if rows is None and cols is None and r != c:
        raise StructureError(f"{what}: expected a square table, got {r}x{c}")
    if rows is not None and r != rows:
        raise StructureError(f"{what}: expected {rows} rows, got {r}")
    if cols is not None and c != cols:
        raise StructureError(f"{what}: expected {cols} columns, got {c}")
    if r == 0 or c == 0:
        raise StructureError(f"{what}: empty table")
    bound = c if values is None else values
    if check_range and (arr.min() < 0 or arr.max() >= bound):
        bad = np.argwhere((arr < 0) | (arr >= bound))[0]
        raise StructureError(f"{what}: entry {tuple(map(int, bad))} = {int(arr[tuple(bad)])} "
                             f"outside 0..{bound - 1}")
    return np.ascontiguousarray(arr, dtype=np.int64 if not check_range else IDX)


def as_vector(seq, length: int, values: int, what: str = "map") -> np.ndarray:
    arr = np.asarray(getattr(seq, "image", seq))
    if arr.ndim != 1 or arr.shape[0] != length:
        raise StructureError(f"{what}: expected {length} entries, got shape {arr.shape}")
    if length and (arr.min() < 0 or arr.max() >= values):
        raise StructureError(f"{what}: entries must lie in 0..{values - 1}")
    return np.ascontiguousarray(arr, dtype=IDX)


def first_false(mask: np.ndarray) -> tuple[int, ...] | None:
    """Row-major first index where ``mask`` is False, or None."""
    if mask.all():
        return None
    return tuple(int(i) for i in np.argwhere(~mask)[0])


def scan(n_outer: int, row_ok) -> tuple[int, ...] | None:
    """Lexicographically first failing tuple of an identity, looping the outer index.

    ``row_ok(a)`` returns a boolean array over the remaining variables.
    """
    for a in range(n_outer):
        hit = first_false(np.asarray(row_ok(a)))
        if hit is not None:
            return (a, *hit)
    return None


def digest(*arrays: np.ndarray) -> bytes:
    h = hashlib.blake2b(digest_size=16)
    for arr in arrays:
        h.update(str(arr.shape).encode())
        h.update(np.ascontiguousarray(arr, dtype=IDX).tobytes())
    return h.digest()


def validate_group(table) -> Report:
    """Check closure, identity at 0, two-sided inverses and associativity.

    Dimension problems raise StructureError; axiom failures are reported with
    the first witness.
    """
    if isinstance(table, GroupTable):
        table = table.table
    raw = as_table(table, what="group table", check_range=False)
    n = raw.shape[0]
    check_carrier(n)
    report = Report("group")
    if not report.add("closure", first_false((raw >= 0) & (raw < n))):
        return report
    t = raw.astype(IDX)
    ident = np.arange(n, dtype=IDX)
    row = first_false(t[0] == ident)
    col = first_false(t[:, 0] == ident)
    if not report.add("identity", row if row is not None else col):
        return report
    has_right = (t == 0).any(axis=1)
    witness = first_false(has_right)
    if witness is None:
        inv = (t == 0).argmax(axis=1)
        witness = first_false(t[inv, ident] == 0)
    if not report.add("inverse", witness):
        return report
    report.add("associativity", scan(n, lambda a: t[t[a]] == t[a][t]))
    return report


class GroupTable:
    """A validated finite group; ``table[a, b]`` is a*b, identity is 0."""

    def __init__(self, table, check: bool = True):
        if check:
            report = validate_group(table)
            if not report:
                raise AxiomError(report)
        arr = as_table(table)
        arr.setflags(write=False)
        self.table = arr
        self.n = arr.shape[0]
        inv = (arr == 0).argmax(axis=1).astype(IDX)
        inv.setflags(write=False)
        self.inv = inv

    def __repr__(self):
        return f"GroupTable(n={self.n})"

    def __eq__(self, other):
        return isinstance(other, GroupTable) and np.array_equal(self.table, other.table)

    def __hash__(self):
        return hash(self.digest)

    @cached_property
    def digest(self) -> bytes:
        return digest(self.table)

    def __call__(self, a, b):
        return self.table[a, b]

    @cached_property
    def is_abelian(self) -> bool:
        return bool((self.table == self.table.T).all())

    def commutator_witness(self):
        return first_false(self.table == self.table.T)

    def power(self, a: int, k: int) -> int:
        x = 0
        for _ in range(k % self.order(a)):
            x = int(self.table[x, a])
        return x

    @cached_property
    def orders(self) -> np.ndarray:
        orders = np.zeros(self.n, dtype=IDX)
        for a in range(self.n):
            x, k = a, 1
            while x != 0:
                x = int(self.table[x, a])
                k += 1
            orders[a] = k
        return orders

    def order(self, a: int) -> int:
        return int(self.orders[a])

    def closure(self, gens: Iterable[int]) -> tuple[int, ...]:
        return closure(self.table, gens)

    def is_subgroup(self, subset) -> bool:
        s = np.asarray(sorted(set(int(x) for x in subset)), dtype=IDX)
        if s.size == 0 or s[0] != 0:
            return False
        member = np.zeros(self.n, dtype=bool)
        member[s] = True
        return bool(member[self.table[np.ix_(s, s)]].all() and member[self.inv[s]].all())


def closure(table: np.ndarray, gens: Iterable[int]) -> tuple[int, ...]:
    """Subgroup generated by ``gens`` (finite, so closure under products suffices)."""
    table = np.asarray(table)
    member = np.zeros(table.shape[0], dtype=bool)
    member[0] = True
    gens = np.asarray(sorted(set(int(g) for g in gens)), dtype=IDX)
    frontier = np.array([0], dtype=IDX)
    if gens.size:
        member[gens] = True
        frontier = np.concatenate([frontier, gens])
    while frontier.size:
        new = np.unique(table[np.ix_(frontier, gens)]) if gens.size else np.empty(0, IDX)
        new = new[~member[new]]
        member[new] = True
        frontier = new
    return tuple(int(x) for x in np.flatnonzero(member))


def greedy_generators(group: GroupTable) -> list[int]:
    """Greedy generating set: each step adds the element whose addition gives the
    largest subgroup, lowest index on ties."""
    gens: list[int] = []
    current = (0,)
    while len(current) < group.n:
        inside = set(current)
        best, best_size = None, -1
        for g in range(group.n):
            if g in inside:
                continue
            size = len(group.closure(gens + [g]))
            if size > best_size:
                best, best_size = g, size
        gens.append(best)
        current = group.closure(gens)
    return gens


def abelian_generators(group: GroupTable) -> list[int]:
    """Minimal generating sequence of an abelian group.

    Picking the element that maximises the generated subgroup is optimal for
    abelian groups: a cyclic subgroup of maximal order is a direct summand.
    """
    if not group.is_abelian:
        raise StructureError(f"abelian_generators needs a commutative table; "
                             f"{group.commutator_witness()} do not commute")
    return greedy_generators(group)


def subgroups(group: GroupTable, limit: int = SUBGROUP_SEARCH_LIMIT) -> list[tuple[int, ...]]:
    """All subgroups, by breadth-first extension of known subgroups by one element."""
    if group.n > limit:
        raise BoundError(f"subgroup search capped at {limit} elements, carrier has {group.n}")
    found = {(0,)}
    frontier = [(0,)]
    while frontier:
        nxt = []
        for s in frontier:
            inside = set(s)
            for g in range(group.n):
                if g in inside:
                    continue
                t = group.closure(s + (g,))
                if t not in found:
                    found.add(t)
                    nxt.append(t)
        frontier = nxt
    return sorted(found, key=lambda s: (len(s), s))


def is_permutation(image: Sequence[int], n: int | None = None) -> bool:
    arr = np.asarray(image)
    n = arr.shape[0] if n is None else n
    return arr.shape == (n,) and np.array_equal(np.sort(arr), np.arange(n))


def compose(f, g) -> np.ndarray:
    """(f o g)(x) = f(g(x))."""
    return np.asarray(f)[np.asarray(g)]


def invert(perm) -> np.ndarray:
    perm = np.asarray(perm)
    out = np.empty_like(perm)
    out[perm] = np.arange(perm.shape[0], dtype=perm.dtype)
    return out


def is_group_hom(src: np.ndarray, dst: np.ndarray, image: np.ndarray):
    """Witness (a, b) with f(a*b) != f(a)*f(b), or None."""
    return first_false(image[src] == dst[np.ix_(image, image)])


def group_automorphisms(group: GroupTable) -> list[Permutation]:
    """Every automorphism, sorted by image sequence.

    Backtracks over images of a generating set; a partial assignment is extended
    along the Cayley graph, so consistency on every edge makes it a homomorphism.
    """
    t, n = group.table, group.n
    gens = abelian_generators(group) if group.is_abelian else greedy_generators(group)
    orders = group.orders
    found: list[Permutation] = []

    def extend(assigned: list[tuple[int, int]]) -> np.ndarray | None:
        sigma = np.full(n, -1, dtype=np.int64)
        sigma[0] = 0
        queue = [0]
        for x in queue:
            for g, img in assigned:
                y, v = int(t[x, g]), int(t[sigma[x], img])
                if sigma[y] < 0:
                    sigma[y] = v
                    queue.append(y)
                elif sigma[y] != v:
                    return None
        used = sigma[sigma >= 0]
        if np.unique(used).size != used.size:
            return None
        return sigma

    def search(depth: int, assigned: list[tuple[int, int]]):
        if depth == len(gens):
            sigma = extend(assigned)
            if sigma is not None and (sigma >= 0).all() and is_group_hom(t, t, sigma) is None:
                found.append(tuple(int(x) for x in sigma))
            return
        g = gens[depth]
        for img in range(n):
            if orders[img] != orders[g]:
                continue
            trial = assigned + [(g, img)]
            if extend(trial) is not None:
                search(depth + 1, trial)

    search(0, [])
    return sorted(found)


def cyclic_group(n: int) -> GroupTable:
    a = np.arange(n)
    return GroupTable((a[:, None] + a[None, :]) % n, check=False)


def direct_product_table(t1: np.ndarray, t2: np.ndarray) -> np.ndarray:
    """Table on pairs, index (x, y) -> x*|second| + y."""
    n1, n2 = t1.shape[0], t2.shape[0]
    x = np.arange(n1 * n2)
    a, b = np.divmod(x, n2)
    return (t1[np.ix_(a, a)] * n2 + t2[np.ix_(b, b)]).astype(IDX)


def direct_product(g1: GroupTable, g2: GroupTable) -> GroupTable:
    return GroupTable(direct_product_table(g1.table, g2.table), check=False)


def abelian_group(*orders: int) -> GroupTable:
    """Z_{m1} x Z_{m2} x ..., first factor varying slowest."""
    g = cyclic_group(1)
    for m in orders:
        g = direct_product(g, cyclic_group(m)) if g.n > 1 else cyclic_group(m)
    return g
