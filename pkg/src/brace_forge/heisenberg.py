"""The Heisenberg two-sided brace over F_p and its linear Rota-Baxter operators.

Coordinates (x1, x2, x3) are stored at index x1*p^2 + x2*p + x3, the bracket is
[x, y] = (x1 y2 - x2 y1) e3 and x o y = x + y + [x, y]/2.
"""
from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
import sympy

from .braces import Brace, CarrierMap, make_brace
from .config import check_carrier
from .errors import BoundError, InternalConsistencyError, StructureError
from .groups import IDX, GroupTable
from .rota_baxter import (
    TwoSidedRBO,
    adjoint_action,
    adjoint_table,
    enumerate_relative_rbos,
    validate_two_sided_rbo,
)

LABELS = ("enhanced", "class_i", "class_ii_iii", "none")
CENSUS_BRUTE_LIMIT = 3**9


@dataclass(frozen=True)
class PrimeField:
    p: int

    def __post_init__(self):
        if self.p == 2:
            raise StructureError("p = 2 has no element 1/2")
        if self.p < 2 or not sympy.isprime(self.p):
            raise StructureError(f"{self.p} is not an odd prime")

    @property
    def half(self) -> int:
        return pow(2, -1, self.p)

    def inv(self, x: int) -> int:
        if x % self.p == 0:
            raise ZeroDivisionError("0 has no inverse")
        return pow(x, -1, self.p)

    def roots(self, coeffs: tuple[int, ...]) -> list[int]:
        """Roots of sum c_i u^i by exhaustion."""
        return [u for u in range(self.p) if sum(c * u**i for i, c in enumerate(coeffs)) % self.p == 0]


@dataclass(frozen=True)
class HeisenbergCodec:
    p: int

    @property
    def n(self) -> int:
        return self.p**3

    def encode(self, x1: int, x2: int, x3: int) -> int:
        p = self.p
        return (x1 % p) * p * p + (x2 % p) * p + (x3 % p)

    def decode(self, index: int) -> tuple[int, int, int]:
        p = self.p
        return index // (p * p), (index // p) % p, index % p

    @property
    def basis(self) -> tuple[int, int, int]:
        return self.encode(1, 0, 0), self.encode(0, 1, 0), self.encode(0, 0, 1)

    def coords(self) -> np.ndarray:
        """(n, 3) array of coordinates in index order."""
        idx = np.arange(self.n)
        p = self.p
        return np.stack([idx // (p * p), (idx // p) % p, idx % p], axis=1)

    def encode_array(self, xs: np.ndarray) -> np.ndarray:
        xs = np.asarray(xs) % self.p
        return (xs[..., 0] * self.p * self.p + xs[..., 1] * self.p + xs[..., 2]).astype(IDX)

    def bracket(self, x: int, y: int) -> int:
        a, b = self.decode(x), self.decode(y)
        return self.encode(0, 0, a[0] * b[1] - a[1] * b[0])


@lru_cache(maxsize=8)
def build_heisenberg_brace(p: int) -> tuple[Brace, HeisenbergCodec]:
    field_ = PrimeField(p)
    codec = HeisenbergCodec(p)
    check_carrier(codec.n, "Heisenberg carrier")
    X = codec.coords()
    s = X[:, None, :] + X[None, :, :]
    dot = codec.encode_array(s)
    br = X[:, None, 0] * X[None, :, 1] - X[:, None, 1] * X[None, :, 0]
    s[..., 2] += field_.half * br
    circ = codec.encode_array(s)
    brace = make_brace(GroupTable(dot, check=False), GroupTable(circ, check=False), "brace")
    if not brace.two_sided:
        raise InternalConsistencyError("Heisenberg brace failed two-sidedness")
    return brace, codec


@dataclass(frozen=True)
class LinearMap3:
    """3x3 matrix over F_p acting on coordinate columns; rows[i][j] is B_{i+1, j+1}."""

    rows: tuple[tuple[int, int, int], tuple[int, int, int], tuple[int, int, int]]
    p: int

    def __post_init__(self):
        PrimeField(self.p)
        rows = tuple(tuple(int(v) % self.p for v in r) for r in self.rows)
        if len(rows) != 3 or any(len(r) != 3 for r in rows):
            raise StructureError("a linear map needs a 3x3 matrix")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def from_entries(cls, p: int, **entries: int) -> LinearMap3:
        """LinearMap3.from_entries(3, B31=1) sets B_31 = 1, rest 0."""
        m = [[0, 0, 0] for _ in range(3)]
        for key, value in entries.items():
            if len(key) != 3 or key[0] != "B" or key[1] not in "123" or key[2] not in "123":
                raise StructureError(f"unknown entry name {key!r}")
            m[int(key[1]) - 1][int(key[2]) - 1] = value
        return cls(tuple(tuple(r) for r in m), p)

    def entry(self, i: int, j: int) -> int:
        return self.rows[i - 1][j - 1]

    def array(self) -> np.ndarray:
        return np.asarray(self.rows, dtype=np.int64)


def linear_to_carrier(m: LinearMap3, p: int) -> CarrierMap:
    if m.p != p:
        raise StructureError(f"matrix lives over F_{m.p}, carrier over F_{p}")
    codec = HeisenbergCodec(p)
    return CarrierMap.of(codec.encode_array(codec.coords() @ m.array().T), codec.n)


def classify_linear_rbo(m: LinearMap3, p: int) -> str:
    """Most specific label among enhanced, class_i, class_ii_iii, none."""
    if m.p != p:
        raise StructureError(f"matrix lives over F_{m.p}, classification asked over F_{p}")
    B = m.entry
    if all(B(i, j) == 0 for i in (1, 2, 3) for j in (1, 2, 3) if (i, j) not in ((3, 1), (3, 2))):
        return "enhanced"
    if B(1, 3) or B(2, 3):
        return "none"
    if B(3, 3) == 0:
        det = (B(1, 1) * B(2, 2) - B(1, 2) * B(2, 1)) % p
        return "class_i" if det == 0 else "none"
    u, t = B(1, 1), B(3, 3)
    if B(1, 2) == 0 and B(2, 1) == 0 and B(2, 2) == u and (u * u - 2 * t * u - t) % p == 0:
        return "class_ii_iii"
    return "none"


def all_matrices(p: int) -> np.ndarray:
    """(p^9, 3, 3) array, entries in row-major odometer order (B33 fastest)."""
    grid = np.array(list(itertools.product(range(p), repeat=9)), dtype=np.int64)
    return grid.reshape(-1, 3, 3)


def _rbo_mask(brace: Brace, images: np.ndarray, chunk: int = 512) -> np.ndarray:
    """Vectorized twisted identity B(x) o B(y) = B(x o Ad_{B(x)} y) for many maps at once.

    Additivity is automatic for matrix maps.
    """
    n = brace.n
    c = brace.c
    ad = adjoint_table(brace)
    rows = np.arange(n)[None, :, None]
    ok = np.empty(images.shape[0], dtype=bool)
    for start in range(0, images.shape[0], chunk):
        B = images[start:start + chunk]
        lhs = c[B[:, :, None], B[:, None, :]]
        arg = c[rows, ad[B]]
        rhs = np.take_along_axis(B, arg.reshape(B.shape[0], -1), axis=1).reshape(lhs.shape)
        ok[start:start + chunk] = (lhs == rhs).all(axis=(1, 2))
    return ok


@dataclass
class Census:
    p: int
    counts: dict[str, int]
    rbo_count: int
    enhanced_count: int
    # set equalities: passing the operator check vs labelled != none, and enhanced subsets
    rbo_sets_agree: bool
    enhanced_sets_agree: bool
    pruned_agrees: bool | None
    brute_force: bool
    # (matrix, label, passes the operator check)
    members: list[tuple[LinearMap3, str, bool]] = field(repr=False, default_factory=list)
    elapsed: float = 0.0

    @property
    def ok(self) -> bool:
        return self.rbo_sets_agree and self.enhanced_sets_agree and self.pruned_agrees is not False

    def lines(self) -> list[str]:
        out = [f"census p={self.p}: {'ok' if self.ok else 'FAIL'}"]
        for label in LABELS[:-1]:
            out.append(f"census p={self.p} {label}: {self.counts.get(label, 0)}")
        out.append(f"census p={self.p} operators: {self.rbo_count}")
        out.append(f"census p={self.p} enhanced operators: {self.enhanced_count}")
        out.append(f"census p={self.p} classifier agrees: {self.rbo_sets_agree and self.enhanced_sets_agree}")
        if self.pruned_agrees is not None:
            out.append(f"census p={self.p} pruned search agrees: {self.pruned_agrees}")
        return out


def census(p: int = 3, brute_force: bool | None = None, pruned: bool = True) -> Census:
    """Every linear operator on the Heisenberg brace, checked and classified.

    The brute-force path tests all p^9 matrices; the pruned path runs the
    generic enumerator.  Both must give the same operator set, and the set
    labelled != none by classify_linear_rbo must equal it.
    """
    start = time.perf_counter()
    brace, codec = build_heisenberg_brace(p)
    if brute_force is None:
        brute_force = p**9 <= CENSUS_BRUTE_LIMIT
    if brute_force and p**9 > CENSUS_BRUTE_LIMIT:
        raise BoundError(f"brute-force census over {p}^9 matrices exceeds {CENSUS_BRUTE_LIMIT}")
    if not brute_force and not pruned:
        raise StructureError("census needs at least one search path")
    X = codec.coords()

    def image_of(mat: np.ndarray) -> np.ndarray:
        return codec.encode_array(X @ mat.T)

    action = adjoint_action(brace)
    passing: dict[tuple[int, ...], bool] = {}
    if brute_force:
        mats = all_matrices(p)
        images = codec.encode_array(np.einsum("nj,mij->mni", X, mats))
        for i in np.flatnonzero(_rbo_mask(brace, images)):
            report = validate_two_sided_rbo(brace, images[i])
            if not report:
                raise InternalConsistencyError("batched check and per-map validator disagree")
            passing[tuple(int(v) for v in images[i])] = report["enhanced"].ok
    pruned_agrees = None
    if pruned:
        found = {r.image: r.enhanced for r in enumerate_relative_rbos(action)}
        if brute_force:
            pruned_agrees = found == passing
        else:
            passing = found

    members = []
    labelled: dict[tuple[int, ...], str] = {}
    counts = {label: 0 for label in LABELS[:-1]}
    for mat in all_matrices(p) if p**9 <= CENSUS_BRUTE_LIMIT else _candidate_matrices(p):
        m = LinearMap3(tuple(tuple(int(v) for v in r) for r in mat), p)
        label = classify_linear_rbo(m, p)
        if label == "none":
            continue
        img = tuple(int(v) for v in image_of(mat))
        labelled[img] = label
        counts[label] += 1
        members.append((m, label, img in passing))
    rbo_agree = set(labelled) == set(passing)
    enh_agree = ({k for k, v in labelled.items() if v == "enhanced"}
                 == {k for k, v in passing.items() if v})
    return Census(
        p=p,
        counts=counts,
        rbo_count=len(passing),
        enhanced_count=sum(passing.values()),
        rbo_sets_agree=rbo_agree,
        enhanced_sets_agree=enh_agree,
        pruned_agrees=pruned_agrees,
        brute_force=brute_force,
        members=members,
        elapsed=time.perf_counter() - start,
    )


def _candidate_matrices(p: int):
    """Matrices that could carry a label (B13 = B23 = 0), for p beyond the brute-force bound."""
    for e in itertools.product(range(p), repeat=7):
        b11, b12, b21, b22, b31, b32, b33 = e
        yield np.array([[b11, b12, 0], [b21, b22, 0], [b31, b32, b33]])


def census_operators(p: int = 3) -> list[tuple[LinearMap3, str, TwoSidedRBO]]:
    """Validated operator objects for every labelled matrix, in matrix order."""
    brace, _ = build_heisenberg_brace(p)
    action = adjoint_action(brace)
    out = []
    for m, label, ok in census(p, pruned=False).members:
        if not ok:
            raise InternalConsistencyError(f"labelled matrix {m.rows} is not an operator")
        report = validate_two_sided_rbo(brace, linear_to_carrier(m, p).array())
        out.append((m, label, TwoSidedRBO(action, linear_to_carrier(m, p).array(), report["enhanced"].ok)))
    return out


# -- exact rational check ---------------------------------------------------------------


def _sym_ops():
    half = sympy.Rational(1, 2)

    def br(x, y):
        return sympy.Matrix([0, 0, x[0] * y[1] - x[1] * y[0]])

    def circ(x, y):
        return x + y + half * br(x, y)

    def ad(x, y):
        return y + br(x, y)

    return br, circ, ad


def symbolic_families() -> dict[str, tuple[sympy.Matrix, tuple[sympy.Symbol, ...]]]:
    """Rational parametrizations of the operator classes.

    class_i uses a rank-one upper block (a c, a d; b c, b d); class_ii_iii uses
    u = l, B33 = l^2/(2l+1), which solves u^2 - 2 B33 u - B33 = 0 for both roots.
    """
    a, b, c, d, s, t, l = sympy.symbols("a b c d s t l")
    return {
        "enhanced": (sympy.Matrix([[0, 0, 0], [0, 0, 0], [s, t, 0]]), (s, t)),
        "class_i": (sympy.Matrix([[a * c, a * d, 0], [b * c, b * d, 0], [s, t, 0]]), (a, b, c, d, s, t)),
        "class_ii_iii": (sympy.Matrix([[l, 0, 0], [0, l, 0], [s, t, l**2 / (2 * l + 1)]]), (l, s, t)),
    }


def symbolic_identities(label: str) -> dict[str, bool]:
    """Check the operator identities over Q with generic x, y (and translation a)."""
    M, _ = symbolic_families()[label]
    _, circ, ad = _sym_ops()
    x = sympy.Matrix(sympy.symbols("x1 x2 x3"))
    y = sympy.Matrix(sympy.symbols("y1 y2 y3"))
    z = sympy.Matrix(sympy.symbols("z1 z2 z3"))
    twisted = circ(M * x, M * y) - M * circ(x, ad(M * x, y))
    out = {
        "additive": sympy.simplify(M * (x + y) - M * x - M * y) == sympy.zeros(3, 1),
        "twisted": sympy.simplify(twisted) == sympy.zeros(3, 1),
    }
    enhanced = circ(M * x + z, M * y) - (M * circ(x, ad(M * x + z, y)) + z)
    out["enhanced"] = sympy.simplify(enhanced) == sympy.zeros(3, 1)
    return out
