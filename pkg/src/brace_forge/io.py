"""Line-oriented text formats for groups, braces, post-braces, operators, actions,
solutions and matched pairs.

Every table block is a run of whitespace-separated integer rows.  Blank lines
between blocks are optional on input and always emitted; lines starting with
``#`` are comments.  Parsers check shape, range and the identity-at-0
convention and report the offending line; axioms are left to the validators.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .braces import KINDS, Brace, make_brace, validate_brace
from .config import check_carrier
from .errors import FormatError
from .groups import IDX, GroupTable
from .post import PostBrace, make_post_brace, validate_post_brace
from .report import Report
from .ybe import BraidedMap

MP_HEADERS = ("rharp", "lharp", "rharpd", "lharpd")


@dataclass(frozen=True, eq=False)
class BraceTables:
    dot: np.ndarray
    circ: np.ndarray
    kind: str = "brace"

    @property
    def n(self) -> int:
        return self.dot.shape[0]

    def __eq__(self, other):
        return (isinstance(other, BraceTables) and self.kind == other.kind
                and _same(self.dot, other.dot) and _same(self.circ, other.circ))

    def validate(self) -> Report:
        return validate_brace(self.dot, self.circ, self.kind)

    def build(self) -> Brace:
        return make_brace(self.dot, self.circ, self.kind)

    @classmethod
    def of(cls, brace: Brace) -> BraceTables:
        return cls(np.asarray(brace.d, dtype=IDX), np.asarray(brace.c, dtype=IDX), brace.kind)


@dataclass(frozen=True, eq=False)
class PostBraceTables:
    brace: BraceTables
    rhd: np.ndarray

    def __eq__(self, other):
        return isinstance(other, PostBraceTables) and self.brace == other.brace and _same(self.rhd, other.rhd)

    def validate(self) -> Report:
        return validate_post_brace(self.brace.build(), self.rhd)

    def build(self) -> PostBrace:
        return make_post_brace(self.brace.build(), self.rhd)


@dataclass(frozen=True, eq=False)
class ActionTables:
    """phi[a, h] = Phi(a)(h) for a semi-trivial action of G on H."""
    phi: np.ndarray

    def __eq__(self, other):
        return isinstance(other, ActionTables) and _same(self.phi, other.phi)


@dataclass(frozen=True, eq=False)
class MatchedPairTables:
    G: BraceTables
    H: BraceTables
    rharp: np.ndarray
    lharp: np.ndarray
    rharpd: np.ndarray
    lharpd: np.ndarray

    def __eq__(self, other):
        return (isinstance(other, MatchedPairTables) and self.G == other.G and self.H == other.H
                and all(_same(getattr(self, k), getattr(other, k)) for k in MP_HEADERS))

    @property
    def sigma(self):
        return self.rharp, self.lharp

    @property
    def theta(self):
        return self.rharpd, self.lharpd


def _same(x: np.ndarray, y: np.ndarray) -> bool:
    return x.shape == y.shape and bool((x == y).all())


class _Lines:
    def __init__(self, text: str):
        self.items = [(i + 1, line.strip()) for i, line in enumerate(text.splitlines())]
        self.items = [(no, s) for no, s in self.items if s and not s.startswith("#")]
        self.pos = 0

    def next(self, what: str) -> tuple[int, str]:
        if self.pos >= len(self.items):
            raise FormatError(f"expected {what}")
        item = self.items[self.pos]
        self.pos += 1
        return item

    def done(self) -> None:
        if self.pos < len(self.items):
            no, s = self.items[self.pos]
            raise FormatError(f"unexpected trailing content {s[:40]!r}", no)


def _header(lines: _Lines, keyword: str, keys: tuple[str, ...]) -> tuple[int, dict[str, str]]:
    no, line = lines.next(f"'{keyword}' header")
    parts = line.split()
    if parts[0] != keyword:
        raise FormatError(f"expected '{keyword}' header, got {parts[0]!r}", no)
    fields = {}
    for part in parts[1:]:
        key, sep, value = part.partition("=")
        if not sep or key not in keys or key in fields:
            raise FormatError(f"bad header field {part!r} (expected {', '.join(k + '=' for k in keys)})", no)
        fields[key] = value
    return no, fields


def _size(fields: dict[str, str], key: str, no: int) -> int:
    if key not in fields:
        raise FormatError(f"header lacks {key}=", no)
    try:
        n = int(fields[key])
    except ValueError:
        raise FormatError(f"{key}={fields[key]!r} is not an integer", no) from None
    if n < 1:
        raise FormatError(f"{key} must be positive, got {n}", no)
    check_carrier(n)
    return n


def _row(lines: _Lines, width: int, bound: int, what: str) -> tuple[int, np.ndarray]:
    no, line = lines.next(what)
    try:
        values = [int(tok) for tok in line.split()]
    except ValueError:
        raise FormatError(f"{what}: non-integer entry in {line[:40]!r}", no) from None
    if len(values) != width:
        raise FormatError(f"{what}: expected {width} entries, got {len(values)}", no)
    row = np.asarray(values, dtype=np.int64)
    bad = np.flatnonzero((row < 0) | (row >= bound))
    if bad.size:
        raise FormatError(f"{what}: entry {int(row[bad[0]])} outside 0..{bound - 1}", no)
    return no, row.astype(IDX)


def _table(lines: _Lines, rows: int, cols: int, bound: int, what: str,
           identity_at_zero: bool = False) -> np.ndarray:
    out = np.empty((rows, cols), dtype=IDX)
    for r in range(rows):
        no, row = _row(lines, cols, bound, f"{what} row {r}")
        if identity_at_zero and (row[0] != r or (r == 0 and (row != np.arange(cols)).any())):
            raise FormatError(f"{what}: identity must be element 0 (row {r})", no)
        out[r] = row
    return out


def _emit_table(table) -> list[str]:
    return [" ".join(str(int(x)) for x in row) for row in np.asarray(table)]


# -- groups and braces -----------------------------------------------------------------------


def parse_group(text: str) -> np.ndarray:
    lines = _Lines(text)
    no, fields = _header(lines, "group", ("n",))
    n = _size(fields, "n", no)
    table = _table(lines, n, n, n, "group table", identity_at_zero=True)
    lines.done()
    return table


def emit_group(group) -> str:
    table = group.table if isinstance(group, GroupTable) else np.asarray(group)
    return "\n".join([f"group n={table.shape[0]}", *_emit_table(table)]) + "\n"


def _parse_brace(lines: _Lines) -> BraceTables:
    no, fields = _header(lines, "brace", ("n", "kind"))
    n = _size(fields, "n", no)
    kind = fields.get("kind", "brace")
    if kind not in KINDS:
        raise FormatError(f"kind must be one of {', '.join(KINDS)}, got {kind!r}", no)
    dot = _table(lines, n, n, n, "dot table", identity_at_zero=True)
    circ = _table(lines, n, n, n, "circ table", identity_at_zero=True)
    return BraceTables(dot, circ, kind)


def _emit_brace(bt: BraceTables) -> list[str]:
    return [f"brace n={bt.n} kind={bt.kind}", *_emit_table(bt.dot), "", *_emit_table(bt.circ)]


def _brace_tables(value) -> BraceTables:
    return BraceTables.of(value) if isinstance(value, Brace) else value


def parse_brace(text: str) -> BraceTables:
    lines = _Lines(text)
    bt = _parse_brace(lines)
    lines.done()
    return bt


def emit_brace(brace) -> str:
    return "\n".join(_emit_brace(_brace_tables(brace))) + "\n"


def parse_post_brace(text: str) -> PostBraceTables:
    lines = _Lines(text)
    bt = _parse_brace(lines)
    rhd = _table(lines, bt.n, bt.n, bt.n, "rhd table")
    lines.done()
    return PostBraceTables(bt, rhd)


def emit_post_brace(value) -> str:
    if isinstance(value, PostBrace):
        value = PostBraceTables(BraceTables.of(value.brace), np.asarray(value.rhd, dtype=IDX))
    return "\n".join([*_emit_brace(value.brace), "", *_emit_table(value.rhd)]) + "\n"


def parse_rhd(text: str) -> np.ndarray:
    """A bare |> table: ``rhd n=<int>`` then n rows."""
    lines = _Lines(text)
    no, fields = _header(lines, "rhd", ("n",))
    n = _size(fields, "n", no)
    table = _table(lines, n, n, n, "rhd table")
    lines.done()
    return table


def emit_rhd(rhd) -> str:
    rhd = np.asarray(rhd)
    return "\n".join([f"rhd n={rhd.shape[0]}", *_emit_table(rhd)]) + "\n"


# -- maps -------------------------------------------------------------------------------------


def parse_rbo(text: str, target: int | None = None) -> np.ndarray:
    """Image sequence of B; ``target`` bounds the entries when the codomain is known."""
    lines = _Lines(text)
    no, fields = _header(lines, "rbo", ("n",))
    n = _size(fields, "n", no)
    _, image = _row(lines, n, target if target is not None else np.iinfo(IDX).max, "rbo image")
    lines.done()
    return image


def emit_rbo(B) -> str:
    image = np.asarray(getattr(B, "image", getattr(B, "B", B))).ravel()
    return f"rbo n={image.shape[0]}\n" + " ".join(str(int(x)) for x in image) + "\n"


def parse_action(text: str) -> ActionTables:
    lines = _Lines(text)
    no, fields = _header(lines, "action", ("g", "h"))
    g, h = _size(fields, "g", no), _size(fields, "h", no)
    phi = _table(lines, g, h, h, "action table")
    lines.done()
    return ActionTables(phi)


def emit_action(phi) -> str:
    phi = np.asarray(getattr(phi, "phi", phi))
    g, h = phi.shape
    return "\n".join([f"action g={g} h={h}", *_emit_table(phi)]) + "\n"


# -- solutions ---------------------------------------------------------------------------------


def parse_solution(text: str) -> BraidedMap:
    """One ``a b -> c d`` line per input pair; missing, repeated or colliding pairs are rejected."""
    lines = _Lines(text)
    no, fields = _header(lines, "solution", ("n",))
    n = _size(fields, "n", no)
    R = np.full(n * n, -1, dtype=np.int64)
    source_of = np.full(n * n, -1, dtype=np.int64)
    for _ in range(n * n):
        no, line = lines.next("solution line 'a b -> c d'")
        left, arrow, right = line.partition("->")
        try:
            a, b = (int(x) for x in left.split())
            c, d = (int(x) for x in right.split())
        except ValueError:
            raise FormatError(f"expected 'a b -> c d', got {line[:40]!r}", no) from None
        if not arrow or not all(0 <= x < n for x in (a, b, c, d)):
            raise FormatError(f"expected 'a b -> c d' with entries in 0..{n - 1}", no)
        src, dst = a * n + b, c * n + d
        if R[src] >= 0:
            raise FormatError(f"pair ({a}, {b}) listed twice", no)
        if source_of[dst] >= 0:
            p, q = divmod(int(source_of[dst]), n)
            raise FormatError(f"output ({c}, {d}) repeated (also the image of ({p}, {q})); "
                              f"the map is not a bijection", no)
        R[src] = dst
        source_of[dst] = src
    lines.done()
    return BraidedMap(n, R)


def emit_solution(R: BraidedMap) -> str:
    n = R.n
    out = [f"solution n={n}"]
    for x, y in enumerate(R.R.tolist()):
        a, b = divmod(x, n)
        c, d = divmod(y, n)
        out.append(f"{a} {b} -> {c} {d}")
    return "\n".join(out) + "\n"


# -- matched pairs -----------------------------------------------------------------------------


def parse_matched_pair(text: str) -> MatchedPairTables:
    lines = _Lines(text)
    G = _parse_brace(lines)
    H = _parse_brace(lines)
    tables = {}
    for key in MP_HEADERS:
        no, line = lines.next(f"'{key}' header")
        if line != key:
            raise FormatError(f"expected '{key}' header, got {line[:40]!r}", no)
        into = H.n if key.startswith("rharp") else G.n
        tables[key] = _table(lines, G.n, H.n, into, f"{key} table")
    lines.done()
    return MatchedPairTables(G, H, **tables)


def emit_matched_pair(mp) -> str:
    if not isinstance(mp, MatchedPairTables):
        mp = MatchedPairTables(BraceTables.of(mp.G), BraceTables.of(mp.H),
                               *(np.asarray(getattr(mp, k), dtype=IDX) for k in MP_HEADERS))
    out = [*_emit_brace(mp.G), "", *_emit_brace(mp.H)]
    for key in MP_HEADERS:
        out += ["", key, *_emit_table(getattr(mp, key))]
    return "\n".join(out) + "\n"


# -- files --------------------------------------------------------------------------------------

def read_text(path: str | Path) -> str:
    try:
        return Path(path).read_text()
    except UnicodeDecodeError:
        raise FormatError(f"{path}: not a text file") from None


def write_text(path: str | Path, text: str) -> None:
    Path(path).write_text(text)
