"""Todd–Coxeter coset enumeration, low-index subgroups and bounded
no-finite-quotient certificates."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Sequence

from . import kernels
from .certificates import CERTIFIED, REFUTED, UNKNOWN, Certificate
from .presentations import Presentation, digest
from .words import Word, format_word


class ResourceExhausted(RuntimeError):
    """An enumeration or search hit its limits before finishing."""

    def __init__(self, message: str, size: int = 0, partial=None, details: dict | None = None):
        super().__init__(message)
        self.size = size
        self.partial = partial
        self.details = details or {}


@dataclass(frozen=True)
class EnumerationLimits:
    max_cosets: int = 100_000
    max_time: float | None = 60.0  # seconds
    max_nodes: int = 0  # low-index search nodes; 0 = unlimited

    def __post_init__(self):
        if self.max_cosets <= 0 or (self.max_time is not None and self.max_time <= 0) or self.max_nodes < 0:
            raise ValueError("limits must be positive")

    def deadline(self) -> float | None:
        return None if self.max_time is None else time.monotonic() + self.max_time


@dataclass
class CosetTable:
    """Action of generators and inverses on cosets ``0..index-1``; coset 0 is the subgroup.

    ``table[c][2*i]`` is ``c·g_i`` and ``table[c][2*i+1]`` is ``c·g_i^-1``;
    -1 marks an undefined entry.
    """

    generators: tuple[str, ...]
    table: list[list[int]]
    complete: bool = True
    subgroup: tuple[Word, ...] = ()
    strategy: str = ""
    conjugacy_class: int | None = None
    metadata: dict = field(default_factory=dict)

    @property
    def index(self) -> int:
        return len(self.table)

    def columns(self) -> list[str]:
        return [name for g in self.generators for name in (g, f"{g}^-1")]

    def act(self, coset: int, word: Word) -> int:
        """Image of ``coset`` under ``word`` (-1 if it runs into an undefined entry)."""
        col = {g: 2 * i for i, g in enumerate(self.generators)}
        c = coset
        for name, sign in word.letters:
            c = self.table[c][col[name] + (sign < 0)]
            if c < 0:
                return -1
        return c

    def flat(self) -> tuple[int, ...]:
        return tuple(x for row in self.table for x in row)

    def permutations(self) -> dict[str, list[int]]:
        return {g: [row[2 * i] for row in self.table] for i, g in enumerate(self.generators)}

    def to_json(self) -> dict:
        out = {
            "generators": list(self.generators),
            "columns": self.columns(),
            "index": self.index,
            "complete": self.complete,
            "table": [[x + 1 if x >= 0 else None for x in row] for row in self.table],
        }
        if self.subgroup:
            out["subgroup"] = [format_word(w) for w in self.subgroup]
        if self.strategy:
            out["strategy"] = self.strategy
        if self.conjugacy_class is not None:
            out["conjugacy_class"] = self.conjugacy_class
        return out


def standardize(table: Sequence[Sequence[int]], root: int = 0) -> list[list[int]]:
    """Renumber cosets by first appearance in a row-major scan starting at ``root``.

    Cosets not reachable from ``root`` are dropped.  Undefined entries stay -1.
    """
    order = [root]
    pos = {root: 0}
    i = 0
    while i < len(order):
        for d in table[order[i]]:
            if d >= 0 and d not in pos:
                pos[d] = len(order)
                order.append(d)
        i += 1
    return [[pos[d] if d >= 0 else -1 for d in table[c]] for c in order]


def check_coset_table(p: Presentation, ct: CosetTable, subgroup: Sequence[Word] = ()) -> list[str]:
    """Independent re-check of a complete table; returns the list of problems found."""
    problems = []
    n = ct.index
    k = len(p.generators)
    if tuple(ct.generators) != tuple(p.generators):
        return ["generator lists differ"]
    for c, row in enumerate(ct.table):
        if len(row) != 2 * k:
            problems.append(f"row {c} has {len(row)} entries")
            return problems
        for x, d in enumerate(row):
            if not 0 <= d < n:
                problems.append(f"entry ({c},{x}) undefined or out of range")
            elif ct.table[d][x ^ 1] != c:
                problems.append(f"columns {x} and {x ^ 1} not inverse at coset {c}")
    if problems:
        return problems
    perms = ct.permutations()
    for g, perm in perms.items():
        if sorted(perm) != list(range(n)):
            problems.append(f"{g} does not act as a permutation")

    def trace(c, w):
        for name, sign in w.letters:
            if sign > 0:
                c = perms[name][c]
            else:
                c = perms[name].index(c)
        return c

    for r in p.relators:
        for c in range(n):
            if trace(c, r) != c:
                problems.append(f"relator {format_word(r)} does not close at coset {c}")
    for w in subgroup:
        if trace(0, w) != 0:
            problems.append(f"subgroup generator {format_word(w)} moves coset 0")
    seen = {0}
    frontier = [0]
    while frontier:
        c = frontier.pop()
        for perm in perms.values():
            for d in (perm[c], perm.index(c)):
                if d not in seen:
                    seen.add(d)
                    frontier.append(d)
    if len(seen) != n:
        problems.append("action is not transitive")
    return problems


# ------------------------------------------------------------- Todd–Coxeter


class _Overflow(Exception):
    pass


class _Enumerator:
    def __init__(self, p: Presentation, subgroup: Sequence[Word], limits: EnumerationLimits):
        self.ncols = 2 * p.rank
        self.relators = [p.codes(r) for r in p.relators]
        self.subgroup = [p.codes(w) for w in subgroup]
        self.limits = limits
        self.deadline = limits.deadline()
        self.table: list[list[int]] = [[-1] * self.ncols]
        self.parent = [0]
        self.live = 1
        self.deductions: list[tuple[int, int]] = []
        self.conjugates = kernels._pykernels.relator_conjugates(self.ncols, self.relators)

    # --- bookkeeping
    def rep(self, c: int) -> int:
        parent = self.parent
        root = c
        while parent[root] != root:
            root = parent[root]
        while parent[c] != root:
            parent[c], c = root, parent[c]
        return root

    def is_live(self, c: int) -> bool:
        return self.parent[c] == c

    def check_time(self):
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise ResourceExhausted("time limit reached", self.live, details={"reason": "time"})

    def define(self, c: int, x: int) -> int:
        if self.live >= self.limits.max_cosets:
            raise _Overflow
        d = len(self.table)
        self.table.append([-1] * self.ncols)
        self.parent.append(d)
        self.live += 1
        self.table[c][x] = d
        self.table[d][x ^ 1] = c
        self.deductions.append((c, x))
        return d

    def merge(self, a: int, b: int, queue: list[int]):
        a, b = self.rep(a), self.rep(b)
        if a == b:
            return
        lo, hi = min(a, b), max(a, b)
        self.parent[hi] = lo
        self.live -= 1
        queue.append(hi)

    def coincidence(self, a: int, b: int):
        queue: list[int] = []
        self.merge(a, b, queue)
        table = self.table
        i = 0
        while i < len(queue):
            e = queue[i]
            i += 1
            for x in range(self.ncols):
                f = table[e][x]
                if f < 0:
                    continue
                table[f][x ^ 1] = -1
                e1, f1 = self.rep(e), self.rep(f)
                if table[e1][x] >= 0:
                    self.merge(f1, table[e1][x], queue)
                elif table[f1][x ^ 1] >= 0:
                    self.merge(e1, table[f1][x ^ 1], queue)
                else:
                    table[e1][x] = f1
                    table[f1][x ^ 1] = e1
                    self.deductions.append((e1, x))

    def scan_and_fill(self, c: int, w: Sequence[int]):
        table = self.table
        L = len(w)
        f, i = c, 0
        b, j = c, L - 1
        while True:
            while i <= j and table[f][w[i]] >= 0:
                f = table[f][w[i]]
                i += 1
            if i > j:
                if f != b:
                    self.coincidence(f, b)
                return
            while j >= i and table[b][w[j] ^ 1] >= 0:
                b = table[b][w[j] ^ 1]
                j -= 1
            if j < i:
                self.coincidence(f, b)
                return
            if i == j:
                table[f][w[i]] = b
                table[b][w[i] ^ 1] = f
                self.deductions.append((f, w[i]))
                return
            self.define(f, w[i])

    def scan(self, c: int, w: Sequence[int]):
        table = self.table
        L = len(w)
        f, i = c, 0
        while i < L and table[f][w[i]] >= 0:
            f = table[f][w[i]]
            i += 1
        if i == L:
            if f != c:
                self.coincidence(f, c)
            return
        b, j = c, L - 1
        while j >= i and table[b][w[j] ^ 1] >= 0:
            b = table[b][w[j] ^ 1]
            j -= 1
        if j < i:
            self.coincidence(f, b)
        elif j == i:
            table[f][w[i]] = b
            table[b][w[i] ^ 1] = f
            self.deductions.append((f, w[i]))

    def lookahead(self):
        for c in range(len(self.table)):
            for r in self.relators:
                if not self.is_live(c):
                    break
                self.scan(c, r)

    # --- strategies
    def run_hlt(self):
        for w in self.subgroup:
            self._retry(lambda w=w: self.scan_and_fill(self.rep(0), w))
        c = 0
        while c < len(self.table):
            self.check_time()
            if self.is_live(c):
                self._retry(lambda c=c: self._hlt_coset(c))
            c += 1

    def _hlt_coset(self, c: int):
        for r in self.relators:
            if not self.is_live(c):
                return
            self.scan_and_fill(c, r)
        for x in range(self.ncols):
            if self.is_live(c) and self.table[c][x] < 0:
                self.define(c, x)

    def _retry(self, step):
        # on overflow: look ahead (deduction-only scans), then retry the step
        while True:
            try:
                step()
                return
            except _Overflow:
                before = self.live
                self.lookahead()
                if self.live >= before and self.live >= self.limits.max_cosets:
                    raise ResourceExhausted(
                        f"coset limit {self.limits.max_cosets} reached", self.live, details={"reason": "cosets"}
                    ) from None

    def process_deductions(self):
        while self.deductions:
            c, x = self.deductions.pop()
            if not self.is_live(c):
                continue
            for w in self.conjugates[x]:
                if not self.is_live(c):
                    break
                self.scan(c, w)
            d = self.table[c][x] if self.is_live(c) else -1
            if d >= 0 and self.is_live(d):
                for w in self.conjugates[x ^ 1]:
                    if not self.is_live(d):
                        break
                    self.scan(d, w)

    def run_felsch(self):
        for w in self.subgroup:
            self._retry(lambda w=w: self.scan_and_fill(self.rep(0), w))
        self.process_deductions()
        c = 0
        while c < len(self.table):
            self.check_time()
            for x in range(self.ncols):
                if self.is_live(c) and self.table[c][x] < 0:
                    try:
                        self.define(c, x)
                    except _Overflow:
                        raise ResourceExhausted(
                            f"coset limit {self.limits.max_cosets} reached", self.live, details={"reason": "cosets"}
                        ) from None
                    self.process_deductions()
            c += 1

    def close(self):
        """Scan everything until stable; the table is then closed and consistent."""
        while True:
            before = (self.live, sum(x >= 0 for c, row in enumerate(self.table) if self.is_live(c) for x in row))
            for w in self.subgroup:
                self.scan(self.rep(0), w)
            self.lookahead()
            self.deductions.clear()
            after = (self.live, sum(x >= 0 for c, row in enumerate(self.table) if self.is_live(c) for x in row))
            if after == before:
                return

    def result(self) -> list[list[int]]:
        live = [c for c in range(len(self.table)) if self.is_live(c)]
        pos = {c: k for k, c in enumerate(live)}
        compact = [[pos[self.rep(d)] if d >= 0 else -1 for d in self.table[c]] for c in live]
        return standardize(compact, 0)


def todd_coxeter(
    p: Presentation,
    subgroup: Sequence[Word] = (),
    limits: EnumerationLimits | None = None,
    strategy: str = "hlt",
) -> CosetTable:
    """Enumerate the cosets of the subgroup generated by ``subgroup``.

    ``strategy`` is ``"hlt"`` (HLT with lookahead) or ``"felsch"``.  Raises
    :class:`ResourceExhausted` when the coset or time limit is hit.
    """
    limits = limits or EnumerationLimits()
    en = _Enumerator(p, subgroup, limits)
    if strategy == "hlt":
        en.run_hlt()
    elif strategy == "felsch":
        en.run_felsch()
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    en.close()
    table = en.result()
    complete = all(x >= 0 for row in table for x in row)
    name = "HLT+lookahead" if strategy == "hlt" else "Felsch"
    return CosetTable(tuple(p.generators), table, complete, tuple(subgroup), name)


# ------------------------------------------------------------- low index


LOW_INDEX_STRATEGY = "low-index backtrack (row-major fill, standardized tables)"


def low_index_subgroups(
    p: Presentation,
    max_index: int,
    limits: EnumerationLimits | None = None,
    backend: str | None = None,
) -> list[CosetTable]:
    """All subgroups of index 2..``max_index``, one standardized table each.

    Tables are sorted by index then row-major contents, and annotated with a
    conjugacy class number (classes numbered in order of first member).
    """
    if max_index < 1:
        raise ValueError("max_index must be at least 1")
    limits = limits or EnumerationLimits()
    ncols = 2 * p.rank
    flat_tables, nodes, status = kernels.low_index_search(
        ncols, [p.codes(r) for r in p.relators], max_index, False, limits.deadline(), limits.max_nodes, backend
    )
    tables = [_unflatten(t, ncols) for t in flat_tables]
    if status != "complete":
        raise ResourceExhausted(
            f"low-index search stopped ({status})",
            len(tables),
            partial=[CosetTable(p.generators, t, strategy=LOW_INDEX_STRATEGY) for t in tables],
            details={"reason": status, "nodes": nodes},
        )
    tables.sort(key=lambda t: (len(t), [x for row in t for x in row]))
    keys = {_key(t): k for k, t in enumerate(tables)}
    classes: dict[int, int] = {}
    out = []
    for k, t in enumerate(tables):
        members = {keys[_key(standardize(t, root))] for root in range(len(t))}
        rep = min(members)
        cls = classes.setdefault(rep, len(classes))
        out.append(CosetTable(p.generators, t, True, (), LOW_INDEX_STRATEGY, cls, {"conjugates": len(members)}))
    return out


def _unflatten(flat, ncols):
    return [list(flat[i : i + ncols]) for i in range(0, len(flat), ncols)]


def _key(t):
    return tuple(x for row in t for x in row)


def certify_no_finite_quotients(
    p: Presentation,
    bound: int,
    limits: EnumerationLimits | None = None,
    backend: str | None = None,
) -> Certificate:
    """Certify "no non-trivial finite quotient of order ≤ bound".

    A quotient of order m ≤ bound gives a proper subgroup of index ≤ m, and a
    proper subgroup of index k ≤ bound gives a non-trivial quotient acting on
    k points; so the claim holds iff there is no proper subgroup of index
    2..bound.  A found subgroup refutes the claim and its table is the witness.
    """
    if bound < 2:
        raise ValueError("bound must be at least 2")
    limits = limits or EnumerationLimits()
    t0 = time.monotonic()
    ncols = 2 * p.rank
    flat_tables, nodes, status = kernels.low_index_search(
        ncols, [p.codes(r) for r in p.relators], bound, True, limits.deadline(), limits.max_nodes, backend
    )
    ms = int(1000 * (time.monotonic() - t0))
    common = dict(
        claim=f"no non-trivial finite quotient of order <= {bound}",
        bound=bound,
        input_digest=digest(p),
        strategy=LOW_INDEX_STRATEGY,
        runtime_ms=ms,
        name="no-finite-quotients",
    )
    if flat_tables:
        table = CosetTable(p.generators, _unflatten(flat_tables[0], ncols), strategy=LOW_INDEX_STRATEGY)
        return Certificate(status=REFUTED, evidence={"witness": table.to_json(), "nodes": nodes}, **common)
    if status != "complete":
        return Certificate(status=UNKNOWN, evidence={"reason": status, "nodes": nodes}, **common)
    return Certificate(
        status=CERTIFIED,
        evidence={"search": "exhaustive", "max_index": bound, "nodes": nodes, "backend": backend or kernels.BACKEND},
        **common,
    )
