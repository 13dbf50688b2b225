"""The state-sum invariant Q_{N,alpha} of braid closures.

Arcs of the closure (segments between real crossings, plus crossing-free
loops) are labeled by 1..N.  A labeling is admissible when every crossing
matches a row of the weight table; each row carries a weight and tells how
the crossing is smoothed.  For an admissible state S,

    G(S) = product of row weights,
    H(S) = product over smoothed components c of q^(2 S(c) - N - 1),

and Q = (-q^N)^writhe * sum_S G(S) H(S).
"""

from __future__ import annotations

import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Iterator, Sequence

from .gauss import Endpoint, GaussData, gauss_of_closure
from .laurent import ONE, ZERO, LaurentPoly, parse_poly, q
from .words import BraidWord

__all__ = [
    "InvariantError",
    "ClosureArcs",
    "WeightEntry",
    "WeightTable",
    "weight_table",
    "load_table",
    "parse_table",
    "format_table",
    "shipped_table",
    "arcs_of_closure",
    "arcs_of_gauss",
    "admissible_states",
    "state_weight",
    "smooth_components",
    "h_factor",
    "q_invariant",
    "q_of_gauss",
    "SWAP",
    "PARALLEL",
]

SWAP = "swap"
PARALLEL = "parallel"
# smoothing: which exit corner each entry corner is joined to
_SMOOTHING = {SWAP: {1: 4, 2: 3}, PARALLEL: {1: 3, 2: 4}}


class InvariantError(ValueError):
    """Incomplete or inconsistent weight table, or a malformed table file."""


# ---------------------------------------------------------------------------
# arcs


@dataclass(frozen=True)
class ClosureArcs:
    """Arcs between real crossings.

    ``incidence[c]`` gives the arc ids at corners 1..4 of crossing ``c``.
    Loop arcs (``loops`` of them) come after all crossing arcs and are never
    incident to a crossing.
    """

    crossings: tuple[str, ...]
    signs: tuple[int, ...]
    incidence: tuple[tuple[int, int, int, int], ...]
    n_arcs: int
    loops: int

    @property
    def n_labeled(self) -> int:
        return self.n_arcs + self.loops

    @property
    def writhe(self) -> int:
        return sum(self.signs)


def arcs_of_gauss(g: GaussData) -> ClosureArcs:
    ids = g.crossing_ids()
    # one arc per (exit, entry) pair, numbered in crossing order of the source
    order = {c: k for k, c in enumerate(ids)}
    arc_list = sorted(g.arcs, key=lambda ab: (order[ab[0].crossing], ab[0].corner))
    arc_id: dict[Endpoint, int] = {}
    for k, (a, b) in enumerate(arc_list):
        arc_id[a] = k
        arc_id[b] = k
    incidence = tuple(tuple(arc_id[Endpoint(c, j)] for j in (1, 2, 3, 4)) for c in ids)
    return ClosureArcs(
        tuple(ids),
        tuple(g.crossings[c] for c in ids),
        incidence,  # type: ignore[arg-type]
        len(arc_list),
        g.loops,
    )


def arcs_of_closure(w: BraidWord) -> ClosureArcs:
    return arcs_of_gauss(gauss_of_closure(w))


# ---------------------------------------------------------------------------
# weight tables


@dataclass(frozen=True)
class WeightEntry:
    sign: int
    entry: tuple[int, int]
    exit: tuple[int, int]
    weight: LaurentPoly
    smoothing: str

    @property
    def key(self) -> tuple[int, int, int, int, int]:
        return (self.sign, *self.entry, *self.exit)

    def __str__(self) -> str:
        s = "+" if self.sign > 0 else "-"
        return (
            f"w {s} {self.entry[0]} {self.entry[1]} -> {self.exit[0]} {self.exit[1]}"
            f" : {self.weight} : {self.smoothing}"
        )


@dataclass(frozen=True)
class WeightTable:
    N: int
    alpha: int
    entries: tuple[WeightEntry, ...]

    def __post_init__(self):
        if self.N < 1:
            raise InvariantError("N must be positive")
        seen = set()
        for e in self.entries:
            if e.key in seen:
                raise InvariantError(f"duplicate table row for {e.key}")
            if e.smoothing not in _SMOOTHING:
                raise InvariantError(f"unknown smoothing {e.smoothing!r}")
            for lab in (*e.entry, *e.exit):
                if not 1 <= lab <= self.N:
                    raise InvariantError(f"label {lab} outside 1..{self.N} in {e}")
            seen.add(e.key)

    @property
    def lookup(self) -> dict[tuple, WeightEntry]:
        return _lookup(self)

    def rows_for(self, sign: int) -> list[WeightEntry]:
        return [e for e in self.entries if e.sign == sign]


@lru_cache(maxsize=None)
def _lookup(table: WeightTable) -> dict[tuple, WeightEntry]:
    return {e.key: e for e in table.entries}


def weight_table(N: int, alpha: int = 0) -> WeightTable:
    """The table for (N, alpha).

    Rows (i != j unless written i i):
      positive  i i -> i i : -q^-1          parallel
      positive  i j -> j i : q^(+-alpha)     swap   (+ when i < j)
      positive  i j -> i j : q - q^-1       parallel, only for i > j
      negative  i i -> i i : -q             parallel
      negative  i j -> j i : q^(+-alpha)     swap
      negative  i j -> i j : q^-1 - q       parallel, only for i < j
    At alpha = 0 these are the rows reproducing the published N = 2 values.
    """
    if N < 1:
        raise InvariantError("N must be positive")
    qi = q ** -1
    rows = []
    for sign in (1, -1):
        for i in range(1, N + 1):
            for j in range(1, N + 1):
                if i == j:
                    rows.append(WeightEntry(sign, (i, i), (i, i), -qi if sign > 0 else -q, PARALLEL))
                    continue
                rows.append(WeightEntry(sign, (i, j), (j, i), q ** (alpha if i < j else -alpha), SWAP))
                if sign > 0 and i > j:
                    rows.append(WeightEntry(sign, (i, j), (i, j), q - qi, PARALLEL))
                if sign < 0 and i < j:
                    rows.append(WeightEntry(sign, (i, j), (i, j), qi - q, PARALLEL))
    rows.sort(key=lambda e: (-e.sign, e.entry, e.exit))
    return WeightTable(N, alpha, tuple(rows))


_ROW_RE = re.compile(
    r"^w\s+([+-])\s+(\d+)\s+(\d+)\s*->\s*(\d+)\s+(\d+)\s*:\s*(.+?)\s*:\s*(swap|parallel)$"
)


def parse_table(text: str) -> WeightTable:
    N = alpha = None
    rows = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if m := re.match(r"^N\s+(\d+)$", line):
            N = int(m.group(1))
        elif m := re.match(r"^alpha\s+([+-]?\d+)$", line):
            alpha = int(m.group(1))
        elif m := _ROW_RE.match(line):
            sgn, l1, l2, l3, l4, poly, tag = m.groups()
            try:
                weight = parse_poly(poly)
            except ValueError as exc:
                raise InvariantError(f"line {lineno}: {exc}") from None
            rows.append(
                WeightEntry(1 if sgn == "+" else -1, (int(l1), int(l2)), (int(l3), int(l4)), weight, tag)
            )
        else:
            raise InvariantError(f"line {lineno}: cannot parse {raw.strip()!r}")
    if N is None or alpha is None:
        raise InvariantError("table file needs both 'N <n>' and 'alpha <a>' headers")
    return WeightTable(N, alpha, tuple(rows))


def format_table(table: WeightTable) -> str:
    lines = [f"N {table.N}", f"alpha {table.alpha}"]
    lines += [str(e) for e in table.entries]
    return "\n".join(lines) + "\n"


def load_table(path) -> WeightTable:
    with open(path, encoding="utf-8") as fh:
        return parse_table(fh.read())


def shipped_table() -> WeightTable:
    """The N=2, alpha=0 table shipped as package data."""
    text = resources.files("virtbraid").joinpath("data/weights_N2_alpha0.txt").read_text("utf-8")
    return parse_table(text)


# ---------------------------------------------------------------------------
# states


def _crossing_order(arcs: ClosureArcs) -> list[int]:
    """Visit crossings so each one shares as many arcs as possible with earlier ones."""
    n = len(arcs.crossings)
    if n == 0:
        return []
    done: list[int] = [0]
    known = set(arcs.incidence[0])
    rest = set(range(1, n))
    while rest:
        best = max(sorted(rest), key=lambda c: len(known.intersection(arcs.incidence[c])))
        done.append(best)
        known.update(arcs.incidence[best])
        rest.discard(best)
    return done


def admissible_states(
    arcs: ClosureArcs, table: WeightTable, first: WeightEntry | None = None
) -> Iterator[tuple[tuple[int, ...], tuple[WeightEntry, ...]]]:
    """Yield (labels, rows) for every admissible state.

    ``labels`` covers crossing arcs then loop arcs; ``rows[k]`` is the table
    row matched at crossing ``k``.  Labels are propagated crossing by
    crossing, so only consistent partial states are extended.
    """
    by_sign = {1: table.rows_for(1), -1: table.rows_for(-1)}
    _check_complete(table, set(arcs.signs))
    order = _crossing_order(arcs)
    labels = [0] * arcs.n_arcs
    chosen: list[WeightEntry | None] = [None] * len(order)

    def loops_then_emit():
        base = tuple(labels)
        rows = tuple(chosen)  # type: ignore[arg-type]
        for extra in _product(table.N, arcs.loops):
            yield base + extra, rows

    def rec(k: int):
        if k == len(order):
            yield from loops_then_emit()
            return
        c = order[k]
        inc = arcs.incidence[c]
        rows = by_sign[arcs.signs[c]]
        if k == 0 and first is not None:
            rows = [first]
        for row in rows:
            want = (*row.entry, *row.exit)
            saved = [labels[a] for a in inc]
            ok = True
            for a, lab in zip(inc, want):
                if labels[a] == 0:
                    labels[a] = lab
                elif labels[a] != lab:
                    ok = False
                    break
            if ok:
                chosen[c] = row
                yield from rec(k + 1)
                chosen[c] = None
            # saved values predate this row, so repeated arcs restore correctly
            for a, lab in zip(inc, saved):
                labels[a] = lab

    if arcs.n_arcs and not order:
        raise InvariantError("arcs without crossings")
    yield from rec(0)


def _check_complete(table: WeightTable, signs: set[int]) -> None:
    """Every entry labeling of every used sign must have at least one row."""
    have = {(e.sign, e.entry) for e in table.entries}
    for sign in sorted(signs):
        for i in range(1, table.N + 1):
            for j in range(1, table.N + 1):
                if (sign, (i, j)) not in have:
                    s = "+" if sign > 0 else "-"
                    raise InvariantError(f"weight table has no row for crossing {s} with entry labels {i} {j}")


def _product(N: int, k: int) -> Iterator[tuple[int, ...]]:
    if k == 0:
        yield ()
        return
    for head in range(1, N + 1):
        for tail in _product(N, k - 1):
            yield (head,) + tail


def state_weight(rows: Sequence[WeightEntry]) -> LaurentPoly:
    out = ONE
    for r in rows:
        out = out * r.weight
    return out


def smooth_components(
    arcs: ClosureArcs, labels: Sequence[int], rows: Sequence[WeightEntry]
) -> list[tuple[tuple[int, ...], int]]:
    """Components of the smoothed diagram, each as (arc ids, label)."""
    parent = list(range(arcs.n_labeled))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for inc, row in zip(arcs.incidence, rows):
        for entry, exit_ in _SMOOTHING[row.smoothing].items():
            a, b = find(inc[entry - 1]), find(inc[exit_ - 1])
            parent[a] = b
    groups: dict[int, list[int]] = {}
    for a in range(arcs.n_labeled):
        groups.setdefault(find(a), []).append(a)
    out = []
    for members in groups.values():
        labs = {labels[a] for a in members}
        if len(labs) != 1:
            raise InvariantError(
                f"smoothed component {members} carries labels {sorted(labs)}; weight table is inconsistent"
            )
        out.append((tuple(members), labs.pop()))
    out.sort()
    return out


def h_factor(components: Sequence[tuple[tuple[int, ...], int]], N: int) -> LaurentPoly:
    return LaurentPoly.monomial(sum(2 * lab - N - 1 for _, lab in components))


def _partial_sum(arcs: ClosureArcs, table: WeightTable, first: WeightEntry | None) -> LaurentPoly:
    total = ZERO
    for labels, rows in admissible_states(arcs, table, first):
        comps = smooth_components(arcs, labels, rows)
        total = total + state_weight(rows) * h_factor(comps, table.N)
    return total


def _resolve_table(N: int, alpha: int, table: WeightTable | None) -> WeightTable:
    if table is None:
        return weight_table(N, alpha)
    if (table.N, table.alpha) != (N, alpha):
        raise InvariantError(f"table is for N={table.N}, alpha={table.alpha}; asked for N={N}, alpha={alpha}")
    return table


def q_of_gauss(
    g: GaussData, N: int = 2, alpha: int = 0, table: WeightTable | None = None, workers: int = 1
) -> LaurentPoly:
    table = _resolve_table(N, alpha, table)
    arcs = arcs_of_gauss(g)
    if workers > 1 and arcs.crossings:
        # partition by the row chosen at the first visited crossing
        c0 = _crossing_order(arcs)[0]
        firsts = table.rows_for(arcs.signs[c0])
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = pool.map(_partial_sum, [arcs] * len(firsts), [table] * len(firsts), firsts)
            total = sum(parts, ZERO)
    else:
        total = _partial_sum(arcs, table, None)
    return (-(q ** N)) ** arcs.writhe * total


def q_invariant(
    w: BraidWord, N: int = 2, alpha: int = 0, table: WeightTable | None = None, workers: int = 1
) -> LaurentPoly:
    """Q_{N,alpha} of the closure of ``w``."""
    return q_of_gauss(gauss_of_closure(w), N, alpha, table, workers)
