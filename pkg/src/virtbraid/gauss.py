"""Gauss data of virtual link diagrams and of braid closures.

Every real crossing has four corners.  With both strands running downward,
corners 1 and 2 are the incoming left and right ends, corners 3 and 4 the
outgoing left and right ends; a strand passes through a crossing from 1 to 4
or from 2 to 3.  Outside the crossings the diagram is a set of arcs, each
running from an exit corner (3 or 4) to an entry corner (1 or 2), plus loops
that meet no real crossing.  Virtual crossings are invisible at this level.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping, NamedTuple

from .words import BraidWord

__all__ = [
    "GaussError",
    "Endpoint",
    "GaussData",
    "THROUGH",
    "gauss_of_closure",
    "closure_arcs",
    "same_gauss_data",
    "canonical_code",
    "parse_gauss",
    "emit_gauss",
    "natural_key",
]

ENTRY_CORNERS = (1, 2)
EXIT_CORNERS = (3, 4)
THROUGH = {1: 4, 2: 3}


class GaussError(ValueError):
    """Gauss data violating the endpoint-pairing invariants, or malformed text."""


class Endpoint(NamedTuple):
    crossing: str
    corner: int

    def __str__(self) -> str:
        return f"{self.crossing}.{self.corner}"


def natural_key(name: str):
    """Sort key ordering ``v2`` before ``v10``."""
    return [(0, int(tok), "") if tok.isdigit() else (1, 0, tok) for tok in re.findall(r"\d+|\D+", name)]


@dataclass(frozen=True, eq=False)
class GaussData:
    crossings: Mapping[str, int]
    arcs: frozenset
    loops: int = 0
    _next: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        crossings = {str(c): int(s) for c, s in dict(self.crossings).items()}
        arcs = frozenset((Endpoint(*a), Endpoint(*b)) for a, b in self.arcs)
        object.__setattr__(self, "crossings", crossings)
        object.__setattr__(self, "arcs", arcs)
        if self.loops < 0:
            raise GaussError("loop count must be non-negative")
        for c, sgn in crossings.items():
            if sgn not in (1, -1):
                raise GaussError(f"crossing {c} has sign {sgn}, expected +1 or -1")
        nxt: dict[Endpoint, Endpoint] = {}
        targets: set[Endpoint] = set()
        for a, b in sorted(arcs):
            for e in (a, b):
                if e.crossing not in crossings:
                    raise GaussError(f"unknown crossing id {e.crossing!r}")
            if a.corner not in EXIT_CORNERS:
                raise GaussError(f"arc source {a} is not an exit corner (3 or 4)")
            if b.corner not in ENTRY_CORNERS:
                raise GaussError(f"arc target {b} is not an entry corner (1 or 2)")
            if a in nxt:
                raise GaussError(f"duplicate arc source {a}")
            if b in targets:
                raise GaussError(f"duplicate arc target {b}")
            nxt[a] = b
            targets.add(b)
        for c in crossings:
            for k in EXIT_CORNERS:
                if Endpoint(c, k) not in nxt:
                    raise GaussError(f"dangling endpoint {c}.{k}: no arc starts here")
            for k in ENTRY_CORNERS:
                if Endpoint(c, k) not in targets:
                    raise GaussError(f"dangling endpoint {c}.{k}: no arc ends here")
        object.__setattr__(self, "_next", nxt)

    def next_entry(self, exit_point: Endpoint) -> Endpoint:
        return self._next[exit_point]

    def crossing_ids(self) -> list[str]:
        return sorted(self.crossings, key=natural_key)

    def cycles(self) -> list[list[Endpoint]]:
        """Components meeting real crossings, each as its cyclic list of entry corners."""
        seen: set[Endpoint] = set()
        out = []
        for c in self.crossing_ids():
            for k in ENTRY_CORNERS:
                e = Endpoint(c, k)
                if e in seen:
                    continue
                cyc = []
                while e not in seen:
                    seen.add(e)
                    cyc.append(e)
                    e = self._next[Endpoint(e.crossing, THROUGH[e.corner])]
                out.append(cyc)
        return out

    @property
    def mu(self) -> int:
        return len(self.cycles()) + self.loops

    @property
    def writhe(self) -> int:
        return sum(self.crossings.values())

    def relabel(self, mapping: Mapping[str, str]) -> GaussData:
        return GaussData(
            {mapping[c]: s for c, s in self.crossings.items()},
            {
                (Endpoint(mapping[a.crossing], a.corner), Endpoint(mapping[b.crossing], b.corner))
                for a, b in self.arcs
            },
            self.loops,
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GaussData):
            return NotImplemented
        return (self.crossings, self.arcs, self.loops) == (other.crossings, other.arcs, other.loops)

    def __hash__(self) -> int:
        return hash((frozenset(self.crossings.items()), self.arcs, self.loops))

    def __str__(self) -> str:
        return emit_gauss(self)


# ---------------------------------------------------------------------------
# braid closures


def _trace_closure(w: BraidWord):
    """Follow the closure of ``w``.

    Returns (signs, arcs, loops) where crossing ``k`` (0-based) is the k-th
    real letter, arcs map exit endpoints to entry endpoints as (k, corner)
    pairs, and loops counts closure components meeting no real letter.
    """
    # token at each position: ("top", p) or (k, corner) for an exit corner
    tokens: list[tuple] = [("top", p) for p in range(w.degree)]
    ends: dict[tuple, tuple] = {}
    signs: list[int] = []
    for g in w.letters:
        k = g.index - 1
        if not g.is_real:
            tokens[k], tokens[k + 1] = tokens[k + 1], tokens[k]
            continue
        c = len(signs)
        signs.append(g.sign)
        ends[tokens[k]] = (c, 1)
        ends[tokens[k + 1]] = (c, 2)
        tokens[k], tokens[k + 1] = (c, 3), (c, 4)
    for p, tok in enumerate(tokens):
        ends[tok] = ("bottom", p)

    arcs: dict[tuple, tuple] = {}
    used_top: set[int] = set()
    for c in range(len(signs)):
        for corner in EXIT_CORNERS:
            tok = (c, corner)
            while True:
                e = ends[tok]
                if e[0] != "bottom":
                    break
                used_top.add(e[1])
                tok = ("top", e[1])
            arcs[(c, corner)] = e
    loops = 0
    free = [p for p in range(w.degree) if p not in used_top]
    visited: set[int] = set()
    for p in free:
        if p in visited:
            continue
        loops += 1
        while p not in visited:
            visited.add(p)
            p = ends[("top", p)][1]
    return signs, arcs, loops


def gauss_of_closure(w: BraidWord, prefix: str = "v") -> GaussData:
    """Gauss data of the closure; the k-th real letter becomes crossing ``v<k>`` (1-based)."""
    signs, arcs, loops = _trace_closure(w)
    name = lambda c: f"{prefix}{c + 1}"  # noqa: E731
    return GaussData(
        {name(c): s for c, s in enumerate(signs)},
        {
            (Endpoint(name(a[0]), a[1]), Endpoint(name(b[0]), b[1]))
            for a, b in arcs.items()
        },
        loops,
    )


def closure_arcs(w: BraidWord) -> GaussData:
    return gauss_of_closure(w)


# ---------------------------------------------------------------------------
# comparison


def _component_code(g: GaussData, start: Endpoint, labels: dict[str, int]) -> tuple:
    """Traverse from ``start``; new crossings get the next free label."""
    events = []
    e = start
    while True:
        c = e.crossing
        if c not in labels:
            labels[c] = len(labels) + 1
        events.append((labels[c], e.corner, g.crossings[c]))
        e = g.next_entry(Endpoint(c, THROUGH[e.corner]))
        if e == start:
            break
    return (len(events),) + tuple(events)


def _best_code(g: GaussData, cycles: list[list[Endpoint]], remaining: frozenset, labels: dict) -> tuple:
    if not remaining:
        return ()
    best = None
    best_choices = []
    for ci in remaining:
        for start in cycles[ci]:
            lab = dict(labels)
            code = _component_code(g, start, lab)
            if best is None or code < best:
                best, best_choices = code, [(ci, lab)]
            elif code == best:
                best_choices.append((ci, lab))
    tails = [_best_code(g, cycles, remaining - {ci}, lab) for ci, lab in best_choices]
    return best + min(tails)


def canonical_code(g: GaussData) -> str:
    """Relabeling-invariant text form of Gauss data.

    Each component is written as the sequence of crossings met, as
    ``<label>.<entry corner><sign>``, with labels assigned in order of first
    visit; start points and component order are chosen to minimize the code.
    """
    cycles = g.cycles()
    code = _best_code(g, cycles, frozenset(range(len(cycles))), {})
    parts = []
    pos = 0
    while pos < len(code):
        n = code[pos]
        events = code[pos + 1 : pos + 1 + n]
        parts.append(" ".join(f"{lab}.{corner}{'+' if s > 0 else '-'}" for lab, corner, s in events))
        pos += 1 + n
    return f"loops {g.loops} | " + " | ".join(f"({p})" for p in parts)


def same_gauss_data(g1: GaussData, g2: GaussData) -> bool:
    if g1.loops != g2.loops or len(g1.crossings) != len(g2.crossings):
        return False
    if sorted(g1.crossings.values()) != sorted(g2.crossings.values()):
        return False
    if g1.mu != g2.mu:
        return False
    return canonical_code(g1) == canonical_code(g2)


# ---------------------------------------------------------------------------
# text format

_CROSSING_RE = re.compile(r"^crossing\s+(\S+)\s+([+-])$")
_ARC_RE = re.compile(r"^arc\s+(\S+)\.(\d+)\s*->\s*(\S+)\.(\d+)$")
_LOOPS_RE = re.compile(r"^loops\s+(\d+)$")


def parse_gauss(text: str) -> GaussData:
    """Parse ``crossing <id> <+|->``, ``arc <id>.<3|4> -> <id>.<1|2>``, ``loops <k>`` lines."""
    crossings: dict[str, int] = {}
    arcs: list[tuple[Endpoint, Endpoint]] = []
    loops = 0
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if m := _CROSSING_RE.match(line):
            cid = m.group(1)
            if cid in crossings:
                raise GaussError(f"line {lineno}: crossing {cid} declared twice")
            crossings[cid] = 1 if m.group(2) == "+" else -1
        elif m := _ARC_RE.match(line):
            a = Endpoint(m.group(1), int(m.group(2)))
            b = Endpoint(m.group(3), int(m.group(4)))
            for e in (a, b):
                if not 1 <= e.corner <= 4:
                    raise GaussError(f"line {lineno}: corner {e.corner} out of range 1..4")
            arcs.append((a, b))
        elif m := _LOOPS_RE.match(line):
            loops = int(m.group(1))
        else:
            raise GaussError(f"line {lineno}: cannot parse {raw.strip()!r}")
    if len(set(arcs)) != len(arcs):
        raise GaussError("duplicate arc line")
    return GaussData(crossings, arcs, loops)


def emit_gauss(g: GaussData) -> str:
    lines = [f"crossing {c} {'+' if g.crossings[c] > 0 else '-'}" for c in g.crossing_ids()]
    order = {c: k for k, c in enumerate(g.crossing_ids())}
    for a, b in sorted(g.arcs, key=lambda ab: (order[ab[0].crossing], ab[0].corner)):
        lines.append(f"arc {a} -> {b}")
    lines.append(f"loops {g.loops}")
    return "\n".join(lines) + "\n"


def gauss_from_pairs(
    signs: Mapping[str, int], pairs: Iterable[tuple[tuple[str, int], tuple[str, int]]], loops: int = 0
) -> GaussData:
    return GaussData(signs, {(Endpoint(*a), Endpoint(*b)) for a, b in pairs}, loops)
