"""Turn abstract Gauss data into a braid word with the same Gauss data.

Crossings are placed top to bottom in ascending id order.  An arc whose
target crossing comes strictly after its source runs down inside the braid;
every other arc passes through the closure, so it starts at the top and its
source exit is routed to the bottom.  Virtual crossings (tau letters) do all
the routing.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .gauss import Endpoint, GaussData, GaussError
from .words import SIGMA, SIGMA_INV, TAU, BraidWord, Generator

__all__ = ["RouterState", "braid_from_gauss"]


@dataclass
class RouterState:
    """Strand order (arcs named by their entry endpoint) plus emitted letters."""

    order: list[Endpoint]
    pending: list[str]
    letters: list[Generator] = field(default_factory=list)

    def swap(self, p: int) -> None:
        """Virtual crossing between 0-based positions p and p+1."""
        self.order[p], self.order[p + 1] = self.order[p + 1], self.order[p]
        self.letters.append(Generator(TAU, p + 1))

    def bring_adjacent(self, left: Endpoint, right: Endpoint) -> int:
        """Route so that ``left`` sits immediately before ``right``; return its position."""
        p1, p2 = self.order.index(left), self.order.index(right)
        if p1 < p2:
            for p in range(p2 - 1, p1, -1):
                self.swap(p)
            return p1
        for p in range(p1 - 1, p2 - 1, -1):
            self.swap(p)
        return p2

    def route_to(self, target: list[Endpoint]) -> None:
        """Bubble-sort the strands into ``target`` order."""
        rank = {e: k for k, e in enumerate(target)}
        n = len(self.order)
        for end in range(n - 1, 0, -1):
            for p in range(end):
                if rank[self.order[p]] > rank[self.order[p + 1]]:
                    self.swap(p)


def braid_from_gauss(g: GaussData) -> BraidWord:
    """A braid word whose closure has the same Gauss data as ``g``."""
    ids = g.crossing_ids()
    if not ids and g.loops == 0:
        raise GaussError("empty Gauss data has no braid (degree would be 0)")
    rank = {c: k for k, c in enumerate(ids)}
    # arcs are named by their entry endpoint; source exit -> entry
    source = {b: a for a, b in g.arcs}
    top = sorted(
        (b for b, a in source.items() if rank[b.crossing] <= rank[a.crossing]),
        key=lambda e: (rank[e.crossing], e.corner),
    )
    state = RouterState(list(top), list(ids))
    while state.pending:
        c = state.pending.pop(0)
        e1, e2 = Endpoint(c, 1), Endpoint(c, 2)
        p = state.bring_adjacent(e1, e2)
        state.letters.append(Generator(SIGMA if g.crossings[c] > 0 else SIGMA_INV, p + 1))
        # exits continue as the arcs they feed; backward arcs keep their name
        # and are matched up positionally at the closure
        state.order[p] = g.next_entry(Endpoint(c, 3))
        state.order[p + 1] = g.next_entry(Endpoint(c, 4))
    state.route_to(top)
    return BraidWord(len(top) + g.loops, tuple(state.letters))
