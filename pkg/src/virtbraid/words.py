"""Braid words over the virtual braid generators and their defining relations.

A word is a flat sequence of letters ``s<i>`` (sigma_i), ``S<i>`` (sigma_i^-1)
and ``t<i>`` (tau_i, the virtual crossing) together with a declared degree
(number of strands).  The relations of VB_m are exposed as explicit, positioned
rewrites so that moves can be logged and replayed; the welded quotients WB_m
and WB*_m each add one further family.
"""

from __future__ import annotations

import enum
import functools
import re
from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple, Sequence

__all__ = [
    "SIGMA",
    "SIGMA_INV",
    "TAU",
    "Generator",
    "BraidWord",
    "Flavor",
    "RelationRewrite",
    "RELATIONS",
    "WordError",
    "RewriteError",
    "parse_word",
    "format_word",
    "concat",
    "invert",
    "free_reduce",
    "reduction_rewrites",
    "permutation",
    "writhe",
    "embed",
    "relation_sides",
    "applicable_rewrites",
    "rewrites_at",
    "insertion_rewrites",
    "apply_rewrite",
    "inverse_rewrite",
]

SIGMA = "s"
SIGMA_INV = "S"
TAU = "t"
KINDS = (SIGMA, SIGMA_INV, TAU)


class WordError(ValueError):
    """Malformed braid-word text or an invalid word construction."""


class RewriteError(ValueError):
    """A relation rewrite that does not match the word it is applied to."""


class Generator(NamedTuple):
    kind: str
    index: int

    @property
    def is_real(self) -> bool:
        return self.kind != TAU

    @property
    def sign(self) -> int:
        """+1 for sigma, -1 for sigma^-1, 0 for tau."""
        return {SIGMA: 1, SIGMA_INV: -1, TAU: 0}[self.kind]

    def inverse(self) -> Generator:
        if self.kind == SIGMA:
            return Generator(SIGMA_INV, self.index)
        if self.kind == SIGMA_INV:
            return Generator(SIGMA, self.index)
        return self

    def shifted(self, s: int) -> Generator:
        return Generator(self.kind, self.index + s)

    def __str__(self) -> str:
        return f"{self.kind}{self.index}"


def s(i: int) -> Generator:
    return Generator(SIGMA, i)


def S(i: int) -> Generator:
    return Generator(SIGMA_INV, i)


def t(i: int) -> Generator:
    return Generator(TAU, i)


def sigma(i: int, exponent: int) -> Generator:
    return Generator(SIGMA if exponent > 0 else SIGMA_INV, i)


@dataclass(frozen=True)
class BraidWord:
    degree: int
    letters: tuple[Generator, ...] = ()

    def __post_init__(self):
        if not isinstance(self.degree, int) or self.degree < 1:
            raise WordError(f"degree must be a positive integer, got {self.degree!r}")
        letters = tuple(Generator(*g) for g in self.letters)
        for g in letters:
            if g.kind not in KINDS:
                raise WordError(f"unknown generator kind {g.kind!r}")
            if not 1 <= g.index <= self.degree - 1:
                raise WordError(
                    f"generator {g} out of range for degree {self.degree}"
                )
        object.__setattr__(self, "letters", letters)

    @classmethod
    def of(cls, degree: int, text: str = "") -> BraidWord:
        """Build from a bare token string, e.g. ``BraidWord.of(3, "t1 S1 t2")``."""
        return cls(degree, _parse_tokens(text))

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[Generator]:
        return iter(self.letters)

    def __getitem__(self, k):
        return self.letters[k]

    def __add__(self, other: BraidWord) -> BraidWord:
        return concat(self, other)

    def replace(self, start: int, stop: int, new: Sequence[Generator]) -> BraidWord:
        return BraidWord(self.degree, self.letters[:start] + tuple(new) + self.letters[stop:])

    @property
    def tokens(self) -> str:
        return " ".join(map(str, self.letters))

    def real_crossings(self) -> int:
        return sum(1 for g in self.letters if g.is_real)

    def __str__(self) -> str:
        return format_word(self)


# ---------------------------------------------------------------------------
# text I/O

_HEADER_RE = re.compile(r"^\s*degree\s+(\d+)\s*;(.*)$", re.DOTALL)
_TOKEN_RE = re.compile(r"^([sSt])(\d+)$")


def _parse_tokens(body: str) -> tuple[Generator, ...]:
    out = []
    for tok in body.split():
        m = _TOKEN_RE.match(tok)
        if m is None:
            raise WordError(f"malformed token {tok!r}")
        out.append(Generator(m.group(1), int(m.group(2))))
    return tuple(out)


def parse_word(text: str) -> BraidWord:
    """Parse ``degree <m>; tok tok ...``; lines starting with ``#`` are ignored."""
    body = "\n".join(
        line for line in text.splitlines() if not line.lstrip().startswith("#")
    )
    m = _HEADER_RE.match(body)
    if m is None:
        raise WordError("missing 'degree <m>;' header")
    return BraidWord(int(m.group(1)), _parse_tokens(m.group(2)))


def format_word(w: BraidWord) -> str:
    if not w.letters:
        return f"degree {w.degree};"
    return f"degree {w.degree}; {w.tokens}"


# ---------------------------------------------------------------------------
# monoid / group structure


def concat(a: BraidWord, b: BraidWord) -> BraidWord:
    if a.degree != b.degree:
        raise WordError(f"degree mismatch: {a.degree} vs {b.degree}")
    return BraidWord(a.degree, a.letters + b.letters)


def invert(w: BraidWord) -> BraidWord:
    return BraidWord(w.degree, tuple(g.inverse() for g in reversed(w.letters)))


def _cancels(a: Generator, b: Generator) -> bool:
    return a.index == b.index and b == a.inverse()


def free_reduce(w: BraidWord) -> BraidWord:
    """Remove adjacent s_i S_i, S_i s_i and t_i t_i pairs until none remain."""
    stack: list[Generator] = []
    for g in w.letters:
        if stack and _cancels(stack[-1], g):
            stack.pop()
        else:
            stack.append(g)
    return BraidWord(w.degree, tuple(stack))


def reduction_rewrites(w: BraidWord) -> list[RelationRewrite]:
    """Explicit deletion rewrites that take ``w`` to ``free_reduce(w)``.

    Applying the returned rewrites in order reproduces the stack reduction, so
    a free reduction can be recorded as a sequence of relation moves.
    """
    steps: list[RelationRewrite] = []
    stack: list[Generator] = []
    for g in w.letters:
        if stack and _cancels(stack[-1], g):
            a = stack.pop()
            pos = len(stack)
            if a.kind == TAU:
                steps.append(RelationRewrite("tau-involution", pos, "ltr", a.index))
            else:
                variant = 0 if a.kind == SIGMA else 1
                steps.append(RelationRewrite("trivial", pos, "ltr", a.index, variant=variant))
        else:
            stack.append(g)
    return steps


def permutation(w: BraidWord) -> tuple[int, ...]:
    """Image of the word in S_m as the tuple ``(p(1), ..., p(m))``.

    Each letter of index i maps to the transposition (i, i+1) and the product is
    taken in letter order as a composition of maps, so ``p(k)`` is the top
    position of the strand that ends at bottom position k.
    """
    p = list(range(1, w.degree + 1))
    for g in w.letters:
        i = g.index
        p[i - 1], p[i] = p[i], p[i - 1]
    return tuple(p)


def writhe(w: BraidWord) -> int:
    return sum(g.sign for g in w.letters)


def embed(w: BraidWord, s: int, t: int) -> BraidWord:
    """Add ``s`` trivial strands on the left and ``t`` on the right."""
    if s < 0 or t < 0:
        raise WordError("embedding offsets must be non-negative")
    return BraidWord(w.degree + s + t, tuple(g.shifted(s) for g in w.letters))


# ---------------------------------------------------------------------------
# relations


class Flavor(enum.Enum):
    VB = "vb"
    WB = "wb"
    WB_STAR = "wb-star"


# relation id -> number of sign variants
RELATIONS: dict[str, int] = {
    "trivial": 2,  # s_i S_i = 1 (v0), S_i s_i = 1 (v1)
    "braid-commute": 4,  # s_i^e s_j^f = s_j^f s_i^e, i < j-1
    "braid-YB": 2,  # s s s (v0), S S S (v1)
    "tau-involution": 1,
    "tau-commute": 1,
    "tau-YB": 1,
    "mixed-commute": 2,  # s_i^e t_j = t_j s_i^e, |i-j| > 1
    "mixed-detour": 2,  # s_i^e t_{i+1} t_i = t_{i+1} t_i s_{i+1}^e
    "welded": 1,  # t_i s_{i+1} s_i = s_{i+1} s_i t_{i+1}
    "welded-star": 1,  # t_i S_{i+1} S_i = S_{i+1} S_i t_{i+1}
}

_RELATION_ORDER = {name: k for k, name in enumerate(RELATIONS)}

_FLAVOR_RELATIONS = {
    Flavor.VB: frozenset(RELATIONS) - {"welded", "welded-star"},
    Flavor.WB: frozenset(RELATIONS) - {"welded-star"},
    Flavor.WB_STAR: frozenset(RELATIONS) - {"welded"},
}


def relations_for(flavor: Flavor) -> frozenset[str]:
    return _FLAVOR_RELATIONS[Flavor(flavor)]


def _exp(variant: int, bit: int) -> int:
    return -1 if (variant >> bit) & 1 else 1


def relation_sides(
    relation: str, i: int, j: int | None = None, variant: int = 0
) -> tuple[tuple[Generator, ...], tuple[Generator, ...]]:
    """Left and right side of one relation instance.

    Raises :class:`RewriteError` for parameters outside the family.
    """
    if relation not in RELATIONS:
        raise RewriteError(f"unknown relation {relation!r}")
    if not 0 <= variant < RELATIONS[relation]:
        raise RewriteError(f"variant {variant} invalid for {relation}")
    if relation == "trivial":
        e = _exp(variant, 0)
        return (sigma(i, e), sigma(i, -e)), ()
    if relation == "braid-commute":
        if j is None or j - i < 2:
            raise RewriteError("braid-commute needs j > i + 1")
        a, b = sigma(i, _exp(variant, 0)), sigma(j, _exp(variant, 1))
        return (a, b), (b, a)
    if relation == "braid-YB":
        e = _exp(variant, 0)
        return (
            (sigma(i, e), sigma(i + 1, e), sigma(i, e)),
            (sigma(i + 1, e), sigma(i, e), sigma(i + 1, e)),
        )
    if relation == "tau-involution":
        return (t(i), t(i)), ()
    if relation == "tau-commute":
        if j is None or j - i < 2:
            raise RewriteError("tau-commute needs j > i + 1")
        return (t(i), t(j)), (t(j), t(i))
    if relation == "tau-YB":
        return (t(i), t(i + 1), t(i)), (t(i + 1), t(i), t(i + 1))
    if relation == "mixed-commute":
        if j is None or abs(i - j) < 2:
            raise RewriteError("mixed-commute needs |i - j| > 1")
        a = sigma(i, _exp(variant, 0))
        return (a, t(j)), (t(j), a)
    if relation == "mixed-detour":
        e = _exp(variant, 0)
        return (sigma(i, e), t(i + 1), t(i)), (t(i + 1), t(i), sigma(i + 1, e))
    if relation == "welded":
        return (t(i), s(i + 1), s(i)), (s(i + 1), s(i), t(i + 1))
    # welded-star
    return (t(i), S(i + 1), S(i)), (S(i + 1), S(i), t(i + 1))


@dataclass(frozen=True, order=True)
class RelationRewrite:
    """One relation instance applied at ``position``.

    ``direction`` is ``"ltr"`` (replace the left side by the right side) or
    ``"rtl"``.  For the trivial and tau-involution families the right side is
    empty, so an ``rtl`` rewrite inserts a cancelling pair.
    """

    relation: str
    position: int
    direction: str
    i: int
    j: int | None = None
    variant: int = 0

    def sides(self) -> tuple[tuple[Generator, ...], tuple[Generator, ...]]:
        lhs, rhs = relation_sides(self.relation, self.i, self.j, self.variant)
        return (lhs, rhs) if self.direction == "ltr" else (rhs, lhs)

    @property
    def is_insertion(self) -> bool:
        return not self.sides()[0]

    def max_index(self) -> int:
        lhs, rhs = self.sides()
        return max(g.index for g in lhs + rhs)

    def sort_key(self):
        return (self.position, _RELATION_ORDER[self.relation], self.i, self.j or 0,
                self.variant, self.direction)

    def __str__(self) -> str:
        parts = [self.relation, f"i={self.i}"]
        if self.j is not None:
            parts.append(f"j={self.j}")
        parts += [f"v={self.variant}", f"at={self.position}", self.direction]
        return " ".join(parts)

    @classmethod
    def parse(cls, text: str) -> RelationRewrite:
        toks = text.split()
        if not toks:
            raise RewriteError("empty rewrite")
        fields: dict[str, str] = {}
        direction = None
        for tok in toks[1:]:
            if tok in ("ltr", "rtl"):
                direction = tok
            elif "=" in tok:
                k, v = tok.split("=", 1)
                fields[k] = v
            else:
                raise RewriteError(f"bad rewrite field {tok!r}")
        if direction is None or "i" not in fields or "at" not in fields:
            raise RewriteError(f"incomplete rewrite {text!r}")
        try:
            return cls(
                toks[0],
                int(fields["at"]),
                direction,
                int(fields["i"]),
                int(fields["j"]) if "j" in fields else None,
                int(fields.get("v", 0)),
            )
        except ValueError as exc:
            raise RewriteError(f"bad rewrite {text!r}: {exc}") from None


def inverse_rewrite(r: RelationRewrite) -> RelationRewrite:
    """Rewrite undoing ``r``: same instance and position, opposite direction."""
    return RelationRewrite(
        r.relation, r.position, "rtl" if r.direction == "ltr" else "ltr", r.i, r.j, r.variant
    )


def _instances(relation: str, m: int) -> Iterator[tuple[int, int | None, int]]:
    nv = RELATIONS[relation]
    if relation in ("trivial", "tau-involution"):
        for i in range(1, m):
            for v in range(nv):
                yield i, None, v
    elif relation in ("braid-commute", "tau-commute"):
        for i in range(1, m):
            for j in range(i + 2, m):
                for v in range(nv):
                    yield i, j, v
    elif relation == "mixed-commute":
        for i in range(1, m):
            for j in range(1, m):
                if abs(i - j) > 1:
                    for v in range(nv):
                        yield i, j, v
    elif relation in ("braid-YB", "tau-YB", "mixed-detour", "welded", "welded-star"):
        for i in range(1, m - 1):
            for v in range(nv):
                yield i, i + 1 if relation in ("braid-YB", "tau-YB") else None, v


@functools.lru_cache(maxsize=None)
def _rule_table(degree: int, flavor: Flavor):
    """(first-letter index of non-empty sources, list of insertion templates)."""
    by_first: dict[Generator, list[tuple[tuple[Generator, ...], str, int, int | None, int, str]]] = {}
    inserts: list[tuple[str, int, int | None, int]] = []
    for relation in relations_for(flavor):
        for i, j, v in _instances(relation, degree):
            lhs, rhs = relation_sides(relation, i, j, v)
            for direction, src in (("ltr", lhs), ("rtl", rhs)):
                if src:
                    by_first.setdefault(src[0], []).append((src, relation, i, j, v, direction))
                else:
                    inserts.append((relation, i, j, v))
    return by_first, inserts


def rewrites_at(w: BraidWord, flavor: Flavor, positions: Iterable[int]) -> list[RelationRewrite]:
    """Non-insertion rewrites whose source side starts at one of ``positions``."""
    by_first, _ = _rule_table(w.degree, Flavor(flavor))
    letters = w.letters
    n = len(letters)
    found = []
    for p in positions:
        if not 0 <= p < n:
            continue
        for src, relation, i, j, v, direction in by_first.get(letters[p], ()):
            k = len(src)
            if p + k <= n and letters[p : p + k] == src:
                found.append(RelationRewrite(relation, p, direction, i, j, v))
    return found


def insertion_rewrites(w: BraidWord, flavor: Flavor) -> list[RelationRewrite]:
    _, inserts = _rule_table(w.degree, Flavor(flavor))
    return [
        RelationRewrite(relation, p, "rtl", i, j, v)
        for p in range(len(w) + 1)
        for relation, i, j, v in inserts
    ]


def applicable_rewrites(
    w: BraidWord, flavor: Flavor = Flavor.VB, insertions: bool = True
) -> list[RelationRewrite]:
    """Every relation rewrite whose source side matches ``w`` at some offset.

    Insertion rewrites (trivial relations read right to left) match at every
    offset ``0..len(w)``.  The list is sorted by position, then relation.
    """
    found = rewrites_at(w, flavor, range(len(w)))
    if insertions:
        found += insertion_rewrites(w, flavor)
    found.sort(key=RelationRewrite.sort_key)
    return found


def apply_rewrite(
    w: BraidWord, r: RelationRewrite, flavor: Flavor | None = None
) -> BraidWord:
    """Replace the matched side of ``r`` by the other side.

    If ``flavor`` is given, the relation must belong to that group.
    """
    if flavor is not None and r.relation not in relations_for(flavor):
        raise RewriteError(f"relation {r.relation} is not a relation of {Flavor(flavor).value}")
    src, dst = r.sides()
    if max((g.index for g in src + dst), default=0) > w.degree - 1:
        raise RewriteError(f"rewrite {r} exceeds degree {w.degree}")
    p = r.position
    if not 0 <= p <= len(w) - len(src) or w.letters[p : p + len(src)] != src:
        raise RewriteError(f"rewrite {r} does not match {format_word(w)}")
    return w.replace(p, p + len(src), dst)

