"""Markov-type moves on braid words and bounded equivalence search.

Moves act on concrete words.  A :class:`Witness` is a start word plus a list of
:class:`MoveStep` objects; replaying the steps must land on the end word.  The
rules of the game are chosen by a :class:`Mode`:

``vb-strict``  VM0-VM2 over VB_m
``vb``         VM0-VM2 plus the virtual exchange VM3
``wb``         WM0-WM2, i.e. the same moves over WB_m
``wb-star``    the same moves over WB*_m

Left stabilization of virtual type is accepted in every mode, and of
positive/negative type in every mode except ``vb-strict``; it is never used
by the search.
"""

from __future__ import annotations

import dataclasses
import enum
from dataclasses import dataclass, field
from typing import Iterator, NamedTuple

from .words import (
    SIGMA,
    SIGMA_INV,
    TAU,
    BraidWord,
    Flavor,
    Generator,
    RelationRewrite,
    RewriteError,
    WordError,
    insertion_rewrites,
    rewrites_at,
    apply_rewrite,
    embed,
    format_word,
    free_reduce,
    inverse_rewrite,
    invert,
    parse_word,
    reduction_rewrites,
    relations_for,
)

__all__ = [
    "Mode",
    "MoveError",
    "MoveStep",
    "Witness",
    "SearchLimits",
    "STAB_TYPES",
    "conjugate",
    "stabilize_right",
    "destabilize_right",
    "stabilize_left",
    "destabilize_left",
    "exchange",
    "match_exchange",
    "apply_step",
    "inverse_steps",
    "reverse_witness",
    "replay",
    "verify_witness",
    "equiv_search",
    "welded_exchange_witness",
    "format_witness",
    "parse_witness",
]

STAB_TYPES = ("positive", "negative", "virtual")
_STAB_KIND = {"positive": SIGMA, "negative": SIGMA_INV, "virtual": TAU}
_KIND_STAB = {v: k for k, v in _STAB_KIND.items()}


class MoveError(ValueError):
    """A move whose preconditions fail on the word it is applied to."""


class Mode(enum.Enum):
    VB = "vb"
    VB_STRICT = "vb-strict"
    WB = "wb"
    WB_STAR = "wb-star"

    @property
    def flavor(self) -> Flavor:
        return {
            Mode.VB: Flavor.VB,
            Mode.VB_STRICT: Flavor.VB,
            Mode.WB: Flavor.WB,
            Mode.WB_STAR: Flavor.WB_STAR,
        }[self]

    @property
    def allows_exchange(self) -> bool:
        return self is Mode.VB

    @property
    def welded(self) -> bool:
        return self in (Mode.WB, Mode.WB_STAR)


# ---------------------------------------------------------------------------
# elementary moves


def conjugate(b: BraidWord, g: BraidWord) -> BraidWord:
    """``g^-1 b g``, free-reduced."""
    if b.degree != g.degree:
        raise WordError(f"degree mismatch: {b.degree} vs {g.degree}")
    return free_reduce(invert(g) + b + g)


def _gen(stab_type: str, index: int) -> Generator:
    try:
        return Generator(_STAB_KIND[stab_type], index)
    except KeyError:
        raise MoveError(f"unknown stabilization type {stab_type!r}") from None


def stabilize_right(b: BraidWord, stab_type: str) -> BraidWord:
    m = b.degree
    return BraidWord(m + 1, b.letters + (_gen(stab_type, m),))


def destabilize_right(b: BraidWord, stab_type: str | None = None) -> BraidWord:
    """Inverse of :func:`stabilize_right`.

    The last letter must sit on strands m-1, m (degree m) and be the only
    letter touching strand m.  If ``stab_type`` is given it must match.
    """
    m = b.degree
    if m < 2 or not b.letters:
        raise MoveError("nothing to destabilize")
    last = b.letters[-1]
    if last.index != m - 1:
        raise MoveError(f"last letter {last} is not on the last two strands")
    if any(g.index == m - 1 for g in b.letters[:-1]):
        raise MoveError(f"strand {m} is used before the final letter")
    if stab_type is not None and _KIND_STAB[last.kind] != stab_type:
        raise MoveError(f"final letter {last} is not a {stab_type} stabilization")
    return BraidWord(m - 1, b.letters[:-1])


def stabilize_left(b: BraidWord, stab_type: str) -> BraidWord:
    shifted = embed(b, 1, 0)
    return BraidWord(shifted.degree, shifted.letters + (_gen(stab_type, 1),))


def destabilize_left(b: BraidWord, stab_type: str | None = None) -> BraidWord:
    """Inverse of :func:`stabilize_left`."""
    if b.degree < 2 or not b.letters:
        raise MoveError("nothing to destabilize")
    last = b.letters[-1]
    if last.index != 1:
        raise MoveError(f"last letter {last} is not on the first two strands")
    if any(g.index == 1 for g in b.letters[:-1]):
        raise MoveError("strand 1 is used before the final letter")
    if stab_type is not None and _KIND_STAB[last.kind] != stab_type:
        raise MoveError(f"final letter {last} is not a {stab_type} stabilization")
    return BraidWord(b.degree - 1, tuple(g.shifted(-1) for g in b.letters[:-1]))


def _exchange_words(b1: BraidWord, b2: BraidWord, side: str) -> tuple[BraidWord, BraidWord]:
    if b1.degree != b2.degree:
        raise WordError(f"degree mismatch: {b1.degree} vs {b2.degree}")
    m = b1.degree
    if side == "right":
        e1, e2, k = embed(b1, 0, 1), embed(b2, 0, 1), m
    elif side == "left":
        e1, e2, k = embed(b1, 1, 0), embed(b2, 1, 0), 1
    else:
        raise MoveError(f"side must be 'left' or 'right', got {side!r}")
    sig = BraidWord(m + 1, e1.letters + (Generator(SIGMA_INV, k),) + e2.letters + (Generator(SIGMA, k),))
    tau = BraidWord(m + 1, e1.letters + (Generator(TAU, k),) + e2.letters + (Generator(TAU, k),))
    return sig, tau


def exchange(
    b1: BraidWord, b2: BraidWord, side: str = "right", direction: str = "forward"
) -> tuple[BraidWord, BraidWord]:
    """Virtual exchange pair ``(source, target)``.

    ``forward`` goes from the sigma form ``b1 S_k b2 s_k`` to the tau form
    ``b1 t_k b2 t_k``; ``backward`` is the reverse.  ``k`` is the new last
    strand pair for ``side="right"`` and 1 for ``side="left"``.
    """
    sig, tau = _exchange_words(b1, b2, side)
    if direction == "forward":
        return sig, tau
    if direction == "backward":
        return tau, sig
    raise MoveError(f"direction must be 'forward' or 'backward', got {direction!r}")


class ExchangeMatch(NamedTuple):
    b1: BraidWord
    b2: BraidWord
    form: str  # "sigma" or "tau"


def match_exchange(w: BraidWord, side: str = "right", form: str | None = None) -> ExchangeMatch | None:
    """Decompose ``w`` as one side of a virtual exchange move, if possible.

    Exactly two letters may touch the distinguished strand: the final letter
    (``s_k`` or ``t_k``) and one earlier letter (``S_k`` or ``t_k``).
    """
    m = w.degree - 1
    if m < 1 or len(w) < 2:
        return None
    k = m if side == "right" else 1
    touching = [p for p, g in enumerate(w.letters) if g.index == k]
    if len(touching) != 2 or touching[1] != len(w) - 1:
        return None
    p = touching[0]
    first, last = w.letters[p], w.letters[-1]
    if first.kind == SIGMA_INV and last.kind == SIGMA:
        found = "sigma"
    elif first.kind == TAU and last.kind == TAU:
        found = "tau"
    else:
        return None
    if form is not None and form != found:
        return None
    shift = 0 if side == "right" else -1
    part1 = tuple(g.shifted(shift) for g in w.letters[:p])
    part2 = tuple(g.shifted(shift) for g in w.letters[p + 1 : -1])
    return ExchangeMatch(BraidWord(m, part1), BraidWord(m, part2), found)


# ---------------------------------------------------------------------------
# steps


@dataclass(frozen=True)
class MoveStep:
    """One move.

    kind      payload
    ``VM0``   ``rewrite``: a :class:`RelationRewrite`
    ``VM1``   ``conjugator``: a :class:`BraidWord` of the current degree
    ``VM2``   ``stab_type`` and ``direction`` (``stabilize``/``destabilize``)
    ``VM3``   ``side`` and ``direction`` (``forward``/``backward``)
    ``LSTAB`` ``stab_type`` and ``direction``
    """

    kind: str
    rewrite: RelationRewrite | None = None
    conjugator: BraidWord | None = None
    stab_type: str | None = None
    side: str | None = None
    direction: str | None = None

    @classmethod
    def vm0(cls, r: RelationRewrite) -> MoveStep:
        return cls("VM0", rewrite=r)

    @classmethod
    def vm1(cls, g: BraidWord) -> MoveStep:
        return cls("VM1", conjugator=g)

    @classmethod
    def vm2(cls, stab_type: str, direction: str = "stabilize") -> MoveStep:
        return cls("VM2", stab_type=stab_type, side="right", direction=direction)

    @classmethod
    def vm3(cls, side: str, direction: str = "forward") -> MoveStep:
        return cls("VM3", side=side, direction=direction)

    @classmethod
    def left_stab(cls, stab_type: str, direction: str = "stabilize") -> MoveStep:
        return cls("LSTAB", stab_type=stab_type, side="left", direction=direction)

    def to_text(self, welded: bool = False) -> str:
        label = self.kind
        if welded and label in ("VM0", "VM1", "VM2"):
            label = "WM" + label[2:]
        if self.kind == "VM0":
            return f"{label} {self.rewrite}"
        if self.kind == "VM1":
            return f"{label} {format_word(self.conjugator)}"
        if self.kind == "VM2":
            return f"{label} {self.stab_type} {self.direction}"
        if self.kind == "VM3":
            return f"{label} {self.side} {self.direction}"
        return f"{label} {self.stab_type} {self.direction}"

    def __str__(self) -> str:
        return self.to_text()

    @classmethod
    def parse(cls, text: str) -> MoveStep:
        text = text.strip()
        head, _, rest = text.partition(" ")
        kind = head.upper()
        if kind.startswith("WM"):
            kind = "VM" + kind[2:]
        rest = rest.strip()
        if kind == "VM0":
            return cls.vm0(RelationRewrite.parse(rest))
        if kind == "VM1":
            return cls.vm1(parse_word(rest))
        args = rest.split()
        if kind == "VM2" and len(args) == 2 and args[0] in STAB_TYPES and args[1] in (
            "stabilize",
            "destabilize",
        ):
            return cls.vm2(args[0], args[1])
        if kind == "VM3" and len(args) == 2 and args[0] in ("left", "right") and args[1] in (
            "forward",
            "backward",
        ):
            return cls.vm3(args[0], args[1])
        if kind == "LSTAB" and 1 <= len(args) <= 2 and args[0] in STAB_TYPES:
            direction = args[1] if len(args) == 2 else "stabilize"
            if direction in ("stabilize", "destabilize"):
                return cls.left_stab(args[0], direction)
        raise MoveError(f"cannot parse move step {text!r}")


def step_allowed(step: MoveStep, mode: Mode) -> bool:
    mode = Mode(mode)
    if step.kind == "VM3":
        return mode.allows_exchange
    if step.kind == "LSTAB":
        return step.stab_type == "virtual" or mode is not Mode.VB_STRICT
    if step.kind == "VM0":
        return step.rewrite.relation in relations_for(mode.flavor)
    return step.kind in ("VM1", "VM2")


def apply_step(w: BraidWord, step: MoveStep, mode: Mode | str | None = None) -> BraidWord:
    """Apply one move; with ``mode`` given, the move must be legal there."""
    if mode is not None and not step_allowed(step, Mode(mode)):
        raise MoveError(f"{step.to_text()} is not a move of mode {Mode(mode).value}")
    try:
        if step.kind == "VM0":
            return apply_rewrite(w, step.rewrite)
        if step.kind == "VM1":
            return conjugate(w, step.conjugator)
        if step.kind == "VM2":
            if step.direction == "stabilize":
                return stabilize_right(w, step.stab_type)
            return destabilize_right(w, step.stab_type)
        if step.kind == "VM3":
            sig_form = step.direction == "forward"
            match = match_exchange(w, step.side, "sigma" if sig_form else "tau")
            if match is None:
                raise MoveError(f"{format_word(w)} has no {step.side} exchange shape")
            return exchange(match.b1, match.b2, step.side, step.direction)[1]
        if step.kind == "LSTAB":
            if step.direction == "stabilize":
                return stabilize_left(w, step.stab_type)
            return destabilize_left(w, step.stab_type)
    except (RewriteError, WordError) as exc:
        raise MoveError(str(exc)) from None
    raise MoveError(f"unknown move kind {step.kind!r}")


def _inverse_step(before: BraidWord, step: MoveStep) -> list[MoveStep]:
    """Steps taking ``apply_step(before, step)`` back to exactly ``before``."""
    if step.kind == "VM0":
        return [MoveStep.vm0(inverse_rewrite(step.rewrite))]
    if step.kind == "VM1":
        # conjugation free-reduces; restore any cancelled pairs by insertion
        back = [MoveStep.vm1(invert(step.conjugator))]
        restore = reduction_rewrites(before)
        back += [MoveStep.vm0(inverse_rewrite(r)) for r in reversed(restore)]
        return back
    if step.kind == "VM2":
        flip = "destabilize" if step.direction == "stabilize" else "stabilize"
        return [MoveStep.vm2(step.stab_type, flip)]
    if step.kind == "VM3":
        flip = "backward" if step.direction == "forward" else "forward"
        return [MoveStep.vm3(step.side, flip)]
    flip = "destabilize" if step.direction == "stabilize" else "stabilize"
    return [MoveStep.left_stab(step.stab_type, flip)]


def inverse_steps(start: BraidWord, steps: list[MoveStep]) -> list[MoveStep]:
    """Steps leading from the end of ``steps`` (replayed from ``start``) back to ``start``."""
    words = [start]
    for st in steps:
        words.append(apply_step(words[-1], st))
    out: list[MoveStep] = []
    for before, st in zip(reversed(words[:-1]), reversed(steps)):
        out.extend(_inverse_step(before, st))
    return out


# ---------------------------------------------------------------------------
# witnesses


@dataclass(frozen=True)
class Witness:
    start: BraidWord
    steps: tuple[MoveStep, ...]
    end: BraidWord
    mode: Mode = Mode.VB

    def __len__(self) -> int:
        return len(self.steps)


@dataclass
class ReplayResult:
    ok: bool
    words: list[BraidWord] = field(default_factory=list)
    failed_step: int | None = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def replay(witness: Witness, mode: Mode | str | None = None) -> ReplayResult:
    """Replay every step; report the first illegal step if any."""
    mode = Mode(mode) if mode is not None else witness.mode
    words = [witness.start]
    for k, st in enumerate(witness.steps):
        try:
            words.append(apply_step(words[-1], st, mode))
        except MoveError as exc:
            return ReplayResult(False, words, k, str(exc))
    if free_reduce(words[-1]) != free_reduce(witness.end):
        return ReplayResult(
            False,
            words,
            len(witness.steps),
            f"replay ends at {format_word(words[-1])}, expected {format_word(witness.end)}",
        )
    return ReplayResult(True, words)


def verify_witness(witness: Witness, mode: Mode | str | None = None) -> bool:
    return replay(witness, mode).ok


def reverse_witness(witness: Witness) -> Witness:
    steps = inverse_steps(witness.start, list(witness.steps))
    end = witness.start
    # the forward replay may end on a non-reduced form of witness.end
    last = witness.start
    for st in witness.steps:
        last = apply_step(last, st)
    if last != witness.end:
        fix = reduction_rewrites(witness.end)
        steps = [MoveStep.vm0(r) for r in fix] + [
            MoveStep.vm0(inverse_rewrite(r)) for r in reversed(reduction_rewrites(last))
        ] + steps
    return Witness(witness.end, tuple(steps), end, witness.mode)


def format_witness(witness: Witness) -> str:
    lines = [
        f"mode {witness.mode.value}",
        f"start {format_word(witness.start)}",
    ]
    lines += [st.to_text(witness.mode.welded) for st in witness.steps]
    lines.append(f"end {format_word(witness.end)}")
    return "\n".join(lines) + "\n"


def parse_witness(text: str) -> Witness:
    mode = Mode.VB
    start = end = None
    steps: list[MoveStep] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        head, _, rest = line.partition(" ")
        if head == "mode":
            mode = Mode(rest.strip())
        elif head == "start":
            start = parse_word(rest)
        elif head == "end":
            end = parse_word(rest)
        else:
            steps.append(MoveStep.parse(line))
    if start is None or end is None:
        raise MoveError("witness log needs 'start' and 'end' lines")
    return Witness(start, tuple(steps), end, mode)


# ---------------------------------------------------------------------------
# bounded search


@dataclass(frozen=True)
class SearchLimits:
    max_degree: int = 5
    max_length: int = 12
    max_depth: int = 8

    def __post_init__(self):
        if min(self.max_degree, self.max_length, self.max_depth) < 1:
            raise ValueError("search limits must be positive")


def _single_generators(m: int) -> Iterator[BraidWord]:
    for i in range(1, m):
        for kind in (SIGMA, SIGMA_INV, TAU):
            yield BraidWord(m, (Generator(kind, i),))


def _with_reduction(w: BraidWord, steps: list[MoveStep]) -> tuple[BraidWord, list[MoveStep]]:
    red = reduction_rewrites(w)
    if not red:
        return w, steps
    return free_reduce(w), steps + [MoveStep.vm0(r) for r in red]


def _neighbors(w: BraidWord, mode: Mode, limits: SearchLimits) -> Iterator[tuple[BraidWord, list[MoveStep]]]:
    """Moves out of a free-reduced node; each edge ends on a free-reduced node."""
    flavor = mode.flavor
    # VM0: plain rewrites, and an insertion followed by a rewrite overlapping it
    for r in rewrites_at(w, flavor, range(len(w))):
        nxt = apply_rewrite(w, r)
        if len(nxt) <= limits.max_length:
            yield _with_reduction(nxt, [MoveStep.vm0(r)])
    if len(w) + 2 <= limits.max_length:
        for ins in insertion_rewrites(w, flavor):
            mid = apply_rewrite(w, ins)
            lo = ins.position
            undo = inverse_rewrite(ins)
            for r in rewrites_at(mid, flavor, range(lo - 2, lo + 2)):
                if r.position + len(r.sides()[0]) > lo and r != undo:
                    nxt = apply_rewrite(mid, r)
                    if len(nxt) <= limits.max_length:
                        yield _with_reduction(nxt, [MoveStep.vm0(ins), MoveStep.vm0(r)])
    # VM1: conjugation by single generators
    for g in _single_generators(w.degree):
        nxt = conjugate(w, g)
        if len(nxt) <= limits.max_length:
            yield nxt, [MoveStep.vm1(g)]
    # VM2
    if w.degree < limits.max_degree and len(w) < limits.max_length:
        for st in STAB_TYPES:
            yield stabilize_right(w, st), [MoveStep.vm2(st, "stabilize")]
    try:
        down = destabilize_right(w)
    except MoveError:
        pass
    else:
        st = _KIND_STAB[w.letters[-1].kind]
        yield _with_reduction(down, [MoveStep.vm2(st, "destabilize")])
    # VM3
    if mode.allows_exchange:
        for side in ("right", "left"):
            match = match_exchange(w, side)
            if match is None:
                continue
            direction = "forward" if match.form == "sigma" else "backward"
            nxt = exchange(match.b1, match.b2, side, direction)[1]
            yield _with_reduction(nxt, [MoveStep.vm3(side, direction)])


def equiv_search(
    w1: BraidWord,
    w2: BraidWord,
    mode: Mode | str = Mode.VB_STRICT,
    limits: SearchLimits | None = None,
) -> Witness | None:
    """Bidirectional breadth-first search for a move sequence from ``w1`` to ``w2``.

    Returns a replay-verified witness, or ``None`` when the frontiers do not meet
    within ``limits``.  ``None`` never means the words are inequivalent.
    """
    mode = Mode(mode)
    limits = limits or SearchLimits()
    a, b = free_reduce(w1), free_reduce(w2)
    head = [MoveStep.vm0(r) for r in reduction_rewrites(w1)]
    # parents[node] = (previous node, steps from previous to node)
    fwd: dict[BraidWord, tuple[BraidWord | None, list[MoveStep]]] = {a: (None, [])}
    bwd: dict[BraidWord, tuple[BraidWord | None, list[MoveStep]]] = {b: (None, [])}
    front_f, front_b = [a], [b]
    meet = a if a in bwd else None
    depth = 0
    while meet is None and depth < limits.max_depth and front_f and front_b:
        grow_fwd = len(front_f) <= len(front_b)
        front, seen, other = (front_f, fwd, bwd) if grow_fwd else (front_b, bwd, fwd)
        nxt_front = []
        for node in front:
            for nxt, steps in _neighbors(node, mode, limits):
                if nxt in seen:
                    continue
                seen[nxt] = (node, steps)
                nxt_front.append(nxt)
                if nxt in other:
                    meet = nxt
                    break
            if meet is not None:
                break
        if grow_fwd:
            front_f = nxt_front
        else:
            front_b = nxt_front
        depth += 1
    if meet is None:
        return None

    path_f: list[MoveStep] = []
    node = meet
    while fwd[node][0] is not None:
        prev, steps = fwd[node]
        path_f[:0] = steps
        node = prev
    # backward tree edges run from w2 outwards; invert them, nearest meet first
    path_b: list[MoveStep] = []
    node = meet
    while bwd[node][0] is not None:
        prev, steps = bwd[node]
        path_b.extend(inverse_steps(prev, steps))
        node = prev
    tail = [MoveStep.vm0(inverse_rewrite(r)) for r in reversed(reduction_rewrites(w2))]
    witness = Witness(w1, tuple(head + path_f + path_b + tail), w2, mode)
    result = replay(witness)
    if not result.ok or result.words[-1] != w2:
        raise AssertionError(f"search produced an invalid witness: {result.reason}")
    return witness


# ---------------------------------------------------------------------------
# welded realization of the right virtual exchange


class _Chain:
    def __init__(self, start: BraidWord, mode: Mode):
        self.word = start
        self.steps: list[MoveStep] = []
        self.mode = mode

    def do(self, step: MoveStep) -> None:
        self.word = apply_step(self.word, step, self.mode)
        self.steps.append(step)

    def rewrite(self, relation: str, position: int, direction: str, i: int,
                j: int | None = None, variant: int = 0) -> None:
        self.do(MoveStep.vm0(RelationRewrite(relation, position, direction, i, j, variant)))

    def expect(self, letters: tuple[Generator, ...]) -> None:
        if self.word.letters != letters:
            raise AssertionError(
                f"welded chain drifted: have {format_word(self.word)}, expected {letters}"
            )


def _commute_left(chain: _Chain, pos: int, count: int) -> None:
    """Move the letter at ``pos`` left past the ``count`` letters before it."""
    for p in range(pos - 1, pos - 1 - count, -1):
        x, y = chain.word.letters[p], chain.word.letters[p + 1]
        chain.rewrite(*_commute_rule(x, y, p))


def _commute_right(chain: _Chain, pos: int, count: int) -> None:
    """Move the letter at ``pos`` right past the ``count`` letters after it."""
    for p in range(pos, pos + count):
        x, y = chain.word.letters[p], chain.word.letters[p + 1]
        chain.rewrite(*_commute_rule(x, y, p))


def _commute_rule(x: Generator, y: Generator, p: int):
    """Relation instance swapping the far-apart letters ``x y`` at offset ``p``."""
    if abs(x.index - y.index) < 2:
        raise AssertionError(f"letters {x} {y} do not commute")
    if x.kind == TAU and y.kind == TAU:
        lo, hi = sorted((x.index, y.index))
        return ("tau-commute", p, "ltr" if x.index == lo else "rtl", lo, hi, 0)
    if x.kind != TAU and y.kind != TAU:
        lo, hi = (x, y) if x.index < y.index else (y, x)
        variant = (lo.kind == SIGMA_INV) | ((hi.kind == SIGMA_INV) << 1)
        return ("braid-commute", p, "ltr" if x is lo else "rtl", lo.index, hi.index, variant)
    sig, tau = (x, y) if y.kind == TAU else (y, x)
    variant = 1 if sig.kind == SIGMA_INV else 0
    return ("mixed-commute", p, "ltr" if x is sig else "rtl", sig.index, tau.index, variant)


def welded_exchange_witness(b1: BraidWord, b2: BraidWord) -> Witness:
    """Explicit WM0-WM2 chain realizing the right virtual exchange move.

    Connects ``b1 S_m b2 s_m`` to ``b1 t_m b2 t_m`` in degree m+1 (b1, b2 of
    degree m, embedded on the left).  Inputs are free-reduced first so that the
    conjugation steps cancel exactly where intended.
    """
    mode = Mode.WB
    if b1.degree != b2.degree:
        raise WordError(f"degree mismatch: {b1.degree} vs {b2.degree}")
    m = b1.degree
    r1 = free_reduce(b1)
    r2 = free_reduce(b2)
    start, target = exchange(b1, b2, "right", "forward")
    chain = _Chain(start, mode)
    # reduce each block in place; reducing the whole word could cancel across blocks
    red1 = reduction_rewrites(embed(b1, 0, 1))
    red2 = [dataclasses.replace(r, position=r.position + len(r1) + 1)
            for r in reduction_rewrites(embed(b2, 0, 1))]
    for r in red1 + red2:
        chain.do(MoveStep.vm0(r))
    B1, B2 = embed(r1, 0, 2).letters, embed(r2, 0, 2).letters
    n1, n2 = len(B1), len(B2)
    sm, Sm, tm = Generator(SIGMA, m), Generator(SIGMA_INV, m), Generator(TAU, m)
    sm1, Sm1, tm1 = Generator(SIGMA, m + 1), Generator(SIGMA_INV, m + 1), Generator(TAU, m + 1)

    # b1 S_m b2 s_m = b1 S_m t_m t_m b2 s_m
    chain.rewrite("tau-involution", n1 + 1, "rtl", m)
    # <-> b1 S_m t_m t_{m+1} t_m b2 s_m  (conjugate, stabilize, conjugate back)
    prefix = BraidWord(m + 1, embed(r1, 0, 1).letters + (Sm, tm))
    suffix = BraidWord(m + 1, (tm,) + embed(r2, 0, 1).letters + (sm,))
    chain.do(MoveStep.vm1(prefix))
    chain.do(MoveStep.vm2("virtual", "stabilize"))
    chain.do(MoveStep.vm1(embed(suffix, 0, 1)))
    chain.expect(B1 + (Sm, tm, tm1, tm) + B2 + (sm,))
    # = b1 S_m t_{m+1} t_m t_{m+1} b2 s_m
    chain.rewrite("tau-YB", n1 + 1, "ltr", m, m + 1)
    # = b1 t_{m+1} t_m S_{m+1} t_{m+1} b2 s_m
    chain.rewrite("mixed-detour", n1, "ltr", m, None, 1)
    chain.expect(B1 + (tm1, tm, Sm1, tm1) + B2 + (sm,))
    # = t_{m+1} b1 t_m b2 S_{m+1} t_{m+1} s_m
    _commute_left(chain, n1, n1)
    _commute_right(chain, n1 + 3, n2)
    _commute_right(chain, n1 + 2, n2)
    chain.expect((tm1,) + B1 + (tm,) + B2 + (Sm1, tm1, sm))
    # <-> b1 t_m b2 S_{m+1} t_{m+1} s_m t_{m+1}
    chain.do(MoveStep.vm1(BraidWord(m + 2, (tm1,))))
    chain.expect(B1 + (tm,) + B2 + (Sm1, tm1, sm, tm1))
    # = b1 t_m b2 S_{m+1} t_m s_{m+1} t_m
    k = n1 + 1 + n2 + 1  # offset of t_{m+1} s_m t_{m+1}
    chain.rewrite("tau-involution", k + 3, "rtl", m)
    chain.rewrite("mixed-detour", k + 1, "ltr", m, None, 0)
    chain.rewrite("tau-involution", k, "ltr", m + 1)
    chain.expect(B1 + (tm,) + B2 + (Sm1, tm, sm1, tm))
    # = b1 t_m b2 s_m t_{m+1} S_m t_m
    k -= 1  # offset of S_{m+1} t_m s_{m+1}
    chain.rewrite("trivial", k + 3, "rtl", m, None, 0)
    chain.rewrite("welded", k + 1, "ltr", m)
    chain.rewrite("trivial", k, "ltr", m + 1, None, 1)
    chain.expect(B1 + (tm,) + B2 + (sm, tm1, Sm, tm))
    # <-> b1 t_m b2 s_m S_m t_m = b1 t_m b2 t_m  (conjugate, destabilize, conjugate back)
    tail = BraidWord(m + 2, (Sm, tm))
    chain.do(MoveStep.vm1(invert(tail)))
    chain.do(MoveStep.vm2("virtual", "destabilize"))
    chain.do(MoveStep.vm1(BraidWord(m + 1, (Sm, tm))))
    # conjugation free-reduces, which collapses t_m t_m when b2 is trivial
    tail_red = reduction_rewrites(BraidWord(m + 1, B1 + (tm,) + B2 + (tm,)))
    chain.expect(free_reduce(BraidWord(m + 1, B1 + (tm,) + B2 + (tm,))).letters)
    for r in reversed(tail_red):
        chain.do(MoveStep.vm0(inverse_rewrite(r)))
    for r in reversed(red1 + red2):
        chain.do(MoveStep.vm0(inverse_rewrite(r)))
    witness = Witness(start, tuple(chain.steps), target, mode)
    if not verify_witness(witness):
        raise AssertionError("welded exchange chain failed to replay")
    return witness
