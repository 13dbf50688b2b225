"""Virtual and welded braid calculus: words, Markov moves, Gauss data, Q invariant."""

from .braiding import braid_from_gauss
from .gauss import GaussData, canonical_code, emit_gauss, gauss_of_closure, parse_gauss, same_gauss_data
from .invariant import WeightTable, q_invariant, weight_table
from .laurent import LaurentPoly, format_poly, parse_poly
from .moves import (
    Mode,
    MoveStep,
    SearchLimits,
    Witness,
    conjugate,
    equiv_search,
    exchange,
    match_exchange,
    stabilize_left,
    stabilize_right,
    destabilize_right,
    verify_witness,
    welded_exchange_witness,
)
from .words import (
    BraidWord,
    Flavor,
    Generator,
    RelationRewrite,
    applicable_rewrites,
    apply_rewrite,
    concat,
    embed,
    format_word,
    free_reduce,
    invert,
    parse_word,
    permutation,
    writhe,
)

__version__ = "0.1.0"
