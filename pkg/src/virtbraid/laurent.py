"""Exact Laurent polynomials in one variable ``q`` with integer coefficients."""

from __future__ import annotations

import re
from typing import Iterable, Mapping, Union

__all__ = ["LaurentPoly", "q", "ONE", "ZERO"]

Scalar = Union[int, "LaurentPoly"]

_TERM_RE = re.compile(
    r"""\s*(?P<sign>[+-])?\s*
        (?:(?P<coef>\d+)\s*\*?\s*)?
        (?P<var>q(?:\s*\^\s*(?P<exp>[+-]?\d+|\{[+-]?\d+\}))?)?
    """,
    re.VERBOSE,
)


class LaurentPoly:
    """Immutable element of Z[q, q^-1].

    Stored as a mapping exponent -> nonzero coefficient, so the zero polynomial
    is the empty mapping and equality is structural.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, int] | Iterable[tuple[int, int]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[int, int] = {}
        for e, c in items:
            acc[int(e)] = acc.get(int(e), 0) + int(c)
        self._terms = {e: c for e, c in sorted(acc.items()) if c}
        self._hash = None

    @classmethod
    def monomial(cls, exponent: int, coefficient: int = 1) -> LaurentPoly:
        return cls({exponent: coefficient})

    @classmethod
    def constant(cls, c: int) -> LaurentPoly:
        return cls({0: c})

    # -- mapping-ish access -------------------------------------------------
    def terms(self) -> dict[int, int]:
        return dict(self._terms)

    def __getitem__(self, exponent: int) -> int:
        return self._terms.get(exponent, 0)

    def __iter__(self):
        return iter(self._terms.items())

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    @property
    def min_degree(self) -> int | None:
        return next(iter(self._terms), None)

    @property
    def max_degree(self) -> int | None:
        return next(reversed(self._terms), None) if self._terms else None

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    # -- arithmetic ---------------------------------------------------------
    @staticmethod
    def _coerce(other: Scalar) -> LaurentPoly:
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, int):
            return LaurentPoly.constant(other)
        return NotImplemented

    def __add__(self, other: Scalar) -> LaurentPoly:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        acc = dict(self._terms)
        for e, c in other._terms.items():
            acc[e] = acc.get(e, 0) + c
        return LaurentPoly(acc)

    __radd__ = __add__

    def __neg__(self) -> LaurentPoly:
        return LaurentPoly({e: -c for e, c in self._terms.items()})

    def __sub__(self, other: Scalar) -> LaurentPoly:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other: Scalar) -> LaurentPoly:
        return (-self) + other

    def __mul__(self, other: Scalar) -> LaurentPoly:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        acc: dict[int, int] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                acc[e1 + e2] = acc.get(e1 + e2, 0) + c1 * c2
        return LaurentPoly(acc)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> LaurentPoly:
        if n < 0:
            if not self.is_monomial():
                raise ValueError("only monomials are invertible in Z[q, q^-1]")
            (e, c), = self._terms.items()
            if c not in (1, -1):
                raise ValueError("only monomials with unit coefficient are invertible")
            return LaurentPoly({e * n: c ** -n})  # c is +-1, so c**-n == c**n
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def shift(self, exponent: int, coefficient: int = 1) -> LaurentPoly:
        """Multiply by the monomial ``coefficient * q^exponent``."""
        return LaurentPoly({e + exponent: c * coefficient for e, c in self._terms.items()})

    def substitute_inverse(self) -> LaurentPoly:
        """q -> q^-1."""
        return LaurentPoly({-e: c for e, c in self._terms.items()})

    # -- comparison ---------------------------------------------------------
    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = LaurentPoly.constant(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(tuple(self._terms.items()))
        return self._hash

    # -- text ---------------------------------------------------------------
    def __str__(self) -> str:
        return format_poly(self)

    def __repr__(self) -> str:
        return f"LaurentPoly({format_poly(self)!r})"

    @classmethod
    def parse(cls, text: str) -> LaurentPoly:
        return parse_poly(text)


def format_poly(p: LaurentPoly) -> str:
    """Canonical text: terms in ascending exponent order, e.g. ``q^-3 - q^-1 - q + q^3``."""
    if not p:
        return "0"
    out: list[str] = []
    for e, c in p:
        mag = abs(c)
        if e == 0:
            body = str(mag)
        else:
            var = "q" if e == 1 else f"q^{e}"
            body = var if mag == 1 else f"{mag} {var}"
        if not out:
            out.append(body if c > 0 else f"-{body}")
        else:
            out.append(("+ " if c > 0 else "- ") + body)
    return " ".join(out)


def parse_poly(text: str) -> LaurentPoly:
    """Inverse of :func:`format_poly`; also accepts ``2q^-1``, ``2*q^{-1}`` and any term order."""
    s = text.strip()
    if not s:
        raise ValueError("empty polynomial text")
    if s == "0":
        return ZERO
    acc: dict[int, int] = {}
    pos = 0
    first = True
    while pos < len(s):
        m = _TERM_RE.match(s, pos)
        if m is None or m.end() == pos:
            raise ValueError(f"cannot parse polynomial at {s[pos:]!r}")
        sign, coef, var, exp = m.group("sign", "coef", "var", "exp")
        if sign is None and not first:
            raise ValueError(f"missing operator before {s[pos:]!r}")
        if coef is None and var is None:
            raise ValueError(f"dangling sign in {text!r}")
        c = int(coef) if coef is not None else 1
        if sign == "-":
            c = -c
        if var is None:
            e = 0
        elif exp is None:
            e = 1
        else:
            e = int(exp.strip("{}"))
        acc[e] = acc.get(e, 0) + c
        pos = m.end()
        first = False
    return LaurentPoly(acc)


ZERO = LaurentPoly()
ONE = LaurentPoly.constant(1)
q = LaurentPoly.monomial(1)
