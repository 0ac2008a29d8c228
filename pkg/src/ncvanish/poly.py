"""Exact arithmetic for polynomials in noncommuting variables over the rationals.

Representation
--------------
A word in the variables x1..xd is a tuple of 1-based variable indices; the
empty tuple is the unit word.  A polynomial keeps the ambient variable count
``d`` and a map from words to nonzero Fraction coefficients.  The zero
polynomial has an empty term map and degree ``-inf``.

Words are compared degree-lexicographically: shorter words come first, words
of equal length are compared as index tuples (so x1 < x2 < ... < xd).  This
order is compatible with concatenation on both sides, hence leading terms of
products multiply: lead(p*q) = lead(p)*lead(q) for nonzero p, q.
"""

from __future__ import annotations

import itertools
import re
from fractions import Fraction
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Tuple, Union

Word = Tuple[int, ...]
Scalar = Fraction

NEG_INF = float("-inf")


def deglex_key(word: Word) -> Tuple[int, Word]:
    """Sort key realizing the degree-lexicographic word order."""
    return (len(word), word)


def word_rotations(word: Word) -> List[Word]:
    """All cyclic rotations of a word (just the word itself when empty)."""
    if not word:
        return [()]
    return [word[i:] + word[:i] for i in range(len(word))]


def cyclic_representative(word: Word) -> Word:
    """The deglex-least rotation; rotations share length, so plain min works."""
    return min(word_rotations(word))


def _as_scalar(value: Union[int, Fraction]) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"expected int or Fraction, got {type(value).__name__}")


class NcPoly:
    """Immutable noncommutative polynomial.

    Instances must not be mutated after construction; all arithmetic returns
    fresh objects.  Operations between polynomials with different variable
    counts raise ValueError.
    """

    __slots__ = ("d", "terms", "_hash")

    def __init__(self, d: int, terms: Dict[Word, Fraction]):
        if d < 1:
            raise ValueError(f"variable count must be >= 1, got {d}")
        clean: Dict[Word, Fraction] = {}
        for word, coeff in terms.items():
            c = _as_scalar(coeff)
            if c == 0:
                continue
            for idx in word:
                if not 1 <= idx <= d:
                    raise ValueError(f"variable index {idx} out of range 1..{d}")
            clean[tuple(word)] = c
        self.d = d
        self.terms = clean
        self._hash: Optional[int] = None

    # -- constructors -----------------------------------------------------

    @staticmethod
    def zero(d: int) -> "NcPoly":
        return NcPoly(d, {})

    @staticmethod
    def one(d: int) -> "NcPoly":
        return NcPoly(d, {(): Fraction(1)})

    @staticmethod
    def constant(c: Union[int, Fraction], d: int) -> "NcPoly":
        return NcPoly(d, {(): _as_scalar(c)})

    @staticmethod
    def var(index: int, d: int) -> "NcPoly":
        if not 1 <= index <= d:
            raise ValueError(f"variable index {index} out of range 1..{d}")
        return NcPoly(d, {(index,): Fraction(1)})

    @staticmethod
    def from_word(word: Word, d: int, coeff: Union[int, Fraction] = 1) -> "NcPoly":
        return NcPoly(d, {tuple(word): _as_scalar(coeff)})

    # -- basic queries -----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> Union[int, float]:
        """Maximal word length, -inf for the zero polynomial."""
        if not self.terms:
            return NEG_INF
        return max(len(w) for w in self.terms)

    def coeff(self, word: Word) -> Fraction:
        return self.terms.get(tuple(word), Fraction(0))

    @property
    def constant_term(self) -> Fraction:
        return self.terms.get((), Fraction(0))

    def support(self) -> List[Word]:
        """Words with nonzero coefficient, in increasing deglex order."""
        return sorted(self.terms, key=deglex_key)

    def items(self) -> List[Tuple[Word, Fraction]]:
        return [(w, self.terms[w]) for w in self.support()]

    @property
    def lead_word(self) -> Word:
        if not self.terms:
            raise ValueError("zero polynomial has no leading word")
        return max(self.terms, key=deglex_key)

    @property
    def lead_coeff(self) -> Fraction:
        return self.terms[self.lead_word]

    def lead_part(self) -> "NcPoly":
        """Homogeneous component of top degree (zero for the zero polynomial)."""
        if not self.terms:
            return self
        top = self.degree
        return NcPoly(self.d, {w: c for w, c in self.terms.items() if len(w) == top})

    def monic(self) -> "NcPoly":
        if self.is_zero():
            raise ValueError("cannot normalize the zero polynomial")
        return self * (1 / self.lead_coeff)

    # -- structure ---------------------------------------------------------

    def homogeneous_components(self) -> Dict[int, "NcPoly"]:
        """Nonzero homogeneous components keyed by degree, ascending keys."""
        buckets: Dict[int, Dict[Word, Fraction]] = {}
        for w, c in self.terms.items():
            buckets.setdefault(len(w), {})[w] = c
        return {k: NcPoly(self.d, buckets[k]) for k in sorted(buckets)}

    def is_homogeneous(self) -> bool:
        return len({len(w) for w in self.terms}) <= 1

    def structure(self) -> "PolyStructure":
        comps = self.homogeneous_components()
        return PolyStructure(
            degree=self.degree,
            homogeneous=len(comps) <= 1,
            components=[(k, comps[k]) for k in sorted(comps)],
        )

    # -- arithmetic ----------------------------------------------------------

    def _check_d(self, other: "NcPoly") -> None:
        if self.d != other.d:
            raise ValueError(f"variable count mismatch: {self.d} vs {other.d}")

    def __add__(self, other: object) -> "NcPoly":
        if isinstance(other, (int, Fraction)):
            other = NcPoly.constant(other, self.d)
        if not isinstance(other, NcPoly):
            return NotImplemented
        self._check_d(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            s = out.get(w, Fraction(0)) + c
            if s:
                out[w] = s
            else:
                out.pop(w, None)
        return NcPoly(self.d, out)

    def __radd__(self, other: object) -> "NcPoly":
        return self.__add__(other)

    def __neg__(self) -> "NcPoly":
        return NcPoly(self.d, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other: object) -> "NcPoly":
        if isinstance(other, (int, Fraction)):
            other = NcPoly.constant(other, self.d)
        if not isinstance(other, NcPoly):
            return NotImplemented
        return self.__add__(other.__neg__())

    def __rsub__(self, other: object) -> "NcPoly":
        return self.__neg__().__add__(other)

    def __mul__(self, other: object) -> "NcPoly":
        if isinstance(other, (int, Fraction)):
            c = _as_scalar(other)
            return NcPoly(self.d, {w: c * v for w, v in self.terms.items()})
        if not isinstance(other, NcPoly):
            return NotImplemented
        self._check_d(other)
        out: Dict[Word, Fraction] = {}
        for wa, ca in self.terms.items():
            for wb, cb in other.terms.items():
                w = wa + wb
                s = out.get(w, Fraction(0)) + ca * cb
                if s:
                    out[w] = s
                else:
                    out.pop(w, None)
        return NcPoly(self.d, out)

    def __rmul__(self, other: object) -> "NcPoly":
        if isinstance(other, (int, Fraction)):
            return self.__mul__(other)
        return NotImplemented

    def __pow__(self, exponent: int) -> "NcPoly":
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = NcPoly.one(self.d)
        for _ in range(exponent):
            result = result * self
        return result

    # -- trace normal form ---------------------------------------------------

    def cyclic_reduce(self) -> "NcPoly":
        """Rotate every word to its deglex-least rotation and merge.

        The result is zero exactly when the polynomial is a sum of
        commutators, so this is the normal form for trace-style tests.
        """
        out: Dict[Word, Fraction] = {}
        for w, c in self.terms.items():
            r = cyclic_representative(w)
            s = out.get(r, Fraction(0)) + c
            if s:
                out[r] = s
            else:
                out.pop(r, None)
        return NcPoly(self.d, out)

    # -- comparisons ----------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, NcPoly):
            return NotImplemented
        return self.d == other.d and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.d, frozenset(self.terms.items())))
        return self._hash

    def sort_key(self) -> Tuple:
        """Deterministic total order on polynomials, used to stabilize output."""
        return (
            len(max(self.terms, key=deglex_key)) if self.terms else -1,
            tuple((deglex_key(w), c) for w, c in self.items()),
        )

    def __repr__(self) -> str:
        return f"NcPoly({self.d}, {format_poly(self)!r})"

    def __str__(self) -> str:
        return format_poly(self)


@dataclass(frozen=True)
class PolyStructure:
    """Degree and homogeneous decomposition report."""

    degree: Union[int, float]
    homogeneous: bool
    components: List[Tuple[int, NcPoly]]


def commutator(p: NcPoly, q: NcPoly) -> NcPoly:
    """p*q - q*p."""
    return p * q - q * p


# ---------------------------------------------------------------------------
# Formatting
# ---------------------------------------------------------------------------


def _word_str(word: Word) -> str:
    # consecutive repeats collapse to powers: (1,1,2) -> "x1^2*x2"
    parts: List[str] = []
    i = 0
    while i < len(word):
        j = i
        while j < len(word) and word[j] == word[i]:
            j += 1
        run = j - i
        parts.append(f"x{word[i]}" if run == 1 else f"x{word[i]}^{run}")
        i = j
    return "*".join(parts)


def format_poly(p: NcPoly) -> str:
    """Canonical rendering, terms in increasing deglex order; re-parsable."""
    if p.is_zero():
        return "0"
    pieces: List[str] = []
    for i, (word, coeff) in enumerate(p.items()):
        mag = abs(coeff)
        if not word:
            body = str(mag)
        elif mag == 1:
            body = _word_str(word)
        else:
            body = f"{mag}*{_word_str(word)}"
        if i == 0:
            if coeff < 0:
                # "-x1" is not in the grammar, so spell the coefficient out
                body = f"-{mag}*{_word_str(word)}" if word else f"-{mag}"
            pieces.append(body)
        else:
            pieces.append(("- " if coeff < 0 else "+ ") + body)
    return " ".join(pieces)


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------
#
# expr     := term (('+' | '-') term)*
# term     := factor ('*' factor)*
# factor   := atom ('^' nat)?
# atom     := rational | 'x' nat | '(' expr ')' | '[' expr ',' expr ']'
# rational := ('-')? nat ('/' nat)?
#
# Whitespace is insignificant.  Juxtaposition is not multiplication: "2x1"
# and "x1(x2)" are syntax errors.  '[p,q]' expands to p*q - q*p while
# parsing.


class NcParseError(ValueError):
    """Syntax or range error, carrying the offending position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


_TOKEN = re.compile(r"(?P<ws>\s+)|(?P<var>x\d+)|(?P<num>\d+)|(?P<sym>[+\-*^/()\[\],])")


def _tokenize(text: str) -> List[Tuple[str, str, int]]:
    tokens: List[Tuple[str, str, int]] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise NcParseError(f"unexpected character {text[pos]!r}", pos)
        if m.lastgroup != "ws":
            tokens.append((m.lastgroup, m.group(), pos))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, tokens: List[Tuple[str, str, int]], d: int, length: int):
        self.tokens = tokens
        self.d = d
        self.i = 0
        self.end = length

    def _peek(self) -> Optional[Tuple[str, str, int]]:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def _next(self) -> Tuple[str, str, int]:
        tok = self._peek()
        if tok is None:
            raise NcParseError("unexpected end of input", self.end)
        self.i += 1
        return tok

    def _expect_sym(self, sym: str) -> None:
        tok = self._next()
        if tok[0] != "sym" or tok[1] != sym:
            raise NcParseError(f"expected {sym!r}", tok[2])

    def _expect_nat(self) -> Tuple[int, int]:
        tok = self._next()
        if tok[0] != "num":
            raise NcParseError("expected a natural number", tok[2])
        return int(tok[1]), tok[2]

    def parse_expr(self) -> NcPoly:
        result = self.parse_term()
        while True:
            tok = self._peek()
            if tok is not None and tok[0] == "sym" and tok[1] in "+-":
                self.i += 1
                rhs = self.parse_term()
                result = result + rhs if tok[1] == "+" else result - rhs
            else:
                return result

    def parse_term(self) -> NcPoly:
        result = self.parse_factor()
        while True:
            tok = self._peek()
            if tok is not None and tok[0] == "sym" and tok[1] == "*":
                self.i += 1
                result = result * self.parse_factor()
            else:
                return result

    def parse_factor(self) -> NcPoly:
        atom = self.parse_atom()
        tok = self._peek()
        if tok is not None and tok[0] == "sym" and tok[1] == "^":
            self.i += 1
            exponent, _ = self._expect_nat()
            return atom ** exponent
        return atom

    def parse_atom(self) -> NcPoly:
        tok = self._next()
        kind, text, pos = tok
        if kind == "sym" and text == "(":
            inner = self.parse_expr()
            self._expect_sym(")")
            return inner
        if kind == "sym" and text == "[":
            left = self.parse_expr()
            self._expect_sym(",")
            right = self.parse_expr()
            self._expect_sym("]")
            return commutator(left, right)
        if kind == "sym" and text == "-":
            num, _ = self._expect_nat()
            return NcPoly.constant(-self._rational_tail(num), self.d)
        if kind == "num":
            return NcPoly.constant(self._rational_tail(int(text)), self.d)
        if kind == "var":
            index = int(text[1:])
            if not 1 <= index <= self.d:
                raise NcParseError(f"variable index {index} out of range 1..{self.d}", pos)
            return NcPoly.var(index, self.d)
        raise NcParseError("expected '(', '[', a number, or a variable", pos)

    def _rational_tail(self, numerator: int) -> Fraction:
        tok = self._peek()
        if tok is not None and tok[0] == "sym" and tok[1] == "/":
            self.i += 1
            den, pos = self._expect_nat()
            if den == 0:
                raise NcParseError("zero denominator", pos)
            return Fraction(numerator, den)
        return Fraction(numerator)


def parse(text: str, d: int) -> NcPoly:
    """Parse the grammar above into a polynomial in d variables."""
    if d < 1:
        raise ValueError(f"variable count must be >= 1, got {d}")
    parser = _Parser(_tokenize(text), d, len(text))
    poly = parser.parse_expr()
    leftover = parser._peek()
    if leftover is not None:
        raise NcParseError(f"unexpected {leftover[1]!r}", leftover[2])
    return poly


def words_of_length(d: int, length: int) -> Iterator[Word]:
    """All words of exactly the given length, in lexicographic order."""
    if length == 0:
        yield ()
        return
    for tup in itertools.product(range(1, d + 1), repeat=length):
        yield tup


def words_up_to(d: int, degree: int) -> List[Word]:
    """All words of length <= degree, in increasing deglex order."""
    out: List[Word] = []
    for k in range(degree + 1):
        out.extend(words_of_length(d, k))
    return out
