"""Evaluation of noncommutative polynomials on square matrix tuples.

The substitution x_i -> X_i extends to the unique unital homomorphism into
n-by-n rational matrices; everything here is exact.  Identity testing on a
full matrix level (does f vanish on all n-by-n tuples?) is decided
symbolically by evaluating on generic matrices whose entries are independent
commuting indeterminates.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .linalg import QMatrix, QVector, rank_det_kernel
from .poly import NcPoly, Word

MAX_FACTORIAL_DEGREE = 8


class ResourceCapError(RuntimeError):
    """Raised when a symbolic identity test exceeds its configured budget."""


class MatTuple:
    """A d-tuple of n-by-n rational matrices (n = 0 is the empty edge case)."""

    __slots__ = ("n", "d", "matrices")

    def __init__(self, matrices: Sequence[QMatrix]):
        mats = tuple(matrices)
        if not mats:
            raise ValueError("a matrix tuple needs at least one coordinate")
        n = mats[0].rows
        for m in mats:
            if not m.is_square() or m.rows != n:
                raise ValueError("all coordinates must be square matrices of equal size")
        self.matrices = mats
        self.n = n
        self.d = len(mats)

    def __getitem__(self, i: int) -> QMatrix:
        return self.matrices[i]

    def __iter__(self):
        return iter(self.matrices)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MatTuple):
            return NotImplemented
        return self.matrices == other.matrices

    def __hash__(self) -> int:
        return hash(self.matrices)

    def __repr__(self) -> str:
        return f"MatTuple(n={self.n}, d={self.d})"

    # -- serialization ------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "d": self.d,
            "matrices": [
                [[str(e) for e in row] for row in m.entries] for m in self.matrices
            ],
        }

    @staticmethod
    def from_json(data: dict) -> "MatTuple":
        n, d = data["n"], data["d"]
        mats = [QMatrix(m) for m in data["matrices"]]
        tup = MatTuple(mats)
        if tup.n != n or tup.d != d:
            raise ValueError("matrix tuple header disagrees with matrix shapes")
        return tup

    def save(self, path: str) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_json(), fh, indent=1)
            fh.write("\n")

    @staticmethod
    def load(path: str) -> "MatTuple":
        with open(path, "r", encoding="utf-8") as fh:
            return MatTuple.from_json(json.load(fh))


def direct_sum(a: MatTuple, b: MatTuple) -> MatTuple:
    """Coordinatewise block-diagonal join; sizes add."""
    if a.d != b.d:
        raise ValueError(f"variable count mismatch: {a.d} vs {b.d}")
    n, m = a.n, b.n
    out: List[QMatrix] = []
    for ma, mb in zip(a.matrices, b.matrices):
        entries = [[Fraction(0)] * (n + m) for _ in range(n + m)]
        for i in range(n):
            for j in range(n):
                entries[i][j] = ma[i][j]
        for i in range(m):
            for j in range(m):
                entries[n + i][n + j] = mb[i][j]
        out.append(QMatrix(entries))
    return MatTuple(out)


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------


def _word_value(word: Word, point: MatTuple, cache: Dict[Word, QMatrix]) -> QMatrix:
    if word in cache:
        return cache[word]
    if not word:
        value = QMatrix.identity(point.n)
    else:
        value = _word_value(word[:-1], point, cache) @ point[word[-1] - 1]
    cache[word] = value
    return value


def eval_poly(f: NcPoly, point: MatTuple) -> QMatrix:
    """Value of the substitution homomorphism at the given tuple."""
    if f.d != point.d:
        raise ValueError(f"variable count mismatch: polynomial {f.d}, tuple {point.d}")
    cache: Dict[Word, QMatrix] = {}
    result = QMatrix.zeros(point.n, point.n)
    for word, coeff in f.terms.items():
        result = result + coeff * _word_value(word, point, cache)
    return result


def eval_poly_vector(f: NcPoly, point: MatTuple, v: QVector) -> QVector:
    """f(X) @ v computed word by word; avoids full matrix products.

    Word suffixes are cached: w(X)v applies letters right to left, so words
    sharing a suffix share the partial product.
    """
    if f.d != point.d:
        raise ValueError(f"variable count mismatch: polynomial {f.d}, tuple {point.d}")
    if len(v) != point.n:
        raise ValueError("vector length must match matrix size")
    cache: Dict[Word, QVector] = {(): v}

    def suffix_value(word: Word) -> QVector:
        if word in cache:
            return cache[word]
        value = point[word[0] - 1] @ suffix_value(word[1:])
        cache[word] = value
        return value

    result = QVector.zero(point.n)
    for word, coeff in f.terms.items():
        result = result + coeff * suffix_value(word)
    return result


# ---------------------------------------------------------------------------
# Distinguished tuples and polynomials
# ---------------------------------------------------------------------------


def weyl_pair(n: int) -> MatTuple:
    """Size-n truncation of the canonical pair with [X, Y] = 1 - n*E_nn.

    X has ones on the superdiagonal, Y has 1, 2, ..., n-1 on the subdiagonal;
    then 1 - [X, Y] evaluates to n times the last diagonal matrix unit.
    """
    if n < 1:
        raise ValueError("size must be >= 1")
    x = [[Fraction(1 if j == i + 1 else 0) for j in range(n)] for i in range(n)]
    y = [[Fraction(i if j == i - 1 else 0) for j in range(n)] for i in range(n)]
    return MatTuple([QMatrix(x), QMatrix(y)])


def standard_poly(k: int) -> NcPoly:
    """Full alternating sum over all k! orderings of x1..xk."""
    if k < 1:
        raise ValueError("need k >= 1")
    if k > MAX_FACTORIAL_DEGREE:
        raise ValueError(f"refusing k = {k} > {MAX_FACTORIAL_DEGREE} (k! terms)")
    terms: Dict[Word, Fraction] = {}
    for perm in itertools.permutations(range(1, k + 1)):
        inversions = sum(
            1 for i in range(k) for j in range(i + 1, k) if perm[i] > perm[j]
        )
        terms[tuple(perm)] = Fraction(-1 if inversions % 2 else 1)
    return NcPoly(k, terms)


def random_tuple(
    rng: random.Random, n: int, d: int, k: int = 5, q: int = 1
) -> MatTuple:
    """Entries drawn uniformly from {-k..k}/q; the caller owns the rng."""
    mats = [
        QMatrix([[Fraction(rng.randint(-k, k), q) for _ in range(n)] for _ in range(n)])
        for _ in range(d)
    ]
    return MatTuple(mats)


def random_vector(rng: random.Random, n: int, k: int = 5, q: int = 1) -> QVector:
    return QVector([Fraction(rng.randint(-k, k), q) for _ in range(n)])


# ---------------------------------------------------------------------------
# Commutative polynomials and symbolic identity testing
# ---------------------------------------------------------------------------


class CPoly:
    """Sparse commutative polynomial over the rationals.

    A monomial is a sorted tuple of variable ids with multiplicity, e.g.
    (0, 0, 3) = v0^2 * v3; the empty tuple is the constant monomial.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Dict[Tuple[int, ...], Fraction]] = None):
        self.terms: Dict[Tuple[int, ...], Fraction] = {}
        if terms:
            for mono, coeff in terms.items():
                if coeff != 0:
                    self.terms[tuple(sorted(mono))] = Fraction(coeff)

    @staticmethod
    def constant(c) -> "CPoly":
        return CPoly({(): Fraction(c)})

    @staticmethod
    def variable(i: int) -> "CPoly":
        return CPoly({(i,): Fraction(1)})

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "CPoly") -> "CPoly":
        out = dict(self.terms)
        for mono, c in other.terms.items():
            s = out.get(mono, Fraction(0)) + c
            if s:
                out[mono] = s
            else:
                out.pop(mono, None)
        result = CPoly()
        result.terms = out
        return result

    def __sub__(self, other: "CPoly") -> "CPoly":
        return self + other * Fraction(-1)

    def __mul__(self, other) -> "CPoly":
        if isinstance(other, (int, Fraction)):
            result = CPoly()
            if other != 0:
                result.terms = {m: c * other for m, c in self.terms.items()}
            return result
        out: Dict[Tuple[int, ...], Fraction] = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                mono = tuple(sorted(ma + mb))
                s = out.get(mono, Fraction(0)) + ca * cb
                if s:
                    out[mono] = s
                else:
                    out.pop(mono, None)
        result = CPoly()
        result.terms = out
        return result

    __rmul__ = __mul__

    def substitute(self, var: int, replacement: "CPoly") -> "CPoly":
        """Replace one variable by a polynomial (used by ansatz solvers)."""
        result = CPoly()
        for mono, coeff in self.terms.items():
            power = sum(1 for v in mono if v == var)
            rest = tuple(v for v in mono if v != var)
            term = CPoly({rest: coeff})
            for _ in range(power):
                term = term * replacement
            result = result + term
        return result

    def variables(self) -> List[int]:
        seen = set()
        for mono in self.terms:
            seen.update(mono)
        return sorted(seen)

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(len(m) for m in self.terms)

    def constant_value(self) -> Fraction:
        return self.terms.get((), Fraction(0))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CPoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __repr__(self) -> str:
        if not self.terms:
            return "CPoly(0)"
        bits = []
        for mono in sorted(self.terms, key=lambda m: (len(m), m)):
            bits.append(f"{self.terms[mono]}*{mono}")
        return "CPoly(" + " + ".join(bits) + ")"


def _generic_matrices(n: int, d: int) -> List[List[List[CPoly]]]:
    """d generic n-by-n matrices with pairwise distinct commuting entries."""
    mats = []
    for k in range(d):
        mats.append(
            [[CPoly.variable(k * n * n + i * n + j) for j in range(n)] for i in range(n)]
        )
    return mats


def _cpoly_mat_mul(
    a: List[List[CPoly]], b: List[List[CPoly]], cap: int, count: List[int]
) -> List[List[CPoly]]:
    n = len(a)
    out = [[CPoly() for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(n):
            acc = CPoly()
            for k in range(n):
                count[0] += len(a[i][k].terms) * len(b[k][j].terms)
                if count[0] > cap:
                    raise ResourceCapError(
                        f"symbolic identity test exceeded {cap} monomial products"
                    )
                acc = acc + a[i][k] * b[k][j]
            out[i][j] = acc
    return out


def pi_test(f: NcPoly, n: int, max_ops: int = 10_000_000) -> bool:
    """Does f vanish identically on all n-by-n matrix tuples?

    Decided exactly by expanding f on generic matrices.  Raises
    ResourceCapError when the expansion exceeds max_ops monomial products.
    """
    if n < 1:
        raise ValueError("matrix size must be >= 1")
    if f.is_zero():
        return True
    generic = _generic_matrices(n, f.d)
    identity = [
        [CPoly.constant(1) if i == j else CPoly() for j in range(n)] for i in range(n)
    ]
    count = [0]
    cache: Dict[Word, List[List[CPoly]]] = {(): identity}

    def word_matrix(word: Word) -> List[List[CPoly]]:
        if word in cache:
            return cache[word]
        prev = word_matrix(word[:-1])
        value = _cpoly_mat_mul(prev, generic[word[-1] - 1], max_ops, count)
        cache[word] = value
        return value

    total = [[CPoly() for _ in range(n)] for _ in range(n)]
    for word, coeff in f.terms.items():
        wm = word_matrix(word)
        for i in range(n):
            for j in range(n):
                total[i][j] = total[i][j] + wm[i][j] * coeff
    return all(total[i][j].is_zero() for i in range(n) for j in range(n))


# ---------------------------------------------------------------------------
# Point classification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PointClassification:
    """Membership flags of a tuple in the various vanishing sets, with the
    underlying exact values so callers can audit every flag."""

    in_zero: bool
    in_directional: Optional[bool]
    in_det_zero: bool
    in_trace_zero: bool
    in_weak: Optional[bool]
    f_values: Tuple[QMatrix, ...]
    g_value: QMatrix
    f_dets: Tuple[Fraction, ...]
    f_traces: Tuple[Fraction, ...]
    g_det: Fraction
    g_trace: Fraction
    f_directional: Optional[Tuple[QVector, ...]]
    g_directional: Optional[QVector]
    f_weak: Optional[Tuple[Fraction, ...]]
    g_weak: Optional[Fraction]
    f_ranks: Tuple[int, ...]
    g_rank: int


def classify_point(
    f_list: Sequence[NcPoly],
    g: NcPoly,
    point: MatTuple,
    u: Optional[QVector] = None,
    v: Optional[QVector] = None,
) -> PointClassification:
    f_values = tuple(eval_poly(f, point) for f in f_list)
    g_value = eval_poly(g, point)
    f_infos = [rank_det_kernel(m) for m in f_values]
    g_info = rank_det_kernel(g_value)

    f_dir = g_dir = None
    in_dir = None
    if v is not None:
        f_dir = tuple(m @ v for m in f_values)
        g_dir = g_value @ v
        in_dir = all(w.is_zero() for w in f_dir)

    f_weak = g_weak = None
    in_weak = None
    if u is not None and v is not None:
        f_weak = tuple(u.dot(w) for w in f_dir)
        g_weak = u.dot(g_dir)
        in_weak = all(s == 0 for s in f_weak)

    return PointClassification(
        in_zero=all(m.is_zero() for m in f_values),
        in_directional=in_dir,
        in_det_zero=all(info.det == 0 for info in f_infos),
        in_trace_zero=all(m.trace() == 0 for m in f_values),
        in_weak=in_weak,
        f_values=f_values,
        g_value=g_value,
        f_dets=tuple(info.det for info in f_infos),
        f_traces=tuple(m.trace() for m in f_values),
        g_det=g_info.det,
        g_trace=g_value.trace(),
        f_directional=f_dir,
        g_directional=g_dir,
        f_weak=f_weak,
        g_weak=g_weak,
        f_ranks=tuple(info.rank for info in f_infos),
        g_rank=g_info.rank,
    )
