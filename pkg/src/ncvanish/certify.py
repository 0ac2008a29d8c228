"""Membership procedures that return independently checkable certificates.

Five problems are covered, all over the free algebra on d variables:

  left ideal        g in L(f_1..f_l)  (left cofactors)
  homogeneous ideal g in (f_1..f_l)   (two-sided, homogeneous generators)
  tracial           1 or g equal to sum of lambda_j f_j plus commutators
  linear span       g in span(f_1..f_l)
  composition       g in the unital subalgebra generated by one f

Every positive answer is a Combination that multiplies out to the target
exactly; every negative answer (where one exists) is a Witness whose defining
equalities and inequalities hold in exact rational arithmetic.  Both are
re-verified before being returned; a verification failure raises
InternalInconsistencyError because it can only come from a bug, never from
the input.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .evaluate import (
    MatTuple,
    ResourceCapError,
    eval_poly,
    eval_poly_vector,
    random_tuple,
    random_vector,
)
from .linalg import QMatrix, QVector, rank_det_kernel, rational_roots, solve_span
from .poly import NcPoly, Word, deglex_key, words_of_length, words_up_to


class InternalInconsistencyError(RuntimeError):
    """A constructed certificate failed its own verification: a bug."""


class NonHomogeneousGeneratorError(ValueError):
    """General two-sided membership is refused; generators must be homogeneous."""


# ---------------------------------------------------------------------------
# Certificate types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LeftCombination:
    """g = sum of cofactors[j] * f_j, right cofactors identically 1."""

    cofactors: Tuple[NcPoly, ...]
    verification: str = "verified"


@dataclass(frozen=True)
class DirectionalWitness:
    """(X, v) with f_j(X)v = 0 for every generator and g(X)v != 0."""

    point: MatTuple
    vector: QVector
    f_values: Tuple[QVector, ...]
    g_value: QVector
    verification: str = "verified"


@dataclass(frozen=True)
class HomCombination:
    """g = sum over j of sum of u*f_j*v for the (u, v) pairs of generator j."""

    pairs: Tuple[Tuple[Tuple[NcPoly, NcPoly], ...], ...]
    verification: str = "verified"


@dataclass(frozen=True)
class MatrixWitness:
    """X with every f_j(X) the zero matrix while g(X) is not."""

    point: MatTuple
    f_values: Tuple[QMatrix, ...]
    g_value: QMatrix
    verification: str = "verified"


@dataclass(frozen=True)
class TraceCombination:
    """target = sum of lambdas[j] f_j + sum of [p, q] commutators.

    branch 'one-in-span' has target 1, branch 'g-in-span' has target g.
    """

    branch: str
    lambdas: Tuple[Fraction, ...]
    commutators: Tuple[Tuple[NcPoly, NcPoly], ...]
    verification: str = "verified"


@dataclass(frozen=True)
class TraceNotMember:
    """Neither 1 nor cyclic_reduce(g) lies in the span of the reduced
    generators; the theory provides no finite witness for this branch."""

    verification: str = "checked"


@dataclass(frozen=True)
class SpanCoefficients:
    coefficients: Tuple[Fraction, ...]
    verification: str = "verified"


@dataclass(frozen=True)
class WeakWitness:
    """(X, u, v) with u^t f_j(X) v = 0 for every generator, u^t g(X) v != 0."""

    point: MatTuple
    left: QVector
    right: QVector
    f_values: Tuple[Fraction, ...]
    g_value: Fraction
    verification: str = "verified"


@dataclass(frozen=True)
class SpanUnknown:
    sizes_tried: int
    attempts_per_size: int
    verification: str = "none"


@dataclass(frozen=True)
class CompositionCoefficients:
    """g = sum of coefficients[i] * f**i."""

    coefficients: Tuple[Fraction, ...]
    verification: str = "verified"


@dataclass(frozen=True)
class EigenWitness:
    """f(X)v = eigenvalue * v but g(X)v is not a multiple of v."""

    point: MatTuple
    vector: QVector
    eigenvalue: Fraction
    g_value: QVector
    verification: str = "verified"


@dataclass(frozen=True)
class CompositionNotMember:
    witness: Optional[EigenWitness]
    verification: str = "checked"


# ---------------------------------------------------------------------------
# Sparse row reduction over word coordinates
# ---------------------------------------------------------------------------

# A row maps words to coefficients; an expression maps opaque keys (whatever
# identifies the inserted element) to coefficients.  Pivot = deglex-greatest
# word.  Stored rows are monic and inter-reduced, so reducing an incoming row
# never re-introduces a pivot word.

SparseRow = Dict[Word, Fraction]
Expr = Dict[object, Fraction]


def _row_axpy(target: Dict, coeff: Fraction, source: Dict) -> None:
    """target -= coeff * source, dropping exact zeros."""
    for key, value in source.items():
        s = target.get(key, Fraction(0)) - coeff * value
        if s:
            target[key] = s
        else:
            target.pop(key, None)


class WordRREF:
    """Incremental reduced row echelon form over word coordinates."""

    def __init__(self) -> None:
        self.rows: Dict[Word, SparseRow] = {}
        self.exprs: Dict[Word, Expr] = {}

    def reduce(self, row: SparseRow, expr: Expr) -> Tuple[SparseRow, Expr]:
        """Eliminate every pivot word; returns the remainder and the
        accumulated expression (remainder = input - sum expr[k]*element_k)."""
        row = dict(row)
        expr = dict(expr)
        for word in [w for w in row if w in self.rows]:
            coeff = row[word]
            _row_axpy(row, coeff, self.rows[word])
            _row_axpy(expr, coeff, self.exprs[word])
        return row, expr

    def insert(self, row: SparseRow, expr: Expr) -> bool:
        """Add one element; returns False when dependent on the store."""
        row, expr = self.reduce(row, expr)
        if not row:
            return False
        pivot = max(row, key=deglex_key)
        inv = 1 / row[pivot]
        row = {w: c * inv for w, c in row.items()}
        expr = {k: c * inv for k, c in expr.items()}
        for other_row, other_expr in zip(self.rows.values(), self.exprs.values()):
            if pivot in other_row:
                coeff = other_row[pivot]
                _row_axpy(other_row, coeff, row)
                _row_axpy(other_expr, coeff, expr)
        self.rows[pivot] = row
        self.exprs[pivot] = expr
        return True

    def __contains__(self, word: Word) -> bool:
        return word in self.rows


def _combination_from_expr(expr: Expr) -> Dict:
    """After reduce() returns an empty remainder, input = sum of (-expr[k])
    times the element keyed k."""
    return {k: -c for k, c in expr.items() if c}


# ---------------------------------------------------------------------------
# Weak (degree-compatible) basis for left ideals
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WeakBasis:
    """Reduced generators plus, for each, its left-cofactor expression over
    the original generator list."""

    reduced: Tuple[NcPoly, ...]
    expressions: Tuple[Tuple[NcPoly, ...], ...]


def weak_basis(f_list: Sequence[NcPoly]) -> WeakBasis:
    """Degree-compatible reduction of a left-ideal generating set.

    Repeatedly, while the top homogeneous part of some element lies in the
    span of {top parts of w*h : h another element, deg(w*h) matching},
    subtract the combination and re-insert the strictly smaller remainder.
    The multiset of degrees strictly decreases, so this terminates.  Each
    survivor carries left cofactors expressing it over the original input.
    """
    if not f_list:
        return WeakBasis((), ())
    d = f_list[0].d
    for f in f_list:
        if f.d != d:
            raise ValueError("generators must share the variable count")

    elements: List[Tuple[NcPoly, Dict[int, NcPoly]]] = [
        (f, {j: NcPoly.one(d)}) for j, f in enumerate(f_list) if not f.is_zero()
    ]

    changed = True
    while changed:
        changed = False
        for pos in range(len(elements)):
            poly, expr = elements[pos]
            degree = poly.degree
            rref = WordRREF()
            for opos, (other, _) in enumerate(elements):
                if opos == pos:
                    continue
                room = degree - other.degree
                if room < 0:
                    continue
                top = other.lead_part()
                for w in words_of_length(d, room):
                    shifted = {w + u: c for u, c in top.terms.items()}
                    rref.insert(shifted, {(opos, w): Fraction(1)})
            remainder, acc = rref.reduce(dict(poly.lead_part().terms), {})
            if remainder:
                continue
            new_poly = poly
            new_expr = dict(expr)
            for (opos, w), coeff in _combination_from_expr(acc).items():
                other, other_expr = elements[opos]
                shift = NcPoly.from_word(w, d, coeff)
                new_poly = new_poly - shift * other
                for j, cof in other_expr.items():
                    updated = new_expr.get(j, NcPoly.zero(d)) - shift * cof
                    if updated.is_zero():
                        new_expr.pop(j, None)
                    else:
                        new_expr[j] = updated
            if not new_poly.is_zero() and new_poly.degree >= degree:
                raise InternalInconsistencyError("weak reduction failed to drop the degree")
            elements.pop(pos)
            if not new_poly.is_zero():
                elements.append((new_poly, new_expr))
            changed = True
            break

    elements.sort(key=lambda item: item[0].sort_key())
    reduced: List[NcPoly] = []
    expressions: List[Tuple[NcPoly, ...]] = []
    for poly, expr in elements:
        cofactors = tuple(expr.get(j, NcPoly.zero(d)) for j in range(len(f_list)))
        recombined = NcPoly.zero(d)
        for cof, f in zip(cofactors, f_list):
            recombined = recombined + cof * f
        if recombined != poly:
            raise InternalInconsistencyError("weak basis expression does not recombine")
        reduced.append(poly)
        expressions.append(cofactors)
    return WeakBasis(tuple(reduced), tuple(expressions))


# ---------------------------------------------------------------------------
# Left ideal membership (degree-bounded solve, then truncated module witness)
# ---------------------------------------------------------------------------


def _left_multiples_rref(
    basis: Sequence[NcPoly], d: int, limit: int, cap: int = 200_000
) -> WordRREF:
    """Reduced echelon store of {w*b : b in basis, deg(w*b) <= limit},
    expressions keyed (basis index, word)."""
    rref = WordRREF()
    count = 0
    for i, b in enumerate(basis):
        room = limit - b.degree
        for length in range(int(room) + 1):
            for w in words_of_length(d, length):
                count += len(b.terms)
                if count > cap:
                    raise ResourceCapError(
                        f"left-multiple span exceeded {cap} coefficient entries"
                    )
                shifted = {w + u: c for u, c in b.terms.items()}
                rref.insert(shifted, {(i, w): Fraction(1)})
    return rref


def _shift_matrices(
    rref: WordRREF, d: int, delta: int
) -> Tuple[MatTuple, QVector, Dict[Word, int]]:
    """Left-multiplication operators on the span of non-pivot words of degree
    <= delta, computed inside the degree-(delta+1) reduction and projected
    back by dropping the top-degree coordinates.  The unit word must not be a
    pivot (checked by the caller's precondition)."""
    basis_words = [w for w in words_up_to(d, delta) if w not in rref]
    if () in rref:
        raise InternalInconsistencyError(
            "unit word reduced to zero although the target did not"
        )
    index = {w: k for k, w in enumerate(basis_words)}
    m = len(basis_words)
    columns: List[List[List[Fraction]]] = [
        [[Fraction(0)] * m for _ in range(m)] for _ in range(d)
    ]
    for w, k in index.items():
        for i in range(d):
            extended: Word = (i + 1,) + w
            reduced, _ = rref.reduce({extended: Fraction(1)}, {})
            for u, c in reduced.items():
                if len(u) <= delta:
                    columns[i][index[u]][k] = c
    point = MatTuple([QMatrix(columns[i]) for i in range(d)])
    return point, QVector.unit(m, index[()]), index


def left_ideal_membership(
    f_list: Sequence[NcPoly], g: NcPoly
) -> "LeftCombination | DirectionalWitness":
    """Decide g in L(f_1..f_l) with a verified certificate either way.

    The bounded solve runs at degree delta = max(deg g, degrees of the weak
    basis); its completeness at that bound is imported from the weak-basis
    theory, but no answer depends on it: a missed combination would surface
    as a witness failing verification, which raises instead of returning.
    """
    for f in f_list:
        if f.d != g.d:
            raise ValueError("generators and target must share the variable count")
    d = g.d
    if g.is_zero():
        return LeftCombination(tuple(NcPoly.zero(d) for _ in f_list))

    wb = weak_basis(f_list)
    degrees = [int(b.degree) for b in wb.reduced]
    delta = max([int(g.degree)] + degrees)
    rref = _left_multiples_rref(wb.reduced, d, delta + 1)

    remainder, acc = rref.reduce(dict(g.terms), {})
    if not remainder:
        basis_cofactors: List[NcPoly] = [NcPoly.zero(d) for _ in wb.reduced]
        for (i, w), coeff in _combination_from_expr(acc).items():
            basis_cofactors[i] = basis_cofactors[i] + NcPoly.from_word(w, d, coeff)
        cofactors = [NcPoly.zero(d) for _ in f_list]
        for q, expr in zip(basis_cofactors, wb.expressions):
            for j, cof in enumerate(expr):
                if not cof.is_zero() and not q.is_zero():
                    cofactors[j] = cofactors[j] + q * cof
        total = NcPoly.zero(d)
        for p, f in zip(cofactors, f_list):
            total = total + p * f
        if total != g:
            raise InternalInconsistencyError("left combination does not multiply out")
        return LeftCombination(tuple(cofactors))

    point, vector, _ = _shift_matrices(rref, d, delta)
    f_values = tuple(eval_poly_vector(f, point, vector) for f in f_list)
    g_value = eval_poly_vector(g, point, vector)
    if any(not fv.is_zero() for fv in f_values) or g_value.is_zero():
        raise InternalInconsistencyError("constructed left-ideal witness failed")
    return DirectionalWitness(point, vector, f_values, g_value)


def gns_witness(f_list: Sequence[NcPoly], g: NcPoly, delta: int) -> DirectionalWitness:
    """Truncated-module witness for g outside the degree-bounded span of the
    left multiples of f_list.  Precondition: the bounded solve at `delta`
    already failed; violating it raises."""
    d = g.d
    wb = weak_basis(f_list)
    rref = _left_multiples_rref(wb.reduced, d, delta + 1)
    remainder, _ = rref.reduce(dict(g.terms), {})
    if not remainder:
        raise ValueError("target lies in the bounded span; no witness exists")
    point, vector, _ = _shift_matrices(rref, d, delta)
    f_values = tuple(eval_poly_vector(f, point, vector) for f in f_list)
    g_value = eval_poly_vector(g, point, vector)
    if any(not fv.is_zero() for fv in f_values) or g_value.is_zero():
        raise InternalInconsistencyError("constructed left-ideal witness failed")
    return DirectionalWitness(point, vector, f_values, g_value)


# ---------------------------------------------------------------------------
# Homogeneous two-sided ideal membership
# ---------------------------------------------------------------------------


def _two_sided_products(
    f_list: Sequence[NcPoly], d: int, limit: int, cap: int = 200_000
) -> WordRREF:
    """Echelon store of {u*f_j*v : deg(u f_j v) <= limit}, keys (j, u, v)."""
    rref = WordRREF()
    count = 0
    for j, f in enumerate(f_list):
        room = limit - int(f.degree)
        for left_len in range(room + 1):
            for u in words_of_length(d, left_len):
                for right_len in range(room - left_len + 1):
                    for v in words_of_length(d, right_len):
                        count += len(f.terms)
                        if count > cap:
                            raise ResourceCapError(
                                f"two-sided span exceeded {cap} coefficient entries"
                            )
                        row = {u + w + v: c for w, c in f.terms.items()}
                        rref.insert(row, {(j, u, v): Fraction(1)})
    return rref


def hom_ideal_membership(
    f_list: Sequence[NcPoly], g: NcPoly, max_dimension: int = 500
) -> "HomCombination | MatrixWitness":
    """Decide g in the two-sided ideal generated by homogeneous f_j.

    Because the ideal is graded, g is a member iff every homogeneous
    component is, and each component test is an exact span solve in its own
    degree; no degree bound is imported.  Non-members get a witness built
    from left multiplication on the truncated quotient: generators evaluate
    to genuinely zero matrices there.
    """
    for f in f_list:
        if f.d != g.d:
            raise ValueError("generators and target must share the variable count")
    generators = [f for f in f_list if not f.is_zero()]
    for f in generators:
        if not f.is_homogeneous():
            raise NonHomogeneousGeneratorError(
                "two-sided membership requires homogeneous generators; got "
                f"{f}"
            )
    d = g.d
    index_of = {id(f): j for j, f in enumerate(f_list)}
    if g.is_zero():
        return HomCombination(tuple(() for _ in f_list))

    delta = int(g.degree)
    rref = _two_sided_products(generators, d, delta)
    remainder, acc = rref.reduce(dict(g.terms), {})
    if not remainder:
        pairs: List[List[Tuple[NcPoly, NcPoly]]] = [[] for _ in f_list]
        for (j, u, v), coeff in _combination_from_expr(acc).items():
            original = index_of[id(generators[j])]
            pairs[original].append(
                (NcPoly.from_word(u, d, coeff), NcPoly.from_word(v, d))
            )
        total = NcPoly.zero(d)
        for plist, f in zip(pairs, f_list):
            for u, v in plist:
                total = total + u * f * v
        if total != g:
            raise InternalInconsistencyError("two-sided combination does not multiply out")
        return HomCombination(tuple(tuple(p) for p in pairs))

    word_count = len(words_up_to(d, delta))
    if word_count > max_dimension:
        raise ResourceCapError(
            f"witness dimension bound {word_count} exceeds cap {max_dimension}"
        )
    basis_words = [w for w in words_up_to(d, delta) if w not in rref]
    index = {w: k for k, w in enumerate(basis_words)}
    if () in rref:
        raise InternalInconsistencyError("unit word vanished in a graded quotient")
    m = len(basis_words)
    columns: List[List[List[Fraction]]] = [
        [[Fraction(0)] * m for _ in range(m)] for _ in range(d)
    ]
    for w, k in index.items():
        if len(w) == delta:
            continue  # raising by one more degree leaves the truncation
        for i in range(d):
            reduced, _ = rref.reduce({(i + 1,) + w: Fraction(1)}, {})
            for u, c in reduced.items():
                columns[i][index[u]][k] = c
    point = MatTuple([QMatrix(columns[i]) for i in range(d)])
    f_values = tuple(eval_poly(f, point) for f in f_list)
    g_value = eval_poly(g, point)
    if any(not fv.is_zero() for fv in f_values) or g_value.is_zero():
        raise InternalInconsistencyError("constructed two-sided witness failed")
    return MatrixWitness(point, f_values, g_value)


# ---------------------------------------------------------------------------
# Tracial membership
# ---------------------------------------------------------------------------


def _rotation_commutators(p: NcPoly) -> List[Tuple[NcPoly, NcPoly]]:
    """Express a cyclically-vanishing polynomial as a sum of commutators.

    Each word is walked to its cyclic representative one rotation at a time;
    the step from a*s to s*a contributes the commutator [a, s].  Because the
    cyclic reduction of p is zero, the representatives cancel and the
    telescoped commutators sum to p exactly.
    """
    d = p.d
    folded: Dict[Tuple[Word, Word], Fraction] = {}
    for word, coeff in p.terms.items():
        if len(word) < 2:
            continue
        rotations = [word[t:] + word[:t] for t in range(len(word))]
        steps = min(range(len(word)), key=lambda t: deglex_key(rotations[t]))
        for t in range(steps):
            current = rotations[t]
            key = ((current[0],), current[1:])
            folded[key] = folded.get(key, Fraction(0)) + coeff
    out: List[Tuple[NcPoly, NcPoly]] = []
    for (head, tail), coeff in sorted(folded.items(), key=lambda kv: (kv[0][0], kv[0][1])):
        if coeff:
            out.append((NcPoly.from_word(head, d, coeff), NcPoly.from_word(tail, d)))
    return out


def trace_membership(
    f_list: Sequence[NcPoly], g: NcPoly
) -> "TraceCombination | TraceNotMember":
    """Decide whether 1 (checked first) or g is a combination of the f_j and
    commutators; equivalently, whether tracial vanishing of all f_j forces
    tracial vanishing of g on every matrix size."""
    for f in f_list:
        if f.d != g.d:
            raise ValueError("generators and target must share the variable count")
    d = g.d
    generators = [f for f in f_list if not f.is_zero()]
    index_of = {id(f): j for j, f in enumerate(f_list)}

    rref = WordRREF()
    for f in generators:
        rref.insert(dict(f.cyclic_reduce().terms), {id(f): Fraction(1)})

    for branch, target in (("one-in-span", NcPoly.one(d)), ("g-in-span", g)):
        reduced_target = target.cyclic_reduce()
        remainder, acc = rref.reduce(dict(reduced_target.terms), {})
        if remainder:
            continue
        lambdas = [Fraction(0)] * len(f_list)
        for key, coeff in _combination_from_expr(acc).items():
            lambdas[index_of[key]] += coeff
        residual = target
        for lam, f in zip(lambdas, f_list):
            residual = residual - lam * f
        if not residual.cyclic_reduce().is_zero():
            raise InternalInconsistencyError("tracial residual is not cyclically zero")
        commutators = _rotation_commutators(residual)
        rebuilt = NcPoly.zero(d)
        for p, q in commutators:
            rebuilt = rebuilt + (p * q - q * p)
        if rebuilt != residual:
            raise InternalInconsistencyError("commutator part does not expand to the residual")
        return TraceCombination(branch, tuple(lambdas), tuple(commutators))
    return TraceNotMember()


# ---------------------------------------------------------------------------
# Linear span membership
# ---------------------------------------------------------------------------


def span_membership(
    f_list: Sequence[NcPoly],
    g: NcPoly,
    n_max: int = 4,
    seed: int = 0,
    attempts_per_size: int = 50,
) -> "SpanCoefficients | WeakWitness | SpanUnknown":
    """Coefficient solve first; on failure, a seeded search for a weak-zero
    witness (X, u, v).  A size cap ends in Unknown: a witness always exists
    but no bound on its size is available."""
    for f in f_list:
        if f.d != g.d:
            raise ValueError("generators and target must share the variable count")
    d = g.d

    rref = WordRREF()
    for j, f in enumerate(f_list):
        if not f.is_zero():
            rref.insert(dict(f.terms), {j: Fraction(1)})
    remainder, acc = rref.reduce(dict(g.terms), {})
    if not remainder:
        coeffs = [Fraction(0)] * len(f_list)
        for j, coeff in _combination_from_expr(acc).items():
            coeffs[j] += coeff
        total = NcPoly.zero(d)
        for lam, f in zip(coeffs, f_list):
            total = total + lam * f
        if total != g:
            raise InternalInconsistencyError("span coefficients do not recombine")
        return SpanCoefficients(tuple(coeffs))

    rng = random.Random(seed)
    for n in range(1, n_max + 1):
        for _ in range(attempts_per_size):
            point = random_tuple(rng, n, d)
            v = random_vector(rng, n)
            f_vectors = [eval_poly_vector(f, point, v) for f in f_list]
            g_vector = eval_poly_vector(g, point, v)
            result = solve_span(f_vectors, g_vector)
            if result.in_span:
                continue
            u = result.functional
            f_scalars = tuple(u.dot(fv) for fv in f_vectors)
            g_scalar = u.dot(g_vector)
            if any(s != 0 for s in f_scalars) or g_scalar == 0:
                raise InternalInconsistencyError("weak witness functional failed")
            return WeakWitness(point, u, v, f_scalars, g_scalar)
    return SpanUnknown(sizes_tried=n_max, attempts_per_size=attempts_per_size)


# ---------------------------------------------------------------------------
# Single-generator (composition) subalgebra membership
# ---------------------------------------------------------------------------


def _char_poly(m: QMatrix) -> List[Fraction]:
    """Monic characteristic polynomial coefficients [c_0..c_{n-1}, 1] via the
    Faddeev-LeVerrier recursion."""
    n = m.rows
    coeffs = [Fraction(0)] * n + [Fraction(1)]
    power = QMatrix.identity(n)
    for k in range(1, n + 1):
        power = m @ power
        c = -power.trace() / k
        coeffs[n - k] = c
        power = power + c * QMatrix.identity(n)
    return coeffs


def in_univariate_subalgebra(
    g: NcPoly,
    f: NcPoly,
    seed: Optional[int] = None,
    n_max: int = 3,
    attempts_per_size: int = 25,
) -> "CompositionCoefficients | CompositionNotMember":
    """Decide g = c_0 + c_1 f + ... + c_m f^m.

    Powers of f have strictly increasing degrees (leading words multiply),
    so the solve against {1, f, .., f^m} with m = deg g // deg f is complete.
    Non-membership optionally carries a sampled eigenvector witness: a point
    where f has a rational eigenvector that g fails to preserve.
    """
    if f.d != g.d:
        raise ValueError("generators and target must share the variable count")
    d = g.d
    if f.degree <= 0:
        if g.degree <= 0:
            return CompositionCoefficients((g.constant_term,))
        return CompositionNotMember(None)

    m = max(0, int(g.degree) // int(f.degree)) if not g.is_zero() else 0
    rref = WordRREF()
    power = NcPoly.one(d)
    for i in range(m + 1):
        rref.insert(dict(power.terms), {i: Fraction(1)})
        power = power * f
    remainder, acc = rref.reduce(dict(g.terms), {})
    if not remainder:
        coeffs = [Fraction(0)] * (m + 1)
        for i, coeff in _combination_from_expr(acc).items():
            coeffs[i] += coeff
        total = NcPoly.zero(d)
        power = NcPoly.one(d)
        for c in coeffs:
            total = total + c * power
            power = power * f
        if total != g:
            raise InternalInconsistencyError("composition coefficients do not recombine")
        return CompositionCoefficients(tuple(coeffs))

    witness = None
    if seed is not None:
        witness = _eigen_witness_search(g, f, seed, n_max, attempts_per_size)
    return CompositionNotMember(witness)


def _eigen_witness_search(
    g: NcPoly, f: NcPoly, seed: int, n_max: int, attempts_per_size: int
) -> Optional[EigenWitness]:
    """Best-effort: rational eigenvalues only."""
    d = g.d
    rng = random.Random(seed)
    for n in range(2, n_max + 1):
        for _ in range(attempts_per_size):
            point = random_tuple(rng, n, d, k=2)
            fx = eval_poly(f, point)
            for lam in rational_roots(_char_poly(fx)):
                shifted = fx - lam * QMatrix.identity(n)
                for v in rank_det_kernel(shifted).kernel:
                    gv = eval_poly_vector(g, point, v)
                    pivot = next((i for i, e in enumerate(v) if e != 0), None)
                    if pivot is None:
                        continue
                    ratio = gv[pivot] / v[pivot]
                    if gv != ratio * v:
                        fv = eval_poly_vector(f, point, v)
                        if fv != lam * v:
                            raise InternalInconsistencyError("eigenvector check failed")
                        return EigenWitness(point, v, lam, gv)
    return None
