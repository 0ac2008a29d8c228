"""Complete factorization, stable associativity, determinantal inclusion.

Factorization is unique only up to reordering tricks like
x1*(x2*x1 + 1) = (x1*x2 + 1)*x1, so `factor` enumerates every complete
factorization the bounded split search can certify.  Stable associativity
(diag(p,1) = P * diag(q,1) * Q over the free algebra, P and Q invertible) is
semi-decided: an explicit certificate for Yes, a separating directional zero
for No, and an honest Unknown otherwise.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Set, Tuple

from .evaluate import CPoly, MatTuple, eval_poly, random_tuple, weyl_pair
from .linalg import QMatrix, QVector, rank_det_kernel, rational_roots
from .poly import NcPoly, Word, deglex_key


# ---------------------------------------------------------------------------
# Exact solver for the split systems
# ---------------------------------------------------------------------------

# The coefficient equations of f = g*h are bilinear.  They are dispatched by
# exact propagation: substitute along linear equations, branch on rational
# roots of univariate ones, branch on the zero product of pure monomial ones.
# Anything this cannot finish marks the search incomplete instead of guessing.


def _resolve_assignment(
    variables: Sequence[int], assign: Dict[int, Fraction], subst: Dict[int, CPoly]
) -> Tuple[Dict[int, Fraction], bool]:
    """Collapse linear substitutions to numbers; free variables become 0.

    Substitutions only reference variables eliminated later, so the recursion
    terminates.  Returns the full assignment and whether frees were present.
    """
    values = dict(assign)
    had_free = False

    def resolve(var: int) -> Fraction:
        nonlocal had_free
        if var in values:
            return values[var]
        if var in subst:
            expr = subst[var]
            total = Fraction(0)
            for mono, coeff in expr.terms.items():
                term = coeff
                for v in mono:
                    term *= resolve(v)
                total += term
            values[var] = total
            return total
        had_free = True
        values[var] = Fraction(0)
        return values[var]

    for var in variables:
        resolve(var)
    return values, had_free


def _solve_poly_system(
    equations: List[CPoly], variables: Sequence[int], node_cap: int = 20_000
) -> Tuple[List[Dict[int, Fraction]], bool]:
    """All rational solutions of a polynomial system, with a completeness
    flag.  Ground field is the rationals: discarding irrational branch roots
    loses nothing we could represent anyway."""
    solutions: List[Dict[int, Fraction]] = []
    seen: Set[Tuple[Tuple[int, Fraction], ...]] = set()
    complete = True
    stack: List[Tuple[List[CPoly], Dict[int, Fraction], Dict[int, CPoly]]] = [
        (equations, {}, {})
    ]
    nodes = 0

    while stack:
        nodes += 1
        if nodes > node_cap:
            complete = False
            break
        eqs, assign, subst = stack.pop()
        eqs = [e for e in eqs if not e.is_zero()]
        if any(e.total_degree() == 0 for e in eqs):
            continue
        if not eqs:
            values, had_free = _resolve_assignment(variables, assign, subst)
            if had_free:
                complete = False
            key = tuple(sorted(values.items()))
            if key not in seen:
                seen.add(key)
                solutions.append(values)
            continue

        linear = next((e for e in eqs if e.total_degree() == 1), None)
        if linear is not None:
            var = min(v for mono in linear.terms for v in mono)
            coeff = linear.terms[(var,)]
            rest = linear + CPoly({(var,): -coeff})
            expr = rest * (Fraction(-1) / coeff)
            new_eqs = [e.substitute(var, expr) for e in eqs if e is not linear]
            new_subst = dict(subst)
            new_subst[var] = expr
            stack.append((new_eqs, assign, new_subst))
            continue

        univariate = next((e for e in eqs if len(set(v for m in e.terms for v in m)) == 1), None)
        if univariate is not None:
            var = next(v for m in univariate.terms for v in m)
            degree = univariate.total_degree()
            coeffs = [Fraction(0)] * (degree + 1)
            for mono, c in univariate.terms.items():
                coeffs[len(mono)] = c
            for root in rational_roots(coeffs):
                replacement = CPoly.constant(root)
                branch_eqs = [e.substitute(var, replacement) for e in eqs if e is not univariate]
                branch_assign = dict(assign)
                branch_assign[var] = root
                stack.append((branch_eqs, branch_assign, subst))
            continue

        monomial = next((e for e in eqs if len(e.terms) == 1), None)
        if monomial is not None:
            mono = next(iter(monomial.terms))
            for var in sorted(set(mono)):
                replacement = CPoly.constant(Fraction(0))
                branch_eqs = [e.substitute(var, replacement) for e in eqs if e is not monomial]
                branch_assign = dict(assign)
                branch_assign[var] = Fraction(0)
                stack.append((branch_eqs, branch_assign, subst))
            continue

        complete = False
    return solutions, complete


# ---------------------------------------------------------------------------
# Two-factor splits
# ---------------------------------------------------------------------------


def two_factor_splits(f: NcPoly) -> Tuple[List[Tuple[NcPoly, NcPoly]], bool]:
    """All (g, h) with f = g*h, g monic, both factors nonconstant.

    Candidate supports come from an exact containment: in any product, the
    support of the left factor consists of prefixes of the product's support
    and is deglex-dominated by the leading word's prefix (symmetrically for
    the right factor).  The remaining coefficient system is solved exactly;
    the flag reports whether every split's search ran to completion.
    """
    if f.is_zero() or f.degree < 1:
        raise ValueError("splits need a nonconstant polynomial")
    if f.lead_coeff != 1:
        raise ValueError("splits are defined for monic polynomials")

    degree = int(f.degree)
    lead = f.lead_word
    support = list(f.terms)
    results: List[Tuple[NcPoly, NcPoly]] = []
    seen: Set[Tuple[NcPoly, NcPoly]] = set()
    complete = True

    for a in range(1, degree):
        b = degree - a
        u0, v0 = lead[:a], lead[a:]
        prefixes = sorted(
            {
                w[:k]
                for w in support
                for k in range(min(a, len(w)) + 1)
                if deglex_key(w[:k]) <= deglex_key(u0)
            },
            key=deglex_key,
        )
        suffixes = sorted(
            {
                w[len(w) - k :]
                for w in support
                for k in range(min(b, len(w)) + 1)
                if deglex_key(w[len(w) - k :]) <= deglex_key(v0)
            },
            key=deglex_key,
        )

        alpha: Dict[Word, CPoly] = {}
        beta: Dict[Word, CPoly] = {}
        var_id = 0
        for u in prefixes:
            alpha[u] = CPoly.constant(1) if u == u0 else CPoly.variable(var_id)
            var_id += 0 if u == u0 else 1
        for v in suffixes:
            beta[v] = CPoly.constant(1) if v == v0 else CPoly.variable(var_id)
            var_id += 0 if v == v0 else 1
        variables = list(range(var_id))

        equations: Dict[Word, CPoly] = {}
        for u in prefixes:
            for v in suffixes:
                w = u + v
                term = alpha[u] * beta[v]
                equations[w] = equations.get(w, CPoly()) + term
        feasible = True
        for w in support:
            if w not in equations:
                feasible = False
                break
        if not feasible:
            continue
        eqs = [equations[w] - CPoly.constant(f.coeff(w)) for w in equations]

        sols, split_complete = _solve_poly_system(eqs, variables)
        if not split_complete:
            complete = False
        for values in sols:
            g_terms = {
                u: (Fraction(1) if u == u0 else _cpoly_value(alpha[u], values))
                for u in prefixes
            }
            h_terms = {
                v: (Fraction(1) if v == v0 else _cpoly_value(beta[v], values))
                for v in suffixes
            }
            g = NcPoly(f.d, {u: c for u, c in g_terms.items() if c})
            h = NcPoly(f.d, {v: c for v, c in h_terms.items() if c})
            if g * h != f:
                continue
            if (g, h) not in seen:
                seen.add((g, h))
                results.append((g, h))

    results.sort(key=lambda gh: (gh[0].sort_key(), gh[1].sort_key()))
    return results, complete


def _cpoly_value(p: CPoly, values: Dict[int, Fraction]) -> Fraction:
    total = Fraction(0)
    for mono, coeff in p.terms.items():
        term = coeff
        for v in mono:
            term *= values[v]
        total += term
    return total


# ---------------------------------------------------------------------------
# Complete factorizations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FactorEvidence:
    """Outcome of the split search that certified a factor irreducible."""

    exhaustive: bool
    degree: int
    max_degree: int


@dataclass(frozen=True)
class Factorization:
    unit: Fraction
    factors: Tuple[NcPoly, ...]
    evidence: Tuple[FactorEvidence, ...]


class _FactorSearch:
    def __init__(self, max_degree: int):
        self.max_degree = max_degree
        self.splits_memo: Dict[NcPoly, Tuple[List[Tuple[NcPoly, NcPoly]], bool]] = {}
        self.all_memo: Dict[NcPoly, Set[Tuple[NcPoly, ...]]] = {}

    def splits(self, m: NcPoly) -> Tuple[List[Tuple[NcPoly, NcPoly]], bool]:
        if m in self.splits_memo:
            return self.splits_memo[m]
        if m.degree > self.max_degree:
            result: Tuple[List[Tuple[NcPoly, NcPoly]], bool] = ([], False)
        else:
            result = two_factor_splits(m)
        self.splits_memo[m] = result
        return result

    def complete_factorizations(self, m: NcPoly) -> Set[Tuple[NcPoly, ...]]:
        if m in self.all_memo:
            return self.all_memo[m]
        splits, _ = self.splits(m)
        out: Set[Tuple[NcPoly, ...]] = set()
        if not splits:
            out.add((m,))
        else:
            for g, h in splits:
                for left in self.complete_factorizations(g):
                    for right in self.complete_factorizations(h):
                        out.add(left + right)
        self.all_memo[m] = out
        return out

    def evidence(self, factor: NcPoly) -> FactorEvidence:
        _, complete = self.splits(factor)
        return FactorEvidence(
            exhaustive=complete and factor.degree <= self.max_degree,
            degree=int(factor.degree),
            max_degree=self.max_degree,
        )


def factor(f: NcPoly, max_degree: int = 10) -> List[Factorization]:
    """Every complete factorization of f into monic irreducibles, scalar unit
    out front.  Constants factor trivially; zero has no factorization."""
    if f.is_zero():
        raise ValueError("zero has no factorization")
    if f.degree < 1:
        return [Factorization(unit=f.constant_term, factors=(), evidence=())]
    unit = f.lead_coeff
    monic = f.monic()
    search = _FactorSearch(max_degree)
    tuples = sorted(
        search.complete_factorizations(monic),
        key=lambda factors: tuple(p.sort_key() for p in factors),
    )
    out = []
    for factors in tuples:
        out.append(
            Factorization(
                unit=unit,
                factors=factors,
                evidence=tuple(search.evidence(p) for p in factors),
            )
        )
    return out


# ---------------------------------------------------------------------------
# Stable associativity
# ---------------------------------------------------------------------------

Mat2 = Tuple[Tuple[NcPoly, NcPoly], Tuple[NcPoly, NcPoly]]


def _mat2(entries: Sequence[Sequence[NcPoly]]) -> Mat2:
    return ((entries[0][0], entries[0][1]), (entries[1][0], entries[1][1]))


def _mat2_mul(x: Mat2, y: Mat2) -> Mat2:
    return tuple(
        tuple(
            x[i][0] * y[0][j] + x[i][1] * y[1][j]
            for j in range(2)
        )
        for i in range(2)
    )  # type: ignore[return-value]


def _mat2_identity(d: int) -> Mat2:
    one, zero = NcPoly.one(d), NcPoly.zero(d)
    return ((one, zero), (zero, one))


def _diag2(p: NcPoly) -> Mat2:
    one, zero = NcPoly.one(p.d), NcPoly.zero(p.d)
    return ((p, zero), (zero, one))


@dataclass(frozen=True)
class AssocYes:
    """P * diag(q,1) * Q = diag(p,1) with explicit two-sided inverses."""

    p_mat: Mat2
    q_mat: Mat2
    p_inv: Mat2
    q_inv: Mat2
    verification: str = "verified"


@dataclass(frozen=True)
class AssocNo:
    """A directional zero of one polynomial that the other misses."""

    point: MatTuple
    vector: QVector
    vanishing: str  # "p" or "q": whose value kills the vector
    p_value: QVector
    q_value: QVector
    verification: str = "verified"


@dataclass(frozen=True)
class AssocUnknown:
    chain_depth: int
    n_max: int
    samples_per_size: int
    verification: str = "none"


def _verify_assoc_yes(p: NcPoly, q: NcPoly, cert: AssocYes) -> bool:
    d = p.d
    identity = _mat2_identity(d)
    product = _mat2_mul(_mat2_mul(cert.p_mat, _diag2(q)), cert.q_mat)
    if product != _diag2(p):
        return False
    if _mat2_mul(cert.p_mat, cert.p_inv) != identity:
        return False
    if _mat2_mul(cert.p_inv, cert.p_mat) != identity:
        return False
    if _mat2_mul(cert.q_mat, cert.q_inv) != identity:
        return False
    if _mat2_mul(cert.q_inv, cert.q_mat) != identity:
        return False
    return True


def _scalar_cert(p: NcPoly, q: NcPoly, lam: Fraction) -> AssocYes:
    """q = lam * p."""
    d = p.d
    one, zero = NcPoly.one(d), NcPoly.zero(d)
    inv = NcPoly.constant(1 / lam, d)
    lam_p = NcPoly.constant(lam, d)
    identity = _mat2_identity(d)
    return AssocYes(
        p_mat=((inv, zero), (zero, one)),
        q_mat=identity,
        p_inv=((lam_p, zero), (zero, one)),
        q_inv=identity,
    )


def _rotation_cert(u: NcPoly, v: NcPoly, c: Fraction) -> AssocYes:
    """p = u*v + c related to q = v*u + c, c a nonzero scalar.

    The c = 1 case is the classical 2x2 identity; general c is its
    conjugation by diag(c, 1)."""
    d = u.d
    one = NcPoly.one(d)
    cp = NcPoly.constant(c, d)
    inv_c = Fraction(1) / c
    p_mat = _mat2([
        [inv_c * u, cp + u * v],
        [NcPoly.constant(-inv_c, d), -v],
    ])
    q_mat = _mat2([
        [-v, -one],
        [one + inv_c * (u * v), inv_c * u],
    ])
    p_inv = _mat2([
        [-v, -cp - v * u],
        [NcPoly.constant(inv_c, d), inv_c * u],
    ])
    q_inv = _mat2([
        [inv_c * u, one],
        [-(inv_c * (v * u)) - one, -v],
    ])
    return AssocYes(p_mat=p_mat, q_mat=q_mat, p_inv=p_inv, q_inv=q_inv)


def _compose_certs(first: AssocYes, second: AssocYes) -> AssocYes:
    """diag(p,1) = P1 diag(r,1) Q1 and diag(r,1) = P2 diag(q,1) Q2 compose to
    diag(p,1) = (P1 P2) diag(q,1) (Q2 Q1)."""
    return AssocYes(
        p_mat=_mat2_mul(first.p_mat, second.p_mat),
        q_mat=_mat2_mul(second.q_mat, first.q_mat),
        p_inv=_mat2_mul(second.p_inv, first.p_inv),
        q_inv=_mat2_mul(first.q_inv, second.q_inv),
    )


def _scalar_ratio(p: NcPoly, q: NcPoly) -> Optional[Fraction]:
    """lam with q = lam * p, if one exists."""
    if p.is_zero() or q.is_zero():
        return None
    if set(p.terms) != set(q.terms):
        return None
    lam = None
    for w, c in p.terms.items():
        ratio = q.terms[w] / c
        if lam is None:
            lam = ratio
        elif ratio != lam:
            return None
    return lam


def _rotation_moves(r: NcPoly) -> List[Tuple[NcPoly, AssocYes]]:
    """All single-rotation neighbours of r: write r = u*v + c (c nonzero
    scalar) and move to v*u + c."""
    c = r.constant_term
    if c == 0:
        return []
    base = r - NcPoly.constant(c, r.d)
    if base.is_zero() or base.degree < 1:
        return []
    lc = base.lead_coeff
    splits, _ = two_factor_splits(base.monic())
    moves = []
    for g, h in splits:
        u = lc * g
        v = h
        neighbour = v * u + NcPoly.constant(c, r.d)
        moves.append((neighbour, _rotation_cert(u, v, c)))
    return moves


def stable_assoc(
    p: NcPoly,
    q: NcPoly,
    chain_depth: int = 4,
    n_max: int = 4,
    samples_per_size: int = 200,
    seed: int = 0,
) -> "AssocYes | AssocNo | AssocUnknown":
    """Semi-decide stable associativity of two nonconstant polynomials.

    Yes-search walks chains of scalar scalings and u*v+c -> v*u+c rotations,
    composing the explicit 2x2 certificates.  No-search hunts a directional
    zero of one that the other misses (stably associated polynomials share
    directional zero sets).  Otherwise Unknown, with the bounds that failed.
    """
    if p.d != q.d:
        raise ValueError("polynomials must share the variable count")
    if p.degree < 1 or q.degree < 1:
        raise ValueError("stable associativity is tested for nonconstant inputs")
    d = p.d

    # breadth-first over rotation moves, certificates composed along the path
    frontier: List[Tuple[NcPoly, Optional[AssocYes]]] = [(p, None)]
    visited = {p}
    for _ in range(chain_depth + 1):
        next_frontier: List[Tuple[NcPoly, Optional[AssocYes]]] = []
        for state, cert in frontier:
            lam = _scalar_ratio(state, q)
            if lam is not None:
                closing = _scalar_cert(state, q, lam)
                total = closing if cert is None else _compose_certs(cert, closing)
                if not _verify_assoc_yes(p, q, total):
                    raise AssertionError("stable-associativity certificate failed to verify")
                return total
            for neighbour, move in _rotation_moves(state):
                if neighbour in visited:
                    continue
                visited.add(neighbour)
                total = move if cert is None else _compose_certs(cert, move)
                next_frontier.append((neighbour, total))
        frontier = next_frontier
        if not frontier:
            break

    witness = _separating_point(p, q, n_max, samples_per_size, seed)
    if witness is not None:
        return witness
    return AssocUnknown(chain_depth=chain_depth, n_max=n_max, samples_per_size=samples_per_size)


def _structured_tuples(d: int, n: int) -> List[MatTuple]:
    out = [MatTuple([QMatrix.zeros(n, n) for _ in range(d)])]
    if d >= 2:
        w = weyl_pair(n)
        out.append(MatTuple(list(w.matrices) + [QMatrix.zeros(n, n)] * (d - 2)))
    out.append(MatTuple([QMatrix.identity(n) for _ in range(d)]))
    return out


def _separating_point(
    p: NcPoly, q: NcPoly, n_max: int, samples_per_size: int, seed: int
) -> Optional[AssocNo]:
    """Directional zero of p missed by q, or vice versa.  Checking every
    kernel basis vector is enough: q's value is nonzero on some kernel vector
    iff it is nonzero on a basis vector."""
    d = p.d
    rng = random.Random(seed)
    for n in range(1, n_max + 1):
        candidates = _structured_tuples(d, n)
        candidates.extend(random_tuple(rng, n, d) for _ in range(samples_per_size))
        for point in candidates:
            p_val = eval_poly(p, point)
            q_val = eval_poly(q, point)
            for vanishing, first, second in (("p", p_val, q_val), ("q", q_val, p_val)):
                for v in rank_det_kernel(first).kernel:
                    sv = second @ v
                    if not sv.is_zero():
                        if vanishing == "p":
                            return AssocNo(point, v, "p", first @ v, sv)
                        return AssocNo(point, v, "q", sv, first @ v)
    return None


# ---------------------------------------------------------------------------
# Determinantal-zero inclusion via factor matching
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DetZeroYes:
    """Generator f_j whose irreducible factors all match factors of g.

    `matching` pairs each factor of f_j with a factor of g and the stable
    associativity certificate tying them; `g_factors` is the complete
    factorization of g the matches were drawn from."""

    generator_index: int
    g_factors: Tuple[NcPoly, ...]
    matching: Tuple[Tuple[NcPoly, NcPoly, AssocYes], ...]
    verification: str = "verified"


@dataclass(frozen=True)
class DetZeroNo:
    """Per generator: a factor refuted against every factor of g.

    Each refutation carries the generator index, its complete factorization,
    the refuted factor, and one AssocNo per entry of g_factors, in order."""

    g_factors: Tuple[NcPoly, ...]
    refutations: Tuple[Tuple[int, Tuple[NcPoly, ...], NcPoly, Tuple[AssocNo, ...]], ...]
    verification: str = "verified"


@dataclass(frozen=True)
class DetZeroUnknown:
    reason: str
    verification: str = "none"


def detzero_inclusion(
    f_list: Sequence[NcPoly],
    g: NcPoly,
    max_degree: int = 10,
    chain_depth: int = 4,
    n_max: int = 4,
    samples_per_size: int = 200,
    seed: int = 0,
) -> "DetZeroYes | DetZeroNo | DetZeroUnknown":
    """Factor-matching test: Yes when every irreducible factor of some f_j is
    stably associated to an irreducible factor of g; No when every f_j has a
    factor refuted against all of g's factors; Unknown when uncertified
    factorizations or undecided pairs block both."""
    if not f_list:
        raise ValueError("need at least one constraint polynomial")
    if g.degree < 1 or any(f.degree < 1 for f in f_list):
        raise ValueError("determinantal inclusion is defined for nonconstant inputs")

    def leading_factorization(h: NcPoly) -> Optional[Tuple[NcPoly, ...]]:
        options = factor(h, max_degree=max_degree)
        first = options[0]
        if any(not e.exhaustive for e in first.evidence):
            return None
        return first.factors

    g_factors = leading_factorization(g)
    if g_factors is None:
        return DetZeroUnknown("irreducibility of a factor of g is unverified at the bound")

    cache: Dict[Tuple[NcPoly, NcPoly], object] = {}

    def pair_verdict(a: NcPoly, b: NcPoly):
        key = (a, b)
        if key not in cache:
            cache[key] = stable_assoc(
                a, b, chain_depth=chain_depth, n_max=n_max,
                samples_per_size=samples_per_size, seed=seed,
            )
        return cache[key]

    refutations: List[Tuple[int, Tuple[NcPoly, ...], NcPoly, Tuple[AssocNo, ...]]] = []
    refuted = 0
    blocked = False
    for j, f in enumerate(f_list):
        f_factors = leading_factorization(f)
        if f_factors is None:
            blocked = True
            continue
        matching: List[Tuple[NcPoly, NcPoly, AssocYes]] = []
        fully_matched = True
        refuting: Optional[Tuple[NcPoly, Tuple[AssocNo, ...]]] = None
        for a in f_factors:
            match: Optional[Tuple[NcPoly, AssocYes]] = None
            no_certs: List[AssocNo] = []
            saw_unknown = False
            for b in g_factors:
                verdict = pair_verdict(a, b)
                if isinstance(verdict, AssocYes):
                    match = (b, verdict)
                    break
                if isinstance(verdict, AssocNo):
                    no_certs.append(verdict)
                else:
                    saw_unknown = True
            if match is not None:
                matching.append((a, match[0], match[1]))
                continue
            fully_matched = False
            if not saw_unknown and refuting is None:
                refuting = (a, tuple(no_certs))
        if fully_matched:
            return DetZeroYes(generator_index=j, g_factors=g_factors, matching=tuple(matching))
        if refuting is not None:
            refuted += 1
            refutations.append((j, f_factors, refuting[0], refuting[1]))
        else:
            blocked = True
    if not blocked and refuted == len(f_list):
        return DetZeroNo(g_factors=g_factors, refutations=tuple(refutations))
    return DetZeroUnknown("undecided stable-associativity pairs block both verdicts")
