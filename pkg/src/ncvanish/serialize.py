"""Certificate documents: JSON encoding plus standalone re-verification.

One document per engine run: the problem statement, the certificate, and the
engine's verification status.  `verify_certificate` re-derives every
checkable identity from the document alone, re-parsing polynomials through
the shared grammar and matrices through the shared tuple format.  Search
bounds and completeness flags are carried as metadata: they describe how hard
an engine looked, not an algebraic fact a document could prove.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from . import certify, factorization as factor_mod, lowrank as lowrank_mod
from .evaluate import MatTuple, classify_point, eval_poly, eval_poly_vector, pi_test, weyl_pair
from .linalg import QMatrix, QVector, rank
from .poly import NcPoly, commutator, format_poly, parse

FORMAT_NAME = "ncvanish-certificate"
FORMAT_VERSION = 1


def _vec_json(v: QVector) -> List[str]:
    return [str(e) for e in v.entries]


def _vec_of(data: Sequence[str]) -> QVector:
    return QVector([Fraction(e) for e in data])


def _mat_json(m: QMatrix) -> List[List[str]]:
    return [[str(e) for e in row] for row in m.entries]


def _mat_of(data: Sequence[Sequence[str]]) -> QMatrix:
    return QMatrix(data)


def _mat2_json(m) -> List[List[str]]:
    return [[format_poly(e) for e in row] for row in m]


def _mat2_of(data, d: int):
    return tuple(tuple(parse(e, d) for e in row) for row in data)


def make_document(problem: dict, certificate: dict) -> dict:
    return {
        "format": FORMAT_NAME,
        "version": FORMAT_VERSION,
        "problem": problem,
        "certificate": certificate,
    }


def save_document(doc: dict, path: str) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(doc, handle, indent=2, sort_keys=True)
        handle.write("\n")


def load_document(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as handle:
        doc = json.load(handle)
    if doc.get("format") != FORMAT_NAME:
        raise ValueError("not a certificate document")
    return doc


# ---------------------------------------------------------------------------
# Encoding
# ---------------------------------------------------------------------------


def encode_certificate(cert) -> dict:
    """Certificate object to its JSON form; dispatch on the concrete type."""
    if isinstance(cert, certify.LeftCombination):
        return {
            "kind": "left_combination",
            "cofactors": [format_poly(p) for p in cert.cofactors],
            "verification": cert.verification,
        }
    if isinstance(cert, certify.DirectionalWitness):
        return {
            "kind": "left_witness",
            "point": cert.point.to_json(),
            "vector": _vec_json(cert.vector),
            "f_values": [_vec_json(v) for v in cert.f_values],
            "g_value": _vec_json(cert.g_value),
            "verification": cert.verification,
        }
    if isinstance(cert, certify.HomCombination):
        return {
            "kind": "hom_combination",
            "pairs": [
                [[format_poly(p), format_poly(q)] for p, q in group]
                for group in cert.pairs
            ],
            "verification": cert.verification,
        }
    if isinstance(cert, certify.MatrixWitness):
        return {
            "kind": "hom_witness",
            "point": cert.point.to_json(),
            "f_values": [_mat_json(m) for m in cert.f_values],
            "g_value": _mat_json(cert.g_value),
            "verification": cert.verification,
        }
    if isinstance(cert, certify.TraceCombination):
        return {
            "kind": "trace_combination",
            "branch": cert.branch,
            "lambdas": [str(x) for x in cert.lambdas],
            "commutators": [
                [format_poly(a), format_poly(b)] for a, b in cert.commutators
            ],
            "verification": cert.verification,
        }
    if isinstance(cert, certify.TraceNotMember):
        return {"kind": "trace_not_member", "verification": cert.verification}
    if isinstance(cert, certify.SpanCoefficients):
        return {
            "kind": "span_coefficients",
            "coefficients": [str(x) for x in cert.coefficients],
            "verification": cert.verification,
        }
    if isinstance(cert, certify.WeakWitness):
        return {
            "kind": "span_witness",
            "point": cert.point.to_json(),
            "left": _vec_json(cert.left),
            "right": _vec_json(cert.right),
            "f_values": [str(x) for x in cert.f_values],
            "g_value": str(cert.g_value),
            "verification": cert.verification,
        }
    if isinstance(cert, certify.SpanUnknown):
        return {
            "kind": "span_unknown",
            "sizes_tried": cert.sizes_tried,
            "attempts_per_size": cert.attempts_per_size,
            "verification": cert.verification,
        }
    if isinstance(cert, certify.CompositionCoefficients):
        return {
            "kind": "composition",
            "coefficients": [str(x) for x in cert.coefficients],
            "verification": cert.verification,
        }
    if isinstance(cert, certify.EigenWitness):
        return _eigen_json(cert)
    if isinstance(cert, certify.CompositionNotMember):
        return {
            "kind": "composition_not_member",
            "witness": None if cert.witness is None else _eigen_json(cert.witness),
            "verification": cert.verification,
        }
    if isinstance(cert, list) and cert and isinstance(cert[0], factor_mod.Factorization):
        return {
            "kind": "factorization",
            "options": [
                {
                    "unit": str(fz.unit),
                    "factors": [format_poly(p) for p in fz.factors],
                    "evidence": [
                        {
                            "exhaustive": e.exhaustive,
                            "degree": e.degree,
                            "max_degree": e.max_degree,
                        }
                        for e in fz.evidence
                    ],
                }
                for fz in cert
            ],
            "verification": "verified",
        }
    if isinstance(cert, factor_mod.AssocYes):
        return _assoc_yes_json(cert)
    if isinstance(cert, factor_mod.AssocNo):
        return _assoc_no_json(cert)
    if isinstance(cert, factor_mod.AssocUnknown):
        return {
            "kind": "assoc_unknown",
            "chain_depth": cert.chain_depth,
            "n_max": cert.n_max,
            "samples_per_size": cert.samples_per_size,
            "verification": cert.verification,
        }
    if isinstance(cert, factor_mod.DetZeroYes):
        return {
            "kind": "detzero_yes",
            "generator_index": cert.generator_index,
            "g_factors": [format_poly(p) for p in cert.g_factors],
            "matching": [
                {
                    "factor": format_poly(a),
                    "matched_to": format_poly(b),
                    "assoc": _assoc_yes_json(y),
                }
                for a, b, y in cert.matching
            ],
            "verification": cert.verification,
        }
    if isinstance(cert, factor_mod.DetZeroNo):
        return {
            "kind": "detzero_no",
            "g_factors": [format_poly(p) for p in cert.g_factors],
            "refutations": [
                {
                    "generator_index": j,
                    "f_factors": [format_poly(p) for p in fs],
                    "refuted": format_poly(a),
                    "certs": [_assoc_no_json(c) for c in certs],
                }
                for j, fs, a, certs in cert.refutations
            ],
            "verification": cert.verification,
        }
    if isinstance(cert, factor_mod.DetZeroUnknown):
        return {
            "kind": "detzero_unknown",
            "reason": cert.reason,
            "verification": cert.verification,
        }
    raise TypeError(f"no JSON encoding for {type(cert).__name__}")


def _eigen_json(w: certify.EigenWitness) -> dict:
    return {
        "kind": "composition_witness",
        "point": w.point.to_json(),
        "vector": _vec_json(w.vector),
        "eigenvalue": str(w.eigenvalue),
        "g_value": _vec_json(w.g_value),
        "verification": w.verification,
    }


def _assoc_yes_json(cert: factor_mod.AssocYes) -> dict:
    return {
        "kind": "assoc_yes",
        "p_mat": _mat2_json(cert.p_mat),
        "q_mat": _mat2_json(cert.q_mat),
        "p_inv": _mat2_json(cert.p_inv),
        "q_inv": _mat2_json(cert.q_inv),
        "verification": cert.verification,
    }


def _assoc_no_json(cert: factor_mod.AssocNo) -> dict:
    return {
        "kind": "assoc_no",
        "point": cert.point.to_json(),
        "vector": _vec_json(cert.vector),
        "vanishing": cert.vanishing,
        "p_value": _vec_json(cert.p_value),
        "q_value": _vec_json(cert.q_value),
        "verification": cert.verification,
    }


# ---------------------------------------------------------------------------
# Standalone verification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class VerifyResult:
    ok: bool
    kind: str
    detail: str


def _fail(kind: str, detail: str) -> VerifyResult:
    return VerifyResult(False, kind, detail)


def _pass(kind: str, detail: str) -> VerifyResult:
    return VerifyResult(True, kind, detail)


def verify_certificate(doc: dict) -> VerifyResult:
    """Re-check a certificate document from first principles.

    Identity-bearing kinds are re-verified by exact arithmetic; negative or
    unknown outcomes with no checkable identity are accepted structurally,
    with the detail naming what was and was not re-checked.
    """
    cert = doc["certificate"]
    problem = doc["problem"]
    kind = cert.get("kind", "?")
    verifier = _VERIFIERS.get(kind)
    if verifier is None:
        return _fail(kind, f"unknown certificate kind {kind!r}")
    try:
        return verifier(problem, cert)
    except Exception as exc:  # malformed documents land here, not in tracebacks
        return _fail(kind, f"verification crashed: {exc}")


def _parse_generators(problem: dict) -> Tuple[int, List[NcPoly], NcPoly]:
    d = int(problem["d"])
    gens = [parse(s, d) for s in problem["generators"]]
    target = parse(problem["target"], d)
    return d, gens, target


def _verify_left_combination(problem: dict, cert: dict) -> VerifyResult:
    d, gens, target = _parse_generators(problem)
    cofactors = [parse(s, d) for s in cert["cofactors"]]
    if len(cofactors) != len(gens):
        return _fail("left_combination", "cofactor count mismatch")
    total = NcPoly.zero(d)
    for p, f in zip(cofactors, gens):
        total = total + p * f
    if total != target:
        return _fail("left_combination", "sum of cofactor products misses the target")
    return _pass("left_combination", "target equals the left combination exactly")


def _verify_left_witness(problem: dict, cert: dict) -> VerifyResult:
    d, gens, target = _parse_generators(problem)
    point = MatTuple.from_json(cert["point"])
    vector = _vec_of(cert["vector"])
    for i, f in enumerate(gens):
        value = eval_poly_vector(f, point, vector)
        if not value.is_zero():
            return _fail("left_witness", f"generator {i} does not kill the vector")
        if _vec_of(cert["f_values"][i]) != value:
            return _fail("left_witness", f"stored value for generator {i} is wrong")
    g_value = eval_poly_vector(target, point, vector)
    if g_value.is_zero():
        return _fail("left_witness", "target kills the vector too")
    if _vec_of(cert["g_value"]) != g_value:
        return _fail("left_witness", "stored target value is wrong")
    return _pass("left_witness", "directional zero of the generators, nonzero for the target")


def _verify_hom_combination(problem: dict, cert: dict) -> VerifyResult:
    d, gens, target = _parse_generators(problem)
    groups = cert["pairs"]
    if len(groups) != len(gens):
        return _fail("hom_combination", "pair group count mismatch")
    total = NcPoly.zero(d)
    for f, group in zip(gens, groups):
        for p_str, q_str in group:
            total = total + parse(p_str, d) * f * parse(q_str, d)
    if total != target:
        return _fail("hom_combination", "two-sided combination misses the target")
    return _pass("hom_combination", "target equals the two-sided combination exactly")


def _verify_hom_witness(problem: dict, cert: dict) -> VerifyResult:
    d, gens, target = _parse_generators(problem)
    point = MatTuple.from_json(cert["point"])
    for i, f in enumerate(gens):
        value = eval_poly(f, point)
        if not value.is_zero():
            return _fail("hom_witness", f"generator {i} is nonzero at the point")
        if _mat_of(cert["f_values"][i]) != value:
            return _fail("hom_witness", f"stored value for generator {i} is wrong")
    g_value = eval_poly(target, point)
    if g_value.is_zero():
        return _fail("hom_witness", "target also vanishes at the point")
    if _mat_of(cert["g_value"]) != g_value:
        return _fail("hom_witness", "stored target value is wrong")
    return _pass("hom_witness", "point kills every generator but not the target")


def _verify_trace_combination(problem: dict, cert: dict) -> VerifyResult:
    d, gens, target = _parse_generators(problem)
    lambdas = [Fraction(x) for x in cert["lambdas"]]
    if len(lambdas) != len(gens):
        return _fail("trace_combination", "lambda count mismatch")
    goal = NcPoly.one(d) if cert["branch"] == "one-in-span" else target
    total = NcPoly.zero(d)
    for lam, f in zip(lambdas, gens):
        total = total + NcPoly.constant(lam, d) * f
    for a_str, b_str in cert["commutators"]:
        a, b = parse(a_str, d), parse(b_str, d)
        total = total + (a * b - b * a)
    if total != goal:
        return _fail("trace_combination", "combination plus commutators misses the goal")
    return _pass(
        "trace_combination",
        f"branch {cert['branch']}: goal equals the combination plus explicit commutators",
    )


def _verify_trace_not_member(problem: dict, cert: dict) -> VerifyResult:
    return _pass(
        "trace_not_member",
        "negative outcome; no identity to re-check (engine performed the span test)",
    )


def _verify_span_coefficients(problem: dict, cert: dict) -> VerifyResult:
    d, gens, target = _parse_generators(problem)
    coeffs = [Fraction(x) for x in cert["coefficients"]]
    if len(coeffs) != len(gens):
        return _fail("span_coefficients", "coefficient count mismatch")
    total = NcPoly.zero(d)
    for c, f in zip(coeffs, gens):
        total = total + NcPoly.constant(c, d) * f
    if total != target:
        return _fail("span_coefficients", "linear combination misses the target")
    return _pass("span_coefficients", "target equals the linear combination exactly")


def _verify_span_witness(problem: dict, cert: dict) -> VerifyResult:
    d, gens, target = _parse_generators(problem)
    point = MatTuple.from_json(cert["point"])
    left = _vec_of(cert["left"])
    right = _vec_of(cert["right"])
    for i, f in enumerate(gens):
        value = left.dot(eval_poly_vector(f, point, right))
        if value != 0:
            return _fail("span_witness", f"generator {i} is nonzero in the weak pairing")
        if Fraction(cert["f_values"][i]) != value:
            return _fail("span_witness", f"stored pairing for generator {i} is wrong")
    g_value = left.dot(eval_poly_vector(target, point, right))
    if g_value == 0:
        return _fail("span_witness", "target also vanishes in the weak pairing")
    if Fraction(cert["g_value"]) != g_value:
        return _fail("span_witness", "stored target pairing is wrong")
    return _pass("span_witness", "weak zero of the generators, nonzero for the target")


def _verify_span_unknown(problem: dict, cert: dict) -> VerifyResult:
    return _pass("span_unknown", "unknown outcome; search bounds carried as metadata")


def _verify_composition(problem: dict, cert: dict) -> VerifyResult:
    d = int(problem["d"])
    inner = parse(problem["inner"], d)
    target = parse(problem["target"], d)
    coeffs = [Fraction(x) for x in cert["coefficients"]]
    total = NcPoly.zero(d)
    power = NcPoly.one(d)
    for c in coeffs:
        total = total + NcPoly.constant(c, d) * power
        power = power * inner
    if total != target:
        return _fail("composition", "polynomial in the inner function misses the target")
    return _pass("composition", "target equals the polynomial in the inner function")


def _check_eigen_witness(problem: dict, data: dict) -> Optional[str]:
    d = int(problem["d"])
    inner = parse(problem["inner"], d)
    target = parse(problem["target"], d)
    point = MatTuple.from_json(data["point"])
    vector = _vec_of(data["vector"])
    lam = Fraction(data["eigenvalue"])
    if vector.is_zero():
        return "witness vector is zero"
    f_value = eval_poly_vector(inner, point, vector)
    if f_value != lam * vector:
        return "vector is not an eigenvector at the stated eigenvalue"
    g_value = eval_poly_vector(target, point, vector)
    if _vec_of(data["g_value"]) != g_value:
        return "stored target value is wrong"
    n = len(vector)
    for i in range(n):
        for j in range(n):
            if vector[i] * g_value[j] != vector[j] * g_value[i]:
                return None  # some 2x2 minor is nonzero: not parallel, witness valid
    return "target value is parallel to the vector, witness shows nothing"


def _verify_composition_witness(problem: dict, cert: dict) -> VerifyResult:
    issue = _check_eigen_witness(problem, cert)
    if issue is not None:
        return _fail("composition_witness", issue)
    return _pass(
        "composition_witness",
        "eigenvector of the inner value whose target value leaves the eigenline",
    )


def _verify_composition_not_member(problem: dict, cert: dict) -> VerifyResult:
    witness = cert.get("witness")
    if witness is not None:
        issue = _check_eigen_witness(problem, witness)
        if issue is not None:
            return _fail("composition_not_member", issue)
        return _pass("composition_not_member", "eigenvector witness re-checked")
    d = int(problem["d"])
    inner = parse(problem["inner"], d)
    target = parse(problem["target"], d)
    if inner.degree < 1 and target.degree >= 1:
        return _pass(
            "composition_not_member",
            "inner polynomial is constant and the target is not; no witness needed",
        )
    return _fail("composition_not_member", "no witness and no degree argument")


def _verify_factorization(problem: dict, cert: dict) -> VerifyResult:
    d = int(problem["d"])
    f = parse(problem["polynomial"], d)
    options = cert["options"]
    if not options:
        return _fail("factorization", "no factorizations recorded")
    for idx, option in enumerate(options):
        unit = Fraction(option["unit"])
        product = NcPoly.constant(unit, d)
        for s, info in zip(option["factors"], option["evidence"]):
            p = parse(s, d)
            if p.degree != info["degree"]:
                return _fail("factorization", f"option {idx}: recorded degree is wrong")
            product = product * p
        if product != f:
            return _fail("factorization", f"option {idx} does not multiply back")
    return _pass(
        "factorization",
        f"{len(options)} factorization(s) multiply back exactly; "
        "irreducibility flags are search metadata",
    )


def _assoc_parts(problem: dict) -> Tuple[int, NcPoly, NcPoly]:
    d = int(problem["d"])
    return d, parse(problem["p"], d), parse(problem["q"], d)


def _check_assoc_yes(d: int, p: NcPoly, q: NcPoly, cert: dict) -> Optional[str]:
    p_mat = _mat2_of(cert["p_mat"], d)
    q_mat = _mat2_of(cert["q_mat"], d)
    p_inv = _mat2_of(cert["p_inv"], d)
    q_inv = _mat2_of(cert["q_inv"], d)
    identity = factor_mod._mat2_identity(d)
    if factor_mod._mat2_mul(factor_mod._mat2_mul(p_mat, factor_mod._diag2(q)), q_mat) != factor_mod._diag2(p):
        return "P diag(q,1) Q does not equal diag(p,1)"
    for name, m, inv in (("P", p_mat, p_inv), ("Q", q_mat, q_inv)):
        if factor_mod._mat2_mul(m, inv) != identity or factor_mod._mat2_mul(inv, m) != identity:
            return f"{name} and its recorded inverse do not multiply to the identity"
    return None


def _verify_assoc_yes(problem: dict, cert: dict) -> VerifyResult:
    d, p, q = _assoc_parts(problem)
    issue = _check_assoc_yes(d, p, q, cert)
    if issue is not None:
        return _fail("assoc_yes", issue)
    return _pass("assoc_yes", "2x2 identity and both inverses re-checked symbolically")


def _check_assoc_no(d: int, p: NcPoly, q: NcPoly, cert: dict) -> Optional[str]:
    point = MatTuple.from_json(cert["point"])
    vector = _vec_of(cert["vector"])
    if vector.is_zero():
        return "witness vector is zero"
    p_value = eval_poly_vector(p, point, vector)
    q_value = eval_poly_vector(q, point, vector)
    if _vec_of(cert["p_value"]) != p_value or _vec_of(cert["q_value"]) != q_value:
        return "stored values disagree with re-evaluation"
    vanishing = cert["vanishing"]
    killed, alive = (p_value, q_value) if vanishing == "p" else (q_value, p_value)
    if not killed.is_zero():
        return f"claimed vanishing polynomial {vanishing} does not kill the vector"
    if alive.is_zero():
        return "both polynomials kill the vector; nothing is separated"
    return None


def _verify_assoc_no(problem: dict, cert: dict) -> VerifyResult:
    d, p, q = _assoc_parts(problem)
    issue = _check_assoc_no(d, p, q, cert)
    if issue is not None:
        return _fail("assoc_no", issue)
    return _pass(
        "assoc_no",
        "directional zero of one polynomial missed by the other; "
        "stable associates share directional zeros",
    )


def _verify_assoc_unknown(problem: dict, cert: dict) -> VerifyResult:
    return _pass("assoc_unknown", "unknown outcome; search bounds carried as metadata")


def _verify_detzero_yes(problem: dict, cert: dict) -> VerifyResult:
    d, gens, target = _parse_generators(problem)
    g_factors = [parse(s, d) for s in cert["g_factors"]]
    product = NcPoly.constant(target.lead_coeff, d)
    for p in g_factors:
        product = product * p
    if product != target:
        return _fail("detzero_yes", "g_factors do not multiply back to the target")
    j = cert["generator_index"]
    if not 0 <= j < len(gens):
        return _fail("detzero_yes", "generator index out of range")
    f = gens[j]
    matched = [parse(m["factor"], d) for m in cert["matching"]]
    product = NcPoly.constant(f.lead_coeff, d)
    for p in matched:
        product = product * p
    if product != f:
        return _fail("detzero_yes", "matched factors do not multiply back to the generator")
    g_set = {format_poly(p) for p in g_factors}
    for m in cert["matching"]:
        if m["matched_to"] not in g_set:
            return _fail("detzero_yes", "a match target is not a recorded factor of g")
        a, b = parse(m["factor"], d), parse(m["matched_to"], d)
        issue = _check_assoc_yes(d, a, b, m["assoc"])
        if issue is not None:
            return _fail("detzero_yes", f"stable-associativity certificate broken: {issue}")
    return _pass(
        "detzero_yes",
        f"every factor of generator {j} matches a factor of the target, certificates re-checked",
    )


def _verify_detzero_no(problem: dict, cert: dict) -> VerifyResult:
    d, gens, target = _parse_generators(problem)
    g_factors = [parse(s, d) for s in cert["g_factors"]]
    product = NcPoly.constant(target.lead_coeff, d)
    for p in g_factors:
        product = product * p
    if product != target:
        return _fail("detzero_no", "g_factors do not multiply back to the target")
    covered = set()
    for ref in cert["refutations"]:
        j = ref["generator_index"]
        covered.add(j)
        f = gens[j]
        f_factors = [parse(s, d) for s in ref["f_factors"]]
        product = NcPoly.constant(f.lead_coeff, d)
        for p in f_factors:
            product = product * p
        if product != f:
            return _fail("detzero_no", f"recorded factors of generator {j} do not multiply back")
        refuted = parse(ref["refuted"], d)
        if refuted not in f_factors:
            return _fail("detzero_no", f"refuted factor is not a factor of generator {j}")
        if len(ref["certs"]) != len(g_factors):
            return _fail("detzero_no", f"generator {j} lacks one refutation per factor of g")
        for b, no_cert in zip(g_factors, ref["certs"]):
            issue = _check_assoc_no(d, refuted, b, no_cert)
            if issue is not None:
                return _fail("detzero_no", f"refutation broken: {issue}")
    if covered != set(range(len(gens))):
        return _fail("detzero_no", "not every generator carries a refutation")
    return _pass(
        "detzero_no",
        "each generator has a factor separated from every factor of the target; "
        "factorization completeness flags are search metadata",
    )


def _verify_detzero_unknown(problem: dict, cert: dict) -> VerifyResult:
    return _pass("detzero_unknown", "unknown outcome; reason carried as metadata")


def _verify_lowrank_exact(problem: dict, cert: dict) -> VerifyResult:
    d = int(problem["d"])
    f = parse(problem["polynomial"], d)
    point = MatTuple.from_json(cert["point"])
    stated = int(cert["rank"])
    actual = rank(eval_poly(f, point))
    if actual != stated:
        return _fail("lowrank_exact", f"exact rank is {actual}, certificate says {stated}")
    if actual > int(problem["target_rank"]):
        return _fail("lowrank_exact", "exact rank exceeds the target")
    return _pass("lowrank_exact", f"exact rank {actual} at the reconstructed point")


def _verify_lowrank_report(problem: dict, cert: dict) -> VerifyResult:
    return _pass("lowrank_report", "float-only outcome; nothing exact to re-check")


def _verify_pi_result(problem: dict, cert: dict) -> VerifyResult:
    d = int(problem["d"])
    f = parse(problem["polynomial"], d)
    n = int(problem["n"])
    value = pi_test(f, n)
    if value != bool(cert["value"]):
        return _fail("pi_result", "symbolic re-expansion disagrees with the recorded value")
    return _pass("pi_result", f"identity test on {n}x{n} matrices re-run symbolically")


def _verify_classification(problem: dict, cert: dict) -> VerifyResult:
    d, gens, target = _parse_generators(problem)
    point = MatTuple.from_json(problem["point"])
    u = _vec_of(problem["left"]) if problem.get("left") else None
    v = _vec_of(problem["right"]) if problem.get("right") else None
    result = classify_point(gens, target, point, u, v)
    recorded = cert["memberships"]
    fields = {
        "in_zero": result.in_zero,
        "in_directional": result.in_directional,
        "in_det_zero": result.in_det_zero,
        "in_trace_zero": result.in_trace_zero,
        "in_weak": result.in_weak,
    }
    for name, value in fields.items():
        if recorded.get(name) != value:
            return _fail("classification", f"{name} disagrees on re-evaluation")
    return _pass("classification", "membership table re-derived from exact evaluation")


def _verify_weyl(problem: dict, cert: dict) -> VerifyResult:
    n = int(problem["n"])
    point = MatTuple.from_json(cert["point"])
    if point != weyl_pair(n):
        return _fail("weyl", "point is not the truncation pair for this size")
    f = NcPoly.one(2) - commutator(NcPoly.var(1, 2), NcPoly.var(2, 2))
    value = eval_poly(f, point)
    expected = QMatrix(
        [[Fraction(n) if i == j == n - 1 else Fraction(0) for j in range(n)] for i in range(n)]
    )
    if value != expected:
        return _fail("weyl", "1 - [x1,x2] does not collapse to the corner value")
    return _pass("weyl", "pair re-checked: 1 - [x1,x2] evaluates to the rank-1 corner")


def _verify_rankprofile(problem: dict, cert: dict) -> VerifyResult:
    d = int(problem["d"])
    f = parse(problem["polynomial"], d)
    table = {int(k): int(v) for k, v in cert["table"].items()}
    replay = lowrank_mod.rank_profile(
        f, sorted(table), samples=int(problem["samples"]), seed=int(problem["seed"])
    )
    if replay != table:
        return _fail("rankprofile", "seeded replay produced a different table")
    return _pass("rankprofile", "table reproduced by seeded replay")


def _verify_reference_witnesses(problem: dict, cert: dict) -> VerifyResult:
    f = lowrank_mod.reference_poly()
    for data in cert["points"]:
        point = MatTuple.from_json(data)
        r = rank(eval_poly(f, point))
        if r != 1:
            return _fail("reference_witnesses", f"witness at n={point.n} has rank {r}")
    if not pi_test(f - NcPoly.one(2), 2):
        return _fail("reference_witnesses", "polynomial minus 1 is not a 2x2 identity")
    return _pass("reference_witnesses", "both rank-1 witnesses and the 2x2 identity re-checked")


def _verify_eval(problem: dict, cert: dict) -> VerifyResult:
    d = int(problem["d"])
    f = parse(problem["polynomial"], d)
    point = MatTuple.from_json(problem["point"])
    value = eval_poly(f, point)
    if _mat_of(cert["value"]) != value:
        return _fail("eval", "recorded value disagrees with exact re-evaluation")
    return _pass("eval", "value reproduced by exact evaluation")


_VERIFIERS = {
    "left_combination": _verify_left_combination,
    "left_witness": _verify_left_witness,
    "hom_combination": _verify_hom_combination,
    "hom_witness": _verify_hom_witness,
    "trace_combination": _verify_trace_combination,
    "trace_not_member": _verify_trace_not_member,
    "span_coefficients": _verify_span_coefficients,
    "span_witness": _verify_span_witness,
    "span_unknown": _verify_span_unknown,
    "composition": _verify_composition,
    "composition_witness": _verify_composition_witness,
    "composition_not_member": _verify_composition_not_member,
    "factorization": _verify_factorization,
    "assoc_yes": _verify_assoc_yes,
    "assoc_no": _verify_assoc_no,
    "assoc_unknown": _verify_assoc_unknown,
    "detzero_yes": _verify_detzero_yes,
    "detzero_no": _verify_detzero_no,
    "detzero_unknown": _verify_detzero_unknown,
    "lowrank_exact": _verify_lowrank_exact,
    "lowrank_report": _verify_lowrank_report,
    "pi_result": _verify_pi_result,
    "classification": _verify_classification,
    "weyl": _verify_weyl,
    "rankprofile": _verify_rankprofile,
    "reference_witnesses": _verify_reference_witnesses,
    "eval": _verify_eval,
}
