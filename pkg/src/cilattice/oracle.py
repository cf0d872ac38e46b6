"""Independent checks: definite-lattice isometry search and report audits."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import hodge
from .decompose import (
    Branch,
    Check,
    DecompositionReport,
    Witness,
    eight_divides_witness,
    lucas_parity,
    witness_for,
)
from .hodge import binomial
from .linalg import mat_mul
from .lattice import (
    GramLattice,
    LatticeError,
    LatticeInvariants,
    determinant,
    is_even,
    lattice_invariants,
    signature,
)

# audits realize the whole Gram matrix up to this rank as a cross-check
REALIZE_LIMIT = 256


class BudgetExhausted(RuntimeError):
    """The isometry search hit its node or candidate limit before finishing."""


@dataclass(frozen=True)
class IsometrySearchBudget:
    max_rank: int = 8
    max_candidates: int = 200_000
    node_limit: int = 2_000_000


@dataclass(frozen=True)
class IsometryResult:
    isometric: bool
    witness: Optional[tuple[tuple[int, ...], ...]] = None
    nodes: int = 0
    reason: str = ""


def _definiteness(lat: GramLattice) -> int:
    pos, neg, zero = signature(lat)
    if zero == 0 and neg == 0:
        return 1
    if zero == 0 and pos == 0:
        return -1
    return 0


def _ldl(g) -> tuple[list[Fraction], list[list[Fraction]]]:
    """g = U^T diag(D) U with U unit upper triangular, for positive definite g."""
    n = len(g)
    a = [[Fraction(x) for x in row] for row in g]
    diag = []
    u = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for i in range(n):
        piv = a[i][i]
        diag.append(piv)
        for j in range(i + 1, n):
            u[i][j] = a[i][j] / piv
        for k in range(i + 1, n):
            if a[k][i]:
                f = a[k][i] / piv
                for l in range(i + 1, n):
                    a[k][l] -= f * a[i][l]
    return diag, u


def short_vectors(lat: GramLattice, norm: int, limit: int = 200_000) -> list[tuple[int, ...]]:
    """All x with x^T G x == norm in a positive definite lattice.

    Fincke-Pohst enumeration.  Each coordinate range is computed in floating
    point, widened by one on both sides, then filtered with exact rational
    arithmetic, so no vector is missed.  At the top level the range is the
    inverse-diagonal bound |x_i| <= sqrt(norm * (G^-1)_ii).
    """
    n = lat.rank
    g = lat.gram
    diag, u = _ldl(g)
    out: list[tuple[int, ...]] = []
    x = [0] * n
    bound = Fraction(norm)

    def rec(i: int, remaining: Fraction):
        if i < 0:
            if any(x) and sum(x[a] * g[a][b] * x[b] for a in range(n) for b in range(n)) == norm:
                out.append(tuple(x))
                if len(out) > limit:
                    raise BudgetExhausted(f"more than {limit} vectors of norm {norm}")
            return
        center = -sum((u[i][j] * x[j] for j in range(i + 1, n)), Fraction(0))
        radius2 = remaining / diag[i]
        r = math.sqrt(float(radius2))
        c = float(center)
        for xi in range(math.floor(c - r) - 1, math.ceil(c + r) + 2):
            dev = xi - center
            if dev * dev <= radius2:
                x[i] = xi
                rec(i - 1, remaining - diag[i] * dev * dev)
        x[i] = 0

    rec(n - 1, bound)
    return out


def size_reduce(g) -> tuple[list[list[int]], list[list[int]], list[list[int]]]:
    """Greedy pairwise reduction of a positive definite Gram matrix.

    Repeats b_i <- b_i - q b_j with q the nearest integer to (b_i.b_j)/(b_j.b_j)
    while some norm strictly drops.  Returns (reduced gram, P, P^-1) with
    reduced = P^T g P.  Not LLL; it only shortens badly skewed bases.
    """
    n = len(g)
    a = [list(r) for r in g]
    p = [[int(i == j) for j in range(n)] for i in range(n)]
    pinv = [[int(i == j) for j in range(n)] for i in range(n)]
    changed = True
    while changed:
        changed = False
        for i in range(n):
            for j in range(n):
                if i == j or a[j][j] == 0:
                    continue
                q = (2 * a[i][j] + a[j][j]) // (2 * a[j][j])
                if q == 0 or a[i][i] - 2 * q * a[i][j] + q * q * a[j][j] >= a[i][i]:
                    continue
                # basis change b_i <- b_i - q b_j
                for k in range(n):
                    p[k][i] -= q * p[k][j]
                    pinv[j][k] += q * pinv[i][k]
                aii = a[i][i] - 2 * q * a[i][j] + q * q * a[j][j]
                for k in range(n):
                    a[i][k] -= q * a[j][k]
                for k in range(n):
                    a[k][i] = a[i][k]
                a[i][i] = aii
                changed = True
    return a, p, pinv


def definite_isometry(
    g1: GramLattice, g2: GramLattice, budget: IsometrySearchBudget | None = None
) -> IsometryResult:
    """Decide whether two definite lattices are isometric.

    On success the witness T (columns = images of the basis of g1, written in
    the basis of g2) satisfies T^T G2 T = G1.  A negative answer is returned
    only after the backtracking search has been exhausted, which is complete
    because every candidate list is complete.  BudgetExhausted is raised when
    the node limit is hit first.
    """
    budget = budget or IsometrySearchBudget()
    if g1.rank != g2.rank:
        return IsometryResult(False, reason="rank differs")
    if g1.rank > budget.max_rank:
        raise LatticeError(f"rank {g1.rank} exceeds the search limit {budget.max_rank}")
    s1, s2 = _definiteness(g1), _definiteness(g2)
    if s1 == 0 or s2 == 0:
        raise LatticeError("isometry search needs definite lattices")
    if s1 != s2:
        return IsometryResult(False, reason="signature differs")
    if determinant(g1) != determinant(g2):
        return IsometryResult(False, reason="determinant differs")
    if is_even(g1) != is_even(g2):
        return IsometryResult(False, reason="parity differs")
    if g1.rank == 0:
        return IsometryResult(True, witness=())
    if s1 < 0:
        g1, g2 = g1.twist(), g2.twist()

    n = g1.rank
    a, p1, p1inv = size_reduce(g1.gram)
    b, p2, _ = size_reduce(g2.gram)
    reduced2 = GramLattice(tuple(map(tuple, b)))
    cache: dict[int, list] = {}
    for i in range(n):
        m = a[i][i]
        if m not in cache:
            vecs = short_vectors(reduced2, m, budget.max_candidates)
            cache[m] = [(v, [sum(v[k] * b[k][j] for k in range(n)) for j in range(n)]) for v in vecs]
    chosen: list = []
    nodes = 0

    def extend(i: int) -> bool:
        nonlocal nodes
        if i == n:
            return True
        for v, gv in cache[a[i][i]]:
            nodes += 1
            if nodes > budget.node_limit:
                raise BudgetExhausted(f"node limit {budget.node_limit} reached")
            if all(sum(p * q for p, q in zip(gv, w)) == a[i][j] for j, (w, _) in enumerate(chosen)):
                chosen.append((v, gv))
                if extend(i + 1):
                    return True
                chosen.pop()
        return False

    if extend(0):
        found = [[chosen[j][0][i] for j in range(n)] for i in range(n)]
        t = mat_mul(mat_mul(p2, found), p1inv)
        return IsometryResult(True, witness=tuple(map(tuple, t)), nodes=nodes)
    return IsometryResult(False, nodes=nodes, reason="exhaustive search found no isometry")


# ---------------------------------------------------------------- audit


def _compare(expected: LatticeInvariants, got: LatticeInvariants) -> list[str]:
    diffs = []
    if got.rank != expected.rank:
        diffs.append(f"rank {got.rank} != {expected.rank}")
    if got.signature != expected.signature:
        diffs.append(f"signature {got.signature} != {expected.signature}")
    if abs(got.determinant) != abs(expected.determinant):
        diffs.append(f"|det| {abs(got.determinant)} != {abs(expected.determinant)}")
    if got.even != expected.even:
        diffs.append(f"even {got.even} != {expected.even}")
    if got.discriminant != expected.discriminant:
        diffs.append(f"discriminant {got.discriminant} != {expected.discriminant}")
    return diffs


def witness_checks(
    name: str, report: DecompositionReport, wit: Witness, dec_inv: LatticeInvariants
) -> list[Check]:
    sig = report.signature
    out = []
    amb = wit.ambient_invariants()
    amb_problems = []
    if abs(amb.determinant) != 1:
        amb_problems.append(f"ambient det {amb.determinant}")
    if report.branch != Branch.EXCEPTIONAL or report.n == 2:
        if amb.signature != (sig.b_plus, sig.b_minus, 0):
            amb_problems.append(f"ambient signature {amb.signature[:2]} != ({sig.b_plus}, {sig.b_minus})")
    if amb.even != report.parity.lattice_is_even:
        amb_problems.append(f"ambient parity even={amb.even} disagrees with the parity class")
    out.append(Check(f"{name}_ambient", not amb_problems, "; ".join(amb_problems) or "unimodular, matching signature and parity"))

    diffs = _compare(dec_inv, wit.complement_invariants())
    out.append(Check(f"{name}_complement", not diffs, "; ".join(diffs) or f"v = {_short(wit.vector)}; complement agrees on all invariants"))

    # certify the definite part against the leading component
    lead, _ = report.decomposition.terms[0]
    if report.branch == Branch.EXCEPTIONAL or (wit.rest.rank == 0 and wit.core.rank <= 8):
        target = report.decomposition.realize()
        core = wit.complement
    elif wit.core.rank <= 8 and lead.rank == wit.core.rank:
        target, core = lead.gram(), wit.core
    else:
        return out
    if _definiteness(core) == 0 or _definiteness(target) == 0 or core.rank > 8:
        return out
    try:
        res = definite_isometry(core, target)
        out.append(Check(f"{name}_isometry", res.isometric, res.reason or f"isometric to {lead} ({res.nodes} nodes)"))
    except BudgetExhausted as exc:
        out.append(Check(f"{name}_isometry", False, f"budget exhausted: {exc}"))
    return out


def _short(v) -> str:
    if len(v) <= 8:
        return str(tuple(v))
    return f"({v[0]}, ..., {v[-1]}) of length {len(v)}"


def audit(report: DecompositionReport) -> list[Check]:
    """Run the invariant battery on a report; failures are returned, not raised."""
    checks: list[Check] = []
    sig, md, n, dec = report.signature, report.degrees, report.n, report.decomposition
    d = md.d

    _, b_n = hodge.euler_oracle(md, n)
    hodge_b = 1 + sum(report.hodge.primitive)
    checks.append(Check("euler", b_n == hodge_b == sig.b_n, f"b_n: Chern {b_n}, Hodge {hodge_b}, signature {sig.b_n}"))

    inv = dec.invariants()
    checks.append(Check("rank", inv.rank == sig.b_n - 1, f"{inv.rank} vs b_n - 1 = {sig.b_n - 1}"))
    want_sig = (sig.b_plus - 1, sig.b_minus, 0)
    checks.append(Check("signature", inv.signature == want_sig, f"{inv.signature[:2]} vs {want_sig[:2]}"))
    checks.append(Check("determinant", abs(inv.determinant) == d, f"|det| {abs(inv.determinant)} vs d = {d}"))
    checks.append(Check("parity", inv.even, "even" if inv.even else "odd"))
    checks.append(Check("discriminant_group", inv.discriminant == (d,), f"{list(inv.discriminant)} vs [{d}]"))

    if report.parity.lattice_is_even:
        ok, det = sig.s % 8 == 0, f"s = {sig.s} = 0 mod 8"
    else:
        ok, det = (sig.s - d) % 8 == 0, f"s = {sig.s} = d = {d} mod 8"
    checks.append(Check("mod8", ok, det if ok else "violated: " + det))

    k, e = n // 2, md.e
    lp = lucas_parity(k, e)
    checks.append(Check("binomial_parity", lp == binomial(k + e, e) % 2 == report.parity.binom_parity,
                        f"C({k + e},{e}) mod 2 = {lp}"))

    checks.append(_branch_check(report))

    if dec.rank <= REALIZE_LIMIT:
        full = lattice_invariants(dec.realize())
        diffs = _compare(inv, full) + ([] if full.determinant == inv.determinant else ["det sign"])
        checks.append(Check("realized", not diffs, "; ".join(diffs) or f"dense rank-{full.rank} Gram agrees"))

    try:
        wit = witness_for(report)
    except (LatticeError, ValueError, AssertionError) as exc:
        checks.append(Check("witness", False, f"construction failed: {exc}"))
        wit = None
    if wit is not None:
        checks.extend(witness_checks("witness", report, wit, inv))
    alt = eight_divides_witness(report)
    if alt is not None and report.branch != Branch.EIGHT_DIVIDES:
        checks.extend(witness_checks("eight_witness", report, alt, inv))
    return checks


def _branch_check(report: DecompositionReport) -> Check:
    sig, br, dec = report.signature, report.branch, report.decomposition
    d = sig.d
    problems = []
    if br == Branch.EXCEPTIONAL:
        if report.degrees.degrees not in ((3,), (2, 2)):
            problems.append("exceptional branch for a non-exceptional multidegree")
    else:
        if br == Branch.EVEN and not report.parity.lattice_is_even:
            problems.append("even branch for an odd lattice")
        if br in (Branch.ODD, Branch.EIGHT_DIVIDES) and report.parity.lattice_is_even:
            problems.append("odd-lattice branch for an even lattice")
        if br == Branch.ODD and d > sig.b_plus:
            problems.append(f"odd branch with d = {d} > b+ = {sig.b_plus}")
        if br == Branch.EIGHT_DIVIDES and (d % 8 or d <= sig.b_plus):
            problems.append("eight-divides branch taken without need")
        if report.degrees.degrees != (2,) and min(sig.b_plus, sig.b_minus) < 2:
            problems.append("b+ or b- below 2")
        e8_count = sig.s - (d if br == Branch.ODD else 0)
        for comp, mult in dec.terms:
            if comp.kind == "E" and comp.sign != (1 if e8_count > 0 else -1):
                problems.append(f"E8 sign {comp.sign} against count {e8_count // 8}")
    return Check("branch", not problems, "; ".join(problems) or f"{br.value} branch guards hold")


def audit_passed(checks) -> bool:
    return all(c.passed for c in checks)
