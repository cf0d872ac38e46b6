"""Lattice structure of the primitive middle cohomology H^n(X, Z)_o.

For X = V_n(d) even-dimensional, with total degree d, e even entries in the
multidegree and middle signature (b+, b-), the primitive lattice is

    <-d> + (s/8) E8 + (t-1) U          if C(n/2 + e, e) is even,
    A_{d-1} + ((s-d)/8) E8 + u U       if it is odd and d <= b+,

with s = b+ - b-, t = min(b+, b-), u = min(b+ - d, b-) and a negative E8
count meaning copies of E8(-1).  When the second form is unavailable but
8 | d, the first form still holds.  The cubic surface (E6) and the
intersections of two quadrics (D_{n+3}) are special.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

from . import hodge
from .hodge import HodgeRow, InvalidInput, MultiDegree, binomial
from .lattice import (
    A,
    D,
    E6,
    E8,
    Decomposition,
    GramLattice,
    LatticeInvariants,
    Rank1,
    U,
    direct_sum,
    is_characteristic,
    is_even,
    lattice_invariants,
    orthogonal_complement,
    signature,
    determinant,
)


class OutsideTheorem(Exception):
    """The input violates the hypotheses under which a decomposition is known."""


class InternalInconsistency(AssertionError):
    """A computed quantity contradicts an invariant that must hold."""


class Branch(str, enum.Enum):
    EVEN = "even"
    ODD = "odd"
    EIGHT_DIVIDES = "eight-divides"
    EXCEPTIONAL = "exceptional"


@dataclass(frozen=True)
class SignatureData:
    b_plus: int
    b_minus: int
    epsilon: int
    d: int

    @property
    def b_n(self) -> int:
        return self.b_plus + self.b_minus

    @property
    def s(self) -> int:
        return self.b_plus - self.b_minus

    @property
    def t(self) -> int:
        return min(self.b_plus, self.b_minus)

    @property
    def u(self) -> Optional[int]:
        if self.b_plus < self.d:
            return None
        return min(self.b_plus - self.d, self.b_minus)


@dataclass(frozen=True)
class ParityClass:
    binom_parity: int

    @property
    def lattice_is_even(self) -> bool:
        return self.binom_parity == 0


def _normalize(degrees) -> MultiDegree:
    if isinstance(degrees, MultiDegree):
        return degrees
    return MultiDegree.normalized(degrees)


def signature_data(degrees, n: int) -> SignatureData:
    """Middle signature from the Hodge row (n = 4k + 2 epsilon).

    b+ collects h^{p,q} with p even, b- those with p odd; epsilon moves one
    unit from b- to b+ when n = 2 (mod 4).
    """
    md = _normalize(degrees)
    return _signature_from_row(hodge.hodge_row(md, n))


def _signature_from_row(row: HodgeRow) -> SignatureData:
    n = row.n
    eps = (n // 2) % 2
    full = row.full
    even_part = sum(full[p] for p in range(0, n + 1, 2))
    odd_part = sum(full[p] for p in range(1, n + 1, 2))
    sig = SignatureData(even_part + eps, odd_part - eps, eps, row.degrees.d)
    if sig.b_minus < 0:
        raise InternalInconsistency(f"negative b- for {row.degrees}, n={n}")
    return sig


def lucas_parity(a: int, b: int) -> int:
    """C(a + b, b) mod 2: odd exactly when a + b has no binary carries."""
    if a < 0 or b < 0:
        raise InvalidInput("lucas_parity needs non-negative arguments")
    return 0 if a & b else 1


def parity_class(degrees, n: int) -> ParityClass:
    md = _normalize(degrees)
    if n % 2:
        raise InvalidInput(f"dimension must be even, got {n}")
    k, e = n // 2, md.e
    direct = binomial(k + e, e) % 2
    if direct != lucas_parity(k, e):
        raise InternalInconsistency(f"binomial parity mismatch for C({k + e},{e})")
    return ParityClass(direct)


@dataclass(frozen=True)
class Check:
    check: str
    passed: bool
    detail: str = ""

    def to_jsonable(self) -> dict:
        return {"check": self.check, "pass": self.passed, "detail": self.detail}

    @classmethod
    def from_jsonable(cls, obj) -> "Check":
        return cls(obj["check"], bool(obj["pass"]), obj.get("detail", ""))


@dataclass(frozen=True)
class DecompositionReport:
    degrees: MultiDegree
    n: int
    hodge: HodgeRow
    signature: SignatureData
    parity: ParityClass
    branch: Branch
    decomposition: Decomposition
    notes: tuple[str, ...] = ()
    verification: tuple[Check, ...] = ()

    def with_verification(self, checks: Sequence[Check]) -> "DecompositionReport":
        return replace(self, verification=tuple(checks))

    # JSON: every integer is a decimal string
    def to_jsonable(self) -> dict:
        sig = self.signature
        return {
            "input": {"degrees": [str(x) for x in self.degrees.degrees], "dim": str(self.n)},
            "d": str(self.degrees.d),
            "e": str(self.degrees.e),
            "hodge": {
                "primitive": [str(x) for x in self.hodge.primitive],
                "full": [str(x) for x in self.hodge.full],
            },
            "b_n": str(sig.b_n),
            "signature": {
                "b_plus": str(sig.b_plus),
                "b_minus": str(sig.b_minus),
                "s": str(sig.s),
                "t": str(sig.t),
                "u": None if sig.u is None else str(sig.u),
                "epsilon": str(sig.epsilon),
            },
            "parity": {
                "binom_parity": str(self.parity.binom_parity),
                "lattice_is_even": self.parity.lattice_is_even,
            },
            "branch": self.branch.value,
            "decomposition": str(self.decomposition),
            "components": self.decomposition.to_jsonable(),
            "notes": list(self.notes),
            "verification": [c.to_jsonable() for c in self.verification],
        }

    @classmethod
    def from_jsonable(cls, obj) -> "DecompositionReport":
        md = MultiDegree(tuple(int(x) for x in obj["input"]["degrees"]))
        n = int(obj["input"]["dim"])
        sig = obj["signature"]
        return cls(
            degrees=md,
            n=n,
            hodge=HodgeRow(md, n, tuple(int(x) for x in obj["hodge"]["primitive"])),
            signature=SignatureData(
                int(sig["b_plus"]), int(sig["b_minus"]), int(sig["epsilon"]), md.d
            ),
            parity=ParityClass(int(obj["parity"]["binom_parity"])),
            branch=Branch(obj["branch"]),
            decomposition=Decomposition.from_jsonable(obj["components"]),
            notes=tuple(obj.get("notes", ())),
            verification=tuple(Check.from_jsonable(c) for c in obj.get("verification", ())),
        )


FOUR_QUADRICS_NOTE = (
    "four quadrics in P^6: rank b_2 - 1 = 77 forces 14*U; "
    "the value 15*U found in the literature is inconsistent with the rank"
)


def _e8_term(count: int) -> tuple:
    return (E8(1 if count >= 0 else -1), abs(count))


def _definite_sign(sig: SignatureData) -> int:
    pos, neg = sig.b_plus - 1, sig.b_minus
    if neg == 0:
        return 1
    if pos == 0:
        return -1
    raise InternalInconsistency(f"exceptional case is not definite: ({pos}, {neg})")


def _even_form(sig: SignatureData) -> Decomposition:
    if sig.s % 8:
        raise InternalInconsistency(f"s = {sig.s} is not divisible by 8")
    return Decomposition.of(Rank1(-sig.d), _e8_term(sig.s // 8), (U(), sig.t - 1))


def _odd_form(sig: SignatureData) -> Decomposition:
    if (sig.s - sig.d) % 8:
        raise InternalInconsistency(f"s - d = {sig.s - sig.d} is not divisible by 8")
    return Decomposition.of(A(sig.d - 1), _e8_term((sig.s - sig.d) // 8), (U(), sig.u))


def decompose(degrees, n: int) -> DecompositionReport:
    """Decomposition of H^n(V_n(d), Z)_o into standard indecomposables.

    Raises OutsideTheorem when no branch applies and InternalInconsistency
    if any divisibility or sign condition that must hold fails.
    """
    md = _normalize(degrees)
    if md.c == 0:
        raise InvalidInput("total degree must be >= 2 (projective space has no primitive middle cohomology)")
    row = hodge.hodge_row(md, n)
    sig = _signature_from_row(row)
    par = parity_class(md, n)
    notes: list[str] = []

    def report(branch, dec):
        return DecompositionReport(md, n, row, sig, par, branch, dec, tuple(notes))

    if md.degrees == (3,) and n == 2:
        return report(Branch.EXCEPTIONAL, Decomposition.of(E6(_definite_sign(sig))))
    if md.degrees == (2, 2):
        return report(Branch.EXCEPTIONAL, Decomposition.of(D(n + 3, _definite_sign(sig))))

    # the quadric has b_n = 2 and is covered by the formulas without the rank guard
    quadric = md.degrees == (2,)
    if not quadric:
        for name, value in (("b+", sig.b_plus), ("b-", sig.b_minus)):
            if value < 2:
                raise OutsideTheorem(f"{name} = {value} < 2 for {md}, n={n}")

    if par.lattice_is_even:
        return report(Branch.EVEN, _even_form(sig))
    if sig.d <= sig.b_plus:
        return report(Branch.ODD, _odd_form(sig))
    if sig.d % 8 == 0:
        if md.degrees == (2, 2, 2, 2) and n == 2:
            notes.append(FOUR_QUADRICS_NOTE)
        return report(Branch.EIGHT_DIVIDES, _even_form(sig))
    raise OutsideTheorem(
        f"odd lattice with d = {sig.d} > b+ = {sig.b_plus} and 8 does not divide d ({md}, n={n})"
    )


def uses_root_lattice_form(report: DecompositionReport) -> bool:
    """True when the decomposition leads with A_{d-1} rather than <-d>."""
    return report.branch == Branch.ODD


def hypersurface_criterion(d: int, n: int) -> bool:
    """Whether the degree-d hypersurface of dimension n gets the A_{d-1} form.

    The cubic surface is special-cased by decompose, so for it the parity
    class decides.
    """
    if d < 2:
        raise InvalidInput(f"degree must be >= 2, got {d}")
    if d == 3 and n == 2:
        return not parity_class((3,), 2).lattice_is_even
    return uses_root_lattice_form(decompose((d,), n))


def hypersurface_closed_form(d: int, n: int) -> bool:
    return d % 2 == 1 or n % 4 == 0


# ---------------------------------------------------------------- witnesses


def _diag(entries) -> GramLattice:
    n = len(entries)
    return GramLattice(tuple(tuple(entries[i] if i == j else 0 for j in range(n)) for i in range(n)))


@dataclass(frozen=True)
class Witness:
    """Explicit primitive vector v of square d in an ambient unimodular lattice
    active (+) rest, with v supported on the active block.

    Because v is orthogonal to ``rest``, its complement is
    v^perp(active) (+) rest.
    """

    branch: Branch
    d: int
    active: GramLattice
    vector: tuple[int, ...]
    core: GramLattice
    rest: Decomposition = field(default_factory=Decomposition)

    @property
    def complement(self) -> GramLattice:
        return direct_sum([self.core, self.rest.realize()])

    def complement_invariants(self) -> LatticeInvariants:
        return LatticeInvariants.combine(
            [(lattice_invariants(self.core), 1), (self.rest.invariants(), 1)]
        )

    def ambient_invariants(self) -> LatticeInvariants:
        return LatticeInvariants.combine(
            [(lattice_invariants(self.active), 1), (self.rest.invariants(), 1)]
        )

    @property
    def ambient(self) -> GramLattice:
        return direct_sum([self.active, self.rest.realize()])


def wall_witness(branch: Branch | str, d: int, rest: Decomposition | None = None) -> Witness:
    """Build the witness vector for one branch.

    even:           active = U with basis (e, f), v = e + (d/2) f
    odd:            active = diag(1, ..., 1) of rank d, v = (1, ..., 1)
    eight-divides:  active = diag(1, -1), v = (d/4 + 1, d/4 - 1)

    ``rest`` is the remaining even unimodular summand of the ambient lattice.
    """
    branch = Branch(branch)
    rest = rest or Decomposition()
    if rest.terms and not rest.invariants().even:
        raise InvalidInput("the passive summand must be even")
    if branch == Branch.EVEN:
        if d < 2 or d % 2:
            raise InvalidInput(f"even-branch witness needs even d >= 2, got {d}")
        active = U().gram()
        v = (1, d // 2)
    elif branch == Branch.ODD:
        if d < 2:
            raise InvalidInput(f"odd-branch witness needs d >= 2, got {d}")
        active = _diag([1] * d)
        v = (1,) * d
    elif branch == Branch.EIGHT_DIVIDES:
        if d < 8 or d % 8:
            raise InvalidInput(f"eight-divides witness needs 8 | d, got {d}")
        active = _diag([1, -1])
        v = (d // 4 + 1, d // 4 - 1)
    else:
        raise InvalidInput(f"no generic witness for branch {branch.value}")
    return _finish_witness(branch, d, active, v, rest)


def _finish_witness(branch, d, active, v, rest) -> Witness:
    if abs(determinant(active)) != 1:
        raise InternalInconsistency("witness ambient is not unimodular")
    if active.norm(v) != d:
        raise InternalInconsistency(f"witness has square {active.norm(v)} != {d}")
    if branch != Branch.EVEN and not is_characteristic(active, v):
        raise InternalInconsistency("odd-lattice witness is not characteristic")
    core = orthogonal_complement(active, v)
    if not is_even(core):
        raise InternalInconsistency("witness complement is not even")
    return Witness(branch, d, active, tuple(v), core, rest)


def del_pezzo_witness(degree: int) -> Witness:
    """Anticanonical class (3, -1, ..., -1) in diag(1, -1^{9-degree}).

    Degree 3 is the cubic surface (complement E6(-1)); degree 4 is the
    intersection of two quadrics in P^4 (complement D5(-1)).
    """
    if not 1 <= degree <= 7:
        raise InvalidInput(f"del Pezzo degree must lie in 1..7, got {degree}")
    r = 9 - degree
    active = _diag([1] + [-1] * r)
    v = (3,) + (-1,) * r
    return _finish_witness(Branch.EXCEPTIONAL, degree, active, v, Decomposition())


def witness_for(report: DecompositionReport) -> Optional[Witness]:
    """Witness matching a report's branch, or None where none is built."""
    sig, md, n = report.signature, report.degrees, report.n
    if report.branch == Branch.EXCEPTIONAL:
        if n == 2 and md.degrees in ((3,), (2, 2)):
            return del_pezzo_witness(sig.d)
        return None
    if report.branch == Branch.EVEN:
        rest = Decomposition.of(_e8_term(sig.s // 8), (U(), sig.t - 1))
        return wall_witness(Branch.EVEN, sig.d, rest)
    if report.branch == Branch.ODD:
        rest = Decomposition.of(_e8_term((sig.s - sig.d) // 8), (U(), sig.u))
        return wall_witness(Branch.ODD, sig.d, rest)
    rest = Decomposition.of(_e8_term(sig.s // 8), (U(), sig.t - 1))
    return wall_witness(Branch.EIGHT_DIVIDES, sig.d, rest)


def eight_divides_witness(report: DecompositionReport) -> Optional[Witness]:
    """The alternative diag(1,-1) witness for odd lattices with 8 | d."""
    sig = report.signature
    if report.parity.lattice_is_even or sig.d % 8 or report.branch == Branch.EXCEPTIONAL:
        return None
    rest = Decomposition.of(_e8_term(sig.s // 8), (U(), sig.t - 1))
    return wall_witness(Branch.EIGHT_DIVIDES, sig.d, rest)
