"""Integral lattices given by Gram matrices, and formal orthogonal sums of the
standard indecomposables (U, <m>, A_k, D_k, E_6, E_8 and their twists)."""

from __future__ import annotations

import json
import math
import re
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

from . import linalg


class LatticeError(ValueError):
    """Invalid lattice data or violated precondition."""


@dataclass(frozen=True)
class GramLattice:
    """Free Z-module with the symmetric bilinear form given by ``gram``."""

    gram: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        g = tuple(tuple(int(x) for x in row) for row in self.gram)
        n = len(g)
        if any(len(row) != n for row in g):
            raise LatticeError("Gram matrix must be square")
        if any(g[i][j] != g[j][i] for i in range(n) for j in range(i)):
            raise LatticeError("Gram matrix must be symmetric")
        object.__setattr__(self, "gram", g)

    @property
    def rank(self) -> int:
        return len(self.gram)

    def dot(self, x: Sequence[int], y: Sequence[int]) -> int:
        self._check_vector(x)
        self._check_vector(y)
        return sum(xi * gij * yj for xi, row in zip(x, self.gram) if xi for gij, yj in zip(row, y) if yj)

    def norm(self, x: Sequence[int]) -> int:
        return self.dot(x, x)

    def twist(self, sign: int = -1) -> "GramLattice":
        """L(sign): the same module with the form multiplied by sign."""
        return GramLattice(tuple(tuple(sign * x for x in row) for row in self.gram))

    def _check_vector(self, v: Sequence[int]):
        if len(v) != self.rank:
            raise LatticeError(f"vector of length {len(v)} in a lattice of rank {self.rank}")

    def to_json(self) -> str:
        return json.dumps(gram_to_jsonable(self))

    @classmethod
    def from_json(cls, text: str) -> "GramLattice":
        return gram_from_jsonable(json.loads(text))


def gram_to_jsonable(lat: GramLattice) -> list[list[str]]:
    return [[str(x) for x in row] for row in lat.gram]


def gram_from_jsonable(rows) -> GramLattice:
    try:
        return GramLattice(tuple(tuple(int(x) for x in row) for row in rows))
    except (TypeError, ValueError) as exc:
        raise LatticeError(f"malformed Gram matrix: {exc}") from exc


# ---------------------------------------------------------------- invariants


@lru_cache(maxsize=4096)
def determinant(lat: GramLattice) -> int:
    return linalg.bareiss_determinant(lat.gram)


@lru_cache(maxsize=4096)
def signature(lat: GramLattice) -> tuple[int, int, int]:
    """(positive, negative, zero) counts of the form over Q."""
    return linalg.congruence_signature(lat.gram)


def is_even(lat: GramLattice) -> bool:
    return all(lat.gram[i][i] % 2 == 0 for i in range(lat.rank))


@lru_cache(maxsize=4096)
def discriminant_group(lat: GramLattice) -> tuple[int, ...]:
    """Invariant factors > 1 of the cokernel of the Gram matrix."""
    if determinant(lat) == 0:
        raise LatticeError("degenerate lattice has an infinite discriminant group")
    return tuple(x for x in linalg.smith_diagonal(lat.gram) if x > 1)


def is_characteristic(lat: GramLattice, h: Sequence[int]) -> bool:
    """h . x == x . x (mod 2) for all x; checking a basis suffices."""
    lat._check_vector(h)
    hg = _image(lat, h)
    return all((hg[i] - lat.gram[i][i]) % 2 == 0 for i in range(lat.rank))


def _image(lat: GramLattice, v: Sequence[int]) -> list[int]:
    return [sum(x * lat.gram[k][j] for k, x in enumerate(v) if x) for j in range(lat.rank)]


def orthogonal_complement(lat: GramLattice, v: Sequence[int]) -> GramLattice:
    """The sublattice {x : x . v = 0}, in an integral kernel basis."""
    lat._check_vector(v)
    if not any(v):
        raise LatticeError("orthogonal complement of the zero vector")
    if math.gcd(*v) != 1:
        raise LatticeError(f"vector {tuple(v)} is not primitive")
    form = _image(lat, v)
    if not any(form):
        raise LatticeError("vector lies in the radical of the form")
    _, basis = linalg.row_kernel(form)
    return GramLattice(tuple(map(tuple, linalg.gram_product(basis, lat.gram))))


def orthogonal_complement_basis(lat: GramLattice, v: Sequence[int]) -> list[list[int]]:
    """Kernel basis used by :func:`orthogonal_complement` (rows, ambient coordinates)."""
    _, basis = linalg.row_kernel(_image(lat, v))
    return basis


def unimodular_transform_check(lat: GramLattice, t: Sequence[Sequence[int]]) -> GramLattice:
    """T^T G T for a unimodular integer matrix T."""
    t = [list(map(int, r)) for r in t]
    if len(t) != lat.rank or any(len(r) != lat.rank for r in t):
        raise LatticeError("transform has the wrong shape")
    if abs(linalg.bareiss_determinant(t)) != 1:
        raise LatticeError("transform is not unimodular")
    out = linalg.mat_mul(linalg.transpose(t), linalg.mat_mul([list(r) for r in lat.gram], t))
    return GramLattice(tuple(map(tuple, out)))


def direct_sum(parts: Iterable[GramLattice]) -> GramLattice:
    parts = list(parts)
    n = sum(p.rank for p in parts)
    rows = [[0] * n for _ in range(n)]
    off = 0
    for p in parts:
        for i, row in enumerate(p.gram):
            rows[off + i][off : off + p.rank] = row
        off += p.rank
    return GramLattice(tuple(map(tuple, rows)))


def combine_invariant_factors(groups: Iterable[tuple[Sequence[int], int]]) -> tuple[int, ...]:
    """Invariant factors of a direct sum of finite abelian groups.

    ``groups`` yields (invariant factors, multiplicity) pairs.  The primary
    parts of all summands are pooled prime by prime and reassembled.
    """
    primary: dict[int, Counter] = {}
    for factors, mult in groups:
        if mult == 0:
            continue
        for f in factors:
            for p, k in _factorize(f).items():
                primary.setdefault(p, Counter())[k] += mult
    if not primary:
        return ()
    length = max(sum(c.values()) for c in primary.values())
    out = [1] * length
    for p, counts in primary.items():
        exps = sorted(counts.elements(), reverse=True)
        for i, k in enumerate(exps):
            out[length - 1 - i] *= p**k
    return tuple(out)


def _factorize(n: int) -> dict[int, int]:
    n = abs(n)
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


# ---------------------------------------------------------------- components

_E_EDGES = {
    # Bourbaki labelling: chain 1-3-4-5-..., node 2 attached to node 4
    6: [(1, 3), (3, 4), (4, 5), (5, 6), (2, 4)],
    8: [(1, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8), (2, 4)],
}


def _dynkin_gram(rank: int, edges) -> GramLattice:
    g = [[0] * rank for _ in range(rank)]
    for i in range(rank):
        g[i][i] = 2
    for a, b in edges:
        g[a - 1][b - 1] = g[b - 1][a - 1] = -1
    return GramLattice(tuple(map(tuple, g)))


@dataclass(frozen=True, order=True)
class Component:
    """An indecomposable summand.

    ``kind`` is one of "U", "rank1", "A", "D", "E"; ``param`` is the Dynkin
    rank (6 or 8 for E) or the norm m of the generator of <m>.  Sign twists
    live in ``sign``; for U and <m> the sign is always +1 (U(-1) = U and the
    twist of <m> is <-m>).
    """

    kind: str
    param: int = 0
    sign: int = 1

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise LatticeError(f"sign must be +-1, got {self.sign}")
        k, p = self.kind, self.param
        if k == "U" or k == "rank1":
            if self.sign != 1:
                raise LatticeError(f"{k} carries no sign twist")
            if k == "rank1" and p == 0:
                raise LatticeError("<0> is degenerate")
        elif k == "A":
            if p < 1:
                raise LatticeError(f"A_k needs k >= 1, got {p}")
        elif k == "D":
            if p < 3:
                raise LatticeError(f"D_k needs k >= 3, got {p}")
        elif k == "E":
            if p not in (6, 8):
                raise LatticeError(f"only E6 and E8 are supported, got E{p}")
        else:
            raise LatticeError(f"unknown component kind {k!r}")

    @property
    def name(self) -> str:
        if self.kind == "U":
            return "U"
        if self.kind == "rank1":
            return f"<{self.param}>"
        return f"{self.kind}{self.param}"

    @property
    def rank(self) -> int:
        return {"U": 2, "rank1": 1}.get(self.kind, self.param)

    def __str__(self):
        return self.name + ("(-1)" if self.sign == -1 else "")

    def gram(self) -> GramLattice:
        return standard_gram(self)


def U() -> Component:
    return Component("U")


def Rank1(m: int) -> Component:
    return Component("rank1", m)


def A(k: int, sign: int = 1) -> Component:
    return Component("A", k, sign)


def D(k: int, sign: int = 1) -> Component:
    return Component("D", k, sign)


def E6(sign: int = 1) -> Component:
    return Component("E", 6, sign)


def E8(sign: int = 1) -> Component:
    return Component("E", 8, sign)


@lru_cache(maxsize=256)
def standard_gram(tag: Component) -> GramLattice:
    """Standard Gram matrix: Dynkin Cartan matrices for A/D/E, [[0,1],[1,0]]
    for U, [[m]] for <m>.  Twisted tags return the negated matrix."""
    k, p = tag.kind, tag.param
    if k == "U":
        return GramLattice(((0, 1), (1, 0)))
    if k == "rank1":
        return GramLattice(((p,),))
    if k == "A":
        g = _dynkin_gram(p, [(i, i + 1) for i in range(1, p)])
    elif k == "D":
        g = _dynkin_gram(p, [(i, i + 1) for i in range(1, p - 1)] + [(p - 2, p)])
    else:
        g = _dynkin_gram(p, _E_EDGES[p])
    return g if tag.sign == 1 else g.twist()


_TERM = re.compile(r"^(?:(\d+)\*)?(?:(U)|<(-?\d+)>|([ADE])(\d+))(\(-1\))?$")


@dataclass(frozen=True)
class Decomposition:
    """Formal orthogonal sum; ``terms`` holds (component, multiplicity) pairs
    with positive multiplicities, in emission order."""

    terms: tuple[tuple[Component, int], ...] = ()

    def __post_init__(self):
        for comp, mult in self.terms:
            if not isinstance(mult, int) or mult < 0:
                raise LatticeError(f"negative multiplicity {mult} for {comp}")
        object.__setattr__(self, "terms", tuple((c, m) for c, m in self.terms if m))

    @classmethod
    def of(cls, *pairs) -> "Decomposition":
        """Decomposition.of(A(2), (E8(), 2), (U(), 2))."""
        terms = []
        for p in pairs:
            terms.append(p if isinstance(p, tuple) else (p, 1))
        return cls(tuple(terms))

    def __add__(self, other: "Decomposition") -> "Decomposition":
        return Decomposition(self.terms + other.terms)

    @property
    def rank(self) -> int:
        return sum(c.rank * m for c, m in self.terms)

    def multiplicity(self, comp: Component) -> int:
        return sum(m for c, m in self.terms if c == comp)

    def __str__(self):
        if not self.terms:
            return "0"
        return " + ".join((f"{m}*" if m != 1 else "") + str(c) for c, m in self.terms)

    @classmethod
    def parse(cls, text: str) -> "Decomposition":
        text = text.strip()
        if text == "0":
            return cls()
        terms = []
        for raw in text.split(" + "):
            mt = _TERM.match(raw.strip())
            if not mt:
                raise LatticeError(f"cannot parse component {raw!r}")
            mult = int(mt.group(1) or 1)
            sign = -1 if mt.group(6) else 1
            if mt.group(2):
                comp = U()
            elif mt.group(3) is not None:
                comp = Rank1(int(mt.group(3)))
            else:
                comp = Component(mt.group(4), int(mt.group(5)), sign)
            terms.append((comp, mult))
        return cls(tuple(terms))

    def to_jsonable(self) -> list[dict]:
        return [
            {"tag": c.name, "sign": c.sign, "multiplicity": str(m)} for c, m in self.terms
        ]

    @classmethod
    def from_jsonable(cls, items) -> "Decomposition":
        terms = []
        for it in items:
            base = cls.parse(it["tag"]).terms[0][0]
            comp = Component(base.kind, base.param, int(it["sign"]))
            terms.append((comp, int(it["multiplicity"])))
        return cls(tuple(terms))

    def realize(self) -> GramLattice:
        return direct_sum(c.gram() for c, m in self.terms for _ in range(m))

    def invariants(self) -> "LatticeInvariants":
        """Invariants of the realized sum, computed block by block from each
        component's Gram matrix (ranks and signatures add, determinants
        multiply, discriminant groups add)."""
        return LatticeInvariants.combine(
            (lattice_invariants(c.gram()), m) for c, m in self.terms
        )


@dataclass(frozen=True)
class LatticeInvariants:
    rank: int
    signature: tuple[int, int, int]
    determinant: int
    even: bool
    discriminant: tuple[int, ...] = field(default=())

    @classmethod
    def combine(cls, parts: Iterable[tuple["LatticeInvariants", int]]) -> "LatticeInvariants":
        parts = [(inv, m) for inv, m in parts if m]
        return cls(
            rank=sum(inv.rank * m for inv, m in parts),
            signature=tuple(sum(inv.signature[i] * m for inv, m in parts) for i in range(3)),
            determinant=math.prod(inv.determinant**m for inv, m in parts),
            even=all(inv.even for inv, _ in parts),
            discriminant=combine_invariant_factors((inv.discriminant, m) for inv, m in parts),
        )


@lru_cache(maxsize=4096)
def lattice_invariants(lat: GramLattice) -> LatticeInvariants:
    det = determinant(lat)
    return LatticeInvariants(
        rank=lat.rank,
        signature=signature(lat),
        determinant=det,
        even=is_even(lat),
        discriminant=discriminant_group(lat) if det else (),
    )
