"""Primitive Hodge numbers of complete intersections.

The primitive Hodge numbers h^{p,q}_o(d) of a smooth complete intersection of
multidegree d are the coefficients of a generating series in Z[[y, z]].  For a
hypersurface of degree d the series is P / (1 - Q) with

    P(y, z) = sum_{i,j >= 0} C(d-1, i+j+1) y^i z^j
    Q(y, z) = sum_{i,j >= 1} C(d, i+j)     y^i z^j

and a multidegree combines hypersurface series over every non-empty subset S
of the degrees, weighted by ((1+y)(1+z))^{|S|-1}.

Everything here is exact Python integer arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Sequence

# series_multi sums 2^c - 1 subset terms
MAX_CODIMENSION = 16


class InvalidInput(ValueError):
    """Raised for arguments outside an operation's domain."""


def binomial(a: int, b: int) -> int:
    """C(a, b), with the convention C(a, b) = 0 for b < 0 or b > a."""
    if b < 0 or b > a:
        return 0
    return math.comb(a, b)


@dataclass(frozen=True)
class MultiDegree:
    """Multidegree (d_1, ..., d_c) of a complete intersection.

    Use :meth:`normalized` to build instances from user input; it strips
    entries equal to 1 (a hyperplane section changes nothing) and sorts the
    rest, since the variety does not depend on the order of its equations.
    """

    degrees: tuple[int, ...]

    def __post_init__(self):
        if any(not isinstance(x, int) or x < 1 for x in self.degrees):
            raise InvalidInput(f"degrees must be integers >= 1, got {self.degrees}")

    @classmethod
    def normalized(cls, degrees: Iterable[int]) -> "MultiDegree":
        degrees = tuple(degrees)
        if not degrees:
            raise InvalidInput("empty multidegree")
        if any(not isinstance(x, int) or x < 1 for x in degrees):
            raise InvalidInput(f"degrees must be integers >= 1, got {degrees}")
        return cls(tuple(sorted(x for x in degrees if x != 1)))

    @property
    def c(self) -> int:
        return len(self.degrees)

    @property
    def d(self) -> int:
        return math.prod(self.degrees)

    @property
    def e(self) -> int:
        return sum(1 for x in self.degrees if x % 2 == 0)

    def __str__(self):
        return "(" + ",".join(map(str, self.degrees)) + ")"


class BivariateSeries:
    """Truncated power series sum a_ij y^i z^j with 0 <= i, j <= order.

    Coefficients are stored densely as a tuple of rows; row i holds the
    coefficients of y^i.  Instances are immutable and arithmetic never
    changes the truncation order.
    """

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs: Sequence[Sequence[int]] | None = None):
        if order < 0:
            raise InvalidInput(f"truncation order must be >= 0, got {order}")
        n = order + 1
        if coeffs is None:
            rows = tuple((0,) * n for _ in range(n))
        else:
            if len(coeffs) != n or any(len(r) != n for r in coeffs):
                raise InvalidInput(f"coefficient array must be {n}x{n}")
            rows = tuple(tuple(int(x) for x in r) for r in coeffs)
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "coeffs", rows)

    def __setattr__(self, name, value):
        raise AttributeError("BivariateSeries is immutable")

    @classmethod
    def from_function(cls, order: int, f) -> "BivariateSeries":
        n = order + 1
        return cls(order, [[f(i, j) for j in range(n)] for i in range(n)])

    @classmethod
    def one(cls, order: int) -> "BivariateSeries":
        return cls.from_function(order, lambda i, j: int(i == j == 0))

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        if 0 <= i <= self.order and 0 <= j <= self.order:
            return self.coeffs[i][j]
        raise IndexError(f"coefficient ({i},{j}) beyond truncation order {self.order}")

    def __eq__(self, other):
        if not isinstance(other, BivariateSeries):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.order, self.coeffs))

    def __repr__(self):
        return f"BivariateSeries(order={self.order}, coeffs={self.coeffs!r})"

    def _check(self, other: "BivariateSeries"):
        if self.order != other.order:
            raise InvalidInput(f"truncation orders differ: {self.order} != {other.order}")

    def __add__(self, other: "BivariateSeries") -> "BivariateSeries":
        self._check(other)
        return BivariateSeries(
            self.order,
            [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.coeffs, other.coeffs)],
        )

    def __sub__(self, other: "BivariateSeries") -> "BivariateSeries":
        self._check(other)
        return BivariateSeries(
            self.order,
            [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(self.coeffs, other.coeffs)],
        )

    def _nonzero(self):
        return [(i, j, a) for i, row in enumerate(self.coeffs) for j, a in enumerate(row) if a]

    def __mul__(self, other: "BivariateSeries") -> "BivariateSeries":
        self._check(other)
        n = self.order + 1
        out = [[0] * n for _ in range(n)]
        rhs = other._nonzero()
        for i, j, a in self._nonzero():
            for k, l, b in rhs:
                if i + k < n and j + l < n:
                    out[i + k][j + l] += a * b
        return BivariateSeries(self.order, out)

    def __pow__(self, k: int) -> "BivariateSeries":
        if k < 0:
            raise InvalidInput("negative powers are not supported; use inverse()")
        result = BivariateSeries.one(self.order)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def inverse(self) -> "BivariateSeries":
        """Multiplicative inverse; requires a constant term of +-1."""
        c0 = self.coeffs[0][0]
        if c0 not in (1, -1):
            raise InvalidInput(f"constant term {c0} is not a unit in Z")
        n = self.order + 1
        terms = [(i, j, a) for i, j, a in self._nonzero() if (i, j) != (0, 0)]
        inv = [[0] * n for _ in range(n)]
        # inv[i][j] = -c0 * sum_{(a,b) != 0} self[a][b] * inv[i-a][j-b]
        for i in range(n):
            for j in range(n):
                acc = c0 if i == j == 0 else 0
                for a, b, x in terms:
                    if a <= i and b <= j:
                        acc -= x * inv[i - a][j - b]
                inv[i][j] = acc * c0
        return BivariateSeries(self.order, inv)

    def is_symmetric(self) -> bool:
        n = self.order + 1
        return all(self.coeffs[i][j] == self.coeffs[j][i] for i in range(n) for j in range(i))


@lru_cache(maxsize=512)
def series_single(d: int, order: int) -> BivariateSeries:
    """Generating series H(d) of primitive Hodge numbers of a degree-d hypersurface."""
    if d <= 1:
        raise InvalidInput(f"hypersurface degree must be >= 2, got {d}")
    p = BivariateSeries.from_function(order, lambda i, j: binomial(d - 1, i + j + 1))
    q = BivariateSeries.from_function(
        order, lambda i, j: binomial(d, i + j) if i >= 1 and j >= 1 else 0
    )
    return p * (BivariateSeries.one(order) - q).inverse()


@lru_cache(maxsize=512)
def series_multi(md: MultiDegree, order: int) -> BivariateSeries:
    """Generating series H(d_1, ..., d_c), summed over all non-empty subsets.

    Cost is 2^c - 1 subset products, so c is capped at MAX_CODIMENSION.
    """
    if md.c == 0:
        raise InvalidInput("empty multidegree")
    if md.c > MAX_CODIMENSION:
        raise InvalidInput(f"codimension {md.c} exceeds the supported maximum {MAX_CODIMENSION}")
    if any(x == 1 for x in md.degrees):
        raise InvalidInput(f"multidegree {md} is not normalized (contains 1)")
    if md.c == 1:
        return series_single(md.degrees[0], order)

    factors = [series_single(x, order) for x in md.degrees]
    twist = BivariateSeries.from_function(order, lambda i, j: int(i <= 1 and j <= 1))
    twist_powers = [BivariateSeries.one(order)]
    for _ in range(md.c - 1):
        twist_powers.append(twist_powers[-1] * twist)

    total = BivariateSeries(order)
    for size in range(1, md.c + 1):
        for subset in combinations(range(md.c), size):
            term = twist_powers[size - 1]
            for idx in subset:
                term = term * factors[idx]
            total = total + term
    return total


@dataclass(frozen=True)
class HodgeRow:
    """Middle Hodge row of V_n(d): primitive and full values, keyed by p."""

    degrees: MultiDegree
    n: int
    primitive: tuple[int, ...]

    def h_o(self, p: int, q: int) -> int:
        if p + q != self.n or not 0 <= p <= self.n:
            raise KeyError((p, q))
        return self.primitive[p]

    def h(self, p: int, q: int) -> int:
        return self.h_o(p, q) + (1 if p == q else 0)

    @property
    def full(self) -> tuple[int, ...]:
        return tuple(self.h(p, self.n - p) for p in range(self.n + 1))

    @property
    def betti(self) -> int:
        return sum(self.full)


def _check_dimension(n: int):
    if not isinstance(n, int) or n < 2 or n % 2:
        raise InvalidInput(f"dimension must be an even integer >= 2, got {n}")


def hodge_row(md: MultiDegree, n: int) -> HodgeRow:
    _check_dimension(n)
    series = series_multi(md, n)
    return HodgeRow(md, n, tuple(series[p, n - p] for p in range(n + 1)))


def euler_oracle(md: MultiDegree, n: int) -> tuple[int, int]:
    """(topological Euler characteristic, middle Betti number) via Chern classes.

    e = d * [t^n] (1+t)^{n+c+1} / prod (1 + d_i t).  For even n every other
    even Betti number is 1 and the odd ones vanish, so b_n = e - n.
    """
    _check_dimension(n)
    # power series in t truncated at t^n
    poly = [binomial(n + md.c + 1, k) for k in range(n + 1)]
    for di in md.degrees:
        # divide by (1 + di t)
        for k in range(1, n + 1):
            poly[k] -= di * poly[k - 1]
    e_top = md.d * poly[n]
    return e_top, e_top - n
