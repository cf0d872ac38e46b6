"""Exact integer/rational linear algebra on small dense matrices.

Matrices are lists of lists of Python ints.  All routines skip zero entries of
the pivot row, which keeps the sparse Gram matrices of root lattices cheap.
"""

from __future__ import annotations

import math
from fractions import Fraction


def _copy(m):
    return [list(r) for r in m]


def bareiss_determinant(m) -> int:
    """Determinant by fraction-free (Bareiss) elimination."""
    n = len(m)
    if n == 0:
        return 1
    a = _copy(m)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        piv = a[k][k]
        nz = [j for j in range(k + 1, n) if a[k][j] != 0]
        for i in range(k + 1, n):
            aik = a[i][k]
            row = a[i]
            if aik == 0:
                # exact: row entries are divisible by prev after the update
                for j in range(k + 1, n):
                    if row[j]:
                        row[j] = row[j] * piv // prev
                continue
            for j in range(k + 1, n):
                row[j] = row[j] * piv
            for j in nz:
                row[j] -= aik * a[k][j]
            if prev != 1:
                for j in range(k + 1, n):
                    if row[j]:
                        row[j] //= prev
        prev = piv
    return sign * a[n - 1][n - 1]


def congruence_signature(m) -> tuple[int, int, int]:
    """(positive, negative, zero) counts of a symmetric matrix.

    Symmetric Gaussian elimination over Q: each step takes a nonzero diagonal
    pivot and replaces the rest by its Schur complement.  When every remaining
    diagonal entry is zero but some off-diagonal (k, l) is not, the basis
    vector x_k is replaced by x_k + x_l, which makes the (k, k) entry equal to
    2 * m[k][l] != 0.
    """
    n = len(m)
    a = [dict((j, Fraction(x)) for j, x in enumerate(r) if x) for r in m]
    active = set(range(n))
    pos = neg = 0
    while active:
        k = next((i for i in sorted(active) if a[i].get(i)), None)
        if k is None:
            pair = next(
                ((i, j) for i in sorted(active) for j in sorted(a[i]) if j in active and j != i),
                None,
            )
            if pair is None:
                break
            k, l = pair
            # row/column operation x_k <- x_k + x_l
            for j, v in list(a[l].items()):
                if j in active:
                    a[k][j] = a[k].get(j, 0) + v
            diag = a[k].get(k, 0) + a[k].get(l, 0)
            for j, v in list(a[k].items()):
                if j in active and j != k:
                    a[j][k] = v
            a[k][k] = diag
            for j in list(a[k]):
                if a[k][j] == 0:
                    del a[k][j]
            for j in active:
                if j != k and a[j].get(k) == 0:
                    del a[j][k]
        piv = a[k][k]
        active.discard(k)
        if piv > 0:
            pos += 1
        else:
            neg += 1
        col = [(i, v) for i, v in a[k].items() if i in active]
        for i, aik in col:
            f = aik / piv
            row = a[i]
            for j, akj in col:
                nv = row.get(j, 0) - f * akj
                if nv:
                    row[j] = nv
                else:
                    row.pop(j, None)
            row.pop(k, None)
    return pos, neg, n - pos - neg


def smith_diagonal(m) -> list[int]:
    """Invariant factors d_1 | d_2 | ... of the Smith normal form (zeros last)."""
    a = _copy(m)
    rows = len(a)
    cols = len(a[0]) if rows else 0
    diag = []
    for t in range(min(rows, cols)):
        while True:
            # smallest nonzero entry in row t / column t, else anywhere
            cand = [(abs(a[i][t]), i, t) for i in range(t, rows) if a[i][t]]
            cand += [(abs(a[t][j]), t, j) for j in range(t + 1, cols) if a[t][j]]
            if not cand:
                cand = [
                    (abs(a[i][j]), i, j)
                    for i in range(t, rows)
                    for j in range(t, cols)
                    if a[i][j]
                ]
                if not cand:
                    break
            _, pi, pj = min(cand)
            a[t], a[pi] = a[pi], a[t]
            if pj != t:
                for r in a:
                    r[t], r[pj] = r[pj], r[t]
            piv = a[t][t]
            done = True
            prow = a[t]
            pnz = [j for j in range(t + 1, cols) if prow[j]]
            for i in range(t + 1, rows):
                if a[i][t]:
                    q = a[i][t] // piv
                    row = a[i]
                    row[t] -= q * piv
                    for j in pnz:
                        row[j] -= q * prow[j]
                    if row[t]:
                        done = False
            for j in pnz:
                q = a[t][j] // piv
                for i in range(t, rows):
                    if a[i][t]:
                        a[i][j] -= q * a[i][t]
                if a[t][j]:
                    done = False
            if done:
                break
        if t < rows and t < cols and a[t][t]:
            diag.append(abs(a[t][t]))
        else:
            break
    zeros = min(rows, cols) - len(diag)
    # normalize to a divisibility chain
    for i in range(len(diag)):
        for j in range(i + 1, len(diag)):
            g = math.gcd(diag[i], diag[j])
            if g != diag[i]:
                diag[i], diag[j] = g, diag[i] * diag[j] // g
    return diag + [0] * zeros


def row_kernel(w) -> tuple[int, list[list[int]]]:
    """Integral kernel basis of the linear form x -> w . x.

    Column-style extended Euclid sweeping right to left over adjacent pairs,
    i.e. a Hermite reduction of the 1 x n matrix w.  Returns (g, basis) with
    g = +-gcd(w) and len(basis) = n - 1; for w = (1, ..., 1) the basis is the
    chain e_j - e_{j-1}.
    """
    n = len(w)
    w = list(w)
    cols = [[int(i == j) for i in range(n)] for j in range(n)]
    for j in range(n - 1, 0, -1):
        a, b = j - 1, j
        while w[b] != 0:
            if w[a] != 0:
                q = w[b] // w[a]
                w[b] -= q * w[a]
                ca, cb = cols[a], cols[b]
                for i in range(n):
                    if ca[i]:
                        cb[i] -= q * ca[i]
                if w[b] == 0:
                    break
            w[a], w[b] = w[b], w[a]
            cols[a], cols[b] = cols[b], cols[a]
    return w[0], cols[1:]


def gram_product(basis, gram) -> list[list[int]]:
    """B^T G B for basis vectors given as rows of B^T."""
    n = len(gram)
    images = []
    for b in basis:
        nz = [(k, x) for k, x in enumerate(b) if x]
        images.append([sum(x * gram[k][j] for k, x in nz) for j in range(n)])
    supports = [[(k, x) for k, x in enumerate(b) if x] for b in basis]
    r = len(basis)
    out = [[0] * r for _ in range(r)]
    for i in range(r):
        for j in range(i, r):
            v = sum(x * images[j][k] for k, x in supports[i])
            out[i][j] = out[j][i] = v
    return out


def mat_mul(a, b):
    bt = list(zip(*b)) if b else []
    return [[sum(x * y for x, y in zip(r, c)) for c in bt] for r in a]


def transpose(a):
    return [list(c) for c in zip(*a)]
