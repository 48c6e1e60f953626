"""Exact nullspace of rational matrices."""
from __future__ import annotations

import math
from fractions import Fraction


def _size(q: Fraction) -> int:
    return q.numerator.bit_length() + q.denominator.bit_length()


def _integer_row(row):
    den = 1
    for q in row:
        den = den * q.denominator // math.gcd(den, q.denominator)
    ints = [q.numerator * (den // q.denominator) for q in row]
    g = 0
    for v in ints:
        g = math.gcd(g, v)
    if g > 1:
        ints = [v // g for v in ints]
    return [Fraction(v) for v in ints]


def rref(rows):
    """Reduced row echelon form over Q; returns (matrix, pivot columns).

    Pivots are chosen as the entry of smallest bit size in the column, which
    limits coefficient growth compared to first-nonzero pivoting.
    """
    a = [_integer_row([Fraction(x) for x in r]) for r in rows]
    if not a:
        return [], []
    ncols = len(a[0])
    pivots = []
    r = 0
    for c in range(ncols):
        if r == len(a):
            break
        cand = [i for i in range(r, len(a)) if a[i][c] != 0]
        if not cand:
            continue
        p = min(cand, key=lambda i: _size(a[i][c]))
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                fac = a[i][c]
                a[i] = [x - fac * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return a[:r], pivots


def nullspace(rows, ncols=None):
    """Basis of {v : A v = 0} as lists of Fractions with integer, primitive entries."""
    if ncols is None:
        ncols = len(rows[0])
    if not rows:
        basis = []
        for j in range(ncols):
            v = [Fraction(0)] * ncols
            v[j] = Fraction(1)
            basis.append(v)
        return basis
    red, pivots = rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fcol in free:
        v = [Fraction(0)] * ncols
        v[fcol] = Fraction(1)
        for row, pc in zip(red, pivots):
            v[pc] = -row[fcol]
        basis.append(_integer_row(v))
    return basis
