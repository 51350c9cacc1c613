"""Exact Fourier-Motzkin elimination over the rationals.

Used for two boolean decisions that must never be made in floating point:
whether a polyhedral cone is pointed, and finding an integral linear
functional that is strictly positive on a finite set of vectors.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Optional, Sequence


def _normalize(coeffs, rhs):
    scale = max((abs(c) for c in coeffs), default=Fraction(0))
    if scale == 0:
        return tuple(coeffs), rhs
    return tuple(c / scale for c in coeffs), rhs / scale


def solve_linear_system(
    nvars: int,
    inequalities: Sequence[tuple[Sequence, object]] = (),
    equalities: Sequence[tuple[Sequence, object]] = (),
) -> Optional[list[Fraction]]:
    """Find a rational point with ``a.x >= b`` for every inequality and
    ``a.x == b`` for every equality, or return None if there is none.

    Variables are eliminated one at a time; an equality is used for
    substitution when one involves the variable, otherwise the inequalities
    are combined pairwise. The elimination record is replayed backwards to
    produce a witness point.
    """
    ineqs = [(tuple(Fraction(c) for c in a), Fraction(b)) for a, b in inequalities]
    eqs = [(tuple(Fraction(c) for c in a), Fraction(b)) for a, b in equalities]
    for a, _ in ineqs + eqs:
        if len(a) != nvars:
            raise ValueError("constraint length does not match variable count")

    history = []
    for j in range(nvars):
        pivot = next((e for e in eqs if e[0][j] != 0), None)
        if pivot is not None:
            eqs.remove(pivot)
            pa, pb = pivot
            history.append(("eq", j, pa, pb))

            def subst(row, pa=pa, pb=pb, j=j):
                a, b = row
                f = a[j] / pa[j]
                if f == 0:
                    return row
                return tuple(x - f * y for x, y in zip(a, pa)), b - f * pb

            eqs = [subst(e) for e in eqs]
            ineqs = [subst(e) for e in ineqs]
        else:
            pos = [e for e in ineqs if e[0][j] > 0]
            neg = [e for e in ineqs if e[0][j] < 0]
            rest = [e for e in ineqs if e[0][j] == 0]
            history.append(("fm", j, pos, neg))
            for pa, pb in pos:
                for na, nb in neg:
                    u, v = -na[j], pa[j]
                    rest.append(
                        (tuple(u * x + v * y for x, y in zip(pa, na)), u * pb + v * nb)
                    )
            ineqs = rest

        # drop constant rows after checking them, dedupe the rest
        seen = {}
        for a, b in ineqs:
            if all(c == 0 for c in a):
                if b > 0:
                    return None
                continue
            key = _normalize(a, b)
            seen[key] = (a, b)
        ineqs = list(seen.values())
        kept = []
        for a, b in eqs:
            if all(c == 0 for c in a):
                if b != 0:
                    return None
                continue
            kept.append((a, b))
        eqs = kept

    x = [Fraction(0)] * nvars
    for record in reversed(history):
        kind, j = record[0], record[1]
        if kind == "eq":
            _, _, pa, pb = record
            acc = pb - sum(pa[k] * x[k] for k in range(nvars) if k != j)
            x[j] = acc / pa[j]
        else:
            _, _, pos, neg = record
            lo = [
                (b - sum(a[k] * x[k] for k in range(nvars) if k != j)) / a[j]
                for a, b in pos
            ]
            hi = [
                (b - sum(a[k] * x[k] for k in range(nvars) if k != j)) / a[j]
                for a, b in neg
            ]
            if lo:
                x[j] = max(lo)
            elif hi:
                x[j] = min(hi)
            else:
                x[j] = Fraction(0)
    return x


def has_nonzero_nonneg_kernel(vectors: Sequence[Sequence[int]]) -> bool:
    """True iff some nonzero z >= 0 has sum_i z_i * vectors[i] == 0.

    Decided as feasibility of {sum z_i v_i = 0, sum z_i = 1, z >= 0}.
    """
    vectors = [tuple(v) for v in vectors]
    if not vectors:
        return False
    nv = len(vectors)
    dim = len(vectors[0])
    eqs = [([v[c] for v in vectors], 0) for c in range(dim)]
    eqs.append(([1] * nv, 1))
    ineqs = []
    for i in range(nv):
        row = [0] * nv
        row[i] = 1
        ineqs.append((row, 0))
    return solve_linear_system(nv, ineqs, eqs) is not None


def positive_functional(vectors: Sequence[Sequence[int]]) -> Optional[tuple[int, ...]]:
    """Integral w with w.v >= 1 for every v in ``vectors``, or None.

    By Gordan's alternative such a w exists iff ``has_nonzero_nonneg_kernel``
    is false; the two are computed independently.
    """
    vectors = [tuple(v) for v in vectors]
    if not vectors:
        raise ValueError("need at least one vector")
    dim = len(vectors[0])
    sol = solve_linear_system(dim, [(v, 1) for v in vectors])
    if sol is None:
        return None
    den = lcm(*(q.denominator for q in sol))
    w = tuple(int(q * den) for q in sol)
    # scaling by den >= 1 keeps every w.v >= 1
    assert all(sum(a * b for a, b in zip(w, v)) >= 1 for v in vectors)
    return w
