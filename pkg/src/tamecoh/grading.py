"""Z^k gradings of S = K[x_1..x_m, y_1..y_n] and their sharpness.

A grading is sharp when every fiber {(a, b) >= 0 : l(a) = g + l'(b)} is
finite. This happens exactly when the cone spanned by the x-degrees and the
negated y-degrees is pointed, and then an integral functional w that is
positive on deg x_i and negative on deg y_j bounds every fiber.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Optional, Sequence

from .cone import has_nonzero_nonneg_kernel, positive_functional

Degree = tuple[int, ...]


class InputError(ValueError):
    """Malformed or inconsistent user input."""


class NotSharpError(InputError):
    """Operation requires a sharp grading."""


def add(a: Sequence[int], b: Sequence[int]) -> Degree:
    return tuple(x + y for x, y in zip(a, b))


def sub(a: Sequence[int], b: Sequence[int]) -> Degree:
    return tuple(x - y for x, y in zip(a, b))


def neg(a: Sequence[int]) -> Degree:
    return tuple(-x for x in a)


def scale(c: int, a: Sequence[int]) -> Degree:
    return tuple(c * x for x in a)


def dot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b))


@dataclass(frozen=True)
class GradingSpec:
    """Degrees of the x- and y-variables in Gamma = Z^k."""

    deg_x: tuple[Degree, ...]
    deg_y: tuple[Degree, ...]

    def __post_init__(self):
        dx = tuple(tuple(int(c) for c in d) for d in self.deg_x)
        dy = tuple(tuple(int(c) for c in d) for d in self.deg_y)
        object.__setattr__(self, "deg_x", dx)
        object.__setattr__(self, "deg_y", dy)
        if not dx or not dy:
            raise InputError("need at least one x-variable and one y-variable")
        k = len(dx[0])
        if k < 1 or any(len(d) != k for d in dx + dy):
            raise InputError("all degrees must have the same positive length")

    @property
    def m(self) -> int:
        return len(self.deg_x)

    @property
    def n(self) -> int:
        return len(self.deg_y)

    @property
    def k(self) -> int:
        return len(self.deg_x[0])

    @property
    def zero(self) -> Degree:
        return (0,) * self.k

    @cached_property
    def sigma(self) -> Degree:
        """deg(x_1 ... x_m y_1 ... y_n)."""
        return add(self.degree_x((1,) * self.m), self.degree_y((1,) * self.n))

    def degree_x(self, xexp: Sequence[int]) -> Degree:
        total = self.zero
        for e, d in zip(xexp, self.deg_x):
            total = add(total, scale(e, d))
        return total

    def degree_y(self, yexp: Sequence[int]) -> Degree:
        total = self.zero
        for e, d in zip(yexp, self.deg_y):
            total = add(total, scale(e, d))
        return total

    def to_json(self) -> dict:
        return {"k": self.k, "deg_x": [list(d) for d in self.deg_x],
                "deg_y": [list(d) for d in self.deg_y]}

    @classmethod
    def from_json(cls, obj) -> "GradingSpec":
        if isinstance(obj, str):
            obj = json.loads(obj)
        try:
            spec = cls(tuple(map(tuple, obj["deg_x"])), tuple(map(tuple, obj["deg_y"])))
        except (KeyError, TypeError) as exc:
            raise InputError(f"bad grading spec: {exc}") from None
        if "k" in obj and obj["k"] != spec.k:
            raise InputError("field k disagrees with the degree vectors")
        return spec

    @classmethod
    def standard(cls, m: int, n: int) -> "GradingSpec":
        """deg x_i = (1, 0), deg y_j = (0, 1)."""
        return cls(((1, 0),) * m, ((0, 1),) * n)

    @classmethod
    def rees(cls, m: int, d: Sequence[int]) -> "GradingSpec":
        """deg x_i = (1, 0), deg y_j = (d_j, 1)."""
        return cls(((1, 0),) * m, tuple((dj, 1) for dj in d))

    @cached_property
    def certificate(self) -> Optional[tuple[int, ...]]:
        """Integral w with w.deg(x_i) >= 1 and w.deg(y_j) <= -1, if sharp."""
        return positive_functional(list(self.deg_x) + [neg(d) for d in self.deg_y])


def degree_of(spec: GradingSpec, xexp: Sequence[int], yexp: Sequence[int]) -> Degree:
    if len(xexp) != spec.m or len(yexp) != spec.n:
        raise InputError(
            f"exponent lengths ({len(xexp)}, {len(yexp)}) do not match ({spec.m}, {spec.n})"
        )
    return add(spec.degree_x(xexp), spec.degree_y(yexp))


def is_sharp(spec: GradingSpec) -> bool:
    """Decide finiteness of all fibers via pointedness of the cone."""
    return not has_nonzero_nonneg_kernel(list(spec.deg_x) + [neg(d) for d in spec.deg_y])


def nonneg_solutions(
    vectors: Sequence[Degree], target: Sequence[int], weights: Sequence[int], budget: int
) -> Iterator[tuple[int, ...]]:
    """All z >= 0 with sum z_i * vectors[i] == target.

    ``weights[i]`` is a positive integer and every solution satisfies
    sum z_i * weights[i] == budget, which makes the search finite.
    """
    nv = len(vectors)
    if budget < 0:
        return
    z = [0] * nv

    def rec(i, rem):
        if i == nv - 1:
            if rem % weights[i]:
                return
            z[i] = rem // weights[i]
            total = tuple(0 for _ in target)
            for zi, v in zip(z, vectors):
                if zi:
                    total = add(total, scale(zi, v))
            if total == tuple(target):
                yield tuple(z)
            return
        for c in range(rem // weights[i] + 1):
            z[i] = c
            yield from rec(i + 1, rem - c * weights[i])
        z[i] = 0

    yield from rec(0, budget)


def fiber_enumerate(spec: GradingSpec, gamma: Sequence[int]) -> list[tuple[Degree, Degree]]:
    """All (a, b) >= 0 with l(a) = gamma + l'(b), in lexicographic order."""
    w = spec.certificate
    if w is None:
        raise NotSharpError("fiber enumeration needs a sharp grading")
    if len(gamma) != spec.k:
        raise InputError("gamma has the wrong length")
    vectors = list(spec.deg_x) + [neg(d) for d in spec.deg_y]
    weights = [dot(w, v) for v in vectors]
    out = [
        (z[: spec.m], z[spec.m:])
        for z in nonneg_solutions(vectors, gamma, weights, dot(w, gamma))
    ]
    return sorted(out)


def fiber_scan(spec: GradingSpec, gamma: Sequence[int], max_total: int) -> list[tuple[Degree, Degree]]:
    """Bounded scan: solutions with |a| + |b| <= max_total. Works for any grading."""
    vectors = list(spec.deg_x) + [neg(d) for d in spec.deg_y]
    found = []
    for budget in range(max_total + 1):
        for z in nonneg_solutions(vectors, gamma, [1] * len(vectors), budget):
            found.append((z[: spec.m], z[spec.m:]))
    return sorted(found)
