"""Cohomology-dimension oracles for line bundles on the example varieties.

Each oracle returns the full vector (h^0, ..., h^d). Products are assembled
with the Künneth formula; varieties with trivial canonical bundle satisfy
h^i(G) = h^(d-i)(-G).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt
from typing import Optional, Sequence

from .grading import InputError


class DomainError(InputError):
    """The requested bundle lies outside the oracle's tabulated range."""


@dataclass(frozen=True)
class CohomVector:
    dims: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(int(h) for h in self.dims))
        if not self.dims or min(self.dims) < 0:
            raise ValueError(f"bad cohomology vector {self.dims}")

    @property
    def dim(self) -> int:
        return len(self.dims) - 1

    def __getitem__(self, i: int) -> int:
        return self.dims[i]

    def __iter__(self):
        return iter(self.dims)

    def __len__(self):
        return len(self.dims)

    def euler(self) -> int:
        return sum((-1) ** i * h for i, h in enumerate(self.dims))


def elliptic_h(r: int) -> CohomVector:
    """Bundle L^r on an elliptic curve with L = O(3q)."""
    if r > 0:
        return CohomVector((3 * r, 0))
    if r == 0:
        return CohomVector((1, 1))
    return CohomVector((0, -3 * r))


def abelianT_h(r: int) -> CohomVector:
    """A^r on T = E x E with A = O(b) ⊠ O(b), so (A^2) = 2."""
    if r > 0:
        return CohomVector((r * r, 0, 0))
    if r == 0:
        return CohomVector((1, 2, 1))
    return CohomVector((0, 0, r * r))


def p_power_exponent(n: int, p: int) -> Optional[int]:
    """t with n == p**t (t >= 0), else None."""
    if n < 1:
        return None
    t = 0
    while n % p == 0:
        n //= p
        t += 1
    return t if n == 1 else None


def genus2_h(r: int, s: int, p: int) -> CohomVector:
    """L^r ⊗ M^(-s) on the genus-2 curve C with L = O(q), deg M = 0.

    h^1 follows the table tabulated for s < 0; the rows r < 0 and r >= 3
    do not depend on s and are accepted for any s. h^0 = h^1 + r - 1.
    """
    if r < 0:
        h1 = 1 - r
    elif r >= 3:
        h1 = 0
    elif s >= 0:
        raise DomainError(f"genus-2 table covers s < 0 only (r={r}, s={s})")
    elif r == 0:
        h1 = 1
    elif r == 1:
        h1 = 1 if p_power_exponent(-s, p) is not None else 0
    else:
        h1 = 0
    h0 = h1 + r - 1
    if h0 < 0:
        raise DomainError(f"negative h^0 for r={r}, s={s}")
    return CohomVector((h0, h1))


def genus2_trivial() -> CohomVector:
    """O_C on a genus-2 curve."""
    return CohomVector((1, 2))


# -- Néron-Severi lattice --------------------------------------------------

@dataclass(frozen=True)
class NSLattice:
    gram: tuple[tuple[int, ...], ...]
    names: tuple[str, ...] = ()

    def __post_init__(self):
        g = tuple(tuple(int(c) for c in row) for row in self.gram)
        object.__setattr__(self, "gram", g)
        n = len(g)
        if any(len(row) != n for row in g) or any(
            g[i][j] != g[j][i] for i in range(n) for j in range(n)
        ):
            raise InputError("intersection matrix must be square and symmetric")

    def cls(self, *coords: int) -> "NSClass":
        return NSClass(tuple(coords), self)


@dataclass(frozen=True)
class NSClass:
    coords: tuple[int, ...]
    lattice: NSLattice

    def __post_init__(self):
        if len(self.coords) != len(self.lattice.gram):
            raise InputError("class has the wrong number of coordinates")

    def __add__(self, other: "NSClass") -> "NSClass":
        return NSClass(tuple(a + b for a, b in zip(self.coords, other.coords)), self.lattice)

    def __sub__(self, other: "NSClass") -> "NSClass":
        return self + (-other)

    def __neg__(self) -> "NSClass":
        return NSClass(tuple(-a for a in self.coords), self.lattice)

    def __rmul__(self, c: int) -> "NSClass":
        return NSClass(tuple(c * a for a in self.coords), self.lattice)

    def __mul__(self, other: "NSClass") -> int:
        """Intersection number."""
        g = self.lattice.gram
        return sum(a * g[i][j] * b for i, a in enumerate(self.coords)
                   for j, b in enumerate(other.coords))

    def is_zero(self) -> bool:
        return not any(self.coords)


# Basis C1 = pt x E, C2 = E x pt, diagonal Δ on E x E.
EXE_LATTICE = NSLattice(((0, 1, 1), (1, 0, 1), (1, 1, 0)), ("C1", "C2", "Delta"))


def abelian_surface_h(G: NSClass, polarization: NSClass) -> CohomVector:
    """h^* of a line bundle on an abelian surface from its numerical class.

    Riemann-Roch gives chi = (G^2)/2 and the sign data ((G^2), (G.H)) for an
    ample H decides which single h^i is nonzero. (G^2) = 0 with G != 0 is
    not decided by this data and raises.
    """
    if polarization * polarization <= 0:
        raise InputError("polarization must have positive self-intersection")
    if G.is_zero():
        return CohomVector((1, 2, 1))
    self_int = G * G
    if self_int % 2:
        raise InputError("odd self-intersection is impossible on an abelian surface")
    chi = self_int // 2
    if self_int < 0:
        return CohomVector((0, -chi, 0))
    if self_int == 0:
        raise DomainError(f"(G^2) = 0 for G = {G.coords}: indeterminate by trichotomy")
    deg = G * polarization
    if deg > 0:
        return CohomVector((chi, 0, 0))
    if deg < 0:
        return CohomVector((0, 0, chi))
    raise InputError(f"(G^2) > 0 and (G.H) = 0 contradicts the Hodge index theorem")


def ch_surface_h1(h_coeff: int, d_coeff: int) -> int:
    """h^1(O(aH + bD)) on the abelian surface of the period-two example:
    2 when a = 0 and b is even, 0 otherwise."""
    return 2 if h_coeff == 0 and d_coeff % 2 == 0 else 0


# -- combiners -------------------------------------------------------------

def kunneth(factors: Sequence[CohomVector]) -> CohomVector:
    """Cohomology of an external tensor product: convolve the h-vectors."""
    if not factors:
        raise ValueError("need at least one factor")
    acc = [1]
    for f in factors:
        out = [0] * (len(acc) + len(f) - 1)
        for i, a in enumerate(acc):
            if a:
                for j, b in enumerate(f):
                    out[i + j] += a * b
        acc = out
    return CohomVector(tuple(acc))


def serre_dual_check(v: CohomVector, v_neg: CohomVector) -> bool:
    """h^i(G) == h^(d-i)(-G) for all i, trivial canonical bundle."""
    return len(v) == len(v_neg) and all(
        v[i] == v_neg[v.dim - i] for i in range(len(v))
    )


def floor_div_sqrt2(j: int) -> int:
    """[j / sqrt 2] for j >= 0, exact: the largest r with 2 r^2 <= j^2."""
    if j < 0:
        raise ValueError("j must be nonnegative")
    return isqrt(j * j // 2)


# -- factor bundles --------------------------------------------------------

@dataclass(frozen=True)
class Elliptic:
    r: int

    def h(self) -> CohomVector:
        return elliptic_h(self.r)


@dataclass(frozen=True)
class AbelianT:
    r: int

    def h(self) -> CohomVector:
        return abelianT_h(self.r)


@dataclass(frozen=True)
class GenusTwo:
    r: int
    s: int
    p: int

    def h(self) -> CohomVector:
        return genus2_h(self.r, self.s, self.p)


@dataclass(frozen=True)
class AbelianSurfaceNS:
    cls: NSClass
    polarization: NSClass

    def h(self) -> CohomVector:
        return abelian_surface_h(self.cls, self.polarization)


FactorBundle = Elliptic | AbelianT | GenusTwo | AbelianSurfaceNS


def product_h(factors: Sequence[FactorBundle]) -> CohomVector:
    return kunneth([f.h() for f in factors])
