"""The four bigraded example families and their local cohomology series.

For a family (X, F1, F2) with R_{m,n} = Γ(X, F1^m ⊗ F2^n) and i >= 2,

    dim H^i_Q(R)_n = sum_{m >= 0} h^(i-1)(X, F1^m ⊗ F2^n).

Each family knows how to evaluate h^k(X, F1^m ⊗ F2^n) from its oracles and
which finite window of m can contribute for a given n. Tags:

    A0  abelian surface, F1 = r2*a*l*H, F2 = r2*(D + a*l*H); period-two series
    A1  T x C with a genus-2 curve in characteristic p; non-periodic series
    A2  E^3 with F1 = L^2⊠L^2⊠L^2, F2 = L⊠L⊠L^2; 6j on even j
    A3  E x E with F1 = 9(C1 + 2C2), F2 = 3D + 3F1, D = 3(Δ + C2); tame, ~54√2 j^3
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Iterable, Optional, Sequence

from .geometry import (
    EXE_LATTICE,
    AbelianSurfaceNS,
    AbelianT,
    CohomVector,
    DomainError,
    Elliptic,
    GenusTwo,
    NSClass,
    abelian_surface_h,
    ch_surface_h1,
    floor_div_sqrt2,
    genus2_trivial,
    kunneth,
    p_power_exponent,
    product_h,
)
from .grading import InputError

TAGS = ("A0", "A1", "A2", "A3")


class UnsupportedError(InputError):
    """The family does not support the requested index or quantity."""


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % d for d in range(2, isqrt(p) + 1))


# A3 classes in the basis (C1, C2, Δ)
C1 = EXE_LATTICE.cls(1, 0, 0)
C2 = EXE_LATTICE.cls(0, 1, 0)
DELTA = EXE_LATTICE.cls(0, 0, 1)
A3_F1 = 9 * (C1 + 2 * C2)
A3_D = 3 * (DELTA + C2)
A3_F2 = 3 * A3_D + 3 * A3_F1


@dataclass(frozen=True)
class FamilySpec:
    tag: str
    p: Optional[int] = None
    r2: int = 1
    a: int = 1
    l: int = 1
    allow_any_prime: bool = False

    def __post_init__(self):
        if self.tag not in TAGS:
            raise InputError(f"unknown family {self.tag!r}; expected one of {TAGS}")
        if self.tag == "A0":
            if self.r2 < 1 or self.r2 % 2 == 0:
                raise InputError("A0 needs an odd r2 >= 1")
            if self.a < 1 or self.l < 1:
                raise InputError("A0 needs a >= 1 and l >= 1")
        if self.tag == "A1":
            p = self.p
            if p is None or not _is_prime(p):
                raise InputError(f"A1 needs a prime p, got {p}")
            if not self.allow_any_prime and (p % 3 != 2 or p < 11):
                raise InputError(
                    f"A1 needs p = 2 mod 3 and p >= 11 (got {p}); pass allow_any_prime to override"
                )

    @property
    def index(self) -> int:
        """The cohomological index whose series the family is built for."""
        return 3 if self.tag == "A2" else 2

    @property
    def dim_x(self) -> int:
        return {"A0": 2, "A1": 3, "A2": 3, "A3": 2}[self.tag]

    @property
    def d(self) -> int:
        return self.dim_x + 2

    @property
    def trivial_canonical(self) -> bool:
        return self.tag != "A1"

    @property
    def ch_a(self) -> int:
        """a = p + 1 in family A1."""
        return self.p + 1

    def label(self) -> str:
        if self.tag == "A1":
            return f"A1(p={self.p})"
        if self.tag == "A0":
            return f"A0(r2={self.r2},a={self.a},l={self.l})"
        return self.tag

    # -- oracles on X ------------------------------------------------------

    def bundle(self, m: int, n: int):
        """F1^m ⊗ F2^n as oracle input: factor list, or an NS class (A3)."""
        if self.tag == "A1":
            a = self.ch_a
            e = m * a + n * (1 + a)
            return [AbelianT(e), GenusTwo(e, n, self.p)]
        if self.tag == "A2":
            return [Elliptic(2 * m + n), Elliptic(2 * m + n), Elliptic(2 * m + 2 * n)]
        if self.tag == "A3":
            return [AbelianSurfaceNS(m * A3_F1 + n * A3_F2, A3_F1)]
        raise UnsupportedError("A0 bundles are only known through h^1")

    def cohomology(self, m: int, n: int) -> CohomVector:
        try:
            return product_h(self.bundle(m, n))
        except DomainError as exc:
            raise DomainError(f"{self.label()} at (m, n) = ({m}, {n}): {exc}") from None

    def h(self, k: int, m: int, n: int) -> int:
        """h^k(X, F1^m ⊗ F2^n)."""
        if self.tag == "A0":
            if k != 1:
                raise UnsupportedError("A0 only has an h^1 oracle")
            return ch_surface_h1((m + n) * self.r2 * self.a * self.l, n * self.r2)
        if not 0 <= k <= self.dim_x:
            return 0
        return self.cohomology(m, n)[k]

    def trivial_bundle(self) -> CohomVector:
        if self.tag == "A0":
            return CohomVector((1, 2, 1))
        if self.tag == "A1":
            return kunneth([AbelianT(0).h(), genus2_trivial()])
        return self.cohomology(0, 0)


def _check_index(family: FamilySpec, i: int):
    if i != family.index:
        raise UnsupportedError(f"{family.label()} supports H^{family.index} only, not H^{i}")


def z_window(family: FamilySpec, k: int, n: int) -> list[int]:
    """Finite set of m in Z outside which h^k(F1^m ⊗ F2^n) vanishes."""
    t = family.tag
    if t == "A0" and k == 1:
        # H-coefficient (m+n)*r2*a*l must vanish
        return [-n]
    if t == "A3" and k == 1:
        if n == 0:
            return [0]
        # (G^2) = 324((m + 4n)^2 - n^2/2) < 0 iff |m + 4n| <= [|n|/√2]
        K = floor_div_sqrt2(abs(n))
        return list(range(-4 * n - K, -4 * n + K + 1))
    if t == "A2" and k in (1, 2):
        # unless 2m + n and 2m + 2n have weakly opposite signs, all three
        # exponents share a strict sign and only h^0 or h^3 survives
        return [m for m in range(-abs(n) - 1, abs(n) + 2)
                if min(2 * m + n, 2 * m + 2 * n) <= 0 <= max(2 * m + n, 2 * m + 2 * n)]
    if t == "A1" and k == 1 and n < 0:
        j, a = -n, family.ch_a
        # only r = m*a - j*(1+a) in {0, 1} contributes
        return [(j * (1 + a) + delta) // a for delta in (0, 1) if (j * (1 + a) + delta) % a == 0]
    raise UnsupportedError(f"no certified window for h^{k} of {family.label()} at n={n}")


def support_window(family: FamilySpec, i: int, n: int) -> list[int]:
    """Certified finite set of m >= 0 that can contribute to H^i_Q(R)_n, n < 0."""
    _check_index(family, i)
    if n >= 0:
        raise InputError("support_window is for negative degrees n")
    j = -n
    if family.tag == "A2":
        # h^2 of L^(2m-j) ⊠ L^(2m-j) ⊠ L^(2m-2j) needs 2m - j = 0
        return [j // 2] if j % 2 == 0 else []
    return sorted(m for m in z_window(family, i - 1, n) if m >= 0)


def family_dim(family: FamilySpec, i: int, j: int) -> int:
    """dim_K H^i_Q(R)_{-j} as a window sum of oracle values."""
    if j < 1:
        raise InputError("j must be >= 1")
    return sum(family.h(i - 1, m, -j) for m in support_window(family, i, -j))


def scan_dim(family: FamilySpec, i: int, j: int, m_max: int) -> int:
    """Same sum taken over every m in [0, m_max]; no window reasoning."""
    _check_index(family, i)
    return sum(family.h(i - 1, m, -j) for m in range(m_max + 1))


def a2_serre_flipped(j: int) -> int:
    """sum_{m <= 0} h^1(F1^m ⊗ F2^j) on E^3; m < -j has only h^3."""
    fam = FamilySpec("A2")
    return sum(fam.h(1, m, j) for m in range(-j, 1))


def a3_sigma(j: int) -> int:
    return family_dim(FamilySpec("A3"), 2, j)


def closed_form(family: FamilySpec, i: int, j: int) -> int:
    """The proved closed forms for each family's series."""
    _check_index(family, i)
    if j < 1:
        raise InputError("j must be >= 1")
    t = family.tag
    if t == "A0":
        return 2 if j % 2 == 0 else 0
    if t == "A1":
        if j % (family.p + 1) == 0:
            return 1
        e = p_power_exponent(j, family.p)
        return 1 if e is not None and e % 2 == 1 else 0
    if t == "A2":
        return 6 * j if j % 2 == 0 else 0
    K = floor_div_sqrt2(j)
    val = 162 * (j * j * (K + Fraction(1, 2)) - Fraction(K * (K + 1) * (2 * K + 1), 3))
    assert val.denominator == 1
    return int(val)


# -- series and verification ------------------------------------------------

@dataclass
class DimensionSeries:
    family: str
    i: int
    method: str
    entries: list = field(default_factory=list)  # (j, dim), sorted by j

    def to_json(self) -> dict:
        return {"family": self.family, "i": self.i, "method": self.method,
                "entries": [{"dim": d, "j": j} for j, d in self.entries]}

    @classmethod
    def from_json(cls, obj) -> "DimensionSeries":
        try:
            entries = sorted((int(e["j"]), int(e["dim"])) for e in obj["entries"])
            return cls(str(obj["family"]), int(obj["i"]), str(obj.get("method", "window")), entries)
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"bad series: {exc!r}") from None


def _eval(args):
    family, i, j, method = args
    if method == "closed-form":
        return closed_form(family, i, j)
    return family_dim(family, i, j)


def series(family: FamilySpec, i: int, js: Iterable[int], method: str = "window",
           jobs: int = 1) -> DimensionSeries:
    if method not in ("window", "closed-form"):
        raise InputError(f"unknown method {method!r}")
    _check_index(family, i)
    js = sorted(set(js))
    work = [(family, i, j, method) for j in js]
    if jobs > 1 and len(js) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            dims = list(pool.map(_eval, work, chunksize=max(1, len(work) // (4 * jobs))))
    else:
        dims = [_eval(w) for w in work]
    return DimensionSeries(family.label(), i, method, list(zip(js, dims)))


@dataclass
class VerificationReport:
    family: str
    i: int
    checked: int
    mismatches: list  # (j, window, closed_form)

    @property
    def ok(self) -> bool:
        return not self.mismatches


def verify_theorem(family: FamilySpec, i: int, js: Iterable[int]) -> VerificationReport:
    js = list(js)
    bad = []
    for j in js:
        w, c = family_dim(family, i, j), closed_form(family, i, j)
        if w != c:
            bad.append((j, w, c))
    return VerificationReport(family.label(), i, len(js), bad)


@dataclass
class TamenessReport:
    verdict: str  # "tame" | "not-tame" | "consistent-with(...)"
    support: str
    witnesses: list


def tameness_classify(family: FamilySpec, i: Optional[int] = None) -> TamenessReport:
    """Verdict from the proved closed form of the family's series."""
    i = family.index if i is None else i
    _check_index(family, i)
    t = family.tag
    if t in ("A0", "A2"):
        return TamenessReport(
            "not-tame", "nonzero exactly for even j",
            [(j, closed_form(family, i, j)) for j in (1, 2, 3, 4)],
        )
    if t == "A1":
        p = family.p
        return TamenessReport(
            "not-tame",
            f"nonzero exactly for j = 0 mod {p + 1} and j = {p}^t with t odd; "
            "zero for every other j, so neither eventually zero nor eventually nonzero",
            [(j, closed_form(family, i, j)) for j in (p, p + 1, p + 2, p * p, p ** 3)],
        )
    # every term 162 (j^2/2 - r^2) with |r| <= [j/√2] is positive, so sigma(j) > 0
    return TamenessReport(
        "tame", "nonzero for every j >= 1",
        [(j, closed_form(family, i, j)) for j in (1, 2, 3)],
    )


def classify_table(entries: Sequence[tuple[int, int]]) -> TamenessReport:
    """Describe a finite table. Finite data never certifies tameness."""
    nz = [j for j, d in entries if d]
    zero = [j for j, d in entries if not d]
    if not zero:
        pattern = "all-nonzero"
    elif not nz:
        pattern = "all-zero"
    else:
        pattern = "mixed"
    return TamenessReport(f"consistent-with({pattern})", f"{len(nz)} nonzero of {len(entries)}",
                         nz[:5] + zero[:5])


# -- asymptotics -----------------------------------------------------------

SQ_LIMIT = 5832  # (54 √2)^2


def _cmp_limit(y: Fraction) -> int:
    """Sign of y - 54√2, exactly."""
    if y <= 0:
        return -1
    sq = y * y
    return (sq > SQ_LIMIT) - (sq < SQ_LIMIT)


def within_bound(j: int, c: Fraction) -> bool:
    """|sigma(j)/j^3 - 54√2| <= c/j, decided exactly."""
    ratio = Fraction(closed_form(FamilySpec("A3"), 2, j), j ** 3)
    b = Fraction(c) / j
    return _cmp_limit(ratio - b) <= 0 <= _cmp_limit(ratio + b)


@dataclass
class AsymptoteReport:
    j: int
    sigma: int
    ratio: Fraction  # sigma / j^3
    sign: int  # sign of ratio - 54√2
    deviation: tuple  # (lo, hi) rationals bracketing ratio - 54√2
    precision: int

    @property
    def relative_deviation_bound(self) -> Fraction:
        """Upper bound on |ratio - 54√2| / 54√2 (uses 54√2 > 76)."""
        return max(abs(self.deviation[0]), abs(self.deviation[1])) / 76


def asymptotic_bracket(j: int, precision: int = 12) -> AsymptoteReport:
    if j < 1:
        raise InputError("j must be >= 1")
    sigma = closed_form(FamilySpec("A3"), 2, j)
    ratio = Fraction(sigma, j ** 3)
    scale = 10 ** precision
    lo_limit = isqrt(SQ_LIMIT * scale * scale)  # floor(54√2 * 10^P)
    dev = (ratio - Fraction(lo_limit + 1, scale), ratio - Fraction(lo_limit, scale))
    return AsymptoteReport(j, sigma, ratio, _cmp_limit(ratio), dev, precision)


# -- canonical module and duality -----------------------------------------

def omega_dim(family: FamilySpec, i_exp: int, j_exp: int) -> int:
    """dim (ω_R)_{i,j}: h^0(F1^i ⊗ F2^j ⊗ ω_X) for i, j >= 1, else 0."""
    if i_exp < 1 or j_exp < 1:
        return 0
    if family.tag == "A1":
        raise UnsupportedError("ω_X is not trivial on T x C")
    if family.tag == "A0":
        raise UnsupportedError("A0 has no h^0 oracle")
    return family.h(0, i_exp, j_exp)


@dataclass
class DualityReport:
    family: str
    i: int
    rows: list  # (n, lhs, rhs, equal)
    n0: Optional[int]  # first n from which equality holds through the range

    @property
    def ok(self) -> bool:
        return all(r[3] for r in self.rows)


def duality_series_check(family: FamilySpec, i: int, ns: Iterable[int]) -> DualityReport:
    """Compare dim H_P^{d-i}(R)_n with dim H^i_Q(ω_R)_{-n} for n >= 1.

    Left: sum over m in Z of h^{d-i-1}(F1^m ⊗ F2^n).
    Right: sum over m >= 1 of h^{i-1}(F1^m ⊗ F2^-n), ω_X trivial.
    """
    if not family.trivial_canonical:
        raise UnsupportedError(f"{family.label()} has nontrivial ω_X")
    k_left, k_right = family.d - i - 1, i - 1
    if k_left < 1 or i < 2:
        raise UnsupportedError("need 2 <= d - i and i >= 2")
    rows = []
    for n in ns:
        if n < 1:
            raise InputError("n must be >= 1")
        lhs = sum(family.h(k_left, m, n) for m in z_window(family, k_left, n))
        rhs = sum(family.h(k_right, m, -n) for m in z_window(family, k_right, -n) if m >= 1)
        rows.append((n, lhs, rhs, lhs == rhs))
    n0 = None
    for n, _, _, eq in reversed(rows):
        if not eq:
            break
        n0 = n
    return DualityReport(family.label(), i, rows, n0)


# -- Rees regrading ----------------------------------------------------------

def rees_twist_h0(family: FamilySpec, l: int) -> Optional[int]:
    """h^0(F1^l ⊗ F2^-1), or None when no oracle decides it."""
    if family.tag == "A0":
        return None
    return family.h(0, l, -1)


def minimal_rees_shift(family: FamilySpec, limit: int = 100) -> int:
    """Smallest l >= 1 with Γ(X, F1^l ⊗ F2^-1) != 0."""
    for l in range(1, limit + 1):
        h0 = rees_twist_h0(family, l)
        if h0 is None:
            raise UnsupportedError(f"{family.label()}: cannot decide h^0(F1^l ⊗ F2^-1); pass l")
        if h0 > 0:
            return l
    raise ArithmeticError(f"no l <= {limit} found")


def _rees_h(family: FamilySpec, k: int, i: int, j: int, l: int) -> int:
    """h^k(F1^i ⊗ A^j) with A = F2 ⊗ F1^-l, built from the ideal sheaf A."""
    if family.tag == "A3":
        a_cls = A3_F2 - l * A3_F1
        return abelian_surface_h(i * A3_F1 + j * a_cls, A3_F1)[k]
    if family.tag == "A2":
        f1, f2 = (2, 2, 2), (1, 1, 2)
        a_exp = tuple(b - l * a for a, b in zip(f1, f2))
        exps = tuple(i * x + j * y for x, y in zip(f1, a_exp))
        return product_h([Elliptic(e) for e in exps])[k]
    if family.tag == "A1":
        a = family.ch_a
        e = i * a + j * ((1 + a) - l * a)
        return product_h([AbelianT(e), GenusTwo(e, j, family.p)])[k]
    if k != 1:
        raise UnsupportedError("A0 only has an h^1 oracle")
    unit = family.r2 * family.a * family.l
    # F1 = unit*H, A = F2 - l*F1 = r2*D + (1 - l)*unit*H
    return ch_surface_h1(i * unit + j * (1 - l) * unit, j * family.r2)


@dataclass
class ReesTable:
    family: str
    l: int
    cells: list  # (i, j, dim T_ij, dim R_{i-jl, j})
    series: list  # (j, dim H_B(T)_{-j}, dim H_Q(R)_{-j})
    skipped: int  # cells with i < j*l

    @property
    def ok(self) -> bool:
        return all(c[2] == c[3] for c in self.cells) and all(s[1] == s[2] for s in self.series)


def rees_table(family: FamilySpec, l, i_range: Iterable[int], j_range: Iterable[int]) -> ReesTable:
    """T_ij = Γ(X, F1^i ⊗ A^j) against R_{i-jl, j}, plus the local cohomology identity."""
    if l == "auto" or l is None:
        l = minimal_rees_shift(family)
    l = int(l)
    if l < 1:
        raise InputError("l must be >= 1")
    h0 = rees_twist_h0(family, l)
    if h0 is None:
        warnings.warn(f"{family.label()}: h^0(F1^{l} ⊗ F2^-1) != 0 not checked", stacklevel=2)
    elif h0 == 0:
        raise InputError(f"{family.label()}: F1^{l} ⊗ F2^-1 has no sections")
    cells, skipped = [], 0
    i_range, j_range = list(i_range), list(j_range)
    if family.tag != "A0":
        for j in j_range:
            for i in i_range:
                if i < j * l:
                    skipped += 1
                    continue
                cells.append((i, j, _rees_h(family, 0, i, j, l), family.h(0, i - j * l, j)))
    idx = family.index
    lc = []
    for j in j_range:
        if j < 1:
            continue
        # T_{-j} sums over first degrees i >= -j*l, i.e. i = m - j*l with m >= 0
        t_side = sum(_rees_h(family, idx - 1, m - j * l, -j, l)
                     for m in support_window(family, idx, -j))
        lc.append((j, t_side, family_dim(family, idx, j)))
    return ReesTable(family.label(), l, cells, lc, skipped)


def gcm_witness(family: FamilySpec) -> int:
    """h^1(X, O_X); nonzero, so the degree-zero ring is not Cohen-Macaulay."""
    h1 = family.trivial_bundle()[1]
    assert h1 > 0, "expected H^1(X, O_X) != 0"
    return h1
