"""Local cohomology of graded free complexes over S = K[x, y] in monomial bases.

H^m_P(S) has K-basis x^(-s-1) y^p and H^n_Q(S) has K-basis x^t y^(-q-1)
(s, p, t, q >= 0 exponent vectors). A homogeneous map of free modules acts on
these bases monomial by monomial, so every graded piece of H^m_P(F) for a free
complex F is a finite complex of exact matrices whenever the grading is sharp.

Basis elements of a free module's piece are triples (summand, s, p) for the
P-side and (summand, t, q) for the Q-side.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from typing import Iterable, Optional, Sequence

from .cone import positive_functional
from .grading import (
    Degree,
    GradingSpec,
    InputError,
    NotSharpError,
    add,
    dot,
    neg,
    nonneg_solutions,
    scale,
    sub,
)
from .linalg import Matrix

Exponent = tuple[int, ...]
Monomial = tuple[Exponent, Exponent]
Poly = dict  # Monomial -> coefficient


class HomogeneityError(InputError):
    """A matrix entry is not homogeneous of the degree its position demands."""


# -- polynomials -----------------------------------------------------------

def monomial(xexp: Sequence[int], yexp: Sequence[int], coeff=1) -> Poly:
    return {(tuple(xexp), tuple(yexp)): coeff}


def poly_add(f: Poly, g: Poly) -> Poly:
    out = dict(f)
    for mono, c in g.items():
        v = out.get(mono, 0) + c
        if v:
            out[mono] = v
        else:
            out.pop(mono, None)
    return out


def poly_mul(f: Poly, g: Poly) -> Poly:
    out: Poly = {}
    for (ax, ay), a in f.items():
        for (bx, by), b in g.items():
            mono = (add(ax, bx), add(ay, by))
            v = out.get(mono, 0) + a * b
            if v:
                out[mono] = v
            else:
                out.pop(mono, None)
    return out


def _parse_coeff(c):
    if isinstance(c, str):
        c = Fraction(c)
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


def _coeff_json(c):
    if isinstance(c, Fraction) and c.denominator != 1:
        return str(c)
    return int(c)


# -- free modules and maps -------------------------------------------------

@dataclass(frozen=True)
class FreeModule:
    """The module of rank len(shifts): direct sum of S(-a) over a in shifts."""

    shifts: tuple[Degree, ...]

    @property
    def rank(self) -> int:
        return len(self.shifts)


@dataclass
class PolyMap:
    """A homogeneous degree-zero map ⊕S(-a_u) -> ⊕S(-b_t).

    ``entries[t][u]`` is the polynomial sending summand u of the source to
    summand t of the target; it must be homogeneous of degree a_u - b_t.
    """

    spec: GradingSpec
    source: tuple[Degree, ...]
    target: tuple[Degree, ...]
    entries: list

    def __post_init__(self):
        self.source = tuple(tuple(a) for a in self.source)
        self.target = tuple(tuple(b) for b in self.target)
        if len(self.entries) != len(self.target) or any(
            len(row) != len(self.source) for row in self.entries
        ):
            raise InputError("matrix shape does not match source/target ranks")
        spec = self.spec
        for t, row in enumerate(self.entries):
            for u, f in enumerate(row):
                want = sub(self.source[u], self.target[t])
                for (xe, ye), c in f.items():
                    if len(xe) != spec.m or len(ye) != spec.n:
                        raise InputError("exponent vector of the wrong length")
                    if min(xe + ye) < 0:
                        raise InputError("negative exponent in a polynomial entry")
                    got = add(spec.degree_x(xe), spec.degree_y(ye))
                    if got != want:
                        raise HomogeneityError(
                            f"entry ({t},{u}) term {xe},{ye} has degree {got}, expected {want}"
                        )

    def compose(self, first: "PolyMap") -> "PolyMap":
        """self ∘ first."""
        if first.target != self.source:
            raise InputError("maps are not composable")
        entries = []
        for t in range(len(self.target)):
            row = []
            for u in range(len(first.source)):
                acc: Poly = {}
                for v in range(len(self.source)):
                    acc = poly_add(acc, poly_mul(self.entries[t][v], first.entries[v][u]))
                row.append(acc)
            entries.append(row)
        return PolyMap(self.spec, first.source, self.target, entries)

    def is_zero(self) -> bool:
        return all(not f for row in self.entries for f in row)

    def to_json(self) -> list:
        return [
            [
                [{"coeff": _coeff_json(c), "xexp": list(xe), "yexp": list(ye)}
                 for (xe, ye), c in sorted(f.items())]
                for f in row
            ]
            for row in self.entries
        ]

    @classmethod
    def from_json(cls, spec, source, target, obj) -> "PolyMap":
        entries = []
        for row in obj:
            new_row = []
            for terms in row:
                f: Poly = {}
                for term in terms:
                    f = poly_add(f, monomial(term["xexp"], term["yexp"], _parse_coeff(term["coeff"])))
                new_row.append(f)
            entries.append(new_row)
        return cls(spec, source, target, entries)


def identity_map(spec: GradingSpec, shifts: Sequence[Degree]) -> PolyMap:
    shifts = tuple(tuple(a) for a in shifts)
    one = monomial((0,) * spec.m, (0,) * spec.n)
    entries = [[dict(one) if t == u else {} for u in range(len(shifts))]
               for t in range(len(shifts))]
    return PolyMap(spec, shifts, shifts, entries)


def multiplication_map(spec: GradingSpec, f: Poly, target_shift: Optional[Degree] = None) -> PolyMap:
    """S(-a) -> S(-b) given by multiplication with a homogeneous f, b = target_shift."""
    b = tuple(target_shift) if target_shift is not None else spec.zero
    degs = {add(spec.degree_x(xe), spec.degree_y(ye)) for xe, ye in f}
    if len(degs) != 1:
        raise HomogeneityError("f is not homogeneous")
    a = add(b, degs.pop())
    return PolyMap(spec, (a,), (b,), [[dict(f)]])


def dual_map(phi: PolyMap) -> PolyMap:
    """Hom(-, S(-sigma)) applied to phi: transpose with shifts a -> sigma - a."""
    sigma = phi.spec.sigma
    entries = [[dict(phi.entries[t][u]) for t in range(len(phi.target))]
               for u in range(len(phi.source))]
    return PolyMap(
        phi.spec,
        tuple(sub(sigma, b) for b in phi.target),
        tuple(sub(sigma, a) for a in phi.source),
        entries,
    )


# -- cohomology pieces -----------------------------------------------------

@dataclass(frozen=True)
class CohPiece:
    basis: tuple[tuple[int, Exponent, Exponent], ...]

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def index(self) -> dict:
        return {b: i for i, b in enumerate(self.basis)}


def _require_sharp(spec: GradingSpec):
    if spec.certificate is None:
        raise NotSharpError("the grading is not sharp")


def _fiber(spec: GradingSpec, gamma: Degree):
    w = spec.certificate
    vectors = list(spec.deg_x) + [neg(d) for d in spec.deg_y]
    weights = [dot(w, v) for v in vectors]
    for z in nonneg_solutions(vectors, gamma, weights, dot(w, gamma)):
        yield z[: spec.m], z[spec.m:]


@lru_cache(maxsize=None)
def _hp_single(spec: GradingSpec, shift: Degree, gamma: Degree):
    target = sub(sub(shift, gamma), spec.degree_x((1,) * spec.m))
    return tuple(sorted(_fiber(spec, target)))


@lru_cache(maxsize=None)
def _hq_single(spec: GradingSpec, shift: Degree, gamma: Degree):
    target = add(sub(gamma, shift), spec.degree_y((1,) * spec.n))
    return tuple(sorted(_fiber(spec, target)))


def hp_basis(spec: GradingSpec, shift: Sequence[int], gamma: Sequence[int]) -> CohPiece:
    """Basis of H^m_P(S(-shift))_gamma: all x^(-s-1) y^p of degree gamma - shift."""
    _require_sharp(spec)
    return CohPiece(tuple((0, s, p) for s, p in _hp_single(spec, tuple(shift), tuple(gamma))))


def hq_basis(spec: GradingSpec, shift: Sequence[int], gamma: Sequence[int]) -> CohPiece:
    """Basis of H^n_Q(S(-shift))_gamma: all x^t y^(-q-1) of degree gamma - shift."""
    _require_sharp(spec)
    return CohPiece(tuple((0, t, q) for t, q in _hq_single(spec, tuple(shift), tuple(gamma))))


def module_basis(spec: GradingSpec, shifts: Sequence[Degree], gamma: Sequence[int], side: str) -> CohPiece:
    _require_sharp(spec)
    single = {"P": _hp_single, "Q": _hq_single}[side]
    gamma = tuple(gamma)
    return CohPiece(tuple(
        (u, e1, e2) for u, a in enumerate(shifts) for e1, e2 in single(spec, tuple(a), gamma)
    ))


def hp_matrix(phi: PolyMap, gamma: Sequence[int]) -> Matrix:
    """H^m_P(phi)_gamma in the monomial bases (rows: target, columns: source).

    x^(-s-1) y^p * c x^a y^b = c x^(-(s-a)-1) y^(p+b) when a <= s, else 0.
    """
    spec = phi.spec
    src = module_basis(spec, phi.source, gamma, "P")
    tgt = module_basis(spec, phi.target, gamma, "P")
    idx = tgt.index()
    mat = Matrix.zeros(tgt.dimension, src.dimension)
    for col, (u, s, p) in enumerate(src.basis):
        for t in range(len(phi.target)):
            for (a, b), c in phi.entries[t][u].items():
                if all(ai <= si for ai, si in zip(a, s)):
                    mat.rows[idx[(t, sub(s, a), add(p, b))]][col] += c
    return mat


def hq_matrix(phi: PolyMap, gamma: Sequence[int]) -> Matrix:
    """H^n_Q(phi)_gamma in the monomial bases (rows: target, columns: source).

    x^t y^(-q-1) * c x^a y^b = c x^(t+a) y^(-(q-b)-1) when b <= q, else 0.
    """
    spec = phi.spec
    src = module_basis(spec, phi.source, gamma, "Q")
    tgt = module_basis(spec, phi.target, gamma, "Q")
    idx = tgt.index()
    mat = Matrix.zeros(tgt.dimension, src.dimension)
    for col, (u, t_exp, q) in enumerate(src.basis):
        for t in range(len(phi.target)):
            for (a, b), c in phi.entries[t][u].items():
                if all(bi <= qi for bi, qi in zip(b, q)):
                    mat.rows[idx[(t, add(t_exp, a), sub(q, b))]][col] += c
    return mat


def pairing_matrix(spec: GradingSpec, shifts: Sequence[Degree], gamma: Sequence[int]) -> Matrix:
    """d_gamma for ⊕S(-a): H^m_P(F)_gamma -> (H^n_Q(F^v)_{-gamma})^*.

    Rows index the Q-basis of F^v = ⊕S(-(sigma - a)) in degree -gamma,
    columns the P-basis of F in degree gamma; x^(-s-1) y^p pairs to 1 with
    x^s y^(-p-1) in the same summand and to 0 with everything else.
    """
    sigma = spec.sigma
    pb = module_basis(spec, shifts, gamma, "P")
    dual_shifts = [sub(sigma, a) for a in shifts]
    qb = module_basis(spec, dual_shifts, neg(gamma), "Q")
    idx = pb.index()
    mat = Matrix.zeros(qb.dimension, pb.dimension)
    for row, key in enumerate(qb.basis):
        col = idx.get(key)
        if col is not None:
            mat.rows[row][col] = 1
    return mat


def pairing_check(phi: PolyMap, gamma: Sequence[int], char: int = 0) -> bool:
    """d_{gamma-b} ∘ H^m_P(phi)_gamma == H^n_Q(phi^v)_{-gamma}^* ∘ d_{gamma-a}."""
    _require_sharp(phi.spec)
    gamma = tuple(gamma)
    d_src = pairing_matrix(phi.spec, phi.source, gamma)
    d_tgt = pairing_matrix(phi.spec, phi.target, gamma)
    if not (d_src.is_permutation() and d_tgt.is_permutation()):
        return False
    left = d_tgt @ hp_matrix(phi, gamma)
    right = hq_matrix(dual_map(phi), neg(gamma)).T @ d_src
    return left.equals(right, char)


# -- complexes -------------------------------------------------------------

@dataclass
class FreeComplex:
    """F_r -> ... -> F_1 -> F_0 with ``maps[i-1]`` = d_i : F_i -> F_(i-1)."""

    spec: GradingSpec
    modules: list
    maps: list

    def __post_init__(self):
        self.modules = [tuple(tuple(a) for a in mod) for mod in self.modules]
        if len(self.maps) != max(len(self.modules) - 1, 0):
            raise InputError("need exactly one map between consecutive modules")
        for i, d in enumerate(self.maps, start=1):
            if d.source != self.modules[i] or d.target != self.modules[i - 1]:
                raise InputError(f"d_{i} does not go from F_{i} to F_{i - 1}")
        for i in range(1, len(self.maps)):
            if not self.maps[i - 1].compose(self.maps[i]).is_zero():
                raise InputError(f"d_{i} ∘ d_{i + 1} is not zero")

    @property
    def length(self) -> int:
        return len(self.modules) - 1

    def to_json(self) -> dict:
        return {
            "spec": self.spec.to_json(),
            "modules": [{"shifts": [list(a) for a in mod]} for mod in self.modules],
            "maps": [d.to_json() for d in self.maps],
        }

    @classmethod
    def from_json(cls, obj) -> "FreeComplex":
        if isinstance(obj, str):
            obj = json.loads(obj)
        try:
            spec = GradingSpec.from_json(obj["spec"])
            modules = [tuple(tuple(a) for a in mod["shifts"]) for mod in obj["modules"]]
            maps = [
                PolyMap.from_json(spec, modules[i], modules[i - 1], m)
                for i, m in enumerate(obj.get("maps", []), start=1)
            ]
        except (KeyError, TypeError, IndexError) as exc:
            raise InputError(f"bad complex: {exc!r}") from None
        return cls(spec, modules, maps)


def dual_complex_maps(cx: FreeComplex) -> list:
    """The maps d_i^v : F_(i-1)^v -> F_i^v of the dual cochain complex."""
    return [dual_map(d) for d in cx.maps]


def _hp_chain(cx: FreeComplex, gamma: Degree, char: int):
    dims = [module_basis(cx.spec, mod, gamma, "P").dimension for mod in cx.modules]
    ranks = [hp_matrix(d, gamma).rank(char) for d in cx.maps]  # ranks[i-1] = rank d_i
    return dims, ranks


def chain_homology(cx: FreeComplex, gamma: Sequence[int], char: int = 0) -> list[int]:
    """dim H_j(H^m_P(F))_gamma for j = 0..r."""
    _require_sharp(cx.spec)
    dims, ranks = _hp_chain(cx, tuple(gamma), char)
    r = cx.length
    out = []
    for j in range(r + 1):
        rank_out = ranks[j - 1] if j >= 1 else 0
        rank_in = ranks[j] if j < r else 0
        out.append(dims[j] - rank_out - rank_in)
    return out


def dual_cochain_cohomology(cx: FreeComplex, gamma: Sequence[int], char: int = 0) -> list[int]:
    """dim H^j(H^n_Q(F^v))_{-gamma} for j = 0..r, computed on the Q-side."""
    _require_sharp(cx.spec)
    spec = cx.spec
    delta = neg(tuple(gamma))
    sigma = spec.sigma
    dims = [module_basis(spec, [sub(sigma, a) for a in mod], delta, "Q").dimension
            for mod in cx.modules]
    # duals[i-1] : F_(i-1)^v -> F_i^v
    ranks = [hq_matrix(dd, delta).rank(char) for dd in dual_complex_maps(cx)]
    r = cx.length
    out = []
    for j in range(r + 1):
        rank_out = ranks[j] if j < r else 0
        rank_in = ranks[j - 1] if j >= 1 else 0
        out.append(dims[j] - rank_out - rank_in)
    return out


def complex_hp_homology(cx: FreeComplex, i: int, gamma: Sequence[int], char: int = 0) -> int:
    """dim H^i_P(M)_gamma for M = coker d_1, as dim H_(m-i)(H^m_P(F))_gamma.

    F must be a free resolution of M; only d^2 = 0 is checked.
    """
    j = cx.spec.m - i
    if j < 0 or j > cx.length:
        return 0
    return chain_homology(cx, gamma, char)[j]


def verify_complex_duality(cx: FreeComplex, gamma: Sequence[int], char: int = 0) -> bool:
    """H_j(H^m_P(F))_gamma and H^j(H^n_Q(F^v))_{-gamma} have equal dimension for all j."""
    return chain_homology(cx, gamma, char) == dual_cochain_cohomology(cx, gamma, char)


def box(k: int, radius: int) -> Iterable[Degree]:
    return product(range(-radius, radius + 1), repeat=k)


# -- Taylor resolution -----------------------------------------------------

def _lcm(monos: Sequence[Monomial], m: int, n: int) -> Monomial:
    xe, ye = (0,) * m, (0,) * n
    for a, b in monos:
        xe = tuple(max(u, v) for u, v in zip(xe, a))
        ye = tuple(max(u, v) for u, v in zip(ye, b))
    return xe, ye


def _as_monomial(spec: GradingSpec, g) -> Monomial:
    if isinstance(g, dict):
        if len(g) != 1:
            raise InputError("Taylor generators must be monomials")
        ((xe, ye), _), = g.items()
    else:
        xe, ye = g
    xe, ye = tuple(xe), tuple(ye)
    if len(xe) != spec.m or len(ye) != spec.n or min(xe + ye) < 0:
        raise InputError(f"bad monomial generator {g!r}")
    return xe, ye


def taylor_complex(spec: GradingSpec, generators: Sequence) -> FreeComplex:
    """Taylor resolution of S/I for I generated by the given monomials.

    F_k has one summand per k-subset J of the generators, shifted by the
    degree of lcm(J); d(e_J) = sum_i (-1)^i (lcm J / lcm J\\j_i) e_(J\\j_i).
    """
    gens = [_as_monomial(spec, g) for g in generators]
    m, n = spec.m, spec.n
    subsets = [list(combinations(range(len(gens)), k)) for k in range(len(gens) + 1)]
    lcms = {J: _lcm([gens[i] for i in J], m, n) for level in subsets for J in level}
    deg = {J: add(spec.degree_x(lcms[J][0]), spec.degree_y(lcms[J][1])) for J in lcms}
    modules = [tuple(deg[J] for J in level) for level in subsets]
    maps = []
    for k in range(1, len(subsets)):
        pos = {J: i for i, J in enumerate(subsets[k - 1])}
        entries = [[{} for _ in subsets[k]] for _ in subsets[k - 1]]
        for u, J in enumerate(subsets[k]):
            for idx in range(len(J)):
                face = J[:idx] + J[idx + 1:]
                xe = sub(lcms[J][0], lcms[face][0])
                ye = sub(lcms[J][1], lcms[face][1])
                entries[pos[face]][u] = monomial(xe, ye, (-1) ** idx)
        maps.append(PolyMap(spec, modules[k], modules[k - 1], entries))
    return FreeComplex(spec, modules, maps)


# -- brute-force Čech oracle -----------------------------------------------

def _cech_type_cohomology(m: int, gens: Sequence[Monomial], a_rep, b_rep, negative, char):
    """Cohomology of the Čech complex of S/I at one fine degree.

    Each term (S/I)_{x_J} is 0 or K in a fixed multidegree; it is nonzero iff
    J contains all negative coordinates and no generator divides the monomial
    once the variables in J are inverted.
    """
    def alive(J):
        if not negative <= J:
            return False
        for gx, gy in gens:
            if all(gx[j] <= a_rep[j] for j in range(m) if j not in J) and all(
                u <= v for u, v in zip(gy, b_rep)
            ):
                return False
        return True

    levels = [[frozenset(J) for J in combinations(range(m), k)] for k in range(m + 1)]
    live = [[J for J in level if alive(J)] for level in levels]
    ranks = []
    for k in range(m):
        idx = {J: i for i, J in enumerate(live[k + 1])}
        mat = Matrix.zeros(len(live[k + 1]), len(live[k]))
        for col, J in enumerate(live[k]):
            for j in range(m):
                if j in J:
                    continue
                row = idx.get(J | {j})
                if row is not None:
                    mat.rows[row][col] = (-1) ** sum(1 for i in J if i < j)
        ranks.append(mat.rank(char))
    return [len(live[k]) - (ranks[k] if k < m else 0) - (ranks[k - 1] if k else 0)
            for k in range(m + 1)]


def cech_oracle(spec: GradingSpec, generators: Sequence, i: int, gamma: Sequence[int], char: int = 0) -> int:
    """dim H^i_P(S/I)_gamma from the Čech complex on x_1..x_m, without resolutions.

    The Čech complex splits over fine degrees (a, b) in Z^m x N^n. Its shape
    depends on each a_j only through: a_j < 0, the exact value when below the
    largest x_j-exponent e_j among the generators, or a_j >= e_j; likewise for
    b. For each such type with nonzero cohomology the number of fine degrees
    of total degree gamma is counted exactly.
    """
    _require_sharp(spec)
    gens = [_as_monomial(spec, g) for g in generators]
    m, n = spec.m, spec.n
    if i < 0 or i > m:
        return 0
    gamma = tuple(gamma)
    ex = [max((g[0][j] for g in gens), default=0) for j in range(m)]
    ey = [max((g[1][j] for g in gens), default=0) for j in range(n)]
    x_types = [["neg"] + list(range(ex[j])) + ["big"] for j in range(m)]
    y_types = [list(range(ey[j])) + ["big"] for j in range(n)]
    total = 0
    for xt in product(*x_types):
        for yt in product(*y_types):
            negative = frozenset(j for j in range(m) if xt[j] == "neg")
            a_rep = [ex[j] if xt[j] in ("neg", "big") else xt[j] for j in range(m)]
            b_rep = [ey[j] if yt[j] == "big" else yt[j] for j in range(n)]
            h = _cech_type_cohomology(m, gens, a_rep, b_rep, negative, char)[i]
            if h == 0:
                continue
            # a_j = -1 - s_j (neg), a_j = e_j + u_j (big x), b_j = f_j + v_j (big y)
            const = spec.zero
            vectors = []
            for j in range(m):
                if xt[j] == "neg":
                    const = add(const, neg(spec.deg_x[j]))
                    vectors.append(neg(spec.deg_x[j]))
                elif xt[j] == "big":
                    const = add(const, scale(ex[j], spec.deg_x[j]))
                    vectors.append(spec.deg_x[j])
                else:
                    const = add(const, scale(xt[j], spec.deg_x[j]))
            for j in range(n):
                if yt[j] == "big":
                    const = add(const, scale(ey[j], spec.deg_y[j]))
                    vectors.append(spec.deg_y[j])
                else:
                    const = add(const, scale(yt[j], spec.deg_y[j]))
            target = sub(gamma, const)
            if not vectors:
                count = int(target == spec.zero)
            else:
                w = positive_functional(vectors)
                if w is None:
                    raise ArithmeticError(
                        f"infinitely many fine degrees carry cohomology (type {xt}, {yt})"
                    )
                weights = [dot(w, v) for v in vectors]
                count = sum(1 for _ in nonneg_solutions(vectors, target, weights, dot(w, target)))
            total += h * count
    return total
