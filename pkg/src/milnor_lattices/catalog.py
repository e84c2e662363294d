"""Concrete lattices: A_l, D_k, T_pqr and six exceptional families.

Every constructor validates its output against known invariants and raises
CatalogIntegrityError instead of returning unchecked data.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd
from pathlib import Path

from .enumeration import definiteness, gram_isometric, short_vectors
from .errors import (
    CatalogIntegrityError, DataUnavailable, KappaTooLarge, NotFound, UnknownFamily,
)
from .exact import (
    IntPoly, Matrix, canonical_basis, char_poly, cyclotomic, cyclotomic_factor,
    cyclotomic_product, is_saturated_basis, lcm,
)
from .lattice import (
    BilinearLattice, Sublattice, eigenlattice, from_stokes, load_lattice, radical,
    restrict_gram, stabilize_to, stokes_from_monodromy, tensor,
)


def _check(cond: bool, what: str):
    if not cond:
        raise CatalogIntegrityError(what)


# ---------------------------------------------------------------------------
# ADE pieces


def _stokes_from_edges(mu: int, edges, weight: int = -1) -> Matrix:
    s = [[int(i == j) for j in range(mu)] for i in range(mu)]
    for i, j in edges:
        a, b = min(i, j), max(i, j)
        s[a][b] = weight
    return Matrix(s)


@lru_cache(maxsize=None)
def a_series(l: int, n: int = 0) -> BilinearLattice:
    """A_l as a chain; char poly (t^{l+1}−1)/(t−1) at n = 0."""
    if l < 1:
        raise ValueError("A_l needs l >= 1")
    lat = from_stokes(_stokes_from_edges(l, [(i, i + 1) for i in range(l - 1)]), 0, provenance=f"A{l}")
    expected = (IntPoly.monomial(l + 1) - IntPoly([1])) // IntPoly.t_minus(1)
    _check(char_poly(lat.monodromy) == expected, f"A{l}: characteristic polynomial mismatch")
    return stabilize_to(lat, n % 4) if n % 4 else lat


def d_radical_gram(m: int) -> Matrix:
    return Matrix([[-2, 1], [1, -m]])


def _d_edges(k: int, order) -> list[tuple[int, int]]:
    # vertices 1, 2 joined to 3; chain 3, …, k (1-based labels)
    graph = [(1, 3), (2, 3)] + [(v, v + 1) for v in range(3, k)]
    pos = {v: order.index(v) for v in order}
    return [(pos[a], pos[b]) for a, b in graph]


def _d_valid(lat: BilinearLattice, k: int) -> bool:
    sign = -1 if k % 2 else 1
    expected = (IntPoly.monomial(k - 1) - IntPoly([sign])) * IntPoly.t_minus(1)
    if char_poly(lat.monodromy) != expected:
        return False
    if k % 2 == 0:
        rad = radical(lat)
        if rad.rank != 2:
            return False
        g = restrict_gram(rad, "seifert")
        if definiteness(g) != -1 or not gram_isometric(g, d_radical_gram(k // 2))[0]:
            return False
    return True


@lru_cache(maxsize=None)
def d_series(k: int, n: int = 1) -> BilinearLattice:
    """D_k as a curve singularity (n = 1), validated by char poly and radical Gram.

    The standard vertex order is tried first; other orderings are tried in a
    fixed order only if validation fails.
    """
    if k < 4:
        raise ValueError("D_k needs k >= 4")
    labels = list(range(1, k + 1))
    for order in itertools.chain([labels], itertools.permutations(labels)):
        lat = from_stokes(_stokes_from_edges(k, _d_edges(k, list(order))), 1,
                          provenance=f"D{k} order {list(order)}")
        if _d_valid(lat, k):
            return stabilize_to(lat, n % 4) if n % 4 != 1 else lat
    raise CatalogIntegrityError(f"no vertex ordering of D{k} passes validation")


def d_radical_basis(d: BilinearLattice) -> Matrix:
    """Rows b₁, b₂ of Rad(I) of a D_{2m} curve lattice with L-Gram [[−2,1],[1,−m]]."""
    rad = radical(d)
    g = restrict_gram(rad, "seifert")
    ok, x = gram_isometric(g, d_radical_gram(rad.ambient.mu // 2))
    _check(ok, "radical Gram of D_{2m} not isometric to [[-2,1],[1,-m]]")
    return x.T @ rad.basis


# ---------------------------------------------------------------------------
# T_pqr


@dataclass(frozen=True)
class TpqrModel:
    p: int
    q: int
    r: int
    kappa: Fraction
    chi: int
    lattice: BilinearLattice = field(repr=False)
    arms: tuple = field(repr=False)  # 0-based index tuples of the three arms
    b1_tilde: tuple = field(repr=False)
    b2_tilde: tuple = field(repr=False)
    arm_lattices: tuple = field(repr=False)
    eigen_arms: tuple = field(repr=False)
    fixed_lattice: Sublattice = field(repr=False)
    gamma1: tuple | None = field(default=None, repr=False)
    gamma2: tuple | None = field(default=None, repr=False)
    ml_neq1_generators: tuple | None = field(default=None, repr=False)
    ml_neq1: Sublattice | None = field(default=None, repr=False)

    @property
    def name(self) -> str:
        return f"T{self.p}{self.q}{self.r}" if max(self.p, self.q, self.r) < 10 else f"T_{self.p},{self.q},{self.r}"

    @property
    def mu(self) -> int:
        return self.lattice.mu

    @property
    def simple_elliptic(self) -> bool:
        return self.kappa == 1

    def delta(self, i: int) -> tuple:
        """δ_i as a coordinate vector (1-based index)."""
        return tuple(int(k == i - 1) for k in range(self.mu))


def kappa_of(p: int, q: int, r: int) -> Fraction:
    return Fraction(1, p) + Fraction(1, q) + Fraction(1, r)


def tpqr_monodromy(p: int, q: int, r: int) -> Matrix:
    """Block matrix M₁…M₁₀ assembled exactly as the tabulated data."""
    mu = p + q + r - 1
    m = [[0] * mu for _ in range(mu)]
    c1, c2 = mu - 2, mu - 1
    start = 0
    for size in (p, q, r):
        block = range(start, start + size - 1)
        for i in block:
            m[i][start + size - 2] = -1
            if i + 1 < start + size - 1:
                m[i + 1][i] = 1
        m[c1][start] = -1
        m[c2][start] = 1
        m[start][c1] = m[start][c2] = 1
        start += size - 1
    m[c1][c1], m[c1][c2], m[c2][c1], m[c2][c2] = 3, 2, -2, -1
    return Matrix(m)


def _vec(mu: int, entries: dict) -> tuple:
    return tuple(entries.get(k, 0) for k in range(mu))


@lru_cache(maxsize=None)
def t_pqr(p: int, q: int, r: int) -> TpqrModel:
    if not (p >= q >= r >= 2):
        raise ValueError(f"need p >= q >= r >= 2, got ({p},{q},{r})")
    kappa = kappa_of(p, q, r)
    if kappa > 1:
        raise KappaTooLarge(f"κ = {kappa} > 1 for ({p},{q},{r})")
    chi = lcm(p, q, r)
    mu = p + q + r - 1
    mono = tpqr_monodromy(p, q, r)
    stokes = stokes_from_monodromy(mono, 2)
    lat = from_stokes(stokes, 2, provenance=f"T{p}{q}{r} block monodromy")
    _check(lat.monodromy == mono, "Stokes round trip does not reproduce the block monodromy")
    arms = (tuple(range(0, p - 1)), tuple(range(p - 1, p + q - 2)), tuple(range(p + q - 2, mu - 2)))
    b1 = _vec(mu, {mu - 2: 1, mu - 1: -1})
    coeffs: dict[int, int] = {mu - 2: chi}
    for arm, size in zip(arms, (p, q, r)):
        for i, idx in enumerate(arm, start=1):
            coeffs[idx] = chi * (size - i) // size
    b2 = _vec(mu, coeffs)
    _check(gcd(*b2) == 1, "coefficients of b̃₂ are not coprime")
    _check(lat.M(b1) == b1, "M b̃₁ ≠ b̃₁")
    shift = chi * (kappa - 1)
    _check(shift.denominator == 1, "χ(κ−1) not integral")
    _check(lat.M(b2) == tuple(x + int(shift) * y for x, y in zip(b2, b1)), "M b̃₂ ≠ b̃₂ + χ(κ−1) b̃₁")
    gram = Matrix([[lat.L(b1, b1), lat.L(b1, b2)], [lat.L(b2, b1), lat.L(b2, b2)]])
    expected = Matrix([[0, -chi], [chi, chi * chi * (kappa - 1) / 2]])
    _check(gram == expected, f"Gram of (b̃₁, b̃₂) is {gram.tolist()}, expected {expected.tolist()}")
    fixed = Sublattice.from_vectors(lat, [b1, b2])
    _check(fixed.saturated, "(b̃₁, b̃₂) not saturated")
    _check(fixed.same_lattice(eigenlattice(lat, IntPoly.t_minus(1) ** 2)), "(b̃₁, b̃₂) does not span Ml₁,ℤ")
    arm_lats, eigen = [], []
    ident = Matrix.identity(mu)
    for arm in arms:
        vecs = [b1] + [_vec(mu, {i: 1}) for i in arm]
        sub = Sublattice.from_vectors(lat, vecs)
        _check(sub.is_invariant(lat.monodromy), "arm lattice not monodromy invariant")
        arm_lats.append(sub)
        image = [(lat.monodromy - ident) @ v for v in sub.basis.rows]
        eigen.append(Sublattice(lat, canonical_basis(Matrix(image))))
    _check_cycling(lat, arms, b1)
    model = TpqrModel(p, q, r, kappa, chi, lat, arms, b1, b2, tuple(arm_lats), tuple(eigen), fixed)
    if kappa == 1:
        model = _attach_elliptic(model)
    return model


def _check_cycling(lat: BilinearLattice, arms, b1):
    mu = lat.mu
    for arm in arms:
        first = tuple(int(k == arm[0]) + b1[k] for k in range(mu))
        chain = [first] + [_vec(mu, {i: 1}) for i in arm[1:]]
        chain.append(tuple(-int(k in arm) for k in range(mu)))
        for a, b in zip(chain, chain[1:] + chain[:1]):
            _check(lat.M(a) == b, "arm cycling fails")


def _attach_elliptic(model: TpqrModel) -> TpqrModel:
    p, q, r, mu = model.p, model.q, model.r, model.mu
    d = model.delta
    lat = model.lattice

    def comb(*terms):
        out = [0] * mu
        for c, v in terms:
            for k in range(mu):
                out[k] += c * v[k]
        return tuple(out)

    gens = []
    line1 = [comb((1, d(1)), (p - 1, d(2)))]
    line1 += [comb((1, d(i)), (-1, d(i - 1))) for i in range(3, p)]
    line1.append(comb((p, d(2)), (-1, d(mu - 1)), (1, d(mu))))
    gens += line1
    gens += [comb((1, d(p)), (q - 1, d(p + 1)))]
    gens += [comb((1, d(i)), (-1, d(i - 1))) for i in range(p + 2, p + q - 1)]
    gens.append(comb((p // q, d(2)), (-1, d(p + 1))))
    if r >= 3:
        gens += [comb((1, d(p + q - 1)), (r - 1, d(p + q)))]
        gens += [comb((1, d(i)), (-1, d(i - 1))) for i in range(p + q + 1, mu - 1)]
        gens.append(comb((p // r, d(2)), (-1, d(p + q))))
    else:
        # a one-vector arm: its "second" cycle vector is −δ_{μ−2}, hence the plus sign
        gens.append(comb((p // r, d(2)), (1, d(mu - 2))))
    ml_neq1 = Sublattice(lat, canonical_basis(Matrix(gens)))
    _check(ml_neq1.rank == mu - 2, "Ml_{≠1} generators have wrong rank")
    pch = char_poly(lat.monodromy)
    other = pch // (IntPoly.t_minus(1) ** 2)
    _check(ml_neq1.same_lattice(eigenlattice(lat, other)), "Ml_{≠1} generators do not span the eigenlattice")
    full = Matrix(list(ml_neq1.basis.rows) + [d(2), d(mu)])
    _check(full.det() in (1, -1), "Ml ≠ Ml_{≠1} ⊕ ℤδ₂ ⊕ ℤδ_μ")
    g1 = comb((-p, d(2)), (1, d(mu - 1)), (-1, d(mu)))
    _check(comb((1, g1), (p, d(2))) == model.b1_tilde, "b̃₁ ≠ γ₁ + pδ₂")
    coeffs = {mu - 2: p, mu - 1: -p}
    for arm, size in zip(model.arms, (p, q, r)):
        for i, idx in enumerate(arm, start=1):
            coeffs[idx] = p // size * (size - i)
    g2 = _vec(mu, coeffs)
    _check(comb((1, g2), (p, d(mu))) == model.b2_tilde, "b̃₂ ≠ γ₂ + pδ_μ")
    _check(ml_neq1.contains(g1) and ml_neq1.contains(g2), "γ₁, γ₂ not in Ml_{≠1}")
    return TpqrModel(**{**model.__dict__, "gamma1": g1, "gamma2": g2,
                        "ml_neq1_generators": tuple(gens), "ml_neq1": ml_neq1})


ELLIPTIC_TRIPLES = ((3, 3, 3), (4, 4, 2), (6, 3, 2))


def hyperbolic_triples(count: int = 5) -> list[tuple[int, int, int]]:
    """The first ``count`` triples p >= q >= r >= 2 with κ < 1, ordered by (μ, p, q)."""
    out: list[tuple[int, int, int]] = []
    total = 6
    while len(out) < count:
        level = [(p, q, total - p - q) for p in range(2, total) for q in range(2, p + 1)
                 if 2 <= total - p - q <= q and kappa_of(p, q, total - p - q) < 1]
        out += sorted(level)
        total += 1
    return out[:count]


# ---------------------------------------------------------------------------
# exceptional families


@dataclass(frozen=True)
class FamilyData:
    p1: dict
    p2: dict
    tensor: tuple | None  # (l, 2m)
    stabilizer_order: int | None = None  # order of the quasihomogeneous stabilizer
    u_order: int = 1
    radical_gram: tuple | None = None
    full_gram: tuple | None = None


FAMILIES: dict[str, FamilyData] = {
    "Z12": FamilyData({22: 1, 2: 1}, {2: 1}, None, None, 1,
                      ((-4, 1), (1, -3)), ((-4, 1, 3), (1, -3, 2), (3, 2, -5))),
    "Q12": FamilyData({15: 1, 3: 1}, {3: 1}, (2, 6), 3 * 5 * 2, 2),
    "U12": FamilyData({12: 1, 6: 1, 4: 1, 2: 1}, {4: 1, 2: 1}, (3, 4), 4 * 3 * 6, 6),
    "Z18": FamilyData({34: 1, 2: 1}, {2: 1}, None, None, 1,
                      ((-6, 1), (1, -3)), ((-6, 1, 5), (1, -3, 2), (5, 2, -7))),
    "Q16": FamilyData({21: 1, 3: 1}, {3: 1}, (2, 8), 3 * 7 * 2, 2),
    "U16": FamilyData({15: 1, 5: 1}, {5: 1}, (4, 4), 5 * 3 * 6, 6),
}
FAMILY_NAMES = tuple(FAMILIES)


@dataclass(frozen=True)
class ExceptionalModel:
    name: str
    p1: IntPoly
    p2: IntPoly
    p1_factors: dict
    p2_factors: dict
    lattice: BilinearLattice | None = field(default=None, repr=False)
    tensor_factors: tuple | None = None
    factor_lattices: tuple | None = field(default=None, repr=False)  # (A_l, D_2m)
    B3: Sublattice | None = field(default=None, repr=False)
    B3_gram_reference: Matrix | None = field(default=None, repr=False)
    radical_gram: Matrix | None = field(default=None, repr=False)
    full_gram: Matrix | None = field(default=None, repr=False)
    provenance: str = ""

    @property
    def available(self) -> bool:
        return self.lattice is not None

    @property
    def data(self) -> FamilyData:
        return FAMILIES[self.name]

    @property
    def pch_factors(self) -> dict:
        out = dict(self.p1_factors)
        for m, e in self.p2_factors.items():
            out[m] = out.get(m, 0) + e
        return dict(sorted(out.items()))

    def require_lattice(self) -> BilinearLattice:
        if self.lattice is None:
            raise DataUnavailable(f"{self.name}: full Milnor lattice not available")
        return self.lattice


def exceptional(name: str, stokes_file: str | Path | None = None) -> ExceptionalModel:
    """Build one of Z12, Q12, U12, Z18, Q16, U16 (surface singularities, n = 2)."""
    if name not in FAMILIES:
        raise UnknownFamily(f"unknown family {name!r}; choose from {', '.join(FAMILY_NAMES)}")
    if stokes_file is None:
        return _exceptional_builtin(name)
    return _exceptional_external(name, stokes_file)


def _base_model(name: str, **kw) -> ExceptionalModel:
    data = FAMILIES[name]
    p1, p2 = cyclotomic_product(data.p1), cyclotomic_product(data.p2)
    _check((p1 % p2).is_zero(), f"{name}: p₂ does not divide p₁")
    _check(all(e == 1 for e in data.p1.values()), f"{name}: p₁ not squarefree")
    return ExceptionalModel(name, p1, p2, dict(data.p1), dict(data.p2), **kw)


@lru_cache(maxsize=None)
def _exceptional_builtin(name: str) -> ExceptionalModel:
    data = FAMILIES[name]
    if data.tensor is None:
        return _base_model(name, radical_gram=Matrix(data.radical_gram), full_gram=Matrix(data.full_gram),
                           provenance="partial data: radical Gram of the curve singularity only")
    l, two_m = data.tensor
    a, d = a_series(l, 0), d_series(two_m, 1)
    lat = tensor(a, d)
    _check(lat.n == 2, "tensor product is not a surface lattice")
    model = _base_model(name, lattice=lat, tensor_factors=(l, two_m), factor_lattices=(a, d),
                        provenance=f"A{l} ⊗ D{two_m}")
    factors = cyclotomic_factor(char_poly(lat.monodromy))
    _check(factors == model.pch_factors, f"{name}: char poly {factors} does not match {model.pch_factors}")
    b3 = eigenlattice(lat, model.p2)
    _check(b3.rank == 2 * model.p2.degree, f"{name}: B₃ has rank {b3.rank}")
    # basis e_i ⊗ b_j of B₃ with b the reference basis of Rad(D_{2m})
    rb = d_radical_basis(d)
    rows = [tuple(x * y for x in ei for y in bj)
            for ei in Matrix.identity(l).rows for bj in rb.rows]
    tb = Sublattice.from_vectors(lat, rows)
    _check(tb.same_lattice(b3), f"{name}: e_i ⊗ b_j does not span B₃")
    ref = a.seifert.kron(d_radical_gram(two_m // 2))
    _check(restrict_gram(tb, "seifert") == ref, f"{name}: B₃ Gram differs from L_A ⊗ L_D")
    return ExceptionalModel(**{**model.__dict__, "B3": tb, "B3_gram_reference": ref})


def _exceptional_external(name: str, path: str | Path) -> ExceptionalModel:
    """Accept a user-supplied Stokes matrix only if it matches the known invariants."""
    data = FAMILIES[name]
    try:
        lat = load_lattice(path)
    except OSError as e:
        raise DataUnavailable(f"{name}: cannot read diagram file {path}: {e.strerror}") from e
    if not lat.provenance:
        raise CatalogIntegrityError("external diagram file must carry a provenance string")
    base = _base_model(name)
    surface = stabilize_to(lat, 2)
    factors = cyclotomic_factor(char_poly(surface.monodromy))
    _check(factors == base.pch_factors, f"{name}: supplied lattice has char poly {factors}")
    if data.radical_gram is not None:
        curve = stabilize_to(lat, 1)
        rad = radical(curve)
        g = restrict_gram(rad, "seifert")
        _check(rad.rank == 2 and definiteness(g) == -1 and gram_isometric(g, Matrix(data.radical_gram))[0],
               f"{name}: supplied lattice has the wrong radical Gram")
    b3 = eigenlattice(surface, base.p2)
    _check(b3.rank == 2 * base.p2.degree, f"{name}: B₃ has rank {b3.rank}")
    return ExceptionalModel(**{**base.__dict__, "lattice": surface, "B3": b3,
                               "radical_gram": Matrix(data.radical_gram) if data.radical_gram else None,
                               "full_gram": Matrix(data.full_gram) if data.full_gram else None,
                               "provenance": f"external: {lat.provenance}"})


# ---------------------------------------------------------------------------
# Orlik decomposition


def _orbit(m: Matrix, v: tuple, k: int) -> list[tuple]:
    out = []
    for _ in range(k):
        out.append(v)
        v = m @ v
    return out


def _box_vectors(rank: int, bound: int):
    """Nonzero coefficient vectors in [−bound, bound]^rank, by support size then lex."""
    for support in range(1, rank + 1):
        for idx in itertools.combinations(range(rank), support):
            for vals in itertools.product([x for x in range(-bound, bound + 1) if x], repeat=support):
                v = [0] * rank
                for i, x in zip(idx, vals):
                    v[i] = x
                yield tuple(v)


def find_orlik(model: ExceptionalModel, search_bound: int = 1) -> tuple[tuple, tuple]:
    """Vectors a₁, a₂ with Ml = ⊕ℤM^i a₁ ⊕ ⊕ℤM^j a₂ (cyclic pieces with char polys p₁, p₂).

    M is semisimple with minimal polynomial p₁, so any a₁ works for the first
    annihilator; its orbit must span a saturated sublattice of rank deg p₁.
    a₂ is searched in coordinates of B₃ = ker p₂(M); the direct-sum test is
    det = ±1. Candidates are ordered by support size, so the search is small.
    """
    lat = model.require_lattice()
    m = lat.monodromy
    k1, k2 = model.p1.degree, model.p2.degree
    if not model.p1.at_matrix(m).is_zero():
        raise NotFound(f"{model.name}: p₁(M) ≠ 0, monodromy is not semisimple with minimal polynomial p₁")
    if k1 + k2 != lat.mu:
        raise NotFound(f"{model.name}: deg p₁ + deg p₂ = {k1 + k2} ≠ μ = {lat.mu}")
    b3 = eigenlattice(lat, model.p2)
    seconds = [_orbit(m, b3.vector(c), k2) for c in _box_vectors(b3.rank, search_bound)]
    if not seconds:
        raise NotFound(f"{model.name}: no candidates for a₂ within bound {search_bound}")
    for c in _box_vectors(lat.mu, search_bound):
        orbit1 = _orbit(m, c, k1)
        if not is_saturated_basis(Matrix(orbit1)):
            continue
        for orbit2 in seconds:
            if Matrix(orbit1 + orbit2).det() in (1, -1):
                return c, orbit2[0]
    raise NotFound(f"{model.name}: no Orlik pair within bound {search_bound}")


def b3_short_roots(model: ExceptionalModel) -> list[tuple]:
    """Vectors of B₃ with (L + Lᵀ)-norm equal to the minimum; plumbing for reports."""
    g = restrict_gram(model.B3, "seifert")
    sym = g + g.T
    target = min(sym[i, i] for i in range(sym.nrows))
    return short_vectors(sym, target)


def cyclotomic_degree(factors: dict) -> int:
    return sum(cyclotomic(m).degree * e for m, e in factors.items())
