"""Finite unimodular matrix groups and the named generators of G_ℤ.

G_ℤ is the group of lattice automorphisms g with gᵀ·L·g = L. Elements are
column-action matrices in distinguished-basis coordinates.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import CapExceeded, CongruenceFails, NotSimpleElliptic
from .exact import INFINITE, Matrix, matrix_order
from .lattice import restrict_matrix

DEFAULT_CAP = 100_000


class MatGroup:
    """Group generated by finitely many unimodular integer matrices.

    The closure is computed lazily by breadth-first search and cached; the
    element order is deterministic (BFS from the identity over generators in
    the given order).
    """

    def __init__(self, generators: Iterable[Matrix], degree: int | None = None,
                 elements: Sequence[Matrix] | None = None):
        self.generators = tuple(generators)
        if degree is None:
            if not self.generators:
                raise ValueError("degree required for a group without generators")
            degree = self.generators[0].nrows
        self.degree = degree
        for g in self.generators:
            if g.shape != (degree, degree) or not g.is_integral() or not g.is_unimodular():
                raise ValueError("generators must be unimodular integer matrices of the group degree")
        self._elements = tuple(elements) if elements is not None else None
        self._index = None

    def __repr__(self):
        known = len(self._elements) if self._elements is not None else "?"
        return f"MatGroup(degree={self.degree}, generators={len(self.generators)}, order={known})"

    def elements(self, cap: int = DEFAULT_CAP) -> tuple[Matrix, ...]:
        if self._elements is None:
            self._elements = close(self, cap)
        return self._elements

    def order(self, cap: int = DEFAULT_CAP) -> int:
        return len(self.elements(cap))

    def try_order(self, cap: int = DEFAULT_CAP):
        """Order, or INFINITE when the closure exceeds the cap."""
        try:
            return self.order(cap)
        except CapExceeded:
            return INFINITE

    def __contains__(self, g: Matrix) -> bool:
        if self._index is None:
            self._index = frozenset(self.elements())
        return g in self._index

    def __len__(self):
        return self.order()

    def element_set(self) -> frozenset:
        return frozenset(self.elements())

    def is_abelian(self) -> bool:
        gens = self.generators or self.elements()
        return all(a @ b == b @ a for a in gens for b in gens)

    def is_cyclic(self) -> bool:
        n = self.order()
        return any(matrix_order(g) == n for g in self.elements())

    def cyclic_generator(self) -> Matrix | None:
        n = self.order()
        return next((g for g in self.elements() if matrix_order(g) == n), None)

    def is_closed(self) -> bool:
        """Closure sanity: products and inverses stay inside, identity present."""
        elems = self.element_set()
        if Matrix.identity(self.degree) not in elems:
            return False
        return all(a @ b in elems for a in elems for b in self.generators or elems) and all(
            a.inverse() in elems for a in elems
        )

    def subgroup(self, predicate) -> "MatGroup":
        elems = [g for g in self.elements() if predicate(g)]
        return MatGroup(elems, degree=self.degree, elements=elems)

    def image(self, hom) -> "MatGroup":
        """Image under a homomorphism given as a function on matrices."""
        seen: dict[Matrix, None] = {}
        for g in self.elements():
            seen.setdefault(hom(g))
        imgs = list(seen)
        return MatGroup(imgs, degree=imgs[0].nrows, elements=imgs)


def close(group: MatGroup, cap: int = DEFAULT_CAP) -> tuple[Matrix, ...]:
    """Breadth-first closure of the generators; raises CapExceeded past ``cap``."""
    ident = Matrix.identity(group.degree)
    seen = {ident: None}
    frontier = [ident]
    while frontier:
        nxt = []
        for g in frontier:
            for h in group.generators:
                x = g @ h
                if x not in seen:
                    seen[x] = None
                    if len(seen) > cap:
                        raise CapExceeded(cap)
                    nxt.append(x)
        frontier = nxt
    return tuple(seen)


def group_from_elements(elements: Sequence[Matrix], degree: int | None = None) -> MatGroup:
    elements = list(elements)
    return MatGroup(elements, degree=degree, elements=elements)


def preserves_form(g: Matrix, form: Matrix) -> bool:
    return g.T @ form @ g == form


def preserves_seifert(g: Matrix, lat) -> bool:
    """Membership in G_ℤ: unimodular integer g with gᵀ·L·g = L."""
    if g.shape != (lat.mu, lat.mu) or not g.is_integral() or not g.is_unimodular():
        return False
    return preserves_form(g, lat.seifert)


def restrict(g: Matrix, sub) -> Matrix:
    """Matrix of g on the basis of ``sub`` (column action)."""
    return restrict_matrix(g, sub)


def kernel_on_sublattice(elements: Iterable[Matrix], sub) -> MatGroup:
    """Elements acting as the identity on the sublattice."""
    rows = sub.basis.rows
    keep = [g for g in elements if all(g @ r == tuple(r) for r in rows)]
    return group_from_elements(keep, degree=sub.ambient.mu)


# ---------------------------------------------------------------------------
# T_pqr generators


def _arm_power_image(model, idx: int, power: int) -> tuple:
    m = model.lattice.monodromy
    v = tuple(int(i == idx) for i in range(model.lattice.mu))
    for _ in range(power):
        v = m @ v
    return v


def u1_congruence(model, delta: int, alpha: int, beta: int, gamma: int) -> bool:
    x = Fraction(alpha, model.p) + Fraction(beta, model.q) + Fraction(gamma, model.r) - Fraction(delta, model.chi)
    return x.denominator == 1


def u1_element(model, delta: int, alpha: int, beta: int, gamma: int) -> Matrix:
    """T^δ × (M|arm₁)^α × (M|arm₂)^β × (M|arm₃)^γ as an integer matrix.

    Arm basis vectors go to their images under M^α, M^β, M^γ; b̃₁ is fixed
    and b̃₂ ↦ b̃₂ + δ·b̃₁. The image of δ_{μ−1} follows from expressing it
    through b̃₂ and the arm vectors; δ_μ = δ_{μ−1} − b̃₁.
    """
    if not u1_congruence(model, delta, alpha, beta, gamma):
        raise CongruenceFails(
            f"{alpha}/{model.p} + {beta}/{model.q} + {gamma}/{model.r} is not ≡ {delta}/{model.chi} mod 1"
        )
    mu = model.lattice.mu
    cols: list[tuple] = []
    powers = (alpha % model.p, beta % model.q, gamma % model.r)
    for arm, power in zip(model.arms, powers):
        for idx in arm:
            cols.append(_arm_power_image(model, idx, power))
    b1, b2 = model.b1_tilde, model.b2_tilde
    target = [Fraction(x + delta * y, model.chi) for x, y in zip(b2, b1)]
    for arm, size in zip(model.arms, (model.p, model.q, model.r)):
        for i, idx in enumerate(arm, start=1):
            c = Fraction(size - i, size)
            img = cols[idx]
            for k in range(mu):
                target[k] -= c * img[k]
    if any(x.denominator != 1 for x in target):
        raise CongruenceFails("image of δ_{μ−1} is not integral")
    top = tuple(int(x) for x in target)
    cols.append(top)
    cols.append(tuple(a - b for a, b in zip(top, b1)))
    return Matrix.from_columns(cols)


def u1_tuples(model, delta: int = 0) -> list[tuple[int, int, int]]:
    return [
        (a, b, c)
        for a in range(model.p)
        for b in range(model.q)
        for c in range(model.r)
        if u1_congruence(model, delta, a, b, c)
    ]


def _swap_arms(model, first: int, second: int) -> Matrix:
    mu = model.lattice.mu
    perm = list(range(mu))
    for i, j in zip(model.arms[first], model.arms[second]):
        perm[i], perm[j] = j, i
    return Matrix.from_columns([tuple(int(k == perm[c]) for k in range(mu)) for c in range(mu)])


def u2_generators(model) -> list[Matrix]:
    """σ₁₂ when p = q and σ₂₃ when q = r: swaps of equally long arms."""
    gens = []
    if model.p == model.q:
        gens.append(_swap_arms(model, 0, 1))
    if model.q == model.r:
        gens.append(_swap_arms(model, 1, 2))
    return gens


def u2_group(model) -> MatGroup:
    return MatGroup(u2_generators(model), degree=model.lattice.mu)


def kernel_group(model) -> MatGroup:
    """⟨U₁ with δ = 0, U₂, −id⟩: the kernel of G_ℤ → Aut(Ml₁,ℤ)/{±id}."""
    mu = model.lattice.mu
    gens = [u1_element(model, 0, *t) for t in u1_tuples(model)]
    gens += u2_generators(model)
    gens.append(-Matrix.identity(mu))
    gens = [g for g in dict.fromkeys(gens) if g != Matrix.identity(mu)]
    return MatGroup(gens, degree=mu)


# ---------------------------------------------------------------------------
# SL(2,ℤ) and the congruence lift


@dataclass(frozen=True)
class SL2Matrix:
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.a * self.d - self.b * self.c != 1:
            raise ValueError(f"determinant of {self} is not 1")

    def __matmul__(self, o: "SL2Matrix") -> "SL2Matrix":
        return SL2Matrix(self.a * o.a + self.b * o.c, self.a * o.b + self.b * o.d,
                         self.c * o.a + self.d * o.c, self.c * o.b + self.d * o.d)

    def inverse(self) -> "SL2Matrix":
        return SL2Matrix(self.d, -self.b, -self.c, self.a)

    def as_matrix(self) -> Matrix:
        return Matrix([[self.a, self.b], [self.c, self.d]])

    def tolist(self) -> list[list[int]]:
        return [[self.a, self.b], [self.c, self.d]]


SL2_S = SL2Matrix(0, -1, 1, 0)
SL2_T = SL2Matrix(1, 1, 0, 1)


def gamma_membership(A: SL2Matrix, N: int) -> bool:
    """A ≡ identity entrywise mod N (strict, not up to sign)."""
    return (A.a - 1) % N == 0 and A.b % N == 0 and A.c % N == 0 and (A.d - 1) % N == 0


def sl2_box(bound: int) -> list[SL2Matrix]:
    """All SL(2,ℤ) matrices with entries in [−bound, bound], lexicographic."""
    out = []
    rng = range(-bound, bound + 1)
    for a in rng:
        for b in rng:
            for c in rng:
                for d in rng:
                    if a * d - b * c == 1:
                        out.append(SL2Matrix(a, b, c, d))
    return out


@dataclass(frozen=True)
class LiftResult:
    integral: bool
    matrix: Matrix | None  # the lift when integral
    images: tuple  # rational images of δ₂ and δ_μ


def gamma_lift(model, A: SL2Matrix) -> LiftResult:
    """Extend A on (b̃₁, b̃₂) by the identity on Ml_{≠1,ℤ} and test integrality.

    Uses Ml = Ml_{≠1,ℤ} ⊕ ℤδ₂ ⊕ ℤδ_μ with b̃₁ = γ₁ + pδ₂, b̃₂ = γ₂ + pδ_μ,
    so f(δ₂) = (f(b̃₁) − γ₁)/p and f(δ_μ) = (f(b̃₂) − γ₂)/p.
    """
    if model.kappa != 1:
        raise NotSimpleElliptic(f"T_{model.p}{model.q}{model.r} is not simple elliptic")
    p = model.p
    b1, b2 = model.b1_tilde, model.b2_tilde
    g1, g2 = model.gamma1, model.gamma2
    fb1 = [A.a * x + A.c * y for x, y in zip(b1, b2)]
    fb2 = [A.b * x + A.d * y for x, y in zip(b1, b2)]
    img2 = tuple(Fraction(x - g, p) for x, g in zip(fb1, g1))
    imgmu = tuple(Fraction(x - g, p) for x, g in zip(fb2, g2))
    integral = all(x.denominator == 1 for x in img2 + imgmu)
    mat = None
    if integral:
        mat = _assemble_lift(model, tuple(map(int, img2)), tuple(map(int, imgmu)))
    return LiftResult(integral, mat, (img2, imgmu))


def _assemble_lift(model, img2: tuple, imgmu: tuple) -> Matrix:
    # f is the identity on the Ml_{≠1} generators; solve for the δ-basis images
    mu = model.lattice.mu
    basis = list(model.ml_neq1.basis.rows)
    e2 = tuple(int(i == 1) for i in range(mu))
    emu = tuple(int(i == mu - 1) for i in range(mu))
    src = Matrix(basis + [e2, emu])
    dst = Matrix(basis + [img2, imgmu])
    # rows: src_k ↦ dst_k, so F·srcᵀ = dstᵀ
    return (dst.T @ src.T.inverse()).to_int()


# ---------------------------------------------------------------------------
# random words


def random_sl2_word(rng, length: int, level: int | None = None) -> SL2Matrix:
    """Product of random S, T^{±1} letters; with ``level`` also Γ(level)-type T^{±level}."""
    out = SL2Matrix(1, 0, 0, 1)
    letters = [SL2_S, SL2_T, SL2_T.inverse()]
    if level:
        tn = SL2Matrix(1, level, 0, 1)
        un = SL2Matrix(1, 0, level, 1)
        letters += [tn, tn.inverse(), un, un.inverse()]
    for _ in range(length):
        out = out @ letters[rng.below(len(letters))]
    return out


def order_of_sign_monodromy(m: Matrix) -> int:
    """|⟨M, −id⟩| for a finite-order M."""
    k = matrix_order(m)
    if k is INFINITE:
        return INFINITE
    n = m.nrows
    minus = -Matrix.identity(n)
    return k if any(m ** j == minus for j in range(k)) else 2 * k
