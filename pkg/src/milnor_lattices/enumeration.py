"""Exact enumeration engines over definite forms.

Everything here is finite because a definite form has finitely many vectors
of bounded norm. Outputs are sorted lexicographically so reports are stable.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Iterable, Sequence

from .cyclotomic import CycNumber, norm_form
from .errors import HypothesesFail, NoSolution, NotDefinite, NotQuasiunipotent, UnsupportedCase
from .exact import (
    IntPoly, Matrix, char_poly, cyclotomic, cyclotomic_factor, integer_points_near, kernel_saturated,
)
from .groups import MatGroup, group_from_elements
from .lattice import restrict_gram, restrict_matrix

# ---------------------------------------------------------------------------
# definite forms


def definiteness(g: Matrix) -> int:
    """+1 positive definite, −1 negative definite, 0 otherwise (leading minors)."""
    if not g.is_square() or not g.is_symmetric():
        return 0
    n = g.nrows
    if n == 0:
        return 1
    minors = [g.submatrix(range(k), range(k)).det() for k in range(1, n + 1)]
    if all(m > 0 for m in minors):
        return 1
    if all((m < 0) if k % 2 == 0 else (m > 0) for k, m in enumerate(minors)):
        return -1
    return 0


def _positive(g: Matrix) -> tuple[Matrix, int]:
    sign = definiteness(g)
    if sign == 0:
        raise NotDefinite("form is not definite")
    return (g if sign > 0 else -g), sign


def _fp_decomposition(g: Matrix) -> list[list[Fraction]]:
    """q with Q(x) = Σ_i q_ii (x_i + Σ_{j>i} q_ij x_j)² for positive definite g."""
    n = g.nrows
    q = [[Fraction(g[i, j]) for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            q[j][i] = q[i][j]
            q[i][j] = q[i][j] / q[i][i]
        for k in range(i + 1, n):
            for l in range(k, n):
                q[k][l] -= q[k][i] * q[i][l]
    return q


def vectors_up_to(g: Matrix, bound: int) -> list[tuple[int, ...]]:
    """All nonzero v with vᵀgv <= bound for a positive definite g (Fincke–Pohst)."""
    n = g.nrows
    if n == 0 or bound <= 0:
        return []
    q = _fp_decomposition(g)
    out: list[tuple[int, ...]] = []
    x = [0] * n

    def rec(i: int, remaining: Fraction):
        center = -sum((q[i][j] * x[j] for j in range(i + 1, n)), Fraction(0))
        for v in integer_points_near(center, remaining / q[i][i]):
            used = q[i][i] * (v - center) ** 2
            if used > remaining:
                continue
            x[i] = v
            if i == 0:
                out.append(tuple(x))
            else:
                rec(i - 1, remaining - used)
        x[i] = 0

    rec(n - 1, Fraction(bound))
    zero = (0,) * n
    return sorted(v for v in out if v != zero)


def quad(g: Matrix, v: Sequence[int], w: Sequence[int] | None = None):
    w = v if w is None else w
    return sum(a * b for a, b in zip(v, g @ tuple(w)))


def short_vectors(g: Matrix, target: int) -> list[tuple[int, ...]]:
    """All v with vᵀgv = target for definite g, lexicographically sorted."""
    pos, sign = _positive(g)
    t = target * sign
    if t < 0:
        return []
    if t == 0:
        return [(0,) * g.nrows]
    return [v for v in vectors_up_to(pos, t) if quad(pos, v) == t]


def brute_force_vectors(g: Matrix, target: int, box: int) -> list[tuple[int, ...]]:
    """Independent oracle: scan the box [−box, box]^n."""
    n = g.nrows
    return sorted(
        v for v in itertools.product(range(-box, box + 1), repeat=n) if quad(g, v) == target
    )


def box_bound(g: Matrix, target: int) -> int:
    """|v_i| <= sqrt(|target|·(g⁻¹)_ii) for vᵀgv = target on a definite g."""
    pos, sign = _positive(g)
    inv = pos.inverse()
    t = abs(target)
    return max(isqrt(int(t * inv[i, i]) + 1) + 1 for i in range(g.nrows))


# ---------------------------------------------------------------------------
# automorphisms and isometries


def _dot(a, b) -> int:
    return sum(x * y for x, y in zip(a, b))


def _isometries(g1: Matrix, g2: Matrix, extra: Sequence[tuple[Matrix, Matrix]] = (), first_only=False):
    """Matrices X with Xᵀ·g1·X = g2 and Xᵀ·F1·X = F2 for (F1, F2) in extra.

    Column-by-column backtracking with forward checking: once column i is
    chosen, the candidate pools of all later columns are filtered against it.
    """
    n = g1.nrows
    forms = [(g1, g2)] + list(extra)
    cache: dict[int, list] = {}
    pools = []
    for i in range(n):
        t = g2[i, i]
        if t not in cache:
            cache[t] = short_vectors(g1, t)
        pool = []
        for v in cache[t]:
            if all(quad(f1, v) == f2[i, i] for f1, f2 in extra):
                # images needed for vᵀ·F·w and wᵀ·F·v against later columns
                pool.append((v, tuple((f1 @ v, f1.T @ v) for f1, _ in forms)))
        pools.append(pool)
    found: list[Matrix] = []
    cols: list[tuple] = []

    def fits(v, i, cand, k):
        w, images = cand
        for (f1v, f1tv), (_, f2) in zip(images, forms):
            if _dot(v, f1v) != f2[i, k] or _dot(v, f1tv) != f2[k, i]:
                return False
        return True

    def rec(i, pools):
        if i == n:
            x = Matrix.from_columns(cols)
            if x.det() in (1, -1):
                found.append(x)
                return first_only
            return False
        for v, _ in pools[i]:
            rest = []
            for k in range(i + 1, n):
                p = [c for c in pools[k] if fits(v, i, c, k)]
                if not p:
                    break
                rest.append(p)
            else:
                cols.append(v)
                stop = rec(i + 1, [None] * (i + 1) + rest)
                cols.pop()
                if stop:
                    return True
        return False

    rec(0, pools)
    return found


def definite_aut(g: Matrix, extra_forms: Sequence[Matrix] = ()) -> MatGroup:
    """Aut(g) = {X : XᵀgX = g} for a definite g, optionally also preserving extra forms."""
    _positive(g)
    extra = [(f, f) for f in extra_forms]
    elems = sorted(_isometries(g, g, extra), key=lambda m: m.columns())
    return group_from_elements(elems, degree=g.nrows)


def gram_isometric(g1: Matrix, g2: Matrix) -> tuple[bool, Matrix | None]:
    """Whether some unimodular X has Xᵀ·g1·X = g2; returns the first witness."""
    _positive(g1)
    _positive(g2)
    if g1.shape != g2.shape or g1.det() != g2.det():
        return False, None
    found = _isometries(g1, g2, first_only=True)
    return (True, found[0]) if found else (False, None)


def box_automorphisms(form: Matrix, box: int, commuting: Matrix | None = None) -> list[Matrix]:
    """Oracle: all X with entries in [−box, box] and Xᵀ·form·X = form.

    Columns are pre-filtered by their diagonal value, then combined by
    backtracking over the pairwise conditions. With ``commuting`` only X
    with X·C = C·X are kept (needed when ``form`` is degenerate).
    """
    n = form.nrows
    vecs = list(itertools.product(range(-box, box + 1), repeat=n))
    cands = [[v for v in vecs if quad(form, v) == form[i, i]] for i in range(n)]
    if commuting is not None:
        fast = _box_commuting(form, box, commuting, cands)
        if fast is not None:
            return fast
    out = []
    cols: list[tuple] = []

    def rec(i):
        if i == n:
            x = Matrix.from_columns(cols)
            if x.det() in (1, -1) and (commuting is None or x @ commuting == commuting @ x):
                out.append(x)
            return
        for v in cands[i]:
            if all(quad(form, w, v) == form[j, i] and quad(form, v, w) == form[i, j] for j, w in enumerate(cols)):
                cols.append(v)
                rec(i + 1)
                cols.pop()

    rec(0)
    return sorted(out, key=lambda m: m.columns())


def _box_commuting(form: Matrix, box: int, c: Matrix, cands) -> list[Matrix] | None:
    """Same result as the backtracking when some e_j is a cyclic vector of C.

    X commuting with C is fixed by w = X·e_j through X·C^k·e_j = C^k·w, and
    w is column j of X, so scanning column j over the box loses nothing.
    Returns None when no unit vector generates ℤ^n under C.
    """
    n = form.nrows
    for j in range(n):
        e = tuple(int(i == j) for i in range(n))
        orbit = [e]
        for _ in range(n - 1):
            orbit.append(c @ orbit[-1])
        basis = Matrix.from_columns(orbit)
        if basis.det() not in (1, -1):
            continue
        inv = basis.inverse()
        out = []
        for w in cands[j]:
            imgs = [w]
            for _ in range(n - 1):
                imgs.append(c @ imgs[-1])
            x = Matrix.from_columns(imgs) @ inv
            if (x.is_integral() and all(abs(a) <= box for row in x.rows for a in row)
                    and x.det() in (1, -1) and x.T @ form @ x == form and x @ c == c @ x):
                out.append(x.to_int())
        return sorted(out, key=lambda m: m.columns())
    return None


# ---------------------------------------------------------------------------
# hermitian norm equations over ℤ[ξ]


@dataclass(frozen=True)
class HermitianPair:
    """V = ℤ[ξ]b₁ ⊕ ℤ[ξ]b₂ with L(b,b) = [[2,−1],[−1,m]], sesquilinear."""

    m: int
    l: int

    def __post_init__(self):
        if self.m < 2:
            raise UnsupportedCase("m must be at least 2")
        if self.l not in (3, 4, 5):
            raise UnsupportedCase(f"l={self.l} outside {{3, 4, 5}}")
        if self.l == 5 and self.m >= 3:
            raise UnsupportedCase("(m >= 3, l = 5) is excluded")

    @property
    def gram(self) -> Matrix:
        return Matrix([[2, -1], [-1, self.m]])

    def pairing(self, r: tuple[CycNumber, CycNumber], s: tuple[CycNumber, CycNumber]) -> CycNumber:
        """L_ℂ(r, s) = Σ r_i·conj(s_j)·L(b_i, b_j)."""
        g = self.gram
        out = CycNumber(self.l, [0])
        for i in range(2):
            for j in range(2):
                if g[i, j]:
                    out = out + r[i] * s[j].conj() * g[i, j]
        return out

    def norm(self, r) -> CycNumber:
        return self.pairing(r, r)

    def norm_decomposition(self, r) -> CycNumber:
        """|r₁|² + |r₁ − r₂|² + (m−1)|r₂|²."""
        r1, r2 = r
        return r1.abs2() + (r1 - r2).abs2() + r2.abs2() * (self.m - 1)

    def rational_solutions(self, target: int) -> list[tuple[int, int]]:
        b = isqrt(4 * target) + 2
        return sorted(
            (a, c) for a in range(-b, b + 1) for c in range(-b, b + 1)
            if 2 * a * a - 2 * a * c + self.m * c * c == target
        )


def _small_elements(l: int, bound: int) -> dict[int, list[CycNumber]]:
    """Elements a + bξ of ℤ[ξ] (l ∈ {3,4}) grouped by |·|² <= bound."""
    box = isqrt(4 * bound // 3 + 1) + 1 if l == 3 else isqrt(bound) + 1
    out: dict[int, list[CycNumber]] = {}
    for a in range(-box, box + 1):
        for b in range(-box, box + 1):
            n = norm_form(l, a, b)
            if n <= bound:
                out.setdefault(n, []).append(CycNumber(l, [a, b]))
    return out


def scaled_form_418() -> Matrix:
    """Integer Gram G with vᵀGv = 8·A₁(v), where A₁ is the ℤ⁸ form for (m,l) = (2,5)."""

    def four_a1(x):
        r1, r2 = x[:4], x[4:]
        s = sum(r1[j] ** 2 + r2[j] ** 2 + (r1[j] - r2[j]) ** 2 for j in range(4))
        for j in range(4):
            for k in range(j + 1, 4):
                s += (r1[j] - r1[k] - r2[j] + r2[k]) ** 2 + (r1[j] - r1[k]) ** 2 + (r2[j] - r2[k]) ** 2
        return s

    e = [tuple(int(i == j) for i in range(8)) for j in range(8)]
    diag = [four_a1(v) for v in e]
    rows = []
    for i in range(8):
        row = []
        for j in range(8):
            if i == j:
                row.append(2 * diag[i])
            else:
                both = tuple(a + b for a, b in zip(e[i], e[j]))
                row.append(four_a1(both) - diag[i] - diag[j])
        rows.append(row)
    return Matrix(rows)


def form_418(v: Sequence[int]) -> Fraction:
    return Fraction(quad(scaled_form_418(), v), 8)


def coords_to_pair(v: Sequence[int], l: int = 5) -> tuple[CycNumber, CycNumber]:
    return CycNumber(l, v[:4]), CycNumber(l, v[4:])


def pair_to_coords(r: tuple[CycNumber, CycNumber]) -> tuple[int, ...]:
    return tuple(r[0].coeffs) + tuple(r[1].coeffs)


def hermitian_solutions(hp: HermitianPair, target: int, exclude_b1_multiples: bool = False):
    """All r = (r₁, r₂) ∈ ℤ[ξ]² with L_ℂ(r, r) = target, sorted.

    For l ∈ {3, 4} the three absolute squares are nonnegative integers; for
    l = 5 the rational part of L_ℂ(r, r) is the positive ℤ⁸ form, whose
    solutions are enumerated and then filtered by the exact value.
    """
    l, m = hp.l, hp.m
    sols: list[tuple[CycNumber, CycNumber]] = []
    if l in (3, 4):
        small = _small_elements(l, target)
        elems = [(n, z) for n, zs in small.items() for z in zs]
        for n1, r1 in elems:
            for n2, r2 in elems:
                if n1 + (m - 1) * n2 > target:
                    continue
                r = (r1, r2)
                if hp.norm(r) == target:
                    sols.append(r)
    else:
        g = scaled_form_418()
        for v in short_vectors(g, 8 * target):
            r = coords_to_pair(v)
            if hp.norm(r) == target:
                sols.append(r)
    if exclude_b1_multiples:
        sols = [r for r in sols if r[1] != 0]
    return sorted(set(sols), key=lambda r: (r[0].coeffs, r[1].coeffs))


def unit_times_rational(hp: HermitianPair, target: int, exclude_b1_multiples: bool = False):
    """{±ξ^k}·{r ∈ V_ℤ : L(r, r) = target}, the structured right-hand side."""
    out = set()
    for a, b in hp.rational_solutions(target):
        if exclude_b1_multiples and b == 0:
            continue
        for u in CycNumber.units(hp.l):
            out.add((u * a, u * b))
    return sorted(out, key=lambda r: (r[0].coeffs, r[1].coeffs))


CycMat2 = tuple  # ((g11, g12), (g21, g22)) of CycNumber, column j = image of b_j


def cyc_mat_mul(x: CycMat2, y: CycMat2) -> CycMat2:
    return tuple(
        tuple(x[i][0] * y[0][j] + x[i][1] * y[1][j] for j in range(2)) for i in range(2)
    )


def cyc_mat_identity(l: int) -> CycMat2:
    one, zero = CycNumber(l, [1]), CycNumber(l, [0])
    return ((one, zero), (zero, one))


def zxi_aut(hp: HermitianPair) -> list[CycMat2]:
    """Aut(V_{ℤ[ξ]}, L_ℂ) as 2×2 matrices over ℤ[ξ]."""
    s1 = hermitian_solutions(hp, 2)
    s2 = s1 if hp.m == 2 else hermitian_solutions(hp, hp.m)
    out = []
    for x in s1:
        for y in s2:
            if hp.pairing(x, y) == -1 and hp.pairing(y, x) == -1:
                det = x[0] * y[1] - y[0] * x[1]
                if det.abs2() == 1:
                    out.append(((x[0], y[0]), (x[1], y[1])))
    return sorted(out, key=lambda g: tuple(c.coeffs for row in g for c in row))


def rational_part(group: Iterable[CycMat2]) -> list[Matrix]:
    """Elements with all entries in ℤ, as integer matrices."""
    out = []
    for g in group:
        if all(c.is_rational_integer() for row in g for c in row):
            out.append(Matrix([[c.to_int() for c in row] for row in g]))
    return sorted(out, key=lambda m: m.columns())


# ---------------------------------------------------------------------------
# finite commutant units


def _prime_power_base(n: int) -> int | None:
    """p if n = p^k with k >= 1, else None."""
    if n < 2:
        return None
    p = next(d for d in range(2, n + 1) if n % d == 0)
    while n % p == 0:
        n //= p
    return p if n == 1 else None


def ord_chain_exists(orders: Iterable[int]) -> bool:
    """Hypothesis (ii) on the set of eigenvalue orders.

    Searches an ordering m₁, …, m_N with every m_i = m_{j(i)}/p^k for an
    earlier j(i); one contiguous block of steps uses p = 2 with j(i) = i−1,
    all other steps use odd primes.
    """
    ords = sorted(set(orders))
    if not ords:
        return True
    n = len(ords)

    def rec(seq: list[int], phase: str) -> bool:
        if len(seq) == n:
            return True
        for m in ords:
            if m in seq:
                continue
            # continue or open the p = 2 block
            if phase in ("before", "in"):
                if seq[-1] % m == 0 and _prime_power_base(seq[-1] // m) == 2:
                    if rec(seq + [m], "in"):
                        return True
            # odd prime step from any earlier element
            ok = any(s % m == 0 and (_prime_power_base(s // m) or 2) >= 3 for s in seq)
            if ok and rec(seq + [m], "after" if phase == "in" else phase):
                return True
        return False

    return any(rec([m1], "before") for m1 in ords)


def trace_gram(m: Matrix) -> Matrix:
    """T_ij = trace(M^{i−j}), the trace form Σ_λ u(λ)·conj(v(λ)) on ℤ[t]/(p_ch)."""
    k = m.nrows
    inv = m.inverse()
    traces = {}
    for d in range(-(k - 1), k):
        p = m ** d if d >= 0 else inv ** (-d)
        traces[d] = sum(p[i, i] for i in range(k))
    return Matrix([[traces[i - j] for j in range(k)] for i in range(k)])


def find_cyclic_generator(m: Matrix, box: int = 2) -> tuple[int, ...] | None:
    """v with (v, Mv, …, M^{k−1}v) a ℤ-basis, searched by increasing sup norm."""
    k = m.nrows
    for s in range(1, box + 1):
        for v in itertools.product(range(-s, s + 1), repeat=k):
            if max(map(abs, v)) != s:
                continue
            cols, w = [], v
            for _ in range(k):
                cols.append(w)
                w = m @ w
            if Matrix.from_columns(cols).det() in (1, -1):
                return v
    return None


@dataclass(frozen=True)
class LemmaHypotheses:
    finite_order: bool
    squarefree: bool
    ord_chain: bool
    cyclic_generator: tuple | None
    nondegenerate: bool

    @property
    def all_hold(self) -> bool:
        return (self.finite_order and self.squarefree and self.ord_chain
                and self.cyclic_generator is not None and self.nondegenerate)


def lemma_hypotheses(m: Matrix, form: Matrix, generator=None) -> LemmaHypotheses:
    """Check the hypotheses of the finite-commutant lemma for (M, form) on ℤ^k."""
    try:
        factors = cyclotomic_factor(char_poly(m))
        finite = True
    except NotQuasiunipotent:
        factors, finite = {}, False
    squarefree = finite and all(e == 1 for e in factors.values())
    ords = list(factors)
    chain = finite and ord_chain_exists(ords)
    gen = tuple(generator) if generator is not None else (find_cyclic_generator(m) if squarefree else None)
    nondeg = False
    if finite:
        q = IntPoly([1])
        for o in ords:
            if o > 2:
                q = q * cyclotomic(o)
        if q.degree == 0:
            nondeg = True
        else:
            basis = kernel_saturated(q.at_matrix(m))
            nondeg = (basis @ form @ basis.T).det() != 0
    return LemmaHypotheses(finite, squarefree, chain, gen, nondeg)


def commutant_units(m: Matrix, form: Matrix, generator=None) -> MatGroup:
    """Automorphisms u(M) of ℤ^k preserving ``form`` with |u(λ)| = 1 for all λ.

    ``m`` and ``form`` are already restricted to the cyclic sublattice. The
    coefficient vectors u are the trace-form vectors of norm k.
    """
    hyp = lemma_hypotheses(m, form, generator)
    if not hyp.all_hold:
        raise HypothesesFail(f"hypotheses fail: {hyp}")
    k = m.nrows
    gram = trace_gram(m)
    powers = [m ** i for i in range(k)]
    elems = []
    for u in short_vectors(gram, k):
        g = Matrix.zeros(k, k)
        for c, p in zip(u, powers):
            if c:
                g = g + p.scale(c)
        if g.is_unimodular() and g.T @ form @ g == form:
            elems.append(g)
    if not elems:
        raise NoSolution("no units found")
    return group_from_elements(sorted(elems, key=lambda x: x.columns()), degree=k)


def sublattice_commutant_units(lat, sub, form: str = "seifert", generator=None) -> MatGroup:
    return commutant_units(restrict_matrix(lat.monodromy, sub), restrict_gram(sub, form), generator)


# ---------------------------------------------------------------------------
# branch classes of curve singularities


def recover_branches(g: Matrix, r: int) -> list[tuple[tuple[int, ...], ...]]:
    """All branch tuples {l₁, …, l_r} for the negative definite Gram g, up to sign.

    Conditions: Σ lᵢ = 0, L(lᵢ, lⱼ) > 0 for i ≠ j, and l₁, …, l_{r−1} a basis.
    Each L(lᵢ, lⱼ) is bounded by |det g| (a spanning-tree term of the
    reduced Laplacian), so |L(lᵢ, lᵢ)| <= (r−1)·|det g|.
    Returns one canonical sorted tuple per ± class.
    """
    if definiteness(g) != -1:
        raise NotDefinite("branch Gram must be negative definite")
    n = g.nrows
    if n != r - 1:
        raise ValueError(f"Gram of rank {n} does not fit {r} branches")
    bound = (r - 1) * abs(g.det())
    pool = vectors_up_to(-g, bound)
    classes = set()
    chosen: list[tuple] = []

    def rec(start: int):
        if len(chosen) == r - 1:
            if Matrix(chosen).det() not in (1, -1):
                return
            last = tuple(-sum(v[i] for v in chosen) for i in range(n))
            if all(quad(g, v, last) > 0 for v in chosen):
                members = tuple(sorted(chosen + [last]))
                neg = tuple(sorted(tuple(-x for x in v) for v in members))
                classes.add(min(members, neg))
            return
        for idx in range(start, len(pool)):
            v = pool[idx]
            if all(quad(g, w, v) > 0 for w in chosen):
                chosen.append(v)
                rec(idx + 1)
                chosen.pop()

    rec(0)
    if not classes:
        raise NoSolution("no branch tuple satisfies the conditions")
    return sorted(classes)


def branch_gram(g: Matrix, branches: Sequence[Sequence[int]]) -> Matrix:
    return Matrix([[quad(g, a, b) for b in branches] for a in branches])


def match_printed_gram(g: Matrix, branches, printed: Matrix) -> bool:
    """Whether some ordering of the branch classes has the printed full Gram."""
    return any(branch_gram(g, perm) == printed for perm in itertools.permutations(branches))
