"""Bilinear lattices: Stokes matrix, Seifert form, intersection form, monodromy.

Conventions. The distinguished basis δ₁…δ_μ is the standard basis of ℤ^μ.
``monodromy`` is the column-action matrix: column j holds the coordinates of
M_h(δ_j), so M_h(δ) = δ·monodromy, the row-of-basis form used for the
monodromy matrix formula. ``seifert`` and ``intersection`` hold the values
L(δ_i, δ_j) and I(δ_i, δ_j); for coordinate vectors a, b we have
L(a, b) = aᵀ·seifert·b.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .errors import DoesNotDescend, NoIntegralStokes, NotInvariant, NotUnipotentUpper
from .exact import (
    IntPoly, Matrix, canonical_basis, is_saturated_basis, kernel_saturated,
    snf, solve_left,
)

SCHEMA_VERSION = 1


def seifert_sign(n: int) -> int:
    """(−1)^{(n+1)(n+2)/2}: L = sign · Sᵀ."""
    return -1 if ((n + 1) * (n + 2) // 2) % 2 else 1


def intersection_sign(n: int) -> int:
    """(−1)^{n(n+1)/2}."""
    return -1 if (n * (n + 1) // 2) % 2 else 1


def _parity(n: int) -> int:
    return -1 if n % 2 else 1


@dataclass(frozen=True)
class BilinearLattice:
    mu: int
    n: int
    stokes: Matrix
    seifert: Matrix
    monodromy: Matrix
    intersection: Matrix
    provenance: str = field(default="", compare=False)

    def L(self, a: Sequence[int], b: Sequence[int]):
        return sum(x * y for x, y in zip(a, self.seifert @ tuple(b)))

    def I(self, a: Sequence[int], b: Sequence[int]):
        return sum(x * y for x, y in zip(a, self.intersection @ tuple(b)))

    def M(self, v: Sequence[int]) -> tuple:
        return self.monodromy @ tuple(v)

    def form(self, name: str) -> Matrix:
        sign = -1 if name.startswith("-") else 1
        base = name.lstrip("-")
        if base == "seifert":
            mat = self.seifert
        elif base == "intersection":
            mat = self.intersection
        else:
            raise ValueError(f"unknown form {name!r}")
        return mat if sign == 1 else -mat

    def to_dict(self) -> dict:
        out = {"schema_version": SCHEMA_VERSION, "mu": self.mu, "n": self.n,
               "stokes": self.stokes.tolist()}
        if self.provenance:
            out["provenance"] = self.provenance
        return out


def is_unipotent_upper(s: Matrix) -> bool:
    if not s.is_square() or not s.is_integral():
        return False
    return all(s[i, j] == (1 if i == j else 0) for i in range(s.nrows) for j in range(i + 1))


def from_stokes(stokes: Matrix, n: int, provenance: str = "") -> BilinearLattice:
    """Build all four lattice matrices from a Stokes matrix and the parity parameter n."""
    if not is_unipotent_upper(stokes):
        raise NotUnipotentUpper("Stokes matrix must be unipotent upper triangular")
    st = stokes.T
    monodromy = (stokes.inverse() @ st).scale(-_parity(n))
    seifert = st.scale(seifert_sign(n))
    intersection = (stokes + st.scale(_parity(n))).scale(intersection_sign(n))
    return BilinearLattice(stokes.nrows, n, stokes, seifert, monodromy.to_int(), intersection, provenance)


def stokes_from_monodromy(monodromy: Matrix, n: int) -> Matrix:
    """Unique unipotent upper-triangular S with (−1)^{n+1}·S⁻¹Sᵀ = M.

    Solves Sᵀ = c·S·M (c = (−1)^{n+1}) below the diagonal column by column,
    from the last column down, then checks the full identity.
    """
    mu = monodromy.nrows
    c = -_parity(n)
    s = [[int(i == j) for j in range(mu)] for i in range(mu)]
    m = monodromy.rows
    for i in range(mu - 1, -1, -1):
        for j in range(i):
            # (Sᵀ)_{ij} = S_{ji} = c·Σ_k S_{ik} M_{kj}, with S_{ik} known for k >= i
            s[j][i] = c * sum(s[i][k] * m[k][j] for k in range(i, mu))
    stokes = Matrix(s)
    if stokes.T != (stokes @ monodromy).scale(c):
        raise NoIntegralStokes("no unipotent upper-triangular Stokes matrix for this monodromy")
    return stokes


def picard_lefschetz(lat: BilinearLattice, d: Sequence[int]) -> Matrix:
    """Matrix of b ↦ b − (−1)^{n(n+1)/2}·I(d, b)·d."""
    eps = intersection_sign(lat.n)
    d = tuple(d)
    row = tuple(sum(d[k] * lat.intersection[k, j] for k in range(lat.mu)) for j in range(lat.mu))
    return Matrix(
        tuple(int(i == j) - eps * d[i] * row[j] for j in range(lat.mu)) for i in range(lat.mu)
    )


def coxeter_product(lat: BilinearLattice) -> Matrix:
    """s_{δ₁} ∘ … ∘ s_{δ_μ} over the distinguished basis."""
    out = Matrix.identity(lat.mu)
    for i in range(lat.mu):
        e = [0] * lat.mu
        e[i] = 1
        out = out @ picard_lefschetz(lat, e)
    return out


def tensor(f: BilinearLattice, g: BilinearLattice) -> BilinearLattice:
    """Thom–Sebastiani sum f + g: Stokes S(f)⊗S(g) in lexicographic order."""
    prov = f"({f.provenance or 'f'})⊗({g.provenance or 'g'})"
    return from_stokes(f.stokes.kron(g.stokes), f.n + g.n + 1, provenance=prov)


def stabilize(lat: BilinearLattice) -> BilinearLattice:
    """Add a square of a new variable: same Stokes matrix, n ↦ n + 1."""
    return from_stokes(lat.stokes, lat.n + 1, provenance=lat.provenance)


def stabilize_to(lat: BilinearLattice, residue: int) -> BilinearLattice:
    """Stabilize until n ≡ residue (mod 4)."""
    while (lat.n - residue) % 4:
        lat = stabilize(lat)
    return lat


# ---------------------------------------------------------------------------
# serialization


def to_json(lat: BilinearLattice) -> str:
    return json.dumps(lat.to_dict(), indent=1)


def from_dict(data: dict) -> BilinearLattice:
    version = data.get("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise ValueError(f"unsupported lattice schema version {version}")
    stokes = Matrix(data["stokes"])
    lat = from_stokes(stokes, int(data["n"]), provenance=data.get("provenance", ""))
    if "mu" in data and int(data["mu"]) != lat.mu:
        raise ValueError(f"mu={data['mu']} does not match Stokes matrix size {lat.mu}")
    return lat


def load_lattice(path: str | Path) -> BilinearLattice:
    return from_dict(json.loads(Path(path).read_text()))


def save_lattice(lat: BilinearLattice, path: str | Path) -> None:
    Path(path).write_text(to_json(lat) + "\n")


# ---------------------------------------------------------------------------
# sublattices


@dataclass(frozen=True)
class Sublattice:
    """ℤ-submodule given by basis rows in ambient coordinates."""

    ambient: BilinearLattice = field(repr=False, compare=False)
    basis: Matrix
    saturated: bool = field(init=False)

    def __post_init__(self):
        if self.basis.nrows and self.basis.rank() != self.basis.nrows:
            raise ValueError("sublattice basis rows are linearly dependent")
        object.__setattr__(self, "saturated", is_saturated_basis(self.basis))

    @classmethod
    def from_vectors(cls, ambient: BilinearLattice, vectors: Sequence[Sequence[int]]) -> "Sublattice":
        return cls(ambient, Matrix([tuple(v) for v in vectors], ncols=ambient.mu))

    @property
    def rank(self) -> int:
        return self.basis.nrows

    def coords(self, v: Sequence[int]) -> tuple | None:
        """Rational coordinates of v in this basis, or None outside the ℚ-span."""
        if self.rank == 0:
            return () if not any(v) else None
        return solve_left(self.basis, v)

    def contains(self, v: Sequence[int]) -> bool:
        x = self.coords(v)
        return x is not None and all(c.denominator == 1 for c in x)

    def contains_lattice(self, other: "Sublattice") -> bool:
        return all(self.contains(r) for r in other.basis.rows)

    def same_lattice(self, other: "Sublattice") -> bool:
        return canonical_basis(self.basis) == canonical_basis(other.basis)

    def canonical(self) -> "Sublattice":
        return Sublattice(self.ambient, canonical_basis(self.basis))

    def is_invariant(self, g: Matrix) -> bool:
        return all(self.contains(g @ r) for r in self.basis.rows)

    def vector(self, coords: Sequence[int]) -> tuple:
        """Ambient vector with the given coordinates in this basis."""
        n = self.ambient.mu
        return tuple(sum(c * self.basis[i, j] for i, c in enumerate(coords)) for j in range(n))


def eigenlattice(lat: BilinearLattice, p: IntPoly) -> Sublattice:
    """Saturated sublattice ker p(M_h) ∩ Ml."""
    return Sublattice(lat, kernel_saturated(p.at_matrix(lat.monodromy)))


def radical(lat: BilinearLattice) -> Sublattice:
    """Saturated Rad(I) = {v : I(v, ·) = 0}."""
    return Sublattice(lat, kernel_saturated(lat.intersection.T))


def restrict_gram(sub: Sublattice, form: str | Matrix = "seifert") -> Matrix:
    """Gram matrix (form(b_i, b_j)) on the sublattice basis."""
    mat = sub.ambient.form(form) if isinstance(form, str) else form
    b = sub.basis
    if b.nrows == 0:
        return Matrix.zeros(0, 0)
    return b @ mat @ b.T


def complement_basis(small: Sublattice, big: Sublattice) -> Matrix:
    """Rows (ambient coordinates) completing a basis of small to a basis of big.

    Tries the unit vectors at the non-pivot columns of the HNF of small's
    coordinates first; falls back to an SNF-based completion.
    """
    coords = []
    for r in small.basis.rows:
        x = big.coords(r)
        if x is None or any(c.denominator != 1 for c in x):
            raise ValueError("small sublattice is not contained in big sublattice")
        coords.append(tuple(int(c) for c in x))
    k, K = small.rank, big.rank
    if k == 0:
        comp = Matrix.identity(K)
    else:
        c = Matrix(coords)
        h = canonical_basis(c)
        pivots = [next(j for j, a in enumerate(r) if a) for r in h.rows]
        units = [tuple(int(j == col) for j in range(K)) for col in range(K) if col not in pivots]
        trial = Matrix(list(coords) + units, ncols=K)
        if trial.det() in (1, -1):
            comp = Matrix(units, ncols=K)
        else:
            d, u, v = snf(c)
            if any(d[i, i] != 1 for i in range(k)):
                raise ValueError("small sublattice is not saturated inside big sublattice")
            vinv = v.inverse()
            comp = Matrix(vinv.rows[k:], ncols=K)
    if comp.nrows == 0:
        return Matrix.zeros(0, big.ambient.mu)
    return comp @ big.basis


def quotient_gram(small: Sublattice, big: Sublattice, form: str = "seifert") -> Matrix:
    """Gram matrix of the form induced on big/small, in a canonical complement basis."""
    mat = big.ambient.form(form)
    for s in small.basis.rows:
        for x in big.basis.rows:
            left = sum(a * b for a, b in zip(s, mat @ x))
            right = sum(a * b for a, b in zip(x, mat @ s))
            if left or right:
                raise DoesNotDescend(f"form {form} does not descend to the quotient")
    comp = complement_basis(small, big)
    if comp.nrows == 0:
        return Matrix.zeros(0, 0)
    return comp @ mat @ comp.T


def restrict_matrix(g: Matrix, sub: Sublattice) -> Matrix:
    """Matrix of g on the sublattice basis (column action); requires invariance."""
    cols = []
    for r in sub.basis.rows:
        x = sub.coords(g @ r)
        if x is None or any(c.denominator != 1 for c in x):
            raise NotInvariant("matrix does not preserve the sublattice")
        cols.append(tuple(int(c) for c in x))
    if not cols:
        return Matrix.zeros(0, 0)
    return Matrix.from_columns(cols)


def rational_combination(coeffs: Sequence[Fraction], vectors: Sequence[Sequence[int]]) -> tuple:
    n = len(vectors[0])
    return tuple(sum(Fraction(c) * v[j] for c, v in zip(coeffs, vectors)) for j in range(n))
