"""Automorphism groups attached to the tensor-built exceptional families.

The B₃ part of Ml = Ml(A_l) ⊗ Ml(D_2m) is Ml(A_l) ⊗ Rad(D_2m). Since the
A_l monodromy is cyclic, an L-automorphism of B₃ is a 2×2 matrix of
polynomials in M_A acting on the radical basis b₁, b₂, which is the same as a
2×2 matrix over ℤ[ξ] preserving the hermitian form of ``HermitianPair``.
"""
from __future__ import annotations

from dataclasses import dataclass

from .catalog import ExceptionalModel, d_radical_gram
from .cyclotomic import CycNumber
from .enumeration import CycMat2, HermitianPair, definite_aut, zxi_aut
from .errors import UnsupportedCase
from .exact import IntPoly, Matrix
from .groups import MatGroup, preserves_form
from .lattice import restrict_gram, restrict_matrix

# column j of each matrix is the image of b_j; the ξ = i candidates are ±i^k times these
U12_RATIONAL_LIST = (
    ((1, 0), (0, 1)), ((0, -1), (1, -1)), ((-1, 1), (-1, 0)),
    ((0, 1), (1, 0)), ((1, -1), (0, -1)), ((-1, 0), (-1, 1)),
)


def _unit(i: int, j: int) -> Matrix:
    return Matrix([[int(a == i and b == j) for b in range(2)] for a in range(2)])


def _require_tensor(model: ExceptionalModel) -> tuple[int, int]:
    if model.tensor_factors is None:
        raise UnsupportedCase(f"{model.name} is not tensor-built")
    l, two_m = model.tensor_factors
    return l, two_m // 2


def hermitian_pair(model: ExceptionalModel) -> HermitianPair:
    """The ℤ[ξ] data for the primitive eigenvalue ξ of order l + 1."""
    l, m = _require_tensor(model)
    return HermitianPair(m, l + 1)


def b3_monodromy(model: ExceptionalModel) -> Matrix:
    return restrict_matrix(model.lattice.monodromy, model.B3)


def b3_seifert(model: ExceptionalModel) -> Matrix:
    return restrict_gram(model.B3, "seifert")


def assemble(m_a: Matrix, polys: tuple[tuple[IntPoly, IntPoly], tuple[IntPoly, IntPoly]]) -> Matrix:
    """Σ_ij g_ij(M_A) ⊗ E_ij in the basis e_a ⊗ b_j."""
    out = Matrix.zeros(2 * m_a.nrows, 2 * m_a.nrows)
    for i in range(2):
        for j in range(2):
            out = out + polys[i][j].at_matrix(m_a).kron(_unit(i, j))
    return out


def assemble_cyc(m_a: Matrix, g: CycMat2) -> Matrix:
    return assemble(m_a, tuple(tuple(c.as_poly() for c in row) for row in g))


def crt_poly(alpha: CycNumber, c: int) -> IntPoly | None:
    """u ∈ ℤ[t] of degree <= 2 with u(i) = alpha and u(−1) = c, if integral."""
    a, b = alpha.coeffs
    if (a + b + c) % 2:
        return None
    return IntPoly([(a + b + c) // 2, b, (b + c - a) // 2])


def u12_candidates() -> list[CycMat2]:
    """{±i^k} times the rational list, as matrices over ℤ[i]."""
    out = set()
    for u in CycNumber.units(4):
        for g in U12_RATIONAL_LIST:
            out.add(tuple(tuple(u * x for x in row) for row in g))
    return sorted(out, key=lambda g: tuple(c.coeffs for row in g for c in row))


def u12_lifts() -> list[tuple[CycMat2, Matrix, tuple]]:
    """Pairs (G(i), G(−1)) whose entries glue to ℤ[t]/Φ₄Φ₂, with the glued polynomials."""
    rational = definite_aut(HermitianPair(2, 4).gram).elements()
    out = []
    for gi in zxi_aut(HermitianPair(2, 4)):
        for gm in rational:
            polys = []
            for i in range(2):
                row = []
                for j in range(2):
                    u = crt_poly(gi[i][j], gm[i, j])
                    if u is None:
                        break
                    row.append(u)
                if len(row) < 2:
                    break
                polys.append(tuple(row))
            if len(polys) == 2:
                out.append((gi, gm, tuple(polys)))
    return out


def b3_aut_assembly(model: ExceptionalModel) -> list[Matrix]:
    """Aut(B₃, L) assembled from the ℤ[ξ] automorphisms, in B₃ coordinates."""
    l, m = _require_tensor(model)
    m_a = model.factor_lattices[0].monodromy
    if l + 1 == 4:
        elems = [assemble(m_a, polys) for _, _, polys in u12_lifts()]
    else:
        elems = [assemble_cyc(m_a, g) for g in zxi_aut(hermitian_pair(model))]
    return sorted(set(elems), key=lambda x: x.columns())


def b3_aut_oracle(model: ExceptionalModel) -> MatGroup:
    """Independent count: isometries of the definite L + Lᵀ on B₃ that also keep L."""
    g = b3_seifert(model)
    return definite_aut(g + g.T, [g])


def radical_aut(model: ExceptionalModel) -> MatGroup:
    """Aut(Rad(D_2m), L) for the reference radical Gram [[−2,1],[1,−m]]."""
    _, m = _require_tensor(model)
    return definite_aut(d_radical_gram(m))


def b3_constructed(model: ExceptionalModel) -> MatGroup:
    """⟨−id, M|B₃⟩ together with id ⊗ Aut(Rad(D)), closed as a matrix group."""
    l, _ = _require_tensor(model)
    rad = radical_aut(model).elements()
    gens = [b3_monodromy(model), -Matrix.identity(2 * l)]
    gens += [Matrix.identity(l).kron(h) for h in rad]
    return MatGroup(gens)


def sign_monodromy_order(m: Matrix) -> int:
    return MatGroup([m, -Matrix.identity(m.nrows)]).order()


def d_factor_group(model: ExceptionalModel) -> MatGroup:
    """G_ℤ of the D_2m curve lattice: L + Lᵀ is negative definite there."""
    d = model.factor_lattices[1]
    return definite_aut(d.seifert + d.seifert.T, [d.seifert])


def full_group(model: ExceptionalModel) -> MatGroup:
    """⟨M_h, −id, id_A ⊗ G_ℤ(D)⟩ on the whole Milnor lattice."""
    l, _ = _require_tensor(model)
    lat = model.lattice
    gens = [lat.monodromy, -Matrix.identity(lat.mu)]
    gens += [Matrix.identity(l).kron(h) for h in d_factor_group(model).generators]
    return MatGroup(gens)


def stabilizer_order(model: ExceptionalModel) -> int:
    """|ℤ_{l+1} × (ℤ_{2m−1} × S)| with S = S₃ for m = 2 and S₂ otherwise."""
    l, m = _require_tensor(model)
    return (l + 1) * (2 * m - 1) * (6 if m == 2 else 2)


@dataclass(frozen=True)
class ExceptionalGroupSummary:
    assembled: int
    oracle: int
    constructed: int
    sign_monodromy: int
    u_order: int
    full: int
    stabilizer: int
    all_preserve_seifert: bool


def summarize(model: ExceptionalModel) -> ExceptionalGroupSummary:
    g = b3_seifert(model)
    assembled = b3_aut_assembly(model)
    oracle = b3_aut_oracle(model)
    constructed = b3_constructed(model)
    full = full_group(model)
    lat = model.lattice
    ok = all(preserves_form(x, g) for x in assembled) and all(
        preserves_form(x, lat.seifert) for x in full.elements())
    return ExceptionalGroupSummary(
        assembled=len(assembled),
        oracle=oracle.order(),
        constructed=constructed.order(),
        sign_monodromy=sign_monodromy_order(b3_monodromy(model)),
        u_order=radical_aut(model).order() // 2,
        full=full.order(),
        stabilizer=stabilizer_order(model),
        all_preserve_seifert=ok,
    )


def same_group(elements, group: MatGroup) -> bool:
    return frozenset(elements) == group.element_set()


__all__ = [
    "U12_RATIONAL_LIST", "hermitian_pair", "b3_monodromy", "b3_seifert", "assemble", "assemble_cyc",
    "crt_poly", "u12_candidates", "u12_lifts", "b3_aut_assembly", "b3_aut_oracle", "radical_aut",
    "b3_constructed", "sign_monodromy_order", "d_factor_group", "full_group", "stabilizer_order",
    "ExceptionalGroupSummary", "summarize", "same_group",
]
