import json

import pytest
from hypothesis import given, strategies as st

from milnor_lattices.catalog import a_series, d_series, t_pqr
from milnor_lattices.errors import DoesNotDescend, NoIntegralStokes, NotQuasiunipotent, NotUnipotentUpper
from milnor_lattices.exact import IntPoly, Matrix, char_poly, cyclotomic, cyclotomic_factor
from milnor_lattices.lattice import (
    Sublattice, coxeter_product, eigenlattice, from_dict, from_stokes, load_lattice,
    picard_lefschetz, quotient_gram, radical, restrict_gram, save_lattice, seifert_sign,
    stabilize, stabilize_to, stokes_from_monodromy, tensor, to_json,
)


@st.composite
def stokes_matrices(draw, max_mu=6):
    mu = draw(st.integers(1, max_mu))
    rows = [[0] * mu for _ in range(mu)]
    for i in range(mu):
        rows[i][i] = 1
        for j in range(i + 1, mu):
            rows[i][j] = draw(st.integers(-2, 2))
    return Matrix(rows)


A2 = Matrix([[1, -1], [0, 1]])


@pytest.mark.parametrize("n,mono,seifert", [
    (0, [[0, -1], [1, -1]], [[-1, 0], [1, -1]]),
    (2, [[0, -1], [1, -1]], [[1, 0], [-1, 1]]),
    (1, [[0, 1], [-1, 1]], [[-1, 0], [1, -1]]),
])
def test_from_stokes_a2(n, mono, seifert):
    lat = from_stokes(A2, n)
    assert lat.monodromy == Matrix(mono)
    assert lat.seifert == Matrix(seifert)
    assert lat.stokes == A2


def test_from_stokes_a1():
    lat = from_stokes(Matrix([[1]]), 0)
    assert lat.monodromy == Matrix([[-1]])
    assert lat.intersection == Matrix([[2]])


@pytest.mark.parametrize("n", range(4))
def test_period_four(n):
    s = Matrix([[1, 1, -2], [0, 1, 1], [0, 0, 1]])
    a, b = from_stokes(s, n), from_stokes(s, n + 4)
    assert (a.seifert, a.monodromy, a.intersection) == (b.seifert, b.monodromy, b.intersection)


def test_from_stokes_rejects_non_unipotent():
    with pytest.raises(NotUnipotentUpper):
        from_stokes(Matrix([[1, 0], [1, 1]]), 0)
    with pytest.raises(NotUnipotentUpper):
        from_stokes(Matrix([[2]]), 0)


def test_stokes_from_identity_fails():
    with pytest.raises(NoIntegralStokes):
        stokes_from_monodromy(Matrix.identity(2), 2)


@given(stokes_matrices(), st.integers(0, 3))
def test_stokes_round_trip(s, n):
    lat = from_stokes(s, n)
    assert stokes_from_monodromy(lat.monodromy, n) == s
    assert lat.seifert.det() in (1, -1)
    assert lat.intersection == lat.intersection.T.scale(1 if n % 2 == 0 else -1)
    # L(Mv, Mw) = L(v, w)
    assert lat.monodromy.T @ lat.seifert @ lat.monodromy == lat.seifert


@given(stokes_matrices(5), st.integers(0, 3))
def test_coxeter_product_is_monodromy(s, n):
    lat = from_stokes(s, n)
    assert coxeter_product(lat) == lat.monodromy


def test_picard_lefschetz_zero_vector():
    lat = a_series(3, 2)
    assert picard_lefschetz(lat, (0, 0, 0)) == Matrix.identity(3)


@pytest.mark.parametrize("lat", [a_series(l, 0) for l in range(1, 7)] + [d_series(k) for k in (4, 5, 6, 8)])
def test_catalog_coxeter(lat):
    assert coxeter_product(lat) == lat.monodromy


@pytest.mark.parametrize("nf,ng", [(0, 0), (0, 1), (1, 2), (2, 2), (3, 1)])
def test_tensor_signs(nf, ng):
    f, g = from_stokes(A2, nf), from_stokes(Matrix([[1]]), ng)
    t = tensor(f, g)
    assert t.n == nf + ng + 1
    assert t.monodromy == f.monodromy.kron(g.monodromy)
    assert t.seifert == t.stokes.T.scale(seifert_sign(t.n))
    parity = (-1) ** ((nf + 1) * (ng + 1))
    assert t.stokes == f.stokes.kron(g.stokes)
    assert seifert_sign(t.n) == parity * seifert_sign(nf) * seifert_sign(ng)


def test_tensor_a1_a1():
    a1 = a_series(1, 0)
    assert tensor(a1, a1).monodromy == Matrix([[1]])


def test_tensor_a2_a2_char_poly():
    a2 = a_series(2, 0)
    t = tensor(a2, a2)
    assert char_poly(t.monodromy) == IntPoly.t_minus(1) ** 2 * cyclotomic(3)


@given(stokes_matrices(4), st.integers(0, 3))
def test_stabilize(s, n):
    lat = from_stokes(s, n)
    up = stabilize(lat)
    assert up.n == n + 1
    assert up.stokes == lat.stokes
    assert up.monodromy == -lat.monodromy
    assert up.seifert == lat.seifert.scale((-1) ** n)
    assert stabilize_to(lat, (n + 3) % 4).n == n + 3


@pytest.mark.parametrize("triple,poly,rank", [
    ((6, 3, 2), IntPoly.t_minus(1), 2),
    ((3, 3, 3), cyclotomic(3) ** 3, 6),
    ((7, 3, 2), IntPoly.t_minus(1) ** 2, 2),
])
def test_eigenlattice_ranks(triple, poly, rank):
    sub = eigenlattice(t_pqr(*triple).lattice, poly)
    assert sub.rank == rank and sub.saturated


def test_eigenlattice_coprime_is_zero():
    assert eigenlattice(a_series(4, 0), cyclotomic(3)).rank == 0


@given(stokes_matrices(6), st.integers(0, 3))
def test_eigenlattices_fill_rank(s, n):
    lat = from_stokes(s, n)
    try:
        factors = cyclotomic_factor(char_poly(lat.monodromy))
    except NotQuasiunipotent:
        return
    ranks = [eigenlattice(lat, cyclotomic(m) ** e).rank for m, e in factors.items()]
    assert sum(ranks) <= lat.mu
    for m, e in factors.items():
        sub = eigenlattice(lat, cyclotomic(m) ** e)
        assert sub.saturated and sub.is_invariant(lat.monodromy)


@pytest.mark.parametrize("lat,rank", [
    (d_series(4), 2),
    (d_series(6), 2),
    (a_series(5, 2), 0),
    (t_pqr(7, 3, 2).lattice, 1),
    (t_pqr(3, 3, 3).lattice, 2),
])
def test_radical_rank(lat, rank):
    assert radical(lat).rank == rank


def test_restrict_gram_fixed_t333():
    m = t_pqr(3, 3, 3)
    assert restrict_gram(m.fixed_lattice) == Matrix([[0, -3], [3, 0]])
    assert restrict_gram(radical(m.lattice), "intersection").is_zero()


def test_restrict_gram_empty():
    sub = Sublattice(a_series(2, 0), Matrix.zeros(0, 2))
    assert restrict_gram(sub) == Matrix.zeros(0, 0)


@pytest.mark.parametrize("triple,arm,cartan", [
    ((3, 3, 3), 0, [[2, -1], [-1, 2]]),
    ((6, 3, 2), 0, [[2, -1, 0, 0, 0], [-1, 2, -1, 0, 0], [0, -1, 2, -1, 0],
                    [0, 0, -1, 2, -1], [0, 0, 0, -1, 2]]),
    ((6, 3, 2), 2, [[2]]),
])
def test_quotient_gram_arm(triple, arm, cartan):
    m = t_pqr(*triple)
    small = Sublattice.from_vectors(m.lattice, [m.b1_tilde])
    assert quotient_gram(small, m.arm_lattices[arm], "-intersection") == Matrix(cartan)


def test_quotient_gram_trivial_and_not_descending():
    m = t_pqr(3, 3, 3)
    rad = radical(m.lattice)
    assert quotient_gram(rad, rad, "intersection") == Matrix.zeros(0, 0)
    big = m.arm_lattices[0]
    small = Sublattice.from_vectors(m.lattice, [m.delta(1)])
    with pytest.raises(DoesNotDescend):
        quotient_gram(small, big, "intersection")


def test_json_round_trip(tmp_path):
    lat = d_series(6)
    path = tmp_path / "d6.json"
    save_lattice(lat, path)
    back = load_lattice(path)
    assert back == lat
    data = json.loads(to_json(lat))
    assert data["schema_version"] == 1 and data["mu"] == 6


@pytest.mark.parametrize("data", [
    {"schema_version": 99, "n": 0, "stokes": [[1]]},
    {"n": 0, "mu": 2, "stokes": [[1]]},
])
def test_from_dict_rejects(data):
    with pytest.raises(ValueError):
        from_dict(data)
