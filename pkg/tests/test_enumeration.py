import itertools

import pytest
from hypothesis import given, strategies as st

from milnor_lattices.catalog import a_series, t_pqr
from milnor_lattices import enumeration
from milnor_lattices.cyclotomic import CycNumber, norm_form
from milnor_lattices.enumeration import (
    HermitianPair, box_automorphisms, box_bound, brute_force_vectors, commutant_units,
    coords_to_pair, cyc_mat_identity, cyc_mat_mul, definite_aut, definiteness, find_cyclic_generator,
    form_418, gram_isometric, hermitian_solutions, lemma_hypotheses, ord_chain_exists,
    pair_to_coords, rational_part, recover_branches, short_vectors, sublattice_commutant_units,
    trace_gram, unit_times_rational, vectors_up_to, zxi_aut,
)
from milnor_lattices.errors import HypothesesFail, NotDefinite, NoSolution, UnsupportedCase
from milnor_lattices.exact import Matrix
from milnor_lattices.lattice import restrict_gram, restrict_matrix

A2 = Matrix([[2, -1], [-1, 2]])


@st.composite
def positive_forms(draw, n=3):
    b = Matrix([[draw(st.integers(-2, 2)) for _ in range(n)] for _ in range(n)])
    return b.T @ b + Matrix.identity(n)


@pytest.mark.parametrize("g,sign", [
    (A2, 1),
    (-A2, -1),
    (Matrix([[1, 0], [0, -1]]), 0),
    (Matrix([[0, 1], [1, 0]]), 0),
])
def test_definiteness(g, sign):
    assert definiteness(g) == sign


def test_short_vectors_a2():
    roots = short_vectors(A2, 2)
    assert len(roots) == 6
    assert short_vectors(-A2, -2) == roots
    assert short_vectors(A2, 0) == [(0, 0)]
    assert short_vectors(A2, -2) == []


def test_short_vectors_indefinite():
    with pytest.raises(NotDefinite):
        short_vectors(Matrix([[1, 0], [0, -1]]), 1)


@given(positive_forms(), st.integers(1, 8))
def test_short_vectors_against_box(g, target):
    assert short_vectors(g, target) == brute_force_vectors(g, target, box_bound(g, target))


@given(positive_forms(), st.integers(1, 6))
def test_vectors_up_to_against_box(g, bound):
    box = box_bound(g, bound)
    expected = sorted(v for v in itertools.product(range(-box, box + 1), repeat=3)
                      if any(v) and sum(a * b for a, b in zip(v, g @ v)) <= bound)
    assert vectors_up_to(g, bound) == expected


@pytest.mark.parametrize("g,order", [
    (A2, 12),
    (Matrix.identity(2), 8),
    (Matrix.diag([1, 2]), 4),
    (Matrix.identity(3), 48),
    (Matrix([[2, 1, 0], [1, 2, 1], [0, 1, 2]]), 48),
])
def test_definite_aut_orders(g, order):
    assert definite_aut(g).order() == order


@pytest.mark.parametrize("g", [A2, Matrix.diag([1, 2]), Matrix([[2, 1], [1, 3]])])
def test_definite_aut_against_box(g):
    group = sorted(definite_aut(g).elements(), key=lambda m: m.columns())
    assert group == box_automorphisms(g, 2)


def test_definite_aut_extra_form():
    # preserving a nonsymmetric form as well cuts Aut(A₂) down to ±M
    lat = a_series(2, 0)
    g = lat.seifert + lat.seifert.T
    assert definite_aut(-g, [lat.seifert]).order() == 6


def test_gram_isometric():
    ok, x = gram_isometric(A2, Matrix([[2, 1], [1, 2]]))
    assert ok and x.T @ A2 @ x == Matrix([[2, 1], [1, 2]])
    assert gram_isometric(A2, Matrix.diag([1, 3]))[0] is False
    assert gram_isometric(Matrix.diag([1, 4]), Matrix.diag([2, 2]))[0] is False


@given(positive_forms(2))
def test_gram_isometric_to_transform(g):
    u = Matrix([[1, 1], [0, 1]])
    ok, x = gram_isometric(g, u.T @ g @ u)
    assert ok and x.T @ g @ x == u.T @ g @ u


# ---------------------------------------------------------------------------
# ℤ[ξ]


@pytest.mark.parametrize("l,count", [(3, 6), (4, 4), (5, 10)])
def test_units(l, count):
    units = CycNumber.units(l)
    assert len(units) == count
    assert all(u.abs2() == 1 for u in units)


@pytest.mark.parametrize("l", [3, 4, 5])
def test_xi_order_and_conj(l):
    xi = CycNumber.xi(l)
    assert xi ** l == 1
    assert xi * xi.conj() == 1
    assert (xi + xi.conj()).is_real()


@pytest.mark.parametrize("l,a,b", [(3, 1, 1), (3, 2, -1), (4, 1, 2), (4, -3, 1)])
def test_norm_form(l, a, b):
    assert CycNumber(l, [a, b]).abs2() == norm_form(l, a, b)


def test_unsupported_root_order():
    with pytest.raises(UnsupportedCase):
        CycNumber(6, [1])


@pytest.mark.parametrize("m,l", [(1, 3), (2, 6), (3, 5), (4, 5)])
def test_hermitian_pair_unsupported(m, l):
    with pytest.raises(UnsupportedCase):
        HermitianPair(m, l)


def test_hermitian_2_5_thirty_vectors():
    hp = HermitianPair(2, 5)
    sols = hermitian_solutions(hp, 2)
    assert len(sols) == 30
    assert sols == unit_times_rational(hp, 2)
    xi = CycNumber.xi(5)
    s = set(sols)
    assert {(xi * a, xi * b) for a, b in sols} == s
    assert {(-a, -b) for a, b in sols} == s
    assert all(form_418(pair_to_coords(r)) == 2 for r in sols)


def test_coords_round_trip():
    v = (1, 0, -1, 2, 0, 3, 0, -1)
    assert pair_to_coords(coords_to_pair(v)) == v


@pytest.mark.parametrize("m,l,target,exclude", [
    (2, 3, 2, False), (2, 4, 2, False), (2, 5, 2, False),
    (3, 3, 2, False), (3, 3, 3, True), (3, 4, 2, False), (3, 4, 3, True),
    (4, 3, 4, True), (4, 4, 4, True),
])
def test_hermitian_structure(m, l, target, exclude):
    hp = HermitianPair(m, l)
    assert hermitian_solutions(hp, target, exclude) == unit_times_rational(hp, target, exclude)


@pytest.mark.parametrize("m,target,expected", [
    (2, 2, [(-1, -1), (-1, 0), (0, 1), (0, -1), (1, 0), (1, 1)]),
    (3, 3, [(-1, -1), (0, -1), (0, 1), (1, 1)]),
])
def test_rational_solutions(m, target, expected):
    assert sorted(HermitianPair(m, 3).rational_solutions(target)) == sorted(expected)


@pytest.mark.parametrize("m,l,order,rational", [
    (2, 3, 36, 12), (2, 4, 24, 12), (2, 5, 60, 12),
    (3, 3, 12, 4), (3, 4, 8, 4), (4, 4, 8, 4),
])
def test_zxi_aut(m, l, order, rational):
    hp = HermitianPair(m, l)
    group = zxi_aut(hp)
    assert len(group) == order
    assert len(rational_part(group)) == rational
    s = set(group)
    assert cyc_mat_identity(l) in s
    assert all(cyc_mat_mul(x, y) in s for x in group[:6] for y in group)


# ---------------------------------------------------------------------------
# finite commutant units


@pytest.mark.parametrize("orders,ok", [
    ([1], True),
    ([15, 3], True),
    ([12, 6, 4, 2], True),
    ([21, 3], True),
    ([15, 5], True),
    ([3, 5], False),
])
def test_ord_chain(orders, ok):
    assert ord_chain_exists(orders) is ok


def test_trace_gram_a2():
    m = a_series(2, 0).monodromy
    assert trace_gram(m) == Matrix([[2, -1], [-1, 2]])


def test_find_cyclic_generator():
    m = a_series(4, 0).monodromy
    v = find_cyclic_generator(m)
    assert v is not None
    cols = [v]
    for _ in range(3):
        cols.append(m @ cols[-1])
    assert Matrix.from_columns(cols).det() in (1, -1)


@pytest.mark.parametrize("l,order", [(1, 2), (2, 6), (3, 8), (4, 10), (5, 12), (6, 14)])
def test_commutant_units_a_series(l, order):
    # {±M^k}; for A₁ the monodromy is already −1
    lat = a_series(l, 0)
    assert commutant_units(lat.monodromy, lat.seifert).order() == order


@pytest.mark.parametrize("l,box", [(2, 3), (4, 2)])
def test_commutant_units_against_box(l, box):
    lat = a_series(l, 0)
    group = sorted(commutant_units(lat.monodromy, lat.seifert).elements(), key=lambda m: m.columns())
    assert group == box_automorphisms(lat.seifert, box)


@pytest.mark.parametrize("triple,arm", [((3, 3, 3), 0), ((3, 3, 3), 2), ((4, 4, 2), 0), ((6, 3, 2), 1), ((6, 3, 2), 2)])
def test_arm_units_against_box(triple, arm):
    model = t_pqr(*triple)
    sub = model.arm_lattices[arm]
    m = restrict_matrix(model.lattice.monodromy, sub)
    group = sublattice_commutant_units(model.lattice, sub)
    assert group.order() == 2 * triple[arm]
    box = box_automorphisms(restrict_gram(sub), 2, commuting=m)
    assert sorted(group.elements(), key=lambda x: x.columns()) == box


def test_commutant_hypotheses_fail():
    m = Matrix([[1, 1], [0, 1]])
    hyp = lemma_hypotheses(m, Matrix.identity(2))
    assert hyp.finite_order and not hyp.squarefree and not hyp.all_hold
    with pytest.raises(HypothesesFail):
        commutant_units(m, Matrix.identity(2))


def test_commutant_repeated_eigenvalue_fails():
    with pytest.raises(HypothesesFail):
        commutant_units(-Matrix.identity(2), Matrix.identity(2))


# ---------------------------------------------------------------------------
# branches


@pytest.mark.parametrize("g,r,expected", [
    (Matrix([[-2]]), 2, [((-1,), (1,))]),
    (Matrix([[-4, 1], [1, -3]]), 3, [((-1, -1), (0, 1), (1, 0))]),
])
def test_recover_branches(g, r, expected):
    assert recover_branches(g, r) == expected


def test_recover_branches_errors():
    with pytest.raises(NotDefinite):
        recover_branches(A2, 3)
    with pytest.raises(ValueError):
        recover_branches(-A2, 2)
    with pytest.raises(NoSolution):
        recover_branches(Matrix([[-1, 0], [0, -1]]), 3)


@pytest.mark.parametrize("triple,arm", [((3, 3, 3), 0), ((6, 3, 2), 1), ((6, 3, 2), 2), ((4, 4, 2), 0)])
def test_commuting_box_matches_backtracking(monkeypatch, triple, arm):
    model = t_pqr(*triple)
    sub = model.arm_lattices[arm]
    c = restrict_matrix(model.lattice.monodromy, sub)
    g = restrict_gram(sub)
    fast = box_automorphisms(g, 2, commuting=c)
    monkeypatch.setattr(enumeration, "_box_commuting", lambda *args: None)
    assert box_automorphisms(g, 2, commuting=c) == fast
    assert fast
