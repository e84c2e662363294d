"""The ten acceptance criteria, each reported as one PASS/FAIL line in the summary."""
import time

from milnor_lattices import catalog, suites
from milnor_lattices import exceptional_groups as xg
from milnor_lattices.catalog import ELLIPTIC_TRIPLES, FAMILY_NAMES, exceptional, hyperbolic_triples, t_pqr
from milnor_lattices.enumeration import (
    box_automorphisms, brute_force_vectors, commutant_units, definite_aut, scaled_form_418,
    short_vectors, sublattice_commutant_units,
)
from milnor_lattices.exact import Matrix, char_poly, cyclotomic_factor
from milnor_lattices.groups import MatGroup, kernel_group, kernel_on_sublattice
from milnor_lattices.lattice import restrict_gram, restrict_matrix

TRIPLES = list(ELLIPTIC_TRIPLES) + hyperbolic_triples(5)


def _sign_powers(m: Matrix) -> frozenset:
    return MatGroup([m, -Matrix.identity(m.nrows)]).element_set()


def test_ac01_tpqr_invariants(acceptance):
    t0 = time.perf_counter()
    t_pqr.cache_clear()
    ok = len(TRIPLES) == 8
    for triple in TRIPLES:
        m = t_pqr(*triple)
        lat, chi, kappa = m.lattice, m.chi, m.kappa
        b1, b2 = m.b1_tilde, m.b2_tilde
        shift = chi * (kappa - 1)
        ok &= lat.L(b1, b2) == -chi
        ok &= lat.M(b2) == tuple(x + shift * y for x, y in zip(b2, b1))
        ok &= restrict_gram(m.fixed_lattice) == Matrix([[0, -chi], [chi, chi * chi * (kappa - 1) / 2]])
    assert acceptance(1, "T_pqr pairing, monodromy on b̃₂ and fixed Gram, 8 triples",
                      ok, time.perf_counter() - t0, 1)


def test_ac02_char_polys(acceptance):
    t0 = time.perf_counter()
    catalog._exceptional_builtin.cache_clear()
    table = {"Q12": {3: 2, 15: 1}, "U12": {2: 2, 4: 2, 6: 1, 12: 1}, "Q16": {3: 2, 21: 1}, "U16": {5: 2, 15: 1}}
    ok = True
    for name in FAMILY_NAMES:
        e = exceptional(name)
        ok &= (e.p1 % e.p2).is_zero() and e.p1.degree + e.p2.degree == int(name[1:])
        if e.available:
            ok &= cyclotomic_factor(char_poly(e.lattice.monodromy)) == table[name]
        else:
            ok &= name in ("Z12", "Z18")
    assert acceptance(2, "characteristic polynomials of the six families", ok, time.perf_counter() - t0, 1)


def test_ac03_norm2_vectors(acceptance):
    t0 = time.perf_counter()
    g = scaled_form_418()
    naive = brute_force_vectors(g, 16, 1)
    ok = set(naive) == set(suites.NORM2_VECTORS_2_5) and len(naive) == 30
    ok &= set(short_vectors(g, 16)) == set(naive)
    assert acceptance(3, "(m, l) = (2, 5): norm-2 vectors by naive box search", ok, time.perf_counter() - t0, 10)


def test_ac04_definite_aut(acceptance):
    t0 = time.perf_counter()
    cases = [([[-2, 1], [1, -2]], 12), ([[-2, 1], [1, -3]], 4), ([[-2, 1], [1, -4]], 4),
             ([[-4, 1], [1, -3]], 2), ([[-6, 1], [1, -3]], 2)]
    ok = all(definite_aut(Matrix(g)).order() == n for g, n in cases)
    assert acceptance(4, "definite automorphism orders 12, 4, 4, 2, 2", ok, time.perf_counter() - t0)


def test_ac05_b3_aut(acceptance):
    t0 = time.perf_counter()
    expected = {"Q12": 12, "U12": 48, "Q16": 12, "U16": 60}
    ok = True
    for name, order in expected.items():
        model = exceptional(name)
        assembled = xg.b3_aut_assembly(model)
        ok &= len(assembled) == order
        ok &= xg.same_group(assembled, xg.b3_constructed(model))
        ok &= xg.same_group(assembled, xg.b3_aut_oracle(model))
    assert acceptance(5, "Aut(B₃, L) = 12, 48, 12, 60 with constructed and oracle groups",
                      ok, time.perf_counter() - t0, 30)


def test_ac06_gamma_criterion(acceptance):
    t0 = time.perf_counter()
    ok = True
    for triple in ELLIPTIC_TRIPLES:
        report = suites.cmd_gamma(*triple, bound=6, samples=100, seed=0)
        ok &= not report.failures
        scans = {a.id: a.computed for a in report.assertions}
        ok &= scans["box_mismatches"] == [] and scans["word_mismatches"] == []
    assert acceptance(6, "Γ(p) criterion: box of bound 6 plus 100 seeded words, 3 triples",
                      ok, time.perf_counter() - t0, 30)


def test_ac07_kernel_groups(acceptance):
    t0 = time.perf_counter()
    ok = True
    for triple, order in suites.KERNEL_ORDERS.items():
        m = t_pqr(*triple)
        k = kernel_group(m)
        ok &= k.order() == order and -Matrix.identity(m.mu) in k
        triv = kernel_on_sublattice(k.elements(), m.fixed_lattice)
        ok &= triv.order() == order // 2
        if triple == (6, 3, 2):
            ok &= triv.element_set() == MatGroup([m.lattice.monodromy]).element_set()
        else:
            ok &= not triv.is_cyclic()
    assert acceptance(7, "kernel orders 108, 32, 12; fixed parts 54, 16, 6; cyclicity", ok, time.perf_counter() - t0)


def test_ac08_stabilizer_relation(acceptance):
    t0 = time.perf_counter()
    stabilizers = {"Q12": 30, "U12": 72, "Q16": 42, "U16": 90}
    ok = True
    for name, stab in stabilizers.items():
        model = exceptional(name)
        ok &= xg.stabilizer_order(model) == stab
        ok &= xg.full_group(model).order() == 2 * stab
    assert acceptance(8, "G_ℤ order is twice the stabilizer: 60, 144, 84, 180", ok, time.perf_counter() - t0)


def test_ac09_commutant_units(acceptance):
    t0 = time.perf_counter()
    ok = True
    for l in range(1, 7):
        lat = catalog.a_series(l)
        units = commutant_units(lat.monodromy, lat.seifert)
        ok &= units.element_set() == _sign_powers(lat.monodromy)
        if l <= 4:
            ok &= set(box_automorphisms(lat.seifert, 2)) == units.element_set()
    for triple in TRIPLES:
        m = t_pqr(*triple)
        for sub in m.arm_lattices:
            units = sublattice_commutant_units(m.lattice, sub)
            mr = restrict_matrix(m.lattice.monodromy, sub)
            ok &= units.element_set() == _sign_powers(mr)
            if sub.rank <= 4:
                box = box_automorphisms(restrict_gram(sub), 2, commuting=mr)
                ok &= set(box) == units.element_set()
    assert acceptance(9, "commutant units on A₁..A₆ and all arm lattices, box oracle at rank ≤ 4",
                      ok, time.perf_counter() - t0, 60)


def test_ac10_property_suites(acceptance):
    t0 = time.perf_counter()
    report = suites.cmd_properties(seed=0, samples=100)
    ok = not report.failures and report.counts()["PASS"] > 100
    assert acceptance(10, "lattice laws over the catalog and 100 random Stokes matrices",
                      ok, time.perf_counter() - t0)
