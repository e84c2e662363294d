"""Verification suites behind the command-line front end.

Each ``cmd_*`` returns a finished ``Report``. Catalog constructors are looked
up through this module's namespace so a test can swap in a corrupted entry
and watch the matching assertion fail.
"""
from __future__ import annotations

from fractions import Fraction

from . import exceptional_groups as xg
from .catalog import (
    ELLIPTIC_TRIPLES, FAMILIES, FAMILY_NAMES, a_series, d_radical_gram, d_series, exceptional,
    find_orlik, hyperbolic_triples, t_pqr,
)
from .enumeration import (
    HermitianPair, brute_force_vectors, coords_to_pair, definite_aut, definiteness, gram_isometric,
    hermitian_solutions, match_printed_gram, pair_to_coords, recover_branches, scaled_form_418,
    short_vectors, sublattice_commutant_units, unit_times_rational, zxi_aut,
)
from .errors import (
    CapExceeded, CatalogIntegrityError, NotFound, NotInvariant, NotQuasiunipotent, UnsupportedCase,
)
from .exact import IntPoly, Matrix, char_poly, cyclotomic, cyclotomic_factor, format_cyclotomic
from .groups import (
    MatGroup, SL2Matrix, gamma_lift, gamma_membership, kernel_group, kernel_on_sublattice,
    preserves_seifert, random_sl2_word, restrict, sl2_box, u1_element, u1_tuples, u2_generators,
    u2_group,
)
from .lattice import (
    BilinearLattice, Sublattice, coxeter_product, eigenlattice, from_stokes, quotient_gram, radical,
    restrict_gram, restrict_matrix, seifert_sign, stabilize, stokes_from_monodromy, tensor,
)
from .report import Report
from .rng import SplitMix64

# orders of the finite kernel ⟨U₁(δ = 0), U₂, −id⟩ for the simple elliptic triples
KERNEL_ORDERS = {(3, 3, 3): 108, (4, 4, 2): 32, (6, 3, 2): 12}
B3_AUT_ORDERS = {"Q12": 12, "U12": 48, "Q16": 12, "U16": 60}

# the 30 integer 8-tuples of norm 2 for (m, l) = (2, 5)
NORM2_VECTORS_2_5 = tuple(sorted(
    {tuple(s * int(i == j) for i in range(8)) for j in range(8) for s in (1, -1)}
    | {tuple(s * int(i in (j, j + 4)) for i in range(8)) for j in range(4) for s in (1, -1)}
    | {tuple(s * x for x in v) for s in (1, -1)
       for v in ((1, 1, 1, 1, 0, 0, 0, 0), (0, 0, 0, 0, 1, 1, 1, 1), (1, 1, 1, 1, 1, 1, 1, 1))}
))

# Kaenders data: radical Gram, branch count and the printed full branch Gram
KAENDERS_DATA = {
    "D4": (((-2, 1), (1, -2)), 3, ((-2, 1, 1), (1, -2, 1), (1, 1, -2)), 12),
    "Z12": (FAMILIES["Z12"].radical_gram, 3, FAMILIES["Z12"].full_gram, 2),
    "Z18": (FAMILIES["Z18"].radical_gram, 3, FAMILIES["Z18"].full_gram, 2),
}
DEFINITE_AUT_EXAMPLES = (
    (((-2, 1), (1, -2)), 12),
    (((-2, 1), (1, -3)), 4),
    (((-2, 1), (1, -4)), 4),
    (((-4, 1), (1, -3)), 2),
    (((-6, 1), (1, -3)), 2),
)


# ---------------------------------------------------------------------------
# generic lattice laws


def lattice_laws(report: Report, lat: BilinearLattice, label: str):
    """Seifert/monodromy/intersection relations and the Coxeter product."""
    n, s, m, i = lat.n, lat.seifert, lat.monodromy, lat.intersection
    report.check(f"{label}.monodromy_seifert", "laws/monodromy-seifert",
                 m.T @ s, s.T.scale((-1) ** (n + 1)))
    report.check(f"{label}.intersection_seifert", "laws/intersection-seifert",
                 i, -s + s.T.scale((-1) ** (n + 1)))
    report.check(f"{label}.coxeter_product", "laws/coxeter-product", coxeter_product(lat), m)
    report.holds(f"{label}.seifert_unimodular", "laws/seifert-unimodular", s.det() in (1, -1), "PAPER")
    report.holds(f"{label}.monodromy_preserves_seifert", "laws/monodromy-invariance",
                 preserves_seifert(m, lat), "PAPER")


def eigenlattice_saturation(report: Report, lat: BilinearLattice, label: str):
    """Every ker Φ_k(M)^e is saturated, M-invariant, and the ranks add up to μ."""
    factors = cyclotomic_factor(char_poly(lat.monodromy))
    ok, total = True, 0
    for k, e in factors.items():
        sub = eigenlattice(lat, cyclotomic(k) ** e)
        ok = ok and sub.saturated and sub.is_invariant(lat.monodromy)
        total += sub.rank
    report.holds(f"{label}.eigenlattices_saturated", "laws/eigenlattice-saturation", ok)
    report.check(f"{label}.eigenlattice_ranks", "laws/eigenlattice-saturation", total, lat.mu, "DERIVED")


def sign_laws(report: Report, f: BilinearLattice, g: BilinearLattice, label: str):
    """Thom–Sebastiani and stabilization sign laws on a pair of lattices."""
    t = tensor(f, g)
    report.check(f"{label}.tensor_parity", "laws/thom-sebastiani", t.n, f.n + g.n + 1)
    report.check(f"{label}.tensor_monodromy", "laws/thom-sebastiani", t.monodromy, f.monodromy.kron(g.monodromy))
    sign = seifert_sign(t.n) * seifert_sign(f.n) * seifert_sign(g.n)
    report.check(f"{label}.tensor_seifert", "laws/thom-sebastiani", t.seifert, f.seifert.kron(g.seifert).scale(sign))
    sf = stabilize(f)
    report.check(f"{label}.stabilize_stokes", "laws/stabilization", sf.stokes, f.stokes)
    report.check(f"{label}.stabilize_seifert", "laws/stabilization", sf.seifert,
                 f.seifert.scale(seifert_sign(f.n + 1) * seifert_sign(f.n)))
    report.check(f"{label}.stabilize_monodromy", "laws/stabilization", sf.monodromy, -f.monodromy)


def random_stokes(rng: SplitMix64, mu: int, spread: int = 2) -> Matrix:
    rows = [[0] * mu for _ in range(mu)]
    for i in range(mu):
        rows[i][i] = 1
        for j in range(i + 1, mu):
            rows[i][j] = rng.below(2 * spread + 1) - spread
    return Matrix(rows)


def cmd_properties(seed: int = 0, samples: int = 100) -> Report:
    """Lattice laws over the catalog plus ``samples`` random Stokes matrices."""
    report = Report(f"properties --seed {seed} --samples {samples}")
    lats: list[tuple[str, BilinearLattice]] = []
    for l in range(1, 7):
        lats.append((f"A{l}", a_series(l)))
    for k in (4, 5, 6, 8):
        lats.append((f"D{k}", d_series(k)))
    for t in list(ELLIPTIC_TRIPLES) + hyperbolic_triples(5):
        lats.append((t_pqr(*t).name, t_pqr(*t).lattice))
    for name in FAMILY_NAMES:
        model = exceptional(name)
        if model.available:
            lats.append((name, model.lattice))
    for label, lat in lats:
        lattice_laws(report, lat, label)
        eigenlattice_saturation(report, lat, label)
    rng = SplitMix64(seed)
    bad = []
    for k in range(samples):
        mu = 1 + rng.below(5)
        n = rng.below(4)
        s = random_stokes(rng, mu)
        lat = from_stokes(s, n, provenance=f"random #{k}")
        sub = Report("")
        lattice_laws(sub, lat, "r")
        if _finite_monodromy(lat):
            eigenlattice_saturation(sub, lat, "r")
        sign_laws(sub, lat, a_series(1 + rng.below(2)), "r")
        sub.check("r.stokes_roundtrip", "laws/stokes-monodromy", stokes_from_monodromy(lat.monodromy, n), s)
        if sub.failures:
            bad.append(k)
    report.check("random.failing_samples", "laws/random", bad, [], "TRIVIAL",
                 note=f"{samples} random Stokes matrices, seed {seed}")
    return report.finish()


def _finite_monodromy(lat: BilinearLattice) -> bool:
    try:
        cyclotomic_factor(char_poly(lat.monodromy))
        return True
    except NotQuasiunipotent:
        return False


# ---------------------------------------------------------------------------
# T_pqr


def _expected_u2_order(p: int, q: int, r: int) -> int:
    if p == q == r:
        return 6
    return 2 if p == q or q == r else 1


def _restrict_or_none(g: Matrix, sub: Sublattice) -> Matrix | None:
    """Restriction, or None when g does not preserve sub (reported as a mismatch)."""
    try:
        return restrict(g, sub)
    except NotInvariant:
        return None


def cmd_tpqr(p: int, q: int, r: int) -> Report:
    report = Report(f"tpqr --p {p} --q {q} --r {r}")
    try:
        model = t_pqr(p, q, r)
    except CatalogIntegrityError as e:
        report.fail("catalog", "catalog/integrity", str(e))
        return report.finish()
    lat = model.lattice
    report.add_provenance(lat.provenance)
    chi, kappa = model.chi, model.kappa
    b1, b2 = model.b1_tilde, model.b2_tilde
    shift = chi * (kappa - 1)

    lattice_laws(report, lat, model.name)
    report.check("b1_b2_pairing", "tpqr/seifert-pairing", lat.L(b1, b2), -chi)
    report.check("monodromy_b1", "tpqr/monodromy-on-fixed", lat.M(b1), tuple(b1))
    report.check("monodromy_b2", "tpqr/monodromy-on-fixed", lat.M(b2),
                 tuple(x + shift * y for x, y in zip(b2, b1)))
    gram = Matrix([[lat.L(b1, b1), lat.L(b1, b2)], [lat.L(b2, b1), lat.L(b2, b2)]])
    report.check("fixed_gram", "tpqr/gram", gram, Matrix([[0, -chi], [chi, Fraction(chi * chi) * (kappa - 1) / 2]]))
    fixed = Sublattice.from_vectors(lat, [b1, b2])
    report.holds("fixed_lattice", "tpqr/fixed-lattice",
                 fixed.saturated and fixed.same_lattice(eigenlattice(lat, IntPoly.t_minus(1) ** 2)), "PAPER")
    report.check("restricted_monodromy", "tpqr/monodromy-on-fixed",
                 _restrict_or_none(lat.monodromy, fixed), Matrix([[1, shift], [0, 1]]))

    b1_line = Sublattice.from_vectors(lat, [b1])
    for k, (arm, size) in enumerate(zip(model.arms, (p, q, r)), start=1):
        with report.section(f"arm{k}", "tpqr/arm-units"):
            _arm_checks(report, model, k, arm, size, b1_line)
    with report.section("u1", "tpqr/u1-membership"):
        _u1_checks(report, model, fixed)
    with report.section("u2", "tpqr/u2-order"):
        u2 = u2_group(model)
        report.check("u2_order", "tpqr/u2-order", u2.order(), _expected_u2_order(p, q, r))
        report.holds("u2_preserve_seifert", "tpqr/u2-order",
                     all(preserves_seifert(g, lat) for g in u2_generators(model)))
    if model.simple_elliptic:
        with report.section("elliptic", "elliptic/kernel-order"):
            _elliptic_checks(report, model, fixed)
    return report.finish()


def _arm_checks(report: Report, model, k: int, arm: tuple, size: int, b1_line: Sublattice):
    lat, mu, b1 = model.lattice, model.mu, model.b1_tilde
    sub = model.arm_lattices[k - 1]
    chain = [tuple(int(i == arm[0]) + b1[i] for i in range(mu))]
    chain += [model.delta(i + 1) for i in arm[1:]]
    chain.append(tuple(-int(i in arm) for i in range(mu)))
    cyc = all(lat.M(a) == b for a, b in zip(chain, chain[1:] + chain[:1]))
    report.holds(f"arm{k}.cycling", "tpqr/arm-cycling", cyc, "PAPER")
    units = sublattice_commutant_units(lat, sub)
    mr = restrict_matrix(lat.monodromy, sub)
    report.check(f"arm{k}.units_order", "tpqr/arm-units", units.order(), 2 * size)
    report.holds(f"arm{k}.units_are_sign_monodromy", "tpqr/arm-units",
                 units.element_set() == MatGroup([mr, -Matrix.identity(mr.nrows)]).element_set(), "PAPER")
    quot = quotient_gram(b1_line, sub, "intersection")
    cartan = Matrix([[2 if i == j else -1 if abs(i - j) == 1 else 0 for j in range(size - 1)]
                     for i in range(size - 1)])
    report.holds(f"arm{k}.quotient_root_type", "tpqr/arm-quotient",
                 quot.nrows == size - 1 and gram_isometric(-quot, cartan)[0], "PAPER",
                 note=f"A{size - 1}")


def _u1_checks(report: Report, model, fixed: Sublattice):
    lat = model.lattice
    zero = u1_tuples(model, 0)
    elems = {t: u1_element(model, 0, *t) for t in zero}
    report.holds("u1_preserve_seifert", "tpqr/u1-membership",
                 all(preserves_seifert(g, lat) for g in elems.values()), "PAPER")
    ident2 = Matrix.identity(2)
    report.holds("u1_trivial_on_fixed", "tpqr/u1-membership",
                 all(_restrict_or_none(g, fixed) == ident2 for g in elems.values()), "PAPER")
    sizes = (model.p, model.q, model.r)
    law = all(
        elems[s] @ elems[t] == elems[tuple((a + b) % n for a, b, n in zip(s, t, sizes))]
        for s in zero for t in zero
    )
    report.holds("u1_additive_law", "tpqr/u1-membership", law, note=f"{len(zero)}² products")
    one = u1_tuples(model, 1)
    t_elem = u1_element(model, 1, *one[0])
    report.holds("u1_T_preserves_seifert", "tpqr/u1-membership", preserves_seifert(t_elem, lat), "PAPER")
    report.check("u1_T_on_fixed", "tpqr/u1-membership", _restrict_or_none(t_elem, fixed), Matrix([[1, 1], [0, 1]]))
    try:
        MatGroup([t_elem]).elements(cap=500)
        infinite = False
    except CapExceeded:
        infinite = True
    report.holds("u1_T_infinite_order", "tpqr/u1-infinite", infinite, "PAPER")


def _elliptic_checks(report: Report, model, fixed: Sublattice):
    lat = model.lattice
    p, q, r, mu = model.p, model.q, model.r, model.mu
    d = model.delta
    other = char_poly(lat.monodromy) // (IntPoly.t_minus(1) ** 2)
    report.holds("ml_neq1_generators", "elliptic/ml-neq1-generators",
                 model.ml_neq1.same_lattice(eigenlattice(lat, other)), "PAPER")
    if r == 2:
        printed = tuple((p // r) * a - b for a, b in zip(d(2), d(mu - 2)))
        report.check("ml_neq1_printed_r2_generator", "elliptic/ml-neq1-generators",
                     model.ml_neq1.contains(printed), False, "DERIVED",
                     note="printed sign lies outside Ml_{≠1}; the sign-corrected vector is used")
    full = Matrix(list(model.ml_neq1.basis.rows) + [d(2), d(mu)])
    report.holds("splitting", "elliptic/splitting", full.det() in (1, -1), "PAPER")
    report.check("gamma1", "elliptic/gamma-vectors",
                 tuple(a + p * b for a, b in zip(model.gamma1, d(2))), tuple(model.b1_tilde))
    report.check("gamma2", "elliptic/gamma-vectors",
                 tuple(a + p * b for a, b in zip(model.gamma2, d(mu))), tuple(model.b2_tilde))
    kg = kernel_group(model)
    elems = kg.elements()
    expected = KERNEL_ORDERS[(p, q, r)]
    report.check("kernel_order", "elliptic/kernel-order", len(elems), expected)
    minus = -Matrix.identity(mu)
    report.check("kernel_sign_quotient", "elliptic/kernel-order",
                 len(elems) // 2 if minus in kg else None, expected // 2)
    triv = kernel_on_sublattice(elems, fixed)
    report.check("fixed_kernel_order", "elliptic/kernel-order", triv.order(), expected // 2)
    cyclic = triv.is_cyclic()
    if (p, q, r) == (6, 3, 2):
        m = lat.monodromy
        gen_by_m = m in triv and MatGroup([m]).order() == triv.order()
        report.holds("fixed_kernel_generated_by_monodromy", "elliptic/kernel-cyclic", gen_by_m, "PAPER")
        report.check("fixed_kernel_cyclic", "elliptic/kernel-cyclic", cyclic, True)
    else:
        report.check("fixed_kernel_cyclic", "elliptic/kernel-cyclic", cyclic, False,
                     note="obstruction to the cyclic kernel")


# ---------------------------------------------------------------------------
# exceptional families


def cmd_exceptional(name: str, stokes_file: str | None = None) -> Report:
    report = Report(f"exceptional --name {name}")
    try:
        model = exceptional(name, stokes_file)
    except CatalogIntegrityError as e:
        report.fail("catalog", "catalog/integrity", str(e))
        return report.finish()
    report.add_provenance(f"{name}: {model.provenance}")
    data = FAMILIES[name]
    deg1, deg2 = model.p1.degree, model.p2.degree
    report.holds("p2_divides_p1", "exceptional/char-poly-table", (model.p1 % model.p2).is_zero(), "PAPER")
    mu = int(name[1:])
    report.check("degree_sum", "exceptional/char-poly-table", deg1 + deg2, mu)
    if not model.available:
        _radical_only(report, model)
        report.skip("full_lattice", "exceptional/full-lattice",
                    "SKIPPED-no-data: no distinguished basis available for this family")
        return report.finish()
    lat = model.lattice
    factors = cyclotomic_factor(char_poly(lat.monodromy))
    report.check("char_poly", "exceptional/char-poly-table", format_cyclotomic(factors),
                 format_cyclotomic(model.pch_factors))
    if model.radical_gram is not None:
        _radical_only(report, model)
    if data.tensor is None or model.tensor_factors is None:
        report.check("b3_rank", "exceptional/b3-rank", model.B3.rank, 2 * deg2)
        return report.finish()
    lattice_laws(report, lat, name)
    b3 = model.B3
    report.check("b3_rank", "exceptional/b3-rank", b3.rank, 2 * deg2)
    report.holds("b3_is_eigenlattice", "exceptional/b3-rank", b3.same_lattice(eigenlattice(lat, model.p2)), "PAPER")
    l, two_m = model.tensor_factors
    ref = model.factor_lattices[0].seifert.kron(d_radical_gram(two_m // 2))
    report.check("b3_gram", "exceptional/b3-gram", restrict_gram(b3, "seifert"), ref)

    with report.section("b3_aut", "exceptional/b3-aut"):
        _b3_aut_checks(report, model)
    with report.section("full_group", "exceptional/half-as-many"):
        _full_group_checks(report, model)
    try:
        a1, a2 = find_orlik(model)
        report.holds("orlik", "exceptional/orlik", True, "PAPER", note=f"a1={list(a1)} a2={list(a2)}")
    except NotFound as e:
        report.fail("orlik", "exceptional/orlik", str(e), "PAPER")
    if name == "U12":
        _u12_filter(report)
    return report.finish()


def _b3_aut_checks(report: Report, model):
    data = FAMILIES[model.name]
    assembled = xg.b3_aut_assembly(model)
    g3 = xg.b3_seifert(model)
    report.check("b3_aut_order", "exceptional/b3-aut", len(assembled), B3_AUT_ORDERS[model.name], "DERIVED")
    report.holds("b3_aut_preserves_L", "exceptional/b3-aut", all(x.T @ g3 @ x == g3 for x in assembled))
    report.holds("b3_aut_oracle_agrees", "exceptional/b3-aut", xg.same_group(assembled, xg.b3_aut_oracle(model)),
                 note="isometries of the definite L + Lᵀ keeping L")
    constructed = xg.b3_constructed(model)
    report.holds("b3_aut_equals_constructed", "exceptional/b3-aut-structure", xg.same_group(assembled, constructed))
    sm = xg.sign_monodromy_order(xg.b3_monodromy(model))
    u = xg.radical_aut(model).order() // 2
    report.check("b3_aut_structure", "exceptional/b3-aut-structure", sm * u, len(assembled), "PAPER",
                 note=f"|±(M|B₃)^k| = {sm}, |U| = {u}")
    report.check("u_order", "exceptional/u-order", u, data.u_order)


def _full_group_checks(report: Report, model):
    data = FAMILIES[model.name]
    lat = model.lattice
    u = xg.radical_aut(model).order() // 2
    full = xg.full_group(model)
    report.check("stabilizer_order", "exceptional/stabilizer-order", xg.stabilizer_order(model),
                 data.stabilizer_order)
    report.check("full_group_order", "exceptional/half-as-many", full.order(), 2 * data.stabilizer_order, "DERIVED")
    report.holds("full_group_preserves_seifert", "exceptional/half-as-many",
                 all(preserves_seifert(g, lat) for g in full.elements()))
    report.check("full_group_structure", "exceptional/half-as-many", full.order(),
                 xg.sign_monodromy_order(lat.monodromy) * u, "PAPER")


def _radical_only(report: Report, model):
    g = model.radical_gram
    report.check("radical_negative_definite", "exceptional/radical-aut", definiteness(g), -1)
    aut = definite_aut(g)
    ident = Matrix.identity(g.nrows)
    report.check("radical_aut", "exceptional/radical-aut", aut.element_set(), frozenset({ident, -ident}))


def _u12_filter(report: Report):
    cands = xg.u12_candidates()
    report.check("u12_candidates", "exceptional/u12-filter", len(cands), 24)
    report.holds("u12_candidates_are_aut", "exceptional/u12-filter",
                 set(cands) == set(zxi_aut(HermitianPair(2, 4))), "PAPER")
    lifts = xg.u12_lifts()
    report.check("u12_glued_lifts", "exceptional/u12-filter", len(lifts), 48, "DERIVED")
    ident = Matrix.identity(2)
    normalized = {gm for gi, gm, _ in lifts
                  if all(gi[i][j] == int(i == j) for i in range(2) for j in range(2))}
    report.check("u12_normalized", "exceptional/u12-filter", normalized, {ident, -ident})


# ---------------------------------------------------------------------------
# hermitian norm equations


def cmd_lemma42(m: int, l: int, target: int) -> Report:
    report = Report(f"lemma42 --m {m} --l {l} --target {target}")
    hp = HermitianPair(m, l)
    if target not in (2, m):
        raise UnsupportedCase(f"target must be 2 or m = {m}")
    exclude = target == m and m != 2
    sols = hermitian_solutions(hp, target, exclude_b1_multiples=exclude)
    structured = unit_times_rational(hp, target, exclude_b1_multiples=exclude)
    report.add_provenance(f"ℤ[ξ], ξ of order {l}, L(b, b) = {hp.gram.tolist()}")
    report.check("solution_count", "lemma42/structure", len(sols), len(structured), "PAPER")
    report.holds("structure", "lemma42/structure", sols == structured, "PAPER",
                 note="units times rational solutions" + (", b₁-multiples excluded" if exclude else ""))
    if l == 5:
        g = scaled_form_418()
        vecs = short_vectors(g, 8 * target)
        shell = set(vecs)
        report.holds("solutions_on_form_shell", "lemma42/rational-part",
                     all(pair_to_coords(r) in shell for r in sols))
        report.holds("naive_box_agrees", "lemma42/rational-part",
                     vecs == brute_force_vectors(g, 8 * target, 1 if target == 2 else 2))
        if target == 2:
            report.check("norm2_list", "lemma42/norm2-list", set(vecs), set(NORM2_VECTORS_2_5))
            report.holds("norm2_list_is_structured", "lemma42/norm2-list",
                         {coords_to_pair(v) for v in NORM2_VECTORS_2_5} == set(structured)
                         and all(pair_to_coords(r) in NORM2_VECTORS_2_5 for r in structured), "PAPER")
    return report.finish()


# ---------------------------------------------------------------------------
# the congruence lift


def cmd_gamma(p: int, q: int, r: int, bound: int = 6, samples: int = 100, seed: int = 0) -> Report:
    report = Report(f"gamma --p {p} --q {q} --r {r} --bound {bound} --samples {samples} --seed {seed}")
    model = t_pqr(p, q, r)
    lat = model.lattice
    report.add_provenance(lat.provenance)
    level = model.p
    ident = SL2Matrix(1, 0, 0, 1)
    report.check("identity_integral", "gamma/criterion", gamma_lift(model, ident).integral, True, "TRIVIAL")
    report.check("T_level_integral", "gamma/criterion", gamma_lift(model, SL2Matrix(1, level, 0, 1)).integral, True)
    report.check("T_integral", "gamma/criterion", gamma_lift(model, SL2Matrix(1, 1, 0, 1)).integral, False)

    def scan(mats):
        mismatches, members, bad_lifts = [], 0, []
        for a in mats:
            res = gamma_lift(model, a)
            if res.integral != gamma_membership(a, level):
                mismatches.append(a.tolist())
            if res.integral:
                members += 1
                g = res.matrix
                if not (preserves_seifert(g, lat) and _restrict_or_none(g, model.fixed_lattice) == a.as_matrix()):
                    bad_lifts.append(a.tolist())
        return mismatches, members, bad_lifts

    box = sl2_box(bound)
    mism, members, bad = scan(box)
    report.check("box_mismatches", "gamma/criterion", mism, [], "PAPER",
                 note=f"{len(box)} matrices, {members} in Γ({level})")
    report.check("box_lifts_in_G", "gamma/lift", bad, [], "PAPER")
    rng = SplitMix64(seed)
    words = [random_sl2_word(rng, 1 + rng.below(12), level=level) for _ in range(samples)]
    mism, members, bad = scan(words)
    report.check("word_mismatches", "gamma/criterion", mism, [], "PAPER",
                 note=f"{samples} words, {members} in Γ({level})")
    report.check("word_lifts_in_G", "gamma/lift", bad, [], "PAPER")
    return report.finish()


# ---------------------------------------------------------------------------
# branch Grams of curve singularities


def cmd_kaenders() -> Report:
    report = Report("kaenders")
    for name, (rad, r, full, order) in KAENDERS_DATA.items():
        g = Matrix(rad)
        report.check(f"{name}.negative_definite", "kaenders/negative-definite", definiteness(g), -1)
        report.check(f"{name}.aut_order", "kaenders/aut-order", definite_aut(g).order(), order)
        branches = recover_branches(g, r)
        report.check(f"{name}.branch_classes", "kaenders/branches-unique", len(branches), 1)
        report.holds(f"{name}.branch_gram", "kaenders/branch-gram",
                     match_printed_gram(g, branches[0], Matrix(full)), "PAPER")
    for gram, order in DEFINITE_AUT_EXAMPLES:
        report.check(f"aut{list(map(list, gram))}", "kaenders/definite-aut", definite_aut(Matrix(gram)).order(), order)
    for k in (4, 6, 8):
        d = d_series(k)
        rad = radical(d)
        g = restrict_gram(rad, "seifert")
        tag = "PAPER" if k == 4 else "DERIVED"
        report.holds(f"D{k}.radical_gram", "kaenders/d-series",
                     rad.rank == 2 and gram_isometric(g, d_radical_gram(k // 2))[0], tag)
    return report.finish()


# ---------------------------------------------------------------------------
# everything


LEMMA42_CASES = ((2, 5, 2), (2, 3, 2), (2, 4, 2), (3, 3, 2), (3, 3, 3), (3, 4, 2), (3, 4, 3), (4, 3, 4), (4, 4, 4))


def cmd_all(seed: int = 0, samples: int = 100, bound: int = 6) -> Report:
    report = Report(f"all --seed {seed}")
    for t in list(ELLIPTIC_TRIPLES) + hyperbolic_triples(5):
        report.extend(cmd_tpqr(*t), prefix=f"tpqr{t}.")
    for name in FAMILY_NAMES:
        report.extend(cmd_exceptional(name), prefix=f"{name}.")
    for m, l, target in LEMMA42_CASES:
        report.extend(cmd_lemma42(m, l, target), prefix=f"lemma42{(m, l, target)}.")
    for t in ELLIPTIC_TRIPLES:
        report.extend(cmd_gamma(*t, bound=bound, samples=samples, seed=seed), prefix=f"gamma{t}.")
    report.extend(cmd_kaenders(), prefix="kaenders.")
    report.extend(cmd_properties(seed, samples), prefix="properties.")
    return report.finish()
