import pytest

from cloudtheta import (
    Clause3,
    Formula,
    InvalidInputError,
    Literal,
    ResourceLimitError,
    XorEquation,
    find_pattern,
    gen_random,
    hall_satisfiable,
    matched_pair_count,
    mu,
    saturate,
    small_subformula_size,
    special_variables,
    subformula_report,
    xor_satisfiable,
)
from cloudtheta.structure_checks import BRUTE_FORCE_LIMIT
from oracles import gadget_formula, xor_sat_brute


def test_hall_matching_examples():
    assert hall_satisfiable([Clause3.of(1, 2, 3), Clause3.of(1, 2, 4)])
    assert hall_satisfiable([Clause3.of(1, 2, 3)] * 3)
    assert not hall_satisfiable([Clause3.of(1, 2, 3)] * 4)
    assert hall_satisfiable(gadget_formula().clauses)


def test_hall_matching_implies_cnf_satisfiability():
    # The witness matching sets each clause's private variable to its literal's value.
    for seed in range(40):
        f = gen_random(9, 9, seed)
        if hall_satisfiable(f.clauses):
            assert any(f.satisfied((0,) + bits) for bits in _all_bits(f.n))


def _all_bits(n):
    from itertools import product
    return product((0, 1), repeat=n)


def test_special_variables_counts_single_occurrences():
    sub = [Clause3.of(1, 2, 3), Clause3.of(1, 2, 4), Clause3.of(3, -5, 6)]
    assert special_variables(sub) == {4, 5, 6}
    assert special_variables([]) == set()


def test_xor_satisfiable_matches_bruteforce():
    for seed in range(50):
        f = gen_random(8, 12, seed)
        assert xor_satisfiable(f) == xor_sat_brute(f)
    with pytest.raises(ResourceLimitError):
        xor_satisfiable(gen_random(BRUTE_FORCE_LIMIT + 1, 3, 0))


def test_xor_satisfiable_agrees_with_saturation_verdict():
    for seed in range(50):
        f = gen_random(10, 16, seed)
        if saturate(f).refuted:
            assert not xor_satisfiable(f)


def test_mu_on_the_gadget():
    g = gadget_formula()
    assert mu(g, XorEquation((), 1)) == 4
    assert mu(g, XorEquation((3, 4), 0)) == 2
    assert mu(g, XorEquation((1, 2, 3), 1)) == 1
    assert mu(g, XorEquation((), 1), limit=3) is None


def test_mu_trivial_and_invalid_targets():
    f = Formula(4, (Clause3.of(1, 2, 3),))
    assert mu(f, XorEquation((), 0)) == 0
    assert mu(f, XorEquation((4,), 1)) is None
    with pytest.raises(InvalidInputError):
        mu(f, XorEquation((9,), 1))
    with pytest.raises(ResourceLimitError):
        mu(gen_random(21, 2, 0), XorEquation((), 1))


def test_matched_pairs_need_identical_literals():
    assert matched_pair_count(gadget_formula()) == 2
    # A shared variable with flipped polarity is not a match.
    f = Formula(4, (Clause3.of(1, 2, 3), Clause3.of(-1, 2, 4)))
    assert matched_pair_count(f) == 0
    f2 = Formula(4, (Clause3.of(1, 2, 3), Clause3.of(1, 2, 4)))
    assert matched_pair_count(f2) == 1


def test_find_pattern_on_the_gadget():
    hits = find_pattern(gadget_formula())
    assert len(hits) == 1
    hit = hits[0]
    assert hit.indices == (0, 1, 2, 3)
    assert hit.thirds == (Literal(3), Literal(4), Literal(3), Literal(4, True))
    assert hit.shared == ((Literal(1), Literal(2)), (Literal(5), Literal(6)))


def test_pattern_hits_sum_to_a_contradiction():
    found = 0
    for seed in range(60):
        f = gen_random(8, 16, seed)
        for hit in find_pattern(f):
            found += 1
            votes = set()
            rhs = 0
            for ci in hit.indices:
                from cloudtheta import to_xor
                eq = to_xor(f.clauses[ci])
                votes ^= set(eq.vars)
                rhs ^= eq.rhs
            assert votes == set() and rhs == 1
            assert not xor_sat_brute(Formula(f.n, tuple(f.clauses[i] for i in hit.indices)))
    assert found > 0


def test_pattern_implies_refutation():
    for seed in range(60):
        f = gen_random(8, 16, seed)
        if find_pattern(f):
            assert saturate(f).refuted


def test_small_subformula_size_reference_points():
    assert small_subformula_size(2) == 2
    # At n = 3 the iterated log is tiny, so the ratio spikes before settling.
    assert small_subformula_size(3) == 3
    assert small_subformula_size(100) == 2
    assert small_subformula_size(10 ** 12) == 3
    assert small_subformula_size(10 ** 30) == 5
    sizes = [small_subformula_size(n) for n in (10, 100, 10 ** 8, 10 ** 16, 10 ** 30)]
    assert sizes == sorted(sizes)


def test_subformula_report_shape():
    f = gen_random(30, 60, 0)
    rep = subformula_report(f, samples=20, seed=1)
    assert rep["n"] == 30 and rep["m"] == 60 and rep["k"] == small_subformula_size(30)
    for size, cell in rep["sizes"].items():
        assert 2 <= size <= 60
        assert cell["samples"] == 20
        assert 0 <= cell["hall_failures"] <= 20
        assert 0 <= cell["fewer_than_4_special"] <= 20
    explicit = subformula_report(f, sizes=[2, 5], samples=10)
    assert set(explicit["sizes"]) == {2, 5}
    assert subformula_report(f, sizes=[99], samples=5)["sizes"] == {}
