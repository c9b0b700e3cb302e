"""Acceptance criteria. Each test prints one PASS/FAIL line; all lines are repeated in the terminal summary."""
import random

import numpy as np
import pytest

from infnc.annular import AnnularSymPermutation, enumerate_sncd, enumerate_sncd_all_through, pairings, spoke
from infnc.cumulants import (distribution_from_cumulants, infinitesimal_cumulants_from_distribution,
                             kappa_dot_moment_polynomial, kappa_dot_polynomial)
from infnc.freeness import MarginalFamily, check_cyclic_form, check_definition, free_product, mixed_cumulants
from infnc.noncrossing import catalan, enumerate_nc
from infnc.product import GroupingSpec, decomposition_check, product_cumulant, product_cumulant_prime, surviving_annular
from infnc.rmt import EnsembleSpec, infinitesimal_fits, verify_asymptotic_freeness, verify_ibp
from infnc.words import Word

from oracles import (FOUR_FOUR_PAIRINGS, KAPPA_DOT_CUMULANT_TABLE, KAPPA_DOT_MOMENT_TABLE, SIGMA_1, SIGMA_2,
                     SURVIVING_SIX, annular_reduction_union, compositions, free_poisson_from_goe, goe,
                     parse_poly_terms, random_distribution, random_moments, wishart)

SEED = 20240611
MC_SAMPLES = 200_000
MC_SIZES = [40, 80, 160]


def power(k: int) -> Word:
    return Word.of(*[1] * k)


def test_criterion_01_enumeration(criterion):
    with criterion(1, "enumeration golden values", limit=10) as c:
        for n in range(1, 10):
            c.check(f"|NC({n})|", len(enumerate_nc(n)) == catalan(n))
        c.check("|annular(3)| = 6", len(enumerate_sncd(3)) == 6)
        c.check("|all-through(3)| = 3", len(enumerate_sncd_all_through(3)) == 3)
        c.check("five pairings on [±4]", [str(p) for p in pairings(4)] == FOUR_FOUR_PAIRINGS)


def test_criterion_02_worked_example(criterion):
    with criterion(2, "square of a semicircular, two routes", limit=30) as c:
        x = infinitesimal_cumulants_from_distribution(free_poisson_from_goe(3))
        s = infinitesimal_cumulants_from_distribution(goe(6))
        solved = (x.kappa_prime_of(power(2)), x.kappa_prime_of(power(3)))
        rule = (product_cumulant_prime(GroupingSpec((2, 2)), power(4), s),
                product_cumulant_prime(GroupingSpec((2, 2, 2)), power(6), s))
        c.check("solved values 2, 4", solved == (2, 4))
        c.check("product rule values 2, 4", rule == (2, 4))
        c.check("first-order value 1", product_cumulant(GroupingSpec((2, 2)), power(4), s) == 1)
        four = {str(p) for p in surviving_annular(GroupingSpec((2, 2))) if p.is_pairing()}
        c.check("survivors m=4", four == {SIGMA_1, SIGMA_2})
        six = {str(p) for p in surviving_annular(GroupingSpec((2, 2, 2))) if p.is_pairing()}
        c.check("survivors m=6", six == {str(AnnularSymPermutation.parse(6, t)) for t in SURVIVING_SIX})
        c.note(f"solved {tuple(map(str, solved))}, product rule {tuple(map(str, rule))}")


def test_criterion_03_kappa_dot_tables(criterion):
    with criterion(3, "annular correction tables", limit=120) as c:
        for n in range(2, 7):
            c.check(f"moment row {n}",
                    parse_poly_terms(str(kappa_dot_moment_polynomial(n))) == parse_poly_terms(KAPPA_DOT_MOMENT_TABLE[n]))
        for n in range(2, 11):
            got = parse_poly_terms(str(kappa_dot_polynomial(n)))
            want = parse_poly_terms(KAPPA_DOT_CUMULANT_TABLE[n])
            if not c.check(f"cumulant row {n}", got == want):
                extra = {k: v for k, v in got.items() if want.get(k) != v}
                c.note(f"row {n} enumerates extra terms {extra}")


def test_criterion_04_round_trip(criterion):
    with criterion(4, "moment-cumulant round trip", limit=None) as c:
        for seed in range(10):
            d = random_moments(random.Random(seed), 6, generators=(1, 2), symmetric={1})
            back = distribution_from_cumulants(infinitesimal_cumulants_from_distribution(d))
            c.check(f"seed {seed}", back == d)


def _has_adjacent(cycle, n):
    pts = set(cycle)
    return any((k in pts and k % n + 1 in pts) or (-k in pts and -(k % n + 1) in pts) for k in range(1, n + 1))


def test_criterion_05_spoke_lemma(criterion):
    with criterion(5, "spoke lemma", limit=None) as c:
        for n in range(2, 7):
            odd_ones = [s for s in enumerate_sncd(n)
                        if not any(len(cy) == 1 or _has_adjacent(cy, n) for cy in s.cycles())]
            c.check(f"n={n}", odd_ones == ([] if n % 2 else [spoke(n)]))


def test_criterion_06_decompositions(criterion):
    with criterion(6, "annular reduction and bijections", limit=None) as c:
        for n in range(2, 7):
            built = [p for _, _, p in annular_reduction_union(n)]
            c.check(f"reduction n={n} disjoint", len(set(built)) == len(built))
            c.check(f"reduction n={n} exhaustive", set(built) == {s.perm for s in enumerate_sncd(n)})
        for m in range(1, 7):
            for parts in compositions(m):
                rep = decomposition_check(parts)
                c.check(f"decomposition {parts}", rep.passed)


def test_criterion_07_freeness_both_directions(criterion):
    with criterion(7, "free products and vanishing mixed cumulants", limit=None) as c:
        families = {
            "goe, goe": (("a", goe(6)), ("b", goe(6))),
            "goe, wishart": (("a", goe(6)), ("w", wishart(6))),
            "random, goe": (("x", random_distribution(random.Random(1), 6)), ("a", goe(6))),
        }
        for name, family in families.items():
            joint = free_product(MarginalFamily(family), 6)
            c.check(f"{name} definition", check_definition(joint).passed)
            c.check(f"{name} cyclic form", check_cyclic_form(joint).passed)
            mixed = mixed_cumulants(joint, degree=5)
            c.check(f"{name} mixed cumulants", bool(mixed) and all(k == 0 and kp == 0 for k, kp in mixed.values()))


@pytest.mark.slow
def test_criterion_08_goe_infinitesimal_moments(criterion):
    with criterion(8, "Monte Carlo infinitesimal moments of GOE", limit=20 * 60) as c:
        expected = {2: 1, 4: 5, 6: 22}
        fits = infinitesimal_fits([power(k) for k in expected], {1: EnsembleSpec("goe")}, MC_SIZES, MC_SAMPLES,
                                  seed=SEED)
        for (k, want), fit in zip(expected.items(), fits):
            c.check(f"s^{k} within 3 se", abs(fit.z_prime(want)) < 3)
            c.check(f"s^{k} within 10%", abs(fit.tau_prime - want) <= 0.1 * want)
            c.note(f"s^{k}: {fit.tau_prime:.3f} ± {fit.tau_prime_se:.3f}")


@pytest.mark.slow
def test_criterion_09_integration_by_parts(criterion):
    with criterion(9, "Monte Carlo integration by parts", limit=None) as c:
        rng = np.random.default_rng(SEED)
        ms = [rng.standard_normal((10, 10)) for _ in range(4)]
        rep = verify_ibp(ms, MC_SAMPLES, seed=SEED)
        c.check("|LHS - RHS| < 3 se", rep.passed(3.0))
        c.note(f"difference {rep.difference.mean:.4g} ± {rep.difference.std_error:.3g}")


@pytest.mark.slow
def test_criterion_10_asymptotic_freeness(criterion):
    with criterion(10, "Monte Carlo asymptotic freeness of two GOE", limit=None) as c:
        ensembles = {"a": EnsembleSpec("goe"), "b": EnsembleSpec("goe")}
        words = [{"word": "a b a b", "expected": 1}, {"word": "a b a", "expected": 0}]
        checks = verify_asymptotic_freeness(ensembles, words, MC_SIZES, MC_SAMPLES, seed=SEED)
        for check in checks:
            c.check(f"{check.text} prediction", check.tau_prime == check.expected)
            c.check(f"{check.text} within 3 se", abs(check.z) < 3)
            c.note(f"{check.text}: {check.fit.tau_prime:.3f} ± {check.fit.tau_prime_se:.3f}")
