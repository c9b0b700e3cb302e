import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from infnc.perm import (Permutation, SignedPermutation, compose, cycles, delta, embed, gamma, gamma_signed,
                        gamma_vec, length, mirror, parse_cycles, restrict_first_return, separates,
                        standard_elements)

from oracles import bfs_length, first_return


@st.composite
def signed_perms(draw, max_n=5):
    n = draw(st.integers(1, max_n))
    dom = [k for k in range(-n, n + 1) if k]
    img = draw(st.permutations(dom))
    return SignedPermutation(n, dict(zip(dom, img)))


@st.composite
def perms(draw, max_n=7):
    n = draw(st.integers(1, max_n))
    img = draw(st.permutations(range(1, n + 1)))
    return Permutation(n, dict(zip(range(1, n + 1), img)))


def test_compose_identity_and_delta():
    idn = SignedPermutation.identity(3)
    assert compose(idn, idn) == idn
    assert compose(delta(3), delta(3)) == idn


def test_compose_gamma_delta_by_hand():
    g = embed(gamma(3))
    p = compose(g, delta(3))
    # γ fixes the negatives: 1 -> -1 -> -1, -1 -> 1 -> 2, 3 -> -3
    assert p(1) == -1
    assert p(-1) == 2
    assert p(3) == -3
    assert p(-3) == 1


def test_compose_size_mismatch():
    with pytest.raises(ValueError):
        compose(delta(2), delta(3))


def test_cycles_of_delta():
    assert cycles(delta(2)) == [(1, -1), (2, -2)]


def test_cycles_of_gamma_signed():
    assert cycles(gamma_signed(6)) == [(1, 2, 3, 4, 5, 6), (-1, -6, -5, -4, -3, -2)]
    assert str(gamma_signed(6)) == "(1,2,3,4,5,6)(-1,-6,-5,-4,-3,-2)"


def test_gamma_signed_is_gamma_delta_gamma_inverse_delta():
    for n in range(1, 7):
        g, d = embed(gamma(n)), delta(n)
        assert gamma_signed(n) == g * d * g.inverse() * d
        assert mirror(gamma(n)) == gamma_signed(n)


def test_cycles_of_sigma_one():
    s = SignedPermutation.parse(4, "(1,-4)(-1,4)(2,3)(-2,-3)")
    assert cycles(s) == [(1, -4), (-1, 4), (2, 3), (-2, -3)]


def test_cycle_leader_prefers_positive_on_ties():
    s = SignedPermutation.parse(2, "(-1,2)(1,-2)")
    assert cycles(s) == [(1, -2), (-1, 2)]


def test_lengths():
    assert length(SignedPermutation.identity(3)) == 0
    assert length(delta(3)) == 3
    assert length(gamma(5)) == 4


def test_gamma_vec():
    assert str(gamma_vec(2, 2)) == "(1,2)(3,4)"
    g = gamma_vec(3, 3, 3, 3, 3)
    assert cycles(g) == [(1, 2, 3), (4, 5, 6), (7, 8, 9), (10, 11, 12), (13, 14, 15)]


def test_standard_elements_n1():
    d, g, gs = standard_elements(1)
    assert g.is_identity()
    assert d == delta(1)
    assert gs.is_identity()


def test_parse_rejects_bad_input():
    with pytest.raises(ValueError):
        SignedPermutation.parse(2, "(1,0)")
    with pytest.raises(ValueError):
        Permutation.parse(3, "(1,2)(2,3)")
    with pytest.raises(ValueError):
        Permutation.parse(2, "(1,5)")


def test_parse_accepts_omitted_fixed_points_and_prints_them():
    p = Permutation.parse(4, "(1,3)")
    assert str(p) == "(1,3)(2)(4)"
    assert parse_cycles("()") == []


@given(signed_perms())
def test_inverse_composes_to_identity(p):
    assert (p * p.inverse()).is_identity()
    assert (p.inverse() * p).is_identity()


@given(signed_perms(), signed_perms())
def test_length_triangle_inequality(p, q):
    if p.domain == q.domain:
        assert length(p * q) <= length(p) + length(q)


@given(signed_perms())
def test_cycles_partition_the_domain_and_are_deterministic(p):
    cs = cycles(p)
    flat = [k for c in cs for k in c]
    assert sorted(flat) == sorted(p.domain)
    assert cycles(p) == cs
    assert str(p) == str(SignedPermutation.parse(p.n, str(p)))


@given(signed_perms(max_n=5))
def test_mirror_has_two_cycles_of_length_n(p):
    n = p.n
    if n >= 2:
        cs = cycles(gamma_signed(n))
        assert len(cs) == 2 and all(len(c) == n for c in cs)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_length_equals_transposition_distance(n):
    for img in itertools.permutations(range(1, n + 1)):
        p = Permutation(n, dict(zip(range(1, n + 1), img)))
        assert length(p) == bfs_length(p)


def test_length_signed_equals_transposition_distance_n2():
    dom = [-2, -1, 1, 2]
    for img in itertools.permutations(dom):
        p = SignedPermutation(2, dict(zip(dom, img)))
        assert length(p) == bfs_length(p)


@settings(max_examples=50)
@given(perms(), st.data())
def test_first_return_matches_direct_iteration(p, data):
    pts = data.draw(st.sets(st.sampled_from(sorted(p.domain)), min_size=1))
    r = restrict_first_return(p, pts)
    for k in pts:
        assert r(k) == first_return(p, pts, k)
    assert separates(p, pts) == r.is_identity()


def test_restrict_identity_and_gamma():
    idn = Permutation.identity(6)
    assert restrict_first_return(idn, {2, 5}).is_identity()
    r = restrict_first_return(gamma(6), {2, 3, 5})
    assert (r(2), r(3), r(5)) == (3, 5, 2)


def test_mul_type_mismatch():
    with pytest.raises(ValueError):
        Permutation.identity(2) * SignedPermutation.identity(1)
