"""Independent brute-force oracles and frozen reference values for the tests."""
from __future__ import annotations

import dataclasses
import itertools
import math
import random
from collections import deque
from fractions import Fraction

from infnc.annular import enumerate_sncd_all_through
from infnc.cumulants import distribution_from_cumulants
from infnc.distribution import CumulantTable, Distribution
from infnc.noncrossing import catalan, enumerate_nc
from infnc.perm import Perm, SignedPermutation, mirror
from infnc.words import Word

# Frozen counts from brute-force enumeration over all pairings of [±n].
ANNULAR_COUNTS = {2: 1, 3: 6, 4: 29, 5: 130, 6: 562, 7: 2380, 8: 9949}
ALL_THROUGH_COUNTS = {n: 2 ** (n - 1) - 1 for n in range(2, 11)}
PAIRING_COUNTS = {2: 1, 4: 5, 6: 22, 8: 93}

# Annular correction of one self-transpose variable, in cumulants.
KAPPA_DOT_CUMULANT_TABLE = {
    2: "κ2",
    3: "3κ3",
    4: "6κ4 + κ2^2",
    5: "10κ5 + 5κ2κ3",
    6: "15κ6 + 9κ2κ4 + 6κ3^2 + κ2^3",
    7: "21κ7 + 14κ2κ5 + 21κ3κ4 + 7κ2^2κ3",
    8: "28κ8 + 20κ2κ6 + 32κ3κ5 + 18κ4^2 + 12κ2^2κ4 + κ2^4",
    9: "36κ9 + 27κ2κ7 + 45κ3κ6 + 54κ4κ5 + 18κ2^2κ5 + 54κ2κ3κ4 + 12κ3^3 + 9κ2^3κ3",
    10: "45κ10 + 35κ2κ8 + 60κ3κ7 + 75κ4κ6 + 25κ2^2κ6 + 40κ5^2 + 80κ2κ3κ5 + 45κ2κ4^2"
        " + 60κ3^2κ4 + 15κ2^3κ4 + 30κ2^2κ3^2 + κ2^5",
}
# Row 8 as enumerated; the published row omits the last term.
KAPPA_DOT_ROW_8_ENUMERATED = "28κ8 + 20κ2κ6 + 32κ3κ5 + 18κ4^2 + 12κ2^2κ4 + κ2^4 + 16κ2κ3^2"

# Same correction in moments.
KAPPA_DOT_MOMENT_TABLE = {
    2: "m2 - m1^2",
    3: "3m3 - 9m1m2 + 6m1^3",
    4: "6m4 - 24m1m3 - 11m2^2 + 58m1^2m2 - 29m1^4",
    5: "10m5 - 50m1m4 - 45m2m3 + 145m1^2m3 + 135m1m2^2 - 325m1^3m2 + 130m1^5",
    6: "15m6 - 90m1m5 - 81m2m4 + 306m1^2m4 - 39m3^2 + 558m1m2m3 - 780m1^3m3 + 88m2^3"
       " - 1101m1^2m2^2 + 1686m1^4m2 - 562m1^6",
}

SIGMA_1 = "(1,-4)(-1,4)(2,3)(-2,-3)"
SIGMA_2 = "(1,4)(-1,-4)(2,-3)(-2,3)"
# The five annular pairings on [±4]; the third and fifth survive the separation filter.
FOUR_FOUR_PAIRINGS = [
    "(1,-2)(-1,2)(3,4)(-3,-4)",
    "(1,-3)(-1,3)(2,-4)(-2,4)",
    "(1,-4)(-1,4)(2,3)(-2,-3)",
    "(1,2)(-1,-2)(3,-4)(-3,4)",
    "(1,4)(-1,-4)(2,-3)(-2,3)",
]
SURVIVING_SIX = [
    "(1,-4)(2,-5)(3,-6)(-1,4)(-2,5)(-3,6)",
    "(1,-6)(2,3)(4,5)(-1,6)(-2,-3)(-4,-5)",
    "(1,6)(2,3)(4,-5)(-1,-6)(-2,-3)(-4,5)",
    "(1,6)(2,-3)(4,5)(-1,-6)(-2,3)(-4,-5)",
]


def parse_poly_terms(text: str) -> dict[str, int]:
    """'6κ4 + κ2^2' -> {'κ4': 6, 'κ2^2': 1}; used to compare tables term by term."""
    out = {}
    for chunk in text.replace(" - ", " + -").split(" + "):
        chunk = chunk.strip()
        sign = -1 if chunk.startswith("-") else 1
        chunk = chunk.lstrip("-")
        digits = ""
        while chunk and chunk[0].isdigit():
            digits, chunk = digits + chunk[0], chunk[1:]
        out[chunk] = sign * int(digits or 1)
    return out


# -- distributions


def semicircle_moments(k: int) -> int:
    return 0 if k % 2 else catalan(k // 2)


GOE_TAU_PRIME = {1: 0, 2: 1, 3: 0, 4: 5, 5: 0, 6: 22, 7: 0, 8: 93}
# Beyond degree 8: τ′(s²ᵏ) = (4ᵏ − C(2k, k)) / 2, which reproduces the frozen values above.
GOE_TAU_PRIME.update({n: 0 if n % 2 else (4 ** (n // 2) - math.comb(n, n // 2)) // 2 for n in range(9, 13)})


def single(degree: int, tau, tau_prime) -> Distribution:
    return Distribution(
        degree=degree, generators=(1,), symmetric=frozenset({1}),
        tau={Word.of(*[1] * n): tau(n) for n in range(1, degree + 1)},
        tau_prime={Word.of(*[1] * n): tau_prime(n) for n in range(1, degree + 1)},
    )


def goe(degree: int = 8) -> Distribution:
    return single(degree, semicircle_moments, lambda n: GOE_TAU_PRIME[n])


def random_cumulants(rng: random.Random, degree: int, generators=(1,), symmetric=frozenset(),
                     mode: str = "real") -> CumulantTable:
    shell = CumulantTable(degree=degree, generators=tuple(generators), symmetric=frozenset(symmetric), mode=mode)

    def q():
        return Fraction(rng.randint(-4, 4), rng.randint(1, 4))

    words = shell.all_words()
    return dataclasses.replace(shell, kappa={w: q() for w in words}, kappa_prime={w: q() for w in words})


def random_distribution(rng: random.Random, degree: int, generators=(1,), symmetric=frozenset()) -> Distribution:
    """A random distribution whose tables are consistent in every symmetry."""
    return distribution_from_cumulants(random_cumulants(rng, degree, generators, symmetric))


# -- permutations and partitions


def bfs_length(p: Perm) -> int:
    """Minimal number of transpositions, by breadth-first search from the identity."""
    dom = p.domain
    start = tuple(dom)
    target = tuple(p(k) for k in dom)
    pos = {k: i for i, k in enumerate(dom)}
    seen = {start: 0}
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        if cur == target:
            return seen[cur]
        for i, j in itertools.combinations(range(len(dom)), 2):
            nxt = list(cur)
            nxt[i], nxt[j] = nxt[j], nxt[i]
            nxt = tuple(nxt)
            if nxt not in seen:
                seen[nxt] = seen[cur] + 1
                queue.append(nxt)
    raise AssertionError("unreachable")


def crossing_free(blocks) -> bool:
    """Direct four-point definition of non-crossing."""
    owner = {k: i for i, b in enumerate(blocks) for k in b}
    pts = sorted(owner)
    for a, b, c, d in itertools.combinations(pts, 4):
        if owner[a] == owner[c] and owner[b] == owner[d] and owner[a] != owner[b]:
            return False
    return True


def union_find_join(n: int, *block_lists) -> set[frozenset[int]]:
    parent = list(range(n + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for blocks in block_lists:
        for b in blocks:
            b = list(b)
            for x in b[1:]:
                parent[find(x)] = find(b[0])
    groups: dict[int, set[int]] = {}
    for k in range(1, n + 1):
        groups.setdefault(find(k), set()).add(k)
    return {frozenset(g) for g in groups.values()}


def first_return(p, points, k):
    x = p(k)
    while x not in points:
        x = p(x)
    return x


def compositions(m: int):
    if m == 0:
        yield ()
        return
    for first in range(1, m + 1):
        for rest in compositions(m - first):
            yield (first,) + rest


def random_moments(rng: random.Random, degree: int, generators=(1,), symmetric=frozenset()) -> Distribution:
    """Independent random values of τ and τ′ on every canonical word."""
    shell = Distribution(degree=degree, generators=tuple(generators), symmetric=frozenset(symmetric))
    words = shell.all_words()

    def q():
        return Fraction(rng.randint(-5, 5), rng.randint(1, 3))

    return dataclasses.replace(shell, tau={w: q() for w in words}, tau_prime={w: q() for w in words})


def free_poisson_from_goe(degree: int = 4) -> Distribution:
    """x = s² for the GOE limit s: τ(xᵏ) = τ(s²ᵏ), τ′(xᵏ) = τ′(s²ᵏ)."""
    return single(degree, lambda k: semicircle_moments(2 * k), lambda k: GOE_TAU_PRIME[2 * k])


def wishart(degree: int = 6) -> Distribution:
    """Wishart limit at ratio 1: every free cumulant 1, every moment correction an annular count."""
    return single(degree, catalan, lambda n: ANNULAR_COUNTS.get(n, 0))


# -- annular reduction


def _transport(tau, block):
    img = {}
    for k in tau.perm.domain:
        src = block[abs(k) - 1] * (1 if k > 0 else -1)
        t = tau(k)
        img[src] = block[abs(t) - 1] * (1 if t > 0 else -1)
    return img


def annular_reduction_union(n: int):
    """Build every annular element from (π, V) and an all-through element placed on the block V."""
    built = []
    for pi in enumerate_nc(n):
        base = mirror(pi.as_permutation())
        for v in pi.blocks:
            for tau in enumerate_sncd_all_through(len(v)) if len(v) >= 2 else []:
                img = {k: base(k) for k in base.domain if abs(k) not in v}
                img.update(_transport(tau, v))
                built.append((pi, v, SignedPermutation(n, img)))
    return built
