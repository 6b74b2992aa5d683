import itertools
from collections import Counter
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stackyaut.abelian import FgAbelianGroup
from stackyaut.gale import (
    BetaMap,
    character_kernel,
    gale_dual,
    invariants_from_orders,
    mu_of,
    same_up_to_sign,
    verify_sequences,
)

GERBE_P468 = [(2, 0, 1), (0, 1, 0), (-3, -2, 0)]


def N(free, tors=()):
    return FgAbelianGroup.standard(free, tors)


def test_gerbe_p468():
    gd = gale_dual(BetaMap(N(2, [2]), GERBE_P468))
    assert gd.dg.invariants == (1, ())
    assert Counter(gd.weights[0]) == Counter([4, 6, 8])
    # listing v1, v2, v0 first permutes the weights to match
    assert gd.weights[0] == [6, 8, 4]
    assert gd.mu.invariants == (0, (2,))


def test_identity_beta():
    gd = gale_dual(BetaMap(N(1), [(1,)]))
    assert gd.dg.is_trivial
    assert gd.mu.is_trivial


@pytest.mark.parametrize("r,d", [(3, 2), (2, 1), (5, 3)])
def test_r_gerbe(r, d):
    cols = [tuple(int(i == j) for j in range(d)) + (0,) for i in range(d)] + [(-1,) * d + (1,)]
    gd = gale_dual(BetaMap(N(d, [r]), cols))
    assert gd.dg.invariants == (1, ())
    assert gd.weights == [[r] * (d + 1)]
    assert gd.mu.invariants == (0, (r,))


def test_z_plus_z2_printed_matrix():
    # Coker(beta) = Z/2 here, so DG picks up a torsion summand and the
    # free weights are (3, 2); see the decisions ledger
    beta = BetaMap(N(1, [2]), [(2, 0), (-3, 1)])
    gd = gale_dual(beta)
    assert gd.dg.invariants == (1, (2,))
    assert Counter(gd.weights[0]) == Counter([3, 2])
    assert gd.mu.invariants == (0, (2,))
    assert verify_sequences(beta, gd).exact


def test_reduced_weights_mu_trivial():
    # P(2,3,4): v0 = (-3,-2), v1 = (2,0), v2 = (0,1) in N = Z^2
    assert mu_of(BetaMap(N(2), [(-3, -2), (2, 0), (0, 1)])).is_trivial


def test_infinite_cokernel_rejected():
    with pytest.raises(ValueError):
        gale_dual(BetaMap(N(2), [(1, 0), (2, 0)]))


def test_sequences_gerbe_and_identity():
    b = BetaMap(N(2, [2]), GERBE_P468)
    assert verify_sequences(b, gale_dual(b)).exact
    b = BetaMap(N(2), [(1, 0), (0, 1)])
    rep = verify_sequences(b, gale_dual(b))
    assert rep.exact and all(h.is_trivial for h in rep.homology.values())


def brute_kernel_line(beta, bound=9):
    """Smallest nonzero x in a box with beta(x) == 0 in N, for a rank-one kernel."""
    n = beta.n
    best = None
    for x in itertools.product(range(-bound, bound + 1), repeat=n):
        if any(x) and beta.target.is_zero(beta.hom(list(x))):
            if best is None or sum(map(abs, x)) < sum(map(abs, best)):
                best = x
    return best


def test_weights_span_kernel_gerbe():
    b = BetaMap(N(2, [2]), GERBE_P468)
    x = brute_kernel_line(b)
    assert same_up_to_sign(list(x), gale_dual(b).weights[0])


@st.composite
def finite_cokernel_betas(draw):
    d = draw(st.integers(0, 3))
    tors = draw(st.lists(st.integers(2, 8), max_size=2))
    n = draw(st.integers(max(d, 1), 5))
    k = d + len(tors)
    cols = draw(st.lists(st.lists(st.integers(-9, 9), min_size=k, max_size=k), min_size=n, max_size=n))
    beta = BetaMap(N(d, tors), cols)
    if not beta.has_finite_cokernel:
        # force finite cokernel by appending the standard free basis
        cols = cols[: max(0, n - d)] + [[int(i == j) for j in range(k)] for i in range(d)]
        beta = BetaMap(N(d, tors), cols)
    return beta


@settings(max_examples=60, deadline=None)
@given(finite_cokernel_betas())
def test_sequences_exact_fuzz(beta):
    gd = gale_dual(beta)
    rep = verify_sequences(beta, gd)
    assert rep.exact, rep.to_json()
    assert gd.dg.free_rank == beta.n - beta.target.free_rank


@settings(max_examples=60, deadline=None)
@given(finite_cokernel_betas())
def test_mu_two_routes(beta):
    gd = gale_dual(beta)
    assert gd.mu.free_rank == 0
    assert gd.mu.torsion == character_kernel(gd)


def _orders(torsion):
    out = []
    for x in itertools.product(*[range(t) for t in torsion]):
        o = 1
        for c, t in zip(x, torsion):
            e = t // gcd(c, t)
            o = o * e // gcd(o, e)
        out.append(o)
    return out


@pytest.mark.parametrize("tors", [(), (2,), (6,), (2, 4), (2, 2, 2), (3, 9), (2, 6, 12), (4, 8)])
def test_invariants_from_orders(tors):
    assert invariants_from_orders(_orders(tors)) == tuple(tors)


def test_same_up_to_sign():
    assert same_up_to_sign([4, 6, 8], [8, 6, 4])
    assert same_up_to_sign([-4, -6, -8], [4, 6, 8])
    assert not same_up_to_sign([4, -6, 8], [4, 6, 8])
