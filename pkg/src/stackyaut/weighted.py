"""Weighted projective stacks ``P(q_0, ..., q_n)`` as stacky fans."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import gcd
from typing import Sequence

from .fans import Fan, is_complete, validate_fan
from .gale import gale_dual, same_up_to_sign, verify_sequences
from .lattice import column, snf
from .stacky import StackyFan, quotient_presentation, validate_stacky_fan
from .twogroups import WeightedPglPresentation, pgl_presentation


@dataclass(frozen=True)
class WeightVector:
    q: tuple

    def __post_init__(self):
        object.__setattr__(self, "q", tuple(int(x) for x in self.q))
        if len(self.q) < 2:
            raise ValueError("need at least two weights")
        if any(x < 1 for x in self.q):
            raise ValueError("weights must be positive integers")


@dataclass(frozen=True)
class ReducedWeights:
    d: int
    q_red: tuple


def _weights(q) -> WeightVector:
    return q if isinstance(q, WeightVector) else WeightVector(tuple(q))


def reduce(q) -> ReducedWeights:
    q = _weights(q).q
    d = 0
    for x in q:
        d = gcd(d, x)
    return ReducedWeights(d, tuple(x // d for x in q))


def build_fan(q_red) -> Fan:
    """The fan of ``P(q_red)`` in ``Z^(n+1) / Z*(a_0, ..., a_n)``.

    The quotient is identified with ``Z^n`` by the rows ``1..n`` of the left
    Smith transform of the weight column; ``v_i`` is the image of ``e_i``.
    Generators that are not primitive keep their multiplier.
    """
    a = tuple(q_red.q_red if isinstance(q_red, ReducedWeights) else q_red)
    g = 0
    for x in a:
        g = gcd(g, x)
    if g != 1:
        raise ValueError(f"reduced weights must have gcd 1, got {g}")
    n = len(a) - 1
    U = snf(column(a)).U
    vs = [tuple(int(U[r, i]) for r in range(1, n + 1)) for i in range(n + 1)]
    assert all(sum(a[i] * v[k] for i, v in enumerate(vs)) == 0 for k in range(n))
    cones = list(itertools.combinations(range(n + 1), n))
    return Fan.from_generators(n, vs, cones)


def _bezout(a: Sequence[int], d: int) -> list:
    """Coefficients ``c`` with ``sum(a_i c_i) == 1 (mod d)``."""
    c, g = [1] + [0] * (len(a) - 1), a[0]
    for i in range(1, len(a)):
        # extended Euclid on (g, a_i)
        r0, r1, s0, s1, t0, t1 = g, a[i], 1, 0, 0, 1
        while r1:
            k = r0 // r1
            r0, r1 = r1, r0 - k * r1
            s0, s1 = s1, s0 - k * s1
            t0, t1 = t1, t0 - k * t1
        c = [x * s0 for x in c]
        c[i] = t0
        g = r0
    return [x % d for x in c]


def torsion_markers(a: Sequence[int], d: int) -> list:
    """Last coordinates of ``b_i`` in ``Z/d``: a single 1 at the first index
    with ``gcd(a_i, d) == 1``, otherwise Bezout coefficients."""
    for i, x in enumerate(a):
        if gcd(x, d) == 1:
            return [int(j == i) for j in range(len(a))]
    return _bezout(list(a), d)


def build_stacky_fan(q) -> StackyFan:
    """``beta: Z^(n+1) -> Z^n + Z/d`` with ``b_i = (v_i, c_i)``.

    ``sum a_i c_i`` is a unit mod ``d``, so ``ker(beta) = Z*Q``; for ``d == 1``
    the torsion summand is dropped.
    """
    red = reduce(q)
    fan = build_fan(red)
    vs = fan.generators
    if red.d == 1:
        return StackyFan(fan.dim, (), fan, vs)
    marks = torsion_markers(red.q_red, red.d)
    return StackyFan(fan.dim, (red.d,), fan, [v + (c,) for v, c in zip(vs, marks)])


def projective_fan(d: int) -> Fan:
    rays = [tuple(int(i == j) for j in range(d)) for i in range(d)] + [(-1,) * d]
    return Fan(d, rays, list(itertools.combinations(range(d + 1), d)))


def r_gerbe_stacky_fan(r: int, d: int) -> StackyFan:
    """The canonical ``mu_r``-gerbe over ``P^d``: ``b_i = (e_i, 0)`` and
    ``b_d = (-1, ..., -1, 1)``."""
    fan = projective_fan(d)
    if r == 1:
        return StackyFan(d, (), fan, fan.rays)
    cols = [ray + (0,) for ray in fan.rays[:d]] + [fan.rays[d] + (1,)]
    return StackyFan(d, (r,), fan, cols)


@dataclass
class WpsReport:
    weights: tuple
    d: int
    q_red: tuple
    stacky_fan: StackyFan
    gale_weights: list
    dg: object
    mu: object
    checks: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def to_json(self) -> dict:
        return {
            "weights": list(self.weights),
            "d": self.d,
            "q_red": list(self.q_red),
            "dg": self.dg.to_json(),
            "gale_weights": self.gale_weights,
            "mu": self.mu.to_json(),
            "checks": dict(self.checks),
            "ok": self.ok,
            "stacky_fan": self.stacky_fan.to_json(),
        }


def verify_prop_4_4(q) -> WpsReport:
    """Run the weighted projective pipeline and record each check."""
    w = _weights(q)
    red = reduce(w)
    sf = build_stacky_fan(w)
    checks = {}
    checks["stacky fan valid"] = not validate_stacky_fan(sf)
    checks["fan complete"] = not validate_fan(sf.fan) and is_complete(sf.fan)
    gd = gale_dual(sf.beta)
    weights = gd.weights[0] if gd.dg.free_rank == 1 else []
    checks["DG = Z"] = gd.dg.free_rank == 1 and not gd.dg.torsion
    checks["weights = Q up to sign"] = same_up_to_sign(weights, w.q)
    checks["mu = Z/gcd(Q)"] = gd.mu.free_rank == 0 and gd.mu.order == red.d
    checks["sequences exact"] = verify_sequences(sf.beta, gd).exact
    if checks["stacky fan valid"]:
        qp = quotient_presentation(sf)
        checks["single primitive collection (all rays)"] = qp.z_combinatorics == [tuple(range(len(w.q)))]
    return WpsReport(w.q, red.d, red.q_red, sf, weights, gd.dg, gd.mu, checks)


def weighted_pgl(q) -> WeightedPglPresentation:
    w = _weights(q)
    pres = pgl_presentation(w.q)
    pres.phi_description = "lambda -> diag(" + ", ".join(f"lambda^{x}" for x in w.q) + ")"
    return pres
