"""Gale duality for maps ``beta: Z^n -> N`` with finite cokernel."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Optional, Sequence

import numpy as np

from .abelian import (
    FgAbelianGroup,
    GroupHom,
    cokernel,
    dual_finite,
    dual_hom,
    homology_at,
    kernel,
    quotient_map,
)
from .lattice import IntMatrix, from_columns, hnf, hstack, identity, imat, rational_inverse, zeros


class BetaMap:
    """``beta: Z^n -> N`` determined by the images ``b_1, ..., b_n``."""

    def __init__(self, target: FgAbelianGroup, columns: Sequence[Sequence[int]]):
        self.target = target
        self.n = len(columns)
        self.columns = [tuple(int(x) for x in c) for c in columns]
        self.source = FgAbelianGroup.free(self.n)
        self.hom = GroupHom(self.source, target, from_columns(self.columns, target.ngens))

    @property
    def matrix(self) -> IntMatrix:
        return self.hom.matrix

    @property
    def has_finite_cokernel(self) -> bool:
        return cokernel(self.hom).is_finite

    def __repr__(self) -> str:
        return f"BetaMap({self.target}, {self.columns})"


@dataclass
class GaleDualData:
    dg: FgAbelianGroup
    beta_vee: GroupHom
    resolution: tuple  # (Q, B)
    mu: FgAbelianGroup

    @property
    def weights(self) -> list:
        """Free canonical coordinates of ``beta_vee`` (one row per free rank).

        In rank one the generator of ``DG/torsion`` is oriented so that the
        weights have nonnegative sum.
        """
        cols = [self.dg.split(list(self.beta_vee.matrix[:, j]))[0] for j in range(self.beta_vee.matrix.shape[1])]
        rows = [[c[i] for c in cols] for i in range(self.dg.free_rank)]
        if len(rows) == 1 and sum(rows[0]) < 0:
            rows[0] = [-x for x in rows[0]]
        return rows

    @property
    def torsion_part(self) -> list:
        """Torsion canonical coordinates of ``beta_vee``, one row per cyclic factor."""
        cols = [self.dg.split(list(self.beta_vee.matrix[:, j]))[1] for j in range(self.beta_vee.matrix.shape[1])]
        return [[c[i] for c in cols] for i in range(len(self.dg.torsion))]


def canonical_resolution(N: FgAbelianGroup):
    """SNF-diagonalized presentation ``Z^k' / im(Q)`` of ``N``.

    Returns ``(Q, P)`` with ``P: Z^k -> Z^k'`` carrying the given generators to
    the canonical coordinates (unit factors dropped; torsion coordinates first,
    then free ones).
    """
    mods = N._mods
    keep = [i for i, d in enumerate(mods) if d != 1]
    P = N._U[keep] if keep else zeros(0, N.ngens)
    tors = [mods[i] for i in keep if mods[i] > 1]
    Q = zeros(len(keep), len(tors))
    for j, t in enumerate(tors):
        Q[j, j] = t
    return Q, np.ascontiguousarray(P)


def gale_dual(beta: BetaMap) -> GaleDualData:
    """The Gale dual ``beta^vee: Z^n -> DG(beta)``.

    With ``N = Z^k / im(Q)`` and ``B`` a lift of ``beta`` to ``Z^k``,
    ``DG(beta)`` is the cokernel of ``[B Q]^T: Z^k -> Z^(n+r)`` and
    ``beta^vee`` is the inclusion of the first ``n`` coordinates followed by
    the quotient.
    """
    if not beta.has_finite_cokernel:
        raise ValueError("beta has infinite cokernel")
    Q, P = canonical_resolution(beta.target)
    B = P.dot(beta.matrix) if P.shape[0] and beta.n else zeros(P.shape[0], beta.n)
    for i in range(Q.shape[1]):
        t = Q[i, i]
        B[i] = [x % t for x in B[i]]
    n, r = beta.n, Q.shape[1]
    BQ = hstack(B, Q)
    dg = FgAbelianGroup(np.ascontiguousarray(BQ.T) if BQ.shape[0] else zeros(n + r, 0))
    inc = zeros(n + r, n)
    inc[:n, :n] = identity(n)
    beta_vee = GroupHom(FgAbelianGroup.free(n), dg, inc, check=False)
    mu = dual_finite(cokernel(beta_vee))
    return GaleDualData(dg=dg, beta_vee=beta_vee, resolution=(Q, B), mu=mu)


def mu_of(beta: BetaMap) -> FgAbelianGroup:
    """The finite group ``mu``, dual to ``Coker(beta^vee)``."""
    return gale_dual(beta).mu


# -- exactness ------------------------------------------------------------------


@dataclass
class SequenceReport:
    homology: dict = field(default_factory=dict)
    checks: dict = field(default_factory=dict)

    @property
    def exact(self) -> bool:
        return all(h.is_trivial for h in self.homology.values()) and all(self.checks.values())

    def to_json(self) -> dict:
        return {
            "homology": {k: v.to_json() for k, v in self.homology.items()},
            "checks": dict(self.checks),
            "exact": self.exact,
        }


def verify_sequences(beta: BetaMap, gd: GaleDualData) -> SequenceReport:
    """Homology at every interior node of the two four-term sequences.

    ``0 -> DG* -> Z^n -> N -> Coker(beta) -> 0`` and
    ``0 -> N* -> Z^n -> DG -> Coker(beta^vee) -> 0``, where ``(-)*`` is
    ``Hom(-, Z)`` realised as lattices of integral functionals.
    """
    rep = SequenceReport()
    n = beta.n
    Zn = beta.source

    # first sequence
    M, _, _ = dual_hom(gd.beta_vee)  # DG* -> Z^n
    dg_star = FgAbelianGroup.free(M.shape[1])
    to_zn = GroupHom(dg_star, Zn, M, check=False)
    rep.homology["DG*"] = kernel(to_zn)[0]
    rep.homology["Z^n (beta)"] = homology_at(to_zn, beta.hom)
    q = quotient_map(beta.hom)
    rep.homology["N"] = homology_at(beta.hom, q)
    rep.homology["N -> Coker(beta) onto"] = cokernel(q)

    # second sequence
    Mn, _, _ = dual_hom(beta.hom)  # N* -> Z^n
    n_star = FgAbelianGroup.free(Mn.shape[1])
    from_n = GroupHom(n_star, Zn, Mn, check=False)
    rep.homology["N*"] = kernel(from_n)[0]
    rep.homology["Z^n (beta_vee)"] = homology_at(from_n, gd.beta_vee)
    qv = quotient_map(gd.beta_vee)
    rep.homology["DG"] = homology_at(gd.beta_vee, qv)
    rep.homology["DG -> Coker(beta_vee) onto"] = cokernel(qv)

    rep.checks["free_rank(DG) = n - rank(N)"] = gd.dg.free_rank == n - beta.target.free_rank
    rep.checks["mu = dual(Coker(beta_vee))"] = gd.mu.invariants == dual_finite(cokernel(gd.beta_vee)).invariants
    return rep


# -- characters ------------------------------------------------------------------


def _prime_factors(n: int) -> list:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def _ilog(c: int, p: int) -> int:
    e = 0
    while c > 1:
        if c % p:
            raise ArithmeticError(f"{c} is not a power of {p}")
        c //= p
        e += 1
    return e


def invariants_from_orders(orders: Sequence[int]) -> tuple:
    """Torsion coefficients of a finite abelian group from its element orders.

    ``#{x : p^k x = 0} = p^(sum_i min(k, e_i))`` determines how many cyclic
    factors of each prime-power order occur.
    """
    N = len(orders)
    elementary = []
    for p in _prime_factors(N):
        p_part = p
        while N % (p_part * p) == 0:
            p_part *= p
        exps, k = [0], 1
        while True:
            c = sum(1 for o in orders if (p**k) % o == 0)
            exps.append(_ilog(c, p))
            if c == p_part:
                break
            k += 1
        at_least = [exps[j] - exps[j - 1] for j in range(1, len(exps))] + [0]
        for j in range(len(at_least) - 1):
            elementary += [p ** (j + 1)] * (at_least[j] - at_least[j + 1])
    return _invariant_factors(elementary)


def _invariant_factors(elementary) -> tuple:
    by_prime: dict = {}
    for q in elementary:
        p = _prime_factors(q)[0]
        by_prime.setdefault(p, []).append(q)
    for v in by_prime.values():
        v.sort(reverse=True)
    length = max((len(v) for v in by_prime.values()), default=0)
    out = []
    for i in range(length):
        t = 1
        for v in by_prime.values():
            if i < len(v):
                t *= v[i]
        out.append(t)
    return tuple(sorted(out))


def character_kernel(gd: GaleDualData, limit: int = 200_000) -> tuple:
    """Torsion coefficients of ``ker(Hom(beta^vee, C*))`` by enumeration.

    Characters of ``DG`` that die on ``im(beta^vee)`` are the points of the
    dual lattice ``L* / Z^k`` where ``L`` is spanned by the relations of
    ``DG`` together with the images of ``beta^vee``.  The group is generated
    by the columns of ``B^{-T}`` for a basis ``B`` of ``L``; it is enumerated
    by closure in ``(Q/Z)^k`` and its structure read off from element orders.
    This route never touches a Smith form.
    """
    L = hstack(gd.dg.relations, gd.beta_vee.matrix)
    k = L.shape[0]
    if k == 0:
        return ()
    h, _ = hnf(L.T)
    rows = [r for r in h if any(x != 0 for x in r)]
    if len(rows) != k:
        raise ValueError("Coker(beta_vee) is infinite")
    Binv = rational_inverse(imat(rows).T)  # columns of B^{-T} are rows of B^{-1}
    gens = [tuple(Binv[i, j] % 1 for j in range(k)) for i in range(k)]
    zero = tuple(Fraction(0) for _ in range(k))
    seen = {zero}
    frontier = [zero]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = tuple((a + b) % 1 for a, b in zip(x, g))
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
                    if len(seen) > limit:
                        raise OverflowError("character group too large to enumerate")
        frontier = nxt

    def order_of(x):
        den = 1
        for a in x:
            den = den * a.denominator // gcd(den, a.denominator)
        return den

    return invariants_from_orders([order_of(x) for x in seen])


def weight_multiset(gd: GaleDualData) -> Optional[Counter]:
    """Weights of a rank-one Gale dual as a multiset, ``None`` otherwise."""
    if gd.dg.free_rank != 1:
        return None
    return Counter(gd.weights[0])


def same_up_to_sign(weights: Sequence[int], expected: Sequence[int]) -> bool:
    """Multiset equality allowing a single global sign flip."""
    w, e = Counter(weights), Counter(expected)
    return w == e or Counter(-x for x in weights) == e
