"""Finite crossed modules, their 2-groups, and the weighted projective linear 2-group."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import gcd
from typing import Optional, Sequence

import numpy as np

from . import _kernels
from .abelian import FgAbelianGroup

MAX_ORDER = 255


class FiniteGroup:
    """A finite group given by its multiplication table ``T[a, b] = a*b``.

    Construction verifies associativity, a two-sided identity and inverses.
    ``labels`` are optional display names for the elements.
    """

    def __init__(self, table, labels: Optional[Sequence] = None, backend=None):
        T = np.asarray(table, dtype=np.int64)
        if T.ndim != 2 or T.shape[0] != T.shape[1] or T.shape[0] == 0:
            raise ValueError("multiplication table must be a nonempty square array")
        n = T.shape[0]
        if n > MAX_ORDER:
            raise ValueError(f"group order {n} exceeds {MAX_ORDER}")
        if T.min() < 0 or T.max() >= n:
            raise ValueError("table entries out of range")
        cnt, first = _kernels.associativity_failures(T, limit=1, backend=backend)
        if cnt:
            raise ValueError(f"table is not associative at {tuple(int(x) for x in first[0])}")
        ids = [e for e in range(n) if (T[e] == np.arange(n)).all() and (T[:, e] == np.arange(n)).all()]
        if not ids:
            raise ValueError("table has no identity")
        self.identity = ids[0]
        inv = np.full(n, -1, np.int64)
        for a in range(n):
            hits = np.nonzero(T[a] == self.identity)[0]
            if len(hits) != 1 or T[hits[0], a] != self.identity:
                raise ValueError(f"element {a} has no inverse")
            inv[a] = hits[0]
        self.table = T
        self.inverse = inv
        self.labels = list(labels) if labels is not None else None

    @property
    def order(self) -> int:
        return self.table.shape[0]

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inv(self, a: int) -> int:
        return int(self.inverse[a])

    def conj(self, a: int, g: int) -> int:
        """``g^-1 a g``."""
        return int(self.table[self.inverse[g], self.table[a, g]])

    @property
    def is_abelian(self) -> bool:
        return bool((self.table == self.table.T).all())

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != self.identity:
            x = int(self.table[x, a])
            k += 1
        return k

    def abelian_invariants(self) -> tuple:
        """Torsion coefficients; only for abelian groups."""
        if not self.is_abelian:
            raise ValueError("group is not abelian")
        from .gale import invariants_from_orders

        return invariants_from_orders([self.element_order(a) for a in range(self.order)])

    def describe(self) -> dict:
        out = {"order": self.order, "abelian": self.is_abelian}
        if self.is_abelian:
            out["invariants"] = list(self.abelian_invariants())
        return out

    def is_hom_to(self, other: "FiniteGroup", f) -> list:
        """Pairs ``(a, b)`` with ``f(ab) != f(a) f(b)``."""
        f = np.asarray(f, dtype=np.int64)
        bad = f[self.table] != other.table[f[:, None], f[None, :]]
        return [tuple(int(x) for x in p) for p in np.argwhere(bad)]

    def isomorphic_table(self, other: "FiniteGroup") -> bool:
        return self.order == other.order and bool((self.table == other.table).all())

    # constructors

    @classmethod
    def cyclic(cls, n: int) -> "FiniteGroup":
        a = np.arange(n)
        return cls((a[:, None] + a[None, :]) % n)

    @classmethod
    def abelian(cls, torsion: Sequence[int]) -> "FiniteGroup":
        """``Z/t_1 + ... + Z/t_k``; element index is the mixed-radix number with
        the last coordinate varying fastest."""
        torsion = [int(t) for t in torsion]
        if any(t < 1 for t in torsion):
            raise ValueError("torsion coefficients must be positive")
        elems = list(itertools.product(*[range(t) for t in torsion]))
        index = {e: i for i, e in enumerate(elems)}
        n = len(elems)
        T = np.empty((n, n), np.int64)
        for i, x in enumerate(elems):
            for j, y in enumerate(elems):
                T[i, j] = index[tuple((a + b) % t for a, b, t in zip(x, y, torsion))]
        return cls(T, labels=[list(e) for e in elems])

    @classmethod
    def symmetric(cls, n: int) -> "FiniteGroup":
        """``S_n`` on permutations in lexicographic order; ``(p*q)(i) = q(p(i))``."""
        perms = list(itertools.permutations(range(n)))
        index = {p: i for i, p in enumerate(perms)}
        T = np.empty((len(perms), len(perms)), np.int64)
        for i, p in enumerate(perms):
            for j, q in enumerate(perms):
                T[i, j] = index[tuple(q[p[k]] for k in range(n))]
        return cls(T, labels=[list(p) for p in perms])

    @classmethod
    def trivial(cls) -> "FiniteGroup":
        return cls([[0]])

    def subgroup(self, elements: Sequence[int]) -> tuple:
        """``(H, inclusion)`` for a subset closed under the product."""
        elements = sorted(set(int(e) for e in elements))
        index = {e: i for i, e in enumerate(elements)}
        try:
            T = [[index[int(self.table[a, b])] for b in elements] for a in elements]
        except KeyError:
            raise ValueError("subset is not closed under multiplication") from None
        return FiniteGroup(T), np.array(elements, np.int64)

    def __repr__(self) -> str:
        return f"FiniteGroup(order={self.order})"


def direct_product(g: FiniteGroup, h: FiniteGroup) -> FiniteGroup:
    """``G x H`` with ``(a, b)`` stored at ``a * |H| + b``."""
    m = h.order
    T = (g.table[:, None, :, None] * m + h.table[None, :, None, :]).reshape(g.order * m, g.order * m)
    return FiniteGroup(T)


# -- crossed modules -----------------------------------------------------------------


class FiniteCrossedModule:
    """``[phi: G2 -> G1]`` with a right action ``act[alpha, g] = alpha^g``."""

    def __init__(self, g2: FiniteGroup, g1: FiniteGroup, phi, act=None):
        self.g2, self.g1 = g2, g1
        self.phi = np.asarray(phi, dtype=np.int64)
        if act is None:
            act = np.repeat(np.arange(g2.order)[:, None], g1.order, axis=1)
        self.act = np.asarray(act, dtype=np.int64)
        if self.phi.shape != (g2.order,) or self.phi.min() < 0 or self.phi.max() >= g1.order:
            raise ValueError("phi must map each element of G2 into G1")
        if self.act.shape != (g2.order, g1.order) or self.act.min() < 0 or self.act.max() >= g2.order:
            raise ValueError("action must be a |G2| x |G1| table of G2 elements")

    def to_json(self) -> dict:
        return {
            "g2": {"table": self.g2.table.tolist()},
            "g1": {"table": self.g1.table.tolist()},
            "phi": self.phi.tolist(),
            "action": self.act.tolist(),
        }


@dataclass
class CrossedModuleReport:
    """Per-axiom ``(count, first failing tuples)``."""

    checks: dict = field(default_factory=dict)

    @property
    def valid(self) -> bool:
        return all(c == 0 for c, _ in self.checks.values())

    def violations(self) -> dict:
        return {k: v for k, v in self.checks.items() if v[0]}

    def to_json(self) -> dict:
        return {
            "valid": self.valid,
            "checks": {k: {"failures": c, "first": [list(t) for t in f]} for k, (c, f) in self.checks.items()},
        }


def _pairs(mask, limit):
    hits = np.argwhere(mask)
    return len(hits), [tuple(int(x) for x in h) for h in hits[:limit]]


def verify_crossed_module(xm: FiniteCrossedModule, limit: int = 20, backend=None) -> CrossedModuleReport:
    """Exhaustive check of every crossed-module axiom.

    Tuples are ``(a, b)`` for the homomorphism check, ``(alpha, beta, g)``
    for the action by automorphisms, ``(alpha, g, h)`` for action
    compatibility, ``(alpha, g)`` for equivariance and the identity,
    ``(alpha, beta)`` for Peiffer, ``(kappa, beta)`` for centrality.
    """
    G1, G2, phi, act = xm.g1, xm.g2, xm.phi, xm.act
    rep = CrossedModuleReport()
    rep.checks["phi homomorphism"] = _pairs(phi[G2.table] != G1.table[phi[:, None], phi[None, :]], limit)
    c, f = _kernels.action_automorphism_failures(G2.table, act, limit, backend)
    rep.checks["action by automorphisms"] = (int(c), [tuple(int(x) for x in t) for t in f])
    c, f = _kernels.action_compatibility_failures(G1.table, act, limit, backend)
    rep.checks["right action"] = (int(c), [tuple(int(x) for x in t) for t in f])
    ident = act[:, G1.identity] != np.arange(G2.order)
    rep.checks["identity acts trivially"] = _pairs(ident[:, None], limit)
    # phi(alpha^g) == g^-1 phi(alpha) g
    g = np.arange(G1.order)[None, :]
    conj = G1.table[G1.inverse[g], G1.table[phi[:, None], g]]
    rep.checks["equivariance"] = _pairs(phi[act] != conj, limit)
    # alpha^phi(beta) == beta^-1 alpha beta
    b = np.arange(G2.order)[None, :]
    a = np.arange(G2.order)[:, None]
    rep.checks["peiffer"] = _pairs(act[a, phi[b]] != G2.table[G2.inverse[b], G2.table[a, b]], limit)
    ker = np.nonzero(phi == G1.identity)[0]
    comm = G2.table[ker[:, None], b] != G2.table[b, ker[:, None]]
    c, f = _pairs(comm, limit)
    rep.checks["ker(phi) central"] = (c, [(int(ker[i]), j) for i, j in f])
    return rep


def _require_valid(xm: FiniteCrossedModule):
    rep = verify_crossed_module(xm, limit=1)
    if not rep.valid:
        name, (_, first) = next(iter(rep.violations().items()))
        raise ValueError(f"not a crossed module: {name} fails at {first[0]}")


# -- arrows ------------------------------------------------------------------------------


@dataclass(frozen=True)
class Arrow:
    g: int
    alpha: int


def source(xm: FiniteCrossedModule, a: Arrow) -> int:
    return a.g


def target(xm: FiniteCrossedModule, a: Arrow) -> int:
    return xm.g1.mul(a.g, int(xm.phi[a.alpha]))


def compose_arrows(xm: FiniteCrossedModule, a: Arrow, b: Arrow) -> Arrow:
    """``a`` followed by ``b``; needs ``target(a) == source(b)``."""
    if target(xm, a) != b.g:
        raise ValueError(f"arrows not composable: target {target(xm, a)} != source {b.g}")
    return Arrow(a.g, xm.g2.mul(a.alpha, b.alpha))


def multiply_arrows(xm: FiniteCrossedModule, a: Arrow, b: Arrow) -> Arrow:
    """Monoidal product ``(g, alpha)(h, beta) = (gh, alpha^h beta)``."""
    return Arrow(xm.g1.mul(a.g, b.g), xm.g2.mul(int(xm.act[a.alpha, b.g]), b.alpha))


def identity_arrow(xm: FiniteCrossedModule, g: int) -> Arrow:
    return Arrow(g, xm.g2.identity)


def interchange_failures(xm: FiniteCrossedModule, limit: int = 20, backend=None) -> tuple:
    """Exhaustive interchange-law check over all pairs of composable pairs."""
    c, f = _kernels.interchange_failures(xm.g1.table, xm.g2.table, xm.phi, xm.act, limit, backend)
    return int(c), [tuple(int(x) for x in t) for t in f]


@dataclass
class TwoGroup:
    """The strict 2-group of a crossed module, stored as explicit tables.

    Arrow ``(g, alpha)`` has index ``g * |G2| + alpha``.
    """

    n_objects: int
    unit: int
    obj_table: np.ndarray
    src: np.ndarray
    tgt: np.ndarray
    arrow_product: np.ndarray
    compose: dict

    @property
    def n_arrows(self) -> int:
        return len(self.src)


def two_group(xm: FiniteCrossedModule) -> TwoGroup:
    n1, n2 = xm.g1.order, xm.g2.order
    arrows = [Arrow(g, a) for g in range(n1) for a in range(n2)]
    idx = {a: i for i, a in enumerate(arrows)}
    src = np.array([a.g for a in arrows], np.int64)
    tgt = np.array([target(xm, a) for a in arrows], np.int64)
    prod = np.array([[idx[multiply_arrows(xm, a, b)] for b in arrows] for a in arrows], np.int64)
    comp = {}
    for i, a in enumerate(arrows):
        for j in np.nonzero(src == tgt[i])[0]:
            comp[(i, int(j))] = idx[compose_arrows(xm, a, arrows[j])]
    return TwoGroup(n1, xm.g1.identity, xm.g1.table.copy(), src, tgt, prod, comp)


def crossed_module_of(tg: TwoGroup, n2: int) -> FiniteCrossedModule:
    """Recover ``[t: ker(s) -> Ob]`` with action by conjugation with identity arrows.

    ``n2`` fixes the identification ``alpha <-> (e, alpha)``; arrows out of
    the unit object are ordered by index, which is the canonical one.
    """
    G1 = FiniteGroup(tg.obj_table)
    ker = [i for i in range(tg.n_arrows) if tg.src[i] == tg.unit]
    if len(ker) != n2:
        raise ValueError("unexpected number of arrows out of the unit object")
    pos = {a: k for k, a in enumerate(ker)}
    G2 = FiniteGroup([[pos[int(tg.arrow_product[a, b])] for b in ker] for a in ker])
    phi = [int(tg.tgt[a]) for a in ker]

    # identity arrow on g is the unique endo-arrow of g that is neutral for composition
    def id_arrow(g):
        for i in np.nonzero(tg.src == g)[0]:
            i = int(i)
            if tg.tgt[i] == g and all(tg.compose[(i, j)] == j for j in np.nonzero(tg.src == g)[0].tolist()):
                return i
        raise ValueError(f"object {g} has no identity arrow")

    ids = [id_arrow(g) for g in range(tg.n_objects)]
    inv_obj = G1.inverse
    act = np.empty((len(ker), tg.n_objects), np.int64)
    for k, a in enumerate(ker):
        for g in range(tg.n_objects):
            x = tg.arrow_product[tg.arrow_product[ids[inv_obj[g]], a], ids[g]]
            act[k, g] = pos[int(x)]
    return FiniteCrossedModule(G2, G1, phi, act)


def same_crossed_module(a: FiniteCrossedModule, b: FiniteCrossedModule) -> bool:
    return (
        a.g1.isomorphic_table(b.g1)
        and a.g2.isomorphic_table(b.g2)
        and bool((a.phi == b.phi).all())
        and bool((a.act == b.act).all())
    )


# -- homotopy groups -----------------------------------------------------------------------


def _cosets(xm: FiniteCrossedModule) -> list:
    image = sorted(set(int(x) for x in xm.phi))
    seen, reps = {}, []
    for g in range(xm.g1.order):
        if g in seen:
            continue
        k = len(reps)
        reps.append(g)
        for h in image:
            seen[xm.g1.mul(g, h)] = k
    return [seen[g] for g in range(xm.g1.order)], reps


def pi1(xm: FiniteCrossedModule) -> FiniteGroup:
    """``G1 / im(phi)``; cosets are numbered by their least element."""
    _require_valid(xm)
    coset, reps = _cosets(xm)
    return FiniteGroup([[coset[xm.g1.mul(a, b)] for b in reps] for a in reps])


def pi1_projection(xm: FiniteCrossedModule) -> np.ndarray:
    return np.array(_cosets(xm)[0], np.int64)


def pi2(xm: FiniteCrossedModule) -> FiniteGroup:
    """``ker(phi)``, abelian and central in ``G2`` for a valid crossed module."""
    _require_valid(xm)
    H, _ = xm.g2.subgroup(np.nonzero(xm.phi == xm.g1.identity)[0])
    assert H.is_abelian
    return H


def pi2_elements(xm: FiniteCrossedModule) -> np.ndarray:
    return np.nonzero(xm.phi == xm.g1.identity)[0]


@dataclass
class CrossedModuleMorphism:
    source: FiniteCrossedModule
    target: FiniteCrossedModule
    f2: np.ndarray
    f1: np.ndarray

    def __post_init__(self):
        self.f2 = np.asarray(self.f2, dtype=np.int64)
        self.f1 = np.asarray(self.f1, dtype=np.int64)

    def violations(self) -> list:
        """Names and first witnesses of the failed morphism squares, in order."""
        s, t = self.source, self.target
        out = []
        bad = s.g2.is_hom_to(t.g2, self.f2)
        if bad:
            out.append(("f2 homomorphism", bad[0]))
        bad = s.g1.is_hom_to(t.g1, self.f1)
        if bad:
            out.append(("f1 homomorphism", bad[0]))
        sq = np.nonzero(self.f1[s.phi] != t.phi[self.f2])[0]
        if len(sq):
            out.append(("phi square", (int(sq[0]),)))
        lhs = self.f2[s.act]
        rhs = t.act[self.f2[:, None], self.f1[None, :]]
        hit = np.argwhere(lhs != rhs)
        if len(hit):
            out.append(("action square", tuple(int(x) for x in hit[0])))
        return out


def _bijective(m: np.ndarray, n: int) -> bool:
    return len(m) == n and len(set(m.tolist())) == n


def is_equivalence(m: CrossedModuleMorphism) -> bool:
    """Whether the induced maps on ``pi1`` and ``pi2`` are bijections."""
    bad = m.violations()
    if bad:
        name, where = bad[0]
        raise ValueError(f"not a morphism of crossed modules: {name} fails at {where}")
    s, t = m.source, m.target
    _require_valid(s)
    _require_valid(t)
    cs, rs = _cosets(s)
    ct, rt = _cosets(t)
    on_pi1 = np.array([ct[int(m.f1[g])] for g in rs], np.int64)
    ks, kt = pi2_elements(s), pi2_elements(t)
    pos = {int(x): i for i, x in enumerate(kt)}
    on_pi2 = np.array([pos[int(m.f2[k])] for k in ks], np.int64)
    return _bijective(on_pi1, len(rt)) and _bijective(on_pi2, len(kt))


# -- weighted projective linear 2-group ---------------------------------------------------


@dataclass
class WeightedPglPresentation:
    """Symbolic ``[C* -> prod GL(m_w)]``; ``C*`` acts with the weights."""

    weights: tuple
    blocks: list
    d: int
    pi2: FgAbelianGroup
    normalizer_description: str
    phi_description: Optional[str] = None

    @property
    def block_sizes(self) -> tuple:
        return tuple(m for _, m in self.blocks)

    @property
    def pi1_description(self) -> str:
        return f"({self.normalizer_description}) / C*"

    def to_json(self) -> dict:
        out = {
            "weights": list(self.weights),
            "blocks": [{"weight": w, "multiplicity": m} for w, m in self.blocks],
            "d": self.d,
            "pi2": self.pi2.to_json(),
            "normalizer": self.normalizer_description,
            "pi1": self.pi1_description,
        }
        if self.phi_description is not None:
            out["phi"] = self.phi_description
        return out


def _gl(k: int) -> str:
    return "C*" if k == 1 else f"GL({k})"


def pgl_presentation(q: Sequence[int]) -> WeightedPglPresentation:
    """Blocks of equal weight; the normalizer of the weighted torus is the
    product of one general linear group per distinct weight."""
    q = [int(x) for x in q]
    if not q or any(x < 1 for x in q):
        raise ValueError("weights must be a nonempty list of positive integers")
    mult: dict = {}
    for w in q:
        mult[w] = mult.get(w, 0) + 1
    blocks = sorted(mult.items())
    d = 0
    for w in q:
        d = gcd(d, w)
    return WeightedPglPresentation(
        weights=tuple(sorted(q)),
        blocks=blocks,
        d=d,
        pi2=FgAbelianGroup.cyclic(d),
        normalizer_description=" x ".join(_gl(m) for _, m in blocks),
    )
