"""Simplicial fans stored combinatorially as ray-index sets."""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from typing import Optional

from . import _kernels
from .lattice import det, from_columns, kernel_basis, matmul, primitive, rank, solve_integer, imat


@dataclass(frozen=True)
class Fan:
    """A fan in ``Z^dim`` given by rays and maximal cones.

    ``multipliers`` records, per ray, the positive integer by which the
    originally supplied generator exceeded the primitive ray.
    """

    dim: int
    rays: tuple
    max_cones: tuple
    multipliers: Optional[tuple] = None

    def __post_init__(self):
        object.__setattr__(self, "rays", tuple(tuple(int(x) for x in r) for r in self.rays))
        cones = tuple(tuple(sorted(int(i) for i in c)) for c in self.max_cones)
        object.__setattr__(self, "max_cones", cones)
        if self.multipliers is None:
            object.__setattr__(self, "multipliers", (1,) * len(self.rays))

    @classmethod
    def from_generators(cls, dim: int, generators, max_cones) -> "Fan":
        """Primitivize the given generators, recording the multipliers."""
        rays, mult = [], []
        for g in generators:
            m, r = primitive(g)
            rays.append(r)
            mult.append(m)
        return cls(dim, tuple(rays), tuple(max_cones), tuple(mult))

    @property
    def n(self) -> int:
        return len(self.rays)

    @property
    def generators(self) -> tuple:
        return tuple(tuple(m * x for x in r) for m, r in zip(self.multipliers, self.rays))

    def ray_matrix(self, indices=None):
        idx = range(self.n) if indices is None else indices
        return from_columns([self.rays[i] for i in idx], self.dim)

    def cone_masks(self) -> list:
        return [sum(1 << i for i in c) for c in self.max_cones]

    def is_face(self, subset) -> bool:
        s = set(subset)
        return any(s <= set(c) for c in self.max_cones)

    def to_json(self) -> dict:
        out = {"dim": self.dim, "rays": [list(r) for r in self.rays], "cones": [list(c) for c in self.max_cones]}
        if any(m != 1 for m in self.multipliers):
            out["multipliers"] = list(self.multipliers)
        return out


def _nonneg_circuit_hits(columns, protected) -> list:
    """Indices outside ``protected`` carried by a nonnegative kernel vector.

    The cone ``{w >= 0 : A w = 0}`` is generated by its extreme rays, which
    are the sign-definite circuits of ``A``; enumerating minimal supports
    decides exactly which coordinates can be positive.
    """
    m = len(columns)
    hits = set()
    if m == 0:
        return []
    dim = len(columns[0])
    for size in range(1, min(m, dim + 1) + 1):
        for J in itertools.combinations(range(m), size):
            K = kernel_basis(from_columns([columns[j] for j in J], dim))
            if K.shape[1] != 1:
                continue
            w = [int(x) for x in K[:, 0]]
            if any(x == 0 for x in w):
                continue
            if all(x > 0 for x in w) or all(x < 0 for x in w):
                hits.update(J[i] for i in range(size) if J[i] not in protected)
    return sorted(hits)


def _cones_meet_properly(fan: Fan, s, t) -> bool:
    """``cone(s) ∩ cone(t) == cone(s ∩ t)`` for simplicial cones.

    Shared rays enter a relation with a coefficient of either sign, so they
    are projected away first; what is left must carry no nonnegative relation.
    """
    common = [i for i in s if i in t]
    P = kernel_basis(from_columns([fan.rays[i] for i in common], fan.dim).T).T
    proj = lambda r, sign: tuple(sign * int(x) for x in matmul(P, imat([[x] for x in r])).reshape(-1))
    cols = [proj(fan.rays[i], 1) for i in s if i not in common]
    cols += [proj(fan.rays[j], -1) for j in t if j not in common]
    return not _nonneg_circuit_hits(cols, set())


def validate_fan(f: Fan) -> list:
    """List of violated fan invariants; empty iff the fan is valid."""
    problems = []
    for i, r in enumerate(f.rays):
        if len(r) != f.dim:
            problems.append(f"ray {i} has length {len(r)}, expected {f.dim}")
            continue
        if not any(r):
            problems.append(f"ray {i} is zero")
        elif primitive(r)[0] != 1:
            problems.append(f"ray {i} {list(r)} is not primitive")
    if len(set(f.rays)) != len(f.rays):
        problems.append("rays are not distinct")
    if problems:
        return problems
    for k, c in enumerate(f.max_cones):
        if any(i < 0 or i >= f.n for i in c):
            problems.append(f"cone {k} refers to a missing ray")
        elif len(set(c)) != len(c):
            problems.append(f"cone {k} repeats a ray")
        elif c and rank(f.ray_matrix(c)) != len(c):
            problems.append(f"cone {k} {list(c)} is not simplicial (rays dependent)")
    if problems:
        return problems
    for a, b in itertools.combinations(range(len(f.max_cones)), 2):
        s, t = f.max_cones[a], f.max_cones[b]
        if set(s) <= set(t) or set(t) <= set(s):
            problems.append(f"cone {a} and cone {b} are nested")
        elif not _cones_meet_properly(f, s, t):
            problems.append(f"cones {a} and {b} do not meet in a common face")
    return problems


def primitive_collections(f: Fan, backend=None) -> list:
    """Minimal ray sets contained in no cone, sorted by (size, indices)."""
    bad = validate_fan(f)
    if bad:
        raise ValueError("invalid fan: " + "; ".join(bad))
    masks = _kernels.minimal_nonfaces(f.cone_masks(), f.n, backend=backend)
    out = [tuple(i for i in range(f.n) if m >> i & 1) for m in masks.tolist()]
    return sorted(out, key=lambda c: (len(c), c))


def is_complete(f: Fan) -> bool:
    """Every facet of a maximal cone lies in exactly two maximal cones, and
    the dual graph is connected."""
    if any(len(c) != f.dim for c in f.max_cones):
        raise ValueError("completeness check needs all maximal cones of full dimension")
    if not f.max_cones:
        return False
    facets = Counter()
    for c in f.max_cones:
        for i in range(len(c)):
            facets[c[:i] + c[i + 1 :]] += 1
    if any(v != 2 for v in facets.values()):
        return False
    by_facet: dict = {}
    for k, c in enumerate(f.max_cones):
        for i in range(len(c)):
            by_facet.setdefault(c[:i] + c[i + 1 :], []).append(k)
    seen, stack = {0}, [0]
    while stack:
        k = stack.pop()
        c = f.max_cones[k]
        for i in range(len(c)):
            for other in by_facet[c[:i] + c[i + 1 :]]:
                if other not in seen:
                    seen.add(other)
                    stack.append(other)
    return len(seen) == len(f.max_cones)


def _cone_set(f: Fan, perm=None) -> frozenset:
    if perm is None:
        return frozenset(frozenset(c) for c in f.max_cones)
    return frozenset(frozenset(perm[i] for i in c) for c in f.max_cones)


def solve_linear_map(src_cols, dst_cols, dim):
    """The integer matrix ``T`` with ``T @ src_i == dst_i`` for all ``i``.

    The sources must span ``Q^dim``; ``None`` if ``T`` is not integral.
    """
    S = from_columns(src_cols, dim)
    rows = []
    for j in range(dim):
        x = solve_integer(S.T, [v[j] for v in dst_cols])
        if x is None:
            return None
        rows.append(x)
    return imat(rows, rows=dim, cols=dim)


def find_fan_isomorphisms(f: Fan, g: Fan) -> list:
    """All ``(sigma, tau)`` with ``tau @ ray_i(f) == ray_sigma(i)(g)``.

    ``sigma`` must carry the cones of ``f`` onto the cones of ``g`` and
    preserve multipliers, and ``tau`` must be unimodular.  Results come in lexicographic ``sigma``
    order.
    """
    if f.dim != g.dim or f.n != g.n:
        return []
    if f.n and rank(f.ray_matrix()) != f.dim:
        raise ValueError("rays must span the lattice to pin down tau")
    target = _cone_set(g)
    out = []
    for sigma in itertools.permutations(range(f.n)):
        if _cone_set(f, sigma) != target:
            continue
        if any(f.multipliers[i] != g.multipliers[sigma[i]] for i in range(f.n)):
            continue
        tau = solve_linear_map(f.rays, [g.rays[sigma[i]] for i in range(f.n)], f.dim)
        if tau is None or det(tau) not in (1, -1):
            continue
        out.append((sigma, tau))
    return out
