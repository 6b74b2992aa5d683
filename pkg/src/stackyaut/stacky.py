"""Stacky fans ``(N, Sigma, beta)`` and their character-level quotient data."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .abelian import FgAbelianGroup, GroupHom
from .fans import Fan, _cone_set, primitive_collections, validate_fan
from .gale import BetaMap, GaleDualData, canonical_resolution, character_kernel, gale_dual
from .lattice import from_columns, hstack, imat, kernel_basis, matmul, primitive, solve_integer, solve_integer_matrix, zeros


class StackyFan:
    """A stacky fan with ``N = Z^d + Z/t_1 + ...`` (free coordinates first).

    ``fan`` lives in ``N/N_tor = Z^d``; the image of ``b_i`` there must be a
    positive multiple of ray ``i``.
    """

    def __init__(self, free_rank: int, torsion: Sequence[int], fan: Fan, columns):
        self.free_rank = int(free_rank)
        self.torsion = tuple(int(t) for t in torsion)
        self.n_group = FgAbelianGroup.standard(self.free_rank, self.torsion)
        self.fan = fan
        self.columns = [tuple(int(x) for x in c) for c in columns]
        self.beta = BetaMap(self.n_group, self.columns)

    @property
    def n(self) -> int:
        return len(self.columns)

    def bbar(self, i: int) -> tuple:
        return self.columns[i][: self.free_rank]

    def multipliers(self) -> list:
        """``m_i`` with ``bbar_i = m_i * ray_i`` (``None`` where no such m_i > 0)."""
        out = []
        for i, b in enumerate(self.columns):
            m, r = primitive(b[: self.free_rank])
            out.append(m if i < self.fan.n and m > 0 and r == self.fan.rays[i] else None)
        return out

    def to_json(self) -> dict:
        return {
            "n": {"free_rank": self.free_rank, "torsion": list(self.torsion)},
            "beta": [list(c) for c in self.columns],
            "fan": self.fan.to_json(),
        }

    def __repr__(self) -> str:
        return f"StackyFan(N={self.n_group}, n={self.n}, fan_dim={self.fan.dim})"


def validate_stacky_fan(sf: StackyFan) -> list:
    """Violations of the stacky-fan conditions; empty iff valid."""
    problems = []
    if sf.fan.dim != sf.free_rank:
        problems.append(f"fan dimension {sf.fan.dim} differs from rank of N/N_tor {sf.free_rank}")
    if sf.fan.n != sf.n:
        problems.append(f"fan has {sf.fan.n} rays but beta has {sf.n} columns")
    for i, c in enumerate(sf.columns):
        if len(c) != sf.n_group.ngens:
            problems.append(f"b_{i} has {len(c)} coordinates, expected {sf.n_group.ngens}")
    if problems:
        return problems
    problems += [f"fan: {p}" for p in validate_fan(sf.fan)]
    if not sf.beta.has_finite_cokernel:
        problems.append("beta has infinite cokernel")
    for i, m in enumerate(sf.multipliers()):
        if m is None:
            problems.append(f"image of b_{i} in N/N_tor is not a positive multiple of ray {i}")
    return problems


def _require_valid(sf: StackyFan):
    bad = validate_stacky_fan(sf)
    if bad:
        raise ValueError("invalid stacky fan: " + "; ".join(bad))


@dataclass
class QuotientPresentation:
    """``[Z/G]`` at character level: ``G = Hom(DG, C*)`` acting through ``alpha``."""

    z_combinatorics: list
    g_characters: FgAbelianGroup
    alpha_matrix: GroupHom
    mu: FgAbelianGroup
    gale: GaleDualData = field(repr=False)


def quotient_presentation(sf: StackyFan) -> QuotientPresentation:
    _require_valid(sf)
    gd = gale_dual(sf.beta)
    return QuotientPresentation(
        z_combinatorics=primitive_collections(sf.fan),
        g_characters=gd.dg,
        alpha_matrix=gd.beta_vee,
        mu=gd.mu,
        gale=gd,
    )


# -- symmetries ------------------------------------------------------------------


@dataclass
class StackySymmetry:
    sigma: tuple
    tau: GroupHom
    induced_dg: GroupHom

    def to_json(self) -> dict:
        return {
            "sigma": list(self.sigma),
            "tau": self.tau.matrix.tolist(),
            "induced_dg": self.induced_dg.matrix.tolist(),
        }


def perm_matrix(sigma) -> np.ndarray:
    """``P`` with ``P e_i = e_sigma(i)``."""
    n = len(sigma)
    P = zeros(n, n)
    for i, s in enumerate(sigma):
        P[s, i] = 1
    return P


def _automorphism_lifts(N: FgAbelianGroup, B, target):
    """All endomorphisms ``M`` of ``N`` with ``M B == target`` in ``N``.

    Solves ``M B - R Y = target`` and ``M R - R Z = 0`` over ``Z``; the
    solution set modulo homs with image in ``im(R)`` is a torsor under the
    finite group ``Hom(Coker(beta), N)``, enumerated explicitly.
    """
    R = N.relations
    k, n, m = N.ngens, B.shape[1], R.shape[1]
    nM, nY, nZ = k * k, m * n, m * m
    rows = []
    rhs = []
    # (M B - R Y)[i, c]
    for i in range(k):
        for c in range(n):
            row = [0] * (nM + nY + nZ)
            for j in range(k):
                row[i * k + j] = B[j, c]
            for a in range(m):
                row[nM + a * n + c] = -R[i, a]
            rows.append(row)
            rhs.append(target[i, c])
    # (M R - R Z)[i, c]
    for i in range(k):
        for c in range(m):
            row = [0] * (nM + nY + nZ)
            for j in range(k):
                row[i * k + j] = R[j, c]
            for a in range(m):
                row[nM + nY + a * m + c] = -R[i, a]
            rows.append(row)
            rhs.append(0)
    A = imat(rows) if rows else zeros(0, nM + nY + nZ)
    u = solve_integer(A, rhs)
    if u is None:
        return []
    M0 = np.array(u[:nM], dtype=object).reshape(k, k)
    lam = kernel_basis(A)[:nM]
    # homs that vanish identically: M = R W
    zero_cols = []
    for a in range(m):
        for j in range(k):
            W = zeros(m, k)
            W[a, j] = 1
            zero_cols.append(list(matmul(R, W).reshape(-1)))
    Z0 = from_columns(zero_cols, nM) if zero_cols else zeros(nM, 0)
    g = lam.shape[1]
    rel = kernel_basis(hstack(lam, -Z0))[:g] if g else zeros(0, 0)
    H = FgAbelianGroup(rel if g else zeros(0, 0))
    if not H.is_finite:  # pragma: no cover - Hom(finite, N) is finite
        raise ArithmeticError("infinitely many lifts")
    out = []
    for c in H.elements():
        M = M0 + (matmul(lam, np.array([[x] for x in c], dtype=object)).reshape(k, k) if g else 0)
        out.append(M)
    return out


def _induced_on_dg(sf: StackyFan, gd: GaleDualData, sigma, tau: GroupHom) -> GroupHom:
    """The automorphism ``psi`` of ``DG`` with ``psi ∘ beta^vee = beta^vee ∘ P_sigma``.

    A lift of ``tau`` to the resolution gives ``[B Q] Phi = M [B Q]`` with
    ``Phi = [[P_sigma, 0], [Y, Z]]``; the transpose of ``Phi`` descends to
    ``DG`` and intertwines ``beta^vee`` with ``P_sigma^T``, so ``psi`` is its
    inverse.
    """
    Q, B = gd.resolution
    n, r = sf.n, Q.shape[1]
    kk = B.shape[0]
    P = perm_matrix(sigma)
    # tau in the canonical coordinates of the resolution
    _, Pc = canonical_resolution(sf.n_group)
    Mc = zeros(kk, kk)
    gens_img = []
    for j in range(kk):
        e = [int(i == j) for i in range(kk)]
        # a generator-coordinate preimage of canonical e_j
        x = solve_integer(Pc, e) if Pc.shape[1] else []
        gens_img.append(matmul(Pc, matmul(tau.matrix, np.array([[v] for v in x], dtype=object)))[:, 0])
    for j in range(kk):
        Mc[:, j] = gens_img[j]
    Y = solve_integer_matrix(Q, matmul(Mc, B) - matmul(B, P)) if r else zeros(0, n)
    Zm = solve_integer_matrix(Q, matmul(Mc, Q)) if r else zeros(0, 0)
    if Y is None or Zm is None:  # pragma: no cover - tau preserves relations
        raise ArithmeticError("could not lift tau to the resolution")
    Phi = zeros(n + r, n + r)
    Phi[:n, :n] = P
    Phi[n:, :n] = Y
    Phi[n:, n:] = Zm
    psi_t = GroupHom(gd.dg, gd.dg, np.ascontiguousarray(Phi.T))
    return psi_t.inverse()


def find_symmetries(sf: StackyFan) -> list:
    """All fan-compatible automorphisms ``(sigma, tau)`` of the stacky fan.

    Permutations run in lexicographic order; ``tau`` is solved only for
    ``sigma`` that carry cones onto cones.
    """
    _require_valid(sf)
    gd = gale_dual(sf.beta)
    N = sf.n_group
    B = sf.beta.matrix
    cones = _cone_set(sf.fan)
    out = []
    for sigma in itertools.permutations(range(sf.n)):
        if _cone_set(sf.fan, sigma) != cones:
            continue
        target = matmul(B, perm_matrix(sigma))
        for M in _automorphism_lifts(N, B, target):
            tau = GroupHom(N, N, M)
            if not tau.is_isomorphism():
                continue
            out.append(StackySymmetry(sigma, tau, _induced_on_dg(sf, gd, sigma, tau)))
    return out


def compose_symmetries(s: StackySymmetry, t: StackySymmetry) -> tuple:
    """``(sigma, tau)`` of ``s ∘ t``."""
    sigma = tuple(s.sigma[t.sigma[i]] for i in range(len(s.sigma)))
    return sigma, s.tau.compose(t.tau)


def symmetry_index(syms: list, sigma, tau: GroupHom) -> Optional[int]:
    for k, s in enumerate(syms):
        if s.sigma == tuple(sigma) and s.tau.equals(tau):
            return k
    return None


# -- pi_2 shadow ------------------------------------------------------------------


@dataclass
class TheoremShadow:
    pi2_via_mu: FgAbelianGroup
    pi2_via_characters: tuple
    symmetry_order: int
    symmetries: list

    @property
    def routes_agree(self) -> bool:
        return self.pi2_via_mu.free_rank == 0 and self.pi2_via_mu.torsion == self.pi2_via_characters

    def to_json(self) -> dict:
        return {
            "pi2_via_mu": self.pi2_via_mu.to_json(),
            "pi2_via_characters": {"free_rank": 0, "torsion": list(self.pi2_via_characters)},
            "routes_agree": self.routes_agree,
            "symmetry_order": self.symmetry_order,
            "symmetries": [s.to_json() for s in self.symmetries],
        }


def theorem_shadow(sf: StackyFan, with_symmetries: bool = True) -> TheoremShadow:
    """``pi_2`` of the associated 2-group computed two independent ways.

    Route one is ``mu`` from the Smith-form dual of ``Coker(beta^vee)``;
    route two enumerates the characters of ``DG`` killed by ``beta^vee``.
    The symmetry-group order is the computable part of ``pi_1``.
    """
    _require_valid(sf)
    gd = gale_dual(sf.beta)
    syms = find_symmetries(sf) if with_symmetries else []
    return TheoremShadow(
        pi2_via_mu=gd.mu,
        pi2_via_characters=character_kernel(gd),
        symmetry_order=len(syms),
        symmetries=syms,
    )
