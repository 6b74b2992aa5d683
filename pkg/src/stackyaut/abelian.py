"""Finitely generated abelian groups presented as cokernels ``Z^k / im(R)``."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from math import prod
from typing import Iterator, Optional, Sequence

import numpy as np

from .lattice import (
    IntMatrix,
    column,
    hnf,
    hstack,
    identity,
    imat,
    kernel_basis,
    matmul,
    snf,
    solve_integer,
    unimodular_inverse,
    zeros,
)


class FgAbelianGroup:
    """The group ``Z^k / (column span of relations)``.

    Canonical coordinates come from the Smith form ``U R V = D``: an element
    ``x`` is represented by ``U x`` with each torsion coordinate reduced
    modulo its invariant factor, unit coordinates dropped to zero, and free
    coordinates left as they are.
    """

    def __init__(self, relations: IntMatrix):
        R = imat(relations)
        self.relations = R
        self.ngens = R.shape[0]
        dec = snf(R)
        self._U = dec.U
        m = min(R.shape)
        self._mods = [int(dec.D[i, i]) if i < m else 0 for i in range(self.ngens)]

    # -- constructors --------------------------------------------------------

    @classmethod
    def free(cls, n: int) -> "FgAbelianGroup":
        return cls(zeros(n, 0))

    @classmethod
    def cyclic(cls, n: int) -> "FgAbelianGroup":
        """``Z/n``; ``n == 0`` gives ``Z``."""
        return cls(imat([[n]]))

    @classmethod
    def standard(cls, free_rank: int, torsion: Sequence[int] = ()) -> "FgAbelianGroup":
        """``Z^free_rank + Z/t1 + ...`` with the free generators first."""
        k = free_rank + len(torsion)
        R = zeros(k, len(torsion))
        for j, t in enumerate(torsion):
            if t < 1:
                raise ValueError("torsion coefficients must be positive")
            R[free_rank + j, j] = int(t)
        return cls(R)

    # -- invariants ----------------------------------------------------------

    @cached_property
    def torsion(self) -> tuple:
        return tuple(d for d in self._mods if d > 1)

    @cached_property
    def free_rank(self) -> int:
        return sum(1 for d in self._mods if d == 0)

    @property
    def invariants(self) -> tuple:
        return self.free_rank, self.torsion

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    @property
    def order(self) -> Optional[int]:
        """Group order, ``None`` when infinite."""
        return prod(self.torsion) if self.is_finite else None

    def __repr__(self) -> str:
        return f"FgAbelianGroup({self})"

    def __str__(self) -> str:
        parts = []
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        parts += [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {"free_rank": self.free_rank, "torsion": list(self.torsion)}

    # -- elements ------------------------------------------------------------

    def canonical(self, vec: Sequence[int]) -> tuple:
        """Canonical representative of the class of ``vec``."""
        if len(vec) != self.ngens:
            raise ValueError(f"expected {self.ngens} coordinates, got {len(vec)}")
        y = matmul(self._U, column(vec))[:, 0]
        return tuple(int(v) % d if d else int(v) for v, d in zip(y, self._mods))

    def is_zero(self, vec: Sequence[int]) -> bool:
        return not any(self.canonical(vec))

    def split(self, vec: Sequence[int]) -> tuple:
        """``(free coordinates, torsion coordinates)`` of ``vec``.

        Torsion coordinates are listed in the order of :attr:`torsion`.
        """
        c = self.canonical(vec)
        free = tuple(x for x, d in zip(c, self._mods) if d == 0)
        tors = tuple(x for x, d in zip(c, self._mods) if d > 1)
        return free, tors

    @cached_property
    def _U_inv(self) -> IntMatrix:
        return unimodular_inverse(self._U)

    def lift(self, free: Sequence[int], tors: Sequence[int]) -> list:
        """Inverse of :meth:`split`: a generator-coordinate vector."""
        free, tors = iter(free), iter(tors)
        y = [next(free) if d == 0 else (next(tors) if d > 1 else 0) for d in self._mods]
        return [int(v) for v in matmul(self._U_inv, column(y))[:, 0]]

    def element(self, vec: Sequence[int]) -> "GroupElement":
        return GroupElement(self, self.canonical(vec))

    def elements(self) -> Iterator[list]:
        """All elements of a finite group, as generator-coordinate vectors."""
        if not self.is_finite:
            raise ValueError("cannot enumerate an infinite group")
        for tors in itertools.product(*(range(t) for t in self.torsion)):
            yield self.lift((), tors)

    def generator_images(self) -> list:
        """Vectors of the canonical cyclic generators: free ones, then torsion."""
        f, t = self.free_rank, len(self.torsion)
        gens = []
        for i in range(f):
            gens.append(self.lift([int(i == j) for j in range(f)], [0] * t))
        for i in range(t):
            gens.append(self.lift([0] * f, [int(i == j) for j in range(t)]))
        return gens


@dataclass(frozen=True, eq=False)
class GroupElement:
    """An element stored by its canonical coordinates."""

    group: FgAbelianGroup
    coords: tuple

    def _reduce(self, coords) -> "GroupElement":
        mods = self.group._mods
        return GroupElement(self.group, tuple(c % d if d else c for c, d in zip(coords, mods)))

    def __add__(self, other: "GroupElement") -> "GroupElement":
        self._same(other)
        return self._reduce([a + b for a, b in zip(self.coords, other.coords)])

    def __neg__(self) -> "GroupElement":
        return self._reduce([-a for a in self.coords])

    def __sub__(self, other: "GroupElement") -> "GroupElement":
        return self + (-other)

    def __eq__(self, other) -> bool:
        return isinstance(other, GroupElement) and other.group is self.group and other.coords == self.coords

    def __hash__(self) -> int:
        return hash((id(self.group), self.coords))

    @property
    def is_zero(self) -> bool:
        return not any(self.coords)

    def _same(self, other):
        if other.group is not self.group:
            raise ValueError("elements of different groups")


class GroupHom:
    """A homomorphism given by its matrix on the chosen generators.

    Well-definedness (relations map into relations) is checked on
    construction.
    """

    def __init__(self, source: FgAbelianGroup, target: FgAbelianGroup, matrix, check: bool = True):
        M = matrix if isinstance(matrix, np.ndarray) else imat(matrix, rows=target.ngens, cols=source.ngens)
        M = imat(M)
        if M.shape != (target.ngens, source.ngens):
            raise ValueError(f"matrix shape {M.shape} does not match {target.ngens}x{source.ngens}")
        self.source, self.target, self.matrix = source, target, M
        if check:
            img = matmul(M, source.relations)
            for j in range(img.shape[1]):
                if not target.is_zero(list(img[:, j])):
                    raise ValueError(f"relation {j} of the source does not map to zero")

    def __call__(self, vec: Sequence[int]) -> list:
        return [int(v) for v in matmul(self.matrix, column(vec))[:, 0]]

    def __repr__(self) -> str:
        return f"GroupHom({self.source} -> {self.target}, {self.matrix.tolist()})"

    def compose(self, other: "GroupHom") -> "GroupHom":
        """``self ∘ other``."""
        if other.target.ngens != self.source.ngens:
            raise ValueError("homomorphisms are not composable")
        return GroupHom(other.source, self.target, matmul(self.matrix, other.matrix), check=False)

    __matmul__ = compose

    def is_zero(self) -> bool:
        return all(self.target.is_zero(list(self.matrix[:, j])) for j in range(self.matrix.shape[1]))

    def equals(self, other: "GroupHom") -> bool:
        if self.matrix.shape != other.matrix.shape:
            return False
        diff = self.matrix - other.matrix
        return all(self.target.is_zero(list(diff[:, j])) for j in range(diff.shape[1]))

    def is_injective(self) -> bool:
        return kernel(self)[0].is_trivial

    def is_surjective(self) -> bool:
        return cokernel(self).is_trivial

    def is_isomorphism(self) -> bool:
        return self.is_injective() and self.is_surjective()

    def inverse(self) -> "GroupHom":
        """Inverse of an isomorphism."""
        if not self.is_isomorphism():
            raise ValueError("homomorphism is not invertible")
        A = hstack(self.matrix, self.target.relations)
        cols = []
        for j in range(self.target.ngens):
            e = [int(i == j) for i in range(self.target.ngens)]
            x = solve_integer(A, e)
            cols.append(x[: self.source.ngens])
        M = zeros(self.source.ngens, self.target.ngens)
        for j, c in enumerate(cols):
            M[:, j] = c
        return GroupHom(self.target, self.source, M)


def make_group(relations, ngens: Optional[int] = None) -> FgAbelianGroup:
    """Group presented by ``relations``; pass ``ngens`` when there are none."""
    R = imat(relations) if len(relations) else zeros(ngens or 0, 0)
    if ngens is not None and R.shape[0] != ngens:
        raise ValueError(f"relation matrix has {R.shape[0]} rows, expected {ngens}")
    return FgAbelianGroup(R)


def identity_hom(a: FgAbelianGroup) -> GroupHom:
    return GroupHom(a, a, identity(a.ngens), check=False)


def zero_hom(a: FgAbelianGroup, b: FgAbelianGroup) -> GroupHom:
    return GroupHom(a, b, zeros(b.ngens, a.ngens), check=False)


def cokernel(f: GroupHom) -> FgAbelianGroup:
    """``target / image(f)``, presented on the target's generators."""
    return FgAbelianGroup(hstack(f.target.relations, f.matrix))


def quotient_map(f: GroupHom) -> GroupHom:
    """The projection ``target -> cokernel(f)``."""
    return GroupHom(f.target, cokernel(f), identity(f.target.ngens), check=False)


def _lattice_basis(vectors: IntMatrix) -> IntMatrix:
    """A basis (as columns) of the lattice spanned by the given columns."""
    if vectors.shape[1] == 0:
        return vectors
    h, _ = hnf(vectors.T)
    rows = [r for r in h if any(x != 0 for x in r)]
    if not rows:
        return zeros(vectors.shape[0], 0)
    return np.ascontiguousarray(imat(rows).T)


def kernel(f: GroupHom):
    """Kernel of ``f`` with its inclusion homomorphism.

    The preimage lattice ``{x : f(x) in im(R_target)}`` is computed first;
    the kernel is that lattice modulo the source relations.
    """
    ks = f.source.ngens
    K = kernel_basis(hstack(f.matrix, -f.target.relations))
    P = _lattice_basis(K[:ks])
    g = P.shape[1]
    rel = kernel_basis(hstack(P, -f.source.relations))[:g]
    K_group = FgAbelianGroup(rel if rel.shape[0] == g else zeros(g, 0))
    return K_group, GroupHom(K_group, f.source, P, check=False)


def image_in(sub_inclusion: GroupHom, vec: Sequence[int]) -> Optional[list]:
    """Coordinates of ``vec`` in the generators of a subgroup, if it lies there."""
    A = hstack(sub_inclusion.matrix, sub_inclusion.target.relations)
    x = solve_integer(A, list(vec))
    return None if x is None else x[: sub_inclusion.source.ngens]


def is_isomorphic(a: FgAbelianGroup, b: FgAbelianGroup) -> bool:
    return a.invariants == b.invariants


def homology_at(f: GroupHom, g: GroupHom) -> FgAbelianGroup:
    """``ker(g) / im(f)`` for a composable pair with ``g ∘ f = 0``."""
    if f.target.ngens != g.source.ngens:
        raise ValueError("homomorphisms are not composable")
    if not g.compose(f).is_zero():
        raise ValueError("g ∘ f is not zero; the pair is not a complex")
    K, inc = kernel(g)
    C = zeros(K.ngens, f.source.ngens)
    for j in range(f.source.ngens):
        x = image_in(inc, list(f.matrix[:, j]))
        if x is None:  # pragma: no cover - guarded by the composite check
            raise ArithmeticError("image of f escaped the kernel of g")
        C[:, j] = x
    return cokernel(GroupHom(f.source, K, C, check=False))


def dual_finite(a: FgAbelianGroup) -> FgAbelianGroup:
    """The character group ``Hom(a, Q/Z)`` of a finite group.

    For ``a = Z^k / L`` with ``L`` of full rank and basis matrix ``B``, the
    characters are ``B^{-T} Z^k / Z^k``, which is presented by ``B^T``.
    """
    if not a.is_finite:
        raise ValueError("dual_finite needs a finite group")
    B = _lattice_basis(a.relations)
    return FgAbelianGroup(np.ascontiguousarray(B.T) if B.size else zeros(a.ngens, 0))


def integral_dual_basis(a: FgAbelianGroup) -> IntMatrix:
    """Columns spanning ``Hom(a, Z)`` inside ``Z^k`` (functionals killing R)."""
    return kernel_basis(a.relations.T)


def dual_hom(f: GroupHom):
    """``Hom(f, Z)`` as a matrix between the free groups of functionals.

    Returns ``(matrix, Y_target, Y_source)`` where the columns of the
    matrix express ``y ∘ f`` in the basis ``Y_source`` for ``y`` running over
    ``Y_target``.
    """
    Ys = integral_dual_basis(f.source)
    Yt = integral_dual_basis(f.target)
    img = matmul(f.matrix.T, Yt)
    M = zeros(Ys.shape[1], Yt.shape[1])
    for j in range(Yt.shape[1]):
        x = solve_integer(Ys, list(img[:, j]))
        if x is None:  # pragma: no cover - y∘f always kills the relations
            raise ArithmeticError("dual map does not land in the dual lattice")
        M[:, j] = x
    return M, Yt, Ys


def direct_sum(*groups: FgAbelianGroup) -> FgAbelianGroup:
    k = sum(g.ngens for g in groups)
    m = sum(g.relations.shape[1] for g in groups)
    R = zeros(k, m)
    r = c = 0
    for g in groups:
        R[r : r + g.ngens, c : c + g.relations.shape[1]] = g.relations
        r += g.ngens
        c += g.relations.shape[1]
    return FgAbelianGroup(R)
