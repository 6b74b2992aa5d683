"""Fixed-width inner loops: multiplication-table axioms and subset masks.

Each kernel exists twice: an explicit-loop version compiled with numba
``@njit`` and a vectorized numpy version.  ``STACKYAUT_NUMBA=0`` (or a
missing numba) selects numpy by default; every public kernel also takes
``backend="numba" | "numpy"`` to force one.  Both return identical results:
``(count, first)`` where ``first`` holds the lexicographically first
``limit`` failing index tuples.
"""

from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f


DEFAULT_BACKEND = "numba" if HAVE_NUMBA and os.environ.get("STACKYAUT_NUMBA", "1") != "0" else "numpy"

# numpy fallback works on slabs of at most this many table lookups
_CHUNK = 1 << 22


def _pick(backend):
    backend = backend or DEFAULT_BACKEND
    if backend not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {backend!r}")
    if backend == "numba" and not HAVE_NUMBA:  # pragma: no cover
        raise RuntimeError("numba is not installed")
    return backend


def _as_table(a):
    return np.ascontiguousarray(a, dtype=np.int64)


def _collect(mask_chunks, width, limit):
    count, first = 0, []
    for offset, mask in mask_chunks:
        hits = np.argwhere(mask)
        if hits.size:
            hits[:, 0] += offset
            count += len(hits)
            if sum(len(f) for f in first) < limit:
                first.append(hits)
    out = np.concatenate(first)[:limit] if first else np.empty((0, width), np.int64)
    return count, out.astype(np.int64)


# -- associativity ---------------------------------------------------------------


@njit(cache=True)
def _assoc_loops(T, limit):
    n = T.shape[0]
    out = np.empty((limit, 3), np.int64)
    cnt = 0
    for a in range(n):
        for b in range(n):
            ab = T[a, b]
            for c in range(n):
                if T[ab, c] != T[a, T[b, c]]:
                    if cnt < limit:
                        out[cnt, 0] = a
                        out[cnt, 1] = b
                        out[cnt, 2] = c
                    cnt += 1
    return cnt, out[: min(cnt, limit)]


def _assoc_numpy(T, limit):
    n = T.shape[0]
    step = max(1, _CHUNK // max(1, n * n))

    def chunks():
        for a0 in range(0, n, step):
            a = np.arange(a0, min(n, a0 + step))
            left = T[T[a]]  # (a, b, c) -> (ab)c
            right = T[a][:, T]  # (a, b, c) -> a(bc)
            yield a0, left != right

    return _collect(chunks(), 3, limit)


def associativity_failures(T, limit=20, backend=None):
    """Triples ``(a, b, c)`` with ``(ab)c != a(bc)``."""
    T = _as_table(T)
    if _pick(backend) == "numba":
        return _assoc_loops(T, limit)
    return _assoc_numpy(T, limit)


# -- action by automorphisms ------------------------------------------------------


@njit(cache=True)
def _action_auto_loops(T2, act, limit):
    n2, n1 = act.shape
    out = np.empty((limit, 3), np.int64)
    cnt = 0
    for a in range(n2):
        for b in range(n2):
            ab = T2[a, b]
            for g in range(n1):
                if act[ab, g] != T2[act[a, g], act[b, g]]:
                    if cnt < limit:
                        out[cnt, 0] = a
                        out[cnt, 1] = b
                        out[cnt, 2] = g
                    cnt += 1
    return cnt, out[: min(cnt, limit)]


def _action_auto_numpy(T2, act, limit):
    n2, n1 = act.shape
    step = max(1, _CHUNK // max(1, n2 * n1))

    def chunks():
        for a0 in range(0, n2, step):
            a = np.arange(a0, min(n2, a0 + step))
            left = act[T2[a]]  # (a, b, g) -> (ab)^g
            right = T2[act[a][:, None, :], act[None, :, :]]  # a^g b^g
            yield a0, left != right

    return _collect(chunks(), 3, limit)


def action_automorphism_failures(T2, act, limit=20, backend=None):
    """Triples ``(a, b, g)`` with ``(ab)^g != a^g b^g``."""
    T2, act = _as_table(T2), _as_table(act)
    if _pick(backend) == "numba":
        return _action_auto_loops(T2, act, limit)
    return _action_auto_numpy(T2, act, limit)


@njit(cache=True)
def _action_compat_loops(T1, act, limit):
    n2, n1 = act.shape
    out = np.empty((limit, 3), np.int64)
    cnt = 0
    for a in range(n2):
        for g in range(n1):
            ag = act[a, g]
            for h in range(n1):
                if act[ag, h] != act[a, T1[g, h]]:
                    if cnt < limit:
                        out[cnt, 0] = a
                        out[cnt, 1] = g
                        out[cnt, 2] = h
                    cnt += 1
    return cnt, out[: min(cnt, limit)]


def _action_compat_numpy(T1, act, limit):
    n2, n1 = act.shape
    step = max(1, _CHUNK // max(1, n1 * n1))

    def chunks():
        for a0 in range(0, n2, step):
            a = np.arange(a0, min(n2, a0 + step))
            left = act[act[a]]  # (a, g, h) -> (a^g)^h
            right = act[a[:, None, None], T1[None, :, :]]  # a^(gh)
            yield a0, left != right

    return _collect(chunks(), 3, limit)


def action_compatibility_failures(T1, act, limit=20, backend=None):
    """Triples ``(a, g, h)`` with ``(a^g)^h != a^(gh)`` (right action)."""
    T1, act = _as_table(T1), _as_table(act)
    if _pick(backend) == "numba":
        return _action_compat_loops(T1, act, limit)
    return _action_compat_numpy(T1, act, limit)


# -- interchange law ----------------------------------------------------------------


@njit(cache=True)
def _interchange_loops(T1, T2, phi, act, limit):
    n1 = T1.shape[0]
    n2 = T2.shape[0]
    out = np.empty((limit, 6), np.int64)
    cnt = 0
    for g in range(n1):
        for h in range(n1):
            gh = T1[g, h]
            for a in range(n2):
                g2 = T1[g, phi[a]]
                ah = act[a, h]
                for c in range(n2):
                    h2 = T1[h, phi[c]]
                    # a * c = (gh, a^h c), target gh phi(a^h c)
                    ac = T2[ah, c]
                    tgt = T1[gh, phi[ac]]
                    src = T1[g2, h2]
                    for b in range(n2):
                        ab_h = act[T2[a, b], h]
                        for d in range(n2):
                            # (a;b)(c;d) = (gh, (ab)^h (cd))
                            lhs = T2[ab_h, T2[c, d]]
                            # (a*c);(b*d) = (gh, (a^h c)(b^(h phi(c)) d))
                            rhs = T2[ac, T2[act[b, h2], d]]
                            if tgt != src or lhs != rhs:
                                if cnt < limit:
                                    out[cnt, 0] = g
                                    out[cnt, 1] = a
                                    out[cnt, 2] = b
                                    out[cnt, 3] = h
                                    out[cnt, 4] = c
                                    out[cnt, 5] = d
                                cnt += 1
    return cnt, out[: min(cnt, limit)]


def _interchange_numpy(T1, T2, phi, act, limit):
    n1, n2 = T1.shape[0], T2.shape[0]
    count, first = 0, []
    c = np.arange(n2)[:, None, None]
    b = np.arange(n2)[None, :, None]
    d = np.arange(n2)[None, None, :]
    for g in range(n1):
        for a in range(n2):
            g2 = T1[g, phi[a]]
            for h in range(n1):
                gh = T1[g, h]
                ah = act[a, h]
                h2 = T1[h, phi[c]]  # (c, 1, 1)
                ac = T2[ah, c]
                tgt = T1[gh, phi[ac]]
                src = T1[g2, h2]
                lhs = T2[act[T2[a, b], h], T2[c, d]]
                rhs = T2[ac, T2[act[b, h2], d]]
                bad = (tgt != src) | (lhs != rhs)
                # loop order is (g, h, a, c, b, d); collect per (g, h) below
                if bad.any():
                    hits = np.argwhere(bad)  # (c, b, d)
                    rows = np.column_stack(
                        [
                            np.full(len(hits), g),
                            np.full(len(hits), a),
                            hits[:, 1],
                            np.full(len(hits), h),
                            hits[:, 0],
                            hits[:, 2],
                        ]
                    )
                    count += len(rows)
                    first.append(rows)
    if not first:
        return 0, np.empty((0, 6), np.int64)
    rows = np.concatenate(first)
    # match the loop version's order: (g, h, a, c, b, d)
    order = np.lexsort((rows[:, 5], rows[:, 2], rows[:, 4], rows[:, 1], rows[:, 3], rows[:, 0]))
    return count, rows[order][:limit].astype(np.int64)


def interchange_failures(T1, T2, phi, act, limit=20, backend=None):
    """Failures of the interchange law among all composable arrow pairs.

    Tuples ``(g, a, b, h, c, d)`` index arrows ``(g, a)``, ``(g phi(a), b)``,
    ``(h, c)``, ``(h phi(c), d)``.
    """
    T1, T2, phi, act = _as_table(T1), _as_table(T2), _as_table(phi), _as_table(act)
    if _pick(backend) == "numba":
        return _interchange_loops(T1, T2, phi, act, limit)
    return _interchange_numpy(T1, T2, phi, act, limit)


# -- subsets ---------------------------------------------------------------------------


@njit(cache=True)
def _nonfaces_loops(cones, n):
    size = 1 << n
    is_face = np.zeros(size, np.bool_)
    for mask in range(size):
        for c in cones:
            if mask & ~c == 0:
                is_face[mask] = True
                break
    out = np.empty(size, np.int64)
    cnt = 0
    for mask in range(1, size):
        if is_face[mask]:
            continue
        minimal = True
        for i in range(n):
            bit = 1 << i
            if mask & bit and not is_face[mask ^ bit]:
                minimal = False
                break
        if minimal:
            out[cnt] = mask
            cnt += 1
    return out[:cnt]


def _nonfaces_numpy(cones, n):
    masks = np.arange(1 << n, dtype=np.int64)
    is_face = np.zeros(len(masks), bool)
    for c in cones:
        is_face |= (masks & ~c) == 0
    minimal = ~is_face
    for i in range(n):
        bit = 1 << i
        has = (masks & bit) != 0
        minimal &= ~has | is_face[masks ^ bit]
    minimal[0] = False
    return masks[minimal]


def minimal_nonfaces(cone_masks, n, backend=None):
    """Bitmasks of the minimal subsets of ``range(n)`` lying in no cone."""
    if n > 30:
        raise ValueError("subset enumeration supports at most 30 rays")
    cones = np.asarray(list(cone_masks), dtype=np.int64)
    if _pick(backend) == "numba":
        return _nonfaces_loops(cones, n)
    return _nonfaces_numpy(cones, n)
