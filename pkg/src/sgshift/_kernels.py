"""Hot numeric loops.

Every kernel is written once as plain Python/numpy.  When numba is importable
and ``SGS_DISABLE_NUMBA`` is unset (or "0"), the public names are bound to
``numba.njit`` compilations of the same source; the ``*_py`` names always refer
to the uncompiled versions so both paths stay testable and benchmarkable.
"""

import os

import numpy as np

_disabled = os.environ.get("SGS_DISABLE_NUMBA", "0").lower() not in ("", "0", "false", "no")

try:
    if _disabled:
        raise ImportError
    from numba import njit

    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]
        return lambda f: f


def perron_bounds_py(C, tol, target, maxiter):
    """Collatz-Wielandt bracket for the Perron root of an irreducible block.

    Power iteration on ``C + shift*I`` (the shift removes the periodicity of
    the block); at each step ``min(Cv/v) <= rho <= max(Cv/v)``.  Stops when the
    bracket is narrower than ``tol * max(1, hi)`` or, if ``target`` is not NaN,
    as soon as the bracket excludes ``target``.  Returns ``(lo, hi, iters)``.
    """
    n = C.shape[0]
    rmin = np.inf
    rmax = 0.0
    for i in range(n):
        s = 0.0
        for j in range(n):
            s += C[i, j]
        if s < rmin:
            rmin = s
        if s > rmax:
            rmax = s
    shift = np.sqrt(rmin * rmax)
    if shift <= 0.0:
        shift = rmax
    v = np.ones(n)
    w = np.empty(n)
    lo = rmin
    hi = rmax
    it = 0
    while it < maxiter:
        it += 1
        cur_lo = np.inf
        cur_hi = 0.0
        norm = 0.0
        for i in range(n):
            s = 0.0
            for j in range(n):
                s += C[i, j] * v[j]
            r = s / v[i]
            if r < cur_lo:
                cur_lo = r
            if r > cur_hi:
                cur_hi = r
            w[i] = s + shift * v[i]
            if w[i] > norm:
                norm = w[i]
        if cur_lo > lo:
            lo = cur_lo
        if cur_hi < hi:
            hi = cur_hi
        if hi - lo <= tol * max(1.0, hi):
            break
        if target == target and (lo > target or hi < target):
            break
        for i in range(n):
            v[i] = w[i] / norm
            if v[i] < 1e-300:
                v[i] = 1e-300
    return lo, hi, it


def count_words_py(n, adj, member, ge):
    """Count length-``n`` words of an S-graph shift by run-composition DFS.

    ``adj[u, v]`` is the edge indicator, ``member[u, k]`` says ``k ∈ S_u`` and
    ``ge[u, k]`` says some element of ``S_u`` is ``>= k`` (``0 <= k <= n``).
    Interior runs must be full blocks; the first and last runs only need to
    fit inside one; a single run ``u^n`` needs ``ge[u, n]``.
    """
    p = adj.shape[0]
    total = 0
    for u in range(p):
        if ge[u, n]:
            total += 1
    # explicit stack: vertex, run length, position after run, next candidate
    verts = np.empty(n + 1, dtype=np.int64)
    lens = np.empty(n + 1, dtype=np.int64)
    pos = np.empty(n + 1, dtype=np.int64)
    nxt = np.empty(n + 1, dtype=np.int64)
    for u in range(p):
        for k in range(1, n):
            if not ge[u, k]:
                continue
            depth = 0
            verts[0] = u
            lens[0] = k
            pos[0] = k
            nxt[0] = 0
            while depth >= 0:
                # enumerate (next vertex, run length) pairs as one counter
                cand = nxt[depth]
                rem = n - pos[depth]
                if cand >= p * rem:
                    depth -= 1
                    continue
                nxt[depth] = cand + 1
                w = cand // rem
                L = cand % rem + 1
                if not adj[verts[depth], w]:
                    continue
                if L == rem:
                    if ge[w, L]:
                        total += 1
                    continue
                if not member[w, L]:
                    continue
                depth += 1
                verts[depth] = w
                lens[depth] = L
                pos[depth] = pos[depth - 1] + L
                nxt[depth] = 0
    return total


def count_periodic_py(n, adj, member, infinite):
    """Count points of period ``n``: words ``w`` of length ``n`` with ``w^∞`` in X.

    Constant words count iff the vertex set is infinite.  Otherwise the cyclic
    run decomposition must use full blocks joined along edges; the first and
    last linear runs merge when they share a vertex.  ``member`` must cover
    lengths up to ``n``.
    """
    p = adj.shape[0]
    total = 0
    for u in range(p):
        if infinite[u]:
            total += 1
    verts = np.empty(n + 1, dtype=np.int64)
    pos = np.empty(n + 1, dtype=np.int64)
    nxt = np.empty(n + 1, dtype=np.int64)
    for u in range(p):
        for a in range(1, n):
            depth = 0
            verts[0] = u
            pos[0] = a
            nxt[0] = 0
            while depth >= 0:
                cand = nxt[depth]
                rem = n - pos[depth]
                if cand >= p * rem:
                    depth -= 1
                    continue
                nxt[depth] = cand + 1
                w = cand // rem
                L = cand % rem + 1
                if not adj[verts[depth], w]:
                    continue
                if L == rem:
                    # closing run
                    if w == u:
                        if depth >= 1 and member[u, a + L]:
                            total += 1
                    elif member[w, L] and member[u, a] and adj[w, u]:
                        total += 1
                    continue
                if not member[w, L]:
                    continue
                depth += 1
                verts[depth] = w
                pos[depth] = pos[depth - 1] + L
                nxt[depth] = 0
    return total


if HAVE_NUMBA:
    perron_bounds = njit(cache=True)(perron_bounds_py)
    count_words = njit(cache=True)(count_words_py)
    count_periodic = njit(cache=True)(count_periodic_py)
else:
    perron_bounds = perron_bounds_py
    count_words = count_words_py
    count_periodic = count_periodic_py


def warmup():
    """Compile every kernel once (no-op without numba)."""
    C = np.array([[0.0, 1.0], [1.0, 0.0]])
    perron_bounds(C, 1e-12, np.nan, 10)
    adj = np.array([[False, True], [True, False]])
    member = np.ones((2, 4), dtype=np.bool_)
    count_words(3, adj, member, member)
    count_periodic(3, adj, member, np.ones(2, dtype=np.bool_))
