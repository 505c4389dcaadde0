"""Zeta functions, periodic-point counts and the determinant fingerprint.

For an S-graph shift ``X`` with essential graph ``G``

    zeta_X(t) = 1 / ((1 - t)^p1 * det(I - B(t)))

where ``p1`` is the number of vertices with an infinite set and ``B(t)`` is
the generating matrix with series entries.  Periodic counts are computed
separately through ``sum_k tr(B^k)/k`` so that the two routes can be checked
against each other.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .errors import ApproximateSetError, InvariantError
from .graph import SGraph, essentialize, require_nonempty
from .nset import NSet, ns_gf_coeffs
from .series import TruncSeries, series_det, series_inverse

DEFAULT_ORDER = 32


def default_order() -> int:
    env = os.environ.get("SGS_SERIES_ORDER")
    return int(env) if env else DEFAULT_ORDER


def _exact_essential(g: SGraph) -> SGraph:
    g = require_nonempty(g)
    if g.approximate:
        raise ApproximateSetError("zeta functions need exact sets")
    return g


def p1_count(g: SGraph) -> Optional[int]:
    """Fixed points: vertices of the essential graph whose set is infinite."""
    g = essentialize(g)
    if g.approximate:
        return None
    return sum(1 for S in g.sets if not S.is_finite)


def _h_series(S: NSet, order: int) -> TruncSeries:
    return TruncSeries(ns_gf_coeffs(S, order), order)


def gen_matrix_series(g: SGraph, order: int) -> list:
    """``B(t)`` as a matrix of truncated series."""
    zero = TruncSeries.constant(0, order)
    H = [_h_series(S, order) for S in g.sets]
    n = len(g)
    B = [[zero] * n for _ in range(n)]
    for u, v in g.edges:
        B[u][v] = H[u]
    return B


def det_series(g: SGraph, order: int) -> TruncSeries:
    """``det(I - B(t))`` to the given order (integer coefficients)."""
    B = gen_matrix_series(g, order)
    n = len(g)
    M = [[(1 if i == j else 0) - B[i][j] for j in range(n)] for i in range(n)]
    d = series_det(M)
    if not d.is_integral() or d[0] != 1:
        raise InvariantError(f"det(I - B) is not an integer series with constant term 1: {d}")
    return d


def _one_minus_t_pow(p: int, order: int) -> TruncSeries:
    return TruncSeries([1, -1], order) ** p


def zeta_coeffs(g: SGraph, order: Optional[int] = None) -> TruncSeries:
    """Coefficients of ``zeta_X(t)`` up to ``t^order``."""
    order = default_order() if order is None else order
    g = _exact_essential(g)
    p1 = sum(1 for S in g.sets if not S.is_finite)
    z = series_inverse(_one_minus_t_pow(p1, order) * det_series(g, order))
    if not z.is_integral():
        raise InvariantError("zeta coefficients are not integers")
    return z


def trace_log_series(g: SGraph, order: int) -> TruncSeries:
    """``sum_{k>=1} tr(B(t)^k) / k`` with rational coefficients.

    ``B(t)`` is handled as a polynomial with integer matrix coefficients
    ``B_s`` (one per exponent ``s``); since ``B(0) = 0``, ``B^k = O(t^k)`` and
    only ``k <= order`` contributes.
    """
    g = _exact_essential(g)
    n = len(g)
    A = np.zeros((n, n), dtype=object)
    for u, v in g.edges:
        A[u, v] = 1
    member = [ns_gf_coeffs(S, order) for S in g.sets]
    Bs = []
    for s in range(order + 1):
        D = np.array([[member[i][s] if i == j else 0 for j in range(n)] for i in range(n)], dtype=object)
        Bs.append(D.dot(A))
    total = [Fraction(0)] * (order + 1)
    # P[m] is the coefficient of t^m in B(t)^k
    P = [M.copy() for M in Bs]
    for k in range(1, order + 1):
        for m in range(k, order + 1):
            tr = sum(P[m][i, i] for i in range(n))
            if tr:
                total[m] += Fraction(int(tr), k)
        if k == order:
            break
        nxt = [np.zeros((n, n), dtype=object) for _ in range(order + 1)]
        for m in range(k, order + 1):
            if not P[m].any():
                continue
            for s in range(1, order + 1 - m):
                if Bs[s].any():
                    nxt[m + s] = nxt[m + s] + P[m].dot(Bs[s])
        P = nxt
    return TruncSeries(total, order)


def periodic_counts(g: SGraph, order: Optional[int] = None) -> list:
    """``[p_1, ..., p_order]``: points of period ``n`` (not necessarily least)."""
    order = default_order() if order is None else order
    p1 = p1_count(g)
    L = trace_log_series(g, order)
    out = []
    for n in range(1, order + 1):
        val = p1 + n * Fraction(L[n])
        if val.denominator != 1:
            raise InvariantError(f"p_{n} = {val} is not an integer")
        out.append(int(val))
    return out


def _mobius(n: int) -> int:
    result, m, d = 1, n, 2
    while d * d <= m:
        if m % d == 0:
            m //= d
            if m % d == 0:
                return 0
            result = -result
        d += 1
    if m > 1:
        result = -result
    return result


def least_period_counts(p: Sequence[int]) -> list:
    """Moebius inversion of ``p_n = sum_{d | n} q_d``."""
    out = []
    for n in range(1, len(p) + 1):
        out.append(sum(_mobius(n // d) * p[d - 1] for d in range(1, n + 1) if n % d == 0))
    return out


def ordered_limited_zeta(sets: Sequence[NSet], order: Optional[int] = None) -> TruncSeries:
    """Closed form for the directed cycle through ``sets`` (in order)."""
    order = default_order() if order is None else order
    if any(S.approximate for S in sets):
        raise ApproximateSetError("zeta functions need exact sets")
    prod = TruncSeries.constant(1, order)
    for S in sets:
        prod = prod * _h_series(S, order)
    p1 = sum(1 for S in sets if not S.is_finite)
    return series_inverse(_one_minus_t_pow(p1, order) * (1 - prod))


def s_gap_zeta(S: Optional[NSet], contains_zero: bool = False, order: Optional[int] = None) -> TruncSeries:
    """Zeta function of the S-gap shift, ``S ⊆ N0`` given as (S ∩ N, 0 ∈ S)."""
    order = default_order() if order is None else order
    if S is not None and S.approximate:
        raise ApproximateSetError("zeta functions need exact sets")
    if S is None and not contains_zero:
        raise ValueError("S must be nonempty")
    H = TruncSeries.constant(0, order) if S is None else _h_series(S, order)
    t = TruncSeries.monomial(1, order)
    infinite = S is not None and not S.is_finite
    p1 = int(contains_zero) + int(infinite)
    if contains_zero:
        inner = 1 - t * series_inverse(1 - t) * H
    else:
        inner = 1 - t * H
    return series_inverse(_one_minus_t_pow(p1, order) * inner)


def s_gap_p1(S: Optional[NSet], contains_zero: bool) -> int:
    """Fixed-point count of the S-gap shift by the four-case rule."""
    return int(contains_zero) + int(S is not None and not S.is_finite)


@dataclass(frozen=True)
class Fingerprint:
    p1: int
    det_coeffs: tuple

    def to_json(self) -> dict:
        return {"p1": self.p1, "det": list(self.det_coeffs)}


def fingerprint(g: SGraph, order: Optional[int] = None) -> Fingerprint:
    """Conjugacy invariant ``(p1, det(I - B(t)) mod t^(order+1))``."""
    order = default_order() if order is None else order
    g = _exact_essential(g)
    p1 = sum(1 for S in g.sets if not S.is_finite)
    return Fingerprint(p1, tuple(det_series(g, order).as_ints()))


def fingerprint_compare(f1: Fingerprint, f2: Fingerprint) -> str:
    """"distinct" proves non-conjugacy; the other answer proves nothing."""
    n = min(len(f1.det_coeffs), len(f2.det_coeffs))
    if f1.p1 != f2.p1 or f1.det_coeffs[:n] != f2.det_coeffs[:n]:
        return "distinct"
    return "indistinguishable_at_order"

