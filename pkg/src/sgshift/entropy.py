"""Entropy of S-graph shifts.

Three independent routes to the same number ``lambda`` (entropy is
``-log(lambda)``):

* ``spectral``: bisection on ``rho(B(x)) = 1`` where ``B`` is the generating
  matrix and ``rho`` its spectral radius;
* ``det``: least positive zero of ``det(I - B(x))``;
* ``cycles``: least positive root of the alternating sum over families of
  vertex-disjoint cycles of the products of the generating functions.

Cycles never cross strongly connected components, so every route works one
cyclic component at a time and takes the minimum; this also keeps the Perron
root simple inside each block.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import _kernels
from .errors import ConvergenceError, DivergentEntryError, EmptyShiftError
from .graph import (
    DEFAULT_CYCLE_CAP,
    SGraph,
    cyclic_components,
    disjoint_cycle_families,
    is_directed_cycle,
    require_nonempty,
    strongly_connected_components,
)
from .nset import NSet, ns_gf_eval, ns_truncate

METHODS = ("spectral", "det", "cycles")
X_HI_INFINITE = 1.0 - 1e-12
DEFAULT_TOL = 1e-12
RHO_TOL = 1e-14
MAX_POWER_ITERS = 200_000
DET_GRID = 600


@dataclass
class EntropyReport:
    lam: float
    entropy: float
    method: str
    bracket: tuple
    residual: float
    iterations: int
    lower_bound: bool = False
    fallback: bool = False
    notes: list = field(default_factory=list)

    @property
    def lambda_inv(self) -> float:
        return 1.0 / self.lam

    @property
    def entropy_log2(self) -> float:
        return self.entropy / math.log(2)

    def to_json(self) -> dict:
        return {
            "lambda": self.lam,
            "lambda_inv": self.lambda_inv,
            "entropy_nat": self.entropy,
            "entropy_log2": self.entropy_log2,
            "method": self.method,
            "bracket": list(self.bracket),
            "residual": self.residual,
            "iterations": self.iterations,
            "lower_bound": self.lower_bound,
            "fallback": self.fallback,
            "notes": list(self.notes),
        }


# -- generating matrix and spectral radius -----------------------------------


def _h_values(sets, x: float) -> np.ndarray:
    return np.array([ns_gf_eval(S, x, exact=False) for S in sets])


def gen_matrix_eval(g: SGraph, x: float) -> np.ndarray:
    """``B(x)[i, j] = H_i(x)`` on edges, zero elsewhere."""
    if g.is_empty:
        raise EmptyShiftError("empty shift")
    if x < 0:
        raise ValueError("x must be nonnegative")
    H = _h_values(g.sets, x)
    if np.isinf(H).any():
        bad = [g.names[i] for i in np.flatnonzero(np.isinf(H))]
        raise DivergentEntryError(f"divergent entry: H diverges at x={x} for vertices {bad}")
    return H[:, None] * g.adjacency()


def _block_bounds(C: np.ndarray, tol: float, target: float = math.nan):
    lo, hi, it = _kernels.perron_bounds(np.ascontiguousarray(C, dtype=np.float64), tol, target, MAX_POWER_ITERS)
    if hi - lo > tol * max(1.0, hi) and not (target == target and (lo > target or hi < target)):
        # slow convergence: fall back to a dense eigensolver on this block
        ev = np.linalg.eigvals(C)
        rho = float(np.max(np.abs(ev)))
        if not np.isfinite(rho):
            raise ConvergenceError(f"spectral radius did not converge after {it} iterations (bracket {lo}, {hi})")
        return rho, rho, it
    return lo, hi, it


def spectral_radius(M, tol: float = RHO_TOL) -> float:
    """Spectral radius of a nonnegative square matrix.

    Reducible input is split into irreducible diagonal blocks; each block's
    Perron root is bracketed by power iteration (see ``_kernels``).
    """
    M = np.asarray(M, dtype=np.float64)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError("matrix must be square")
    if (M < 0).any():
        raise ValueError("matrix must be entrywise nonnegative")
    n = M.shape[0]
    edges = [(i, j) for i in range(n) for j in range(n) if M[i, j] > 0 and i != j]
    best = 0.0
    for comp in strongly_connected_components(n, edges):
        if len(comp) == 1:
            best = max(best, M[comp[0], comp[0]])
            continue
        lo, hi, _ = _block_bounds(M[np.ix_(comp, comp)], tol)
        best = max(best, 0.5 * (lo + hi))
    return float(best)


# -- root finding ---------------------------------------------------------


def _component_is_trivial(g: SGraph) -> bool:
    """Directed cycle whose sets are all exact singletons."""
    return is_directed_cycle(g) and all(S.is_finite and len(S.head) == 1 and not S.approximate for S in g.sets)


def _domain_hi(sets) -> Optional[float]:
    """Upper end of the search interval; None means "expand from 1"."""
    if any(not S.is_finite for S in sets):
        return X_HI_INFINITE
    return None


def _bisect_increasing(sign_at, lo: float, hi: float, tol: float):
    """Bisection on a monotone predicate: ``sign_at(x) >= 0`` means x >= root."""
    it = 0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if sign_at(mid) >= 0:
            hi = mid
        else:
            lo = mid
        it += 1
        if it > 400:
            raise ConvergenceError("bisection did not terminate")
    return lo, hi, it


def _expand_hi(sign_at, x_hi: Optional[float]) -> float:
    if x_hi is not None:
        return x_hi
    x = 1.0
    for _ in range(64):
        if sign_at(x) >= 0:
            return x
        x *= 2.0
    raise ConvergenceError("could not bracket the root")


def _spectral_component(c: SGraph, tol: float):
    A = c.adjacency().astype(np.float64)

    def sign_at(x):
        B = _h_values(c.sets, x)[:, None] * A
        lo, hi, _ = _block_bounds(B, RHO_TOL, 1.0)
        if lo > 1.0:
            return 1
        if hi < 1.0:
            return -1
        return 1 if 0.5 * (lo + hi) >= 1.0 else -1

    x_hi = _expand_hi(sign_at, _domain_hi(c.sets))
    if sign_at(x_hi) < 0:
        raise ConvergenceError("rho(B(x)) stays below 1 on the search interval")
    return _bisect_increasing(sign_at, 0.0, x_hi, tol)


def _first_zero(f, x_hi: float, tol: float):
    """Least zero of ``f`` on (0, x_hi] given ``f > 0`` near 0.

    Scans a geometric grid for the first point where ``f <= 0``, then
    bisects the bracketing cell.  Returns None when no sign change is seen.
    """
    grid = np.geomspace(1e-6, x_hi, DET_GRID)
    prev = 0.0
    for x in grid:
        if f(x) <= 0:
            lo, hi, it = _bisect_increasing(lambda t: 1 if f(t) <= 0 else -1, prev, float(x), tol)
            return lo, hi, it
        prev = float(x)
    return None


def _det_component(c: SGraph, tol: float):
    A = c.adjacency().astype(np.float64)
    I = np.eye(len(c))

    def f(x):
        return np.linalg.det(I - _h_values(c.sets, x)[:, None] * A)

    x_hi = _domain_hi(c.sets) or 1.0
    while f(x_hi) > 0 and x_hi < 2**20 and _domain_hi(c.sets) is None:
        x_hi *= 2.0
    return _first_zero(f, x_hi, tol)


def cycle_series_value(sets, families, x: float) -> float:
    """``sum over families C of (-1)^(|C|+1) * prod of H_v(x) over covered v``."""
    H = _h_values(sets, x)
    total = 0.0
    for fam in families:
        prod = 1.0
        for cyc in fam:
            for v in cyc:
                prod *= H[v]
        total += prod if len(fam) % 2 == 1 else -prod
    return total


def _cycles_component(c: SGraph, tol: float, cap: int):
    families = disjoint_cycle_families(c, cap)

    def f(x):
        return 1.0 - cycle_series_value(c.sets, families, x)

    x_hi = _domain_hi(c.sets) or 1.0
    while f(x_hi) > 0 and x_hi < 2**20 and _domain_hi(c.sets) is None:
        x_hi *= 2.0
    return _first_zero(f, x_hi, tol), families


def entropy(g: SGraph, method: str = "spectral", tol: float = DEFAULT_TOL, cycle_cap: int = DEFAULT_CYCLE_CAP) -> EntropyReport:
    """Topological entropy ``-log(lambda)`` of ``X(g)``."""
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")
    g = require_nonempty(g)
    approx = g.approximate
    comps = [g.subgraph(c) for c in cyclic_components(g)]
    if not comps:
        raise EmptyShiftError("empty shift: no cycles")
    notes = []
    if approx:
        notes.append("approximate sets: value is a lower bound on the true entropy")

    if all(_component_is_trivial(c) for c in comps):
        return EntropyReport(1.0, 0.0, "exact_zero", (1.0, 1.0), 0.0, 0, approx, False, notes)

    lam, bracket, iters, fallback = math.inf, (math.inf, math.inf), 0, False
    for c in comps:
        if _component_is_trivial(c):
            lo = hi = 1.0
            it = 0
        elif method == "spectral":
            lo, hi, it = _spectral_component(c, tol)
        else:
            if method == "det":
                found = _det_component(c, tol)
            else:
                found, _ = _cycles_component(c, tol, cycle_cap)
            if found is None:
                # the determinant can touch zero without changing sign; the
                # spectral route is authoritative there
                lo, hi, it = _spectral_component(c, tol)
                fallback = True
                notes.append(f"{method}: no sign change found on component {list(c.names)}; used spectral root")
            else:
                lo, hi, it = found
        iters += it
        mid = 0.5 * (lo + hi)
        if mid < lam:
            lam, bracket = mid, (lo, hi)

    residual = _residual(comps, lam, method, cycle_cap)
    return EntropyReport(lam, -math.log(lam), method, bracket, residual, iters, approx, fallback, notes)


def _residual(comps, lam: float, method: str, cap: int) -> float:
    vals = []
    for c in comps:
        H = _h_values(c.sets, lam)
        if not np.isfinite(H).all():
            continue
        if method == "spectral":
            vals.append(spectral_radius(H[:, None] * c.adjacency()))
        elif method == "det":
            vals.append(1.0 - np.linalg.det(np.eye(len(c)) - H[:, None] * c.adjacency()))
        else:
            vals.append(cycle_series_value(c.sets, disjoint_cycle_families(c, cap), lam))
    if method == "spectral":
        return abs(max(vals) - 1.0) if vals else math.nan
    return min(abs(v - 1.0) for v in vals) if vals else math.nan


def s_gap_lambda(S: Optional[NSet], contains_zero: bool = False, tol: float = DEFAULT_TOL) -> EntropyReport:
    """Root of ``sum_{s in S} x^(s+1) = 1`` for ``S ⊆ N0``.

    ``S`` is the positive part (None when ``S = {0}``).
    """
    if S is None and not contains_zero:
        raise ValueError("S must be nonempty")
    z = 1.0 if contains_zero else 0.0

    def value(x):
        h = 0.0 if S is None else ns_gf_eval(S, x, exact=False)
        return x * (z + h)

    x_hi = _expand_hi(lambda x: 1 if value(x) >= 1.0 else -1, _domain_hi([S]) if S is not None else None)
    lo, hi, it = _bisect_increasing(lambda x: 1 if value(x) >= 1.0 else -1, 0.0, x_hi, tol)
    lam = 0.5 * (lo + hi)
    approx = S is not None and S.approximate
    return EntropyReport(lam, -math.log(lam), "closed_form_s_gap", (lo, hi), abs(value(lam) - 1.0), it, approx)


def sft_truncation(g: SGraph, n: int) -> SGraph:
    """Same graph with every set cut down to ``S ∩ [1, n]`` (an SFT)."""
    return g.with_sets([ns_truncate(S, n) for S in g.sets])
