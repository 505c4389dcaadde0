"""Brute-force ground truth for small shifts.

Words are tuples of vertex indices.  A word of length ``n`` belongs to the
language when its maximal runs ``u^k`` satisfy:

* interior runs are full blocks (``k in S_u``) and consecutive run letters are
  joined by edges;
* the first and last runs only need to fit in a block (some ``s >= k`` in
  ``S_u``);
* a word made of a single run ``u^n`` needs some ``s >= n`` in ``S_u``.

A word ``w`` is a period-``n`` point when ``w^inf`` lies in the shift: for
non-constant ``w`` every cyclic run (the wrap-around run merged) is a full
block; ``u^n`` counts exactly when ``S_u`` is infinite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from . import _kernels
from .entropy import entropy
from .errors import ApproximateSetError, OracleCapError
from .graph import SGraph, require_nonempty
from .series import TruncSeries, series_exp
from .zeta import least_period_counts, periodic_counts, zeta_coeffs

MAX_LENGTH = 22
MAX_ALPHABET = 6
MAX_WORDS = 5_000_000


def _prepare(g: SGraph, n: int, lower_bound: bool, check_caps: bool = True) -> SGraph:
    g = require_nonempty(g)
    if g.approximate and not lower_bound:
        raise ApproximateSetError("the oracle needs exact sets (pass lower_bound=True to count the truncated shift)")
    if n < 1:
        raise ValueError("n must be >= 1")
    if check_caps and (n > MAX_LENGTH or len(g) > MAX_ALPHABET):
        raise OracleCapError(f"oracle caps exceeded: n={n} (max {MAX_LENGTH}), alphabet {len(g)} (max {MAX_ALPHABET})")
    return g


def _tables(g: SGraph, n: int):
    p = len(g)
    member = np.zeros((p, n + 1), dtype=np.bool_)
    ge = np.zeros((p, n + 1), dtype=np.bool_)
    for u, S in enumerate(g.sets):
        for k in range(1, n + 1):
            member[u, k] = k in S
        top = math.inf if not S.is_finite else S.max
        for k in range(n + 1):
            ge[u, k] = k <= top
    adj = g.adjacency().astype(np.bool_)
    infinite = np.array([not S.is_finite for S in g.sets], dtype=np.bool_)
    return adj, member, ge, infinite


def render_word(g: SGraph, word) -> str:
    """Concatenate vertex names; use "." separators if any name is longer than one character."""
    names = [g.names[v] for v in word]
    sep = "" if all(len(nm) == 1 for nm in g.names) else "."
    return sep.join(names)


# -- words ---------------------------------------------------------------------


def enum_words(g: SGraph, n: int, lower_bound: bool = False) -> list:
    """All words of length ``n`` in the language, sorted."""
    g = _prepare(g, n, lower_bound)
    adj, member, ge, _ = _tables(g, n)
    p = len(g)
    out = []

    def extend(prefix, last, pos):
        rem = n - pos
        for w in range(p):
            if not adj[last, w]:
                continue
            for L in range(1, rem + 1):
                if L == rem:
                    if ge[w, L]:
                        out.append(prefix + (w,) * L)
                elif member[w, L]:
                    extend(prefix + (w,) * L, w, pos + L)
            if len(out) > MAX_WORDS:
                raise OracleCapError(f"more than {MAX_WORDS} words")

    for u in range(p):
        if ge[u, n]:
            out.append((u,) * n)
        for k in range(1, n):
            if ge[u, k]:
                extend((u,) * k, u, k)
    out.sort()
    return out


def count_words(g: SGraph, n: int, lower_bound: bool = False) -> int:
    """``|B_n|`` without materializing the words (no alphabet/length cap)."""
    g = _prepare(g, n, lower_bound, check_caps=False)
    adj, member, ge, _ = _tables(g, n)
    return int(_kernels.count_words(n, adj, member, ge))


def entropy_estimate(g: SGraph, n: int, lower_bound: bool = False) -> float:
    """``log|B_n| / n``; an upper bound for the entropy at every ``n``."""
    return math.log(count_words(g, n, lower_bound)) / n


def _runs(word):
    runs = []
    for v in word:
        if runs and runs[-1][0] == v:
            runs[-1][1] += 1
        else:
            runs.append([v, 1])
    return runs


def is_periodic_word(g: SGraph, word) -> bool:
    """Does ``word^inf`` belong to X(g)?"""
    if len(set(word)) == 1:
        return not g.sets[word[0]].is_finite
    # rotate so the word starts at a run boundary, then check runs cyclically
    n = len(word)
    start = next(i for i in range(n) if word[i] != word[i - 1])
    runs = _runs(word[start:] + word[:start])
    for i, (v, L) in enumerate(runs):
        w = runs[(i + 1) % len(runs)][0]
        if L not in g.sets[v] or (v, w) not in g.edges:
            return False
    return True


def enum_periodic(g: SGraph, n: int, lower_bound: bool = False):
    """``(p_n, orbit representatives)``; representatives are least rotations."""
    g = _prepare(g, n, lower_bound)
    words = [w for w in enum_words(g, n, lower_bound) if is_periodic_word(g, w)]
    reps = sorted({min(w[i:] + w[:i] for i in range(n)) for w in words})
    return len(words), reps


def count_periodic(g: SGraph, n: int, lower_bound: bool = False) -> int:
    """``p_n`` by cyclic run DFS (no alphabet/length cap)."""
    g = _prepare(g, n, lower_bound, check_caps=False)
    adj, member, _, infinite = _tables(g, n)
    return int(_kernels.count_periodic(n, adj, member, infinite))


def blocked_windows(g: SGraph, n: int, K: int) -> set:
    """Length-``n`` windows of strings built from whole blocks ``u^s`` (``s in S_u``)
    joined along edges, of total length at least ``n + 2K``.

    Only meaningful for finite sets; used to validate the run rule.
    """
    g = require_nonempty(g)
    if any(not S.is_finite for S in g.sets):
        raise ValueError("blocked_windows needs finite sets")
    L = n + 2 * K
    found = set()

    def grow(s, last):
        if len(s) >= L:
            for i in range(len(s) - n + 1):
                found.add(s[i:i + n])
            return
        for w in g.successors(last):
            for b in g.sets[w].head:
                grow(s + (w,) * b, w)

    for u in range(len(g)):
        for b in g.sets[u].head:
            grow((u,) * b, u)
    return found


# -- cross-checks ------------------------------------------------------------


@dataclass
class OracleReport:
    n_range: tuple
    word_counts: list
    p_hat: list
    q_hat: list
    entropy_estimates: list
    growth_estimate: float
    analytic_entropy: float
    analytic_p: list
    zeta_from_oracle: list
    zeta_analytic: list
    checks: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def to_json(self) -> dict:
        return {
            "n_range": list(self.n_range),
            "word_counts": self.word_counts,
            "p_hat": self.p_hat,
            "q_hat": self.q_hat,
            "entropy_estimates": self.entropy_estimates,
            "growth_estimate": self.growth_estimate,
            "analytic_entropy": self.analytic_entropy,
            "analytic_p": self.analytic_p,
            "p_deltas": [a - b for a, b in zip(self.p_hat, self.analytic_p)],
            "zeta_from_oracle": self.zeta_from_oracle,
            "zeta_analytic": self.zeta_analytic,
            "checks": self.checks,
            "passed": self.passed,
        }


def zeta_from_counts(p_hat, order: int) -> TruncSeries:
    """``exp(sum_n p_n t^n / n)`` truncated at ``order``."""
    f = TruncSeries([0] + [Fraction(p_hat[k - 1], k) for k in range(1, order + 1)], order)
    return series_exp(f)


def crosscheck(g: SGraph, N: int = 10, entropy_tol: float = 0.1) -> OracleReport:
    """Compare brute-force counts with the analytic entropy, p_n and zeta.

    ``log|B_N| / N`` converges slowly because of the constant in front of
    ``lambda^-N``; the tolerance check uses the growth rate
    ``log(|B_N| / |B_M|) / (N - M)`` with ``M = N // 2``, where that constant
    cancels.
    """
    g = _prepare(g, N, False, check_caps=False)
    ns = list(range(1, N + 1))
    counts = [count_words(g, n) for n in ns]
    p_hat = [count_periodic(g, n) for n in ns]
    est = [math.log(c) / n for c, n in zip(counts, ns)]
    M = max(1, N // 2)
    growth = math.log(counts[N - 1] / counts[M - 1]) / (N - M) if N > M else est[-1]
    h = entropy(g).entropy
    p_an = periodic_counts(g, N)
    z_or = zeta_from_counts(p_hat, N)
    z_an = zeta_coeffs(g, N)
    sub = all(counts[a + b - 1] <= counts[a - 1] * counts[b - 1] for a in ns for b in ns if a + b <= N)
    checks = {
        "entropy_upper_bound": est[-1] >= h - 1e-9,
        "entropy_within_tol": abs(growth - h) <= entropy_tol,
        "periodic_counts": p_hat == p_an,
        "zeta": z_or == z_an,
        "submultiplicative": sub,
    }
    return OracleReport(
        (1, N), counts, p_hat, least_period_counts(p_hat), est, growth, h, p_an,
        [int(c) if isinstance(c, int) else str(c) for c in z_or.coeffs], z_an.coeffs, checks,
    )
