"""Beta-expansions of 1 and shifts of prescribed entropy.

A lambda-expansion of 1 with digits in ``{0, ..., n}`` (``n = ceil(lambda) - 1``)
gives the level sets ``T_k = {m : x_m >= k}``.  Putting ``T_k`` on vertex ``k``
and on vertex ``k + n`` of the complete bipartite graph ``K_{n,n}`` yields a
shift of entropy ``log lambda``, because ``sum_k H_{T_k}(1/lambda) = 1``.

Digits are computed with mpmath at a working precision that grows with the
number of digits; a digit whose decision margin is below ``UNSTABLE_MARGIN``
is reported instead of being silently trusted.
"""

from __future__ import annotations

import ast
import math
import operator
from dataclasses import dataclass, field
from typing import Optional

import mpmath

from .errors import ConvergenceError, InvariantError, SGSError
from .graph import SGraph
from .nset import NSet, Tail, ns_disjoint_union_check, ns_stats
from .transforms import vertex_clone

UNSTABLE_MARGIN = 1e-12
MAX_PERIOD = 32
GUARD_DIGITS = 40
SNAP = mpmath.mpf(10) ** -30
DEFAULT_BUDGET = 64
MAX_BUDGET = 20_000
SPICED_TRIES = 24

# -- parsing lambda ---------------------------------------------------------

_BINOPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
    ast.Pow: operator.pow,
}
_FUNCS = {"sqrt": mpmath.sqrt, "exp": mpmath.exp, "log": mpmath.log}


def _constants():
    return {"phi": (1 + mpmath.sqrt(5)) / 2, "pi": mpmath.pi, "e": mpmath.e}


def _eval_node(node):
    if isinstance(node, ast.Expression):
        return _eval_node(node.body)
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
        # go through the source text so "3.7320508" stays an exact decimal
        return mpmath.mpf(repr(node.value)) if isinstance(node.value, float) else mpmath.mpf(node.value)
    if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
        return _BINOPS[type(node.op)](_eval_node(node.left), _eval_node(node.right))
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        v = _eval_node(node.operand)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.Name) and node.id in _constants():
        return _constants()[node.id]
    if (
        isinstance(node, ast.Call)
        and isinstance(node.func, ast.Name)
        and node.func.id in _FUNCS
        and len(node.args) == 1
        and not node.keywords
    ):
        return _FUNCS[node.func.id](_eval_node(node.args[0]))
    raise ValueError(f"unsupported expression element: {ast.dump(node)}")


def parse_lambda(value, dps: int = 60):
    """``(lambda as mpf, exact)`` from a number or an expression string.

    Strings may use decimals, ``+ - * / **``, ``sqrt``, ``exp``, ``log`` and
    the names ``phi``, ``pi``, ``e``; they are evaluated at ``dps`` digits and
    count as exact.  Python floats are taken at face value and count as
    inexact (about 16 significant digits).
    """
    with mpmath.workdps(dps):
        if isinstance(value, str):
            text = value.strip().replace("^", "**").replace("√", "sqrt")
            try:
                tree = ast.parse(text, mode="eval")
            except SyntaxError as exc:
                raise ValueError(f"cannot parse lambda expression {value!r}") from exc
            lam, exact = _eval_node(tree), True
        elif isinstance(value, int):
            lam, exact = mpmath.mpf(value), True
        elif isinstance(value, mpmath.mpf):
            lam, exact = +value, True
        else:
            lam, exact = mpmath.mpf(float(value)), False
    if not lam > 1:
        raise ValueError(f"lambda must exceed 1, got {mpmath.nstr(lam, 12)}")
    return lam, exact


def digit_cap(lam) -> int:
    """``ceil(lambda) - 1``, the largest admissible digit."""
    return int(mpmath.ceil(lam)) - 1


def _working_dps(lam, count: int) -> int:
    return GUARD_DIGITS + int(count * float(mpmath.log10(lam))) + 1


def _reliable_count(lam, exact: bool, count: int) -> int:
    """Digits that a float-precision lambda still determines."""
    if exact:
        return count
    return max(1, min(count, int(15 / float(mpmath.log10(lam))) - 1))


def _parse_checked(value, count: int):
    """Parse ``value`` at a precision adequate for ``count`` digits."""
    lam, _ = parse_lambda(value)
    if lam <= 1 + mpmath.mpf("1e-9"):
        raise ValueError("lambda must exceed 1 + 1e-9")
    return parse_lambda(value, _working_dps(lam, count))


# -- the expansion type -----------------------------------------------------


@dataclass
class BetaExpansion:
    """A lambda-expansion of 1.

    ``digits`` holds the computed prefix.  When ``period`` is set, the
    sequence is ``digits[:preperiod]`` followed by ``digits[preperiod:
    preperiod + period]`` repeated forever, and that closed form was checked
    to sum to 1.
    """

    lam: float
    n: int
    digits: tuple
    flavor: str
    preperiod: Optional[int] = None
    period: Optional[int] = None
    k: Optional[int] = None
    unstable: tuple = ()
    residual: float = 0.0
    notes: list = field(default_factory=list)

    @property
    def is_exact(self) -> bool:
        return self.period is not None

    def digit(self, i: int) -> int:
        """The ``i``-th digit (1-based), using the periodic tail when known."""
        if i < 1:
            raise IndexError("digits are indexed from 1")
        if i <= len(self.digits):
            return self.digits[i - 1]
        if not self.is_exact:
            raise IndexError(f"digit {i} lies beyond the computed prefix")
        j = (i - 1 - self.preperiod) % self.period
        return self.digits[self.preperiod + j]

    def level_set(self, k: int) -> NSet:
        """``T_k = {m : x_m >= k}``; approximate (head only) without a period."""
        if self.is_exact:
            K, P = self.preperiod, self.period
            head = [i + 1 for i in range(K) if self.digits[i] >= k]
            res = frozenset(j for j in range(P) if self.digits[K + j] >= k)
            if not res:
                if not head:
                    raise InvariantError(f"level set T_{k} is empty")
                return NSet.finite(head)
            return NSet(tuple(head), Tail(K + 1, P, res))
        head = [i + 1 for i, d in enumerate(self.digits) if d >= k]
        if not head:
            raise InvariantError(f"level set T_{k} is empty in the computed prefix")
        return NSet.finite(head, approximate=True)

    def level_sets(self) -> list:
        return [self.level_set(k) for k in range(1, self.n + 1)]

    def has_consecutive_pair(self) -> bool:
        d = self.digits
        return any(d[i] and d[i + 1] for i in range(len(d) - 1))

    def to_json(self) -> dict:
        return {
            "lambda": self.lam,
            "flavor": self.flavor,
            "digits": list(self.digits),
            "preperiod": self.preperiod,
            "period": self.period,
            "k": self.k,
            "exact": self.is_exact,
            "unstable_positions": list(self.unstable),
            "residual": self.residual,
            "notes": list(self.notes),
        }


def _decide(y, n: int):
    """Largest digit ``d <= n`` with ``d <= y``; also the decision margin."""
    near = mpmath.nint(y)
    if abs(y - near) < SNAP:
        y = near
    d = int(mpmath.floor(y))
    if y == d:
        margin = mpmath.inf
    elif d >= n:
        margin = y - n
    else:
        margin = min(y - d, d + 1 - y)
    return min(d, n), margin, y


def _value(digits, lam, preperiod: int, period: int):
    """Closed-form value of an eventually periodic digit sequence."""
    inv = 1 / lam
    head = sum(d * inv ** (i + 1) for i, d in enumerate(digits[:preperiod]))
    block = sum(d * inv ** (j + 1) for j, d in enumerate(digits[preperiod:preperiod + period]))
    return head + inv ** preperiod * block / (1 - inv ** period)


def _find_period(digits, lam, usable: int, tol):
    """Smallest ``(preperiod, period)`` explaining ``digits[:usable]`` whose
    closed form sums to 1 within ``tol``."""
    best = None
    for P in range(1, MAX_PERIOD + 1):
        for K in range(0, usable - 2 * P):
            if usable - K < max(2 * P, 8):
                break
            if all(digits[i] == digits[i - P] for i in range(K + P, usable)):
                if best is None or K + P < sum(best):
                    best = (K, P)
                break
    if best is None:
        return None
    K, P = best
    if abs(_value(digits, lam, K, P) - 1) > tol:
        return None
    return best


def _finish(lam, exact, digits, flavor, unstable, k=None, notes=None) -> BetaExpansion:
    count = len(digits)
    usable = _reliable_count(lam, exact, count)
    tol = mpmath.mpf(10) ** -25 if exact else mpmath.mpf(10) ** -12
    found = _find_period(digits, lam, usable, tol)
    total = sum(d * lam ** -(i + 1) for i, d in enumerate(digits))
    exp = BetaExpansion(
        float(lam), digit_cap(lam), tuple(digits), flavor, k=k, unstable=tuple(unstable),
        residual=float(1 - total), notes=list(notes or []),
    )
    if found is not None:
        exp.preperiod, exp.period = found
    elif not exact:
        exp.notes.append(f"lambda given as a float; only {usable} digits are reliable")
    return exp


# -- greedy expansion --------------------------------------------------------


def greedy_beta_expansion(lam, count: int) -> BetaExpansion:
    """The first ``count`` greedy digits of the lambda-expansion of 1.

    Each digit is the largest value in ``{0, ..., n}`` that keeps the partial
    sum at most 1.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    lam, exact = _parse_checked(lam, count)
    n = digit_cap(lam)
    with mpmath.workdps(_working_dps(lam, count)):
        r = mpmath.mpf(1)
        digits, unstable = [], []
        for i in range(1, count + 1):
            d, margin, y = _decide(r * lam, n)
            if margin < UNSTABLE_MARGIN:
                unstable.append(i)
            r = y - d
            digits.append(d)
        return _finish(lam, exact, digits, "greedy", unstable)


# -- spiced expansion --------------------------------------------------------


def _fixed(p: int, k: int) -> bool:
    return p > k and (p - k) % 2 == 1


def _free_capacity(lam, n: int, k: int, p: int):
    """Largest value the free positions after ``p`` can still contribute."""
    inv = 1 / lam
    cap = sum(n * inv ** q for q in range(p + 1, k + 1))
    j0 = max(1, (p - k) // 2 + 1)
    cap += n * inv ** (k + 2 * j0) / (1 - inv ** 2)
    return cap


def _spiced_digits(lam, n: int, k: int, count: int):
    """Digits with ``n`` forced at positions ``k+1, k+3, ...`` and greedy
    elsewhere, or ``None`` once the free digits can no longer reach 1."""
    inv = 1 / lam
    fixed_total = n * inv ** (k + 1) / (1 - inv ** 2)
    r = 1 - fixed_total
    digits, unstable = [], []
    for p in range(1, count + 1):
        if _fixed(p, k):
            digits.append(n)
            continue
        d, margin, y = _decide(r * lam ** p, n)
        if margin < UNSTABLE_MARGIN:
            unstable.append(p)
        digits.append(d)
        r = (y - d) * inv ** p
        if r > _free_capacity(lam, n, k, p) * (1 + SNAP) + SNAP * inv ** p:
            return None, unstable
    return digits, unstable


def _repair(digits):
    """Introduce a pair of consecutive nonzero digits (``x_1`` is nonzero)."""
    y = [digits[0] - 1]
    for i in range(1, len(digits)):
        y.append(digits[i] if digits[i] > 0 else digits[i - 1])
    return y


def _spiced_structure_ok(digits, n: int, k: int) -> bool:
    tail_ok = all(digits[p - 1] == n for p in range(k + 1, len(digits) + 1) if _fixed(p, k))
    pair = any(digits[i] and digits[i + 1] for i in range(len(digits) - 1))
    return tail_ok and pair


def spiced_min_k(lam) -> int:
    """Smallest ``k`` with ``n / (lambda^(k-1) (lambda^2 - 1)) < 1``."""
    lam, _ = parse_lambda(lam)
    n = digit_cap(lam)
    k = 1
    while n / (lam ** (k - 1) * (lam ** 2 - 1)) >= 1:
        k += 1
    return k


def spiced_expansion(lam, count: int) -> BetaExpansion:
    """An expansion of 1 with a pair of consecutive nonzero digits in which
    every other digit is eventually ``n``.

    For ``k = k_min, k_min + 1, ...`` the digit ``n`` is forced at positions
    ``k+1, k+3, ...`` and the remaining positions are filled greedily.  A
    choice of ``k`` is rejected as soon as the free positions provably cannot
    make up the remainder (the greedy digits saturate at ``n``).  Raises
    :class:`ConvergenceError` if no ``k`` in range works.
    """
    lam, exact = _parse_checked(lam, count)
    n = digit_cap(lam)
    k0 = spiced_min_k(lam)
    if count < k0 + 4:
        raise ValueError(f"count must be at least {k0 + 4} to exhibit the structure")
    rejected = []
    with mpmath.workdps(_working_dps(lam, count)):
        for k in range(k0, k0 + SPICED_TRIES):
            if count < k + 4:
                break
            digits, unstable = _spiced_digits(lam, n, k, count)
            if digits is None:
                rejected.append(k)
                continue
            notes = []
            if not _spiced_structure_ok(digits, n, k):
                digits = _repair(digits)
                notes.append("applied the consecutive-pair repair")
                total = sum(d * lam ** -(i + 1) for i, d in enumerate(digits))
                bound = lam ** -count * n / (lam - 1)
                if not (0 <= 1 - total <= bound) or not _spiced_structure_ok(digits, n, k):
                    rejected.append(k)
                    continue
            if rejected:
                notes.append(f"k = {rejected} rejected: free digits saturate below 1")
            return _finish(lam, exact, digits, "spiced", unstable, k=k, notes=notes)
    raise ConvergenceError(
        f"no spiced expansion found for k in [{k0}, {k0 + SPICED_TRIES - 1}]: "
        "the greedy free digits saturate at the top digit and the sum stays below 1"
    )


# -- shifts of given entropy --------------------------------------------------


def digit_budget(lam) -> int:
    """Digits needed so that the dropped tail is below 1e-12."""
    lam, _ = parse_lambda(lam)
    n = digit_cap(lam)
    need = math.log(n / (float(lam) - 1) / 1e-12) / math.log(float(lam))
    return int(min(MAX_BUDGET, max(DEFAULT_BUDGET, math.ceil(need) + 8)))


def bipartite_from_expansion(exp: BetaExpansion) -> SGraph:
    """``K_{n,n}`` with ``T_k`` on vertices ``k`` and ``k + n``."""
    n = exp.n
    sets = exp.level_sets()
    names = tuple(str(i) for i in range(1, 2 * n + 1))
    edges = set()
    for a in range(n):
        for b in range(n, 2 * n):
            edges.add((a, b))
            edges.add((b, a))
    return SGraph(names, tuple(sets + sets), frozenset(edges))


def realize_entropy(lam, budget: Optional[int] = None) -> SGraph:
    """An S-graph shift of entropy ``log lambda`` on ``2(ceil(lambda) - 1)`` vertices.

    Uses the greedy expansion.  If its digits are not eventually periodic
    within ``budget``, the sets are approximate heads and the entropy is a
    lower bound accurate to the dropped tail.
    """
    budget = digit_budget(lam) if budget is None else budget
    return bipartite_from_expansion(greedy_beta_expansion(lam, budget))


# -- families with specification ------------------------------------------------


def seeded_partition(S: NSet, seed: int) -> tuple:
    """Split an infinite ``S`` into ``A ⊔ B`` from the bits of ``seed``.

    The elements of ``S`` are dealt to A and B in alternating runs; the
    binary digits of ``2*seed + 1`` pick run lengths 1 or 2, after which the
    runs stay at length 1.  The last coded run always has length 2, so
    different seeds give different ``A``.  Both parts have gaps at most
    ``3 * max gap(S)``.
    """
    if seed < 0:
        raise ValueError("seed must be nonnegative")
    if S.approximate or S.is_finite:
        raise SGSError("the partitioned set must be exact and infinite")
    runs = [1 + int(b) for b in bin(2 * seed + 1)[2:]]
    coded = sum(runs)
    labels = []
    for r, length in enumerate(runs):
        labels.extend([r % 2] * length)
    t = S.tail
    P = 2 * t.period
    upto = t.offset + 2 * P
    while True:
        elems = S.elements(upto)
        j0 = next((j for j in range(coded, len(elems)) if elems[j] >= t.offset), None)
        if j0 is not None and elems[j0] + P <= upto:
            break
        upto *= 2
    nxt = len(runs) % 2
    while len(labels) < len(elems):
        labels.append(nxt)
        nxt ^= 1
    X = elems[j0]
    parts = []
    for side in (0, 1):
        head = tuple(e for j, e in enumerate(elems[:j0]) if labels[j] == side)
        res = frozenset(e - X for j, e in enumerate(elems) if X <= e < X + P and labels[j] == side)
        parts.append(NSet(head, Tail(X, P, res)))
    A, B = parts
    if not ns_disjoint_union_check(A, B, S):
        raise InvariantError("seeded partition does not cover the set")
    cap = 3 * ns_stats(S)["gap_sup"]
    if max(ns_stats(A)["gap_sup"], ns_stats(B)["gap_sup"]) > cap:
        raise InvariantError("seeded partition exceeds the gap cap")
    return A, B


def seeded_clone(g: SGraph, v, seed: int) -> tuple:
    """Clone ``v`` along :func:`seeded_partition` of its set."""
    i = g.index(v) if isinstance(v, str) else int(v)
    A, B = seeded_partition(g.sets[i], seed)
    return vertex_clone(g, i, A, B)


def family_basis(lam, budget: Optional[int] = None) -> BetaExpansion:
    """The expansion behind :func:`family_member`.

    Prefers an exact spiced expansion.  When that is unavailable, an exact
    greedy expansion with a consecutive nonzero pair and infinite ``T_1``
    serves as well: eventually periodic digits already give bounded gaps.
    """
    budget = max(digit_budget(lam), 2 * MAX_PERIOD + 16) if budget is None else budget
    notes = []
    try:
        sp = spiced_expansion(lam, budget)
        if sp.is_exact:
            return sp
        notes.append("spiced expansion is not eventually periodic within the budget")
    except ConvergenceError as exc:
        notes.append(str(exc))
    gr = greedy_beta_expansion(lam, budget)
    if gr.is_exact and gr.has_consecutive_pair() and not gr.level_set(1).is_finite:
        gr.notes.extend(notes)
        return gr
    raise ConvergenceError(
        "no eventually periodic expansion with bounded gaps and a consecutive nonzero pair: "
        + "; ".join(notes)
    )


def family_member(lam, partition_seed: int, budget: Optional[int] = None) -> SGraph:
    """A shift on ``2 ceil(lambda) - 1`` vertices with the specification
    property and entropy ``log lambda``, indexed by ``partition_seed``.

    Vertex "1" of the bipartite construction is cloned along a seeded
    partition of its (infinite) set.
    """
    exp = family_basis(lam, budget)
    base = bipartite_from_expansion(exp)
    g, _ = seeded_clone(base, "1", partition_seed)
    return g
