"""Subsets of the positive integers in "finite head + periodic tail" form."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Optional

from .errors import ApproximateSetError, EmptyTruncationError, SchemaError


@dataclass(frozen=True)
class Tail:
    """The set ``{offset + r + k*period : r in residues, k >= 0}``."""

    offset: int
    period: int
    residues: frozenset

    def __post_init__(self):
        if self.offset < 1 or self.period < 1:
            raise SchemaError("tail offset and period must be positive")
        if not self.residues:
            raise SchemaError("tail residues must be nonempty")
        if any(r < 0 or r >= self.period for r in self.residues):
            raise SchemaError("tail residues must lie in [0, period)")


@dataclass(frozen=True)
class NSet:
    """An eventually periodic subset of N = {1, 2, ...}.

    Instances are always normalized: the tail period is minimal and the tail
    offset has been pushed down as far as the head allows, so two NSets denote
    the same set exactly when they compare equal.  ``approximate=True`` marks a
    head-only truncation of some unknown larger set (the primes, say).
    """

    head: tuple = ()
    tail: Optional[Tail] = None
    approximate: bool = False

    def __post_init__(self):
        head = tuple(sorted(set(int(h) for h in self.head)))
        if head and head[0] < 1:
            raise SchemaError("set elements must be positive integers")
        tail = self.tail
        if tail is not None and self.approximate:
            raise SchemaError("approximate sets are head-only")
        if tail is not None:
            # move the offset past the head, then let _normalize pull it back down
            off = max(tail.offset, head[-1] + 1 if head else 1)
            head_set = set(head)
            bits = [k in head_set or _in_tail(tail, k) for k in range(1, off)]
            shift = off - tail.offset
            tail = Tail(off, tail.period, frozenset((r - shift) % tail.period for r in tail.residues))
            head, tail = _normalize(bits, tail)
        if not head and tail is None:
            raise SchemaError("set must be nonempty")
        object.__setattr__(self, "head", head)
        object.__setattr__(self, "tail", tail)

    # -- constructors -----------------------------------------------------

    @classmethod
    def finite(cls, elements: Iterable[int], approximate: bool = False) -> "NSet":
        return cls(tuple(elements), None, approximate)

    @classmethod
    def progression(cls, start: int, step: int, head: Iterable[int] = ()) -> "NSet":
        """``head`` together with ``{start + k*step : k >= 0}``."""
        return cls(tuple(head), Tail(start, step, frozenset({0})))

    @classmethod
    def naturals(cls) -> "NSet":
        return cls.progression(1, 1)

    @classmethod
    def from_pattern(cls, head_bits, offset: int, period: int, residues) -> "NSet":
        """Build from membership bits for ``1..offset-1`` and tail residues.

        ``residues`` may be empty, in which case the set is finite.
        """
        head = tuple(i + 1 for i, b in enumerate(head_bits) if b)
        residues = frozenset(residues)
        if not residues:
            return cls(head)
        return cls(head, Tail(offset, period, residues))

    # -- basic queries -------------------------------------------------------

    @property
    def is_finite(self) -> bool:
        return self.tail is None

    @property
    def is_cofinite(self) -> bool:
        return self.tail is not None and len(self.tail.residues) == self.tail.period

    @property
    def min(self) -> int:
        if self.head:
            return self.head[0]
        return self.tail.offset + min(self.tail.residues)

    @property
    def max(self) -> Optional[int]:
        """Largest element, or None when infinite."""
        return self.head[-1] if self.tail is None else None

    @property
    def offset(self) -> int:
        """First integer from which membership is periodic."""
        if self.tail is None:
            return self.head[-1] + 1
        return self.tail.offset

    @property
    def period(self) -> int:
        return 1 if self.tail is None else self.tail.period

    def __contains__(self, n: int) -> bool:
        return ns_contains(self, n)

    def elements(self, upto: int) -> list:
        """Sorted elements ``<= upto``."""
        return [k for k in range(1, upto + 1) if ns_contains(self, k)]

    def pattern(self, offset: int, period: int):
        """Membership bits for ``1..offset-1`` and residues on ``[offset, offset+period)``.

        ``offset`` must be at least ``self.offset`` and ``period`` a multiple of
        ``self.period``.
        """
        bits = [ns_contains(self, k) for k in range(1, offset)]
        res = {r for r in range(period) if ns_contains(self, offset + r)}
        return bits, res

    def __str__(self) -> str:
        return format_literal(self)

    # -- (de)serialization ----------------------------------------------------

    def to_json(self) -> dict:
        doc = {"head": list(self.head)}
        if self.tail is not None:
            doc["tail"] = {
                "offset": self.tail.offset,
                "period": self.tail.period,
                "residues": sorted(self.tail.residues),
            }
        doc["approximate"] = self.approximate
        return doc

    @classmethod
    def from_json(cls, doc) -> "NSet":
        if isinstance(doc, str):
            return parse_literal(doc)
        if not isinstance(doc, dict):
            raise SchemaError(f"set must be an object or literal string, got {type(doc).__name__}")
        unknown = set(doc) - {"head", "tail", "approximate"}
        if unknown:
            raise SchemaError(f"unknown set keys: {sorted(unknown)}")
        head = doc.get("head", [])
        if not isinstance(head, list) or not all(isinstance(h, int) for h in head):
            raise SchemaError("set head must be a list of integers")
        tail = None
        if doc.get("tail") is not None:
            t = doc["tail"]
            try:
                tail = Tail(int(t["offset"]), int(t["period"]), frozenset(int(r) for r in t["residues"]))
            except (KeyError, TypeError) as exc:
                raise SchemaError(f"malformed tail: {exc}") from None
        return cls(tuple(head), tail, bool(doc.get("approximate", False)))


def _in_tail(tail: Tail, n: int) -> bool:
    if n < tail.offset:
        return False
    return (n - tail.offset) % tail.period in tail.residues


def _normalize(bits, tail: Tail):
    p, offset = tail.period, tail.offset
    residues = set(tail.residues)
    for d in _divisors(p):
        if all(((r + d) % p in residues) == (r in residues) for r in range(p)):
            residues = {r for r in residues if r < d}
            p = d
            break
    # pull the offset down while the head agrees with the periodic pattern
    bits = list(bits)
    while offset > 1:
        below = offset - 1
        in_head = bits[below - 1]
        if in_head != ((p - 1) in residues):
            break
        residues = {(r + 1) % p for r in residues}
        offset = below
        bits.pop()
    # start the tail at its first element; nothing lies in between
    first = min(residues)
    residues = {r - first for r in residues}
    offset += first
    head = tuple(i + 1 for i, b in enumerate(bits[: offset - 1]) if b)
    return head, Tail(offset, p, frozenset(residues))


def _divisors(n: int):
    return [d for d in range(1, n + 1) if n % d == 0]


# -- operations --------------------------------------------------------------


def ns_contains(S: NSet, n: int) -> bool:
    if n < 1:
        return False
    if S.tail is not None and n >= S.tail.offset:
        return _in_tail(S.tail, n)
    # head is sorted; sets are small enough that a scan is fine
    return n in S.head


def ns_stats(S: NSet) -> dict:
    """Minimum, finiteness, gap supremum and difference gcd of ``S``.

    ``gap_sup`` is ``math.inf`` for finite-gap-unbounded sets, which cannot
    happen for exact NSets; it is reported as ``None`` (unknown) when the set is
    approximate.
    """
    m = S.min
    if S.tail is None:
        elems = list(S.head)
        gaps = [b - a for a, b in zip(elems, elems[1:])]
        gap_sup = max(gaps) if gaps else 0
        diff_gcd = reduce(math.gcd, (e - m for e in elems), 0)
    else:
        t = S.tail
        elems = S.elements(t.offset + 2 * t.period)
        gaps = [b - a for a, b in zip(elems, elems[1:])]
        gap_sup = max(gaps)
        diff_gcd = reduce(math.gcd, (h - m for h in S.head), 0)
        for r in t.residues:
            diff_gcd = math.gcd(diff_gcd, math.gcd(t.offset + r - m, t.period))
    return {
        "min": m,
        "is_finite": S.is_finite and not S.approximate,
        "is_cofinite": S.is_cofinite,
        "gap_sup": None if S.approximate else gap_sup,
        "diff_gcd": diff_gcd,
        "eventually_periodic_gaps": None if S.approximate else True,
    }


def ns_gf_eval(S: NSet, x: float, exact: bool = True) -> float:
    """Evaluate ``sum_{s in S} x**s`` in closed form.

    Approximate sets raise in exact mode; otherwise they give the (lower bound)
    value of their head polynomial.
    """
    if x < 0:
        raise ValueError("x must be nonnegative")
    if S.approximate and exact:
        raise ApproximateSetError("generating function of an approximate set is only a lower bound")
    total = math.fsum(x ** h for h in S.head)
    if S.tail is None:
        return total
    if x >= 1.0:
        return math.inf
    t = S.tail
    num = math.fsum(x ** r for r in t.residues)
    return total + x ** t.offset * num / (1.0 - x ** t.period)


def ns_gf_coeffs(S: NSet, order: int) -> list:
    """Indicator coefficients ``[k in S for k in 0..order]`` as ints."""
    return [1 if ns_contains(S, k) else 0 for k in range(order + 1)]


def stabilization_bound(*sets: NSet) -> int:
    """Horizon past which a product/sum identity among these sets is settled."""
    offsets = [s.offset if s.tail is not None else (s.head[-1] + 1) for s in sets]
    periods = [s.period for s in sets]
    lcm = reduce(lambda a, b: a * b // math.gcd(a, b), periods, 1)
    pre = max(sum(offsets[:-1]), offsets[-1])
    tail_periods = [s.period for s in sets if s.tail is not None] or [0]
    return pre + 2 * lcm + 2 * max(tail_periods)


def ns_direct_sum_check(T1: NSet, T2: NSet, S: NSet, horizon: Optional[int] = None):
    """Check ``S = T1 (+) T2``: every element of S has exactly one representation.

    Returns True, False, or None when undecided (approximate input, or no
    counterexample found below a horizon smaller than the stabilization bound).
    """
    if T1.approximate or T2.approximate or S.approximate:
        return None
    bound = stabilization_bound(T1, T2, S)
    h = bound if horizon is None else horizon
    if h < 1:
        raise ValueError("horizon must be >= 1")
    a = ns_gf_coeffs(T1, h)
    b = ns_gf_coeffs(T2, h)
    s = ns_gf_coeffs(S, h)
    a_idx = [i for i, v in enumerate(a) if v]
    for n in range(h + 1):
        c = sum(b[n - i] for i in a_idx if i <= n)
        if c != s[n]:
            return False
    return True if h >= bound else None


def ns_truncate(S: NSet, n: int) -> NSet:
    """``S ∩ [1, n]`` as a finite set."""
    elems = S.elements(n) if S.tail is not None else [h for h in S.head if h <= n]
    if not elems:
        raise EmptyTruncationError(f"empty truncation: min {S.min} > {n}")
    return NSet.finite(elems)


def ns_shift(S: NSet, k: int) -> Optional[NSet]:
    """``{s - k : s in S, s - k >= 1}``, or None when that is empty."""
    if S.tail is None:
        elems = [h - k for h in S.head if h - k >= 1]
        return NSet.finite(elems, S.approximate) if elems else None
    t = S.tail
    off = max(t.offset, k + 1)
    bits, res = S.pattern(off, t.period)
    new_bits = bits[k:]
    return NSet.from_pattern(new_bits, off - k, t.period, res)


def _combine(A: NSet, B: NSet, op) -> Optional[NSet]:
    off = max(A.offset, B.offset)
    p = A.period * B.period // math.gcd(A.period, B.period)
    abits, ares = A.pattern(off, p)
    bbits, bres = B.pattern(off, p)
    bits = [op(x, y) for x, y in zip(abits, bbits)]
    res = {r for r in range(p) if op(r in ares, r in bres)}
    if not any(bits) and not res:
        return None
    return NSet.from_pattern(bits, off, p, res)


def ns_union(A: NSet, B: NSet) -> NSet:
    return _combine(A, B, lambda x, y: x or y)


def ns_intersection(A: NSet, B: NSet) -> Optional[NSet]:
    return _combine(A, B, lambda x, y: x and y)


def ns_difference(A: NSet, B: NSet) -> Optional[NSet]:
    return _combine(A, B, lambda x, y: x and not y)


def ns_disjoint_union_check(S1: NSet, S2: NSet, S: NSet) -> bool:
    """True iff ``S`` is the disjoint union of ``S1`` and ``S2``."""
    return ns_intersection(S1, S2) is None and ns_union(S1, S2) == S


# -- literal syntax ----------------------------------------------------------

_TERM = re.compile(r"^\s*(\d+)\s*(?:\+\s*(\d+)\s*k)?\s*$")


def parse_literal(text: str, allow_zero: bool = False):
    """Parse the compact set syntax.

    Comma-separated terms, each an integer ``5``, a progression ``2+2k``
    (``{2, 4, 6, ...}``) or ``N`` (all positive integers).  A leading ``~``
    marks a finite approximation.  With ``allow_zero`` the result is a pair
    ``(contains_zero, NSet or None)`` so S-gap sets over N0 can be written,
    e.g. ``0+2k`` for the even shift.
    """
    text = text.strip()
    approximate = text.startswith("~")
    if approximate:
        text = text[1:]
    zero = False
    head: set = set()
    progs = []
    for raw in text.split(","):
        term = raw.strip()
        if not term:
            continue
        if term in ("N", "ℕ"):
            progs.append((1, 1))
            continue
        if term in ("N0", "ℕ0", "ℕ₀"):
            zero = True
            progs.append((1, 1))
            continue
        m = _TERM.match(term)
        if not m:
            raise SchemaError(f"bad set term {term!r}")
        a = int(m.group(1))
        if m.group(2) is None:
            if a == 0:
                zero = True
            else:
                head.add(a)
            continue
        step = int(m.group(2))
        if step == 0:
            raise SchemaError(f"progression step must be positive in {term!r}")
        if a == 0:
            zero = True
            a = step
        progs.append((a, step))
    if zero and not allow_zero:
        raise SchemaError("0 is not a positive integer; sets live in N = {1, 2, ...}")
    if approximate and progs:
        raise SchemaError("approximate sets must be finite lists")
    result = None
    if head or progs:
        if progs:
            result = NSet.progression(*progs[0], head=head)
            for a, step in progs[1:]:
                result = ns_union(result, NSet.progression(a, step))
        else:
            result = NSet.finite(head, approximate)
    if allow_zero:
        if result is None and not zero:
            raise SchemaError("set must be nonempty")
        return zero, result
    if result is None:
        raise SchemaError("set must be nonempty")
    return result


def format_literal(S: NSet) -> str:
    parts = [str(h) for h in S.head]
    if S.tail is not None:
        t = S.tail
        if t.period == 1:
            parts.append("N" if t.offset == 1 else f"{t.offset}+1k")
        else:
            parts.extend(f"{t.offset + r}+{t.period}k" for r in sorted(t.residues))
    text = ",".join(parts)
    return "~" + text if S.approximate else text
