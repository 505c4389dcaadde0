"""Truncated power series with exact coefficients.

Coefficients are Python ints where possible and ``fractions.Fraction``
otherwise.  All arithmetic is truncated at a fixed order ``N`` (coefficients
``c_0 .. c_N`` are kept).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .errors import SGSError


class TruncSeries:
    __slots__ = ("coeffs", "order")

    def __init__(self, coeffs: Sequence, order: int):
        if order < 0:
            raise ValueError("order must be nonnegative")
        c = list(coeffs[: order + 1])
        c += [0] * (order + 1 - len(c))
        self.coeffs = [_tidy(x) for x in c]
        self.order = order

    @classmethod
    def constant(cls, c, order: int) -> "TruncSeries":
        return cls([c], order)

    @classmethod
    def monomial(cls, k: int, order: int, c=1) -> "TruncSeries":
        return cls([0] * k + [c], order)

    def __repr__(self) -> str:
        return f"TruncSeries({self.coeffs}, order={self.order})"

    def __eq__(self, other) -> bool:
        if isinstance(other, TruncSeries):
            return self.order == other.order and self.coeffs == other.coeffs
        return NotImplemented

    def __getitem__(self, k: int):
        return self.coeffs[k]

    def __len__(self) -> int:
        return self.order + 1

    def _coerce(self, other) -> "TruncSeries":
        if isinstance(other, TruncSeries):
            if other.order != self.order:
                raise ValueError("series orders differ")
            return other
        return TruncSeries.constant(other, self.order)

    def __add__(self, other):
        o = self._coerce(other)
        return TruncSeries([a + b for a, b in zip(self.coeffs, o.coeffs)], self.order)

    __radd__ = __add__

    def __neg__(self):
        return TruncSeries([-a for a in self.coeffs], self.order)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, TruncSeries):
            return TruncSeries([a * other for a in self.coeffs], self.order)
        o = self._coerce(other)
        N = self.order
        out = [0] * (N + 1)
        b = o.coeffs
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j in range(N + 1 - i):
                if b[j]:
                    out[i + j] += a * b[j]
        return TruncSeries(out, N)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return series_inverse(self) ** (-k)
        result = TruncSeries.constant(1, self.order)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def is_integral(self) -> bool:
        return all(isinstance(c, int) for c in self.coeffs)

    def as_ints(self) -> list:
        if not self.is_integral():
            raise SGSError("series has non-integer coefficients")
        return list(self.coeffs)

    def derivative(self) -> "TruncSeries":
        return TruncSeries([k * self.coeffs[k] for k in range(1, self.order + 1)], self.order)

    def integral(self) -> "TruncSeries":
        """Antiderivative with zero constant term (top coefficient dropped)."""
        return TruncSeries([0] + [Fraction(c, k + 1) for k, c in enumerate(self.coeffs[:-1])], self.order)


def _tidy(x):
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x.numerator)
    return x


def _div_exact(a, b):
    if isinstance(a, int) and isinstance(b, int) and a % b == 0:
        return a // b
    return Fraction(a) / b


def series_inverse(f: TruncSeries) -> TruncSeries:
    """``1/f`` by the usual recurrence; needs ``f[0] != 0``."""
    c0 = f.coeffs[0]
    if c0 == 0:
        raise SGSError("series_inverse: constant term is zero")
    N = f.order
    g = [0] * (N + 1)
    g[0] = _div_exact(1, c0)
    for n in range(1, N + 1):
        s = 0
        for k in range(1, n + 1):
            if f.coeffs[k]:
                s += f.coeffs[k] * g[n - k]
        g[n] = _div_exact(-s, c0)
    return TruncSeries(g, N)


def series_log(f: TruncSeries) -> TruncSeries:
    """``log f`` for ``f[0] == 1``, via ``(log f)' = f'/f``."""
    if f.coeffs[0] != 1:
        raise SGSError("series_log: constant term must be 1")
    return (f.derivative() * series_inverse(f)).integral()


def series_exp(f: TruncSeries) -> TruncSeries:
    """``exp f`` for ``f[0] == 0``, via ``g' = f' g``."""
    if f.coeffs[0] != 0:
        raise SGSError("series_exp: constant term must be 0")
    N = f.order
    fp = f.derivative().coeffs
    g = [0] * (N + 1)
    g[0] = 1
    for n in range(1, N + 1):
        # n g_n = sum_{k=1..n} k f_k g_{n-k}
        s = 0
        for k in range(1, n + 1):
            if fp[k - 1]:
                s += fp[k - 1] * g[n - k]
        g[n] = _tidy(Fraction(s) / n)
    return TruncSeries(g, N)


def _is_unit(c) -> bool:
    if isinstance(c, int):
        return c in (1, -1)
    return c != 0


def series_det(M: Sequence[Sequence[TruncSeries]]) -> TruncSeries:
    """Determinant of a square matrix over the truncated series ring.

    Gaussian elimination dividing only by series whose constant term is a
    unit (so integer input stays integral); if no unit pivot is available in
    some column, falls back to cofactor expansion.
    """
    n = len(M)
    if n == 0:
        raise ValueError("empty matrix")
    if any(len(row) != n for row in M):
        raise ValueError("matrix must be square")
    order = M[0][0].order
    A = [list(row) for row in M]
    det = TruncSeries.constant(1, order)
    for k in range(n):
        piv = next((i for i in range(k, n) if _is_unit(A[i][k].coeffs[0])), None)
        if piv is None:
            rest = [row[k:] for row in A[k:]]
            return det * _cofactor_det(rest)
        if piv != k:
            A[k], A[piv] = A[piv], A[k]
            det = -det
        p = A[k][k]
        det = det * p
        inv = series_inverse(p)
        for i in range(k + 1, n):
            if all(c == 0 for c in A[i][k].coeffs):
                continue
            factor = A[i][k] * inv
            A[i] = A[i][:k] + [A[i][j] - factor * A[k][j] for j in range(k, n)]
    return det


def _cofactor_det(A) -> TruncSeries:
    n = len(A)
    if n == 1:
        return A[0][0]
    total = TruncSeries.constant(0, A[0][0].order)
    for j in range(n):
        if all(c == 0 for c in A[0][j].coeffs):
            continue
        minor = [row[:j] + row[j + 1:] for row in A[1:]]
        term = A[0][j] * _cofactor_det(minor)
        total = total + term if j % 2 == 0 else total - term
    return total
