"""Scalar arithmetic context and q-series primitives.

A QContext fixes the base q, the working precision, and the truncation
tolerance used by every series evaluation in the package.  Precisions of at
most DOUBLE_PRECISION digits run on plain machine floats (fast mode); higher
precisions run on an independent mpmath context, so several QContext
instances with different precisions can coexist safely.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Iterator, Optional, Union

import mpmath

from .errors import NoConvergence

# Digit counts at or below this run in plain float arithmetic.
DOUBLE_PRECISION = 17

_FLOAT_EPS = 2.220446049250313e-16


def binom2(k: int) -> int:
    """Triangular-number exponent binom(k, 2) = k(k-1)/2."""
    return k * (k - 1) // 2


@dataclass(frozen=True)
class QContext:
    """Immutable arithmetic context for one base q.

    Invariants: q not in {0, 1, -1} (the difference equation must have the
    three distinct characteristic roots 1, q, 1/q); 0 < tol < 1;
    max_terms >= 16.  The auxiliary constant z = 1 + q + 1/q is exposed as
    the attribute ``z``.
    """

    q: Any
    precision: int = 50
    tol: Any = None
    max_terms: int = 5000
    _mp: Any = field(default=None, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.precision < 1:
            raise ValueError("precision must be a positive digit count")
        if self.precision > DOUBLE_PRECISION:
            ctx = mpmath.mp.clone()
            ctx.dps = self.precision
            object.__setattr__(self, "_mp", ctx)
        q = self.real(self.q)
        if q == 0 or q == 1 or q == -1:
            raise ValueError("q must differ from 0, 1 and -1")
        object.__setattr__(self, "q", q)
        tol = self.tol
        if tol is None:
            tol = 1e-13 if self._mp is None else mpmath.mpf(10) ** (20 - self.precision)
        tol = self.real(tol)
        if not 0 < tol < 1:
            raise ValueError("tol must lie strictly between 0 and 1")
        object.__setattr__(self, "tol", tol)
        if self.max_terms < 16:
            raise ValueError("max_terms must be at least 16")

    # -- scalar helpers -------------------------------------------------

    def real(self, x: Any) -> Any:
        """Coerce x to this context's scalar type."""
        if self._mp is None:
            return float(mpmath.mpf(x)) if isinstance(x, str) else float(x)
        return self._mp.mpf(x)

    @property
    def z(self) -> Any:
        """The difference-equation constant 1 + q + 1/q."""
        return 1 + self.q + 1 / self.q

    @property
    def eps(self) -> Any:
        """Unit roundoff at this precision."""
        if self._mp is None:
            return _FLOAT_EPS
        return +self._mp.eps

    @property
    def is_double(self) -> bool:
        return self._mp is None

    def qpow(self, n: int) -> Any:
        """q**n for integer n of either sign."""
        return self.q ** n

    # -- derived contexts ------------------------------------------------

    @classmethod
    def double(cls, q: Any, tol: Any = None, max_terms: int = 5000) -> "QContext":
        """Fast-mode context on machine floats."""
        return cls(q, precision=15, tol=tol, max_terms=max_terms)

    def invert(self) -> "QContext":
        """Context for the inverted base 1/q at the same precision."""
        return QContext(1 / self.q, self.precision, self.tol, self.max_terms)

    def matches(self, q: Any) -> bool:
        """True when q coerces to this context's base exactly."""
        return self.real(q) == self.q


@dataclass(frozen=True)
class SeriesResult:
    """Outcome of one tail-bounded summation.

    terminated is True when the generator declared exact termination (a
    vanished factor makes every later term zero), in which case tail_bound
    is exactly zero.
    """

    value: Any
    terms_used: int
    tail_bound: Any
    terminated: bool
    peak: Any = 0


def q_pochhammer(t: Any, k: int, ctx: QContext) -> Any:
    """(t; q)_k = prod_{i=0}^{k-1} (1 - q^i t); the empty product is 1."""
    if k < 0:
        raise ValueError("q_pochhammer order k must be nonnegative")
    t = ctx.real(t)
    out = ctx.real(1)
    fac = ctx.real(1)
    for _ in range(k):
        out *= 1 - fac * t
        fac *= ctx.q
    return out


CoeffSource = Union[Callable[[int], Any], Iterable[Any]]


def _term_iter(coeff: CoeffSource, start: int) -> Iterator[Any]:
    if callable(coeff):
        j = start
        while True:
            c = coeff(j)
            if c is None:
                return
            yield c
            j += 1
    else:
        yield from coeff


def sum_tail_bounded(coeff: CoeffSource, start: int, ctx: QContext) -> SeriesResult:
    """Sum c_start + c_{start+1} + ... with a geometric tail bound.

    coeff is either a callable j -> c_j (returning None to declare exact
    termination) or an iterable of terms beginning at index start (exhaustion
    declares termination).  Stops once three consecutive terms satisfy
    |c_j| <= tol * |partial| with empirical ratio below 0.95 and the implied
    geometric tail bound is itself below tol * |partial|.  Terms at or below
    the absolute representation floor also stop the sum after three in a row
    (in double precision, subnormal terms can stall without ever reaching
    exact zero, and tol * |total| may be unrepresentable).  Raises
    NoConvergence when max_terms terms fail to meet the criterion.
    """
    zero = ctx.real(0)
    floor = ctx.real(1e-312) if ctx.is_double else ctx.real(10) ** (-8 * ctx.precision)
    total = zero
    comp = zero  # Kahan compensation
    terms = 0
    consec = 0
    floor_run = 0
    peak = zero
    prev_mags: list = []
    for c in _term_iter(coeff, start):
        c = ctx.real(c)
        y = c - comp
        t = total + y
        comp = (t - total) - y
        total = t
        terms += 1
        mag = abs(c)
        peak = max(peak, mag)
        prev_mags.append(mag)
        if len(prev_mags) > 4:
            prev_mags.pop(0)
        if mag <= floor:
            floor_run += 1
            if floor_run >= 3:
                return SeriesResult(total, terms, 4 * floor, False, peak)
        else:
            floor_run = 0
        if mag <= ctx.tol * abs(total):
            consec += 1
        else:
            consec = 0
        if consec >= 3 and len(prev_mags) >= 4:
            ratios = [
                prev_mags[i + 1] / prev_mags[i]
                for i in range(len(prev_mags) - 1)
                if prev_mags[i] > 0
            ]
            if len(ratios) == len(prev_mags) - 1:
                rmax = max(ratios)
                if rmax < 0.95:
                    tail = mag * rmax / (1 - rmax)
                    if tail <= ctx.tol * abs(total):
                        return SeriesResult(total, terms, tail, False, peak)
            elif mag == 0:
                # three consecutive exact zeros without declared termination
                return SeriesResult(total, terms, zero, False, peak)
        if terms >= ctx.max_terms:
            raise NoConvergence(
                "series failed the geometric-tail criterion after "
                f"{terms} terms (|q| >= 1 misuse or pathological parameters?)"
            )
    return SeriesResult(total, terms, zero, True, peak)
