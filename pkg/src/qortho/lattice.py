"""Seven-parameter families, their lattice sequences, and diagnostics.

A family is the parameter vector (a1, a2, b0, b1, b2, s1, s2) together with
the base q.  It generates four sequences:

    x_k = b0 + b1 q^k + b2 q^{-k}          (interpolation nodes)
    h_k = a1 q^k + a2 q^{-k}               (eigenvalues)
    d_k = (-s1 - s2) + s1 q^k + s2 q^{-k}  (inhomogeneous part, d_0 = 0)
    g_k = x_{k-1} (h_k - h_0) + d_k        (g_0 = 0)

x, h and d are affine combinations of 1, q^k and q^{-k}, so each satisfies
the third-order constant-coefficient difference equation
s_{k+3} = z (s_{k+2} - s_{k+1}) + s_k with z = 1 + q + 1/q.  The product in
g adds q^{2k} and q^{-2k} components, so g lies in the five-dimensional
span {1, q^k, q^{-k}, q^{2k}, q^{-2k}} instead.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, List, Optional, Tuple

import mpmath

from .errors import DegenerateFamily, IndexOutOfRange
from .qnum import QContext


def _num(x: Any) -> Any:
    """Accept strings as exact decimal literals; pass numbers through."""
    return mpmath.mpf(x) if isinstance(x, str) else x


@dataclass(frozen=True)
class FamilyParameters:
    """Parameter vector of one family, with its base q.

    finite_n marks a finite family whose weight sequence terminates after
    node index finite_n (r_k = 0 for k > finite_n); None means not declared.
    Zero parameters are recognised only when supplied as exact zeros.
    """

    a1: Any
    a2: Any
    b0: Any
    b1: Any
    b2: Any
    s1: Any
    s2: Any
    q: Any
    finite_n: Optional[int] = None

    def __post_init__(self) -> None:
        for name in ("a1", "a2", "b0", "b1", "b2", "s1", "s2", "q"):
            object.__setattr__(self, name, _num(getattr(self, name)))
        if self.q == 0 or self.q == 1 or self.q == -1:
            raise ValueError("q must differ from 0, 1 and -1")
        if self.finite_n is not None and (
            self.finite_n != int(self.finite_n) or self.finite_n < 0
        ):
            raise ValueError("finite_n must be a nonnegative integer or None")

    def vector(self) -> Tuple[Any, ...]:
        return (self.a1, self.a2, self.b0, self.b1, self.b2, self.s1, self.s2)


@dataclass(frozen=True)
class SequenceSet:
    """Materialised lattice tables x, h, d, g for indices 0..max_index."""

    params: FamilyParameters
    max_index: int
    x: Tuple[Any, ...]
    h: Tuple[Any, ...]
    d: Tuple[Any, ...]
    g: Tuple[Any, ...]
    ctx: QContext = field(repr=False, compare=False, default=None)

    def extended(self, new_max: int) -> "SequenceSet":
        """A new SequenceSet over 0..new_max (never mutates self)."""
        if new_max <= self.max_index:
            return self
        return build_sequences(self.params, new_max, self.ctx)


def build_sequences(params: FamilyParameters, max_index: int, ctx: QContext) -> SequenceSet:
    """Evaluate the four sequences on indices 0..max_index.

    Raises DegenerateFamily when a1 = a2 = 0 (all eigenvalues coincide) or
    b1 = b2 = 0 (all nodes coincide); near-degeneracies are reported by
    validate_family instead.
    """
    if max_index < 0:
        raise IndexOutOfRange("max_index must be nonnegative")
    if not ctx.matches(params.q):
        raise ValueError("context base q differs from the family's q")
    a1, a2 = ctx.real(params.a1), ctx.real(params.a2)
    b0, b1, b2 = ctx.real(params.b0), ctx.real(params.b1), ctx.real(params.b2)
    s1, s2 = ctx.real(params.s1), ctx.real(params.s2)
    if a1 == 0 and a2 == 0:
        raise DegenerateFamily("a1 = a2 = 0: eigenvalue sequence is constant")
    if b1 == 0 and b2 == 0:
        raise DegenerateFamily("b1 = b2 = 0: node sequence is constant")
    x: List[Any] = []
    h: List[Any] = []
    d: List[Any] = []
    g: List[Any] = [ctx.real(0)]
    qp = ctx.real(1)   # q^k
    qn = ctx.real(1)   # q^{-k}
    qi = 1 / ctx.q
    for k in range(max_index + 1):
        x.append(b0 + b1 * qp + b2 * qn)
        h.append(a1 * qp + a2 * qn)
        d.append((-s1 - s2) + s1 * qp + s2 * qn)
        if k >= 1:
            g.append(x[k - 1] * (h[k] - h[0]) + d[k])
        qp *= ctx.q
        qn *= qi
    return SequenceSet(params, max_index, tuple(x), tuple(h), tuple(d), tuple(g), ctx)


def newton_eval(seq: SequenceSet, n: int, t: Any) -> Any:
    """Newton basis value v_n(t) = prod_{i<n} (t - x_i); v_0 = 1."""
    if n < 0 or n > seq.max_index:
        raise IndexOutOfRange(f"n = {n} outside 0..{seq.max_index}")
    t = seq.ctx.real(t)
    out = seq.ctx.real(1)
    for i in range(n):
        out *= t - seq.x[i]
    return out


def newton_node_derivative(seq: SequenceSet, j: int, k: int) -> Any:
    """v_{j+1}'(x_k) = prod_{i <= j, i != k} (x_k - x_i) for 0 <= k <= j."""
    if not 0 <= j <= seq.max_index - 1:
        raise IndexOutOfRange(f"j = {j} outside 0..{seq.max_index - 1}")
    if not 0 <= k <= j:
        raise IndexOutOfRange(f"k = {k} outside 0..{j}")
    xk = seq.x[k]
    out = seq.ctx.real(1)
    for i in range(j + 1):
        if i != k:
            out *= xk - seq.x[i]
    return out


@dataclass(frozen=True)
class Violation:
    """One detected degeneracy: kind, location, and offending magnitude."""

    kind: str
    where: Tuple[int, ...]
    magnitude: Any


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violations: Tuple[Violation, ...]

    def kinds(self) -> Tuple[str, ...]:
        return tuple(v.kind for v in self.violations)


def validate_family(params: FamilyParameters, max_index: int, ctx: QContext) -> ValidationReport:
    """Scan indices 0..max_index for degeneracies; findings are data.

    Detects: a-pair-zero, b-pair-zero, coincident-h, coincident-x,
    vanishing-g, vanishing-alpha.  Exact zeros are always flagged; otherwise
    a relative threshold of 1e3 times unit roundoff (against the magnitude
    of the terms forming the quantity) is used.
    """
    thr = 1000 * ctx.eps
    violations: List[Violation] = []
    a_zero = ctx.real(params.a1) == 0 and ctx.real(params.a2) == 0
    b_zero = ctx.real(params.b1) == 0 and ctx.real(params.b2) == 0
    if a_zero:
        violations.append(Violation("a-pair-zero", (), ctx.real(0)))
    if b_zero:
        violations.append(Violation("b-pair-zero", (), ctx.real(0)))
    if a_zero or b_zero:
        return ValidationReport(False, tuple(violations))

    seq = build_sequences(params, max_index + 1, ctx)
    for k in range(1, max_index + 1):
        for j in range(k):
            if abs(seq.h[j] - seq.h[k]) <= thr * max(abs(seq.h[j]), abs(seq.h[k])):
                violations.append(
                    Violation("coincident-h", (j, k), abs(seq.h[j] - seq.h[k]))
                )
            if abs(seq.x[j] - seq.x[k]) <= thr * max(abs(seq.x[j]), abs(seq.x[k])):
                violations.append(
                    Violation("coincident-x", (j, k), abs(seq.x[j] - seq.x[k]))
                )
    for k in range(1, max_index + 1):
        scale = abs(seq.x[k - 1] * (seq.h[k] - seq.h[0])) + abs(seq.d[k])
        if abs(seq.g[k]) <= thr * scale:
            violations.append(Violation("vanishing-g", (k,), abs(seq.g[k])))

    # Favard scan: alpha_n = r_n (r_{n-1}[n>1] - r_n + t_n + x_n - x_{n-1})
    # with r_m = g_m / (h_{m-1} - h_m), t_n = g_{n+1} / (h_{n-1} - h_{n+1}).
    for n in range(1, max_index + 1):
        dh1 = seq.h[n - 1] - seq.h[n]
        dh2 = seq.h[n - 1] - seq.h[n + 1]
        if dh1 == 0 or dh2 == 0 or (n >= 2 and seq.h[n - 2] == seq.h[n]):
            continue  # already reported as coincident-h
        r_n = seq.g[n] / dh1
        r_prev = seq.g[n - 1] / (seq.h[n - 2] - seq.h[n]) if n >= 2 else 0
        t_n = seq.g[n + 1] / dh2
        bracket = (r_prev if n >= 2 else 0) - r_n + t_n + seq.x[n] - seq.x[n - 1]
        scale = abs(r_n) * (
            abs(r_prev) + abs(r_n) + abs(t_n) + abs(seq.x[n]) + abs(seq.x[n - 1])
        )
        alpha = r_n * bracket
        if abs(alpha) <= thr * scale:
            violations.append(Violation("vanishing-alpha", (n,), abs(alpha)))
    return ValidationReport(len(violations) == 0, tuple(violations))
