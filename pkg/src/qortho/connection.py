"""Connection matrices, moments, recurrence coefficients, eigen residuals.

The monic family u_n(t) = sum_k c_{n,k} v_k(t) expands in the Newton basis
with connection coefficients

    c_{n,k} = prod_{j=k}^{n-1} g_{j+1} / (h_n - h_j),     c_{n,n} = 1,

inverse entries

    chat_{n,k} = prod_{j=k+1}^{n} g_j / (h_k - h_j),      chat_{n,n} = 1,

and generalized moments m_k = chat_{k,0}.  The three-term recurrence
u_{n+1} = (t - beta_n) u_n - alpha_n u_{n-1} is computed by three
independent routes:

  * direct    — rational expressions in the g, h, x tables;
  * abs-form  — closed rational functions of the raw parameters in
                x = q^n, built from two auxiliary cubics p1, p2;
  * yz-form   — closed rational functions of the canonical (case-tagged)
                parameters in x = q^n, one formula pair per case.

All routes agree exactly in exact arithmetic; the direct route loses
roughly q^{-3n} of relative precision to cancellation at large n, so
cross-route comparisons belong at extended precision.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, List, Optional, Tuple

from .errors import (
    CoincidentEigenvalues,
    IndexOutOfRange,
    NotApplicable,
    ZeroDenominator,
)
from .lattice import FamilyParameters, SequenceSet, build_sequences
from .qnum import QContext, q_pochhammer
from .reparam import CanonicalParameters, canonicalize

ROUTES = ("direct", "abs-form", "yz-form")


@dataclass(frozen=True)
class ConnectionMatrices:
    """Triangles C and Chat (rows 0..size) plus the moment column."""

    size: int
    C: Tuple[Tuple[Any, ...], ...]
    Chat: Tuple[Tuple[Any, ...], ...]
    moments: Tuple[Any, ...]


@dataclass(frozen=True)
class RecurrenceCoefficients:
    """alpha_n (1 <= n <= nmax) and beta_n (0 <= n <= nmax) for one route."""

    nmax: int
    alphas: Tuple[Any, ...]  # alphas[i] = alpha_{i+1}
    betas: Tuple[Any, ...]   # betas[i] = beta_i
    route: str

    def alpha(self, n: int) -> Any:
        if not 1 <= n <= self.nmax:
            raise IndexOutOfRange(f"alpha_n defined for 1..{self.nmax}")
        return self.alphas[n - 1]

    def beta(self, n: int) -> Any:
        if not 0 <= n <= self.nmax:
            raise IndexOutOfRange(f"beta_n defined for 0..{self.nmax}")
        return self.betas[n]


@dataclass(frozen=True)
class EigenResidual:
    n: int
    residual: Any


def connection_matrices(seq: SequenceSet, n: int, ctx: QContext) -> ConnectionMatrices:
    """Build C, Chat and moments for rows 0..n from materialised tables.

    Row products accumulate right-to-left (C) and down each column (Chat)
    so the whole triangle costs O(n^2) multiplications.
    """
    if n < 0 or n > seq.max_index:
        raise IndexOutOfRange(f"n = {n} outside 0..{seq.max_index}")
    one = ctx.real(1)
    h, g = seq.h, seq.g
    C: List[Tuple[Any, ...]] = []
    for m in range(n + 1):
        row = [one] * (m + 1)
        for k in range(m - 1, -1, -1):
            dh = h[m] - h[k]
            if dh == 0:
                raise CoincidentEigenvalues(f"h_{m} = h_{k}")
            row[k] = row[k + 1] * g[k + 1] / dh
        C.append(tuple(row))
    cols: List[List[Any]] = [[one] for _ in range(n + 1)]
    for k in range(n + 1):
        for m in range(k + 1, n + 1):
            dh = h[k] - h[m]
            if dh == 0:
                raise CoincidentEigenvalues(f"h_{k} = h_{m}")
            cols[k].append(cols[k][-1] * g[m] / dh)
    Chat = tuple(
        tuple(cols[k][m - k] for k in range(m + 1)) for m in range(n + 1)
    )
    mom = tuple(Chat[m][0] for m in range(n + 1))
    return ConnectionMatrices(n, tuple(C), Chat, mom)


def moments(seq: SequenceSet, n: int, ctx: QContext) -> Tuple[Any, ...]:
    """Generalized moments m_0..m_n, m_j = prod_{i<=j} g_i/(h_0 - h_i)."""
    if n < 0 or n > seq.max_index:
        raise IndexOutOfRange(f"n = {n} outside 0..{seq.max_index}")
    out = [ctx.real(1)]
    for j in range(1, n + 1):
        dh = seq.h[0] - seq.h[j]
        if dh == 0:
            raise CoincidentEigenvalues(f"h_0 = h_{j}")
        out.append(out[-1] * seq.g[j] / dh)
    return tuple(out)


# ----------------------------------------------------------------------
# recurrence coefficient routes
# ----------------------------------------------------------------------


def _direct_alpha_beta(seq: SequenceSet, nmax: int) -> Tuple[List[Any], List[Any]]:
    h, g, x = seq.h, seq.g, seq.x

    def ratio(num_idx: int, a: int, b: int) -> Any:
        dh = h[a] - h[b]
        if dh == 0:
            raise CoincidentEigenvalues(f"h_{a} = h_{b}")
        return g[num_idx] / dh

    betas = [x[0] + ratio(1, 0, 1)]
    alphas = []
    for n in range(1, nmax + 1):
        r_n = ratio(n, n - 1, n)
        r_prev = ratio(n - 1, n - 2, n) if n >= 2 else 0
        t_n = ratio(n + 1, n - 1, n + 1)
        alphas.append(r_n * (r_prev - r_n + t_n + x[n] - x[n - 1]))
        betas.append(x[n] + ratio(n + 1, n, n + 1) - r_n)
    return alphas, betas


def abs_p1(params: FamilyParameters, x: Any, ctx: QContext) -> Any:
    """First auxiliary cubic of the raw-parameter route."""
    a1, a2 = ctx.real(params.a1), ctx.real(params.a2)
    b0, b1, b2 = ctx.real(params.b0), ctx.real(params.b1), ctx.real(params.b2)
    s1, s2 = ctx.real(params.s1), ctx.real(params.s2)
    q = ctx.q
    return (a1 * x - a2) * (b1 * x * x + b0 * q * x + b2 * q * q) + q * x * (
        s1 * x - s2
    )


def abs_p2(params: FamilyParameters, x: Any, ctx: QContext) -> Any:
    """Second auxiliary cubic, as an explicit polynomial.

    Equals -(a1^2 x^3 / (q^2 a2)) * p1(q a2 / (a1 x)) wherever a1, a2 != 0
    and extends that rational identity polynomially to a2 = 0 (and a1 = 0),
    so the route covers every admissible zero pattern.
    """
    a1, a2 = ctx.real(params.a1), ctx.real(params.a2)
    b0, b1, b2 = ctx.real(params.b0), ctx.real(params.b1), ctx.real(params.b2)
    s1, s2 = ctx.real(params.s1), ctx.real(params.s2)
    q = ctx.q
    return (x - q) * (
        a1 * a1 * b2 * x * x + a1 * a2 * b0 * x + a2 * a2 * b1
    ) + a1 * s2 * x * x - q * a2 * s1 * x


def abs_alpha(params: FamilyParameters, x: Any, ctx: QContext) -> Any:
    """Raw-parameter closed form of alpha at substitution value x."""
    a1, a2 = ctx.real(params.a1), ctx.real(params.a2)
    q = ctx.q
    x = ctx.real(x)
    xx = x * x
    den = (
        (a1 * xx - a2)
        * (a1 * xx - q * a2) ** 2
        * (a1 * xx - q * q * a2)
    )
    if den == 0:
        raise ZeroDenominator("resonance: a1 x^2 = q^m a2 in the alpha form")
    return (
        (x - 1)
        * (a1 * x - q * a2)
        * abs_p1(params, x, ctx)
        * abs_p2(params, x, ctx)
        / den
    )


def abs_beta(params: FamilyParameters, x: Any, ctx: QContext) -> Any:
    """Raw-parameter closed form of beta at substitution value x."""
    a1, a2 = ctx.real(params.a1), ctx.real(params.a2)
    b0 = ctx.real(params.b0)
    b1, b2 = ctx.real(params.b1), ctx.real(params.b2)
    s1, s2 = ctx.real(params.s1), ctx.real(params.s2)
    q = ctx.q
    x = ctx.real(x)
    xx = x * x
    den = (q * a1 * xx - a2) * (a1 * xx - q * a2)
    if den == 0:
        raise ZeroDenominator("resonance: a1 x^2 = q^m a2 in the beta form")
    d = (q + 1) * (q * a1 * b2 + a2 * b1) - q * (s1 + s2 + (a1 + a2) * b0)
    num = (
        q * b0 * (xx - 1) * (a1 * a1 * xx - a2 * a2)
        + d * x * (x - 1) * (a1 * x - a2)
        - (q * s1 - s2) * (a1 - q * a2) * xx
    )
    return num / den


def yz_alpha(canonical: CanonicalParameters, x: Any) -> Any:
    """Canonical-parameter closed form of alpha at substitution value x."""
    c = canonical
    q, b0, b1, b2 = c.q, c.b0, c.b1, c.b2
    e1, e2, e3, z1, z2 = c.e1, c.e2, c.e3, c.z1, c.z2
    p, t1, t2 = c.p, c.pe1, c.pe2
    xx = x * x
    if c.case == "generic":
        den = (z1 * xx - q) * (z1 * xx - q * q) ** 2 * (z1 * xx - q ** 3)
        if den == 0:
            raise ZeroDenominator("resonance: z1 x^2 = q^m")
        Py = e3 * x ** 3 - q * e2 * xx + q * q * e1 * x - q ** 3
        Pz = (
            z1 ** 3 * x ** 3
            - q * z1 * z1 * e1 * xx
            + q * q * z1 * e2 * x
            - q ** 3 * e3
        )
        return b2 * b2 * (x - 1) * (z1 * x - q * q) * Py * Pz / (z1 * den)
    if c.case == "c1":
        return (
            b2 * b2 / q ** 3
            * (x - 1)
            * (e2 * x - z2)
            * (e2 * xx - q * e1 * x + q * q)
        )
    if c.case == "c2":
        den = (z1 * xx - q) * (z1 * xx - q * q) ** 2 * (z1 * xx - q ** 3)
        if den == 0:
            raise ZeroDenominator("resonance: z1 x^2 = q^m")
        return (
            -q * b2 * b2 * x * (x - 1) * (z1 * x - q * q)
            * (e2 * xx - q * e1 * x + q * q)
            * (z1 * z1 * xx - q * z1 * e1 * x + q * q * e2)
            / den
        )
    if c.case == "c3":
        return b2 * b2 / q ** 3 * e2 * x * (x - 1) * (e2 * xx - q * e1 * x + q * q)
    if c.case in ("c4", "c5"):
        return (
            b2 * b2 / q
            * (x - 1)
            * (x - p)
            * (t2 * xx - q * t1 * x + q * q * p)
            / xx ** 2
        )
    if c.case == "c6":
        den = (z1 * xx - q) * (z1 * xx - q * q) ** 2 * (z1 * xx - q ** 3)
        if den == 0:
            raise ZeroDenominator("resonance: z1 x^2 = q^m")
        return (
            -q * b1 * b1 * x * (x - 1) * (z1 * x - q * q)
            * (z1 * xx - q * t1 * x + p * q * q)
            * (p * z1 * xx - q * t1 * x + q * q)
            / den
        )
    if c.case == "c7":
        return b1 * b1 / q ** 3 * x * (x - 1) * (t1 * x - q) * (t1 * x - q * p)
    # c8
    return -q * p * b1 * b1 * (x - 1) * (xx - q * t1 * x + q * q * p) / xx ** 2


def yz_beta(canonical: CanonicalParameters, x: Any) -> Any:
    """Canonical-parameter closed form of beta at substitution value x."""
    c = canonical
    q, b0, b1, b2 = c.q, c.b0, c.b1, c.b2
    e1, e2, e3, z1, z2 = c.e1, c.e2, c.e3, c.z1, c.z2
    p, t1 = c.p, c.pe1
    xx = x * x
    if c.case == "generic":
        den = z1 * (z1 * xx - 1) * (z1 * xx - q * q)
        if den == 0:
            raise ZeroDenominator("resonance: z1 x^2 = q^m")
        phi = z1 * z1 + q * z1 * e1 + z1 * e2 + q * e3
        n2 = z1 * phi
        n1 = -z1 * (q + 1) * ((q + e1) * z1 + q * e2 + e3)
        n0 = q * phi
        return b0 + b2 * x * (n2 * xx + n1 * x + n0) / den
    if c.case == "c1":
        return b0 - b2 / q * x * (e2 * (1 + q) * x - z2 - q * e1 - e2)
    if c.case == "c2":
        den = (z1 * xx - 1) * (z1 * xx - q * q)
        if den == 0:
            raise ZeroDenominator("resonance: z1 x^2 = q^m")
        n2 = z1 * (z1 + q * e1 + e2)
        n1 = -(q + 1) * ((q + e1) * z1 + q * e2)
        n0 = q * (z1 + q * e1 + e2)
        return b0 + b2 * x * (n2 * xx + n1 * x + n0) / den
    if c.case == "c3":
        return b0 - b2 / q * x * (e2 * (q + 1) * x - q * e1 - e2)
    if c.case in ("c4", "c5"):
        return b0 + b2 / (q * xx) * ((q + q * p + t1) * x - p * (1 + q))
    if c.case == "c6":
        den = (z1 * xx - 1) * (z1 * xx - q * q)
        if den == 0:
            raise ZeroDenominator("resonance: z1 x^2 = q^m")
        n2 = z1 * (p * q + q + t1)
        n1 = -(q + 1) * ((p + 1) * z1 + q * t1)
        n0 = q * (q * (p + 1) + t1)
        return b0 + b1 * x * (n2 * xx + n1 * x + n0) / den
    if c.case == "c7":
        return b0 - b1 / q * x * ((q + 1) * t1 * x - q * (p + 1) - t1)
    # c8
    return b0 + b1 * ((t1 + q * p) * x - (q + 1) * p) / xx


def recurrence_coefficients(
    params: FamilyParameters, nmax: int, route: str, ctx: QContext
) -> RecurrenceCoefficients:
    """Three-term recurrence coefficients alpha_1..alpha_nmax, beta_0..beta_nmax."""
    if nmax < 0:
        raise IndexOutOfRange("nmax must be nonnegative")
    aliases = {"abs": "abs-form", "yz": "yz-form"}
    route = aliases.get(route, route)
    if route not in ROUTES:
        raise ValueError(f"route must be one of {ROUTES}")
    if route == "direct":
        seq = build_sequences(params, nmax + 1, ctx)
        alphas, betas = _direct_alpha_beta(seq, nmax)
    elif route == "abs-form":
        if not ctx.matches(params.q):
            raise ValueError("context base q differs from the family's q")
        xs = [ctx.qpow(n) for n in range(nmax + 1)]
        alphas = [abs_alpha(params, xs[n], ctx) for n in range(1, nmax + 1)]
        betas = [abs_beta(params, xs[n], ctx) for n in range(nmax + 1)]
    else:
        canonical = canonicalize(params, ctx)
        xs = [ctx.qpow(n) for n in range(nmax + 1)]
        alphas = [yz_alpha(canonical, xs[n]) for n in range(1, nmax + 1)]
        betas = [yz_beta(canonical, xs[n]) for n in range(nmax + 1)]
    return RecurrenceCoefficients(nmax, tuple(alphas), tuple(betas), route)


def yz_connection_entry(
    canonical: CanonicalParameters, n: int, k: int, ctx: QContext
) -> Any:
    """Closed-form connection entry c_{n,k} in canonical parameters.

    Available in the generic case:
        c_{n,k} = b2^{n-k} q^{-(n-k)k} (q^{k+1}; q)_{n-k}
                  * prod_{i=0}^{n-k-1} (1 - e1 q^{k+i} + e2 q^{2(k+i)} - e3 q^{3(k+i)})
                  / ((q; q)_{n-k} (z1 q^{n+k-1}; q)_{n-k}).
    """
    if canonical.case != "generic":
        raise NotApplicable("closed-form connection entries require the generic case")
    if not 0 <= k <= n:
        raise IndexOutOfRange(f"k = {k} outside 0..{n}")
    q = ctx.q
    yp = ctx.real(1)
    for i in range(n - k):
        yp *= canonical.factor(k + i)
    den = q_pochhammer(ctx.q, n - k, ctx) * q_pochhammer(
        canonical.z1 * q ** (n + k - 1), n - k, ctx
    )
    if den == 0:
        raise ZeroDenominator("resonance: z1 q^{n+k-1} hits q^{-m}")
    return (
        canonical.b2 ** (n - k)
        * q ** (-(n - k) * k)
        * q_pochhammer(q ** (k + 1), n - k, ctx)
        * yp
        / den
    )


def polynomial_values(
    params: FamilyParameters, n: int, t: Any, method: str, ctx: QContext
) -> Any:
    """Monic polynomial value u_n(t) by Newton expansion or recurrence."""
    if n < 0:
        raise IndexOutOfRange("degree must be nonnegative")
    t = ctx.real(t)
    if method == "newton":
        seq = build_sequences(params, max(n, 1), ctx)
        cm = connection_matrices(seq, n, ctx)
        row = cm.C[n]
        total = ctx.real(0)
        v = ctx.real(1)
        for k in range(n + 1):
            total += row[k] * v
            v *= t - seq.x[k]
        return total
    if method == "recurrence":
        rc = recurrence_coefficients(params, max(n - 1, 0), "direct", ctx)
        u_prev, u = ctx.real(0), ctx.real(1)
        for m in range(n):
            u_prev, u = u, (t - rc.beta(m)) * u - (rc.alpha(m) * u_prev if m >= 1 else 0)
        return u
    raise ValueError("method must be 'newton' or 'recurrence'")


def eigen_residual(params: FamilyParameters, n: int, ctx: QContext) -> EigenResidual:
    """Scaled max-norm defect of D u_n = h_n u_n in Newton-coefficient space.

    Coefficient k of D u_n is h_k c_{n,k} + g_{k+1} c_{n,k+1}; the residual
    is max_k |(D u_n - h_n u_n)_k| / max_k |h_n c_{n,k}|.
    """
    if n < 0:
        raise IndexOutOfRange("degree must be nonnegative")
    seq = build_sequences(params, n + 1, ctx)
    cm = connection_matrices(seq, n, ctx)
    row = cm.C[n]
    hn = seq.h[n]
    num = ctx.real(0)
    den = ctx.real(0)
    for k in range(n + 1):
        d_coeff = seq.h[k] * row[k] + (seq.g[k + 1] * row[k + 1] if k < n else 0)
        num = max(num, abs(d_coeff - hn * row[k]))
        den = max(den, abs(hn * row[k]))
    if den == 0:
        return EigenResidual(n, num)
    return EigenResidual(n, num / den)
