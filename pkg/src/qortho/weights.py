"""Discrete-orthogonality weights as convergent q-series.

The weight at node x_k is r_k = sum_{j >= k} rho(k, j), where rho(k, j) is
the coefficient of t^j in the series f_k(t) and has a closed product form
in the canonical parameters.  With mu(0) = 1 and, for k >= 1,

    mu(k) = (-1)^k q^{binom(k,2)} / (q; q)_k
            * (1 - q^{2k-1} z2) / (1 - q^{k-1} z2),

(the z2 correction factor being active only when z2 != 0), the coefficient
is, per case, mu(k) / (q; q)_{j-k} times

    y-cases (generic, c1, c2, c3):
        Y_j q^j / ((z1; q)_j (q^k z2; q)_j)
    c4, c5:
        S_j / (q^k z2; q)_j
    c6, c7:
        S_j q^{-k(j-1)}
    c8:
        S_j (-1)^j q^{-binom(j,2)} q^{-k(j-1)}

with Y_j = prod_{i<j} (1 - e1 q^i + e2 q^{2i} - e3 q^{3i}) and
S_j = prod_{i<j} (p - pe1 q^i + pe2 q^{2i}).

A family is finite when some product factor vanishes exactly at i = N
(exact-parameter mode) or when metadata declares N (numeric mode); then
rho(k, j) = 0 for every j > N and all series terminate.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Iterator, Optional, Sequence, Tuple

import mpmath

from .errors import NoConvergence, ZeroDenominator
from .lattice import FamilyParameters, SequenceSet, build_sequences, newton_node_derivative
from .qnum import QContext, SeriesResult, binom2, q_pochhammer, sum_tail_bounded
from .reparam import CanonicalParameters, Y_CASES, canonicalize


@dataclass(frozen=True)
class RhoGenerator:
    """Canonical parameters plus the termination index N (None = infinite)."""

    canonical: CanonicalParameters
    termination_index: Optional[int] = None


def rho_generator(
    canonical: CanonicalParameters,
    termination_index: Optional[int] = None,
    scan_limit: int = 256,
) -> RhoGenerator:
    """Wrap canonical parameters, detecting termination.

    A declared termination_index (preset metadata, numeric mode) wins;
    otherwise indices 0..scan_limit are scanned for an exactly vanishing
    series factor (exact-parameter mode).  Numeric near-zeros never
    truncate: only exact zeros terminate.
    """
    if termination_index is None:
        for i in range(scan_limit + 1):
            if canonical.factor(i) == 0:
                termination_index = i
                break
    return RhoGenerator(canonical, termination_index)


def generator_for(params: FamilyParameters, ctx: QContext) -> RhoGenerator:
    """Canonicalize and wrap in one step, honouring params.finite_n."""
    return rho_generator(canonicalize(params, ctx), params.finite_n)


def mu(canonical: CanonicalParameters, k: int) -> Any:
    """The prefactor mu(k); mu(0) = 1 by convention.

    Storing z2 = 0 when inactive makes the correction factor collapse to 1
    exactly in the cases without it.  Evaluated in the arithmetic the
    canonical values already carry.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    if k == 0:
        return 1
    q, z2 = canonical.q, canonical.z2
    den_c = 1 - q ** (k - 1) * z2
    if den_c == 0:
        raise ZeroDenominator(f"resonance: q^{k - 1} z2 = 1")
    poch = 1 - q
    qi = q
    for _ in range(k - 1):
        qi *= q
        poch *= 1 - qi
    base = (-1) ** k * q ** binom2(k) / poch
    return base * (1 - q ** (2 * k - 1) * z2) / den_c


def rho(gen: RhoGenerator, k: int, j: int, ctx: QContext) -> Any:
    """Series coefficient rho(k, j) for j >= k >= 0; exact 0 past termination."""
    if not 0 <= k <= j:
        raise ValueError("rho(k, j) requires j >= k >= 0")
    c = gen.canonical
    N = gen.termination_index
    if N is not None and j > N:
        return ctx.real(0)
    q = ctx.q
    out = _mu_val(c, k, ctx) / q_pochhammer(q, j - k, ctx)
    prod = ctx.real(1)
    for i in range(j):
        prod *= _factor(c, i, ctx)
    if c.case in Y_CASES:
        den = q_pochhammer(c.z1, j, ctx) * q_pochhammer(q ** k * c.z2, j, ctx)
        if den == 0:
            raise ZeroDenominator("resonant z value in rho")
        out *= prod * q ** j / den
    elif c.case in ("c4", "c5"):
        den = q_pochhammer(q ** k * c.z2, j, ctx)
        if den == 0:
            raise ZeroDenominator("resonant z value in rho")
        out *= prod / den
    elif c.case in ("c6", "c7"):
        den = q_pochhammer(c.z1, j, ctx)
        if den == 0:
            raise ZeroDenominator("resonant z value in rho")
        out *= prod * q ** (-k * (j - 1)) / den
    else:  # c8
        out *= prod * (-1) ** j * q ** (-binom2(j)) * q ** (-k * (j - 1))
    return out


def _factor(c: CanonicalParameters, i: int, ctx: QContext) -> Any:
    u = ctx.qpow(i)
    if c.case in Y_CASES:
        return 1 - ctx.real(c.e1) * u + ctx.real(c.e2) * u * u - ctx.real(c.e3) * u ** 3
    return ctx.real(c.p) - ctx.real(c.pe1) * u + ctx.real(c.pe2) * u * u


def _mu_val(c: CanonicalParameters, k: int, ctx: QContext) -> Any:
    if k == 0:
        return ctx.real(1)
    q = ctx.q
    z2 = ctx.real(c.z2)
    den_c = 1 - q ** (k - 1) * z2
    if den_c == 0:
        raise ZeroDenominator(f"resonance: q^{k - 1} z2 = 1")
    return (
        ctx.real((-1) ** k)
        * q ** binom2(k)
        / q_pochhammer(q, k, ctx)
        * (1 - q ** (2 * k - 1) * z2)
        / den_c
    )


def rho_raw(seq: SequenceSet, moments: Sequence[Any], k: int, j: int) -> Any:
    """Definition-level oracle m_j / v'_{j+1}(x_k) for every case formula."""
    if not 0 <= k <= j:
        raise ValueError("rho_raw(k, j) requires j >= k >= 0")
    return moments[j] / newton_node_derivative(seq, j, k)


def _ratio_limit(gen: RhoGenerator, k: int, ctx: QContext) -> Any:
    """Limit of |rho(k, j+1)/rho(k, j)| as j grows (None when terminating)."""
    if gen.termination_index is not None:
        return None
    c = gen.canonical
    aq = abs(ctx.q)
    if c.case in Y_CASES:
        return aq
    p = abs(ctx.real(c.p))
    if c.case in ("c4", "c5"):
        return p
    if c.case in ("c6", "c7"):
        return p * aq ** (-k)
    # c8: ratio ~ |factor(j)| q^{-j-k}; factor -> p
    if p != 0:
        return None  # grows without bound
    pe1 = abs(ctx.real(c.pe1))
    if pe1 != 0:
        return pe1 * aq ** (-k)
    return abs(ctx.real(c.pe2)) * aq ** (-k) * aq  # ~ |pe2| q^{j-k} -> 0


def _series_terms(gen: RhoGenerator, k: int, ctx: QContext) -> Iterator[Any]:
    """Yield rho(k, j) for j = k, k+1, ... with O(1) work per term."""
    c = gen.canonical
    N = gen.termination_index
    q = ctx.q
    term = rho(gen, k, k, ctx)
    j = k
    qj = ctx.qpow(j)
    qjk = ctx.real(1)  # q^{j-k}
    z2 = ctx.real(c.z2)
    z1 = ctx.real(c.z1)
    qk_neg = ctx.qpow(-k)
    qk_pos = ctx.qpow(k)
    while True:
        yield term
        if N is not None and j + 1 > N:
            return
        fac = _factor(c, j, ctx)
        den = 1 - qjk * q
        numer = fac
        if c.case in Y_CASES:
            den *= (1 - z1 * qj) * (1 - z2 * qj * qk_pos)
            numer *= q
        elif c.case in ("c4", "c5"):
            den *= 1 - z2 * qj * qk_pos
        elif c.case in ("c6", "c7"):
            den *= 1 - z1 * qj
            numer *= qk_neg
        else:  # c8
            den *= qj
            numer *= -qk_neg
        if den == 0:
            raise ZeroDenominator("resonant z value in series step")
        term = term * numer / den
        if fac == 0:
            return  # exact termination discovered mid-series
        j += 1
        qj *= q
        qjk *= q


def weight(
    gen: RhoGenerator, seq: SequenceSet, k: int, ctx: QContext
) -> Tuple[Any, SeriesResult]:
    """The weight r_k = f_k(1), summed with the tail-bounded engine.

    Requires |q| < 1; for |q| > 1 apply the q -> 1/q inversion first (it
    leaves nodes and weights unchanged).
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    if abs(ctx.q) >= 1:
        raise ValueError("weight summation requires |q| < 1; invert q first")
    N = gen.termination_index
    if N is not None and k > N:
        zero = ctx.real(0)
        return zero, SeriesResult(zero, 0, zero, True)
    limit = _ratio_limit(gen, k, ctx)
    if limit is None and N is None:
        raise NoConvergence(
            "series coefficients grow without bound (nonterminating c8 with p != 0)"
        )
    if limit is not None and limit >= 1:
        raise NoConvergence(
            f"series coefficient ratio tends to {float(limit):.6g} >= 1; "
            "the weight series diverges at these parameters"
        )
    result = sum_tail_bounded(_series_terms(gen, k, ctx), k, ctx)
    return result.value, result


@dataclass(frozen=True)
class WeightTable:
    """Nodes, weights, and per-entry summation diagnostics."""

    nodes: Tuple[Any, ...]
    weights: Tuple[Any, ...]
    diagnostics: Tuple[SeriesResult, ...]
    finite: bool
    finite_node_count: Optional[int] = None


def _coerce_back(x: Any, ctx: QContext) -> Any:
    """Round a guard-precision value to the working precision."""
    if ctx.is_double:
        try:
            return float(x)
        except OverflowError:
            return float("inf")
    return ctx.real(x)


def _guard_need(value: Any, res: SeriesResult, tol: Any, eps: Any) -> int:
    """Extra digits needed so the peak term's rounding noise sits below
    tol relative to the summed value; 0 when the value is already clean.

    When the computed value is itself below the noise (peak * eps) the
    true value is unresolved and the estimate uses the noise as the
    scale; the caller re-checks after boosting, so successive calls
    escalate geometrically until the value emerges from the noise.
    """
    noise = res.peak * eps
    if noise == 0 or noise <= tol * abs(value):
        return 0
    scale = max(abs(value), noise)
    return int(mpmath.ceil(float(mpmath.log10(res.peak / scale)))) + 12


def weight_table(params: FamilyParameters, K: int, ctx: QContext) -> WeightTable:
    """Weights at nodes x_0..x_K; finite families have N+1 active nodes.

    Weights whose series cancel interiorly (peak term far above the result,
    so the rounding noise of the peak would exceed tol relative to the
    value) are re-evaluated with enough guard digits to push that noise
    below tolerance, then rounded back to the working precision.  The guard
    pass restarts from the family parameters, which the table treats as
    exact, so the re-evaluated weight is accurate for the stored family.
    The same pass rescues series whose terms overflow or stall at the
    working precision's floating range.
    """
    if K < 0:
        raise ValueError("K must be nonnegative")
    seq = build_sequences(params, K, ctx)
    gen = generator_for(params, ctx)
    boost: Optional[Tuple[QContext, RhoGenerator, SequenceSet]] = None
    nodes = []
    vals = []
    diags = []
    for k in range(K + 1):
        try:
            value, res = weight(gen, seq, k, ctx)
            need = _guard_need(value, res, ctx.tol, ctx.eps)
        except (OverflowError, NoConvergence):
            # Retry with guard digits; a genuinely divergent series fails
            # its ratio guard again there and the error propagates.
            value = res = None
            need = ctx.precision + 30
        if need:
            dps = ctx.precision
            for _ in range(8):
                dps += need
                if boost is None or boost[0].precision < dps:
                    bctx = QContext(params.q, precision=dps, max_terms=ctx.max_terms)
                    boost = (
                        bctx,
                        generator_for(params, bctx),
                        build_sequences(params, K, bctx),
                    )
                bctx, bgen, bseq = boost
                dps = max(dps, bctx.precision)
                bval, bres = weight(bgen, bseq, k, bctx)
                need = _guard_need(bval, bres, ctx.tol, bctx.eps)
                if not need or bval == 0:
                    break
            value = _coerce_back(bval, ctx)
            res = SeriesResult(
                value,
                bres.terms_used,
                _coerce_back(bres.tail_bound, ctx),
                bres.terminated,
                _coerce_back(bres.peak, ctx),
            )
        nodes.append(seq.x[k])
        vals.append(value)
        diags.append(res)
    N = gen.termination_index
    return WeightTable(
        tuple(nodes),
        tuple(vals),
        tuple(diags),
        N is not None,
        None if N is None else N + 1,
    )


@dataclass(frozen=True)
class CoefficientCheckReport:
    """Scaled defects of the coefficient identities up to jmax."""

    jmax: int
    case: str
    sum_rule_max: Any
    ratio_defect_max: Optional[Any]
    hadamard_defect_max: Optional[Any]


def coefficient_checks(
    gen: RhoGenerator, seq: SequenceSet, jmax: int, ctx: QContext
) -> CoefficientCheckReport:
    """Check the sum rule, the k-recurrence, and the Hadamard identity.

    The sum rule sum_{k<=j} rho(k, j) = 0 holds in every case; the two
    z2-bearing identities are stated for the cases carrying the z2
    correction factor (generic, c1, c4) and are skipped elsewhere rather
    than assumed.  Findings are data; nothing is raised.
    """
    c = gen.canonical
    q = ctx.q
    zero = ctx.real(0)
    table = [[rho(gen, k, j, ctx) for k in range(j + 1)] for j in range(jmax + 1)]
    sum_max = zero
    for j in range(1, jmax + 1):
        row = table[j]
        rowmax = max(abs(r) for r in row)
        if rowmax == 0:
            continue
        total = zero
        comp = zero
        for r in row:
            y = r - comp
            t = total + y
            comp = (t - total) - y
            total = t
        sum_max = max(sum_max, abs(total) / rowmax)

    if c.case not in ("generic", "c1", "c4"):
        return CoefficientCheckReport(jmax, c.case, sum_max, None, None)

    z2 = ctx.real(c.z2)
    ratio_max = zero
    had_max = zero
    for j in range(1, jmax + 1):
        for k in range(j):
            actual = table[j][k + 1]
            if actual == 0:
                continue
            den = (
                (1 - q ** (k + 1))
                * (1 - q ** (2 * k - 1) * z2)
                * (1 - q ** (j + k) * z2)
            )
            if den == 0:
                continue
            pred = (
                -(q ** k)
                * (1 - q ** (j - k))
                * (1 - q ** (2 * k + 1) * z2)
                * (1 - q ** (k - 1) * z2)
                / den
                * table[j][k]
            )
            ratio_max = max(ratio_max, abs(pred - actual) / abs(actual))
        for k in range(1, j + 1):
            actual = table[j][k]
            if actual == 0:
                continue
            den = q_pochhammer(q ** j * z2, k, ctx)
            if den == 0:
                continue
            had = (
                table[j][0]
                * _mu_val(c, k, ctx)
                * q_pochhammer(z2, k, ctx)
                * q_pochhammer(q ** (j - k + 1), k, ctx)
                / den
            )
            had_max = max(had_max, abs(had - actual) / abs(actual))
    return CoefficientCheckReport(jmax, c.case, sum_max, ratio_max, had_max)
