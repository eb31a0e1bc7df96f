"""End-to-end numerical verification of the discrete orthogonality.

Reconstructs the generalized moments from a weight table and assembles the
Gram matrix G_{nm} = sum_k u_n(x_k) u_m(x_k) r_k, which must be diagonal
with nonzero diagonal K_n for a quasi-definite family.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, List, Optional, Tuple

import mpmath

from .connection import moments as moments_op
from .connection import recurrence_coefficients
from .errors import DegenerateNorm, InsufficientNodes
from .lattice import (
    FamilyParameters,
    SequenceSet,
    build_sequences,
    newton_eval,
    validate_family,
)
from .qnum import QContext
from .weights import WeightTable


@dataclass(frozen=True)
class OrthogonalityReport:
    """Gram matrix diagnostics for degrees 0..nmax.

    Two scalings of the off-diagonal defect are reported.  The mass-scaled
    residual |G_nm| / W_nm, with the noise mass
    W_nm = sum_k (A_n(x_k) |u_m(x_k)| + |u_n(x_k)| A_m(x_k)) |r_k| built
    from the first-order rounding amplitude A_n of the recurrence sweep
    (see gram_matrix), measures how completely the signed node sums cancel
    relative to the rounding floor of their own accumulation — the quantity
    a fixed-precision computation can certify, and the one verification
    thresholds apply to.  The norm-scaled residual |G_nm| / sqrt(|K_n K_m|)
    additionally divides out the (often tiny) norms; it inherits the
    quadrature's condition number, which grows like q^(-2 n^2) / |K_n| on
    unbounded lattices, and is reported for diagnostics, not gated.
    mass holds the diagonal noise masses W_nn.
    """

    nmax: int
    node_count_used: int
    gram: Tuple[Tuple[Any, ...], ...]
    K: Tuple[Any, ...]
    mass: Tuple[Any, ...]
    max_offdiag_residual: Any
    max_offdiag_norm_residual: Any
    moment_residuals: Tuple[Any, ...]
    favard_ok: bool


def _tiny(ctx: QContext) -> Any:
    # smallest-normal-style guard against division by an exactly zero moment
    return ctx.real("1e-300") if ctx.is_double else ctx.real(10) ** (-8 * ctx.precision)


def moment_reconstruction(
    table: WeightTable, seq: SequenceSet, kmax: int, ctx: QContext
) -> Tuple[Any, ...]:
    """Residuals |sum_j v_k(x_j) r_j - m_k| / max(|m_k|, guard), k <= kmax.

    For infinite node sets the last five table entries must contribute
    below tolerance for every k (the terms decay super-geometrically);
    otherwise InsufficientNodes is raised.  Finite tables are summed over
    their N+1 active nodes exactly.
    """
    if kmax < 0:
        raise ValueError("kmax must be nonnegative")
    n_nodes = len(table.nodes)
    use = n_nodes if table.finite_node_count is None else min(
        table.finite_node_count, n_nodes
    )
    if table.finite_node_count is not None and n_nodes < table.finite_node_count:
        raise InsufficientNodes(
            f"finite family needs {table.finite_node_count} nodes; table has {n_nodes}"
        )
    need = max(kmax + 1, use)
    if seq.max_index < need:
        seq = seq.extended(need)
    mk = moments_op(seq, kmax, ctx)
    guard = _tiny(ctx)
    residuals: List[Any] = []
    for k in range(kmax + 1):
        total = ctx.real(0)
        comp = ctx.real(0)
        tail_terms: List[Any] = []
        for j in range(use):
            term = newton_eval(seq, k, table.nodes[j]) * table.weights[j]
            y = term - comp
            t = total + y
            comp = (t - total) - y
            total = t
            tail_terms.append(abs(term))
        if table.finite_node_count is None:
            scale = max(abs(mk[k]), abs(total), guard)
            if use < 5 or any(t > ctx.tol * scale for t in tail_terms[-5:]):
                raise InsufficientNodes(
                    f"tail of the moment sum for k = {k} not below tolerance "
                    f"within {use} nodes"
                )
        residuals.append(abs(total - mk[k]) / max(abs(mk[k]), guard))
    return tuple(residuals)


def gram_matrix(
    params: FamilyParameters, table: WeightTable, nmax: int, ctx: QContext
) -> OrthogonalityReport:
    """Assemble the Gram matrix over the table's nodes.

    Polynomial values come from a single three-term-recurrence sweep per
    node; entries use compensated accumulation.  Alongside G the routine
    accumulates the noise mass
    W_nm = sum_k (A_n(x_k) |u_m(x_k)| + |u_n(x_k)| A_m(x_k)) |r_k|,
    where A_n is the first-order rounding amplitude of the recurrence
    sweep, A_{m+1} = |x - beta_m| A_m + |alpha_m| A_{m-1} + |t1| + |t2|
    (t1, t2 the two products formed at the step) with A_0 = 1: each
    computed u_n carries absolute error at most eps * A_n to first
    order, so eps * W_nm is the rounding floor of the computed entry
    and the scaled residuals are certified against it.  When a u_n is
    itself noise-dominated (eps * A_n exceeds the true value) the mixed
    form degrades gracefully: |u_n| then reflects the noise scale and
    the floor tracks the actual accumulation error to second order.
    For infinite node sets the sum stops once
    |r_k| max(1, |x_k|)^{2 nmax} < tol * max(1, sum |r|) holds for 5
    consecutive nodes (the weights decay super-geometrically while node
    magnitudes grow like q^{-k}); the right-hand scale is the mass of the
    smallest Gram entry, G_00, so the neglected tail is below tolerance
    for every entry, not merely the largest one.  Nodes whose weight is
    exactly zero (underflow of a far tail weight) contribute nothing and
    are skipped without evaluating the polynomials there.
    """
    if nmax < 0:
        raise ValueError("nmax must be nonnegative")
    rc = recurrence_coefficients(params, max(nmax, 1), "direct", ctx)
    n_nodes = len(table.nodes)
    finite = table.finite_node_count is not None
    use_cap = min(table.finite_node_count, n_nodes) if finite else n_nodes
    if finite and n_nodes < table.finite_node_count:
        raise InsufficientNodes(
            f"finite family needs {table.finite_node_count} nodes; table has {n_nodes}"
        )
    size = nmax + 1
    G = [[ctx.real(0)] * size for _ in range(size)]
    Gc = [[ctx.real(0)] * size for _ in range(size)]
    W = [[ctx.real(0)] * size for _ in range(size)]
    one = ctx.real(1)
    rmass = ctx.real(0)
    used = 0
    quiet = 0
    for k in range(use_cap):
        xk, rk = ctx.real(table.nodes[k]), ctx.real(table.weights[k])
        if rk == 0:
            used += 1
            if not finite:
                quiet += 1
                if quiet >= 5:
                    break
            continue
        rmass += abs(rk)
        u = [one]
        amp = [one]
        for m in range(nmax):
            t1 = (xk - rc.beta(m)) * u[-1]
            t2 = rc.alpha(m) * u[-2] if m >= 1 else ctx.real(0)
            u.append(t1 - t2)
            amp.append(
                abs(xk - rc.beta(m)) * amp[-1]
                + (abs(rc.alpha(m)) * amp[-2] if m >= 1 else 0)
                + abs(t1)
                + abs(t2)
            )
        for n in range(size):
            un_r = u[n] * rk
            an_r = amp[n] * abs(rk)
            aun_r = abs(un_r)
            for m in range(n, size):
                term = un_r * u[m]
                y = term - Gc[n][m]
                t = G[n][m] + y
                Gc[n][m] = (t - G[n][m]) - y
                G[n][m] = t
                W[n][m] += an_r * abs(u[m]) + aun_r * amp[m]
        used += 1
        if not finite:
            # Log-space comparison: the node-magnitude power overflows
            # doubles long before the criterion itself becomes moot.
            lhs = mpmath.log(abs(rk)) + (2 * nmax) * mpmath.log(max(one, abs(xk)))
            if lhs < mpmath.log(ctx.tol * max(one, rmass)):
                quiet += 1
                if quiet >= 5:
                    break
            else:
                quiet = 0
    if not finite and quiet < 5:
        raise InsufficientNodes(
            f"node tail criterion not met within {n_nodes} nodes (degree {nmax})"
        )
    for n in range(size):
        for m in range(n + 1, size):
            G[m][n] = G[n][m]
    K = tuple(G[n][n] for n in range(size))
    # A norm is degenerate when it cancels to the rounding floor of its own
    # accumulation, |K_n| <= 1e3 * eps * W_nn: either the functional truly
    # degenerates at degree n or this precision cannot resolve the norm —
    # raising precision distinguishes the two.  (A global max_m |K_m| scale
    # would falsely flag legitimate small norms on families whose K_n span
    # many orders of magnitude.)
    for n, v in enumerate(K):
        if abs(v) <= 1000 * ctx.eps * W[n][n]:
            raise DegenerateNorm(
                f"|K_{n}| = {float(abs(v)):.3e} at or below the rounding floor "
                f"of its accumulation ({float(ctx.eps * W[n][n]):.3e}); the "
                "functional is degenerate there or the precision is too low"
            )
    off_mass = ctx.real(0)
    off_norm = ctx.real(0)
    for n in range(size):
        for m in range(n + 1, size):
            g = abs(G[n][m])
            off_mass = max(off_mass, g / W[n][m])
            off_norm = max(off_norm, g / (abs(K[n]) * abs(K[m])) ** ctx.real(0.5))
    seq = build_sequences(params, max(use_cap, nmax + 1), ctx)
    moment_residuals = moment_reconstruction(table, seq, nmax, ctx)
    # Favard scan: each alpha_n must be resolvably nonzero against the local
    # cancellation scale of the bracket that defines it.  Comparing against
    # max_n |alpha_n| instead would falsely flag families whose alphas grow
    # over many orders of magnitude (e.g. q-Laguerre at small q).
    scan = validate_family(params, nmax, ctx)
    favard_ok = not any(v.kind == "vanishing-alpha" for v in scan.violations)
    return OrthogonalityReport(
        nmax,
        used,
        tuple(tuple(row) for row in G),
        K,
        tuple(W[n][n] for n in range(size)),
        off_mass,
        off_norm,
        moment_residuals,
        favard_ok,
    )
