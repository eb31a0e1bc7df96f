"""Catalog of named polynomial families from the q-Askey scheme.

Each preset maps its conventional parameters (as in Koekoek, Lesky and
Swarttouw, "Hypergeometric Orthogonal Polynomials and Their q-Analogues",
Springer 2010 — cited below by chapter) to a seven-parameter vector.  The
free scale every vector carries (the arbitrary nonzero a1 or a2) defaults
to 1 and is exposed as a trailing optional argument; it cancels in all
recurrence coefficients and weights.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Dict, Optional, Sequence, Tuple

from .errors import ConstraintViolation
from .lattice import FamilyParameters
from .qnum import QContext


@dataclass(frozen=True)
class PresetDescriptor:
    """One catalog entry.

    free_args lists the required arguments with a human-readable constraint;
    optional_args the trailing optional ones (defaults applied positionally).
    finite_N, when not None, maps the args to the termination index N.
    """

    name: str
    free_args: Tuple[Tuple[str, str], ...]
    optional_args: Tuple[Tuple[str, str, Any], ...]
    citation: str
    builder: Callable[..., FamilyParameters]
    finite_N: Optional[Callable[..., int]] = None


def _nonzero(value: Any, name: str, preset: str) -> Any:
    if value == 0:
        raise ConstraintViolation(f"{preset}: argument {name} must be nonzero")
    return value


def _positive_int(value: Any, name: str, preset: str) -> int:
    if value != int(value) or int(value) < 1:
        raise ConstraintViolation(f"{preset}: argument {name} must be a positive integer")
    return int(value)


def _askey_wilson(a, b, c, d, scale, q, ctx):
    for nm, v in (("a", a), ("b", b), ("c", c), ("d", d)):
        _nonzero(v, nm, "askey_wilson")
    _nonzero(scale, "scale", "askey_wilson")
    a, b, c, d = ctx.real(a), ctx.real(b), ctx.real(c), ctx.real(d)
    A = ctx.real(scale)
    return FamilyParameters(
        A * a * b * c * d / q, A, 0,
        a / 2, 1 / (2 * a),
        -(A * a / (2 * q)) * (b * c + b * d + c * d - 1),
        -(A / 2) * (b + c + d - b * c * d),
        q,
    )


def _continuous_big_q_hermite(a, scale, q, ctx):
    _nonzero(a, "a", "continuous_big_q_hermite")
    _nonzero(scale, "scale", "continuous_big_q_hermite")
    a = ctx.real(a)
    A = ctx.real(scale)
    return FamilyParameters(0, A, 0, a / 2, 1 / (2 * a), A * a / (2 * q), 0, q)


def _discrete_q_hermite_1(scale, q, ctx):
    _nonzero(scale, "scale", "discrete_q_hermite_1")
    A = ctx.real(scale)
    return FamilyParameters(0, A, 0, 1, 0, A / q, A, q)


def _little_q_jacobi_v1(a, b, scale, q, ctx):
    _nonzero(a, "a", "little_q_jacobi_v1")
    _nonzero(b, "b", "little_q_jacobi_v1")
    _nonzero(scale, "scale", "little_q_jacobi_v1")
    a, b, A = ctx.real(a), ctx.real(b), ctx.real(scale)
    return FamilyParameters(
        a * b * q * A, A, 0, 0, 1 / (q * b), 0, (q * a - 1) * A, q
    )


def _little_q_jacobi_v2(a, b, scale, q, ctx):
    _nonzero(a, "a", "little_q_jacobi_v2")
    _nonzero(b, "b", "little_q_jacobi_v2")
    _nonzero(scale, "scale", "little_q_jacobi_v2")
    a, b, A = ctx.real(a), ctx.real(b), ctx.real(scale)
    return FamilyParameters(
        a * b * q * A, A, 0, 1, 0, -(q * a - 1) * A / q, 0, q
    )


def _q_laguerre(alpha, b0, scale, q, ctx):
    _nonzero(scale, "scale", "q_laguerre")
    if b0 not in (0, 1):
        raise ConstraintViolation("q_laguerre: argument b0 must be 0 or 1")
    alpha = ctx.real(alpha)
    if ctx.q < 0 and alpha != int(alpha):
        raise ConstraintViolation(
            "q_laguerre: non-integer alpha requires q > 0 (q^(-alpha) must be real)"
        )
    A = ctx.real(scale)
    return FamilyParameters(
        A, 0, b0, 0, -1, 0, A * (q ** (-alpha) - q), q
    )


def _dual_q_hahn(variant, gamma, delta, N, scale, q, ctx):
    name = f"dual_q_hahn_v{variant}"
    _nonzero(gamma, "gamma", name)
    _nonzero(delta, "delta", name)
    _nonzero(scale, "scale", name)
    N = _positive_int(N, "N", name)
    g, d, A = ctx.real(gamma), ctx.real(delta), ctx.real(scale)
    qN = q ** (-N)
    if variant == 1:
        return FamilyParameters(
            0, A, 0, qN, g * d * q ** (N + 1),
            A * qN * (1 / q - g), -q * A * g * (1 + d),
            q, finite_n=N,
        )
    if variant == 2:
        return FamilyParameters(
            0, A, 0, q * g, d,
            A * g * (1 - qN), -A * (g * d * q + qN),
            q,
        )
    return FamilyParameters(
        0, A, 0, g * d * q, 1,
        A * g * (d - qN), -A * (g * q + qN),
        q, finite_n=N,
    )


_CATALOG: Tuple[PresetDescriptor, ...] = (
    PresetDescriptor(
        "askey_wilson",
        (("a", "nonzero"), ("b", "nonzero"), ("c", "nonzero"), ("d", "nonzero")),
        (("scale", "nonzero", 1),),
        "KLS ch. 14.1 (Askey-Wilson)",
        _askey_wilson,
    ),
    PresetDescriptor(
        "continuous_big_q_hermite",
        (("a", "nonzero"),),
        (("scale", "nonzero", 1),),
        "KLS ch. 14.18 (continuous big q-Hermite)",
        _continuous_big_q_hermite,
    ),
    PresetDescriptor(
        "discrete_q_hermite_1",
        (),
        (("scale", "nonzero", 1),),
        "KLS ch. 14.28 (discrete q-Hermite I)",
        _discrete_q_hermite_1,
    ),
    PresetDescriptor(
        "little_q_jacobi_v1",
        (("a", "nonzero"), ("b", "nonzero")),
        (("scale", "nonzero", 1),),
        "KLS ch. 14.12 (little q-Jacobi), q-inverse lattice",
        _little_q_jacobi_v1,
    ),
    PresetDescriptor(
        "little_q_jacobi_v2",
        (("a", "nonzero"), ("b", "nonzero")),
        (("scale", "nonzero", 1),),
        "KLS ch. 14.12 (little q-Jacobi), q-power lattice",
        _little_q_jacobi_v2,
    ),
    PresetDescriptor(
        "q_laguerre",
        (("alpha", "real"),),
        (("b0", "0 or 1", 1), ("scale", "nonzero", 1)),
        "KLS ch. 14.21 (q-Laguerre)",
        _q_laguerre,
    ),
    PresetDescriptor(
        "dual_q_hahn_v1",
        (("gamma", "nonzero"), ("delta", "nonzero"), ("N", "positive integer")),
        (("scale", "nonzero", 1),),
        "KLS ch. 14.7 (dual q-Hahn), finite lattice",
        lambda g, d, N, s, q, ctx: _dual_q_hahn(1, g, d, N, s, q, ctx),
        lambda g, d, N, s: int(N),
    ),
    PresetDescriptor(
        "dual_q_hahn_v2",
        (("gamma", "nonzero"), ("delta", "nonzero"), ("N", "positive integer")),
        (("scale", "nonzero", 1),),
        "KLS ch. 14.7 (dual q-Hahn), infinite lattice",
        lambda g, d, N, s, q, ctx: _dual_q_hahn(2, g, d, N, s, q, ctx),
    ),
    PresetDescriptor(
        "dual_q_hahn_v3",
        (("gamma", "nonzero"), ("delta", "nonzero"), ("N", "positive integer")),
        (("scale", "nonzero", 1),),
        "KLS ch. 14.7 (dual q-Hahn), mirrored finite lattice",
        lambda g, d, N, s, q, ctx: _dual_q_hahn(3, g, d, N, s, q, ctx),
        lambda g, d, N, s: int(N),
    ),
)


def list_presets() -> Tuple[PresetDescriptor, ...]:
    """The full catalog, in stable order."""
    return _CATALOG


def _lookup(name: str) -> PresetDescriptor:
    for desc in _CATALOG:
        if desc.name == name:
            return desc
    known = ", ".join(d.name for d in _CATALOG)
    raise ConstraintViolation(f"unknown preset {name!r}; known presets: {known}")


def instantiate(
    name: str, args: Sequence[Any], q: Any, ctx: QContext
) -> FamilyParameters:
    """Build a preset family from positional args (optionals may be omitted)."""
    desc = _lookup(name)
    n_req, n_opt = len(desc.free_args), len(desc.optional_args)
    args = list(args)
    if not n_req <= len(args) <= n_req + n_opt:
        expected = ", ".join(a for a, _ in desc.free_args)
        optional = ", ".join(f"{a}={d}" for a, _, d in desc.optional_args)
        raise ConstraintViolation(
            f"{name} takes arguments ({expected}"
            + (f"[, {optional}]" if optional else "")
            + f"); got {len(args)}"
        )
    full = args + [d for _, _, d in desc.optional_args[len(args) - n_req:]]
    if not ctx.matches(q):
        raise ValueError("context base q differs from the requested q")
    return desc.builder(*full, ctx.q, ctx)
