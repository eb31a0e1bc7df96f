"""Canonical reparametrization, equivalence vectors, and q-inversion.

The weight-series coefficients take a closed product form after a change of
parameters.  Nine structurally different cases arise from the zero pattern
of (a1, a2, b1, b2):

    tag      zero parameters     active canonical data
    generic  none                e1, e2, e3, z1, z2
    c1       a1                  e1, e2, z2          (z1 = 0, e3 = 0)
    c2       b1                  e1, e2, z1          (z2 = 0, e3 = 0)
    c3       a1, b1              e1, e2              (z1 = z2 = e3 = 0)
    c4       a2                  p, pe1, pe2, z2
    c5       a2, b1              p, pe1, pe2         (z2 = pe2 = 0)
    c6       b2                  p, pe1, pe2, z1
    c7       a1, b2              p, pe1              (z1 = 0, pe2 = 0)
    c8       a2, b2              p, pe1              (pe2 = 1)

For the first four ("y-cases") the series factors are read off the cubic
1 - e1 u + e2 u^2 - e3 u^3 in u = q^i, where e1, e2, e3 are the elementary
symmetric functions of the underlying y parameters (never extracted
individually).  For the last five ("p-cases") the factors come from the
quadratic p - pe1 u + pe2 u^2; pe1 and pe2 are the p-scaled symmetric
functions (pe1 = p·e1, pe2 = p·e2 whenever p != 0), kept in scaled form so
the representation stays finite when p = 0.  The convenience fields e1, e2
are populated with pe1/p, pe2/p for p-cases when p != 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, List, Tuple

from .errors import InvalidCase, InvalidZeroPattern, NotApplicable
from .lattice import FamilyParameters
from .qnum import QContext

Y_CASES = ("generic", "c1", "c2", "c3")
P_CASES = ("c4", "c5", "c6", "c7", "c8")
ALL_CASES = Y_CASES + P_CASES


@dataclass(frozen=True)
class CanonicalParameters:
    """Case-tagged canonical form driving the series-coefficient formulas."""

    case: str
    e1: Any
    e2: Any
    e3: Any
    z1: Any
    z2: Any
    p: Any
    pe1: Any
    pe2: Any
    b0: Any
    b1: Any
    b2: Any
    q: Any

    def __post_init__(self) -> None:
        if self.case not in ALL_CASES:
            raise InvalidCase(f"unknown case tag {self.case!r}")

    def factor(self, i: int) -> Any:
        """The i-th series factor: the case's polynomial evaluated at q^i."""
        u = self.q ** i
        if self.case in Y_CASES:
            return 1 - self.e1 * u + self.e2 * u * u - self.e3 * u ** 3
        return self.p - self.pe1 * u + self.pe2 * u * u


@dataclass(frozen=True)
class EquivalenceFamily:
    """A vector with b1 = b2 = 0 and its recurrence-equivalent variants."""

    original: FamilyParameters
    variants: Tuple[FamilyParameters, ...]


def _zero_pattern_case(a1: Any, a2: Any, b1: Any, b2: Any) -> str:
    if a1 == 0 and a2 == 0:
        raise InvalidZeroPattern("a1 = a2 = 0 admits no canonical form")
    if b1 == 0 and b2 == 0:
        raise InvalidZeroPattern("b1 = b2 = 0 admits no canonical form")
    a_state = "both" if (a1 != 0 and a2 != 0) else ("a1" if a1 == 0 else "a2")
    b_state = "both" if (b1 != 0 and b2 != 0) else ("b1" if b1 == 0 else "b2")
    return {
        ("both", "both"): "generic",
        ("a1", "both"): "c1",
        ("both", "b1"): "c2",
        ("a1", "b1"): "c3",
        ("a2", "both"): "c4",
        ("a2", "b1"): "c5",
        ("both", "b2"): "c6",
        ("a1", "b2"): "c7",
        ("a2", "b2"): "c8",
    }[(a_state, b_state)]


def canonicalize(params: FamilyParameters, ctx: QContext) -> CanonicalParameters:
    """Map a parameter vector to its case-tagged canonical form.

    Zero detection is exact: a parameter is zero only when supplied as an
    exact zero (no epsilon snapping).
    """
    if not ctx.matches(params.q):
        raise ValueError("context base q differs from the family's q")
    q = ctx.q
    a1, a2 = ctx.real(params.a1), ctx.real(params.a2)
    b0, b1, b2 = ctx.real(params.b0), ctx.real(params.b1), ctx.real(params.b2)
    s1, s2 = ctx.real(params.s1), ctx.real(params.s2)
    case = _zero_pattern_case(a1, a2, b1, b2)
    zero = ctx.real(0)
    e1 = e2 = e3 = z1 = z2 = pe1 = pe2 = zero
    p = None
    if case in Y_CASES:
        z1 = q * a1 / a2
        z2 = q * b1 / b2
        e1 = z1 - b0 / b2 - s2 / (a2 * b2)
        e2 = z2 / q - b0 * z1 / b2 - q * s1 / (a2 * b2)
        e3 = z1 * z2 / q
    elif case in ("c4", "c5"):
        z2 = q * b1 / b2
        p = q - s2 / (a1 * b2)
        pe1 = -(q * s1 / a1 + q * b0) / b2
        pe2 = z2
    elif case in ("c6", "c7"):
        z1 = q * a1 / a2
        p = -(s2 / a2 + b0) / b1
        pe1 = (b1 - b0 * z1 - q * s1 / a2) / b1
        pe2 = z1
    else:  # c8
        p = -s2 / (q * a1 * b1)
        pe1 = -(s1 / a1 + b0) / b1
        pe2 = ctx.real(1)
    if p is not None and p != 0:
        e1, e2 = pe1 / p, pe2 / p
    return CanonicalParameters(case, e1, e2, e3, z1, z2, p, pe1, pe2, b0, b1, b2, q)


def expand(canonical: CanonicalParameters, a_scale: Any = 1) -> FamilyParameters:
    """Invert canonicalize: rebuild a parameter vector.

    a_scale is the free nonzero scale (a2 for cases with a2 != 0, a1
    otherwise) the canonical form forgets; canonicalize(expand(c)) == c.
    """
    if a_scale == 0:
        raise ValueError("a_scale must be nonzero")
    c = canonical
    q, b0, b2 = c.q, c.b0, c.b2
    # Promote the scale into the canonical form's arithmetic type so the
    # reconstruction runs at the precision the canonical data carries.
    A = (q / q) * a_scale
    if c.case in Y_CASES:
        a1 = c.z1 * A / q
        a2 = A
        b1 = c.z2 * c.b2 / q
        s1 = -(A / q) * ((c.e2 - c.z2 / q) * b2 + b0 * c.z1)
        s2 = -A * ((c.e1 - c.z1) * b2 + b0)
    elif c.case in ("c4", "c5"):
        a1, a2 = A, 0
        b1 = c.z2 * b2 / q
        s1 = -(A / q) * (c.pe1 * b2 + q * b0)
        s2 = A * b2 * (q - c.p)
    elif c.case in ("c6", "c7"):
        a1 = c.z1 * A / q
        a2 = A
        b1, b2 = c.b1, 0
        s1 = -(A / q) * (c.pe1 * c.b1 + b0 * c.z1 - c.b1)
        s2 = -A * (b0 + c.p * c.b1)
    elif c.case == "c8":
        a1, a2 = A, 0
        b1, b2 = c.b1, 0
        s1 = -A * (c.pe1 * c.b1 + b0)
        s2 = -q * c.p * A * c.b1
    else:
        raise InvalidCase(f"unknown case tag {c.case!r}")
    return FamilyParameters(a1, a2, b0, b1, b2, s1, s2, q)


def equivalent_vectors(
    params: FamilyParameters, ctx: QContext = None
) -> EquivalenceFamily:
    """Variants of a b1 = b2 = 0 vector with identical recurrence data.

    From P = (a1, a2, b0, 0, 0, s1, s2) the transported vectors are

        P1 = (a1, a2, b0, -(b0 a2 + s2)/a2, 0,
              (q s1 - b0 a2 - s2)/q, -b0 a2)          when a2 != 0,
        P2 = (a1, a2, b0, 0, -(b0 a1 + s1)/a1,
              -b0 a1, s2 - q a1 b0 - q s1)            when a1 != 0.

    The derived fields are quotients, so they inherit rounding from the
    arithmetic used to form them.  Pass ctx to evaluate them at the working
    precision these vectors will later be used at; without it the ambient
    mpmath precision applies to mpf inputs.
    """
    if params.b1 != 0 or params.b2 != 0:
        raise NotApplicable("equivalence vectors require b1 = b2 = 0")
    if ctx is not None and not ctx.matches(params.q):
        raise ValueError("context base q differs from the family's q")
    conv = ctx.real if ctx is not None else (lambda t: t)
    a1, a2, b0 = conv(params.a1), conv(params.a2), conv(params.b0)
    s1, s2, q = conv(params.s1), conv(params.s2), conv(params.q)
    variants: List[FamilyParameters] = []
    if a2 != 0:
        variants.append(
            FamilyParameters(
                a1, a2, b0,
                -(b0 * a2 + s2) / a2, 0,
                (q * s1 - b0 * a2 - s2) / q, -b0 * a2,
                q, params.finite_n,
            )
        )
    if a1 != 0:
        variants.append(
            FamilyParameters(
                a1, a2, b0,
                0, -(b0 * a1 + s1) / a1,
                -b0 * a1, s2 - q * a1 * b0 - q * s1,
                q, params.finite_n,
            )
        )
    return EquivalenceFamily(params, tuple(variants))


def invert_q(params: FamilyParameters) -> FamilyParameters:
    """The q -> 1/q involution: swap a1 <-> a2, b1 <-> b2, s1 <-> s2.

    Leaves every x_k, h_k, d_k, g_k — hence all recurrence coefficients and
    weights — unchanged.
    """
    return FamilyParameters(
        params.a2, params.a1, params.b0, params.b2, params.b1,
        params.s2, params.s1, 1 / params.q, params.finite_n,
    )
