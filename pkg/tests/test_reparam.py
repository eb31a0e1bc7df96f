"""Canonical reparametrization, equivalence vectors, q-inversion."""

import random

import mpmath
import pytest

from qortho import (
    FamilyParameters,
    InvalidZeroPattern,
    NotApplicable,
    QContext,
    build_sequences,
    canonicalize,
    equivalent_vectors,
    expand,
    instantiate,
    invert_q,
)
from qortho.reparam import ALL_CASES, P_CASES, Y_CASES, CanonicalParameters

# zero masks (a1, a2, b1, b2) producing each case tag
CASE_PATTERNS = {
    "generic": (1, 1, 1, 1),
    "c1": (0, 1, 1, 1),
    "c2": (1, 1, 0, 1),
    "c3": (0, 1, 0, 1),
    "c4": (1, 0, 1, 1),
    "c5": (1, 0, 0, 1),
    "c6": (1, 1, 1, 0),
    "c7": (0, 1, 1, 0),
    "c8": (1, 0, 1, 0),
}


def _vector_for(case, rng, q="0.5"):
    ma1, ma2, mb1, mb2 = CASE_PATTERNS[case]

    def r(lo=0.2, hi=1.5):
        return mpmath.mpf(rng.uniform(lo, hi))

    return FamilyParameters(
        r() * ma1, r() * ma2, r(-1, 1), r() * mb1, r() * mb2,
        r(-1, 1), r(-1, 1), mpmath.mpf(q),
    )


class TestCaseDispatch:
    def test_all_nine_patterns(self, c50):
        rng = random.Random(7)
        for case in ALL_CASES:
            v = _vector_for(case, rng)
            assert canonicalize(v, c50).case == case

    def test_case_partition(self):
        assert set(Y_CASES) | set(P_CASES) == set(ALL_CASES)
        assert len(ALL_CASES) == 9

    def test_invalid_zero_patterns(self, c50):
        with pytest.raises(InvalidZeroPattern):
            canonicalize(FamilyParameters(0, 0, 0, 1, 1, 0, 1, 0.5), c50)
        with pytest.raises(InvalidZeroPattern):
            canonicalize(FamilyParameters(1, 1, 0, 0, 0, 0, 1, 0.5), c50)

    def test_unknown_case_tag_rejected(self, dctx):
        with pytest.raises(Exception):
            CanonicalParameters(
                "c9", 0, 0, 0, 0, 0, None, 0, 0, 0, 0, 1, 0.5
            )


class TestCanonicalOracles:
    def test_askey_wilson_canonical_values(self, dctx):
        aw = instantiate("askey_wilson", (0.3, 0.2, 0.1, 0.4), 0.5, dctx)
        c = canonicalize(aw, dctx)
        assert c.case == "generic"
        assert c.z1 == pytest.approx(0.0024, rel=1e-13)
        assert c.z2 == pytest.approx(0.045, rel=1e-13)
        assert c.e1 == pytest.approx(0.21, rel=1e-13)
        assert c.e2 == pytest.approx(0.0126, rel=1e-13)
        assert c.e3 == pytest.approx(0.000216, rel=1e-13)
        assert c.b2 == pytest.approx(5 / 3, rel=1e-13)
        # derived-field consistency
        assert c.e3 == pytest.approx(c.z1 * c.z2 / 0.5, rel=1e-13)
        assert c.b1 == pytest.approx(c.z2 * c.b2 / 0.5, rel=1e-13)

    def test_p_case_scaled_fields(self, dctx):
        ql = instantiate("q_laguerre", (-0.5,), 0.5, dctx)
        c = canonicalize(ql, dctx)
        assert c.case == "c5"
        assert c.p == pytest.approx(0.5**0.5, rel=1e-13)
        # e1, e2 are populated as pe1/p, pe2/p whenever p != 0
        assert c.e1 == pytest.approx(c.pe1 / c.p, rel=1e-13)
        lv2 = canonicalize(
            instantiate("little_q_jacobi_v2", (0.25, 0.4), 0.5, dctx), dctx
        )
        assert lv2.case == "c6"
        assert lv2.p == 0

    def test_factor_polynomial(self, dctx):
        dv1 = instantiate("dual_q_hahn_v1", (0.3, 0.4, 10), 0.5, dctx)
        c = canonicalize(dv1, dctx)
        # termination: the y-case cubic vanishes (to rounding) at i = N
        assert abs(c.factor(10)) <= 1e-12
        assert abs(c.factor(3)) > 1e-6


class TestRoundTrip:
    def test_canonicalize_expand_identity(self, c50):
        rng = random.Random(20260814)
        fields = ("e1", "e2", "e3", "z1", "z2", "p", "pe1", "pe2", "b0", "b1", "b2")
        for case in ALL_CASES:
            for _ in range(25):
                v = _vector_for(case, rng)
                c = canonicalize(v, c50)
                c2 = canonicalize(expand(c, mpmath.mpf(rng.uniform(0.3, 2.0))), c50)
                assert c2.case == case
                for f in fields:
                    x, y = getattr(c, f), getattr(c2, f)
                    if x is None:
                        assert y is None
                        continue
                    assert abs(x - y) <= mpmath.mpf("1e-45") * max(
                        abs(x), abs(y), mpmath.mpf(1)
                    )

    def test_expand_with_source_scale_recovers_vector(self, c50):
        rng = random.Random(3)
        for case in ALL_CASES:
            v = _vector_for(case, rng)
            c = canonicalize(v, c50)
            v2 = expand(c, v.a2 if v.a2 != 0 else v.a1)
            for f in ("a1", "a2", "b0", "b1", "b2", "s1", "s2", "q"):
                x, y = getattr(v, f), getattr(v2, f)
                assert abs(x - y) <= mpmath.mpf("1e-45") * max(
                    abs(x), abs(y), mpmath.mpf(1)
                )

    def test_expand_rejects_zero_scale(self, c50):
        c = canonicalize(_vector_for("generic", random.Random(1)), c50)
        with pytest.raises(ValueError):
            expand(c, 0)


class TestEquivalentVectors:
    def test_requires_pure_h_vector(self, dctx):
        aw = instantiate("askey_wilson", (0.3, 0.2, 0.1, 0.4), 0.5, dctx)
        with pytest.raises(NotApplicable):
            equivalent_vectors(aw)

    def test_variant_structure(self, c50):
        p = FamilyParameters("0.8", "1.2", "0.4", 0, 0, "0.3", "-0.2", "0.5")
        eq = equivalent_vectors(p, c50)
        assert len(eq.variants) == 2
        p1, p2 = eq.variants
        assert p1.b2 == 0 and p1.b1 != 0   # transported to the q^k leg
        assert p2.b1 == 0 and p2.b2 != 0   # transported to the q^{-k} leg
        # reference values computed at ambient precision, hence the bound
        q = mpmath.mpf("0.5")
        assert abs(p1.b1 - (-(p.b0 * p.a2 + p.s2) / p.a2)) < mpmath.mpf("1e-14")
        assert abs(p2.s2 - (p.s2 - q * p.a1 * p.b0 - q * p.s1)) < mpmath.mpf("1e-14")

    def test_one_sided_vectors_get_one_variant(self, c50):
        p = FamilyParameters(0, "1.2", "0.4", 0, 0, "0.3", "-0.2", "0.5")
        assert len(equivalent_vectors(p, c50).variants) == 1

    def test_context_mismatch_rejected(self, dctx):
        p = FamilyParameters(1, 1, 0, 0, 0, 0.3, -0.2, 0.25)
        with pytest.raises(ValueError):
            equivalent_vectors(p, dctx)


class TestInvertQ:
    def test_involution(self):
        p = FamilyParameters("0.3", "0.7", "0.1", "0.4", "0.9", "0.2", "-1", "0.5", finite_n=4)
        pp = invert_q(invert_q(p))
        for f in ("a1", "a2", "b0", "b1", "b2", "s1", "s2", "q", "finite_n"):
            assert getattr(pp, f) == getattr(p, f)

    def test_swaps_fields(self):
        p = FamilyParameters("0.3", "0.7", "0.1", "0.4", "0.9", "0.2", "-1", "0.5")
        pi = invert_q(p)
        assert pi.q == 2
        assert pi.a1 == p.a2 and pi.a2 == p.a1
        assert pi.b1 == p.b2 and pi.b2 == p.b1
        assert pi.s1 == p.s2 and pi.s2 == p.s1

    def test_lattice_invariance(self):
        c = QContext(mpmath.mpf("0.5"), precision=50)
        p = FamilyParameters("0.3", "0.7", "0.1", "0.4", "0.9", "0.2", "-1", "0.5")
        pi = invert_q(p)
        ci = QContext(pi.q, precision=50)
        s1 = build_sequences(p, 8, c)
        s2 = build_sequences(pi, 8, ci)
        for a, b in zip(s1.x + s1.h + s1.d + s1.g, s2.x + s2.h + s2.d + s2.g):
            assert abs(a - b) <= mpmath.mpf("1e-44") * max(abs(a), mpmath.mpf(1))
