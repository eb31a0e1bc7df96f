"""Catalog vectors, constraints, and metadata."""

import mpmath
import pytest

from conftest import PRESET_ARGS

from qortho import ConstraintViolation, QContext, canonicalize, instantiate, list_presets


EXPECTED_CASES = {
    "askey_wilson": "generic",
    "continuous_big_q_hermite": "c1",
    "discrete_q_hermite_1": "c7",
    "little_q_jacobi_v1": "c2",
    "little_q_jacobi_v2": "c6",
    "q_laguerre": "c5",
    "dual_q_hahn_v1": "c1",
    "dual_q_hahn_v2": "c1",
    "dual_q_hahn_v3": "c1",
}


class TestCatalog:
    def test_listing_is_stable_and_complete(self):
        # catalog order groups related families; it is stable, not sorted
        names = [d.name for d in list_presets()]
        assert names == [name for name, _ in PRESET_ARGS]

    def test_citations_reference_standard_catalog(self):
        for d in list_presets():
            assert "KLS" in d.citation

    def test_case_tags(self, dctx):
        for name, args in PRESET_ARGS:
            p = instantiate(name, args, 0.5, dctx)
            assert canonicalize(p, dctx).case == EXPECTED_CASES[name], name


class TestVectors:
    def test_askey_wilson_vector(self, dctx):
        a, b, c, d = 0.3, 0.2, 0.1, 0.4
        q = 0.5
        p = instantiate("askey_wilson", (a, b, c, d), q, dctx)
        assert p.a1 == pytest.approx(a * b * c * d / q, rel=1e-15)
        assert p.a2 == 1.0
        assert p.b0 == 0.0
        assert p.b1 == pytest.approx(a / 2, rel=1e-15)
        assert p.b2 == pytest.approx(1 / (2 * a), rel=1e-15)
        assert p.s1 == pytest.approx(-(a / (2 * q)) * (b * c + b * d + c * d - 1), rel=1e-14)
        assert p.s2 == pytest.approx(-0.5 * (b + c + d - b * c * d), rel=1e-14)
        assert p.finite_n is None

    def test_continuous_big_q_hermite_vector(self, dctx):
        p = instantiate("continuous_big_q_hermite", (0.4,), 0.5, dctx)
        assert p.a1 == 0 and p.a2 == 1.0 and p.b0 == 0
        assert p.b1 == pytest.approx(0.2, rel=1e-15)
        assert p.b2 == pytest.approx(1.25, rel=1e-15)
        assert p.s1 == pytest.approx(0.4, rel=1e-15)
        assert p.s2 == 0

    def test_discrete_q_hermite_vector(self, dctx):
        p = instantiate("discrete_q_hermite_1", (), 0.5, dctx)
        assert (p.a1, p.a2, p.b0, p.b1, p.b2) == (0, 1.0, 0, 1.0, 0)
        assert p.s1 == 2.0 and p.s2 == 1.0

    def test_little_q_jacobi_vectors(self, dctx):
        a, b, q = 0.25, 0.4, 0.5
        v1 = instantiate("little_q_jacobi_v1", (a, b), q, dctx)
        assert v1.a1 == pytest.approx(a * b * q, rel=1e-15)
        assert v1.a2 == 1.0 and v1.b1 == 0
        assert v1.b2 == pytest.approx(1 / (q * b), rel=1e-15)
        assert v1.s2 == pytest.approx(q * a - 1, rel=1e-15)
        v2 = instantiate("little_q_jacobi_v2", (a, b), q, dctx)
        assert v2.b1 == 1.0 and v2.b2 == 0
        assert v2.s1 == pytest.approx(-(q * a - 1) / q, rel=1e-15)
        assert v2.s2 == 0

    def test_q_laguerre_vector_and_constraints(self, dctx):
        p = instantiate("q_laguerre", (-0.5,), 0.5, dctx)
        assert p.a1 == 1.0 and p.a2 == 0
        assert p.b0 == 1.0 and p.b2 == -1.0
        assert p.s2 == pytest.approx(0.5**0.5 - 0.5, rel=1e-14)
        # b0 restricted to {0, 1}
        instantiate("q_laguerre", (-0.5, 0), 0.5, dctx)
        with pytest.raises(ConstraintViolation):
            instantiate("q_laguerre", (-0.5, 0.3), 0.5, dctx)
        # negative q requires integer alpha
        ctx_neg = QContext.double(-0.5)
        instantiate("q_laguerre", (-1, 1), -0.5, ctx_neg)
        with pytest.raises(ConstraintViolation):
            instantiate("q_laguerre", (-0.5, 1), -0.5, ctx_neg)

    def test_dual_q_hahn_vectors(self, dctx):
        g, d, N, q = 0.3, 0.4, 10, 0.5
        v1 = instantiate("dual_q_hahn_v1", (g, d, N), q, dctx)
        assert v1.finite_n == N
        assert v1.a1 == 0 and v1.a2 == 1.0 and v1.b0 == 0
        assert v1.b1 == pytest.approx(q**-N, rel=1e-15)
        assert v1.b2 == pytest.approx(g * d * q ** (N + 1), rel=1e-14)
        assert v1.s1 == pytest.approx(q**-N * (1 / q - g), rel=1e-14)
        assert v1.s2 == pytest.approx(-q * g * (1 + d), rel=1e-14)
        v2 = instantiate("dual_q_hahn_v2", (g, d, N), q, dctx)
        assert v2.finite_n is None  # infinite-support parametrization
        assert v2.b1 == pytest.approx(q * g, rel=1e-15)
        assert v2.b2 == pytest.approx(d, rel=1e-15)
        v3 = instantiate("dual_q_hahn_v3", (g, d, N), q, dctx)
        assert v3.finite_n == N
        assert v3.b1 == pytest.approx(g * d * q, rel=1e-14)
        assert v3.b2 == 1.0

    def test_scale_argument_cancels_in_recurrence(self, dctx):
        from qortho import recurrence_coefficients

        p1 = instantiate("askey_wilson", (0.3, 0.2, 0.1, 0.4), 0.5, dctx)
        p2 = instantiate("askey_wilson", (0.3, 0.2, 0.1, 0.4, 3.0), 0.5, dctx)
        r1 = recurrence_coefficients(p1, 6, "direct", dctx)
        r2 = recurrence_coefficients(p2, 6, "direct", dctx)
        for n in range(6):
            assert r1.beta(n) == pytest.approx(r2.beta(n), rel=1e-12)
            if n >= 1:
                assert r1.alpha(n) == pytest.approx(r2.alpha(n), rel=1e-12)


class TestConstraints:
    def test_zero_arguments_rejected(self, dctx):
        with pytest.raises(ConstraintViolation):
            instantiate("askey_wilson", (0, 0.2, 0.1, 0.4), 0.5, dctx)
        with pytest.raises(ConstraintViolation):
            instantiate("continuous_big_q_hermite", (0,), 0.5, dctx)
        with pytest.raises(ConstraintViolation):
            instantiate("askey_wilson", (0.3, 0.2, 0.1, 0.4, 0), 0.5, dctx)

    def test_arity_checked(self, dctx):
        with pytest.raises(ConstraintViolation):
            instantiate("askey_wilson", (0.3, 0.2), 0.5, dctx)
        with pytest.raises(ConstraintViolation):
            instantiate("discrete_q_hermite_1", (1, 2), 0.5, dctx)

    def test_unknown_name_rejected(self, dctx):
        with pytest.raises(ConstraintViolation):
            instantiate("wilson", (), 0.5, dctx)

    def test_dual_q_hahn_requires_positive_integer_n(self, dctx):
        with pytest.raises(ConstraintViolation):
            instantiate("dual_q_hahn_v1", (0.3, 0.4, 0), 0.5, dctx)
        with pytest.raises(ConstraintViolation):
            instantiate("dual_q_hahn_v1", (0.3, 0.4, 2.5), 0.5, dctx)

    def test_context_q_mismatch_rejected(self, dctx):
        with pytest.raises(ValueError):
            instantiate("continuous_big_q_hermite", (0.4,), 0.3, dctx)
