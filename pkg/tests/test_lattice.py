"""Family parameters, lattice sequences, Newton basis, and diagnostics."""

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qortho import (
    DegenerateFamily,
    FamilyParameters,
    IndexOutOfRange,
    QContext,
    build_sequences,
    instantiate,
    newton_eval,
    newton_node_derivative,
    validate_family,
)

# x_k = 0.5^k, h_k = 0.5^{-k}; the vector behind several frozen oracles below
V_SIMPLE = (0.0, 1.0, 0.0, 1.0, 0.0, 0.25, -1.0)


class TestFamilyParameters:
    def test_string_fields_are_exact_decimals(self):
        p = FamilyParameters("0.1", 1, 0, 1, 0, 0, "0.3", "0.5")
        assert p.a1 == mpmath.mpf("0.1")
        assert p.s2 == mpmath.mpf("0.3")

    def test_rejects_degenerate_q(self):
        for bad in (0, 1, -1):
            with pytest.raises(ValueError):
                FamilyParameters(1, 1, 0, 1, 0, 0, 0, bad)

    def test_finite_n_validation(self):
        FamilyParameters(*V_SIMPLE, 0.5, finite_n=None)
        FamilyParameters(*V_SIMPLE, 0.5, finite_n=0)
        with pytest.raises(ValueError):
            FamilyParameters(*V_SIMPLE, 0.5, finite_n=-2)
        with pytest.raises(ValueError):
            FamilyParameters(*V_SIMPLE, 0.5, finite_n=1.5)

    def test_vector_roundtrip(self):
        p = FamilyParameters(*V_SIMPLE, 0.5)
        assert tuple(float(v) for v in p.vector()) == V_SIMPLE


class TestBuildSequences:
    def test_oracle_values(self, dctx):
        seq = build_sequences(FamilyParameters(*V_SIMPLE, 0.5), 6, dctx)
        assert seq.x[:4] == (1.0, 0.5, 0.25, 0.125)
        assert seq.h[:3] == (1.0, 2.0, 4.0)
        assert seq.d[0] == 0 and seq.g[0] == 0
        # d_1 = 0.75 + 0.25*0.5 - 1*2 = -1.125; g_1 = x_0 (h_1 - h_0) + d_1
        assert seq.d[1] == pytest.approx(-1.125, rel=1e-15)
        assert seq.g[1] == pytest.approx(-0.125, rel=1e-15)

    def test_g_definition_holds_exactly(self, dctx):
        p = FamilyParameters(1.0, 0.7, 0.3, 1.0, 0.4, 0.2, -1.0, 0.5)
        seq = build_sequences(p, 10, dctx)
        for k in range(1, 11):
            assert seq.g[k] == seq.x[k - 1] * (seq.h[k] - seq.h[0]) + seq.d[k]

    def test_difference_equation_x_h_d(self):
        # affine combinations of 1, q^k, q^{-k} satisfy
        # s_{k+3} = z (s_{k+2} - s_{k+1}) + s_k
        c = QContext(mpmath.mpf("0.5"), precision=50)
        p = FamilyParameters("1", "0.7", "0.3", "1", "0.4", "0.2", "-1", "0.5")
        seq = build_sequences(p, 12, c)
        for s in (seq.x, seq.h, seq.d):
            scale = max(abs(v) for v in s)
            for k in range(9):
                defect = abs(s[k + 3] - (c.z * (s[k + 2] - s[k + 1]) + s[k]))
                assert defect <= mpmath.mpf("1e-45") * scale

    @settings(max_examples=40, deadline=None)
    @given(
        st.tuples(*[st.floats(min_value=-2, max_value=2) for _ in range(7)]).filter(
            lambda v: (v[0] != 0 or v[1] != 0) and (v[3] != 0 or v[4] != 0)
        )
    )
    def test_difference_equation_property(self, vec):
        c = QContext(mpmath.mpf("0.5"), precision=50)
        p = FamilyParameters(*[mpmath.mpf(v) for v in vec], c.q)
        seq = build_sequences(p, 10, c)
        for s in (seq.x, seq.h, seq.d):
            scale = max(max(abs(v) for v in s), mpmath.mpf(1))
            for k in range(7):
                defect = abs(s[k + 3] - (c.z * (s[k + 2] - s[k + 1]) + s[k]))
                assert defect <= mpmath.mpf("1e-44") * scale

    def test_degenerate_pairs_rejected(self, dctx):
        with pytest.raises(DegenerateFamily):
            build_sequences(FamilyParameters(0, 0, 0, 1, 0, 0, 1, 0.5), 4, dctx)
        with pytest.raises(DegenerateFamily):
            build_sequences(FamilyParameters(1, 0, 0, 0, 0, 0, 1, 0.5), 4, dctx)

    def test_context_mismatch_rejected(self, dctx):
        p = FamilyParameters(*V_SIMPLE, 0.25)
        with pytest.raises(ValueError):
            build_sequences(p, 4, dctx)

    def test_extended_grows_and_preserves_prefix(self, dctx):
        p = FamilyParameters(*V_SIMPLE, 0.5)
        seq = build_sequences(p, 4, dctx)
        seq2 = seq.extended(8)
        assert seq2.max_index == 8
        assert seq2.x[: 5] == seq.x
        assert seq.extended(3) is seq


class TestNewtonBasis:
    def test_eval_oracle(self, dctx):
        seq = build_sequences(FamilyParameters(*V_SIMPLE, 0.5), 6, dctx)
        # v_2(2) = (2 - x_0)(2 - x_1) = (2-1)(2-0.5) = 1.5
        assert newton_eval(seq, 2, 2.0) == pytest.approx(1.5, rel=1e-15)
        assert newton_eval(seq, 0, 2.0) == 1.0

    def test_node_derivative_oracles(self, dctx):
        seq = build_sequences(FamilyParameters(*V_SIMPLE, 0.5), 6, dctx)
        # v'_2 at x_1: (x_1 - x_0) = -0.5
        assert newton_node_derivative(seq, 1, 1) == pytest.approx(-0.5, rel=1e-15)
        # v'_3 at x_0: (x_0 - x_1)(x_0 - x_2) = 0.5 * 0.75 = 0.375
        assert newton_node_derivative(seq, 2, 0) == pytest.approx(0.375, rel=1e-15)

    def test_derivative_index_bounds(self, dctx):
        seq = build_sequences(FamilyParameters(*V_SIMPLE, 0.5), 4, dctx)
        with pytest.raises(IndexOutOfRange):
            newton_node_derivative(seq, 4, 0)


class TestValidateFamily:
    def test_healthy_family(self, dctx):
        aw = instantiate("askey_wilson", (0.3, 0.2, 0.1, 0.4), 0.5, dctx)
        rep = validate_family(aw, 12, dctx)
        assert rep.ok
        assert rep.violations == ()

    def test_pair_zero_kinds(self, dctx):
        rep = validate_family(FamilyParameters(0, 0, 0, 1, 0, 0, 1, 0.5), 4, dctx)
        assert "a-pair-zero" in {v.kind for v in rep.violations}
        rep = validate_family(FamilyParameters(1, 0, 0, 0, 0, 0, 1, 0.5), 4, dctx)
        assert "b-pair-zero" in {v.kind for v in rep.violations}

    def test_finite_family_flags_vanishing_g_and_alpha(self, dctx):
        dv1 = instantiate("dual_q_hahn_v1", (0.3, 0.4, 10), 0.5, dctx)
        rep = validate_family(dv1, 13, dctx)
        kinds = {v.kind for v in rep.violations}
        assert not rep.ok
        assert "vanishing-g" in kinds and "vanishing-alpha" in kinds
        # the scan is bounded: inside 0..N the family is healthy
        assert validate_family(dv1, 9, dctx).ok

    def test_coincident_h_detected(self, dctx):
        # a1/a2 = 4 with q = 0.5 makes h_0 = h_2 exactly
        p = FamilyParameters(4.0, 1.0, 0.0, 1.0, 0.3, 0.2, -1.0, 0.5)
        rep = validate_family(p, 8, dctx)
        assert "coincident-h" in {v.kind for v in rep.violations}
