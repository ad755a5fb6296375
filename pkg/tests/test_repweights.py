import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from l2approx.exactalg import ExactMatrix, NumberField, QQ, StructuralError
from l2approx.groupcore import GroupPresentation, word_from_string
from l2approx.repweights import (ParityError, RepAssignment, central_character_value,
                                 sym_power, validate_weight, weight_dim, weight_rep)

from oracles import rational_rows, sympy_sym_power


def elementary_product(moves):
    """SL2(Q) matrix from a list of (is_upper, amount) shear moves."""
    m = ExactMatrix.identity(QQ, 2)
    for upper, t in moves:
        rows = [[1, t], [0, 1]] if upper else [[1, 0], [t, 1]]
        m = m * ExactMatrix.from_rows(QQ, rows)
    return m


sl2q = st.builds(elementary_product,
                 st.lists(st.tuples(st.booleans(), st.integers(-3, 3)),
                          min_size=0, max_size=4))

QW = NumberField((F(1), F(-1), F(1)))


def rand_sl2_q(rng):
    # random SL2(Q) matrix from a short product of elementary matrices
    m = ExactMatrix.identity(QQ, 2)
    for _ in range(rng.randint(1, 4)):
        t = rng.randint(-3, 3)
        if rng.random() < 0.5:
            e = ExactMatrix.from_rows(QQ, [[1, t], [0, 1]])
        else:
            e = ExactMatrix.from_rows(QQ, [[1, 0], [t, 1]])
        m = m * e
    return m


class TestSymPower:
    def test_lambda_zero_is_trivial(self):
        g = ExactMatrix.from_rows(QQ, [[1, 5], [0, 1]])
        assert sym_power(g, 0) == ExactMatrix.identity(QQ, 1)

    def test_lambda_one_is_the_matrix_itself(self):
        rng = random.Random(2)
        for _ in range(10):
            g = rand_sl2_q(rng)
            assert sym_power(g, 1) == g

    def test_unipotent_square(self):
        g = ExactMatrix.from_rows(QQ, [[1, 1], [0, 1]])
        assert rational_rows(sym_power(g, 2)) == [
            [F(1), F(1), F(1)], [F(0), F(1), F(2)], [F(0), F(0), F(1)]]

    def test_matches_symbolic_expansion_oracle(self):
        rng = random.Random(4)
        for _ in range(8):
            g = rand_sl2_q(rng)
            lam = rng.randint(0, 4)
            got = rational_rows(sym_power(g, lam))
            expected = sympy_sym_power(rational_rows(g), lam)
            assert got == expected

    def test_multiplicative(self):
        rng = random.Random(6)
        for _ in range(8):
            g, h = rand_sl2_q(rng), rand_sl2_q(rng)
            lam = rng.randint(0, 4)
            assert sym_power(g * h, lam) == sym_power(g, lam) * sym_power(h, lam)

    @given(sl2q, sl2q, st.integers(min_value=0, max_value=4))
    @settings(max_examples=60, deadline=None)
    def test_multiplicative_property(self, g, h, lam):
        assert sym_power(g * h, lam) == sym_power(g, lam) * sym_power(h, lam)

    def test_multiplicative_over_number_field(self):
        w = QW.gen()
        a = ExactMatrix.from_rows(QW, [[QW.one, w], [QW.zero, QW.one]])
        b = ExactMatrix.from_rows(QW, [[QW.one, QW.zero], [-w, QW.one]])
        for lam in (2, 3, 5):
            assert sym_power(a * b, lam) == sym_power(a, lam) * sym_power(b, lam)

    def test_inverse_property(self):
        rng = random.Random(8)
        for _ in range(6):
            g = rand_sl2_q(rng)
            lam = rng.randint(1, 4)
            ginv = ExactMatrix.from_rows(QQ, [
                [g.entry(1, 1), -g.entry(0, 1)], [-g.entry(1, 0), g.entry(0, 0)]])
            assert sym_power(g, lam) * sym_power(ginv, lam) == \
                ExactMatrix.identity(QQ, lam + 1)

    def test_det_not_one_rejected(self):
        with pytest.raises(ValueError):
            sym_power(ExactMatrix.from_rows(QQ, [[2, 0], [0, 2]]), 2)


class TestWeightRep:
    def test_dimension_product(self):
        rng = random.Random(10)
        g1, g2 = rand_sl2_q(rng), rand_sl2_q(rng)
        m = weight_rep([g1, g2], (2, 3))
        assert (m.rows, m.cols) == (12, 12)
        assert weight_dim((2, 3)) == 12

    def test_identity_images(self):
        ident = ExactMatrix.identity(QQ, 2)
        assert weight_rep([ident, ident], (1, 2)) == ExactMatrix.identity(QQ, 6)

    def test_single_factor_reduces_to_sym_power(self):
        rng = random.Random(12)
        g = rand_sl2_q(rng)
        assert weight_rep([g], (3,)) == sym_power(g, 3)

    def test_multiplicative_across_factors(self):
        rng = random.Random(14)
        g1, g2, h1, h2 = (rand_sl2_q(rng) for _ in range(4))
        lam = (1, 2)
        assert weight_rep([g1 * h1, g2 * h2], lam) == \
            weight_rep([g1, g2], lam) * weight_rep([h1, h2], lam)

    def test_length_mismatch(self):
        with pytest.raises(StructuralError):
            weight_rep([ExactMatrix.identity(QQ, 2)], (1, 2))


class TestCentralCharacter:
    def test_minus_identity_odd(self):
        assert central_character_value((3,), (-1,)) == -1

    def test_minus_identity_even(self):
        assert central_character_value((4,), (-1,)) == 1

    def test_all_identity(self):
        assert central_character_value((3, 5), (1, 1)) == 1

    def test_matrix_inputs(self):
        ident = ExactMatrix.identity(QQ, 2)
        assert central_character_value((3, 2), (-ident, -ident)) == -1

    def test_non_central_rejected(self):
        with pytest.raises(ValueError):
            central_character_value((2,), (ExactMatrix.from_rows(QQ, [[1, 1], [0, 1]]),))

    def test_scalar_action_of_central_elements(self):
        rng = random.Random(16)
        g1, g2 = rand_sl2_q(rng), rand_sl2_q(rng)
        lam = (2, 3)
        neg = ExactMatrix.from_rows(QQ, [[-1, 0], [0, -1]])
        scaled = weight_rep([neg * g1, neg * g2], lam)
        plain = weight_rep([g1, g2], lam)
        sign = central_character_value(lam, (-1, -1))
        assert scaled == plain.scalar_mul(QQ.from_rational(sign))


class TestRepAssignment:
    def test_projective_relator_sign_and_gate(self):
        # g of order 4 presented as an involution: the relator g*g maps to -Id,
        # a projective action that only exists on even weights
        pres = GroupPresentation(("g",), (word_from_string("gg", ("g",)),))
        j = ExactMatrix.from_rows(QQ, [[0, 1], [-1, 0]])
        rep = RepAssignment.build(pres, [(j,)])
        assert rep.relator_signs == ((-1,),)
        assert rep.is_admissible((2,))
        with pytest.raises(ParityError) as exc:
            rep.check_admissible((3,))
        assert exc.value.factor == 0
        # weight_rep of the relator is (-1)^lambda * Identity
        for lam in (2, 3):
            img = weight_rep([j * j], (lam,))
            sign = central_character_value((lam,), (-1,))
            assert img == ExactMatrix.identity(QQ, lam + 1).scalar_mul(
                QQ.from_rational(sign))

    def test_two_factor_sign_cancellation(self):
        # relator maps to -Id in both factors: odd-odd weights are admissible
        # because the signs cancel on the tensor product
        pres = GroupPresentation(("g",), (word_from_string("gg", ("g",)),))
        j = ExactMatrix.from_rows(QQ, [[0, 1], [-1, 0]])
        rep = RepAssignment.build(pres, [(j, j)])
        assert rep.relator_signs == ((-1, -1),)
        assert rep.is_admissible((1, 1))
        assert rep.is_admissible((2, 2))
        assert not rep.is_admissible((1, 2))
        with pytest.raises(ParityError) as exc:
            rep.check_admissible((1, 2))
        assert exc.value.factor == 0
        img = weight_rep([j * j, j * j], (1, 1))
        assert img == ExactMatrix.identity(QQ, 4)

    def test_relator_must_map_to_plus_minus_identity(self):
        pres = GroupPresentation(("a",), (word_from_string("aa", ("a",)),))
        g = ExactMatrix.from_rows(QQ, [[1, 1], [0, 1]])
        with pytest.raises(ValueError):
            RepAssignment.build(pres, [(g,)])

    def test_det_checked_per_factor(self):
        pres = GroupPresentation(("a",), ())
        bad = ExactMatrix.from_rows(QQ, [[1, 0], [0, 2]])
        with pytest.raises(ValueError):
            RepAssignment.build(pres, [(bad,)])

    def test_central_involution_gate_is_separable(self, c2):
        # relator g^2 maps to +Id, so the relator gate admits odd weights,
        # while the central gate rejects them
        assert c2.rep.is_admissible((3,), central=False)
        assert not c2.rep.is_admissible((3,))
        assert c2.rep.is_admissible((2,))

    def test_weight_validation(self):
        with pytest.raises(StructuralError):
            validate_weight(())
        with pytest.raises(StructuralError):
            validate_weight((-1,))
        with pytest.raises(StructuralError):
            validate_weight((1.5,))
