import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from l2approx.exactalg import (ExactMatrix, FieldMismatchError, NumberField, QQ,
                               SingularMatrixError, StructuralError, block_diag,
                               companion_embed, rank_exact)

from oracles import (clear_denominators, exact_matrix_rank_oracle, gauss_rank,
                     minpoly_reduce, rank_mod_p, rational_rows)

QW = NumberField((F(1), F(-1), F(1)))  # w^2 = w - 1
QI = NumberField((F(1), F(0), F(1)))   # i^2 = -1


def qmat(rows):
    return ExactMatrix.from_rows(QQ, rows)


def random_field_matrix(field, rng, rows, cols, span=3):
    return ExactMatrix.from_rows(field, [
        [field.element([F(rng.randint(-span, span)) for _ in range(field.degree)])
         for _ in range(cols)] for _ in range(rows)])


class TestFieldElement:
    def test_power_table_reduction(self):
        w = QW.gen()
        assert (w * w).coeffs == (F(-1), F(1))  # w^2 = w - 1

    def test_reduction_matches_independent_polynomial_oracle(self):
        rng = random.Random(7)
        for _ in range(25):
            a = [F(rng.randint(-5, 5)) for _ in range(2)]
            b = [F(rng.randint(-5, 5)) for _ in range(2)]
            prod = [F(0)] * 3
            for i, ai in enumerate(a):
                for j, bj in enumerate(b):
                    prod[i + j] += ai * bj
            expected = minpoly_reduce(prod, list(QW.minpoly))
            got = QW.element(a) * QW.element(b)
            assert list(got.coeffs) == expected

    def test_inverse(self):
        rng = random.Random(3)
        for field in (QW, QI):
            for _ in range(20):
                x = field.element([F(rng.randint(-4, 4)), F(rng.randint(-4, 4))])
                if not x:
                    continue
                assert x * x.inverse() == field.one

    def test_mixed_field_rejected(self):
        with pytest.raises(FieldMismatchError):
            QW.gen() * QI.gen()

    def test_minpoly_must_be_monic(self):
        with pytest.raises(StructuralError):
            NumberField((F(1), F(2)))


class TestRankExact:
    def test_identity(self):
        assert rank_exact(ExactMatrix.identity(QQ, 2)) == 2

    def test_proportional_rows(self):
        assert rank_exact(qmat([[1, 2], [2, 4]])) == 1

    def test_quadratic_field_rank_via_det_oracle(self):
        # det = w^2 + 1 which reduces to w, nonzero, so full rank
        w = QW.gen()
        m = ExactMatrix.from_rows(QW, [[w, QW.one], [-QW.one, w]])
        det = w * w + QW.one
        assert list(det.coeffs) == minpoly_reduce([F(1), F(0), F(1)], list(QW.minpoly))
        assert bool(det)
        assert rank_exact(m) == 2

    def test_empty_shapes(self):
        assert rank_exact(ExactMatrix(QQ, 0, 3, ())) == 0
        assert rank_exact(ExactMatrix(QQ, 3, 0, ())) == 0

    def test_agrees_with_gaussian_oracle_over_q(self):
        rng = random.Random(11)
        for _ in range(40):
            rows = rng.randint(1, 5)
            cols = rng.randint(1, 5)
            m = ExactMatrix.from_rows(QQ, [
                [F(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(cols)]
                for _ in range(rows)])
            assert rank_exact(m) == gauss_rank(rational_rows(m))

    def test_agrees_with_companion_oracle_over_number_fields(self):
        rng = random.Random(13)
        for field in (QW, QI):
            for _ in range(15):
                m = random_field_matrix(field, rng, rng.randint(1, 4), rng.randint(1, 4))
                assert rank_exact(m) == exact_matrix_rank_oracle(m)

    def test_transpose_invariance(self):
        rng = random.Random(17)
        for _ in range(20):
            m = random_field_matrix(QW, rng, rng.randint(1, 4), rng.randint(1, 4))
            assert rank_exact(m) == rank_exact(m.transpose())
            assert rank_exact(m) <= min(m.rows, m.cols)

    def test_block_diag_additivity(self):
        rng = random.Random(19)
        for _ in range(15):
            a = random_field_matrix(QQ, rng, rng.randint(1, 3), rng.randint(1, 3))
            b = random_field_matrix(QQ, rng, rng.randint(1, 3), rng.randint(1, 3))
            assert rank_exact(block_diag([a, b])) == rank_exact(a) + rank_exact(b)

    def test_modular_oracle(self):
        # rank mod p never exceeds the exact rank; generically some prime attains it
        rng = random.Random(23)
        hits = 0
        for _ in range(12):
            m = random_field_matrix(QW, rng, 3, 3)
            exact = rank_exact(m)
            emb = companion_embed(m)
            int_rows = clear_denominators(
                [[emb.entry(i, j).coeffs[0] for j in range(emb.cols)] for i in range(emb.rows)])
            attained = False
            for p in (101, 103, 107):
                rp = rank_mod_p(int_rows, p)
                assert rp <= 2 * exact
                if rp == 2 * exact:
                    attained = True
            hits += attained
        assert hits == 12

    def test_deterministic(self):
        rng = random.Random(29)
        m = random_field_matrix(QW, rng, 4, 5)
        assert rank_exact(m) == rank_exact(m)


class TestCompanionEmbed:
    def test_degree_one_is_identity_map(self):
        m = qmat([[1, 2], [3, 4]])
        assert companion_embed(m) is m

    def test_generator_multiplication_matrix(self):
        w = QW.gen()
        ce = companion_embed(ExactMatrix.from_rows(QW, [[w]]))
        # columns are w*1 = w and w*w = -1 + w in the power basis
        got = [[ce.entry(i, j).coeffs[0] for j in range(2)] for i in range(2)]
        assert got == [[F(0), F(-1)], [F(1), F(1)]]
        assert rank_exact(ce) == 2

    def test_zero_matrix(self):
        z = ExactMatrix.zeros(QW, 2, 3)
        ce = companion_embed(z)
        assert (ce.rows, ce.cols) == (4, 6)
        assert ce.is_zero()
        assert rank_exact(ce) == 0

    def test_rank_scaling_on_random_matrices(self):
        rng = random.Random(31)
        for field in (QW, QI):
            for _ in range(12):
                m = random_field_matrix(field, rng, rng.randint(1, 4), rng.randint(1, 4))
                assert rank_exact(companion_embed(m)) == field.degree * rank_exact(m)


class TestMatrixOps:
    def test_inverse_roundtrip(self):
        rng = random.Random(37)
        made = 0
        while made < 10:
            m = random_field_matrix(QW, rng, 3, 3)
            if rank_exact(m) < 3:
                continue
            made += 1
            assert m * m.inverse() == ExactMatrix.identity(QW, 3)

    def test_singular_inverse_raises(self):
        with pytest.raises(SingularMatrixError):
            qmat([[1, 2], [2, 4]]).inverse()

    def test_kron_dimensions_and_values(self):
        a = qmat([[1, 2], [3, 4]])
        b = qmat([[0, 1], [1, 0]])
        k = a.kron(b)
        assert (k.rows, k.cols) == (4, 4)
        # entry (i*2+u, j*2+v) = a(i,j) * b(u,v)
        assert k.entry(0, 1).coeffs[0] == F(1) * F(1)
        assert k.entry(2, 1).coeffs[0] == F(3) * F(1)
        assert k.entry(2, 3).coeffs[0] == F(4) * F(1)
        assert k.entry(2, 2).coeffs[0] == F(0)

    def test_mixed_field_entries_rejected(self):
        with pytest.raises(FieldMismatchError):
            ExactMatrix(QQ, 1, 2, (QQ.one, QW.one))


@given(st.lists(st.lists(st.integers(min_value=-6, max_value=6), min_size=3, max_size=3),
                min_size=1, max_size=5))
@settings(max_examples=60, deadline=None)
def test_rank_matches_oracle_property(rows):
    m = ExactMatrix.from_rows(QQ, rows)
    assert rank_exact(m) == gauss_rank(rational_rows(m))


@given(st.lists(st.lists(st.tuples(st.integers(-4, 4), st.integers(-4, 4)),
                         min_size=2, max_size=4),
                min_size=1, max_size=4).filter(lambda rs: len({len(r) for r in rs}) == 1))
@settings(max_examples=60, deadline=None)
def test_companion_rank_scaling_property(rows):
    m = ExactMatrix.from_rows(QW, [[QW.element(list(pair)) for pair in row] for row in rows])
    assert rank_exact(companion_embed(m)) == 2 * rank_exact(m)
