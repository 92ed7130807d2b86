from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from endokit.errors import NotNested
from endokit.qspaces import DSquared, QForm, QSubspace, d_coefficient, relative_space

from oracles import gram_det

E2 = QForm.standard(2)
E3 = QForm.standard(3)


def span(n, *vecs):
    return QSubspace.span(n, [[Fraction(x) for x in v] for v in vecs])


class TestRelativeSpace:
    def test_antidiagonal(self):
        full = QSubspace.full(2)
        diag = span(2, (1, 1))
        assert relative_space(full, diag, E2) == span(2, (1, -1))

    def test_self_complement_is_zero(self):
        s = span(2, (1, 2))
        assert relative_space(s, s, E2).dim == 0

    def test_sum_zero_plane(self):
        full = QSubspace.full(3)
        line = span(3, (1, 1, 1))
        comp = relative_space(full, line, E3)
        assert comp.dim == 2
        for b in comp.basis:
            assert sum(b) == 0

    def test_not_nested(self):
        with pytest.raises(NotNested):
            relative_space(span(2, (1, 0)), span(2, (0, 1)), E2)

    def test_oracle_small(self):
        # complement of span{(1,2)} in Q^2: solve x + 2y = 0 by hand
        comp = relative_space(QSubspace.full(2), span(2, (1, 2)), E2)
        assert comp == span(2, (2, -1))


class TestQForm:
    def test_requires_positive_definite(self):
        with pytest.raises(ValueError):
            QForm(((Fraction(0), Fraction(0)), (Fraction(0), Fraction(1))))
        with pytest.raises(ValueError):
            QForm(((Fraction(1), Fraction(2)), (Fraction(2), Fraction(1))))

    def test_inner(self):
        g = QForm(((Fraction(2), Fraction(1)), (Fraction(1), Fraction(2))))
        assert g.inner((1, 0), (0, 1)) == 1
        assert g.inner((1, 1), (1, 1)) == 6


class TestDCoefficient:
    def test_identity_when_one_side_full(self):
        full = QSubspace.full(2)
        zero = QSubspace.zero(2)
        assert d_coefficient(zero, full, full, E2).value == 1

    def test_dimension_mismatch_is_zero(self):
        full = QSubspace.full(2)
        line = span(2, (1, 0))
        assert d_coefficient(line, QSubspace.zero(2), full, E2).value == 0

    def test_orthogonal_lines(self):
        full = QSubspace.full(2)
        assert d_coefficient(span(2, (1, 1)), span(2, (1, -1)), full, E2).value == 1

    def test_non_direct_sum_is_zero(self):
        full = QSubspace.full(2)
        line = span(2, (1, 0))
        assert d_coefficient(line, line, full, E2).value == 0

    def test_symmetry(self):
        full = QSubspace.full(3)
        a = span(3, (1, 0, 0))
        b = span(3, (1, 1, 0), (0, 0, 1))
        assert d_coefficient(a, b, full, E3) == d_coefficient(b, a, full, E3)

    def test_skew_value_against_gram_oracle(self):
        full = QSubspace.full(2)
        a = span(2, (1, 0))
        b = span(2, (1, 1))
        got = d_coefficient(a, b, full, E2)
        # complements: a-perp = (0,1), b-perp = (1,-1); Gram oracle
        u, v = [Fraction(0), Fraction(1)], [Fraction(1), Fraction(-1)]
        dot = lambda x, y: sum(p * q for p, q in zip(x, y))
        num = gram_det([[dot(u, u), dot(u, v)], [dot(v, u), dot(v, v)]])
        den = gram_det([[dot(u, u)]]) * gram_det([[dot(v, v)]])
        assert got.value == num / den
        assert got.value == Fraction(1, 2)

    def test_positive_when_nonzero(self):
        full = QSubspace.full(3)
        a = span(3, (1, 1, 0))
        b = span(3, (0, 1, 1), (1, 0, 0))
        val = d_coefficient(a, b, full, E3)
        if not val.is_zero:
            assert val.value > 0

    @given(st.integers(-3, 3), st.integers(-3, 3))
    def test_d_le_one_for_lines(self, p, q):
        # Hadamard: the distortion of two transverse lines is at most 1
        if (p, q) in [(0, 0)]:
            return
        full = QSubspace.full(2)
        a = span(2, (1, 0))
        b = span(2, (p, q))
        val = d_coefficient(a, b, full, E2)
        assert val.value <= 1


class TestDSquared:
    def test_nonnegative(self):
        with pytest.raises(ValueError):
            DSquared(Fraction(-1))

    def test_product(self):
        assert (DSquared(Fraction(1, 2)) * DSquared(Fraction(2, 3))).value == Fraction(1, 3)
