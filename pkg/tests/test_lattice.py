from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from slopecert.lattice import (
    LocalDatum,
    WeightTable,
    parse_rat,
    rat_str,
    unit_part,
    very_regular,
    vp,
)

rationals = st.fractions(
    min_value=Fraction(-50), max_value=Fraction(50), max_denominator=12
)


class TestRat:
    @given(rationals, rationals, rationals)
    def test_field_axioms(self, a, b, c):
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a + b == b + a and a * b == b * a

    @given(rationals)
    def test_lowest_terms(self, a):
        from math import gcd

        assert a.denominator > 0
        assert gcd(a.numerator, a.denominator) == 1

    @given(rationals)
    def test_serialization_roundtrip(self, a):
        assert parse_rat(rat_str(a)) == a

    def test_vp(self):
        assert vp(Fraction(12), 2) == 2
        assert vp(Fraction(1, 9), 3) == -2
        assert vp(Fraction(5, 7), 3) == 0
        with pytest.raises(ZeroDivisionError):
            vp(0, 5)

    def test_unit_part(self):
        assert unit_part(Fraction(12), 2) == 3
        assert unit_part(Fraction(5, 18), 3) == Fraction(5, 2)


class TestLocalDatum:
    def test_derived_valuations(self):
        loc = LocalDatum(5, e=2, f=3)
        assert loc.q_valuation == 3
        assert loc.uniformizer_valuation == Fraction(1, 2)
        assert loc.embeddings == 6

    @pytest.mark.parametrize("p", [1, 4, 9, 15])
    def test_rejects_composite(self, p):
        with pytest.raises(ValueError):
            LocalDatum(p)

    def test_rejects_bad_shape(self):
        with pytest.raises(ValueError):
            LocalDatum(3, e=0)


class TestWeightTable:
    def test_extension_accessor(self):
        w = WeightTable([[5, 2], [4, 0]])
        assert w.entry(1, 1) == 5 and w.entry(2, 2) == 0
        assert w.entry(1, -1) == -5 and w.entry(1, -2) == -2
        assert w.entry(1, 0) == 0 and w.entry(2, 0) == 0
        assert w.column_sum(1) == 9 and w.column_sum(-2) == -2

    def test_dominance_enforced(self):
        with pytest.raises(ValueError):
            WeightTable([[1, 2]])
        with pytest.raises(ValueError):
            WeightTable([[2, -1]])
        with pytest.raises(ValueError):
            WeightTable([[3, 1], [2]])

    def test_very_regular_examples(self):
        assert very_regular(WeightTable([[10, 4]]), 4)
        assert not very_regular(WeightTable([[10, 4]]), 5)
        assert very_regular(WeightTable([[0, 0]]), 0)

    def test_very_regular_scans_every_row(self):
        assert not very_regular(WeightTable([[9, 3], [4, 2]]), 3)
        assert very_regular(WeightTable([[9, 3], [7, 3]]), 3)
