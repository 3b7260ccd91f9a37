from fractions import Fraction
from itertools import product

import pytest

from slopecert.errors import MixedResidue
from slopecert.principal import (
    UnramChar,
    completely_refinable,
    refinement_orbit,
    so_irreducible_sufficient,
    sp_irreducible,
)
from slopecert.weyl import group_order


def chars(q, *values):
    return [UnramChar(Fraction(v), q) for v in values]


class TestSpIrreducible:
    def test_examples(self):
        assert sp_irreducible(chars(3, 2))
        assert not sp_irreducible(chars(3, -1))  # order two
        assert not sp_irreducible(chars(3, 2, 6))  # ratio is nu

    def test_trivial_character_passes_order_condition(self):
        # order exactly two is excluded; order one is not
        assert sp_irreducible(chars(3, 1))

    def test_nu_excluded(self):
        assert not sp_irreducible(chars(3, Fraction(1, 3)))
        assert not sp_irreducible(chars(3, 3))

    def test_product_condition(self):
        # chi_1 chi_2 = 1/3 = nu
        assert not sp_irreducible(chars(3, 2, Fraction(1, 6)))

    def test_mixed_residue(self):
        with pytest.raises(MixedResidue):
            sp_irreducible([UnramChar(2, 3), UnramChar(2, 5)])

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_weyl_invariance(self, n):
        """Each Tadic condition set is stable under signed permutations."""
        grid = [Fraction(2), Fraction(1, 2), Fraction(-1), Fraction(3), Fraction(5)]
        for values in product(grid, repeat=n):
            base = sp_irreducible(chars(3, *values))
            for orb in refinement_orbit(chars(3, *values), "C"):
                assert sp_irreducible(chars(3, *orb)) == base


class TestSoSufficient:
    def test_examples(self):
        assert so_irreducible_sufficient(chars(3, 2, 5))
        assert not so_irreducible_sufficient(chars(3, 1, 2))  # chi^2 = 1
        assert not so_irreducible_sufficient(chars(3, 2, 6))  # ratio is q

    def test_implies_distinct_orbit(self):
        cs = chars(3, 2, 5)
        assert so_irreducible_sufficient(cs)
        orbit = refinement_orbit(cs, "D")
        assert len(orbit) == group_order("D", 2)


class TestRefinementOrbit:
    def test_rank_one(self):
        assert refinement_orbit(chars(3, 2), "C") == {(Fraction(2),), (Fraction(1, 2),)}
        assert refinement_orbit(chars(3, 1), "C") == {(Fraction(1),)}

    def test_type_d_rank_two(self):
        orbit = refinement_orbit(chars(3, 2, 3), "D")
        assert len(orbit) == 4

    def test_orbit_size_divides_group_order(self):
        for values in [(2,), (1,), (2, 2), (2, Fraction(1, 2)), (2, 3)]:
            for group in ("C", "D"):
                n = len(values)
                order = group_order(group, n)
                size = len(refinement_orbit(chars(5, *values), group))
                assert order % size == 0

    def test_full_orbit_iff_values_and_inverses_distinct(self):
        assert len(refinement_orbit(chars(5, 2, 3), "C")) == group_order("C", 2)
        assert len(refinement_orbit(chars(5, 2, Fraction(1, 2)), "C")) < group_order("C", 2)


class TestCompletelyRefinable:
    def test_delegation(self):
        assert completely_refinable(chars(3, 2), "C")
        assert not completely_refinable(chars(3, Fraction(1, 3)), "C")
        assert completely_refinable(chars(3, 2, 5), "D")

    def test_group_validation(self):
        with pytest.raises(ValueError):
            completely_refinable(chars(3, 2), "B")
