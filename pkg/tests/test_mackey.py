"""Type labels, Mackey ranges, and the finite flow classifiers."""

from fractions import Fraction

import pytest

from bsmg.cocycle import (
    TypeLabel,
    classify_type,
    flow_type,
    mackey_range,
    mackey_range_int,
    one_loop_model,
    power_exponents,
    ranges_isomorphic,
    scaled_product_model,
)
from bsmg.errors import NotPowerValued
from bsmg.groupoid.core import validate
from bsmg.groupoid.randomgen import partition_groupoid

HALF = Fraction(1, 2)


class TestModels:
    def test_one_loop_shape(self):
        G = one_loop_model([Fraction(3, 2)])
        assert G.n_units == 1
        assert G.n_arrows == 3
        assert validate(G) == []
        assert G.rn_values == (1, Fraction(3, 2), Fraction(2, 3))

    def test_scaled_product_shape(self):
        G = scaled_product_model(Fraction(3, 2), 3)
        assert G.n_units == 3
        assert G.n_arrows == 9
        assert validate(G) == []
        assert set(G.masses) == {Fraction(1, 3)}


class TestClassifyType:
    def test_preserved_masses_are_type_two(self):
        G = partition_groupoid([Fraction(1, 3)] * 3, [(0, 1, 2)])
        assert classify_type(G) == TypeLabel("II")

    def test_single_defect_is_lambda(self):
        G = one_loop_model([Fraction(3, 2)])
        assert classify_type(G) == TypeLabel("III_lambda", Fraction(2, 3))

    def test_independent_defects_are_dense(self):
        G = one_loop_model([Fraction(2), Fraction(3)])
        assert classify_type(G) == TypeLabel("III_1")

    def test_same_prime_defects_collapse(self):
        # powers 2 and 3 of the same prime generate the power-1 subgroup
        G = one_loop_model([Fraction(4), Fraction(8)])
        assert classify_type(G) == TypeLabel("III_lambda", HALF)

    def test_parallel_mixed_defect(self):
        G = one_loop_model([Fraction(4, 9)])
        assert classify_type(G) == TypeLabel("III_lambda", Fraction(4, 9))

    def test_cycle_defect_is_the_full_loop(self):
        G = scaled_product_model(Fraction(3, 2), 2)
        assert classify_type(G) == TypeLabel("III_lambda", Fraction(4, 9))

    def test_labels_print_compactly(self):
        assert str(TypeLabel("III_lambda", Fraction(2, 3))) == "III_2/3"
        assert str(TypeLabel("III_1")) == "III-1"
        assert str(TypeLabel("II")) == "II"


class TestPowerExponents:
    def test_exact_exponents(self):
        base = Fraction(3, 2)
        vals = [Fraction(9, 4), Fraction(1), Fraction(4, 9), base]
        assert power_exponents(vals, base) == [2, 0, -2, 1]

    def test_rejects_non_powers(self):
        with pytest.raises(NotPowerValued):
            power_exponents([Fraction(5)], 2)
        with pytest.raises(ValueError):
            power_exponents([Fraction(2)], 1)


class TestMackeyRange:
    def test_generating_residue_is_transitive(self):
        G = one_loop_model([Fraction(2)])
        r = mackey_range(G, [0, 1, 3], 4)
        assert r.n_components == 1
        assert r.orbit_sizes == (1,)
        assert r.modulus == 4

    def test_even_residue_splits_the_fiber(self):
        G = one_loop_model([Fraction(2)])
        r = mackey_range(G, [0, 2, 2], 4)
        assert r.n_components == 2
        assert r.action == (1, 0)
        assert r.orbit_sizes == (2,)

    def test_staircase_over_two_units(self):
        G = partition_groupoid([HALF, HALF], [(0, 1)])
        r = mackey_range(G, [0, 0, 1, 3], 4)
        assert r.n_components == 4
        assert r.orbit_sizes == (4,)
        assert r.component_of[(0, 0)] == r.component_of[(1, 1)]

    def test_isomorphism_ignores_the_model(self):
        r1 = mackey_range(one_loop_model([Fraction(5)]), [0, 2, 2], 4)
        r2 = mackey_range(one_loop_model([Fraction(7)]), [0, 2, 2], 4)
        r3 = mackey_range(one_loop_model([Fraction(5)]), [0, 1, 3], 4)
        assert ranges_isomorphic(r1, r2)
        assert not ranges_isomorphic(r1, r3)


class TestIntegerRange:
    def test_cycle_returns_its_length(self):
        G = scaled_product_model(Fraction(2), 3)
        tau = [0, 0, 0, 1, -1, 1, -1, 1, -1]
        assert mackey_range_int(G, tau) == [3]

    def test_coboundary_translation_is_free(self):
        G = partition_groupoid([HALF, HALF], [(0, 1)])
        assert mackey_range_int(G, [0, 0, 1, -1]) == [0]

    def test_flow_type_of_scaled_products(self):
        base = Fraction(3, 2)
        for n in (1, 2, 3):
            G = scaled_product_model(base, n)
            assert flow_type(G, base) == [
                TypeLabel("III_lambda", Fraction(2, 3) ** n)]

    def test_flow_type_preserved_case(self):
        G = partition_groupoid([HALF, HALF], [(0, 1)])
        assert flow_type(G, Fraction(3, 2)) == [TypeLabel("II")]
