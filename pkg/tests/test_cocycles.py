"""Cocycle layer: value groups, modular pairs, transfer, and level models."""

from fractions import Fraction

import pytest

from bsmg.cocycle import (
    BSLevelModel,
    GroupoidCocycle,
    QPos,
    ZAdd,
    ZModAdd,
    coboundary,
    cohomologous,
    group_index_ratio,
    level_label_normalizer,
    level_sizes,
    modular_D,
    modular_pair,
    one_loop_model,
    radon_nikodym,
    seed_maps,
    transfer_matches,
)
from bsmg.errors import (
    InvalidLevel,
    NotACocycle,
    NotMeasurePreserving,
    TargetMismatch,
)
from bsmg.groupoid.core import (
    ErgodicDecomposition,
    FiniteMeasuredGroupoid,
    Subgroupoid,
    validate,
)
from bsmg.groupoid.pseudogroup import PartialIso
from bsmg.groupoid.randomgen import partition_groupoid
from bsmg.words import BSParams
from test_groupoid_core import element_arrows, s3_action, swap_window, z3_action

HALF = Fraction(1, 2)


class TestTargets:
    def test_qpos_rejects_nonpositive(self):
        assert QPos.coerce("3/4") == Fraction(3, 4)
        with pytest.raises(TargetMismatch):
            QPos.coerce(0)
        with pytest.raises(TargetMismatch):
            QPos.coerce(-2)

    def test_zadd_wants_real_ints(self):
        assert ZAdd.coerce(-5) == -5
        assert ZAdd.inverse(3) == -3
        with pytest.raises(TargetMismatch):
            ZAdd.coerce(True)
        with pytest.raises(TargetMismatch):
            ZAdd.coerce(Fraction(1))

    def test_zmod_wraps(self):
        t = ZModAdd(4)
        assert t.coerce(-1) == 3
        assert t.op(3, 2) == 1
        assert t.inverse(1) == 3
        with pytest.raises(ValueError):
            ZModAdd(0)


class TestGroupoidCocycle:
    def test_dict_and_sequence_forms_agree(self):
        G = swap_window()
        c1 = GroupoidCocycle.from_values(
            G, QPos, {0: 1, 1: 1, 2: 3, 3: Fraction(1, 3)})
        c2 = GroupoidCocycle.from_values(G, QPos, [1, 1, 3, Fraction(1, 3)])
        assert c1.values == c2.values == (1, 1, 3, Fraction(1, 3))
        assert c1(2) == 3

    def test_one_value_per_arrow(self):
        G = swap_window()
        with pytest.raises(TargetMismatch):
            GroupoidCocycle.from_values(G, QPos, [1, 1, 3])

    def test_units_map_to_identity(self):
        G = swap_window()
        with pytest.raises(NotACocycle, match="unit arrow"):
            GroupoidCocycle.from_values(G, QPos, [2, 1, 3, Fraction(1, 3)])

    def test_inverse_values_must_invert(self):
        G = swap_window()
        with pytest.raises(NotACocycle, match="inverse"):
            GroupoidCocycle.from_values(G, QPos, [1, 1, 3, 3])

    def test_multiplicativity_is_checked(self):
        G = z3_action()
        sigma = G.group_elements.index((1, 2, 0))
        sigma2 = G.group_elements.index((2, 0, 1))
        values = [Fraction(1)] * G.n_arrows
        for g in element_arrows(G, [sigma]):
            values[g] = Fraction(2)
        for g in element_arrows(G, [sigma2]):
            values[g] = HALF
        # inverses pair up, but sigma.sigma lands on a sigma^2 germ: 4 != 1/2
        with pytest.raises(NotACocycle, match="multiplicative"):
            GroupoidCocycle.from_values(G, QPos, values)

    def test_coboundary_is_a_cocycle(self):
        G = z3_action()
        psi = {0: Fraction(1), 1: Fraction(2), 2: Fraction(5)}
        c = coboundary(G, QPos, psi)
        c.check()
        for g in range(G.n_arrows):
            assert c(g) == psi[G.rng[g]] / psi[G.src[g]]
        assert not c.is_identity()


class TestRadonNikodym:
    def test_preserved_masses_give_the_identity(self):
        assert radon_nikodym(z3_action()).is_identity()

    def test_attached_values_win_over_masses(self):
        G = one_loop_model([Fraction(3, 2)])
        # a single unit would force mass ratio 1 on the loops
        assert radon_nikodym(G).values == (1, Fraction(3, 2), Fraction(2, 3))


def lam_pair():
    """S3 acting on 3 points against the order-two point stabilizer of 2."""
    G = s3_action()
    swap = G.group_elements.index((1, 0, 2))
    return G, Subgroupoid(G, element_arrows(G, [0, swap]))


class TestModularPair:
    def test_values_follow_the_component_split(self):
        G, S = lam_pair()
        D, K = modular_pair(G, S)
        cm = {0: HALF, 1: HALF, 2: Fraction(1)}
        for g in range(G.n_arrows):
            assert D(g) == cm[G.src[g]] / cm[G.rng[g]]
            assert K(g) == cm[G.rng[g]] / cm[G.src[g]]
        assert sorted(set(D.values)) == [HALF, 1, 2]
        assert set(K.values) != {1}

    def test_trivial_on_the_subgroupoid(self):
        G, S = lam_pair()
        D, K = modular_pair(G, S)
        for g in sorted(S.ids):
            assert D(g) == 1 and K(g) == 1

    def test_product_balances_out(self):
        # measure preserving and principal, so the mass defect carried by
        # D is undone exactly by the index side
        G, S = lam_pair()
        D, K = modular_pair(G, S)
        assert all(D(g) * K(g) == 1 for g in range(G.n_arrows))

    def test_modular_d_shortcut(self):
        G, S = lam_pair()
        assert modular_D(G, S).values == modular_pair(G, S)[0].values

    def test_needs_preserved_masses(self):
        G = partition_groupoid(
            [HALF, Fraction(1, 4), Fraction(1, 4)], [(0, 1), (2,)])
        with pytest.raises(NotMeasurePreserving):
            modular_pair(G, range(G.n_units))

    def test_witness_family_must_cover(self):
        G, S = lam_pair()
        with pytest.raises(ValueError, match="cover"):
            modular_pair(G, S, witnesses=[PartialIso.identity_on(G, range(3))])


class TestCohomologous:
    def test_recovers_the_mass_potential(self):
        G = partition_groupoid(
            [Fraction(1, 6), Fraction(1, 3), Fraction(1, 2)], [(0, 1, 2)])
        trivial = [Fraction(1)] * G.n_arrows
        rn = radon_nikodym(G)
        psi = cohomologous(G, trivial, rn)
        assert psi == {0: 1, 1: 2, 2: 3}
        for g in range(G.n_arrows):
            assert rn(g) == psi[G.rng[g]] / psi[G.src[g]]
        assert transfer_matches(G, psi, dict(enumerate(G.masses)))
        assert not transfer_matches(G, psi, {0: 1, 1: 2, 2: 5})

    def test_normalizes_per_component(self):
        G = partition_groupoid([Fraction(1, 4)] * 4, [(0, 1), (2, 3)])
        pot = {0: Fraction(2), 1: Fraction(6), 2: Fraction(5), 3: Fraction(35)}
        c2 = coboundary(G, QPos, pot)
        trivial = [Fraction(1)] * G.n_arrows
        psi = cohomologous(G, trivial, c2)
        assert psi == {0: 1, 1: 3, 2: 1, 3: 7}
        assert transfer_matches(G, psi, pot)

    def test_loop_defect_has_no_potential(self):
        G = one_loop_model([Fraction(2)])
        trivial = [Fraction(1)] * G.n_arrows
        assert cohomologous(G, trivial, radon_nikodym(G)) is None


class TestGroupIndexRatio:
    def test_exact_ratio(self):
        assert group_index_ratio(6, 4) == Fraction(3, 2)
        assert group_index_ratio(3, 3) == 1
        assert group_index_ratio(Fraction(9), 6) == Fraction(3, 2)

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            group_index_ratio(0, 2)
        with pytest.raises(ValueError):
            group_index_ratio(2, -1)


class TestLevelModel:
    def test_floor_sizes(self):
        assert level_sizes(BSParams(2, 3), 1, 0) == (2, 3)
        assert level_sizes(BSParams(4, 6), 1, 1) == (12, 18)
        assert level_sizes(BSParams(2, -3), 2, 0) == (4, 6)
        with pytest.raises(InvalidLevel):
            level_sizes(BSParams(2, 3), 0, 1)

    def test_smallest_model_shape(self):
        m = BSLevelModel(BSParams(2, 3), 1, 0)
        G = m.groupoid
        assert (m.N, m.Nprime) == (2, 3)
        assert G.n_units == 5
        assert G.n_arrows == 25
        assert validate(G) == []
        assert len(m.S) == 13
        assert list(m.t_arrow_ids) == list(range(13, 19))
        assert m.expected_ratio == Fraction(3, 2)
        assert len(m.witnesses) == 1 + 2 * abs(m.params.p)
        assert G.labels[m.pair_to_id(0, 2)] == ("t", 0, 0)
        dec = ErgodicDecomposition(G, sorted(m.S.ids))
        assert dec.components == ((0, 1), (2, 3, 4))

    def test_modular_identity_small_grid(self):
        grid = [(2, 3, 1, 0), (2, 3, 1, 1), (2, -3, 2, 0), (4, 6, 1, 0)]
        for p, q, k, l in grid:
            m = BSLevelModel(BSParams(p, q), k, l)
            assert m.check_modular_identity() == m.groupoid.n_arrows

    def test_generic_growth_matches_the_direct_model(self):
        params = BSParams(2, 3)
        m = BSLevelModel(params, 1, 0)
        G2 = FiniteMeasuredGroupoid.from_partial_isos(
            5, seed_maps(params, 1, 0),
            label_normalizer=level_label_normalizer(params, 1, 0))
        assert G2.n_arrows == m.groupoid.n_arrows
        assert validate(G2) == []
        assert (sorted(zip(G2.src, G2.rng))
                == sorted(zip(m.groupoid.src, m.groupoid.rng)))
