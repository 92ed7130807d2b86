import itertools
from fractions import Fraction as F

import pytest

from endokit.catalog import GroupType, gl, so_even, so_odd, sp, u
from endokit.descent import (
    DescentScenario,
    centralizer_type,
    compatibility_check,
    descend,
    eta_from_epsilon,
    gs_descended_types,
    hypothesis_flags,
    orbit_of,
    sbar0_assign,
    validate_scenario,
)
from endokit.enatural import (
    Ambient,
    bottom_levi,
    build_E_inst,
    build_E_st,
    enumerate_E_natural,
    enumerate_levis,
    general_assignments,
    general_twist_check,
    pushed_group_check,
    pushforward_levi,
    section_levi,
    top_levi,
    verify_identities,
    verify_index_sets,
)
from endokit.endoscopy import EigenMultiset, EllipticDatumMeta
from endokit.errors import ScenarioValidationError
from endokit.rootsofunity import RootOfUnity

R = RootOfUnity
ONE = R.one()
MINUS = R.minus_one()


def z(num, den):
    return R.of(num, den)


def ms(*entries):
    return EigenMultiset.of(entries)


def scenario(n, sizes, s0, q, eps_gl, eps_p, eps_d, tag_p="split", tag_d="split"):
    return DescentScenario(
        n=n,
        sizes=sizes,
        s0=EllipticDatumMeta(*s0),
        q=q,
        eps_gl=tuple(eps_gl),
        eps_prime=eps_p,
        eps_dblprime=eps_d,
        form_class_prime=tag_p,
        form_class_dblprime=tag_d,
    )


MINIMAL = scenario(1, (), (1, 0), 3, (), ms(ONE, ONE, ONE), ms(ONE))
ONE_BLOCK = scenario(1, (1,), (0, 0), 3, (ms(ONE),), ms(ONE), ms(ONE))
UNITARY = scenario(3, (2,), (0, 1), 3, (ms(z(1, 4), z(3, 4)),), ms(ONE), ms(MINUS, ONE, MINUS))
PAIRS = scenario(
    3, (1,), (1, 1), 7, (ms(ONE),), ms(z(1, 3), ONE, z(2, 3)), ms(z(1, 6), ONE, z(5, 6))
)
MIXED = scenario(
    5,
    (5,),
    (0, 0),
    5,
    (ms(ONE, ONE, MINUS, z(1, 3), z(2, 3)),),
    ms(ONE),
    ms(ONE),
)
CORPUS = [MINIMAL, ONE_BLOCK, UNITARY, PAIRS, MIXED]


class TestValidation:
    def test_accepts_minimal(self):
        assert validate_scenario(MINIMAL) is MINIMAL

    def test_rejects_unstable_orbit(self):
        bad = scenario(1, (1,), (0, 0), 3, (ms(z(1, 5)),), ms(ONE), ms(ONE))
        with pytest.raises(ScenarioValidationError, match="Frobenius"):
            validate_scenario(bad)

    def test_rejects_orthogonal_without_one(self):
        bad = scenario(1, (), (1, 0), 3, (), ms(MINUS, MINUS, ONE), ms(MINUS))
        with pytest.raises(ScenarioValidationError):
            validate_scenario(bad)

    def test_rejects_q_not_coprime(self):
        bad = scenario(2, (2,), (0, 0), 3, (ms(z(1, 3), z(2, 3)),), ms(ONE), ms(ONE))
        with pytest.raises(ScenarioValidationError, match="coprime"):
            validate_scenario(bad)

    def test_rejects_even_q(self):
        bad = scenario(1, (1,), (0, 0), 4, (ms(ONE),), ms(ONE), ms(ONE))
        with pytest.raises(ScenarioValidationError, match="odd"):
            validate_scenario(bad)

    def test_hypothesis_flags(self):
        assert hypothesis_flags(MINIMAL) == (True, True)
        ram = scenario(2, (), (0, 2), 3, (), ms(ONE), ms(MINUS, MINUS, ONE, MINUS, MINUS), "split", "ramified")
        assert hypothesis_flags(ram) == (True, False)

    def test_roundtrip_json(self):
        text = UNITARY.to_json()
        assert DescentScenario.from_json(text) == UNITARY


class TestCentralizerTypes:
    def test_self_inverse_orbit_gives_unitary(self):
        got = centralizer_type(ms(z(1, 4), z(3, 4)), 3, "symplectic")
        assert got == GroupType.of(u(1, 1))

    def test_plus_ones_give_symplectic(self):
        assert centralizer_type(ms(ONE, ONE), 3, "symplectic") == GroupType.of(sp(1))

    def test_split_orbit_pair_gives_gl(self):
        # order-3 values split into two singleton orbits at q == 1 mod 3
        got = centralizer_type(ms(z(1, 3), z(2, 3)), 7, "symplectic")
        assert got == GroupType.of(gl(1, 1))

    def test_orthogonal_kinds(self):
        got = centralizer_type(ms(ONE, ONE, ONE, MINUS, MINUS), 3, "odd_orthogonal", "unram_nonsplit")
        assert got == GroupType.of(so_odd(1), so_even(1, "unram_nonsplit"))

    def test_gl_kind_orbit_blocks(self):
        got = centralizer_type(ms(ONE, MINUS, z(1, 4), z(3, 4)), 3, "gl")
        assert got == GroupType.of(gl(1), gl(1), gl(1, 2))

    def test_eta_from_epsilon(self):
        gl_blocks, sp_part = eta_from_epsilon(
            scenario(1, (), (1, 0), 3, (), ms(z(1, 3), ONE, z(2, 3)), ms(ONE))
        )
        assert gl_blocks == ()
        assert sp_part == EigenMultiset.symplectic([z(1, 3), z(2, 3)])

    def test_eta_negates_second_side(self):
        _, sp_part = eta_from_epsilon(
            scenario(1, (), (0, 1), 3, (), ms(ONE), ms(MINUS, ONE, MINUS))
        )
        assert sp_part == EigenMultiset.symplectic([ONE, ONE])


class TestOutcomeStructure:
    def test_minimal(self):
        o = descend(MINIMAL)
        assert not o.blocks and not o.u_slots
        assert o.r_group() == GroupType.of(sp(1))
        assert o.mexc() == GroupType.of(so_odd(1))
        assert o.g_eta() == GroupType.of(sp(1))

    def test_unitary_pull(self):
        o = descend(UNITARY)
        assert o.pulled_dbl and not o.pulled_prime
        assert o.r_group() == GroupType.of(gl(1), gl(1, 2))
        # the honest centralizer keeps the split rank-one even part
        assert so_even(1, "split") in o.mexc().factors
        assert o.mexc_reduced() == GroupType.of(gl(1), gl(1, 2))

    def test_base_point_signs(self):
        o = descend(UNITARY)
        signs = sbar0_assign(o)
        by_origin = {b.origin: signs[b.bid] for b in o.blocks}
        assert by_origin == {"levi": 1, "so2_dbl": -1}

    def test_pair_blocks_merge_homes(self):
        o = descend(PAIRS)
        gl_homes = {b.home for b in o.blocks if b.home[0] == "gl"}
        assert len(gl_homes) == 1  # the two sides negate onto one orbit pair
        assert o.g_eta() == GroupType.of(sp(1), gl(2, 1))

    def test_layout_widths(self):
        o = descend(UNITARY)
        assert o.ambient == sum(b.width for b in o.blocks) + sum(
            2 * s.d * (s.k_prime + s.k_dbl) for s in o.u_slots
        ) + o.x_prime + o.y_prime + o.x_dbl + o.y_dbl


class TestPlacementAgreement:
    @pytest.mark.parametrize("sc", CORPUS, ids=lambda s: s.digest()[:24])
    def test_sign_rule_matches_descent(self, sc):
        o = descend(sc)
        for t in itertools.product((1, -1), repeat=o.i_count):
            assert compatibility_check(o, t)

    def test_detects_corruption(self):
        import dataclasses

        o = descend(ONE_BLOCK)
        bad_block = dataclasses.replace(o.blocks[0], sbar0=-1)
        bad = dataclasses.replace(o, blocks=(bad_block,))
        assert not compatibility_check(bad, (1,))


class TestPushedGroups:
    @pytest.mark.parametrize("sc", CORPUS, ids=lambda s: s.digest()[:24])
    def test_ascent_matches_descent(self, sc):
        o = descend(sc)
        amb = Ambient(o)
        for t in itertools.product((1, -1), repeat=o.i_count):
            assert pushed_group_check(o, amb, t)

    def test_bottom_levi_pushes_to_matched_group(self):
        o = descend(UNITARY)
        amb = Ambient(o)
        t = (1,)
        bar_side, odd_side = amb.pushed_types(bottom_levi(o), t)
        from endokit.catalog import bar as bar_op

        assert bar_side == bar_op(o.mexc_reduced())
        assert odd_side == o.mexc_reduced()

    def test_general_twists(self):
        for sc in [ONE_BLOCK, UNITARY, PAIRS]:
            o = descend(sc)
            amb = Ambient(o)
            for asg in general_assignments(o.i_count):
                assert general_twist_check(o, amb, asg), (sc.digest(), asg)


class TestIndexSets:
    @pytest.mark.parametrize("sc", CORPUS, ids=lambda s: s.digest()[:24])
    def test_index_set_laws(self, sc):
        o = descend(sc)
        amb = Ambient(o)
        checks = verify_index_sets(o, amb)
        assert all(checks.values()), checks

    def test_known_entry_counts(self):
        assert len(enumerate_E_natural(descend(MINIMAL))) == 1
        assert len(enumerate_E_natural(descend(ONE_BLOCK))) == 1
        assert len(enumerate_E_natural(descend(MIXED))) == 5

    def test_pushforward_section_roundtrip(self):
        o = descend(MIXED)
        amb = Ambient(o)
        for entry in enumerate_E_natural(o, amb):
            image = pushforward_levi(o, amb, entry.t, entry.levi)
            assert section_levi(o, amb, image) == entry.levi

    def test_est_elements_have_matching_count(self):
        o = descend(PAIRS)
        amb = Ambient(o)
        assert len(build_E_st(o, amb)) == len(enumerate_E_natural(o, amb))


class TestCoefficientIdentities:
    @pytest.mark.parametrize("sc", CORPUS, ids=lambda s: s.digest()[:24])
    def test_all_identities(self, sc):
        o = descend(sc)
        amb = Ambient(o)
        entries = enumerate_E_natural(o, amb)
        for entry in entries:
            checks = verify_identities(o, amb, entry)
            assert all(checks.values()), (entry.t, entry.levi.groups, checks)

    def test_minimal_collapses_to_one(self):
        o = descend(MINIMAL)
        entry = enumerate_E_natural(o)[0]
        assert entry.c_inst_rat == 1 and entry.c_st_rat == 1
        assert entry.dsq.value == 1

    def test_one_block_values(self):
        o = descend(ONE_BLOCK)
        entry = enumerate_E_natural(o)[0]
        assert entry.t == (1,)
        assert entry.c_inst_rat == 1
        assert entry.c_st_rat == F(1, 2)
        assert entry.lsbar_type == GroupType.of(sp(1))
        assert entry.leps_type == GroupType.of(so_odd(1))

    def test_rational_parts_are_powers_of_two(self):
        for sc in CORPUS:
            o = descend(sc)
            amb = Ambient(o)
            for entry in enumerate_E_natural(o, amb):
                for v in (entry.c_inst_rat, entry.c_st_rat):
                    x = v.numerator * v.denominator
                    assert x & (x - 1) == 0

    def test_volume_parts_match(self):
        for sc in CORPUS:
            o = descend(sc)
            amb = Ambient(o)
            for entry in enumerate_E_natural(o, amb):
                assert entry.dsq == entry.dsq_st


class TestDescendedTypes:
    def test_types_with_twist(self):
        o = descend(ONE_BLOCK)
        full_plus, bar_plus = gs_descended_types(o, (1,))
        assert full_plus == GroupType.of(so_odd(1))
        full_minus, bar_minus = gs_descended_types(o, (-1,))
        assert full_minus == GroupType.of(so_even(1, "split"))
        assert bar_minus == full_minus  # no odd factor to swap

    def test_kernel_class_preserved(self):
        sc = scenario(
            2, (1,), (0, 1), 3, (ms(ONE),), ms(ONE), ms(MINUS, ONE, MINUS), "split", "unram_nonsplit"
        )
        o = descend(sc)
        full, _ = gs_descended_types(o, (-1,))
        assert so_even(2, "unram_nonsplit") in full.factors


class TestSplitOrbitExample:
    def test_order_five_orbits_split_at_q_eleven(self):
        # q == 1 mod 5: singleton orbits, mutually inverse, so a GL pair
        got = centralizer_type(ms(z(1, 5), z(4, 5)), 11, "symplectic")
        assert got == GroupType.of(gl(1, 1))
        # q == 3: one self-inverse orbit of size four, a unitary factor
        got = centralizer_type(ms(z(1, 5), z(2, 5), z(3, 5), z(4, 5)), 3, "symplectic")
        assert got == GroupType.of(u(1, 2))


class TestTwistHomomorphism:
    def test_tau_spreads_diagonally(self):
        from endokit.enatural import tau_map, sbar_of_t

        o = descend(MIXED)
        t = (-1,)
        image = tau_map(o, t)
        for b in o.blocks:
            assert image[b.bid] == (-1 if b.origin == "levi" else 1)
        sbar = sbar_of_t(o, t)
        base = sbar0_assign(o)
        for b in o.blocks:
            assert sbar[b.bid] == base[b.bid] * image[b.bid]

    def test_kernel_of_top_levi(self):
        from endokit.enatural import tau_L_kernel

        # the symplectic big centralizer has trivial dual center
        o = descend(ONE_BLOCK)
        amb = Ambient(o)
        assert tau_L_kernel(o, amb, top_levi(o)).order() == 1
        # a unitary factor swallowing the whole block contributes two signs
        o = descend(UNITARY)
        amb = Ambient(o)
        kern = tau_L_kernel(o, amb, top_levi(o))
        assert kern.is_finite and kern.order() == 2

    def test_kernel_matches_fiber_size(self):
        from endokit.enatural import tau_L_kernel, einst_canon

        o = descend(MIXED)
        amb = Ambient(o)
        entries = enumerate_E_natural(o, amb)
        fibers = {}
        for e in entries:
            key = (e.levi, einst_canon(o, amb, e.levi, e.t))
            fibers[key] = fibers.get(key, 0) + 1
        for (levi, _), count in fibers.items():
            assert tau_L_kernel(o, amb, levi).order() == count
