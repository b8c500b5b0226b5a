"""Secant dimension measurements: classical values, laws, and stability."""

from __future__ import annotations

import pytest

from secantry.catalog import build_family
from secantry.linalg import RowReducer, derive_rng
from secantry.terracini import (contact_shape, defect, expected_secant_dim,
                                gauss_fiber_dim, min_defective_scan,
                                secant_dim, tangential_projection)
from secantry.variety import (NotParametric, cone_over, join_linear,
                              projective_space, random_center,
                              rational_normal_curve, scroll, segre_pair,
                              veronese)

from conftest import SEED


class TestSecantDim:
    def test_rational_normal_quintic(self, ctxs, rng):
        rep = secant_dim(rational_normal_curve(5), 1, ctxs, rng, trials=3)
        assert rep.chain == [1, 3]
        assert rep.sigma_k == 3 and rep.delta_k == 0

    def test_double_embedding_of_p3(self, ctxs, rng):
        rep = secant_dim(veronese(projective_space(3), 2), 1, ctxs, rng, trials=3)
        assert (rep.r, rep.chain, rep.sigma_k, rep.delta_k) == (9, [3, 6], 7, 1)

    def test_segre_cube_pair(self, ctxs, rng):
        rep = secant_dim(segre_pair(projective_space(3), projective_space(3)),
                         1, ctxs, rng, trials=3)
        assert rep.chain == [6, 11]
        assert rep.delta_k == 2

    def test_agreement_and_determinism(self, ctxs):
        spec = veronese(scroll([1, 1]), 2)
        a = secant_dim(spec, 2, ctxs, derive_rng(SEED, "agree"), trials=3)
        b = secant_dim(spec, 2, ctxs, derive_rng(SEED, "agree"), trials=3)
        assert a == b
        assert a.agreement
        assert a.primes == [c.p for c in ctxs]

    def test_expected_dim_formula(self):
        assert expected_secant_dim(9, 3, 1) == 7
        assert expected_secant_dim(5, 3, 1) == 5
        assert expected_secant_dim(17, 3, 3) == 15


class TestDefect:
    def test_linear_space_never_defective(self, ctxs, rng):
        for k in (1, 2, 3):
            assert defect(projective_space(2), k, ctxs, rng, trials=2) == 0

    def test_bilinear_by_cubics_embedding(self, ctxs, rng):
        # P^1 x P^2 by divisors of bidegree (1,3): 3-defect 0, 4-defect 1.
        spec = segre_pair(projective_space(1), veronese(projective_space(2), 3))
        assert defect(spec, 3, ctxs, rng, trials=3) == 0
        rep = secant_dim(spec, 4, ctxs, rng, trials=3)
        assert rep.delta_k == 1 and rep.chain[4] == 18


class TestScan:
    def test_minimal_threefold_not_defective(self, ctxs):
        # Secants of the minimal threefold fill P^5 immediately; confirm the
        # chain with a from-scratch stacked-rank oracle.
        spec = scroll([1, 1, 1])
        rng = derive_rng(SEED, "scan-oracle")
        scan = min_defective_scan(spec, 2, ctxs, rng, trials=3)
        assert scan.first_defective is None
        red = RowReducer(ctxs[0].p)
        oracle_chain = []
        for _ in range(3):
            pf = spec.sample(ctxs[0], derive_rng(SEED, "oracle", len(oracle_chain)))
            for row in pf.frame:
                red.add(row)
            oracle_chain.append(red.rank - 1)
        assert oracle_chain == scan.top.chain

    def test_double_embedding_minimal_threefold(self, ctxs, rng):
        entry = build_family("F13", 3, "full")
        scan = min_defective_scan(entry.spec, 3, ctxs, rng, trials=3)
        assert scan.first_defective == 3
        assert scan.top.chain == [3, 7, 11, 14]

    def test_fibered_join_over_curve(self, ctxs, rng):
        # Vertex block of dimension 2k over a curve: minimally k-defective.
        entry = build_family("F11", 2)
        scan = min_defective_scan(entry.spec, 3, ctxs, rng, trials=2)
        assert scan.first_defective == 2

    def test_reports_share_chain_prefix(self, ctxs, rng):
        scan = min_defective_scan(veronese(projective_space(3), 2), 3, ctxs,
                                  rng, trials=2)
        for h, rep in enumerate(scan.reports):
            assert rep.chain == scan.top.chain[:h + 1]


class TestTangential:
    def test_below_critical_order_image_is_threefold(self, ctxs, rng):
        spec = build_family("F13", 3, "full").spec
        for h in (1, 2):
            assert tangential_projection(spec, h, ctxs, rng).n_k == 3

    def test_vertex_point_family_gives_curve_image(self, ctxs, rng):
        spec = build_family("F1", 2, "point").spec
        tan = tangential_projection(spec, 2, ctxs, rng)
        assert tan.n_k == 1 and tan.m_k == 2

    def test_vertex_line_family_gives_surface_image(self, ctxs, rng):
        spec = build_family("F1", 2, "line").spec
        assert tangential_projection(spec, 2, ctxs, rng).n_k == 2

    def test_projected_spec_composes(self, ctxs, rng):
        spec = veronese(projective_space(3), 2)
        tan = tangential_projection(spec, 1, ctxs, rng)
        assert tan.n_k == 2
        pf = tan.projected_spec.sample(ctxs[0], rng)
        assert len(pf.frame) == tan.n_k + 1


class TestChainLaw:
    CORPUS = [
        ("veronese_p3", lambda: veronese(projective_space(3), 2), 3),
        ("segre", lambda: segre_pair(projective_space(2), projective_space(2)), 2),
        ("f13", lambda: build_family("F13", 2, "full").spec, 3),
        ("f12", lambda: build_family("F12", 2, "narrow").spec, 3),
    ]

    @pytest.mark.parametrize("name,make,k_bound", CORPUS)
    def test_tangential_image_matches_chain_increment(self, ctxs, name, make, k_bound):
        # s^(h) = n_h + s^(h-1) + 1 with n_h measured independently.
        spec = make()
        rng = derive_rng(SEED, "chainlaw", name)
        rep = secant_dim(spec, k_bound, ctxs, rng, trials=2)
        for h in range(1, k_bound + 1):
            if rep.chain[h - 1] >= rep.r:
                break
            tan = tangential_projection(spec, h, ctxs, rng)
            assert rep.chain[h] == tan.n_k + rep.chain[h - 1] + 1

    @pytest.mark.parametrize("name,make,k_bound", CORPUS)
    def test_filling_step_and_subadditivity(self, ctxs, name, make, k_bound):
        spec = make()
        rng = derive_rng(SEED, "fill", name)
        rep = secant_dim(spec, k_bound, ctxs, rng, trials=2)
        for h in range(k_bound):
            assert rep.chain[h + 1] <= rep.chain[h] + spec.dim + 1
            if rep.chain[h] == rep.r - 1:
                assert rep.chain[h + 1] == rep.r


class TestConeLaws:
    def test_ruled_join_adds_vertex_plus_one(self, ctxs):
        # s^(k)(join) = s^(k)(Y) + s + 1 for k >= s, any base Y.
        rng = derive_rng(SEED, "join-law")
        base = rational_normal_curve(4)
        chain_y = secant_dim(base, 3, ctxs, rng, trials=2).chain
        for s in (0, 1, 2):
            block = random_center(base.ambient, s, rng)
            chain_x = secant_dim(join_linear(base, block), 3, ctxs, rng, trials=2).chain
            for k in range(s, 4):
                assert chain_x[k] == chain_y[k] + s + 1

    def test_full_cone_adds_vertex_plus_one_everywhere(self, ctxs):
        rng = derive_rng(SEED, "cone-law")
        base = scroll([2, 1])
        chain_y = secant_dim(base, 3, ctxs, rng, trials=2).chain
        for v in (0, 2, 4):
            chain_x = secant_dim(cone_over(base, v), 3, ctxs, rng, trials=2).chain
            assert chain_x == [c + v + 1 for c in chain_y]


class TestGaussFibers:
    def test_plane(self, ctxs, rng):
        assert gauss_fiber_dim(projective_space(2), ctxs, rng) == 2

    def test_cone_over_twisted_cubic(self, ctxs, rng):
        assert gauss_fiber_dim(cone_over(rational_normal_curve(3), 0),
                               ctxs, rng) == 1

    def test_smooth_quadric(self, ctxs, rng):
        # Hand-scale oracle: for the chart (1, s, t, st) the nonconstant
        # 3x3 minors of the frame are +-s, +-t, +-st, whose gradient matrix
        # [[1,0],[0,1],[t,s]] has rank 2, so the Gauss map is finite.
        assert gauss_fiber_dim(segre_pair(projective_space(1),
                                          projective_space(1)), ctxs, rng) == 0

    def test_scroll_surface_not_developable(self, ctxs, rng):
        assert gauss_fiber_dim(scroll([2, 1]), ctxs, rng) == 0

    def test_implicit_tree_rejected(self, ctxs, rng):
        from secantry.mpoly import random_poly
        from secantry.variety import hypersurface
        spec = hypersurface(3, random_poly(4, 2, rng))
        with pytest.raises(NotParametric):
            gauss_fiber_dim(spec, ctxs, rng)


class TestContactShape:
    def test_vertex_point_family(self, ctxs, rng):
        spec = build_family("F1", 2, "point").spec
        shape = contact_shape(spec, 2, ctxs, rng, trials=2)
        assert shape.classification == "DivisorViaCurveImage"
        assert shape.gamma_lower == 2

    def test_double_embedding_family(self, ctxs, rng):
        spec = build_family("F13", 2, "full").spec
        shape = contact_shape(spec, 2, ctxs, rng, trials=2)
        assert shape.classification == "NotDivisorial"
        assert shape.gamma_lower == 1

    def test_secant_line_projection_family(self, ctxs, rng):
        spec = build_family("F14", 2).spec
        assert contact_shape(spec, 2, ctxs, rng,
                             trials=2).classification == "NotDivisorial"

    def test_developable_image(self, ctxs, rng):
        spec = build_family("F11", 2).spec
        assert contact_shape(spec, 2, ctxs, rng,
                             trials=2).classification == "DivisorViaDevelopableImage"

    def test_implicit_image_is_indeterminate(self, ctxs, rng):
        spec = build_family("F2", 3, "cone").spec
        assert contact_shape(spec, 3, ctxs, rng,
                             trials=2).classification == "Indeterminate"


class TestCrossPrime:
    def test_chains_agree_between_primes(self, ctxs):
        rng = derive_rng(SEED, "crossprime")
        specs = [veronese(projective_space(3), 2),
                 build_family("F13", 2, "full").spec,
                 build_family("F12", 2, "wide").spec]
        for spec in specs:
            per_prime = [secant_dim(spec, 2, [ctx], rng, trials=2).chain
                         for ctx in ctxs]
            assert per_prime[0] == per_prime[1]
