"""Seeded spine samplers: reproducibility and constraint respect."""

import random

import pytest

from outerspine import (
    SampleError,
    balance_param,
    d_sym,
    dual,
    in_spine,
    parse_word,
    systole,
    unit_rose,
    with_lengths,
)
from outerspine.sampling import (
    balanced_point,
    ball_points,
    jitter,
    random_automorphism,
    repair,
    spine_points,
)

ROSE = unit_rose(3)
EPS = 0.05


class TestSpinePoints:
    def test_count_and_constraints(self):
        pts = spine_points(3, EPS, 101, 12)
        assert len(pts) == 12
        for p in pts:
            assert in_spine(p, EPS)
            assert p.volume == pytest.approx(1.0, abs=1e-9)

    def test_seed_reproducibility(self):
        a = spine_points(3, EPS, 7, 8)
        b = spine_points(3, EPS, 7, 8)
        assert [p.key() for p in a] == [q.key() for q in b]

    def test_seeds_vary_the_draw(self):
        a = spine_points(3, EPS, 1, 6)
        b = spine_points(3, EPS, 2, 6)
        assert {p.key() for p in a} != {q.key() for q in b}

    def test_topology_variety(self):
        pts = spine_points(3, EPS, 31, 20)
        assert len({len(p.edges) for p in pts}) >= 2


class TestRepair:
    def test_inside_point_untouched(self):
        assert repair(ROSE, EPS) is ROSE

    def test_thin_point_pulled_in(self):
        thin = with_lengths(ROSE, {"a": 0.01, "b": 0.01, "c": 0.98})
        fixed = repair(thin, EPS)
        assert in_spine(fixed, EPS)
        assert fixed.volume == pytest.approx(1.0, abs=1e-12)
        # repair stops at the first admissible blend, near the boundary
        assert systole(fixed)[0] == pytest.approx(EPS, abs=1e-3)

    def test_unreachable_epsilon(self):
        with pytest.raises(SampleError):
            repair(with_lengths(ROSE, {"a": 0.2, "b": 0.2, "c": 0.6}), 0.4)


class TestJitter:
    def test_stays_in_spine_at_volume_one(self):
        rng = random.Random(0)
        for _ in range(10):
            g = jitter(ROSE, rng, 0.8, EPS)
            assert in_spine(g, EPS)
            assert g.volume == pytest.approx(1.0, abs=1e-9)

    def test_seeded(self):
        a = jitter(ROSE, random.Random(5), 0.5, EPS)
        b = jitter(ROSE, random.Random(5), 0.5, EPS)
        assert a.key() == b.key()


class TestRandomAutomorphism:
    def test_invertible_with_right_rank(self):
        rng = random.Random(3)
        for _ in range(20):
            phi = random_automorphism(rng, 3, rng.randrange(1, 7))
            assert phi.rank == 3
            assert phi.invertible


class TestBallPoints:
    def test_within_radius_and_seeded(self):
        pts = ball_points(ROSE, 0.6, 10, 13, EPS)
        assert len(pts) == 10
        for p in pts:
            assert d_sym(ROSE, p) <= 0.6 + 1e-9
            assert in_spine(p, EPS)
        again = ball_points(ROSE, 0.6, 10, 13, EPS)
        assert [p.key() for p in pts] == [q.key() for q in again]

    def test_zero_radius(self):
        pts = ball_points(ROSE, 0.0, 3, 1, EPS)
        assert all(p.key() == ROSE.key() for p in pts)

    def test_negative_radius_rejected(self):
        with pytest.raises(ValueError):
            ball_points(ROSE, -1.0, 3, 1, EPS)

    def test_exhaustion_reported(self):
        with pytest.raises(SampleError):
            ball_points(ROSE, 0.05, 50, 1, EPS, max_tries=3)


class TestBalancedPoint:
    MU = dual(parse_word("a", 3))
    NU = dual(parse_word("b", 3))

    def test_hits_target(self):
        for s in (-0.4, 0.0, 0.7):
            pt = balanced_point(self.MU, self.NU, s, seed=2, eps=EPS)
            assert in_spine(pt, EPS)
            assert balance_param(pt, self.MU, self.NU) == pytest.approx(s, abs=1e-6)

    def test_unreachable_target(self):
        with pytest.raises(SampleError):
            balanced_point(self.MU, self.NU, 50.0, seed=2, eps=EPS)
