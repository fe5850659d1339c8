"""Stretch factors and the Lipschitz metric on the spine."""

import math
import random

import pytest

from outerspine import (
    Word,
    d_L,
    d_sym,
    format_word,
    parse_word,
    rescale,
    rose,
    sigma_scale,
    spine_points,
    stretch,
    transform,
    translation_length,
    unit_rose,
)
from outerspine.words import elementary_automorphisms

from oracles import reduced_words

X = unit_rose(3)
Y = rose([0.5, 0.25, 0.25])


class TestStretch:
    def test_identity(self):
        rep = stretch(X, X)
        assert rep.factor == pytest.approx(1.0)

    def test_rose_pair_forward(self):
        rep = stretch(X, Y)
        assert rep.factor == pytest.approx(1.5)
        assert format_word(rep.witness) == "a"

    def test_rose_pair_backward(self):
        rep = stretch(Y, X)
        assert rep.factor == pytest.approx(4 / 3)
        assert format_word(rep.witness) in ("b", "c")

    def test_witness_attains_factor(self):
        rep = stretch(X, Y)
        num = translation_length(Y, rep.witness)[0]
        den = translation_length(X, rep.witness)[0]
        assert num / den == pytest.approx(rep.factor)


class TestDistance:
    def test_zero_on_equal(self):
        assert d_L(X, X) == pytest.approx(0.0)
        assert d_sym(X, X) == pytest.approx(0.0)

    def test_rose_pair_values(self):
        assert d_L(X, Y) == pytest.approx(math.log(1.5))
        assert d_L(Y, X) == pytest.approx(math.log(4 / 3))
        assert d_sym(X, Y) == pytest.approx(math.log(2))

    def test_requires_unit_volume(self):
        with pytest.raises(ValueError):
            d_L(X, rescale(Y, 2.0))

    def test_scale_law(self):
        # d_L against a rescaled target shifts by exactly log c
        for c in (2.0, 0.5, 3.0):
            got = d_L(X, rescale(Y, c), normalized=False)
            assert got == pytest.approx(d_L(X, Y) + math.log(c))

    def test_word_ratio_dominated_short_words(self):
        val = d_L(X, Y)
        for w in reduced_words(3, 5):
            word = Word(3, w)
            num = translation_length(Y, word)[0]
            den = translation_length(X, word)[0]
            assert math.log(num / den) <= val + 1e-12

    def test_directed_triangle_inequality(self):
        pts = spine_points(3, 0.05, seed=21, n=6)
        for a in pts[:3]:
            for b in pts[2:5]:
                for c in pts[3:]:
                    assert d_L(a, c) <= d_L(a, b) + d_L(b, c) + 1e-9

    def test_out_invariance(self):
        pts = spine_points(3, 0.05, seed=5, n=4)
        for psi in elementary_automorphisms(3)[:8]:
            for a, b in zip(pts, pts[1:]):
                assert d_sym(transform(a, psi), transform(b, psi)) == pytest.approx(
                    d_sym(a, b), abs=1e-9
                )


class TestSigmaScale:
    def test_self(self):
        assert sigma_scale(X, X) == pytest.approx(1.0)

    def test_rescaled(self):
        assert sigma_scale(X, rescale(X, 2.0)) == pytest.approx(0.5)

    def test_rose_pair(self):
        assert sigma_scale(X, Y) == pytest.approx(2 / 3)

    def test_scaled_copy_stretches_exactly_one(self):
        b = sigma_scale(X, Y)
        assert stretch(X, rescale(Y, b)).factor == pytest.approx(1.0)
