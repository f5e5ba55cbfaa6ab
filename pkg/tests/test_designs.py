import numpy as np
import pytest

from toptdes.designs import (
    Design,
    circular_distance,
    convex_combine,
    make_design,
    merge_close,
    point_mass,
    support_distance,
    weight_distance,
)
from toptdes.errors import InvalidDesignError
from toptdes.fourier import TWO_PI

import oracles


def test_make_design_sorts_and_normalizes():
    d = make_design([4.0, 1.0, 2.0], [0.2, 0.5, 0.3])
    np.testing.assert_allclose(d.points, [1.0, 2.0, 4.0])
    np.testing.assert_allclose(d.weights, [0.5, 0.3, 0.2])
    assert d.support_size == 3


def test_make_design_wraps_points():
    d = make_design([TWO_PI + 0.5, -0.5], [0.5, 0.5])
    np.testing.assert_allclose(sorted(d.points), [0.5, TWO_PI - 0.5])
    assert np.all(d.points < TWO_PI)
    assert np.all(d.points >= 0.0)


def test_make_design_tiny_negative_wraps_to_zero():
    # np.mod(-1e-18, 2*pi) returns 2*pi exactly; the wrap must land at 0
    d = make_design([-1e-18], [1.0])
    assert d.points[0] == 0.0


def test_make_design_drops_zero_weights_and_merges_duplicates():
    d = make_design([1.0, 1.0 + 1e-12, 3.0], [0.25, 0.25, 0.5])
    assert d.support_size == 2
    np.testing.assert_allclose(d.points, [1.0, 3.0], atol=1e-9)
    np.testing.assert_allclose(d.weights, [0.5, 0.5])
    d2 = make_design([1.0, 2.0], [1.0, 0.0])
    assert d2.support_size == 1


def test_make_design_validation():
    with pytest.raises(InvalidDesignError):
        make_design([], [])
    with pytest.raises(InvalidDesignError):
        make_design([1.0, 2.0], [0.5])
    with pytest.raises(InvalidDesignError):
        make_design([1.0], [-0.1])
    with pytest.raises(InvalidDesignError):
        make_design([np.nan], [1.0])
    with pytest.raises(InvalidDesignError):
        make_design([1.0], [0.0])


def test_canonicalization_idempotent(rng):
    for _ in range(100):
        pts, w = oracles.random_design_arrays(rng, 1, 9)
        d1 = make_design(pts, w)
        d2 = make_design(d1.points, d1.weights)
        np.testing.assert_array_equal(d1.points, d2.points)
        np.testing.assert_array_equal(d1.weights, d2.weights)


def test_merge_close_across_the_seam():
    d = make_design([0.001, TWO_PI - 0.001, 3.0], [0.4, 0.4, 0.2])
    merged = merge_close(d, 0.01)
    assert merged.support_size == 2
    # cluster mean of the seam pair sits at 0 (circular mean)
    seam = merged.points[np.argmin(np.abs(merged.points))]
    assert min(seam, TWO_PI - seam) < 1e-9
    assert merged.weights.sum() == pytest.approx(1.0, abs=1e-12)


def test_merge_close_never_increases_support(rng):
    for _ in range(50):
        pts, w = oracles.random_design_arrays(rng, 2, 8, min_sep=0.01)
        d = make_design(pts, w)
        for delta in (0.0, 0.05, 0.5):
            merged = merge_close(d, delta)
            assert merged.support_size <= d.support_size
            assert merged.weights.sum() == pytest.approx(1.0, abs=1e-12)


def test_circular_distance():
    assert circular_distance(0.1, TWO_PI - 0.1) == pytest.approx(0.2, abs=1e-12)
    assert circular_distance(1.0, 1.0) == 0.0
    assert circular_distance(0.0, np.pi) == pytest.approx(np.pi, abs=1e-12)
    arr = circular_distance(np.array([0.0, 1.0]), np.array([TWO_PI - 0.5, 1.5]))
    np.testing.assert_allclose(arr, [0.5, 0.5], atol=1e-12)


def test_support_and_weight_distance():
    d1 = make_design([0.0, np.pi], [0.5, 0.5])
    d2 = make_design([0.1, np.pi], [0.4, 0.6])
    assert support_distance(d1, d1) == 0.0
    assert support_distance(d1, d2) == pytest.approx(0.1, abs=1e-12)
    assert weight_distance(d1, d2) == pytest.approx(0.1, abs=1e-12)
    assert weight_distance(d1, d1) == 0.0


def test_convex_combine_and_point_mass():
    d1 = point_mass(1.0)
    d2 = point_mass(2.0)
    mix = convex_combine(d1, d2, 0.25)
    np.testing.assert_allclose(mix.points, [1.0, 2.0])
    np.testing.assert_allclose(mix.weights, [0.75, 0.25])
    assert convex_combine(d1, d2, 0.0).support_size == 1
    with pytest.raises(InvalidDesignError):
        convex_combine(d1, d2, 1.5)


def test_json_round_trip_is_bit_exact(rng):
    for _ in range(25):
        pts, w = oracles.random_design_arrays(rng, 1, 7)
        d = make_design(pts, w)
        back = Design.from_json(d.to_json())
        np.testing.assert_array_equal(d.points, back.points)
        np.testing.assert_array_equal(d.weights, back.weights)
    with pytest.raises(InvalidDesignError):
        Design.from_dict({"points": [1.0]})
