import json

import numpy as np
import pytest

from hdatail import (
    BivariateSample,
    DensityEstimate,
    EmptySelectionError,
    Reference,
    SpectralSample,
    Variant,
    antiranks,
    boundary_mass,
    detection_spectral,
    kde,
    nonstandard_spectral,
    standard_spectral,
)


def pts(sp):
    return sp.points.tolist()


class TestStandard:
    def test_k3(self, three_point):
        sp = standard_spectral(antiranks(three_point, Reference.MIN), 3)
        assert pts(sp) == pytest.approx([1 / 4, 1, 1 / 2])

    def test_k1(self, three_point):
        sp = standard_spectral(antiranks(three_point, Reference.MIN), 1)
        assert pts(sp) == [0.5]

    def test_k_equals_n_selects_all(self, rng):
        s = BivariateSample(rng.standard_normal((200, 2)))
        assert standard_spectral(antiranks(s, "min"), 200).selected == 200

    def test_wrong_reference(self, three_point):
        with pytest.raises(ValueError):
            standard_spectral(antiranks(three_point, Reference.MAX), 2)


class TestNonstandard:
    def test_k2(self, three_point):
        sp = nonstandard_spectral(antiranks(three_point, Reference.SECOND), 2)
        assert pts(sp) == pytest.approx([1 / 3, 1 / 2])

    def test_k3(self, three_point):
        sp = nonstandard_spectral(antiranks(three_point, Reference.SECOND), 3)
        assert pts(sp) == pytest.approx([3 / 5, 1 / 3, 1 / 2])

    def test_zero_first_antirank(self):
        s = BivariateSample(np.array([[10.0, 1.0], [0.0, 2.0]]))
        ar = antiranks(s, Reference.SECOND)
        assert ar.r1.tolist() == [0, 2]
        sp = nonstandard_spectral(ar, 1)
        assert pts(sp) == pytest.approx([1 / 3])


class TestDetection:
    @pytest.mark.parametrize("k, expected", [
        (1, [3 / 4]),
        (2, [3 / 4, 1 / 2]),
        (3, [1 / 2, 3 / 4, 1 / 2]),
    ])
    def test_three_point(self, three_point, k, expected):
        sp = detection_spectral(antiranks(three_point, Reference.MAX), k)
        assert pts(sp) == pytest.approx(expected)

    def test_empty_selection(self):
        # every max ties at the top, so min anti-rank is n > k
        s = BivariateSample(np.array([[1.0, 1.0]] * 5))
        with pytest.raises(EmptySelectionError):
            detection_spectral(antiranks(s, "max"), 2)


class TestSpectralSample:
    def test_mass_one(self):
        sp = SpectralSample(Variant.STANDARD, np.linspace(0, 1, 7), 7)
        assert sp.total_mass() == 1.0

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            SpectralSample(Variant.STANDARD, [1.5], 1)


class TestKde:
    def test_point_mass(self):
        d = kde(SpectralSample("standard", [0.5] * 20, 20), bandwidth=0.05)
        assert d.grid[np.argmax(d.density)] == pytest.approx(0.5, abs=0.002)
        assert d.integral() == pytest.approx(1.0, abs=1e-3)

    def test_two_atoms_symmetric(self):
        d = kde(SpectralSample("standard", [0.0, 1.0], 2), gridsize=501)
        np.testing.assert_allclose(d.density, d.density[::-1], rtol=1e-10)
        half = np.trapezoid(d.density[:251], d.grid[:251])
        assert half == pytest.approx(0.5, abs=1e-3)

    def test_uniform(self):
        d = kde(SpectralSample("standard", (np.arange(1000) + 0.5) / 1000, 1000))
        inner = (d.grid >= 0.1) & (d.grid <= 0.9)
        assert np.all(np.abs(d.density[inner] - 1) < 0.1)

    @pytest.mark.parametrize("bw", [0.01, 0.1, 0.5, 2.0])
    def test_integrates_to_one(self, rng, bw):
        d = kde(SpectralSample("standard", rng.beta(0.3, 0.3, 300), 300), bandwidth=bw)
        assert d.integral() == pytest.approx(1.0, abs=1e-3)

    def test_bandwidth_floor(self):
        d = kde(SpectralSample("standard", [0.5] * 50, 50))
        assert d.bandwidth == 0.01

    def test_json_round_trip(self, rng):
        d = kde(SpectralSample("standard", rng.random(40), 40), gridsize=33)
        back = DensityEstimate.from_dict(json.loads(d.to_json()))
        np.testing.assert_array_equal(back.density, d.density)
        assert back.bandwidth == d.bandwidth

    def test_needs_two_points(self):
        with pytest.raises(ValueError):
            kde(SpectralSample("standard", [0.3], 1))


class TestBoundaryMass:
    def test_examples(self):
        assert boundary_mass(SpectralSample("standard", [0.01, 0.99, 0.5], 3)) == \
            pytest.approx((1 / 3, 1 / 3, 1 / 3))
        assert boundary_mass(SpectralSample("standard", [0, 0, 0], 3)) == (1, 0, 0)
        assert boundary_mass(SpectralSample("standard", [0.5], 1)) == (0, 0, 1)

    def test_sums_to_one_exactly(self, rng):
        for m in range(1, 200, 7):
            m0, m1, rest = boundary_mass(SpectralSample("standard", rng.random(m), m), 0.13)
            assert (m0 + m1) + rest == 1.0
