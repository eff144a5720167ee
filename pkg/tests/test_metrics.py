"""Shifted patches, divergence, flip rate and consistency curves."""

import numpy as np
import pytest

from waveshift import (ShiftProbe, extract_shifted_patches, feature_consistency,
                       kl_divergence, mean_flip_rate)
from waveshift.probes import cmod_tone, random_inband_tone, rmax_tone


def upsample_shift_oracle(img, shift, patch, anchor=(0, 0)):
    """Independent path: explicit 2x bilinear grid, integer move, decimate."""
    h, w = img.shape
    up = np.zeros((2 * h - 1, 2 * w - 1))
    for i in range(2 * h - 1):
        for j in range(2 * w - 1):
            i0, i1 = i // 2, min((i + 1) // 2, h - 1)
            j0, j1 = j // 2, min((j + 1) // 2, w - 1)
            up[i, j] = 0.25 * (img[i0, j0] + img[i0, j1]
                               + img[i1, j0] + img[i1, j1])
    ty = 2 * anchor[0] + int(round(2 * shift[0]))
    tx = 2 * anchor[1] + int(round(2 * shift[1]))
    return up[ty:ty + 2 * patch:2, tx:tx + 2 * patch:2]


class TestExtractShiftedPatches:
    def test_zero_shift_returns_base_patch(self, rng):
        img = rng.standard_normal((16, 16))
        probe = ShiftProbe("horizontal", (0.0,), 8)
        np.testing.assert_array_equal(extract_shifted_patches(img, probe)[0],
                                      img[:8, :8])

    def test_integer_shift_roundtrip_exact(self, rng):
        img = rng.standard_normal((20, 20))
        fwd = ShiftProbe("diagonal", (3.0,), 8, anchor=(2, 2))
        shifted = extract_shifted_patches(img, fwd)[0]
        back = ShiftProbe("diagonal", (-3.0,), 8, anchor=(5, 5))
        np.testing.assert_array_equal(extract_shifted_patches(img, back)[0],
                                      img[2:10, 2:10])
        np.testing.assert_array_equal(shifted, img[5:13, 5:13])

    def test_half_pixel_matches_upsample_oracle(self, rng):
        img = rng.standard_normal((14, 14))
        probe = ShiftProbe("horizontal", (0.5, 1.5), 6, anchor=(3, 3))
        got = extract_shifted_patches(img, probe)
        for s, patch in zip(probe.shifts, got):
            want = upsample_shift_oracle(img, (0.0, s), 6, anchor=(3, 3))
            np.testing.assert_allclose(patch, want, atol=1e-6)

    def test_two_half_shifts_compose_on_upsampled_grid(self, rng):
        """Shifting 0.5 px twice lands on the integer-shift grid point of
        the upsampled image."""
        img = rng.standard_normal((14, 14))
        one = extract_shifted_patches(
            img, ShiftProbe("vertical", (1.0,), 6, anchor=(2, 2)))[0]
        up = upsample_shift_oracle(img, (0.5 + 0.5, 0.0), 6, anchor=(2, 2))
        np.testing.assert_allclose(up, one, atol=1e-6)

    def test_insufficient_margin_errors(self, rng):
        img = rng.standard_normal((8, 8))
        with pytest.raises(ValueError, match="outside"):
            extract_shifted_patches(img, ShiftProbe("horizontal", (4.0,), 6))

    def test_quantization_enforced(self):
        with pytest.raises(ValueError, match="half"):
            ShiftProbe("horizontal", (0.3,), 4)


class TestKlDivergence:
    def test_identical_distributions_give_zero(self, rng):
        p = rng.random(10)
        p /= p.sum()
        assert kl_divergence(p, p) == 0.0

    def test_closed_form_case(self):
        got = kl_divergence([1.0, 0.0], [0.5, 0.5])
        assert abs(got - np.log(2.0)) < 1e-12

    def test_matches_direct_sum_oracle(self, rng):
        p = rng.random(16); p /= p.sum()
        q = rng.random(16); q /= q.sum()
        want = sum(pi * np.log(pi / qi) for pi, qi in zip(p, q) if pi > 0)
        assert abs(kl_divergence(p, q) - want) < 1e-12

    def test_invalid_simplex_errors(self):
        with pytest.raises(ValueError):
            kl_divergence([0.5, 0.6], [0.5, 0.5])
        with pytest.raises(ValueError):
            kl_divergence([1.2, -0.2], [0.5, 0.5])

    def test_nonnegative_on_random_pairs(self, rng):
        for _ in range(100):
            p = rng.random(8); p /= p.sum()
            q = rng.random(8); q /= q.sum()
            assert kl_divergence(p, q) >= 0.0


class TestMeanFlipRate:
    def test_constant_labels_give_zero(self):
        labels = {"horizontal": np.ones((9, 5), dtype=int)}
        assert mean_flip_rate(labels) == 0.0

    def test_alternating_labels_give_one(self):
        seq = np.tile(np.arange(9) % 2, (4, 1)).T
        assert mean_flip_rate({"vertical": seq}) == 1.0

    def test_three_axis_hand_count(self):
        labels = {
            "horizontal": np.array([[0, 0], [0, 1], [1, 1]]),
            "vertical": np.array([[2, 2], [2, 2], [2, 2]]),
            "diagonal": np.array([[0, 1], [1, 1], [0, 0]]),
        }
        # flips per axis over 2 transitions x 2 images: 2/4, 0/4, 3/4
        want = (0.5 + 0.0 + 0.75) / 3
        assert abs(mean_flip_rate(labels) - want) < 1e-12

    def test_baseline_normalization(self):
        seq = np.tile(np.arange(5) % 2, (3, 1)).T
        assert abs(mean_flip_rate({"h": seq}, baseline=0.5) - 2.0) < 1e-12

    def test_invariant_under_relabeling(self, rng):
        raw = rng.integers(0, 4, size=(9, 12))
        perm = rng.permutation(4)
        a = mean_flip_rate({"h": raw})
        b = mean_flip_rate({"h": perm[raw]})
        assert a == b

    def test_empty_sequences_error(self):
        with pytest.raises(ValueError):
            mean_flip_rate({})
        with pytest.raises(ValueError):
            mean_flip_rate({"h": np.zeros((1, 4), dtype=int)})


class TestFeatureConsistency:
    def test_zero_shift_distance_is_zero(self, bank2):
        kern = bank2.kernels[6]
        probe = random_inband_tone(bank2.cell_centers[6], np.pi / 4,
                                   np.random.default_rng(3))

        def op(s):
            return cmod_tone(kern, probe, (14, 14), (s, 0.0), 2)

        report = feature_consistency(op, [0.0, 1.0], stride=4)
        assert report.distances[0] == 0.0

    def test_full_period_shift_realigns_to_zero(self, bank2):
        """One full output stride of input shift is exactly covariant."""
        kern = bank2.kernels[9]
        probe = random_inband_tone(bank2.cell_centers[9], np.pi / 4,
                                   np.random.default_rng(5))

        def op(s):
            return cmod_tone(kern, probe, (14, 14), (s, 0.0), 2)

        report = feature_consistency(op, [0.0, 4.0], stride=4)
        assert report.distances[1] < 1e-6

    def test_rmax_eight_pixel_covariance_at_stride_four(self, bank3):
        """At conv stride 4 the pooled output shifts one sample exactly per
        eight input pixels, so the realigned distance vanishes."""
        idx = bank3.flat_index(0, 2, 3)
        kern = bank3.kernels[idx]
        probe = random_inband_tone(bank3.cell_centers[idx], np.pi / 8,
                                   np.random.default_rng(9))

        def op(s):
            return rmax_tone(kern.real, probe, (14, 14), (s, 0.0), 4)

        report = feature_consistency(op, [0.0, 8.0], stride=8)
        assert report.distances[1] < 1e-6
        mid = feature_consistency(op, [2.5], stride=8)
        assert mid.distances[0] > 1e-3

    def test_cmod_curve_below_rmax_curve(self, bank2, rng):
        shifts = [0.5 * t for t in range(1, 8)]
        better = total = 0
        for ki in (5, 6, 9, 10, 21, 26):
            kern = bank2.kernels[ki]
            probe = random_inband_tone(bank2.cell_centers[ki], np.pi / 4, rng)

            def op_c(s):
                return cmod_tone(kern, probe, (14, 14), (s, 0.0), 2)

            def op_r(s):
                return rmax_tone(kern.real, probe, (14, 14), (s, 0.0), 2)

            rep_c = feature_consistency(op_c, shifts, stride=4)
            rep_r = feature_consistency(op_r, shifts, stride=4)
            for dc, dr in zip(rep_c.distances, rep_r.distances):
                total += 1
                better += dc <= dr
        assert better / total >= 0.95
