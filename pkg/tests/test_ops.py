"""Spatial operators against naive oracles and algebraic identities."""

import numpy as np
import pytest

from waveshift import (bias_relu, blur_pool, cmod, conv_layer, cross_correlate,
                       luminance, max_pool, modulus, relu, rmax, subsample)
from waveshift.probes import ToneProbe, cmod_tone, random_inband_tone, rmax_tone


def naive_cross_correlate_valid(x, v):
    """Double-sum oracle for (x (star) v) on the interior grid."""
    h = x.shape[0] - v.shape[0] + 1
    w = x.shape[1] - v.shape[1] + 1
    out = np.zeros((h, w), dtype=np.result_type(x, v))
    for i in range(h):
        for j in range(w):
            for a in range(v.shape[0]):
                for b in range(v.shape[1]):
                    out[i, j] += x[i + a, j + b] * v[a, b]
    return out


class TestCrossCorrelate:
    def test_centered_unit_impulse_is_identity(self, rng):
        x = rng.standard_normal((10, 12))
        v = np.zeros((3, 3))
        v[1, 1] = 1.0
        np.testing.assert_allclose(cross_correlate(x, v, origin="center"), x)

    def test_offset_impulse_shifts(self, rng):
        x = rng.standard_normal((8, 8))
        v = np.zeros((3, 3))
        v[2, 1] = 1.0
        out = cross_correlate(x, v, origin=(0, 0), boundary="periodic")
        np.testing.assert_allclose(out, np.roll(x, (-2, -1), axis=(0, 1)))

    def test_matches_double_sum_oracle(self, rng):
        x = rng.standard_normal((3, 3))
        v = rng.standard_normal((2, 2))
        got = cross_correlate(x, v, mode="valid")
        np.testing.assert_allclose(got, naive_cross_correlate_valid(x, v),
                                   atol=1e-12)

    def test_empty_kernel_errors(self, rng):
        with pytest.raises(ValueError, match="empty"):
            cross_correlate(rng.standard_normal((4, 4)), np.zeros((0, 2)))


class TestSubsample:
    def test_identity_at_unit_factor(self, rng):
        x = rng.standard_normal((5, 5))
        np.testing.assert_array_equal(subsample(x, 1), x)

    def test_ramp_at_factor_two(self):
        ii, jj = np.mgrid[0:4, 0:4]
        x = ii + 4 * jj
        np.testing.assert_array_equal(subsample(x, 2), [[0, 8], [2, 10]])

    def test_composition(self, rng):
        x = rng.standard_normal((16, 16))
        np.testing.assert_array_equal(subsample(subsample(x, 2), 2),
                                      subsample(x, 4))

    def test_nonpositive_factor_errors(self, rng):
        with pytest.raises(ValueError):
            subsample(rng.standard_normal((4, 4)), 0)


class TestConvLayer:
    def test_impulse_kernels_identity(self, rng):
        X = rng.standard_normal((1, 6, 6))
        V = np.zeros((2, 1, 3, 3))
        V[:, 0, 1, 1] = 1.0
        out = conv_layer(X, V, 1, origin="center")
        np.testing.assert_allclose(out[0], X[0])
        np.testing.assert_allclose(out[1], X[0])

    def test_monochrome_kernels_factor_through_luminance(self, rng):
        """Shared kernels scaled per channel equal one correlation of the
        weighted channel mix."""
        X = rng.standard_normal((3, 16, 16))
        w = rng.standard_normal((5, 5))
        mu = np.array([0.2, 0.5, 0.3])
        V = mu[None, :, None, None] * w[None, None]
        via_layer = conv_layer(X, V, 2)
        via_lum = subsample(cross_correlate(luminance(X, mu), w), 2)
        np.testing.assert_allclose(via_layer[0], via_lum, atol=1e-12)

    def test_matches_loop_nest_oracle(self, rng):
        X = rng.standard_normal((2, 7, 7))
        V = rng.standard_normal((2, 2, 3, 3))
        got = conv_layer(X, V, 2, mode="valid")
        for l in range(2):
            want = sum(naive_cross_correlate_valid(X[k], V[l, k])
                       for k in range(2))[::2, ::2]
            np.testing.assert_allclose(got[l], want, atol=1e-12)

    def test_channel_mismatch_errors(self, rng):
        with pytest.raises(ValueError, match="channel"):
            conv_layer(rng.standard_normal((3, 8, 8)),
                       rng.standard_normal((1, 2, 3, 3)), 1)


class TestPointwise:
    def test_relu_all_negative_and_positive(self):
        assert np.all(relu(-np.ones((3, 3))) == 0)
        y = np.arange(9.0).reshape(3, 3) + 1
        np.testing.assert_array_equal(relu(y), y)

    def test_relu_odd_decomposition(self, rng):
        y = rng.standard_normal((6, 6))
        np.testing.assert_allclose(relu(y) - relu(-y), y)

    def test_bias_relu(self, rng):
        y = np.abs(rng.standard_normal((4, 4)))
        np.testing.assert_array_equal(bias_relu(y, 0.0), y)
        assert np.all(bias_relu(y, -y.max()) >= 0)
        assert bias_relu(y, -y.max()).max() == 0.0
        np.testing.assert_allclose(bias_relu(y, 0.7), relu(y + 0.7))

    def test_modulus(self, rng):
        z = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
        np.testing.assert_allclose(modulus(z), np.sqrt(z.real**2 + z.imag**2))
        np.testing.assert_allclose(modulus(z * np.exp(0.3j)), modulus(z))
        x = rng.standard_normal((5, 5))
        np.testing.assert_allclose(modulus(x + 0j), np.abs(x))


class TestMaxPool:
    def test_constant_map(self):
        np.testing.assert_array_equal(max_pool(np.full((8, 8), 2.5)),
                                      np.full((4, 4), 2.5))

    def test_impulse_window_membership(self):
        """A unit at (1, 1) is seen by the four windows around it."""
        y = np.zeros((6, 6))
        y[1, 1] = 1.0
        out = max_pool(y)
        want = np.zeros((3, 3))
        want[:2, :2] = 1.0
        np.testing.assert_array_equal(out, want)

    def test_dominates_plain_subsampling(self, rng):
        y = rng.standard_normal((10, 10))
        assert np.all(max_pool(y) >= subsample(y, 2))

    def test_commutes_with_bias_relu(self, rng):
        """Max pooling interchanges with monotone bias-plus-ReLU."""
        y = rng.standard_normal((12, 12))
        for b in (-0.5, 0.0, 1.2):
            lhs = max_pool(relu(y + b))
            rhs = relu(max_pool(y) + b)
            np.testing.assert_allclose(lhs, rhs, atol=1e-12)


class TestBlurPool:
    def test_size_one_is_plain_subsampling(self, rng):
        y = rng.standard_normal((8, 8))
        np.testing.assert_array_equal(blur_pool(y, 1), subsample(y, 2))

    def test_constant_preserved(self):
        y = np.full((10, 10), 3.25)
        np.testing.assert_allclose(blur_pool(y, 3), 3.25)

    def test_size_three_impulse_expansion(self):
        """Impulse response is the 3x3 binomial [1,2,1] outer product / 16,
        read on the even grid."""
        y = np.zeros((12, 12))
        y[6, 6] = 1.0
        out = blur_pool(y, 3)
        dense = np.zeros((12, 12))
        b = np.outer([1, 2, 1], [1, 2, 1]) / 16.0
        dense[5:8, 5:8] = b
        np.testing.assert_allclose(out, dense[::2, ::2], atol=1e-15)

    def test_size_sweep_smooths_monotonically(self, rng):
        """Filter sizes one through seven keep DC and shed high frequency."""
        y = rng.standard_normal((64, 64))
        hf_energy = []
        for size in range(1, 8):
            out = blur_pool(y + 5.0, size)
            np.testing.assert_allclose(out.mean(), (y + 5.0).mean(), atol=0.2)
            hf_energy.append(((out - out.mean()) ** 2).sum())
        assert np.all(np.diff(hf_energy) < 0)

    def test_bad_size_errors(self, rng):
        with pytest.raises(ValueError):
            blur_pool(rng.standard_normal((4, 4)), 0)


class TestRMaxCMod:
    def test_zero_input_zero_output(self, bank2):
        X = np.zeros((1, 32, 32))
        k = bank2.kernels[5]
        V = k.real[None, None]
        W = k[None, None]
        assert np.abs(rmax(X, V, 2)).max() == 0.0
        assert np.abs(cmod(X, W, 2)).max() == 0.0

    def test_rmax_is_the_stated_composition(self, rng, bank2):
        X = rng.standard_normal((1, 32, 32))
        V = bank2.kernels[6].real[None, None]
        got = rmax(X, V, 2)
        want = max_pool(conv_layer(X, V, 2)[0])
        np.testing.assert_allclose(got[0], want, atol=1e-12)

    def test_rmax_complex_kernel_rejected(self, rng, bank2):
        with pytest.raises(ValueError, match="real"):
            rmax(rng.standard_normal((1, 16, 16)), bank2.kernels[6][None, None], 2)

    def test_cmod_output_shape_matches_double_stride(self, rng, bank2):
        X = rng.standard_normal((1, 32, 32))
        W = bank2.kernels[6][None, None]
        assert cmod(X, W, 2).shape == conv_layer(X, W, 4).shape

    def test_rmax_varies_under_subpixel_shifts(self, bank2):
        """A sub-period shift of an in-band wave visibly moves the output."""
        kern = bank2.kernels[bank2.flat_index(0, 1, 2)]
        probe = ToneProbe(*bank2.cell_centers[bank2.flat_index(0, 1, 2)])
        r0 = rmax_tone(kern.real, probe, (12, 12), (0.0, 0.0), 2)
        r1 = rmax_tone(kern.real, probe, (12, 12), (1.0, 0.0), 2)
        assert np.linalg.norm(r1 - r0) / np.linalg.norm(r0) > 1e-3

    def test_cmod_envelope_constant_for_inband_wave(self, bank2):
        """Modulus output of a single in-band wave is phase independent."""
        idx = bank2.flat_index(0, 1, 2)
        kern = bank2.kernels[idx]
        w1, w2 = bank2.cell_centers[idx]
        outs = []
        for phase in (0.0, 0.9, 2.3):
            probe = ToneProbe(w1, w2, amp=1.0, phase=phase)
            outs.append(cmod_tone(kern, probe, (12, 12), (0.0, 0.0), 2))
        ref = outs[0]
        ripple = (ref.max() - ref.min()) / ref.mean()
        assert ripple < 0.02
        for u in outs[1:]:
            assert np.abs(u - ref).max() / ref.mean() < 0.02

    def test_cmod_translates_exactly_at_full_stride(self, rng, bank2):
        """Shifting the input by 2m pixels shifts the output by one sample."""
        m = 2
        x = rng.standard_normal((40, 44))
        W = bank2.kernels[6][None, None]
        out_a = cmod(x[None, :, :40], W, m, mode="valid")[0]
        out_b = cmod(x[None, :, 4:], W, m, mode="valid")[0]
        np.testing.assert_allclose(out_b[:, :-1], out_a[:, 1:], atol=1e-10)

    def test_cmod_steadier_than_rmax_on_inband_waves(self, bank2, rng):
        """Envelope path beats max pooling for nearly every in-band case."""
        shifts = [1.0, 2.0, 3.0, 4.0]
        wins = total = 0
        for ki in range(bank2.n_halfplane):
            kern = bank2.kernels[ki]
            for _ in range(6):
                probe = random_inband_tone(bank2.cell_centers[ki], np.pi / 4, rng)
                u0 = cmod_tone(kern, probe, (12, 12), (0.0, 0.0), 2)
                r0 = rmax_tone(kern.real, probe, (12, 12), (0.0, 0.0), 2)
                for s in shifts:
                    us = cmod_tone(kern, probe, (12, 12), (s, 0.0), 2)
                    rs = rmax_tone(kern.real, probe, (12, 12), (s, 0.0), 2)
                    dc = np.linalg.norm(us - u0) / np.linalg.norm(u0)
                    dr = np.linalg.norm(rs - r0) / np.linalg.norm(r0)
                    total += 1
                    wins += dc <= dr
        assert wins / total >= 0.95

    def test_envelope_agreement_reported(self, bank2, rng, capsys):
        """Coarse statistical comparison of the two operators' magnitudes;
        reported, not asserted per case."""
        ratios = []
        for ki in (5, 6, 9, 10):
            kern = bank2.kernels[ki]
            probe = random_inband_tone(bank2.cell_centers[ki], np.pi / 4, rng)
            u = cmod_tone(kern, probe, (12, 12), (0.0, 0.0), 2)
            r = rmax_tone(kern.real, probe, (12, 12), (0.0, 0.0), 2)
            ratios.append(np.linalg.norm(r - u) / np.linalg.norm(u))
        print(f"rmax/cmod envelope deviation per kernel: {np.round(ratios, 3)}")
        assert np.median(ratios) < 0.5
