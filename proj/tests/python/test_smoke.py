import math

import numpy as np
import pytest

import gaitsym


def small_params(seed=0):
    p = gaitsym.GaitParams()
    p.seed = seed
    p.points_per_frame = 800
    return p


def test_sector_index_matches_atan2():
    rng = np.random.default_rng(1)
    for _ in range(200):
        x, z = rng.uniform(-1, 1, size=2)
        y = rng.uniform(0, 1)
        row, col = gaitsym.sector_index([x, y, z], 1.0, 0.0, "8x12")
        a = math.atan2(z, x) % (2 * math.pi)
        assert col == min(int(a / (2 * math.pi) * 12), 11)
        assert row == min(int(8 * (1.0 - y)), 7)


def test_estimate_counts_every_point():
    cloud = gaitsym.generate(small_params(), frames=1)[0]
    assert cloud.shape == (800, 3)
    hist = gaitsym.estimate(cloud, "16x16")
    assert hist.shape == (16, 16)
    assert hist.sum() == 800


def test_mirror_pair_scores_zero():
    p = small_params(3)
    p.noise_sigma = 0.0
    frames = gaitsym.generate_mirror_pair(p, 3, frames=130)
    report = gaitsym.assess(frames, segment_len=60, delays=(-10, 10))
    assert report["mean_score"] < 1e-9
    assert [abs(d) for d in report["best_delays"]] == [3, 3]
    assert report["frames_discarded"] == 10


def test_histograms_then_assess_matches_direct():
    frames = gaitsym.generate(small_params(4), "phase-left-0.5", frames=130)
    hists, offset = gaitsym.histograms(frames, "16x16", recenter=True)
    assert hists.shape == (130, 16, 16)
    assert -math.pi < offset <= math.pi
    direct = gaitsym.assess(frames, segment_len=60, delays="-20:20")
    via = gaitsym.assess_histograms(hists, segment_len=60, delays="-20:20")
    assert via["mean_score"] == direct["mean_score"]


def test_cross_correlate_finds_shift():
    rng = np.random.default_rng(2)
    left = rng.uniform(size=(12, 4, 4))
    right = np.roll(left, -2, axis=0)
    score, delay, overlap = gaitsym.cross_correlate(left, right, [-4, -2, 0, 2, 4])
    assert delay == 2
    assert score == 0.0
    assert overlap == 10


def test_roc_separated_and_errors():
    r = gaitsym.roc([0.1, 0.2, 0.8, 0.9], [False, False, True, True])
    assert r["auc"] == 1.0
    assert r["eer"] == 0.0
    assert r["fpr"][0] == 0.0
    with pytest.raises(gaitsym.GaitsymError, match="SingleClass"):
        gaitsym.roc([0.1, 0.2], [False, False])


def test_errors_surface_as_value_errors():
    with pytest.raises(ValueError):
        gaitsym.estimate(np.zeros((4, 2)))
    with pytest.raises(gaitsym.GaitsymError):
        gaitsym.generate(small_params(), "wobble-left-1")
