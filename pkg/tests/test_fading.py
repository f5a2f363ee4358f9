import numpy as np
import pytest

from mccdma_alloc.fading import db_to_amplitude, make_generator, sample_channel_gains
from mccdma_alloc.model import SimConfig


@pytest.mark.parametrize(
    "x, expected", [(0.0, 1.0), (20.0, 10.0), (6.0, 1.99526231496887960135), (12.0, 3.98107170553497250770)]
)
def test_db_to_amplitude(x, expected):
    assert db_to_amplitude(x) == pytest.approx(expected, rel=1e-14)


def test_db_power_convention_doubles_range():
    assert db_to_amplitude(10.0, "power") == pytest.approx(10.0)
    assert db_to_amplitude(10.0, "power") == pytest.approx(db_to_amplitude(20.0))


def test_degenerate_range_is_flat():
    cfg = SimConfig(fading_db_min=0.0, fading_db_max=0.0)
    g = sample_channel_gains(cfg, make_generator(1))
    assert np.all(g.gains == 1.0)


def test_table_range_bounds_and_shape():
    cfg = SimConfig()
    g = sample_channel_gains(cfg, make_generator(7)).gains
    assert g.shape == (8, 8, 16)
    assert g.min() >= 1.0
    assert g.max() <= 3.98107170553497250770


def test_same_seed_same_gains():
    cfg = SimConfig()
    a = sample_channel_gains(cfg, make_generator(42, 3)).gains
    b = sample_channel_gains(cfg, make_generator(42, 3)).gains
    c = sample_channel_gains(cfg, make_generator(42, 4)).gains
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_pinned_stream():
    # guards against a silent change of bit generator or seeding scheme
    g = sample_channel_gains(SimConfig(), make_generator(0, 0)).gains
    first = make_generator(0, 0).uniform(0.0, 12.0, size=3)
    np.testing.assert_array_equal(g.ravel()[:3], 10.0 ** (first / 20.0))


def test_uniform_in_db():
    cfg = SimConfig(n_channels=1000, n_groups=10, n_users=10)
    g = sample_channel_gains(cfg, make_generator(5)).gains
    db = 20 * np.log10(g.ravel())
    assert db.mean() == pytest.approx(6.0, abs=0.05)
    hist, _ = np.histogram(db, bins=12, range=(0, 12))
    assert hist.min() > 0.9 * db.size / 12


def test_independence_within_tensor():
    cfg = SimConfig(n_channels=1000, n_groups=10, n_users=10)  # 1e5 draws
    x = sample_channel_gains(cfg, make_generator(9)).gains.ravel()
    for lag in (1, 16, 100):
        assert abs(np.corrcoef(x[:-lag], x[lag:])[0, 1]) < 0.05


def test_independence_across_trial_streams():
    cfg = SimConfig(n_channels=1000, n_groups=10, n_users=10)
    a = sample_channel_gains(cfg, make_generator(9, 0)).gains.ravel()
    b = sample_channel_gains(cfg, make_generator(9, 1)).gains.ravel()
    assert abs(np.corrcoef(a, b)[0, 1]) < 0.05


def test_rayleigh_median_at_midpoint():
    cfg = SimConfig(n_channels=1000, n_groups=10, n_users=10, fading_distribution="rayleigh")
    g = sample_channel_gains(cfg, make_generator(2)).gains
    assert np.all(g > 0)
    assert np.median(g) == pytest.approx(db_to_amplitude(6.0), rel=0.02)


def test_negative_seed_rejected():
    with pytest.raises(ValueError):
        make_generator(-1)
