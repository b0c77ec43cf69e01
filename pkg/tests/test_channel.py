import numpy as np
import pytest

from secure_layered.channel import (
    Scenario,
    SystemSpec,
    dbm_to_watt,
    gram,
    normalize_scenario,
    path_gain,
    path_loss_db,
    sample_scenario,
    watt_to_dbm,
)
from secure_layered.linalg import is_psd, numerical_rank
from secure_layered.metrics import sinr_layer

from conftest import cnormal, random_hermitian


# 34.53 + 38 log10(d) evaluated by hand: 38*1.698970 = 64.5609, 38*1.477121 = 56.1306
@pytest.mark.parametrize("d, pl", [(1, 34.53), (50, 99.0909), (30, 90.6606)])
def test_path_loss(d, pl):
    assert path_loss_db(d) == pytest.approx(pl, abs=1e-4)


def test_path_loss_increasing_and_domain():
    d = np.linspace(1, 500, 200)
    assert np.all(np.diff([path_loss_db(x) for x in d]) > 0)
    with pytest.raises(ValueError):
        path_loss_db(0.5)


def test_unit_conversions():
    assert dbm_to_watt(43) == pytest.approx(19.9526, rel=1e-5)
    assert watt_to_dbm(19.95) == pytest.approx(43.0, abs=0.01)
    assert dbm_to_watt(-95) == pytest.approx(10 ** (-12.5))


def test_default_defaults():
    spec = SystemSpec.default()
    assert spec.n_tx == 4 and spec.n_eves == 3 and spec.n_layers == 3
    np.testing.assert_allclose(spec.gamma_req, 10 ** (np.array([6, 9, 12]) / 10))
    np.testing.assert_allclose(spec.gamma_tol, [0.1] * 3)
    np.testing.assert_allclose(spec.p_max, [dbm_to_watt(43)] * 4)


def test_spec_validation():
    with pytest.raises(ValueError):
        SystemSpec(n_tx=2, gamma_req=(), gamma_tol=(), p_max=1, noise_power=1)
    with pytest.raises(ValueError):
        SystemSpec(n_tx=2, gamma_req=(1,), gamma_tol=(), p_max=(1, 1, 1), noise_power=1)
    with pytest.raises(ValueError):
        SystemSpec(n_tx=2, gamma_req=(1,), gamma_tol=(-1,), p_max=1, noise_power=1)


def test_sample_deterministic_and_shapes():
    spec = SystemSpec.default()
    a, b = sample_scenario(5, spec), sample_scenario(5, spec)
    assert np.array_equal(a.h, b.h) and all(np.array_equal(x, y) for x, y in zip(a.g, b.g))
    assert a.h.shape == (4,) and len(a.g) == 3
    assert sample_scenario(5, spec, n_eves=0).g == ()


def test_seeds_differ():
    spec = SystemSpec.default()
    firsts = {sample_scenario(s, spec).h[0] for s in range(100)}
    assert len(firsts) == 100


def test_draws_nest_across_sizes():
    # common random numbers: adding antennas or eavesdroppers extends, never reshuffles
    small = sample_scenario(9, SystemSpec.default(4, 2))
    big = sample_scenario(9, SystemSpec.default(6, 3))
    np.testing.assert_array_equal(big.h[:4], small.h)
    np.testing.assert_array_equal(big.g[1][:4], small.g[1])


def test_channel_variance():
    spec = SystemSpec.default(n_tx=1, n_eves=1)
    h = np.array([sample_scenario(s, spec).h[0] for s in range(100_000)])
    assert np.mean(np.abs(h) ** 2) == pytest.approx(10 ** -9.90866, rel=0.03)
    assert path_gain(50) == pytest.approx(10 ** -9.909086, rel=1e-6)


def test_normalize():
    s = Scenario(np.array([1.0 + 0j]), (), 1.0)
    assert normalize_scenario(s) is s
    n = normalize_scenario(Scenario(np.array([2.0 + 0j]), (), 4.0))
    np.testing.assert_allclose(n.h, [1.0])
    assert n.noise_power == 1.0


def test_normalize_preserves_sinr(rng):
    s = sample_scenario(3, SystemSpec.default())
    W = [random_hermitian(rng, 4, psd=True) * 1e-3 for _ in range(3)]
    V = random_hermitian(rng, 4, psd=True) * 1e-4
    n = normalize_scenario(s)
    for i in (1, 2, 3):
        a = sinr_layer(s.h, W, V, s.noise_power, i)
        b = sinr_layer(n.h, W, V, n.noise_power, i)
        assert b == pytest.approx(a, rel=1e-12)


def test_gram(rng):
    np.testing.assert_array_equal(gram([1, 0]), [[1, 0], [0, 0]])
    np.testing.assert_allclose(gram([1, 1j]), [[1, -1j], [1j, 1]])
    for _ in range(10):
        v = cnormal(rng, 5)
        G = gram(v)
        assert np.trace(G).real == pytest.approx(np.linalg.norm(v) ** 2)
        assert is_psd(G) and numerical_rank(G) == 1
