"""Shared helpers: well-conditioned random problem instances."""
import numpy as np
import pytest

from satnull.channel import ChannelSet, SatelliteGeometry, build_sat_matrix, ura
from satnull.precoding import CombinerSet, HybridPrecoder, project_unit_modulus

ARRAY_DIMS = {1: (1, 1), 2: (1, 2), 4: (2, 2), 8: (2, 4), 16: (4, 4), 64: (8, 8)}


def crandn(rng, *shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def make_channels(rng, n_tx=8, n_ue=2, n_rx=2, n_sat=2, sigma2=1.0):
    """Unit-scale channel set: CN(0,1) UE channels, steering-vector satellite
    rows, unit pathloss and noise."""
    geom = ura(*ARRAY_DIMS[n_tx])
    sats = [
        SatelliteGeometry(rng.uniform(-np.pi, np.pi), rng.uniform(0.3, np.pi / 2), 1.0)
        for _ in range(n_sat)
    ]
    return ChannelSet(
        ue_channels=[crandn(rng, n_rx, n_tx) for _ in range(n_ue)],
        sat_matrix=build_sat_matrix(geom, sats),
        sat_pathloss=np.ones(n_sat),
        sat_noise_power=np.ones(n_sat),
        ue_noise_power=np.full(n_ue, sigma2),
    )


def make_precoder(rng, n_tx=8, n_rf=4, n_ue=2):
    return HybridPrecoder(
        project_unit_modulus(crandn(rng, n_tx, n_rf)),
        crandn(rng, n_rf, n_ue),
    )


def make_combiners(rng, n_ue=2, n_rx=2):
    vecs = []
    for _ in range(n_ue):
        w = crandn(rng, n_rx)
        vecs.append(w / np.linalg.norm(w))
    return CombinerSet(vecs)


@pytest.fixture
def rng():
    return np.random.default_rng(0xBEEF)
