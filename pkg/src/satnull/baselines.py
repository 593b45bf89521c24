"""Benchmark precoders: fully digital block diagonalization, its hybrid
factorization, DFT-codebook beam selection with reduced-space block
diagonalization, and the no-nulling variants of each gradient/factorization
method."""
from __future__ import annotations

from enum import Enum

import numpy as np

from .channel import ChannelSet
from .errors import ConfigurationError, InfeasibleError
from .linalg import fix_phase, least_squares, null_space
from .precoding import (
    CombinerSet,
    HybridPrecoder,
    OptimizerConfig,
    bcd_optimize,
    normalize_power,
    project_unit_modulus,
    refresh_combiners,
)


class BaselineKind(str, Enum):
    FD_BD = "fd-bd"
    HF = "hf"
    DFT_BD = "dft-bd"
    GRAD_NO_NULL = "grad-no-null"
    HF_NO_NULL = "hf-no-null"


def fd_bd(
    channels: ChannelSet, p_t: float, include_satellites: bool = True
) -> tuple[np.ndarray, CombinerSet]:
    """Fully digital block-diagonalization precoder.

    Each UE's column lives in the null space of every other UE's channel
    (and, optionally, of the satellite rows) and points along the dominant
    direction of its own channel inside that subspace. Power is split equally
    across UEs.
    """
    n_ue, n_tx = channels.n_ue, channels.n_tx
    cols = []
    for u in range(n_ue):
        blocks = [channels.ue_channels[j] for j in range(n_ue) if j != u]
        if include_satellites and channels.n_sat:
            blocks.append(channels.sat_matrix)
        stacked = (
            np.vstack(blocks) if blocks else np.zeros((0, n_tx), dtype=np.complex128)
        )
        basis = null_space(stacked)
        if basis.shape[1] == 0:
            raise InfeasibleError(f"no interference-free subspace left for UE {u}")
        projected = channels.ue_channels[u] @ basis
        _, s, vh = np.linalg.svd(projected)
        if s.size == 0 or s[0] == 0.0:
            raise InfeasibleError(f"UE {u} channel is orthogonal to its interference-free subspace")
        cols.append(fix_phase(basis @ vh[0].conj()))
    f = np.sqrt(p_t / n_ue) * np.column_stack(cols)
    return f, refresh_combiners(channels, f)


def hybrid_factorization(f_full: np.ndarray, n_rf: int, p_t: float) -> HybridPrecoder:
    """Factor a fully digital precoder into a hybrid pair: phase-only copies of
    its n_rf dominant left singular directions as the analog stage, a
    least-squares digital fit, and a final power renormalization."""
    n_tx = f_full.shape[0]
    if not 1 <= n_rf <= n_tx:
        raise ConfigurationError(f"n_rf={n_rf} must lie in [1, {n_tx}]")
    u_mat, _, _ = np.linalg.svd(f_full, full_matrices=True)
    f_rf = project_unit_modulus(u_mat[:, :n_rf])
    f_bb = least_squares(f_rf, f_full)
    return normalize_power(HybridPrecoder(f_rf, f_bb), p_t)


def hf(
    channels: ChannelSet, p_t: float, n_rf: int, include_satellites: bool = True
) -> tuple[HybridPrecoder, CombinerSet]:
    """Hybrid factorization of the fully digital block-diagonalization precoder."""
    f_full, _ = fd_bd(channels, p_t, include_satellites)
    prec = hybrid_factorization(f_full, n_rf, p_t)
    return prec, refresh_combiners(channels, prec)


def dft_codebook(n_tx: int) -> np.ndarray:
    """Unit-modulus DFT beams; column k has entry phases -2*pi*k*m/n_tx."""
    m = np.arange(n_tx)
    return np.exp(-2j * np.pi * np.outer(m, m) / n_tx)


def dft_bd(channels: ChannelSet, p_t: float, n_rf: int) -> tuple[HybridPrecoder, CombinerSet]:
    """DFT-codebook analog beams plus block diagonalization in the beam space.

    Each UE greedily claims the unused beam with the largest array gain (ties
    go to the lowest beam index); leftover RF chains take the unused beams
    with the best aggregate gain. The digital stage nulls inter-UE
    interference inside the selected beam space only.
    """
    n_ue, n_tx = channels.n_ue, channels.n_tx
    if n_rf < n_ue:
        raise ConfigurationError(f"n_rf={n_rf} cannot serve {n_ue} UEs")
    if n_rf > n_tx:
        raise ConfigurationError(f"n_rf={n_rf} exceeds the codebook size {n_tx}")
    book = dft_codebook(n_tx)
    gains = np.stack([np.linalg.norm(h @ book, axis=0) for h in channels.ue_channels])
    chosen: list[int] = []
    for u in range(n_ue):
        masked = gains[u].copy()
        masked[chosen] = -np.inf
        chosen.append(int(np.argmax(masked)))
    if n_rf > n_ue:
        aggregate = np.sum(gains**2, axis=0)
        aggregate[chosen] = -np.inf
        extras = np.argsort(-aggregate, kind="stable")[: n_rf - n_ue]
        chosen.extend(int(k) for k in extras)
    f_rf = book[:, chosen]

    reduced = [h @ f_rf for h in channels.ue_channels]
    cols = []
    for u in range(n_ue):
        others = (
            np.vstack([reduced[j] for j in range(n_ue) if j != u])
            if n_ue > 1
            else np.zeros((0, n_rf), dtype=np.complex128)
        )
        basis = null_space(others)
        if basis.shape[1] == 0:
            raise InfeasibleError(f"beam-space nulling infeasible for UE {u}")
        projected = reduced[u] @ basis
        _, s, vh = np.linalg.svd(projected)
        if s.size == 0 or s[0] == 0.0:
            raise InfeasibleError(f"UE {u} has no gain inside its beam-space null space")
        cols.append(fix_phase(basis @ vh[0].conj()))
    prec = normalize_power(HybridPrecoder(f_rf, np.column_stack(cols)), p_t)
    return prec, refresh_combiners(channels, prec)


def run_baseline(kind, channels: ChannelSet, cfg: OptimizerConfig, n_rf: int):
    """Dispatch one baseline by tag; returns (precoder or digital matrix, combiners)."""
    try:
        kind = BaselineKind(kind)
    except ValueError:
        valid = ", ".join(k.value for k in BaselineKind)
        raise ConfigurationError(f"unknown baseline {kind!r}; expected one of: {valid}") from None
    if kind is BaselineKind.FD_BD:
        return fd_bd(channels, cfg.p_t, include_satellites=True)
    if kind is BaselineKind.HF:
        return hf(channels, cfg.p_t, n_rf, include_satellites=True)
    if kind is BaselineKind.DFT_BD:
        return dft_bd(channels, cfg.p_t, n_rf)
    if kind is BaselineKind.HF_NO_NULL:
        return hf(channels, cfg.p_t, n_rf, include_satellites=False)
    # grad-no-null: the gradient optimizer with the penalty switched off,
    # started from the no-nulling hybrid factorization.
    init, _ = hf(channels, cfg.p_t, n_rf, include_satellites=False)
    prec, comb, _ = bcd_optimize(channels, cfg.with_lambda(0.0), init)
    return prec, comb
