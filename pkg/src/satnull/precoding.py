"""Hybrid precoder optimization with a satellite interference penalty.

The optimizer minimizes

    C(F_RF, F_BB) = -sum_u ln(1 + SINR_u)
                    + lambda_sat * tr(F_BB^H F_RF^H A F_RF F_BB),

with A the Gram matrix of the stacked satellite rows, by block coordinate
descent: a fixed number of gradient steps on the digital precoder F_BB, each
followed by a renormalization to the transmit power budget, then a fixed
number of gradient steps on the analog precoder F_RF, each followed by an
entrywise projection onto the complex unit circle, then a closed-form refresh
of every UE combiner.

Gradient convention: complex gradients are packed so that the real and
imaginary parts equal the cost's partial derivatives with respect to the
entry's real and imaginary parts (i.e. 2 * dC/d(conj z)). Central finite
differences of ``cost`` reproduce ``grad_f_bb`` and ``grad_f_rf`` directly,
with no extra scale factor.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
import scipy.linalg

from .channel import ChannelSet
from .errors import DivergenceError, NumericalError
from .linalg import fix_phase

UNIT_MODULUS_TOL = 1e-9
POWER_REL_TOL = 1e-6


@dataclass
class HybridPrecoder:
    """Analog (n_tx, n_rf) and digital (n_rf, n_ue) precoder pair; column u of
    ``f_bb`` carries UE u's stream."""

    f_rf: np.ndarray
    f_bb: np.ndarray

    @property
    def n_rf(self) -> int:
        return self.f_rf.shape[1]

    def effective(self) -> np.ndarray:
        return self.f_rf @ self.f_bb

    def copy(self) -> "HybridPrecoder":
        return HybridPrecoder(self.f_rf.copy(), self.f_bb.copy())

    def validate(self, p_t: float | None = None):
        if self.f_rf.ndim != 2 or self.f_bb.ndim != 2:
            raise ValueError("precoder factors must be 2-D")
        if self.f_rf.shape[1] != self.f_bb.shape[0]:
            raise ValueError(
                f"inner dimensions disagree: f_rf {self.f_rf.shape}, f_bb {self.f_bb.shape}"
            )
        deviation = float(np.max(np.abs(np.abs(self.f_rf) - 1.0)))
        if deviation > UNIT_MODULUS_TOL:
            raise ValueError(f"analog entries deviate from unit modulus by {deviation:.3e}")
        if p_t is not None:
            power = float(np.linalg.norm(self.effective()) ** 2)
            if abs(power - p_t) > POWER_REL_TOL * p_t:
                raise ValueError(f"hybrid product power {power:.6e} != budget {p_t:.6e}")


@dataclass
class CombinerSet:
    """One unit-norm receive vector per UE."""

    combiners: list[np.ndarray]

    def __len__(self) -> int:
        return len(self.combiners)

    def __getitem__(self, u: int) -> np.ndarray:
        return self.combiners[u]

    def __iter__(self):
        return iter(self.combiners)

    def validate(self):
        for u, w in enumerate(self.combiners):
            if abs(np.linalg.norm(w) - 1.0) > 1e-12:
                raise ValueError(f"combiner {u} is not unit norm")


@dataclass(frozen=True)
class OptimizerConfig:
    """Hyperparameters of the block-coordinate optimizer."""

    lambda_sat: float
    p_t: float = 1.0
    step_size: float = 1e-4
    iter_bb: int = 5
    iter_rf: int = 5
    outer_iters: int = 20

    def __post_init__(self):
        if self.lambda_sat < 0:
            raise ValueError("lambda_sat must be >= 0")
        if self.p_t <= 0:
            raise ValueError("p_t must be positive")
        if self.step_size <= 0:
            raise ValueError("step_size must be positive")
        if min(self.iter_bb, self.iter_rf, self.outer_iters) < 1:
            raise ValueError("iteration counts must be >= 1")

    def with_lambda(self, lambda_sat: float) -> "OptimizerConfig":
        return replace(self, lambda_sat=float(lambda_sat))


def as_effective(prec) -> np.ndarray:
    """Accept a HybridPrecoder or a bare effective matrix."""
    if isinstance(prec, HybridPrecoder):
        return prec.effective()
    return np.asarray(prec, dtype=np.complex128)


def _terms_from_c(c, f_bb, sigma2, u):
    """Stream gains and SINR pieces given c = F_RF^H H^H w.

    Returns (t, num, den) with t = w^H H F_RF F_BB (one entry per stream),
    num = |t_u|^2 and den = sigma2 plus the other streams' interference.
    """
    t = c.conj() @ f_bb
    power = np.abs(t) ** 2
    num = float(power[u])
    other = power.copy()
    other[u] = 0.0
    den = float(sigma2 + other.sum())
    return t, num, den


def _stream_terms(h_u, w_u, f_rf, f_bb, sigma2, u):
    """Per-UE quantities shared by the cost and both gradients."""
    g = h_u.conj().T @ w_u
    c = f_rf.conj().T @ g
    t, num, den = _terms_from_c(c, f_bb, sigma2, u)
    return g, c, t, num, den


def cost(channels: ChannelSet, prec: HybridPrecoder, comb: CombinerSet, cfg: OptimizerConfig) -> float:
    """Penalized negative sum rate (natural log); lower is better."""
    f_rf, f_bb = prec.f_rf, prec.f_bb
    total = 0.0
    for u, (h_u, w_u) in enumerate(zip(channels.ue_channels, comb.combiners)):
        _, _, _, num, den = _stream_terms(h_u, w_u, f_rf, f_bb, channels.ue_noise_power[u], u)
        total -= float(np.log1p(num / den))
    if cfg.lambda_sat:
        eff = f_rf @ f_bb
        gains = channels.sat_matrix @ eff
        total += cfg.lambda_sat * float(np.trace(eff.conj().T @ channels.sat_matrix.conj().T @ gains).real)
    return total


def _stream_coefficients(t, num, den, u):
    """Descent weights for the per-stream gradient terms: the own-stream term
    increases the numerator, the cross terms suppress interference."""
    coef = np.full(t.shape, 2.0 * num / (den * (den + num)))
    coef[u] = -2.0 / (den + num)
    return coef


def grad_f_bb(channels: ChannelSet, prec: HybridPrecoder, comb: CombinerSet, cfg: OptimizerConfig) -> np.ndarray:
    """Cost gradient with respect to the digital precoder, (n_rf, n_ue)."""
    f_rf, f_bb = prec.f_rf, prec.f_bb
    grad = np.zeros_like(f_bb)
    if cfg.lambda_sat:
        gains = channels.sat_matrix @ (f_rf @ f_bb)
        grad += 2.0 * cfg.lambda_sat * (f_rf.conj().T @ (channels.sat_matrix.conj().T @ gains))
    for u, (h_u, w_u) in enumerate(zip(channels.ue_channels, comb.combiners)):
        _, c, t, num, den = _stream_terms(h_u, w_u, f_rf, f_bb, channels.ue_noise_power[u], u)
        coef = _stream_coefficients(t, num, den, u)
        grad += np.outer(c, coef * t)
    return grad


def grad_f_rf(channels: ChannelSet, prec: HybridPrecoder, comb: CombinerSet, cfg: OptimizerConfig) -> np.ndarray:
    """Cost gradient with respect to the analog precoder, (n_tx, n_rf)."""
    f_rf, f_bb = prec.f_rf, prec.f_bb
    grad = np.zeros_like(f_rf)
    if cfg.lambda_sat:
        gains = channels.sat_matrix @ (f_rf @ f_bb)
        grad += 2.0 * cfg.lambda_sat * ((channels.sat_matrix.conj().T @ gains) @ f_bb.conj().T)
    for u, (h_u, w_u) in enumerate(zip(channels.ue_channels, comb.combiners)):
        g, _, t, num, den = _stream_terms(h_u, w_u, f_rf, f_bb, channels.ue_noise_power[u], u)
        coef = _stream_coefficients(t, num, den, u)
        grad += np.outer(g, (coef * t) @ f_bb.conj().T)
    return grad


def project_unit_modulus(f_rf: np.ndarray) -> np.ndarray:
    """Entrywise projection onto the complex unit circle; zeros map to 1."""
    return np.exp(1j * np.angle(f_rf))


def normalize_power(prec: HybridPrecoder, p_t: float) -> HybridPrecoder:
    """Rescale F_BB so the hybrid product carries exactly ``p_t`` of power."""
    if p_t <= 0:
        raise ValueError("p_t must be positive")
    norm = float(np.linalg.norm(prec.f_rf @ prec.f_bb))
    if norm == 0.0:
        raise NumericalError("effective precoder is zero, cannot normalize power")
    if not np.isfinite(norm):
        raise NumericalError("effective precoder has non-finite power")
    return HybridPrecoder(prec.f_rf, prec.f_bb * (np.sqrt(p_t) / norm))


def update_combiner(h_u: np.ndarray, prec, ue_index: int, sigma2_u: float) -> np.ndarray:
    """SINR-optimal receive vector for one UE given a fixed precoder.

    Builds the rank-one signal covariance and the interference-plus-noise
    covariance of the received streams and returns the dominant generalized
    eigenvector, unit norm with the shared deterministic phase convention.
    """
    if sigma2_u <= 0:
        raise ValueError("noise power must be positive")
    f = as_effective(prec)
    x = h_u @ f
    n_rx = x.shape[0]
    r_sig = np.outer(x[:, ue_index], x[:, ue_index].conj())
    r_yy = sigma2_u * np.eye(n_rx, dtype=np.complex128)
    for j in range(x.shape[1]):
        if j != ue_index:
            r_yy += np.outer(x[:, j], x[:, j].conj())
    try:
        _, vecs = scipy.linalg.eigh(r_sig, r_yy)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise NumericalError(f"combiner eigenproblem failed: {exc}") from exc
    w = vecs[:, -1]
    return fix_phase(w / np.linalg.norm(w))


def refresh_combiners(channels: ChannelSet, prec) -> CombinerSet:
    """Recompute every UE combiner against the given precoder."""
    f = as_effective(prec)
    return CombinerSet(
        [
            update_combiner(channels.ue_channels[u], f, u, float(channels.ue_noise_power[u]))
            for u in range(channels.n_ue)
        ]
    )


def bcd_optimize(
    channels: ChannelSet, cfg: OptimizerConfig, init: HybridPrecoder
) -> tuple[HybridPrecoder, CombinerSet, list[float]]:
    """Run the alternating projected-gradient loop from a feasible start.

    Each outer iteration performs ``iter_bb`` digital steps (gradient step,
    then power renormalization), ``iter_rf`` analog steps (gradient step, then
    unit-circle projection), then refreshes the combiners and records the
    cost. The analog projection lets the product power drift within an
    iteration, so a final renormalization makes the returned precoder satisfy
    the power budget exactly.

    Returns (precoder, combiners, cost trace with one entry per outer
    iteration). Raises DivergenceError if the cost turns non-finite.
    """
    init.validate(cfg.p_t)
    prec = init.copy()
    comb = refresh_combiners(channels, prec)
    sat = channels.sat_matrix
    lam = cfg.lambda_sat
    alpha = cfg.step_size
    trace: list[float] = []
    for outer in range(1, cfg.outer_iters + 1):
        # combiners are frozen inside an outer iteration, so the effective
        # receive directions g = H^H w are static for both blocks
        g_list = [
            h.conj().T @ w for h, w in zip(channels.ue_channels, comb.combiners)
        ]
        sigma2 = channels.ue_noise_power

        # digital block: F_RF is fixed, so its satellite Gram matrix and the
        # per-UE projections c = F_RF^H g can be reused across steps
        f_rf_h = prec.f_rf.conj().T
        c_list = [f_rf_h @ g for g in g_list]
        pen_gram = None
        if lam:
            sat_rf = sat @ prec.f_rf
            pen_gram = 2.0 * lam * (sat_rf.conj().T @ sat_rf)
        for _ in range(cfg.iter_bb):
            grad = pen_gram @ prec.f_bb if lam else np.zeros_like(prec.f_bb)
            for u, c in enumerate(c_list):
                t, num, den = _terms_from_c(c, prec.f_bb, sigma2[u], u)
                grad += np.outer(c, _stream_coefficients(t, num, den, u) * t)
            prec.f_bb = prec.f_bb - alpha * grad
            prec = normalize_power(prec, cfg.p_t)

        # analog block: F_BB is fixed, so its Gram matrix is reused
        f_bb_h = prec.f_bb.conj().T
        bb_gram = prec.f_bb @ f_bb_h
        for _ in range(cfg.iter_rf):
            if lam:
                grad = 2.0 * lam * (sat.conj().T @ ((sat @ prec.f_rf) @ bb_gram))
            else:
                grad = np.zeros_like(prec.f_rf)
            f_rf_h = prec.f_rf.conj().T
            for u, g in enumerate(g_list):
                t, num, den = _terms_from_c(f_rf_h @ g, prec.f_bb, sigma2[u], u)
                grad += np.outer(g, (_stream_coefficients(t, num, den, u) * t) @ f_bb_h)
            prec.f_rf = project_unit_modulus(prec.f_rf - alpha * grad)

        comb = refresh_combiners(channels, prec)
        value = cost(channels, prec, comb, cfg)
        if not np.isfinite(value):
            raise DivergenceError(f"non-finite cost at outer iteration {outer}")
        trace.append(value)
    prec = normalize_power(prec, cfg.p_t)
    return prec, comb, trace
