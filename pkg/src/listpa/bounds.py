"""Closed-form key-length and threshold calculators.

All logarithms are base 2.  Lengths are kept real-valued; use
clamped_length() at API boundaries to floor and clamp to a nonnegative
integer, avoiding double rounding inside compositions.

The finite-size correction uses the model
Delta(n', eps) = c * sqrt(n') * log2(1/eps) with configurable
coefficient c (default 1), under which n' = 10^6, eps = 2^-100, c = 1
gives Delta/n' = 0.1 exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


class BoundsError(ValueError):
    """Argument outside its mathematical domain."""


@dataclass(frozen=True)
class BoundParams:
    """Smooth min-entropy k, security parameter, list size, key length."""

    k: float
    epsilon: float
    L: int = 1
    ell: float | None = None

    def __post_init__(self) -> None:
        if not 0 < self.epsilon < 1:
            raise BoundsError(f"epsilon={self.epsilon} must lie in (0, 1)")
        if self.L < 1:
            raise BoundsError("list size must be at least 1")


@dataclass(frozen=True)
class Bb84Params:
    """Finite-key BB84 parameters.

    The list size may be given directly (L) or as an exponent rate alpha
    with log2 L = alpha * n_sift.  delta_coeff is the coefficient c of
    the finite-size correction.
    """

    n_sift: int
    e_b: float
    e_ph: float = 0.0
    epsilon: float = 2.0**-100
    L: int | None = 1
    alpha: float | None = None
    epsilon_auth: float = 2.0**-64
    delta_coeff: float = 1.0

    def __post_init__(self) -> None:
        if self.n_sift < 1:
            raise BoundsError("sifted length must be at least 1")
        for name in ("e_b", "e_ph"):
            v = getattr(self, name)
            if not 0.0 <= v <= 0.5:
                raise BoundsError(f"{name}={v} must lie in [0, 1/2]")
        if (self.L is None) == (self.alpha is None):
            raise BoundsError("exactly one of L and alpha must be set")

    @property
    def log2_list(self) -> float:
        if self.alpha is not None:
            return self.alpha * self.n_sift
        return math.log2(self.L)


def binary_entropy(p: float) -> float:
    """h(p) = -p log2 p - (1-p) log2 (1-p), with 0 log 0 = 0."""
    if not 0.0 <= p <= 1.0:
        raise BoundsError(f"p={p} outside [0, 1]")
    if p in (0.0, 1.0):
        return 0.0
    return -p * math.log2(p) - (1.0 - p) * math.log2(1.0 - p)


def binary_entropy_inverse(y: float, tol: float = 1e-12) -> float:
    """The unique p in [0, 1/2] with h(p) = y, by bisection."""
    if not 0.0 <= y <= 1.0:
        raise BoundsError(f"y={y} outside [0, 1]")
    if y == 0.0:
        return 0.0
    if y == 1.0:
        return 0.5
    lo, hi = 0.0, 0.5
    while hi - lo > tol:
        mid = (lo + hi) / 2.0
        if binary_entropy(mid) < y:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2.0


def qlhl_length(k: float, epsilon: float) -> float:
    """Standard (single-key) extractable length k - 2 log2(1/eps) - 2."""
    if not 0 < epsilon <= 1:
        raise BoundsError(f"epsilon={epsilon} must lie in (0, 1]")
    return k - 2.0 * math.log2(1.0 / epsilon) - 2.0


def qllhl_length(k: float, epsilon: float, L: int | float) -> float:
    """List extractable length k + log2 L - 2 log2(1/eps) - 3."""
    if L < 1:
        raise BoundsError("list size must be at least 1")
    return qllhl_length_log2(k, epsilon, math.log2(L))


def qllhl_length_log2(k: float, epsilon: float, log2_list: float) -> float:
    """qllhl_length with the list size given as log2 L (huge-L safe)."""
    if not 0 < epsilon <= 1:
        raise BoundsError(f"epsilon={epsilon} must lie in (0, 1]")
    if log2_list < 0:
        raise BoundsError("log2 of the list size must be nonnegative")
    return k + log2_list - 2.0 * math.log2(1.0 / epsilon) - 3.0


def clamped_length(ell: float) -> int:
    """Floor to an integer bit count, clamped at zero."""
    return max(0, math.floor(ell))


def finite_size_delta(n_sift: int, epsilon: float, coeff: float = 1.0) -> float:
    """Delta(n', eps) = coeff * sqrt(n') * log2(1/eps)."""
    return coeff * math.sqrt(n_sift) * math.log2(1.0 / epsilon)


def bb84_min_entropy(p: Bb84Params) -> float:
    """n'(1 - h(e_ph) - h(e_b)) - Delta(n', eps)."""
    base = p.n_sift * (1.0 - binary_entropy(p.e_ph) - binary_entropy(p.e_b))
    return base - finite_size_delta(p.n_sift, p.epsilon, p.delta_coeff)


def bb84_key_length(p: Bb84Params) -> float:
    """List key length at the given phase-error rate (real-valued)."""
    return qllhl_length_log2(bb84_min_entropy(p), p.epsilon, p.log2_list)


def bb84_phase_threshold(p: Bb84Params) -> float:
    """Supremal e_ph with positive list key length.

    Closed form: h^-1 of
        1 - h(e_b) + (log2 L - 2 log2(1/eps) - 3 - Delta(n', eps)) / n'
    clamped to [0, 1/2]; this is exactly the root in e_ph of
    qllhl_length(bb84_min_entropy(.), eps, L) = 0.
    """
    shift = (
        p.log2_list
        - 2.0 * math.log2(1.0 / p.epsilon)
        - 3.0
        - finite_size_delta(p.n_sift, p.epsilon, p.delta_coeff)
    ) / p.n_sift
    arg = 1.0 - binary_entropy(p.e_b) + shift
    if arg <= 0.0:
        return 0.0
    if arg >= 1.0:
        return 0.5
    return binary_entropy_inverse(arg)


def auth_cost(L: int | float, epsilon_auth: float) -> int:
    """Pre-shared bits to authenticate the index reveal.

    ceil(log2 L) + 2 ceil(log2(1/eps_auth)); the constants are a fixed
    instantiation of the order-of-magnitude cost of a Wegman-Carter tag.
    """
    if L < 1:
        raise BoundsError("list size must be at least 1")
    if not 0 < epsilon_auth < 1:
        raise BoundsError(f"epsilon_auth={epsilon_auth} must lie in (0, 1)")
    return math.ceil(math.log2(L)) + 2 * math.ceil(math.log2(1.0 / epsilon_auth))


def net_rate(alpha: float, ell_star: float) -> float:
    """Net list key length (1 - alpha) * ell_star after index-reveal overhead."""
    if not 0.0 <= alpha < 1.0:
        raise BoundsError(f"alpha={alpha} must lie in [0, 1)")
    return (1.0 - alpha) * ell_star


def epsilon_total(eps_pa: float, eps_ec: float, eps_auth: float) -> float:
    """Additive accounting, clamped to 1."""
    for v in (eps_pa, eps_ec, eps_auth):
        if not 0.0 <= v <= 1.0:
            raise BoundsError(f"security parameter {v} outside [0, 1]")
    return min(1.0, eps_pa + eps_ec + eps_auth)
