"""Closed-form quantities for G(n, p) at diameter two.

All logarithms are natural. The headline ratio ``2 ln n / ln(1/rho)`` does
not depend on the base; elsewhere natural logs are the convention. ``rho``
is computed as ``1 - 2pq`` and its log through ``log1p`` so small ``p``
keeps full precision.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .errors import ParameterError

TOL = 1e-9


def _check_p(p: float):
    if not 0.0 < p < 1.0:
        raise ParameterError(f"p must lie in (0, 1), got {p!r}")


def log_inv_rho(p: float) -> float:
    return -math.log1p(-2.0 * p * (1.0 - p))


def default_omega(n: float) -> float:
    return math.log(math.log(n))


@dataclass(frozen=True)
class TheoryParams:
    n: float
    p: float
    q: float
    rho: float
    eta: float
    omega_value: float
    c: float

    @property
    def log_n(self) -> float:
        return math.log(self.n)


def c_max(n: float, p: float) -> float:
    """Largest admissible constant in the upper bound, clamped at 1."""
    _check_p(p)
    ln = math.log(n)
    raw = 0.5 * ((ln - 3.0 * math.log(ln)) / math.log(1.0 / p) - 1.0)
    return min(raw, 1.0)


def derive_params(n: float, p: float, omega_choice: Optional[float] = None,
                  c: Optional[float] = None) -> TheoryParams:
    """Derived quantities for (n, p).

    ``omega_choice`` defaults to ``ln ln n``; ``c`` defaults to 90% of
    :func:`c_max` when that is positive, else 0.
    """
    _check_p(p)
    if n < 3:
        raise ParameterError("n must be >= 3")
    q = 1.0 - p
    omega = default_omega(n) if omega_choice is None else float(omega_choice)
    if c is None:
        c = max(0.9 * c_max(n, p), 0.0)
    return TheoryParams(n=float(n), p=p, q=q, rho=p * p + q * q,
                        eta=math.log(1.0 / p) / math.log(n), omega_value=omega, c=float(c))


@dataclass(frozen=True)
class BoundWindow:
    lower: float
    upper: float
    beta_lower: float
    beta_upper: float
    lower_clamped: bool
    c_in_range: bool


def zeta_window(tp: TheoryParams, c: Optional[float] = None) -> BoundWindow:
    """Localization-number window and the metric-dimension window for (n, p).

    A non-positive lower factor is reported as 0 with ``lower_clamped``;
    ``c`` outside ``(0, c_max)`` is evaluated anyway and flagged.
    """
    c = tp.c if c is None else c
    ln = tp.log_n
    base = 2.0 * ln / log_inv_rho(tp.p)
    factor = 1.0 - 2.0 * tp.eta - 4.0 * math.log(ln) / ln
    cm = c_max(tp.n, tp.p)
    return BoundWindow(
        lower=max(factor, 0.0) * base,
        upper=(1.0 - c * tp.eta) * base,
        beta_lower=2.0 * math.log(tp.n * tp.p) / log_inv_rho(tp.p),
        beta_upper=base,
        lower_clamped=factor <= 0.0,
        c_in_range=0.0 < c < cm,
    )


def suen_bound(mu: float, big_delta: float, small_delta: float) -> float:
    """Upper bound on Pr(X = 0) for a sum of dependent indicators."""
    if mu < 0:
        raise ParameterError("mu must be non-negative")
    if big_delta <= 0 or small_delta <= 0:
        raise ParameterError("Delta and delta must be positive")
    return math.exp(-min(mu * mu / (8.0 * big_delta), mu / 2.0, mu / (6.0 * small_delta)))


@dataclass(frozen=True)
class SuenQuantities:
    mu: float
    big_delta: float
    small_delta: float

    @property
    def bound(self) -> float:
        return suen_bound(self.mu, self.big_delta, self.small_delta)


@dataclass(frozen=True)
class Lemma6Quantities:
    epsilon: float
    k: float
    mu_lb: float
    delta_ub: float
    small_delta_ub: float
    suen_exponent: float
    union_exponent: float
    in_range: bool

    @property
    def p_n_eps(self) -> float:
        return -64.0 * self.suen_exponent

    def suen_terms(self) -> tuple:
        """Lower bounds on the three exponents compared inside Suen's bound:
        ``mu^2/(8 Delta)``, ``mu/2`` and ``mu/(6 delta)``."""
        return (self.mu_lb ** 2 / (8.0 * self.delta_ub), self.mu_lb / 2.0,
                self.mu_lb / (6.0 * self.small_delta_ub))

    def suen(self) -> SuenQuantities:
        return SuenQuantities(self.mu_lb, self.delta_ub, self.small_delta_ub)


def lemma6_range(n: float, p: float) -> bool:
    ln = math.log(n)
    return ln * ln / math.sqrt(n) < p <= 1.0 - 1.0 / ln


def lemma6_quantities(n: float, p: float, strict: bool = True) -> Lemma6Quantities:
    """Quantities of the lower-bound certificate argument for (n, p).

    With ``strict`` a ``p`` outside ``(ln^2 n / sqrt n, 1 - 1/ln n]`` raises;
    otherwise the formulas are evaluated and ``in_range`` is False.
    """
    _check_p(p)
    ok = lemma6_range(n, p)
    if strict and not ok:
        raise ParameterError(f"p={p} outside the certificate range for n={n}")
    ln = math.log(n)
    eps = 2.0 * math.log(ln * ln / p) / ln
    k = 2.0 * (1.0 - eps) * ln / log_inv_rho(p)
    n_eps = math.exp(eps * ln)
    p_n_eps = p * n_eps
    return Lemma6Quantities(
        epsilon=eps,
        k=k,
        mu_lb=p * p / 4.0 * n_eps ** 2,
        delta_ub=p ** 3 / 2.0 * n_eps ** 3,
        small_delta_ub=2.0 * p * p * math.exp((-1.0 + 2.0 * eps) * ln),
        suen_exponent=-p_n_eps / 64.0,
        union_exponent=(k + 1.0) * ln - p_n_eps / 64.0,
        in_range=ok,
    )


def expected_certificate(n: int, p: float, k: int) -> float:
    """Mean number of same-signature neighbour pairs of a fixed vertex
    outside a fixed k-probe set: ``C(n-k-1, 2) rho^k p^2``."""
    _check_p(p)
    rho = 1.0 - 2.0 * p * (1.0 - p)
    return math.comb(n - k - 1, 2) * rho ** k * p * p


def lemma3_check(p: float) -> tuple:
    """``((p^3+q^3)^2 <= (p^2+q^2)^3, ln(p^3+q^3)/ln rho)``."""
    if not 0.0 < p < 1.0:
        raise ParameterError("ratio is 0/0 at p in {0, 1}")
    q = 1.0 - p
    cube = p ** 3 + q ** 3
    rho = p * p + q * q
    pq = p * q
    ratio = math.log1p(-3.0 * pq) / math.log1p(-2.0 * pq)
    return cube * cube <= rho ** 3, ratio


def ti_bound(i: int, n: float, p: float, c: float, omega_value: float) -> float:
    """Size bound on the round-i candidate set of the random-probe cop."""
    if i < 1:
        raise ParameterError("i must be >= 1")
    ln = math.log(n)
    eta = math.log(1.0 / p) / ln
    log_t = (math.log(2.0) + (i - 1) * (0.5 * math.log(omega_value) + math.log(p))
             + ((i - 1) * c * eta + 1.0) * ln)
    return math.exp(log_t)


def termination_quantity(ell: int, p: float, c: float, omega_value: float) -> float:
    """Bound on colliding pairs after ``ell`` rounds:
    ``omega^(ell-1) exp(-2 (ell - 2 - c (ell - 1)) ln(1/p))``."""
    return omega_value ** (ell - 1) * math.exp(-2.0 * (ell - 2 - c * (ell - 1)) * math.log(1.0 / p))


def corollary1_window(alpha: float, n: float) -> tuple:
    """Window for p = n^-alpha, 0 < alpha < 1/2; the upper coefficient
    switches at alpha = 1/3."""
    if not 0.0 < alpha < 0.5:
        raise ParameterError("alpha must lie in (0, 1/2)")
    scale = n ** alpha * math.log(n)
    upper = (1.0 - alpha) if alpha < 1.0 / 3.0 else (1.0 + alpha) / 2.0
    return (1.0 - 2.0 * alpha) * scale, upper * scale


def dense_prediction(n: float) -> float:
    """``2 log2 n``, the value for p = 1/2."""
    return 2.0 * math.log2(n)


THEORY_FIELDS = (
    "n", "p", "q", "rho", "eta", "epsilon", "c_max", "c", "k_lower", "k_upper",
    "beta_lower", "beta_upper", "mu_lb", "big_delta_ub", "small_delta_ub",
    "suen_bound", "union_exponent",
)


def theory_table(n: float, p: float, c: Optional[float] = None,
                 omega_value: Optional[float] = None) -> dict:
    """Every quantity printed by the ``theory`` command, in fixed order."""
    tp = derive_params(n, p, omega_value, c)
    win = zeta_window(tp)
    l6 = lemma6_quantities(n, p, strict=False)
    try:
        sb = l6.suen().bound
    except (ParameterError, OverflowError):
        sb = float("nan")
    values = (tp.n, tp.p, tp.q, tp.rho, tp.eta, l6.epsilon, c_max(n, p), tp.c,
              win.lower, win.upper, win.beta_lower, win.beta_upper,
              l6.mu_lb, l6.delta_ub, l6.small_delta_ub, sb, l6.union_exponent)
    return dict(zip(THEORY_FIELDS, values))
