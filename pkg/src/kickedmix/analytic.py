"""Closed-form spectra, Thouless-time estimators, scaling fits and
truncation extrapolation."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np
import scipy.linalg
import scipy.optimize

from .sff import SpectralSeries

COUPLING_RATIO_CRITICAL = math.sqrt(2.0 / 3.0)


class ThoulessMethod(str, enum.Enum):
    FROM_LAMBDA1 = "from_lambda1"
    FROM_DEGENERATE_SUM = "from_degenerate_sum"
    FROM_SFF_CURVE = "from_sff_curve"


@dataclass(frozen=True)
class ThoulessEstimate:
    t_star: float
    method: ThoulessMethod
    inputs: dict

    def __post_init__(self):
        if not self.t_star > 0:
            raise ValueError("Thouless estimate must be positive")


@dataclass(frozen=True)
class CrossoverScales:
    l_c: float
    gJ_c: float = COUPLING_RATIO_CRITICAL


@dataclass(frozen=True)
class ScalingFit:
    form: str  # "log_shift": a*log(L+b)+c   |   "power": a*L^gamma
    params: Tuple[float, ...]
    residual_norm: float
    r_squared: float


@dataclass(frozen=True)
class BoundStatePair:
    E_b_plus: float
    E_b_minus: float


@dataclass(frozen=True)
class ExtrapolationResult:
    intercept: float
    slope: float
    points_used: int


def jc_n1_eigenvalues(L: int, g: float, J: float) -> np.ndarray:
    """Both eigenvalue branches of the single-excitation JC map block.

    lambda_i^{+-} = 1 - g^2 - J^2 (1 - cos 2 pi i / L)
                    +- sqrt(J^4 (1 - cos 2 pi i / L)^2 + g^4),  i = 0..L-1.
    The plus branch at i=0 is exactly 1.
    """
    if L < 2:
        raise ValueError("L must be at least 2")
    x = 1.0 - np.cos(2.0 * np.pi * np.arange(L) / L)
    base = 1.0 - g * g - J * J * x
    root = np.sqrt(J**4 * x * x + g**4)
    return np.concatenate([base + root, base - root])


def crossover_scales(g: float, J: float) -> CrossoverScales:
    """Critical chain length l_c = pi / arcsin(g / (sqrt(2) J))."""
    if J == 0:
        raise ValueError("J must be nonzero")
    ratio = abs(g) / (math.sqrt(2.0) * abs(J))
    l_c = math.pi / math.asin(ratio) if ratio < 1.0 else 0.0
    return CrossoverScales(l_c=l_c)


def degenerate_sum_condition(t: float, L: int, g: float, J: float) -> float:
    """LHS of the order-one condition for the nearly degenerate branch:

    (1-g^2)^{t-1} [ (L-1)(1-g^2) + t g^4 (L^2-1) / (12 J^2) ].
    """
    return (1.0 - g * g) ** (t - 1.0) * (
        (L - 1) * (1.0 - g * g) + t * g**4 / (4.0 * J * J) * (L * L - 1) / 3.0
    )


def thouless_from_lambda1(lambda1: float) -> ThoulessEstimate:
    """t* = -1 / log lambda_1."""
    if not 0.0 < lambda1 < 1.0:
        raise ValueError("lambda_1 must lie strictly inside (0, 1)")
    return ThoulessEstimate(
        t_star=-1.0 / math.log(lambda1),
        method=ThoulessMethod.FROM_LAMBDA1,
        inputs={"lambda1": lambda1},
    )


def thouless_from_degenerate_sum(L: int, g: float, J: float, tol: float = 1e-6) -> ThoulessEstimate:
    """Root of the order-one condition, located by bisection in t."""
    f = lambda t: degenerate_sum_condition(t, L, g, J) - 1.0
    lo, hi = 1.0, 2.0
    while f(hi) > 0:
        hi *= 2.0
        if hi > 1e9:
            raise RuntimeError("no crossing found for the degenerate-sum condition")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if f(mid) > 0:
            lo = mid
        else:
            hi = mid
    return ThoulessEstimate(
        t_star=0.5 * (lo + hi),
        method=ThoulessMethod.FROM_DEGENERATE_SUM,
        inputs={"L": L, "g": g, "J": J},
    )


def thouless_from_sff_curve(
    series: SpectralSeries, eps: float = 0.05, window: int = 5
) -> ThoulessEstimate:
    """First time with |K/(2t) - 1| < eps over `window` consecutive grid points."""
    dev = np.abs(series.K_over_2t - 1.0)
    ok = dev < eps
    run = 0
    for k, flag in enumerate(ok):
        run = run + 1 if flag else 0
        if run >= window:
            t_star = float(series.t_grid[k - window + 1])
            return ThoulessEstimate(
                t_star=t_star,
                method=ThoulessMethod.FROM_SFF_CURVE,
                inputs={"eps": eps, "window": window},
            )
    raise RuntimeError("SFF curve never settles within eps of the RMT form")


def thouless_estimate(mode: ThoulessMethod, **kwargs) -> ThoulessEstimate:
    if mode is ThoulessMethod.FROM_LAMBDA1:
        return thouless_from_lambda1(kwargs["lambda1"])
    if mode is ThoulessMethod.FROM_DEGENERATE_SUM:
        return thouless_from_degenerate_sum(kwargs["L"], kwargs["g"], kwargs["J"])
    if mode is ThoulessMethod.FROM_SFF_CURVE:
        series = kwargs.pop("series")
        return thouless_from_sff_curve(series, **kwargs)
    raise ValueError(f"unknown mode {mode}")


def fit_scaling(points: Sequence[Tuple[float, float]], form: str) -> ScalingFit:
    """Least-squares fit of t*(L): a*log(L+b)+c or a*L^gamma."""
    if len(points) < 3:
        raise ValueError("need at least 3 points")
    L = np.array([p[0] for p in points], dtype=float)
    t = np.array([p[1] for p in points], dtype=float)
    if form == "log_shift":
        model = lambda x, a, b, c: a * np.log(np.maximum(x + b, 1e-12)) + c
        p0 = [(t[-1] - t[0]) / (np.log(L[-1]) - np.log(L[0])), 0.1, 0.0]
        p0[2] = t[0] - p0[0] * np.log(L[0] + p0[1])
        # keep the shift from swallowing the smallest L
        bounds = ([-np.inf, -L.min() + 1e-6, -np.inf], [np.inf, np.inf, np.inf])
        popt, _ = scipy.optimize.curve_fit(
            model, L, t, p0=p0, bounds=bounds, maxfev=20_000
        )
        pred = model(L, *popt)
    elif form == "power":
        # linear regression in log-log space
        A = np.vstack([np.log(L), np.ones_like(L)]).T
        coef, *_ = np.linalg.lstsq(A, np.log(t), rcond=None)
        gamma, log_a = coef
        popt = (math.exp(log_a), gamma)
        pred = popt[0] * L ** popt[1]
    else:
        raise ValueError(f"unknown form {form!r}")
    resid = t - pred
    ss_tot = float(np.sum((t - t.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid**2)) / ss_tot if ss_tot > 0 else 1.0
    return ScalingFit(
        form=form,
        params=tuple(float(p) for p in popt),
        residual_norm=float(np.linalg.norm(resid)),
        r_squared=r2,
    )


def dyson_bound_states(g: float, J: float) -> BoundStatePair:
    """Impurity bound-state eigenvalues from the lattice Green's function pole:

    E_b_{+-} = 1 - 4g^2 - 2J^2 +- 2J^2 sqrt(1 + 4 g^4 / J^4).
    """
    if J == 0:
        raise ValueError("J must be nonzero")
    root = 2.0 * J * J * math.sqrt(1.0 + 4.0 * g**4 / J**4)
    base = 1.0 - 4.0 * g * g - 2.0 * J * J
    return BoundStatePair(E_b_plus=base + root, E_b_minus=base - root)


def impurity_chain_eigenvalues(g: float, J: float, L: int) -> np.ndarray:
    """Direct diagonalization of the single-flip impurity ring.

    Tight-binding ring with uniform J^2 hopping, constant shift
    1 - 4g^2 - 2J^2 and a 4g^2 on-site impurity; the finite-L oracle for
    the Dyson bound-state formula.
    """
    H = np.zeros((L, L))
    np.fill_diagonal(H, 1.0 - 4.0 * g * g - 2.0 * J * J)
    H[0, 0] += 4.0 * g * g
    for i in range(L):
        j = (i + 1) % L
        H[i, j] += J * J
        H[j, i] += J * J
    return scipy.linalg.eigvalsh(H)[::-1]


def rabi_fermion_lambda1(g: float, J: float, L: int) -> Tuple[float, int]:
    """Second-largest map eigenvalue and its degeneracy for Rabi fermions.

    Below (g/J)^2 = 2/3 the flipped-qubit branch 1 - 2g^2 wins with the
    zero-momentum lattice mode joining it (L+1 states); above, the bound
    state takes over with L-fold degeneracy.
    """
    if J == 0:
        raise ValueError("J must be nonzero")
    ratio_sq = (g / J) ** 2
    if ratio_sq < 2.0 / 3.0:
        return 1.0 - 2.0 * g * g, L + 1
    return dyson_bound_states(g, J).E_b_plus, L


def extrapolate_lambda1(
    points: Sequence[Tuple[int, float]], last: int = 3
) -> ExtrapolationResult:
    """OLS of lambda_1 against 1/N_max over the last points; intercept is
    the infinite-truncation estimate."""
    if len(points) < 2:
        raise ValueError("need at least 2 points")
    pts = sorted(points, key=lambda p: p[0])
    if any(pts[k][0] >= pts[k + 1][0] for k in range(len(pts) - 1)):
        raise ValueError("N_max values must be distinct")
    used = pts[-max(last, 2):]
    x = np.array([1.0 / p[0] for p in used])
    y = np.array([p[1] for p in used])
    A = np.vstack([x, np.ones_like(x)]).T
    (slope, intercept), *_ = np.linalg.lstsq(A, y, rcond=None)
    return ExtrapolationResult(
        intercept=float(intercept), slope=float(slope), points_used=len(used)
    )
