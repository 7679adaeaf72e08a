"""Simple linear regression by ordinary least squares.

Closed-form estimation of intercept and slope for one predictor, plus
residuals, the sum of squared residuals, and R-squared. Sums are computed
with compensated summation (math.fsum) so results are deterministic across
platforms.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import fsum, isfinite
from typing import Iterable, NamedTuple, Optional


class RegressionError(Exception):
    pass


class InsufficientData(RegressionError):
    """Fewer than two observations."""


class SingularDesign(RegressionError):
    """All predictor values equal; the slope is undefined."""


class ConstantResponse(RegressionError):
    """Zero total sum of squares; R-squared is undefined."""


class Observation(NamedTuple):
    w: float  # independent: workload measure
    r: float  # dependent: resource measure


@dataclass(frozen=True)
class Dataset:
    """Ordered observations, indexed 1..n for reporting."""

    observations: tuple[Observation, ...]

    def __post_init__(self) -> None:
        obs = tuple(Observation(float(w), float(r)) for w, r in self.observations)
        for o in obs:
            if not (isfinite(o.w) and isfinite(o.r)):
                raise ValueError(f"non-finite observation: {o}")
        object.__setattr__(self, "observations", obs)

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[float, float]]) -> "Dataset":
        return cls(tuple(Observation(w, r) for w, r in pairs))

    @property
    def n(self) -> int:
        return len(self.observations)


@dataclass(frozen=True)
class RegressionModel:
    """Estimated line r = mu0_hat + mu1_hat * w with fit diagnostics.

    sigma2_hat is the residual variance estimate ssr/(n-2), present only
    when n > 2.
    """

    mu0_hat: float
    mu1_hat: float
    ssr: float
    n: int
    sigma2_hat: Optional[float] = None


# Relative threshold on the centered predictor spread below which the
# slope denominator is treated as zero.
_SINGULAR_TOL = 1e-12


def fit(data: Dataset) -> RegressionModel:
    """Estimate intercept and slope by minimizing the sum of squared residuals.

    Raises InsufficientData for n < 2 and SingularDesign when all predictor
    values coincide. n = 2 interpolates exactly (ssr = 0, no variance
    estimate).
    """
    n = data.n
    if n < 2:
        raise InsufficientData(f"need at least 2 observations, got {n}")
    ws = [o.w for o in data.observations]
    rs = [o.r for o in data.observations]
    sum_w = fsum(ws)
    sum_r = fsum(rs)
    w_bar = sum_w / n
    r_bar = sum_r / n
    sum_wr = fsum(w * r for w, r in zip(ws, rs))
    sum_ww = fsum(w * w for w in ws)
    spread = fsum((w - w_bar) ** 2 for w in ws)
    if spread < _SINGULAR_TOL * max(1.0, sum_ww):
        raise SingularDesign("all predictor values are (nearly) equal")
    mu1 = (sum_wr - r_bar * sum_w) / (sum_ww - w_bar * sum_w)
    mu0 = r_bar - mu1 * w_bar
    ssr_value = fsum((r - (mu0 + mu1 * w)) ** 2 for w, r in zip(ws, rs))
    sigma2 = ssr_value / (n - 2) if n > 2 else None
    return RegressionModel(mu0, mu1, ssr_value, n, sigma2)


def predict(model: RegressionModel, w: float) -> float:
    """Fitted value of the line at predictor value w."""
    if not isfinite(w):
        raise ValueError("predictor value must be finite")
    return model.mu0_hat + model.mu1_hat * w


def residuals(model: RegressionModel, data: Dataset) -> list[float]:
    """Observed minus fitted, in dataset order."""
    return [r - (model.mu0_hat + model.mu1_hat * w) for w, r in data.observations]


def ssr(model: RegressionModel, data: Dataset) -> float:
    """Sum of squared residuals of the model on the data."""
    return fsum(e * e for e in residuals(model, data))


def goodness_of_fit(model: RegressionModel, data: Dataset) -> float:
    """R-squared: 1 - SSR/SST.

    Raises ConstantResponse when the response has zero variation.
    """
    r_bar = fsum(o.r for o in data.observations) / data.n
    sst = fsum((o.r - r_bar) ** 2 for o in data.observations)
    if sst == 0.0:
        raise ConstantResponse("response is constant; R-squared undefined")
    return 1.0 - ssr(model, data) / sst
