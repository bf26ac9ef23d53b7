"""Monte-Carlo and quadrature estimation: correlators, CHSH values, locality
residuals, mutual information and certification bounds.

Sampling work is split into fixed-size logical shards with one random
substream each, so results are bit-identical regardless of how many
workers execute the shards.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .core import PI, PolAngle, RngStream, canonical_diff
from .models import AnyModel, HiddenVariableModel, PRBoxModel, hall_density
from .qm import JointDist

SHARD_SIZE = 250_000


@dataclass(frozen=True)
class CorrelatorEstimate:
    """Sample mean of A*B with its standard error."""

    value: float
    standard_error: float
    sample_count: int


@dataclass(frozen=True)
class ChshReport:
    """The four correlators entering the CHSH combination and its value S."""

    settings: tuple[PolAngle, PolAngle, PolAngle, PolAngle]
    correlators: tuple[
        CorrelatorEstimate, CorrelatorEstimate, CorrelatorEstimate, CorrelatorEstimate
    ]
    s_value: float
    s_standard_error: float


@dataclass(frozen=True)
class MIEstimate:
    """Settings-averaged mutual information, in bits."""

    bits: float
    error_estimate: float


@dataclass(frozen=True)
class ScreeningResult:
    """Worst factorization residual over occupied lambda bins."""

    value: float
    occupied_bins: int
    excluded_bins: int

    def __float__(self) -> float:
        return self.value


def _shard_sizes(n: int) -> list[int]:
    """Fixed decomposition of n samples, independent of worker count."""
    full, rest = divmod(n, SHARD_SIZE)
    return [SHARD_SIZE] * full + ([rest] if rest else [])


def estimate_correlator(
    model: AnyModel,
    a: float,
    b: float,
    n: int,
    rng: RngStream,
    workers: int = 1,
) -> CorrelatorEstimate:
    """Monte-Carlo estimate of <AB> from n sampled runs."""
    if n < 1:
        raise ValueError("n must be >= 1")
    sizes = _shard_sizes(n)

    def run_shard(args):
        index, size = args
        _, a_out, b_out = model.sample_runs(a, b, size, rng.substream(index))
        return float(np.sum(a_out * b_out))

    jobs = list(enumerate(sizes))
    if workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            sums = list(pool.map(run_shard, jobs))
    else:
        sums = [run_shard(job) for job in jobs]

    mean = math.fsum(sums) / n
    # A*B is +-1, so the sample variance is determined by the mean
    variance = (n / max(n - 1, 1)) * max(1.0 - mean * mean, 0.0)
    return CorrelatorEstimate(
        value=mean,
        standard_error=math.sqrt(variance / n),
        sample_count=n,
    )


def chsh_value(c1: float, c2: float, c3: float, c4: float) -> float:
    """|c1 + c2 + c3 - c4|, the CHSH combination of four correlators."""
    return abs(c1 + c2 + c3 - c4)


def run_chsh_experiment(
    model: AnyModel,
    settings: tuple[float, float, float, float],
    n_per_correlator: int,
    rng: RngStream,
    workers: int = 1,
) -> ChshReport:
    """Estimate all four CHSH correlators and combine them into S."""
    a, a_p, b, b_p = (PolAngle(s) for s in settings)
    pairs = [(a, b), (a_p, b), (a, b_p), (a_p, b_p)]
    estimates = tuple(
        estimate_correlator(model, x, y, n_per_correlator, rng.substream(i), workers)
        for i, (x, y) in enumerate(pairs)
    )
    s = chsh_value(*(e.value for e in estimates))
    s_err = math.sqrt(sum(e.standard_error**2 for e in estimates))
    return ChshReport(
        settings=(a, a_p, b, b_p),
        correlators=estimates,
        s_value=s,
        s_standard_error=s_err,
    )


def analytic_chsh(model: AnyModel, settings: tuple[float, float, float, float]) -> float:
    """CHSH value from the model's exact joint distributions."""
    a, a_p, b, b_p = settings
    return chsh_value(
        model.joint_dist(a, b).correlator(),
        model.joint_dist(a_p, b).correlator(),
        model.joint_dist(a, b_p).correlator(),
        model.joint_dist(a_p, b_p).correlator(),
    )


def peres_identity_check(a1: int, a2: int, b1: int, b2: int) -> int:
    """(A + A')B + (A - A')B'; equals +-2 for every +-1 assignment."""
    for v in (a1, a2, b1, b2):
        if v not in (+1, -1):
            raise ValueError("outcomes must be +-1")
    return (a1 + a2) * b1 + (a1 - a2) * b2


def screening_residual(
    model: AnyModel,
    a: float,
    b: float,
    n: int,
    lambda_bins: int,
    rng: RngStream,
    min_bin_count: int = 100,
) -> ScreeningResult:
    """Empirical check that outcomes factorize given (binned) lambda.

    Returns the worst |P(A,B | bin) - P(A | bin) P(B | bin)| over occupied
    bins and outcome pairs.  Bins with fewer than min_bin_count samples are
    excluded and counted.  Models without a hidden angle are treated as a
    single trivial bin, which measures the raw outcome correlation.
    """
    lams, a_out, b_out = model.sample_runs(a, b, n, rng)
    if lams is None:
        bins = np.zeros(n, dtype=int)
        n_bins = 1
    elif getattr(model, "discrete_lambda", False):
        atoms, _ = model.lambda_atoms(a, b)
        bins = np.searchsorted(atoms, lams)
        n_bins = len(atoms)
    else:
        bins = np.minimum((np.asarray(lams) / PI * lambda_bins).astype(int), lambda_bins - 1)
        n_bins = lambda_bins

    worst = 0.0
    occupied = 0
    excluded = 0
    for idx in range(n_bins):
        mask = bins == idx
        count = int(mask.sum())
        if count == 0:
            continue
        if count < min_bin_count:
            excluded += 1
            continue
        occupied += 1
        a_bin = a_out[mask]
        b_bin = b_out[mask]
        p_a = (a_bin == 1).mean()
        p_b = (b_bin == 1).mean()
        for a_val, pa in ((1, p_a), (-1, 1.0 - p_a)):
            for b_val, pb in ((1, p_b), (-1, 1.0 - p_b)):
                joint = float(np.mean((a_bin == a_val) & (b_bin == b_val)))
                worst = max(worst, abs(joint - pa * pb))
    return ScreeningResult(value=float(worst), occupied_bins=occupied, excluded_bins=excluded)


def lambda_independence_residual(
    model: HiddenVariableModel,
    settings_1: tuple[float, float],
    settings_2: tuple[float, float],
) -> float:
    """Total-variation distance between the lambda distributions at two
    settings pairs; zero iff the model treats them identically."""
    if not model.exposes_lambda:
        raise ValueError("model exposes no hidden angle")
    if model.discrete_lambda:
        atoms_1, w_1 = model.lambda_atoms(*settings_1)
        atoms_2, w_2 = model.lambda_atoms(*settings_2)
        support = sorted(set(atoms_1.tolist()) | set(atoms_2.tolist()))
        m_1 = dict(zip(atoms_1.tolist(), w_1.tolist()))
        m_2 = dict(zip(atoms_2.tolist(), w_2.tolist()))
        return 0.5 * sum(abs(m_1.get(x, 0.0) - m_2.get(x, 0.0)) for x in support)

    pdf_1 = model.lambda_pdf(*settings_1)
    pdf_2 = model.lambda_pdf(*settings_2)
    points = sorted(
        set(model.density_breakpoints(*settings_1))
        | set(model.density_breakpoints(*settings_2))
    )

    def integrand(lam):
        lam = np.atleast_1d(lam)
        return float(np.abs(pdf_1(lam) - pdf_2(lam))[0])

    value, _ = integrate.quad(
        integrand, 0.0, PI, points=points or None, epsabs=1e-10, limit=200
    )
    return 0.5 * value


def _hall_pair_information(d: np.ndarray) -> np.ndarray:
    """Exact per-pair lambda integral of rho * log2(pi * rho) for the Hall
    model at setting distance d = |a - b| (canonical, in [0, pi/2]).

    The density is piecewise constant: value rho_s on the region where the
    two deterministic outcomes agree (s = +1, measure pi - 2d) or disagree
    (s = -1, measure 2d), so the integral is a two-term sum.
    """
    d = np.asarray(d, dtype=float)
    z = 4.0 * d / PI
    c = np.cos(2.0 * d)
    m_plus = PI - 2.0 * d
    m_minus = 2.0 * d
    with np.errstate(divide="ignore", invalid="ignore"):
        # at d = pi/2 the agreement region has zero measure; its 0/0 density
        # is masked out by the mr > 0 guard below
        rho_plus = (1.0 + c) / (PI * (2.0 - z))
        rho_minus = np.where(z > 0.0, (1.0 - c) / (PI * np.maximum(z, 1e-300)), 0.0)

    def term(m, rho):
        mr = m * rho
        return np.where(mr > 0.0, mr * np.log2(np.maximum(PI * rho, 1e-300)), 0.0)

    return term(m_plus, rho_plus) + term(m_minus, rho_minus)


def mutual_information_hall(lambda_grid: int = 2048, settings_grid: int = 64) -> MIEstimate:
    """I(lambda : a, b) for the Hall model, uniform settings prior.

    The lambda integral is evaluated exactly by subdividing at the
    sign-change points (the density is constant between them); the
    settings average runs over a uniform settings_grid x settings_grid
    grid on [0, pi)^2.  The settings-averaged density is uniform 1/pi by
    symmetry; its maximum deviation on a lambda_grid-point grid is folded
    into the error estimate, together with a settings-grid refinement
    difference.
    """
    if lambda_grid < 512:
        raise ValueError("lambda_grid must be >= 512")
    if settings_grid < 64:
        raise ValueError("settings_grid must be >= 64 per axis")

    def average_over_grid(k: int) -> float:
        grid = np.arange(k) * PI / k
        diff = np.abs(
            (grid[:, None] - grid[None, :] + PI / 2.0) % PI - PI / 2.0
        )
        return float(np.mean(_hall_pair_information(diff)))

    bits = average_over_grid(settings_grid)

    # settings-averaged density on the lambda grid (should be 1/pi)
    lam = (np.arange(lambda_grid) + 0.5) * PI / lambda_grid
    grid = np.arange(settings_grid) * PI / settings_grid
    mean_density = np.zeros(lambda_grid)
    for a in grid:
        for b in grid:
            mean_density += hall_density(a, b, lam)
    mean_density /= settings_grid**2
    density_dev = float(np.max(np.abs(mean_density * PI - 1.0)))

    refinement = abs(bits - average_over_grid(settings_grid // 2))
    return MIEstimate(bits=bits, error_estimate=max(refinement, density_dev))


def chsh_pvalue(s_hat: float, n_per_correlator: int) -> float:
    """Hoeffding-style bound on P(S_hat >= s | true S <= 2).

    exp(-N (s_hat - 2)^2 / 8) for s_hat > 2, else 1.  Underflows to 0 for
    very large N; use chsh_pvalue_log10 for reporting in that regime.
    """
    if not 0.0 <= s_hat <= 4.0:
        raise ValueError("s_hat must be in [0, 4]")
    if n_per_correlator < 1:
        raise ValueError("n_per_correlator must be >= 1")
    if s_hat <= 2.0:
        return 1.0
    return math.exp(-n_per_correlator * (s_hat - 2.0) ** 2 / 8.0)


def chsh_pvalue_log10(s_hat: float, n_per_correlator: int) -> float:
    """log10 of the chsh_pvalue bound, safe against underflow."""
    if not 0.0 <= s_hat <= 4.0:
        raise ValueError("s_hat must be in [0, 4]")
    if s_hat <= 2.0:
        return 0.0
    return -n_per_correlator * (s_hat - 2.0) ** 2 / (8.0 * math.log(10.0))
