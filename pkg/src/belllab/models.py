"""Hidden-variable models for the two-photon Bell experiment.

Every model supplies a (possibly setting-dependent) distribution for the
hidden polarization angle lambda together with one-sided outcome
probabilities, and the observable joint distribution is assembled through
the separability integral

    P(A, B) = integral dlam P(lam) * P(A | lam) * P(B | lam).

Outcomes on the two sides are always drawn independently given lambda, so
lambda screens one wing from the other by construction.  The models that
reproduce quantum statistics do so by letting the lambda distribution
depend on both measurement settings.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod

import numpy as np
from scipy import integrate

from .core import HALF_PI, PI, OUTCOMES, PolAngle, RngStream, canonical_diff, check_outcome
from .qm import JointDist

QUADRATURE_ABS_TOL = 1e-10


class QuadratureError(RuntimeError):
    """Raised when the lambda integral fails to reach the requested accuracy."""

    def __init__(self, message: str, achieved_error: float) -> None:
        super().__init__(f"{message} (achieved error estimate {achieved_error:.3e})")
        self.achieved_error = achieved_error


def _sign_plus(x: np.ndarray | float) -> np.ndarray | float:
    """sign(cos-argument) with the tie cos(.) == 0 resolved to +1."""
    return np.where(np.asarray(x) >= 0.0, 1.0, -1.0)


def hall_density(a: float, b: float, lam: np.ndarray | float) -> np.ndarray | float:
    """Setting-dependent hidden-angle density of the deterministic Hall model.

    Piecewise constant in lambda; the pieces are separated by the points
    where cos(2a - 2lam) or cos(2b - 2lam) changes sign.  Only defined
    almost everywhere when a == b (the disagreement set then has measure
    zero and the 0/0 value on it is never used).
    """
    lam = np.asarray(lam, dtype=float)
    a_hat = _sign_plus(np.cos(2.0 * (a - lam)))
    b_hat = _sign_plus(np.cos(2.0 * (b - lam)))
    d = abs(canonical_diff(a, b))
    z = (2.0 / PI) * 2.0 * d
    s = a_hat * b_hat
    num = 1.0 + s * math.cos(2.0 * d)
    den = 1.0 + s * (1.0 - z)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = num / (PI * den)
    # a == b: the disagreement set is measure-zero; give it density 0.
    return np.where(den == 0.0, 0.0, out)


def hall_breakpoints(a: float, b: float) -> tuple[float, ...]:
    """Interior discontinuity points of hall_density in [0, pi)."""
    pts = {
        (a + PI / 4.0) % PI,
        (a + 3.0 * PI / 4.0) % PI,
        (b + PI / 4.0) % PI,
        (b + 3.0 * PI / 4.0) % PI,
    }
    return tuple(sorted(p for p in pts if 0.0 < p < PI))


class HiddenVariableModel(ABC):
    """Contract shared by all lambda-mediated models.

    ``discrete_lambda`` distinguishes atom-valued lambda distributions
    (exact summation) from continuous densities (quadrature).
    """

    name: str = "hidden-variable-model"
    exposes_lambda: bool = True
    discrete_lambda: bool = False

    # -- lambda distribution ------------------------------------------------

    def lambda_atoms(self, a: float, b: float) -> tuple[np.ndarray, np.ndarray]:
        """(atoms, weights) for discrete models."""
        raise NotImplementedError

    def lambda_pdf(self, a: float, b: float):
        """Vectorized density over [0, pi) for continuous models."""
        raise NotImplementedError

    def density_breakpoints(self, a: float, b: float) -> tuple[float, ...]:
        """Known discontinuities of the density, for quadrature subdivision."""
        return ()

    @abstractmethod
    def sample_lambdas(self, a: float, b: float, n: int, rng: RngStream) -> np.ndarray:
        """Draw n hidden angles from the (a, b)-dependent distribution."""

    # -- outcome models -----------------------------------------------------

    @abstractmethod
    def outcome_prob_1(self, a: float, lam: np.ndarray, outcome: int) -> np.ndarray:
        """P(A = outcome | a, lam), vectorized over lam."""

    @abstractmethod
    def outcome_prob_2(self, b: float, lam: np.ndarray, outcome: int) -> np.ndarray:
        """P(B = outcome | b, lam), vectorized over lam."""

    # -- derived ------------------------------------------------------------

    def joint_dist(self, a: float, b: float) -> JointDist:
        """Separability integral of the lambda distribution and outcome models."""
        if self.discrete_lambda:
            atoms, weights = self.lambda_atoms(a, b)
            probs = {}
            for a_out in OUTCOMES:
                p1 = self.outcome_prob_1(a, atoms, a_out)
                for b_out in OUTCOMES:
                    p2 = self.outcome_prob_2(b, atoms, b_out)
                    probs[(a_out, b_out)] = float(np.sum(weights * p1 * p2))
            return JointDist(
                probs[(1, 1)], probs[(1, -1)], probs[(-1, 1)], probs[(-1, -1)]
            ).validate(atol=1e-9)

        pdf = self.lambda_pdf(a, b)
        points = list(self.density_breakpoints(a, b))
        probs = {}
        worst_err = 0.0
        for a_out in OUTCOMES:
            for b_out in OUTCOMES:

                def integrand(lam, a_out=a_out, b_out=b_out):
                    lam = np.atleast_1d(lam)
                    val = (
                        pdf(lam)
                        * self.outcome_prob_1(a, lam, a_out)
                        * self.outcome_prob_2(b, lam, b_out)
                    )
                    return float(val[0])

                value, err = integrate.quad(
                    integrand, 0.0, PI, points=points or None,
                    epsabs=QUADRATURE_ABS_TOL, epsrel=1e-12, limit=200,
                )
                worst_err = max(worst_err, err)
                probs[(a_out, b_out)] = value
        if worst_err > 1e-8:
            raise QuadratureError("lambda integral did not converge", worst_err)
        return JointDist(
            probs[(1, 1)], probs[(1, -1)], probs[(-1, 1)], probs[(-1, -1)]
        ).validate(atol=1e-9)

    def sample_outcomes(
        self, a: float, b: float, lams: np.ndarray, rng: RngStream
    ) -> tuple[np.ndarray, np.ndarray]:
        """Draw A and B independently given each lambda (screening)."""
        gen = rng.generator
        p1 = self.outcome_prob_1(a, lams, +1)
        p2 = self.outcome_prob_2(b, lams, +1)
        a_out = np.where(gen.random(lams.size) < p1, 1, -1)
        b_out = np.where(gen.random(lams.size) < p2, 1, -1)
        return a_out, b_out

    def sample_runs(
        self, a: float, b: float, n: int, rng: RngStream
    ) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """n independent (lambda, A, B) triples."""
        lams = self.sample_lambdas(a, b, n, rng)
        a_out, b_out = self.sample_outcomes(a, b, lams, rng)
        return lams, a_out, b_out


class MalusOutcomeMixin:
    """Outcome probabilities cos^2 / sin^2 of the setting-lambda angle."""

    def outcome_prob_1(self, a, lam, outcome):
        check_outcome(outcome)
        p_plus = np.cos(a - np.asarray(lam, dtype=float)) ** 2
        return p_plus if outcome == +1 else 1.0 - p_plus

    outcome_prob_2 = outcome_prob_1


class DeltaMixtureModel(MalusOutcomeMixin, HiddenVariableModel):
    """Hidden angle aligned with one of the four detector axes.

    lambda is a, a + pi/2, b or b + pi/2 (mod pi) with probability 1/4
    each; coinciding atoms are merged.  Outcomes follow Malus' law.
    """

    name = "delta-mixture"
    discrete_lambda = True

    def lambda_atoms(self, a, b):
        raw = [PolAngle(a), PolAngle(a + HALF_PI), PolAngle(b), PolAngle(b + HALF_PI)]
        merged: dict[float, float] = {}
        for atom in raw:
            merged[float(atom)] = merged.get(float(atom), 0.0) + 0.25
        atoms = np.array(sorted(merged))
        weights = np.array([merged[x] for x in atoms])
        return atoms, weights

    def sample_lambdas(self, a, b, n, rng):
        atoms, weights = self.lambda_atoms(a, b)
        return rng.generator.choice(atoms, size=n, p=weights)


class HallModel(HiddenVariableModel):
    """Deterministic-outcome model with an information-efficient lambda.

    The density trades the four delta atoms for a broad piecewise-constant
    distribution; outcomes are fixed by the sign of cos(2*setting - 2*lambda).
    """

    name = "hall"

    def lambda_pdf(self, a, b):
        return lambda lam: hall_density(a, b, lam)

    def density_breakpoints(self, a, b):
        return hall_breakpoints(a, b)

    def _segments(self, a, b):
        edges = [0.0, *self.density_breakpoints(a, b), PI]
        edges = sorted(set(edges))
        mids = 0.5 * (np.array(edges[:-1]) + np.array(edges[1:]))
        values = np.asarray(hall_density(a, b, mids), dtype=float)
        lengths = np.diff(edges)
        return np.array(edges), values, lengths

    def sample_lambdas(self, a, b, n, rng):
        edges, values, lengths = self._segments(a, b)
        weights = values * lengths
        weights = weights / weights.sum()
        gen = rng.generator
        seg = gen.choice(len(lengths), size=n, p=weights)
        return edges[seg] + lengths[seg] * gen.random(n)

    def outcome_prob_1(self, a, lam, outcome):
        check_outcome(outcome)
        determined = _sign_plus(np.cos(2.0 * (a - np.asarray(lam, dtype=float))))
        return (determined == outcome).astype(float)

    outcome_prob_2 = outcome_prob_1


class LocalBaselineModel(MalusOutcomeMixin, HiddenVariableModel):
    """Locally causal control model: uniform lambda, Malus outcomes.

    The lambda distribution ignores the settings, so this model obeys
    lambda-independence and its CHSH value is bounded by 2 (in fact the
    analytic correlator is cos(2a - 2b) / 2).
    """

    name = "local-baseline"

    def lambda_pdf(self, a, b):
        return lambda lam: np.full(np.shape(lam), 1.0 / PI)

    def sample_lambdas(self, a, b, n, rng):
        return rng.generator.random(n) * PI


class PRBoxModel:
    """Popescu-Rohrlich nonlocal box, saturating the algebraic CHSH maximum 4.

    There is no hidden mediator: outcomes are perfectly (anti)correlated
    directly.  Angle settings are mapped onto box inputs x, y in {0, 1} by
    matching against the configured CHSH quadruple (a, a', b, b'); the box
    anticorrelates exactly when x = y = 1.  Marginals stay uniform, so the
    box is signal-local despite being maximally Bell-violating.
    """

    name = "pr-box"
    exposes_lambda = False
    discrete_lambda = False

    def __init__(self, settings: tuple[float, float, float, float]) -> None:
        self.settings = tuple(PolAngle(s) for s in settings)

    def box_inputs(self, a: float, b: float) -> tuple[int, int]:
        a0, a1, b0, b1 = self.settings
        a = PolAngle(a)
        b = PolAngle(b)
        if a == a0:
            x = 0
        elif a == a1:
            x = 1
        else:
            raise ValueError(f"side-1 setting {float(a)!r} not in the configured quadruple")
        if b == b0:
            y = 0
        elif b == b1:
            y = 1
        else:
            raise ValueError(f"side-2 setting {float(b)!r} not in the configured quadruple")
        return x, y

    def joint_dist(self, a: float, b: float) -> JointDist:
        x, y = self.box_inputs(a, b)
        if x & y:
            return JointDist(0.0, 0.5, 0.5, 0.0)
        return JointDist(0.5, 0.0, 0.0, 0.5)

    def sample_runs(self, a, b, n, rng):
        x, y = self.box_inputs(a, b)
        a_out = np.where(rng.generator.random(n) < 0.5, 1, -1)
        b_out = -a_out if x & y else a_out.copy()
        return None, a_out, b_out


AnyModel = HiddenVariableModel | PRBoxModel


def joint_outcome_dist(model: AnyModel, a: float, b: float) -> JointDist:
    """Observable joint distribution of the model at settings (a, b)."""
    return model.joint_dist(a, b)


def sample_run(model: AnyModel, a: float, b: float, rng: RngStream):
    """One (lambda, A, B) realization; lambda is None for lambda-free models."""
    lams, a_out, b_out = model.sample_runs(a, b, 1, rng)
    lam = None if lams is None else PolAngle(lams[0])
    return lam, int(a_out[0]), int(b_out[0])
