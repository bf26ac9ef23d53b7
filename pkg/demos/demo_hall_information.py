"""How much does the hidden angle know about the measurement settings?

The delta-mixture model stores the settings in the hidden angle exactly
(its atoms sit on the detector axes), so its information content diverges.
The reweighted-density model spreads the dependence over a broad piecewise
constant distribution; this script measures how few bits that costs.
"""

import numpy as np

import belllab as bl

print("Hidden-angle density at two settings pairs (piecewise constant):")
lam = np.linspace(0, np.pi, 9, endpoint=False)
for a, b in ((0.0, np.pi / 8), (0.0, 3 * np.pi / 8)):
    rho = bl.hall_density(a, b, lam)
    print(f"  (a, b) = (0, {b / np.pi:.3f}*pi): rho(lambda) = "
          + " ".join(f"{r:.3f}" for r in rho))
print()

print("Dependence on the settings (total-variation distance between the")
print("hidden-angle distributions at two settings pairs):")
tv = bl.lambda_independence_residual(bl.HallModel(), (0.0, np.pi / 8), (0.0, 3 * np.pi / 8))
print(f"  reweighted density: {tv:.4f}  (nonzero: the distribution shifts)")
tv0 = bl.lambda_independence_residual(bl.LocalBaselineModel(), (0.0, np.pi / 8), (0.0, 3 * np.pi / 8))
print(f"  local baseline:     {tv0:.4f}  (settings-independent)")
print()

est = bl.mutual_information_hall(lambda_grid=2048, settings_grid=64)
print("Mutual information between the hidden angle and the settings pair")
print("(uniform settings prior, exact lambda integral per pair):")
print(f"  I(lambda : a, b) = {est.bits:.4f} bits  (error estimate {est.error_estimate:.1e})")
print()
print("So reproducing quantum statistics requires the hidden variable to")
print(f"carry some setting information, but only {est.bits:.3f} bits per pair --")
print("well under a tenth of a bit, versus unbounded for the atom mixture.")
