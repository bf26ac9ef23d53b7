"""Two entangled photons from kicked-polarization histories.

Both photons share one unknown initial polarization and undergo
independent Cauchy kick histories toward their respective polarizers.
As the kick width shrinks, the observable statistics converge to the
quantum Bell-state predictions, and the posterior over the shared angle
collapses onto the four detector axes -- recovering the simple atom
mixture as a limit.
"""

import math

import belllab as bl

a, b = bl.PolAngle(0.0), bl.PolAngle(math.pi / 8)
ref = bl.qm_joint(a, b)
print(f"Settings a = 0, b = pi/8; quantum joint: p(+,+) = {ref.p_pp:.6f}, "
      f"p(+,-) = {ref.p_pm:.6f}")
print()

print("Convergence of the kicked-photon joint to the quantum prediction:")
for gamma in (0.1, 0.01, 1e-3, 1e-4):
    grid = int(math.ceil(8 * math.pi / gamma))
    res = bl.two_photon_joint(a, b, gamma, grid)
    print(f"  gamma = {gamma:<7g} max |joint - QM| = {res.joint.max_abs_diff(ref):.2e}"
          f"   <AB> = {res.joint.correlator():+.6f}")
print()

gamma = 1e-4
res = bl.two_photon_joint(a, b, gamma, int(math.ceil(8 * math.pi / gamma)))
windows = res.atom_window_masses(3 * gamma)
total = sum(windows.values())
print(f"Posterior over the shared initial angle (gamma = {gamma:g}),")
print("mass within +-3 widths of each detector axis:")
for atom, mass in sorted(windows.items()):
    print(f"  lambda = {atom/math.pi:6.3f}*pi   mass = {mass:.4f}   share = {mass/total:.4f}")
print(f"  (peaks are Cauchy: +-3 widths hold {2/math.pi*math.atan(3):.1%} of each peak;")
print("   the four shares are exactly 1/4)")
print()
print("In the narrow-kick limit the shared angle behaves as if it had been")
print("drawn uniformly from the four detector axes -- the atom-mixture model")
print("appears as the limit of a dynamical story.")
