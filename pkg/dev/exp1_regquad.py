"""Dev experiment: abel_limit behavior + oscillatory engine vs closed forms."""
import math
import numpy as np

from negspec.regquad import (RegulatorSchedule, OscillatoryIntegrand,
                             abel_limit, oscillatory_integral, DEFAULT_SCHEDULE)
from negspec.errors import ExtrapolationDiverged

# --- E1a: e^{-alpha} with schedule (0.4,0.2,0.1,0.05) order 3
s = RegulatorSchedule((0.4, 0.2, 0.1, 0.05), 3)
res = abel_limit(lambda a: math.exp(-a), s)
print(f"E1a exp(-a) -> {res.value:.12f}  err_est {res.error_estimate:.3g}  "
      f"true err {abs(res.value - 1.0):.3g}")

# --- E1b: divergent family 1/alpha must raise
try:
    abel_limit(lambda a: 1.0 / a, DEFAULT_SCHEDULE)
    print("E1b FAIL: no exception")
except ExtrapolationDiverged as e:
    print(f"E1b ok: ExtrapolationDiverged ({e})")

# --- E1c: polynomial exactness
rng = np.random.default_rng(0)
coef = rng.normal(size=5)
poly = lambda a: sum(c * a**i for i, c in enumerate(coef))
res = abel_limit(poly, DEFAULT_SCHEDULE)
print(f"E1c poly deg4 err {abs(res.value - coef[0]):.3g}")

# --- E2a: engine vs sin: int_0^inf sin(u) e^{-u} du = 1/2
g = OscillatoryIntegrand(amplitude=lambda u: np.exp(-u), phase_frequency=1.0)
res = oscillatory_integral(g)
print(f"E2a sin*exp -> {res.value:.12f} (true 0.5), err_est {res.error_estimate:.3g}, "
      f"evals {res.evaluations}")

# --- E2b: cos kind: int_0^inf cos(u)/(1+u^2) du = pi/(2e)
g = OscillatoryIntegrand(amplitude=lambda u: 1.0 / (1.0 + u * u),
                         phase_frequency=1.0, kind="cos")
res = oscillatory_integral(g)
true = math.pi / (2.0 * math.e)
print(f"E2b cos/(1+u^2) -> {res.value:.12f} (true {true:.12f}), "
      f"diff {abs(res.value-true):.3g}, evals {res.evaluations}")

# sin variant with amplitude u/(1+u^2) -> same pi/(2e)
g = OscillatoryIntegrand(amplitude=lambda u: u / (1.0 + u * u),
                         phase_frequency=1.0, kind="sin")
res = oscillatory_integral(g)
print(f"E2b' u/(1+u^2) sin -> diff {abs(res.value-true):.3g}, evals {res.evaluations}")

# --- E2c: damped product-of-sines vs closed form
def inner_exact(r, tau, a):
    am, bp = r - tau, r + tau
    return 0.5 * ((a*a - am*am) / (a*a + am*am)**2
                  - (a*a - bp*bp) / (a*a + bp*bp)**2)

for (r, tau) in [(2.0, 1.0), (0.8, 0.5), (2.0, 1.6)]:
    for a in (0.2, 0.0125):
        g = OscillatoryIntegrand(
            amplitude=lambda u, t=tau: u * np.sin(t * u),
            phase_frequency=r, kind="sin")
        res = oscillatory_integral(g, alpha=a, abs_tol=1e-12, rel_tol=1e-11)
        ex = inner_exact(r, tau, a)
        print(f"E2c r={r} tau={tau} a={a}: engine {res.value:.10e} exact {ex:.10e} "
          f"rel {abs(res.value-ex)/abs(ex):.2e} evals {res.evaluations}")
