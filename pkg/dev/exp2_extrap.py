"""Dev experiment: alpha->0 extrapolation accuracy for the inverse-transform
family, scalar and EM, using exact closed forms for f(alpha) (no quadrature
noise).  Decides default schedule + power for the transforms."""
import itertools
import math
import numpy as np

from negspec.regquad import RegulatorSchedule, abel_limit

PI = math.pi

def inner_scalar(r, tau, a):
    am, bp = r - tau, r + tau
    return 0.5 * ((a*a - am*am) / (a*a + am*am)**2
                  - (a*a - bp*bp) / (a*a + bp*bp)**2)

def mom5(b, a):
    # int_0^inf k^5 cos(bk) e^{-ak} dk = 120 Re (a - ib)^6 / (a^2+b^2)^6
    return 120.0 * ((a - 1j * b)**6).real / (a*a + b*b)**6

def inner_em(r, tau, a):
    return 0.5 * (mom5(r - tau, a) - mom5(r + tau, a))

def scalar_corr(tau, r):
    return 1.0 / (8 * PI**4 * (r*r - tau*tau)**2)

def em_corr(tau, r):
    return (tau*tau + 3*r*r) * (r*r + 3*tau*tau) / (PI**4 * (r*r - tau*tau)**6)

grid = [0.5, 0.8, 1.2, 1.6, 2.0]
schedules = {
    "S1": RegulatorSchedule((0.2, 0.1, 0.05, 0.025, 0.0125), 4),
    "S2": RegulatorSchedule((0.1, 0.05, 0.025, 0.0125, 0.00625), 4),
    "S3": RegulatorSchedule((0.2, 0.1, 0.05, 0.025, 0.0125, 0.00625), 5),
}
for name, sched in schedules.items():
    for power in (1.0, 2.0):
        worst_s = worst_e = 0.0
        for tau, r in itertools.product(grid, grid):
            if abs(r - tau) < 0.2:
                continue
            pref = -1.0 / (16 * PI**4 * r * tau)
            got = pref * abel_limit(lambda a: inner_scalar(r, tau, a), sched, power=power).value
            rel = abs(got / scalar_corr(tau, r) - 1.0)
            worst_s = max(worst_s, rel)
            prefe = -(4 * PI / r) / (960 * PI**5 * tau)
            got = prefe * abel_limit(lambda a: inner_em(r, tau, a), sched, power=power).value
            rele = abs(got / em_corr(tau, r) - 1.0)
            worst_e = max(worst_e, rele)
        print(f"{name} power={power}: worst scalar rel {worst_s:.2e}  worst EM rel {worst_e:.2e}")
