"""Dev experiment: tune the inverse-transform regulator schedule.

For both kernels the damped radial integral has a closed form, so the
Neville extrapolation error (truncation) can be computed exactly on the
acceptance grid.  Roundoff noise is modeled as 2 eps times the absolute
momentum-space mass at each alpha, propagated through the (linear)
extrapolation weights with a sqrt(panel-count) reduction.  We want a
schedule whose worst truncation AND worst noise sit well under 1e-4
(scalar) and 1e-3 (EM) relative.
"""
import math
import numpy as np

from negspec.kernels import (SpacetimeSeparation, scalar_corr, em_corr,
                             SCALAR_SPECTRUM_NORM, EM_SPECTRUM_NORM)
from negspec.regquad import RegulatorSchedule, abel_limit

EPS = np.finfo(float).eps
PI = math.pi


def damped_scalar(alpha, tau, r):
    # int_0^inf k sin(k tau) sin(k r) e^{-alpha k} dk / (-64 pi^5 tau)
    def I1(c):
        return (alpha * alpha - c * c) / (alpha * alpha + c * c) ** 2
    a, b = r - tau, r + tau
    return -0.5 * (I1(a) - I1(b)) / (SCALAR_SPECTRUM_NORM * tau)


def damped_em(alpha, tau, r):
    # int_0^inf k^5 sin(k tau) sin(k r) e^{-alpha k} dk / (-960 pi^5 tau)
    def I5(c):
        z = alpha + 1j * c
        return 120.0 * (z ** 6).real / (alpha * alpha + c * c) ** 6
    a, b = r - tau, r + tau
    return -0.5 * (I5(a) - I5(b)) / (EM_SPECTRUM_NORM * tau)


def mass_scalar(alpha, tau, r):
    # envelope of int k |sinc(k tau)| |sin(k r)| e^{-alpha k} / (64 pi^5)
    return (2 / PI) / (SCALAR_SPECTRUM_NORM * tau) * 1.0 / alpha ** 2


def mass_em(alpha, tau, r):
    return (2 / PI) / (EM_SPECTRUM_NORM * tau) * 120.0 / alpha ** 6


def neville_weights(schedule, power):
    xs = [a ** power for a in schedule.values]
    n = len(xs)
    w = np.zeros(n)
    for i in range(n):
        f = np.zeros(n)
        f[i] = 1.0
        it = iter(f)
        res = abel_limit(lambda a, _it=iter(f.tolist()): next(_it),
                         schedule, power=power)
        w[i] = res.value
    return w


def scan(schedule, power=2.0):
    w = neville_weights(schedule, power)
    rows = []
    for kind, damped, mass, exact in (
            ("s", damped_scalar, mass_scalar, scalar_corr),
            ("e", damped_em, mass_em, em_corr)):
        worst_t = (0.0, None)
        worst_n = (0.0, None)
        for tau in np.linspace(0.1, 2.1, 5):
            for r in np.linspace(0.3, 2.3, 5):
                if abs(r - tau) < 0.2:
                    continue
                sep = SpacetimeSeparation(tau=tau, r=r)
                target = exact(sep)
                vals = [damped(a, tau, r) for a in schedule.values]
                it = iter(vals)
                lim = abel_limit(lambda a, _it=iter(vals): next(_it),
                                 schedule, power=power)
                trunc = abs((4 * PI / r) * lim.value / target - 1)
                npan = [max(30.0 / a, 40) / (PI / max(r, tau))
                        for a in schedule.values]
                noise = 2 * EPS * (4 * PI / r) * sum(
                    abs(wi) * mass(a, tau, r) / math.sqrt(np_)
                    for wi, a, np_ in zip(w, schedule.values, npan))
                nrel = noise / abs(target)
                if trunc > worst_t[0]:
                    worst_t = (trunc, (tau, r))
                if nrel > worst_n[0]:
                    worst_n = (nrel, (tau, r))
        rows.append((kind, worst_t, worst_n))
    return rows


candidates = {
    "default 0.2..0.0125 o4": RegulatorSchedule(
        (0.2, 0.1, 0.05, 0.025, 0.0125), 4),
    "sqrt2  0.2..0.05  o4": RegulatorSchedule(
        (0.2, 0.2 / math.sqrt(2), 0.1, 0.1 / math.sqrt(2), 0.05), 4),
    "sqrt2  0.28..0.07 o4": RegulatorSchedule(
        (0.283, 0.2, 0.1414, 0.1, 0.0707), 4),
    "sqrt2  0.16..0.04 o4": RegulatorSchedule(
        (0.16, 0.16 / math.sqrt(2), 0.08, 0.08 / math.sqrt(2), 0.04), 4),
    "ratio2 0.4..0.05  o3": RegulatorSchedule(
        (0.4, 0.2, 0.1, 0.05), 3),
    "sqrt2 6pt 0.28..0.05 o5": RegulatorSchedule(
        (0.283, 0.2, 0.1414, 0.1, 0.0707, 0.05), 5),
    "sqrt2 6pt 0.4..0.0707 o5": RegulatorSchedule(
        (0.4, 0.283, 0.2, 0.1414, 0.1, 0.0707), 5),
}

for name, sched in candidates.items():
    try:
        rows = scan(sched)
    except Exception as ex:
        print(f"{name:28s} FAILED {type(ex).__name__}: {ex}")
        continue
    msg = " | ".join(
        f"{kind}: trunc {wt[0]:.2e}@{wt[1]} noise {wn[0]:.2e}@{wn[1]}"
        for kind, wt, wn in rows)
    print(f"{name:28s} {msg}")
