"""Inspect extrapolant sequences: converging-from-small-start (EM transform)
vs genuinely divergent (1/alpha family), to calibrate the detector."""
import itertools
import math

PI = math.pi

def neville_extrapolants(xs, fs, order):
    tab = [fs[0:1]]
    for i in range(1, len(xs)):
        row = [fs[i]]
        for j in range(1, min(i, order) + 1):
            num = xs[i - j] * row[j - 1] - xs[i] * tab[i - 1][j - 1]
            row.append(num / (xs[i - j] - xs[i]))
        tab.append(row)
    return [tab[i][min(i, order)] for i in range(len(xs))]

def mom5(b, a):
    return 120.0 * ((a - 1j * b)**6).real / (a*a + b*b)**6

def inner_em(r, tau, a):
    return 0.5 * (mom5(r - tau, a) - mom5(r + tau, a))

def inner_scalar(r, tau, a):
    am, bp = r - tau, r + tau
    return 0.5 * ((a*a - am*am) / (a*a + am*am)**2
                  - (a*a - bp*bp) / (a*a + bp*bp)**2)

S1 = (0.2, 0.1, 0.05, 0.025, 0.0125)
S3 = (0.2, 0.1, 0.05, 0.025, 0.0125, 0.00625)

print("--- 1/alpha on S1 order 4 (must flag):")
es = neville_extrapolants([v for v in S1], [1/v for v in S1], 4)
print("  ", ["%.4g" % e for e in es])
print("  ratios:", ["%.3f" % (abs(b)/abs(a)) for a, b in zip(es, es[1:])])

print("--- 1/alpha^2 on S1 (must flag):")
es = neville_extrapolants([v for v in S1], [1/v**2 for v in S1], 4)
print("  ", ["%.4g" % e for e in es])
print("  ratios:", ["%.3f" % (abs(b)/abs(a)) for a, b in zip(es, es[1:])])

grid = [0.5, 0.8, 1.2, 1.6, 2.0]
print("--- EM inner, power=2 on S1 (must NOT flag); worst final ratios:")
worst = 0.0
for tau, r in itertools.product(grid, grid):
    if abs(r - tau) < 0.2:
        continue
    xs = [v * v for v in S1]
    fs = [inner_em(r, tau, v) for v in S1]
    es = neville_extrapolants(xs, fs, 4)
    mags = [abs(e) for e in es]
    mono = all(b > a for a, b in zip(mags, mags[1:]))
    fr = mags[-1] / mags[-2]
    tot = mags[-1] / mags[0]
    if mono and tot > 10:
        print(f"  tau={tau} r={r}: mono grow, total {tot:.1f}x, final ratio {fr:.4f},"
              f" seq {['%.3g' % e for e in es]}")
    worst = max(worst, fr if mono and tot > 10 else 0)
print(f"  worst flagged-candidate final ratio: {worst:.4f}")

print("--- scalar inner, power=2 on S1: same check:")
for tau, r in itertools.product(grid, grid):
    if abs(r - tau) < 0.2:
        continue
    xs = [v * v for v in S1]
    fs = [inner_scalar(r, tau, v) for v in S1]
    es = neville_extrapolants(xs, fs, 4)
    mags = [abs(e) for e in es]
    mono = all(b > a for a, b in zip(mags, mags[1:]))
    tot = mags[-1] / mags[0]
    if mono and tot > 10:
        print(f"  tau={tau} r={r}: total {tot:.1f}x final ratio {mags[-1]/mags[-2]:.4f}")
