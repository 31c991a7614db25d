"""Dev experiment: symbolic check of the log-kernel representation.

Claims to verify (s = r^2 - tau^2, spacelike region):
 1. box^2 lap^2 ln(s) = 0, so adding c1 ln(s) + c0 to the kernel
    changes nothing after eight derivatives: the scale ell drops out.
 2. -box^2 lap^2 ln^2(s / ell^2) / (3840 pi^4) equals the quadratic-
    field-strength correlator (tau^2+3r^2)(r^2+3tau^2)/(pi^4 (r^2-tau^2)^6),
    fixing the constant; if 3840 is wrong, print the right one.
 3. Same operators acting on ln^2 must also reproduce the scalar-square
    correlator from ln alone at lower order? (no: just record the
    second-derivative cross-check box lap ln(s) for reference)
"""
import sympy as sp

tau, r, ell = sp.symbols("tau r ell", positive=True)
s = r**2 - tau**2


def lap(f):
    return sp.diff(r**2 * sp.diff(f, r), r) / r**2


def box(f):
    return sp.diff(f, tau, 2) - lap(f)


def op8(f):
    return sp.simplify(lap(lap(box(box(f)))))


print("box^2 lap^2 ln(s) =", op8(sp.log(s)))

F = sp.log(s / ell**2) ** 2
G = op8(F)
G = sp.simplify(G)
print("box^2 lap^2 ln^2(s/ell^2) =", sp.factor(G))

em = (tau**2 + 3 * r**2) * (r**2 + 3 * tau**2) / (sp.pi**4 * (r**2 - tau**2) ** 6)
ratio = sp.simplify(-G / (3840 * sp.pi**4) / em)
print("ratio of -G/(3840 pi^4) to EM correlator:", ratio)
if ratio != 1:
    c = sp.simplify(-G / em / sp.pi**4)
    print("correct constant would be:", sp.simplify(c))

# order of operators should not matter (they commute on radial functions)
H = sp.simplify(box(box(lap(lap(F)))) - G)
print("commutator check (0 expected):", H)
