"""negspec: vacuum and thermal power spectra of quadratic field observables.

The headline fact this package computes and cross-checks from several
independent directions: spatial power spectra of normal-ordered quadratic
observables (the :phi^2: density of a massless scalar, the electromagnetic
energy density) are negative, because the Fourier-mode variance that would
force them positive is infinite and the Wiener-Khinchine argument does not
apply.  Thermal corrections are positive and win above a crossover
temperature of about 1.04 k.
"""

__version__ = "0.1.0"
