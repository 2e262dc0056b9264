"""Numerical machinery for bounding the least prime that does not split completely.

Subpackage map:

- ``specfun``      Lambert W branches, the entire integral I(s), the exponential
                   integral J(s), Euler's constant.
- ``profiles``     Piecewise prime-average functions P(t), extremal-character
                   envelopes, the cubic U/L envelopes and the biquadratic
                   product-character envelope.
- ``sigma_solver`` The convolution equation u*sigma(u) = (sigma*P)(u), the
                   extremal differential-difference equation, first zeros.
- ``incexc``       Inclusion-exclusion simplex integrals I_j(u), alternating-sum
                   bracketing, and the cubic I3' integral.
- ``saddle``       Saddle-point estimate of sigma(u) via Lambert-W branch logic.
- ``dedekind``     Degree/discriminant exponents, von Mangoldt sums, residue
                   bounds with the Louboutin comparison.
- ``cubic``        The cubic-field optimization (critical cancellation point,
                   exponent 1/6.65 regime).
- ``biquad``       The biquadratic delta-sweep (exponents on q and q1*q2).
- ``char_oracle``  Kronecker symbols, least non-residues, empirical scans.
- ``cli``          The ``nonsplit`` command-line interface.
"""

__version__ = "0.1.0"
