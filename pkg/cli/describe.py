"""
Text printed by ``describe <kind>``: the statement under test, the
variants reported and what the verdicts mean.
"""
from errors import ArgumentError
from .config import KINDS

_UPPER = """\
Verdicts: a variant is violated when lhs - C * rhs exceeds n_sigma combined
standard errors, with C the declared constant. Without a declared constant
the verdict is holds_with_constant and C is the empirical ratio plus n_sigma
standard errors. Exit code 2 when any variant is violated."""

DESCRIPTIONS = {
    'integral': """\
Compensation identity

    E int_0^T int_E xi(s, z) N(ds, dz) = E int_0^T int_E xi(s, z) nu(dz) ds

The left side is the Monte Carlo mean of the jump sum, the right side is
computed exactly (finite atoms) or by Gauss-Legendre quadrature per shell
(power-law marks). Equality variant, violated when the two sides differ by
more than n_sigma standard errors.""",

    'bdg': """\
Maximal inequality for compensated Poisson integrals in a space of
martingale type r, u(t) = int_0^t int_E xi dN~:

    E sup_t |u(t)|^p <= C E ( int_0^T int_E |xi|^r N(ds, dz) )^{p/r}

Variants: counting_r for p >= 1, and for p <= r the small-moment forms
compensator_r, counting_r, compensator_p and counting_p. In a Hilbert space
with p = r = 2 the constant is Doob's 4. The renderer shows the smaller of
the counting_r and compensator_r bounds.

""" + _UPPER,

    'lp': """\
Two-term bound for p >= r:

    E sup_t |u(t)|^p <= C ( E ( int int |xi|^r dnu ds )^{p/r}
                            + E int int |xi|^p dnu ds )

reported as the two_term variant. With p = r the constant is declared as 1
on top of the BDG constant.

""" + _UPPER,

    'kallenberg': """\
Jump-sum moment bound for non-negative integrands:

    E ( int int f dN )^p <= p^p E ( int int f dnu ds )^p,   p >= 1

counting_1 variant, with the constant p^p declared. For p = 1 it is the
compensation identity and is judged as an equality.

""" + _UPPER,

    'conv-maximal': """\
Maximal inequality for the stochastic convolution
v(t) = int_0^t e^{(t-s)A} xi dN~ with a contraction-type semigroup,
||e^{tA}|| <= e^{alpha t}:

    E sup_t |v(t)|^p <= C e^{alpha T} E ( int int |xi|^r dN )^{p/r}

With A = 0 the samples and verdicts coincide with the bdg kind on the
same paths. Variants counting_r, two_term (p >= r) and compensator_r
(p <= r).

""" + _UPPER,

    'levy-maximal': """\
Maximal inequality for the convolution of a Levy-Ito integral with Wiener
part g dW, drift a and compensated jumps xi:

    E sup_t |v(t)|^p <= C e^{alpha T} ( E ( int |g|^2_gamma ds )^{p/2}
                        + E int int |xi|^p dnu ds
                        + E ( int int |xi|^2 dnu ds )^{p/2} )

plus gaussian_counting and gaussian_compensator variants with the drift
term E ( int |a| ds )^p when the semigroup is trivial.

""" + _UPPER,

    'tail': """\
Exponential tail of the stochastic convolution under
M_lambda = int_0^T int_E ( e^{lambda |xi|^2} - 1 - lambda |xi|^2 ) dnu ds:

    P( sup_t |v(t)| >= R ) <= C_lambda e^{-(1 + lambda R^2)^{1/2}},
    C_lambda = e^{1 + 3 C M_lambda}

with C calibrated from the smoothness of the norm. Per radius, the Wilson
interval of the empirical tail is compared with the bound: holds when the
upper limit is below it, violated when the lower limit is above it,
inconclusive otherwise. Inconclusive rows do not change the exit code.""",

    'ito-jump': """\
Pathwise Ito formula for a pure-jump process X = x0 + int b ds + int xi dN~
and a C^2 test function phi:

    phi(X_T) = phi(x0) + int phi'(X) b ds
               + sum_jumps [ phi(X- + xi) - phi(X-) ]
               - int int phi'(X) xi dnu ds

Each path is checked exactly on the jump grid; a path fails when its
residual exceeds 1e-10 (1 + |phi(X_T)|). Exit code 2 on any failure.""",

    'ito-levy': """\
Ito formula with a Wiener part g dW: the formula of ito-jump plus
int phi'(X) g dW and the trace term 1/2 int tr( phi''(X) g g* ) ds.
The residual is a discretization error of order dt^{1/2}; the report gives
its RMS over paths and never fails. Sweep dt to estimate the order.""",

    'qge': """\
Stochastic quasi-geostrophic equation on the torus [0, 2 pi)^2,

    d theta + ( -Delta theta + (R^perp theta) . grad theta ) dt = dL,

solved pseudo-spectrally by splitting theta = Y + Z, with Z the exact
Ornstein-Uhlenbeck convolution of the jump noise and Y integrated by
exponential Euler with 2/3 dealiasing. The energy ledger checks, on each
run, the energy inequality for Y, its Gronwall bound, the dissipation
bound and the Ladyzhenskaya inequality with constant 2^{1/4}, using
constants measured on the run's own fields. The report also gives the
mild-solution residual, the noise moment against the noise hypothesis
integral and the dt / dt/2 refinement gap. Exit code 2 when any ledger
check fails.""",
}


def describe(kind):
    """
    Raises:
        ArgumentError: for an unknown kind.
    """
    if kind not in KINDS:
        raise ArgumentError('unknown experiment kind {!r}, expected one of {}'
                            .format(kind, ', '.join(KINDS)))
    return DESCRIPTIONS[kind]
