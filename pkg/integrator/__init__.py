from .semigroup import Semigroup, matrix_semigroup  # noqa: F401
from .semigroup import diagonal_semigroup, trivial_semigroup  # noqa: F401
from .integrand import Integrand  # noqa: F401
from .sample_path import SamplePath, uniform_grid  # noqa: F401
from .integrals import integrate_compensated, integrate_counting  # noqa: F401
from .integrals import integrate_wiener, quadratic_functionals  # noqa: F401
from .convolution import convolve, convolve_levy  # noqa: F401
from .process import ProcessTrace, levy_process  # noqa: F401
