from .functions import TestFunction, power_norm, exponential_tail  # noqa: F401
from .functions import smooth_user, linear, check_derivatives  # noqa: F401
from .formulas import ItoReport, interlace, taylor_remainder  # noqa: F401
from .formulas import ito_residual_jump, ito_residual_levy  # noqa: F401
