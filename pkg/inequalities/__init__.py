from .estimates import Estimate, mean_estimate, ratio_estimate  # noqa: F401
from .estimates import fold_spread, wilson_interval  # noqa: F401
from .specs import ExperimentSpec, IntegrandFamily  # noqa: F401
from .replicas import Samples, collect  # noqa: F401
from .reports import InequalityReport, Variant, Verdict  # noqa: F401
from .reports import bdg_report, small_p_reports, lp_report  # noqa: F401
from .reports import kallenberg_report, compensation_report  # noqa: F401
from .reports import convolution_maximal_report  # noqa: F401
from .reports import levy_maximal_report  # noqa: F401
from .tail import TailReport, tail_report  # noqa: F401
