from .space import GridSpec, NormedSpace, PowerNormDerivative  # noqa: F401
from .space import lq, spectral_sobolev, norm, psi_p  # noqa: F401
from .space import psi_p_gradient, psi_p_hessian  # noqa: F401
from .probes import GammaFactor, gamma_norm  # noqa: F401
from .probes import holder_constant_probe, type_constant_probe  # noqa: F401
