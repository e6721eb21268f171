from .fields import SpectralField, random_field, inner, l2_norm  # noqa: F401
from .fields import riesz_velocity, transport_term  # noqa: F401
from .fields import nonlinear_term, sobolev_norm  # noqa: F401
from .noise import QGENoise, FieldPath, qge_noise  # noqa: F401
from .noise import mode_bundle, ou_convolution_z  # noqa: F401
from .solver import QGERun, solve_y, assemble_theta  # noqa: F401
from .solver import simulate, run_qge, refinement_gap  # noqa: F401
from .diagnostics import EnergyLedger, energy_diagnostics  # noqa: F401
from .diagnostics import gagliardo_nirenberg_constant  # noqa: F401
from .diagnostics import riesz_l4_constant, z_moment  # noqa: F401
from .snapshots import write_snapshots, read_snapshots  # noqa: F401
