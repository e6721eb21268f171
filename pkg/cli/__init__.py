from .config import ExperimentConfig, load_config, parse_config  # noqa: F401
from .describe import describe  # noqa: F401
from .experiments import Outcome, execute  # noqa: F401
from .runner import RunManifest, run, sweep  # noqa: F401
from .main import main  # noqa: F401
