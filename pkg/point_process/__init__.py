from .marks import Layer, MarkSpace  # noqa: F401
from .marks import finite_marks, power_law_marks, layered_marks  # noqa: F401
from .paths import JumpPath, WienerPath, jump_path  # noqa: F401
from .paths import sample_jump_path, counting_measure  # noqa: F401
from .paths import sample_wiener  # noqa: F401
