"""Self-similar four-shock Riemann problems for 2D potential flow: states, polars, reflection, FV."""

from .errors import FourShockError
from .thermo import GasModel

__all__ = ["FourShockError", "GasModel"]
__version__ = "0.1.0"
