"""crosslab: crossing, modular localization, formfactor and dual-model checks."""

from .config import CONVENTIONS, TOLERANCES, ConventionPackage
from .errors import ConfigError, CrosslabError

__version__ = "0.1.0"

__all__ = ["CONVENTIONS", "TOLERANCES", "ConventionPackage", "ConfigError", "CrosslabError", "__version__"]
