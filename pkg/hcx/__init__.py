"""
hcx: exact computations with left-invariant complex and hypercomplex
structures on products of su(2)
"""
from .config import settings
from .errors import HcxError

__version__ = "1.0.0"

__all__ = ["settings", "HcxError", "__version__"]
