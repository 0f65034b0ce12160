from .metabelian import MetabelianAut as MetabelianAut
from .base import AlgebraConfig as AlgebraConfig, RenderParam as RenderParam

__version__ = "0.1.0"
__author__ = "metabelian-aut"
__url__ = ""
