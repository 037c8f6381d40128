# handlers/__init__.py
from .common import common_router
from .denotations import denotation_router

__all__ = ["common_router", "denotation_router"]
