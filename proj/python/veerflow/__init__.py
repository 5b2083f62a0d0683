"""Stretch factors and foliation cones from veering triangulations."""

try:
    from ._core import *  # noqa: F401,F403
    from ._core import __doc__  # noqa: F401
except ImportError:  # running against a flat build tree
    from _core import *  # noqa: F401,F403
