"""Python bindings for the cutset library."""

try:
    from ._core import *  # noqa: F401,F403
    from ._core import __version__  # noqa: F401
except ImportError:  # development layout: module next to the package
    from _core import *  # noqa: F401,F403
    from _core import __version__  # noqa: F401
