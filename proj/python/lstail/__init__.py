"""Laplace-Stieltjes tail analysis: transforms, extremal envelopes, tail bounds."""

try:
    from lstail._core import *  # noqa: F401,F403  (installed package layout)
except ImportError:
    from _core import *  # noqa: F401,F403  (build-tree layout, module on sys.path)

__version__ = "0.1.0"
