"""Minimal graphs over convex domains in the homogeneous spaces E(kappa, tau)."""

try:
    from ._ektlab import *  # noqa: F401,F403  (installed wheel layout)
    from ._ektlab import __version__  # noqa: F401
except ImportError:  # build tree: the extension sits next to this package on sys.path
    from _ektlab import *  # noqa: F401,F403
    from _ektlab import __version__  # noqa: F401
