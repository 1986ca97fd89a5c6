"""Exact distributions of flashing-ratchet random walks and Parrondo games."""

try:
    from ._ratchetlab import *  # noqa: F401,F403  (installed wheel layout)
    from ._ratchetlab import __version__  # noqa: F401
except ImportError:  # in-tree build: the module sits next to the package on sys.path
    from _ratchetlab import *  # noqa: F401,F403
    from _ratchetlab import __version__  # noqa: F401
