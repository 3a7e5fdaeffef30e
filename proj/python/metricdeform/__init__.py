try:
    from ._metricdeform import *  # noqa: F401,F403
except ImportError:
    # In-tree runs put the extension on sys.path directly instead of
    # installing it into the package.
    from _metricdeform import *  # noqa: F401,F403
