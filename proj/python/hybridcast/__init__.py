"""Round-accurate hybrid-network simulator bindings."""

try:
    from ._hybridcast import Graph, aggregate, apsp, cuts, disseminate, tk
except ImportError:  # extension on sys.path instead of inside the package
    from _hybridcast import Graph, aggregate, apsp, cuts, disseminate, tk

__all__ = ["Graph", "aggregate", "apsp", "cuts", "disseminate", "tk"]
