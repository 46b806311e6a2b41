"""Python front end for the xsblab C++ core.

Fields are complex numpy arrays shaped (modes, ..., tau_count), one spatial
axis per dimension, each axis in FFT order.
"""

from ._xsblab import (
    ConfigError,
    GeometryError,
    Lattice,
    SingularSymbolError,
    SolverError,
    UndefinedQuotientError,
    __version__,
    apply_bilinear,
    conjugate_field,
    fit_growth,
    forward_transform,
    inverse_transform,
    list_cases,
    list_families,
    list_presets,
    maximize_quotient,
    mixed_norm,
    run_config,
    solve,
    verify_lower_bound,
    xsb_norm,
)

__all__ = [
    "ConfigError",
    "GeometryError",
    "Lattice",
    "SingularSymbolError",
    "SolverError",
    "UndefinedQuotientError",
    "__version__",
    "apply_bilinear",
    "conjugate_field",
    "fit_growth",
    "forward_transform",
    "inverse_transform",
    "list_cases",
    "list_families",
    "list_presets",
    "maximize_quotient",
    "mixed_norm",
    "run_config",
    "solve",
    "verify_lower_bound",
    "xsb_norm",
]
