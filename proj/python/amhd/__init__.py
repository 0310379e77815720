"""Python bindings for the anisotropic MHD solver."""

from ._core import (
    BlowUpError,
    GridMismatch,
    InvalidParameter,
    IoError,
    continuous_dependence,
    inviscid_sweep,
    linear_validate,
    normalize_config,
    read_diagnostics,
    resume,
    run,
    set_thread_count,
    sobolev_norm,
    stability_sweep,
    thread_count,
    verify_inequalities,
)

__all__ = [
    "BlowUpError",
    "GridMismatch",
    "InvalidParameter",
    "IoError",
    "continuous_dependence",
    "inviscid_sweep",
    "linear_validate",
    "normalize_config",
    "read_diagnostics",
    "resume",
    "run",
    "set_thread_count",
    "sobolev_norm",
    "stability_sweep",
    "thread_count",
    "verify_inequalities",
]
