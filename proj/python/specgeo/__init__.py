"""Discrete spectral geometry toolkit with Kato-type curvature checks."""

from ._core import (
    Mesh,
    Spectrum,
    betti_one,
    cheeger_exact,
    cheeger_sweep,
    constants_table,
    curvature_lowest,
    decompose,
    diameter,
    diameter_constant,
    hypothesis_threshold,
    icosphere,
    kato_constant,
    load_mesh,
    bumpy_sphere,
    flat_torus,
    resolvent_constant,
    run_suite,
    sobolev_constants,
    sphere_model_spectrum,
    torus_model_spectrum,
)

__all__ = [
    "Mesh",
    "Spectrum",
    "betti_one",
    "bumpy_sphere",
    "cheeger_exact",
    "cheeger_sweep",
    "constants_table",
    "curvature_lowest",
    "decompose",
    "diameter",
    "diameter_constant",
    "flat_torus",
    "hypothesis_threshold",
    "icosphere",
    "kato_constant",
    "load_mesh",
    "resolvent_constant",
    "run_suite",
    "sobolev_constants",
    "sphere_model_spectrum",
    "torus_model_spectrum",
]
