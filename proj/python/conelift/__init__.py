"""Cone lifts of immersions into Sasaki spheres."""

from ._conelift import (
    ConfigError,
    GeometryError,
    catalog,
    catalog_names,
    classify,
    discrete_functionals,
    discrete_tension,
    fixture_path,
    perturbed_legendrian_circle,
    report_json,
    run_flow,
    verify,
)

__all__ = [
    "ConfigError",
    "GeometryError",
    "catalog",
    "catalog_names",
    "classify",
    "discrete_functionals",
    "discrete_tension",
    "fixture_path",
    "perturbed_legendrian_circle",
    "report_json",
    "run_flow",
    "verify",
]
