"""weyl_eulerian: exact graded D-module computations over the Weyl algebra."""

from .algebra import WeylElement, degree_of, euler_operator, power, transpose
from .catalog import build_model, local_cohomology_catalog, presentation_catalog
from .groebner import (
    BasisLimitError,
    buchberger,
    eulerian_index,
    free_resolution,
    is_member,
    left_ideal,
    normal_form,
    syzygies,
)
from .homology import (
    concentration,
    de_rham,
    ext_over_an,
    ext_over_r,
    koszul_homology,
    tor_against_rr,
    tor_over_an,
    tor_over_r,
)
from .models import (
    cech_model,
    check_generalized_eulerian,
    localization_model,
    matlis_dual,
    polynomial_model,
    presentation_model,
    shift,
    transpose_model,
)
from .parse import parse_element, print_element
from .suites import run_suite

__all__ = [
    "WeylElement", "degree_of", "euler_operator", "power", "transpose",
    "build_model", "local_cohomology_catalog", "presentation_catalog",
    "BasisLimitError", "buchberger", "eulerian_index", "free_resolution", "is_member", "left_ideal",
    "normal_form", "syzygies",
    "concentration", "de_rham", "ext_over_an", "ext_over_r", "koszul_homology",
    "tor_against_rr", "tor_over_an", "tor_over_r",
    "cech_model", "check_generalized_eulerian", "localization_model", "matlis_dual",
    "polynomial_model", "presentation_model", "shift", "transpose_model",
    "parse_element", "print_element", "run_suite",
]
