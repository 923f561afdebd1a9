"""Kuo nondegeneracy checks and controlled-flow equivalence for polynomial germs."""

from ._core import (
    Frame,
    GermSpec,
    HomotopyProblem,
    KuoCertificate,
    MapGerm,
    PerturbationOrderReport,
    SigmaSet,
    WeightSystem,
    build_homeomorphism,
    check_kuo_condition,
    integrate_flow,
    jets_agree_on_sigma,
    load_germ_spec,
    parse_germ_spec,
    perturbation_order,
    rho,
    run_cli,
    weighted_distance,
)

__all__ = [
    "Frame",
    "GermSpec",
    "HomotopyProblem",
    "KuoCertificate",
    "MapGerm",
    "PerturbationOrderReport",
    "SigmaSet",
    "WeightSystem",
    "build_homeomorphism",
    "check_kuo_condition",
    "integrate_flow",
    "jets_agree_on_sigma",
    "load_germ_spec",
    "parse_germ_spec",
    "perturbation_order",
    "rho",
    "run_cli",
    "weighted_distance",
]
