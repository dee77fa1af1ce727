"""Copolymer-in-emulsion free energies: path entropies, interface and dual
free energies, gamma*, localization, and the command-line subcommands."""

from ._eplab import (
    DependencyError,
    InvalidArgument,
    __version__,
    count_crossing_paths,
    count_interface_returns,
    gamma_star,
    kappa_closed_b1,
    kappa_estimate,
    kappa_hat_estimate,
    legendre_forward,
    localization_score,
    phi_estimate,
    run_cli,
    u_estimate,
    varpi,
    varsigma,
)

__all__ = [
    "DependencyError",
    "InvalidArgument",
    "__version__",
    "count_crossing_paths",
    "count_interface_returns",
    "gamma_star",
    "kappa_closed_b1",
    "kappa_estimate",
    "kappa_hat_estimate",
    "legendre_forward",
    "localization_score",
    "phi_estimate",
    "run_cli",
    "u_estimate",
    "varpi",
    "varsigma",
]
