"""Exact-arithmetic toolkit for p-adic valuations of harmonic numbers and
integral roots of hypergeometric mirror-type maps."""

from .constants import (
    Breakdown,
    DegenerateCase,
    omega,
    omega_indicator,
    omega_simplified,
    t_conjectured,
    theta,
    u_conjectured,
    xi,
    xi_indicator,
    xi_simplified,
)
from .harmonic import (
    HarmonicCongruence,
    ModularHarmonicSum,
    check_harmonic_congruence,
    harmonic,
    harmonic_power,
    is_wolstenholme,
    vp_harmonic,
    wolstenholme_valuation,
)
from .padic import (
    INFINITE,
    big_B,
    big_B_sequence,
    is_prime,
    primes_upto,
    vp_big_B,
    vp_factorial,
    vp_rational,
)
from .series import (
    PSeries,
    RootCertificate,
    build_F,
    build_G,
    build_GL,
    build_Gtilde,
    canonical_q,
    dwork_criterion,
    integrality_check,
    max_root,
    p_integral_violation,
    ps_exp,
    ps_log,
    ps_pow,
    ps_revert,
    ps_substitute_power,
    verify_truemap_identity,
)
from .sieve import (
    CheckpointError,
    SieveCheckpoint,
    SieveRecord,
    SieveRun,
    sieve_positive_valuation,
)

__version__ = "0.1.0"

__all__ = [
    "Breakdown",
    "CheckpointError",
    "DegenerateCase",
    "HarmonicCongruence",
    "INFINITE",
    "ModularHarmonicSum",
    "PSeries",
    "RootCertificate",
    "SieveCheckpoint",
    "SieveRecord",
    "SieveRun",
    "big_B",
    "big_B_sequence",
    "build_F",
    "build_G",
    "build_GL",
    "build_Gtilde",
    "canonical_q",
    "check_harmonic_congruence",
    "dwork_criterion",
    "harmonic",
    "harmonic_power",
    "integrality_check",
    "is_prime",
    "is_wolstenholme",
    "max_root",
    "omega",
    "omega_indicator",
    "omega_simplified",
    "p_integral_violation",
    "primes_upto",
    "ps_exp",
    "ps_log",
    "ps_pow",
    "ps_revert",
    "ps_substitute_power",
    "sieve_positive_valuation",
    "t_conjectured",
    "theta",
    "u_conjectured",
    "verify_truemap_identity",
    "vp_big_B",
    "vp_factorial",
    "vp_harmonic",
    "vp_rational",
    "wolstenholme_valuation",
    "xi",
    "xi_indicator",
    "xi_simplified",
]
