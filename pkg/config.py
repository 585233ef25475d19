"""
Configuration file for the F-crystal toolkit
"""

import os
from dotenv import load_dotenv

# Load environment variables with override
load_dotenv(override=True)

# Precision Configuration
PRECISION_CONFIG = {
    "default_precision": int(os.getenv("FCRYSTAL_DEFAULT_PRECISION", "32")),
    "heuristic_margin": 2,  # warn unless N > val(det A) * n + margin
}

# Decomposition Configuration
DECOMPOSITION_CONFIG = {
    "kernel_loss_fraction": 0.25,  # kernel columns need exponent >= N' - N'/4
    "min_loss_budget": 1,
    "probe_trials": 10,
}

# Generator Configuration
GENERATOR_CONFIG = {
    "generator_steps": 6,  # random generators multiplied per unit factor
    "elementary_steps": 4,
    "default_seed": 0,
}

# Report Configuration
REPORT_CONFIG = {
    "indent": 2,
    "digest": "sha256",
}

# Exit codes for the command line
EXIT_CODES = {
    "pass": 0,
    "verdict_failure": 1,
    "hypothesis_violation": 2,
    "precision_exhausted": 3,
    "usage": 64,
}

# Logging Configuration
LOGGING_CONFIG = {
    "level": "WARNING",
    "verbose_level": "DEBUG",
    "format": "%(levelname)s %(name)s: %(message)s",
}

# Form kinds (for validation)
FORM_KINDS = [
    "symplectic",
    "orthogonal",
]

# Generation modes
GENERATOR_MODES = [
    "cartan",     # A = K1 * diag(p^mu) * K2
    "conjugate",  # A = U^-1 * diag(p^mu) * sigma(U), Newton = Hodge
]
