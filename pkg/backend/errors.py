"""
Error hierarchy shared by the library, the CLI and the HTTP layer.

Every error carries the process exit code the CLI reports for it.
"""


class TeleportError(Exception):
    """Base class for all domain errors"""

    exit_code = 1
    http_status = 500


class InputError(TeleportError):
    """Malformed input: parse failures, bad indices, dimension mismatches"""

    exit_code = 2
    http_status = 400


class ConfigError(InputError):
    """Invalid value in the environment / .env file"""


class InvariantViolation(TeleportError):
    """A mathematical invariant (norm, orthonormality, unitarity, support) failed"""

    exit_code = 3
    http_status = 422


class VerificationFailure(TeleportError):
    """A claim under verification (literature table row, teleportation fidelity) failed"""

    exit_code = 4
    http_status = 409
