"""Exception types shared across the package."""


class ConfigError(ValueError):
    """Malformed configuration file, unknown key, or bad override path."""


class PhysicsError(RuntimeError):
    """Base class for failures of physical well-posedness (not bugs)."""


class ModelConstructionError(PhysicsError):
    """A model violates a structural requirement (e.g. decay matrix not PSD)."""


class DegeneracyError(PhysicsError):
    """A quantity is undefined because of an exact degeneracy."""


class DarkStateError(PhysicsError):
    """Emitted intensity is zero; normalized correlations are undefined."""


class IntegrationAccuracyError(PhysicsError):
    """A propagated state violates density-matrix constraints beyond tolerance."""


class ExportError(PhysicsError):
    """An SLH triplet cannot be exported to the supported master-equation form."""
