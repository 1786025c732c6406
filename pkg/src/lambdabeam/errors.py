"""Exception hierarchy shared across the package.

The CLI maps these onto process exit codes (config 2, physics 3,
numerics 4), so raising the right family matters: a bad input file must
not masquerade as a solver failure.
"""


class LambdaBeamError(Exception):
    """Base class for every error raised by this package."""


class ConfigError(LambdaBeamError):
    """Invalid configuration: bad file, unknown key, out-of-range argument."""


class PhysicsError(LambdaBeamError):
    """Physically inadmissible request, e.g. a regime where the model breaks down."""


class NumericsError(LambdaBeamError):
    """A numerical procedure failed to converge or lost its accuracy guarantee."""
