"""Exception types shared across the package."""


class ScmacError(Exception):
    """Base class for all scmac errors."""


class StreamError(ScmacError, ValueError):
    """Malformed bitstream content."""


class LengthMismatchError(StreamError):
    """Operands of a bitwise SC operation have different lengths."""


class ConversionError(ScmacError, ValueError):
    """Invalid converter input (out-of-range code, bad ladder, ...)."""


class MacError(ScmacError, ValueError):
    """Invalid MAC engine input or voltage."""


class SizeMismatchError(ScmacError, ValueError):
    """Sample/weight vectors do not match the configured input count."""


class EnergyModelError(ScmacError, ValueError):
    """Activity log and energy table disagree (unknown event key, ...)."""


class ConfigError(ScmacError, ValueError):
    """Config file failed to parse or validate."""
