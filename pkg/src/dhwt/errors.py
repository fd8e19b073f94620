class DHWTError(Exception):
    """Base class for errors raised by this package."""


class UnknownWaveletError(DHWTError, ValueError):
    pass


class ContainerError(DHWTError, ValueError):
    """A compressed stream is corrupt, truncated or inconsistent."""
