"""
Exception tree for the panorama pipeline.

Every error carries the CLI exit code it maps to, so management commands can
turn any of them into a ``CommandError`` without a lookup table.
"""

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_ABORT = 3


class PanoramaError(Exception):
    """Base class for all pipeline errors"""

    exit_code = EXIT_DATA


class ConfigError(PanoramaError):
    """Bad configuration file, unknown key or out-of-range value"""

    exit_code = EXIT_USAGE


class GeometryError(PanoramaError, ValueError):
    """Invalid projection argument (fov out of range, malformed image)"""


class DatasetError(PanoramaError):
    """Missing or unreadable dataset inputs, malformed manifest"""


class CheckpointError(PanoramaError):
    """Missing parameter groups, shape mismatch or unreadable checkpoint"""


class TrainingAborted(PanoramaError):
    """Non-finite loss during training; a diagnostic checkpoint was written"""

    exit_code = EXIT_ABORT

    def __init__(self, message: str, diagnostic_path=None):
        super().__init__(message)
        self.diagnostic_path = diagnostic_path
