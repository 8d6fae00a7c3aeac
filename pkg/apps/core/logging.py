"""
Logging handler factory referenced from ``settings.LOGGING``
"""
from rich.console import Console
from rich.logging import RichHandler


def stderr_rich_handler(**kwargs) -> RichHandler:
    """RichHandler bound to stderr so stdout carries only command results"""
    return RichHandler(
        console=Console(stderr=True),
        show_path=False,
        rich_tracebacks=True,
        **kwargs,
    )
