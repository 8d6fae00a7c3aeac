#!/usr/bin/env python
"""Command-line utility for the pano360 pipeline and Django administrative tasks."""
import os
import sys


def main():
    """Run pipeline subcommands or administrative tasks."""
    os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'config.settings')
    try:
        import django  # noqa: F401
    except ImportError as exc:
        raise ImportError(
            "Couldn't import Django. Are you sure it's installed and "
            "available on your PYTHONPATH environment variable? Did you "
            "forget to activate a virtual environment?"
        ) from exc
    from apps.core.cli import main as pipeline_main

    pipeline_main(sys.argv)


if __name__ == '__main__':
    main()
