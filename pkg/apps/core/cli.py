"""
Single entry point for the pipeline commands

``run(argv)`` dispatches ``geom``, ``dataset``, ``fov``, ``train``, ``infer``,
``eval`` and ``demo-seams`` to their management commands and returns a stable
exit code instead of letting argparse or Django exit the process.
"""
import os
import sys
from typing import Optional, Sequence, TextIO

from apps.core.exceptions import EXIT_OK, EXIT_USAGE

PIPELINE_COMMANDS = {
    'geom': 'geom',
    'dataset': 'dataset',
    'fov': 'fov',
    'train': 'train',
    'infer': 'infer',
    'eval': 'eval',
    'demo-seams': 'demo_seams',
}

USAGE = """usage: manage.py <subcommand> [options]

Pipeline subcommands:
  geom        equirect/cubemap conversions, view rendering, fov embedding
  dataset     build or inspect a training/evaluation dataset
  fov         predict the relative field of view of four views
  train       train one stage (small, medium, large) of the synthesis network
  infer       synthesize a panorama from four views
  eval        SSIM/PSNR report over a manifest split
  demo-seams  cubemap-format vs equirect-format seam demonstration

Run 'manage.py <subcommand> --help' for the options of a subcommand.
"""


def run(argv: Sequence[str], stdout: Optional[TextIO] = None, stderr: Optional[TextIO] = None) -> int:
    """
    Dispatch one pipeline invocation

    Args:
        argv: subcommand followed by its arguments (no program name)

    Returns:
        0 ok, 1 usage error, 2 data error, 3 runtime abort
    """
    from django.core.management import call_command
    from django.core.management.base import CommandError

    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr

    if not argv:
        stderr.write(USAGE)
        return EXIT_USAGE
    if argv[0] in ('-h', '--help', 'help'):
        stdout.write(USAGE)
        return EXIT_OK

    name = argv[0]
    if name not in PIPELINE_COMMANDS:
        stderr.write(f"error: unknown subcommand '{name}'\n")
        stderr.write(USAGE)
        return EXIT_USAGE

    try:
        call_command(PIPELINE_COMMANDS[name], *argv[1:], stdout=stdout, stderr=stderr)
    except CommandError as e:
        stderr.write(f"error: {e}\n")
        return e.returncode
    except SystemExit as e:
        # argparse --help
        return e.code if isinstance(e.code, int) else EXIT_OK
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> None:
    """Console entry point; non-pipeline subcommands fall through to Django"""
    os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'config.settings')
    import django
    from django.core.management import execute_from_command_line

    argv = list(sys.argv if argv is None else argv)
    django.setup()
    if len(argv) > 1 and (argv[1] in PIPELINE_COMMANDS or argv[1] in ('-h', '--help')):
        sys.exit(run(argv[1:]))
    execute_from_command_line(argv)
