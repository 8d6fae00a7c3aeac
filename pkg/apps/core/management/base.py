"""
Shared base for the pipeline's management commands
"""
import io

from django.core.management.base import BaseCommand, CommandError
from rich.console import Console

from apps.core.exceptions import PanoramaError


class PipelineCommand(BaseCommand):
    """
    BaseCommand that maps pipeline errors to stable exit codes

    Pipeline commands never touch the database, so system checks are skipped.
    """

    requires_system_checks = []

    def execute(self, *args, **options):
        try:
            return super().execute(*args, **options)
        except PanoramaError as e:
            raise CommandError(str(e), returncode=e.exit_code) from e

    @staticmethod
    def add_seed_argument(parser, default: int = 0):
        parser.add_argument(
            '--seed',
            type=int,
            default=default,
            help='Seed for every random stream used by the command',
        )

    def print_table(self, table) -> None:
        """Render a rich table into the command's stdout"""
        console = Console(file=io.StringIO(), record=True, width=120)
        console.print(table)
        self.stdout.write(console.export_text())
