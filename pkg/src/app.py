"""
Command-line application for deltakit
"""
import logging
import sys

import click

from .config.settings import get_config


def configure_logging(settings, verbose: bool = False):
    """Log to stderr only; stdout carries the JSON result"""
    level = logging.DEBUG if verbose else getattr(logging, str(settings.LOG_LEVEL).upper(), logging.WARNING)
    logging.basicConfig(level=level, format=settings.LOG_FORMAT, stream=sys.stderr, force=True)


def create_app(config_name=None):
    """Create the click group with global options and every verb registered"""
    settings = get_config(config_name)

    @click.group(name="deltakit")
    @click.option("--strict/--lax", default=True, show_default=True,
                  help="Reject unknown JSON fields, or keep and re-emit them")
    @click.option("--workers", type=click.IntRange(min=1), help=f"Worker threads (default {settings.WORKERS})")
    @click.option("--verbose", "-v", is_flag=True, help="Debug logging on stderr")
    @click.option("--format-version", type=click.IntRange(settings.FORMAT_VERSION, settings.FORMAT_VERSION),
                  default=settings.FORMAT_VERSION, show_default=True, help="Input file format version")
    @click.option("--exhaustive-cap", type=click.IntRange(min=2),
                  help=f"Largest family searched exhaustively (default {settings.EXHAUSTIVE_CAP})")
    @click.pass_context
    def cli(ctx, strict, workers, verbose, format_version, exhaustive_cap):
        """Finite Δ-system, centeredness and witness-point toolkit"""
        configure_logging(settings, verbose)
        ctx.obj = {
            "config_name": config_name,
            "strict": strict,
            "workers": workers,
            "format_version": format_version,
            "exhaustive_cap": exhaustive_cap,
        }

    # Register commands
    from .commands import ALL_COMMANDS
    for command in ALL_COMMANDS:
        cli.add_command(command)

    return cli


def main():
    create_app()(prog_name="deltakit")


if __name__ == '__main__':
    main()
