"""
Verb dispatch: run one command and map its outcome to an exit status and
canonical JSON bytes
"""
import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Optional, Tuple

import click

from ..config.settings import get_config
from ..utils.codec import FORMAT_VERSION, Document, emit_report, parse_instance
from ..utils.errors import CapExceeded, DeltaKitError, InvalidParams, SchemaViolation

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_ERROR = 2
EXIT_CAP = 3

VERBS = ("extract-delta", "extract-double-delta", "verify", "centered", "property", "pipeline", "gen")

# Options a verb cannot run without
REQUIRED_OPTIONS: Dict[str, Tuple[str, ...]] = {
    "extract-double-delta": ("s", "t"),
    "pipeline": ("s", "t"),
    "gen": ("kind",),
}

Handler = Callable[["Command", Any], Tuple[int, Any]]
HANDLERS: Dict[str, Handler] = {}


@dataclass(frozen=True)
class Command:
    """One CLI invocation: verb, input path ('-' is stdin) and options"""
    verb: str
    input_path: Optional[str] = None
    options: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.verb not in VERBS:
            raise InvalidParams(f"unknown verb {self.verb!r}")
        if self.verb != "gen" and self.input_path is None:
            raise InvalidParams(f"{self.verb} needs an input file")
        missing = [name for name in REQUIRED_OPTIONS.get(self.verb, ()) if self.options.get(name) is None]
        if missing:
            raise InvalidParams(f"{self.verb} needs option(s) {', '.join(missing)}")

    def option(self, name: str, default=None):
        value = self.options.get(name)
        return default if value is None else value


def register(verb: str):
    """Attach a handler to a verb"""
    def decorator(func: Handler) -> Handler:
        HANDLERS[verb] = func
        return func
    return decorator


def settings_for(cmd: Command):
    """Active configuration with the per-run cap and worker overrides applied"""
    return get_config(cmd.options.get("config_name")).with_overrides(
        EXHAUSTIVE_CAP=cmd.options.get("exhaustive_cap"),
        WORKERS=cmd.options.get("workers"),
    )


def read_document(cmd: Command) -> Document:
    with click.open_file(cmd.input_path, "rb") as handle:
        data = handle.read()
    return parse_instance(
        data,
        strict=cmd.option("strict", True),
        format_version=cmd.option("format_version", FORMAT_VERSION),
    )


def dispatch(cmd: Command) -> Tuple[int, bytes]:
    """Run the command; every outcome, including failures, ends in an exit status and JSON"""
    try:
        handler = HANDLERS[cmd.verb]
        settings = settings_for(cmd)
        status, payload = handler(cmd, settings)
        return status, emit_report(payload)
    except CapExceeded as e:
        logger.warning(f"{cmd.verb}: {e}")
        return EXIT_CAP, emit_report(_error_payload(e))
    except (DeltaKitError, OSError) as e:
        logger.error(f"{cmd.verb}: {e}")
        return EXIT_ERROR, emit_report(_error_payload(e))
    except Exception as e:
        logger.exception(f"{cmd.verb}: unexpected failure")
        return EXIT_ERROR, emit_report(_error_payload(e))


def _error_payload(error: Exception) -> Dict[str, Any]:
    detail: Dict[str, Any] = {"type": type(error).__name__, "message": str(error)}
    if isinstance(error, SchemaViolation):
        detail.update(path=error.path, line=error.line, column=error.column)
    elif isinstance(error, CapExceeded):
        detail.update(cap=error.cap_name, limit=error.limit, requested=error.requested)
    return {"error": detail}


def run_command(ctx: click.Context, verb: str, input_path: Optional[str] = None, **options):
    """Shared tail of every click command: merge global options, dispatch, write, exit"""
    merged = dict(ctx.obj or {})
    merged.update(options)
    try:
        cmd = Command(verb, input_path, merged)
    except InvalidParams as e:
        raise click.UsageError(str(e), ctx)
    status, output = dispatch(cmd)
    click.echo(output, nl=False)
    ctx.exit(status)
