"""
Δ-system extraction verbs
"""
import click

from ..models.family import DoubleFamily, ExtractionParams, IndexedFamily
from ..services.delta_service import DeltaSystemService
from ..services.double_delta_service import DoubleDeltaService
from ..utils.errors import SchemaViolation
from .dispatch import EXIT_NEGATIVE, EXIT_OK, register, read_document, run_command


@register("extract-delta")
def handle_extract_delta(cmd, settings):
    document = read_document(cmd)
    if not isinstance(document.value, IndexedFamily):
        raise SchemaViolation("extract-delta expects a family document")
    family = document.value
    service = DeltaSystemService(settings)
    oracle = cmd.option("oracle", False)

    r = cmd.option("r")
    if r is None:
        cert = service.find_largest(family, use_exact=True if oracle else None)
    elif oracle:
        cert = service.find_delta_system_exact(family, r)
    else:
        cert = service.find_delta_system_er(family, r)
    return (EXIT_OK if cert is not None else EXIT_NEGATIVE), {"certificate": cert}


@register("extract-double-delta")
def handle_extract_double_delta(cmd, settings):
    document = read_document(cmd)
    if not isinstance(document.value, DoubleFamily):
        raise SchemaViolation("extract-double-delta expects a double family document")
    params = ExtractionParams(cmd.option("s"), cmd.option("t"))
    service = DoubleDeltaService(settings)
    if cmd.option("oracle", False):
        cert = service.find_double_delta_exact(document.value, params)
    else:
        cert = service.extract_double_delta(document.value, params)
    return (EXIT_OK if cert is not None else EXIT_NEGATIVE), {"certificate": cert}


@click.command("extract-delta")
@click.argument("input_path", metavar="INPUT")
@click.option("--r", "r", type=click.IntRange(min=2), help="Exact member count; default is the largest found")
@click.option("--oracle", is_flag=True, help="Use the exhaustive finder")
@click.pass_context
def extract_delta(ctx, input_path, r, oracle):
    """Find a Δ-system in a family of finite sets"""
    run_command(ctx, "extract-delta", input_path, r=r, oracle=oracle)


@click.command("extract-double-delta")
@click.argument("input_path", metavar="INPUT")
@click.option("--s", "s", type=click.IntRange(min=2), default=2, show_default=True, help="Block count target")
@click.option("--t", "t", type=click.IntRange(min=2), default=2, show_default=True, help="Per-block target")
@click.option("--oracle", is_flag=True, help="Use the exhaustive oracle")
@click.pass_context
def extract_double_delta(ctx, input_path, s, t, oracle):
    """Find a double Δ-system certificate in a block-indexed family"""
    run_command(ctx, "extract-double-delta", input_path, s=s, t=t, oracle=oracle)
