"""
Witness pipeline verb
"""
import click

from ..models.family import ExtractionParams
from ..models.topology import ProductInstance
from ..models.witness import PipelineParams
from ..services.witness_service import WitnessService
from ..utils.errors import SchemaViolation
from .dispatch import EXIT_NEGATIVE, EXIT_OK, register, read_document, run_command


@register("pipeline")
def handle_pipeline(cmd, settings):
    instance = read_document(cmd).value
    if not isinstance(instance, ProductInstance):
        raise SchemaViolation("pipeline expects an instance document")
    params = PipelineParams(
        extraction=ExtractionParams(cmd.option("s"), cmd.option("t")),
        kernel_target=cmd.option("kernel_target"),
        block_target=cmd.option("block_target"),
        shift=cmd.option("shift", 0),
        subset_size=cmd.option("subset_size"),
    )
    report = WitnessService(settings).run_pipeline(instance, params)
    return (EXIT_OK if report.ok else EXIT_NEGATIVE), report


@click.command("pipeline")
@click.argument("input_path", metavar="INPUT")
@click.option("--s", "s", type=click.IntRange(min=2), default=2, show_default=True, help="Block count target")
@click.option("--t", "t", type=click.IntRange(min=2), default=2, show_default=True, help="Per-block target")
@click.option("--kernel-target", type=click.IntRange(min=1), help="Kernel selection size (default s*t)")
@click.option("--block-target", type=click.IntRange(min=1), help="Per-block selection size (default t)")
@click.option("--shift", type=click.IntRange(min=0), default=0, show_default=True,
              help="Pair block α with the block this many positions later")
@click.option("--subset-size", type=click.IntRange(min=1), help="Largest finite subfamily to assemble")
@click.pass_context
def pipeline(ctx, input_path, s, t, kernel_target, block_target, shift, subset_size):
    """Run the witness-point construction over a product instance"""
    run_command(ctx, "pipeline", input_path, s=s, t=t, kernel_target=kernel_target,
                block_target=block_target, shift=shift, subset_size=subset_size)
