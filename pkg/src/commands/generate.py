"""
Seeded generator verb
"""
from dataclasses import replace

import click

from ..models.generation import GenParams
from ..services.generator_service import GeneratorService
from ..utils.errors import SchemaViolation
from .dispatch import EXIT_OK, read_document, register, run_command

KINDS = ("family", "double-family", "space", "instance")

KNOBS = (
    "seed", "set_count", "min_set_size", "max_set_size", "ground_size", "block_count",
    "min_block_size", "max_block_size", "factor_count", "point_count", "max_points",
    "box_count", "max_support", "catalog_id", "perturb",
)


@register("gen")
def handle_gen(cmd, settings):
    params = GenParams()
    if cmd.input_path is not None:
        params = read_document(cmd).value
        if not isinstance(params, GenParams):
            raise SchemaViolation("gen --params expects a generator params document")
    overrides = {name: cmd.options[name] for name in KNOBS if cmd.options.get(name) is not None}
    params = replace(params, **overrides)

    service = GeneratorService(settings)
    generate = {
        "family": service.gen_family,
        "double-family": service.gen_double_family,
        "space": service.gen_space,
        "instance": service.gen_instance,
    }[cmd.option("kind")]
    return EXIT_OK, generate(params)


@click.command("gen")
@click.argument("kind", type=click.Choice(KINDS))
@click.option("--params", "params_path", help="Generator params JSON; options below override it")
@click.option("--seed", type=click.IntRange(0, (1 << 64) - 1))
@click.option("--set-count", type=int)
@click.option("--min-set-size", type=int)
@click.option("--max-set-size", type=int)
@click.option("--ground-size", type=int)
@click.option("--block-count", type=int)
@click.option("--min-block-size", type=int)
@click.option("--max-block-size", type=int)
@click.option("--factor-count", type=int)
@click.option("--point-count", type=int)
@click.option("--max-points", type=int)
@click.option("--box-count", type=int)
@click.option("--max-support", type=int)
@click.option("--catalog-id", type=int)
@click.option("--perturb/--no-perturb", default=None)
@click.pass_context
def gen(ctx, kind, params_path, **knobs):
    """Emit a generated family, double family, space or instance"""
    run_command(ctx, "gen", params_path, kind=kind, **knobs)
