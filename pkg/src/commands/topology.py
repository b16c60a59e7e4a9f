"""
Centeredness and (n, k)-property verbs
"""
import click

from ..models.topology import FiniteSpace, PropertyQuery
from ..services.precaliber_service import PrecaliberService
from ..services.topology_service import TopologyService
from ..utils.codec import InstanceIndices, SpaceOpens
from ..utils.errors import SchemaViolation
from .dispatch import EXIT_NEGATIVE, EXIT_OK, register, read_document, run_command


@register("centered")
def handle_centered(cmd, settings):
    value = read_document(cmd).value
    service = TopologyService(settings)
    if isinstance(value, SpaceOpens):
        centered = service.is_centered(value.space, value.opens)
        return (EXIT_OK if centered else EXIT_NEGATIVE), {"centered": centered}
    if isinstance(value, InstanceIndices):
        centered = service.boxes_centered(value.instance, value.indices)
        linked = service.boxes_linked(value.instance, value.indices)
        return (EXIT_OK if centered else EXIT_NEGATIVE), {"centered": centered, "linked": linked}
    if isinstance(value, FiniteSpace):
        report = service.validate_space(value)
        return (EXIT_OK if report.ok else EXIT_NEGATIVE), report
    raise SchemaViolation("centered expects {space, opens}, {instance, indices} or a space")


@register("property")
def handle_property(cmd, settings):
    space = read_document(cmd).value
    if not isinstance(space, FiniteSpace):
        raise SchemaViolation("property expects a space document")
    service = PrecaliberService(settings)

    n_max = cmd.option("profile")
    if n_max is not None:
        return EXIT_OK, {"profile": service.centeredness_profile(space, n_max)}

    query = PropertyQuery(cmd.option("n", 0), cmd.option("k", 0))
    if cmd.option("linked", False):
        report = service.has_linked_property(space, query)
    else:
        report = service.has_centeredness_property(space, query)
    return (EXIT_OK if report.holds else EXIT_NEGATIVE), report


@click.command("centered")
@click.argument("input_path", metavar="INPUT")
@click.pass_context
def centered(ctx, input_path):
    """Centeredness of basic opens or boxes; basis check for a bare space"""
    run_command(ctx, "centered", input_path)


@click.command("property")
@click.argument("input_path", metavar="INPUT")
@click.option("--n", "n", type=int, help="List length")
@click.option("--k", "k", type=int, help="Sub-list size")
@click.option("--linked", is_flag=True, help="Check pairwise intersection instead of a common point")
@click.option("--profile", type=click.IntRange(min=1), help="Tabulate every (n, k) with n up to this value")
@click.pass_context
def property_(ctx, input_path, n, k, linked, profile):
    """Does every length-n list of basic opens admit a good k-sublist?"""
    if profile is None and (n is None or k is None):
        raise click.UsageError("give --n and --k, or --profile", ctx)
    run_command(ctx, "property", input_path, n=n, k=k, linked=linked, profile=profile)
