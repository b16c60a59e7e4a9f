"""
Certificate verification verb
"""
import click

from ..services.delta_service import DeltaSystemService
from ..services.double_delta_service import DoubleDeltaService
from ..utils.codec import DoubleBundle, FamilyBundle
from ..utils.errors import SchemaViolation
from .dispatch import EXIT_NEGATIVE, EXIT_OK, register, read_document, run_command


@register("verify")
def handle_verify(cmd, settings):
    bundle = read_document(cmd).value
    if isinstance(bundle, FamilyBundle):
        ok = DeltaSystemService(settings).verify_delta_system(bundle.family, bundle.certificate)
        return (EXIT_OK if ok else EXIT_NEGATIVE), {"ok": ok}
    if isinstance(bundle, DoubleBundle):
        report = DoubleDeltaService(settings).verify_double_delta(bundle.double_family, bundle.certificate)
        return (EXIT_OK if report.ok else EXIT_NEGATIVE), report
    raise SchemaViolation("verify expects a {family, certificate} or {double_family, certificate} bundle")


@click.command("verify")
@click.argument("input_path", metavar="INPUT")
@click.pass_context
def verify(ctx, input_path):
    """Check a certificate against its family"""
    run_command(ctx, "verify", input_path)
