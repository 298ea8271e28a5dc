import logging

import click

from src.middleware.scenario import EXIT_CHECK_FAILED, with_scenario
from src.physics.verification import run_gauge_suite
from src.report import emit

logger = logging.getLogger(__name__)

VERIFY_COLUMNS = ("check", "status", "measured", "tolerance")


@click.command("verify")
@click.argument("scenario_path")
@click.pass_obj
@with_scenario
def verify_command(options, scenario):
    """Roda a bateria de verificação do calibre (PASS/FAIL por checagem)."""
    results = run_gauge_suite(scenario)
    emit(options, [r.to_dict() for r in results], VERIFY_COLUMNS)
    failed = [r.name for r in results if not r.passed]
    if failed:
        logger.error(f"{len(failed)} verificação(ões) com falha")
        raise click.exceptions.Exit(EXIT_CHECK_FAILED)
