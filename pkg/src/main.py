import logging
import sys

import click
from dotenv import load_dotenv

from src.config import get_settings
from src.report import FORMATS, RunOptions

load_dotenv()

logger = logging.getLogger(__name__)


def configure_logging():
    # relatórios vão para o stdout; o log fica no stderr
    logging.basicConfig(
        level=get_settings().log_level,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )


@click.group()
@click.option("--format", "fmt", type=click.Choice(FORMATS), default="text", show_default=True,
              help="Formato do relatório.")
@click.option("--output", type=click.Path(dir_okay=False, writable=True), default=None,
              help="Arquivo de saída (padrão: stdout).")
@click.option("--tolerance", type=click.FloatRange(min=0.0, min_open=True), default=None,
              help="Substitui o rel_tol da quadratura do cenário.")
@click.pass_context
def cli(ctx, fmt, output, tolerance):
    """Previsões e verificações do efeito Aharonov-Bohm pela energia sobreposta."""
    configure_logging()
    ctx.obj = RunOptions(fmt=fmt, output=output, tolerance=tolerance)


# Importe os comandos
from src.commands.phase import phase_command
from src.commands.scenario import constants_command, dump_scenario_command
from src.commands.shielding import shielding_command
from src.commands.squid import squid_command
from src.commands.verify import verify_command

# Registre os comandos no grupo
cli.add_command(verify_command)
cli.add_command(phase_command)
cli.add_command(squid_command)
cli.add_command(shielding_command)
cli.add_command(dump_scenario_command)
cli.add_command(constants_command)

if __name__ == '__main__':
    cli()
