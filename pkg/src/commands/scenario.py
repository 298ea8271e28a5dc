import click

from src.middleware.scenario import with_scenario
from src.models.constants import CONSTANTS
from src.report import emit, write_output
from src.scenario_file import dump_scenario

CONSTANT_COLUMNS = ("name", "value", "unit")


@click.command("dump-scenario")
@click.argument("scenario_path")
@click.pass_obj
@with_scenario
def dump_scenario_command(options, scenario):
    """Ecoa o cenário interpretado (com os padrões preenchidos) em YAML."""
    write_output(options, dump_scenario(scenario))


@click.command("constants")
@click.pass_obj
def constants_command(options):
    """Lista as constantes físicas usadas, com unidades."""
    emit(options, CONSTANTS.to_rows(), CONSTANT_COLUMNS)
