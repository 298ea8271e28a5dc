import click

from src.middleware.scenario import require_experiment, with_scenario
from src.physics.squid import squid_predictions
from src.report import emit

SQUID_COLUMNS = (
    "flux_Wb",
    "flux_over_Phi0",
    "ic_vector_potential_A",
    "ic_superimposed_energy_A",
    "discriminating",
)


@click.command("squid")
@click.argument("scenario_path")
@click.pass_obj
@with_scenario
@require_experiment("squid")
def squid_command(options, scenario):
    """Tabela de discriminação da corrente crítica do SQUID meio blindado."""
    rows = [p.to_dict() for p in squid_predictions(scenario)]
    emit(options, rows, SQUID_COLUMNS)
