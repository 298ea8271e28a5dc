import click

from src.middleware.scenario import require_experiment, with_scenario
from src.physics.interference import fringe_pattern, predict
from src.report import emit

PHASE_COLUMNS = ("hypothesis", "flux_Wb", "shield_factor", "delta_phi_rad", "offset_fraction", "alignment")


def phase_rows(scenario):
    """
    Uma linha por hipótese pedida no cenário
    """
    rows = []
    for hypothesis in scenario.hypotheses:
        prediction = predict(scenario, hypothesis)
        fringes = fringe_pattern(prediction)
        row = prediction.to_dict()
        row["offset_fraction"] = fringes.offset_fraction
        row["alignment"] = fringes.alignment.value
        rows.append(row)
    return rows


@click.command("phase")
@click.argument("scenario_path")
@click.pass_obj
@with_scenario
@require_experiment("two_path")
def phase_command(options, scenario):
    """Prevê Δφ e o alinhamento das franjas para cada hipótese."""
    emit(options, phase_rows(scenario), PHASE_COLUMNS)
