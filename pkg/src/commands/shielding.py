import logging

import click

from src.errors import ExperimentError
from src.middleware.scenario import with_scenario
from src.models.flux_source import flux_of_source
from src.physics.shielding import NIOBIUM_GAP, flux_quantize, pulse_report, quoted_estimate_note, resolve_transmission
from src.report import emit, format_number

logger = logging.getLogger(__name__)

SHIELDING_COLUMNS = ("dt_s", "nu_Hz", "photon_energy_eV", "gap_eV", "shielded", "resolved_transmission")


def shielding_report(scenario):
    """
    Linha do relatório de blindagem e as notas que a acompanham
    """
    wp = scenario.wave_packet
    if wp is None:
        raise ExperimentError("shielding report requires a wave_packet in the scenario")
    shield = scenario.shield
    if shield is None:
        logger.info(f"Cenário sem blindagem: usando o gap do nióbio ({NIOBIUM_GAP:g} eV)")
        gap, transmission = NIOBIUM_GAP, 1.0
    else:
        gap, transmission = shield.energy_gap, resolve_transmission(shield, wp)
    report = pulse_report(wp, gap)
    row = {
        "dt_s": report.dt,
        "nu_Hz": report.nu,
        "photon_energy_eV": report.photon_energy,
        "gap_eV": report.gap,
        "shielded": report.shielded,
        "resolved_transmission": transmission,
    }
    notes = []
    quoted = quoted_estimate_note(report, wp)
    if quoted:
        notes.append(quoted)
    flux = flux_of_source(scenario.source)
    quantized = flux_quantize(flux)
    notes.append(
        f"note: source flux {format_number(flux)} Wb quantizes to n = {quantized.n} "
        f"({format_number(quantized.quantized_flux)} Wb)"
    )
    return row, notes


@click.command("shielding")
@click.argument("scenario_path")
@click.pass_obj
@with_scenario
def shielding_command(options, scenario):
    """Compara a frequência do pulso do pacote de onda com o gap da blindagem."""
    row, notes = shielding_report(scenario)
    emit(options, [row], SHIELDING_COLUMNS, notes)
