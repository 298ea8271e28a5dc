"""
Corrente crítica do SQUID meio blindado sob as duas hipóteses.

vector_potential:    I_c = I0·|cos(πΦ/Φ0)|
superimposed_energy: I_c = I0·|cos(π·f·Φ/Φ0)|, com f a fração da energia
sobreposta que sobrevive à meia blindagem (f = 1/2 na forma fechada).
"""
import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

from src.errors import ExperimentError
from src.models.constants import CONSTANTS
from src.models.flux_source import FluxSource
from src.models.hypothesis import Hypothesis
from src.models.scenario import Scenario, SquidExperiment
from src.models.shield import ShieldGeometry, ShieldSpec
from src.physics.energy import CurrentDistribution, overlap_energy_of_current
from src.physics.quadrature import QuadratureConfig
from src.physics.shielding import NIOBIUM_GAP, flux_quantize

logger = logging.getLogger(__name__)

HALF_SHIELD_FRACTION = 0.5

# Diferença mínima (em unidades de I0) para as hipóteses serem distinguíveis
DISCRIMINATION_THRESHOLD = 1e-9


@dataclass(frozen=True)
class SquidPrediction:
    flux: float
    ic_vector_potential: float
    ic_superimposed_energy: float
    discriminating: bool

    @property
    def flux_over_phi0(self) -> float:
        return self.flux / CONSTANTS.flux_quantum_pair

    def to_dict(self) -> Dict:
        return {
            "flux_Wb": self.flux,
            "flux_over_Phi0": self.flux_over_phi0,
            "ic_vector_potential_A": self.ic_vector_potential,
            "ic_superimposed_energy_A": self.ic_superimposed_energy,
            "discriminating": self.discriminating,
        }


def critical_current(
    flux: float,
    I0: float,
    hypothesis: Hypothesis,
    energy_fraction: float = HALF_SHIELD_FRACTION,
) -> float:
    if not I0 > 0:
        raise ExperimentError("loop_current_I0 must be > 0")
    ratio = flux / CONSTANTS.flux_quantum_pair
    if hypothesis == Hypothesis.SUPERIMPOSED_ENERGY:
        ratio = energy_fraction * ratio
    return I0 * abs(math.cos(math.pi * ratio))


def discrimination_table(
    flux_sweep: Sequence[float],
    I0: float,
    energy_fraction: float = HALF_SHIELD_FRACTION,
) -> List[SquidPrediction]:
    """
    Uma previsão por valor de fluxo, marcando onde as hipóteses divergem
    """
    if len(flux_sweep) == 0:
        raise ExperimentError("flux sweep is empty")
    rows = []
    for flux in flux_sweep:
        ic_vp = critical_current(flux, I0, Hypothesis.VECTOR_POTENTIAL)
        ic_se = critical_current(flux, I0, Hypothesis.SUPERIMPOSED_ENERGY, energy_fraction)
        rows.append(SquidPrediction(flux, ic_vp, ic_se, abs(ic_vp - ic_se) > DISCRIMINATION_THRESHOLD * I0))
    return rows


def half_shield_energy_fraction(
    src: FluxSource,
    loop_radius: float,
    shield: Optional[ShieldSpec] = None,
    cfg: Optional[QuadratureConfig] = None,
) -> float:
    """
    Fração da energia sobreposta de um anel coaxial no plano z = 0 que
    sobrevive à meia blindagem, calculada pela sobreposição direta
    """
    if shield is None:
        shield = ShieldSpec(ShieldGeometry.HALF_SPACE_CYLINDER, NIOBIUM_GAP, 0.0)
    ring = CurrentDistribution.circular_loop(src.center, src.axis, loop_radius, 1.0)
    result = overlap_energy_of_current(src, ring, shield, cfg)
    logger.debug(f"Fração da energia com meia blindagem: {result.shield_factor_applied:.9f}")
    return result.shield_factor_applied


def squid_predictions(scenario: Scenario) -> List[SquidPrediction]:
    """
    Tabela de discriminação do cenário; com `quantize` cada fluxo passa por
    flux_quantize, e com `loop_radius` a fração de energia é calculada
    """
    experiment = scenario.experiment
    if not isinstance(experiment, SquidExperiment):
        raise ExperimentError("squid table requires a squid experiment")
    sweep = list(experiment.flux_sweep)
    if experiment.quantize:
        sweep = [flux_quantize(flux).quantized_flux for flux in sweep]
    fraction = HALF_SHIELD_FRACTION
    if experiment.loop_radius is not None:
        fraction = half_shield_energy_fraction(
            scenario.source, experiment.loop_radius, scenario.shield, scenario.quadrature
        )
    return discrimination_table(sweep, experiment.loop_current_I0, fraction)
