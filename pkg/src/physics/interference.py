"""
Previsão da fase A-B e do padrão de franjas sob as duas hipóteses.

Convenção de sinal: a fase de cada caminho acumula −(1/ħ)∫W′dt, com
W′ = qA·v e q = −e para elétrons. Para um laço C − D̄ anti-horário em
torno do eixo da fonte isso reproduz Δφ = +2πΦ/(h/e).
"""
import logging
import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Dict, Optional

import numpy as np

from src.errors import ExperimentError, GeometryError
from src.models.beam_path import BeamPath, closed_loop
from src.models.constants import CONSTANTS
from src.models.flux_source import FluxSource, SourceKind, flux_of_source
from src.models.hypothesis import Hypothesis
from src.models.scenario import Scenario, TwoPathExperiment
from src.models.shield import ShieldGeometry, ShieldSpec
from src.models.vector import perpendicular_frame
from src.physics.energy import shield_weight
from src.physics.fields import analytic_potential, check_outside, path_potential_integral
from src.physics.quadrature import QuadratureConfig, integrate_time
from src.physics.shielding import resolve_transmission

logger = logging.getLogger(__name__)

# Fração de período abaixo da qual as franjas são classificadas como alinhadas ou intercaladas
ALIGNMENT_TOLERANCE = 1e-6


class Alignment(str, Enum):
    ALIGNED = "aligned"
    INTERLEAVED = "interleaved"
    INTERMEDIATE = "intermediate"


@dataclass(frozen=True)
class PhasePrediction:
    delta_phi: float
    hypothesis: Hypothesis
    flux_used: float
    shield_factor: float

    def to_dict(self) -> Dict:
        return {
            "hypothesis": self.hypothesis.value,
            "flux_Wb": self.flux_used,
            "shield_factor": self.shield_factor,
            "delta_phi_rad": self.delta_phi,
        }


@dataclass(frozen=True)
class FringePattern:
    period: float
    offset_fraction: float
    alignment: Alignment


def ab_phase_from_flux(flux: float) -> float:
    """
    Δφ = 2π·Φ/(h/e)
    """
    return 2.0 * math.pi * flux / CONSTANTS.flux_quantum_single


def linking_number(src: FluxSource, loop: BeamPath) -> int:
    """
    Número de voltas de um laço fechado em torno do eixo do solenoide, ou
    de enlace com o tubo do toroide (cruzamentos com o disco do círculo
    central, +1 no sentido do eixo)
    """
    if not loop.is_closed:
        raise GeometryError("loop must be closed (first vertex equal to last)")
    frame = perpendicular_frame(src.axis)
    rel = loop.points() - src.center.as_array()

    if src.kind != SourceKind.TOROID:
        planar = rel @ frame[:2].T
        if np.any(np.hypot(planar[:, 0], planar[:, 1]) == 0.0):
            raise GeometryError("loop vertex lies on the source axis")
        angles = np.arctan2(planar[:, 1], planar[:, 0])
        steps = (np.diff(angles) + math.pi) % (2.0 * math.pi) - math.pi
        return int(round(float(np.sum(steps)) / (2.0 * math.pi)))

    heights = rel @ frame[2]
    count = 0
    for i in range(len(rel) - 1):
        z0, z1 = heights[i], heights[i + 1]
        if z0 <= 0.0 < z1:
            sign = 1
        elif z1 <= 0.0 < z0:
            sign = -1
        else:
            continue
        s = z0 / (z0 - z1)
        # ponto de cruzamento no plano do círculo central
        crossing = rel[i] + s * (rel[i + 1] - rel[i])
        if np.linalg.norm(crossing) < src.radius:
            count += sign
    return count


def enclosed_flux(src: FluxSource, loop: BeamPath) -> float:
    return linking_number(src, loop) * flux_of_source(src)


def _phase_by_time(src: FluxSource, path: BeamPath, q: float, cfg: QuadratureConfig) -> float:
    # integra a taxa de fase −W′/ħ no tempo normalizado τ = t/T
    starts, ends = path.segments()
    deltas = ends - starts
    durations = np.linalg.norm(deltas, axis=1) / path.speed
    marks = np.concatenate([[0.0], np.cumsum(durations)])
    total = float(marks[-1])
    velocities = deltas / durations[:, None]

    def rate(tau: np.ndarray) -> np.ndarray:
        t = tau * total
        k = np.clip(np.searchsorted(marks, t, side="right") - 1, 0, len(durations) - 1)
        s = (t - marks[k]) / durations[k]
        positions = starts[k] + s[:, None] * deltas[k]
        energy = q * np.einsum("ij,ij->i", analytic_potential(src, positions), velocities[k])
        return -energy / CONSTANTS.hbar * total

    result = integrate_time(rate, 0.0, 1.0, cfg, breaks=marks[1:-1] / total)
    if not result.converged:
        logger.warning("Fase ao longo do caminho não convergiu")
    return float(result.value)


def path_phase(
    src: FluxSource,
    path: BeamPath,
    q: float,
    shield: Optional[ShieldSpec] = None,
    cfg: Optional[QuadratureConfig] = None,
    method: Optional[str] = None,
) -> float:
    """
    Fase −(1/ħ)∫W′dt acumulada ao longo de um caminho (rad).

    method "time": integra W′(t) = qA(x(t))·v no tempo (A analítico).
    method "overlap": troca a ordem das integrais e integra B0 contra o
    campo de Biot-Savart do caminho sobre Ω; aceita meia blindagem.
    """
    cfg = cfg or QuadratureConfig.default()
    check_outside(src, path.sample(), "path")
    weight = shield_weight(src, shield)
    factor = 1.0
    if shield is not None and shield.geometry == ShieldGeometry.FULL_CYLINDER:
        factor = shield.transmission
    if factor == 0.0 or src.B0 == 0 or q == 0:
        return 0.0
    if method is None:
        analytic = src.kind == SourceKind.INFINITE_SOLENOID and weight is None
        method = "time" if analytic else "overlap"
    if method == "time":
        if weight is not None:
            raise ValueError("time integration does not support a half-space shield")
        return _phase_by_time(src, path, q, cfg) * factor
    if method != "overlap":
        raise ValueError(f"unknown phase method {method!r}")
    integral = path_potential_integral(src, path, cfg, weight)
    if not integral.converged:
        logger.warning("Integral de sobreposição do caminho não convergiu")
    return -q * integral.value / CONSTANTS.hbar * factor


def phase_from_energy(
    src: FluxSource,
    experiment: TwoPathExperiment,
    shield: Optional[ShieldSpec] = None,
    cfg: Optional[QuadratureConfig] = None,
) -> PhasePrediction:
    """
    Δφ = φ_C − φ_D pela hipótese da energia sobreposta
    """
    cfg = cfg or QuadratureConfig.default()
    path_c, path_d = experiment.path_C, experiment.path_D
    for label, path in (("path_C", path_c), ("path_D", path_d)):
        check_outside(src, path.sample(), label)
    flux = enclosed_flux(src, closed_loop(path_c, path_d))
    factor = 1.0 if shield is None else shield.transmission
    if path_c == path_d:
        return PhasePrediction(0.0, Hypothesis.SUPERIMPOSED_ENERGY, flux, factor)

    q = experiment.charge_q
    delta = (
        path_phase(src, path_c, q, shield, cfg)
        - path_phase(src, path_d, q, shield, cfg)
    )
    if shield is not None and shield.geometry == ShieldGeometry.HALF_SPACE_CYLINDER:
        bare = path_phase(src, path_c, q, None, cfg) - path_phase(src, path_d, q, None, cfg)
        factor = delta / bare if bare != 0.0 else shield.transmission
        factor = min(max(factor, 0.0), 1.0)
    logger.debug(f"Δφ (energia) = {delta:.9g} rad, fluxo enlaçado {flux:.6e} Wb")
    return PhasePrediction(delta, Hypothesis.SUPERIMPOSED_ENERGY, flux, factor)


def fringe_pattern(p: PhasePrediction, period: float = 1.0) -> FringePattern:
    offset = (p.delta_phi / (2.0 * math.pi)) % 1.0
    if offset >= 1.0:
        offset = 0.0
    if offset < ALIGNMENT_TOLERANCE or offset > 1.0 - ALIGNMENT_TOLERANCE:
        alignment = Alignment.ALIGNED
    elif abs(offset - 0.5) < ALIGNMENT_TOLERANCE:
        alignment = Alignment.INTERLEAVED
    else:
        alignment = Alignment.INTERMEDIATE
    return FringePattern(period, offset, alignment)


def predict(scenario: Scenario, hypothesis: Hypothesis) -> PhasePrediction:
    """
    vector_potential: Δφ pelo fluxo enlaçado, ignorando blindagens.
    superimposed_energy: Δφ pela energia com a transmissão resolvida.

    Δφ = φ_C − φ_D, com cada fase acumulando −(1/ħ)∫W′dt; um laço C − D̄
    anti-horário em torno do eixo da fonte dá Δφ positivo nas duas hipóteses.
    """
    experiment = scenario.experiment
    if not isinstance(experiment, TwoPathExperiment):
        raise ExperimentError("phase prediction requires a two_path experiment")
    src = scenario.source
    if hypothesis == Hypothesis.VECTOR_POTENTIAL:
        flux = enclosed_flux(src, closed_loop(experiment.path_C, experiment.path_D))
        return PhasePrediction(ab_phase_from_flux(flux), hypothesis, flux, 1.0)

    shield = scenario.shield
    if shield is not None:
        shield = replace(shield, transmission=resolve_transmission(shield, scenario.wave_packet))
    return phase_from_energy(src, experiment, shield, scenario.quadrature)
