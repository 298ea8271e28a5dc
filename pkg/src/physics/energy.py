"""
Energia sobreposta W′ entre o campo confinado B0 e o campo de uma carga ou
distribuição de corrente, calculada de três formas independentes:

- sobreposição direta, ∫ (1/μ0)·B0·B1 dV sobre Ω;
- pelo potencial, W′ = A(x)·qv;
- pela corrente, W′ = Σ A0(x_k)·I_k·dl_k.

A blindagem entra como um fator de transmissão sobre B1 dentro de Ω.
"""
import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from src.errors import ConvergenceError, ExperimentError
from src.models.beam_path import BeamPath, circle_loop
from src.models.constants import CONSTANTS
from src.models.flux_source import FluxSource, SourceKind
from src.models.point_charge import PointCharge
from src.models.shield import ShieldGeometry, ShieldSpec
from src.models.vector import Vec3, VecLike
from src.physics.fields import (
    MU0_OVER_4PI,
    GaugeFunction,
    analytic_potential,
    apply_gauge,
    b1_field,
    check_outside,
    field_direction,
    potential_field,
    source_field,
    vector_potential_analytic,
    vector_potential_numeric,
)
from src.physics.quadrature import IntegralResult, QuadratureConfig, Region3, integrate_region

logger = logging.getLogger(__name__)


class EnergyMethod(str, Enum):
    DIRECT_OVERLAP = "direct_overlap"
    VIA_POTENTIAL = "via_potential"
    VIA_CURRENT = "via_current"


@dataclass(frozen=True)
class EnergyResult:
    value: float
    method: EnergyMethod
    shield_factor_applied: float = 1.0
    error_estimate: float = 0.0

    def to_dict(self) -> Dict:
        return {
            "value": self.value,
            "method": self.method.value,
            "shield_factor_applied": self.shield_factor_applied,
            "error_estimate": self.error_estimate,
        }


@dataclass(frozen=True)
class GaugeBreach:
    identity_holds: bool
    discrepancy: float
    tolerance: float


@dataclass(frozen=True)
class CurrentDistribution:
    """
    J(x)dx³ discretizado: elementos (posição, I·dl em A·m)
    """
    elements: Tuple[Tuple[Vec3, Vec3], ...]

    def positions(self) -> np.ndarray:
        return np.array([p.to_list() for p, _ in self.elements], dtype=float).reshape(-1, 3)

    def currents(self) -> np.ndarray:
        return np.array([j.to_list() for _, j in self.elements], dtype=float).reshape(-1, 3)

    def errors(self, path: str = "distribution") -> List[str]:
        problems = []
        if not self.elements:
            problems.append(f"{path} must have at least one element")
        for i, (position, element) in enumerate(self.elements):
            if not (position.is_finite() and element.is_finite()):
                problems.append(f"{path}.elements[{i}] must be finite")
        return problems

    @classmethod
    def from_path(cls, path: BeamPath, current: float) -> "CurrentDistribution":
        """
        Um elemento por segmento, no ponto médio, com I·(b − a)
        """
        starts, ends = path.segments()
        mids = 0.5 * (starts + ends)
        elements = current * (ends - starts)
        return cls(tuple((Vec3.from_seq(m), Vec3.from_seq(e)) for m, e in zip(mids, elements)))

    @classmethod
    def circular_loop(
        cls, center: VecLike, axis: VecLike, radius: float, current: float, segments: int = 64
    ) -> "CurrentDistribution":
        return cls.from_path(circle_loop(center, axis, radius, segments), current)


def shield_weight(src: FluxSource, shield: Optional[ShieldSpec]) -> Optional[Callable[[np.ndarray], np.ndarray]]:
    """
    Peso pontual de B1 dentro de Ω para a blindagem de meio espaço:
    transmissão para z > 0 no referencial da fonte, 1 abaixo
    """
    if shield is None or shield.geometry != ShieldGeometry.HALF_SPACE_CYLINDER:
        return None
    center = src.center.as_array()
    axis = src.axis.as_array()
    transmission = shield.transmission

    def weight(points: np.ndarray) -> np.ndarray:
        return np.where((points - center) @ axis > 0.0, transmission, 1.0)

    return weight


def _is_blocked(shield: Optional[ShieldSpec]) -> bool:
    return (
        shield is not None
        and shield.geometry == ShieldGeometry.FULL_CYLINDER
        and shield.transmission == 0.0
    )


def _full_factor(shield: Optional[ShieldSpec]) -> float:
    if shield is None or shield.geometry != ShieldGeometry.FULL_CYLINDER:
        return 1.0
    return shield.transmission


def _overlap_integral(
    src: FluxSource,
    density: Callable[[np.ndarray], np.ndarray],
    focus: np.ndarray,
    shield: Optional[ShieldSpec],
    cfg: QuadratureConfig,
) -> Tuple[float, float, float]:
    """
    Integra uma densidade normalizada sobre Ω sem blindagem. Com meia
    blindagem integra [total, ponderada] juntas e devolve a ponderada;
    devolve (valor, fator da meia blindagem, erro)
    """
    weight = shield_weight(src, shield)
    region = Region3.from_source(src, focus)
    if weight is None:
        result = integrate_region(density, region, cfg)
        _require(result, "overlap energy")
        return result.value, 1.0, result.error_estimate

    def weighted(points: np.ndarray) -> np.ndarray:
        values = density(points)
        return np.column_stack([values, values * weight(points)])

    result = integrate_region(weighted, region, cfg)
    _require(result, "overlap energy")
    full, partial = float(result.value[0]), float(result.value[1])
    factor = partial / full if full != 0.0 else shield.transmission
    return partial, min(max(factor, 0.0), 1.0), result.error_estimate


def _require(result: IntegralResult, what: str) -> None:
    if not result.converged:
        raise ConvergenceError(f"{what} did not converge (error estimate {result.error_estimate:.3e})")


def energy_direct(
    src: FluxSource,
    c: PointCharge,
    shield: Optional[ShieldSpec] = None,
    cfg: Optional[QuadratureConfig] = None,
) -> EnergyResult:
    """
    W′ = ∫_Ω (1/μ0)·B0·B1 dV com B1 da lei de Biot-Savart da carga
    """
    cfg = cfg or QuadratureConfig.default()
    x = c.x.as_array()
    check_outside(src, x, "charge")
    speed = c.v.norm()
    if _is_blocked(shield):
        return EnergyResult(0.0, EnergyMethod.DIRECT_OVERLAP, 0.0)
    if src.B0 == 0 or c.q == 0 or speed == 0:
        factor = 1.0 if shield is None else shield.transmission
        return EnergyResult(0.0, EnergyMethod.DIRECT_OVERLAP, factor)

    scale = src.B0 * abs(c.q) * speed * src.characteristic_length / (4.0 * math.pi)

    def density(points: np.ndarray) -> np.ndarray:
        b0 = source_field(src, points, assume_inside=True)
        return np.einsum("ij,ij->i", b0, b1_field(c, points)) / (CONSTANTS.mu0 * scale)

    value, factor, error = _overlap_integral(src, density, x, shield, cfg)
    energy, error = value * scale, error * scale
    if shield_weight(src, shield) is None:
        factor = _full_factor(shield)
        energy, error = energy * factor, error * factor
    logger.debug(f"W′ direto = {energy:.6e} J (fator {factor:.6g})")
    return EnergyResult(energy, EnergyMethod.DIRECT_OVERLAP, factor, error)


def energy_via_potential(
    src: FluxSource,
    c: PointCharge,
    use_numeric_A: bool = False,
    cfg: Optional[QuadratureConfig] = None,
) -> EnergyResult:
    """
    W′ = A(x)·qv. O A analítico só existe para o solenoide infinito; as
    demais fontes usam sempre o A numérico
    """
    x = c.x.as_array()
    check_outside(src, x, "charge")
    if use_numeric_A or src.kind != SourceKind.INFINITE_SOLENOID:
        potential = vector_potential_numeric(src, x, cfg)
    else:
        potential = vector_potential_analytic(src, x)
    value = float(np.dot(potential, c.q * c.v.as_array()))
    return EnergyResult(value, EnergyMethod.VIA_POTENTIAL)


def energy_gauge_breach(
    src: FluxSource,
    c: PointCharge,
    chi: GaugeFunction,
    cfg: Optional[QuadratureConfig] = None,
) -> GaugeBreach:
    """
    Compara A′(x)·qv, com A′ = A + ∇χ, contra a sobreposição direta; a
    identidade vale quando a diferença fica abaixo de 10× a tolerância
    """
    cfg = cfg or QuadratureConfig.default()
    shifted = apply_gauge(potential_field(src, cfg), chi)
    gauged = float(np.dot(shifted(c.x.as_array()), c.q * c.v.as_array()))
    direct = energy_direct(src, c, None, cfg)
    discrepancy = abs(gauged - direct.value)
    tolerance = 10.0 * max(cfg.rel_tol * abs(direct.value), direct.error_estimate)
    holds = discrepancy <= tolerance
    if not holds:
        logger.info(f"Identidade W′ = A′·qv violada: discrepância {discrepancy:.3e} J > {tolerance:.3e} J")
    return GaugeBreach(holds, discrepancy, tolerance)


def _nearest_element(src: FluxSource, positions: np.ndarray) -> np.ndarray:
    return positions[int(np.argmin(src.distance_to_region(positions)))]


def energy_of_current(
    src: FluxSource,
    dist: CurrentDistribution,
    shield: Optional[ShieldSpec] = None,
    cfg: Optional[QuadratureConfig] = None,
) -> EnergyResult:
    """
    W′ = Σ A0(x_k)·I_k·dl_k. Com meia blindagem o resultado é a
    sobreposição direta restrita ao lado nu (e ao transmitido acima)
    """
    if not dist.elements:
        raise ExperimentError("current distribution is empty")
    cfg = cfg or QuadratureConfig.default()
    positions, currents = dist.positions(), dist.currents()
    check_outside(src, positions, "current element")
    if _is_blocked(shield):
        return EnergyResult(0.0, EnergyMethod.VIA_CURRENT, 0.0)
    if shield is not None and shield.geometry == ShieldGeometry.HALF_SPACE_CYLINDER:
        overlap = overlap_energy_of_current(src, dist, shield, cfg)
        return EnergyResult(overlap.value, EnergyMethod.VIA_CURRENT,
                            overlap.shield_factor_applied, overlap.error_estimate)

    factor = _full_factor(shield)
    if src.kind == SourceKind.INFINITE_SOLENOID:
        value = float(np.sum(analytic_potential(src, positions) * currents))
        return EnergyResult(value * factor, EnergyMethod.VIA_CURRENT, factor)

    total_current = float(np.sum(np.linalg.norm(currents, axis=1)))
    if src.B0 == 0 or total_current == 0:
        return EnergyResult(0.0, EnergyMethod.VIA_CURRENT, factor)
    ell = src.characteristic_length

    def projection(points: np.ndarray) -> np.ndarray:
        # Σ_k I_k·dl_k · (b̂ × (x_k − r))/|x_k − r|³, em unidades normalizadas
        direction = field_direction(src, points)
        total = np.zeros(len(points))
        for position, element in zip(positions, currents):
            d = position - points
            dist3 = np.linalg.norm(d, axis=1) ** 3
            total += np.cross(direction, d) @ element / dist3
        return total / (total_current * ell)

    region = Region3.from_source(src, _nearest_element(src, positions))
    result = integrate_region(projection, region, cfg)
    _require(result, "current energy")
    scale = src.B0 * total_current * ell / (4.0 * math.pi)
    return EnergyResult(result.value * scale * factor, EnergyMethod.VIA_CURRENT, factor,
                        result.error_estimate * scale * factor)


def current_elements_field(dist: CurrentDistribution, points: np.ndarray) -> np.ndarray:
    """
    Campo magnético (T) dos elementos de corrente pela lei de Biot-Savart
    """
    field = np.zeros_like(points)
    for position, element in zip(dist.positions(), dist.currents()):
        d = points - position
        field += np.cross(element, d) / (np.linalg.norm(d, axis=1) ** 3)[:, None]
    return MU0_OVER_4PI * field


def overlap_energy_of_current(
    src: FluxSource,
    dist: CurrentDistribution,
    shield: Optional[ShieldSpec] = None,
    cfg: Optional[QuadratureConfig] = None,
) -> EnergyResult:
    """
    Forma de sobreposição direta para uma distribuição de corrente:
    ∫_Ω (1/μ0)·B0·B_J dV
    """
    if not dist.elements:
        raise ExperimentError("current distribution is empty")
    cfg = cfg or QuadratureConfig.default()
    positions, currents = dist.positions(), dist.currents()
    check_outside(src, positions, "current element")
    if _is_blocked(shield):
        return EnergyResult(0.0, EnergyMethod.DIRECT_OVERLAP, 0.0)
    total_current = float(np.sum(np.linalg.norm(currents, axis=1)))
    if src.B0 == 0 or total_current == 0:
        factor = 1.0 if shield is None else shield.transmission
        return EnergyResult(0.0, EnergyMethod.DIRECT_OVERLAP, factor)

    scale = src.B0 * total_current * src.characteristic_length / (4.0 * math.pi)

    def density(points: np.ndarray) -> np.ndarray:
        b0 = source_field(src, points, assume_inside=True)
        return np.einsum("ij,ij->i", b0, current_elements_field(dist, points)) / (CONSTANTS.mu0 * scale)

    value, factor, error = _overlap_integral(src, density, _nearest_element(src, positions), shield, cfg)
    energy, error = value * scale, error * scale
    if shield_weight(src, shield) is None:
        factor = _full_factor(shield)
        energy, error = energy * factor, error * factor
    return EnergyResult(energy, EnergyMethod.DIRECT_OVERLAP, factor, error)
