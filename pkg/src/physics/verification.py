"""
Bateria de verificação do calibre: rotacional dentro e fora de Ω,
divergência, circulação contra o fluxo, identidade W′ = A·qv e as
relações de espelho A_C = −A_D e W′_C = −W′_D.
"""
import logging
from dataclasses import dataclass, replace
from typing import Dict, List

import numpy as np

from src.models.beam_path import circle_loop
from src.models.constants import ELECTRON_CHARGE
from src.models.flux_source import FluxSource, SourceKind, flux_of_source
from src.models.point_charge import PointCharge
from src.models.scenario import Scenario
from src.models.vector import Vec3, perpendicular_frame
from src.physics.energy import energy_gauge_breach, energy_via_potential
from src.physics.fields import (
    GaugeFunction,
    analytic_potential_field,
    apply_gauge,
    curl_fd,
    default_step,
    div_fd,
    loop_integral_A,
    numeric_potential_field,
)

logger = logging.getLogger(__name__)

PROBE_SPEED = 1.0e6
LOOP_SEGMENTS = 64

CURL_TOLERANCE = 1e-6
LOOP_ANALYTIC_TOLERANCE = 1e-9
MIRROR_POTENTIAL_TOLERANCE = 1e-12
MIRROR_ENERGY_TOLERANCE = 1e-6
LOOP_NUMERIC_TOLERANCE = 1e-3


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    measured: float
    tolerance: float

    @property
    def status(self) -> str:
        return "PASS" if self.passed else "FAIL"

    def to_dict(self) -> Dict:
        return {
            "check": self.name,
            "status": self.status,
            "measured": self.measured,
            "tolerance": self.tolerance,
        }


def _check(name: str, measured: float, tolerance: float) -> CheckResult:
    result = CheckResult(name, bool(measured <= tolerance), float(measured), float(tolerance))
    log = logger.info if result.passed else logger.warning
    log(f"{result.status} {name}: {measured:.3e} (tolerância {tolerance:.3e})")
    return result


def _relative(value: float, reference: float) -> float:
    if reference == 0.0:
        return abs(value)
    return abs(value) / abs(reference)


def end_effect_deficit(src: FluxSource, loop_radius: float) -> float:
    """
    Fração do fluxo que retorna por fora de um laço coaxial no plano
    médio de um solenoide finito (aproximação de solenoide fino)
    """
    if src.kind != SourceKind.FINITE_SOLENOID:
        return 0.0
    half = 0.5 * src.length
    return 1.0 - half / float(np.hypot(loop_radius, half))


def _gauge(scenario: Scenario) -> GaugeFunction:
    gradient = scenario.verify.gauge_gradient
    if gradient is None:
        return GaugeFunction.zero()
    logger.info(f"Verificação com calibre deslocado ∇χ = {gradient.to_list()}")
    return GaugeFunction.linear(gradient.as_array())


def _analytic_checks(src: FluxSource, scenario: Scenario, chi: GaugeFunction) -> List[CheckResult]:
    # referência analítica: solenoide infinito com o mesmo raio, eixo e B0
    reference = replace(src, kind=SourceKind.INFINITE_SOLENOID, length=None)
    e1, e2, e3 = perpendicular_frame(src.axis)
    center = src.center.as_array()
    radius = src.radius
    h = default_step(src)
    bare = analytic_potential_field(reference)
    potential = apply_gauge(bare, chi)
    flux = flux_of_source(reference)
    scale = max(src.B0, 1e-300)
    tight = scenario.quadrature.with_rel_tol(min(scenario.quadrature.rel_tol, 1e-10))

    results = []
    curl_in = curl_fd(potential, center + 0.5 * radius * e1, h)
    results.append(_check("curl_inside", float(np.linalg.norm(curl_in - src.B0 * e3)), CURL_TOLERANCE * scale))
    outside = center + 2.0 * radius * e1
    results.append(_check("curl_outside", float(np.linalg.norm(curl_fd(potential, outside, h))), CURL_TOLERANCE * scale))
    results.append(_check("div_outside", abs(div_fd(potential, outside, h)), CURL_TOLERANCE * scale))

    enclosing = circle_loop(center, src.axis, 2.0 * radius, LOOP_SEGMENTS)
    circulation = loop_integral_A(potential, enclosing, tight)
    results.append(_check("loop_analytic", _relative(circulation - flux, flux), LOOP_ANALYTIC_TOLERANCE))
    apart = circle_loop(center + 4.0 * radius * e1, src.axis, radius, LOOP_SEGMENTS)
    results.append(_check("loop_unlinked", _relative(loop_integral_A(potential, apart, tight), flux),
                          LOOP_ANALYTIC_TOLERANCE))

    a_c = bare(center + 3.0 * radius * e1)
    a_d = bare(center - 3.0 * radius * e1)
    results.append(_check("mirror_potential", _relative(float(np.linalg.norm(a_c + a_d)), float(np.linalg.norm(a_c))),
                          MIRROR_POTENTIAL_TOLERANCE))
    return results


def _mirror_energy(src: FluxSource, scenario: Scenario) -> CheckResult:
    e1, e2, _ = perpendicular_frame(src.axis)
    center = src.center.as_array()
    velocity = Vec3.from_seq(PROBE_SPEED * e2)
    energies = []
    for sign in (1.0, -1.0):
        charge = PointCharge(ELECTRON_CHARGE, Vec3.from_seq(center + sign * 3.0 * src.radius * e1), velocity)
        energies.append(energy_via_potential(src, charge, use_numeric_A=True, cfg=scenario.quadrature).value)
    return _check("mirror_energy", _relative(energies[0] + energies[1], energies[0]), MIRROR_ENERGY_TOLERANCE)


def _probe_charge(src: FluxSource) -> PointCharge:
    e1, e2, e3 = perpendicular_frame(src.axis)
    center = src.center.as_array()
    if src.kind == SourceKind.TOROID:
        position = center + (src.radius + 3.0 * src.minor_radius) * e1
        direction = e3
    else:
        position = center + 3.0 * src.radius * e1
        direction = e2
    return PointCharge(ELECTRON_CHARGE, Vec3.from_seq(position), Vec3.from_seq(PROBE_SPEED * direction))


def _numeric_checks(src: FluxSource, scenario: Scenario) -> List[CheckResult]:
    cfg = scenario.quadrature
    e1, e2, _ = perpendicular_frame(src.axis)
    center = src.center.as_array()
    ell = src.characteristic_length
    field = numeric_potential_field(src, cfg)
    results = []

    probe = _probe_charge(src).x.as_array()
    magnitude = float(np.linalg.norm(field(probe)))
    distance = float(np.linalg.norm(probe - center))
    div_tolerance = max(1e-6, 10.0 * cfg.rel_tol) * magnitude / distance
    results.append(_check("div_numeric", abs(div_fd(field, probe, default_step(src))), div_tolerance))

    flux = flux_of_source(src)
    if src.kind == SourceKind.TOROID:
        radius = ell + 0.5 * min(ell, src.radius - ell)
        loop = circle_loop(center + src.radius * e1, e2, radius, LOOP_SEGMENTS)
        tolerance = max(1e-4, 100.0 * cfg.rel_tol)
    else:
        radius = 2.0 * src.radius
        loop = circle_loop(center, src.axis, radius, LOOP_SEGMENTS)
        tolerance = max(LOOP_NUMERIC_TOLERANCE, 1.5 * end_effect_deficit(src, radius)) + 10.0 * cfg.rel_tol
    circulation = loop_integral_A(field, loop, cfg)
    results.append(_check("loop_numeric", _relative(circulation - flux, flux), tolerance))
    return results


def run_gauge_suite(scenario: Scenario) -> List[CheckResult]:
    """
    Executa todas as verificações aplicáveis à fonte do cenário
    """
    src = scenario.source
    chi = _gauge(scenario)
    results: List[CheckResult] = []
    if src.is_solenoid:
        results += _analytic_checks(src, scenario, chi)

    breach = energy_gauge_breach(src, _probe_charge(src), chi, scenario.quadrature)
    results.append(CheckResult("eq2_identity", breach.identity_holds, breach.discrepancy, breach.tolerance))

    if src.is_solenoid:
        results.append(_mirror_energy(src, scenario))
    if src.kind != SourceKind.INFINITE_SOLENOID:
        results += _numeric_checks(src, scenario)
    failed = [r.name for r in results if not r.passed]
    if failed:
        logger.warning(f"Verificações com falha: {', '.join(failed)}")
    return results
