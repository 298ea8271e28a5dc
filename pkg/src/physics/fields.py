"""
Campos: B1 de uma carga em movimento (Biot-Savart), o campo confinado B0,
o potencial vetor A da fonte (analítico para o solenoide infinito e pela
integral de volume sobre Ω nos demais casos), transformações de calibre e
operadores de diferenças finitas.
"""
import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from src.config import get_settings
from src.errors import ConvergenceError, GeometryError
from src.models.beam_path import BeamPath
from src.models.constants import CONSTANTS
from src.models.flux_source import FluxSource, SourceKind
from src.models.point_charge import PointCharge
from src.models.vector import VecLike, as_array, unit
from src.physics.quadrature import (
    IntegralResult,
    QuadratureConfig,
    Region3,
    integrate_planned,
    integrate_polyline,
    integrate_region,
)

logger = logging.getLogger(__name__)

MU0_OVER_4PI = CONSTANTS.mu0 / (4.0 * math.pi)

PointFunction = Callable[[np.ndarray], np.ndarray]
Weight = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True, eq=False)
class GaugeFunction:
    """
    Função de calibre χ (T·m²) com o gradiente fornecido analiticamente
    """
    chi: PointFunction
    gradient: PointFunction
    label: str = "chi"

    def value(self, points: VecLike) -> np.ndarray:
        pts = np.atleast_2d(as_array(points))
        return np.asarray(self.chi(pts), dtype=float).reshape(len(pts))

    def grad(self, points: VecLike) -> np.ndarray:
        pts = np.atleast_2d(as_array(points))
        return np.broadcast_to(np.asarray(self.gradient(pts), dtype=float), pts.shape).copy()

    def gradient_mismatch(self, points: VecLike, h: float) -> float:
        """
        Maior desvio relativo entre o gradiente fornecido e diferenças
        centrais de χ com passo h
        """
        pts = np.atleast_2d(as_array(points))
        supplied = self.grad(pts)
        fd = np.empty_like(supplied)
        for i in range(3):
            step = np.zeros(3)
            step[i] = h
            fd[:, i] = (self.value(pts + step) - self.value(pts - step)) / (2.0 * h)
        scale = max(float(np.max(np.linalg.norm(supplied, axis=1))), 1e-300)
        return float(np.max(np.linalg.norm(fd - supplied, axis=1))) / scale

    def is_consistent(self, points: VecLike, h: float, rel_tol: float = 1e-6) -> bool:
        return self.gradient_mismatch(points, h) <= rel_tol

    @classmethod
    def zero(cls) -> "GaugeFunction":
        return cls(
            chi=lambda p: np.zeros(len(p)),
            gradient=lambda p: np.zeros((len(p), 3)),
            label="zero",
        )

    @classmethod
    def linear(cls, c: VecLike) -> "GaugeFunction":
        """
        χ(x) = c·x, com ∇χ = c constante
        """
        vec = as_array(c)
        return cls(
            chi=lambda p: p @ vec,
            gradient=lambda p: np.tile(vec, (len(p), 1)),
            label=f"linear{vec.tolist()}",
        )


@dataclass(frozen=True, eq=False)
class VectorField:
    """
    Campo vetorial avaliado em lotes de pontos (N, 3), com metadados de
    unidade e proveniência (analytic, numeric ou gauge_shifted)
    """
    func: PointFunction
    units: str = "T*m"
    provenance: str = "analytic"
    source: Optional[FluxSource] = None
    cfg: Optional[QuadratureConfig] = None
    base: Optional["VectorField"] = None
    gauge: Optional[GaugeFunction] = None
    # versão com plano de quadratura congelado em torno de um ponto
    planner: Optional[Callable[[np.ndarray], "VectorField"]] = None
    # ∫ F·dl calculado sem amostrar F ao longo do caminho
    line_integral: Optional[Callable[[BeamPath, QuadratureConfig], IntegralResult]] = None

    def evaluate(self, points: VecLike) -> np.ndarray:
        pts = np.atleast_2d(as_array(points))
        return np.asarray(self.func(pts), dtype=float).reshape(len(pts), 3)

    def __call__(self, x: VecLike) -> np.ndarray:
        return self.evaluate(x)[0]

    def near(self, x: VecLike) -> "VectorField":
        if self.planner is None:
            return self
        return self.planner(as_array(x))


def field_direction(src: FluxSource, points: np.ndarray) -> np.ndarray:
    """
    Direção unitária de B0: o eixo para solenoides, azimutal (regra da mão
    direita em torno do eixo) para o toroide
    """
    axis = unit(src.axis)
    if src.kind != SourceKind.TOROID:
        return np.tile(axis, (len(points), 1))
    rel = points - src.center.as_array()
    radial = rel - np.outer(rel @ axis, axis)
    size = np.linalg.norm(radial, axis=1)
    direction = np.cross(axis, radial)
    return direction / np.where(size > 0, size, 1.0)[:, None]


def source_field(src: FluxSource, points: VecLike, assume_inside: bool = False) -> np.ndarray:
    """
    B0(r) em T: uniforme dentro de Ω e nulo fora
    """
    pts = np.atleast_2d(as_array(points))
    field = src.B0 * field_direction(src, pts)
    if assume_inside:
        return field
    return np.where(src.contains(pts)[:, None], field, 0.0)


def b1_field(c: PointCharge, points: VecLike) -> np.ndarray:
    """
    Campo magnético da carga, (μ0/4π)·q·v×(r − x)/|r − x|³, em lote
    """
    pts = np.atleast_2d(as_array(points))
    d = pts - c.x.as_array()
    dist = np.linalg.norm(d, axis=1)
    if np.any(dist == 0.0):
        raise GeometryError("B1 is singular at the charge position")
    return MU0_OVER_4PI * c.q * np.cross(c.v.as_array(), d) / (dist ** 3)[:, None]


def b1_point_charge(c: PointCharge, r: VecLike) -> np.ndarray:
    return b1_field(c, r)[0]


def segment_kernel(path: BeamPath, points: np.ndarray) -> np.ndarray:
    """
    Soma sobre os segmentos do campo de Biot-Savart de corrente unitária
    sem o fator μ0/4π (unidade 1/m). Exato para segmentos retos
    """
    starts, ends = path.segments()
    total = np.zeros_like(points)
    for a, b in zip(starts, ends):
        r1 = points - a
        r2 = points - b
        n1 = np.linalg.norm(r1, axis=1)
        n2 = np.linalg.norm(r2, axis=1)
        dot = np.einsum("ij,ij->i", r1, r2)
        factor = (n1 + n2) / (n1 * n2 * (n1 * n2 + dot))
        total += factor[:, None] * np.cross(r1, r2)
    return total


def check_outside(src: FluxSource, points: VecLike, what: str = "evaluation point") -> None:
    """
    Rejeita pontos dentro de Ω ou a menos da margem de exclusão
    """
    pts = np.atleast_2d(as_array(points))
    distance = src.distance_to_region(pts)
    margin = src.exclusion_margin()
    if np.any(distance <= margin):
        worst = float(np.min(distance))
        logger.error(f"Ponto a {worst:.3e} m da região Ω (margem {margin:.3e} m)")
        raise GeometryError(
            f"{what} is inside or within {margin:g} m of the source region (distance {worst:g} m)"
        )


def vector_potential_analytic(src: FluxSource, x: VecLike) -> np.ndarray:
    return analytic_potential(src, x)[0]


def analytic_potential(src: FluxSource, points: VecLike) -> np.ndarray:
    """
    A do solenoide infinito: B0·ρ/2 dentro, B0·R²/(2ρ) fora, azimutal
    """
    if src.kind != SourceKind.INFINITE_SOLENOID:
        raise ValueError(f"analytic vector potential requires an infinite_solenoid, got {src.kind.value}")
    pts = np.atleast_2d(as_array(points))
    axis = unit(src.axis)
    rel = pts - src.center.as_array()
    radial = rel - np.outer(rel @ axis, axis)
    rho2 = np.einsum("ij,ij->i", radial, radial)
    radius2 = src.radius * src.radius
    scale = np.where(rho2 <= radius2, 0.5 * src.B0, 0.5 * src.B0 * radius2 / np.where(rho2 > 0, rho2, 1.0))
    return scale[:, None] * np.cross(axis, radial)


def analytic_potential_field(src: FluxSource) -> VectorField:
    return VectorField(lambda p: analytic_potential(src, p), "T*m", "analytic", source=src)


def _potential_integrand(src: FluxSource, x: np.ndarray) -> PointFunction:
    # b̂ × (x − r)/|x − r|³ dividido pelo comprimento característico
    ell = src.characteristic_length

    def integrand(points: np.ndarray) -> np.ndarray:
        d = x - points
        dist = np.linalg.norm(d, axis=1)
        return np.cross(field_direction(src, points), d) / (dist ** 3 * ell)[:, None]

    return integrand


def _potential_prefactor(src: FluxSource) -> float:
    return src.B0 * src.characteristic_length / (4.0 * math.pi)


def vector_potential_numeric(
    src: FluxSource, x: VecLike, cfg: Optional[QuadratureConfig] = None
) -> np.ndarray:
    """
    A(x) = (1/4π)·∫_Ω B0(r)×(x − r)/|x − r|³ dr³ por quadratura adaptativa
    """
    point = as_array(x)
    check_outside(src, point)
    if src.B0 == 0:
        return np.zeros(3)
    cfg = cfg or QuadratureConfig.default()
    region = Region3.from_source(src, point)
    result = integrate_region(_potential_integrand(src, point), region, cfg)
    if not result.converged:
        raise ConvergenceError(f"vector potential at {point.tolist()} did not converge")
    return _potential_prefactor(src) * result.value


def numeric_potential_field(src: FluxSource, cfg: Optional[QuadratureConfig] = None) -> VectorField:
    """
    Campo A numérico; `near(x)` congela a partição adaptativa obtida em x,
    de modo que o campo seja suave nos pontos de um estêncil
    """
    cfg = cfg or QuadratureConfig.default()

    def evaluate(points: np.ndarray) -> np.ndarray:
        return np.array([vector_potential_numeric(src, p, cfg) for p in points])

    def plan(x: np.ndarray) -> VectorField:
        check_outside(src, x)
        if src.B0 == 0:
            return VectorField(lambda p: np.zeros((len(p), 3)), "T*m", "numeric", source=src, cfg=cfg)
        region = Region3.from_source(src, x)
        frozen = integrate_region(_potential_integrand(src, x), region, cfg, keep_leaves=True)
        prefactor = _potential_prefactor(src)

        def evaluate_near(points: np.ndarray) -> np.ndarray:
            check_outside(src, points)
            return np.array([
                prefactor * integrate_planned(_potential_integrand(src, p), region, frozen, cfg).value
                for p in points
            ])

        return VectorField(evaluate_near, "T*m", "numeric", source=src, cfg=cfg)

    return VectorField(
        evaluate, "T*m", "numeric", source=src, cfg=cfg, planner=plan,
        line_integral=lambda path, c: path_potential_integral(src, path, c),
    )


def potential_field(src: FluxSource, cfg: Optional[QuadratureConfig] = None, numeric: bool = False) -> VectorField:
    """
    A analítico para o solenoide infinito, numérico para as demais fontes
    (ou quando pedido)
    """
    if src.kind == SourceKind.INFINITE_SOLENOID and not numeric:
        return analytic_potential_field(src)
    return numeric_potential_field(src, cfg)


def path_potential_integral(
    src: FluxSource,
    path: BeamPath,
    cfg: Optional[QuadratureConfig] = None,
    weight: Optional[Weight] = None,
) -> IntegralResult:
    """
    ∫_path A·dl (Wb) trocando a ordem de integração: (1/4π)·∫_Ω B0·K dV,
    com K o campo de Biot-Savart do caminho percorrido por corrente
    unitária. `weight(r)` multiplica B0 ponto a ponto (blindagem parcial)
    """
    cfg = cfg or QuadratureConfig.default()
    check_outside(src, path.sample(), "path")
    if src.B0 == 0:
        return IntegralResult(0.0, 0.0, 0, True)
    ell = src.characteristic_length
    samples = path.sample()
    focus = samples[int(np.argmin(src.distance_to_region(samples)))]
    region = Region3.from_source(src, focus)

    def integrand(points: np.ndarray) -> np.ndarray:
        values = np.einsum("ij,ij->i", field_direction(src, points), segment_kernel(path, points)) / ell ** 2
        if weight is not None:
            values = values * weight(points)
        return values

    result = integrate_region(integrand, region, cfg)
    prefactor = src.B0 * ell ** 2 / (4.0 * math.pi)
    return IntegralResult(
        prefactor * result.value,
        prefactor * result.error_estimate,
        result.subdivisions_used,
        result.converged,
    )


def apply_gauge(F: VectorField, chi: GaugeFunction) -> VectorField:
    """
    F′(x) = F(x) + ∇χ(x)
    """
    line_integral = None
    if F.line_integral is not None:
        def line_integral(path: BeamPath, cfg: QuadratureConfig) -> IntegralResult:
            base = F.line_integral(path, cfg)
            ends = path.points()[[0, -1]]
            delta = chi.value(ends)
            return IntegralResult(base.value + float(delta[1] - delta[0]), base.error_estimate,
                                  base.subdivisions_used, base.converged)

    return VectorField(
        lambda p: F.evaluate(p) + chi.grad(p),
        F.units,
        "gauge_shifted",
        source=F.source,
        cfg=F.cfg,
        base=F,
        gauge=chi,
        planner=None if F.planner is None else (lambda x: apply_gauge(F.near(x), chi)),
        line_integral=line_integral,
    )


def default_step(src: FluxSource) -> float:
    """
    Passo padrão das diferenças finitas: fração configurada do comprimento
    característico (1e-4·R)
    """
    return get_settings().fd_step_fraction * src.characteristic_length


def _jacobian_fd(F: VectorField, x: VecLike, h: float) -> np.ndarray:
    # J[i, j] = ∂F_j/∂x_i por diferenças centrais
    point = as_array(x)
    local = F.near(point)
    steps = h * np.eye(3)
    values = local.evaluate(np.vstack([point + steps, point - steps]))
    return (values[:3] - values[3:]) / (2.0 * h)


def curl_fd(F: VectorField, x: VecLike, h: float) -> np.ndarray:
    J = _jacobian_fd(F, x, h)
    return np.array([J[1, 2] - J[2, 1], J[2, 0] - J[0, 2], J[0, 1] - J[1, 0]])


def div_fd(F: VectorField, x: VecLike, h: float) -> float:
    J = _jacobian_fd(F, x, h)
    return float(J[0, 0] + J[1, 1] + J[2, 2])


def loop_integral_A(F: VectorField, loop: BeamPath, cfg: Optional[QuadratureConfig] = None) -> float:
    """
    ∮ F·dl ao longo de um laço poligonal fechado (Wb para campos A)
    """
    if not loop.is_closed:
        raise GeometryError("loop must be closed (first vertex equal to last)")
    cfg = cfg or QuadratureConfig.default()
    if F.line_integral is not None:
        result = F.line_integral(loop, cfg)
    else:
        magnitude = float(np.max(np.linalg.norm(F.evaluate(loop.points()), axis=1)))
        scale = magnitude * loop.length()
        if scale == 0.0:
            scale = 1.0
        result = integrate_polyline(lambda p: F.evaluate(p) / scale, loop, cfg)
        result = IntegralResult(result.value * scale, result.error_estimate * scale,
                                result.subdivisions_used, result.converged)
    if not result.converged:
        raise ConvergenceError("loop integral did not converge")
    logger.debug(f"∮A·dl = {result.value:.6e} Wb ({F.provenance})")
    return float(result.value)
