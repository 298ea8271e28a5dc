"""
Integração numérica adaptativa e determinística.

Regras produto de Gauss-Legendre em cada coordenada, com estimativa de erro
em dois níveis: o valor de uma célula pela regra na célula inteira é
comparado com a soma da mesma regra nas suas 2^d filhas. A célula de maior
erro é subdividida primeiro (empate resolvido pelo índice de criação), então
o resultado não depende de tempo nem de ordem de execução.

Os integrandos são vetorizados: recebem um lote de pontos (N, 3) (ou tempos
(N,)) e devolvem (N,) ou (N, k).
"""
import heapq
import itertools
import logging
import math
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from src.config import get_settings
from src.models.beam_path import BeamPath
from src.models.flux_source import FluxSource, SourceKind
from src.models.vector import VecLike, as_array, perpendicular_frame

logger = logging.getLogger(__name__)

Value = Union[float, np.ndarray]
Integrand = Callable[[np.ndarray], np.ndarray]

# Limite de pontos por chamada do integrando
_MAX_POINTS = 65536

_ANGULAR_BREAKS = (-math.pi, -math.pi / 2, -math.pi / 4, 0.0, math.pi / 4, math.pi / 2, math.pi)
_POLOIDAL_BREAKS = (-math.pi, -math.pi / 2, 0.0, math.pi / 2, math.pi)
_TOROIDAL_BREAKS = (
    -math.pi, -math.pi / 2, -math.pi / 4, -math.pi / 8, 0.0,
    math.pi / 8, math.pi / 4, math.pi / 2, math.pi,
)


@dataclass(frozen=True)
class QuadratureConfig:
    """
    Tolerâncias e orçamento da integração adaptativa
    """
    rel_tol: float = 1e-6
    abs_tol: float = 1e-14
    max_subdivisions: int = 1_000_000
    order: int = 4

    @classmethod
    def default(cls) -> "QuadratureConfig":
        settings = get_settings()
        return cls(
            rel_tol=settings.rel_tol,
            abs_tol=settings.abs_tol,
            max_subdivisions=settings.max_subdivisions,
            order=settings.gauss_order,
        )

    def errors(self, path: str = "quadrature") -> List[str]:
        problems = []
        if not (math.isfinite(self.rel_tol) and self.rel_tol > 0):
            problems.append(f"{path}.rel_tol must be > 0")
        if not (math.isfinite(self.abs_tol) and self.abs_tol >= 0):
            problems.append(f"{path}.abs_tol must be >= 0")
        if not self.max_subdivisions >= 1:
            problems.append(f"{path}.max_subdivisions must be >= 1")
        if not self.order >= 2:
            problems.append(f"{path}.order must be >= 2")
        return problems

    def with_rel_tol(self, rel_tol: float) -> "QuadratureConfig":
        return replace(self, rel_tol=rel_tol)

    def target(self, magnitude: float) -> float:
        return max(self.rel_tol * magnitude, self.abs_tol)

    def to_dict(self) -> Dict:
        return {
            "rel_tol": self.rel_tol,
            "abs_tol": self.abs_tol,
            "max_subdivisions": self.max_subdivisions,
            "order": self.order,
        }

    @classmethod
    def from_dict(cls, data: Optional[Dict]) -> "QuadratureConfig":
        """
        Cria a configuração a partir de um dicionário; campos ausentes vêm
        do ambiente
        """
        base = cls.default()
        data = data or {}
        return cls(
            rel_tol=float(data.get("rel_tol", base.rel_tol)),
            abs_tol=float(data.get("abs_tol", base.abs_tol)),
            max_subdivisions=int(data.get("max_subdivisions", base.max_subdivisions)),
            order=int(data.get("order", base.order)),
        )


@dataclass(frozen=True)
class IntegralResult:
    value: Value
    error_estimate: float
    subdivisions_used: int
    converged: bool
    # células folha (lo, hi) do plano final; só preenchido quando pedido
    leaves: Tuple = field(default=(), repr=False, compare=False)


@dataclass(frozen=True, eq=False)
class Region3:
    """
    Parametrização de Ω em coordenadas (radial, angular, axial).

    Cilindro: ponto = origem + s·cos(t)·e1 + s·sin(t)·e2 + z·e3, com
    z = w (eixo finito) ou z = shift + scale·tan(w) (eixo infinito
    compactificado). Toro: raio menor s, ângulo poloidal t, ângulo
    toroidal w.
    """
    shape: str
    origin: np.ndarray
    frame: np.ndarray
    radial: Tuple[float, ...]
    angular: Tuple[float, ...]
    axial: Tuple[float, ...]
    axial_scale: float = 0.0
    axial_shift: float = 0.0
    major_radius: float = 0.0

    def boxes(self) -> Tuple[np.ndarray, np.ndarray]:
        """
        Partição inicial: produto dos intervalos entre pontos de quebra
        """
        spans = [list(zip(b[:-1], b[1:])) for b in (self.radial, self.angular, self.axial)]
        lo, hi = [], []
        for combo in itertools.product(*spans):
            lo.append([c[0] for c in combo])
            hi.append([c[1] for c in combo])
        return np.array(lo, dtype=float), np.array(hi, dtype=float)

    def map(self, params: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        s, t, w = params[:, 0], params[:, 1], params[:, 2]
        e1, e2, e3 = self.frame
        if self.shape == "torus":
            rho = self.major_radius + s * np.cos(t)
            local = (
                (rho * np.cos(w))[:, None] * e1
                + (rho * np.sin(w))[:, None] * e2
                + (s * np.sin(t))[:, None] * e3
            )
            return self.origin + local, s * rho
        if self.axial_scale > 0:
            z = self.axial_shift + self.axial_scale * np.tan(w)
            dz = self.axial_scale / np.cos(w) ** 2
        else:
            z = w
            dz = 1.0
        local = (s * np.cos(t))[:, None] * e1 + (s * np.sin(t))[:, None] * e2 + z[:, None] * e3
        return self.origin + local, s * dz

    @classmethod
    def from_source(cls, src: FluxSource, focus: VecLike = None) -> "Region3":
        """
        Região Ω da fonte num referencial local: e1 aponta para a projeção
        radial de `focus` e a partição axial é graduada em torno dele
        """
        origin = src.center.as_array()
        rel = None if focus is None else as_array(focus) - origin
        frame = perpendicular_frame(src.axis, rel)
        z_f = 0.0 if rel is None else float(np.dot(rel, frame[2]))

        if src.kind == SourceKind.TOROID:
            return cls(
                shape="torus",
                origin=origin,
                frame=frame,
                radial=(0.0, float(src.minor_radius)),
                angular=_POLOIDAL_BREAKS,
                axial=_TOROIDAL_BREAKS,
                major_radius=float(src.radius),
            )

        radius = float(src.radius)
        if src.kind == SourceKind.FINITE_SOLENOID:
            half = 0.5 * float(src.length)
            candidates = [-half, 0.0, half]
            for k in range(-1, 12):
                candidates += [z_f - radius * 2.0 ** k, z_f + radius * 2.0 ** k]
            axial = _breaks(candidates, -half, half)
            return cls("cylinder", origin, frame, (0.0, radius), _ANGULAR_BREAKS, axial)

        limit = math.pi / 2
        candidates = [-limit, 0.0, limit, math.atan2(-z_f, radius)]
        for k in range(-1, 4):
            candidates += [-math.atan(2.0 ** k), math.atan(2.0 ** k)]
        axial = _breaks(candidates, -limit, limit)
        return cls(
            "cylinder", origin, frame, (0.0, radius), _ANGULAR_BREAKS, axial,
            axial_scale=radius, axial_shift=z_f,
        )


def _breaks(candidates: Sequence[float], lo: float, hi: float) -> Tuple[float, ...]:
    tol = 1e-12 * (hi - lo)
    kept = [lo]
    for value in sorted(c for c in candidates if lo < c < hi):
        if value - kept[-1] > tol and hi - value > tol:
            kept.append(value)
    kept.append(hi)
    return tuple(kept)


@lru_cache(maxsize=None)
def _product_rule(order: int, dims: int) -> Tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(order)
    grids = np.meshgrid(*([x] * dims), indexing="ij")
    nodes = np.column_stack([g.ravel() for g in grids])
    weights = np.ones(1)
    for _ in range(dims):
        weights = np.outer(weights, w).ravel()
    return nodes, weights


def _identity_map(params: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    return params[:, 0], np.ones(len(params))


class _AdaptiveEngine:
    """
    Motor comum às integrais 1D e 3D
    """

    def __init__(self, f: Integrand, mapping: Callable, dims: int, cfg: QuadratureConfig):
        self.f = f
        self.mapping = mapping
        self.dims = dims
        self.cfg = cfg
        self.nodes, self.weights = _product_rule(cfg.order, dims)
        self.offsets = np.array(list(itertools.product((0, 1), repeat=dims)), dtype=bool)

    def rule(self, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
        """
        Regra produto em cada caixa; devolve (B, k)
        """
        per_chunk = max(1, _MAX_POINTS // len(self.nodes))
        parts = [self._rule_chunk(lo[i:i + per_chunk], hi[i:i + per_chunk])
                 for i in range(0, len(lo), per_chunk)]
        return np.vstack(parts)

    def _rule_chunk(self, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
        count, size = len(lo), len(self.nodes)
        center = 0.5 * (lo + hi)
        half = 0.5 * (hi - lo)
        params = (center[:, None, :] + half[:, None, :] * self.nodes[None, :, :]).reshape(-1, self.dims)
        args, jac = self.mapping(params)
        values = np.asarray(self.f(args), dtype=float)
        if values.ndim == 0:
            values = np.full(len(params), float(values))
        values = values.reshape(len(params), -1)
        if not np.all(np.isfinite(values)):
            raise ValueError("integrando não finito na região de integração")
        weights = (self.weights[None, :] * np.prod(half, axis=1)[:, None]).reshape(-1) * jac
        weighted = (values * weights[:, None]).reshape(count, size, -1)
        return weighted.sum(axis=1)

    def split(self, lo: np.ndarray, hi: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        mid = 0.5 * (lo + hi)
        child_lo = np.where(self.offsets[None], mid[:, None, :], lo[:, None, :])
        child_hi = np.where(self.offsets[None], hi[:, None, :], mid[:, None, :])
        return child_lo.reshape(-1, self.dims), child_hi.reshape(-1, self.dims)

    def run(self, lo: np.ndarray, hi: np.ndarray, keep_leaves: bool = False) -> IntegralResult:
        cfg = self.cfg
        nchild = len(self.offsets)
        child_lo, child_hi = self.split(lo, hi)
        sums = self.rule(np.vstack([lo, child_lo]), np.vstack([hi, child_hi]))
        coarse = sums[:len(lo)]
        kids = sums[len(lo):].reshape(len(lo), nchild, -1)

        cells: Dict[int, Tuple] = {}
        heap: List[Tuple[float, int]] = []
        total = np.zeros(sums.shape[1])
        total_err = 0.0
        for i in range(len(lo)):
            fine = kids[i].sum(axis=0)
            err = float(np.linalg.norm(fine - coarse[i]))
            cells[i] = (lo[i], hi[i], fine, err, kids[i])
            heapq.heappush(heap, (-err, i))
            total = total + fine
            total_err += err
        next_index = len(lo)

        subdivisions = 0
        converged = True
        while total_err > cfg.target(float(np.linalg.norm(total))):
            if not math.isfinite(total_err):
                raise ValueError("estimativa de erro não finita")
            if subdivisions >= cfg.max_subdivisions:
                converged = False
                logger.warning(
                    f"Integração não convergiu em {cfg.max_subdivisions} subdivisões "
                    f"(erro estimado {total_err:.3e})"
                )
                break
            _, index = heapq.heappop(heap)
            c_lo, c_hi, c_fine, c_err, c_kids = cells.pop(index)
            sub_lo, sub_hi = self.split(c_lo[None], c_hi[None])
            grand_lo, grand_hi = self.split(sub_lo, sub_hi)
            grand = self.rule(grand_lo, grand_hi).reshape(nchild, nchild, -1)
            total = total - c_fine
            total_err -= c_err
            for j in range(nchild):
                fine = grand[j].sum(axis=0)
                err = float(np.linalg.norm(fine - c_kids[j]))
                cells[next_index] = (sub_lo[j], sub_hi[j], fine, err, grand[j])
                heapq.heappush(heap, (-err, next_index))
                total = total + fine
                total_err += err
                next_index += 1
            subdivisions += 1

        order = sorted(cells)
        value = np.sum(np.vstack([cells[i][2] for i in order]), axis=0)
        error = math.fsum(cells[i][3] for i in order)
        leaves = ()
        if keep_leaves:
            leaf_lo, leaf_hi = self.split(
                np.vstack([cells[i][0] for i in order]), np.vstack([cells[i][1] for i in order])
            )
            leaves = (leaf_lo, leaf_hi)
        logger.debug(f"Integral adaptativa: {subdivisions} subdivisões, {len(cells)} células, erro {error:.3e}")
        return IntegralResult(value, error, subdivisions, converged, leaves)


def _finish(result: IntegralResult, scalar: bool) -> IntegralResult:
    if scalar and np.size(result.value) == 1:
        return replace(result, value=float(np.ravel(result.value)[0]))
    return result


def integrate_region(
    f: Integrand,
    region: Region3,
    cfg: Optional[QuadratureConfig] = None,
    keep_leaves: bool = False,
) -> IntegralResult:
    """
    Integral de f sobre Ω. f recebe pontos (N, 3) e devolve (N,) ou (N, k);
    o valor devolvido é escalar ou array (k,) respectivamente
    """
    cfg = cfg or QuadratureConfig.default()
    engine = _AdaptiveEngine(f, region.map, 3, cfg)
    lo, hi = region.boxes()
    result = engine.run(lo, hi, keep_leaves=keep_leaves)
    return _finish(result, _is_scalar_integrand(f, region))


def integrate_planned(
    f: Integrand,
    region: Region3,
    plan: IntegralResult,
    cfg: Optional[QuadratureConfig] = None,
) -> IntegralResult:
    """
    Reaplica a partição final de uma integral adaptativa anterior, sem
    refinar. O resultado é função suave dos parâmetros do integrando
    """
    if not plan.leaves:
        raise ValueError("plano de integração sem células folha (use keep_leaves=True)")
    cfg = cfg or QuadratureConfig.default()
    engine = _AdaptiveEngine(f, region.map, 3, cfg)
    leaf_lo, leaf_hi = plan.leaves
    value = np.sum(engine.rule(leaf_lo, leaf_hi), axis=0)
    result = IntegralResult(value, plan.error_estimate, 0, plan.converged)
    return _finish(result, _is_scalar_integrand(f, region))


def _is_scalar_integrand(f: Integrand, region: Region3) -> bool:
    probe, _ = region.map(np.array([[region.radial[-1] / 2, 0.0, 0.0]]))
    return np.asarray(f(probe), dtype=float).ndim <= 1


def integrate_time(
    g: Callable[[np.ndarray], np.ndarray],
    t0: float,
    t1: float,
    cfg: Optional[QuadratureConfig] = None,
    breaks: Sequence[float] = (),
) -> IntegralResult:
    """
    Integral 1D adaptativa de g em [t0, t1]; g recebe um array de tempos.
    `breaks` são instantes onde g não é suave (vértices de um caminho)
    """
    if not t0 < t1:
        raise ValueError(f"intervalo de tempo inválido: t0={t0!r} deve ser < t1={t1!r}")
    cfg = cfg or QuadratureConfig.default()
    edges = np.array(_breaks(list(breaks), float(t0), float(t1)))
    engine = _AdaptiveEngine(g, _identity_map, 1, cfg)
    result = engine.run(edges[:-1, None], edges[1:, None])
    return _finish(result, True)


def integrate_polyline(
    f: Integrand,
    path: BeamPath,
    cfg: Optional[QuadratureConfig] = None,
) -> IntegralResult:
    """
    Soma sobre os segmentos de ∫ f(p)·dl. f recebe pontos (N, 3) e devolve
    vetores (N, 3); cada segmento é refinado de forma independente
    """
    problems = path.errors()
    if problems:
        raise ValueError("; ".join(problems))
    cfg = cfg or QuadratureConfig.default()
    starts, ends = path.segments()
    deltas = ends - starts
    count = len(starts)

    def integrand(u: np.ndarray) -> np.ndarray:
        k = np.clip(np.floor(u).astype(int), 0, count - 1)
        s = u - k
        points = starts[k] + s[:, None] * deltas[k]
        vectors = np.asarray(f(points), dtype=float).reshape(len(u), 3)
        return np.einsum("ij,ij->i", vectors, deltas[k])

    engine = _AdaptiveEngine(integrand, _identity_map, 1, cfg)
    edges = np.arange(count + 1, dtype=float)
    result = engine.run(edges[:-1, None], edges[1:, None])
    return _finish(result, True)
