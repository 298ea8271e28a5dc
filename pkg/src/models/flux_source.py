import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional

import numpy as np

from src.models.vector import Vec3, VecLike, as_array, unit

logger = logging.getLogger(__name__)

# Margem de exclusão em torno de Ω, em unidades do comprimento característico
EXCLUSION_MARGIN = 0.05


class SourceKind(str, Enum):
    INFINITE_SOLENOID = "infinite_solenoid"
    FINITE_SOLENOID = "finite_solenoid"
    TOROID = "toroid"


@dataclass(frozen=True)
class FluxSource:
    """
    Região Ω de campo estático confinado (solenoide ou toroide) com campo
    interno uniforme B0
    """
    kind: SourceKind
    radius: float
    B0: float
    center: Vec3 = field(default_factory=lambda: Vec3(0.0, 0.0, 0.0))
    axis: Vec3 = field(default_factory=lambda: Vec3(0.0, 0.0, 1.0))
    length: Optional[float] = None
    minor_radius: Optional[float] = None

    @property
    def is_solenoid(self) -> bool:
        return self.kind in (SourceKind.INFINITE_SOLENOID, SourceKind.FINITE_SOLENOID)

    @property
    def characteristic_length(self) -> float:
        """
        Raio do tubo de fluxo: R para solenoides, raio menor para o toroide
        """
        if self.kind == SourceKind.TOROID:
            return float(self.minor_radius)
        return float(self.radius)

    def errors(self, path: str = "source") -> List[str]:
        """
        Lista os invariantes violados, cada um com o caminho do campo
        """
        problems = []
        values = [self.radius, self.B0]
        if not all(math.isfinite(v) for v in values):
            problems.append(f"{path}: radius and B0 must be finite")
        if not self.radius > 0:
            problems.append(f"{path}.radius must be > 0")
        if not self.B0 >= 0:
            problems.append(f"{path}.B0 must be >= 0")
        if not self.center.is_finite():
            problems.append(f"{path}.center must be finite")
        if not self.axis.is_finite() or abs(self.axis.norm() - 1.0) > 1e-12:
            problems.append(f"{path}.axis must be a unit vector (|axis| = {self.axis.norm()!r})")
        if self.kind == SourceKind.FINITE_SOLENOID:
            if self.length is None or not self.length > 0:
                problems.append(f"{path}.length must be > 0")
        if self.kind == SourceKind.TOROID:
            if self.minor_radius is None or not self.minor_radius > 0:
                problems.append(f"{path}.minor_radius must be > 0")
            elif self.radius > 0 and not self.minor_radius < self.radius:
                problems.append(f"{path}.minor_radius must be < radius")
        return problems

    def local_coordinates(self, points: VecLike) -> np.ndarray:
        """
        Coordenadas (rho, z) de cada ponto relativas ao centro e ao eixo
        """
        pts = np.atleast_2d(as_array(points)) - self.center.as_array()
        a = unit(self.axis)
        z = pts @ a
        radial = pts - np.outer(z, a)
        rho = np.linalg.norm(radial, axis=1)
        return np.column_stack([rho, z])

    def distance_to_region(self, points: VecLike) -> np.ndarray:
        """
        Distância de cada ponto até a fronteira de Ω (negativa ou zero dentro)
        """
        rz = self.local_coordinates(points)
        rho, z = rz[:, 0], rz[:, 1]
        if self.kind == SourceKind.INFINITE_SOLENOID:
            return rho - self.radius
        if self.kind == SourceKind.FINITE_SOLENOID:
            half = 0.5 * self.length
            d_rad = np.maximum(rho - self.radius, 0.0)
            d_ax = np.maximum(np.abs(z) - half, 0.0)
            outside = np.hypot(d_rad, d_ax)
            inside = -np.minimum(self.radius - rho, half - np.abs(z))
            return np.where((rho <= self.radius) & (np.abs(z) <= half), inside, outside)
        return np.hypot(rho - self.radius, z) - self.minor_radius

    def contains(self, points: VecLike) -> np.ndarray:
        return self.distance_to_region(points) <= 0.0

    def exclusion_margin(self) -> float:
        return EXCLUSION_MARGIN * self.characteristic_length

    def to_dict(self) -> Dict:
        """
        Converte o objeto FluxSource para um dicionário
        """
        data = {
            "kind": self.kind.value,
            "center": self.center.to_list(),
            "axis": self.axis.to_list(),
            "radius": self.radius,
            "B0": self.B0,
        }
        if self.length is not None:
            data["length"] = self.length
        if self.minor_radius is not None:
            data["minor_radius"] = self.minor_radius
        return data

    @classmethod
    def from_dict(cls, data: Dict) -> "FluxSource":
        """
        Cria um objeto FluxSource a partir de um dicionário
        """
        length = data.get("length")
        minor = data.get("minor_radius")
        return cls(
            kind=SourceKind(data.get("kind", SourceKind.INFINITE_SOLENOID.value)),
            center=Vec3.from_seq(data.get("center", [0.0, 0.0, 0.0])),
            axis=Vec3.from_seq(data.get("axis", [0.0, 0.0, 1.0])),
            radius=float(data["radius"]),
            B0=float(data["B0"]),
            length=None if length is None else float(length),
            minor_radius=None if minor is None else float(minor),
        )


def flux_of_source(src: FluxSource) -> float:
    """
    Fluxo confinado em Ω: B0·πR² para solenoides e B0·π·a² (seção do tubo)
    para o toroide
    """
    return src.B0 * math.pi * src.characteristic_length ** 2
