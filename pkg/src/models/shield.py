import math
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List

from src.models.constants import SPEED_LIMIT


class ShieldGeometry(str, Enum):
    FULL_CYLINDER = "full_cylinder"
    # blindado para z > 0 no referencial da fonte, nu abaixo do plano z = 0
    HALF_SPACE_CYLINDER = "half_space_cylinder"


@dataclass(frozen=True)
class ShieldSpec:
    """
    Invólucro supercondutor: gap de energia (eV) e a fração de B1 que chega a Ω
    (0 = blindagem Meissner perfeita)
    """
    geometry: ShieldGeometry
    energy_gap: float
    transmission: float = 0.0

    def errors(self, path: str = "shield") -> List[str]:
        problems = []
        if not (math.isfinite(self.energy_gap) and self.energy_gap > 0):
            problems.append(f"{path}.energy_gap must be > 0")
        if not 0.0 <= self.transmission <= 1.0:
            problems.append(f"{path}.transmission must be in [0, 1]")
        return problems

    def to_dict(self) -> Dict:
        return {
            "geometry": self.geometry.value,
            "energy_gap": self.energy_gap,
            "transmission": self.transmission,
        }

    @classmethod
    def from_dict(cls, data: Dict) -> "ShieldSpec":
        return cls(
            geometry=ShieldGeometry(data.get("geometry", ShieldGeometry.FULL_CYLINDER.value)),
            energy_gap=float(data["energy_gap"]),
            transmission=float(data.get("transmission", 0.0)),
        )


@dataclass(frozen=True)
class WavePacketSpec:
    """
    Pacote de onda do feixe: comprimento de coerência Δl (m) e velocidade v (m/s)
    """
    coherence_length: float
    speed: float

    def errors(self, path: str = "wave_packet") -> List[str]:
        problems = []
        if not (math.isfinite(self.coherence_length) and self.coherence_length > 0):
            problems.append(f"{path}.coherence_length must be > 0")
        if not (math.isfinite(self.speed) and self.speed > 0):
            problems.append(f"{path}.speed must be > 0")
        elif not self.speed < SPEED_LIMIT:
            problems.append(f"{path}.speed must be < {SPEED_LIMIT:g} m/s")
        return problems

    def to_dict(self) -> Dict:
        return {"coherence_length": self.coherence_length, "speed": self.speed}

    @classmethod
    def from_dict(cls, data: Dict) -> "WavePacketSpec":
        return cls(
            coherence_length=float(data["coherence_length"]),
            speed=float(data["speed"]),
        )
