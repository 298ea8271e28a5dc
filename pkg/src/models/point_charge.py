import math
from dataclasses import dataclass
from typing import Dict, List

from src.models.constants import SPEED_LIMIT
from src.models.vector import Vec3


@dataclass(frozen=True)
class PointCharge:
    """
    Carga q com posição x e velocidade v, fonte de B1 pela lei de Biot-Savart
    """
    q: float
    x: Vec3
    v: Vec3

    def errors(self, path: str = "charge") -> List[str]:
        problems = []
        if not math.isfinite(self.q):
            problems.append(f"{path}.q must be finite")
        if not self.x.is_finite():
            problems.append(f"{path}.x must be finite")
        if not self.v.is_finite():
            problems.append(f"{path}.v must be finite")
        elif not self.v.norm() < SPEED_LIMIT:
            problems.append(f"{path}.v must have |v| < {SPEED_LIMIT:g} m/s")
        return problems

    def to_dict(self) -> Dict:
        return {"q": self.q, "x": self.x.to_list(), "v": self.v.to_list()}

    @classmethod
    def from_dict(cls, data: Dict) -> "PointCharge":
        return cls(
            q=float(data["q"]),
            x=Vec3.from_seq(data["x"]),
            v=Vec3.from_seq(data["v"]),
        )
