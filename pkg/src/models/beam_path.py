import math
from dataclasses import dataclass
from typing import Dict, List, Tuple

import numpy as np

from src.models.constants import SPEED_LIMIT
from src.models.vector import Vec3, VecLike, as_array, perpendicular_frame


@dataclass(frozen=True)
class BeamPath:
    """
    Trajetória poligonal percorrida com velocidade constante
    """
    vertices: Tuple[Vec3, ...]
    speed: float = 1.0

    def errors(self, path: str = "path") -> List[str]:
        problems = []
        if len(self.vertices) < 2:
            problems.append(f"{path}.vertices must have at least 2 vertices")
        for i, vertex in enumerate(self.vertices):
            if not vertex.is_finite():
                problems.append(f"{path}.vertices[{i}] must be finite")
        for i in range(1, len(self.vertices)):
            if self.vertices[i] == self.vertices[i - 1]:
                problems.append(f"{path}.vertices[{i}] repeats vertices[{i - 1}]")
        if not (math.isfinite(self.speed) and self.speed > 0):
            problems.append(f"{path}.speed must be > 0")
        elif not self.speed < SPEED_LIMIT:
            problems.append(f"{path}.speed must be < {SPEED_LIMIT:g} m/s")
        return problems

    @property
    def is_closed(self) -> bool:
        return len(self.vertices) > 2 and self.vertices[0] == self.vertices[-1]

    def points(self) -> np.ndarray:
        return np.array([v.to_list() for v in self.vertices], dtype=float)

    def segments(self) -> Tuple[np.ndarray, np.ndarray]:
        """
        Pontos inicial e final de cada segmento, arrays (K, 3)
        """
        pts = self.points()
        return pts[:-1], pts[1:]

    def length(self) -> float:
        a, b = self.segments()
        return float(np.sum(np.linalg.norm(b - a, axis=1)))

    def sample(self, per_segment: int = 64) -> np.ndarray:
        """
        Amostras uniformes ao longo de cada segmento (inclui os vértices)
        """
        a, b = self.segments()
        s = np.linspace(0.0, 1.0, per_segment + 1)
        samples = a[:, None, :] + s[None, :, None] * (b - a)[:, None, :]
        return samples.reshape(-1, 3)

    def reversed(self) -> "BeamPath":
        return BeamPath(tuple(reversed(self.vertices)), self.speed)

    def to_dict(self) -> Dict:
        return {"vertices": [v.to_list() for v in self.vertices], "speed": self.speed}

    @classmethod
    def from_dict(cls, data: Dict) -> "BeamPath":
        return cls(
            vertices=tuple(Vec3.from_seq(v) for v in data["vertices"]),
            speed=float(data.get("speed", 1.0)),
        )


def circle_loop(center: VecLike, axis: VecLike, radius: float, segments: int = 32) -> BeamPath:
    """
    Polígono regular fechado, anti-horário em torno de `axis`
    """
    frame = perpendicular_frame(axis)
    c = as_array(center)
    angles = 2.0 * np.pi * np.arange(segments) / segments
    vertices = [
        Vec3.from_seq(c + radius * (math.cos(t) * frame[0] + math.sin(t) * frame[1]))
        for t in angles
    ]
    vertices.append(vertices[0])
    return BeamPath(tuple(vertices))


def closed_loop(path_c: BeamPath, path_d: BeamPath) -> BeamPath:
    """
    Laço C seguido de D percorrido ao contrário (C − D̄)
    """
    back = path_d.reversed().vertices[1:]
    return BeamPath(path_c.vertices + back, path_c.speed)
