import math
from dataclasses import dataclass
from typing import List, Sequence, Union

import numpy as np


@dataclass(frozen=True)
class Vec3:
    """
    Vetor cartesiano (posições em metros; campos e velocidades conforme o contexto)
    """
    x: float
    y: float
    z: float

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=float)

    def is_finite(self) -> bool:
        return all(math.isfinite(c) for c in (self.x, self.y, self.z))

    def norm(self) -> float:
        return math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)

    def to_list(self) -> List[float]:
        return [self.x, self.y, self.z]

    @classmethod
    def from_seq(cls, values: Sequence[float]) -> "Vec3":
        """
        Cria um Vec3 a partir de uma sequência de três números
        """
        if len(values) != 3:
            raise ValueError(f"esperados 3 componentes, recebidos {len(values)}")
        return cls(float(values[0]), float(values[1]), float(values[2]))


VecLike = Union[Vec3, Sequence[float], np.ndarray]


def as_array(value: VecLike) -> np.ndarray:
    """
    Normaliza Vec3, sequências ou arrays para np.ndarray de floats
    """
    if isinstance(value, Vec3):
        return value.as_array()
    return np.asarray(value, dtype=float)


def unit(value: VecLike) -> np.ndarray:
    arr = as_array(value)
    return arr / np.linalg.norm(arr)


def perpendicular_frame(axis: VecLike, toward: VecLike = None) -> np.ndarray:
    """
    Base ortonormal (e1, e2, e3) com e3 = axis; e1 aponta para a componente
    de `toward` perpendicular ao eixo quando ela existe
    """
    e3 = unit(axis)
    e1 = None
    if toward is not None:
        t = as_array(toward)
        radial = t - np.dot(t, e3) * e3
        size = np.linalg.norm(radial)
        if size > 1e-12 * max(np.linalg.norm(t), 1e-300):
            e1 = radial / size
    if e1 is None:
        ref = np.array([1.0, 0.0, 0.0]) if abs(e3[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
        e1 = ref - np.dot(ref, e3) * e3
        e1 = e1 / np.linalg.norm(e1)
    e2 = np.cross(e3, e1)
    return np.vstack([e1, e2, e3])
