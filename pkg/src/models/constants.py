import math
from dataclasses import dataclass
from typing import Dict, List

from scipy import constants as codata


@dataclass(frozen=True)
class Constants:
    """
    Constantes físicas fixas (CODATA do scipy) usadas em todos os relatórios
    """
    mu0: float
    h: float
    hbar: float
    e: float
    flux_quantum_pair: float
    flux_quantum_single: float

    @classmethod
    def codata(cls) -> "Constants":
        h = codata.h
        e = codata.e
        pair = h / (2.0 * e)
        return cls(
            mu0=codata.mu_0,
            h=h,
            hbar=h / (2.0 * math.pi),
            e=e,
            flux_quantum_pair=pair,
            flux_quantum_single=2.0 * pair,
        )

    def units(self) -> Dict[str, str]:
        return {
            "mu0": "T*m/A",
            "h": "J*s",
            "hbar": "J*s",
            "e": "C",
            "flux_quantum_pair": "Wb",
            "flux_quantum_single": "Wb",
        }

    def to_rows(self) -> List[Dict]:
        """
        Linhas (nome, valor, unidade) para o comando `constants`
        """
        units = self.units()
        return [
            {"name": name, "value": getattr(self, name), "unit": unit}
            for name, unit in units.items()
        ]


CONSTANTS = Constants.codata()

# Carga do elétron (q = -e)
ELECTRON_CHARGE = -CONSTANTS.e

# Limite de sanidade para velocidades (fórmulas não relativísticas)
SPEED_LIMIT = 3.0e8
