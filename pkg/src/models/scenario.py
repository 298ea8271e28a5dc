import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple, Union

from src.errors import ScenarioValidationError
from src.models.beam_path import BeamPath
from src.models.constants import ELECTRON_CHARGE
from src.models.flux_source import FluxSource
from src.models.hypothesis import ALL_HYPOTHESES, Hypothesis
from src.models.shield import ShieldSpec, WavePacketSpec
from src.models.vector import Vec3
from src.physics.quadrature import QuadratureConfig

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TwoPathExperiment:
    """
    Dois feixes que se separam em F e se recombinam em E (layout de dois
    caminhos em torno da fonte)
    """
    path_C: BeamPath
    path_D: BeamPath
    charge_q: float = ELECTRON_CHARGE

    kind = "two_path"

    def errors(self, path: str = "experiment.two_path") -> List[str]:
        problems = self.path_C.errors(f"{path}.path_C") + self.path_D.errors(f"{path}.path_D")
        if not math.isfinite(self.charge_q):
            problems.append(f"{path}.charge_q must be finite")
        if self.path_C.vertices and self.path_D.vertices:
            c_start, c_end = self.path_C.vertices[0], self.path_C.vertices[-1]
            d_start, d_end = self.path_D.vertices[0], self.path_D.vertices[-1]
            if c_start != d_start:
                problems.append(
                    f"{path}: paths must share the split point: "
                    f"path_C starts at {c_start.to_list()}, path_D starts at {d_start.to_list()}"
                )
            if c_end != d_end:
                problems.append(
                    f"{path}: paths must share the recombination point: "
                    f"path_C ends at {c_end.to_list()}, path_D ends at {d_end.to_list()}"
                )
        return problems

    def to_dict(self) -> Dict:
        return {
            "two_path": {
                "charge_q": self.charge_q,
                "path_C": self.path_C.to_dict(),
                "path_D": self.path_D.to_dict(),
            }
        }


@dataclass(frozen=True)
class SquidExperiment:
    """
    Anel SQUID meio blindado: corrente I0 e varredura de fluxo aplicado
    """
    loop_current_I0: float
    flux_sweep: Tuple[float, ...]
    quantize: bool = False
    # raio do anel; quando presente a fração de energia é calculada numericamente
    loop_radius: Optional[float] = None

    kind = "squid"

    def errors(self, path: str = "experiment.squid") -> List[str]:
        problems = []
        if not (math.isfinite(self.loop_current_I0) and self.loop_current_I0 > 0):
            problems.append(f"{path}.loop_current_I0 must be > 0")
        for i, flux in enumerate(self.flux_sweep):
            if not math.isfinite(flux):
                problems.append(f"{path}.flux_sweep[{i}] must be finite")
        if self.loop_radius is not None and not self.loop_radius > 0:
            problems.append(f"{path}.loop_radius must be > 0")
        return problems

    def to_dict(self) -> Dict:
        data = {
            "loop_current_I0": self.loop_current_I0,
            "flux_sweep": list(self.flux_sweep),
            "quantize": self.quantize,
        }
        if self.loop_radius is not None:
            data["loop_radius"] = self.loop_radius
        return {"squid": data}


Experiment = Union[TwoPathExperiment, SquidExperiment]


@dataclass(frozen=True)
class VerifyOptions:
    # gancho de teste: soma ∇χ = c (χ = c·x) ao A analítico na verificação
    gauge_gradient: Optional[Vec3] = None

    def errors(self, path: str = "verify") -> List[str]:
        if self.gauge_gradient is not None and not self.gauge_gradient.is_finite():
            return [f"{path}.gauge_gradient must be finite"]
        return []

    def to_dict(self) -> Dict:
        if self.gauge_gradient is None:
            return {}
        return {"gauge_gradient": self.gauge_gradient.to_list()}


@dataclass(frozen=True)
class Scenario:
    """
    Descrição declarativa de um experimento: fonte, blindagem, experimento,
    hipótese e orçamento de quadratura
    """
    source: FluxSource
    experiment: Experiment
    shield: Optional[ShieldSpec] = None
    hypothesis: Optional[Hypothesis] = None
    quadrature: QuadratureConfig = field(default_factory=QuadratureConfig.default)
    wave_packet: Optional[WavePacketSpec] = None
    verify: VerifyOptions = field(default_factory=VerifyOptions)

    @property
    def hypotheses(self) -> Tuple[Hypothesis, ...]:
        """
        Hipóteses pedidas (as duas quando o campo é omitido)
        """
        if self.hypothesis is None:
            return ALL_HYPOTHESES
        return (self.hypothesis,)

    def to_dict(self) -> Dict:
        """
        Converte o cenário para o dicionário do arquivo de cenário
        """
        data = {
            "source": self.source.to_dict(),
            "experiment": self.experiment.to_dict(),
            "quadrature": self.quadrature.to_dict(),
        }
        if self.shield is not None:
            data["shield"] = self.shield.to_dict()
        if self.hypothesis is not None:
            data["hypothesis"] = self.hypothesis.value
        if self.wave_packet is not None:
            data["wave_packet"] = self.wave_packet.to_dict()
        verify = self.verify.to_dict()
        if verify:
            data["verify"] = verify
        return data

    @classmethod
    def from_dict(cls, data: Dict) -> "Scenario":
        """
        Cria um cenário a partir de um dicionário. Problemas de estrutura
        (chaves ausentes, tipos errados) são reunidos e levantados juntos
        """
        if not isinstance(data, dict):
            raise ScenarioValidationError(["scenario must be a mapping"])
        problems: List[str] = []

        def section(name, parse):
            raw = data.get(name)
            if raw is None:
                return None
            try:
                return parse(raw)
            except (KeyError, TypeError, ValueError, AttributeError) as e:
                problems.append(f"{name}: {_describe(e)}")
                return None

        source = section("source", FluxSource.from_dict)
        if "source" not in data:
            problems.append("source is required")
        shield = section("shield", ShieldSpec.from_dict)
        wave_packet = section("wave_packet", WavePacketSpec.from_dict)
        hypothesis = section("hypothesis", Hypothesis)
        quadrature = section("quadrature", QuadratureConfig.from_dict)
        verify = section("verify", _verify_from_dict)
        experiment = _experiment_from_dict(data.get("experiment"), problems)

        if problems:
            raise ScenarioValidationError(problems)
        return cls(
            source=source,
            experiment=experiment,
            shield=shield,
            hypothesis=hypothesis,
            quadrature=quadrature or QuadratureConfig.default(),
            wave_packet=wave_packet,
            verify=verify or VerifyOptions(),
        )


def _describe(error: Exception) -> str:
    if isinstance(error, KeyError):
        return f"missing key {error.args[0]!r}"
    return str(error)


def _verify_from_dict(data: Dict) -> VerifyOptions:
    gradient = data.get("gauge_gradient")
    return VerifyOptions(None if gradient is None else Vec3.from_seq(gradient))


def _experiment_from_dict(data: Optional[Dict], problems: List[str]) -> Optional[Experiment]:
    if not isinstance(data, dict) or len(data) != 1:
        problems.append("experiment must have exactly one of: two_path, squid")
        return None
    kind, body = next(iter(data.items()))
    try:
        if kind == TwoPathExperiment.kind:
            return TwoPathExperiment(
                path_C=BeamPath.from_dict(body["path_C"]),
                path_D=BeamPath.from_dict(body["path_D"]),
                charge_q=float(body.get("charge_q", ELECTRON_CHARGE)),
            )
        if kind == SquidExperiment.kind:
            radius = body.get("loop_radius")
            return SquidExperiment(
                loop_current_I0=float(body["loop_current_I0"]),
                flux_sweep=tuple(float(v) for v in body.get("flux_sweep") or ()),
                quantize=bool(body.get("quantize", False)),
                loop_radius=None if radius is None else float(radius),
            )
    except (KeyError, TypeError, ValueError, AttributeError) as e:
        problems.append(f"experiment.{kind}: {_describe(e)}")
        return None
    problems.append(f"experiment: unknown kind {kind!r}")
    return None


def scenario_errors(s: Scenario) -> List[str]:
    """
    Lista todos os invariantes violados pelo cenário
    """
    problems = s.source.errors("source")
    if s.shield is not None:
        problems += s.shield.errors("shield")
    if s.wave_packet is not None:
        problems += s.wave_packet.errors("wave_packet")
    problems += s.quadrature.errors("quadrature")
    problems += s.experiment.errors()
    problems += s.verify.errors("verify")
    return problems


def validate_scenario(s: Scenario) -> Scenario:
    """
    Devolve o cenário sem alterações se todos os invariantes valem; caso
    contrário levanta ScenarioValidationError com a lista completa
    """
    problems = scenario_errors(s)
    if problems:
        logger.error(f"Cenário inválido: {len(problems)} problema(s)")
        raise ScenarioValidationError(problems)
    return s
