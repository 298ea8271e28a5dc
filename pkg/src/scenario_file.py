"""
Leitura e escrita do arquivo de cenário (YAML, unidades SI, comentários
permitidos)
"""
import logging
from pathlib import Path

import yaml

from src.errors import ScenarioError
from src.models.scenario import Scenario, validate_scenario

logger = logging.getLogger(__name__)


def parse_scenario(text: str, origin: str = "<string>") -> Scenario:
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as e:
        raise ScenarioError(f"invalid YAML in {origin}: {e}")
    if data is None:
        raise ScenarioError(f"scenario file {origin} is empty")
    return validate_scenario(Scenario.from_dict(data))


def load_scenario(path: str) -> Scenario:
    """
    Lê e valida um arquivo de cenário
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        logger.error(f"Erro ao ler cenário {path}: {e}")
        raise ScenarioError(f"cannot read scenario file {path}: {e.strerror or e}")
    scenario = parse_scenario(text, path)
    logger.debug(f"Cenário {path} carregado ({scenario.experiment.kind})")
    return scenario


def dump_scenario(scenario: Scenario) -> str:
    """
    Serializa o cenário de volta para YAML; o texto relido produz o
    mesmo cenário
    """
    return yaml.safe_dump(scenario.to_dict(), sort_keys=False, default_flow_style=None)
