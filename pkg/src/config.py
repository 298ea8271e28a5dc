import os
from dataclasses import dataclass
from typing import Optional

from dotenv import load_dotenv


@dataclass(frozen=True)
class Settings:
    """
    Configuração do ambiente (variáveis AB_* ou arquivo .env)
    """
    log_level: str = "WARNING"
    rel_tol: float = 1e-6
    abs_tol: float = 1e-14
    max_subdivisions: int = 1_000_000
    gauss_order: int = 4
    fd_step_fraction: float = 1e-4


def load_settings() -> Settings:
    """
    Lê as configurações das variáveis de ambiente
    """
    load_dotenv()
    defaults = Settings()
    return Settings(
        log_level=os.getenv("AB_LOG_LEVEL", defaults.log_level).upper(),
        rel_tol=float(os.getenv("AB_REL_TOL", defaults.rel_tol)),
        abs_tol=float(os.getenv("AB_ABS_TOL", defaults.abs_tol)),
        max_subdivisions=int(os.getenv("AB_MAX_SUBDIVISIONS", defaults.max_subdivisions)),
        gauss_order=int(os.getenv("AB_GAUSS_ORDER", defaults.gauss_order)),
        fd_step_fraction=float(os.getenv("AB_FD_STEP_FRACTION", defaults.fd_step_fraction)),
    )


# Instância das configurações
settings: Optional[Settings] = None


def get_settings() -> Settings:
    """
    Retorna a instância das configurações
    """
    global settings
    if settings is None:
        settings = load_settings()
    return settings


def reset_settings() -> None:
    global settings
    settings = None
