from dataclasses import replace
from functools import wraps
import logging

import click

from src.errors import AbLabError, ExperimentError, ScenarioValidationError
from src.scenario_file import load_scenario

logger = logging.getLogger(__name__)

EXIT_CHECK_FAILED = 1
EXIT_INPUT_ERROR = 2


def fail(error: Exception):
    """
    Imprime o diagnóstico no stderr e encerra com código 2
    """
    if isinstance(error, ScenarioValidationError):
        for problem in error.errors:
            click.echo(f"erro: {problem}", err=True)
    else:
        click.echo(f"erro: {error}", err=True)
    raise click.exceptions.Exit(EXIT_INPUT_ERROR)


def with_scenario(f):
    """
    Decorator que carrega e valida o arquivo de cenário antes do comando.
    Aplica o --tolerance global ao orçamento de quadratura
    """
    @wraps(f)
    def decorated_function(options, scenario_path: str, *args, **kwargs):
        try:
            scenario = load_scenario(scenario_path)
            if options.tolerance is not None:
                scenario = replace(scenario, quadrature=scenario.quadrature.with_rel_tol(options.tolerance))
            return f(options, scenario, *args, **kwargs)
        except AbLabError as e:
            logger.error(f"Erro no comando {f.__name__}: {e}")
            fail(e)
        except ValueError as e:
            # valores fora do domínio numérico que escaparam da validação
            logger.error(f"Valor inválido no comando {f.__name__}: {e}")
            fail(e)

    return decorated_function


def require_experiment(kind: str):
    """
    Decorator que exige um tipo de experimento no cenário
    """
    def decorator(f):
        @wraps(f)
        def decorated_function(options, scenario, *args, **kwargs):
            if scenario.experiment.kind != kind:
                raise ExperimentError(
                    f"this command requires a {kind} experiment, the scenario has {scenario.experiment.kind}"
                )
            return f(options, scenario, *args, **kwargs)

        return decorated_function

    return decorator
