from typing import List


class AbLabError(Exception):
    """
    Erro base de todas as falhas de domínio do projeto
    """


class ScenarioError(AbLabError):
    """
    Arquivo de cenário ilegível ou com estrutura inválida
    """


class ScenarioValidationError(ScenarioError):
    """
    Cenário que viola um ou mais invariantes; `errors` lista todos eles,
    cada um com o caminho do campo
    """

    def __init__(self, errors: List[str]):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


class GeometryError(AbLabError):
    """
    Ponto de avaliação dentro (ou perto demais) da região Ω, ou ponto singular
    """


class ConvergenceError(AbLabError):
    pass


class ExperimentError(AbLabError):
    """
    Tipo de experimento errado ou dados do experimento ausentes
    """
