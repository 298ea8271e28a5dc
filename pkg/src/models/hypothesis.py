from enum import Enum


class Hypothesis(str, Enum):
    """
    Hipóteses concorrentes para a causa do efeito A-B
    """
    VECTOR_POTENTIAL = "vector_potential"
    SUPERIMPOSED_ENERGY = "superimposed_energy"


ALL_HYPOTHESES = (Hypothesis.VECTOR_POTENTIAL, Hypothesis.SUPERIMPOSED_ENERGY)
