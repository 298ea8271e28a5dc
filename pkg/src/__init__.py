"""
ab-energy-lab: cálculo e verificação cruzada da explicação energética do
efeito Aharonov-Bohm
"""
