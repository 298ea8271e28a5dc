#!/usr/bin/env python3
"""
Arquivo de entrada da linha de comando
"""
import os
import sys

# Adicionar o diretório atual ao path
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from src.main import cli

if __name__ == '__main__':
    cli()
