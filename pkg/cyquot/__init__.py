"""
cyquot - класифікація горенштейнових факторів абелевих тривимірних многовидів
"""

__version__ = "0.1.0"
