"""Exact engine, solver and reduction compilers for pursuit games.

Subpackages cover: labelled graphs with protected/unprotected edges
(`graphs`), quantified boolean formulas and their brute-force truth oracle
(`qbf`), the game rules (`engine`), exact solving by backward induction plus
an independent minimax oracle (`solver`), evader-friendly graph
constructions (`evader`), instance compilers between game variants and from
formulas (`reductions`), scripted and baseline agents (`strategies`), and a
command-line front end (`cli`).
"""

__version__ = "0.1.0"
