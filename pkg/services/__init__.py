"""
Services package: cellular automaton core, language analysis, periodic
dynamics, finite factorizations, the eraser, marker and coding
constructions, and the membership verdict engine.
"""
