"""chordlab - exact chord diagram census and cut-and-join evolution"""
__version__ = "0.1.0"
