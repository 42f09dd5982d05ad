"""Statistical gap fillers for a knowledge-based MT pipeline.

Subpackages cover the word-lattice core, disjunctive gloss compilation,
Good-Turing n-gram models, n-best lattice extraction, preference-semantic
ranking of interlingua expressions, katakana back-transliteration,
word-skipping robust parsing, and decision-tree article insertion.
"""

__version__ = "0.1.0"
