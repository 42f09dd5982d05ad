"""Gloss structures
=================

A gloss encodes every English rendering a bilingual dictionary offers
for a source constituent: OP1..OPk features hold the sequential parts,
*OR* holds the alternatives, and the markers "*empty*" and "+plural"
postpone article and number decisions.  Compilation turns the feature
structure into a word lattice; morphology then realizes the markers.
"""

from gapfill import gloss, lattice
from gapfill.fixtures import read_text

text = '''
((GLOSS
  ((OP1 (*OR* "a" "an" "the" "*empty*"))
   (OP2 (*OR* "plan" "objective"))
   (OP3 (*OR* "+plural" "*empty*")))))
'''

g = gloss.parse_gloss(text)
lat = gloss.compile_gloss(g)
print("denoted sequences:", gloss.denoted_count(g))

# Morphology rewrites each word feeding a +plural transition into its
# plural form and drops the marker; *empty* stays as epsilon.
realized = gloss.apply_morphology(lat)
for p in lattice.enumerate_paths(realized, 100):
    print("  ", p.spelled())

# The bundled showcase gloss packs three nested noun phrases with every
# article, sense, and number choice left open: 2^16 paths from a page of
# structure.  This is why the extractor never enumerates.
big = gloss.parse_gloss(read_text("full.gloss"))
print("showcase gloss paths:", lattice.path_count(gloss.compile_gloss(big)))
