"""N-best extraction
==================

The extractor runs a beam search over the lattice, merging hypotheses
that share a state and a language-model context.  With the beam
disabled the result provably equals brute-force enumeration; the beam
is a speed knob for big lattices.  A random walk provides the baseline
that shows what the statistics buy.
"""

from gapfill import extract, fixtures, lattice, ngram

lat = fixtures.demo_lattice("s8")
model = fixtures.demo_model("s8")

print("lattice paths:", lattice.path_count(lat))

# Random baseline vs statistical extraction, the showcase comparison.
rand = extract.random_path(lat, fixtures.S8_RANDOM_SEED)
rand_score = ngram.sentence_logprob(model, rand.spelled().split()) + rand.weight
print("random:  %.3f  %s" % (rand_score, rand.spelled()))

for sentence, score in extract.nbest(lat, model, n=5).ranked:
    print("n-best:  %.3f  %s" % (score, sentence))

# Exactness: the decoder agrees with full enumeration.
oracle = extract.brute_force_nbest(lat, model, n=5)
print("matches brute force:", extract.nbest(lat, model, 5).ranked == oracle.ranked)

# Narrowing the beam can only lose candidates, never gain score.
for beam in (None, 16, 4, 1):
    top = extract.nbest(lat, model, 1, beam=beam).top()
    print("beam %-5s top-1 %.3f  %s" % (beam, top[1], top[0]))
