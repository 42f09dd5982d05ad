"""N-gram language models
=======================

Counts are classified first (numerals to NUM, unknown capitalized words
to NAME), then smoothed: Simple Good-Turing discounts the counts and the
freed mass N_1/N flows through Katz backoff to unseen events, ending in
a uniform base distribution.  Nothing ever scores zero, and every
conditional distribution sums to one.
"""

from gapfill import ngram
from gapfill.fixtures import corpus_lines

corpus = corpus_lines("s8_corpus.txt")
table = ngram.train(corpus, order=2)
model = ngram.good_turing(table)

print("vocabulary size:", len(model.vocab))
print("unseen mass per order:", model.unseen_mass)

# Classification in action: 1994 is a number, an unknown capitalized
# token is a name, and a known capitalized token is just itself.
for token in ("1994", "Perkin", "February"):
    print("classify %-10s ->" % token, model.model_token(token))

# Conditional probabilities: seen bigrams keep most of their evidence,
# unseen ones borrow from the unigram level.
for w, h in (("company", "new"), ("firm", "new"), ("zzzz", "new")):
    print("log10 p(%s | %s) = %.4f" % (w, h, ngram.logprob(model, w, [h])))

# A whole-sentence score sums the padded conditionals.
good = "the new company plans to establish in february ."
bad = "february new the establish in to plans company ."
print("good order:", ngram.sentence_logprob(model, good.split()))
print("bad order: ", ngram.sentence_logprob(model, bad.split()))

# Every conditional distribution normalizes.
total = sum(10 ** model.logprob_model(w, ("new",)) for w in model.vocab)
print("sum over vocabulary given 'new':", total)
