"""Word-skipping robust parsing
============================

Newspaper text is grammatical; grammars are incomplete.  When the chart
parser fails on a full sentence, the skipper searches for the largest
grammatical subset: fewest skips first, most suspicious tokens first,
under two guardrails (never drop a single noun out of a noun sequence;
drop phrase-boundary markers only in matched pairs around material that
parses on its own).
"""

from gapfill import skipparse
from gapfill.fixtures import mixed_corpus, suspicion_table, toy_grammar

grammar = toy_grammar()
table = suspicion_table()

# Suspicion scores: tag bigrams that show up in unparsable sentences.
print("suspicion of N followed by an unknown token:",
      round(table.score(("N", skipparse.OOV_TAG)), 3))
print("suspicion of DET followed by N:", round(table.score(("DET", "N")), 3))

# A clean sentence parses outright.
res = skipparse.skip_parse("the dog barks".split(), grammar, table)
print("clean sentence skipped:", [res.kept, res.skipped])

# A stray token gets dropped and the rest parses fully.
toks = "the dog ! barks".split()
res = skipparse.skip_parse(toks, grammar, table)
print("skipped:", [toks[i] for i in res.skipped], "tree:", res.tree)

# The noun-sequence guardrail: a lone noun never falls out of a run.
toks = "dog cat bird barks".split()
res = skipparse.skip_parse(toks, grammar, table, skipparse.SkipBudget(max_skips=1))
print("one-skip fix for a 3-noun run allowed:", res.ok)

# On a mixed corpus the full-parse rate strictly improves.
sentences = mixed_corpus()
plain = sum(skipparse.chart_parse(s.split(), grammar).ok for s in sentences)
skipped = sum(skipparse.skip_parse(s.split(), grammar, table).ok for s in sentences)
print("full parses without skipping: %d/%d" % (plain, len(sentences)))
print("full parses with skipping:    %d/%d" % (skipped, len(sentences)))
