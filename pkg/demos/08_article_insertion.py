"""Article insertion
=================

Languages without articles leave English generation guessing between
"a", "an", "the", and nothing.  Treating the choice as postediting makes
it a supervised problem on monolingual text: strip the articles out of
ordinary English, remember where they were, and train a decision tree
over features of the stripped text (including a long-distance one: has
this head noun appeared earlier in the document?).
"""

from gapfill import postedit
from gapfill.fixtures import article_corpus, noun_lexicon

lexicon = noun_lexicon()
corpus = article_corpus()

stripped, instances = postedit.prepare(corpus, lexicon)
print("training instances:", len(instances))
print("example:", instances[0].label, instances[0].features)

tree = postedit.train_tree(instances)
print("training accuracy:", round(postedit.evaluate(tree, instances), 3))

# Run on article-free text, the way generator output arrives.
for line in ("dog saw cat .", "dogs bark .", "man bought apple ."):
    out = postedit.insert_articles(line.split(), tree, lexicon)
    print("%-22s ->  %s" % (line, " ".join(out)))

# The same features drive held-out generalization: on a corpus whose
# articles follow a deterministic rule the tree recovers the rule (the
# test suite holds this at 95%+ accuracy).
