"""Back-transliteration
=====================

Katakana loanwords are phonetic renderings of (mostly) English words.
Going back is a search: a correspondence table proposes letter fragments
per kana unit, the fragments compile into a candidate lattice, and a
letter 4-gram model of English spelling rescores it through the same
n-best extractor the glosser uses.
"""

from gapfill import fixtures, lattice, translit

table = fixtures.translit_table()
letter_model = fixtures.letter_model()

# The table was trained on the bundled aligned pairs: per kana unit and
# word position, each observed English fragment with its probability.
for pos in (translit.INITIAL, translit.FINAL):
    row = table.rows.get(("ku", pos))
    if row:
        print("ku @ %-7s ->" % pos, sorted(row, key=row.get, reverse=True))

# Segmentation is greedy longest-match over the unit inventory.
words = translit.segment("kurinton", table)
print("segmented:", words)

# The candidate lattice already spells the answer somewhere; the letter
# model finds it.
lat = translit.candidate_lattice(words, table)
print("candidates:", lattice.path_count(lat))

for text in ("kurinton", "suteppaa mootaa"):
    print(text)
    for rendering, score in translit.back_transliterate(text, table, letter_model, n=3):
        print("   %-18s %.3f" % (rendering, score))

# Capitalization is presentation only; ranking happens on lowercase.
best = translit.back_transliterate("kurinton", table, letter_model, n=1)[0][0]
print("presented:", translit.capitalize_words(best))
